//! Enumeration budgets.

/// Default cap on the number of objects any single enumeration may touch.
pub const DEFAULT_BUDGET: u64 = 1 << 16;

/// Environment override for [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "WILDRAM_BUDGET";

/// The active budget: `WILDRAM_BUDGET` when set to a positive integer,
/// otherwise [`DEFAULT_BUDGET`].
pub fn budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .filter(|&b| b > 0)
        .unwrap_or(DEFAULT_BUDGET)
}

/// `base^exp` if it does not exceed `budget`.
pub fn within(base: u64, exp: u64, budget: u64) -> Option<u64> {
    let e = u32::try_from(exp).ok()?;
    base.checked_pow(e).filter(|&v| v <= budget)
}
