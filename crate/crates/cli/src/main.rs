//! `wildram`: additive-polynomial dynamics, monodromy towers and cyclotomic
//! lifts from the command line.
//!
//! Exit codes: 0 success, 1 mathematical negative, 2 input error, 3 budget
//! exceeded.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wildram_core::addpoly::AddError;
use wildram_core::cyclotomic::CycError;
use wildram_core::dynsys::DynError;
use wildram_core::ff::FieldError;
use wildram_core::gmlift::GmError;
use wildram_core::moduli::ModError;
use wildram_core::monodromy::MonoError;

mod commands;
mod input;

pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "wildram", version, about = "Additive polynomial dynamics, monodromy and cyclotomic lifts")]
struct Cli {
    /// Emit a machine-readable JSON report instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for census and parameter grids (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

/// Additive polynomial argument: a JSON file, inline a_0,a_1,... over
/// F_{p^k}, or random:M.
#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: Option<u64>,
    /// Degree of the coefficient field over F_p.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Conjugacy classes of monic additive polynomials of degree p^m over F_q.
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: u64,
    },
    /// Conjugate Σ a_i z^{p^i} + c into monic additive form.
    NormalForm {
        /// JSON file or inline coefficients c_0,c_1,... (constant first).
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Decide whether two additive polynomials are affinely conjugate.
    Conjugate {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Post-critical orbit and mapping scheme of a rational map over F_q.
    Pco {
        /// JSON map file.
        #[arg(long, conflicts_with = "num")]
        map: Option<std::path::PathBuf>,
        /// Inline numerator coefficients, constant first.
        #[arg(long, allow_hyphen_values = true)]
        num: Option<String>,
        /// Inline denominator coefficients, constant first.
        #[arg(long, allow_hyphen_values = true, requires = "num")]
        den: Option<String>,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 64)]
        steps: usize,
        /// Emit the scheme as a DOT digraph.
        #[arg(long, conflicts_with = "json")]
        dot: bool,
    },
    /// Monodromy actions along the tower of iterates of an additive f.
    Monodromy {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Characteristic-zero obstruction arithmetic at degree p^m, or the full
    /// pipeline for an additive f.
    Obstruction {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, conflicts_with = "f")]
        m: Option<u64>,
        /// Run the pipeline on this additive polynomial.
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        /// Coefficient field degree for an inline f.
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Check the cyclotomic identities at every prime up to --max-p, or at --p.
    Identities {
        #[arg(long, conflicts_with = "max_p")]
        p: Option<u64>,
        #[arg(long, default_value_t = 13)]
        max_p: u64,
    },
    /// The lift ((λz + s)^p - s^p)/λ^p with s^{p-1} = a.
    Lift {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        /// Reduce modulo λ with s ↦ s̄.
        #[arg(long)]
        reduce: bool,
        /// s̄ as coordinates c_0,c_1,...; every valid choice in F_{p^k} when absent.
        #[arg(long, allow_hyphen_values = true, requires = "reduce")]
        sbar: Option<String>,
        /// Field degree for s̄.
        #[arg(long)]
        k: Option<usize>,
        /// Critical-orbit search with this many steps.
        #[arg(long)]
        orbit: Option<usize>,
        /// PCF locus polynomial for f^m(c) = f^{m+n}(c).
        #[arg(long, num_args = 2, value_names = ["M", "N"])]
        locus: Option<Vec<usize>>,
        #[arg(long)]
        scaling_check: bool,
        /// Emit the critical mapping scheme as DOT.
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        /// Orbit steps drawn by --dot.
        #[arg(long, default_value_t = 4)]
        steps: usize,
    },
    /// Critical-orbit certificates for s^{p-1} = a over a grid of a values.
    Orbit {
        #[arg(long)]
        p: u64,
        /// One or more values a_1,a_2,...
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value_t = 32)]
        steps: usize,
    },
    /// f^m(c) - f^{m+n}(c) as a polynomial in s.
    Locus {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

/// A failed run: message and exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    pub fn input(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, msg: msg.into() }
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_BUDGET, msg: msg.into() }
    }
}

macro_rules! failure_from {
    ($t:ty $(; $budget:pat)?) => {
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                match e {
                    $($budget => Failure::budget(e.to_string()),)?
                    _ => Failure::input(e.to_string()),
                }
            }
        }
    };
}

failure_from!(FieldError);
failure_from!(DynError);
failure_from!(CycError);
failure_from!(AddError; AddError::BudgetExceeded { .. });
failure_from!(ModError; ModError::BudgetExceeded { .. } | ModError::Add(AddError::BudgetExceeded { .. }));
failure_from!(MonoError; MonoError::Add(AddError::BudgetExceeded { .. }));
failure_from!(GmError; GmError::BudgetExceeded { .. });

/// What a command prints, and whether its answer is negative.
pub struct Report {
    pub text: String,
    pub negative: bool,
}

impl Report {
    pub fn json(v: &serde_json::Value, negative: bool) -> Self {
        let mut text = serde_json::to_string_pretty(v).expect("serializable");
        text.push('\n');
        Report { text, negative }
    }
}

fn run(cli: Cli) -> Result<Report, Failure> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(Failure::input("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Failure::input(e.to_string()))?;
    }
    let json = cli.json;
    let seed = cli.seed;
    match cli.command {
        Command::Census { p, m, q } => commands::census(p, m, q, json),
        Command::NormalForm { poly, field } => commands::normal_form(&poly, &field, json),
        Command::Conjugate { f, g, field } => commands::conjugate(&f, &g, &field, seed, json),
        Command::Pco { map, num, den, field, steps, dot } => {
            let f = match (&map, &num) {
                (Some(path), None) => input::map_file(path)?,
                (None, Some(n)) => input::inline_map(n, den.as_deref(), field.p, field.k)?,
                _ => return Err(Failure::input("pco needs --map FILE or --num COEFFS")),
            };
            commands::pco(&f, steps, dot, json)
        }
        Command::Monodromy { f, field, depth } => commands::monodromy(&f, &field, depth, seed, json),
        Command::Obstruction { p, m, f, k } => match (f, p, m) {
            (Some(f), _, _) => commands::pipeline(&f, &FieldArgs { p, k }, seed, json),
            (None, Some(p), Some(m)) => commands::obstruction(p, m, json),
            _ => Err(Failure::input("obstruction needs --p and --m, or --f")),
        },
        Command::Identities { p, max_p } => commands::identities(p, max_p, json),
        Command::Lift { p, a, reduce, sbar, k, orbit, locus, scaling_check, dot, steps } => {
            let opts = commands::LiftOptions {
                reduce,
                sbar,
                k,
                orbit,
                locus: locus.map(|v| (v[0], v[1])),
                scaling_check,
                dot,
                steps,
            };
            commands::lift(p, a, &opts, json)
        }
        Command::Orbit { p, a, steps } => commands::orbit(p, &a, steps, json),
        Command::Locus { p, m, n } => commands::locus(p, m, n, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(r) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(r.text.as_bytes());
            let _ = out.flush();
            ExitCode::from(if r.negative { EXIT_NEGATIVE } else { 0 })
        }
        Err(f) => {
            eprintln!("wildram: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
