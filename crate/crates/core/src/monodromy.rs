//! Geometric monodromy of additive polynomials as translation actions on
//! root spaces, the tower of levels, and the characteristic-zero
//! obstruction arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::addpoly::{self, AddError, AdditivePoly, RootSpace};
use crate::budget;
use crate::dynsys::{DynError, ProjPoint, RationalMap};
use crate::ff::{self, fp, FieldElement};
use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("map is not a polynomial")]
    NotPolynomial,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Add(#[from] AddError),
    #[error(transparent)]
    Dyn(#[from] DynError),
}

impl From<ff::FieldError> for MonoError {
    fn from(e: ff::FieldError) -> Self {
        MonoError::Add(AddError::Field(e))
    }
}

fn ser_big<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// A finite group given by the full list of its elements as permutations
/// of `0..points`, with indices of a generating subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermAction {
    pub points: usize,
    pub elements: Vec<Vec<usize>>,
    pub generators: Vec<usize>,
}

impl PermAction {
    pub fn new(points: usize, elements: Vec<Vec<usize>>) -> Result<Self, MonoError> {
        for g in &elements {
            let mut seen = vec![false; points];
            if g.len() != points || g.iter().any(|&i| i >= points || std::mem::replace(&mut seen[i], true)) {
                return Err(MonoError::BadParameter("not a permutation".into()));
            }
        }
        let generators = (0..elements.len()).collect();
        Ok(PermAction { points, elements, generators })
    }

    /// All permutations of `0..n`.
    pub fn symmetric(n: usize) -> Self {
        fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
            if prefix.len() == used.len() {
                out.push(prefix.clone());
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    prefix.push(i);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        let generators = (0..out.len()).collect();
        PermAction { points: n, elements: out, generators }
    }

    pub fn trivial(points: usize) -> Self {
        PermAction { points, elements: vec![(0..points).collect()], generators: vec![0] }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_transitive(&self) -> bool {
        if self.points == 0 {
            return true;
        }
        let mut orbit: Vec<usize> = self.elements.iter().map(|g| g[0]).collect();
        orbit.sort();
        orbit.dedup();
        orbit.len() == self.points
    }

    /// |Stab(x)| for every point x.
    pub fn stabilizer_orders(&self) -> Vec<usize> {
        (0..self.points).map(|x| self.elements.iter().filter(|g| g[x] == x).count()).collect()
    }

    pub fn is_free(&self) -> bool {
        self.stabilizer_orders().iter().all(|&s| s == 1)
    }

    /// Whether the generators commute pairwise.
    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| {
            (i + 1..g.len()).all(|j| {
                let (a, b) = (&self.elements[g[i]], &self.elements[g[j]]);
                compose(a, b) == compose(b, a)
            })
        })
    }

    pub fn element_orders(&self) -> Vec<u64> {
        self.elements.iter().map(|g| perm_order(g)).collect()
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.element_orders().into_iter().fold(1, |a, b| a.lcm(&b))
    }

    /// Primary invariants (prime powers, ascending) of an abelian group,
    /// read off from the counts of elements killed by each q^k.
    pub fn abelian_invariants(&self) -> Option<Vec<u64>> {
        if !self.is_abelian() {
            return None;
        }
        let orders = self.element_orders();
        let mut n = self.order() as u64;
        let mut out = Vec::new();
        let mut q = 2;
        while n > 1 {
            if n.is_multiple_of(q) {
                while n.is_multiple_of(q) {
                    n /= q;
                }
                // c_k = #{g : g^{q^k} = 1} = q^{Σ min(k, e_i)}
                let mut logs = vec![0u32];
                let mut qk = 1u64;
                loop {
                    qk *= q;
                    let c = orders.iter().filter(|&&o| qk.is_multiple_of(o)).count() as u64;
                    logs.push(ilog(c, q));
                    if logs[logs.len() - 1] == logs[logs.len() - 2] {
                        break;
                    }
                }
                // number of cyclic factors of order ≥ q^k is logs[k] - logs[k-1]
                let at_least: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
                for k in 1..at_least.len() {
                    let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
                    for _ in 0..exactly {
                        out.push(q.pow(k as u32));
                    }
                }
            }
            q += 1;
        }
        out.sort();
        Some(out)
    }
}

fn ilog(mut c: u64, q: u64) -> u32 {
    let mut e = 0;
    while c > 1 {
        c /= q;
        e += 1;
    }
    e
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn perm_order(g: &[usize]) -> u64 {
    let mut seen = vec![false; g.len()];
    let mut l = 1u64;
    for s in 0..g.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0u64;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = g[i];
            len += 1;
        }
        l = l.lcm(&len);
    }
    l
}

/// Largest fiber for which the translation action is materialized.
pub const ACTION_LIMIT: usize = 4096;

/// Result of checking a level's action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelCheck {
    pub transitive: bool,
    pub free: bool,
    pub abelian: bool,
    pub exponent: u64,
    pub abelian_invariants: Vec<u64>,
}

/// Z_n acting on the fiber f^{-n}(t), modelled as the torsor θ_n + Z_n with
/// θ_n labelled by 0; α acts by x ↦ x + α.
#[derive(Debug, Clone)]
pub struct MonodromyLevel {
    pub space: RootSpace,
    pub action: PermAction,
    pub check: LevelCheck,
}

impl MonodromyLevel {
    pub fn f(&self) -> &AdditivePoly {
        &self.space.f
    }

    pub fn n(&self) -> usize {
        self.space.n
    }

    pub fn group_order(&self) -> usize {
        self.action.order()
    }

    pub fn fiber_size(&self) -> usize {
        self.action.points
    }

    /// Fiber labels θ_n + α, in the order used by the action.
    pub fn fiber_labels(&self) -> Vec<String> {
        let n = self.n();
        self.space.all_roots.iter().map(|a| if a.is_zero() { format!("θ_{n}") } else { format!("θ_{n} + ({a})") }).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "f": self.f().to_string(),
            "p": self.f().p(),
            "m": self.f().m(),
            "n": self.n(),
            "ambient": self.space.ambient.descriptor(),
            "group_order": self.group_order(),
            "fiber_size": self.fiber_size(),
            "basis": self.space.basis.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            "transitive": self.check.transitive,
            "free": self.check.free,
            "abelian": self.check.abelian,
            "exponent": self.check.exponent,
            "abelian_invariants": self.check.abelian_invariants,
        })
    }
}

fn translation_action(space: &RootSpace) -> Result<PermAction, MonoError> {
    let roots = &space.all_roots;
    if roots.len() > ACTION_LIMIT {
        return Err(AddError::BudgetExceeded { needed: format!("an action on {} points", roots.len()), budget: ACTION_LIMIT as u64 }.into());
    }
    let idx = |x: &FieldElement| space.index_of(x).expect("root space closed under addition");
    let elements: Vec<Vec<usize>> = roots.iter().map(|a| roots.iter().map(|x| idx(&x.add(a))).collect()).collect();
    let generators = space.basis.iter().map(idx).collect();
    Ok(PermAction { points: roots.len(), elements, generators })
}

fn level_in(f: &AdditivePoly, n: usize, ambient: &ff::FiniteField, budget: u64) -> Result<MonodromyLevel, MonoError> {
    let space = addpoly::root_space_in(f, n, ambient, budget)?;
    let action = translation_action(&space)?;
    let check = LevelCheck {
        transitive: action.is_transitive(),
        free: action.is_free(),
        abelian: action.is_abelian(),
        exponent: action.exponent(),
        abelian_invariants: action.abelian_invariants().unwrap_or_default(),
    };
    Ok(MonodromyLevel { space, action, check })
}

/// The level-n monodromy action of f inside the splitting field of f^n.
pub fn monodromy_level(f: &AdditivePoly, n: usize) -> Result<MonodromyLevel, MonoError> {
    monodromy_level_with_budget(f, n, budget::budget())
}

pub fn monodromy_level_with_budget(f: &AdditivePoly, n: usize, budget: u64) -> Result<MonodromyLevel, MonoError> {
    if n == 0 {
        return Err(MonoError::BadParameter("level must be at least 1".into()));
    }
    let space = addpoly::root_space_with_budget(f, n, budget)?;
    level_in(f, n, &space.ambient, budget)
}

/// α ↦ f(α) from level `source` to level `source - 1`.
#[derive(Debug, Clone)]
pub struct TowerProjection {
    pub source: usize,
    pub target: usize,
    /// images[i] indexes the target root list.
    pub images: Vec<usize>,
    pub surjective: bool,
    pub kernel: Vec<FieldElement>,
    pub equivariant: bool,
}

impl TowerProjection {
    pub fn kernel_size(&self) -> usize {
        self.kernel.len()
    }
}

/// Levels 1..=depth in one ambient field, with the projections between
/// consecutive levels.
#[derive(Debug, Clone)]
pub struct Tower {
    pub levels: Vec<MonodromyLevel>,
    pub projections: Vec<TowerProjection>,
}

impl Tower {
    pub fn to_json(&self) -> Value {
        json!({
            "levels": self.levels.iter().map(|l| l.to_json()).collect::<Vec<_>>(),
            "projections": self.projections.iter().map(|t| json!({
                "source": t.source,
                "target": t.target,
                "surjective": t.surjective,
                "equivariant": t.equivariant,
                "kernel": t.kernel.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn tower(f: &AdditivePoly, depth: usize) -> Result<Tower, MonoError> {
    tower_with_budget(f, depth, budget::budget())
}

pub fn tower_with_budget(f: &AdditivePoly, depth: usize, budget: u64) -> Result<Tower, MonoError> {
    if depth == 0 {
        return Err(MonoError::BadParameter("depth must be at least 1".into()));
    }
    if budget::within(f.p(), (f.m() * depth) as u64, budget).is_none() {
        return Err(AddError::BudgetExceeded { needed: format!("{}^{}", f.p(), f.m() * depth), budget }.into());
    }
    let ambient = ff::make_field(f.p(), addpoly::splitting_field_degree(f, depth)?, None)?;
    let levels: Vec<MonodromyLevel> = (1..=depth).map(|n| level_in(f, n, &ambient, budget)).collect::<Result<_, _>>()?;
    let fk = f.embedded(&ambient)?;
    let mut projections = Vec::new();
    for w in levels.windows(2) {
        let (lower, upper) = (&w[0].space, &w[1].space);
        let images: Vec<usize> = upper
            .all_roots
            .iter()
            .map(|a| lower.index_of(&fk.eval(a)).ok_or_else(|| MonoError::BadParameter("projection leaves the lower level".into())))
            .collect::<Result<_, _>>()?;
        let mut hit = vec![false; lower.size()];
        for &i in &images {
            hit[i] = true;
        }
        let zero = lower.index_of(&ambient.zero()).expect("0 is a root");
        let kernel = upper.all_roots.iter().zip(&images).filter(|(_, &i)| i == zero).map(|(a, _)| a.clone()).collect();
        let up = &upper.all_roots;
        let equivariant = (0..up.len()).all(|x| {
            (0..up.len()).all(|a| {
                let s = upper.index_of(&up[x].add(&up[a])).expect("closed under addition");
                lower.all_roots[images[s]] == lower.all_roots[images[x]].add(&lower.all_roots[images[a]])
            })
        });
        projections.push(TowerProjection {
            source: upper.n,
            target: lower.n,
            images,
            surjective: hit.iter().all(|&h| h),
            kernel,
            equivariant,
        });
    }
    Ok(Tower { levels, projections })
}

/// Arithmetic of the characteristic-zero obstruction at degree p^m.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub p: u64,
    pub m: u64,
    /// #C = 2(p^m - 1)/(p - 1).
    #[serde(serialize_with = "ser_big")]
    pub crit_count: BigUint,
    /// p^{m-1}.
    #[serde(serialize_with = "ser_big")]
    pub modulus: BigUint,
    pub divides: bool,
    pub obstructed: bool,
    /// When this degree is inconclusive: the least n with nm ≥ 3.
    pub suggested_n: Option<u64>,
    pub iterate: Option<Box<ObstructionReport>>,
    pub exponent_note: String,
    pub conclusion: String,
}

/// Whether a free action of an elementary abelian group of order p^m on a
/// degree-p^m fiber is compatible with #C critical points, given that each
/// inertia cycle type forces p^{m-1} | #C.
pub fn char0_obstruction(p: u64, m: u64) -> Result<ObstructionReport, MonoError> {
    if !fp::is_prime(p) {
        return Err(MonoError::NotPrime(p));
    }
    if m == 0 {
        return Err(MonoError::BadParameter("m must be at least 1".into()));
    }
    let pb = BigUint::from(p);
    let pm = pb.pow(m as u32);
    let crit_count = (&pm - BigUint::one()) * 2u32 / (&pb - BigUint::one());
    let modulus = pb.pow(m as u32 - 1);
    let divides = (&crit_count % &modulus).is_zero();
    let obstructed = !divides;
    let (suggested_n, iterate) = if obstructed {
        (None, None)
    } else {
        // only m = 1 and (2, 2) land here
        let n = 3u64.div_ceil(m).max(2);
        (Some(n), Some(Box::new(char0_obstruction(p, n * m)?)))
    };
    let exponent_note = format!(
        "every element of an elementary abelian {p}-group has order dividing {p}, while a degree {pm} polynomial in characteristic 0 has cyclic inertia of order {pm} at infinity"
    );
    let conclusion = if obstructed {
        format!("{modulus} does not divide {crit_count}: no free elementary abelian action in characteristic 0 at degree {pm}")
    } else {
        format!("{modulus} divides {crit_count}: inconclusive at degree {pm}, pass to the iterate n = {}", suggested_n.unwrap())
    };
    Ok(ObstructionReport { p, m, crit_count, modulus, divides, obstructed, suggested_n, iterate, exponent_note, conclusion })
}

/// Characteristic-p freeness at a level with nℓ ≥ 3 together with the
/// characteristic-0 arithmetic at degree p^{nℓ}.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub f: String,
    pub p: u64,
    pub ell: usize,
    pub n: usize,
    pub group_order: usize,
    pub fiber_size: usize,
    pub transitive: bool,
    pub free: bool,
    pub abelian_invariants: Vec<u64>,
    pub arithmetic: ObstructionReport,
    /// Free in characteristic p and obstructed in characteristic 0.
    pub no_lift: bool,
}

pub fn obstruction_pipeline(f: &AdditivePoly) -> Result<PipelineReport, MonoError> {
    let ell = f.m();
    if ell == 0 {
        return Err(MonoError::BadParameter("f must have degree at least p".into()));
    }
    let n = 3usize.div_ceil(ell);
    let level = monodromy_level(f, n)?;
    let arithmetic = char0_obstruction(f.p(), (n * ell) as u64)?;
    Ok(PipelineReport {
        f: f.to_string(),
        p: f.p(),
        ell,
        n,
        group_order: level.group_order(),
        fiber_size: level.fiber_size(),
        transitive: level.check.transitive,
        free: level.check.free,
        abelian_invariants: level.check.abelian_invariants.clone(),
        no_lift: level.check.free && level.check.transitive && arithmetic.obstructed,
        arithmetic,
    })
}

/// log_p of the order of the n-fold iterated wreath product of Z/pZ:
/// 1 + p + ... + p^{n-1}.
pub fn wreath_log_order(p: u64, n: u64) -> BigUint {
    let pb = BigUint::from(p);
    (0..n).map(|i| pb.pow(i as u32)).sum()
}

/// log_p of #Mon(f^n) for an additive f of degree p^m.
pub fn flat_log_order(m: u64, n: u64) -> u64 {
    m * n
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OdometerReport {
    pub degree: usize,
    /// ram_profile(f^n, ∞) for n = 1..=depth.
    pub profiles: Vec<Vec<usize>>,
    pub holds: bool,
}

/// Checks that ∞ is totally ramified for every iterate up to `depth`.
pub fn odometer_check<F: Field>(f: &RationalMap<F>, depth: usize) -> Result<OdometerReport, MonoError> {
    if !f.is_polynomial() {
        return Err(MonoError::NotPolynomial);
    }
    let d = f.degree();
    if d < 2 {
        return Err(MonoError::BadParameter("degree must be at least 2".into()));
    }
    let mut profiles = Vec::new();
    let mut g = f.clone();
    let mut holds = true;
    for n in 1..=depth {
        if n > 1 {
            g = f.compose(&g)?;
        }
        let prof = g.ram_profile(&ProjPoint::Infinity);
        holds &= prof == vec![d.pow(n as u32)];
        profiles.push(prof);
    }
    Ok(OdometerReport { degree: d, profiles, holds })
}

/// Stabilizer sizes collected as a multiset {size: count}.
pub fn stabilizer_histogram(action: &PermAction) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for s in action.stabilizer_orders() {
        *h.entry(s).or_default() += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use crate::field::Rationals;
    use crate::poly::Poly;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn add(p: u64, k: usize, ints: &[i64]) -> AdditivePoly {
        AdditivePoly::from_ints(&make_field(p, k, None).unwrap(), ints).unwrap()
    }

    #[test]
    fn level_examples() {
        let l = monodromy_level(&add(2, 1, &[1, 1]), 2).unwrap();
        assert_eq!((l.group_order(), l.fiber_size()), (4, 4));
        assert_eq!(l.check.abelian_invariants, vec![2, 2]);
        assert!(l.check.transitive && l.check.free);

        let l = monodromy_level(&add(3, 1, &[-1, 1]), 1).unwrap();
        assert_eq!(l.group_order(), 3);
        assert!(l.check.transitive && l.check.free);
        assert_eq!(l.fiber_labels()[0], "θ_1");

        let l = monodromy_level(&add(3, 1, &[1, 0, 1]), 1).unwrap();
        assert_eq!(l.group_order(), 9);
        assert_eq!(l.check.abelian_invariants, vec![3, 3]);
        assert_eq!(l.check.exponent, 3);
    }

    #[test]
    fn tower_examples() {
        let t = tower(&add(2, 1, &[1, 1]), 2).unwrap();
        let pr = &t.projections[0];
        assert!(pr.surjective && pr.equivariant);
        let k = &t.levels[0].space.ambient;
        assert_eq!(pr.kernel, vec![k.zero(), k.one()]);

        let t = tower(&add(3, 1, &[-1, 1]), 2).unwrap();
        let k = &t.levels[0].space.ambient;
        let mut want = vec![k.zero(), k.one(), k.from_int(-1)];
        want.sort();
        assert_eq!(t.projections[0].kernel, want);

        let t = tower(&add(5, 1, &[2, 1]), 1).unwrap();
        assert!(t.projections.is_empty());
    }

    #[test]
    fn freeness_examples() {
        let s3 = PermAction::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_free());
        assert_eq!(s3.stabilizer_orders(), vec![2, 2, 2]);
        assert!(s3.abelian_invariants().is_none());
        assert!(PermAction::trivial(1).is_free());
        assert!(!PermAction::trivial(3).is_transitive());
        // Z/4 acting regularly
        let z4 = PermAction::new(4, (0..4).map(|a| (0..4).map(|x| (x + a) % 4).collect()).collect()).unwrap();
        assert_eq!(z4.abelian_invariants(), Some(vec![4]));
        assert!(PermAction::new(2, vec![vec![0, 0]]).is_err());
    }

    #[test]
    fn obstruction_examples() {
        let r = char0_obstruction(2, 3).unwrap();
        assert_eq!((r.crit_count.clone(), r.modulus.clone()), (14u32.into(), 4u32.into()));
        assert!(r.obstructed);
        let r = char0_obstruction(2, 2).unwrap();
        assert_eq!(r.crit_count, 6u32.into());
        assert!(!r.obstructed);
        assert_eq!(r.suggested_n, Some(2));
        assert!(r.iterate.unwrap().obstructed);
        let r = char0_obstruction(3, 2).unwrap();
        assert_eq!(r.crit_count, 8u32.into());
        assert!(r.obstructed);
        assert_eq!(char0_obstruction(2, 1).unwrap().suggested_n, Some(3));
        assert_eq!(char0_obstruction(4, 2).unwrap_err(), MonoError::NotPrime(4));
    }

    #[test]
    fn divisibility_table() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for m in 2..=8 {
                let r = char0_obstruction(p, m).unwrap();
                assert_eq!(r.divides, (p, m) == (2, 2), "({p}, {m})");
            }
        }
    }

    #[test]
    fn pipeline_for_z2_plus_z() {
        let r = obstruction_pipeline(&add(2, 1, &[1, 1])).unwrap();
        assert_eq!((r.n, r.group_order, r.fiber_size), (3, 8, 8));
        assert!(r.free && r.no_lift);
        assert_eq!(r.arithmetic.crit_count, 14u32.into());
    }

    #[test]
    fn wreath_orders() {
        assert_eq!(wreath_log_order(3, 2), 4u32.into());
        assert_eq!(wreath_log_order(2, 1), 1u32.into());
        assert_eq!(wreath_log_order(5, 3), 31u32.into());
        for p in [2u64, 3, 5, 7] {
            for n in 2..=5 {
                assert!(wreath_log_order(p, n) > BigUint::from(flat_log_order(1, n)), "{p} {n}");
            }
        }
        // the gap is specific to degree p: with m = 2 the flat tower can be larger
        assert!(wreath_log_order(2, 2) < BigUint::from(flat_log_order(2, 2)));
    }

    #[test]
    fn odometer_examples() {
        let q = |c: &[i64]| RationalMap::polynomial(Poly::from_ints(Rationals, c)).unwrap();
        let r = odometer_check(&q(&[1, 0, 1]), 3).unwrap();
        assert_eq!(r.profiles, vec![vec![2], vec![4], vec![8]]);
        assert!(r.holds);
        assert_eq!(odometer_check(&q(&[0, 0, 0, 1]), 2).unwrap().profiles, vec![vec![3], vec![9]]);
        assert_eq!(odometer_check(&q(&[0, -1, 1]), 2).unwrap().profiles, vec![vec![2], vec![4]]);
        let rat = RationalMap::new(Poly::from_ints(Rationals, &[1, 0, 1]), Poly::from_ints(Rationals, &[0, 1])).unwrap();
        assert_eq!(odometer_check(&rat, 2).unwrap_err(), MonoError::NotPolynomial);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn random_levels_are_regular(seed in any::<u64>(), pick in 0usize..4) {
            let (p, k, m, n) = [(2, 1, 1, 3), (2, 2, 2, 1), (3, 1, 1, 2), (5, 1, 1, 1)][pick];
            let field = make_field(p, k, None).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = AdditivePoly::random_separable(&field, m, &mut rng);
            let t = tower(&f, n).unwrap();
            let top = t.levels.last().unwrap();
            prop_assert_eq!(top.group_order(), (p as usize).pow((m * n) as u32));
            prop_assert!(top.check.free && top.check.transitive && top.check.abelian);
            prop_assert_eq!(top.check.abelian_invariants.clone(), vec![p; m * n]);
            for pr in &t.projections {
                prop_assert!(pr.surjective && pr.equivariant);
                prop_assert_eq!(pr.kernel_size(), (p as usize).pow(m as u32));
            }
        }
    }
}
