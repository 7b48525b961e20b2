//! The degree-p characteristic-zero lift
//!
//!   f̃_s(z) = ((λz + s)^p - s^p)/λ^p,   λ = ζ_p - 1,
//!
//! its reduction mod λ, critical data, orbit certificates, PCF locus
//! polynomials and the scaling identity.
//!
//! Escape rule: if v(λz) < v(s), the term (λz)^p strictly dominates every
//! other term of (λz + s)^p - s^p, so v(f̃(z)) = p·v(λz) - p = p·v(z). The
//! condition v(z) < min(0, v(s) - 1) implies v(λz) < v(s) and is preserved
//! by z ↦ f̃(z), so once met the valuations go v, pv, p²v, ... forever.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cyclotomic::{lambda_val, residue, CycError, Cyclotomic, CyclotomicNumber, SElem, SRing, Valuation};
use crate::dynsys::{DynError, MappingScheme, ProjPoint, RationalMap, SchemeEdge, SchemeVertex};
use crate::ff::{self, FieldElement, FieldError, FqPoly};
use crate::field::{Field, Ring};
use crate::poly::{Poly, PolyRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GmError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("degree {needed} exceeds the limit {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("reduction gave {got}, expected {want}")]
    ReductionMismatch { got: String, want: String },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Cyc(#[from] CycError),
    #[error(transparent)]
    Dyn(#[from] DynError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Largest s-degree for symbolic locus polynomials.
pub const LOCUS_DEGREE_LIMIT: u64 = 1024;
/// Largest s-degree for which locus roots are searched.
pub const LOCUS_ROOT_LIMIT: usize = 64;
/// Extra orbit steps computed after certification to exhibit the law.
pub const CONFIRM_STEPS: usize = 2;

fn cyc_int(p: u64, n: BigInt) -> CyclotomicNumber {
    CyclotomicNumber::from_rational(p, BigRational::from_integer(n))
}

/// C(p, i)/λ^i for 0 ≤ i ≤ p.
pub fn cyclotomic_parts(p: u64) -> Vec<CyclotomicNumber> {
    let lam_inv = CyclotomicNumber::lambda(p).inv().expect("λ ≠ 0");
    (0..=p).map(|i| cyc_int(p, num_integer::binomial(BigInt::from(p), BigInt::from(i))).mul(&lam_inv.pow(i))).collect()
}

/// f̃_s over S = Q(ζ_p)[s]/(s^{p-1} - a), with s the class of the variable
/// or any other element of S.
#[derive(Debug, Clone)]
pub struct LiftPoly {
    ring: SRing,
    s: SElem,
    poly: Poly<SRing>,
}

impl std::fmt::Display for LiftPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// f̃ with s ∈ S: z^{p-i} gets C(p, i) s^i/λ^i, checked against the
/// expansion of ((λz + s)^p - s^p)/λ^p.
pub fn with_parameter(ring: SRing, s: SElem) -> Result<LiftPoly, GmError> {
    let p = ring.p();
    let parts = cyclotomic_parts(p);
    let mut coeffs = vec![ring.zero(); p as usize + 1];
    for i in 0..p as usize {
        coeffs[p as usize - i] = ring.mul(&ring.constant(parts[i].clone()), &ring.pow(&s, i as u64));
    }
    let poly = Poly::new(ring.clone(), coeffs);
    let lam = CyclotomicNumber::lambda(p);
    let u = Poly::new(ring.clone(), vec![s.clone(), ring.constant(lam.clone())]);
    let direct = u
        .pow(p)
        .sub(&Poly::constant(ring.clone(), ring.pow(&s, p)))
        .scale(&ring.constant(lam.pow(p).inv().unwrap()));
    if direct != poly {
        return Err(GmError::Internal(format!("closed form {poly} differs from expansion {direct}")));
    }
    Ok(LiftPoly { ring, s, poly })
}

/// f̃_s with s^{p-1} = a, requiring p ∤ a.
pub fn build_lift(p: u64, a: i64) -> Result<LiftPoly, GmError> {
    let ring = SRing::new(p, a).map_err(|e| match e {
        CycError::BadParameter(m) => GmError::BadParameter(m),
        e => e.into(),
    })?;
    let s = ring.s();
    with_parameter(ring, s)
}

impl LiftPoly {
    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn ring(&self) -> &SRing {
        &self.ring
    }

    pub fn s(&self) -> &SElem {
        &self.s
    }

    pub fn poly(&self) -> &Poly<SRing> {
        &self.poly
    }

    pub fn eval(&self, x: &SElem) -> SElem {
        self.poly.eval(x)
    }

    /// v(coefficient of z^j) for j = 0..=p.
    pub fn coefficient_valuations(&self) -> Vec<Valuation> {
        self.poly.coeffs().iter().map(|c| self.ring.valuation(c)).collect()
    }

    /// -s/λ.
    pub fn finite_critical_point(&self) -> SElem {
        let lam_inv = CyclotomicNumber::lambda(self.p()).inv().unwrap();
        self.ring.neg(&self.ring.mul(&self.s, &self.ring.constant(lam_inv)))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p(),
            "a": self.ring.a().to_string(),
            "display": self.to_string(),
            "coefficients": self.poly.coeffs().iter().map(|c| self.ring.to_json(c)).collect::<Vec<_>>(),
            "valuations": self.coefficient_valuations(),
        })
    }
}

/// f̃ with s specialized to an element of Q(ζ_p).
pub fn lift_over_field(p: u64, s: &CyclotomicNumber) -> Result<RationalMap<Cyclotomic>, GmError> {
    let k = Cyclotomic::new(p)?;
    let parts = cyclotomic_parts(p);
    let mut coeffs = vec![k.zero(); p as usize + 1];
    for i in 0..p as usize {
        coeffs[p as usize - i] = parts[i].mul(&s.pow(i as u64));
    }
    Ok(RationalMap::polynomial(Poly::new(k, coeffs))?)
}

/// f̃_s'(0) for s ∈ Q(ζ_p), computed as a multiplier of the fixed point 0.
pub fn multiplier_at_zero(p: u64, s: &CyclotomicNumber) -> Result<CyclotomicNumber, GmError> {
    let f = lift_over_field(p, s)?;
    Ok(f.multiplier(&ProjPoint::Finite(CyclotomicNumber::zero(p)))?)
}

/// All s̄ ∈ F_{p^k} with s̄^{p-1} ≡ a (s̄ ≡ a when p = 2).
pub fn sbar_choices(p: u64, a: i64, k: usize) -> Result<Vec<FieldElement>, GmError> {
    let field = ff::make_field(p, k, None)?;
    let ac = field.from_int(a);
    if p == 2 {
        return Ok(vec![ac]);
    }
    let poly = Poly::monomial(field.clone(), field.one(), p as usize - 1).sub(&Poly::constant(field.clone(), ac));
    let mut out: Vec<FieldElement> = ff::roots_in(&poly, &field)?.into_iter().map(|(x, _)| x).collect();
    out.dedup();
    Ok(out)
}

/// Coefficient-wise reduction with s ↦ s̄, checked to equal z^p - s̄^{p-1} z.
pub fn reduce_lift(lift: &LiftPoly, sbar: &FieldElement) -> Result<FqPoly, GmError> {
    let k = sbar.field().clone();
    let p = lift.p();
    let coeffs = lift
        .poly
        .coeffs()
        .iter()
        .map(|c| {
            lift.ring.residue_s(c, sbar).map_err(|e| match e {
                CycError::NegativeValuation(v) => GmError::Internal(format!("coefficient with negative valuation {v}")),
                e => e.into(),
            })
        })
        .collect::<Result<Vec<_>, GmError>>()?;
    let reduced = Poly::new(k.clone(), coeffs);
    let c = if p == 2 { sbar.clone() } else { sbar.pow(p - 1) };
    let mut want = vec![k.zero(); p as usize + 1];
    want[1] = c.neg();
    want[p as usize] = k.one();
    let want = Poly::new(k, want);
    if reduced != want {
        return Err(GmError::ReductionMismatch { got: reduced.to_string(), want: want.to_string() });
    }
    Ok(reduced)
}

/// Critical points and values of f̃_s.
#[derive(Debug, Clone)]
pub struct CriticalData {
    pub points: Vec<(ProjPoint<SElem>, usize)>,
    pub values: Vec<ProjPoint<SElem>>,
    /// Profile over the finite critical value.
    pub finite_profile: Vec<usize>,
    pub infinity_profile: Vec<usize>,
    pub point_valuation: Valuation,
    pub value_valuation: Valuation,
}

/// Verifies f̃' = (p/λ^{p-1})(λz + s)^{p-1} and f̃ - f̃(-s/λ) = (λz + s)^p/λ^p
/// as polynomial identities over S; the second makes -s/λ the only point
/// over its value, with multiplicity p.
pub fn lift_critical_data(lift: &LiftPoly) -> Result<CriticalData, GmError> {
    let r = &lift.ring;
    let p = lift.p();
    let lam = CyclotomicNumber::lambda(p);
    let u = Poly::new(r.clone(), vec![lift.s.clone(), r.constant(lam.clone())]);
    let unit = cyc_int(p, p.into()).mul(&lam.pow(p - 1).inv().unwrap());
    if lift.poly.derivative() != u.pow(p - 1).scale(&r.constant(unit)) {
        return Err(GmError::Internal("derivative identity".into()));
    }
    let c0 = lift.finite_critical_point();
    let v = lift.eval(&c0);
    let want_v = r.neg(&r.mul(&r.pow(&lift.s, p), &r.constant(lam.pow(p).inv().unwrap())));
    if v != want_v {
        return Err(GmError::Internal("critical value".into()));
    }
    let fiber = lift.poly.sub(&Poly::constant(r.clone(), v.clone()));
    if fiber != u.pow(p).scale(&r.constant(lam.pow(p).inv().unwrap())) {
        return Err(GmError::Internal("fiber over the critical value".into()));
    }
    if !r.is_zero(&lift.poly.derivative().eval(&c0)) {
        return Err(GmError::Internal("derivative at -s/λ".into()));
    }
    let deg = lift.poly.degree().unwrap();
    Ok(CriticalData {
        point_valuation: r.valuation(&c0),
        value_valuation: r.valuation(&v),
        points: vec![(ProjPoint::Infinity, deg), (ProjPoint::Finite(c0), p as usize)],
        values: vec![ProjPoint::Infinity, ProjPoint::Finite(v)],
        finite_profile: vec![p as usize],
        infinity_profile: vec![deg],
    })
}

/// The two-component scheme: ∞ fixed with weight p, and the forward orbit
/// of -s/λ truncated after `max_steps` steps (or closed up when it cycles).
pub fn lift_scheme(lift: &LiftPoly, max_steps: usize) -> Result<MappingScheme<SElem>, GmError> {
    let data = lift_critical_data(lift)?;
    let p = lift.p() as usize;
    let mut vertices = vec![SchemeVertex { point: ProjPoint::Infinity, critical: true, index: p }];
    let mut edges = vec![SchemeEdge { source: 0, target: 0, weight: p }];
    let mut seen: HashMap<SElem, usize> = HashMap::new();
    let c0 = data.points[1].0.finite().unwrap().clone();
    seen.insert(c0.clone(), 1);
    vertices.push(SchemeVertex { point: ProjPoint::Finite(c0.clone()), critical: true, index: p });
    let mut cur = c0;
    let mut truncated_vertices = Vec::new();
    let mut last = 1;
    for step in 0..=max_steps {
        if step == max_steps {
            truncated_vertices.push(last);
            break;
        }
        let next = lift.eval(&cur);
        let w = vertices[last].index;
        if let Some(&t) = seen.get(&next) {
            edges.push(SchemeEdge { source: last, target: t, weight: w });
            break;
        }
        let t = vertices.len();
        seen.insert(next.clone(), t);
        vertices.push(SchemeVertex { point: ProjPoint::Finite(next.clone()), critical: false, index: 1 });
        edges.push(SchemeEdge { source: last, target: t, weight: w });
        last = t;
        cur = next;
    }
    Ok(MappingScheme { vertices, edges, truncated: !truncated_vertices.is_empty(), truncated_vertices })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// z_{preperiod + period} = z_{preperiod}.
    Finite { preperiod: usize, period: usize },
    EscapeCertified { threshold_index: usize },
    Unknown { steps: usize },
}

/// Orbit z_0 = -s/λ, z_{n+1} = f̃(z_n) with valuations.
#[derive(Debug, Clone)]
pub struct OrbitCertificate {
    pub points: Vec<SElem>,
    pub valuations: Vec<Valuation>,
    /// min(0, v(s) - 1).
    pub threshold: Valuation,
    pub verdict: Verdict,
    /// v(z_{n+1}) = p·v(z_n) at every computed step after the threshold.
    pub law_holds: bool,
}

impl OrbitCertificate {
    pub fn to_json(&self, ring: &SRing) -> Value {
        json!({
            "points": self.points.iter().map(|z| z.to_string()).collect::<Vec<_>>(),
            "exact": self.points.iter().map(|z| ring.to_json(z)).collect::<Vec<_>>(),
            "valuations": self.valuations,
            "threshold": self.threshold,
            "verdict": self.verdict,
            "law_holds": self.law_holds,
        })
    }
}

fn scale_val(v: &Valuation, p: u64) -> Valuation {
    match v {
        Valuation::Finite(x) => Valuation::Finite(x * BigRational::from_integer(p.into())),
        Valuation::Infinite => Valuation::Infinite,
    }
}

/// Iterates the critical orbit until it cycles, crosses the escape
/// threshold, or `max_steps` iterations are spent. After the threshold,
/// [`CONFIRM_STEPS`] more points are computed (within `max_steps`) to
/// exhibit the valuation law.
pub fn orbit_search(lift: &LiftPoly, max_steps: usize) -> Result<OrbitCertificate, GmError> {
    if max_steps == 0 {
        return Err(GmError::BadParameter("max_steps must be at least 1".into()));
    }
    let r = &lift.ring;
    let p = lift.p();
    let threshold = match r.valuation(&lift.s) {
        Valuation::Finite(v) => Valuation::Finite((v - BigRational::from_integer(1.into())).min(BigRational::zero())),
        Valuation::Infinite => Valuation::int(0),
    };
    let mut points = vec![lift.finite_critical_point()];
    let mut valuations = vec![r.valuation(&points[0])];
    let mut seen: HashMap<SElem, usize> = HashMap::from([(points[0].clone(), 0)]);
    let mut verdict = None;
    let mut certified_at = None;
    for n in 0..max_steps {
        if certified_at.is_none() && valuations[n] < threshold {
            certified_at = Some(n);
            verdict = Some(Verdict::EscapeCertified { threshold_index: n });
        }
        if let Some(t) = certified_at {
            if n >= t + CONFIRM_STEPS {
                break;
            }
        }
        let next = lift.eval(&points[n]);
        if let Some(&j) = seen.get(&next) {
            verdict = Some(Verdict::Finite { preperiod: j, period: n + 1 - j });
            break;
        }
        seen.insert(next.clone(), n + 1);
        valuations.push(r.valuation(&next));
        points.push(next);
    }
    let verdict = verdict.unwrap_or(Verdict::Unknown { steps: points.len() - 1 });
    let law_holds = match certified_at {
        Some(t) => (t..valuations.len() - 1).all(|i| valuations[i + 1] == scale_val(&valuations[i], p)),
        None => true,
    };
    Ok(OrbitCertificate { points, valuations, threshold, verdict, law_holds })
}

/// f̃_s^m(-s/λ) - f̃_s^{m+n}(-s/λ) as a polynomial in s.
#[derive(Debug, Clone)]
pub struct LocusPoly {
    pub p: u64,
    pub m: usize,
    pub n: usize,
    pub poly: Poly<Cyclotomic>,
    pub degree: usize,
    /// Order of vanishing at s = 0.
    pub zero_multiplicity: usize,
    /// Nonzero roots found in Q(ζ_p) with multiplicities, when searched.
    pub roots: Option<Vec<(CyclotomicNumber, usize)>>,
}

impl LocusPoly {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "m": self.m,
            "n": self.n,
            "display": self.poly.fmt_var("s"),
            "degree": self.degree,
            "zero_multiplicity": self.zero_multiplicity,
            "coefficients": self.poly.coeffs().iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "roots": self.roots.as_ref().map(|rs| rs.iter().map(|(r, e)| json!({"root": r.to_string(), "multiplicity": e})).collect::<Vec<_>>()),
        })
    }
}

fn root_multiplicity(h: &Poly<Cyclotomic>, x: &CyclotomicNumber) -> usize {
    let k = *h.ring();
    let lin = Poly::new(k, vec![x.neg(), k.one()]);
    let mut h = h.clone();
    let mut e = 0;
    while !h.is_zero() && h.eval(x).is_zero() {
        h = h.exact_div(&lin);
        e += 1;
    }
    e
}

pub fn pcf_locus_poly(p: u64, m: usize, n: usize) -> Result<LocusPoly, GmError> {
    let k = Cyclotomic::new(p)?;
    if n == 0 {
        return Err(GmError::BadParameter("n must be at least 1".into()));
    }
    let degree = crate::budget::within(p, (m + n) as u64, LOCUS_DEGREE_LIMIT)
        .ok_or(GmError::BudgetExceeded { needed: format!("{p}^{}", m + n), budget: LOCUS_DEGREE_LIMIT })?;
    let lam = k.lambda();
    let lam_p_inv = lam.pow(p).inv().unwrap();
    let s = Poly::x(k);
    let sp = s.pow(p);
    let step = |z: &Poly<Cyclotomic>| z.scale(&lam).add(&s).pow(p).sub(&sp).scale(&lam_p_inv);
    let mut z = s.scale(&lam.inv().unwrap().neg());
    let mut zs = vec![z.clone()];
    for _ in 0..m + n {
        z = step(&z);
        zs.push(z.clone());
    }
    let poly = zs[m].sub(&zs[m + n]);
    if poly.degree() != Some(degree as usize) {
        return Err(GmError::Internal(format!("expected degree {degree}, got {:?}", poly.degree())));
    }
    let zero_multiplicity = poly.coeffs().iter().take_while(|c| c.is_zero()).count();
    let roots = (poly.degree().unwrap() <= LOCUS_ROOT_LIMIT).then(|| {
        let rest = Poly::new(k, poly.coeffs()[zero_multiplicity..].to_vec());
        let mut rs: Vec<(CyclotomicNumber, usize)> =
            k.roots(rest.coeffs()).into_iter().map(|r| (r.clone(), root_multiplicity(&rest, &r))).collect();
        rs.sort_by(|a, b| a.0.coords().cmp(b.0.coords()));
        rs
    });
    Ok(LocusPoly { p, m, n, poly, degree: degree as usize, zero_multiplicity, roots })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub p: u64,
    /// γ·f̃_s(z/γ) = f̃_{γs}(z) in Q(ζ_p)[γ, s]/(γ^{p-1} - 1).
    pub identity_holds: bool,
    /// γ^{-1} = γ^{p-2} in that ring.
    pub inverse_holds: bool,
    /// f̃_s'(0) = (p/λ^{p-1})·s^{p-1} over Q(ζ_p)[s].
    pub multiplier_holds: bool,
    /// p/λ^{p-1} as a display string.
    pub multiplier_unit: String,
    /// Its residue in F_p, as a signed integer (-1 preferred for p = 2).
    pub unit_residue: i64,
    pub all_hold: bool,
}

/// Symbolic check in Q(ζ_p)[γ]/(γ^{p-1} - 1) [s][z].
pub fn scaling_check(p: u64) -> Result<ScalingReport, GmError> {
    let k = Cyclotomic::new(p)?;
    let g_ring = SRing::new(p, 1)?; // γ plays the role of s here
    let gamma = g_ring.s();
    let gamma_inv = g_ring.inv(&gamma)?;
    let inverse_holds = gamma_inv == g_ring.pow(&gamma, p.saturating_sub(2));
    let s_ring = PolyRing::new(g_ring.clone(), "s");
    let parts = cyclotomic_parts(p);
    let s = s_ring.var_poly();
    // f̃_t with t ∈ Γ[s]
    let lift_with = |t: &Poly<SRing>| {
        let mut coeffs = vec![s_ring.zero(); p as usize + 1];
        for i in 0..p as usize {
            coeffs[p as usize - i] = t.pow(i as u64).scale(&g_ring.constant(parts[i].clone()));
        }
        Poly::new(s_ring.clone(), coeffs)
    };
    let f = lift_with(&s);
    // γ·f(z/γ): coefficient of z^j is γ·γ^{-j}·c_j
    let lhs = Poly::new(
        s_ring.clone(),
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| c.scale(&g_ring.mul(&gamma, &g_ring.pow(&gamma_inv, j as u64))))
            .collect(),
    );
    let rhs = lift_with(&s.scale(&gamma));
    let identity_holds = lhs == rhs;

    let unit = cyc_int(p, p.into()).mul(&CyclotomicNumber::lambda(p).pow(p - 1).inv().unwrap());
    let qs = PolyRing::new(k, "s");
    let mut coeffs = vec![qs.zero(); p as usize + 1];
    for i in 0..p as usize {
        coeffs[p as usize - i] = Poly::monomial(k, parts[i].clone(), i);
    }
    let sym = Poly::new(qs.clone(), coeffs);
    let multiplier_holds = sym.derivative().eval(&qs.zero()) == Poly::monomial(k, unit.clone(), p as usize - 1);
    let res = residue(&unit)?;
    let r = res.as_prime().unwrap() as i64;
    let unit_residue = if 2 * r >= p as i64 { r - p as i64 } else { r };
    Ok(ScalingReport {
        p,
        identity_holds,
        inverse_holds,
        multiplier_holds,
        multiplier_unit: unit.to_string(),
        unit_residue,
        all_hold: identity_holds && inverse_holds && multiplier_holds,
    })
}

/// v of an element of Q(ζ_p), as an integer.
pub fn lambda_val_i64(x: &CyclotomicNumber) -> Option<i64> {
    lambda_val(x).as_i64()
}
