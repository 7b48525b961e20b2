//! Monic additive normal forms, the finite set of affine maps preserving
//! that form, conjugacy tests, and the census of classes over F_q.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::addpoly::{recognize_additive, AddError, AdditivePoly};
use crate::budget;
use crate::dynsys::{conjugate, DynError, Pgl2, ProjPoint, RationalMap};
use crate::ff::{self, FieldElement, FieldError, FiniteField, FqPoly};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModError {
    #[error("not of the form Σ a_i z^(p^i) + c with a_m ≠ 0")]
    NotAdditiveShape,
    #[error("linear coefficient vanishes")]
    Inseparable,
    #[error("not in monic additive form")]
    NotMonic,
    #[error("degree mismatch: p^{m1} vs p^{m2}")]
    DegreeMismatch { m1: usize, m2: usize },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("enumeration of {needed} exceeds the budget {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("witness failed verification")]
    WitnessFailed,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Dyn(#[from] DynError),
    #[error(transparent)]
    Add(#[from] AddError),
}

/// The monic additive form of g when g has that form: polynomial, leading
/// coefficient 1, every monomial of degree p^i, no constant term.
pub fn monic_additive_of(g: &RationalMap<FiniteField>) -> Option<AdditivePoly> {
    if !g.is_polynomial() {
        return None;
    }
    let a = recognize_additive(g.num())?;
    (a.is_monic() && a.m() >= 1).then_some(a)
}

fn as_map(g: &AdditivePoly) -> RationalMap<FiniteField> {
    RationalMap::polynomial(g.to_poly()).expect("nonconstant")
}

/// g^φ for affine φ, as an additive polynomial when the result has that
/// form.
fn conjugate_additive(g: &AdditivePoly, phi: &Pgl2<FiniteField>) -> Result<Option<AdditivePoly>, ModError> {
    Ok(monic_additive_of(&conjugate(&as_map(g), phi)?))
}

/// Same result as [`conjugate_additive`] without composing polynomials.
/// For φ(z) = Bz + C, g^φ(w) = Σ a_i B^(1-p^i) w^(p^i) + C - B·g(C/B).
fn affine_conjugate(g: &AdditivePoly, phi: &Pgl2<FiniteField>) -> Result<Option<AdditivePoly>, ModError> {
    let [a, b, c, d] = phi.entries();
    if !c.is_zero() {
        return Ok(None);
    }
    let dinv = d.inv().ok_or(ModError::WitnessFailed)?;
    let (big_b, big_c) = (a.mul(&dinv), b.mul(&dinv));
    let binv = big_b.inv().ok_or(ModError::WitnessFailed)?;
    if !big_c.sub(&big_b.mul(&g.eval(&big_c.mul(&binv)))).is_zero() {
        return Ok(None);
    }
    // B^(1-p^i) = B · (B^-1)^(p^i)
    let mut frob = binv;
    let mut coeffs = Vec::with_capacity(g.coeffs().len());
    for a_i in g.coeffs() {
        coeffs.push(a_i.mul(&big_b).mul(&frob));
        frob = frob.frobenius();
    }
    let h = AdditivePoly::new(g.field().clone(), coeffs)?;
    Ok((h.is_monic() && h.m() >= 1).then_some(h))
}

/// g^φ = φ ∘ g ∘ φ^{-1} in monic additive form, φ(z) = bz + c.
#[derive(Debug, Clone)]
pub struct MonicAdditiveForm {
    pub source: FqPoly,
    pub g: AdditivePoly,
    pub b: FieldElement,
    pub c: FieldElement,
    pub witness: Pgl2<FiniteField>,
}

impl MonicAdditiveForm {
    /// Degree over F_p of the field holding g and the witness.
    pub fn extension_degree(&self) -> usize {
        self.g.field().degree()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "input": self.source.to_string(),
            "input_field": self.source.ring().descriptor(),
            "normal_form": self.g.to_string(),
            "field": self.g.field().descriptor(),
            "witness": {"b": self.b.to_string(), "c": self.c.to_string(), "phi": self.witness.to_string()},
            "extension_degree": self.extension_degree(),
        })
    }
}

/// Normalizes Σ a_i z^{p^i} + a with a_m ≠ 0 and a_0 ≠ 0.
///
/// With φ(z) = bz + c one has g^φ(w) = b·g((w - c)/b) + c. The leading
/// coefficient becomes a_m·b^{1-p^m}, so b^{p^m-1} = a_m; the constant term
/// vanishes exactly when x0 = -c/b is a fixed point of g. The least fixed
/// point in the smallest field holding b and some fixed point is used, and
/// b = 1 when g is already monic.
pub fn to_monic_additive(f: &FqPoly) -> Result<MonicAdditiveForm, ModError> {
    let base = f.ring().clone();
    let p = base.p();
    let constant = f.coeff(0);
    let linear_part = f.sub(&Poly::constant(base.clone(), constant.clone()));
    let a = recognize_additive(&linear_part).ok_or(ModError::NotAdditiveShape)?;
    if a.m() == 0 {
        return Err(ModError::NotAdditiveShape);
    }
    if !a.is_separable() {
        return Err(ModError::Inseparable);
    }
    let lead = a.coeff(a.m());
    let (b, kb) = if lead.is_one() {
        (base.one(), base.clone())
    } else {
        ff::solve_power(&lead, p.pow(a.m() as u32) - 1)?
    };
    let (x0, k) = if constant.is_zero() {
        (kb.zero(), kb)
    } else {
        let h = f.sub(&Poly::x(base.clone()));
        let l = *ff::irreducible_factor_degrees(&h)?.first().expect("h has positive degree");
        let deg = kb.degree().lcm(&(base.degree() * l));
        let k = if deg == kb.degree() { kb } else { ff::make_field(p, deg, None)? };
        let (x0, _) = ff::roots_in(&ff::embed_poly(&h, &k)?, &k)?.into_iter().next().expect("a root exists in k");
        (x0, k)
    };
    let b = ff::embed(&b, &k)?;
    let c = b.mul(&x0).neg();
    let witness = Pgl2::affine(k.clone(), b.clone(), c.clone())?;
    let fk = RationalMap::polynomial(ff::embed_poly(f, &k)?)?;
    let g = monic_additive_of(&conjugate(&fk, &witness)?).ok_or(ModError::WitnessFailed)?;
    Ok(MonicAdditiveForm { source: f.clone(), g, b, c, witness })
}

/// Distinct fixed points of g, listed inside the splitting field of g(z) - z.
#[derive(Debug, Clone)]
pub struct FixSet {
    pub field: FiniteField,
    pub points: Vec<FieldElement>,
}

fn fix_poly(g: &AdditivePoly) -> FqPoly {
    g.to_poly().sub(&Poly::x(g.field().clone()))
}

pub fn fix_points(g: &AdditivePoly) -> Result<FixSet, ModError> {
    fix_points_in(g, 1)
}

/// Fixed points in the least field containing them whose degree is a
/// multiple of `min_degree`.
fn fix_points_in(g: &AdditivePoly, min_degree: usize) -> Result<FixSet, ModError> {
    let h = fix_poly(g);
    let base = g.field();
    let deg = (base.degree() * ff::splitting_degree(&h)?).lcm(&min_degree).lcm(&base.degree());
    let field = ff::make_field(base.p(), deg, None)?;
    let mut points: Vec<FieldElement> = ff::roots_in(&ff::embed_poly(&h, &field)?, &field)?.into_iter().map(|(x, _)| x).collect();
    points.dedup();
    Ok(FixSet { field, points })
}

/// Affine maps γz + δ, γ ∈ F_{p^m}^×, δ ∈ γ·Fix(g), each verified to
/// carry g to a monic additive polynomial.
#[derive(Debug, Clone)]
pub struct ConjugatingSet {
    /// g over `field`.
    pub g: AdditivePoly,
    pub field: FiniteField,
    pub fix: Vec<FieldElement>,
    pub maps: Vec<Pgl2<FiniteField>>,
}

impl ConjugatingSet {
    pub fn size(&self) -> usize {
        self.maps.len()
    }

    /// (p^m - 1)·|Fix(g)|.
    pub fn bound(&self) -> usize {
        (self.g.p().pow(self.g.m() as u32) as usize - 1) * self.fix.len()
    }
}

pub fn conjugating_set(g: &AdditivePoly) -> Result<ConjugatingSet, ModError> {
    conjugating_set_in(g, 1)
}

/// As [`conjugating_set`], inside a field whose degree is a multiple of
/// `min_degree`.
pub fn conjugating_set_in(g: &AdditivePoly, min_degree: usize) -> Result<ConjugatingSet, ModError> {
    if !g.is_monic() || g.m() == 0 {
        return Err(ModError::NotMonic);
    }
    let (p, m) = (g.p(), g.m());
    let fix = fix_points_in(g, min_degree.lcm(&m))?;
    let field = fix.field;
    let gk = g.embedded(&field)?;
    let small = ff::make_field(p, m, None)?;
    let mut gammas: Vec<FieldElement> =
        small.elements().filter(|x| !x.is_zero()).map(|x| ff::embed(&x, &field)).collect::<Result<_, _>>()?;
    gammas.sort();
    let mut maps = Vec::new();
    for gamma in &gammas {
        for x in &fix.points {
            let phi = Pgl2::affine(field.clone(), gamma.clone(), gamma.mul(x))?;
            if affine_conjugate(&gk, &phi)?.is_some() {
                maps.push(phi);
            }
        }
    }
    Ok(ConjugatingSet { g: gk, field, fix: fix.points, maps })
}

/// Some φ with g1^φ = g2 when one exists. Every returned witness is checked
/// again pointwise: φ(g1(x)) = g2(φ(x)).
pub fn are_conjugate(g1: &AdditivePoly, g2: &AdditivePoly) -> Result<Option<Pgl2<FiniteField>>, ModError> {
    if g1.p() != g2.p() || g1.m() != g2.m() {
        return Err(ModError::DegreeMismatch { m1: g1.m(), m2: g2.m() });
    }
    if !g2.is_monic() {
        return Err(ModError::NotMonic);
    }
    let min = g1.field().degree().lcm(&g2.field().degree());
    let h = conjugating_set_in(g1, min)?;
    let g2k = g2.embedded(&h.field)?;
    for phi in &h.maps {
        if affine_conjugate(&h.g, phi)?.as_ref() == Some(&g2k) {
            if conjugate_additive(&h.g, phi)?.as_ref() != Some(&g2k) {
                return Err(ModError::WitnessFailed);
            }
            verify_witness(&h.g, &g2k, phi)?;
            return Ok(Some(phi.clone()));
        }
    }
    Ok(None)
}

fn verify_witness(g1: &AdditivePoly, g2: &AdditivePoly, phi: &Pgl2<FiniteField>) -> Result<(), ModError> {
    for x in g1.field().elements().take(64) {
        let lhs = phi.apply(&ProjPoint::Finite(g1.eval(&x)));
        let ProjPoint::Finite(px) = phi.apply(&ProjPoint::Finite(x)) else { return Err(ModError::WitnessFailed) };
        if lhs != ProjPoint::Finite(g2.eval(&px)) {
            return Err(ModError::WitnessFailed);
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusClass {
    pub representative: String,
    pub size: usize,
    /// Largest |H_g| over the members.
    pub bound: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessSample {
    pub from: String,
    pub to: String,
    pub witness: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub p: u64,
    pub m: usize,
    pub q: u64,
    pub polynomial_count: usize,
    pub class_count: usize,
    pub classes: Vec<CensusClass>,
    /// fiber size -> number of classes with that size
    pub fiber_histogram: BTreeMap<usize, usize>,
    pub max_fiber: usize,
    /// Every fiber is bounded by the conjugating-set size of its members.
    pub bound_ok: bool,
    /// Largest field degree over F_p used for conjugating sets.
    pub extension_degree: usize,
    pub witness_samples: Vec<WitnessSample>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// All z^{p^m} + Σ_{i<m} a_i z^{p^i} with a_0 ≠ 0 over F_q, partitioned
/// into conjugacy classes.
pub fn census(p: u64, m: usize, q: u64) -> Result<CensusReport, ModError> {
    census_with_budget(p, m, q, budget::budget())
}

pub fn census_with_budget(p: u64, m: usize, q: u64, budget: u64) -> Result<CensusReport, ModError> {
    if m == 0 {
        return Err(ModError::BadParameter("m must be at least 1".into()));
    }
    let mut k = 0;
    let mut t = q;
    while t > 1 && t.is_multiple_of(p) {
        t /= p;
        k += 1;
    }
    if t != 1 || k == 0 {
        return Err(ModError::BadParameter(format!("{q} is not a power of {p}")));
    }
    let count = (q as u128 - 1) * (q as u128).pow(m as u32 - 1);
    if count > budget as u128 {
        return Err(ModError::BudgetExceeded { needed: format!("{count} polynomials"), budget });
    }
    let field = ff::make_field(p, k, None)?;
    let elems: Vec<FieldElement> = field.elements().collect();
    let mut polys = Vec::with_capacity(count as usize);
    for idx in 0..count as usize {
        let mut coeffs = Vec::with_capacity(m + 1);
        let mut r = idx;
        coeffs.push(elems[1 + r % (q as usize - 1)].clone());
        r /= q as usize - 1;
        for _ in 1..m {
            coeffs.push(elems[r % q as usize].clone());
            r /= q as usize;
        }
        coeffs.push(field.one());
        polys.push(AdditivePoly::new(field.clone(), coeffs)?);
    }
    let key = |g: &AdditivePoly| -> Vec<Vec<u64>> { g.coeffs().iter().map(|c| c.coords().to_vec()).collect() };
    let index: HashMap<Vec<Vec<u64>>, usize> = polys.iter().enumerate().map(|(i, g)| (key(g), i)).collect();

    // per polynomial: |H_g|, field degree, and the enumerated conjugates
    let results: Vec<(usize, usize, Vec<(usize, Pgl2<FiniteField>)>)> = polys
        .par_iter()
        .map(|g| -> Result<_, ModError> {
            let h = conjugating_set(g)?;
            let down: HashMap<FieldElement, FieldElement> =
                elems.iter().map(|x| Ok((ff::embed(x, &h.field)?, x.clone()))).collect::<Result<_, FieldError>>()?;
            let mut hits = Vec::new();
            for phi in &h.maps {
                let img = affine_conjugate(&h.g, phi)?.ok_or(ModError::WitnessFailed)?;
                let coeffs: Option<Vec<FieldElement>> = img.coeffs().iter().map(|c| down.get(c).cloned()).collect();
                if let Some(coeffs) = coeffs {
                    let img = AdditivePoly::new(field.clone(), coeffs)?;
                    if let Some(&j) = index.get(&key(&img)) {
                        hits.push((j, phi.clone()));
                    }
                }
            }
            Ok((h.size(), h.field.degree(), hits))
        })
        .collect::<Result<_, _>>()?;

    let n = polys.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut samples = Vec::new();
    for (i, (_, _, hits)) in results.iter().enumerate() {
        for (j, phi) in hits {
            let (a, b) = (find(&mut parent, i), find(&mut parent, *j));
            if a != b {
                parent[a.max(b)] = a.min(b);
                if samples.len() < 8 {
                    samples.push(WitnessSample { from: polys[i].to_string(), to: polys[*j].to_string(), witness: phi.to_string() });
                }
            }
        }
    }
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        members.entry(r).or_default().push(i);
    }
    let classes: Vec<CensusClass> = members
        .iter()
        .map(|(&r, ms)| CensusClass {
            representative: polys[r].to_string(),
            size: ms.len(),
            bound: ms.iter().map(|&i| results[i].0).max().unwrap(),
        })
        .collect();
    let mut fiber_histogram = BTreeMap::new();
    for c in &classes {
        *fiber_histogram.entry(c.size).or_default() += 1;
    }
    Ok(CensusReport {
        p,
        m,
        q,
        polynomial_count: n,
        class_count: classes.len(),
        max_fiber: classes.iter().map(|c| c.size).max().unwrap_or(0),
        bound_ok: classes.iter().all(|c| c.size <= c.bound),
        classes,
        fiber_histogram,
        extension_degree: results.iter().map(|r| r.1).max().unwrap_or(field.degree()),
        witness_samples: samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use proptest::prelude::*;

    fn fq(p: u64, k: usize, ints: &[i64]) -> FqPoly {
        Poly::from_ints(make_field(p, k, None).unwrap(), ints)
    }

    fn add(p: u64, k: usize, ints: &[i64]) -> AdditivePoly {
        AdditivePoly::from_ints(&make_field(p, k, None).unwrap(), ints).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let nf = to_monic_additive(&fq(3, 1, &[1, 1, 0, 2])).unwrap();
        assert_eq!(nf.g.to_string(), "z^3 + z");
        assert_eq!(nf.b.pow(2), nf.g.field().from_int(2));
        assert_eq!(nf.extension_degree(), 2);
        // the constant lands on a fixed point: x0 = -c/b solves 2x^3 + x + 1 = x
        let x0 = nf.c.div_by(&nf.b).neg();
        assert!(x0.pow(3).scale_int(2).add(&nf.g.field().one()).is_zero());

        let nf = to_monic_additive(&fq(3, 1, &[0, -1, 0, 1])).unwrap();
        assert_eq!(nf.g, add(3, 1, &[-1, 1]));
        assert_eq!(nf.witness, Pgl2::identity(make_field(3, 1, None).unwrap()));

        let mut c = vec![0i64; 10];
        c[1] = 1;
        c[9] = 2;
        let nf = to_monic_additive(&fq(3, 1, &c)).unwrap();
        assert_eq!(nf.g.to_string(), "z^9 + z");
        assert_eq!(nf.b.pow(8), nf.g.field().from_int(2));

        assert_eq!(to_monic_additive(&fq(3, 1, &[0, 1, 1])).unwrap_err(), ModError::NotAdditiveShape);
        assert_eq!(to_monic_additive(&fq(3, 1, &[1, 0, 0, 1])).unwrap_err(), ModError::Inseparable);
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(fix_points(&add(3, 1, &[1, 1])).unwrap().points.len(), 1);
        let fx = fix_points(&add(3, 1, &[-1, 1])).unwrap();
        assert_eq!(fx.field.degree(), 2);
        assert_eq!(fx.points.len(), 3);
        for x in &fx.points {
            assert!(x.is_zero() || x.pow(2) == fx.field.from_int(2));
        }
        assert_eq!(fix_points(&add(2, 1, &[1, 1])).unwrap().points.len(), 1);
    }

    #[test]
    fn conjugating_set_examples() {
        assert_eq!(conjugating_set(&add(3, 1, &[1, 1])).unwrap().size(), 2);
        let h = conjugating_set(&add(3, 1, &[-1, 1])).unwrap();
        assert_eq!((h.size(), h.bound()), (6, 6));
        let h = conjugating_set(&add(2, 1, &[1, 1])).unwrap();
        assert_eq!(h.maps, vec![Pgl2::identity(h.field.clone())]);
    }

    #[test]
    fn set_is_complete_among_affine_maps() {
        // over F_9, every affine φ outside H_g breaks the monic additive form
        let g = add(3, 1, &[-1, 1]);
        let h = conjugating_set(&g).unwrap();
        let k = &h.field;
        for gamma in k.elements().filter(|x| !x.is_zero()) {
            for delta in k.elements() {
                let phi = Pgl2::affine(k.clone(), gamma.clone(), delta).unwrap();
                let img = conjugate_additive(&h.g, &phi).unwrap();
                assert_eq!(affine_conjugate(&h.g, &phi).unwrap(), img);
                let form = img.is_some();
                assert_eq!(form, h.maps.contains(&phi), "{phi}");
            }
        }
    }

    #[test]
    fn conjugacy_examples() {
        let g = add(3, 1, &[1, 1]);
        let id = are_conjugate(&g, &g).unwrap().unwrap();
        assert_eq!(id, Pgl2::identity(id.entries()[0].field().clone()));
        assert_eq!(are_conjugate(&g, &add(3, 1, &[2, 1])).unwrap(), None);
        let k = make_field(5, 2, None).unwrap();
        let c1 = AdditivePoly::new(k.clone(), vec![k.element(&[1, 1]).unwrap(), k.one()]).unwrap();
        let c2 = AdditivePoly::new(k.clone(), vec![k.element(&[2, 1]).unwrap(), k.one()]).unwrap();
        assert_eq!(are_conjugate(&c1, &c2).unwrap(), None);
        assert!(matches!(are_conjugate(&g, &add(3, 1, &[1, 0, 1])), Err(ModError::DegreeMismatch { .. })));
        // z^4 + z^2 + z and z^4 + x z^2 + z over F_4 are conjugate by a scaling
        let f4 = make_field(2, 2, None).unwrap();
        let a = AdditivePoly::new(f4.clone(), vec![f4.one(), f4.one(), f4.one()]).unwrap();
        let b = AdditivePoly::new(f4.clone(), vec![f4.one(), f4.generator(), f4.one()]).unwrap();
        let phi = are_conjugate(&a, &b).unwrap().unwrap();
        assert_eq!(conjugate_additive(&a.embedded(phi.entries()[0].field()).unwrap(), &phi).unwrap().unwrap(), b.embedded(phi.entries()[0].field()).unwrap());
    }

    #[test]
    fn census_examples() {
        let r = census(2, 1, 2).unwrap();
        assert_eq!((r.class_count, r.max_fiber), (1, 1));
        assert_eq!(census(3, 1, 3).unwrap().class_count, 2);
        let r = census(3, 1, 9).unwrap();
        assert_eq!((r.polynomial_count, r.class_count), (8, 8));
        let r = census(2, 2, 4).unwrap();
        assert_eq!(r.polynomial_count, 12);
        assert_eq!(r.class_count, 6);
        assert!(r.bound_ok);
        assert_eq!(r.fiber_histogram, BTreeMap::from([(1, 3), (3, 3)]));
        assert!(matches!(census(3, 1, 10), Err(ModError::BadParameter(_))));
        assert!(matches!(census_with_budget(3, 2, 27, 100), Err(ModError::BudgetExceeded { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn normal_form_round_trip(p in prop_oneof![Just(2u64), Just(3), Just(5)], seed in proptest::collection::vec(0i64..5, 4)) {
            // a_m z^p + a_0 z + c over F_p with a_m, a_0 nonzero
            let k = make_field(p, 1, None).unwrap();
            let (am, a0, c) = (1 + seed[0] % (p as i64 - 1).max(1), 1 + seed[1] % (p as i64 - 1).max(1), seed[2]);
            let mut ints = vec![0i64; p as usize + 1];
            ints[0] = c;
            ints[1] = a0;
            ints[p as usize] = am;
            let f = Poly::from_ints(k, &ints);
            let nf = to_monic_additive(&f).unwrap();
            prop_assert!(nf.g.is_monic());
            // multiplier at the normalized fixed point 0 is a_0
            prop_assert_eq!(nf.g.coeff(0), nf.g.field().from_int(a0));
            let src = RationalMap::polynomial(ff::embed_poly(&f, nf.g.field()).unwrap()).unwrap();
            prop_assert_eq!(conjugate(&src, &nf.witness).unwrap(), as_map(&nf.g));
            let h = conjugating_set(&nf.g).unwrap();
            prop_assert!(h.size() <= h.bound());
            prop_assert!(are_conjugate(&nf.g, &nf.g).unwrap().is_some());
        }
    }
}
