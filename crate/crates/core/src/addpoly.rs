//! Additive (linearized) polynomials Σ a_i z^{p^i} over finite fields.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::budget;
use crate::ff::{self, linalg, FieldDescriptor, FieldElement, FieldError, FiniteField, FqPoly};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AddError {
    #[error("additive polynomial is inseparable (a_0 = 0)")]
    Inseparable,
    #[error("enumeration of {needed} exceeds the budget {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("coefficients live in different fields")]
    FieldMismatch,
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("roots do not all lie in {0}")]
    NotSplit(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Σ a_i z^{p^i}; `coeffs[i]` multiplies z^{p^i}. Trailing zeros are trimmed,
/// so a nonzero value has a_m ≠ 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AdditivePoly {
    field: FiniteField,
    coeffs: Vec<FieldElement>,
}

impl std::fmt::Debug for AdditivePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AdditivePoly({} over {})", self, self.field)
    }
}

impl std::fmt::Display for AdditivePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let p = self.field.p();
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => "z".to_string(),
                _ => format!("z^{}", pow_string(p, i)),
            };
            let s = c.to_string();
            let (neg, body) = if c.coords()[1..].iter().all(|&x| x == 0) {
                match s.strip_prefix('-') {
                    Some(rest) => (true, if rest == "1" { mono } else { format!("{rest}{mono}") }),
                    None => (false, if s == "1" { mono } else { format!("{s}{mono}") }),
                }
            } else {
                (false, format!("({s}){mono}"))
            };
            terms.push((neg, body));
        }
        for (j, (neg, body)) in terms.iter().enumerate() {
            match (j, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

fn pow_string(p: u64, i: usize) -> String {
    match p.checked_pow(i as u32) {
        Some(v) => v.to_string(),
        None => format!("({p}^{i})"),
    }
}

impl AdditivePoly {
    /// Builds Σ a_i z^{p^i}; rejects the zero polynomial.
    pub fn new(field: FiniteField, coeffs: Vec<FieldElement>) -> Result<Self, AddError> {
        if coeffs.iter().any(|c| c.field() != &field) {
            return Err(AddError::FieldMismatch);
        }
        let f = Self::raw(field, coeffs);
        if f.is_zero() {
            return Err(AddError::ZeroPolynomial);
        }
        Ok(f)
    }

    fn raw(field: FiniteField, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        AdditivePoly { field, coeffs }
    }

    /// From small integer coefficients in the prime subfield.
    pub fn from_ints(field: &FiniteField, ints: &[i64]) -> Result<Self, AddError> {
        Self::new(field.clone(), ints.iter().map(|&n| field.from_int(n)).collect())
    }

    /// The identity map z.
    pub fn identity(field: &FiniteField) -> Self {
        AdditivePoly { field: field.clone(), coeffs: vec![field.one()] }
    }

    /// A random separable polynomial of Frobenius degree m (a_0, a_m ≠ 0).
    pub fn random_separable<R: Rng>(field: &FiniteField, m: usize, rng: &mut R) -> Self {
        let mut rand_elem = |nonzero: bool| loop {
            let coords: Vec<u64> = (0..field.degree()).map(|_| rng.gen_range(0..field.p())).collect();
            let x = field.element(&coords).unwrap();
            if !nonzero || !x.is_zero() {
                return x;
            }
        };
        let coeffs = (0..=m).map(|i| rand_elem(i == 0 || i == m)).collect();
        AdditivePoly { field: field.clone(), coeffs }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Frobenius degree m; the ordinary degree is p^m.
    pub fn m(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    /// Ordinary degree p^m, when it fits.
    pub fn degree(&self) -> Option<u64> {
        self.field.p().checked_pow(self.m() as u32)
    }

    /// Separable iff the linear coefficient (the derivative) is nonzero.
    pub fn is_separable(&self) -> bool {
        self.coeffs.first().is_some_and(|c| !c.is_zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// The ordinary polynomial Σ a_i z^{p^i}.
    pub fn to_poly(&self) -> FqPoly {
        let p = self.field.p() as usize;
        let deg = p.pow(self.m() as u32);
        let mut c = vec![self.field.zero(); deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[p.pow(i as u32)] = a.clone();
        }
        Poly::new(self.field.clone(), c)
    }

    /// Coefficients moved into an extension field.
    pub fn embedded(&self, target: &FiniteField) -> Result<Self, AddError> {
        let coeffs = self.coeffs.iter().map(|c| ff::embed(c, target)).collect::<Result<Vec<_>, _>>()?;
        Ok(AdditivePoly { field: target.clone(), coeffs })
    }

    /// f(x) for x in the coefficient field or any extension of it.
    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let k = x.field();
        let mut acc = k.zero();
        let mut xp = x.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xp = xp.frobenius();
            }
            if a.is_zero() {
                continue;
            }
            let a = if a.field() == k { a.clone() } else { ff::embed(a, k).expect("evaluation point in an extension") };
            acc = acc.add(&a.mul(&xp));
        }
        acc
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Result<Self, AddError> {
        if self.field != other.field {
            return Err(AddError::FieldMismatch);
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Ok(Self::raw(self.field.clone(), coeffs))
    }

    /// The composition self ∘ other, by the twisted convolution
    /// (f∘g)_{i+j} += a_i b_j^{p^i}.
    pub fn compose(&self, other: &Self) -> Result<Self, AddError> {
        if self.field != other.field {
            return Err(AddError::FieldMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::raw(self.field.clone(), Vec::new()));
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        let mut twisted: Vec<FieldElement> = other.coeffs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                twisted = twisted.iter().map(|b| b.frobenius()).collect();
            }
            for (j, b) in twisted.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Ok(Self::raw(self.field.clone(), out))
    }

    /// n-fold self-composition (n = 0 gives the identity).
    pub fn iterate(&self, n: usize) -> Self {
        (0..n).fold(AdditivePoly::identity(&self.field), |acc, _| self.compose(&acc).expect("same field"))
    }

    pub fn to_json(&self) -> AdditivePolyJson {
        AdditivePolyJson {
            field: self.field.descriptor(),
            a: self.coeffs.iter().map(|c| c.coords().to_vec()).collect(),
        }
    }

    pub fn from_json(j: &AdditivePolyJson) -> Result<Self, AddError> {
        let field = j.field.build()?;
        let coeffs = j.a.iter().map(|c| field.element(c)).collect::<Result<Vec<_>, _>>()?;
        Self::new(field, coeffs)
    }
}

/// `{"field": descriptor, "a": [coeff, ...]}` with `a` indexed by Frobenius
/// power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditivePolyJson {
    pub field: FieldDescriptor,
    pub a: Vec<Vec<u64>>,
}

/// The additive form of f when every nonzero coefficient sits at an
/// exponent p^i.
pub fn recognize_additive(f: &FqPoly) -> Option<AdditivePoly> {
    if f.is_zero() {
        return None;
    }
    let field = f.ring().clone();
    let p = field.p() as usize;
    let mut coeffs = Vec::new();
    for (e, c) in f.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let i = power_index(e, p)?;
        if coeffs.len() <= i {
            coeffs.resize(i + 1, field.zero());
        }
        coeffs[i] = c.clone();
    }
    Some(AdditivePoly { field, coeffs })
}

/// i with p^i = e.
fn power_index(mut e: usize, p: usize) -> Option<usize> {
    if e == 0 {
        return None;
    }
    let mut i = 0;
    while e.is_multiple_of(p) {
        e /= p;
        i += 1;
    }
    (e == 1).then_some(i)
}

/// Audit-only semantic check: f(0) = 0 and f(x+y) = f(x) + f(y) on `samples`
/// pseudo-random pairs from an extension with more than deg f elements.
pub fn semantic_additivity_check<R: Rng>(f: &FqPoly, samples: usize, rng: &mut R) -> Result<bool, AddError> {
    if f.is_zero() {
        return Err(AddError::ZeroPolynomial);
    }
    let base = f.ring();
    if !f.coeff(0).is_zero() {
        return Ok(false);
    }
    let deg = f.degree().unwrap() as u64;
    let mut l = 1;
    while base.p().checked_pow((base.degree() * l) as u32).is_some_and(|q| q <= deg) {
        l += 1;
    }
    let k = ff::make_field(base.p(), base.degree() * l, None)?;
    let g = ff::embed_poly(f, &k)?;
    let mut rand_elem = || {
        let coords: Vec<u64> = (0..k.degree()).map(|_| rng.gen_range(0..k.p())).collect();
        k.element(&coords).unwrap()
    };
    for _ in 0..samples {
        let (x, y) = (rand_elem(), rand_elem());
        if g.eval(&x.add(&y)) != g.eval(&x).add(&g.eval(&y)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The roots Z_n of f^n as an F_p-vector space.
#[derive(Debug, Clone)]
pub struct RootSpace {
    pub f: AdditivePoly,
    pub n: usize,
    /// f^n over the coefficient field.
    pub iterate: AdditivePoly,
    /// Field containing every root.
    pub ambient: FiniteField,
    /// First independent roots in sorted order.
    pub basis: Vec<FieldElement>,
    /// All p^{mn} roots, sorted.
    pub all_roots: Vec<FieldElement>,
}

impl RootSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn size(&self) -> usize {
        self.all_roots.len()
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.all_roots.binary_search(x).is_ok()
    }

    /// Index of x in the sorted root list.
    pub fn index_of(&self, x: &FieldElement) -> Option<usize> {
        self.all_roots.binary_search(x).ok()
    }

    /// Every F_p-combination of the basis, sorted.
    pub fn span(&self) -> Vec<FieldElement> {
        span_of(&self.basis, &self.ambient)
    }
}

/// All F_p-linear combinations of `basis`, sorted.
pub fn span_of(basis: &[FieldElement], ambient: &FiniteField) -> Vec<FieldElement> {
    let p = ambient.p();
    let mut out = vec![ambient.zero()];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * p as usize);
        for x in &out {
            let mut y = x.clone();
            for _ in 0..p {
                next.push(y.clone());
                y = y.add(b);
            }
        }
        out = next;
    }
    out.sort();
    out.dedup();
    out
}

/// Least L with all roots of the squarefree polynomial f in the degree-L
/// extension of its coefficient field: the order of the q-power Frobenius
/// on F_q[z]/(f).
fn frobenius_order(f: &FqPoly) -> usize {
    let k = f.ring();
    let z = Poly::x(k.clone()).rem(f);
    let mut h = z.clone();
    let mut l = 0;
    loop {
        for _ in 0..k.degree() {
            h = ff::pth_power_mod(&h, f);
        }
        l += 1;
        if h == z {
            return l;
        }
    }
}

/// Degree over F_p of the splitting field of f^n.
pub fn splitting_field_degree(f: &AdditivePoly, n: usize) -> Result<usize, AddError> {
    if !f.is_separable() {
        return Err(AddError::Inseparable);
    }
    let poly = f.iterate(n).to_poly();
    Ok(f.field().degree() * frobenius_order(&poly))
}

fn check_budget(f: &AdditivePoly, n: usize, budget: u64) -> Result<(), AddError> {
    if budget::within(f.p(), (f.m() * n) as u64, budget).is_none() {
        return Err(AddError::BudgetExceeded { needed: format!("{}^{}", f.p(), f.m() * n), budget });
    }
    Ok(())
}

/// Z_n inside its splitting field, under the active budget.
pub fn root_space(f: &AdditivePoly, n: usize) -> Result<RootSpace, AddError> {
    root_space_with_budget(f, n, budget::budget())
}

pub fn root_space_with_budget(f: &AdditivePoly, n: usize, budget: u64) -> Result<RootSpace, AddError> {
    if !f.is_separable() {
        return Err(AddError::Inseparable);
    }
    check_budget(f, n, budget)?;
    let big = ff::make_field(f.p(), splitting_field_degree(f, n)?, None)?;
    root_space_in(f, n, &big, budget)
}

/// Z_n computed inside a given ambient field, which must contain all
/// p^{mn} roots.
///
/// The roots are the kernel of the F_p-linear map x ↦ f^n(x) on the
/// ambient field, found by elimination on its coordinate matrix.
pub fn root_space_in(f: &AdditivePoly, n: usize, ambient: &FiniteField, budget: u64) -> Result<RootSpace, AddError> {
    if !f.is_separable() {
        return Err(AddError::Inseparable);
    }
    check_budget(f, n, budget)?;
    let p = f.p();
    let iterate = f.iterate(n);
    let fk = iterate.embedded(ambient)?;
    let k = ambient.degree();
    // row i, column j: coordinate i of f^n(e_j)
    let mut rows = vec![vec![0u64; k]; k];
    for j in 0..k {
        let mut e = vec![0u64; k];
        e[j] = 1;
        let img = fk.eval(&ambient.element(&e)?);
        for (i, &c) in img.coords().iter().enumerate() {
            rows[i][j] = c;
        }
    }
    let kernel = linalg::kernel(&rows, k, p);
    let expected = f.m() * n;
    if kernel.len() != expected {
        return Err(AddError::NotSplit(ambient.to_string()));
    }
    let generators: Vec<FieldElement> = kernel.iter().map(|v| ambient.element(v)).collect::<Result<_, _>>()?;
    let all_roots = span_of(&generators, ambient);
    let nonzero: Vec<Vec<u64>> = all_roots.iter().map(|r| r.coords().to_vec()).collect();
    let basis: Vec<FieldElement> =
        linalg::first_independent(&nonzero, p).into_iter().map(|i| all_roots[i].clone()).collect();

    let space = RootSpace { f: f.clone(), n, iterate, ambient: ambient.clone(), basis, all_roots };
    verify_root_space(&space)?;
    Ok(space)
}

/// Closure under addition and F_p-scaling, root property and exact size.
fn verify_root_space(z: &RootSpace) -> Result<(), AddError> {
    let fk = z.iterate.embedded(&z.ambient)?;
    let p = z.ambient.p();
    let expected = p.pow((z.f.m() * z.n) as u32) as usize;
    let set: HashSet<&FieldElement> = z.all_roots.iter().collect();
    let ok = z.all_roots.len() == expected
        && z.basis.len() == z.f.m() * z.n
        && z.basis.iter().all(|b| fk.eval(b).is_zero())
        && z.all_roots.iter().all(|r| {
            z.basis.iter().all(|b| set.contains(&r.add(b))) && (1..p).all(|l| set.contains(&r.scale_int(l)))
        });
    if ok {
        Ok(())
    } else {
        Err(AddError::NotSplit(z.ambient.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fld(p: u64, k: usize) -> FiniteField {
        make_field(p, k, None).unwrap()
    }

    #[test]
    fn recognize_examples() {
        let f2 = fld(2, 1);
        let f3 = fld(3, 1);
        let a = recognize_additive(&Poly::from_ints(f2.clone(), &[0, 1, 0, 0, 1])).unwrap();
        assert_eq!(a, AdditivePoly::from_ints(&f2, &[1, 0, 1]).unwrap());
        assert_eq!(a.m(), 2);
        let b = recognize_additive(&Poly::from_ints(f3.clone(), &[0, -1, 0, 1])).unwrap();
        assert_eq!(b, AdditivePoly::from_ints(&f3, &[-1, 1]).unwrap());
        assert!(recognize_additive(&Poly::from_ints(f2.clone(), &[1, 1, 1])).is_none());
        assert!(recognize_additive(&Poly::from_ints(f3, &[0, 1, 1])).is_none());
    }

    #[test]
    fn compose_examples() {
        let f2 = fld(2, 1);
        let f = AdditivePoly::from_ints(&f2, &[1, 1]).unwrap();
        assert_eq!(f.compose(&f).unwrap(), AdditivePoly::from_ints(&f2, &[1, 0, 1]).unwrap());
        assert_eq!(f.compose(&AdditivePoly::identity(&f2)).unwrap(), f);
        // (z^p - cz)∘(z^p - cz) = z^{p^2} - (c^p + c)z^p + c^2 z
        let k = fld(5, 2);
        let c = k.element(&[2, 3]).unwrap();
        let g = AdditivePoly::new(k.clone(), vec![c.neg(), k.one()]).unwrap();
        let expect = AdditivePoly::new(k.clone(), vec![c.mul(&c), c.pow(5).add(&c).neg(), k.one()]).unwrap();
        assert_eq!(g.compose(&g).unwrap(), expect);
        assert_eq!(g.compose(&g).unwrap().to_poly(), g.to_poly().compose(&g.to_poly()));
        assert_eq!(f.compose(&g).unwrap_err(), AddError::FieldMismatch);
    }

    #[test]
    fn iterate_and_separability() {
        let f3 = fld(3, 1);
        let f = AdditivePoly::from_ints(&f3, &[-1, 1]).unwrap();
        assert_eq!(f.iterate(1), f);
        let f2 = fld(2, 1);
        let g = AdditivePoly::from_ints(&f2, &[1, 1]).unwrap();
        assert_eq!(g.iterate(2), AdditivePoly::from_ints(&f2, &[1, 0, 1]).unwrap());
        assert!(f.is_separable());
        assert!(!AdditivePoly::from_ints(&f3, &[0, 0, 1]).unwrap().is_separable());
        assert!(g.iterate(2).is_separable());
    }

    #[test]
    fn root_space_examples() {
        let f2 = fld(2, 1);
        let g = AdditivePoly::from_ints(&f2, &[1, 1]).unwrap();
        let z1 = root_space(&g, 1).unwrap();
        assert_eq!(z1.basis, vec![z1.ambient.one()]);
        assert_eq!(z1.all_roots, vec![z1.ambient.zero(), z1.ambient.one()]);
        let z2 = root_space(&g, 2).unwrap();
        assert_eq!(z2.dim(), 2);
        assert_eq!(z2.ambient.degree(), 2);
        assert_eq!(z2.all_roots, z2.ambient.elements().collect::<Vec<_>>());
        let f3 = fld(3, 1);
        let h = AdditivePoly::from_ints(&f3, &[-1, 1]).unwrap();
        let z = root_space(&h, 2).unwrap();
        assert_eq!((z.size(), z.dim()), (9, 2));
        assert_eq!(root_space(&AdditivePoly::from_ints(&f3, &[0, 1]).unwrap(), 1).unwrap_err(), AddError::Inseparable);
        assert!(matches!(root_space_with_budget(&h, 5, 100), Err(AddError::BudgetExceeded { .. })));
    }

    #[test]
    fn root_space_matches_exhaustive_roots() {
        // independent oracle: the roots_in enumeration of f^n in the same field
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, k, m, n) in [(2u64, 1usize, 1usize, 3usize), (2, 2, 2, 1), (3, 1, 1, 2), (3, 2, 1, 2), (5, 1, 1, 2)] {
            let f = AdditivePoly::random_separable(&fld(p, k), m, &mut rng);
            let z = root_space(&f, n).unwrap();
            let oracle: Vec<FieldElement> =
                ff::roots_in(&f.iterate(n).to_poly(), &z.ambient).unwrap().into_iter().map(|(r, _)| r).collect();
            assert_eq!(z.all_roots, oracle, "{f}");
            assert_eq!(z.span(), z.all_roots);
        }
    }

    #[test]
    fn display() {
        let f3 = fld(3, 1);
        assert_eq!(AdditivePoly::from_ints(&f3, &[-1, 1]).unwrap().to_string(), "z^3 - z");
        let f9 = fld(3, 2);
        let g = AdditivePoly::new(f9.clone(), vec![f9.generator(), f9.zero(), f9.one()]).unwrap();
        assert_eq!(g.to_string(), "z^9 + (x)z");
    }

    #[test]
    fn json_roundtrip() {
        let f = AdditivePoly::from_ints(&fld(3, 2), &[1, 0, 2]).unwrap();
        let s = serde_json::to_string(&f.to_json()).unwrap();
        assert_eq!(s, r#"{"field":{"p":3,"k":2,"modulus":[1,0,1]},"a":[[1,0],[0,0],[2,0]]}"#);
        let back: AdditivePolyJson = serde_json::from_str(&s).unwrap();
        assert_eq!(AdditivePoly::from_json(&back).unwrap(), f);
    }

    #[test]
    fn semantic_check_agrees_with_syntax() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f3 = fld(3, 1);
        assert!(semantic_additivity_check(&Poly::from_ints(f3.clone(), &[0, 2, 0, 1]), 20, &mut rng).unwrap());
        assert!(!semantic_additivity_check(&Poly::from_ints(f3, &[0, 2, 1]), 20, &mut rng).unwrap());
    }

    fn small_case() -> impl Strategy<Value = (u64, usize, usize, u64)> {
        (prop_oneof![Just((2u64, 1usize)), Just((2, 2)), Just((3, 1)), Just((3, 2)), Just((5, 1))], 1usize..3, any::<u64>())
            .prop_map(|((p, k), m, seed)| (p, k, m, seed))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn additivity_on_extensions((p, k, m, seed) in small_case(), ext in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = AdditivePoly::random_separable(&fld(p, k), m, &mut rng);
            let big = fld(p, k * ext);
            let r = |rng: &mut ChaCha8Rng| big.element(&(0..big.degree()).map(|_| rng.gen_range(0..p)).collect::<Vec<_>>()).unwrap();
            let (x, y) = (r(&mut rng), r(&mut rng));
            prop_assert_eq!(f.eval(&x.add(&y)), f.eval(&x).add(&f.eval(&y)));
            for l in 0..p {
                prop_assert_eq!(f.eval(&x.scale_int(l)), f.eval(&x).scale_int(l));
            }
            let direct = ff::embed_poly(&f.to_poly(), &big).unwrap().eval(&x);
            prop_assert_eq!(f.eval(&x), direct);
        }

        #[test]
        fn ring_laws((p, k, m, seed) in small_case()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let fk = fld(p, k);
            let f = AdditivePoly::random_separable(&fk, m, &mut rng);
            let g = AdditivePoly::random_separable(&fk, 1, &mut rng);
            let h = AdditivePoly::random_separable(&fk, 2, &mut rng);
            prop_assert_eq!(f.compose(&g).unwrap().compose(&h).unwrap(), f.compose(&g.compose(&h).unwrap()).unwrap());
            prop_assert_eq!(
                f.add(&g).unwrap().compose(&h).unwrap(),
                f.compose(&h).unwrap().add(&g.compose(&h).unwrap()).unwrap()
            );
            prop_assert_eq!(
                f.compose(&g.add(&h).unwrap()).unwrap(),
                f.compose(&g).unwrap().add(&f.compose(&h).unwrap()).unwrap()
            );
        }

        #[test]
        fn iterate_laws((p, k, m, seed) in small_case(), a in 1usize..3, b in 1usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = AdditivePoly::random_separable(&fld(p, k), m, &mut rng);
            prop_assert_eq!(f.iterate(a + b), f.iterate(a).compose(&f.iterate(b)).unwrap());
            prop_assert_eq!(f.iterate(a + b).coeff(0), f.coeff(0).pow((a + b) as u64));
        }

        #[test]
        fn root_space_dimension((p, k, m, seed) in small_case(), n in 1usize..3) {
            prop_assume!(p.pow((m * n) as u32) <= 256);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = AdditivePoly::random_separable(&fld(p, k), m, &mut rng);
            let z = root_space(&f, n).unwrap();
            prop_assert_eq!(z.dim(), m * n);
            prop_assert_eq!(z.span(), z.all_roots.clone());
        }
    }
}
