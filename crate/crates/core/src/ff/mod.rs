//! Finite fields F_{p^k} with an explicit irreducible modulus, and
//! polynomial algebra over them.
//!
//! Elements are coordinate vectors in the power basis 1, x, …, x^{k-1} of a
//! root x of the modulus. Field handles are cheap to clone and compare by
//! `(p, modulus)`.

mod embed;
pub(crate) mod fp;
pub mod linalg;
mod roots;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, Ring};
use crate::poly::Poly;

pub use embed::{embed, embed_poly};
pub use fp::is_prime;
pub(crate) use roots::pth_power_mod;
pub use roots::{
    distinct_degree_factor, irreducible_factor_degrees, roots_in, solve_power, splitting_degree,
    squarefree_factor, EXHAUSTIVE_ROOT_LIMIT,
};

/// Polynomials over a finite field.
pub type FqPoly = Poly<FiniteField>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("modulus has degree {got}, expected {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("no embedding of F_{{{p}^{from}}} into F_{{{p}^{to}}}")]
    NoEmbedding { p: u64, from: usize, to: usize },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("zero has no roots of the requested power")]
    ZeroBase,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("invalid element: {0}")]
    BadElement(String),
}

struct FieldData {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
    /// Column j holds the coordinates of (x^j)^p.
    frobenius: OnceLock<Vec<Vec<u64>>>,
}

/// The finite field F_{p^k} = F_p[x]/(modulus).
#[derive(Clone)]
pub struct FiniteField(Arc<FieldData>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FiniteField {}

impl Hash for FiniteField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}[{:?}]", self.0.p, self.0.k, self.0.modulus)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.k)
        }
    }
}

fn default_field_cache() -> &'static Mutex<std::collections::HashMap<(u64, usize), FiniteField>> {
    static CACHE: OnceLock<Mutex<std::collections::HashMap<(u64, usize), FiniteField>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Builds F_{p^k}. Without an explicit modulus, the lexicographically
/// smallest monic irreducible polynomial of degree k is used (constant
/// coefficient varying fastest), so descriptors are reproducible.
pub fn make_field(p: u64, k: usize, modulus: Option<&[u64]>) -> Result<FiniteField, FieldError> {
    if !fp::is_prime(p) || p >= 1 << 31 {
        return Err(FieldError::NotPrime(p));
    }
    if k == 0 {
        return Err(FieldError::DegreeMismatch { expected: 1, got: 0 });
    }
    match modulus {
        None => {
            if let Some(f) = default_field_cache().lock().unwrap().get(&(p, k)) {
                return Ok(f.clone());
            }
            let m = fp::smallest_irreducible(p, k);
            let field = FiniteField::from_parts(p, k, m);
            default_field_cache().lock().unwrap().insert((p, k), field.clone());
            Ok(field)
        }
        Some(m) => {
            let m: Vec<u64> = m.iter().map(|c| c % p).collect();
            let m = fp::trim(m);
            let got = m.len().saturating_sub(1);
            if got != k {
                return Err(FieldError::DegreeMismatch { expected: k, got });
            }
            if m[k] != 1 {
                return Err(FieldError::NotMonic);
            }
            if !fp::is_irreducible(&m, p) {
                return Err(FieldError::ReducibleModulus(p));
            }
            Ok(FiniteField::from_parts(p, k, m))
        }
    }
}

/// The prime field F_p (modulus z).
pub fn prime_field(p: u64) -> Result<FiniteField, FieldError> {
    make_field(p, 1, None)
}

impl FiniteField {
    fn from_parts(p: u64, k: usize, modulus: Vec<u64>) -> Self {
        FiniteField(Arc::new(FieldData { p, k, modulus, frobenius: OnceLock::new() }))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Extension degree over F_p.
    pub fn degree(&self) -> usize {
        self.0.k
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.0.p).pow(self.0.k as u32)
    }

    /// Field order when it fits in a u64.
    pub fn order_u64(&self) -> Option<u64> {
        self.0.p.checked_pow(self.0.k as u32)
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.0.p, k: self.0.k, modulus: self.0.modulus.clone() }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), coords: vec![0; self.0.k] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = self.0.p as i64;
        let mut coords = vec![0; self.0.k];
        coords[0] = n.rem_euclid(p) as u64;
        FieldElement { field: self.clone(), coords }
    }

    /// Element from power-basis coordinates; missing trailing coordinates
    /// are zero.
    pub fn element(&self, coords: &[u64]) -> Result<FieldElement, FieldError> {
        if coords.len() > self.0.k {
            return Err(FieldError::BadElement(format!(
                "{} coordinates for a degree-{} field",
                coords.len(),
                self.0.k
            )));
        }
        let mut c: Vec<u64> = coords.iter().map(|x| x % self.0.p).collect();
        c.resize(self.0.k, 0);
        Ok(FieldElement { field: self.clone(), coords: c })
    }

    /// Element from signed coordinates (reduced mod p).
    pub fn element_signed(&self, coords: &[i64]) -> Result<FieldElement, FieldError> {
        let p = self.0.p as i64;
        let c: Vec<u64> = coords.iter().map(|x| x.rem_euclid(p) as u64).collect();
        self.element(&c)
    }

    /// The class of x, a root of the modulus.
    pub fn generator(&self) -> FieldElement {
        if self.0.k == 1 {
            // root of the linear modulus z + c0
            return self.from_int(-(self.0.modulus[0] as i64));
        }
        let mut coords = vec![0; self.0.k];
        coords[1] = 1;
        FieldElement { field: self.clone(), coords }
    }

    /// All elements in lexicographic coordinate order, lazily. Exhausting
    /// the iterator is only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let p = self.0.p;
        let mut next = Some(vec![0u64; self.0.k]);
        std::iter::from_fn(move || {
            let coords = next.take()?;
            // coordinate 0 is the most significant digit
            let mut succ = coords.clone();
            for i in (0..succ.len()).rev() {
                succ[i] += 1;
                if succ[i] < p {
                    next = Some(succ);
                    break;
                }
                succ[i] = 0;
            }
            Some(FieldElement { field: self.clone(), coords })
        })
    }

    fn frobenius_columns(&self) -> &Vec<Vec<u64>> {
        self.0.frobenius.get_or_init(|| {
            let k = self.0.k;
            let xp = self.generator().pow(self.0.p);
            let mut cols = Vec::with_capacity(k);
            let mut cur = self.one();
            for _ in 0..k {
                cols.push(cur.coords.clone());
                cur = cur.mul(&xp);
            }
            cols
        })
    }

    fn reduce(&self, mut t: Vec<u64>) -> Vec<u64> {
        let p = self.0.p;
        let k = self.0.k;
        let m = &self.0.modulus;
        for x in t.iter_mut() {
            *x %= p;
        }
        if t.len() > k {
            for i in (k..t.len()).rev() {
                let c = t[i] % p;
                if c == 0 {
                    continue;
                }
                for j in 0..k {
                    let idx = i - k + j;
                    t[idx] = (t[idx] + fp::mulmod(c, p - m[j] % p, p)) % p;
                }
                t[i] = 0;
            }
            t.truncate(k);
        }
        t.resize(k, 0);
        t
    }
}

impl Ring for FiniteField {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FiniteField::zero(self)
    }
    fn one(&self) -> FieldElement {
        FiniteField::one(self)
    }
    fn from_i64(&self, n: i64) -> FieldElement {
        self.from_int(n)
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a.add(b)
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a.sub(b)
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        a.neg()
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a.mul(b)
    }
    fn characteristic(&self) -> u64 {
        self.0.p
    }
    fn fmt_elem(&self, a: &FieldElement) -> String {
        a.to_string()
    }
    fn needs_parens(&self, a: &FieldElement) -> bool {
        a.coords[1..].iter().any(|&c| c != 0)
    }
    fn pow(&self, a: &FieldElement, e: u64) -> FieldElement {
        a.pow(e)
    }
}

impl Field for FiniteField {
    fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        a.inv()
    }
    fn pth_root(&self, a: &FieldElement) -> Option<FieldElement> {
        Some(a.pth_root())
    }
    fn roots(&self, coeffs: &[FieldElement]) -> Vec<FieldElement> {
        let f = Poly::new(self.clone(), coeffs.to_vec());
        if f.is_zero() {
            return Vec::new();
        }
        roots_in(&f, self)
            .expect("roots within the coefficient field")
            .into_iter()
            .map(|(r, _)| r)
            .collect()
    }
}

/// An element of a finite field, stored by power-basis coordinates.
#[derive(Clone)]
pub struct FieldElement {
    field: FiniteField,
    coords: Vec<u64>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.field == other.field
    }
}
impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

/// Lexicographic order on the coordinate list (constant coordinate first).
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}
impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Prime-field coordinates print in the symmetric range, so p-1 shows as -1.
fn signed(c: u64, p: u64) -> i64 {
    if p > 2 && c > p / 2 {
        c as i64 - p as i64
    } else {
        c as i64
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.field.p();
        let poly_view = Poly::new(
            crate::field::Rationals,
            self.coords
                .iter()
                .map(|&c| num_rational::BigRational::from_integer(signed(c, p).into()))
                .collect(),
        );
        f.write_str(&poly_view.fmt_var("x"))
    }
}

impl FieldElement {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }

    /// The prime-field value when the element lies in F_p.
    pub fn as_prime(&self) -> Option<u64> {
        if self.coords[1..].iter().all(|&c| c == 0) {
            Some(self.coords[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) {
        debug_assert!(self.field == other.field, "mixed-field arithmetic: {:?} vs {:?}", self.field, other.field);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.field.p();
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| (a + b) % p).collect();
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.field.p();
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| (a + p - b) % p).collect();
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn neg(&self) -> Self {
        let p = self.field.p();
        let coords = self.coords.iter().map(|a| (p - a) % p).collect();
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let k = self.field.degree();
        let p = self.field.p();
        if k == 1 {
            return FieldElement {
                field: self.field.clone(),
                coords: vec![fp::mulmod(self.coords[0], other.coords[0], p)],
            };
        }
        let mut t = vec![0u64; 2 * k - 1];
        // lazy accumulation is safe while k (p-1)^2 stays below 2^63
        let lazy = (p - 1).checked_mul(p - 1).and_then(|s| s.checked_mul(2 * k as u64)).is_some_and(|s| s < 1 << 63);
        for (i, &a) in self.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coords.iter().enumerate() {
                if lazy {
                    t[i + j] += a * b;
                } else {
                    t[i + j] = (t[i + j] + fp::mulmod(a, b, p)) % p;
                }
            }
        }
        let coords = self.field.reduce(t);
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn scale_int(&self, n: u64) -> Self {
        let p = self.field.p();
        let n = n % p;
        let coords = self.coords.iter().map(|&a| fp::mulmod(a, n, p)).collect();
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn pow_big(&self, e: &BigUint) -> Self {
        let mut acc = self.field.one();
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc);
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let p = self.field.p();
        if self.field.degree() == 1 {
            return Some(FieldElement { field: self.field.clone(), coords: vec![fp::inv(self.coords[0], p)] });
        }
        let a = fp::trim(self.coords.clone());
        let r = fp::inv_mod(&a, self.field.modulus(), p)?;
        let mut coords = r;
        coords.resize(self.field.degree(), 0);
        Some(FieldElement { field: self.field.clone(), coords })
    }

    /// Division by a nonzero element.
    pub fn div_by(&self, other: &Self) -> Self {
        self.mul(&other.inv().expect("division by zero in a finite field"))
    }

    /// x ↦ x^p, applied as an F_p-linear map.
    pub fn frobenius(&self) -> Self {
        let k = self.field.degree();
        if k == 1 {
            return self.clone();
        }
        let p = self.field.p();
        let cols = self.field.frobenius_columns();
        let mut out = vec![0u64; k];
        for (j, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(&cols[j]) {
                *o = (*o + fp::mulmod(c, v, p)) % p;
            }
        }
        FieldElement { field: self.field.clone(), coords: out }
    }

    /// x ↦ x^{p^i}.
    pub fn frobenius_pow(&self, i: usize) -> Self {
        let i = i % self.field.degree();
        (0..i).fold(self.clone(), |acc, _| acc.frobenius())
    }

    /// The unique p-th root, x^{p^{k-1}}.
    pub fn pth_root(&self) -> Self {
        self.frobenius_pow(self.field.degree() - 1)
    }

    /// Multiplicative order of a nonzero element (brute force over the
    /// divisors of q - 1; q must fit in a u64).
    pub fn multiplicative_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let n = self.field.order_u64()? - 1;
        let mut best = n;
        let mut m = n;
        let mut d = 2;
        while d * d <= m {
            while m % d == 0 {
                m /= d;
                while best % d == 0 && self.pow(best / d).is_one() {
                    best /= d;
                }
            }
            d += 1;
        }
        if m > 1 && self.pow(best / m).is_one() {
            best /= m;
        }
        Some(best)
    }
}

/// JSON field descriptor `{"p": int, "k": int, "modulus": [int, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub k: usize,
    /// Empty means the default modulus for (p, k).
    #[serde(default)]
    pub modulus: Vec<u64>,
}

impl FieldDescriptor {
    pub fn build(&self) -> Result<FiniteField, FieldError> {
        let modulus = (!self.modulus.is_empty()).then_some(self.modulus.as_slice());
        make_field(self.p, self.k, modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn make_field_examples() {
        let f3 = make_field(3, 1, None).unwrap();
        assert_eq!(f3.modulus(), &[0, 1]);
        let f9 = make_field(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(f9.order_u64(), Some(9));
        let f4 = make_field(2, 2, None).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn make_field_errors() {
        assert_eq!(make_field(4, 1, None).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(make_field(2, 2, Some(&[1, 0, 1])).unwrap_err(), FieldError::ReducibleModulus(2));
        assert_eq!(
            make_field(3, 3, Some(&[1, 0, 1])).unwrap_err(),
            FieldError::DegreeMismatch { expected: 3, got: 2 }
        );
    }

    #[test]
    fn descriptor_json_roundtrip() {
        let f = make_field(5, 3, None).unwrap();
        let s = serde_json::to_string(&f.descriptor()).unwrap();
        let d: FieldDescriptor = serde_json::from_str(&s).unwrap();
        assert_eq!(d.build().unwrap(), f);
    }

    #[test]
    fn generator_is_root_of_modulus() {
        for (p, k) in [(2, 3), (3, 4), (7, 2), (5, 1)] {
            let f = make_field(p, k, None).unwrap();
            let m = Poly::new(f.clone(), f.modulus().iter().map(|&c| f.from_int(c as i64)).collect());
            assert!(m.eval(&f.generator()).is_zero());
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_order_q_minus_1() {
        let f = make_field(3, 3, None).unwrap();
        let max = f.elements().filter_map(|x| x.multiplicative_order()).max().unwrap();
        assert_eq!(max, 26);
        for x in f.elements().filter(|x| !x.is_zero()) {
            assert!(x.pow(26).is_one());
        }
    }

    fn field_and_triples() -> impl Strategy<Value = (u64, usize, Vec<i64>, Vec<i64>, Vec<i64>)> {
        prop_oneof![Just((2u64, 5usize)), Just((3, 3)), Just((5, 2)), Just((7, 3)), Just((13, 1))].prop_flat_map(
            |(p, k)| {
                let c = proptest::collection::vec(0i64..p as i64, k);
                (Just(p), Just(k), c.clone(), c.clone(), c)
            },
        )
    }

    proptest! {
        #[test]
        fn field_axioms((p, k, a, b, c) in field_and_triples()) {
            let f = make_field(p, k, None).unwrap();
            let (x, y, z) = (f.element_signed(&a).unwrap(), f.element_signed(&b).unwrap(), f.element_signed(&c).unwrap());
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            if !x.is_zero() {
                prop_assert!(x.mul(&x.inv().unwrap()).is_one());
            }
            prop_assert_eq!(x.add(&y).pow(p), x.pow(p).add(&y.pow(p)));
            prop_assert_eq!(x.frobenius(), x.pow(p));
            prop_assert_eq!(x.pth_root().pow(p), x.clone());
        }
    }
}
