//! Exact arithmetic in Q(ζ_p) and in Q(ζ_p)[s]/(s^{p-1} - a).
//!
//! Elements of Q(ζ_p) are coordinate vectors in the basis 1, ζ, …, ζ^{p-2}.
//! Because λ = ζ - 1 is totally ramified with residue degree 1 ((λ)^{p-1} =
//! (p)), the λ-adic valuation of x is the p-adic valuation of its norm.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::ff::{self, FieldElement, FiniteField};
use crate::field::{rational_roots, Field, Rationals, Ring};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("negative valuation {0}: no residue")]
    NegativeValuation(String),
    #[error("coordinate denominator divisible by {0}")]
    BadDenominator(u64),
    #[error("zero divisor: shares the factor {0} with the relation")]
    ZeroDivisor(String),
    #[error("s̄^(p-1) = {got} but the relation needs {want}")]
    BadResidueChoice { got: String, want: String },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("malformed JSON: {0}")]
    BadJson(String),
}

/// λ-adic valuation, normalized by v(λ) = 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(BigRational),
    Infinite,
}

impl Valuation {
    pub fn int(n: i64) -> Self {
        Valuation::Finite(BigRational::from_integer(n.into()))
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Valuation::Finite(v) if v.is_integer() => v.to_integer().to_i64(),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.as_i64() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_str(&self.to_string()),
        }
    }
}

fn check_prime(p: u64) -> Result<(), CycError> {
    if ff::make_field(p, 1, None).is_err() {
        return Err(CycError::NotPrime(p));
    }
    Ok(())
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// v_p of a nonzero rational.
pub fn padic_val(x: &BigRational, p: u64) -> i64 {
    let pb = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut c = 0;
        while !n.is_zero() && (&n % &pb).is_zero() {
            n /= &pb;
            c += 1;
        }
        c
    };
    count(x.numer()) - count(x.denom())
}

/// An element Σ c_i ζ^i of Q(ζ_p), 0 ≤ i ≤ p-2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    p: u64,
    coords: Vec<BigRational>,
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Poly::new(Rationals, self.coords.clone()).fmt_var("ζ"))
    }
}

impl CyclotomicNumber {
    fn n(p: u64) -> usize {
        (p - 1) as usize
    }

    pub fn from_rational(p: u64, r: BigRational) -> Self {
        let mut coords = vec![BigRational::zero(); Self::n(p)];
        coords[0] = r;
        CyclotomicNumber { p, coords }
    }

    pub fn from_int(p: u64, n: i64) -> Self {
        Self::from_rational(p, q(n))
    }

    pub fn zero(p: u64) -> Self {
        Self::from_int(p, 0)
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(p, 1)
    }

    /// Element from rational coordinates (reduced if p-1 or more are given).
    pub fn from_coords(p: u64, coords: Vec<BigRational>) -> Self {
        Self::reduce(p, coords)
    }

    pub fn from_int_coords(p: u64, coords: &[i64]) -> Self {
        Self::reduce(p, coords.iter().map(|&c| q(c)).collect())
    }

    /// ζ_p (equal to -1 when p = 2).
    pub fn zeta(p: u64) -> Self {
        let mut t = vec![BigRational::zero(); p as usize];
        t[1 % p as usize] = BigRational::one();
        if p == 2 {
            return Self::from_int(2, -1);
        }
        Self::reduce(p, t)
    }

    /// ζ^k for any integer k.
    pub fn zeta_pow(p: u64, k: i64) -> Self {
        let e = k.rem_euclid(p as i64) as usize;
        let mut t = vec![BigRational::zero(); p as usize];
        t[e] = BigRational::one();
        Self::reduce(p, t)
    }

    /// The uniformizer λ = ζ - 1.
    pub fn lambda(p: u64) -> Self {
        Self::zeta(p).sub(&Self::one(p))
    }

    /// Reduces a vector indexed by exponents 0..len (any length) using
    /// ζ^p = 1 and ζ^{p-1} = -(1 + ζ + ⋯ + ζ^{p-2}).
    fn reduce(p: u64, t: Vec<BigRational>) -> Self {
        let pu = p as usize;
        let mut full = vec![BigRational::zero(); pu];
        for (i, c) in t.into_iter().enumerate() {
            full[i % pu] += c;
        }
        let top = full.pop().unwrap();
        if !top.is_zero() {
            for c in full.iter_mut() {
                *c -= &top;
            }
        }
        CyclotomicNumber { p, coords: full }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value when x lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coords[1..].iter().all(|c| c.is_zero()).then(|| &self.coords[0])
    }

    /// All coordinates are integers, i.e. x ∈ Z[ζ_p].
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn add(&self, o: &Self) -> Self {
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        CyclotomicNumber { p: self.p, coords }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect();
        CyclotomicNumber { p: self.p, coords }
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber { p: self.p, coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CyclotomicNumber { p: self.p, coords: self.coords.iter().map(|a| a * r).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let pu = self.p as usize;
        let mut t = vec![BigRational::zero(); pu];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                t[(i + j) % pu] += a * b;
            }
        }
        Self::reduce(self.p, t)
    }

    pub fn pow(&self, e: u64) -> Self {
        Cyclotomic::new_unchecked(self.p).pow(self, e)
    }

    /// The automorphism σ_k: ζ ↦ ζ^k, p ∤ k.
    pub fn sigma(&self, k: u64) -> Self {
        let pu = self.p as usize;
        let mut t = vec![BigRational::zero(); pu];
        for (i, c) in self.coords.iter().enumerate() {
            t[(i * k as usize) % pu] += c;
        }
        Self::reduce(self.p, t)
    }

    /// N_{Q(ζ)/Q}(x), the product of all Galois conjugates.
    pub fn norm(&self) -> BigRational {
        let prod = (1..self.p).fold(Self::one(self.p), |acc, k| acc.mul(&self.sigma(k)));
        debug_assert!(prod.as_rational().is_some(), "norm must be rational");
        prod.coords[0].clone()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let conj = (2..self.p).fold(Self::one(self.p), |acc, k| acc.mul(&self.sigma(k)));
        let n = self.mul(&conj);
        let n = n.as_rational().expect("norm is rational").clone();
        Some(conj.scale(&n.recip()))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn to_json(&self) -> Value {
        json!({"p": self.p, "coords": self.coords.iter().map(rat_json).collect::<Vec<_>>()})
    }

    pub fn from_json(v: &Value) -> Result<Self, CycError> {
        let p = v["p"].as_u64().ok_or_else(|| CycError::BadJson("missing p".into()))?;
        check_prime(p)?;
        let coords = v["coords"]
            .as_array()
            .ok_or_else(|| CycError::BadJson("missing coords".into()))?
            .iter()
            .map(rat_from_json)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::reduce(p, coords))
    }
}

fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

/// `[num, den]`, with integers too large for i64 written as strings.
pub fn rat_json(r: &BigRational) -> Value {
    json!([int_json(r.numer()), int_json(r.denom())])
}

fn rat_from_json(v: &Value) -> Result<BigRational, CycError> {
    let bad = || CycError::BadJson(format!("expected [num, den], got {v}"));
    let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
    let int = |x: &Value| -> Result<BigInt, CycError> {
        if let Some(i) = x.as_i64() {
            return Ok(i.into());
        }
        x.as_str().and_then(|s| s.parse().ok()).ok_or_else(bad)
    };
    let den = int(&arr[1])?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(int(&arr[0])?, den))
}

/// v_λ(x) = v_p(N(x)); +∞ at 0.
pub fn lambda_val(x: &CyclotomicNumber) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::int(padic_val(&x.norm(), x.p))
}

/// Reduction to F_p: ζ ↦ 1, then coordinates mod p.
pub fn residue(x: &CyclotomicNumber) -> Result<FieldElement, CycError> {
    let v = lambda_val(x);
    if v < Valuation::int(0) {
        return Err(CycError::NegativeValuation(v.to_string()));
    }
    residue_int(&x.coords.iter().sum::<BigRational>(), x.p)
}

fn residue_int(r: &BigRational, p: u64) -> Result<FieldElement, CycError> {
    let pb = BigInt::from(p);
    let den = r.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(CycError::BadDenominator(p));
    }
    let fp = ff::prime_field(p).expect("prime checked");
    let num = r.numer().mod_floor(&pb).to_i64().unwrap();
    let den = den.to_i64().unwrap();
    Ok(fp.from_int(num).div_by(&fp.from_int(den)))
}

/// Q(ζ_p) as a field context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    p: u64,
}

impl Cyclotomic {
    pub fn new(p: u64) -> Result<Self, CycError> {
        check_prime(p)?;
        Ok(Cyclotomic { p })
    }

    fn new_unchecked(p: u64) -> Self {
        Cyclotomic { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn zeta(&self) -> CyclotomicNumber {
        CyclotomicNumber::zeta(self.p)
    }

    pub fn lambda(&self) -> CyclotomicNumber {
        CyclotomicNumber::lambda(self.p)
    }

    pub fn rational(&self, r: BigRational) -> CyclotomicNumber {
        CyclotomicNumber::from_rational(self.p, r)
    }
}

impl Ring for Cyclotomic {
    type Elem = CyclotomicNumber;

    fn zero(&self) -> CyclotomicNumber {
        CyclotomicNumber::zero(self.p)
    }
    fn one(&self) -> CyclotomicNumber {
        CyclotomicNumber::one(self.p)
    }
    fn from_i64(&self, n: i64) -> CyclotomicNumber {
        CyclotomicNumber::from_int(self.p, n)
    }
    fn is_zero(&self, a: &CyclotomicNumber) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        a.add(b)
    }
    fn sub(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        a.sub(b)
    }
    fn neg(&self, a: &CyclotomicNumber) -> CyclotomicNumber {
        a.neg()
    }
    fn mul(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        a.mul(b)
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn fmt_elem(&self, a: &CyclotomicNumber) -> String {
        a.to_string()
    }
    fn needs_parens(&self, a: &CyclotomicNumber) -> bool {
        match a.as_rational() {
            Some(r) => !r.is_integer(),
            None => true,
        }
    }
}

impl Field for Cyclotomic {
    fn inv(&self, a: &CyclotomicNumber) -> Option<CyclotomicNumber> {
        a.inv()
    }

    /// Roots from linear factors plus rational roots; other roots in
    /// Q(ζ_p) are not searched for.
    fn roots(&self, coeffs: &[CyclotomicNumber]) -> Vec<CyclotomicNumber> {
        let f = Poly::new(*self, coeffs.to_vec());
        let mut out: Vec<CyclotomicNumber> = Vec::new();
        let Some(d) = f.degree() else { return out };
        if d == 0 {
            return out;
        }
        if d == 1 {
            return vec![f.coeff(0).div(&f.coeff(1)).unwrap().neg()];
        }
        for (g, _) in f.squarefree_decomposition() {
            if g.degree() == Some(1) {
                out.push(g.coeff(0).div(&g.coeff(1)).unwrap().neg());
            }
        }
        // rational roots: common roots of the coordinate polynomials
        let n = (self.p - 1) as usize;
        let coord_polys: Vec<Poly<Rationals>> = (0..n)
            .map(|j| Poly::new(Rationals, f.coeffs().iter().map(|c| c.coords[j].clone()).collect()))
            .collect();
        let g = coord_polys.iter().fold(Poly::zero(Rationals), |acc, h| acc.gcd(h));
        if !g.is_constant() {
            for r in rational_roots(g.coeffs()) {
                let r = self.rational(r);
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
        out
    }
}

/// Result of checking the cyclotomic identities at p.
#[derive(Debug, Clone, serde::Serialize)]
pub struct IdentityReport {
    pub p: u64,
    /// ∏_{i=1}^{p-1} (1 - ζ^i)
    pub product: String,
    pub product_equals_p: bool,
    pub lambda_val_p: Valuation,
    /// residue of p/λ^{p-1}, printed in the symmetric range
    pub wilson_residue: i64,
    /// residue of 1 + ζ + ⋯ + ζ^{i-1} for i = 1..p-1
    pub partial_sum_residues: Vec<u64>,
    pub all_hold: bool,
}

fn signed_residue(x: &FieldElement) -> i64 {
    let p = x.field().p();
    let c = x.coords()[0];
    if c > p / 2 {
        c as i64 - p as i64
    } else {
        c as i64
    }
}

pub fn verify_cyclotomic_identities(p: u64) -> Result<IdentityReport, CycError> {
    check_prime(p)?;
    let one = CyclotomicNumber::one(p);
    let product = (1..p).fold(one.clone(), |acc, i| acc.mul(&one.sub(&CyclotomicNumber::zeta_pow(p, i as i64))));
    let product_equals_p = product == CyclotomicNumber::from_int(p, p as i64);
    let lam = CyclotomicNumber::lambda(p);
    let lambda_val_p = lambda_val(&CyclotomicNumber::from_int(p, p as i64));
    let wilson = CyclotomicNumber::from_int(p, p as i64).div(&lam.pow(p - 1)).unwrap();
    let wilson_res = residue(&wilson)?;
    let wilson_residue = signed_residue(&wilson_res);
    let mut partial = Vec::new();
    let mut acc = CyclotomicNumber::zero(p);
    for i in 1..p {
        acc = acc.add(&CyclotomicNumber::zeta_pow(p, i as i64 - 1));
        partial.push(residue(&acc)?.coords()[0]);
    }
    let all_hold = product_equals_p
        && lambda_val_p == Valuation::int(p as i64 - 1)
        && wilson_res == wilson_res.field().from_int(-1)
        && partial.iter().enumerate().all(|(i, &r)| r == (i as u64 + 1) % p);
    Ok(IdentityReport {
        p,
        product: product.to_string(),
        product_equals_p,
        lambda_val_p,
        wilson_residue,
        partial_sum_residues: partial,
        all_hold,
    })
}

/// Q(ζ_p)[s]/(s^{p-1} - a). For p = 2 the relation is s = a.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SRing {
    p: u64,
    a: BigInt,
}

/// Σ c_j s^j with j < p - 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SElem {
    coeffs: Vec<CyclotomicNumber>,
}

impl fmt::Debug for SElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.coeffs[0].p;
        f.write_str(&Poly::new(Cyclotomic::new_unchecked(p), self.coeffs.clone()).fmt_var("s"))
    }
}

impl fmt::Display for SElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl SElem {
    pub fn coeffs(&self) -> &[CyclotomicNumber] {
        &self.coeffs
    }

    /// The element when it has no s-terms.
    pub fn as_constant(&self) -> Option<&CyclotomicNumber> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| &self.coeffs[0])
    }
}

impl SRing {
    /// Requires a ≠ 0 and p ∤ a.
    pub fn new(p: u64, a: i64) -> Result<Self, CycError> {
        check_prime(p)?;
        if a == 0 || a.rem_euclid(p as i64) == 0 {
            return Err(CycError::BadParameter(format!("need a nonzero with {p} ∤ a, got a = {a}")));
        }
        Ok(SRing { p, a: a.into() })
    }

    /// Only requires a ≠ 0; s may then be a non-unit at λ.
    pub fn with_any_parameter(p: u64, a: i64) -> Result<Self, CycError> {
        check_prime(p)?;
        if a == 0 {
            return Err(CycError::BadParameter("a = 0".into()));
        }
        Ok(SRing { p, a: a.into() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn base(&self) -> Cyclotomic {
        Cyclotomic::new_unchecked(self.p)
    }

    fn n(&self) -> usize {
        (self.p - 1) as usize
    }

    fn a_cyc(&self) -> CyclotomicNumber {
        CyclotomicNumber::from_rational(self.p, BigRational::from_integer(self.a.clone()))
    }

    pub fn constant(&self, c: CyclotomicNumber) -> SElem {
        let mut coeffs = vec![CyclotomicNumber::zero(self.p); self.n()];
        coeffs[0] = c;
        SElem { coeffs }
    }

    /// The class of s.
    pub fn s(&self) -> SElem {
        if self.p == 2 {
            return self.constant(self.a_cyc());
        }
        let mut coeffs = vec![CyclotomicNumber::zero(self.p); self.n()];
        coeffs[1] = CyclotomicNumber::one(self.p);
        SElem { coeffs }
    }

    /// Reduces Σ t_j s^j of any length.
    pub fn from_coeffs(&self, t: Vec<CyclotomicNumber>) -> SElem {
        let n = self.n();
        let mut out = vec![CyclotomicNumber::zero(self.p); n];
        // s^j = a^{j div n} s^{j mod n}
        let a = self.a_cyc();
        for (j, c) in t.into_iter().enumerate() {
            let mut c = c;
            for _ in 0..j / n {
                c = c.mul(&a);
            }
            out[j % n] = out[j % n].add(&c);
        }
        SElem { coeffs: out }
    }

    fn as_poly(&self, x: &SElem) -> Poly<Cyclotomic> {
        Poly::new(self.base(), x.coeffs.clone())
    }

    fn relation(&self) -> Poly<Cyclotomic> {
        let b = self.base();
        Poly::monomial(b, CyclotomicNumber::one(self.p), self.n()).sub(&Poly::constant(b, self.a_cyc()))
    }

    /// Inverse, or the common factor with s^{p-1} - a.
    pub fn inv(&self, x: &SElem) -> Result<SElem, CycError> {
        let xp = self.as_poly(x);
        if xp.is_zero() {
            return Err(CycError::ZeroDivisor(self.relation().fmt_var("s")));
        }
        let (g, u, _) = xp.ext_gcd(&self.relation());
        if !g.is_constant() {
            return Err(CycError::ZeroDivisor(g.fmt_var("s")));
        }
        Ok(self.from_coeffs(u.rem(&self.relation()).into_coeffs()))
    }

    pub fn div(&self, x: &SElem, y: &SElem) -> Result<SElem, CycError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    /// N_{S/Q(ζ)}(x): determinant of multiplication by x.
    pub fn relative_norm(&self, x: &SElem) -> CyclotomicNumber {
        let n = self.n();
        let b = self.base();
        // column j = x s^j
        let mut m: Vec<Vec<CyclotomicNumber>> = vec![vec![b.zero(); n]; n];
        let mut col = x.clone();
        let s = self.s();
        for j in 0..n {
            for (i, c) in col.coeffs.iter().enumerate() {
                m[i][j] = c.clone();
            }
            col = self.mul(&col, &s);
        }
        determinant(&b, m)
    }

    /// v_λ(N_{S/Q(ζ)}(x)) / (p - 1). When s is a unit this is the common
    /// valuation at every prime above λ, since s^{p-1} - a is then
    /// unramified at λ.
    pub fn valuation(&self, x: &SElem) -> Valuation {
        match lambda_val(&self.relative_norm(x)) {
            Valuation::Infinite => Valuation::Infinite,
            Valuation::Finite(v) => Valuation::Finite(v / BigRational::from_integer((self.p - 1).into())),
        }
    }

    /// Reduction with s ↦ s̄, where s̄^{p-1} must equal a mod p.
    pub fn residue_s(&self, x: &SElem, sbar: &FieldElement) -> Result<FieldElement, CycError> {
        let k = sbar.field();
        if k.p() != self.p {
            return Err(CycError::BadParameter(format!("s̄ lives in characteristic {}", k.p())));
        }
        let a_mod = k.from_int(self.a.mod_floor(&BigInt::from(self.p)).to_i64().unwrap());
        let pow = sbar.pow(self.p - 1);
        if self.p > 2 && pow != a_mod {
            return Err(CycError::BadResidueChoice { got: pow.to_string(), want: a_mod.to_string() });
        }
        if self.p == 2 && *sbar != a_mod {
            return Err(CycError::BadResidueChoice { got: sbar.to_string(), want: a_mod.to_string() });
        }
        let mut acc = k.zero();
        let mut sp = k.one();
        for c in &x.coeffs {
            let r = residue(c)?;
            acc = acc.add(&ff::embed(&r, k).expect("prime field embeds").mul(&sp));
            sp = sp.mul(sbar);
        }
        Ok(acc)
    }

    pub fn to_json(&self, x: &SElem) -> Value {
        json!({
            "p": self.p,
            "a": int_json(&self.a),
            "coeffs": x.coeffs.iter().map(|c| c.coords.iter().map(rat_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Determinant over a field by Gaussian elimination.
fn determinant<F: Field>(field: &F, mut m: Vec<Vec<F::Elem>>) -> F::Elem {
    let n = m.len();
    let mut det = field.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&r| !field.is_zero(&m[r][c])) else {
            return field.zero();
        };
        if pr != c {
            m.swap(pr, c);
            det = field.neg(&det);
        }
        let piv = m[c][c].clone();
        det = field.mul(&det, &piv);
        let pinv = field.inv(&piv).unwrap();
        for r in c + 1..n {
            if field.is_zero(&m[r][c]) {
                continue;
            }
            let f = field.mul(&m[r][c], &pinv);
            for k in c..n {
                let t = field.mul(&f, &m[c][k]);
                m[r][k] = field.sub(&m[r][k], &t);
            }
        }
    }
    det
}

impl Ring for SRing {
    type Elem = SElem;

    fn zero(&self) -> SElem {
        self.constant(CyclotomicNumber::zero(self.p))
    }
    fn one(&self) -> SElem {
        self.constant(CyclotomicNumber::one(self.p))
    }
    fn from_i64(&self, n: i64) -> SElem {
        self.constant(CyclotomicNumber::from_int(self.p, n))
    }
    fn is_zero(&self, a: &SElem) -> bool {
        a.coeffs.iter().all(|c| c.is_zero())
    }
    fn add(&self, a: &SElem, b: &SElem) -> SElem {
        SElem { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.add(y)).collect() }
    }
    fn sub(&self, a: &SElem, b: &SElem) -> SElem {
        SElem { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.sub(y)).collect() }
    }
    fn neg(&self, a: &SElem) -> SElem {
        SElem { coeffs: a.coeffs.iter().map(|x| x.neg()).collect() }
    }
    fn mul(&self, a: &SElem, b: &SElem) -> SElem {
        let n = self.n();
        let mut t = vec![CyclotomicNumber::zero(self.p); 2 * n - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                t[i + j] = t[i + j].add(&x.mul(y));
            }
        }
        self.from_coeffs(t)
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn fmt_elem(&self, a: &SElem) -> String {
        a.to_string()
    }
    fn needs_parens(&self, a: &SElem) -> bool {
        match a.as_constant() {
            Some(c) => self.base().needs_parens(c),
            None => true,
        }
    }
}

/// Residue field element helper for callers holding a prime field.
pub fn residue_in(x: &CyclotomicNumber, k: &FiniteField) -> Result<FieldElement, CycError> {
    let r = residue(x)?;
    Ok(ff::embed(&r, k).expect("prime field embeds everywhere"))
}
