//! Dense univariate polynomials over a [`Ring`] context.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::{Field, Ring};

/// Dense polynomial, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> Hash for Poly<R> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.fmt_var("z"))
    }
}

impl<R: Ring> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("z"))
    }
}

impl<R: Ring> Poly<R> {
    pub fn new(ring: R, mut coeffs: Vec<R::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        Poly { ring, coeffs }
    }

    pub fn zero(ring: R) -> Self {
        Poly { ring, coeffs: Vec::new() }
    }

    pub fn one(ring: R) -> Self {
        let one = ring.one();
        Poly::new(ring, vec![one])
    }

    pub fn constant(ring: R, c: R::Elem) -> Self {
        Poly::new(ring, vec![c])
    }

    /// The variable z.
    pub fn x(ring: R) -> Self {
        Poly::monomial(ring.clone(), ring.one(), 1)
    }

    pub fn monomial(ring: R, c: R::Elem, degree: usize) -> Self {
        let mut coeffs = vec![ring.zero(); degree + 1];
        coeffs[degree] = c;
        Poly::new(ring, coeffs)
    }

    /// Polynomial with small integer coefficients (constant first).
    pub fn from_ints(ring: R, ints: &[i64]) -> Self {
        let coeffs = ints.iter().map(|&n| ring.from_i64(n)).collect();
        Poly::new(ring, coeffs)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&R::Elem> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> R::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let r = &self.ring;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => r.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(r.clone(), coeffs)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.ring.neg(c)).collect();
        Poly::new(self.ring.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.ring.clone());
        }
        let r = &self.ring;
        let mut out = vec![r.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if r.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if r.is_zero(b) {
                    continue;
                }
                out[i + j] = r.add(&out[i + j], &r.mul(a, b));
            }
        }
        Poly::new(r.clone(), out)
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.mul(a, c)).collect();
        Poly::new(self.ring.clone(), coeffs)
    }

    /// Multiply by z^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.ring.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { ring: self.ring.clone(), coeffs }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one(self.ring.clone());
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

    pub fn eval(&self, x: &R::Elem) -> R::Elem {
        let r = &self.ring;
        self.coeffs
            .iter()
            .rev()
            .fold(r.zero(), |acc, c| r.add(&r.mul(&acc, x), c))
    }

    /// self ∘ g.
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(self.ring.clone()), |acc, c| {
                acc.mul(g).add(&Poly::constant(self.ring.clone(), c.clone()))
            })
    }

    pub fn derivative(&self) -> Self {
        let r = &self.ring;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| r.mul(&r.from_i64(i as i64), c))
            .collect();
        Poly::new(r.clone(), coeffs)
    }

    pub fn map_coeffs<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> Poly<S> {
        let coeffs = self.coeffs.iter().map(f).collect();
        Poly::new(target, coeffs)
    }

    /// Human-readable form with the given variable name, highest degree first.
    pub fn fmt_var(&self, var: &str) -> String {
        let r = &self.ring;
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if r.is_zero(c) {
                continue;
            }
            let mut s = r.fmt_elem(c);
            let compound = s.trim_start_matches('-').contains([' ']);
            let negative = s.starts_with('-') && if i == 0 { !compound } else { !r.needs_parens(c) };
            if negative {
                s.remove(0);
            }
            let body = if i == 0 {
                if compound {
                    format!("({s})")
                } else {
                    s
                }
            } else {
                let mono = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                if s == "1" {
                    mono
                } else if r.needs_parens(c) {
                    format!("({s}){mono}")
                } else {
                    format!("{s}{mono}")
                }
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
                out.push_str(&body);
            } else {
                out.push_str(if negative { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        out
    }
}

impl<R: Field> Poly<R> {
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = self.ring.inv(l).expect("leading coefficient of a nonzero polynomial");
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let r = &self.ring;
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = r.inv(d.leading().unwrap()).expect("field leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(r.clone()), self.clone());
        }
        let mut quot = vec![r.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if r.is_zero(&rem[i]) {
                continue;
            }
            let q = r.mul(&rem[i], &lead_inv);
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = r.sub(&rem[idx], &r.mul(&q, dc));
            }
            quot[i - dd] = q;
        }
        rem.truncate(dd);
        (Poly::new(r.clone(), quot), Poly::new(r.clone(), rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Division known to be exact.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, rem) = self.div_rem(d);
        debug_assert!(rem.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, u, v) with u·self + v·other = g, g monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let ring = self.ring.clone();
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(ring.clone()), Poly::zero(ring.clone()));
        let (mut t0, mut t1) = (Poly::zero(ring.clone()), Poly::one(ring.clone()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = ring.inv(l).unwrap();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// (self^e) mod m.
    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.ring.clone()).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// For f = g(z^p) in characteristic p, returns g with coefficients
    /// replaced by their p-th roots, i.e. the h with h^p = f.
    fn pth_root_poly(&self) -> Option<Self> {
        let p = self.ring.characteristic() as usize;
        if p == 0 {
            return None;
        }
        let mut coeffs = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % p == 0 {
                coeffs.push(self.ring.pth_root(c)?);
            } else if !self.ring.is_zero(c) {
                return None;
            }
        }
        Some(Poly::new(self.ring.clone(), coeffs))
    }

    /// Squarefree decomposition: monic, pairwise coprime, squarefree factors
    /// with multiplicities whose product is `self` up to its leading unit.
    ///
    /// In characteristic p the inseparable part (a polynomial in z^p) is
    /// handled by p-th-root descent, multiplying multiplicities by p.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        assert!(!self.is_zero(), "squarefree decomposition of zero");
        let f = self.monic();
        if f.is_constant() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut c = f.gcd(&f.derivative());
        let mut w = f.exact_div(&c);
        let mut i = 1;
        while !w.is_constant() {
            let y = w.gcd(&c);
            let factor = w.exact_div(&y);
            if !factor.is_constant() {
                out.push((factor, i));
            }
            w = y;
            c = c.exact_div(&w);
            i += 1;
        }
        if !c.is_constant() {
            let p = self.ring.characteristic() as usize;
            let root = c
                .pth_root_poly()
                .expect("residual of squarefree decomposition must be a p-th power");
            for (g, e) in root.squarefree_decomposition() {
                out.push((g, e * p));
            }
        }
        out.sort_by_key(|(_, e)| *e);
        out
    }
}

impl<R: Ring> Add for &Poly<R> {
    type Output = Poly<R>;
    fn add(self, rhs: Self) -> Poly<R> {
        Poly::add(self, rhs)
    }
}

impl<R: Ring> Sub for &Poly<R> {
    type Output = Poly<R>;
    fn sub(self, rhs: Self) -> Poly<R> {
        Poly::sub(self, rhs)
    }
}

impl<R: Ring> Mul for &Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: Self) -> Poly<R> {
        Poly::mul(self, rhs)
    }
}

impl<R: Ring> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        Poly::neg(self)
    }
}

/// The polynomial ring R[s] as a ring context, so polynomials can nest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing<R: Ring> {
    pub base: R,
    /// Variable name used when printing.
    pub var: &'static str,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R, var: &'static str) -> Self {
        PolyRing { base, var }
    }

    pub fn var_poly(&self) -> Poly<R> {
        Poly::x(self.base.clone())
    }

    pub fn constant(&self, c: R::Elem) -> Poly<R> {
        Poly::constant(self.base.clone(), c)
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R>;

    fn zero(&self) -> Poly<R> {
        Poly::zero(self.base.clone())
    }
    fn one(&self) -> Poly<R> {
        Poly::one(self.base.clone())
    }
    fn from_i64(&self, n: i64) -> Poly<R> {
        Poly::constant(self.base.clone(), self.base.from_i64(n))
    }
    fn is_zero(&self, a: &Poly<R>) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Poly<R>, b: &Poly<R>) -> Poly<R> {
        a.add(b)
    }
    fn sub(&self, a: &Poly<R>, b: &Poly<R>) -> Poly<R> {
        a.sub(b)
    }
    fn neg(&self, a: &Poly<R>) -> Poly<R> {
        a.neg()
    }
    fn mul(&self, a: &Poly<R>, b: &Poly<R>) -> Poly<R> {
        a.mul(b)
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn fmt_elem(&self, a: &Poly<R>) -> String {
        a.fmt_var(self.var)
    }
    fn needs_parens(&self, a: &Poly<R>) -> bool {
        a.coeffs().iter().filter(|c| !self.base.is_zero(c)).count() > 1
            || a.coeffs().last().is_some_and(|c| self.base.needs_parens(c))
    }
}
