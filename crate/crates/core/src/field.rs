//! Exact coefficient domains.
//!
//! Rings are runtime *contexts*: a context value knows how to combine its
//! elements, so one set of polynomial and dynamics routines serves finite
//! fields, the rationals, cyclotomic fields and their extension rings.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative ring with identity, given as a context object.
pub trait Ring: Clone + Debug + PartialEq + Eq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Whether printing this element next to a variable needs parentheses.
    fn needs_parens(&self, a: &Self::Elem) -> bool {
        let s = self.fmt_elem(a);
        s.trim_start_matches('-').contains(['+', '-', ' '])
    }
}

/// A field: every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// p-th root for perfect fields of characteristic p; `None` in
    /// characteristic zero or when the root does not exist in the field.
    fn pth_root(&self, _a: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    /// Distinct roots of `coeffs` (constant first) lying in this field.
    ///
    /// Implementations may return only the roots they can certify; callers
    /// compare the count against the degree to detect unresolved factors.
    fn roots(&self, coeffs: &[Self::Elem]) -> Vec<Self::Elem>;
}

/// The rational numbers with exact big-integer arithmetic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn needs_parens(&self, a: &BigRational) -> bool {
        !a.is_integer()
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn roots(&self, coeffs: &[BigRational]) -> Vec<BigRational> {
        rational_roots(coeffs)
    }
}

/// Bound on |numerator|, |denominator| candidates in the rational root test.
const RATIONAL_ROOT_SEARCH_LIMIT: u64 = 1_000_000;

/// Rational roots by the rational root theorem. Candidate enumeration is
/// skipped (returning only the root 0, if any) when the integer-normalized
/// leading or trailing coefficient exceeds a fixed search limit.
pub fn rational_roots(coeffs: &[BigRational]) -> Vec<BigRational> {
    let mut coeffs: Vec<BigRational> = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let shift = coeffs.iter().take_while(|c| c.is_zero()).count();
    if shift > 0 {
        roots.push(BigRational::zero());
        coeffs.drain(..shift);
    }
    if coeffs.len() <= 1 {
        return roots;
    }
    // clear denominators
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
    let lead = ints.last().unwrap().abs();
    let trail = ints[0].abs();
    let (Some(l), Some(t)) = (lead.to_u64(), trail.to_u64()) else {
        return roots;
    };
    if l > RATIONAL_ROOT_SEARCH_LIMIT || t > RATIONAL_ROOT_SEARCH_LIMIT {
        return roots;
    }
    let divisors = |n: u64| (1..=n).filter(move |d| n.is_multiple_of(*d));
    for q in divisors(l) {
        for pnum in divisors(t) {
            if num_integer::gcd(pnum, q) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let cand = BigRational::new(BigInt::from(sign) * BigInt::from(pnum), BigInt::from(q));
                let mut acc = BigRational::zero();
                for c in coeffs.iter().rev() {
                    acc = acc * &cand + c;
                }
                if acc.is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_root_theorem_finds_all_rational_roots() {
        // (2z - 1)(z + 3) z = 2z^3 + 5z^2 - 3z
        let c = vec![q(0, 1), q(-3, 1), q(5, 1), q(2, 1)];
        assert_eq!(rational_roots(&c), vec![q(-3, 1), q(0, 1), q(1, 2)]);
        // z^2 + 1 has none
        assert!(rational_roots(&[q(1, 1), q(0, 1), q(1, 1)]).is_empty());
    }

    #[test]
    fn rationals_pow() {
        assert_eq!(Rationals.pow(&q(2, 3), 3), q(8, 27));
        assert_eq!(Rationals.pow(&q(5, 1), 0), q(1, 1));
    }
}
