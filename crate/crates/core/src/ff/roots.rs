//! Factoring-based root finding over finite fields.

use num_bigint::BigUint;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{embed, embed_poly, make_field, FieldElement, FieldError, FiniteField, FqPoly};
use crate::poly::Poly;

/// Fields up to this order are searched by evaluating at every element.
pub const EXHAUSTIVE_ROOT_LIMIT: u64 = 1 << 16;

const SPLIT_SEED: u64 = 0x5EED_F1E1D;

/// Squarefree decomposition, with p-th-root descent for inseparable parts.
pub fn squarefree_factor(f: &FqPoly) -> Result<Vec<(FqPoly, usize)>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    Ok(f.squarefree_decomposition())
}

/// Roots of `f` in `k` (an extension of its coefficient field), with
/// multiplicities, sorted by element.
pub fn roots_in(f: &FqPoly, k: &FiniteField) -> Result<Vec<(FieldElement, usize)>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let f = embed_poly(f, k)?;
    let mut out = Vec::new();
    let exhaustive = k.order_u64().is_some_and(|q| q <= EXHAUSTIVE_ROOT_LIMIT);
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    for (g, e) in f.squarefree_decomposition() {
        if exhaustive {
            out.extend(k.elements().filter(|x| g.eval(x).is_zero()).map(|x| (x, e)));
        } else {
            let lin = linear_part(&g, k);
            out.extend(split_linear(&lin, k, &mut rng).into_iter().map(|x| (x, e)));
        }
    }
    out.sort();
    Ok(out)
}

/// g ↦ g^p mod m, using that p-th powering is additive.
pub(crate) fn pth_power_mod(h: &FqPoly, m: &FqPoly) -> FqPoly {
    let k = h.ring();
    let p = k.p() as usize;
    let Some(d) = h.degree() else { return h.clone() };
    let mut coeffs = vec![k.zero(); d * p + 1];
    for (i, c) in h.coeffs().iter().enumerate() {
        coeffs[i * p] = c.frobenius();
    }
    Poly::new(k.clone(), coeffs).rem(m)
}

/// gcd(g, z^{|K|} - z): the product of the distinct linear factors of g.
fn linear_part(g: &FqPoly, k: &FiniteField) -> FqPoly {
    if g.degree().unwrap_or(0) <= 1 {
        return g.monic();
    }
    let z = Poly::x(k.clone());
    let mut h = z.rem(g);
    for _ in 0..k.degree() {
        h = pth_power_mod(&h, g);
    }
    g.gcd(&h.sub(&z))
}

fn random_element(k: &FiniteField, rng: &mut ChaCha8Rng) -> FieldElement {
    let coords: Vec<u64> = (0..k.degree()).map(|_| rng.gen_range(0..k.p())).collect();
    k.element(&coords).unwrap()
}

/// Equal-degree splitting of a squarefree product of linear factors.
fn split_linear(g: &FqPoly, k: &FiniteField, rng: &mut ChaCha8Rng) -> Vec<FieldElement> {
    let d = g.degree().unwrap_or(0);
    if d == 0 {
        return Vec::new();
    }
    if d == 1 {
        let c = g.coeff(0).div_by(&g.coeff(1));
        return vec![c.neg()];
    }
    let p = k.p();
    loop {
        let r = Poly::new(k.clone(), (0..d).map(|_| random_element(k, rng)).collect());
        if r.is_constant() {
            continue;
        }
        let witness = if p == 2 {
            // absolute trace to F_2
            let mut t = r.rem(g);
            let mut sum = t.clone();
            for _ in 1..k.degree() {
                t = t.mul(&t).rem(g);
                sum = sum.add(&t);
            }
            sum
        } else {
            // r^{(Q-1)/2} = (prod_i r^{p^i})^{(p-1)/2}: the inner product is
            // the norm to F_p
            let mut t = r.rem(g);
            let mut norm = t.clone();
            for _ in 1..k.degree() {
                t = pth_power_mod(&t, g);
                norm = norm.mul(&t).rem(g);
            }
            norm.powmod((p - 1) / 2, g).sub(&Poly::one(k.clone()))
        };
        let h = g.gcd(&witness);
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && dh < d {
            let mut out = split_linear(&h, k, rng);
            out.extend(split_linear(&g.exact_div(&h), k, rng));
            return out;
        }
    }
}

/// Distinct-degree factorization of a squarefree polynomial over its own
/// coefficient field F_q: pairs (product of all degree-d irreducible
/// factors, d).
pub fn distinct_degree_factor(f: &FqPoly) -> Result<Vec<(FqPoly, usize)>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let k = f.ring().clone();
    let z = Poly::x(k.clone());
    let mut g = f.monic();
    let mut h = z.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while g.degree().unwrap_or(0) >= 2 * d {
        for _ in 0..k.degree() {
            h = pth_power_mod(&h, &g);
        }
        let gd = g.gcd(&h.sub(&z));
        if !gd.is_constant() {
            g = g.exact_div(&gd);
            h = h.rem(&g);
            out.push((gd, d));
        }
        d += 1;
    }
    if let Some(dg) = g.degree().filter(|&dg| dg > 0) {
        out.push((g, dg));
    }
    Ok(out)
}

/// Degrees of the irreducible factors of the radical of f.
pub fn irreducible_factor_degrees(f: &FqPoly) -> Result<Vec<usize>, FieldError> {
    let mut degs = Vec::new();
    for (g, _) in squarefree_factor(f)? {
        for (h, d) in distinct_degree_factor(&g)? {
            let n = h.degree().unwrap() / d;
            degs.extend(std::iter::repeat_n(d, n));
        }
    }
    degs.sort();
    Ok(degs)
}

/// Least L such that f splits over the degree-L extension of its
/// coefficient field.
pub fn splitting_degree(f: &FqPoly) -> Result<usize, FieldError> {
    Ok(irreducible_factor_degrees(f)?.into_iter().fold(1, |acc, d| acc.lcm(&d)))
}

/// Some b with b^n = a in the smallest extension of a's field containing
/// one; ties broken by least coordinates.
pub fn solve_power(a: &FieldElement, n: u64) -> Result<(FieldElement, FiniteField), FieldError> {
    if a.is_zero() {
        return Err(FieldError::ZeroBase);
    }
    if n == 0 {
        return Err(FieldError::BadElement("exponent must be positive".into()));
    }
    let base = a.field();
    let (p, k) = (base.p(), base.degree());
    for l in 1.. {
        let q_minus_1 = BigUint::from(p).pow((k * l) as u32) - 1u32;
        let g = q_minus_1.gcd(&BigUint::from(n));
        if !a.pow_big(&(&q_minus_1 / &g)).is_one() {
            continue;
        }
        let field = if l == 1 { base.clone() } else { make_field(p, k * l, None)? };
        let a_up = embed(a, &field)?;
        let poly = Poly::monomial(field.clone(), field.one(), n as usize).sub(&Poly::constant(field.clone(), a_up));
        let (b, _) = roots_in(&poly, &field)?.into_iter().next().expect("existence checked by the power test");
        return Ok((b, field));
    }
    unreachable!()
}
