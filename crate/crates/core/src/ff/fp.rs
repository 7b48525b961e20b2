//! Raw polynomial arithmetic over a prime field F_p on `u64` coefficient
//! vectors (constant term first). Used for element arithmetic and for the
//! irreducibility search, where going through the generic layer would cost
//! an allocation per coefficient.

pub(crate) type FpPoly = Vec<u64>;

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, p - 2, p)
}

pub(crate) fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(out)
}

/// Remainder modulo a nonzero polynomial.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> FpPoly {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= dm {
        return trim(r);
    }
    let li = inv(m[dm], p);
    for i in (dm..r.len()).rev() {
        if r[i] == 0 {
            continue;
        }
        let q = mulmod(r[i], li, p);
        for (j, &mc) in m.iter().enumerate() {
            let idx = i - dm + j;
            r[idx] = (r[idx] + p - mulmod(q, mc, p)) % p;
        }
    }
    r.truncate(dm);
    trim(r)
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&l) = x.last() {
        let li = inv(l, p);
        for c in x.iter_mut() {
            *c = mulmod(*c, li, p);
        }
    }
    x
}

/// h^p mod m. Over F_p the coefficients are fixed by Frobenius, so
/// h(z)^p = h(z^p).
pub(crate) fn frob_mod(h: &[u64], m: &[u64], p: u64) -> FpPoly {
    if h.is_empty() {
        return Vec::new();
    }
    let pu = p as usize;
    let mut spread = vec![0u64; (h.len() - 1) * pu + 1];
    for (i, &c) in h.iter().enumerate() {
        spread[i * pu] = c;
    }
    rem(&spread, m, p)
}

/// Inverse of `a` modulo the irreducible `m`, by the extended Euclidean
/// algorithm.
pub(crate) fn inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<FpPoly> {
    let mut r0 = trim(m.to_vec());
    let mut r1 = rem(a, m, p);
    let mut t0: FpPoly = Vec::new();
    let mut t1: FpPoly = vec![1];
    while !r1.is_empty() {
        // polynomial long division r0 = q r1 + r
        let (q, r) = div_rem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let t = sub(&t0, &mul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv(r0[0], p);
    Some(trim(t0.iter().map(|&x| mulmod(x, c, p)).collect()))
}

pub(crate) fn div_rem(a: &[u64], m: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= dm {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![0u64; r.len() - dm];
    let li = inv(m[dm], p);
    for i in (dm..r.len()).rev() {
        if r[i] == 0 {
            continue;
        }
        let c = mulmod(r[i], li, p);
        q[i - dm] = c;
        for (j, &mc) in m.iter().enumerate() {
            let idx = i - dm + j;
            r[idx] = (r[idx] + p - mulmod(c, mc, p)) % p;
        }
    }
    r.truncate(dm);
    (trim(q), trim(r))
}

/// Ben-Or irreducibility test for a monic polynomial over F_p.
pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let m = trim(m.to_vec());
    let d = m.len().saturating_sub(1);
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if m[0] == 0 {
        return false;
    }
    let x: FpPoly = vec![0, 1];
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        h = frob_mod(&h, &m, p);
        let g = gcd(&sub(&h, &x, p), &m, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `k`
/// over F_p: candidates are enumerated with the constant coefficient
/// varying fastest.
pub(crate) fn smallest_irreducible(p: u64, k: usize) -> FpPoly {
    if k == 1 {
        return vec![0, 1];
    }
    let mut digits = vec![0u64; k];
    loop {
        let mut cand = digits.clone();
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
        // increment
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
            assert!(i < k, "exhausted candidates without an irreducible polynomial");
        }
    }
}
