//! Parsing of polynomial, map and element arguments.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use wildram_core::addpoly::{AdditivePoly, AdditivePolyJson};
use wildram_core::dynsys::{FqMapJson, RationalMap};
use wildram_core::ff::{self, FieldElement, FiniteField, FqPoly};
use wildram_core::poly::Poly;

use crate::Failure;

pub fn parse_ints(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| Failure::input(format!("not an integer: {t:?}"))))
        .collect()
}

pub fn field(p: u64, k: usize) -> Result<FiniteField, Failure> {
    if k == 0 {
        return Err(Failure::input("field degree must be at least 1"));
    }
    Ok(ff::make_field(p, k, None)?)
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn need_p(p: Option<u64>, what: &str) -> Result<u64, Failure> {
    p.ok_or_else(|| Failure::input(format!("{what} needs --p")))
}

/// An additive polynomial given as a JSON file, an inline list a_0,a_1,...
/// of Frobenius coefficients over F_{p^k}, or `random:M` (seeded).
pub fn additive(arg: &str, p: Option<u64>, k: usize, seed: u64) -> Result<AdditivePoly, Failure> {
    if let Some(m) = arg.strip_prefix("random:") {
        let m: usize = m.parse().map_err(|_| Failure::input(format!("bad random degree {m:?}")))?;
        if m == 0 {
            return Err(Failure::input("random:M needs M ≥ 1"));
        }
        let k = field(need_p(p, "random:M")?, k)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok(AdditivePoly::random_separable(&k, m, &mut rng));
    }
    let path = Path::new(arg);
    if path.is_file() {
        let v = read_json(path)?;
        let j: AdditivePolyJson =
            serde_json::from_value(v).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        return Ok(AdditivePoly::from_json(&j)?);
    }
    let ints = parse_ints(arg)?;
    let k = field(need_p(p, "an inline polynomial")?, k)?;
    Ok(AdditivePoly::from_ints(&k, &ints)?)
}

/// A polynomial over F_{p^k} given as a file (map JSON without `den`, or
/// additive JSON) or as inline coefficients c_0,c_1,... .
pub fn poly(arg: &str, p: Option<u64>, k: usize) -> Result<FqPoly, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let f = map_file(path)?;
        if !f.is_polynomial() {
            return Err(Failure::input("expected a polynomial, got a rational map"));
        }
        return Ok(f.num().clone());
    }
    let ints = parse_ints(arg)?;
    let k = field(need_p(p, "an inline polynomial")?, k)?;
    Ok(Poly::from_ints(k, &ints))
}

/// A rational map from a JSON file: `{"field", "num", "den"}` or
/// `{"field", "a"}` for an additive polynomial.
pub fn map_file(path: &Path) -> Result<RationalMap<FiniteField>, Failure> {
    let v = read_json(path)?;
    let bad = |e: serde_json::Error| Failure::input(format!("{}: {e}", path.display()));
    if v.get("a").is_some() {
        let j: AdditivePolyJson = serde_json::from_value(v).map_err(bad)?;
        let a = AdditivePoly::from_json(&j)?;
        return Ok(RationalMap::polynomial(a.to_poly())?);
    }
    let j: FqMapJson = serde_json::from_value(v).map_err(bad)?;
    Ok(j.build()?)
}

pub fn inline_map(num: &str, den: Option<&str>, p: Option<u64>, k: usize) -> Result<RationalMap<FiniteField>, Failure> {
    let k = field(need_p(p, "an inline map")?, k)?;
    let num = Poly::from_ints(k.clone(), &parse_ints(num)?);
    let den = match den {
        Some(d) => Poly::from_ints(k, &parse_ints(d)?),
        None => Poly::one(k),
    };
    Ok(RationalMap::new(num, den)?)
}

/// Coordinates c_0,c_1,... of an element of F_{p^k}; k defaults to the
/// number of coordinates.
pub fn element(arg: &str, p: u64, k: Option<usize>) -> Result<FieldElement, Failure> {
    let coords = parse_ints(arg)?;
    if coords.is_empty() {
        return Err(Failure::input("empty element"));
    }
    let k = k.unwrap_or(coords.len());
    if coords.len() > k {
        return Err(Failure::input(format!("{} coordinates do not fit in degree {k}", coords.len())));
    }
    Ok(field(p, k)?.element_signed(&coords)?)
}
