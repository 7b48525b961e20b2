//! Subfield embeddings F_{p^a} -> F_{p^b}, a | b.
//!
//! An embedding is determined by the image of the source generator, which
//! must be a root of the source modulus in the target. Images are chosen
//! once per (source, target) pair and stored in a process-wide table;
//! later choices are filtered so that every triangle of cached embeddings
//! commutes.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::{roots_in, FieldElement, FieldError, FiniteField, FqPoly};
use crate::poly::Poly;

type Table = HashMap<(FiniteField, FiniteField), FieldElement>;

fn table() -> &'static Mutex<Table> {
    static TABLE: OnceLock<Mutex<Table>> = OnceLock::new();
    TABLE.get_or_init(Default::default)
}

/// Image of `x` under the session's fixed embedding into `target`.
pub fn embed(x: &FieldElement, target: &FiniteField) -> Result<FieldElement, FieldError> {
    let source = x.field();
    if source == target {
        return Ok(x.clone());
    }
    if source.p() != target.p() {
        return Err(FieldError::FieldMismatch);
    }
    if !target.degree().is_multiple_of(source.degree()) {
        return Err(FieldError::NoEmbedding { p: source.p(), from: source.degree(), to: target.degree() });
    }
    if source.is_prime_field() {
        return Ok(target.from_int(x.coords()[0] as i64));
    }
    let img = generator_image(source, target)?;
    Ok(apply(&img, x))
}

/// Coefficient-wise embedding of a polynomial.
pub fn embed_poly(f: &FqPoly, target: &FiniteField) -> Result<FqPoly, FieldError> {
    if f.ring() == target {
        return Ok(f.clone());
    }
    let coeffs = f.coeffs().iter().map(|c| embed(c, target)).collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::new(target.clone(), coeffs))
}

/// Evaluates the coordinate polynomial of `x` at `img`.
fn apply(img: &FieldElement, x: &FieldElement) -> FieldElement {
    let t = img.field();
    x.coords().iter().rev().fold(t.zero(), |acc, &c| acc.mul(img).add(&t.from_int(c as i64)))
}

fn generator_image(source: &FiniteField, target: &FiniteField) -> Result<FieldElement, FieldError> {
    if let Some(img) = table().lock().unwrap().get(&(source.clone(), target.clone())) {
        return Ok(img.clone());
    }
    let snapshot: Vec<((FiniteField, FiniteField), FieldElement)> =
        table().lock().unwrap().iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    let lookup = |a: &FiniteField, b: &FiniteField| {
        snapshot.iter().find(|((x, y), _)| x == a && y == b).map(|(_, v)| v.clone())
    };

    // route through a cached intermediate field when one exists
    let mut chosen = None;
    for ((s, m), img_sm) in &snapshot {
        if s == source {
            if let Some(img_mt) = lookup(m, target) {
                chosen = Some(apply(&img_mt, img_sm));
                break;
            }
        }
    }

    let chosen = match chosen {
        Some(c) => c,
        None => {
            let gen = source.generator();
            let prime = super::prime_field(source.p())?;
            let modulus = Poly::new(
                prime.clone(),
                source.modulus().iter().map(|&c| prime.from_int(c as i64)).collect(),
            );
            let candidates: Vec<FieldElement> = roots_in(&modulus, target)?.into_iter().map(|(r, _)| r).collect();
            let consistent = |cand: &FieldElement| {
                snapshot.iter().all(|((a, b), img)| {
                    // R -> source and R -> target must agree
                    if b == source {
                        if let Some(rt) = lookup(a, target) {
                            return apply(cand, img) == rt;
                        }
                    }
                    // source -> U and target -> U must agree
                    if a == target {
                        if let Some(su) = lookup(source, b) {
                            return apply(img, cand) == apply(&su, &gen);
                        }
                    }
                    true
                })
            };
            candidates
                .iter()
                .find(|c| consistent(c))
                .or(candidates.first())
                .cloned()
                .ok_or(FieldError::NoEmbedding { p: source.p(), from: source.degree(), to: target.degree() })?
        }
    };
    let mut t = table().lock().unwrap();
    Ok(t.entry((source.clone(), target.clone())).or_insert(chosen).clone())
}
