//! Acceptance suite: one line per criterion, exit status 1 if any fails.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wildram_core::addpoly::{root_space, AdditivePoly};
use wildram_core::cyclotomic::{verify_cyclotomic_identities, CyclotomicNumber, SElem};
use wildram_core::dynsys::{ProjPoint, RationalMap};
use wildram_core::ff::{self, FieldElement};
use wildram_core::field::{Rationals, Ring};
use wildram_core::gmlift::{self, Verdict};
use wildram_core::moduli::{census, fix_points};
use wildram_core::monodromy::{char0_obstruction, monodromy_level, obstruction_pipeline, odometer_check, tower};
use wildram_core::poly::Poly;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| ff::is_prime(p)).collect()
}

fn criterion_1() -> Check {
    let cases: [(u64, usize, &[usize]); 5] =
        [(2, 1, &[1, 2, 3, 4]), (2, 2, &[1, 2]), (3, 1, &[1, 2, 3]), (3, 2, &[1, 2]), (5, 1, &[1, 2])];
    let mut checked = 0;
    for (p, m, ns) in cases {
        let k = ff::make_field(p, m, None).map_err(err)?;
        for i in 0..10u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 * p + 100 * m as u64 + i);
            let f = AdditivePoly::random_separable(&k, m, &mut rng);
            ensure!(f.is_separable() && f.m() == m, "bad random polynomial {f}");
            for &n in ns {
                let space = root_space(&f, n).map_err(err)?;
                ensure!(space.dim() == m * n, "{f}: dim Z_{n} = {} ≠ {}", space.dim(), m * n);
                let level = monodromy_level(&f, n).map_err(err)?;
                ensure!(level.check.transitive && level.check.free, "{f}, n={n}: action not simply transitive");
                ensure!(
                    level.check.abelian_invariants == vec![p; m * n],
                    "{f}, n={n}: invariants {:?}",
                    level.check.abelian_invariants
                );
                checked += 1;
            }
            let depth = *ns.last().unwrap();
            let t = tower(&f, depth).map_err(err)?;
            ensure!(t.projections.len() == depth - 1, "{f}: {} projections", t.projections.len());
            for pr in &t.projections {
                ensure!(pr.surjective, "{f}: level {} -> {} not surjective", pr.source, pr.target);
                ensure!(
                    pr.kernel_size() == (p as usize).pow(m as u32),
                    "{f}: kernel of level {} -> {} has size {}",
                    pr.source,
                    pr.target,
                    pr.kernel_size()
                );
            }
        }
    }
    Ok(format!("{checked} (f, n) levels"))
}

fn criterion_2() -> Check {
    let grid: [(u64, [i64; 3]); 4] = [(2, [1, 3, 5]), (3, [1, 2, 4]), (5, [1, 2, 3]), (7, [1, 6, 8])];
    let mut count = 0;
    for (p, avals) in grid {
        for a in avals {
            ensure!(a.rem_euclid(p as i64) != 0, "p | a");
            let lift = gmlift::build_lift(p, a).map_err(err)?;
            let choices = gmlift::sbar_choices(p, a, 4).map_err(err)?;
            let want_count = if p == 2 { 1 } else { p as usize - 1 };
            ensure!(choices.len() == want_count, "p={p} a={a}: {} choices of s̄", choices.len());
            for sb in &choices {
                let got = gmlift::reduce_lift(&lift, sb).map_err(err)?;
                let k = sb.field().clone();
                let mut want = vec![k.zero(); p as usize + 1];
                want[p as usize] = k.one();
                want[1] = sb.pow(p - 1).neg();
                ensure!(got == Poly::new(k, want), "p={p} a={a} s̄={sb}: got {got}");
                count += 1;
            }
        }
    }
    Ok(format!("{count} reductions"))
}

fn criterion_3() -> Check {
    for p in primes_upto(13) {
        let r = verify_cyclotomic_identities(p).map_err(err)?;
        ensure!(r.product_equals_p && r.product == p.to_string(), "p={p}: product {}", r.product);
        ensure!(r.lambda_val_p.as_i64() == Some(p as i64 - 1), "p={p}: v(p) = {}", r.lambda_val_p);
        ensure!((r.wilson_residue + 1).rem_euclid(p as i64) == 0, "p={p}: residue {}", r.wilson_residue);
        let want: Vec<u64> = (1..p).collect();
        ensure!(r.partial_sum_residues == want, "p={p}: partial sums {:?}", r.partial_sum_residues);
        ensure!(r.all_hold, "p={p}");
    }
    Ok("p ≤ 13".into())
}

fn criterion_4() -> Check {
    let mut exceptions = Vec::new();
    for p in primes_upto(13) {
        for m in 2..=8u32 {
            let pm = (p as u128).pow(m);
            let crit = 2 * (pm - 1) / (p as u128 - 1);
            let divides = crit.is_multiple_of((p as u128).pow(m - 1));
            let r = char0_obstruction(p, m as u64).map_err(err)?;
            ensure!(r.crit_count.to_string() == crit.to_string(), "p={p} m={m}: #C = {}", r.crit_count);
            ensure!(r.divides == divides && r.obstructed == !divides, "p={p} m={m}: report disagrees");
            if divides {
                exceptions.push((p, m));
            }
        }
    }
    ensure!(exceptions == [(2, 2)], "exceptions {exceptions:?}");
    Ok("sole exception (2, 2)".into())
}

fn monic_additive_over(p: u64, m: usize, q: u64) -> Result<Vec<AdditivePoly>, String> {
    let k = (q as f64).log(p as f64).round() as usize;
    let field = ff::make_field(p, k, None).map_err(err)?;
    let elems: Vec<FieldElement> = field.elements().collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; m];
    loop {
        if !elems[idx[0]].is_zero() {
            let mut coeffs: Vec<FieldElement> = idx.iter().map(|&i| elems[i].clone()).collect();
            coeffs.push(field.one());
            out.push(AdditivePoly::new(field.clone(), coeffs).map_err(err)?);
        }
        let mut j = 0;
        while j < m {
            idx[j] += 1;
            if idx[j] < elems.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == m {
            return Ok(out);
        }
    }
}

fn check_census(p: u64, m: usize, q: u64) -> Result<usize, String> {
    let r = census(p, m, q).map_err(err)?;
    let polys = monic_additive_over(p, m, q)?;
    ensure!(r.polynomial_count == polys.len(), "census({p},{m},{q}): {} polynomials", r.polynomial_count);
    let mut fix: HashMap<String, usize> = HashMap::new();
    for g in &polys {
        fix.insert(g.to_string(), fix_points(g).map_err(err)?.points.len());
    }
    let units = (p as usize).pow(m as u32) - 1;
    let mut total = 0;
    for c in &r.classes {
        let nfix = *fix.get(&c.representative).ok_or(format!("unknown representative {}", c.representative))?;
        ensure!(c.bound == units * nfix, "{}: bound {} ≠ {units}·{nfix}", c.representative, c.bound);
        ensure!(c.size >= 1 && c.size <= c.bound, "{}: fiber {} > bound {}", c.representative, c.size, c.bound);
        total += c.size;
    }
    ensure!(total == polys.len(), "fibers do not partition");
    ensure!(r.bound_ok, "census({p},{m},{q}) reports a bound violation");
    Ok(r.class_count)
}

fn criterion_5() -> Check {
    let mut notes = Vec::new();
    for q in [3, 9, 27] {
        let classes = check_census(3, 1, q)?;
        ensure!(classes as u64 == q - 1, "census(3,1,{q}): {classes} classes");
        notes.push(format!("q={q}: {classes}"));
    }
    let classes = check_census(2, 2, 4)?;
    notes.push(format!("census(2,2,4): {classes}"));
    Ok(notes.join(", "))
}

fn criterion_6() -> Check {
    for a in [1, 2, 4] {
        let lift = gmlift::build_lift(3, a).map_err(err)?;
        let c = gmlift::orbit_search(&lift, 16).map_err(err)?;
        let Verdict::EscapeCertified { threshold_index: t } = c.verdict else {
            return Err(format!("a={a}: verdict {:?}", c.verdict));
        };
        ensure!(c.valuations[t] < c.threshold, "a={a}: not below threshold");
        ensure!(c.valuations.len() >= t + 3, "a={a}: only {} valuations", c.valuations.len());
        let v0 = c.valuations[t].as_i64().ok_or("non-integral valuation")?;
        for (j, v) in c.valuations[t..].iter().enumerate() {
            ensure!(v.as_i64() == Some(v0 * 3i64.pow(j as u32)), "a={a}: v(z_{}) = {v}", t + j);
        }
        ensure!(c.law_holds, "a={a}");
    }
    let l = gmlift::pcf_locus_poly(3, 1, 1).map_err(err)?;
    ensure!(l.degree == 9 && l.poly.degree() == Some(9), "locus degree {}", l.degree);
    Ok("escape for a = 1, 2, 4; locus degree 9".into())
}

fn cyc(p: u64, coords: &[(i64, i64)]) -> CyclotomicNumber {
    CyclotomicNumber::from_coords(p, coords.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect())
}

fn criterion_7() -> Check {
    for p in primes_upto(13) {
        let r = gmlift::scaling_check(p).map_err(err)?;
        ensure!(r.all_hold, "scaling_check({p}) fails: {r:?}");
        ensure!((r.unit_residue + 1).rem_euclid(p as i64) == 0, "p={p}: unit residue {}", r.unit_residue);
    }
    let p = 3;
    let samples = [
        cyc(p, &[(1, 1)]),
        cyc(p, &[(2, 1)]),
        cyc(p, &[(3, 1)]),
        cyc(p, &[(0, 1), (1, 1)]),
        cyc(p, &[(1, 1), (1, 1)]),
        cyc(p, &[(2, 1), (-1, 1)]),
        cyc(p, &[(1, 2)]),
    ];
    for s in &samples {
        let m = gmlift::multiplier_at_zero(p, s).map_err(err)?;
        let m_neg = gmlift::multiplier_at_zero(p, &s.neg()).map_err(err)?;
        ensure!(m == m_neg, "s={s}: multipliers differ under s ↦ -s");
    }
    let mut pairs = 0;
    'outer: for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            if pairs == 20 {
                break 'outer;
            }
            let (s, t) = (&samples[i], &samples[j]);
            ensure!(s.pow(2) != t.pow(2), "grid pair with s² = s'²");
            let ms = gmlift::multiplier_at_zero(p, s).map_err(err)?;
            let mt = gmlift::multiplier_at_zero(p, t).map_err(err)?;
            ensure!(ms != mt, "s={s}, s'={t}: equal multipliers");
            pairs += 1;
        }
    }
    ensure!(pairs == 20, "only {pairs} pairs");
    Ok("p ≤ 13 and 20 pairs at p = 3".into())
}

fn criterion_8() -> Check {
    let q = Rationals;
    let f = RationalMap::polynomial(Poly::from_ints(q, &[1, 0, 1])).map_err(err)?;
    let r = odometer_check(&f, 4).map_err(err)?;
    ensure!(r.profiles == [vec![2], vec![4], vec![8], vec![16]], "z^2 + 1: {:?}", r.profiles);
    let g = RationalMap::polynomial(Poly::from_ints(q, &[-1, 0, 0, 1])).map_err(err)?;
    let r = odometer_check(&g, 3).map_err(err)?;
    ensure!(r.profiles == [vec![3], vec![9], vec![27]], "z^3 - 1: {:?}", r.profiles);
    Ok("[2] [4] [8] [16]; [3] [9] [27]".into())
}

fn criterion_9() -> Check {
    for (p, k) in [(2u64, 4usize), (3, 3), (5, 2)] {
        let field = ff::make_field(p, k, None).map_err(err)?;
        for c in field.elements().filter(|c| !c.is_zero()).take(10) {
            let mut coeffs = vec![field.zero(); p as usize + 1];
            coeffs[1] = c.neg();
            coeffs[p as usize] = field.one();
            let f = RationalMap::polynomial(Poly::new(field.clone(), coeffs)).map_err(err)?;
            let s = f.post_critical_orbit(16).map_err(err)?;
            ensure!(
                s.vertices.len() == 1 && s.vertices[0].point.is_infinity() && s.vertices[0].critical,
                "p={p} c={c}: vertices {:?}",
                s.vertices.iter().map(|v| v.point.is_infinity()).collect::<Vec<_>>()
            );
            ensure!(
                s.edges.len() == 1 && (s.edges[0].source, s.edges[0].target, s.edges[0].weight) == (0, 0, p as usize),
                "p={p} c={c}: edges {:?}",
                s.edges
            );
            ensure!(!s.truncated, "p={p} c={c}: truncated");
        }
    }

    let lift = gmlift::build_lift(3, 1).map_err(err)?;
    let r = lift.ring().clone();
    let d = gmlift::lift_critical_data(&lift).map_err(err)?;
    let lam = r.constant(CyclotomicNumber::lambda(3));
    let s = lift.s().clone();
    let div = |x: &SElem, y: &SElem| r.div(x, y).map_err(err);
    let c0 = r.neg(&div(&s, &lam)?);
    let sp_lp = div(&r.pow(&s, 3), &r.pow(&lam, 3))?;
    let c1 = r.neg(&sp_lp);
    let c2 = r.sub(&r.pow(&r.sub(&div(&s, &lam)?, &sp_lp), 3), &sp_lp);
    ensure!(d.points.len() == 2, "{} critical points", d.points.len());
    ensure!(d.points[0] == (ProjPoint::Infinity, 3), "critical point at ∞");
    ensure!(d.points[1] == (ProjPoint::Finite(c0.clone()), 3), "finite critical point");
    ensure!(d.values[1] == ProjPoint::Finite(c1.clone()), "critical value");
    ensure!(d.finite_profile == [3] && d.infinity_profile == [3], "profiles");
    let sch = gmlift::lift_scheme(&lift, 4).map_err(err)?;
    ensure!(sch.component_count() == 2, "{} components", sch.component_count());
    let at = |x: &SElem| sch.find(&ProjPoint::Finite(x.clone())).ok_or("vertex missing");
    let (i0, i1, i2) = (at(&c0)?, at(&c1)?, at(&c2)?);
    let inf = sch.find(&ProjPoint::Infinity).ok_or("∞ missing")?;
    let edge = |v: usize| sch.out_edge(v).map(|e| (e.target, e.weight));
    ensure!(edge(inf) == Some((inf, 3)), "∞ loop");
    ensure!(edge(i0) == Some((i1, 3)), "-s/λ -> -s^p/λ^p with weight p");
    ensure!(edge(i1) == Some((i2, 1)), "second arrow");
    ensure!(sch.vertices[i0].critical && !sch.vertices[i1].critical, "critical marks");
    Ok("single ∞ loop for 30 maps; two-component lift scheme".into())
}

fn criterion_10() -> Check {
    let f2 = ff::prime_field(2).map_err(err)?;
    let f = AdditivePoly::from_ints(&f2, &[1, 1]).map_err(err)?;
    let r = obstruction_pipeline(&f).map_err(err)?;
    ensure!(r.ell == 1 && r.n == 3, "ℓ={} n={}", r.ell, r.n);
    ensure!(r.group_order == 8 && r.fiber_size == 8, "order {} on {} points", r.group_order, r.fiber_size);
    ensure!(r.free && r.transitive, "action at level 3 not free");
    let a = &r.arithmetic;
    ensure!((a.p, a.m) == (2, 3), "arithmetic at ({}, {})", a.p, a.m);
    ensure!(a.crit_count.to_string() == "14" && a.modulus.to_string() == "4", "#C={} modulus={}", a.crit_count, a.modulus);
    ensure!(!a.divides && a.obstructed && r.no_lift, "not obstructed");
    Ok("n = 3, order 8 on 8 points, 4 ∤ 14".into())
}

fn main() {
    let criteria: [(u32, fn() -> Check, u64); 10] = [
        (1, criterion_1, 60),
        (2, criterion_2, 30),
        (3, criterion_3, 10),
        (4, criterion_4, 1),
        (5, criterion_5, 300),
        (6, criterion_6, 60),
        (7, criterion_7, 30),
        (8, criterion_8, 10),
        (9, criterion_9, 10),
        (10, criterion_10, 10),
    ];
    let mut failed = 0;
    for (n, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(note) if elapsed > Duration::from_secs(limit) => Err(format!("{note}; over the {limit} s limit")),
            o => o,
        };
        match outcome {
            Ok(note) => println!("criterion {n}: PASS ({note}; {:.2} s)", elapsed.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("criterion {n}: FAIL ({e}; {:.2} s)", elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 10 criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
