//! One function per subcommand. Each returns the text to print.

use std::fmt::Write;

use rayon::prelude::*;
use serde_json::{json, Value};
use wildram_core::cyclotomic::{verify_cyclotomic_identities, SRing};
use wildram_core::dynsys::{split_for_dynamics, FqMapJson, MappingScheme, RationalMap};
use wildram_core::ff::{self, FieldElement, FiniteField};
use wildram_core::gmlift::{self, LiftPoly, OrbitCertificate, Verdict};
use wildram_core::moduli;
use wildram_core::monodromy::{self, ObstructionReport};

use crate::input;
use crate::{Failure, FieldArgs, Report};

fn text(s: String, negative: bool) -> Result<Report, Failure> {
    Ok(Report { text: s, negative })
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn census(p: u64, m: usize, q: u64, json: bool) -> Result<Report, Failure> {
    let r = moduli::census(p, m, q)?;
    if json {
        return Ok(Report::json(&json!({"command": "census", "report": to_value(&r)}), !r.bound_ok));
    }
    let mut s = String::new();
    writeln!(s, "census p={} m={} q={}", r.p, r.m, r.q).unwrap();
    writeln!(s, "polynomials  {}", r.polynomial_count).unwrap();
    writeln!(s, "classes      {}", r.class_count).unwrap();
    writeln!(s, "max fiber    {}", r.max_fiber).unwrap();
    writeln!(s, "bound holds  {}", yes(r.bound_ok)).unwrap();
    writeln!(s, "field degree {}", r.extension_degree).unwrap();
    writeln!(s).unwrap();
    writeln!(s, "{:>5}  {:>5}  representative", "size", "bound").unwrap();
    for c in &r.classes {
        writeln!(s, "{:>5}  {:>5}  {}", c.size, c.bound, c.representative).unwrap();
    }
    writeln!(s).unwrap();
    writeln!(s, "fiber size  classes").unwrap();
    for (size, count) in &r.fiber_histogram {
        writeln!(s, "{size:>10}  {count}").unwrap();
    }
    text(s, !r.bound_ok)
}

pub fn normal_form(arg: &str, field: &FieldArgs, json: bool) -> Result<Report, Failure> {
    let f = input::poly(arg, field.p, field.k)?;
    let nf = moduli::to_monic_additive(&f)?;
    if json {
        return Ok(Report::json(&json!({"command": "normal-form", "report": nf.to_json()}), false));
    }
    let mut s = String::new();
    writeln!(s, "input        {} over {}", nf.source, nf.source.ring()).unwrap();
    writeln!(s, "normal form  {} over {}", nf.g, nf.g.field()).unwrap();
    writeln!(s, "witness      {}", nf.witness).unwrap();
    writeln!(s, "b            {}", nf.b).unwrap();
    writeln!(s, "c            {}", nf.c).unwrap();
    text(s, false)
}

pub fn conjugate(f: &str, g: &str, field: &FieldArgs, seed: u64, json: bool) -> Result<Report, Failure> {
    let f = input::additive(f, field.p, field.k, seed)?;
    let g = input::additive(g, field.p, field.k, seed.wrapping_add(1))?;
    let w = moduli::are_conjugate(&f, &g)?;
    let negative = w.is_none();
    if json {
        let v = json!({
            "command": "conjugate",
            "report": {
                "f": f.to_string(),
                "g": g.to_string(),
                "conjugate": w.is_some(),
                "witness": w.as_ref().map(|phi| phi.to_string()),
                "witness_field": w.as_ref().map(|phi| phi.field().descriptor()),
            }
        });
        return Ok(Report::json(&v, negative));
    }
    let s = match &w {
        Some(phi) => format!("conjugate: φ = {phi} over {}, φ∘f∘φ⁻¹ = g\n", phi.field()),
        None => format!("not conjugate: {f} and {g}\n"),
    };
    text(s, negative)
}

fn label(x: &FieldElement) -> String {
    x.to_string()
}

pub fn pco(f: &RationalMap<FiniteField>, steps: usize, dot: bool, json: bool) -> Result<Report, Failure> {
    let fk = split_for_dynamics(f)?;
    let scheme = fk.post_critical_orbit(steps)?;
    if dot {
        return text(scheme.to_dot(label), false);
    }
    if json {
        let v = json!({
            "command": "pco",
            "report": {
                "map": FqMapJson::from_map(f),
                "field": fk.field().descriptor(),
                "scheme": scheme.to_json(label),
            }
        });
        return Ok(Report::json(&v, false));
    }
    let mut s = String::new();
    writeln!(s, "map    {}", show_map(f)).unwrap();
    writeln!(s, "field  {}", fk.field()).unwrap();
    s.push_str(&scheme_table(&scheme, label));
    text(s, false)
}

fn show_map(f: &RationalMap<FiniteField>) -> String {
    if f.is_polynomial() {
        format!("{} over {}", f.num(), f.field())
    } else {
        format!("({})/({}) over {}", f.num(), f.den(), f.field())
    }
}

fn scheme_table<E>(scheme: &MappingScheme<E>, label: impl Fn(&E) -> String) -> String {
    let name = |i: usize| match scheme.vertices[i].point.finite() {
        Some(x) => label(x),
        None => "∞".to_string(),
    };
    let mut s = String::new();
    writeln!(s, "vertices {}  edges {}  truncated {}", scheme.vertices.len(), scheme.edges.len(), yes(scheme.truncated))
        .unwrap();
    for e in &scheme.edges {
        let crit = if scheme.vertices[e.source].critical { " (critical)" } else { "" };
        writeln!(s, "  {} -> {}  weight {}{crit}", name(e.source), name(e.target), e.weight).unwrap();
    }
    for &i in &scheme.truncated_vertices {
        writeln!(s, "  {} ... (truncated)", name(i)).unwrap();
    }
    s
}

pub fn monodromy(arg: &str, field: &FieldArgs, depth: usize, seed: u64, json: bool) -> Result<Report, Failure> {
    if depth == 0 {
        return Err(Failure::input("--depth must be at least 1"));
    }
    let f = input::additive(arg, field.p, field.k, seed)?;
    let t = monodromy::tower(&f, depth)?;
    let negative = t.levels.iter().any(|l| !(l.check.transitive && l.check.free))
        || t.projections.iter().any(|pr| !(pr.surjective && pr.equivariant));
    if json {
        return Ok(Report::json(&json!({"command": "monodromy", "f": f.to_string(), "report": t.to_json()}), negative));
    }
    let mut s = String::new();
    writeln!(s, "f = {} over {}", f, f.field()).unwrap();
    writeln!(s, "{:>3}  {:>6}  {:>6}  {:>10}  {:>4}  {:>8}  invariants", "n", "order", "fiber", "transitive", "free", "exponent")
        .unwrap();
    for l in &t.levels {
        let inv: Vec<String> = l.check.abelian_invariants.iter().map(u64::to_string).collect();
        writeln!(
            s,
            "{:>3}  {:>6}  {:>6}  {:>10}  {:>4}  {:>8}  ({})",
            l.n(),
            l.group_order(),
            l.fiber_size(),
            yes(l.check.transitive),
            yes(l.check.free),
            l.check.exponent,
            inv.join(", ")
        )
        .unwrap();
    }
    for pr in &t.projections {
        writeln!(
            s,
            "level {} -> {}: surjective {}, equivariant {}, kernel {}",
            pr.source,
            pr.target,
            yes(pr.surjective),
            yes(pr.equivariant),
            pr.kernel_size()
        )
        .unwrap();
    }
    text(s, negative)
}

fn obstruction_lines(s: &mut String, r: &ObstructionReport) {
    writeln!(s, "p={} m={}: #C = {}, p^(m-1) = {}, divides {}", r.p, r.m, r.crit_count, r.modulus, yes(r.divides)).unwrap();
    writeln!(s, "  {}", r.conclusion).unwrap();
    if let Some(it) = &r.iterate {
        obstruction_lines(s, it);
    }
}

fn settled(r: &ObstructionReport) -> bool {
    r.obstructed || r.iterate.as_deref().is_some_and(settled)
}

pub fn obstruction(p: u64, m: u64, json: bool) -> Result<Report, Failure> {
    let r = monodromy::char0_obstruction(p, m)?;
    let negative = !settled(&r);
    if json {
        return Ok(Report::json(&json!({"command": "obstruction", "report": to_value(&r)}), negative));
    }
    let mut s = String::new();
    obstruction_lines(&mut s, &r);
    writeln!(s, "obstructed {}", yes(r.obstructed)).unwrap();
    text(s, negative)
}

pub fn pipeline(arg: &str, field: &FieldArgs, seed: u64, json: bool) -> Result<Report, Failure> {
    let f = input::additive(arg, field.p, field.k, seed)?;
    let r = monodromy::obstruction_pipeline(&f)?;
    let negative = !r.no_lift;
    if json {
        return Ok(Report::json(&json!({"command": "obstruction", "pipeline": to_value(&r)}), negative));
    }
    let mut s = String::new();
    writeln!(s, "f = {} over F_{} (ℓ = {})", r.f, r.p, r.ell).unwrap();
    writeln!(s, "level n = {}: order {} on {} points, transitive {}, free {}", r.n, r.group_order, r.fiber_size, yes(r.transitive), yes(r.free))
        .unwrap();
    obstruction_lines(&mut s, &r.arithmetic);
    writeln!(s, "no characteristic-zero lift with free action: {}", yes(r.no_lift)).unwrap();
    text(s, negative)
}

pub fn identities(p: Option<u64>, max_p: u64, json: bool) -> Result<Report, Failure> {
    let primes: Vec<u64> = match p {
        Some(p) => vec![p],
        None => (2..=max_p).filter(|&q| ff::is_prime(q)).collect(),
    };
    if primes.is_empty() {
        return Err(Failure::input(format!("no primes up to {max_p}")));
    }
    let reports = primes.iter().map(|&q| verify_cyclotomic_identities(q)).collect::<Result<Vec<_>, _>>()?;
    let negative = reports.iter().any(|r| !r.all_hold);
    if json {
        return Ok(Report::json(&json!({"command": "identities", "reports": to_value(&reports)}), negative));
    }
    let mut s = String::new();
    writeln!(s, "{:>3}  {:>10}  {:>6}  {:>6}  {:>8}  all", "p", "∏(1-ζ^i)", "v(p)", "wilson", "partial").unwrap();
    for r in &reports {
        let partial = r.partial_sum_residues.iter().enumerate().all(|(i, &x)| x == i as u64 + 1);
        writeln!(
            s,
            "{:>3}  {:>10}  {:>6}  {:>6}  {:>8}  {}",
            r.p,
            r.product,
            r.lambda_val_p.to_string(),
            r.wilson_residue,
            yes(partial),
            yes(r.all_hold)
        )
        .unwrap();
    }
    text(s, negative)
}

pub struct LiftOptions {
    pub reduce: bool,
    pub sbar: Option<String>,
    pub k: Option<usize>,
    pub orbit: Option<usize>,
    pub locus: Option<(usize, usize)>,
    pub scaling_check: bool,
    pub dot: bool,
    pub steps: usize,
}

fn reductions(lift: &LiftPoly, a: i64, o: &LiftOptions) -> Result<Vec<(FieldElement, ff::FqPoly)>, Failure> {
    let p = lift.p();
    let choices = match &o.sbar {
        Some(e) => vec![input::element(e, p, o.k)?],
        None => gmlift::sbar_choices(p, a, o.k.unwrap_or(1))?,
    };
    choices.into_iter().map(|sb| Ok((sb.clone(), gmlift::reduce_lift(lift, &sb)?))).collect()
}

pub fn lift(p: u64, a: i64, o: &LiftOptions, json: bool) -> Result<Report, Failure> {
    let lift = gmlift::build_lift(p, a)?;
    if o.dot {
        let scheme = gmlift::lift_scheme(&lift, o.steps)?;
        return text(scheme.to_dot(|x| x.to_string()), false);
    }
    let reduced = if o.reduce { Some(reductions(&lift, a, o)?) } else { None };
    let orbit = o.orbit.map(|n| gmlift::orbit_search(&lift, n)).transpose()?;
    let locus = o.locus.map(|(m, n)| gmlift::pcf_locus_poly(p, m, n)).transpose()?;
    let scaling = if o.scaling_check { Some(gmlift::scaling_check(p)?) } else { None };
    let negative = reduced.as_ref().is_some_and(|r| r.is_empty())
        || scaling.as_ref().is_some_and(|r| !r.all_hold)
        || orbit.as_ref().is_some_and(|c| matches!(c.verdict, Verdict::Unknown { .. }));

    if json {
        let mut v = json!({"command": "lift", "lift": lift.to_json()});
        if let Some(r) = &reduced {
            v["reductions"] = r
                .iter()
                .map(|(sb, f)| json!({"sbar": sb.to_string(), "field": f.ring().descriptor(), "poly": f.to_string()}))
                .collect();
        }
        if let Some(c) = &orbit {
            v["orbit"] = c.to_json(lift.ring());
        }
        if let Some(l) = &locus {
            v["locus"] = l.to_json();
        }
        if let Some(r) = &scaling {
            v["scaling"] = to_value(r);
        }
        return Ok(Report::json(&v, negative));
    }

    let mut s = String::new();
    if o.reduce {
        let r = reduced.as_ref().unwrap();
        if r.is_empty() {
            writeln!(s, "no s̄ with s̄^{} = {a} in F_{}^{}", p - 1, p, o.k.unwrap_or(1)).unwrap();
        }
        for (sb, f) in r {
            if r.len() > 1 || o.sbar.is_none() {
                write!(s, "s̄ = {sb}: ").unwrap();
            }
            writeln!(s, "{f} over {}", f.ring()).unwrap();
        }
    }
    if let Some(c) = &orbit {
        s.push_str(&orbit_lines(a, c));
    }
    if let Some(l) = &locus {
        writeln!(s, "locus m={} n={}: degree {} in s", l.m, l.n, l.degree).unwrap();
        writeln!(s, "  {}", l.poly.fmt_var("s")).unwrap();
        if let Some(rs) = &l.roots {
            let rs: Vec<String> = rs.iter().map(|(r, e)| format!("{r} (×{e})")).collect();
            writeln!(s, "  nonzero roots in Q(ζ_{p}): {}", if rs.is_empty() { "none".into() } else { rs.join(", ") }).unwrap();
        }
    }
    if let Some(r) = &scaling {
        writeln!(s, "scaling identity {}, inverse {}, multiplier {}", yes(r.identity_holds), yes(r.inverse_holds), yes(r.multiplier_holds))
            .unwrap();
        writeln!(s, "  f'(0) = ({}) s^{}, residue {}", r.multiplier_unit, p - 1, r.unit_residue).unwrap();
    }
    if s.is_empty() {
        writeln!(s, "{lift}").unwrap();
        let vals: Vec<String> = lift.coefficient_valuations().iter().map(|v| v.to_string()).collect();
        writeln!(s, "coefficient valuations {}", vals.join(" ")).unwrap();
    }
    text(s, negative)
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Finite { preperiod, period } => format!("finite: preperiod {preperiod}, period {period}"),
        Verdict::EscapeCertified { threshold_index } => format!("escape certified at index {threshold_index}"),
        Verdict::Unknown { steps } => format!("undecided after {steps} steps"),
    }
}

fn orbit_lines(a: i64, c: &OrbitCertificate) -> String {
    let vals: Vec<String> = c.valuations.iter().map(|v| v.to_string()).collect();
    format!(
        "a = {a}: {}\n  threshold {}, valuations {}, law {}\n",
        verdict_text(&c.verdict),
        c.threshold,
        vals.join(" "),
        yes(c.law_holds)
    )
}

/// s^{p-1} = a; when p | a the parameter is kept formal anyway.
fn lift_any(p: u64, a: i64) -> Result<LiftPoly, Failure> {
    let ring = SRing::with_any_parameter(p, a)?;
    let s = ring.s();
    Ok(gmlift::with_parameter(ring, s)?)
}

pub fn orbit(p: u64, a: &str, steps: usize, json: bool) -> Result<Report, Failure> {
    let mut grid = input::parse_ints(a)?;
    if grid.is_empty() {
        return Err(Failure::input("--a needs at least one value"));
    }
    grid.sort_unstable();
    grid.dedup();
    let results: Vec<(i64, LiftPoly, OrbitCertificate)> = grid
        .par_iter()
        .map(|&a| {
            let lift = lift_any(p, a)?;
            let c = gmlift::orbit_search(&lift, steps)?;
            Ok((a, lift, c))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let negative = results.iter().any(|(_, _, c)| matches!(c.verdict, Verdict::Unknown { .. }));
    if json {
        let v = json!({
            "command": "orbit",
            "p": p,
            "results": results.iter().map(|(a, l, c)| json!({"a": a, "certificate": c.to_json(l.ring())})).collect::<Vec<_>>(),
        });
        return Ok(Report::json(&v, negative));
    }
    let s: String = results.iter().map(|(a, _, c)| orbit_lines(*a, c)).collect();
    text(s, negative)
}

pub fn locus(p: u64, m: usize, n: usize, json: bool) -> Result<Report, Failure> {
    let l = gmlift::pcf_locus_poly(p, m, n)?;
    if json {
        return Ok(Report::json(&json!({"command": "locus", "report": l.to_json()}), false));
    }
    let mut s = String::new();
    writeln!(s, "p={p} m={m} n={n}: degree {} in s, s = 0 with multiplicity {}", l.degree, l.zero_multiplicity).unwrap();
    writeln!(s, "{}", l.poly.fmt_var("s")).unwrap();
    match &l.roots {
        Some(rs) if rs.is_empty() => writeln!(s, "no nonzero roots in Q(ζ_{p})").unwrap(),
        Some(rs) => {
            for (r, e) in rs {
                writeln!(s, "root {r} multiplicity {e}").unwrap();
            }
        }
        None => writeln!(s, "roots not searched above degree {}", gmlift::LOCUS_ROOT_LIMIT).unwrap(),
    }
    text(s, false)
}
