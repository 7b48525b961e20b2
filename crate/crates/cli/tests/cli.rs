use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn wildram(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wildram"))
        .args(args)
        .current_dir(root())
        .env_remove("WILDRAM_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json_of(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.push("--json");
    let o = wildram(&a);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}: {}", String::from_utf8_lossy(&o.stderr)));
    (v, code(&o))
}

fn validate(command: &str, v: &Value) {
    let path = root().join("schemas").join(format!("{command}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{command}: {errors:#?}");
}

#[test]
fn obstruction_example() {
    let o = wildram(&["obstruction", "--p", "2", "--m", "3"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("#C = 14"), "{out}");
    assert!(out.contains("obstructed yes"), "{out}");
    let (v, _) = json_of(&["obstruction", "--p", "2", "--m", "3"]);
    assert_eq!(v["report"]["crit_count"], "14");
    assert_eq!(v["report"]["obstructed"], true);
}

#[test]
fn lift_reduce_example() {
    let o = wildram(&["lift", "--p", "3", "--a", "1", "--reduce", "--sbar", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "z^3 - z over F_3\n");
}

#[test]
fn pco_dot_example() {
    let o = wildram(&["pco", "--map", "data/fc.json", "--dot"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "digraph mapping_scheme {\n  n0 [label=\"∞\", shape=doublecircle];\n  n0 -> n0 [label=\"3\"];\n}\n"
    );
}

#[test]
fn pco_inline_matches_file() {
    let a = wildram(&["pco", "--num", "0,1,0,1", "--p", "3", "--json"]);
    let b = wildram(&["pco", "--map", "data/fc.json", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn negative_answers_exit_one() {
    let o = wildram(&["conjugate", "--f", "1,1", "--g", "2,1", "--p", "3"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("not conjugate"));
    let o = wildram(&["conjugate", "--f", "1,1", "--g", "1,1", "--p", "3"]);
    assert_eq!(code(&o), 0);
    // s̄^2 = 2 has no solution in F_3
    let o = wildram(&["lift", "--p", "3", "--a", "2", "--reduce"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn input_errors_exit_two() {
    for args in [
        vec!["census", "--p", "4", "--m", "1", "--q", "4"],
        vec!["obstruction", "--p", "6", "--m", "2"],
        vec!["lift", "--p", "3", "--a", "3"],
        vec!["normal-form", "--poly", "1,0,1", "--p", "3"],
        vec!["pco", "--map", "data/missing.json"],
        vec!["monodromy", "--f", "1,x", "--p", "2"],
        vec!["census", "--p", "2"],
        vec!["no-such-command"],
        vec!["locus", "--p", "3", "--m", "1", "--n", "0"],
    ] {
        let o = wildram(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn budget_errors_exit_three() {
    let o = Command::new(env!("CARGO_BIN_EXE_wildram"))
        .args(["census", "--p", "2", "--m", "2", "--q", "4"])
        .current_dir(root())
        .env("WILDRAM_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let o = wildram(&["locus", "--p", "5", "--m", "3", "--n", "2"]);
    assert_eq!(code(&o), 3);
    let o = wildram(&["monodromy", "--f", "1,1", "--p", "2", "--depth", "13"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn help_exits_zero() {
    let o = wildram(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("census"));
}

#[test]
fn output_is_byte_identical() {
    for args in [
        vec!["census", "--p", "2", "--m", "2", "--q", "4", "--json"],
        vec!["census", "--p", "3", "--m", "1", "--q", "9"],
        vec!["monodromy", "--f", "random:2", "--p", "3", "--seed", "11", "--depth", "2"],
        vec!["orbit", "--p", "3", "--a", "4,1,2", "--steps", "6", "--json"],
        vec!["lift", "--p", "3", "--a", "1", "--dot"],
    ] {
        let a = wildram(&args);
        let b = wildram(&args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn jobs_do_not_change_output() {
    for args in [vec!["census", "--p", "3", "--m", "1", "--q", "9", "--json"], vec!["orbit", "--p", "3", "--a", "1,2,4,5,7", "--steps", "6", "--json"]] {
        let mut one = args.clone();
        one.extend(["--jobs", "1"]);
        let mut four = args.clone();
        four.extend(["--jobs", "4"]);
        assert_eq!(wildram(&one).stdout, wildram(&four).stdout, "{args:?}");
    }
    assert_eq!(code(&wildram(&["identities", "--jobs", "0"])), 2);
}

#[test]
fn seed_selects_the_random_polynomial() {
    let run = |seed: &str| {
        let (v, c) = json_of(&["monodromy", "--f", "random:2", "--p", "3", "--seed", seed]);
        assert_eq!(c, 0);
        v["f"].as_str().unwrap().to_string()
    };
    assert_eq!(run("5"), run("5"));
    let distinct: std::collections::BTreeSet<String> = (0..6).map(|s| run(&s.to_string())).collect();
    assert!(distinct.len() > 1);
    // the default seed is 0
    let (v, _) = json_of(&["monodromy", "--f", "random:2", "--p", "3"]);
    assert_eq!(v["f"].as_str().unwrap(), run("0"));
}

#[test]
fn every_json_report_matches_its_schema() {
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("census", vec!["census", "--p", "3", "--m", "1", "--q", "9"]),
        ("census", vec!["census", "--p", "2", "--m", "2", "--q", "4"]),
        ("normal-form", vec!["normal-form", "--poly", "1,2,0,2", "--p", "3"]),
        ("normal-form", vec!["normal-form", "--poly", "data/fc.json"]),
        ("conjugate", vec!["conjugate", "--f", "1,1", "--g", "2,1", "--p", "3"]),
        ("conjugate", vec!["conjugate", "--f", "1,0,1", "--g", "1,0,1", "--p", "2", "--k", "2"]),
        ("pco", vec!["pco", "--map", "data/fc.json"]),
        ("pco", vec!["pco", "--map", "data/rational.json"]),
        ("pco", vec!["pco", "--map", "data/z2_plus_z.json", "--steps", "2"]),
        ("monodromy", vec!["monodromy", "--f", "data/z2_plus_z.json", "--depth", "3"]),
        ("monodromy", vec!["monodromy", "--f", "random:1", "--p", "5", "--k", "2", "--seed", "3"]),
        ("obstruction", vec!["obstruction", "--p", "2", "--m", "3"]),
        ("obstruction", vec!["obstruction", "--p", "2", "--m", "2"]),
        ("obstruction", vec!["obstruction", "--f", "data/z2_plus_z.json"]),
        ("identities", vec!["identities"]),
        ("lift", vec!["lift", "--p", "3", "--a", "1"]),
        ("lift", vec!["lift", "--p", "2", "--a", "1", "--reduce", "--orbit", "4", "--locus", "1", "1", "--scaling-check"]),
        ("lift", vec!["lift", "--p", "5", "--a", "2", "--reduce", "--k", "4"]),
        ("orbit", vec!["orbit", "--p", "3", "--a", "1,2,4", "--steps", "8"]),
        ("orbit", vec!["orbit", "--p", "2", "--a", "2,1", "--steps", "3"]),
        ("locus", vec!["locus", "--p", "2", "--m", "1", "--n", "1"]),
        ("locus", vec!["locus", "--p", "3", "--m", "2", "--n", "2"]),
    ];
    for (command, args) in cases {
        let (v, c) = json_of(&args);
        assert!(c == 0 || c == 1, "{args:?} exited {c}");
        assert_eq!(v["command"], command, "{args:?}");
        validate(command, &v);
    }
}

#[test]
fn schemas_reject_malformed_reports() {
    let (mut v, _) = json_of(&["obstruction", "--p", "2", "--m", "3"]);
    v["report"]["crit_count"] = Value::from(14);
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(root().join("schemas/obstruction.schema.json")).unwrap()).unwrap();
    assert!(!jsonschema::validator_for(&schema).unwrap().is_valid(&v));
}

#[test]
fn orbit_and_locus_reports() {
    let (v, c) = json_of(&["orbit", "--p", "3", "--a", "2,1,4", "--steps", "8"]);
    assert_eq!(c, 0);
    let results = v["results"].as_array().unwrap();
    let a: Vec<i64> = results.iter().map(|r| r["a"].as_i64().unwrap()).collect();
    assert_eq!(a, [1, 2, 4]);
    for r in results {
        assert_eq!(r["certificate"]["verdict"]["kind"], "escape_certified");
        assert_eq!(r["certificate"]["valuations"], serde_json::json!([-1, -3, -9, -27]));
    }
    let (v, _) = json_of(&["locus", "--p", "3", "--m", "1", "--n", "1"]);
    assert_eq!(v["report"]["degree"], 9);
    // a step cap too small to decide gives a negative
    let o = wildram(&["orbit", "--p", "2", "--a", "2", "--steps", "1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn monodromy_table() {
    let o = wildram(&["monodromy", "--f", "data/z2_plus_z.json", "--depth", "3"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("  3       8       8         yes   yes         2  (2, 2, 2)"), "{out}");
    assert!(out.contains("level 3 -> 2: surjective yes, equivariant yes, kernel 2"), "{out}");
}
