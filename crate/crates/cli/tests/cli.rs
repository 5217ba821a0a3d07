//! End-to-end tests of the binary: exit codes, output formats and the
//! stability guarantees of the trace stream.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wfa-learn"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    let mut cmd = bin();
    for a in args {
        if let Some(name) = a.strip_prefix("fixture:") {
            cmd.arg(fixture(name));
        } else {
            cmd.arg(a);
        }
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn learn_integer_target_succeeds() {
    let out = run(&["learn", "fixture:a_nat_as_int.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("learned a 2-state automaton"), "{text}");
    assert!(text.contains("counterexamples processed: 1"), "{text}");
}

#[test]
fn learn_natural_target_exhausts_budget() {
    let out = run(&["learn", "fixture:a_nat.json", "--budget", "12"]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("budget exhausted"), "{text}");
    assert!(
        text.contains("aaaaaaaaaa"),
        "rows up to a^10 listed: {text}"
    );
}

#[test]
fn learn_missing_file_is_an_input_error() {
    let out = run(&["learn", "fixture:missing.json"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn learn_trace_matches_the_golden_file() {
    let out = run(&["learn", "fixture:a_rat.json", "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read_to_string(fixture("golden/learn_rat.trace")).unwrap();
    assert_eq!(stderr(&out), golden);

    let out = run(&["learn", "fixture:a_nat_as_int.json", "--trace"]);
    let golden = std::fs::read_to_string(fixture("golden/learn_int.trace")).unwrap();
    assert_eq!(stderr(&out), golden);
}

#[test]
fn learn_with_semiring_override() {
    // embedding the natural target into the rationals reproduces the
    // rational run
    let out = run(&[
        "learn",
        "fixture:a_nat.json",
        "--semiring",
        "rat",
        "--trace",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read_to_string(fixture("golden/learn_rat.trace")).unwrap();
    assert_eq!(stderr(&out), golden);

    // a rational weight that is not natural cannot be narrowed
    let out = run(&["learn", "fixture:hyp2_rat.json", "--semiring", "nat"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn learn_json_report_round_trips() {
    let out = run(&["learn", "fixture:a_nat_as_int.json", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(report["result"], "learned");
    assert_eq!(report["stats"]["defects_fixed"], 1);
    assert_eq!(report["stats"]["counterexamples"], 1);
    assert_eq!(report["stats"]["final_rows"], 2);
    assert_eq!(report["stats"]["final_cols"], 4);
    // the embedded automaton parses back
    let wfa_text = serde_json::to_string(&report["wfa"]).unwrap();
    let parsed = wfa_learn::AnyWfa::parse(&wfa_text).expect("embedded WFA parses");
    assert_eq!(parsed.tag(), "int");
    assert_eq!(parsed.states(), 2);
}

#[test]
fn learn_writes_the_learned_automaton() {
    let dir = std::env::temp_dir().join("wfa-learn-test-out");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("learned.json");
    let out = run(&[
        "learn",
        "fixture:a_nat_as_int.json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let learned = wfa_learn::AnyWfa::parse(&text).unwrap();
    assert_eq!(learned.states(), 2);
}

#[test]
fn eval_prints_exact_values() {
    let out = run(&["eval", "fixture:two_state_rat.json", "aaa"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "23");

    let out = run(&["eval", "fixture:two_state_rat.json", ""]);
    assert_eq!(stdout(&out).trim(), "2");

    let out = run(&["eval", "fixture:two_state_rat.json", "ab"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("unknown symbol"));
}

#[test]
fn equiv_exit_codes() {
    let out = run(&["equiv", "fixture:hyp2_rat.json", "fixture:a_rat.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "equivalent");

    let out = run(&["equiv", "fixture:hyp1_rat.json", "fixture:a_rat.json"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("witness aaa"), "{text}");
    assert!(
        text.contains("left: 9") && text.contains("right: 7"),
        "{text}"
    );

    let out = run(&["equiv", "fixture:a_rat.json", "fixture:a_nat.json"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("semiring mismatch"));
}

#[test]
fn snf_prints_the_decomposition() {
    let out = run(&["snf", "fixture:matrix_example.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["d"], serde_json::json!([[2, 0], [0, 4]]));
    // treat the printed factors as claims and check them
    let to_matrix = |key: &str| {
        let rows = v[key].as_array().unwrap();
        wfa_learn::Matrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.as_array()
                        .unwrap()
                        .iter()
                        .map(|c| wfa_learn::Int::from(c.as_i64().unwrap()))
                        .collect()
                })
                .collect(),
        )
    };
    let (u, d, vv) = (to_matrix("u"), to_matrix("d"), to_matrix("v"));
    let a = wfa_learn::Matrix::from_rows(vec![
        vec![wfa_learn::Int::from(2), wfa_learn::Int::from(4)],
        vec![wfa_learn::Int::from(6), wfa_learn::Int::from(8)],
    ]);
    assert_eq!(u.mat_mul(&a).mat_mul(&vv), d);
}

#[test]
fn demo_nat_reports_defects_until_exhaustion() {
    let out = run(&["demo-nat", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("closedness defect at a\n"), "{text}");
    assert!(text.contains("counterexample aaa"), "{text}");
    assert!(text.contains("closedness defect at aa"), "{text}");
    assert!(text.contains("confirmed by the reverse search"), "{text}");
    assert!(
        text.trim_end()
            .ends_with("budget exhausted, table not closed"),
        "{text}"
    );

    let out = run(&["demo-nat", "--steps", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert_eq!(text.matches("closedness defect").count(), 1, "{text}");
    assert!(text.contains("closedness defect at a\n"), "{text}");
}

#[test]
fn gen_is_deterministic_and_validates() {
    let a = run(&[
        "gen",
        "--semiring",
        "int",
        "--states",
        "3",
        "--alphabet",
        "2",
        "--seed",
        "7",
    ]);
    let b = run(&[
        "gen",
        "--semiring",
        "int",
        "--states",
        "3",
        "--alphabet",
        "2",
        "--seed",
        "7",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let parsed = wfa_learn::AnyWfa::parse(&stdout(&a)).unwrap();
    assert_eq!(parsed.states(), 3);
    assert_eq!(parsed.alphabet().len(), 2);

    let c = run(&[
        "gen",
        "--semiring",
        "int",
        "--states",
        "3",
        "--alphabet",
        "2",
        "--seed",
        "8",
    ]);
    assert_ne!(stdout(&a), stdout(&c));

    let bad = run(&[
        "gen",
        "--semiring",
        "int",
        "--states",
        "3",
        "--alphabet",
        "2",
        "--density",
        "1.5",
    ]);
    assert_eq!(bad.status.code(), Some(3));

    let bad = run(&[
        "gen",
        "--semiring",
        "frac",
        "--states",
        "3",
        "--alphabet",
        "2",
    ]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn generated_targets_can_be_learned() {
    let dir = std::env::temp_dir().join("wfa-learn-test-gen");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("target.json");
    for (semiring, seed) in [("rat", "11"), ("bool", "12")] {
        let out = run(&[
            "gen",
            "--semiring",
            semiring,
            "--states",
            "3",
            "--alphabet",
            "2",
            "--seed",
            seed,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let out = bin().arg("learn").arg(&path).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
}

#[test]
fn fixtures_round_trip_through_the_parser() {
    for name in ["a_nat.json", "a_nat_as_int.json", "a_rat.json", "two_state_rat.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let parsed = wfa_learn::AnyWfa::parse(&text).unwrap();
        let reserialized: serde_json::Value =
            serde_json::from_str(&parsed.to_json_string()).unwrap();
        let original: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(reserialized, original, "{name} must round-trip modulo whitespace");
    }
}

#[test]
fn usage_errors_are_input_errors() {
    let out = run(&["learn"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}
