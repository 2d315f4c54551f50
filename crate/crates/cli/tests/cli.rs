use std::io::Write;
use std::process::{Command, Output, Stdio};

use fine_core::numbers::{ballot, catalan};
use fine_core::perm::enumerate_derangements_avoiding_321;
use fine_core::Limits;

fn fine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fine")).args(args).env_remove("FINE_LIMITS").output().unwrap()
}

fn fine_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fine"))
        .args(args)
        .env_remove("FINE_LIMITS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = fine(args);
    assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn count_examples() {
    assert_eq!(ok(&["count", "--family", "words", "--p", "0", "--q", "2", "--n", "5"]), "18\n");
    assert_eq!(ok(&["count", "--family", "avoiders", "--set", "F3", "--n", "4"]), "18\n");
    assert_eq!(ok(&["count", "--family", "derangements321", "--n", "9"]), "2120\n");
}

#[test]
fn count_both_agrees_with_oracle() {
    let out = ok(&["count", "--family", "avoiders", "--set", "H3IC", "--n", "6", "--both"]);
    assert!(out.ends_with("agree\n"), "{out}");
    let out = ok(&["count", "--family", "paths", "--n", "6", "--both"]);
    assert_eq!(out, format!("formula {0}\noracle {0}\nagree\n", catalan(6)));
}

#[test]
fn count_custom_set_uses_oracle() {
    // Av(12) has one member of each size.
    assert_eq!(ok(&["count", "--family", "avoiders", "--set", "12", "--n", "5"]), "1\n");
    // Av(123, 132, 213) is counted by Fibonacci numbers.
    assert_eq!(ok(&["count", "--family", "avoiders", "--set", "123;132;213", "--n", "6"]), "13\n");
}

#[test]
fn enumerate_examples() {
    assert_eq!(
        ok(&["enumerate", "--family", "words", "--p", "1", "--q", "3", "--n", "4"]),
        "0012\n0111\n0112\n0121\n0122\n0123\n"
    );
    assert_eq!(ok(&["enumerate", "--family", "derangements321", "--n", "3"]), "231\n312\n");
}

#[test]
fn size_limits_exit_3() {
    let o = fine(&["enumerate", "--family", "avoiders", "--set", "F1", "--n", "12"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("limit"));
    let o = Command::new(env!("CARGO_BIN_EXE_fine"))
        .args(["enumerate", "--family", "words", "--n", "6"])
        .env("FINE_LIMITS", "word=5")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    let o = Command::new(env!("CARGO_BIN_EXE_fine"))
        .args(["--unsafe-limits", "count", "--family", "words", "--n", "6", "--both"])
        .env("FINE_LIMITS", "word=5")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_fine"))
        .args(["count", "--family", "words", "--n", "6"])
        .env("FINE_LIMITS", "bogus=5")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(code(&fine(&[])), 3);
    assert_eq!(code(&fine(&["count", "--family", "nope", "--n", "3"])), 3);
    assert_eq!(code(&fine(&["count", "--family", "avoiders", "--n", "3"])), 3);
    assert_eq!(code(&fine(&["verify", "--check", "thm9"])), 3);
    assert_eq!(code(&fine(&["--format", "dot", "count", "--family", "paths", "--n", "3"])), 3);
    assert_eq!(code(&fine(&["map", "--from", "der", "--to", "relation", "--input", "123"])), 3);
    assert_eq!(code(&fine(&["--help"])), 0);
    assert_eq!(code(&fine(&["--version"])), 0);
}

#[test]
fn map_examples() {
    assert_eq!(ok(&["map", "--from", "der", "--to", "relation", "--input", "231"]), "3; 1-2, 2-3\n");
    assert_eq!(ok(&["map", "--from", "der", "--to", "relation", "--input", "312"]), "3; 1-2, 1-3, 2-3\n");
    assert_eq!(ok(&["map", "--from", "relation", "--to", "der", "--input", "3; 1-2, 2-3"]), "231\n");
    assert_eq!(ok(&["map", "--from", "WORD(1,3)", "--to", "dyck", "--input", "0012"]), "uduuuddd\n");
    assert_eq!(ok(&["map", "--from", "dyck", "--to", "WORD(1,3)", "--input", "uduuuddd"]), "0012\n");
}

#[test]
fn map_unsupported_pair_exits_2() {
    assert_eq!(code(&fine(&["map", "--from", "H1", "--to", "F1", "--input", "1"])), 2);
    assert_eq!(code(&fine(&["map", "--from", "F1", "--to", "dyck", "--input", "1"])), 2);
}

#[test]
fn derangement_relation_roundtrip_all_small() {
    let mut total = 0;
    for n in 2..=7 {
        let ders: Vec<String> =
            enumerate_derangements_avoiding_321(n, &Limits::default()).unwrap().iter().map(|d| d.to_string()).collect();
        let o = fine_stdin(&["map", "--from", "der", "--to", "relation", "--roundtrip"], &ders.join("\n"));
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let rels: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
        assert_eq!(rels.len(), ders.len());
        let mut distinct = rels.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), ders.len(), "n = {n}");
        assert!(rels.iter().all(|r| r.starts_with(&format!("{n};"))));
        total += ders.len();
    }
    assert_eq!(num_bigint::BigUint::from(total), (1..=6).map(fine_core::numbers::fine).sum());
}

#[test]
fn map_roundtrip_between_trees() {
    let perms = ok(&["enumerate", "--family", "avoiders", "--set", "H3", "--n", "5"]);
    let o = fine_stdin(&["map", "--from", "H3", "--to", "H3IC", "--roundtrip"], &perms);
    assert_eq!(code(&o), 0);
    // H3 members are not all H2 members.
    let o = fine_stdin(&["map", "--from", "H2", "--to", "H4", "--roundtrip"], &perms);
    assert_eq!(code(&o), 3);
    let perms = ok(&["enumerate", "--family", "avoiders", "--set", "H2", "--n", "5"]);
    let o = fine_stdin(&["map", "--from", "H2", "--to", "H4", "--roundtrip"], &perms);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), perms.lines().count());
}

#[test]
fn verify_examples_clean() {
    let out = ok(&["verify", "--check", "shapiro", "--max-n", "15"]);
    assert!(out.starts_with("check shapiro: clean\n"));
    assert_eq!(out.lines().filter(|l| l.contains("expected")).count(), 14);
    assert!(ok(&["verify", "--check", "formula", "--max-n", "12"]).starts_with("check formula: clean"));
    assert!(ok(&["verify", "--check", "succession:H4", "--depth", "7"]).starts_with("check succession:H4: clean"));
    assert!(ok(&["verify", "--check", "bijection:H1:WORD(1,3)", "--depth", "6"]).contains("route: tree (shift 0/1)"));
}

#[test]
fn verify_theorem_checks_clean() {
    for check in ["thm1", "thm2", "thm3", "thm4"] {
        let out = ok(&["verify", "--check", check, "--depth", "6", "--max-n", "8"]);
        assert!(!out.contains("VIOLATION"), "{out}");
    }
}

#[test]
fn verify_past_depth_limit_exits_3() {
    assert_eq!(code(&fine(&["verify", "--check", "succession:F1", "--depth", "20"])), 3);
}

#[test]
fn tree_examples() {
    let out = ok(&["tree", "--family", "F3", "--depth", "3", "--format", "text"]);
    assert_eq!(out.lines().count(), 9);
    let by_depth = |d: usize| out.lines().filter(|l| l.len() - l.trim_start().len() == 2 * d).count();
    assert_eq!((by_depth(0), by_depth(1), by_depth(2)), (1, 2, 6));
    assert!(out.starts_with("1 [2]\n"));
    let dot = ok(&["tree", "--system", "d1", "--p", "1", "--q", "3", "--depth", "5", "--format", "dot"]);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("label=\"@2\""));
    assert_eq!(ok(&["tree", "--family", "H1", "--depth", "1"]).lines().count(), 1);
    assert_eq!(ok(&["tree", "--system", "F1", "--depth", "1"]), "[2]\n");
}

#[test]
fn tree_level_sizes_follow_ballot_sums() {
    let out = ok(&["--format", "json", "tree", "--system", "d1", "--p", "1", "--q", "3", "--depth", "6"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let nodes = v["nodes"].as_array().unwrap();
    for level in 1..=6u32 {
        let c = nodes.iter().filter(|n| n["level"] == level).count();
        let want: num_bigint::BigUint = (0..=level / 3).map(|k| ballot(level, 3 * k + 1)).sum();
        assert_eq!(num_bigint::BigUint::from(c), want, "level {level}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "json", "verify", "--check", "thm2", "--depth", "5", "--max-n", "7"];
    assert_eq!(ok(&args), ok(&args));
    let args = ["tree", "--family", "DER", "--depth", "5", "--format", "dot"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn json_outputs_match_schema() {
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../../../docs/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let runs: [&[&str]; 9] = [
        &["verify", "--check", "thm2", "--depth", "5", "--max-n", "7"],
        &["verify", "--check", "succession:H1", "--depth", "5"],
        &["verify", "--check", "bijection:F1:DER", "--depth", "5"],
        &["count", "--family", "words", "--p", "1", "--q", "3", "--n", "7"],
        &["count", "--family", "avoiders", "--set", "1234", "--n", "5", "--both"],
        &["enumerate", "--family", "paths", "--n", "3"],
        &["map", "--from", "der", "--to", "relation", "--input", "2413", "--roundtrip"],
        &["tree", "--family", "H1", "--depth", "4"],
        &["tree", "--system", "d1", "--p", "0", "--q", "2", "--depth", "4"],
    ];
    for args in runs {
        let mut full = vec!["--format", "json"];
        full.extend_from_slice(args);
        let v: serde_json::Value = serde_json::from_str(&ok(&full)).unwrap();
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
    let not_a_report = serde_json::json!({"check": "x", "clean": true, "sections": []});
    assert!(!validator.is_valid(&not_a_report));
}
