use std::path::Path;
use std::process::{Command, Output};

use bigframe::instances::fixtures::{example_3_4, example_3_6};
use bigframe::instances::format::{deserialize, serialize, serialize_operator};
use bigframe::linalg::{diag, scaled_identity};
use bigframe::transforms::swap;
use tempfile::TempDir;

const EXAMPLE_3_4_ANALYZE: &str = "\
system: dim 4, 4 members, subspace dims [1, 2, 3, 4]
verdict: k_bi_g_frame
optimal bounds: A = 1, B = 2
spectrum of S: [0, 2], hermiticity residual 0
rank of K: 1
bi-g-frame (K = I): no
annotations: none

classification=k_bi_g_frame
A_opt=1
B_opt=2
hermiticity_residual=0
min_eigenvalue=0
tight_residual=2.2360679775
k_rank=1
degenerate_k=false
";

fn bigframe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bigframe"))
        .args(args)
        .env_remove("BIGFRAME_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_golden() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "e34.bgf", &serialize(&example_3_4()));
    let o = bigframe(&["analyze", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), EXAMPLE_3_4_ANALYZE);
    assert!(stderr(&o).is_empty());
}

#[test]
fn analyze_parseval_example() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "e36.bgf", &serialize(&example_3_6()));
    let out = stdout(&bigframe(&["analyze", &f]));
    assert!(out.contains("classification=parseval_k_bi_g_frame\nA_opt=1\nB_opt=1\n"));
}

#[test]
fn bounds_prints_two_lines() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "e34.bgf", &serialize(&example_3_4()));
    assert_eq!(stdout(&bigframe(&["bounds", &f])), "A_opt=1\nB_opt=2\n");
}

#[test]
fn parse_errors_exit_3() {
    let dir = TempDir::new().unwrap();
    let text = serialize(&example_3_4());
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let short: Vec<&str> = lines[10].split_whitespace().take(6).collect();
    lines[10] = short.join(" ");
    let f = write(&dir, "short.bgf", &(lines.join("\n") + "\n"));
    let o = bigframe(&["analyze", &f]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr(&o), "error: parse: line 11: expected 4 entries\n");
    assert!(stdout(&o).is_empty());

    let truncated: String = text.lines().take(12).map(|l| format!("{l}\n")).collect();
    let f = write(&dir, "truncated.bgf", &truncated);
    let o = bigframe(&["bounds", &f]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error: parse: line 13:"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify"][..],
        &["verify", "6.1"],
        &["analyze"],
        &["analyze", "/nonexistent/system.bgf"],
        &["generate", "--dim", "0", "--count", "2"],
        &["generate", "--dim", "4", "--count", "2", "--kind", "wavelet"],
        &["example", "3.5"],
        &["--rank-tol", "1.5", "example", "3.4"],
        &["frobnicate"],
    ] {
        let o = bigframe(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).starts_with("error"), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn env_tolerance_override() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "e34.bgf", &serialize(&example_3_4()));
    let run = |value: &str| {
        Command::new(env!("CARGO_BIN_EXE_bigframe")).args(["bounds", &f]).env("BIGFRAME_TOL", value).output().unwrap()
    };
    assert_eq!(run("1e-8").status.code(), Some(0));
    let o = run("loose");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: BIGFRAME_TOL"));
}

#[test]
fn verify_exit_codes_and_determinism() {
    let a = bigframe(&["verify", "3.7", "--instances", "200", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).starts_with("PASS 3.7: 200/200 trials passed (seed 7)"));
    assert!(stdout(&a).contains("\npassed=200\nfailed=0\n"));
    let b = bigframe(&["verify", "3.7", "--instances", "200", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(bigframe(&["verify", "3.7", "--instances", "0"]).status.code(), Some(2));
}

#[test]
fn verify_writes_csv() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("margins.csv");
    let o = bigframe(&["verify", "4.2", "--instances", "10", "--out", path_str(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 11);
    assert!(text.starts_with("theorem,seed,index,passed,margin,detail\n4.2,0,0,true,"));
}

#[test]
fn generate_and_example_files() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("tight.bgf");
    let o = bigframe(&["generate", "--dim", "5", "--count", "3", "--kind", "tight", "--seed", "9", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let analyzed = stdout(&bigframe(&["analyze", path_str(&out)]));
    assert!(analyzed.contains("classification=tight_k_bi_g_frame") || analyzed.contains("classification=parseval"));

    let again = stdout(&bigframe(&["generate", "--dim", "5", "--count", "3", "--kind", "tight", "--seed", "9"]));
    assert_eq!(again, std::fs::read_to_string(&out).unwrap());

    let deficient = stdout(&bigframe(&["generate", "--dim", "6", "--count", "4", "--kind", "rank-deficient-k", "--k-rank", "2"]));
    assert!(stdout(&bigframe(&["analyze", &write(&dir, "d.bgf", &deficient)])).contains("k_rank=2"));

    let e = stdout(&bigframe(&["example", "3.4"]));
    assert_eq!(deserialize(&e).unwrap(), example_3_4());
}

#[test]
fn transforms_write_systems() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "e36.bgf", &serialize(&example_3_6()));

    let o = bigframe(&["transform", &input, "--op", "swap"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(deserialize(&stdout(&o)).unwrap(), swap(&example_3_6()));

    let m = write(&dir, "m.op", &serialize_operator(&scaled_identity(4, 2.0)));
    let o = bigframe(&["transform", &input, "--op", "right-compose", "--operand", &m]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# transform 4.3: predicted_lower=4 predicted_upper=4\n"), "{text}");
    let analyzed = stdout(&bigframe(&["analyze", &write(&dir, "rc.bgf", &text)]));
    assert!(analyzed.contains("A_opt=4\nB_opt=4\n"), "{analyzed}");

    let t = write(&dir, "t.op", &serialize_operator(&diag(&[1.0, 0.5, 0.25, 0.0])));
    let o = bigframe(&["transform", &input, "--op", "positive-perturb", "--operand", &t, "--power", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(deserialize(&stdout(&o)).is_ok());

    let o = bigframe(&["transform", &input, "--op", "restrict-range", "--operand", &t]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("# transform 4.1: predicted_lower=1"));

    let indefinite = write(&dir, "neg.op", &serialize_operator(&diag(&[1.0, -1.0, 0.0, 0.0])));
    let o = bigframe(&["transform", &input, "--op", "positive-perturb", "--operand", &indefinite]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error:"));

    assert_eq!(bigframe(&["transform", &input, "--op", "right-compose"]).status.code(), Some(2));
    let bad = write(&dir, "bad.op", "operator v1\nshape 2 2\n1 0 0 0\n");
    assert_eq!(bigframe(&["transform", &input, "--op", "right-compose", "--operand", &bad]).status.code(), Some(3));
}

#[test]
fn help_exits_zero() {
    let o = bigframe(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    for sub in ["analyze", "bounds", "verify", "generate", "example", "transform"] {
        assert!(stdout(&o).contains(sub));
    }
}
