use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidity"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn file(dir: &TempDir, name: &str, text: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const CHAIN5: &str = "N 5\nL 5\nA 2 1\nA 3 2\nA 4 3\nA 5 4\n";

#[test]
fn type_c_inverse() {
    let o = run(&["lattice", "verify", "--case", "C"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("CHECK theta_inverse PASS"));
}

#[test]
fn line_count_four() {
    let o = run(&["count", "lines", "--M", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("240"));
}

#[test]
fn path_count_on_chain() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "chain5.g", CHAIN5);
    let o = run(&["graph", "paths", &g, "--from", "5", "--to", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("CHECK p_5_1 PASS value=1\n"));
}

#[test]
fn malformed_input_exits_2_naming_file_and_line() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "bad.g", "N 2\nL x\n");
    let o = run(&["graph", "validate", &g]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.g:2: bad integer 'x'"), "{err}");
    assert_eq!(
        run(&["graph", "validate", "/nonexistent/file.g"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn invalid_graph_reports_fail() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "open.g", "N 4\nL 4\nA 2 1\nA 3 2\nA 4 3\nA 4 1\n");
    let o = run(&["graph", "validate", &g]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o)
        .contains("CHECK violation FAIL ordering closure: (4,1) present but (3,1) absent"));
}

#[test]
fn simplify_output_reads_back() {
    let d = TempDir::new().unwrap();
    let g = file(
        &d,
        "k4.g",
        "N 4\nL 4\nA 2 1\nA 3 1\nA 3 2\nA 4 1\nA 4 2\nA 4 3\n",
    );
    let o = run(&["graph", "simplify", &g]);
    assert_eq!(stdout(&o), "N 4\nL 4\nA 2 1\nA 3 1\nA 3 2\nA 4 2\nA 4 3\n");
}

#[test]
fn lp_commands() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "chain2.g", "N 2\nL 2\nA 2 1\n");
    let o = run(&["lp", "min", &g, "--m", "1"]);
    assert!(stdout(&o).contains("CHECK minimum PASS value=8/3 vertex (2/3,4/3)"));
    let o = run(&["lp", "a13", &g, "--m", "1", "--decimal"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value=8/3 ~2.666667"));
    let o = run(&["lp", "build", &g, "--m", "1"]);
    assert!(stdout(&o).starts_with("VARS 2\n"));
}

#[test]
fn json_lines_mirror_text() {
    let o = run(&[
        "--format",
        "json-lines",
        "count",
        "rank",
        "--M",
        "6",
        "--rank",
        "3",
    ]);
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["name"], "conditions");
    assert_eq!(lines[0]["value"], "10");
    assert_eq!(lines[0]["verdict"], "PASS");
}

#[test]
fn restriction_and_square() {
    let o = run(&[
        "lattice", "restrict", "--kind", "cone23", "--M", "4", "--n", "1",
    ]);
    assert!(stdout(&o).contains("nu- > 1/2*n given nu+ > n"));
    let o = run(&["square", "sqrt", "--coeffs", "1,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("CHECK is_square FAIL value=2"));
    let o = run(&["square", "apoly", "--m", "2", "--i", "3"]);
    assert!(stdout(&o).contains("1/2*s1*s2 - 1/8*s1^3"));
}

#[test]
fn valuation_commands() {
    let d = TempDir::new().unwrap();
    let v = file(&d, "v.val", "N 1\nL 1\nNU 1 4\nDELTA 1 2\nTHRESH 1\n");
    let o = run(&["nf", "excess", &v, "--canonical"]);
    assert!(stdout(&o).contains("CHECK canonical_excess PASS value=2"));
    let o = run(&["nf", "excess", &v]);
    assert!(stdout(&o).contains("CHECK log_excess PASS value=1"));
}

#[test]
fn section4_skeleton() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "c32.g", "N 3\nL 2\nA 2 1\nA 3 2\n");
    let held = run(&["argue", "s4", &g, "--n", "1", "--m1", "5", "--m2", "10/3"]);
    assert_eq!(held.status.code(), Some(0), "{}", stdout(&held));
    assert!(stdout(&held).contains("CHECK conclusion PASS"));
    let open = run(&["argue", "s4", &g, "--n", "1", "--m1", "4", "--m2", "4"]);
    assert_eq!(open.status.code(), Some(1));
}

#[test]
fn suite_is_deterministic_and_seeded() {
    let a = run(&["suite", "--seed", "5"]);
    let b = Command::new(env!("CARGO_BIN_EXE_rigidity"))
        .arg("suite")
        .env("RIGIDITY_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("REPORT rigidity 0.1.0 suite seed=5\n"));
}
