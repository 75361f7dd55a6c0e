use std::process::{Command, Output};

fn fitshift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fitshift")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const S2: &str = "spec p=3 k=4 N=6 orders=3,3 d=1";

#[test]
fn ideal_equality_verdicts() {
    let o = fitshift(&["exec", "spec p=3 k=4 N=6 orders=3 d=1", "ideal-eq (t1) (t1 + t1^2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equal (mod p^4, T-degree < 6)"));
    let o = fitshift(&["exec", "spec p=3 k=4 N=6 orders=3 d=1", "ideal-eq (t1) (t1^2)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().last().unwrap().starts_with("unequal"));
}

#[test]
fn shift_of_two_factors_matches_display() {
    let want = "(tau1^2, tau1*tau2, tau2^2, tau1*N(2), tau2*N(1), (tau1, tau2, N(1), N(2))*t1, t1^2)";
    let eq = format!("frac-eq shift(2) {want}");
    let o = fitshift(&["exec", S2, "shift-trivial 2", &eq]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("/ t1"), "{out}");
    assert!(out.lines().last().unwrap().starts_with("equal"));
}

#[test]
fn parse_errors_exit_two_with_position() {
    let o = fitshift(&["exec", S2, "let x = tau1 + * t1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("2:16: syntax error"), "{err}");
    let o = fitshift(&["exec", S2, "let x = d1^t1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exponent"));
    let o = fitshift(&["exec", S2, "let x = y"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown identifier 'y'"));
}

#[test]
fn unsupported_shift_is_an_error() {
    let o = fitshift(&["exec", "spec p=3 k=3 N=4 orders=3,3 d=2", "shift-trivial -1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsupported shift"));
}

#[test]
fn session_file_with_comments_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let session = dir.path().join("s.fs");
    std::fs::write(
        &session,
        "# a session\nspec p=3 k=4 N=6 orders=3 d=1\n\nlet I = (tau1, t1)  # augmentation ideal\nlet h = [[tau1, t1]]\nideal-eq fitting(h) I\ncanon I\nfrac-eq shift(1) (N(), t1)/t1\n",
    )
    .unwrap();
    let o = fitshift(&["--json", "run", session.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let docs: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(docs.len(), 6);
    for d in &docs {
        for key in ["spec", "command", "verdict", "certified_precision", "canonical_generators"] {
            assert!(d.get(key).is_some(), "missing {key} in {d}");
        }
    }
    assert_eq!(docs[3]["verdict"], "equal");
    assert_eq!(docs[3]["certified_precision"]["k"], 4);
    assert_eq!(docs[4]["canonical_generators"][0], "t1");
    assert_eq!(docs[4]["canonical_generators"][1], "tau1");
    assert_eq!(docs[5]["certified_precision"]["t_precision"], 4);
}

#[test]
fn precision_flag_overrides_spec() {
    let o = fitshift(&["--precision", "2,3", "exec", "spec p=3 k=4 N=6 orders=3 d=1", "show"]);
    assert!(stdout(&o).contains("p=3 k=2 N=3"));
}

#[test]
fn euler_data_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    std::fs::write(
        &path,
        r#"{"p": 3, "k": 4, "N": 6, "inertia_orders": [3], "m_v": 2, "q": 2,
            "frobenius": {"delta_exponents": [1, 1], "gamma_exponent": 1}}"#,
    )
    .unwrap();
    let o = fitshift(&["euler", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("direct twist vs closed form: equal"));
    // ε must be generated by σ̃ modulo inertia
    std::fs::write(
        &path,
        r#"{"p": 3, "k": 4, "N": 6, "inertia_orders": [3], "m_v": 2, "q": 2,
            "frobenius": {"delta_exponents": [1, 2], "gamma_exponent": 1}}"#,
    )
    .unwrap();
    assert_eq!(fitshift(&["euler", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&path, "{").unwrap();
    assert_eq!(fitshift(&["euler", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_paper_is_deterministic() {
    let a = fitshift(&["verify-paper", "--precision", "3,5"]);
    let b = fitshift(&["verify-paper", "--precision", "3,5"]);
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert!(out.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).count() > 10);
    assert!(out.lines().all(|l| !l.starts_with("FAIL")), "{out}");
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn verify_paper_default_run() {
    let o = fitshift(&["verify-paper"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("0 failed\n"));
}

#[test]
fn rebinding_and_reserved_names() {
    let o = fitshift(&["exec", S2, "let a = 1", "let a = 2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = fitshift(&["exec", S2, "let tau1 = 2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = fitshift(&["exec", "let a = 1"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no ring defined"));
}
