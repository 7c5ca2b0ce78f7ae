mod common;

use std::fs;
use std::process::Command;

use common::read_results;

fn drumhead() -> Command {
    Command::new(env!("CARGO_BIN_EXE_drumhead"))
}

#[test]
fn empty_experiment_list_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"version": 1, "experiments": []}"#).unwrap();
    let out = dir.path().join("out");
    let st = drumhead().arg("run").arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert!(st.success());
    let text = fs::read_to_string(out.join("results.csv")).unwrap();
    assert_eq!(text, "name,metric,value,bracket_lo,bracket_hi,pass,h,seconds\n");
}

#[test]
fn malformed_json_fails_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, "{\"version\": 1,\n \"experiments\": [}").unwrap();
    let out = dir.path().join("out");
    let res = drumhead().arg("run").arg(&cfg).arg("--out").arg(&out).output().unwrap();
    assert!(!res.status.success());
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(!out.exists());
}

#[test]
fn unknown_domain_reference_fails_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"version": 1, "experiments": [{"kind": "eigensolve", "name": "e", "domain": "nope", "resolution": {"h": 0.1}}]}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let st = drumhead().arg("run").arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert!(!st.success());
    assert!(!out.exists());
}

const SQUARE: &str = r#"{"version": 1,
  "domains": {"sq": {"kind": "rectangle", "lo": [0, 0], "hi": [1, 1]}},
  "experiments": [{"kind": "eigensolve", "name": "square", "domain": "sq",
                   "resolution": {"h": 0.015625},
                   "expect": [{"value": 19.7392088, "rel_tol": 0.001}]}]}"#;

#[test]
fn square_eigensolve_reports_lambda_and_image() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, SQUARE).unwrap();
    let out = dir.path().join("out");
    let st = drumhead()
        .arg("run")
        .arg(&cfg)
        .env("DRUMHEAD_OUT", &out)
        .status()
        .unwrap();
    assert!(st.success());
    let rows = read_results(&out.join("results.csv"));
    let l1 = rows.iter().find(|r| r.metric == "lambda_1").unwrap();
    assert!((l1.value - 19.739).abs() < 0.02, "{}", l1.value);
    assert!(l1.pass);

    let pgm = fs::read_to_string(out.join("square/phi1.pgm")).unwrap();
    let mut lines = pgm.lines();
    assert_eq!(lines.next(), Some("P2"));
    assert!(lines.next().unwrap().starts_with("# h=0.015625 scale="));
    let dims: Vec<usize> = lines.next().unwrap().split(' ').map(|s| s.parse().unwrap()).collect();
    assert_eq!(lines.next(), Some("255"));
    let px: Vec<Vec<u8>> = lines
        .map(|l| l.split(' ').map(|s| s.parse().unwrap()).collect())
        .collect();
    assert_eq!(px.len(), dims[1]);
    // symmetric under the square's reflections and the diagonal swap
    let n = px.len();
    for i in 0..n {
        for j in 0..n {
            assert_eq!(px[i][j], px[n - 1 - i][j]);
            assert_eq!(px[i][j], px[i][n - 1 - j]);
            assert_eq!(px[i][j], px[j][i]);
        }
    }
    assert_eq!(px.iter().flatten().copied().max(), Some(255));
}

#[test]
fn failed_check_gives_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, SQUARE.replace("19.7392088", "25.0")).unwrap();
    let out = dir.path().join("out");
    let st = drumhead().arg("run").arg(&cfg).arg("--out").arg(&out).arg("--fast").status().unwrap();
    assert_eq!(st.code(), Some(1));
    let rows = read_results(&out.join("results.csv"));
    assert!(rows.iter().any(|r| !r.pass));
}

#[test]
fn solver_failure_marks_experiment_and_run_continues() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    // k = 400 on a coarse grid cannot be solved; the green check still runs
    fs::write(
        &cfg,
        r#"{"version": 1,
  "domains": {"sq": {"kind": "rectangle", "lo": [0, 0], "hi": [1, 1]}},
  "experiments": [
    {"kind": "eigensolve", "name": "bad", "domain": "sq", "resolution": {"h": 0.125}, "k": 400},
    {"kind": "green_check", "name": "green", "eps": [1.0], "modes": ["interior"], "radial": 8,
     "angular": 16, "bracket": [0.05, 0.5], "invariance_tol": 1e-10}]}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let st = drumhead().arg("run").arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert_eq!(st.code(), Some(1));
    let rows = read_results(&out.join("results.csv"));
    assert_eq!(rows[0].name, "bad");
    assert_eq!(rows[0].metric, "error");
    assert!(!rows[0].pass);
    assert!(rows[1..].iter().all(|r| r.name == "green" && r.pass));
}
