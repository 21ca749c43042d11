use std::process::Command;

fn qrotlearn(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qrotlearn")).args(args).output().expect("binary runs")
}

#[test]
fn optimal_prints_csv() {
    let out = qrotlearn(&["optimal", "--two-j", "3", "--theta", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("two_j,j,theta_over_pi,problem,regime,optimal_two_m,f_quantum"));
    assert_eq!(lines.next(), Some("3,1.5,1,1,case1,3,0.708333333333"));
}

#[test]
fn benchmark_json_is_parseable() {
    let out = qrotlearn(&["benchmark", "--two-j", "2", "--theta", "1", "--problem", "2", "--format", "json"]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = &rows[0];
    assert_eq!(row["f_quantum"], row["f_mo"]);
    assert_eq!(row["advantage"].as_f64(), Some(0.0));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(qrotlearn(&["optimal", "--theta", "2.5"]).status.code(), Some(2));
    assert_eq!(qrotlearn(&["nonsense"]).status.code(), Some(2));
    assert_eq!(qrotlearn(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_small_grid_passes() {
    let out = qrotlearn(&["verify", "--two-j", "2", "--theta", "1", "--n-samples", "20000", "--seed", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["seed"], 3);
}
