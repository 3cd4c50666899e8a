use std::process::Command;

fn jones(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_jones")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn verify_filters_by_suite() {
    let (code, out, _) = jones(&["verify", "--suite", "beta"]);
    assert_eq!(code, 0, "{out}");
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|l| l.starts_with("beta ")), "{out}");
}

#[test]
fn injected_fault_names_the_property() {
    let (code, out, _) = jones(&["verify", "--suite", "banach", "--inject-fault", "lipschitz"]);
    assert_eq!(code, 1);
    assert!(out.contains("violated: banach/projection_lipschitz"), "{out}");
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(jones(&["classify", "--curve", "segment", "--lambda", "3"]).0, 2);
    assert_eq!(jones(&["net", "--curve", "hilbert_curve"]).0, 2);
    assert_eq!(jones(&["net"]).0, 2);
    assert_eq!(jones(&["verify", "--suite", "nope"]).0, 2);
    assert_eq!(jones(&["frobnicate"]).0, 2);
}

#[test]
fn jones_sum_of_segment() {
    let (code, out, _) = jones(&["jones-sum", "--curve", "segment:length=2", "--p", "1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("S = 2.000000000000"), "{out}");
}

#[test]
fn plot_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, _, err) = jones(&["plot", "--curve", "t_junction", "--out", d, "--J", "5", "--profile", "lab"]);
    assert_eq!(code, 0, "{err}");
    for f in ["report.json", "beta_map.csv", "classification.csv", "cores.json", "weights.json", "beta_scale.svg"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let (code, _, _) = jones(&["ratio-table", "--curve", "koch:depth=1", "--depths", "1..2", "--out", d]);
    assert_eq!(code, 0);
    assert!(dir.path().join("ratio_table.csv").exists() && dir.path().join("ratio_depth.svg").exists());
}
