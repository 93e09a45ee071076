use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn qmsgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmsgap")).args(args).env("QMSGAP_LOG", "error").output().unwrap()
}

fn config(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gap_on_depolarizing_is_the_rate() {
    let o = qmsgap(&["gap", &config("depolarizing.json"), "--f", "kms"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("f,alpha,lambda,kernel_dim,min_spectrum,residual"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "kms");
    // Pauli jumps of strength γ/2 = 1/8 give the depolarizing rate 2γ = 1/2
    assert!((row[2].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(row[3], "1");
    assert!(!text.contains('"') && !text.contains('\r'));
}

#[test]
fn pure_invariant_state_is_ill_posed() {
    let o = qmsgap(&["gap", &config("amplitude_damping.json"), "--f", "gns"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not faithful"));
}

#[test]
fn malformed_input_exits_3_with_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"schema_version": 1, "dim": 2, "hamiltonian": [[0, 0], [0, 0], [0, 0]]}"#).unwrap();
    let o = qmsgap(&["gap", bad.to_str().unwrap(), "--f", "gns"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hamiltonian"));
    let o = qmsgap(&["gap", &config("depolarizing.json"), "--f", "power:1.5"]);
    assert_eq!(o.status.code(), Some(3));
    let o = qmsgap(&["gap", &config("depolarizing.json")]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn measure_descriptor_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    std::fs::write(&m, r#"[{"lambda": 1, "weight": 1}]"#).unwrap();
    let spec = format!("measure:{}", m.display());
    let o = qmsgap(&["gap", &config("driven_thermal_qubit.json"), "--f", &spec]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    // the point mass at λ = 1 is the arithmetic-mean function (1 + t)/2
    let arith = stdout(&o).lines().nth(1).unwrap().split(',').nth(2).unwrap().parse::<f64>().unwrap();
    let gns = stdout(&qmsgap(&["gap", &config("driven_thermal_qubit.json"), "--f", "gns"]))
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(2)
        .unwrap()
        .parse::<f64>()
        .unwrap();
    assert!(arith >= gns - 1e-12);
}

#[test]
fn curve_rows_and_summary() {
    let o = qmsgap(&["curve", &config("depolarizing.json"), "--grid", "0:1:11"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kind,alpha,lambda,symmetry_defect,monotonicity_defect");
    assert_eq!(lines.len(), 13);
    for l in &lines[1..12] {
        assert!((l.split(',').nth(2).unwrap().parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
    }
    let summary: Vec<&str> = lines[12].split(',').collect();
    assert_eq!(summary[0], "summary");
    assert!(summary[3].parse::<f64>().unwrap() <= 1e-7);

    let o = qmsgap(&["curve", &config("driven_thermal_qubit.json"), "--grid", "0:1:21"]);
    let text = stdout(&o);
    let summary: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert!(summary[3].parse::<f64>().unwrap() <= 1e-7);
    assert_eq!(qmsgap(&["curve", &config("depolarizing.json"), "--grid", "0.6:0.2:5"]).status.code(), Some(3));
}

#[test]
fn verify_writes_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let o = qmsgap(&["verify", &config("campaign_depolarizing.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = std::fs::read_to_string(&out).unwrap();
    assert!(report.contains("12 of 12 properties passed"));
    let csv = std::fs::read_to_string(dir.path().join("report.txt.csv")).unwrap();
    assert!(csv.starts_with("property,sample,dim,label,value,bound,margin,passed\n"));

    let again = dir.path().join("again.txt");
    qmsgap(&["verify", &config("campaign_depolarizing.json"), "--out", again.to_str().unwrap()]);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn verify_failure_path_and_seed_rules() {
    let dir = tempfile::tempdir().unwrap();
    let campaign = dir.path().join("strict.json");
    std::fs::write(
        &campaign,
        r#"{"n_models": 2, "dims": [2], "tolerances": {"contractivity": 1e-16, "decay_equivalence": 1e-16},
            "sizes": {"decay_models": 1, "decay_samples": 5, "transpose_models": 1, "curve_models": 1,
                      "moreau_triples": 2, "sandwich_states": 2, "order_pairs": 2, "closed_form_triples": 2,
                      "balanced_models": 1, "search_draws": 20, "degenerate_models": 1}}"#,
    )
    .unwrap();
    assert_eq!(qmsgap(&["verify", campaign.to_str().unwrap()]).status.code(), Some(3));
    let out = dir.path().join("r.txt");
    let o = qmsgap(&["verify", campaign.to_str().unwrap(), "--seed", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let cx = dir.path().join("r.txt.counterexamples.json");
    assert!(String::from_utf8_lossy(&o.stderr).contains(cx.to_str().unwrap()));
    let parsed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(cx).unwrap()).unwrap();
    assert!(parsed[0]["model"]["hamiltonian"].is_array());
    assert_eq!(qmsgap(&["verify", "/nonexistent/campaign.json", "--seed", "1"]).status.code(), Some(3));
}
