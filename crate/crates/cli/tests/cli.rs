use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qfloor(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfloor"))
        .args(args)
        .current_dir(cwd)
        .env_remove("QFLOOR_OUT_ROOT")
        .output()
        .expect("spawn qfloor")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Synthetic survey plus an ingested db/test pair under `dir`.
fn prepared(dir: &Path) {
    let o = qfloor(
        &["synth", "--out", "s", "--buildings", "1", "--floors", "3", "--samples-per-floor", "20"],
        dir,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let o = qfloor(
        &["ingest", "--data", "s/survey.csv", "--n", "16", "--split", "0.7", "--seed", "7", "--out", "run1"],
        dir,
    );
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn encode_prints_the_worked_circuits() {
    let dir = tempfile::tempdir().unwrap();
    let o = qfloor(&["encode", "--phi", "1,1,1,-1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "qubits 2\nH q0\nH q1\nCZ q0 q1\n");

    let o = qfloor(&["encode", "--phi", "1,1,1,-1", "--psi", "1,-1,1,1", "--full"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let gates: Vec<String> = stdout(&o).lines().skip(1).map(str::to_owned).collect();
    assert_eq!(
        gates,
        ["H q0", "H q1", "CZ q0 q1", "Z q0", "CZ q0 q1", "H q0", "H q1", "X q0", "X q1", "CX q0,q1 q2"]
    );
}

#[test]
fn encode_canonicalizes_with_a_note() {
    let dir = tempfile::tempdir().unwrap();
    let neg = qfloor(&["encode", "--psi=-1,1,-1,-1"], dir.path());
    let pos = qfloor(&["encode", "--psi", "1,-1,1,1"], dir.path());
    assert_eq!(neg.status.code(), Some(0));
    assert_eq!(stdout(&neg), stdout(&pos));
    assert!(stderr(&neg).contains("negated"));
    assert!(stderr(&pos).is_empty());
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = qfloor(&["encode", "--phi", "1,1,0,1"], dir.path());
    assert_eq!(o.status.code(), Some(2));

    let o = qfloor(&["encode", "--phi", "1,1,1"], dir.path());
    assert_eq!(o.status.code(), Some(2));

    let o = qfloor(&["ingest", "--data", "missing.csv", "--n", "12", "--out", "x"], dir.path());
    assert_eq!(o.status.code(), Some(2));

    let o = qfloor(&["ingest", "--data", "missing.csv", "--n", "16", "--out", "x"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing.csv"));

    let o = qfloor(&["evaluate", "--db", "a.fp", "--test", "b.fp", "--mode", "shots:0", "--out", "e"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ingest_writes_db_test_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    prepared(dir.path());
    let run = dir.path().join("run1");
    for f in ["db.fp", "test.fp", "manifest.json", "run.log"] {
        assert!(run.join(f).is_file(), "{f} missing");
    }
    let db = fs::read_to_string(run.join("db.fp")).unwrap();
    assert!(db.starts_with("N 16 M "));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(run.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["n_target"], 16);
    assert_eq!(manifest["config"]["seed"], 7);
}

#[test]
fn evaluate_is_reproducible_and_job_independent() {
    let dir = tempfile::tempdir().unwrap();
    prepared(dir.path());
    let base = ["evaluate", "--db", "run1/db.fp", "--test", "run1/test.fp", "--method",
        "classical-abs,quantum,random", "--mode", "shots:128", "--seed", "5"];
    let mut a = base.to_vec();
    a.extend(["--out", "a", "--jobs", "1"]);
    let mut b = base.to_vec();
    b.extend(["--out", "b"]);
    assert_eq!(qfloor(&a, dir.path()).status.code(), Some(0));
    assert_eq!(qfloor(&b, dir.path()).status.code(), Some(0));
    for m in ["classical-abs", "quantum", "random"] {
        for f in [format!("report_{m}.json"), format!("cdf_{m}.csv")] {
            let x = fs::read(dir.path().join("a").join(&f)).unwrap();
            let y = fs::read(dir.path().join("b").join(&f)).unwrap();
            assert_eq!(x, y, "{f} differs");
        }
    }
    let report: serde_json::Value = serde_json::from_slice(
        &fs::read(dir.path().join("a/report_quantum.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["n"], 16);
    assert_eq!(report["qubits_used"], 5);
    assert_eq!(report["shots"], 128);
}

#[test]
fn evaluate_rejects_dimension_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    prepared(dir.path());
    let o = qfloor(
        &["ingest", "--data", "s/survey.csv", "--n", "8", "--out", "run8"],
        dir.path(),
    );
    assert!(o.status.success());
    let o = qfloor(
        &["evaluate", "--db", "run1/db.fp", "--test", "run8/test.fp", "--out", "e"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_and_resources_outputs() {
    let dir = tempfile::tempdir().unwrap();
    prepared(dir.path());
    let o = qfloor(
        &["evaluate", "--db", "run1/db.fp", "--test", "run1/test.fp", "--method", "classical",
          "--out", "e", "--sweep-n", "4,8,16", "--data", "s/survey.csv", "--resources"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let sweep = fs::read_to_string(dir.path().join("e/sweep_classical.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 4);
    let res = fs::read_to_string(dir.path().join("e/resources.csv")).unwrap();
    assert_eq!(res.lines().count(), 10);

    let o = qfloor(&["resources", "--n", "4,1024", "--m", "100"], dir.path());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[1], "4,100,400,200,3,5,");
    assert_eq!(rows[2], "1024,100,102400,1000,11,21,");
}

#[test]
fn match_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    prepared(dir.path());
    let o = qfloor(
        &["match", "--db", "run1/db.fp", "--test", "run1/test.fp", "--index", "0", "--method", "quantum"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["estimated_floor"].is_i64());
    assert!(v["true_floor"].is_i64());
}

#[test]
fn out_root_env_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().join("root");
    let o = Command::new(env!("CARGO_BIN_EXE_qfloor"))
        .args(["synth", "--out", "s", "--samples-per-floor", "2"])
        .current_dir(dir.path())
        .env("QFLOOR_OUT_ROOT", &root)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(root.join("s/survey.csv").is_file());
}

#[test]
fn encode_all_ones_and_eight_gate_neuron() {
    let dir = tempfile::tempdir().unwrap();
    let o = qfloor(&["encode", "--phi", "1,1,1,1"], dir.path());
    assert_eq!(stdout(&o), "qubits 2\nH q0\nH q1\n");
    let o = qfloor(&["encode", "--phi", "1,1,1,-1", "--psi", "1,1,1,1", "--full"], dir.path());
    let text = stdout(&o);
    let gates: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(gates, ["H q0", "H q1", "CZ q0 q1", "H q0", "H q1", "X q0", "X q1", "CX q0,q1 q2"]);
}

#[test]
fn quantum_matches_classical_abs_and_swap_qubits() {
    let dir = tempfile::tempdir().unwrap();
    prepared(dir.path());
    let o = qfloor(
        &["evaluate", "--db", "run1/db.fp", "--test", "run1/test.fp", "--method",
          "quantum,classical-abs,swap-test", "--mode", "exact", "--out", "e"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let read = |m: &str| -> serde_json::Value {
        serde_json::from_slice(&fs::read(dir.path().join(format!("e/report_{m}.json"))).unwrap())
            .unwrap()
    };
    let (q, c, s) = (read("quantum"), read("classical-abs"), read("swap-test"));
    assert_eq!(q["accuracy"], c["accuracy"]);
    assert_eq!(q["estimated_floors"], c["estimated_floors"]);
    assert_eq!(s["qubits_used"], 9);
}

#[test]
fn unknown_method_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = qfloor(
        &["evaluate", "--db", "a.fp", "--test", "b.fp", "--method", "grover", "--out", "e"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
}
