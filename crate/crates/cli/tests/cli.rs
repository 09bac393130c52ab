use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cloneregion"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = cli(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn close(v: &Value, want: f64, tol: f64) -> bool {
    (v.as_f64().expect("number") - want).abs() <= tol
}

#[test]
fn werner_prints_seven_ninths() {
    let out = cli(&["werner", "--n1", "1", "--n2", "3", "--d", "2"]);
    assert!(out.status.success());
    let v: f64 = String::from_utf8(out.stdout)
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((v - 7.0 / 9.0).abs() < 1e-15);
    assert_eq!(
        cli(&["werner", "--n1", "3", "--n2", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn member_separates_the_all_ones_point() {
    let v = json(&["member", "--n", "4", "--point", "1,1,1"]);
    assert_eq!(v["verdict"], "outside");
    assert_eq!(v["schema"], 1);
    assert!(close(&v["max_violation"], 1.0 / 3f64.sqrt(), 1e-9));
    let sep: Vec<f64> = v["separator"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!(sep.iter().all(|x| (x - 1.0 / 3f64.sqrt()).abs() < 1e-6));

    let v = json(&["member", "--n", "4", "--point", "0.66,0.66,0.66"]);
    assert_eq!(v["verdict"], "inside");
    assert!(v["separator"].is_null());
}

#[test]
fn support_of_the_diagonal() {
    let v = json(&["support", "--n", "4", "--dir", "1,1,1"]);
    assert!(close(&v["value"], 2.0, 1e-9));
    assert_eq!(v["lambda"], serde_json::json!([3, 1]));
    let v = json(&["support", "--n", "4", "--dir", "-1,-1,-1"]);
    assert!(close(&v["value"], 0.0, 1e-12));
}

#[test]
fn verify_passes_and_exit_codes() {
    let v = json(&["verify", "--n", "4", "--trials", "10", "--seed", "1"]);
    assert!(v["max_abs_error"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["passed"], true);

    assert_eq!(cli(&["report", "--n", "6"]).status.code(), Some(2));
    assert_eq!(
        cli(&["member", "--n", "4", "--bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        cli(&["member", "--n", "4", "--point", "1,1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cli(&["fidelity", "--lambda", "3,1", "--amplitudes", "1,0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn reps_and_fidelity() {
    let v = json(&["reps", "--n", "4"]);
    assert_eq!(v["total_dimension"], 16);
    assert_eq!(v["partitions"].as_array().unwrap().len(), 3);

    let v = json(&["reps", "--n", "4", "--lambda", "2,2"]);
    assert_eq!(v["dimension"], 2);
    assert_eq!(v["transpositions"].as_array().unwrap().len(), 3);

    let v = json(&["fidelity", "--lambda", "2,2", "--amplitudes", "0,1"]);
    let f: Vec<f64> = v["fidelities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    for (got, want) in f.iter().zip([1.0, 0.25, 0.25]) {
        assert!((got - want).abs() < 1e-12);
    }
    assert!(close(&v["cloning_fidelities"][0], 1.0, 1e-12));
    assert!(v["closed_form"]["printed"].is_array());
}

#[test]
fn reconstruct_two_two() {
    let v = json(&[
        "reconstruct",
        "--n",
        "4",
        "--lambda",
        "2,2",
        "--maximize",
        "F1",
        "--constraint",
        "F1+F3=2F2",
        "--restarts",
        "16",
        "--seed",
        "11",
    ]);
    let s3 = 3f64.sqrt();
    let best = &v["solutions"][0]["fidelities"];
    for (k, want) in [(2.0 + s3) / 4.0, 0.5, (2.0 - s3) / 4.0]
        .into_iter()
        .enumerate()
    {
        assert!(close(&best[k], want, 1e-8));
    }
    let infeasible = cli(&[
        "reconstruct",
        "--n",
        "4",
        "--lambda",
        "2,2",
        "--constraint",
        "F1=2",
    ]);
    assert_eq!(infeasible.status.code(), Some(2));
}

#[test]
fn sample_is_deterministic_and_thread_independent() {
    let args = ["sample", "--n", "4", "--per-lambda", "5000", "--seed", "3"];
    let a = cli(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_cloneregion"))
        .args(args)
        .env("CLONE_REGION_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema=1 n=4 seed=3 per_lambda=5000"));
    assert_eq!(lines.next(), Some("lambda,a1,a2,a3,F12,F13,F14"));
    assert_eq!(lines.count(), 10_001);

    let bad = Command::new(env!("CARGO_BIN_EXE_cloneregion"))
        .args(args)
        .env("CLONE_REGION_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

fn read_points(path: &Path) -> Vec<Vec<f64>> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            let n = r.len();
            (n - 3..n).map(|i| r[i].parse().unwrap()).collect()
        })
        .collect()
}

#[test]
fn sample_round_trips_through_hull_and_member() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.csv");
    let hull = dir.path().join("hull.json");
    let p = points.to_str().unwrap();
    assert!(cli(&[
        "sample",
        "--n",
        "4",
        "--per-lambda",
        "400",
        "--seed",
        "7",
        "--out",
        p
    ])
    .status
    .success());

    let cloud = read_points(&points);
    assert_eq!(cloud.len(), 801);

    assert!(cli(&["hull", "--in", p, "--out", hull.to_str().unwrap()])
        .status
        .success());
    let h: Value = serde_json::from_str(&std::fs::read_to_string(&hull).unwrap()).unwrap();
    assert_eq!(h["input_points"], 801);
    assert_eq!(h["seed"], 7);
    // Hull vertices are input points. serde_json's default float parser may be
    // off by an ulp, so compare loosely.
    for v in h["vertices"].as_array().unwrap() {
        let v: Vec<f64> = v
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .collect();
        assert!(cloud
            .iter()
            .any(|c| c.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-15)));
    }
    for f in h["facets"].as_array().unwrap() {
        let normal: Vec<f64> = f["normal"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .collect();
        let offset = f["offset"].as_f64().unwrap();
        for c in &cloud {
            assert!(normal.iter().zip(c).map(|(a, b)| a * b).sum::<f64>() <= offset + 1e-9);
        }
    }

    // The (2,2) points lie on a plane, so their hull is rejected.
    assert_eq!(
        cli(&["hull", "--in", p, "--lambda", "2,2"]).status.code(),
        Some(2)
    );
    let three_one = json(&["hull", "--in", p, "--lambda", "3,1"]);
    assert_eq!(three_one["input_points"], 400);

    let m = json(&["member", "--in", p]);
    assert_eq!(m["points"], 801);
    assert_eq!(m["outside"], 0);
}

#[test]
fn report_for_four_qubits() {
    let v = json(&[
        "report",
        "--n",
        "4",
        "--plane-samples",
        "300",
        "--restarts",
        "8",
    ]);
    assert!(close(
        &v["symmetric_optimum"]["singlet_fraction"],
        2.0 / 3.0,
        1e-12
    ));
    assert!(close(&v["plane"]["constant"], 1.5, 1e-9));
    assert_eq!(v["dimension_sum"], 16);
}
