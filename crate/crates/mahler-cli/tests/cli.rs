//! End-to-end runs of the `mahler` binary.

use std::path::Path;
use std::process::{Command, Output};

fn mahler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mahler"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Rows of a CSV file as numbers, header dropped.
fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|t| t.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn volume_n2_s5() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o = mahler(&["volume", "--N", "2", "--s", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&out);
    assert!((v["F_product"].as_f64().unwrap() - 20.0 / 3.0).abs() < 1e-13);
    assert!((v["Pf_U"].as_f64().unwrap() - 20.0 / 3.0).abs() < 1e-10);
    assert!(v["abs_diff"].as_f64().unwrap() <= 1e-8 * 20.0 / 3.0);
}

#[test]
fn volume_s_inf_gives_c2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o = mahler(&["volume", "--N", "2", "--s", "inf", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["F_product"].as_f64().unwrap(), 4.0);
    assert_eq!(v["s"], "inf");
}

#[test]
fn invalid_arguments_exit_2() {
    assert_eq!(mahler(&["volume", "--N", "3", "--s", "5"]).status.code(), Some(2));
    assert_eq!(mahler(&["volume", "--N", "4", "--s", "3"]).status.code(), Some(2));
    assert_eq!(mahler(&["volume", "--N", "2", "--s", "five"]).status.code(), Some(2));
    // s and lambda together
    let o = mahler(&[
        "intensity",
        "--regime",
        "circle_real",
        "--xi",
        "1",
        "--lambda",
        "1",
        "--N",
        "4",
        "--s",
        "5",
        "--grid",
        "0:1:2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    // circle regimes need an anchor
    let o = mahler(&[
        "intensity",
        "--regime",
        "circle_real",
        "--lambda",
        "1",
        "--grid",
        "0:1:2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = mahler(&[
        "kernel",
        "--regime",
        "circle_complex",
        "--anchor",
        "0.5,0.5",
        "--lambda",
        "1",
        "--grid",
        "0:1:2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = mahler(&["sample", "--N", "2", "--s", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn circle_real_intensity_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("i.csv");
    let o = mahler(&[
        "intensity",
        "--regime",
        "circle_real",
        "--xi",
        "1",
        "--lambda",
        "1",
        "--grid",
        "-2:2:9,0:1:5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["re_z", "im_z", "intensity"]);
    assert_eq!(rows.len(), 45);
    for r in &rows {
        assert!(r[2] >= 0.0 && r[2].is_finite());
        if r[1] == 0.0 {
            assert_eq!(r[2], 0.0);
        }
    }
    // repulsion: increasing away from the axis near it
    let at = |re: f64, im: f64| rows.iter().find(|r| r[0] == re && r[1] == im).unwrap()[2];
    assert!(at(0.0, 0.25) < at(0.0, 0.5));
    // decay for Re z > 0 at fixed height
    for im in [0.25, 0.5, 1.0] {
        let row: Vec<f64> = [0.0, 0.5, 1.0, 1.5, 2.0].iter().map(|&re| at(re, im)).collect();
        assert!(row.windows(2).all(|w| w[1] < w[0]), "{row:?}");
    }
}

#[test]
fn outside_intensity_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.csv");
    let o = mahler(&[
        "intensity",
        "--regime",
        "outside",
        "--c",
        "1",
        "--grid",
        "-4:4:9,0.5:4.5:5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (_, rows) = csv_rows(&out);
    for r in &rows {
        let m = r[0].hypot(r[1]);
        if m > 1.05 {
            assert!(r[2].is_finite() && r[2] > 0.0, "{r:?}");
        }
    }
    let at = |re: f64, im: f64| rows.iter().find(|r| r[0] == re && r[1] == im).unwrap()[2];
    assert!(at(0.0, 4.5) < at(0.0, 2.5) && at(0.0, 2.5) < at(0.0, 1.5));
    assert!(at(4.0, 4.5) < at(2.0, 2.5));
}

#[test]
fn expected_roots_log_difference_settles() {
    let mut diffs = Vec::new();
    for n in [50, 100, 200] {
        let o = mahler(&["expected-roots", "--N", &n.to_string(), "--s", &(n + 1).to_string()]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["method"], "exact_sum");
        let e_in = v["E_in"].as_f64().unwrap();
        let l = v["log_N_over_pi"].as_f64().unwrap();
        assert!((l - (n as f64).ln() / std::f64::consts::PI).abs() < 1e-15);
        diffs.push(e_in - l);
    }
    assert!(diffs.iter().all(|d| d.abs() < 1.0));
    let steps: Vec<f64> = diffs.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(steps[1] <= steps[0], "{diffs:?}");
}

#[test]
fn grid_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = mahler(&[
            "kernel",
            "--N",
            "4",
            "--s",
            "6",
            "--grid",
            "-1:1:5,0:1:4",
            "--v",
            "0.3,0.2",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(p).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("re_u,im_u,re_v,im_v,e11_re,e11_im,e12_re,e12_im,e21_re,e21_im,e22_re,e22_im\n"));
    assert_eq!(text.lines().count(), 21);
    assert!(!text.contains('\r'));
}

#[test]
fn sample_and_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.csv");
    let args = [
        "sample",
        "--N",
        "3",
        "--s",
        "6",
        "--steps",
        "200",
        "--burn-in",
        "100",
        "--thin",
        "10",
        "--seed",
        "9",
    ];
    let o = mahler(&[&args[..], &["--out", p.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&p);
    assert_eq!(header, ["seed", "step", "c0", "c1", "c2", "c3"]);
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r[0] == 9.0 && r[5] == 1.0));
    assert_eq!(rows[0][1], 110.0);

    let h = dir.path().join("h.csv");
    let o = mahler(&[
        "histogram",
        "--N",
        "2",
        "--s",
        "5",
        "--step-length",
        "1.5",
        "--steps",
        "40000",
        "--grid",
        "-1:1:4",
        "--out",
        h.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&h);
    assert_eq!(header, ["edge_lo", "edge_hi", "density", "stderr"]);
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r[2] > 0.0 && r[3] > 0.0));
}

#[test]
fn validate_passes() {
    let o = mahler(&["validate"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().count() > 20);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn convergence_json() {
    let o = mahler(&[
        "convergence",
        "--regime",
        "circle_complex",
        "--anchor",
        "0,1",
        "--lambda",
        "1",
        "--n-list",
        "8,16",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["regime"], "circle_complex");
    assert!(!v["series"].as_array().unwrap().is_empty());
    assert_eq!(mahler(&["convergence", "--N", "4", "--s", "6"]).status.code(), Some(2));
}
