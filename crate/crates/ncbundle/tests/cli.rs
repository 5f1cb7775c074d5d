use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ncbundle"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn run(args: &[&str]) -> (Value, i32) {
    let out = bin().args(args).output().unwrap();
    let code = out.status.code().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    (serde_json::from_str(&stdout).unwrap_or(Value::Null), code)
}

fn descriptor(n: usize, rows: usize, data: &[Vec<i64>]) -> String {
    json!({
        "n": n,
        "base": {"rank": data[0].len(), "labels": (1..=data[0].len()).map(|k| format!("gamma{k}")).collect::<Vec<_>>()},
        "winding": {"rows": rows, "cols": data[0].len(), "data": data},
        "commutative_part": {}
    })
    .to_string()
}

#[test]
fn undetermined_exits_with_three() {
    let dir = scratch("undetermined");
    let a = write(
        &dir,
        "a.json",
        &descriptor(4, 6, &[vec![1], vec![0], vec![0], vec![0], vec![0], vec![0]]),
    );
    let b = write(
        &dir,
        "b.json",
        &descriptor(4, 6, &[vec![3], vec![0], vec![0], vec![0], vec![0], vec![0]]),
    );
    let (v, code) = run(&["rkk-compare", &a, &b]);
    assert_eq!(code, 3);
    assert_eq!(v["verdict"], "Undetermined");
    let (v, code) = run(&["rkk-compare", &a, &b, "--search-depth", "0"]);
    assert_eq!((v["verdict"].as_str(), code), (Some("Undetermined"), 3));
}

#[test]
fn negative_verdicts_exit_zero() {
    let dir = scratch("negative");
    let a = write(&dir, "a.json", &descriptor(2, 1, &[vec![1, 2]]));
    let b = write(&dir, "b.json", &descriptor(2, 1, &[vec![2, 1]]));
    let (v, code) = run(&["rkk-compare", &a, &b]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "NotEquivalent");
    assert_eq!(v["gl_orbit_equal"], false);
}

#[test]
fn rank3_caveat_is_reported() {
    let dir = scratch("caveat");
    let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
    let neg: Vec<Vec<i64>> = id.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let a = write(&dir, "a.json", &descriptor(3, 3, &id));
    let b = write(&dir, "b.json", &descriptor(3, 3, &neg));
    let (v, code) = run(&["rkk-compare", &a, &b]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "IsomorphicKBundlesOnly");
    assert!(v["caveat"].as_str().unwrap().contains("determinant -1"));
}

#[test]
fn validation_errors_exit_with_two() {
    let dir = scratch("invalid");
    let broken = write(&dir, "broken.json", "{\"n\": 2,");
    let shape = write(&dir, "shape.json", &descriptor(3, 1, &[vec![1]]));
    let extra = write(
        &dir,
        "extra.json",
        r#"{"rows": 1, "cols": 1, "data": [[1]], "note": 0}"#,
    );
    for args in [
        vec!["tdual-check", broken.as_str()],
        vec!["tdual-check", shape.as_str()],
        vec!["tdual-check", "/nonexistent/descriptor.json"],
        vec!["lambda2", "--psi", extra.as_str()],
        vec!["heisenberg", "normal-form", "U1 W2"],
        vec!["heisenberg", "normal-form", "U3", "--n", "2"],
        vec!["monodromy", "--n", "2", "--winding", extra.as_str(), "--loop", "1,x"],
        vec!["nctorus", "verify", "--p", "2", "--q", "4"],
        vec!["no-such-command"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn failed_checks_exit_with_one() {
    let (v, code) = run(&["nctorus", "verify", "--p", "1", "--q", "3", "--tolerance", "1e-9"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
    assert_eq!(v["rieffel"]["pass"]["trace"], true);
    assert_eq!(v["rieffel"]["pass"]["idempotence"], false);
}

#[test]
fn spectrum_csv() {
    let dir = scratch("csv");
    let path = dir.join("spectrum.csv");
    let (v, code) = run(&[
        "nctorus",
        "verify",
        "--p",
        "2",
        "--q",
        "5",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["dimension"], 5);
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["index", "eigenvalue", "distance"]);
    let eigenvalues: Vec<f64> = reader.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(eigenvalues.len(), 5);
    assert_eq!(eigenvalues.iter().filter(|&&x| x > 0.5).count(), 2);
}

#[test]
fn integral_theta_skips_the_projection() {
    let (v, code) = run(&["nctorus", "verify", "--p", "0", "--q", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["rieffel"], Value::Null);
}

#[test]
fn normal_form_infers_the_rank() {
    let (v, code) = run(&["heisenberg", "normal-form", "U3 U1 U3^-1 U1^-1"]);
    assert_eq!(code, 0);
    assert_eq!(v["element"]["n"], 3);
    assert_eq!(v["normal_form"], "V1,3");
    let (v, _) = run(&["heisenberg", "normal-form", ""]);
    assert_eq!(v["normal_form"], "");
}

#[test]
fn upsilon_table() {
    let dir = scratch("upsilon");
    let psi = write(&dir, "psi.json", r#"{"rows": 2, "cols": 2, "data": [[1, 3], [0, 1]]}"#);
    let (v, code) = run(&["heisenberg", "upsilon", "--psi", &psi]);
    assert_eq!(code, 0);
    assert_eq!(v["relations_hold"], true);
    assert_eq!(v["images"][0], json!(["U1", "V1,2^-3 U1 U2^-3"]));
    assert_eq!(v["images"][2], json!(["V1,2", "V1,2"]));
    let singular = write(
        &dir,
        "singular.json",
        r#"{"rows": 2, "cols": 2, "data": [[2, 0], [0, 1]]}"#,
    );
    assert_eq!(run(&["heisenberg", "upsilon", "--psi", &singular]).1, 2);
}

#[test]
fn lambda2_membership() {
    let dir = scratch("lambda2");
    let psi = write(
        &dir,
        "psi.json",
        r#"{"rows": 3, "cols": 3, "data": [[0, 1, 0], [1, 0, 0], [0, 0, 1]]}"#,
    );
    let neg = write(
        &dir,
        "neg.json",
        r#"{"rows": 3, "cols": 3, "data": [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]}"#,
    );
    let (v, code) = run(&["lambda2", "--psi", &psi, "--check", &neg]);
    assert_eq!(code, 0);
    assert_eq!(v["membership"]["member"], true);
    assert_eq!(v["check"], json!({"member": false}));
    let psi4 = write(
        &dir,
        "psi4.json",
        &json!({"rows": 4, "cols": 4, "data": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}).to_string(),
    );
    let (v, _) = run(&["lambda2", "--psi", &psi4]);
    assert_eq!(v["membership"]["member"], "unsupported");
    assert_eq!(v["lambda2"]["rows"], 6);
}

#[test]
fn winding_inputs() {
    let dir = scratch("winding");
    let tau = std::f64::consts::TAU;
    let samples: Vec<[f64; 2]> = (0..128)
        .map(|j| {
            let t = j as f64 / 128.0;
            [(-2.0 * tau * t).cos(), (-2.0 * tau * t).sin()]
        })
        .collect();
    let flat = write(&dir, "flat.json", &json!({ "samples": samples }).to_string());
    assert_eq!(run(&["winding", &flat]), (json!({"winding": [-2]}), 0));

    let torus: Vec<Vec<[f64; 2]>> = (0..64)
        .map(|j| {
            let t = j as f64 / 64.0;
            vec![[(tau * t).cos(), (tau * t).sin()], [1.0, 0.0]]
        })
        .collect();
    let torus = write(&dir, "torus.json", &json!({ "samples": torus }).to_string());
    assert_eq!(run(&["winding", &torus]).0, json!({"winding": [1, 0]}));

    let coarse: Vec<f64> = (0..4).map(|j| std::f64::consts::PI * j as f64).collect();
    let coarse = write(&dir, "coarse.json", &json!({ "phases": coarse }).to_string());
    assert_eq!(run(&["winding", &coarse]).1, 2);
    let both = write(&dir, "both.json", r#"{"phases": [0, 1, 2], "samples": []}"#);
    assert_eq!(run(&["winding", &both]).1, 2);
}

#[test]
fn monodromy_accepts_descriptors_and_checks_the_rank() {
    let dir = scratch("monodromy");
    let d = write(&dir, "d.json", &descriptor(2, 1, &[vec![3, -1]]));
    let (v, code) = run(&["monodromy", "--n", "2", "--winding", &d, "--loop", "1,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["pair_exponents"], json!([2]));
    assert_eq!(v["monodromy"]["even"]["data"], json!([[1, 2], [0, 1]]));
    assert_eq!(run(&["monodromy", "--n", "3", "--winding", &d, "--loop", "1,1"]).1, 2);
    assert_eq!(run(&["monodromy", "--n", "2", "--winding", &d, "--loop", "1"]).1, 2);
}

#[test]
fn text_format() {
    let out = bin().args(["--format", "text", "golden"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("rank3_blocks: PASS"));
    let out = bin()
        .args(["heisenberg", "normal-form", "U2 U1", "--format", "text"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "V1,2 U1 U2\n");
}
