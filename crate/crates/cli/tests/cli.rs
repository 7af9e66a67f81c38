use std::io::Write;
use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gs")).args(args).output().expect("run gs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

const TOY: &str = "a,b,c\n0,0,0\n10,2,4\n9,1,2\n";

#[test]
fn explain_axis_has_one_move() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "toy.csv", TOY);
    let out = gs(&[
        "explain", "--data", data.to_str().unwrap(), "--index", "2",
        "--classifier", "builtin:axis:0:0.5", "--eta", "0.01", "--n-samples", "2000",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    let moves = v["moves"].as_array().unwrap();
    assert_eq!(moves.len(), 1);
    assert_eq!(moves[0]["feature"], "a");
    // 0.9 -> below 0.5 in scaled units, range 10 in original units.
    assert!(moves[0]["move"].as_f64().unwrap() <= -4.0);
    assert_eq!(v["cost_final"]["l0"], 1);
    assert_eq!(v["label_x"], 1);
    assert_eq!(v["label_enemy"], -1);
}

#[test]
fn moves_sorted_by_magnitude() {
    let dir = tempfile::tempdir().unwrap();
    // Row 2 sits at the sphere center, so the enemy usually moves along both axes.
    let data = write(dir.path(), "d.csv", "p,q\n0,0\n1,1\n0.6,0.9\n");
    let out = gs(&[
        "explain", "--data", data.to_str().unwrap(), "--index", "2", "--no-scale",
        "--classifier", "builtin:sphere:0.6,0.9:0.2", "--eta", "0.01", "--n-samples", "500",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let mags: Vec<f64> = v["moves"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["move"].as_f64().unwrap().abs())
        .collect();
    assert!(!mags.is_empty());
    assert!(mags.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn explain_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "toy.csv", TOY);
    let args = [
        "explain", "--data", data.to_str().unwrap(), "--index", "1", "--seed", "7",
        "--classifier", "builtin:hyperplane:1,1,1:-1", "--eta", "0.01", "--n-samples", "500",
    ];
    assert_eq!(gs(&args).stdout, gs(&args).stdout);
}

#[test]
fn missing_dataset_exits_1_naming_path() {
    let out = gs(&["explain", "--data", "/no/such/file.csv", "--classifier", "builtin:axis:0:0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/no/such/file.csv"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(gs(&["explain"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "toy.csv", TOY);
    let out = gs(&["explain", "--data", data.to_str().unwrap(), "--classifier", "builtin:cube:1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = gs(&["explain", "--data", data.to_str().unwrap(), "--classifier", "builtin:axis:0:0.5", "--index", "9"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn no_enemy_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "toy.csv", TOY);
    let out = gs(&[
        "explain", "--data", data.to_str().unwrap(), "--classifier", "builtin:const:1",
        "--eta", "0.1", "--n-samples", "100",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn label_column_is_dropped() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "l.csv", "x,y,label\n0,0,1\n1,1,0\n0.8,0.3,1\n");
    let out = gs(&[
        "explain", "--data", data.to_str().unwrap(), "--index", "2", "--label-column", "label",
        "--classifier", "builtin:axis:1:0.5", "--eta", "0.01", "--n-samples", "500",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["features"], serde_json::json!(["x", "y"]));
    assert_eq!(v["moves"][0]["feature"], "y");
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn batch_constant_classifier() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "toy.csv", TOY);
    let out_csv = dir.path().join("out.csv");
    let out = gs(&[
        "batch", "--data", data.to_str().unwrap(), "--out", out_csv.to_str().unwrap(),
        "--classifier", "builtin:const:1", "--eta", "0.1", "--n-samples", "50",
    ]);
    assert!(out.status.success());
    let rows = read_csv(&out_csv);
    assert_eq!(rows[0].join(","), "index,status,l2,l0,total,classifier_calls");
    assert_eq!(rows.len(), 4);
    assert!(rows[1..].iter().all(|r| r[1] == "NO_ENEMY"));
    let v = json(&out);
    assert_eq!(v["successes"], 0);
    assert_eq!(v["failures"], 3);
    assert_eq!(v["cdf"], serde_json::json!([]));
    assert!(v["max_sparsity"].is_null());
}

#[test]
fn batch_summary_is_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = String::from("a,b,c\n");
    for i in 0..8 {
        let t = i as f64 / 8.0;
        body.push_str(&format!("{t},{},{}\n", 1.0 - t, (t * 7.0) % 1.0));
    }
    let data = write(dir.path(), "d.csv", &body);
    let out_csv = dir.path().join("out.csv");
    let out = gs(&[
        "batch", "--data", data.to_str().unwrap(), "--out", out_csv.to_str().unwrap(), "--no-scale",
        "--classifier", "builtin:sphere:0.5,0.5,0.5:0.3", "--eta", "0.01", "--n-samples", "300", "--workers", "3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_csv(&out_csv);
    let l0: Vec<usize> = rows[1..].iter().filter(|r| r[1] == "OK").map(|r| r[3].parse().unwrap()).collect();
    let v = json(&out);
    assert_eq!(v["successes"].as_u64().unwrap() as usize, l0.len());
    assert_eq!(v["max_sparsity"].as_u64().unwrap() as usize, *l0.iter().max().unwrap());
    let cdf = v["cdf"].as_array().unwrap();
    assert_eq!(cdf.last().unwrap()["fraction"], 1.0);
    // l2 and total parse back to the same floats.
    for r in rows[1..].iter().filter(|r| r[1] == "OK") {
        let l2: f64 = r[2].parse().unwrap();
        assert_eq!(l2.to_string(), r[2]);
    }
}

#[test]
fn sample_degenerate_shell() {
    let out = gs(&["sample", "--d", "3", "--a0", "0.5", "--a1", "0.5", "--n", "10"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x0,x1,x2,radius");
    assert_eq!(lines.len(), 11);
    for l in &lines[1..] {
        let r: f64 = l.rsplit(',').next().unwrap().parse().unwrap();
        assert!((r - 0.5).abs() <= 1e-9);
    }
}

#[test]
fn sample_rows_within_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let out = gs(&[
        "sample", "--d", "2", "--n", "1000", "--a0", "0.2", "--a1", "0.7",
        "--mode", "volume", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rows = read_csv(&path);
    assert_eq!(rows.len(), 1001);
    for r in &rows[1..] {
        let v: Vec<f64> = r.iter().map(|s| s.parse().unwrap()).collect();
        assert!((0.2..=0.7).contains(&v[2]));
        let recomputed = (v[0] * v[0] + v[1] * v[1]).sqrt();
        assert_eq!(recomputed, v[2]);
    }
}

#[test]
fn sample_radius_uniform_mode_passes_ks() {
    let out = gs(&["sample", "--d", "10", "--n", "10000", "--a0", "1", "--a1", "2", "--seed", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut radii: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    radii.sort_by(f64::total_cmp);
    let n = radii.len() as f64;
    let ks = radii
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let f = (r - 1.0).clamp(0.0, 1.0);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max);
    assert!(ks < 1.628 / n.sqrt(), "KS {ks}");
}

#[test]
fn sample_invalid_layer_exits_1() {
    assert_eq!(gs(&["sample", "--a0", "2", "--a1", "1"]).status.code(), Some(1));
}

#[test]
fn exec_classifier_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let adapter = dir.path().join("axis.sh");
    let mut f = std::fs::File::create(&adapter).unwrap();
    f.write_all(
        br#"#!/bin/sh
if awk -W version 2>&1 | grep -q mawk; then set -- -W interactive; fi
exec awk "$@" '
/^GS1 [0-9]+$/ { print "OK 2"; fflush(); next }
/^QUIT$/ { exit 0 }
/^P [0-9]+$/ {
    m = $2; out = ""
    for (i = 0; i < m; i++) { getline line; split(line, a, " "); out = (i ? out " " : "") ((a[1] - 0.5 >= 0) ? 1 : -1) }
    print out; fflush(); next
}
{ exit 3 }'
"#,
    )
    .unwrap();
    drop(f);
    std::fs::set_permissions(&adapter, std::fs::Permissions::from_mode(0o755)).unwrap();

    let data = write(dir.path(), "toy.csv", TOY);
    let exec = format!("exec:{}", adapter.display());
    let run = |clf: &str| {
        gs(&[
            "explain", "--data", data.to_str().unwrap(), "--index", "2", "--classifier", clf,
            "--eta", "0.02", "--n-samples", "300",
        ])
    };
    let a = run(&exec);
    let b = run("builtin:axis:0:0.5");
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}
