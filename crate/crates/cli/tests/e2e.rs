use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn crossmax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crossmax"))
        .args(args)
        .env_remove("CROSSMAX_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn keys(v: &Value) -> Vec<&str> {
    let mut k: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    k.sort_unstable();
    k
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Rank-`r` integer image as binary PGM.
fn write_pgm(path: &Path, w: usize, h: usize, r: usize) {
    let mut bytes = format!("P5\n{w} {h}\n255\n").into_bytes();
    for i in 0..h {
        for j in 0..w {
            let v: usize = (0..r).map(|k| ((i * (k + 3) + k) % 4) * ((j * (2 * k + 1) + 1) % 5)).sum();
            bytes.push(v.min(255) as u8);
        }
    }
    std::fs::write(path, bytes).unwrap();
}

#[test]
fn cross_on_identity() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("eye.csv");
    std::fs::write(&input, "1,0,0,0\n0,1,0,0\n0,0,1,0\n0,0,0,1\n").unwrap();
    let report = dir.path().join("r.json");
    let out = crossmax(&["cross", "--input", p(&input), "--rank", "2", "--report", p(&report)]);
    let v = json(&out);
    assert_eq!(keys(&v), ["chebyshevError", "classicBound", "improvedBound", "indices", "nu", "rank"]);
    assert_eq!(v["rank"], 2);
    // the residual is the trailing identity block
    assert_eq!(v["chebyshevError"], 1.0);
    let saved: Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(saved, v);

    let full = crossmax(&["cross", "--input", p(&input), "--rank", "4"]);
    assert_eq!(json(&full)["chebyshevError"], 0.0);
}

#[test]
fn compress_decompress_round_trip_is_lossless() {
    let dir = tempfile::tempdir().unwrap();
    let (img, packed, back) = (dir.path().join("a.pgm"), dir.path().join("a.xcur"), dir.path().join("b.pgm"));
    write_pgm(&img, 48, 40, 3);
    let v = json(&crossmax(&["compress", p(&img), "--rank", "3", "-o", p(&packed)]));
    assert_eq!(
        keys(&v),
        ["bytes", "height", "probes", "psnr", "rank", "ratio", "storedEntries", "width"]
    );
    assert_eq!(v["psnr"], "inf");
    assert_eq!(v["storedEntries"], 3 * 48 + 3 * 40 - 9);
    assert_eq!(std::fs::metadata(&packed).unwrap().len(), v["bytes"].as_u64().unwrap());

    let d = json(&crossmax(&["decompress", p(&packed), "-o", p(&back), "--ref", p(&img)]));
    assert_eq!(keys(&d), ["height", "psnr", "rank", "width"]);
    assert_eq!(d["psnr"], "inf");
    assert_eq!(std::fs::read(&img).unwrap(), std::fs::read(&back).unwrap());

    let t = json(&crossmax(&["compress", p(&img), "--psnr", "40", "--h", "2"]));
    assert!(t["rank"].as_u64().unwrap() <= 8);
}

#[test]
fn compress_flag_errors() {
    let out = crossmax(&["compress", "a.pgm", "--psnr", "32", "--rank", "50"]);
    assert_eq!(out.status.code(), Some(2));
    let out = crossmax(&["compress", "/nonexistent/a.pgm", "--rank", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);
}

#[test]
fn decompress_rejects_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.xcur");
    std::fs::write(&bad, b"NOPE-not-a-container").unwrap();
    let out = crossmax(&["decompress", p(&bad), "-o", p(&dir.path().join("x.pgm"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lsq_demo_exp_matches_reference_magnitude() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("pts.csv");
    let v = json(&crossmax(&[
        "lsq-demo", "--function", "exp_r2", "--degree", "10", "--eval-grid", "101", "--pivotal", "--points", p(&points),
    ]));
    assert_eq!(keys(&v), ["boundTerms", "coefficients", "method", "pivotalRows", "relError"]);
    assert_eq!(v["method"], "pivotal");
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 66);
    let text = std::fs::read_to_string(&points).unwrap();
    assert_eq!(text.lines().count(), 67);

    let full = json(&crossmax(&["lsq-demo", "--function", "exp_r2", "--degree", "10"]));
    let e = full["relError"].as_f64().unwrap();
    assert!((1e-6..1e-4).contains(&e), "{e}");
    assert_eq!(full["pivotalRows"].as_array().unwrap().len(), 0);
}

#[test]
fn bench_csv_is_deterministic_given_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = crossmax(&[
            "bench", "--rows", "80", "--ranks", "4,8", "--h", "1,r", "--trials", "3", "--mode", "square", "--seed", "3",
            "-o", p(&path),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read_to_string(path).unwrap()
    };
    let a = run("a.csv");
    let strip = |s: &str| s.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect::<Vec<_>>();
    assert_eq!(strip(&a), strip(&run("b.csv")));
    assert_eq!(a.lines().next().unwrap(), "rank,h,mean_solves,std_solves,mean_time_sec");
    assert_eq!(a.lines().count(), 5);
}

#[test]
fn seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_crossmax"))
        .args(["bench", "--rows", "20", "--ranks", "2", "--h", "1", "--trials", "1", "--seed", "x"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_crossmax"))
        .args(["bench", "--rows", "20", "--ranks", "2", "--h", "1", "--trials", "1"])
        .env("CROSSMAX_SEED", "17")
        .output()
        .unwrap();
    assert!(out.status.success());
}
