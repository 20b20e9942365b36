use std::path::{Path, PathBuf};
use std::process::Command;

use locuslab::cheb_family::cusp_count;
use locuslab::svg::read_polylines;
use locuslab::Complex64;
use locuslab_cli::output::{point_records, PointRecord};
use locuslab_cli::{full_locus, parse_config};
use tempfile::TempDir;

const TRIDIAGONAL: &str = "k = 1\nh = 1\nn = 0\nc[-1] = 1\nc[1] = 1\nm = 3\n";
const CHEBYSHEV: &str = "k = 1\nh = 2\nn = 1\nc[-1] = 1\nc[2] = 1+0i\nm = 4, 8\n";
const STAR: &str = "k = 2\nh = 3\nn = 1\nc[-2] = 1\nc[3] = 1\n";

fn write_config(dir: &TempDir, text: &str) -> PathBuf {
    let p = dir.path().join("run.cfg");
    std::fs::write(&p, text).unwrap();
    p
}

fn locuslab(args: &[&str], cfg: &Path, out: &Path) -> i32 {
    let status = Command::new(env!("CARGO_BIN_EXE_locuslab"))
        .args(args)
        .arg(cfg)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
        .status;
    status.code().unwrap()
}

#[test]
fn tridiagonal_locus_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, TRIDIAGONAL);
    let out = dir.path().join("out");
    assert_eq!(locuslab(&["locus"], &cfg, &out), 0);
    let csv = std::fs::read_to_string(out.join("locus_m3.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x0_re,x0_im,multiplicity,c_residual"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    let re: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    let s = 2f64.sqrt();
    for (got, want) in re.iter().zip([-s, 0.0, s]) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
    // 17 significant digits
    assert!(rows.iter().all(|r| r[0].split('e').next().unwrap().trim_start_matches('-').len() == 18));
    assert!(rows.iter().all(|r| r[2] == "1"));
    assert_eq!(std::fs::read_to_string(out.join("defects.json")).unwrap().trim(), "[]");
}

#[test]
fn star_boundary_svg_has_five_cusps() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, STAR);
    let out = dir.path().join("out");
    assert_eq!(locuslab(&["hypocycloid"], &cfg, &out), 0);
    let svg = std::fs::read_to_string(out.join("hypocycloid_d2.svg")).unwrap();
    let lines = read_polylines(&svg);
    assert_eq!(lines.len(), 1);
    let n = lines[0].len() as f64;
    let (cx, cy) = lines[0].iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let pts: Vec<Complex64> = lines[0].iter().map(|(x, y)| Complex64::new(x - cx, cy - y)).collect();
    assert_eq!(cusp_count(&pts), 5);
    let csv = std::fs::read_to_string(out.join("hypocycloid_d2.csv")).unwrap();
    let first: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first, vec![0.0, 5.0, 0.0]);
}

#[test]
fn verify_chebyshev() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, CHEBYSHEV);
    let out = dir.path().join("out");
    assert_eq!(locuslab(&["verify"], &cfg, &out), 0);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let records = report["records"].as_array().unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0]["total_multiplicity"], 10);
    assert_eq!(records[1]["total_multiplicity"], 36);
    assert!(report["verdict_conjugate"].as_str().unwrap().starts_with("supported"));
}

#[test]
fn locus_json_round_trips() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, CHEBYSHEV);
    let out = dir.path().join("out");
    assert_eq!(locuslab(&["locus"], &cfg, &out), 0);
    let text = std::fs::read_to_string(out.join("locus_m4.json")).unwrap();
    let parsed: Vec<PointRecord> = serde_json::from_str(&text).unwrap();
    let rc = parse_config(CHEBYSHEV).unwrap();
    let (locus, _) = full_locus(&rc.symbol, 4, &rc.cfg).unwrap();
    assert_eq!(parsed, point_records(&locus));
    let mut again = serde_json::to_string_pretty(&parsed).unwrap();
    again.push('\n');
    assert_eq!(again, text);
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, &format!("{STAR}m = 6, 9\n"));
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(locuslab(&["locus"], &cfg, &a), 0);
    assert_eq!(locuslab(&["locus"], &cfg, &b), 0);
    let mut names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 7);
    for name in names {
        assert_eq!(std::fs::read(a.join(&name)).unwrap(), std::fs::read(b.join(&name)).unwrap(), "{name:?}");
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let bad = write_config(&dir, "k = 1\nh = 1\nn = 0\nc[-1] = 1\nc[1] = 1+zi\n");
    assert_eq!(locuslab(&["locus"], &bad, &out), 2);
    assert_eq!(locuslab(&["locus"], &dir.path().join("missing.cfg"), &out), 2);
    let cfg = write_config(&dir, CHEBYSHEV);
    assert_eq!(locuslab(&["bogus"], &cfg, &out), 2);
    // an impossible window tolerance drops every candidate
    let strict = write_config(&dir, &format!("{STAR}m = 5\ntol.window_residual = 1e-300\n"));
    assert_eq!(locuslab(&["locus"], &strict, &out), 1);
    let defects: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("defects.json")).unwrap()).unwrap();
    assert!(!defects.as_array().unwrap().is_empty());
}

#[test]
fn output_directory_from_environment() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, TRIDIAGONAL);
    let target = dir.path().join("env-out");
    let status = Command::new(env!("CARGO_BIN_EXE_locuslab"))
        .args(["measure"])
        .arg(&cfg)
        .env("LOCUSLAB_OUT_DIR", &target)
        .current_dir(dir.path())
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(target.join("measure_m3.csv")).unwrap();
    let mass: f64 = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap()).sum();
    assert!((mass - 1.0).abs() < 1e-12);
}

#[test]
fn basis_and_region_artifacts() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, &CHEBYSHEV.replace("m = 4, 8", "m = 2\ngrid = -7, 7, -7, 7, 61, 61"));
    let out = dir.path().join("out");
    assert_eq!(locuslab(&["basis"], &cfg, &out), 0);
    let tri: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("triangularity_m2.json")).unwrap()).unwrap();
    assert_eq!(tri["pass"], true);
    assert_eq!(std::fs::read_to_string(out.join("basis_m2.txt")).unwrap().lines().count(), 3);
    assert_eq!(locuslab(&["cregion"], &cfg, &out), 0);
    let csv = std::fs::read_to_string(out.join("cregion.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 61 * 61);
    assert!(!read_polylines(&std::fs::read_to_string(out.join("cregion.svg")).unwrap()).is_empty());
}
