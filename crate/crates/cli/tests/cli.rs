use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use igt_core::io::read_grid;
use sha2::{Digest, Sha256};

fn igt(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_igt")).current_dir(dir).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, json: &str) {
    fs::write(dir.join(name), json).unwrap();
}

fn stderr_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stderr).unwrap_or_else(|e| panic!("stderr is not JSON ({e}): {}", String::from_utf8_lossy(&o.stderr)))
}

const GAUSS: &str = r#"{"grid": {"n": 3, "k": 1, "directions": 32, "s_half": 8.0, "s_points": 64, "xpp_half": 2.0, "xpp_points": 5},
 "field": {"family": "gaussian"}}"#;

#[test]
fn forward_euclidean_writes_grid_sidecar_and_manifest() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "g.json", GAUSS);
    let o = igt(t.path(), &["forward-euclidean", "--config", "g.json", "--out", "run"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let run = t.path().join("run");
    let g = read_grid(run.join("sinogram.rgrd")).unwrap();
    assert_eq!(g.dims(), &[32, 64, 5]);
    // Centre plane through the origin: ∫ e^{-t²} dt = √π.
    let centre = g.data()[32 * 5 + 2];
    let s32: f64 = -8.0 + 32.0 * 16.0 / 63.0;
    assert!((centre - std::f64::consts::PI.sqrt() * (-s32 * s32).exp()).abs() < 1e-12);

    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(run.join("manifest.json")).unwrap()).unwrap();
    let outputs = manifest["outputs"].as_array().unwrap();
    let mut listed: Vec<&str> = outputs.iter().map(|e| e["path"].as_str().unwrap()).collect();
    listed.sort();
    assert_eq!(listed, ["sinogram.json", "sinogram.rgrd"]);
    for e in outputs {
        let bytes = fs::read(run.join(e["path"].as_str().unwrap())).unwrap();
        assert_eq!(e["sha256"].as_str().unwrap(), hex::encode(Sha256::digest(&bytes)));
    }
    assert_eq!(manifest["command"], "forward-euclidean");
    assert_eq!(manifest["parameters"]["grid"]["s_points"], 64);
    assert!(manifest["inputs"][0]["sha256"].as_str().unwrap().len() == 64);
    assert!(manifest["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "g.json", GAUSS);
    for n in ["1", "4"] {
        let o = igt(t.path(), &["forward-euclidean", "--config", "g.json", "--out", n, "--threads", n]);
        assert_eq!(o.status.code(), Some(0));
    }
    let a = fs::read(t.path().join("1/sinogram.rgrd")).unwrap();
    let b = fs::read(t.path().join("4/sinogram.rgrd")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn unknown_and_missing_keys_exit_two_with_the_key_named() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "u.json", &GAUSS.replace("\"k\": 1", "\"k\": 1, \"bogus\": 3"));
    let o = igt(t.path(), &["forward-euclidean", "--config", "u.json", "--out", "x"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_json(&o);
    assert_eq!(e["error"]["kind"], "precondition");
    assert_eq!(e["error"]["key"], "grid.bogus");

    write(t.path(), "m.json", &GAUSS.replace("\"s_half\": 8.0, ", ""));
    let o = igt(t.path(), &["forward-euclidean", "--config", "m.json", "--out", "x"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"]["key"], "grid.s_half");

    write(t.path(), "p.json", &GAUSS.replace("\"s_points\": 64", "\"s_points\": 100"));
    let o = igt(t.path(), &["forward-euclidean", "--config", "p.json", "--out", "x"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"]["key"], "grid.s_points");

    write(t.path(), "j.json", "{ not json");
    assert_eq!(igt(t.path(), &["forward-euclidean", "--config", "j.json", "--out", "x"]).status.code(), Some(2));
    assert_eq!(igt(t.path(), &["forward-euclidean", "--config", "absent.json"]).status.code(), Some(2));
    assert_eq!(igt(t.path(), &["no-such-command"]).status.code(), Some(2));
    assert_eq!(igt(t.path(), &["forward-euclidean", "--config", "g.json", "--threads", "0"]).status.code(), Some(2));
    assert_eq!(igt(t.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn grid_commands_need_an_output_directory() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "g.json", GAUSS);
    let o = igt(t.path(), &["forward-euclidean", "--config", "g.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"]["key"], "--out");
}

#[test]
fn missing_or_corrupt_inputs_exit_four() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "i.json", r#"{"sinogram": "none.rgrd", "sidecar": "none.json", "method": {"kind": "fourier-slice"}}"#);
    let o = igt(t.path(), &["invert-euclidean", "--config", "i.json"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(stderr_json(&o)["error"]["kind"], "io");

    write(t.path(), "g.json", GAUSS);
    assert_eq!(igt(t.path(), &["forward-euclidean", "--config", "g.json", "--out", "run"]).status.code(), Some(0));
    let path = t.path().join("run/sinogram.rgrd");
    let bytes = fs::read(&path).unwrap();
    fs::write(&path, &bytes[..bytes.len() - 8]).unwrap();
    write(t.path(), "c.json", r#"{"sinogram": "run/sinogram.rgrd", "method": {"kind": "fourier-slice"}}"#);
    assert_eq!(igt(t.path(), &["invert-euclidean", "--config", "c.json"]).status.code(), Some(4));
}

#[test]
fn funk_duality_identity_passes_and_fails_on_tolerance() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "d.json", r#"{"identity": {"kind": "funk-duality", "n": 3, "k": 1, "field": {"family": "constant"}}}"#);
    let o = igt(t.path(), &["check-identity", "--config", "d.json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("identity,parameter,lhs,rhs,rel_error,tolerance,verdict"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "funk-duality");
    let (lhs, rhs): (f64, f64) = (row[2].parse().unwrap(), row[3].parse().unwrap());
    // f ≡ 1: both sides reduce to 1 with the normalised measures.
    assert!((lhs - 1.0).abs() < 1e-10 && (rhs - 1.0).abs() < 1e-10);
    assert_eq!(row[6], "pass");

    write(t.path(), "s.json", r#"{"identity": {"kind": "funk-duality", "n": 3, "k": 1, "field": {"family": "zonal-gaussian", "axis": [0, 0, 0, 1], "kappa": 2}, "tolerance": 1e-30}}"#);
    let o = igt(t.path(), &["check-identity", "--config", "s.json", "--out", "r"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"]["kind"], "numerical");
    assert!(t.path().join("r/identity.csv").exists() && t.path().join("r/manifest.json").exists());
}

#[test]
fn hyperbolic_identities_from_the_command_line() {
    let t = tempfile::tempdir().unwrap();
    write(
        t.path(),
        "m.json",
        r#"{"identity": {"kind": "measure-decompositions", "n": 3, "field": {"family": "exp-decay", "a": 2}}}"#,
    );
    let o = igt(t.path(), &["check-identity", "--config", "m.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 3);

    write(
        t.path(),
        "p.json",
        r#"{"identity": {"kind": "hyperbolic-slice", "n": 3, "k": 1, "field": {"family": "power-decay", "a": 1.5}}}"#,
    );
    assert_eq!(igt(t.path(), &["check-identity", "--config", "p.json"]).status.code(), Some(2));
}

#[test]
fn funk_forward_then_pointwise_reconstruction() {
    let t = tempfile::tempdir().unwrap();
    write(
        t.path(),
        "f.json",
        r#"{"n": 3, "k": 1, "field": {"family": "zonal-legendre", "degree": 2, "axis": [0.5, 0.5, 0.5, 0.5]}, "w_order": 18}"#,
    );
    let o = igt(t.path(), &["forward-funk", "--config", "f.json", "--out", "run"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let g = read_grid(t.path().join("run/sinogram.rgrd")).unwrap();
    assert_eq!(g.dims()[0], 8);

    // The v-grid holds 8 angles on S^1; targets have θ'/|θ'| on it.
    write(
        t.path(),
        "r.json",
        r#"{"sinogram": "run/sinogram.rgrd", "max_degree": 8,
            "points": [[0.6, 0.0, 0.8, 0.0], [-0.5, 0.5, 0.5, 0.5], [0.0, 0.0, 0.6, 0.8]],
            "exact": {"family": "zonal-legendre", "degree": 2, "axis": [0.5, 0.5, 0.5, 0.5]}}"#,
    );
    let o = igt(t.path(), &["invert-funk", "--config", "r.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    for r in &rows[..2] {
        let err: f64 = r[4].parse().unwrap();
        assert!(err < 1e-8, "{r:?}");
    }
    // θ' = 0 lies on the degenerate set and stored data cannot be averaged.
    assert_eq!(rows[2][2], "NaN");
    assert!(!rows[2][5].is_empty());
}

#[test]
fn hyperbolic_forward_zero_field_and_geodesic() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "z.json", r#"{"n": 3, "k": 1, "field": {"family": "zero"}, "v_count": 4, "sigma_count": 4, "rho_max": 1, "rho_points": 3}"#);
    let o = igt(t.path(), &["forward-hyperbolic", "--config", "z.json", "--out", "z"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let g = read_grid(t.path().join("z/sinogram.rgrd")).unwrap();
    assert_eq!(g.dims(), &[4, 4, 3]);
    assert!(g.data().iter().all(|&v| v == 0.0));

    write(t.path(), "e.json", r#"{"n": 3, "k": 1, "field": {"family": "exp-decay", "a": 1}, "v_count": 4, "sigma_count": 4, "rho_max": 1, "rho_points": 3}"#);
    assert_eq!(igt(t.path(), &["forward-hyperbolic", "--config", "e.json", "--out", "e"]).status.code(), Some(0));
    let g = read_grid(t.path().join("e/sinogram.rgrd")).unwrap();
    // v = e_1, σ = e_1, ρ = 0 is the geodesic through the origin:
    // ∫ e^{1 - cosh t} dt by Simpson's rule.
    let h = 24.0 / 40000.0;
    let f = |t: f64| (1.0 - t.cosh()).exp();
    let simpson: f64 = (0..=40000)
        .map(|i| {
            let w = if i == 0 || i == 40000 { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            w * f(-12.0 + i as f64 * h)
        })
        .sum::<f64>()
        * h
        / 3.0;
    assert!((g.data()[1] - simpson).abs() < 1e-8, "{} vs {simpson}", g.data()[1]);
}

#[test]
fn range_check_flags_odd_perturbation() {
    let t = tempfile::tempdir().unwrap();
    write(
        t.path(),
        "r.json",
        r#"{"source": {"kind": "forward", "grid": {"n": 3, "k": 1, "directions": 32, "s_half": 8.0, "s_points": 64, "xpp_half": 2.0, "xpp_points": 3}, "field": {"family": "gaussian"}},
            "m_max": 2, "odd_perturbation": 1e-3}"#,
    );
    let o = igt(t.path(), &["check-range", "--config", "r.json"]);
    assert_eq!(o.status.code(), Some(3));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("criterion,m,value,threshold,verdict\n"));
    assert!(text.lines().any(|l| l.starts_with("evenness,,") && l.ends_with(",fail")));
}

#[test]
fn divergence_scans_emit_values_and_summary() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "s.json", r#"{"scan": {"kind": "f0", "n": 3, "k": 1, "p": 2.0, "delta": 0.25, "radii": [2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096]}}"#);
    let o = igt(t.path(), &["scan-divergence", "--config", "s.json", "--out", "o"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let values = fs::read_to_string(t.path().join("o/scan.csv")).unwrap();
    assert_eq!(values.lines().count(), 13);
    let summary = fs::read_to_string(t.path().join("o/summary.csv")).unwrap();
    let row: Vec<&str> = summary.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "true");
    assert!(row[2].parse::<f64>().unwrap() > 5.0);

    write(
        t.path(),
        "f.json",
        r#"{"scan": {"kind": "ftilde", "n": 3, "k": 1, "p": 2.0, "log_cutoffs": [1, 2, 4, 8], "cutoffs": [0.1, 0.01, 0.001]}}"#,
    );
    let o = igt(t.path(), &["scan-divergence", "--config", "f.json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("ftilde-norm") && text.contains("ftilde-funk"));
}
