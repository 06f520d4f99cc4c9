use num_complex::Complex64 as C;
use serde_json::Value;
use ssq_core::direct_scattering::ScatteringData;
use ssq_core::io::{read_profile, write_profile_csv, write_scattering};
use ssq_core::ComplexField;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn ssq(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssq"))
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("spawn ssq")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn write_field(dir: &Path, name: &str, xs: Vec<f64>, f: impl Fn(f64) -> C) -> PathBuf {
    let values = xs.iter().map(|&x| f(x)).collect();
    let p = dir.join(name);
    write_profile_csv(&p, &ComplexField::new(xs, values, 0.0).unwrap()).unwrap();
    p
}

fn periodic(length: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| -length / 2.0 + i as f64 * length / n as f64).collect()
}

fn one_soliton_file(dir: &Path) -> PathBuf {
    let a = C::new(0.7, 0.2);
    let p = dir.join("one.json");
    write_scattering(&p, &ScatteringData::reflectionless(vec![C::new(0.0, 0.8)], vec![[a, -a.conj()]])).unwrap();
    p
}

#[test]
fn scatter_of_zero_profile_is_empty_with_manifest() {
    let dir = TempDir::new().unwrap();
    let input = write_field(dir.path(), "zero.csv", (0..201).map(|i| -10.0 + 0.1 * i as f64).collect(), |_| C::new(0.0, 0.0));
    let o = ssq(dir.path(), &["scatter", "--input", input.to_str().unwrap(), "--nk", "21", "--search", "-2,2,0.05,2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let sd = read_json(&dir.path().join("scattering.json"));
    assert_eq!(sd["poles"].as_array().unwrap().len(), 0);
    let m = read_json(&dir.path().join("scattering.json.manifest.json"));
    assert_eq!(m["command"], "scatter");
    assert_eq!(m["config"]["nk"], 21);
    assert_eq!(m["config"]["kmin"], -5.0);
    assert_eq!(m["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(m["summary"]["failed_k_points"], 0);
}

#[test]
fn missing_input_exits_one_without_outputs() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let o = Command::new(env!("CARGO_BIN_EXE_ssq"))
        .args(["--out-dir", out.to_str().unwrap(), "scatter", "--input"])
        .arg(dir.path().join("nope.csv"))
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert!(!out.exists() || std::fs::read_dir(&out).unwrap().next().is_none());
}

#[test]
fn duplicate_poles_exit_three() {
    let dir = TempDir::new().unwrap();
    let a = C::new(0.5, 0.1);
    let c = [a, -a.conj()];
    let p = dir.path().join("dup.json");
    write_scattering(&p, &ScatteringData::reflectionless(vec![C::new(0.0, 0.8), C::new(0.0, 0.8)], vec![c, c])).unwrap();
    let o = ssq(dir.path(), &["soliton", "--scattering", p.to_str().unwrap(), "--n", "64"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn oversized_step_exits_four() {
    let dir = TempDir::new().unwrap();
    let input = write_field(dir.path(), "sech.csv", periodic(40.0, 256), |x| C::new(3.0 / x.cosh(), 0.0));
    let o = ssq(dir.path(), &["evolve", "--input", input.to_str().unwrap(), "--dt", "0.5", "--t-end", "50"]);
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn asymptote_lattice_rows_follow_the_partition() {
    let dir = TempDir::new().unwrap();
    let sd = dir.path().join("empty.json");
    write_scattering(&sd, &ScatteringData::default()).unwrap();
    let o = ssq(
        dir.path(),
        &["asymptote", "--scattering", sd.to_str().unwrap(), "--lattice", "-30:30:7,1:27:3", "--kappa", "0.1", "--out", "a.csv"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,t,region,re_leading,im_leading,re_corr,im_corr,error_order");
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 21);
    for r in &rows {
        let (x, t): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        let y = x / t.cbrt();
        let want = if y.abs() <= 2.0 { "III" } else if x < 0.0 { "I" } else { "II" };
        assert_eq!(r[2], want, "({x}, {t})");
    }
    assert!(dir.path().join("a_painleve.csv").exists());
    let m = read_json(&dir.path().join("a.csv.manifest.json"));
    assert_eq!(m["summary"]["points"], 21);
}

#[test]
fn region_three_without_kappa_is_rejected() {
    let dir = TempDir::new().unwrap();
    let sd = dir.path().join("empty.json");
    write_scattering(&sd, &ScatteringData::default()).unwrap();
    let o = ssq(dir.path(), &["asymptote", "--scattering", sd.to_str().unwrap(), "--point", "1,1000"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn compare_with_itself_is_zero() {
    let dir = TempDir::new().unwrap();
    let f = write_field(dir.path(), "g.csv", periodic(20.0, 128), |x| C::new((-x * x).exp(), 0.1 * x));
    let fs = f.to_str().unwrap();
    let o = ssq(dir.path(), &["compare", fs, fs]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&dir.path().join("compare.json"));
    assert_eq!(r["differences"][0]["linf"], 0.0);
    assert_eq!(r["differences"][0]["l2"], 0.0);
}

#[test]
fn compare_fits_a_synthetic_decay_exponent() {
    let dir = TempDir::new().unwrap();
    let times = [25.0, 50.0, 100.0, 200.0];
    let files: Vec<String> = times
        .iter()
        .map(|&t: &f64| {
            let s = t.powf(-0.5);
            write_field(dir.path(), &format!("u{t}.csv"), periodic(100.0, 256), move |x| C::new(s * (-x * x / 100.0).exp(), 0.0))
                .to_string_lossy()
                .into_owned()
        })
        .collect();
    let mut args = vec!["compare"];
    args.extend(files.iter().map(String::as_str));
    args.extend(["--times", "25,50,100,200"]);
    let o = ssq(dir.path(), &args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&dir.path().join("compare.json"));
    assert!((r["fit"]["slope"].as_f64().unwrap() + 0.5).abs() < 1e-10);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let sd = one_soliton_file(dir.path());
    for out in ["r1.csv", "r2.csv"] {
        let o = ssq(dir.path(), &["soliton", "--scattering", sd.to_str().unwrap(), "--n", "512", "--t", "1.5", "--out", out]);
        assert_eq!(code(&o), 0);
    }
    let a = std::fs::read(dir.path().join("r1.csv")).unwrap();
    let b = std::fs::read(dir.path().join("r2.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn soliton_l2_is_time_independent() {
    let dir = TempDir::new().unwrap();
    let sd = one_soliton_file(dir.path());
    let mut l2 = Vec::new();
    for (t, out) in [("0", "s0.csv"), ("5", "s5.csv")] {
        let o = ssq(dir.path(), &["soliton", "--scattering", sd.to_str().unwrap(), "--n", "4096", "--t", t, "--out", out]);
        assert_eq!(code(&o), 0);
        l2.push(read_profile(&dir.path().join(out)).unwrap().l2_norm());
    }
    assert!((l2[0] - l2[1]).abs() < 1e-8 * l2[0], "{l2:?}");
}

#[test]
fn flags_override_config_values() {
    let dir = TempDir::new().unwrap();
    let sd = one_soliton_file(dir.path());
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"n": 100, "xmin": -10.0, "xmax": 10.0, "t": 2.0}"#).unwrap();
    let o = ssq(dir.path(), &["--config", cfg.to_str().unwrap(), "soliton", "--scattering", sd.to_str().unwrap(), "--n", "50"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let f = read_profile(&dir.path().join("soliton.csv")).unwrap();
    assert_eq!(f.len(), 50);
    assert_eq!(f.xmin(), -10.0);
    let m = read_json(&dir.path().join("soliton.csv.manifest.json"));
    assert_eq!(m["config"]["n"], 50);
    assert_eq!(m["config"]["t"], 2.0);
}

#[test]
fn unknown_strategy_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let sd = one_soliton_file(dir.path());
    let o = ssq(dir.path(), &["soliton", "--scattering", sd.to_str().unwrap(), "--exponent-policy", "bogus"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("rescale"));
}

#[test]
fn evolve_writes_intermediate_snapshots() {
    let dir = TempDir::new().unwrap();
    let input = write_field(dir.path(), "g.csv", periodic(40.0, 256), |x| C::new(0.2 * (-x * x).exp(), 0.0));
    let o = ssq(dir.path(), &["evolve", "--input", input.to_str().unwrap(), "--t-end", "1", "--times", "0.5", "--out", "e.csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("e_t0.5.csv").exists());
    let m = read_json(&dir.path().join("e.csv.manifest.json"));
    assert!(m["summary"]["relative_drift"].as_f64().unwrap().abs() < 1e-10);
}
