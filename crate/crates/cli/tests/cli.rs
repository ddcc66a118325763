use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn heightgap(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heightgap"))
        .args(args)
        .current_dir(dir)
        .env("HEIGHTGAP_CACHE_DIR", dir.join("cache"))
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn height_of_identity_is_zero() {
    let t = TempDir::new().unwrap();
    write(t.path(), "id.json", r#"[["1", "0"], ["0", "1"]]"#);
    let o = heightgap(t.path(), &["height", "--matrices", "id.json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["total"].as_f64(), Some(0.0));
    assert_eq!(v["format_version"], 1);
}

#[test]
fn height_with_field_coefficients() {
    let t = TempDir::new().unwrap();
    // [[2, i/3], [0, 1/2]] over Q(i)
    write(t.path(), "m.json", r#"[[[2, ["0", "1/3"]], [0, "1/2"]]]"#);
    let o = heightgap(t.path(), &["height", "--matrices", "m.json", "--minpoly", "1,0,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let rows = v["rows"].as_array().unwrap();
    let total: f64 = rows.iter().map(|r| r["n_v"].as_f64().unwrap() * r["log_plus"].as_f64().unwrap()).sum::<f64>() / 2.0;
    assert!((total - v["total"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn gap_scan_one_row_csv_and_cache() {
    let t = TempDir::new().unwrap();
    let o = heightgap(t.path(), &["gap-scan", "--bianchi", "1", "--csv", "a.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(t.path().join("a.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("lattice,degree,verdict"));
    assert!(lines[1].starts_with("bianchi-1,2,dense-evidence,"));
    // cache hit is byte-identical, and so is an uncached rerun
    let again = heightgap(t.path(), &["gap-scan", "--bianchi", "1", "--csv", "b.csv"]);
    assert_eq!(again.stdout, o.stdout);
    assert_eq!(std::fs::read(t.path().join("b.csv")).unwrap(), csv.as_bytes());
    let fresh = heightgap(t.path(), &["gap-scan", "--bianchi", "1", "--no-cache"]);
    assert_eq!(fresh.stdout, o.stdout);
    let entries = std::fs::read_dir(t.path().join("cache")).unwrap().count();
    assert!(entries >= 2);
}

#[test]
fn gap_check_spec_file_and_flag_override() {
    let t = TempDir::new().unwrap();
    write(t.path(), "f.toml", "format_version = 1\n[lattice]\nbianchi = 7\n[run]\nn_max = 6\n");
    let o = heightgap(t.path(), &["gap-check", "--spec", "f.toml", "--nmax", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let v = json(&o);
    assert_eq!(v["verdict"], "dense-evidence");
    assert!(v["ratio"].as_f64().unwrap() > 0.0);
}

#[test]
fn dump_config_round_trips() {
    let t = TempDir::new().unwrap();
    write(t.path(), "f.toml", "[lattice]\nbianchi = 2\n");
    let o = heightgap(t.path(), &["margulis-scan", "--spec", "f.toml", "--eps", "0.2", "--radius", "6", "--dump-config"]);
    assert_eq!(o.status.code(), Some(0));
    let dumped = String::from_utf8(o.stdout).unwrap();
    assert!(dumped.contains("precision_bits = 192") && dumped.contains("eps = [0.2]"));
    write(t.path(), "d.toml", &dumped);
    let o2 = heightgap(t.path(), &["margulis-scan", "--spec", "d.toml", "--dump-config"]);
    assert_eq!(String::from_utf8(o2.stdout).unwrap(), dumped);
}

#[test]
fn margulis_scan_runs() {
    let t = TempDir::new().unwrap();
    write(t.path(), "f.toml", "[lattice]\nbianchi = 1\n");
    let o = heightgap(t.path(), &["margulis-scan", "--spec", "f.toml", "--eps", "0.2,1.0", "--radius", "6", "--csv", "m.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["monotone"], true);
    let csv = std::fs::read_to_string(t.path().join("m.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn errors_exit_one() {
    let t = TempDir::new().unwrap();
    let o = heightgap(t.path(), &["gap-check", "--spec", "missing.toml"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.toml"));
    write(t.path(), "bad.toml", "[run]\nnmax = 3\n");
    let o = heightgap(t.path(), &["gap-check", "--spec", "bad.toml"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nmax"));
    write(t.path(), "r.toml", "[field]\nminpoly = [1, 0, 1]\n[lattice]\ngenerators = [[[\"3//2\", 0], [0, 1]]]\n");
    let o = heightgap(t.path(), &["height", "--spec", "r.toml"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("lattice.generators[0][0][0]") && err.contains("3//2"), "{err}");
    let o = heightgap(t.path(), &["no-such-command"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn truncated_search_exits_two() {
    let t = TempDir::new().unwrap();
    // T and T_omega only: no generic element, and the budget stops the search early
    write(
        t.path(),
        "u.toml",
        "[field]\nminpoly = [1, 0, 1]\n[lattice]\ngenerators = [[[1, 1], [0, 1]], [[1, [0, 1]], [0, 1]]]\n",
    );
    let o = heightgap(t.path(), &["generic-search", "--spec", "u.toml", "--max-candidates", "50"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["truncated"], true);
    let o = heightgap(t.path(), &["generic-search", "--spec", "u.toml", "--nmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["exhausted"], true);
}

#[test]
fn remaining_subcommands() {
    let t = TempDir::new().unwrap();
    write(t.path(), "f.toml", "[lattice]\nbianchi = 3\ns = [{ p = 2 }]\n");
    // zeta(2) * Catalan = 1.5067030...
    let z = json(&heightgap(t.path(), &["zeta", "--minpoly", "1,0,1"]));
    assert!(z["zeta2"]["lower"].as_f64().unwrap() < 1.506703 && z["zeta2"]["upper"].as_f64().unwrap() > 1.506703);
    let c = json(&heightgap(t.path(), &["covol", "--spec", "f.toml"]));
    // 2 is inert in Q(sqrt -3): N = 4, multiplier [5/2, 5]
    assert_eq!(c["multiplier_lower"], "5/2");
    assert_eq!(c["multiplier_upper"], "5");
    let d = json(&heightgap(t.path(), &["disc-decompose", "--minpoly", "1,-3,1"]));
    assert_eq!(d["disc_minpoly"], "5");
    let n = json(&heightgap(t.path(), &["nheight", "--spec", "f.toml", "--nmax", "3"]));
    assert!(n["upper"].as_f64().unwrap() >= n["lower"].as_f64().unwrap());
    let m = json(&heightgap(t.path(), &["mobius-inspect", "--spec", "f.toml", "--word", "bc", "--word", "a"]));
    let els = m["elements"].as_array().unwrap();
    assert_eq!(els.len(), 2);
    assert_eq!(els[1]["factors"][0]["type"], "parabolic");
}
