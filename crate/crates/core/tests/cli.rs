use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cgrdst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cgrdst")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = cgrdst(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn header(text: &str) -> &str {
    text.lines().next().unwrap_or("")
}

#[test]
fn generate_is_deterministic() {
    let a = stdout(&["generate", "--n", "500", "--seed", "7"]);
    let b = stdout(&["generate", "--n", "500", "--seed", "7"]);
    let c = stdout(&["generate", "--n", "500", "--seed", "8"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.starts_with('>'));
    let letters: usize = a.lines().skip(1).map(|l| l.trim().len()).sum();
    assert_eq!(letters, 500);
}

#[test]
fn generated_fasta_round_trips_through_build() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&["generate", "--n", "300", "--seed", "3", "--out", dir.path().to_str().unwrap()]);
    let fasta = dir.path().join("sequence.fa");
    let from_file = stdout(&["build", "--fasta", fasta.to_str().unwrap()]);
    let generated = stdout(&["build", "--n", "300", "--seed", "3"]);
    assert_eq!(from_file, generated);
    assert_eq!(header(&from_file), "insertion_index,depth,path");
    assert_eq!(from_file.lines().count(), 301);
}

#[test]
fn constants_for_skewed_iid() {
    let out = stdout(&["constants", "--model", "iid", "--probs", "0.6,0.1,0.1,0.2"]);
    assert_eq!(header(&out), "h_plus,h,h_minus,inv_h_plus,inv_h,inv_h_minus,s_plus_cycle,s_minus_cycle");
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    let h_plus: f64 = row[0].parse().unwrap();
    assert!((h_plus - 10f64.ln()).abs() < 1e-12);
    assert_eq!(row[7], "A");
}

#[test]
fn constants_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.cfg");
    fs::write(&path, "kind = markov\nQ = 0.7,0.1,0.1,0.1, 0.1,0.7,0.1,0.1, 0.1,0.1,0.7,0.1, 0.1,0.1,0.1,0.7\nseed = 4\n").unwrap();
    let out = stdout(&["constants", "--config", path.to_str().unwrap()]);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    let h_minus: f64 = row[2].parse().unwrap();
    assert!((h_minus + 0.7f64.ln()).abs() < 1e-12);
}

#[test]
fn stats_rows_follow_the_stride() {
    let out = stdout(&["stats", "--n", "1000", "--stride", "100"]);
    assert_eq!(header(&out), "n,shortest,longest,depth_n");
    assert_eq!(out.lines().count(), 11);
    assert!(out.lines().last().unwrap().starts_with("1000,"));
}

#[test]
fn cgr_points_and_historyless() {
    let points = stdout(&["cgr-points", "--n", "50"]);
    assert_eq!(header(&points), "index,x,y");
    assert_eq!(points.lines().count(), 51);
    let hist = stdout(&["historyless", "--n", "50"]);
    assert_eq!(header(&hist), "word,x,y");
    assert_eq!(hist.lines().count(), 51);
}

#[test]
fn genfun_with_bound_check() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = cgrdst(&["genfun", "--model", "markov", "--q", &sticky_q(), "--word", "ACA", "--t", "0.5", "--bound-check", "--out", d]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let eval = fs::read_to_string(dir.path().join("genfun.csv")).unwrap();
    assert_eq!(header(&eval), "word,t,phi,gamma_r,delta_r,z_gf,root");
    let bound = fs::read_to_string(dir.path().join("bound_check.csv")).unwrap();
    assert!(header(&bound).starts_with("word,gamma,k_est,kappa_prime"));
    assert!(bound.lines().nth(1).unwrap().ends_with("true"));
}

fn sticky_q() -> String {
    "0.7,0.1,0.1,0.1,0.1,0.7,0.1,0.1,0.1,0.1,0.7,0.1,0.1,0.1,0.1,0.7".to_string()
}

#[test]
fn trace_and_histogram_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    stdout(&["trace", "--n", "2000", "--stride", "100", "--out", d]);
    let trace = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert_eq!(header(&trace), "n,ell_norm,L_norm,D_norm");
    assert!(dir.path().join("trace_meta.csv").exists());

    stdout(&["histogram", "--n", "2000", "--replicates", "8", "--out", d]);
    let hist = fs::read_to_string(dir.path().join("histogram.csv")).unwrap();
    assert_eq!(header(&hist), "replicate,ell,D,L,M");
    assert_eq!(hist.lines().count(), 9);
    for name in ["histogram_bins.csv", "histogram_meta.csv"] {
        assert!(Path::new(d).join(name).exists(), "{name}");
    }
}

#[test]
fn histogram_serial_matches_parallel() {
    let par = stdout(&["histogram", "--n", "1000", "--replicates", "6", "--seed", "9"]);
    let ser = stdout(&["histogram", "--n", "1000", "--replicates", "6", "--seed", "9", "--serial"]);
    assert_eq!(par, ser);
}

#[test]
fn regress_passes() {
    let out = stdout(&["regress"]);
    assert!(!out.contains("FAIL"));
}

#[test]
fn errors_exit_with_code_two() {
    for args in [
        vec!["genfun", "--word", "AXG"],
        vec!["constants", "--model", "iid", "--probs", "0.5,0.5,0.5,0.5"],
        vec!["build", "--fasta", "/nonexistent/seq.fa"],
        vec!["constants", "--model", "weird"],
    ] {
        let out = cgrdst(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"), "{args:?}");
    }
}
