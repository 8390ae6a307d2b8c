//! End-to-end checks of the binary: exit codes, deterministic JSON, CSV
//! emission, and grid-density input.

use std::process::{Command, Output};

fn rfi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rfi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).to_string()
}

#[test]
fn constants_json_and_value() {
    let out = rfi(&["constants", "--alpha", "2", "--dim", "1"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("\"route\":\"closed_form_1d\""));
    // 32 pi^2 / 27 = 11.6973089...
    assert!(s.contains("\"value\":1.169730891980"), "{s}");
}

#[test]
fn byte_identical_reruns_across_thread_counts() {
    let a = rfi(&["constants", "--alpha", "0.5:3.0:11", "--dim", "1", "--threads", "1"]);
    let b = rfi(&["constants", "--alpha", "0.5:3.0:11", "--dim", "1", "--threads", "4"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);

    let c = rfi(&[
        "suite", "--name", "all", "--alpha", "2", "--dim", "1", "--density",
        "family:cos_power(alpha=2,b=1,c=0)",
    ]);
    let d = rfi(&[
        "suite", "--name", "all", "--alpha", "2", "--dim", "1", "--density",
        "family:cos_power(alpha=2,b=1,c=0)", "--threads", "3",
    ]);
    assert!(c.status.success() && d.status.success());
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn exit_codes() {
    // all verdicts pass -> 0
    let ok = rfi(&[
        "suite", "--name", "all", "--alpha", "2", "--dim", "1", "--density",
        "family:cos_power(alpha=2,b=1,c=0)",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    // region error -> 2, message names the violated constraint
    let bad = rfi(&["constants", "--alpha", "2.5", "--dim", "3"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("n=3"));
    let bad = rfi(&[
        "verify", "--name", "cramer_rao_renyi", "--alpha", "0.5", "--density",
        "family:barenblatt(alpha=2,dim=3)",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("n/(n+2)"));
    // unknown flags -> 2 (clap)
    let bad = rfi(&["constants", "--alfa", "2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn profile_csv_has_header_and_bessel_radius() {
    let dir = std::env::temp_dir().join("rfi-profile-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("u.csv");
    let out = rfi(&[
        "profile", "--alpha", "2", "--dim", "2", "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# {") && header.contains("\"T\":3.83170"), "{header}");
    assert_eq!(lines.next().unwrap(), "t,u,uprime");
    assert!(text.lines().count() > 1000);
    // summary mirrors the header on stdout
    assert!(stdout(&out).contains("\"u0\":3.4828"));
}

#[test]
fn heatflow_csv_columns() {
    let out = rfi(&[
        "heatflow", "--alpha", "2", "--density", "family:gaussian(var=1)", "--t-grid",
        "0.2:0.4:6", "--format", "csv",
    ]);
    assert!(out.status.success());
    let s = stdout(&out);
    let mut lines = s.lines();
    assert_eq!(lines.next().unwrap(), "t,h,N,I,dh_dt_fd,residual");
    assert_eq!(lines.count(), 6);
}

#[test]
fn grid_csv_density_input() {
    let dir = std::env::temp_dir().join("rfi-grid-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p.csv");
    // standard normal sampled on a uniform grid
    let mut csv = String::from("x,p\n");
    let n = 2001;
    let h = 0.01;
    for i in 0..n {
        let x = -10.0 + i as f64 * h;
        let p = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        csv.push_str(&format!("{x},{p}\n"));
    }
    std::fs::write(&path, csv).unwrap();
    let spec = format!("grid:{}", path.to_str().unwrap());
    let out = rfi(&["functionals", "--alpha", "2", "--density", &spec]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = stdout(&out);
    // I_2 of the standard normal is 1
    let needle = "\"I_alpha\":";
    let at = s.find(needle).unwrap() + needle.len();
    let val: f64 = s[at..].split(&[',', '}'][..]).next().unwrap().parse().unwrap();
    assert!((val - 1.0).abs() < 1e-5, "I_2 from grid = {val}");
}

#[test]
fn verify_csv_batch_mode() {
    let out = rfi(&[
        "verify", "--name", "all", "--alpha", "2", "--density",
        "family:gaussian(var=1)", "--format", "csv",
    ]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.starts_with("inequality_id,lhs,rhs,margin,tolerance,pass,equality_expected"));
    assert!(s.lines().count() >= 5);
    assert!(s.contains("isoperimetric,"));
}
