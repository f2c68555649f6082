//! End-to-end tests of the `cylschur` binary: exit codes, CSV shape, and
//! byte-level determinism across reruns and thread counts.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cylschur"))
}

#[test]
fn kernel_grid_is_deterministic_across_runs_and_threads() {
    let args = [
        "kernel",
        "--spec",
        "N=1;t=0.3;z=1.3;a[1]=single:0.5;b[1]=single:0.5",
        "--grid",
        "tau=1;x=-2.5:2.5",
    ];
    let run = |threads: &str| {
        let out = bin()
            .args(args)
            .env("CYLSCHUR_THREADS", threads)
            .output()
            .expect("binary runs");
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let a = run("1");
    let b = run("1");
    let c = run("4");
    assert_eq!(a, b, "reruns must be byte-identical");
    assert_eq!(a, c, "thread count must not change output");
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("# spec:"));
    assert!(text.contains("sigma,x,tau,y,re,im"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 6);
}

#[test]
fn kernel_empty_grid_gives_header_only() {
    let out = bin()
        .args(["kernel", "--spec", "N=1;t=0.5;z=1.3"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let data_lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data_lines, vec!["sigma,x,tau,y,re,im"]);
}

#[test]
fn explicit_points_match_diagonal_closed_form() {
    let out = bin()
        .args([
            "kernel",
            "--spec",
            "N=1;t=0.5;z=1.3",
            "--points",
            "1,0.5;1,0.5|1,0.5;1,1.5",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("sigma"))
        .collect();
    assert_eq!(rows.len(), 2);
    let first: Vec<f64> = rows[0]
        .split(',')
        .map(|v| v.parse::<f64>().unwrap())
        .collect();
    let ztx = 1.3 * 0.5f64.powf(0.5);
    assert!((first[4] - ztx / (1.0 + ztx)).abs() < 1e-9);
    let second: Vec<f64> = rows[1]
        .split(',')
        .map(|v| v.parse::<f64>().unwrap())
        .collect();
    assert!(
        second[4].abs() < 1e-9,
        "off-diagonal uniform kernel vanishes"
    );
}

#[test]
fn cylindric_count_succeeds_and_reports_partition_numbers() {
    let out = bin()
        .args([
            "cylindric-count",
            "--profile",
            "A=10;mark=2",
            "--max-norm",
            "10",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().last().unwrap();
    assert_eq!(last, "10,42,42");
}

#[test]
fn config_errors_exit_2() {
    for args in [
        vec!["kernel", "--spec", "N=1;t=1.5;z=1"],
        vec!["kernel", "--spec", "nonsense"],
        vec!["density", "--family", "wrong", "--grid", "0:1:0.5"],
        vec!["check", "unknown-suite"],
        vec!["cylindric-count", "--profile", "A=11;mark=1"],
    ] {
        let out = bin().args(&args).output().expect("binary runs");
        assert_eq!(out.status.code(), Some(2), "args={args:?}");
    }
}

#[test]
fn check_suite_exits_zero() {
    let out = bin().args(["check", "qseries"]).output().expect("runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .all(|l| l.starts_with("PASS") || l.starts_with("OK")));
}

#[test]
fn density_closed_form_row() {
    let out = bin()
        .args([
            "density", "--family", "no", "--mu0", "0.8", "--z", "1.0", "--grid", "0:0:1",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().last().unwrap();
    let rho: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    let pi = std::f64::consts::PI;
    let expect =
        ((1.0 + (pi * 0.8f64).exp()) / (1.0 + (-pi * 0.8f64).exp())).ln() / (2.0 * pi * 0.8);
    assert!((rho - expect).abs() < 1e-12);
}

#[test]
fn spec_file_input_works() {
    let dir = std::env::temp_dir().join(format!("cylschur-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.conf");
    std::fs::write(&path, "N = 1\nt = 0.5\nz = 1.3\n").unwrap();
    let out = bin()
        .args([
            "kernel",
            "--spec",
            &format!("@{}", path.display()),
            "--grid",
            "tau=1;x=0.5:0.5",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    std::fs::remove_dir_all(&dir).ok();
}
