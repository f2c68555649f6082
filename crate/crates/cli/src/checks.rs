//! `cylschur check <suite>`: fast built-in verification runs with a
//! machine-readable pass/fail line per check.

use cylschur_core::error::Error;
use cylschur_core::kernel::{self, ContourSpec, KernelPoint};
use cylschur_core::partition::HalfInt;
use cylschur_core::process::{self, Point, ProcessSpec};
use cylschur_core::qseries::{self, Nome};
use cylschur_core::quad::cr;
use cylschur_core::symfunc::Specialization;
use cylschur_core::{bulk, cylindric, nekrasov};
use num_complex::Complex64;
use std::process::ExitCode;

struct Report {
    failures: usize,
}

impl Report {
    fn new() -> Self {
        Report { failures: 0 }
    }

    fn check(&mut self, name: &str, residual: f64, tol: f64) {
        if residual.is_finite() && residual < tol {
            println!("PASS {name} residual={residual:.3e} tol={tol:.1e}");
        } else {
            println!("FAIL {name} residual={residual:.3e} tol={tol:.1e}");
            self.failures += 1;
        }
    }

    fn error(&mut self, name: &str, e: &Error) {
        println!("FAIL {name} error={e}");
        self.failures += 1;
    }
}

pub fn cmd_check(suite: &str) -> Result<ExitCode, Error> {
    let known = [
        "qseries",
        "process",
        "kernel",
        "cylindric",
        "bulk",
        "no",
        "all",
    ];
    if !known.contains(&suite) {
        return Err(Error::config(format!(
            "unknown suite {suite:?}; expected one of {known:?}"
        )));
    }
    let mut report = Report::new();
    if suite == "qseries" || suite == "all" {
        check_qseries(&mut report);
    }
    if suite == "process" || suite == "all" {
        check_process(&mut report);
    }
    if suite == "kernel" || suite == "all" {
        check_kernel(&mut report);
    }
    if suite == "cylindric" || suite == "all" {
        check_cylindric(&mut report);
    }
    if suite == "bulk" || suite == "all" {
        check_bulk(&mut report);
    }
    if suite == "no" || suite == "all" {
        check_no(&mut report);
    }
    if report.failures == 0 {
        println!("OK all checks passed");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("FAILED {} check(s)", report.failures);
        Ok(ExitCode::from(1))
    }
}

fn check_qseries(r: &mut Report) {
    let nome = match Nome::real(0.4) {
        Ok(n) => n,
        Err(e) => return r.error("qseries.nome", &e),
    };
    // theta3: sum vs product paths
    let z = Complex64::new(0.7, 0.2);
    match (qseries::theta3(z, &nome), qseries::theta3_product(z, &nome)) {
        (Ok(a), Ok(b)) => r.check("qseries.theta3-paths", (a - b).norm(), 1e-11),
        (Err(e), _) | (_, Err(e)) => r.error("qseries.theta3-paths", &e),
    }
    // Ramanujan bilateral sum vs closed form, both annuli
    let mut worst = 0.0f64;
    for (y, side) in [
        (cr(1.1), qseries::RamanujanSide::Outer),
        (cr(0.9), qseries::RamanujanSide::Inner),
    ] {
        match (
            qseries::ramanujan_sum_lhs(y, cr(1.3), &nome, side),
            qseries::ramanujan_rhs(y, cr(1.3), &nome),
        ) {
            (Ok(a), Ok(b)) => worst = worst.max((a - b).norm()),
            (Err(e), _) | (_, Err(e)) => return r.error("qseries.ramanujan", &e),
        }
    }
    r.check("qseries.ramanujan", worst, 1e-9);
    // Frobenius determinant identity at n = 3
    let zhat = cr(-1.3) * nome.sqrt_t();
    let zetas: Vec<Complex64> = (0..3)
        .map(|k| Complex64::from_polar(1.05, 1.1 + 2.1 * k as f64))
        .collect();
    let etas: Vec<Complex64> = (0..3)
        .map(|k| Complex64::from_polar(1.02, 0.4 + 1.7 * k as f64))
        .collect();
    match qseries::frobenius_det_check(&zetas, &etas, zhat, &nome) {
        Ok((lhs, rhs)) => r.check(
            "qseries.frobenius",
            (lhs - rhs).norm() / lhs.norm().max(1e-12),
            1e-8,
        ),
        Err(e) => r.error("qseries.frobenius", &e),
    }
    // dilog special values
    match qseries::dilog(cr(-1.0)) {
        Ok(v) => r.check(
            "qseries.dilog",
            (v + cr(std::f64::consts::PI.powi(2) / 12.0)).norm(),
            1e-13,
        ),
        Err(e) => r.error("qseries.dilog", &e),
    }
}

fn single_spec() -> ProcessSpec {
    ProcessSpec::new(
        0.3,
        cr(1.3),
        vec![Specialization::single(0.5)],
        vec![Specialization::single(0.5)],
    )
    .expect("valid spec")
}

fn check_process(r: &mut Report) {
    let spec = single_spec();
    match (
        process::partition_function_formula(&spec),
        process::partition_function_oracle(&spec, 20),
    ) {
        (Ok(a), Ok(b)) => r.check("process.partition-function", (a - b).norm(), 1e-7),
        (Err(e), _) | (_, Err(e)) => r.error("process.partition-function", &e),
    }
    let uniform = ProcessSpec::uniform(1, 0.5, cr(1.3)).expect("valid");
    let x = HalfInt::plus_half(0);
    match process::correlation_oracle(&uniform, &[Point::new(1, x)], true, 30) {
        Ok(rho) => {
            let ztx = cr(1.3) * cr(0.5f64.powf(0.5));
            r.check(
                "process.bernoulli",
                (rho - ztx / (cr(1.0) + ztx)).norm(),
                1e-6,
            );
        }
        Err(e) => r.error("process.bernoulli", &e),
    }
}

fn check_kernel(r: &mut Report) {
    let contour = ContourSpec::default();
    let uniform = ProcessSpec::uniform(1, 0.5, cr(1.3)).expect("valid");
    let x = HalfInt::plus_half(1);
    match kernel::kernel(
        &uniform,
        KernelPoint::new(1, x),
        KernelPoint::new(1, x),
        &contour,
    ) {
        Ok(v) => r.check(
            "kernel.uniform-diagonal",
            (v - kernel::uniform_kernel_diagonal(0.5, cr(1.3), x)).norm(),
            1e-9,
        ),
        Err(e) => r.error("kernel.uniform-diagonal", &e),
    }
    let spec = single_spec();
    let p = KernelPoint::new(1, HalfInt::plus_half(0));
    match (
        kernel::correlation_det(&spec, &[p], &contour),
        process::correlation_oracle(&spec, &[Point::new(1, p.x)], true, 20),
    ) {
        (Ok(a), Ok(b)) => r.check("kernel.oracle-match", (a - b).norm(), 1e-6),
        (Err(e), _) | (_, Err(e)) => r.error("kernel.oracle-match", &e),
    }
    match kernel::lk_residual(&spec, 10, &contour) {
        Ok(res) => r.check("kernel.lk-residual", res, 1e-6),
        Err(e) => r.error("kernel.lk-residual", &e),
    }
}

fn check_cylindric(r: &mut Report) {
    for (name, profile, cap) in [
        ("staircase", cylindric::staircase_profile(1), 12u64),
        ("paper-n7", cylindric::paper_n7_profile(), 10),
        ("corner-3x3", cylindric::corner_profile(3, 3), 10),
    ] {
        match cylindric::counts_by_norm(&profile, cap) {
            Ok(counts) => {
                let formula = cylindric::generating_function_formula(&profile, cap as usize);
                let ok = counts == formula;
                r.check(
                    &format!("cylindric.identity-{name}"),
                    if ok { 0.0 } else { 1.0 },
                    0.5,
                );
            }
            Err(e) => r.error(&format!("cylindric.identity-{name}"), &e),
        }
    }
}

fn check_bulk(r: &mut Report) {
    let prof = cylindric::staircase_profile(1);
    match bulk::cylindric_bulk_kernel(&prof, 0.0, 1, 1, 0, 1e-11) {
        Ok(v) => r.check(
            "bulk.cylindric-density",
            (v - cr(1.0 / 5.0f64.sqrt())).norm(),
            1e-8,
        ),
        Err(e) => r.error("bulk.cylindric-density", &e),
    }
    match bulk::cylindric_slow_density(1.0, 0.0) {
        Ok(v) => r.check("bulk.slow-density", (v - 1.0 / 3.0).abs(), 1e-10),
        Err(e) => r.error("bulk.slow-density", &e),
    }
    match bulk::corner_gammas(0.4, 1.0, bulk::Corner::Outer)
        .and_then(|g| bulk::corner_solve_c(0.4, g, bulk::Corner::Outer))
    {
        Ok(c) => r.check("bulk.corner-roundtrip", (c - 1.0).abs(), 1e-10),
        Err(e) => r.error("bulk.corner-roundtrip", &e),
    }
    let a = vec![Specialization::tp(&[], &[], 0.4); 2];
    match bulk::sine_extension_kernel(&a, &a, 1.1, 1, 1, 3, 1e-12) {
        Ok(v) => r.check(
            "bulk.sine-equal-time",
            (v - cr(bulk::discrete_sine(1.1, 3))).norm(),
            1e-10,
        ),
        Err(e) => r.error("bulk.sine-equal-time", &e),
    }
}

fn check_no(r: &mut Report) {
    let spec = nekrasov::NoSpec::probability(0.6, 0.35, 1.0).expect("valid");
    match nekrasov::no_normalization(&spec, 20) {
        Ok(s) => r.check("no.normalisation", (s - cr(1.0)).norm(), 1e-6),
        Err(e) => r.error("no.normalisation", &e),
    }
    let mu = Complex64::new(0.0, 0.7);
    let mut worst = 0.0f64;
    let mut failed = None;
    for kappa in cylschur_core::partition::enumerate_partitions(4).expect("small") {
        for lam in cylschur_core::partition::enumerate_partitions(4).expect("small") {
            match nekrasov::hook_identity_sides(&kappa, &lam, mu) {
                Ok((lhs, rhs)) => worst = worst.max((lhs - rhs).norm()),
                Err(e) => failed = Some(e),
            }
        }
    }
    match failed {
        None => r.check("no.hook-identity", worst, 1e-10),
        Some(e) => r.error("no.hook-identity", &e),
    }
    match bulk::no_bulk_kernel(0.8, 1.0, 0.0, 0, 1e-11) {
        Ok(v) => {
            let rho = bulk::no_bulk_density(0.8, 1.0, 0.0).expect("valid");
            r.check("no.bulk-density", (v - cr(rho)).norm(), 1e-8);
        }
        Err(e) => r.error("no.bulk-density", &e),
    }
}
