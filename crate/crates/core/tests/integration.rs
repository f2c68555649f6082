//! Cross-module consistency: cylindric kernels against the cylindric
//! enumeration, the hook-measure kernel against its weight oracle, and the
//! limit-shape identity of the bulk density.

use cylschur_core::bulk;
use cylschur_core::cylindric::{self, Profile};
use cylschur_core::kernel::{self, ContourSpec, KernelPoint};
use cylschur_core::nekrasov;
use cylschur_core::partition::HalfInt;
use cylschur_core::process::{self, Point};
use cylschur_core::quad::cr;
use cylschur_core::symfunc::Specialization;
use num_complex::Complex64;

fn half(k: i64) -> HalfInt {
    HalfInt::plus_half(k)
}

#[test]
fn cylindric_kernel_matches_enumeration_oracle() {
    // N = 2 staircase at s = 0.6: ρ1 through the z-unmixed determinantal
    // kernel against the brute-force trajectory oracle
    let prof = cylindric::staircase_profile(1);
    let s = 0.6f64;
    let spec = cylindric::to_process_spec(&prof, s, cr(1.3)).unwrap();
    let contour = ContourSpec::default();
    for (tau, xk) in [(1usize, 0i64), (2, 0), (1, -2)] {
        let x = half(xk);
        let via_kernel =
            kernel::correlation_unmixed(&spec, &[KernelPoint::new(tau, x)], &contour).unwrap();
        let via_oracle =
            process::correlation_oracle(&spec, &[Point::new(tau, x)], false, 32).unwrap();
        assert!(
            (via_kernel - via_oracle).norm() < 1e-6,
            "tau={tau} x={x} kernel={via_kernel} oracle={via_oracle}"
        );
    }
    // ρ2 as well
    let pts = [KernelPoint::new(1, half(0)), KernelPoint::new(2, half(-1))];
    let via_kernel = kernel::correlation_unmixed(&spec, &pts, &contour).unwrap();
    let via_oracle = process::correlation_oracle(
        &spec,
        &[Point::new(1, half(0)), Point::new(2, half(-1))],
        false,
        32,
    )
    .unwrap();
    assert!(
        (via_kernel - via_oracle).norm() < 1e-6,
        "rho2 kernel={via_kernel} oracle={via_oracle}"
    );
}

#[test]
fn cylindric_rho1_respects_profile_rotation() {
    // the kernel-side ρ1 at (τ, x) equals the rotated profile's ρ1 at (τ+1, x)
    let prof = Profile::new(vec![0, 1, 1, 0], 1).unwrap();
    let rot = prof.rotated();
    let s = 0.55f64;
    let contour = ContourSpec::default();
    let spec = cylindric::to_process_spec(&prof, s, cr(1.0)).unwrap();
    let spec_rot = cylindric::to_process_spec(&rot, s, cr(1.0)).unwrap();
    for (tau, xk) in [(1usize, 0i64), (2, -1)] {
        let a = kernel::correlation_unmixed(&spec, &[KernelPoint::new(tau, half(xk))], &contour)
            .unwrap();
        let b = kernel::correlation_unmixed(
            &spec_rot,
            &[KernelPoint::new(tau + 1, half(xk))],
            &contour,
        )
        .unwrap();
        assert!((a - b).norm() < 1e-8, "tau={tau} x={xk} a={a} b={b}");
    }
}

#[test]
fn d0_profile_reduces_to_uniform_measure() {
    // all-B profile: every diagonal coincides, the measure is uniform in
    // t = s^N; the unmixed ρ1 must match the uniform-measure value
    let prof = cylindric::profile_from_shape(&cylschur_core::Partition::empty(), 0, 3).unwrap();
    let s = 0.8f64;
    let t = s.powi(3);
    let spec = cylindric::to_process_spec(&prof, s, cr(1.3)).unwrap();
    let uniform = process::ProcessSpec::uniform(1, t, cr(1.3)).unwrap();
    let contour = ContourSpec::default();
    for xk in [-2i64, 0, 1] {
        let x = half(xk);
        let a = kernel::correlation_unmixed(&spec, &[KernelPoint::new(2, x)], &contour).unwrap();
        let b = kernel::correlation_unmixed(&uniform, &[KernelPoint::new(1, x)], &contour).unwrap();
        assert!((a - b).norm() < 1e-8, "x={x} cylindric={a} uniform={b}");
    }
}

#[test]
fn no_kernel_matches_weight_oracle() {
    let spec = nekrasov::NoSpec::probability(0.7, 0.35, 1.0).unwrap();
    let contour = ContourSpec::default();
    // ρ1 (shift-mixed): kernel diagonal against the (λ, S) oracle
    for xk in [-2i64, 0, 1] {
        let x = half(xk);
        let via_kernel = kernel::no_kernel(&spec, x, x, &contour).unwrap();
        let via_oracle = nekrasov::no_correlation_oracle(&spec, &[x], true, 24).unwrap();
        assert!(
            (via_kernel - via_oracle).norm() < 1e-6,
            "x={x} kernel={via_kernel} oracle={via_oracle}"
        );
    }
    // ρ2 determinant
    let (x, y) = (half(0), half(-2));
    let kxx = kernel::no_kernel(&spec, x, x, &contour).unwrap();
    let kxy = kernel::no_kernel(&spec, x, y, &contour).unwrap();
    let kyx = kernel::no_kernel(&spec, y, x, &contour).unwrap();
    let kyy = kernel::no_kernel(&spec, y, y, &contour).unwrap();
    let det = kxx * kyy - kxy * kyx;
    let oracle = nekrasov::no_correlation_oracle(&spec, &[x, y], true, 24).unwrap();
    assert!(
        (det - oracle).norm() < 1e-5,
        "rho2 det={det} oracle={oracle}"
    );
}

#[test]
fn no_kernel_mu_zero_is_uniform_diagonal() {
    let spec = nekrasov::NoSpec::new(Complex64::new(0.0, 0.0), 0.4, cr(1.3)).unwrap();
    let contour = ContourSpec::default();
    for xk in [-1i64, 0, 2] {
        let x = half(xk);
        let v = kernel::no_kernel(&spec, x, x, &contour).unwrap();
        let expect = kernel::uniform_kernel_diagonal(0.4, cr(1.3), x);
        assert!((v - expect).norm() < 1e-9, "x={x}");
        let off = kernel::no_kernel(&spec, x, x.shifted(1), &contour).unwrap();
        assert!(off.norm() < 1e-9);
    }
}

#[test]
fn limit_shape_reconstruction_uniform() {
    // ρ = (1 - v')/2 with ρ from the quadrature kernel at z = 1 reconstructs
    // v(u) = u + 2 ln(1 + e^{-u})
    let chain =
        bulk::BulkChain::new(vec![Specialization::Trivial], vec![Specialization::Trivial]).unwrap();
    let rho = |w: f64| -> f64 {
        bulk::bulk_kernel(&chain, cr(1.0), w, 1, 1, 0, 1e-12)
            .unwrap()
            .re
    };
    let upper = 40.0f64;
    for j in 0..10 {
        let u = -2.0 + 4.0 * j as f64 / 9.0;
        // v(u) = u + 2 ∫_u^∞ ρ(w) dw
        let integral = cylschur_core::quad::gl_integrate_auto(u, upper, 1e-11, |w| cr(rho(w)))
            .unwrap()
            .re;
        let v_num = u + 2.0 * integral;
        let v_closed = u + 2.0 * (1.0 + (-u).exp()).ln();
        assert!(
            (v_num - v_closed).abs() < 1e-8,
            "u={u} v_num={v_num} v_closed={v_closed}"
        );
    }
}

#[test]
fn deep_negative_site_rho_tends_to_one() {
    let spec = nekrasov::NoSpec::probability(0.6, 0.35, 1.0).unwrap();
    let rho = nekrasov::no_correlation_oracle(&spec, &[half(-16)], false, 20).unwrap();
    assert!((rho - cr(1.0)).norm() < 1e-4, "rho={rho}");
}

#[test]
fn partition_function_monotone_for_five_specs() {
    // |formula - oracle(M)| shrinks monotonically and ends below 1e-8
    let specs: Vec<(&str, process::ProcessSpec, u64)> = vec![
        (
            "uniform",
            process::ProcessSpec::uniform(1, 0.3, cr(1.0)).unwrap(),
            22,
        ),
        (
            "n1-single",
            process::ProcessSpec::new(
                0.3,
                cr(1.0),
                vec![Specialization::single(0.5)],
                vec![Specialization::single(0.5)],
            )
            .unwrap(),
            22,
        ),
        (
            "n2-mixed",
            process::ProcessSpec::new(
                0.3,
                cr(1.0),
                vec![Specialization::single(0.4), Specialization::Trivial],
                vec![Specialization::Trivial, Specialization::single(0.3)],
            )
            .unwrap(),
            22,
        ),
        (
            "n2-all-single",
            process::ProcessSpec::new(
                0.25,
                cr(1.0),
                vec![Specialization::single(0.3), Specialization::single(0.2)],
                vec![Specialization::single(0.25), Specialization::single(0.2)],
            )
            .unwrap(),
            20,
        ),
        (
            "n1-tp",
            process::ProcessSpec::new(
                0.3,
                cr(1.0),
                vec![Specialization::tp(&[0.3], &[0.2], 0.1)],
                vec![Specialization::tp(&[0.25], &[0.15], 0.1)],
            )
            .unwrap(),
            22,
        ),
    ];
    for (name, spec, deep) in specs {
        let formula = process::partition_function_formula(&spec).unwrap();
        let mut prev = f64::INFINITY;
        for m in [10, 14, 18, deep] {
            let gap = (process::partition_function_oracle(&spec, m).unwrap() - formula).norm();
            assert!(gap < prev, "{name}: gap grew at M={m}: {gap} vs {prev}");
            prev = gap;
        }
        assert!(prev < 1e-8, "{name}: final residual {prev}");
    }
}
