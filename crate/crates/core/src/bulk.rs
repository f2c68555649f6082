//! Bulk scaling limits: the translation-invariant kernels the finite-t
//! kernels converge to when t → 1 with positions scaled by `ln t⁻¹`.
//!
//! Families implemented here:
//! * the general unit-circle limit kernel of the periodic Schur process
//!   (self-adjoint chains), [`bulk_kernel`];
//! * the sine-kernel extension family on arcs, [`sine_extension_kernel`];
//! * cylindric partitions with fixed profile, over the curve `Γ_κ`,
//!   [`cylindric_bulk_kernel`];
//! * cylindric partitions with slowly growing period (arcs of `Γ_κ` cut at a
//!   solved saddle angle), [`cylindric_slow_kernel`];
//! * the corner kernels for intermediate period growth, with the `c ↔ γ`
//!   q-product dictionaries, [`corner_kernel`];
//! * the hook-measure bulk kernel and its closed-form density,
//!   [`no_bulk_kernel`], [`no_bulk_density`].
//!
//! All kernels depend on positions only through the displacement `d`.

use crate::error::{Error, Result};
use crate::qseries::{qpoch, Nome};
use crate::quad::{bisect, cr, gl_integrate_auto, logistic_recip};
use crate::symfunc::Specialization;
use num_complex::Complex64;
use std::f64::consts::PI;

/// A doubly-indexed chain of specializations for the limit kernel, with the
/// self-adjointness `A_n = conj(B_n)` the limit requires.
#[derive(Debug, Clone)]
pub struct BulkChain {
    a: Vec<Specialization>,
    b: Vec<Specialization>,
}

impl BulkChain {
    pub fn new(a: Vec<Specialization>, b: Vec<Specialization>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::config("chain lists must be nonempty, equal length"));
        }
        for n in 1..=120u32 {
            let an: Complex64 = a.iter().map(|s| s.scaled_power_sum(n)).sum();
            let bn: Complex64 = b.iter().map(|s| s.scaled_power_sum(n)).sum();
            if (an - bn.conj()).norm() > 1e-10 * (1.0 + an.norm()) {
                return Err(Error::domain(format!(
                    "self-adjointness A_n = conj(B_n) fails at n = {n}"
                )));
            }
        }
        Ok(BulkChain { a, b })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `Σ_n (A_n ζ^{-n} + B_n ζ^n) = Σ_k [ln H(a[k]; 1/ζ) + ln H(b[k]; ζ)]`.
    fn full_symbol(&self, zeta: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..self.a.len() {
            acc += self.a[k].log_h(zeta.inv())?;
            acc += self.b[k].log_h(zeta)?;
        }
        Ok(acc)
    }

    fn window_symbol(&self, lo: usize, hi: usize, zeta: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in lo + 1..=hi {
            acc += self.a[k - 1].log_h(zeta.inv())?;
            acc += self.b[k - 1].log_h(zeta)?;
        }
        Ok(acc)
    }
}

/// The unit-circle limit kernel `K^{(z,γ)}_{σ,τ}(d)` of the shift-mixed
/// process (`z = 1` gives the unmixed limit):
///
/// ```text
/// σ <= τ:  (1/2πi) ∮ exp(-Σ_{(σ,τ]}(a_n ζ^{-n} + b_n ζ^n))
///                  / (1 + z^{-1} e^{γ - S(ζ)}) ζ^{-d-1} dζ
/// σ > τ:  -(1/2πi) ∮ exp(+Σ_{(τ,σ]}(...)) / (1 + z e^{-γ + S(ζ)}) ζ^{-d-1} dζ
/// ```
pub fn bulk_kernel(
    chain: &BulkChain,
    z: Complex64,
    gamma: f64,
    sigma: usize,
    tau: usize,
    d: i64,
    tol: f64,
) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::domain("bulk kernel needs |arg z| < pi"));
    }
    if sigma > chain.len() || tau > chain.len() {
        return Err(Error::config("times outside the chain"));
    }
    let lnz = z.ln();
    let run = |phi: f64| -> Complex64 {
        let zeta = Complex64::from_polar(1.0, phi);
        let s = chain
            .full_symbol(zeta)
            .expect("unit circle is inside every window");
        let v = if sigma <= tau {
            let num = (-chain.window_symbol(sigma, tau, zeta).unwrap()).exp();
            num * logistic_recip(cr(gamma) - s - lnz)
        } else {
            let num = chain.window_symbol(tau, sigma, zeta).unwrap().exp();
            -num * logistic_recip(cr(-gamma) + s + lnz)
        };
        v * Complex64::from_polar(1.0, -(d as f64) * phi)
    };
    let v = gl_integrate_auto(-PI, PI, tol, run)?;
    Ok(v / cr(2.0 * PI))
}

/// Closed degenerate form for the trivial chain:
/// `δ_{0d} (1+z^{-1}e^γ)^{-1}` (σ <= τ) and `-δ_{0d} (1+z e^{-γ})^{-1}`.
pub fn bulk_kernel_trivial(z: Complex64, gamma: f64, forward: bool, d: i64) -> Complex64 {
    if d != 0 {
        return Complex64::new(0.0, 0.0);
    }
    if forward {
        logistic_recip(cr(gamma) - z.ln())
    } else {
        -logistic_recip(cr(-gamma) + z.ln())
    }
}

/// Global limit density `ρ^{(z)}(γ)` of the chain.
pub fn bulk_density(chain: &BulkChain, z: Complex64, gamma: f64, tol: f64) -> Result<f64> {
    Ok(bulk_kernel(chain, z, gamma, 1, 1, 0, tol)?.re)
}

/// Sine-kernel extension on arcs of the unit circle: chains of admissible
/// specializations indexed `1..=K`, times in `0..=K`, arc opening `c`.
/// Equal-time values are `sin(c d)/(π d)`.
pub fn sine_extension_kernel(
    a_chain: &[Specialization],
    b_chain: &[Specialization],
    c: f64,
    sigma: usize,
    tau: usize,
    d: i64,
    tol: f64,
) -> Result<Complex64> {
    if !(0.0 < c && c < PI) {
        return Err(Error::domain("need c in (0, pi)"));
    }
    if a_chain.len() != b_chain.len() || sigma > a_chain.len() || tau > a_chain.len() {
        return Err(Error::config("times outside the chain"));
    }
    for s in a_chain.iter().chain(b_chain.iter()) {
        if s.growth_radius() > 1.0 + 1e-12 {
            return Err(Error::domain(
                "inadmissible specialization: needs alpha, beta <= 1",
            ));
        }
    }
    let window = |lo: usize, hi: usize, zeta: Complex64| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in lo + 1..=hi {
            acc += a_chain[k - 1].log_h(zeta.inv())?;
            acc += b_chain[k - 1].log_h(zeta)?;
        }
        Ok(acc)
    };
    let value = if sigma <= tau {
        // arc from e^{-ic} to e^{ic} through 1
        gl_integrate_auto(-c, c, tol, |phi| {
            let zeta = Complex64::from_polar(1.0, phi);
            let w = window(sigma, tau, zeta)
                .map(|v| (-v).exp())
                .unwrap_or_else(|_| Complex64::new(0.0, 0.0)); // H⁻¹ vanishes at a pole of H
            w * Complex64::from_polar(1.0, -(d as f64) * phi)
        })?
    } else {
        // arc from e^{ic} to e^{-ic} through -1, with the leading minus
        -gl_integrate_auto(c, 2.0 * PI - c, tol, |phi| {
            let zeta = Complex64::from_polar(1.0, phi);
            let w = window(tau, sigma, zeta).unwrap().exp();
            w * Complex64::from_polar(1.0, -(d as f64) * phi)
        })?
    };
    Ok(value / cr(2.0 * PI))
}

/// `sin(cd)/(πd)`, with the `d = 0` value `c/π`.
pub fn discrete_sine(c: f64, d: i64) -> f64 {
    if d == 0 {
        c / PI
    } else {
        (c * d as f64).sin() / (PI * d as f64)
    }
}

/// The curve `Γ_κ`, parameterized by `φ ∈ (-π/(1+κ), π/(1+κ))`.
#[derive(Debug, Clone, Copy)]
pub struct GammaCurve {
    pub kappa: f64,
}

impl GammaCurve {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::config("slope kappa must be positive"));
        }
        Ok(GammaCurve { kappa })
    }

    /// Opening half-angle `π/(1+κ)` of the parameter interval.
    pub fn phi_max(&self) -> f64 {
        PI / (1.0 + self.kappa)
    }

    /// `ζ(φ) = 1 - sin((1+κ)φ)/sin(κφ) e^{iφ}`.
    pub fn point(&self, phi: f64) -> Complex64 {
        cr(1.0) - cr(self.modulus_factor(phi)) * Complex64::from_polar(1.0, phi)
    }

    /// `q(φ) = sin((1+κ)φ)/sin(κφ)`, with the even small-angle limit.
    fn modulus_factor(&self, phi: f64) -> f64 {
        let k = self.kappa;
        if phi.abs() < 1e-7 {
            let a = 1.0 + k;
            (a / k) * (1.0 - (a * a - k * k) * phi * phi / 6.0)
        } else {
            ((1.0 + k) * phi).sin() / (k * phi).sin()
        }
    }

    /// `dζ/dφ`.
    pub fn derivative(&self, phi: f64) -> Complex64 {
        let k = self.kappa;
        let q = self.modulus_factor(phi);
        let qp = if phi.abs() < 1e-7 {
            let a = 1.0 + k;
            -(a / k) * (a * a - k * k) * phi / 3.0
        } else {
            let (s1, c1) = (((1.0 + k) * phi).sin(), ((1.0 + k) * phi).cos());
            let (sk, ck) = ((k * phi).sin(), (k * phi).cos());
            ((1.0 + k) * c1 * sk - k * s1 * ck) / (sk * sk)
        };
        -(cr(qp) + crate::quad::I * cr(q)) * Complex64::from_polar(1.0, phi)
    }

    /// `f_κ` restricted to the curve (real there):
    /// `κ ln(sin(κ+1)φ / sin κφ) + ln(sin(κ+1)φ / sin φ)`.
    pub fn f_on_curve(&self, phi: f64) -> f64 {
        let k = self.kappa;
        if phi.abs() < 1e-9 {
            return k * ((1.0 + k) / k).ln() + (1.0 + k).ln();
        }
        let s1 = ((1.0 + k) * phi).sin();
        k * (s1 / (k * phi).sin()).ln() + (s1 / phi.sin()).ln()
    }
}

/// `f_κ(ζ) = κ ln(1-ζ) + ln(1-ζ⁻¹)`, principal branches, holomorphic off
/// `R_{>=0}`.
pub fn f_kappa(kappa: f64, zeta: Complex64) -> Result<Complex64> {
    if zeta.im == 0.0 && zeta.re >= 0.0 {
        return Err(Error::domain("f_kappa: point on the cut R_{>=0}"));
    }
    Ok(cr(kappa) * (cr(1.0) - zeta).ln() + (cr(1.0) - zeta.inv()).ln())
}

/// The finite-profile bulk kernel of cylindric partitions (integral over
/// `Γ_κ`); `profile` supplies `A(σ,τ]`, `B(σ,τ]`, `d`, `l`.
pub fn cylindric_bulk_kernel(
    profile: &crate::cylindric::Profile,
    gamma: f64,
    sigma: usize,
    tau: usize,
    disp: i64,
    tol: f64,
) -> Result<Complex64> {
    let n = profile.period();
    if sigma < 1 || sigma > n || tau < 1 || tau > n {
        return Err(Error::config("times outside 1..=N"));
    }
    let d = profile.d() as i32;
    let l = profile.l() as i32;
    let curve = GammaCurve::new(profile.slope())?;
    let phi_max = curve.phi_max();
    let (b_delta, a_delta, forward) = if sigma <= tau {
        (
            profile.b_between(sigma, tau) as i32,
            profile.a_between(sigma, tau) as i32,
            true,
        )
    } else {
        (
            profile.b_between(tau, sigma) as i32,
            profile.a_between(tau, sigma) as i32,
            false,
        )
    };
    let integrand = |phi: f64| -> Complex64 {
        let zeta = curve.point(phi);
        let dzeta = curve.derivative(phi);
        let one_m = cr(1.0) - zeta;
        let one_m_inv = cr(1.0) - zeta.inv();
        let w = gamma + profile.d() as f64 * curve.f_on_curve(phi); // ln X, real on Γ_κ
        let v = if forward {
            one_m.powi(b_delta) * one_m_inv.powi(a_delta) * logistic_recip(cr(w))
        } else {
            // -X/(1+X) (1-ζ)^{-BΔ}(1-ζ⁻¹)^{-AΔ}, rewritten pole-free:
            -cr(gamma.exp())
                * one_m.powi(l - b_delta)
                * one_m_inv.powi(d - a_delta)
                * logistic_recip(cr(w))
        };
        v * zeta.powi(-(disp as i32) - 1) * dzeta
    };
    let v = gl_integrate_auto(-phi_max, phi_max, tol, integrand)?;
    Ok(v / (cr(2.0 * PI) * crate::quad::I))
}

/// `γ₀(κ) = -ln(1+κ)/(1+κ) - ln(1+κ⁻¹)/(1+κ⁻¹)`: below this the slow-growth
/// kernel degenerates to the identity.
pub fn gamma0(kappa: f64) -> f64 {
    -(1.0 + kappa).ln() / (1.0 + kappa) - (1.0 + 1.0 / kappa).ln() / (1.0 + 1.0 / kappa)
}

/// Solves `κ ln(sin(κ+1)φ/sin κφ) + ln(sin(κ+1)φ/sin φ) = -(1+κ)γ` for
/// `φ ∈ (0, π/(1+κ))` by bisection (the left side is strictly decreasing).
pub fn solve_phi(kappa: f64, gamma: f64) -> Result<f64> {
    if gamma <= gamma0(kappa) {
        return Err(Error::domain(format!(
            "no saddle angle: gamma <= gamma0 = {}",
            gamma0(kappa)
        )));
    }
    let curve = GammaCurve::new(kappa)?;
    let target = -(1.0 + kappa) * gamma;
    let phi_max = curve.phi_max();
    bisect(
        1e-300f64.max(1e-14),
        phi_max * (1.0 - 1e-14),
        1e-12,
        |phi| curve.f_on_curve(phi) - target,
    )
}

/// Slow-growth cylindric kernel (Theorem-6.3-type): arcs of `Γ_κ` cut at the
/// saddle angle. `a_delta = A(σ,τ]`, `b_delta = B(σ,τ]` for `σ <= τ`; pass
/// `forward = false` with the `(τ,σ]` windows for `σ > τ`.
pub fn cylindric_slow_kernel(
    kappa: f64,
    gamma: f64,
    forward: bool,
    a_delta: u32,
    b_delta: u32,
    disp: i64,
    tol: f64,
) -> Result<Complex64> {
    if gamma <= gamma0(kappa) {
        // densely packed phase: the identity kernel at equal time, zero off it
        return Ok(if forward && disp == 0 && a_delta == 0 && b_delta == 0 {
            cr(1.0)
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    let curve = GammaCurve::new(kappa)?;
    let phi_star = solve_phi(kappa, gamma)?;
    let phi_max = curve.phi_max();
    let piece = |lo: f64, hi: f64, sign_powers: i32| -> Result<Complex64> {
        gl_integrate_auto(lo, hi, tol, |phi| {
            let zeta = curve.point(phi);
            let dzeta = curve.derivative(phi);
            let one_m = cr(1.0) - zeta;
            let one_m_inv = cr(1.0) - zeta.inv();
            one_m.powi(sign_powers * b_delta as i32)
                * one_m_inv.powi(sign_powers * a_delta as i32)
                * zeta.powi(-(disp as i32) - 1)
                * dzeta
        })
    };
    let v = if forward {
        // from ζ(φ*) through the corner ζ = 1 to the conjugate point
        piece(phi_star, phi_max, 1)? + piece(-phi_max, -phi_star, 1)?
    } else {
        // through -1/κ, with inverted window factors and the leading minus
        -piece(-phi_star, phi_star, -1)?
    };
    Ok(v / (cr(2.0 * PI) * crate::quad::I))
}

/// Limit density of the slow-growth regime: `1 - (1+κ)φ(γ)/π`, and 1 below
/// `γ₀`.
pub fn cylindric_slow_density(kappa: f64, gamma: f64) -> Result<f64> {
    if gamma <= gamma0(kappa) {
        return Ok(1.0);
    }
    Ok(1.0 - (1.0 + kappa) * solve_phi(kappa, gamma)? / PI)
}

/// Which corner of the two-block profile a bulk window sits at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    /// Near the largest diagonal (case i): `γ = 2 ln |(e^{ic}√t;t)_∞ / (e^{ic};t)_∞|`.
    Outer,
    /// Near the smallest diagonal (case ii): `γ = 2 ln |(e^{ic}t;t)_∞ / (e^{ic}√t;t)_∞|`.
    Inner,
}

/// The `c ↦ γ` dictionary of the corner kernels.
pub fn corner_gammas(t: f64, c: f64, corner: Corner) -> Result<f64> {
    if !(0.0 < t && t < 1.0) {
        return Err(Error::config("t must lie in (0,1)"));
    }
    if !(0.0 < c && c < PI) {
        return Err(Error::domain("c must lie in (0, pi)"));
    }
    let nome = Nome::real(t)?;
    let zc = Complex64::from_polar(1.0, c);
    let st = t.sqrt();
    let ratio = match corner {
        Corner::Outer => qpoch(zc * cr(st), &nome) / qpoch(zc, &nome),
        Corner::Inner => qpoch(zc * cr(t), &nome) / qpoch(zc * cr(st), &nome),
    };
    Ok(2.0 * ratio.norm().ln())
}

/// Range `(γ_min, γ_max)` of [`corner_gammas`] over `c ∈ (0, π)`.
pub fn corner_gamma_range(t: f64, corner: Corner) -> Result<(f64, f64)> {
    let nome = Nome::real(t)?;
    let st = t.sqrt();
    match corner {
        Corner::Outer => {
            // c → π: 2 ln (-√t;t)_∞/(-1;t)_∞; c → 0: +∞
            let min = 2.0 * (qpoch(cr(-st), &nome) / qpoch(cr(-1.0), &nome)).norm().ln();
            Ok((min, f64::INFINITY))
        }
        Corner::Inner => {
            let min = 2.0 * (qpoch(cr(-t), &nome) / qpoch(cr(-st), &nome)).norm().ln();
            let max = 2.0 * (qpoch(cr(t), &nome) / qpoch(cr(st), &nome)).norm().ln();
            Ok((min, max))
        }
    }
}

/// Inverts [`corner_gammas`] by bisection (strictly decreasing in `c`).
pub fn corner_solve_c(t: f64, gamma: f64, corner: Corner) -> Result<f64> {
    let (gmin, gmax) = corner_gamma_range(t, corner)?;
    if gamma <= gmin || gamma >= gmax {
        return Err(Error::domain(format!(
            "gamma = {gamma} outside the corner range ({gmin}, {gmax})"
        )));
    }
    bisect(1e-12, PI - 1e-12, 1e-13, |c| {
        corner_gammas(t, c, corner).expect("c in range") - gamma
    })
}

/// Corner kernel: the same arc integrand as the slow-growth kernel, over arcs
/// of the unit circle cut at `c(γ)`. Out-of-range `γ` gives the exact
/// degenerate kernels.
#[allow(clippy::too_many_arguments)]
pub fn corner_kernel(
    t: f64,
    gamma: f64,
    corner: Corner,
    forward: bool,
    a_delta: u32,
    b_delta: u32,
    disp: i64,
    tol: f64,
) -> Result<Complex64> {
    let (gmin, gmax) = corner_gamma_range(t, corner)?;
    if gamma <= gmin {
        return Ok(if forward && disp == 0 && a_delta == 0 && b_delta == 0 {
            cr(1.0)
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    if gamma >= gmax {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let c = corner_solve_c(t, gamma, corner)?;
    unit_arc_kernel(c, forward, a_delta, b_delta, disp, tol)
}

/// `(1/2πi) ∫ (1-ζ)^{±BΔ} (1-ζ⁻¹)^{±AΔ} ζ^{-disp-1} dζ` over the arc through
/// 1 (`forward`) or through -1 (backward, with the leading minus).
pub fn unit_arc_kernel(
    c: f64,
    forward: bool,
    a_delta: u32,
    b_delta: u32,
    disp: i64,
    tol: f64,
) -> Result<Complex64> {
    let piece = |lo: f64, hi: f64, sgn: i32, lead: f64| -> Result<Complex64> {
        let v = gl_integrate_auto(lo, hi, tol, |phi| {
            let zeta = Complex64::from_polar(1.0, phi);
            let one_m = cr(1.0) - zeta;
            let one_m_inv = cr(1.0) - zeta.inv();
            one_m.powi(sgn * b_delta as i32)
                * one_m_inv.powi(sgn * a_delta as i32)
                * Complex64::from_polar(1.0, -(disp as f64) * phi)
        })?;
        Ok(cr(lead) * v / cr(2.0 * PI))
    };
    if forward {
        piece(-c, c, 1, 1.0)
    } else {
        piece(c, 2.0 * PI - c, -1, -1.0)
    }
}

/// The Theorem-6.3-type kernel at `κ = 1` evaluated through the unit-circle
/// arc path with `c = π - 2φ(γ)`; the periodic-profile intermediate-growth
/// limit coincides with this kernel.
pub fn periodic_profile_limit_kernel(
    gamma: f64,
    forward: bool,
    a_delta: u32,
    b_delta: u32,
    disp: i64,
    tol: f64,
) -> Result<Complex64> {
    if gamma <= gamma0(1.0) {
        return Ok(if forward && disp == 0 && a_delta == 0 && b_delta == 0 {
            cr(1.0)
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    let phi = solve_phi(1.0, gamma)?;
    unit_arc_kernel(PI - 2.0 * phi, forward, a_delta, b_delta, disp, tol)
}

/// Stable `ln(e^a + e^b)`.
fn log_sum_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    m + (-(a - b).abs()).exp().ln_1p()
}

/// Bulk kernel of the shift-mixed hook measure (`μ = i μ0`, `z > 0`): the
/// circle integrand uses the piecewise phase form
/// `(1-ζ)^{-iμ0}(1-ζ^{-1})^{iμ0} = e^{μ0(arg ζ ∓ π)}`.
pub fn no_bulk_kernel(mu0: f64, z: f64, gamma: f64, disp: i64, tol: f64) -> Result<Complex64> {
    if z <= 0.0 {
        return Err(Error::domain("need z > 0"));
    }
    if mu0 == 0.0 {
        // analytic limit: the uniform degenerate kernel
        return Ok(if disp == 0 {
            cr(1.0 / (1.0 + gamma.exp() / z))
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    let lnz = z.ln();
    let half = |lo: f64, hi: f64, sign: f64| -> Result<Complex64> {
        gl_integrate_auto(lo, hi, tol, |theta| {
            let w = gamma - lnz + mu0 * (theta + sign * PI);
            logistic_recip(cr(w)) * Complex64::from_polar(1.0, -(disp as f64) * theta)
        })
    };
    // jump at θ = 0: e^{μ0(θ-π)} above the axis, e^{μ0(θ+π)} below
    let v = half(0.0, PI, -1.0)? + half(-PI, 0.0, 1.0)?;
    Ok(v / cr(2.0 * PI))
}

/// Closed-form density of the shift-mixed hook measure:
/// `(1/2πμ0) ln((e^γ + z e^{πμ0}) / (e^γ + z e^{-πμ0}))`.
pub fn no_bulk_density(mu0: f64, z: f64, gamma: f64) -> Result<f64> {
    if z <= 0.0 {
        return Err(Error::domain("need z > 0"));
    }
    if mu0 == 0.0 {
        return Ok(1.0 / (1.0 + gamma.exp() / z));
    }
    let lnz = z.ln();
    let num = log_sum_exp(gamma, lnz + PI * mu0);
    let den = log_sum_exp(gamma, lnz - PI * mu0);
    Ok((num - den) / (2.0 * PI * mu0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::c;

    fn drift_chain(n: usize, g: f64) -> BulkChain {
        BulkChain::new(
            vec![Specialization::tp(&[], &[], g); n],
            vec![Specialization::tp(&[], &[], g); n],
        )
        .unwrap()
    }

    #[test]
    fn self_adjointness_enforced() {
        assert!(BulkChain::new(
            vec![Specialization::single(0.5)],
            vec![Specialization::single(0.3)],
        )
        .is_err());
        assert!(BulkChain::new(
            vec![Specialization::single(0.5)],
            vec![Specialization::single(0.5)],
        )
        .is_ok());
    }

    #[test]
    fn trivial_chain_degenerates() {
        let chain = BulkChain::new(
            vec![Specialization::Trivial; 2],
            vec![Specialization::Trivial; 2],
        )
        .unwrap();
        for (z, gamma) in [(c(1.0, 0.0), 0.3), (c(1.3, 0.0), -0.7)] {
            for d in [0i64, 1, 2] {
                let v = bulk_kernel(&chain, z, gamma, 1, 2, d, 1e-11).unwrap();
                let expect = bulk_kernel_trivial(z, gamma, true, d);
                assert!((v - expect).norm() < 1e-10, "d={d}");
                let v = bulk_kernel(&chain, z, gamma, 2, 1, d, 1e-11).unwrap();
                let expect = bulk_kernel_trivial(z, gamma, false, d);
                assert!((v - expect).norm() < 1e-10, "d={d} backward");
            }
        }
    }

    #[test]
    fn example_kernel_sine_degeneration() {
        // single drift-ϑ slot: integrand 1/(1+e^{γ-2ϑ Re ζ}); for ϑ → ∞ with
        // γ/ϑ → Θ, |Θ| < 2 the kernel tends to sin(arccos(Θ/2) d)/(π d)
        let theta_big = 400.0;
        let cap_theta = 1.0;
        let chain = drift_chain(1, theta_big);
        let gamma = cap_theta * theta_big;
        let c_lim = (cap_theta / 2.0f64).acos();
        for d in [1i64, 2, 3] {
            let v = bulk_kernel(&chain, c(1.0, 0.0), gamma, 1, 1, d, 1e-10).unwrap();
            let expect = discrete_sine(c_lim, d);
            assert!(
                (v - cr(expect)).norm() < 1e-2,
                "d={d} v={v} expect={expect}"
            );
        }
    }

    #[test]
    fn sine_extension_equal_time() {
        let a = vec![Specialization::tp(&[], &[], 0.4); 3];
        let b = vec![Specialization::tp(&[], &[], 0.4); 3];
        let cc = 1.1;
        for d in 0..=5i64 {
            let v = sine_extension_kernel(&a, &b, cc, 2, 2, d, 1e-12).unwrap();
            assert!((v - cr(discrete_sine(cc, d))).norm() < 1e-10, "d={d} v={v}");
        }
    }

    #[test]
    fn sine_extension_incomplete_beta() {
        // trivial a, H(b;u) = (1-u)^{-1}: integrand (1-ζ)^{τ-σ}
        let a = vec![Specialization::Trivial; 3];
        let b = vec![Specialization::single(1.0); 3];
        let cc = 1.3;
        let v = sine_extension_kernel(&a, &b, cc, 1, 3, 1, 1e-11).unwrap();
        // direct: (1/2π) ∫ (1-e^{iφ})² e^{-iφ} dφ over (-c, c)
        let direct = crate::quad::gl_integrate(-cc, cc, 64, 32, |phi| {
            let z = Complex64::from_polar(1.0, phi);
            (cr(1.0) - z).powi(2) * Complex64::from_polar(1.0, -phi)
        }) / cr(2.0 * PI);
        assert!((v - direct).norm() < 1e-10, "v={v} direct={direct}");
        // inadmissible parameters are rejected
        let bad = vec![Specialization::single(1.2); 3];
        assert!(sine_extension_kernel(&a, &bad, cc, 1, 2, 0, 1e-10).is_err());
    }

    #[test]
    fn sine_extension_matches_bulk_construction() {
        // doubled chain with a steep threshold slot: the bulk kernel of the
        // construction approaches the arc kernel at matched c
        let g = 0.3;
        let nn = 2usize;
        let cc = 1.2f64;
        let a_small: Vec<Specialization> = vec![Specialization::tp(&[], &[], g); nn];
        let b_small = a_small.clone();
        let big_m = 3000.0;
        let mut a_big = a_small.clone();
        let mut b_big = b_small.clone();
        // mirror slots then the threshold slot
        a_big.extend(b_small.iter().cloned());
        b_big.extend(a_small.iter().cloned());
        a_big.push(Specialization::tp(&[], &[], big_m));
        b_big.push(Specialization::tp(&[], &[], big_m));
        let chain = BulkChain::new(a_big, b_big).unwrap();
        // place the logistic crossing exactly at Re ζ = cos c
        let gamma = 2.0 * (2.0 * nn as f64 * g + big_m) * cc.cos();
        for (sigma, tau, d) in [(1usize, 2usize, 0i64), (1, 2, 1), (2, 1, 1)] {
            let lhs = sine_extension_kernel(&a_small, &b_small, cc, sigma, tau, d, 1e-9).unwrap();
            let rhs = bulk_kernel(&chain, c(1.0, 0.0), gamma, sigma, tau, d, 1e-9).unwrap();
            assert!(
                (lhs - rhs).norm() < 1e-6,
                "sigma={sigma} tau={tau} d={d} arc={lhs} bulk={rhs}"
            );
        }
    }

    #[test]
    fn gamma_curve_geometry() {
        // κ = 1: the unit circle
        let curve = GammaCurve::new(1.0).unwrap();
        for phi in [-1.2, -0.3, 0.0, 0.7, 1.4] {
            assert!((curve.point(phi).norm() - 1.0).abs() < 1e-12, "phi={phi}");
        }
        // passes through -1/κ and is conjugation-symmetric
        for kappa in [0.5, 1.0, 2.5] {
            let curve = GammaCurve::new(kappa).unwrap();
            assert!((curve.point(0.0) - cr(-1.0 / kappa)).norm() < 1e-12);
            let p = curve.point(0.4);
            let q = curve.point(-0.4);
            assert!((p.conj() - q).norm() < 1e-12);
            // numerical derivative check
            let h = 1e-6;
            let numd = (curve.point(0.4 + h) - curve.point(0.4 - h)) / cr(2.0 * h);
            assert!((numd - curve.derivative(0.4)).norm() < 1e-7);
        }
    }

    #[test]
    fn f_kappa_values() {
        // maximum on the curve at ζ = -1/κ
        for kappa in [0.5f64, 1.0, 2.0] {
            let expect = (1.0 + kappa).ln() + kappa * (1.0 + 1.0 / kappa).ln();
            let v = f_kappa(kappa, cr(-1.0 / kappa)).unwrap();
            assert!((v - cr(expect)).norm() < 1e-13);
            let curve = GammaCurve::new(kappa).unwrap();
            assert!((curve.f_on_curve(0.0) - expect).abs() < 1e-12);
            // f is real along the curve and decreasing away from 0
            let mut prev = f64::INFINITY;
            for j in 0..6 {
                let phi = curve.phi_max() * (0.05 + 0.15 * j as f64);
                let on = curve.f_on_curve(phi);
                let direct = f_kappa(kappa, curve.point(phi)).unwrap();
                assert!((direct - cr(on)).norm() < 1e-10, "phi={phi}");
                assert!(on < prev);
                prev = on;
            }
        }
        assert!((f_kappa(1.0, cr(-1.0)).unwrap() - cr(2.0 * 2.0f64.ln())).norm() < 1e-14);
        assert!(f_kappa(1.0, cr(0.5)).is_err());
    }

    #[test]
    fn cylindric_bulk_density_d1_l1() {
        let prof = crate::cylindric::staircase_profile(1);
        for gamma in [-1.0, 0.0, 1.0] {
            let v = cylindric_bulk_kernel(&prof, gamma, 1, 1, 0, 1e-11).unwrap();
            let expect = 1.0 / (1.0 + 4.0 * gamma.exp()).sqrt();
            assert!(
                (v - cr(expect)).norm() < 1e-8,
                "gamma={gamma} v={v} expect={expect}"
            );
        }
    }

    #[test]
    fn cylindric_bulk_density_profile_invariances() {
        // independent of τ, and equal for distinct words with the same (d,l)
        let prof = crate::cylindric::paper_n7_profile();
        let base = cylindric_bulk_kernel(&prof, 0.3, 1, 1, 0, 1e-11).unwrap();
        for tau in 2..=7usize {
            let v = cylindric_bulk_kernel(&prof, 0.3, tau, tau, 0, 1e-11).unwrap();
            assert!((v - base).norm() < 1e-9);
        }
        let p1 = crate::cylindric::Profile::new(vec![1, 0, 1, 0], 2).unwrap();
        let p2 = crate::cylindric::Profile::new(vec![1, 1, 0, 0], 3).unwrap();
        let v1 = cylindric_bulk_kernel(&p1, -0.4, 2, 2, 0, 1e-11).unwrap();
        let v2 = cylindric_bulk_kernel(&p2, -0.4, 1, 1, 0, 1e-11).unwrap();
        assert!((v1 - v2).norm() < 1e-10);
    }

    #[test]
    fn slow_kernel_k1_values() {
        // κ = 1, γ = 0: φ = π/3 and density 1/3
        let phi = solve_phi(1.0, 0.0).unwrap();
        assert!((phi - PI / 3.0).abs() < 1e-11);
        assert!((cylindric_slow_density(1.0, 0.0).unwrap() - 1.0 / 3.0).abs() < 1e-10);
        assert!((gamma0(1.0) + 2.0f64.ln()).abs() < 1e-14);
        // numeric d=0 kernel equals the density formula
        for (kappa, gamma) in [(1.0, 0.0), (0.6, 0.2), (2.0, -0.1)] {
            let v = cylindric_slow_kernel(kappa, gamma, true, 0, 0, 0, 1e-11).unwrap();
            let rho = cylindric_slow_density(kappa, gamma).unwrap();
            assert!(
                (v - cr(rho)).norm() < 1e-10,
                "kappa={kappa} gamma={gamma} v={v} rho={rho}"
            );
        }
        // degenerate regime
        let v = cylindric_slow_kernel(1.0, -1.0, true, 0, 0, 0, 1e-11).unwrap();
        assert!((v - cr(1.0)).norm() == 0.0);
        assert!(
            cylindric_slow_kernel(1.0, -1.0, true, 0, 0, 2, 1e-11)
                .unwrap()
                .norm()
                == 0.0
        );
    }

    #[test]
    fn slow_kernel_equal_time_is_sine() {
        // Comment-4 closed form: ρ^{-d} sin(d(π-(1+κ)φ))/(πd) with
        // ρ = sin φ / sin κφ at the saddle
        for (kappa, gamma) in [(1.0, 0.1), (1.7, 0.0)] {
            let phi = solve_phi(kappa, gamma).unwrap();
            let rho_mod = phi.sin() / (kappa * phi).sin();
            for d in 1..=3i64 {
                let v = cylindric_slow_kernel(kappa, gamma, true, 0, 0, d, 1e-11).unwrap();
                let expect = rho_mod.powi(-d as i32)
                    * ((PI - (1.0 + kappa) * phi) * d as f64).sin()
                    / (PI * d as f64);
                assert!(
                    (v - cr(expect)).norm() < 1e-9,
                    "kappa={kappa} d={d} v={v} expect={expect}"
                );
            }
        }
    }

    #[test]
    fn thm62_approaches_thm63_along_growing_period() {
        // staircase profiles, γ·N substitution, N ∈ {4, 8, 16}
        let gamma_hat = 0.05;
        let slow = cylindric_slow_kernel(1.0, gamma_hat, true, 0, 0, 1, 1e-10).unwrap();
        let mut prev = f64::INFINITY;
        for half in [2usize, 4, 8] {
            let prof = crate::cylindric::staircase_profile(half);
            let n = 2 * half;
            let v = cylindric_bulk_kernel(&prof, gamma_hat * n as f64, 1, 1, 1, 1e-10).unwrap();
            let gap = (v - slow).norm();
            assert!(gap < prev, "N={n} gap={gap} prev={prev}");
            prev = gap;
        }
    }

    #[test]
    fn corner_dictionary_roundtrip() {
        let t = 0.4;
        for corner in [Corner::Outer, Corner::Inner] {
            let g = corner_gammas(t, 1.0, corner).unwrap();
            let c_back = corner_solve_c(t, g, corner).unwrap();
            assert!((c_back - 1.0).abs() < 1e-10, "{corner:?}");
        }
        // γ₁^min is the c → π limit
        let (gmin, _) = corner_gamma_range(t, Corner::Outer).unwrap();
        let near = corner_gammas(t, PI - 1e-6, Corner::Outer).unwrap();
        assert!((near - gmin).abs() < 1e-5);
        // strictly decreasing in c
        let mut prev = f64::INFINITY;
        for k in 1..8 {
            let g = corner_gammas(t, k as f64 * PI / 8.0, Corner::Inner).unwrap();
            assert!(g < prev);
            prev = g;
        }
    }

    #[test]
    fn corner_small_t_matches_plane_partition_section() {
        // t → 0, outer: c(γ) → arccos(1 - e^{-γ}/2)
        let c_val = corner_solve_c(1e-4, 0.0, Corner::Outer).unwrap();
        let expect = (1.0f64 - 0.5).acos();
        assert!((c_val - expect).abs() < 1e-2, "c={c_val} expect={expect}");
    }

    #[test]
    fn corner_degenerate_regimes() {
        let t = 0.4;
        let (gmin, gmax) = corner_gamma_range(t, Corner::Inner).unwrap();
        let v = corner_kernel(t, gmin - 0.5, Corner::Inner, true, 0, 0, 0, 1e-10).unwrap();
        assert!((v - cr(1.0)).norm() == 0.0);
        let v = corner_kernel(t, gmax + 0.5, Corner::Inner, true, 0, 0, 0, 1e-10).unwrap();
        assert!(v.norm() == 0.0);
    }

    #[test]
    fn periodic_profile_limit_matches_slow_kernel() {
        // two independently coded paths for the κ = 1 kernel
        for gamma in [-0.3, 0.0, 0.4] {
            for d in 0..=2i64 {
                let a = periodic_profile_limit_kernel(gamma, true, 1, 1, d, 1e-10).unwrap();
                let b = cylindric_slow_kernel(1.0, gamma, true, 1, 1, d, 1e-10).unwrap();
                assert!((a - b).norm() < 1e-6, "gamma={gamma} d={d} a={a} b={b}");
                let a = periodic_profile_limit_kernel(gamma, false, 1, 0, d, 1e-10).unwrap();
                let b = cylindric_slow_kernel(1.0, gamma, false, 1, 0, d, 1e-10).unwrap();
                assert!((a - b).norm() < 1e-6, "backward gamma={gamma} d={d}");
            }
        }
    }

    #[test]
    fn no_bulk_density_matches_kernel() {
        for gamma in [-1.0, 0.0, 1.0] {
            let v = no_bulk_kernel(0.8, 1.0, gamma, 0, 1e-11).unwrap();
            let rho = no_bulk_density(0.8, 1.0, gamma).unwrap();
            assert!((v - cr(rho)).norm() < 1e-8, "gamma={gamma} v={v} rho={rho}");
        }
        // μ0 = 0 limit
        assert!(
            (no_bulk_density(0.0, 1.0, 0.3).unwrap() - 1.0 / (1.0 + 0.3f64.exp())).abs() < 1e-15
        );
    }

    #[test]
    fn no_bulk_transpose_symmetry() {
        for d in [-2i64, 1, 3] {
            let a = no_bulk_kernel(-0.7, 1.0, 0.2, d, 1e-11).unwrap();
            let b = no_bulk_kernel(0.7, 1.0, 0.2, -d, 1e-11).unwrap();
            assert!((a - b).norm() < 1e-10, "d={d}");
        }
    }

    #[test]
    fn no_bulk_sine_degeneration() {
        // μ0 → ∞ with γ/μ0 → Θ̂: |K| → sin((π-Θ̂)d/2)/(πd)
        let mu0 = 200.0;
        let theta_hat = PI / 2.0;
        for d in [1i64, 2] {
            let v = no_bulk_kernel(mu0, 1.0, theta_hat * mu0, d, 1e-10).unwrap();
            let expect = ((PI - theta_hat) * d as f64 / 2.0).sin() / (PI * d as f64);
            assert!(
                (v.norm() - expect).abs() < 1e-2,
                "d={d} |v|={} expect={expect}",
                v.norm()
            );
        }
    }

    #[test]
    fn densities_stay_in_unit_interval() {
        let prof = crate::cylindric::staircase_profile(1);
        let chain = drift_chain(1, 0.7);
        let t = 0.4;
        for j in 0..50 {
            let gamma = -3.0 + 6.0 * j as f64 / 49.0;
            let rho = cylindric_slow_density(1.4, gamma).unwrap();
            assert!((0.0..=1.0).contains(&rho), "slow gamma={gamma} rho={rho}");
            let rho = no_bulk_density(0.8, 1.0, gamma).unwrap();
            assert!((0.0..=1.0).contains(&rho), "no gamma={gamma}");
            let rho = cylindric_bulk_kernel(&prof, gamma, 1, 1, 0, 1e-9)
                .unwrap()
                .re;
            assert!((-1e-9..=1.0 + 1e-9).contains(&rho), "cyl gamma={gamma}");
            let rho = bulk_density(&chain, c(1.0, 0.0), gamma, 1e-9).unwrap();
            assert!((-1e-9..=1.0 + 1e-9).contains(&rho), "chain gamma={gamma}");
            let (gmin, gmax) = corner_gamma_range(t, Corner::Inner).unwrap();
            let rho = if gamma <= gmin {
                1.0
            } else if gamma >= gmax {
                0.0
            } else {
                corner_solve_c(t, gamma, Corner::Inner).unwrap() / PI
            };
            assert!((0.0..=1.0).contains(&rho), "corner gamma={gamma}");
        }
    }
}
