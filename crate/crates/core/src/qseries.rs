//! Jacobi theta functions, q-Pochhammer products, the Ramanujan bilateral
//! summation in closed form, the Frobenius theta determinant, and the
//! dilogarithm.
//!
//! Conventions: `(a;t)_∞ = Π_{n>=0} (1 - a t^n)`,
//! `θ₃(z;t) = Σ_S z^S t^{S²/2}`, and
//! `θ₁(x;t) = Σ_n (-1)^n t^{n(n+1)/2} x^{n+1/2}`.
//!
//! Half-integer powers are systematically avoided in anything that feeds a
//! quadrature: [`theta1_reduced`] is `θ₁(x;t)·x^{-1/2}`, which is
//! single-valued, and callers reassemble integer powers themselves.

use crate::error::{Error, Result};
use crate::quad::cr;
use num_complex::Complex64;
use std::f64::consts::PI;

/// A nome `t` with `|t| < 1`, plus the tolerance used by truncations that
/// have no a-priori closed form.
#[derive(Debug, Clone, Copy)]
pub struct Nome {
    t: Complex64,
    tol: f64,
}

impl Nome {
    pub fn new(t: Complex64) -> Result<Self> {
        Self::with_tolerance(t, 1e-14)
    }

    pub fn real(t: f64) -> Result<Self> {
        Self::new(cr(t))
    }

    pub fn with_tolerance(t: Complex64, tol: f64) -> Result<Self> {
        if t.norm() >= 1.0 {
            return Err(Error::domain(format!(
                "nome must satisfy |t| < 1, got |t| = {}",
                t.norm()
            )));
        }
        if tol <= 0.0 {
            return Err(Error::config("tolerance must be positive"));
        }
        Ok(Nome { t, tol })
    }

    pub fn t(&self) -> Complex64 {
        self.t
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn sqrt_t(&self) -> Complex64 {
        self.t.sqrt()
    }
}

/// `(a;t)_∞`. The product is truncated once `|t|^n max(|a|,1) < 1e-17`, which
/// puts the tail below double-precision noise.
pub fn qpoch(a: Complex64, nome: &Nome) -> Complex64 {
    let t = nome.t();
    let mut prod = cr(1.0);
    let mut atn = a;
    let scale = a.norm().max(1.0);
    let tn = t.norm();
    let mut bound = scale;
    for _ in 0..5_000_000 {
        if bound < 1e-17 {
            break;
        }
        prod *= cr(1.0) - atn;
        atn *= t;
        bound *= tn;
    }
    prod
}

/// `(t;t)_∞`, the Euler function.
pub fn euler_product(nome: &Nome) -> Complex64 {
    qpoch(nome.t(), nome)
}

/// `θ₃(z;t)`. For real nomes above 0.45 the triple product is used: near
/// the theta zeros the bilateral sum cancels catastrophically (the value is
/// `~e^{-π²/2r}` out of O(1) terms), while the product localises the
/// smallness in a single factor.
pub fn theta3(z: Complex64, nome: &Nome) -> Result<Complex64> {
    let t = nome.t();
    if t.im == 0.0 && t.re > 0.45 {
        theta3_product(z, nome)
    } else {
        theta3_sum(z, nome)
    }
}

/// `θ₃(z;t)` by its bilateral sum.
pub fn theta3_sum(z: Complex64, nome: &Nome) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::domain("theta3 requires z != 0"));
    }
    let t = nome.t();
    let tn = t.norm();
    let zmax = z.norm().max(1.0 / z.norm());
    let mut acc = cr(1.0);
    let mut tpow = cr(1.0); // t^{S^2/2} accumulated via ratio t^{S - 1/2}
    let sqrt_t = nome.sqrt_t();
    let mut zp = cr(1.0);
    let mut zm = cr(1.0);
    let mut s = 0i64;
    loop {
        s += 1;
        // t^{S^2/2} = t^{(S-1)^2/2} * t^{S - 1/2}
        tpow *= t.powi((s - 1) as i32) * sqrt_t;
        zp *= z;
        zm /= z;
        let term = tpow * (zp + zm);
        acc += term;
        let bound = tn.powf(s as f64 * s as f64 / 2.0) * zmax.powi(s as i32);
        if bound < 1e-18 * acc.norm().max(1.0) && s > 2 {
            break;
        }
        if s > 4000 {
            return Err(Error::precision("theta3 sum did not converge"));
        }
    }
    Ok(acc)
}

/// `θ₃(z;t)` by its triple product `(t;t)_∞ Π_{n∈Z'₊}(1+t^n z)(1+t^n/z)`.
pub fn theta3_product(z: Complex64, nome: &Nome) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::domain("theta3 requires z != 0"));
    }
    let st = nome.sqrt_t();
    Ok(euler_product(nome) * qpoch(-st * z, nome) * qpoch(-st / z, nome))
}

/// `θ₁(x;t)·x^{-1/2}`: the single-valued part of the first theta function,
/// computed from the product form
/// `(t;t)_∞ (1 - x^{-1}) (tx;t)_∞ (t/x;t)_∞`.
pub fn theta1_reduced(x: Complex64, nome: &Nome) -> Result<Complex64> {
    if x.norm() == 0.0 {
        return Err(Error::domain("theta1 requires x != 0"));
    }
    let t = nome.t();
    Ok(euler_product(nome) * (cr(1.0) - cr(1.0) / x) * qpoch(t * x, nome) * qpoch(t / x, nome))
}

/// `θ₁(x;t)` with the principal branch of `x^{1/2}`, by the bilateral sum.
pub fn theta1(x: Complex64, nome: &Nome) -> Result<Complex64> {
    if x.norm() == 0.0 {
        return Err(Error::domain("theta1 requires x != 0"));
    }
    let t = nome.t();
    let tn = t.norm();
    let xmax = x.norm().max(1.0 / x.norm());
    // θ₁ = √x Σ_n (-1)^n t^{n(n+1)/2} x^n
    let mut acc = cr(1.0); // n = 0 term
    let mut n = 0i64;
    let mut tp_pos = cr(1.0); // t^{n(n+1)/2} for positive n
    let mut tp_neg = cr(1.0); // t^{m(m-1)/2} for n = -m
    let mut xp = cr(1.0);
    let mut xm = cr(1.0);
    loop {
        n += 1;
        tp_pos *= t.powi(n as i32); // t^{n(n+1)/2} / t^{(n-1)n/2} = t^n
        tp_neg *= t.powi((n - 1) as i32);
        xp *= x;
        xm /= x;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        acc += cr(sign) * (tp_pos * xp + tp_neg * xm);
        let bound = tn.powf((n as f64 * (n as f64 - 1.0)) / 2.0) * xmax.powi(n as i32 + 1);
        if bound < 1e-18 * acc.norm().max(1.0) && n > 2 {
            break;
        }
        if n > 4000 {
            return Err(Error::precision("theta1 sum did not converge"));
        }
    }
    Ok(x.sqrt() * acc)
}

/// `θ₁(x;t)` by its product form, principal `x^{1/2}`.
pub fn theta1_product(x: Complex64, nome: &Nome) -> Result<Complex64> {
    Ok(x.sqrt() * theta1_reduced(x, nome)?)
}

/// Which annulus a Ramanujan partial sum is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RamanujanSide {
    /// `1 < |y| < |t|^{-1}`: `Σ_{m∈Z'} y^m / (1 + (z t^m)^{-1})`.
    Outer,
    /// `|t| < |y| < 1`: `-Σ_{m∈Z'} y^m / (1 + z t^m)`.
    Inner,
}

/// Partial sum of the bilateral series, truncated once the term bound drops
/// below the nome tolerance.
pub fn ramanujan_sum_lhs(
    y: Complex64,
    z: Complex64,
    nome: &Nome,
    side: RamanujanSide,
) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::domain(
            "ramanujan sums need z off the closed negative axis",
        ));
    }
    let t = nome.t();
    if t.im != 0.0 || t.re <= 0.0 {
        return Err(Error::domain("ramanujan sums need a real nome in (0,1)"));
    }
    let t = t.re;
    let tn = t;
    let yn = y.norm();
    match side {
        RamanujanSide::Outer => {
            if !(1.0 < yn && yn < 1.0 / tn) {
                return Err(Error::domain(format!(
                    "outer sum needs 1 < |y| < 1/|t|, got |y| = {yn}"
                )));
            }
        }
        RamanujanSide::Inner => {
            if !(tn < yn && yn < 1.0) {
                return Err(Error::domain(format!(
                    "inner sum needs |t| < |y| < 1, got |y| = {yn}"
                )));
            }
        }
    }
    let sqrt_y = y.sqrt();
    let lnz = z.ln();
    let lnt = t.ln();
    let mut acc = Complex64::new(0.0, 0.0);
    // m = k + 1/2 for k = 0, 1, 2, ... and k = -1, -2, ...
    // the Fermi factors are evaluated as logistic functions of
    // ln z + m ln t so very large |m| neither overflows nor NaNs
    for dir in [1i64, -1] {
        let mut k = if dir == 1 { 0i64 } else { -1 };
        let mut small_run = 0;
        loop {
            let m_twice = 2 * k + 1;
            let ym = sqrt_y * y.powi(k as i32);
            let w = lnz + lnt * cr(m_twice as f64 / 2.0);
            let term = match side {
                RamanujanSide::Outer => ym * crate::quad::logistic_recip(-w),
                RamanujanSide::Inner => -ym * crate::quad::logistic_recip(w),
            };
            acc += term;
            if term.norm() < nome.tol() * acc.norm().max(1.0) {
                small_run += 1;
                if small_run >= 3 {
                    break;
                }
            } else {
                small_run = 0;
            }
            k += dir;
            if k.abs() > 100_000 {
                return Err(Error::precision("ramanujan series did not converge"));
            }
        }
    }
    Ok(acc)
}

/// The closed form both partial sums converge to:
/// `(t;t)³_∞ · (-√y θ₃(yz;t)) / (θ₃(-y t^{-1/2};t) θ₃(z;t))`.
pub fn ramanujan_rhs(y: Complex64, z: Complex64, nome: &Nome) -> Result<Complex64> {
    let denom1 = theta3(-y / nome.sqrt_t(), nome)?;
    let denom2 = theta3(z, nome)?;
    let scale = euler_product(nome).norm().powi(3);
    if denom1.norm() < 1e-12 * scale || denom2.norm() < 1e-12 * scale {
        return Err(Error::domain("ramanujan closed form hits a theta zero"));
    }
    let e = euler_product(nome);
    Ok(e * e * e * (-y.sqrt()) * theta3(y * z, nome)? / (denom1 * denom2))
}

/// The Frobenius kernel `θ₁(ẑu;t) / (θ₁(ẑ;t) θ₁(u;t))` with the half powers
/// of `ẑ` and `u` cancelled, i.e. evaluated through [`theta1_reduced`]. This
/// quotient is single-valued in both arguments.
pub fn frobenius_theta_kernel(u: Complex64, zhat: Complex64, nome: &Nome) -> Result<Complex64> {
    let num = theta1_reduced(zhat * u, nome)?;
    let d1 = theta1_reduced(zhat, nome)?;
    let d2 = theta1_reduced(u, nome)?;
    if d1.norm() == 0.0 || d2.norm() == 0.0 {
        return Err(Error::domain("frobenius kernel hits a theta1 zero"));
    }
    Ok(num / (d1 * d2))
}

/// Both sides of the Frobenius determinant identity at the given points,
/// in the same single-valued normalisation as [`frobenius_theta_kernel`].
#[allow(clippy::needless_range_loop)]
pub fn frobenius_det_check(
    zetas: &[Complex64],
    etas: &[Complex64],
    zhat: Complex64,
    nome: &Nome,
) -> Result<(Complex64, Complex64)> {
    let n = zetas.len();
    if etas.len() != n {
        return Err(Error::config("zeta and eta lists must have equal length"));
    }
    if n == 0 || n > 4 {
        return Err(Error::unsupported("frobenius check supports 1 <= n <= 4"));
    }
    let mut mat = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            mat[i * n + j] = frobenius_theta_kernel(zetas[i] * etas[j], zhat, nome)?;
        }
    }
    let lhs = crate::linalg::det(n, &mat);

    let prod_all: Complex64 = (0..n).map(|i| zetas[i] * etas[i]).product();
    let mut rhs = theta1_reduced(zhat * prod_all, nome)? / theta1_reduced(zhat, nome)?;
    for i in 0..n {
        for j in i + 1..n {
            rhs *= theta1_reduced(zetas[i] / zetas[j], nome)?;
            rhs *= theta1_reduced(etas[i] / etas[j], nome)?;
        }
    }
    for i in 0..n {
        for j in 0..n {
            rhs /= theta1_reduced(zetas[i] * etas[j], nome)?;
        }
    }
    // residual half powers recombine into the integer powers (ζ_k η_k)^{1-k}
    for (k, pair) in (0..n).map(|k| zetas[k] * etas[k]).enumerate() {
        rhs *= pair.powi(-(k as i32));
    }
    Ok((lhs, rhs))
}

// Coefficients of the dilogarithm series in u = -ln(1-z):
// Li2 = u - u^2/4 + Σ_k B_{2k} u^{2k+1} / (2k+1)!
const DILOG_B: [f64; 10] = [
    1.0 / 36.0,
    -1.0 / 3600.0,
    1.0 / 211_680.0,
    -1.0 / 10_886_400.0,
    1.0 / 526_901_760.0,
    -4.064_761_645_144_225_5e-11,
    8.781_788_041_582_444e-14,
    -1.992_458_299_426_208_7e-16,
    4.757_527_143_004_385e-19,
    -1.180_928_721_912_733e-21,
];

fn dilog_series_direct(z: Complex64) -> Complex64 {
    // plain Σ z^n/n², for |z| <= 1/2
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zp = cr(1.0);
    for n in 1..200 {
        zp *= z;
        let term = zp / cr((n * n) as f64);
        acc += term;
        if term.norm() < 1e-18 * acc.norm().max(1e-18) {
            break;
        }
    }
    acc
}

fn dilog_log_series(u: Complex64) -> Complex64 {
    let u2 = u * u;
    let mut acc = u - u2 / cr(4.0);
    let mut upow = u * u2; // u^3
    for b in DILOG_B {
        acc += upow * cr(b);
        upow *= u2;
    }
    acc
}

/// The principal-branch dilogarithm `Li₂(x) = -∫₀ˣ ln(1-w)/w dw` on the cut
/// plane `C \ (1, ∞)`.
pub fn dilog(x: Complex64) -> Result<Complex64> {
    let pi2_6 = PI * PI / 6.0;
    if x.im == 0.0 && x.re > 1.0 {
        return Err(Error::domain("dilog: point on the branch cut (1, inf)"));
    }
    if x.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if (x - cr(1.0)).norm() == 0.0 {
        return Ok(cr(pi2_6));
    }
    let nz = x.norm_sqr();
    if nz <= 0.25 {
        return Ok(dilog_series_direct(x));
    }
    // region reductions onto small |u|
    let (u, rest, sign) = if x.re <= 0.5 {
        if nz > 1.0 {
            let lnm = (-x).ln();
            (
                -(cr(1.0) - cr(1.0) / x).ln(),
                cr(-pi2_6) - cr(0.5) * lnm * lnm,
                -1.0,
            )
        } else {
            (-(cr(1.0) - x).ln(), Complex64::new(0.0, 0.0), 1.0)
        }
    } else if nz <= 2.0 * x.re {
        // Li2(x) = π²/6 - ln(x)ln(1-x) - Li2(1-x), and the series in
        // u = -ln(x) evaluates Li2(1-x)
        let u = -x.ln();
        (u, cr(pi2_6) + u * (cr(1.0) - x).ln(), -1.0)
    } else {
        let lnm = (-x).ln();
        (
            -(cr(1.0) - cr(1.0) / x).ln(),
            cr(-pi2_6) - cr(0.5) * lnm * lnm,
            -1.0,
        )
    };
    Ok(cr(sign) * dilog_log_series(u) + rest)
}
