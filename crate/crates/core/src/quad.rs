//! Quadrature primitives: periodic trapezoid rules on circles, Gauss–Legendre
//! panels for arcs, circular convolution via FFT, and numerically stable
//! logistic factors for integrands of the form `1/(1 + exp(w))`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::{num_complex::Complex as FftComplex, FftPlanner};
use std::f64::consts::PI;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `(1/2πi) ∮_{|ζ|=r} f(ζ) dζ` by the n-node periodic trapezoid rule.
pub fn circle_integral(
    radius: f64,
    n: usize,
    mut f: impl FnMut(Complex64) -> Complex64,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let phi = 2.0 * PI * j as f64 / n as f64;
        let zeta = Complex64::from_polar(radius, phi);
        acc += f(zeta) * zeta;
    }
    acc / n as f64
}

/// Doubles `n` until two successive evaluations agree within `tol` (absolute,
/// with a relative floor). `eval` receives the node count.
pub fn refine(
    start: usize,
    cap: usize,
    tol: f64,
    mut eval: impl FnMut(usize) -> Result<Complex64>,
) -> Result<Complex64> {
    let mut n = start.max(8).next_power_of_two();
    let mut prev = eval(n)?;
    while n < cap {
        n *= 2;
        let next = eval(n)?;
        let scale = 1.0f64.max(next.norm());
        if (next - prev).norm() <= tol * scale {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::precision(format!(
        "quadrature did not converge within {cap} nodes (last delta at n={n})"
    )))
}

/// Stable `1/(1 + e^w)` for complex `w` with possibly huge real part.
pub fn logistic_recip(w: Complex64) -> Complex64 {
    if w.re > 36.0 {
        let e = (-w).exp();
        e - e * e
    } else if w.re < -36.0 {
        cr(1.0) - w.exp()
    } else {
        cr(1.0) / (cr(1.0) + w.exp())
    }
}

/// Circular convolution `c_m = Σ_{j+k ≡ m (mod n)} u_j v_k` via FFT.
pub fn circular_convolution(u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(u.len(), v.len());
    let n = u.len();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);
    let mut a: Vec<FftComplex<f64>> = u.iter().map(|z| FftComplex::new(z.re, z.im)).collect();
    let mut b: Vec<FftComplex<f64>> = v.iter().map(|z| FftComplex::new(z.re, z.im)).collect();
    fft.process(&mut a);
    fft.process(&mut b);
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x *= *y;
    }
    ifft.process(&mut a);
    a.into_iter()
        .map(|z| Complex64::new(z.re / n as f64, z.im / n as f64))
        .collect()
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-based initial guess
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `∫_a^b f` by composite Gauss–Legendre with `panels` panels of `order`
/// points each.
pub fn gl_integrate(
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
    mut f: impl FnMut(f64) -> Complex64,
) -> Complex64 {
    let (nodes, weights) = gauss_legendre(order);
    let mut acc = Complex64::new(0.0, 0.0);
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            acc += f(mid + 0.5 * h * x) * *w;
        }
    }
    acc * cr(0.5 * h)
}

/// Adaptive wrapper around [`gl_integrate`]: doubles the panel count until
/// two successive values agree within `tol`.
pub fn gl_integrate_auto(
    a: f64,
    b: f64,
    tol: f64,
    mut f: impl FnMut(f64) -> Complex64,
) -> Result<Complex64> {
    let order = 32;
    let mut panels = 1;
    let mut prev = gl_integrate(a, b, panels, order, &mut f);
    for _ in 0..12 {
        panels *= 2;
        let next = gl_integrate(a, b, panels, order, &mut f);
        let scale = 1.0f64.max(next.norm());
        if (next - prev).norm() <= tol * scale {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::precision(format!(
        "arc quadrature did not converge on [{a}, {b}]"
    )))
}

/// Bisection on a monotone function. `f` must have opposite signs at the
/// bracket ends.
pub fn bisect(mut lo: f64, mut hi: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::domain(format!(
            "bisection bracket [{lo}, {hi}] does not straddle a root"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || hi - lo < tol {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
