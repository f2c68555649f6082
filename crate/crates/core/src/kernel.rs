//! Finite-t determinantal correlation kernels of the periodic Schur process,
//! evaluated by double contour quadrature on circles.
//!
//! The shift-mixed kernel is
//!
//! ```text
//! K(σ,x;τ,y) = -(t;t)³_∞ / (θ₃(z;t) (2πi)²)
//!              ∮∮ F(σ,ζ)/F(τ,η⁻¹) · θ₃(zζη;t)/θ₃(-ζη t^{-1/2};t)
//!                 dζ dη / (ζ^{x+1/2} η^{y+1/2})
//! ```
//!
//! On circles the theta coupling depends on `ζη` only, so with equal node
//! counts the double trapezoid sum collapses to one circular convolution plus
//! a dot product — `O(n log n)` per kernel value instead of `O(n²)`.
//!
//! Everything here is cross-checked against the brute-force oracles of
//! [`crate::process`]; the contour selection subsumes both the generic annuli
//! and the per-time annuli of the cylindric specializations.

use crate::error::{Error, Result};
use crate::linalg::{det, CMatrix};
use crate::partition::HalfInt;
use crate::process::{Point, ProcessSpec};
use crate::qseries::{euler_product, theta1_reduced, theta3, Nome};
use crate::quad::{circular_convolution, cr};
use num_complex::Complex64;
use rustfft::{num_complex::Complex as FftComplex, FftPlanner};
use std::f64::consts::PI;

/// Contour parameters for the double quadrature.
#[derive(Debug, Clone, Copy)]
pub struct ContourSpec {
    /// Initial node count (rounded up to a power of two, at least 64).
    pub nodes: usize,
    /// Hard cap for the node auto-doubling.
    pub max_nodes: usize,
    /// Convergence tolerance between successive node doublings.
    pub tolerance: f64,
    /// Geometric position inside each admissible radius window, in (0,1);
    /// 0.5 is the geometric midpoint. Exposed so contour independence can be
    /// tested directly.
    pub radius_bias: f64,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec {
            nodes: 256,
            max_nodes: 8192,
            tolerance: 1e-10,
            radius_bias: 0.5,
        }
    }
}

impl ContourSpec {
    pub fn with_tolerance(tol: f64) -> Self {
        ContourSpec {
            tolerance: tol,
            ..Default::default()
        }
    }
}

/// A kernel argument: time in `0..=N` (0 appears only inside the L/K matrix
/// machinery) and a half-integer position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelPoint {
    pub tau: usize,
    pub x: HalfInt,
}

impl KernelPoint {
    pub fn new(tau: usize, x: HalfInt) -> Self {
        KernelPoint { tau, x }
    }
}

impl From<Point> for KernelPoint {
    fn from(p: Point) -> Self {
        KernelPoint { tau: p.tau, x: p.x }
    }
}

/// `F(τ,ζ)` through the closed forms of `ln H`: expanding `1/(1-t^n)` into
/// `Σ_j t^{nj}` turns the defining series into
/// `Σ_j Σ_k [ln H(b[k]; t^{j+δ} ζ) - ln H(a[k]; t^{j+δ'}/ζ)]`,
/// which for product-type specializations is exactly the q-product form and
/// provides the analytic continuation beyond the power-sum annulus.
pub fn f_function(spec: &ProcessSpec, tau: usize, zeta: Complex64) -> Result<Complex64> {
    Ok(log_f(spec, tau, zeta)?.exp())
}

fn log_f(spec: &ProcessSpec, tau: usize, zeta: Complex64) -> Result<Complex64> {
    if tau > spec.period() {
        return Err(Error::config(format!(
            "time {tau} outside 0..={}",
            spec.period()
        )));
    }
    let t = spec.t();
    let n = spec.period();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut tj = 1.0f64;
    for j in 0..100_000 {
        let mut term = Complex64::new(0.0, 0.0);
        for k in 1..=n {
            let (b_arg, a_arg) = if k <= tau {
                (cr(tj) * zeta, cr(t * tj) / zeta)
            } else {
                (cr(t * tj) * zeta, cr(tj) / zeta)
            };
            term += spec.b(k).log_h(b_arg)?;
            term -= spec.a(k).log_h(a_arg)?;
        }
        acc += term;
        if j >= 1 && term.norm() < 1e-17 * acc.norm().max(1.0) {
            return Ok(acc);
        }
        tj *= t;
    }
    Err(Error::precision("F(tau, zeta) product did not converge"))
}

/// `F(τ,ζ)` summed directly as the defining power-sum series; valid only in
/// the annulus where that series converges termwise — for generic specs
/// `R < |ζ| < R⁻¹`, and for cylindric specs the per-time annulus
/// `s^{τ+1} < |ζ| < s^τ`. Kept as the second, independent evaluation path.
pub fn f_function_series(spec: &ProcessSpec, tau: usize, zeta: Complex64) -> Result<Complex64> {
    let (lo, hi) = zeta_window(spec, tau);
    let zn = zeta.norm();
    if !(lo < zn && zn < hi) {
        return Err(Error::domain(format!(
            "series form needs |zeta| in ({lo}, {hi}), got {zn}"
        )));
    }
    let t = spec.t();
    let nn = spec.period();
    // c · ζ^{±n} t^{jn} with the magnitude fused in log space, so neither
    // factor alone can overflow while their product is small
    let fused = |c: Complex64, n: u32, log_base: f64, arg_base: f64| -> Complex64 {
        if c.norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let magnitude = (c.norm().ln() + n as f64 * log_base).exp();
        Complex64::from_polar(magnitude, c.arg() + n as f64 * arg_base)
    };
    let (log_z, arg_z) = (zeta.norm().ln(), zeta.arg());
    let log_t = t.ln();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut small_run = 0;
    for n in 1..=100_000u32 {
        let tn = t.powi(n as i32);
        let mut term = Complex64::new(0.0, 0.0);
        for k in 1..=nn {
            let bn = spec.b(k).scaled_power_sum(n);
            let an = spec.a(k).scaled_power_sum(n);
            if k <= tau {
                term += fused(bn, n, log_z, arg_z);
                term -= fused(an, n, log_t - log_z, -arg_z);
            } else {
                term += fused(bn, n, log_t + log_z, arg_z);
                term -= fused(an, n, -log_z, -arg_z);
            }
        }
        term /= cr(1.0 - tn);
        acc += term;
        if term.norm() < 1e-17 * acc.norm().max(1.0) {
            small_run += 1;
            if small_run >= 3 {
                return Ok(acc.exp());
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::precision("F series did not converge"))
}

/// Admissible window for `|ζ|` at time `σ`, from the convergence annuli of
/// every `ln H` factor of `F(σ,·)`. `0` and `+∞` mean unconstrained.
fn zeta_window(spec: &ProcessSpec, sigma: usize) -> (f64, f64) {
    let t = spec.t();
    let n = spec.period();
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    for k in 1..=n {
        let ra = spec.a(k).growth_radius();
        let rb = spec.b(k).growth_radius();
        if ra > 0.0 {
            lo = lo.max(if k <= sigma { ra * t } else { ra });
        }
        if rb > 0.0 {
            let cap = if k <= sigma { 1.0 / rb } else { 1.0 / (rb * t) };
            hi = hi.min(cap);
        }
    }
    (lo, hi)
}

/// Geometric point at fraction `bias` of the window `(lo, hi)`; half-open
/// windows fall back to a centre derived from `fallback`.
fn geo_pick(lo: f64, hi: f64, bias: f64, fallback: f64) -> f64 {
    if lo > 0.0 && hi.is_finite() {
        lo.powf(1.0 - bias) * hi.powf(bias)
    } else if hi.is_finite() {
        // half-open (0, hi): prefer the fallback, stay safely inside
        fallback.min(hi * (0.55 + 0.3 * bias))
    } else if lo > 0.0 {
        fallback.max(lo * (1.1 + 0.5 * bias))
    } else {
        fallback
    }
}

/// Radii `(R_ζ, R_η)` for the pair `(σ, τ)`. `σ <= τ` puts `|ζη|` in
/// `(1, 1/t)`, `σ > τ` in `(t, 1)`; both contours stay inside the F-annuli.
fn select_radii(spec: &ProcessSpec, sigma: usize, tau: usize, bias: f64) -> Result<(f64, f64)> {
    let t = spec.t();
    let (zlo, zhi) = zeta_window(spec, sigma);
    let (wlo, whi) = zeta_window(spec, tau); // window for 1/η
    let elo = 1.0 / whi; // |η| window
    let ehi = if wlo > 0.0 { 1.0 / wlo } else { f64::INFINITY };
    let (clo, chi) = if sigma <= tau {
        (1.0, 1.0 / t)
    } else {
        (t, 1.0)
    };
    let lo = clo.max(zlo * elo);
    let hi = chi.min(zhi * ehi);
    if !(lo < hi) {
        return Err(Error::config(format!(
            "no admissible |ζη| window for sigma={sigma}, tau={tau}"
        )));
    }
    let xi = lo.powf(1.0 - bias) * hi.powf(bias);
    let zl = zlo.max(xi / ehi);
    let zh = zhi.min(xi / elo);
    if zl > 0.0 && zh.is_finite() && !(zl < zh) {
        return Err(Error::config(format!(
            "no admissible |ζ| window for sigma={sigma}, tau={tau}"
        )));
    }
    let r_zeta = geo_pick(zl, zh, bias, xi.sqrt());
    let r_eta = xi / r_zeta;
    Ok((r_zeta, r_eta))
}

/// The single-valued coupling `w̃(ξ) = ξ^{-1/2} S_±(ξ)` in its closed theta
/// form `-(t;t)³_∞ θ₃(zξ;t) / (θ₃(z;t) θ₃(-ξ t^{-1/2};t))`; the branch is
/// decided by `|ξ|` alone.
fn theta_coupling(
    xi: Complex64,
    z: Complex64,
    nome: &Nome,
    euler3_over_theta_z: Complex64,
) -> Result<Complex64> {
    let denom = theta3(-xi / nome.sqrt_t(), nome)?;
    if denom.norm() < 1e-250 {
        return Err(Error::config("coupling contour touches a theta zero"));
    }
    Ok(-euler3_over_theta_z * theta3(z * xi, nome)? / denom)
}

/// The same coupling summed as the bilateral series
/// `Σ_{c∈Z} ξ^c σ_±(c + 1/2)` with
/// `σ₊(u) = 1/(1+(zt^u)^{-1})` for `|ξ| > 1` and `σ₋(u) = -1/(1+zt^u)` for
/// `|ξ| < 1`; used by the consistency tests.
pub fn coupling_series(xi: Complex64, z: Complex64, t: f64) -> Result<Complex64> {
    let xin = xi.norm();
    if !(t < xin && xin < 1.0 / t) || (xin - 1.0).abs() < 1e-12 {
        return Err(Error::domain(
            "coupling series needs t < |ξ| < 1/t with |ξ| != 1",
        ));
    }
    let plus = xin > 1.0;
    let lnz = z.ln();
    let lnt = t.ln();
    let mut acc = Complex64::new(0.0, 0.0);
    for dir in [1i64, -1] {
        let mut c = if dir == 1 { 0i64 } else { -1 };
        let mut run = 0;
        loop {
            // logistic form of the Fermi factors: stable for large |c|
            let w = lnz + cr(lnt * (c as f64 + 0.5));
            let sigma = if plus {
                crate::quad::logistic_recip(-w)
            } else {
                -crate::quad::logistic_recip(w)
            };
            let term = xi.powi(c as i32) * sigma;
            acc += term;
            if term.norm() < 1e-16 * acc.norm().max(1.0) {
                run += 1;
                if run >= 3 {
                    break;
                }
            } else {
                run = 0;
            }
            c += dir;
            if c.abs() > 100_000 {
                return Err(Error::precision("coupling series did not converge"));
            }
        }
    }
    Ok(acc)
}

/// Geometric coupling `1/(ξ-1)`: the t → 0 limit of the theta coupling on
/// both branches.
pub fn coupling_geometric(xi: Complex64) -> Complex64 {
    (xi - cr(1.0)).inv()
}

enum Coupling {
    Theta,
    Geometric,
}

fn kernel_impl(
    spec: &ProcessSpec,
    p: KernelPoint,
    q: KernelPoint,
    contour: &ContourSpec,
    coupling: Coupling,
) -> Result<Complex64> {
    let (r_zeta, r_eta) = select_radii(spec, p.tau, q.tau, contour.radius_bias)?;
    let nome = spec.nome();
    let e = euler_product(&nome);
    let pref = e * e * e / theta3(spec.z(), &nome)?;
    let kx = p.x.floor(); // x - 1/2 as an integer
    let ky = q.x.floor();
    crate::quad::refine(contour.nodes, contour.max_nodes, contour.tolerance, |n| {
        let mut u = Vec::with_capacity(n);
        let mut v = Vec::with_capacity(n);
        for j in 0..n {
            let phi = 2.0 * PI * j as f64 / n as f64;
            let zeta = Complex64::from_polar(r_zeta, phi);
            let eta = Complex64::from_polar(r_eta, phi);
            u.push(f_function(spec, p.tau, zeta)? * zeta.powi(-kx as i32));
            v.push(eta.powi(-ky as i32) / f_function(spec, q.tau, eta.inv())?);
        }
        let r_xi = r_zeta * r_eta;
        let mut w = Vec::with_capacity(n);
        for m in 0..n {
            let xi = Complex64::from_polar(r_xi, 2.0 * PI * m as f64 / n as f64);
            w.push(match coupling {
                Coupling::Theta => theta_coupling(xi, spec.z(), &nome, pref)?,
                Coupling::Geometric => coupling_geometric(xi),
            });
        }
        let umax = u.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let vmax = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let acc = if umax * vmax > 1e8 {
            // Near t = 1 the F factors span many orders of magnitude and the
            // convolution cancels them only after the (tiny) coupling weight
            // is applied; the term-wise products stay bounded, so sum those
            // directly instead.
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, uj) in u.iter().enumerate() {
                for (k, vk) in v.iter().enumerate() {
                    acc += *uj * *vk * w[(j + k) % n];
                }
            }
            acc
        } else {
            let c = circular_convolution(&u, &v);
            c.iter().zip(w.iter()).map(|(cm, wm)| *cm * *wm).sum()
        };
        Ok(acc / cr((n * n) as f64))
    })
}

/// The shift-mixed correlation kernel `K(σ,x;τ,y)`.
pub fn kernel(
    spec: &ProcessSpec,
    p: KernelPoint,
    q: KernelPoint,
    contour: &ContourSpec,
) -> Result<Complex64> {
    kernel_impl(spec, p, q, contour, Coupling::Theta)
}

/// Same quadrature with the geometric coupling of the t → 0 (non-periodic)
/// limit; regression target for small t.
pub fn kernel_geometric(
    spec: &ProcessSpec,
    p: KernelPoint,
    q: KernelPoint,
    contour: &ContourSpec,
) -> Result<Complex64> {
    kernel_impl(spec, p, q, contour, Coupling::Geometric)
}

/// `det[K(p_i, p_j)]`: the shift-mixed correlation function `ρ_n^shift`.
pub fn correlation_det(
    spec: &ProcessSpec,
    points: &[KernelPoint],
    contour: &ContourSpec,
) -> Result<Complex64> {
    let n = points.len();
    for (i, p) in points.iter().enumerate() {
        if points[i + 1..].contains(p) {
            return Ok(Complex64::new(0.0, 0.0));
        }
    }
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = kernel(spec, points[i], points[j], contour)?;
        }
    }
    Ok(det(n, &m))
}

/// Unmixed correlation function by integrating the shift parameter out:
/// `ρ_n = (1/2πi) ∮_{|z|=1} det[K_z] θ₃(z;t) dz/z`.
///
/// The convolution data of each kernel entry is independent of `z`, so the
/// z-integration reuses it and only re-evaluates the theta coupling.
pub fn correlation_unmixed(
    spec: &ProcessSpec,
    points: &[KernelPoint],
    contour: &ContourSpec,
) -> Result<Complex64> {
    let npts = points.len();
    for (i, p) in points.iter().enumerate() {
        if points[i + 1..].contains(p) {
            return Ok(Complex64::new(0.0, 0.0));
        }
    }
    let nome = spec.nome();
    let e = euler_product(&nome);
    let e3 = e * e * e;

    struct Pair {
        c: Vec<Complex64>,
        r_xi: f64,
        denom: Vec<Complex64>, // θ₃(-ξ_m / √t) along the ξ-ring
    }

    crate::quad::refine(contour.nodes, contour.max_nodes, contour.tolerance, |n| {
        let mut pairs = Vec::with_capacity(npts * npts);
        for pi in points {
            for pj in points {
                let (r_zeta, r_eta) = select_radii(spec, pi.tau, pj.tau, contour.radius_bias)?;
                let kx = pi.x.floor();
                let ky = pj.x.floor();
                let mut u = Vec::with_capacity(n);
                let mut v = Vec::with_capacity(n);
                for j in 0..n {
                    let phi = 2.0 * PI * j as f64 / n as f64;
                    let zeta = Complex64::from_polar(r_zeta, phi);
                    let eta = Complex64::from_polar(r_eta, phi);
                    u.push(f_function(spec, pi.tau, zeta)? * zeta.powi(-kx as i32));
                    v.push(eta.powi(-ky as i32) / f_function(spec, pj.tau, eta.inv())?);
                }
                let c = circular_convolution(&u, &v);
                let r_xi = r_zeta * r_eta;
                let mut denom = Vec::with_capacity(n);
                for m in 0..n {
                    let xi = Complex64::from_polar(r_xi, 2.0 * PI * m as f64 / n as f64);
                    denom.push(theta3(-xi / nome.sqrt_t(), &nome)?);
                }
                pairs.push(Pair { c, r_xi, denom });
            }
        }
        crate::quad::refine(32, 4096, contour.tolerance, |nz| {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..nz {
                let z = Complex64::from_polar(1.0, 2.0 * PI * l as f64 / nz as f64);
                let theta_z = theta3(z, &nome)?;
                let pref = e3 / theta_z;
                let mut mat = vec![Complex64::new(0.0, 0.0); npts * npts];
                for (idx, pair) in pairs.iter().enumerate() {
                    let mut kv = Complex64::new(0.0, 0.0);
                    for (m, cm) in pair.c.iter().enumerate() {
                        let xi = Complex64::from_polar(pair.r_xi, 2.0 * PI * m as f64 / n as f64);
                        let w = -pref * theta3(z * xi, &nome)? / pair.denom[m];
                        kv += w * cm;
                    }
                    mat[idx] = kv / cr((n * n) as f64);
                }
                acc += det(npts, &mat) * theta_z;
            }
            Ok(acc / cr(nz as f64))
        })
    })
}

/// Unmixed correlation functions by the multivariate theta-determinant
/// integral, for one or two points. Cost grows as `nodes^{2n}`, so larger
/// point sets are served by [`correlation_unmixed`].
pub fn correlation_frobenius(
    spec: &ProcessSpec,
    points: &[KernelPoint],
    contour: &ContourSpec,
) -> Result<Complex64> {
    match points.len() {
        1 => frobenius_one(spec, points[0], contour),
        2 => frobenius_two(spec, points[0], points[1], contour),
        n => Err(Error::unsupported(format!(
            "frobenius integral implemented for n <= 2, got n = {n}"
        ))),
    }
}

fn frobenius_one(spec: &ProcessSpec, p: KernelPoint, contour: &ContourSpec) -> Result<Complex64> {
    let nome = spec.nome();
    let e = euler_product(&nome);
    let e3 = e * e * e;
    let (r_zeta, r_eta) = select_radii(spec, p.tau, p.tau, contour.radius_bias)?;
    let kx = p.x.floor();
    crate::quad::refine(contour.nodes, contour.max_nodes, contour.tolerance, |n| {
        let mut u = Vec::with_capacity(n);
        let mut v = Vec::with_capacity(n);
        for j in 0..n {
            let phi = 2.0 * PI * j as f64 / n as f64;
            let zeta = Complex64::from_polar(r_zeta, phi);
            let eta = Complex64::from_polar(r_eta, phi);
            // exponent -x - 1/2 = -(kx + 1) on each of ζ and η
            u.push(f_function(spec, p.tau, zeta)? * zeta.powi(-(kx as i32) - 1));
            v.push(eta.powi(-(kx as i32) - 1) / f_function(spec, p.tau, eta.inv())?);
        }
        let c = circular_convolution(&u, &v);
        let r_xi = r_zeta * r_eta;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, cm) in c.iter().enumerate() {
            let xi = Complex64::from_polar(r_xi, 2.0 * PI * m as f64 / n as f64);
            acc += e3 / theta1_reduced(xi, &nome)? * cm;
        }
        Ok(acc / cr((n * n) as f64))
    })
}

fn frobenius_two(
    spec: &ProcessSpec,
    p1: KernelPoint,
    p2: KernelPoint,
    _contour: &ContourSpec,
) -> Result<Complex64> {
    // order by time so the interlaced radii match the contour prescription
    let (p1, p2) = if p1.tau <= p2.tau { (p1, p2) } else { (p2, p1) };
    let nome = spec.nome();
    let t = spec.t();
    let e = euler_product(&nome);
    let e6 = (e * e * e).powi(2);

    // interlaced log-radii: ln α₁ = 3g > ln(1/β₁) = g > ln α₂ = 0 > ln(1/β₂) = -2g
    let (lo1, hi1) = zeta_window(spec, p1.tau);
    let (lo2, hi2) = zeta_window(spec, p2.tau);
    let hi = hi1.min(hi2);
    let lo = lo1.max(lo2);
    let mut g = (1.0f64 / t).ln() / 5.5;
    if hi.is_finite() {
        g = g.min(hi.ln() / 3.5);
    }
    if lo > 0.0 {
        g = g.min(-lo.ln() / 3.5);
    }
    if g <= 0.0 {
        return Err(Error::config("no admissible interlaced radii"));
    }
    let alpha1 = (3.0 * g).exp();
    let beta1 = (-g).exp();
    let alpha2 = 1.0;
    let beta2 = (2.0 * g).exp();

    let k1 = p1.x.floor();
    let k2 = p2.x.floor();
    // the quadruple sum costs n⁴; nodes are capped rather than auto-doubled
    let n = 160usize;
    let mut f1 = Vec::with_capacity(n);
    let mut g1 = Vec::with_capacity(n);
    let mut f2 = Vec::with_capacity(n);
    let mut g2 = Vec::with_capacity(n);
    for j in 0..n {
        let phi = 2.0 * PI * j as f64 / n as f64;
        let z1 = Complex64::from_polar(alpha1, phi);
        let e1 = Complex64::from_polar(beta1, phi);
        let z2 = Complex64::from_polar(alpha2, phi);
        let e2 = Complex64::from_polar(beta2, phi);
        // ζ1, η1 carry exponent -(k1+1); ζ2, η2 carry -(k2+2)
        f1.push(f_function(spec, p1.tau, z1)? * z1.powi(-(k1 as i32) - 1));
        g1.push(e1.powi(-(k1 as i32) - 1) / f_function(spec, p1.tau, e1.inv())?);
        f2.push(f_function(spec, p2.tau, z2)? * z2.powi(-(k2 as i32) - 2));
        g2.push(e2.powi(-(k2 as i32) - 2) / f_function(spec, p2.tau, e2.inv())?);
    }
    let table = |radius: f64| -> Result<Vec<Complex64>> {
        (0..n)
            .map(|d| {
                theta1_reduced(
                    Complex64::from_polar(radius, 2.0 * PI * d as f64 / n as f64),
                    &nome,
                )
            })
            .collect()
    };
    let a12 = table(alpha1 / alpha2)?; // θ̃₁(ζ1/ζ2) at angle index j1 - j2
    let b12 = table(beta1 / beta2)?; // θ̃₁(η1/η2)
    let c11 = table(alpha1 * beta1)?;
    let c12 = table(alpha1 * beta2)?;
    let c21 = table(alpha2 * beta1)?;
    let c22 = table(alpha2 * beta2)?;
    let inv22: Vec<Complex64> = c22.iter().map(|v| v.inv()).collect();

    let mut acc = Complex64::new(0.0, 0.0);
    for j1 in 0..n {
        for l1 in 0..n {
            let t11 = f1[j1] * g1[l1] / c11[(j1 + l1) % n];
            for j2 in 0..n {
                let part = t11 * f2[j2] * a12[(j1 + n - j2) % n] / c21[(j2 + l1) % n];
                let mut inner = Complex64::new(0.0, 0.0);
                for l2 in 0..n {
                    inner +=
                        g2[l2] * b12[(l1 + n - l2) % n] * inv22[(j2 + l2) % n] / c12[(j1 + l2) % n];
                }
                acc += part * inner;
            }
        }
    }
    Ok(acc * e6 / cr((n as f64).powi(4)))
}

/// Block Toeplitz entry: coefficient of `ζ^d` in
/// `exp Σ_n (a_n ζ^{-n} + b_n ζ^n) = (Σ_p h_p(a) ζ^{-p})(Σ_q h_q(b) ζ^q)`.
fn l_coefficient(h_a: &[Complex64], h_b: &[Complex64], d: i64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let pmax = h_a.len() as i64 - 1;
    let mut p = (-d).max(0);
    while p <= pmax && p + d < h_b.len() as i64 {
        acc += h_a[p as usize] * h_b[(p + d) as usize];
        p += 1;
    }
    acc
}

/// `Z'(m)` as doubled values, ascending.
fn z_prime(m: usize) -> Vec<i64> {
    (0..2 * m).map(|i| 2 * (i as i64 - m as i64) + 1).collect()
}

/// The `(N+1)·2m` cyclic L-matrix of the finite approximation: `Q = diag(z t^x)`
/// in the top-right block, `-L[k]` on the subdiagonal blocks.
pub fn build_l(spec: &ProcessSpec, m: usize) -> Result<CMatrix> {
    if m > 24 {
        return Err(Error::config("L matrix supported for m <= 24"));
    }
    let nblocks = spec.period() + 1;
    let side = 2 * m;
    let mut mat = CMatrix::zeros(nblocks * side);
    let htab = 200usize;
    for (idx, x2) in z_prime(m).iter().enumerate() {
        let x = *x2 as f64 / 2.0;
        mat[(idx, spec.period() * side + idx)] = spec.z() * cr(spec.t().powf(x));
    }
    for k in 1..=spec.period() {
        let ha = spec.a(k).h_table(htab);
        let hb = spec.b(k).h_table(htab);
        for (i, xi) in z_prime(m).iter().enumerate() {
            for (j, yj) in z_prime(m).iter().enumerate() {
                let d = (xi - yj) / 2;
                mat[(k * side + i, (k - 1) * side + j)] = -l_coefficient(&ha, &hb, d);
            }
        }
    }
    Ok(mat)
}

/// The block K-matrix restricted to `Z'(m)`: block `(σ,τ)` is `K₊` for
/// `σ <= τ` and `K₋` otherwise, with all entries of one block extracted from
/// a single 2D FFT of the quadrature grid.
pub fn build_k(spec: &ProcessSpec, m: usize, contour: &ContourSpec) -> Result<CMatrix> {
    let nblocks = spec.period() + 1;
    let side = 2 * m;
    let n = contour.nodes.max(8 * m).next_power_of_two();
    let nome = spec.nome();
    let e = euler_product(&nome);
    let pref = e * e * e / theta3(spec.z(), &nome)?;
    let mut mat = CMatrix::zeros(nblocks * side);
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);

    for sigma in 0..nblocks {
        for tau in 0..nblocks {
            let (r_zeta, r_eta) = select_radii(spec, sigma, tau, contour.radius_bias)?;
            let r_xi = r_zeta * r_eta;
            let mut fz = Vec::with_capacity(n);
            let mut fe = Vec::with_capacity(n);
            let mut w = Vec::with_capacity(n);
            for j in 0..n {
                let phi = 2.0 * PI * j as f64 / n as f64;
                fz.push(f_function(spec, sigma, Complex64::from_polar(r_zeta, phi))?);
                fe.push(cr(1.0) / f_function(spec, tau, Complex64::from_polar(r_eta, phi).inv())?);
                w.push(theta_coupling(
                    Complex64::from_polar(r_xi, phi),
                    spec.z(),
                    &nome,
                    pref,
                )?);
            }
            let mut grid: Vec<FftComplex<f64>> = Vec::with_capacity(n * n);
            for j in 0..n {
                for k in 0..n {
                    let v = fz[j] * fe[k] * w[(j + k) % n];
                    grid.push(FftComplex::new(v.re, v.im));
                }
            }
            for row in grid.chunks_exact_mut(n) {
                fft.process(row);
            }
            let mut col = vec![FftComplex::new(0.0, 0.0); n];
            for c in 0..n {
                for r in 0..n {
                    col[r] = grid[r * n + c];
                }
                fft.process(&mut col);
                for r in 0..n {
                    grid[r * n + c] = col[r];
                }
            }
            for (i, xi2) in z_prime(m).iter().enumerate() {
                for (j, yj2) in z_prime(m).iter().enumerate() {
                    let kx = (xi2 - 1) / 2; // x - 1/2
                    let ky = (yj2 - 1) / 2;
                    let qx = kx.rem_euclid(n as i64) as usize;
                    let qy = ky.rem_euclid(n as i64) as usize;
                    let g = grid[qx * n + qy];
                    mat[(sigma * side + i, tau * side + j)] = Complex64::new(g.re, g.im)
                        / cr((n * n) as f64)
                        * cr(r_zeta.powi(-kx as i32))
                        * cr(r_eta.powi(-ky as i32));
                }
            }
        }
    }
    Ok(mat)
}

/// Max-abs entry of `(1 + L)K - L` over the central half of every block
/// (`|x|, |y| <= m/2`). Boundary truncation pollutes the outer entries; the
/// central ones must shrink as `m` grows.
pub fn lk_residual(spec: &ProcessSpec, m: usize, contour: &ContourSpec) -> Result<f64> {
    let l = build_l(spec, m)?;
    let k = build_k(spec, m, contour)?;
    let side = 2 * m;
    let nblocks = spec.period() + 1;
    let idl = CMatrix::identity(nblocks * side);
    let resid = idl.add(&l).mul(&k).sub(&l);
    let zp = z_prime(m);
    let mut worst = 0.0f64;
    for bi in 0..nblocks {
        for bj in 0..nblocks {
            for (i, xi2) in zp.iter().enumerate() {
                for (j, yj2) in zp.iter().enumerate() {
                    if xi2.abs() > m as i64 || yj2.abs() > m as i64 {
                        continue; // doubled values: |x| <= m/2
                    }
                    worst = worst.max(resid[(bi * side + i, bj * side + j)].norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Closed diagonal form of the uniform-measure kernel:
/// `K(τ,x;τ,y) = δ_{xy} z t^x / (1 + z t^x)`.
pub fn uniform_kernel_diagonal(t: f64, z: Complex64, x: HalfInt) -> Complex64 {
    let ztx = z * cr(t.powf(x.to_f64()));
    ztx / (cr(1.0) + ztx)
}

/// Kernel of the uniform measure on cylindric partitions with the given
/// profile: the per-time annuli `s^{σ+1} < |ζ| < s^σ` come out of the
/// generic radius selection applied to the bridged process.
pub fn cylindric_kernel(
    profile: &crate::cylindric::Profile,
    s: f64,
    z: Complex64,
    p: KernelPoint,
    q: KernelPoint,
    contour: &ContourSpec,
) -> Result<Complex64> {
    let spec = crate::cylindric::to_process_spec(profile, s, z)?;
    kernel(&spec, p, q, contour)
}

/// Shift-mixed kernel of the hook measure: the `N = 1` process with
/// `H(a;u) = (1-u)^{-μ}`, `H(b;u) = (1-u)^{μ}`, whose product-form integrand
/// carries `(1-ζt^m)^μ (1-t^{m+1}/ζ)^μ / ((1-t^m/η)^μ (1-ηt^{m+1})^μ)` with
/// principal branches.
pub fn no_kernel(
    spec: &crate::nekrasov::NoSpec,
    x: HalfInt,
    y: HalfInt,
    contour: &ContourSpec,
) -> Result<Complex64> {
    let pspec = crate::nekrasov::to_process_spec(spec)?;
    kernel(
        &pspec,
        KernelPoint::new(1, x),
        KernelPoint::new(1, y),
        contour,
    )
}
