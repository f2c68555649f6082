//! Specializations of the algebra of symmetric functions, and skew Schur
//! function evaluation through the Jacobi–Trudi determinant.
//!
//! A specialization is stored as a closed-form constructor, never as a raw
//! coefficient table, so its scaled power sums `a_n = p_n/n`, the generating
//! function `ln H(u) = Σ a_n u^n`, and a growth radius are all available
//! exactly.

use crate::error::{Error, Result};
use crate::linalg;
use crate::partition::Partition;
use crate::quad::cr;
use num_complex::Complex64;

/// An algebra homomorphism Λ → C, represented by what it does to power sums.
#[derive(Debug, Clone, PartialEq)]
pub enum Specialization {
    /// All power sums vanish; `H(u) = 1`.
    Trivial,
    /// Evaluation at a single variable `x`: `p_n = x^n`, `H(u) = 1/(1-xu)`.
    Single(Complex64),
    /// `H(u) = (1-u)^{-mu}`: `p_n = mu`, `h_n = (mu)_n / n!`.
    Rho(Complex64),
    /// Totally positive sequence parameters:
    /// `H(u) = e^{drift u} Π(1+β_i u)/Π(1-α_i u)`.
    TotallyPositive {
        alpha: Vec<f64>,
        beta: Vec<f64>,
        drift: f64,
    },
    /// Scalar multiple: `p_n ↦ q^n p_n`.
    Scaled(Complex64, Box<Specialization>),
    /// Sign flip of all power sums.
    Negated(Box<Specialization>),
    /// Union: power sums add, `H` multiplies.
    Union(Vec<Specialization>),
}

impl Specialization {
    pub fn single(x: f64) -> Self {
        Specialization::Single(cr(x))
    }

    pub fn tp(alpha: &[f64], beta: &[f64], drift: f64) -> Self {
        Specialization::TotallyPositive {
            alpha: alpha.to_vec(),
            beta: beta.to_vec(),
            drift,
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            Specialization::Trivial => true,
            Specialization::Scaled(_, s) | Specialization::Negated(s) => s.is_trivial(),
            Specialization::Union(v) => v.iter().all(|s| s.is_trivial()),
            Specialization::TotallyPositive { alpha, beta, drift } => {
                alpha.is_empty() && beta.is_empty() && *drift == 0.0
            }
            _ => false,
        }
    }

    /// `a_n = p_n / n` for `n >= 1`.
    pub fn scaled_power_sum(&self, n: u32) -> Complex64 {
        self.power_sum(n) / cr(n as f64)
    }

    /// `p_n` for `n >= 1`.
    pub fn power_sum(&self, n: u32) -> Complex64 {
        assert!(n >= 1);
        match self {
            Specialization::Trivial => Complex64::new(0.0, 0.0),
            Specialization::Single(x) => x.powu(n),
            Specialization::Rho(mu) => *mu,
            Specialization::TotallyPositive { alpha, beta, drift } => {
                let mut p = Complex64::new(0.0, 0.0);
                for &a in alpha {
                    p += cr(a.powi(n as i32));
                }
                let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                for &b in beta {
                    p += cr(sign * b.powi(n as i32));
                }
                if n == 1 {
                    p += cr(*drift);
                }
                p
            }
            Specialization::Scaled(q, s) => q.powu(n) * s.power_sum(n),
            Specialization::Negated(s) => -s.power_sum(n),
            Specialization::Union(v) => v.iter().map(|s| s.power_sum(n)).sum(),
        }
    }

    /// Radius `R` with `p_n = O(R^n)` (up to the degree-one drift term).
    pub fn growth_radius(&self) -> f64 {
        match self {
            Specialization::Trivial => 0.0,
            Specialization::Single(x) => x.norm(),
            Specialization::Rho(mu) => {
                if mu.norm() == 0.0 {
                    0.0
                } else {
                    1.0
                }
            }
            Specialization::TotallyPositive { alpha, beta, drift } => {
                let m = alpha
                    .iter()
                    .chain(beta.iter())
                    .fold(0.0f64, |acc, &v| acc.max(v.abs()));
                if m == 0.0 && *drift == 0.0 {
                    0.0
                } else {
                    // the pure-drift specialization has p_n = 0 for n >= 2
                    m.max(if *drift != 0.0 {
                        f64::MIN_POSITIVE
                    } else {
                        0.0
                    })
                }
            }
            Specialization::Scaled(q, s) => q.norm() * s.growth_radius(),
            Specialization::Negated(s) => s.growth_radius(),
            Specialization::Union(v) => v.iter().map(|s| s.growth_radius()).fold(0.0f64, f64::max),
        }
    }

    /// `ln H(self; u) = Σ_{n>=1} p_n u^n / n`, in closed form per constructor
    /// (principal logarithms). This is what analytically continues every
    /// generating function beyond the radius of the power-sum series.
    pub fn log_h(&self, u: Complex64) -> Result<Complex64> {
        match self {
            Specialization::Trivial => Ok(Complex64::new(0.0, 0.0)),
            Specialization::Single(x) => {
                let w = *x * u;
                if w.im == 0.0 && w.re >= 1.0 {
                    return Err(Error::domain(format!(
                        "log H(single) at pole/cut: xu = {w}"
                    )));
                }
                Ok(-(cr(1.0) - w).ln())
            }
            Specialization::Rho(mu) => {
                if mu.norm() == 0.0 {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                if u.im == 0.0 && u.re >= 1.0 {
                    return Err(Error::domain(format!("log H(rho) on the cut: u = {u}")));
                }
                Ok(-*mu * (cr(1.0) - u).ln())
            }
            Specialization::TotallyPositive { alpha, beta, drift } => {
                let mut acc = cr(*drift) * u;
                for &a in alpha {
                    let w = cr(a) * u;
                    if w.im == 0.0 && w.re >= 1.0 {
                        return Err(Error::domain("log H(tp) at alpha pole"));
                    }
                    acc -= (cr(1.0) - w).ln();
                }
                for &b in beta {
                    acc += (cr(1.0) + cr(b) * u).ln();
                }
                Ok(acc)
            }
            Specialization::Scaled(q, s) => s.log_h(*q * u),
            Specialization::Negated(s) => Ok(-s.log_h(u)?),
            Specialization::Union(v) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for s in v {
                    acc += s.log_h(u)?;
                }
                Ok(acc)
            }
        }
    }

    /// Complete homogeneous symmetric functions `h_0..h_max` by the Newton
    /// recursion `n h_n = Σ_{m=1}^n p_m h_{n-m}`.
    pub fn h_table(&self, max: usize) -> Vec<Complex64> {
        let mut h = vec![Complex64::new(0.0, 0.0); max + 1];
        h[0] = cr(1.0);
        let p: Vec<Complex64> = (1..=max as u32).map(|n| self.power_sum(n)).collect();
        for n in 1..=max {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 1..=n {
                acc += p[m - 1] * h[n - m];
            }
            h[n] = acc / cr(n as f64);
        }
        h
    }
}

/// `h_n(spec)`; `h_0 = 1`, `h_{n<0} = 0` by caller convention.
pub fn complete_homogeneous(spec: &Specialization, n: i64) -> Complex64 {
    if n < 0 {
        return Complex64::new(0.0, 0.0);
    }
    spec.h_table(n as usize)[n as usize]
}

/// Skew Schur function `s_{λ/μ}(spec)` by the Jacobi–Trudi determinant
/// `det[h_{λ_i - i - μ_j + j}]`.
pub fn skew_schur(lam: &Partition, mu: &Partition, spec: &Specialization) -> Complex64 {
    if !mu.contained_in(lam) {
        return Complex64::new(0.0, 0.0);
    }
    if lam == mu {
        return cr(1.0);
    }
    // cheap exact paths for the degenerate constructors
    if spec.is_trivial() {
        return Complex64::new(0.0, 0.0); // lam != mu here
    }
    if let Specialization::Single(x) = spec {
        return if crate::partition::is_horizontal_strip(lam, mu) {
            x.powu((lam.norm() - mu.norm()) as u32)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let r = lam.len().max(mu.len());
    let max_idx = lam.part(1) as i64 + r as i64;
    let h = spec.h_table(max_idx.max(0) as usize);
    let get = |n: i64| -> Complex64 {
        if n < 0 {
            Complex64::new(0.0, 0.0)
        } else {
            h[n as usize]
        }
    };
    let mut m = vec![Complex64::new(0.0, 0.0); r * r];
    for i in 1..=r {
        for j in 1..=r {
            let idx = lam.part(i) as i64 - i as i64 - mu.part(j) as i64 + j as i64;
            m[(i - 1) * r + (j - 1)] = get(idx);
        }
    }
    linalg::det(r, &m)
}

/// `H(a;b) = exp Σ_{n>=1} n a_n b_n` where `a_n, b_n` are scaled power sums.
/// Divergence (terms not decaying below tolerance within the budget) is a
/// domain error.
pub fn cauchy_h(a: &Specialization, b: &Specialization) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut small_run = 0;
    for n in 1..=4000u32 {
        let term = a.power_sum(n) * b.power_sum(n) / cr(n as f64);
        acc += term;
        if term.norm() < 1e-18 * acc.norm().max(1.0) {
            small_run += 1;
            if small_run >= 4 {
                return Ok(acc.exp());
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::domain(
        "cauchy H series did not converge (growth radii multiply to >= 1?)",
    ))
}

/// `TP_{α,β,drift}(u) = e^{drift·u} Π(1+β_i u) / Π(1-α_i u)`.
pub fn tp_generating(alpha: &[f64], beta: &[f64], drift: f64, u: Complex64) -> Result<Complex64> {
    let mut v = (cr(drift) * u).exp();
    for &b in beta {
        v *= cr(1.0) + cr(b) * u;
    }
    for &a in alpha {
        let d = cr(1.0) - cr(a) * u;
        if d.norm() < 1e-14 {
            return Err(Error::domain(format!(
                "tp generating function pole at u = {u}"
            )));
        }
        v /= d;
    }
    Ok(v)
}
