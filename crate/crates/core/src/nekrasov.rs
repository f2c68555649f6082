//! The hook-length-deformed measure on partitions
//! `M_{μ,t}(λ) = Π(1-t^n)^{1-μ²} t^{|λ|} Π_□ (h²-μ²)/h²`,
//! its shift-mixed version, the hook/Cauchy identity behind it, and the
//! Plancherel degeneration. Weights are probabilities when `μ ∈ iR`, `z > 0`.

use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, subpartitions, HalfInt, Partition};
use crate::process::shift_cutoff;
use crate::qseries::{theta3, Nome};
use crate::quad::cr;
use crate::symfunc::{skew_schur, Specialization};
use num_complex::Complex64;

/// Parameters of the measure: `μ ∈ C` (purely imaginary in probability
/// mode), nome `t`, shift parameter `z`.
#[derive(Debug, Clone, Copy)]
pub struct NoSpec {
    pub mu: Complex64,
    pub t: f64,
    pub z: Complex64,
}

impl NoSpec {
    pub fn new(mu: Complex64, t: f64, z: Complex64) -> Result<Self> {
        if !(0.0 < t && t < 1.0) {
            return Err(Error::config("t must lie in (0,1)"));
        }
        if z.norm() == 0.0 {
            return Err(Error::config("z must be nonzero"));
        }
        Ok(NoSpec { mu, t, z })
    }

    /// Probability mode: `μ = i μ0`, `z > 0`.
    pub fn probability(mu0: f64, t: f64, z: f64) -> Result<Self> {
        if z <= 0.0 {
            return Err(Error::config("probability mode needs z > 0"));
        }
        NoSpec::new(Complex64::new(0.0, mu0), t, cr(z))
    }

    pub fn nome(&self) -> Nome {
        Nome::real(self.t).expect("validated")
    }
}

/// `Π_{n>=1} (1-t^n)^{1-μ²}` via the principal logarithm (real for real
/// `1-μ²`, in particular for `μ ∈ iR`).
pub fn euler_power_prefactor(spec: &NoSpec) -> Complex64 {
    let mut log_euler = 0.0f64;
    let mut tn = spec.t;
    while tn > 1e-18 {
        log_euler += (1.0 - tn).ln();
        tn *= spec.t;
    }
    ((cr(1.0) - spec.mu * spec.mu) * cr(log_euler)).exp()
}

/// `M_{μ,t}(λ)`.
pub fn no_weight(spec: &NoSpec, lam: &Partition) -> Complex64 {
    let mut w = euler_power_prefactor(spec) * cr(spec.t.powi(lam.norm() as i32));
    let mu2 = spec.mu * spec.mu;
    for h in lam.hook_lengths() {
        let h2 = cr((h as f64) * (h as f64));
        w *= (h2 - mu2) / h2;
    }
    w
}

/// Both sides of the hook/Cauchy identity:
/// `Σ_ν s_{κ/ν}(ρ_μ) s_{λ/ν}(ρ_{-μ})` against the closed product with hook
/// factors and the cross Cauchy determinant.
pub fn hook_identity_sides(
    kappa: &Partition,
    lam: &Partition,
    mu: Complex64,
) -> Result<(Complex64, Complex64)> {
    let rho_p = Specialization::Rho(mu);
    let rho_m = Specialization::Rho(-mu);
    let inter = crate::partition::intersect(kappa, lam);
    let mut lhs = Complex64::new(0.0, 0.0);
    for nu in subpartitions(&inter) {
        lhs += skew_schur(kappa, &nu, &rho_p) * skew_schur(lam, &nu, &rho_m);
    }

    let r = kappa.len().max(lam.len()).max(1);
    let ks: Vec<i64> = (1..=r)
        .map(|i| kappa.part(i) as i64 - i as i64 + r as i64)
        .collect();
    let ls: Vec<i64> = (1..=r)
        .map(|i| lam.part(i) as i64 - i as i64 + r as i64)
        .collect();
    let mut rhs = Complex64::new(1.0, 0.0);
    for h in kappa.hook_lengths() {
        rhs *= (cr(h as f64) + mu) / cr(h as f64);
    }
    for h in lam.hook_lengths() {
        rhs *= (cr(h as f64) - mu) / cr(h as f64);
    }
    let sign = if (r * (r - 1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    rhs *= cr(sign) * mu.powu(r as u32);
    for i in 0..r {
        for j in i + 1..r {
            rhs *= cr((ks[i] - ks[j]) as f64) + mu;
            rhs *= cr((ls[i] - ls[j]) as f64) - mu;
        }
    }
    for ki in &ks {
        for lj in &ls {
            let d = mu + cr((ki - lj) as f64);
            if d.norm() < 1e-13 {
                return Err(Error::domain(format!(
                    "hook identity pole: mu + k_i - l_j = 0 at k={ki}, l={lj}"
                )));
            }
            rhs /= d;
        }
    }
    Ok((lhs, rhs))
}

/// Truncated total mass `Σ_{|λ| <= max_norm} M_{μ,t}(λ)`; tends to 1.
pub fn no_normalization(spec: &NoSpec, max_norm: u64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for lam in enumerate_partitions(max_norm as i64)? {
        acc += no_weight(spec, &lam);
    }
    Ok(acc)
}

/// `(M_{μ,t}(λ), Plancherel weight)` at `t = θ/μ0²`, `μ = i μ0`.
pub fn plancherel_limit_check(theta: f64, mu0: f64, lam: &Partition) -> Result<(f64, f64)> {
    if theta <= 0.0 || mu0 == 0.0 {
        return Err(Error::config("need theta > 0 and mu0 != 0"));
    }
    let t = theta / (mu0 * mu0);
    if t >= 1.0 {
        return Err(Error::config("theta/mu0^2 must stay below 1"));
    }
    let spec = NoSpec::probability(mu0, t, 1.0)?;
    let no_value = no_weight(&spec, lam).re;
    let dim = lam.dimension();
    let n = lam.norm() as f64;
    let mut fact = 1.0;
    for k in 1..=lam.norm() {
        fact *= k as f64;
    }
    let plancherel = (-theta).exp() * (dim * theta.powf(n / 2.0) / fact).powi(2);
    Ok((no_value, plancherel))
}

/// Brute-force correlation functions of `M_{μ,t}` (optionally shift-mixed),
/// normalised by the truncated total mass.
pub fn no_correlation_oracle(
    spec: &NoSpec,
    points: &[HalfInt],
    shift_mixed: bool,
    max_norm: u64,
) -> Result<Complex64> {
    for (i, p) in points.iter().enumerate() {
        if points[i + 1..].contains(p) {
            return Ok(Complex64::new(0.0, 0.0));
        }
    }
    let lams = enumerate_partitions(max_norm as i64)?;
    let mut mass = Complex64::new(0.0, 0.0);
    let mut num = Complex64::new(0.0, 0.0);
    if !shift_mixed {
        for lam in &lams {
            let w = no_weight(spec, lam);
            mass += w;
            if points.iter().all(|&x| lam.maya_contains(0, x)) {
                num += w;
            }
        }
        return Ok(num / mass);
    }
    let nome = spec.nome();
    let th = theta3(spec.z, &nome)?;
    let cutoff = shift_cutoff(spec.t);
    for lam in &lams {
        let w = no_weight(spec, lam);
        mass += w;
        for s in -cutoff..=cutoff {
            if points.iter().all(|&x| lam.maya_contains(s, x)) {
                num += w * spec.z.powi(s as i32) * cr(spec.t.powf(s as f64 * s as f64 / 2.0));
            }
        }
    }
    Ok(num / (mass * th))
}

/// The N = 1 periodic Schur process with `a = ρ_μ`, `b = ρ_{-μ}`, whose
/// marginal on `λ` is `M_{μ,t}` (up to normalisation).
pub fn to_process_spec(spec: &NoSpec) -> Result<crate::process::ProcessSpec> {
    crate::process::ProcessSpec::new(
        spec.t,
        spec.z,
        vec![Specialization::Rho(spec.mu)],
        vec![Specialization::Rho(-spec.mu)],
    )
}
