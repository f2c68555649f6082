//! The periodic Schur process: weights on cyclic partition sequences, the
//! exact partition function, shift mixing, and brute-force correlation
//! oracles obtained by direct enumeration of trajectories.
//!
//! A trajectory is `λ^(N) = λ^(0) ⊃ μ^(1) ⊂ λ^(1) ⊃ ... ⊃ μ^(N) ⊂ λ^(N)`
//! with weight `t^{|λ^(0)|} Π_k s_{λ^(k-1)/μ^(k)}(a[k]) s_{λ^(k)/μ^(k)}(b[k])`.
//! The oracles below sum this weight over all trajectories whose parts have
//! norm at most a cutoff; they are the independent ground truth every kernel
//! in this crate is checked against.

use crate::error::{Error, Result};
use crate::partition::{
    enumerate_partitions, strips_above, strips_below, subpartitions, HalfInt, Partition,
};
use crate::qseries::{theta3, Nome};
use crate::quad::cr;
use crate::symfunc::{skew_schur, Specialization};
use num_complex::Complex64;

/// Definition of a periodic Schur process: period, nome, shift parameter and
/// the 2N specializations.
#[derive(Debug, Clone)]
pub struct ProcessSpec {
    period: usize,
    t: f64,
    z: Complex64,
    a: Vec<Specialization>,
    b: Vec<Specialization>,
}

impl ProcessSpec {
    pub fn new(
        t: f64,
        z: Complex64,
        a: Vec<Specialization>,
        b: Vec<Specialization>,
    ) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::config(
                "specialization lists must be nonempty and of equal length",
            ));
        }
        if !(0.0 < t && t < 1.0) {
            return Err(Error::config(format!("t must lie in (0,1), got {t}")));
        }
        if z.norm() == 0.0 {
            return Err(Error::config("z must be nonzero"));
        }
        let nome = Nome::real(t)?;
        let th = theta3(z, &nome)?;
        if th.norm() < 1e-10 {
            return Err(Error::config(format!(
                "z = {z} is at (or too near) a zero of theta3(z;t)"
            )));
        }
        Ok(ProcessSpec {
            period: a.len(),
            t,
            z,
            a,
            b,
        })
    }

    /// Uniform measure: all specializations trivial.
    pub fn uniform(period: usize, t: f64, z: Complex64) -> Result<Self> {
        ProcessSpec::new(
            t,
            z,
            vec![Specialization::Trivial; period],
            vec![Specialization::Trivial; period],
        )
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn nome(&self) -> Nome {
        Nome::real(self.t).expect("validated at construction")
    }

    /// `s = t^{1/N}`.
    pub fn s(&self) -> f64 {
        self.t.powf(1.0 / self.period as f64)
    }

    /// `a[k]`, 1-based as in the weight formula.
    pub fn a(&self, k: usize) -> &Specialization {
        &self.a[k - 1]
    }

    pub fn b(&self, k: usize) -> &Specialization {
        &self.b[k - 1]
    }

    /// Aggregate `A_n = Σ_k p_n(a[k]) / n`.
    pub fn a_aggregate(&self, n: u32) -> Complex64 {
        self.a.iter().map(|s| s.scaled_power_sum(n)).sum()
    }

    pub fn b_aggregate(&self, n: u32) -> Complex64 {
        self.b.iter().map(|s| s.scaled_power_sum(n)).sum()
    }

    /// Largest growth radius among all specializations.
    pub fn growth_radius(&self) -> f64 {
        self.a
            .iter()
            .chain(self.b.iter())
            .map(|s| s.growth_radius())
            .fold(0.0f64, f64::max)
    }

    pub fn with_z(&self, z: Complex64) -> Result<Self> {
        ProcessSpec::new(self.t, z, self.a.clone(), self.b.clone())
    }
}

/// One cyclic trajectory; `lambdas[k-1]` is `λ^(k)` and `mus[k-1]` is `μ^(k)`
/// for `k = 1..N`, with `λ^(0) = λ^(N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub lambdas: Vec<Partition>,
    pub mus: Vec<Partition>,
    pub shift: i64,
}

impl Trajectory {
    pub fn lambda(&self, k: usize) -> &Partition {
        // cyclic: λ^(0) = λ^(N)
        if k == 0 {
            &self.lambdas[self.lambdas.len() - 1]
        } else {
            &self.lambdas[k - 1]
        }
    }
}

/// Weight of one trajectory (zero whenever a containment fails).
pub fn weight(spec: &ProcessSpec, traj: &Trajectory) -> Complex64 {
    let n = spec.period();
    assert_eq!(traj.lambdas.len(), n);
    assert_eq!(traj.mus.len(), n);
    let mut w = cr(spec.t().powi(traj.lambda(0).norm() as i32));
    for k in 1..=n {
        let mu = &traj.mus[k - 1];
        w *= skew_schur(traj.lambda(k - 1), mu, spec.a(k));
        if w.norm() == 0.0 {
            return w;
        }
        w *= skew_schur(traj.lambda(k), mu, spec.b(k));
        if w.norm() == 0.0 {
            return w;
        }
    }
    w
}

/// Partition function by the closed formula
/// `Π_{n>=1}(1-t^n)^{-1} · exp Σ_n n (Σ_{l<k} a_n[k] b_n[l] + t^n A_n B_n / (1-t^n))`.
#[allow(clippy::needless_range_loop)]
pub fn partition_function_formula(spec: &ProcessSpec) -> Result<Complex64> {
    let t = spec.t();
    let nn = spec.period();
    let mut exponent = Complex64::new(0.0, 0.0);
    let mut small_run = 0;
    for n in 1..=4000u32 {
        let an: Vec<Complex64> = (1..=nn).map(|k| spec.a(k).scaled_power_sum(n)).collect();
        let bn: Vec<Complex64> = (1..=nn).map(|k| spec.b(k).scaled_power_sum(n)).collect();
        let mut cross = Complex64::new(0.0, 0.0);
        for k in 1..nn {
            for l in 0..k {
                cross += an[k] * bn[l];
            }
        }
        let asum: Complex64 = an.iter().sum();
        let bsum: Complex64 = bn.iter().sum();
        let tn = t.powi(n as i32);
        let term = cr(n as f64) * (cross + cr(tn / (1.0 - tn)) * asum * bsum);
        exponent += term;
        if term.norm() < 1e-18 * exponent.norm().max(1.0) {
            small_run += 1;
            if small_run >= 4 {
                let euler: f64 = {
                    let mut p = 1.0;
                    let mut tk = t;
                    while tk > 1e-18 {
                        p *= 1.0 - tk;
                        tk *= t;
                    }
                    p
                };
                return Ok(exponent.exp() / cr(euler));
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::domain(
        "partition function series diverges (check growth radii)",
    ))
}

/// Work budget for the trajectory oracles.
#[derive(Debug, Clone, Copy)]
pub struct OracleBudget {
    pub max_trajectories: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_trajectories: 50_000_000,
        }
    }
}

/// How the skew factor at one slot constrains the next partition.
enum Support {
    Equal,
    StripDown, // λ^(k) obtained from λ^(k-1) by removing a horizontal strip
    StripUp,   // λ^(k) ⊇ λ^(k-1), horizontal strip
    Contains,  // only containment (general specialization on one side)
    General,   // both sides general
}

fn slot_support(a: &Specialization, b: &Specialization) -> Support {
    let at = a.is_trivial();
    let bt = b.is_trivial();
    let a_single = matches!(a, Specialization::Single(_));
    let b_single = matches!(b, Specialization::Single(_));
    match (at, bt) {
        (true, true) => Support::Equal,
        (false, true) => {
            if a_single {
                Support::StripDown
            } else {
                Support::Contains
            }
        }
        (true, false) => {
            if b_single {
                Support::StripUp
            } else {
                Support::Contains
            }
        }
        (false, false) => Support::General,
    }
}

/// The slot transfer value `T_k(ν, λ) = Σ_{μ} s_{ν/μ}(a[k]) s_{λ/μ}(b[k])`.
fn slot_transfer(spec: &ProcessSpec, k: usize, prev: &Partition, next: &Partition) -> Complex64 {
    let a = spec.a(k);
    let b = spec.b(k);
    if b.is_trivial() {
        return skew_schur(prev, next, a);
    }
    if a.is_trivial() {
        return skew_schur(next, prev, b);
    }
    if let (Specialization::Single(x), Specialization::Single(y)) = (a, b) {
        // both skew factors are strip indicators, and the two interlacing
        // conditions decouple row by row:
        // μ_i ∈ [max(ν_{i+1}, λ_{i+1}), min(ν_i, λ_i)]
        let rows = prev.len().max(next.len());
        let mut total = cr(1.0);
        for i in 1..=rows {
            let lo = prev.part(i + 1).max(next.part(i + 1)) as i64;
            let hi = prev.part(i).min(next.part(i)) as i64;
            if lo > hi {
                return Complex64::new(0.0, 0.0);
            }
            let mut row = Complex64::new(0.0, 0.0);
            for m in lo..=hi {
                row += x.powu((prev.part(i) as i64 - m) as u32)
                    * y.powu((next.part(i) as i64 - m) as u32);
            }
            total *= row;
        }
        return total;
    }
    let inter = crate::partition::intersect(prev, next);
    let mut acc = Complex64::new(0.0, 0.0);
    for mu in subpartitions(&inter) {
        acc += skew_schur(prev, &mu, a) * skew_schur(next, &mu, b);
    }
    acc
}

/// Candidate partitions for `λ^(k)` given `λ^(k-1)`, under the slot-k support.
fn slot_candidates(
    spec: &ProcessSpec,
    k: usize,
    prev: &Partition,
    max_norm: u64,
    all: &[Partition],
) -> Vec<Partition> {
    match slot_support(spec.a(k), spec.b(k)) {
        Support::Equal => vec![prev.clone()],
        Support::StripDown => strips_below(prev),
        Support::StripUp => strips_above(prev, max_norm),
        Support::Contains => {
            if spec.b(k).is_trivial() {
                subpartitions(prev)
            } else {
                all.iter()
                    .filter(|l| prev.contained_in(l))
                    .cloned()
                    .collect()
            }
        }
        Support::General => all.to_vec(),
    }
}

/// Enumerates all trajectories with every `|λ^(k)| <= max_norm` and calls
/// `visit(lambdas, total_weight)` for each one with nonzero weight
/// (`lambdas[k-1]` is `λ^(k)`). The weight includes the `t^{|λ^(0)|}` factor
/// and the μ-sums of every slot.
fn for_each_trajectory(
    spec: &ProcessSpec,
    max_norm: u64,
    budget: &OracleBudget,
    visit: &mut dyn FnMut(&[Partition], Complex64),
) -> Result<()> {
    let n = spec.period();
    let all = enumerate_partitions(max_norm as i64)?;
    let mut count: u64 = 0;

    #[allow(clippy::too_many_arguments)]
    fn rec(
        spec: &ProcessSpec,
        all: &[Partition],
        max_norm: u64,
        budget: &OracleBudget,
        count: &mut u64,
        stack: &mut Vec<Partition>,
        partial: Complex64,
        visit: &mut dyn FnMut(&[Partition], Complex64),
    ) -> Result<()> {
        let n = spec.period();
        let depth = stack.len(); // λ^(0)..λ^(depth-1) chosen so far
        *count += 1;
        if *count > budget.max_trajectories {
            return Err(Error::resource(format!(
                "trajectory enumeration exceeded budget of {}",
                budget.max_trajectories
            )));
        }
        if depth == n {
            // close the cycle: slot N links λ^(N-1) to λ^(N) = λ^(0)
            let w = partial * slot_transfer(spec, n, &stack[n - 1], &stack[0]);
            if w.norm() != 0.0 {
                let mut lambdas: Vec<Partition> = stack[1..].to_vec();
                lambdas.push(stack[0].clone());
                visit(&lambdas, w);
            }
            return Ok(());
        }
        let prev = stack[depth - 1].clone();
        let mut cands = slot_candidates(spec, depth, &prev, max_norm, all);
        cands.sort_by(|x, y| (x.norm(), x.parts()).cmp(&(y.norm(), y.parts())));
        for next in cands {
            if next.norm() > max_norm {
                continue;
            }
            let tv = slot_transfer(spec, depth, &prev, &next);
            if tv.norm() == 0.0 {
                continue;
            }
            stack.push(next);
            rec(
                spec,
                all,
                max_norm,
                budget,
                count,
                stack,
                partial * tv,
                visit,
            )?;
            stack.pop();
        }
        Ok(())
    }

    let mut stack: Vec<Partition> = Vec::with_capacity(n);
    for lam0 in &all {
        let t_pow = cr(spec.t().powi(lam0.norm() as i32));
        if n == 1 {
            count += 1;
            if count > budget.max_trajectories {
                return Err(Error::resource("trajectory enumeration exceeded budget"));
            }
            let w = t_pow * slot_transfer(spec, 1, lam0, lam0);
            if w.norm() != 0.0 {
                visit(std::slice::from_ref(lam0), w);
            }
            continue;
        }
        stack.push(lam0.clone());
        rec(
            spec, &all, max_norm, budget, &mut count, &mut stack, t_pow, visit,
        )?;
        stack.pop();
    }
    Ok(())
}

/// Truncated partition function: the sum of all trajectory weights with
/// every `|λ^(k)| <= max_norm`.
pub fn partition_function_oracle(spec: &ProcessSpec, max_norm: u64) -> Result<Complex64> {
    partition_function_oracle_with(spec, max_norm, &OracleBudget::default())
}

pub fn partition_function_oracle_with(
    spec: &ProcessSpec,
    max_norm: u64,
    budget: &OracleBudget,
) -> Result<Complex64> {
    let mut z = Complex64::new(0.0, 0.0);
    for_each_trajectory(spec, max_norm, budget, &mut |_, w| z += w)?;
    Ok(z)
}

/// `Prob{S} = z^S t^{S²/2} / θ₃(z;t)`.
pub fn shift_probability(spec: &ProcessSpec, s: i64) -> Result<Complex64> {
    let nome = spec.nome();
    let th = theta3(spec.z(), &nome)?;
    let zs = spec.z().powi(s as i32);
    Ok(zs * cr(spec.t().powf(s as f64 * s as f64 / 2.0)) / th)
}

/// Shift cutoff: `|S|` beyond which `t^{S²/2} < 1e-16`.
pub fn shift_cutoff(t: f64) -> i64 {
    let r = -t.ln();
    ((2.0 * 37.0 / r).sqrt().ceil() as i64).max(2)
}

/// A correlation point: time in `1..=N`, position in `Z' = Z + 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Point {
    pub tau: usize,
    pub x: HalfInt,
}

impl Point {
    pub fn new(tau: usize, x: HalfInt) -> Self {
        Point { tau, x }
    }
}

/// Brute-force correlation function of the (optionally shift-mixed) process:
/// the normalized weight of trajectories whose Maya configurations contain
/// all requested points. Repeated points give zero.
pub fn correlation_oracle(
    spec: &ProcessSpec,
    points: &[Point],
    shift_mixed: bool,
    max_norm: u64,
) -> Result<Complex64> {
    correlation_oracle_with(
        spec,
        points,
        shift_mixed,
        max_norm,
        &OracleBudget::default(),
    )
}

pub fn correlation_oracle_with(
    spec: &ProcessSpec,
    points: &[Point],
    shift_mixed: bool,
    max_norm: u64,
    budget: &OracleBudget,
) -> Result<Complex64> {
    for p in points {
        if p.tau < 1 || p.tau > spec.period() {
            return Err(Error::config(format!(
                "point time {} outside 1..={}",
                p.tau,
                spec.period()
            )));
        }
    }
    for (i, p) in points.iter().enumerate() {
        if points[i + 1..].contains(p) {
            return Ok(Complex64::new(0.0, 0.0)); // configurations are simple
        }
    }
    if !shift_mixed {
        let (num, den) = correlation_raw(spec, points, 0, max_norm, budget)?;
        return Ok(num / den);
    }
    // direct (λ, S) enumeration of the shift-mixed process, single pass
    let nome = spec.nome();
    let th = theta3(spec.z(), &nome)?;
    let cutoff = shift_cutoff(spec.t());
    let shift_weights: Vec<(i64, Complex64)> = (-cutoff..=cutoff)
        .map(|s| {
            (
                s,
                spec.z().powi(s as i32) * cr(spec.t().powf(s as f64 * s as f64 / 2.0)),
            )
        })
        .collect();
    let mut num = Complex64::new(0.0, 0.0);
    let mut z_tr = Complex64::new(0.0, 0.0);
    for_each_trajectory(spec, max_norm, budget, &mut |lambdas, w| {
        z_tr += w;
        for &(s, ws) in &shift_weights {
            let ok = points
                .iter()
                .all(|p| lambdas[p.tau - 1].maya_contains(s, p.x));
            if ok {
                num += ws * w;
            }
        }
    })?;
    Ok(num / (th * z_tr))
}

/// Applies the shift-mixing sum to unmixed oracle values:
/// `ρ^shift(x) = θ₃^{-1} Σ_S z^S t^{S²/2} ρ(x - S)`.
pub fn shift_mix_from_unmixed(
    spec: &ProcessSpec,
    points: &[Point],
    max_norm: u64,
) -> Result<Complex64> {
    let nome = spec.nome();
    let th = theta3(spec.z(), &nome)?;
    let cutoff = shift_cutoff(spec.t());
    let mut acc = Complex64::new(0.0, 0.0);
    for s in -cutoff..=cutoff {
        let shifted: Vec<Point> = points
            .iter()
            .map(|p| Point::new(p.tau, p.x.shifted(-s)))
            .collect();
        let rho = correlation_oracle(spec, &shifted, false, max_norm)?;
        acc += spec.z().powi(s as i32) * cr(spec.t().powf(s as f64 * s as f64 / 2.0)) * rho;
    }
    Ok(acc / th)
}

/// Unnormalised numerator (trajectories whose shifted Maya sets contain the
/// points) and truncated partition function, at a fixed shift `S`.
fn correlation_raw(
    spec: &ProcessSpec,
    points: &[Point],
    shift: i64,
    max_norm: u64,
    budget: &OracleBudget,
) -> Result<(Complex64, Complex64)> {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = Complex64::new(0.0, 0.0);
    for_each_trajectory(spec, max_norm, budget, &mut |lambdas, w| {
        den += w;
        let ok = points
            .iter()
            .all(|p| lambdas[p.tau - 1].maya_contains(shift, p.x));
        if ok {
            num += w;
        }
    })?;
    Ok((num, den))
}
