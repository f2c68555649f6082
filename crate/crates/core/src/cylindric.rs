//! Cylindric partitions: profiles, exact enumeration, the exact-integer
//! generating function, and the bridge to the periodic Schur process.
//!
//! A cylindric partition with profile `{A[k], B[k]}` is a cyclic chain of
//! partitions `λ^(0), λ^(1), ..., λ^(N) = λ^(0)` where slot `k` carries the
//! relation `λ^(k-1) ≻ λ^(k)` (horizontal strip removed) when `A[k] = 1` and
//! `λ^(k-1) ≺ λ^(k)` when `B[k] = 1`. Its norm is `Σ_{k=1..N} |λ^(k)|`, the
//! total number of boxes of the underlying filling.

use crate::error::{Error, Result};
use crate::partition::{is_horizontal_strip, strips_above, strips_below, Partition};
use crate::process::ProcessSpec;
use crate::symfunc::Specialization;
use num_complex::Complex64;
use std::fmt;

/// A marked cylindric profile: complementary 0/1 words `A`, `B` of length
/// `N`, with the mark sitting on a `-1` (a `B` slot).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    a: Vec<u8>,
    marked: usize, // 1-based slot with B[marked] = 1
}

impl Profile {
    /// Builds a profile from the `A` word; `B` is the complement. `marked`
    /// is 1-based and must point at a `B` slot.
    pub fn new(a: Vec<u8>, marked: usize) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::config("profile must have positive period"));
        }
        if a.iter().any(|&b| b > 1) {
            return Err(Error::config("profile word must be 0/1"));
        }
        if marked == 0 || marked > a.len() {
            return Err(Error::config(format!(
                "marked index {marked} outside 1..={}",
                a.len()
            )));
        }
        if a[marked - 1] != 0 {
            return Err(Error::config("marked slot must carry B = 1 (a '≺')"));
        }
        if a.iter().all(|&x| x == 1) {
            return Err(Error::config("profile needs at least one '≺'"));
        }
        Ok(Profile { a, marked })
    }

    pub fn period(&self) -> usize {
        self.a.len()
    }

    /// `A[k]`, 1-based, cyclic.
    pub fn a(&self, k: usize) -> u8 {
        self.a[(k - 1) % self.a.len()]
    }

    pub fn b(&self, k: usize) -> u8 {
        1 - self.a(k)
    }

    pub fn marked(&self) -> usize {
        self.marked
    }

    /// `d = Σ A[k]`.
    pub fn d(&self) -> usize {
        self.a.iter().map(|&x| x as usize).sum()
    }

    /// `l = Σ B[k]`.
    pub fn l(&self) -> usize {
        self.period() - self.d()
    }

    /// Slope `κ = l/d`.
    pub fn slope(&self) -> f64 {
        self.l() as f64 / self.d() as f64
    }

    /// Partial sum `A(σ,τ] = Σ_{k=σ+1..τ} A[k]` (cyclic in `k`).
    pub fn a_between(&self, sigma: usize, tau: usize) -> usize {
        (sigma + 1..=tau).map(|k| self.a(k) as usize).sum()
    }

    pub fn b_between(&self, sigma: usize, tau: usize) -> usize {
        (sigma + 1..=tau).map(|k| self.b(k) as usize).sum()
    }

    /// Cyclic rotation by one slot: the relation word moves so that what was
    /// slot `k` becomes slot `k+1`.
    pub fn rotated(&self) -> Profile {
        let n = self.a.len();
        let mut a = vec![0u8; n];
        for k in 0..n {
            a[(k + 1) % n] = self.a[k];
        }
        let marked = (self.marked % n) + 1;
        Profile { a, marked }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A=")?;
        for &x in &self.a {
            write!(f, "{x}")?;
        }
        write!(f, ";mark={}", self.marked)
    }
}

/// The profile of the triple `(μ, d, l)`: period `N = d + l`, with `B`-slots
/// at `{μ_i - i + l + 1 : i = 1..l}` and the mark at the wrap relation
/// `λ^(0) ≺ λ^(1)` when it is a `≺` (always the case for `ℓ(μ) < l`),
/// otherwise at the first `≺` slot.
pub fn profile_from_shape(mu: &Partition, d: usize, l: usize) -> Result<Profile> {
    if (mu.part(1) as usize) > d {
        return Err(Error::config(format!(
            "need d >= mu_1, got d = {d}, mu_1 = {}",
            mu.part(1)
        )));
    }
    if mu.len() > l {
        return Err(Error::config(format!(
            "need l >= len(mu), got l = {l}, len = {}",
            mu.len()
        )));
    }
    if d + l == 0 {
        return Err(Error::config("period d + l must be positive"));
    }
    if l == 0 {
        return Err(Error::config("profile needs l >= 1 (at least one '≺')"));
    }
    let n = d + l;
    let mut a = vec![1u8; n];
    for i in 1..=l {
        let k = mu.part(i) as i64 - i as i64 + l as i64 + 1;
        debug_assert!(k >= 1 && k <= n as i64);
        a[(k - 1) as usize] = 0;
    }
    let marked = if a[0] == 0 {
        1
    } else {
        a.iter().position(|&x| x == 0).unwrap() + 1
    };
    Profile::new(a, marked)
}

/// Recovers `(μ, d, l)` from a profile built by [`profile_from_shape`].
pub fn shape_from_profile(profile: &Profile) -> (Partition, usize, usize) {
    let l = profile.l();
    let d = profile.d();
    let mut ks: Vec<i64> = (1..=profile.period() as i64)
        .filter(|&k| profile.b(k as usize) == 1)
        .collect();
    ks.sort_unstable();
    // k_(i) ascending corresponds to i = l, l-1, ..., 1
    let mut parts = Vec::with_capacity(l);
    for (pos, &k) in ks.iter().enumerate() {
        let i = (l - pos) as i64;
        let mu_i = k + i - l as i64 - 1;
        if mu_i > 0 {
            parts.push(mu_i as u32);
        }
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    (
        Partition::new(parts).expect("recovered parts form a partition"),
        d,
        l,
    )
}

/// A cylindric partition as its chain of content-line partitions
/// (`diagonals[k-1]` is `λ^(k)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylindricPartition {
    pub diagonals: Vec<Partition>,
}

impl CylindricPartition {
    pub fn norm(&self) -> u64 {
        self.diagonals.iter().map(|p| p.norm()).sum()
    }

    /// Checks every cyclic interlacing relation against the profile.
    pub fn satisfies(&self, profile: &Profile) -> bool {
        let n = profile.period();
        if self.diagonals.len() != n {
            return false;
        }
        let lam = |k: usize| -> &Partition {
            // λ^(0) = λ^(N)
            &self.diagonals[(k + n - 1) % n]
        };
        (1..=n).all(|k| {
            let prev = lam(k - 1);
            let next = &self.diagonals[k - 1];
            if profile.a(k) == 1 {
                is_horizontal_strip(prev, next)
            } else {
                is_horizontal_strip(next, prev)
            }
        })
    }
}

/// Enumerates all cylindric partitions of the profile with norm `<= max_norm`
/// by depth-first extension of the interlacing chain with cyclic closure.
pub fn enumerate_cylindric(profile: &Profile, max_norm: u64) -> Result<Vec<CylindricPartition>> {
    let n = profile.period();
    let mut out = Vec::new();
    let mut budget_guard: u64 = 0;
    // iterate over λ^(0) first, then extend; λ^(0) = λ^(N) counts once
    let lam0s = crate::partition::enumerate_partitions(max_norm as i64)?;
    let mut chain: Vec<Partition> = Vec::with_capacity(n);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        profile: &Profile,
        lam0: &Partition,
        chain: &mut Vec<Partition>,
        used: u64,
        max_norm: u64,
        out: &mut Vec<CylindricPartition>,
        guard: &mut u64,
    ) -> Result<()> {
        *guard += 1;
        if *guard > 200_000_000 {
            return Err(Error::resource("cylindric enumeration exceeded budget"));
        }
        let n = profile.period();
        let k = chain.len() + 1; // slot to satisfy next
        let prev = if chain.is_empty() {
            lam0
        } else {
            chain.last().unwrap()
        };
        if k == n {
            // close the cycle: relation between λ^(N-1) and λ^(N) = λ^(0)
            let ok = if profile.a(n) == 1 {
                is_horizontal_strip(prev, lam0)
            } else {
                is_horizontal_strip(lam0, prev)
            };
            if ok && used + lam0.norm() <= max_norm {
                let mut diagonals = chain.clone();
                diagonals.push(lam0.clone());
                out.push(CylindricPartition { diagonals });
            }
            return Ok(());
        }
        // λ^(k): budget must still accommodate λ^(N) = λ^(0)
        let room = max_norm - used;
        if lam0.norm() > room {
            return Ok(());
        }
        let cands = if profile.a(k) == 1 {
            strips_below(prev)
        } else {
            strips_above(prev, room - lam0.norm())
        };
        for next in cands {
            if used + next.norm() + lam0.norm() > max_norm {
                continue;
            }
            let used2 = used + next.norm();
            chain.push(next);
            rec(profile, lam0, chain, used2, max_norm, out, guard)?;
            chain.pop();
        }
        Ok(())
    }
    for lam0 in &lam0s {
        if n == 1 {
            // period one: the single relation is λ ≺ λ, an empty strip, so
            // every partition qualifies
            if lam0.norm() <= max_norm {
                out.push(CylindricPartition {
                    diagonals: vec![lam0.clone()],
                });
            }
            continue;
        }
        rec(
            profile,
            lam0,
            &mut chain,
            0,
            max_norm,
            &mut out,
            &mut budget_guard,
        )?;
    }
    out.sort_by(|x, y| (x.norm(), &x.diagonals).cmp(&(y.norm(), &y.diagonals)));
    Ok(out)
}

/// Exact counts by norm from the enumeration.
pub fn counts_by_norm(profile: &Profile, max_norm: u64) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; max_norm as usize + 1];
    for c in enumerate_cylindric(profile, max_norm)? {
        counts[c.norm() as usize] += 1;
    }
    Ok(counts)
}

/// `m(N)`: the smallest positive integer congruent to `m` mod `N`.
fn m_of_n(m: i64, n: usize) -> usize {
    let r = m.rem_euclid(n as i64) as usize;
    if r == 0 {
        n
    } else {
        r
    }
}

/// Exact integer coefficients of `s^0..s^max_power` of the partition
/// function product
/// `Π_{n>=1} 1/(1-s^{nN}) Π_{A[p]=1, B[q]=1} 1/(1-s^{(p-q)(N)+(n-1)N})`.
pub fn generating_function_formula(profile: &Profile, max_power: usize) -> Vec<u64> {
    let n = profile.period();
    let mut coeffs = vec![0u64; max_power + 1];
    coeffs[0] = 1;
    let mut multiply_geom = |step: usize| {
        // multiply by 1/(1 - s^step)
        if step == 0 || step > max_power {
            return;
        }
        for i in step..=max_power {
            coeffs[i] += coeffs[i - step];
        }
    };
    for nn in 1.. {
        let base = nn * n;
        if base > max_power && (nn - 1) * n + 1 > max_power {
            break;
        }
        multiply_geom(base);
        for p in 1..=n {
            if profile.a(p) != 1 {
                continue;
            }
            for q in 1..=n {
                if profile.b(q) != 1 {
                    continue;
                }
                let e = m_of_n(p as i64 - q as i64, n) + (nn - 1) * n;
                multiply_geom(e);
            }
        }
    }
    coeffs
}

/// The periodic Schur process whose trajectories are exactly the cylindric
/// partitions of this profile weighted by `s^{norm}`:
/// `H(a[k];u) = (1-s^k u)^{-A[k]}`, `H(b[k];u) = (1-s^{-k} u)^{-B[k]}`,
/// `t = s^N`.
pub fn to_process_spec(profile: &Profile, s: f64, z: Complex64) -> Result<ProcessSpec> {
    if !(0.0 < s && s < 1.0) {
        return Err(Error::config("s must lie in (0,1)"));
    }
    let n = profile.period();
    let t = s.powi(n as i32);
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for k in 1..=n {
        if profile.a(k) == 1 {
            a.push(Specialization::single(s.powi(k as i32)));
            b.push(Specialization::Trivial);
        } else {
            a.push(Specialization::Trivial);
            b.push(Specialization::single(s.powi(-(k as i32))));
        }
    }
    ProcessSpec::new(t, z, a, b)
}

/// Staircase profile `A = (1,0,1,0,...)` with `d = l`, mark at slot 2.
pub fn staircase_profile(d: usize) -> Profile {
    let mut a = Vec::with_capacity(2 * d);
    for _ in 0..d {
        a.push(1);
        a.push(0);
    }
    Profile::new(a, 2).expect("staircase profile is valid")
}

/// Corner profile `A = (1^d, 0^l)` (rectangle shape `μ = d × l`).
pub fn corner_profile(d: usize, l: usize) -> Profile {
    let mut a = vec![1u8; d];
    a.extend(std::iter::repeat_n(0, l));
    Profile::new(a, d + 1).expect("corner profile is valid")
}

/// The paper's period-7 example profile (shape `(3,1)` in a 4×3 frame).
pub fn paper_n7_profile() -> Profile {
    Profile::new(vec![0, 1, 0, 1, 1, 0, 1], 1).expect("valid")
}

/// Weighted cylindric statistics by direct enumeration: the probability that
/// the content-line `λ^(tau)` Maya set contains `x`, under weights
/// `s^{norm}` truncated at `max_norm`.
pub fn cylindric_density_oracle(
    profile: &Profile,
    s: f64,
    tau: usize,
    x: crate::partition::HalfInt,
    max_norm: u64,
) -> Result<f64> {
    let all = enumerate_cylindric(profile, max_norm)?;
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for c in &all {
        let w = s.powi(c.norm() as i32);
        den += w;
        if c.diagonals[tau - 1].maya_contains(0, x) {
            num += w;
        }
    }
    Ok(num / den)
}
