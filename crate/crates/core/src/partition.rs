//! Integer partitions, hook lengths, horizontal strips and Maya coordinates.
//!
//! A [`Partition`] is an immutable weakly decreasing sequence of positive
//! integers. The Maya (half-integer) encoding of a partition is the point set
//! `{lambda_i - i + 1/2 : i >= 1}`, with `lambda_i = 0` past the last part, so
//! every partition occupies a left-infinite "sea" of negative half-integers.

use crate::error::{Error, Result};
use std::fmt;

/// A half-integer, stored as its double so that all lattice arithmetic stays
/// exact. The invariant is that the stored value is odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    /// Builds the half-integer `twice/2`; `twice` must be odd.
    pub fn from_twice(twice: i64) -> Result<Self> {
        if twice % 2 == 0 {
            return Err(Error::config(format!(
                "half-integer must have odd double, got {twice}"
            )));
        }
        Ok(HalfInt { twice })
    }

    /// The half-integer `k + 1/2`.
    pub fn plus_half(k: i64) -> Self {
        HalfInt { twice: 2 * k + 1 }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    /// Integer part `k` of `k + 1/2` (so `-1/2` gives `-1`).
    pub fn floor(self) -> i64 {
        (self.twice - 1).div_euclid(2)
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn shifted(self, by: i64) -> Self {
        HalfInt {
            twice: self.twice + 2 * by,
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.twice)
    }
}

/// An integer partition. Parts are weakly decreasing and positive; the empty
/// partition has no parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
    norm: u64,
}

impl Partition {
    pub fn empty() -> Self {
        Partition {
            parts: Vec::new(),
            norm: 0,
        }
    }

    /// Builds a partition from parts, validating monotonicity. Trailing zeros
    /// are stripped.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(Error::config(format!(
                    "parts must be weakly decreasing, got {:?}",
                    parts
                )));
            }
        }
        if parts.contains(&0) {
            return Err(Error::config("interior zero part".to_string()));
        }
        let norm = parts.iter().map(|&p| p as u64).sum();
        Ok(Partition { parts, norm })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `lambda_i` with the convention that parts past the length are zero
    /// (`i` is 1-based).
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 || i > self.parts.len() {
            0
        } else {
            self.parts[i - 1]
        }
    }

    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Transpose of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition::empty();
        }
        let cols = self.parts[0] as usize;
        let mut t = Vec::with_capacity(cols);
        for j in 1..=cols {
            let count = self.parts.iter().take_while(|&&p| p as usize >= j).count();
            t.push(count as u32);
        }
        Partition {
            norm: self.norm,
            parts: t,
        }
    }

    /// Containment of Young diagrams: `self ⊆ other`.
    pub fn contained_in(&self, other: &Partition) -> bool {
        self.parts
            .iter()
            .enumerate()
            .all(|(i, &p)| p <= other.part(i + 1))
    }

    /// All hook lengths, one per box, in row-major order.
    pub fn hook_lengths(&self) -> Vec<u32> {
        let conj = self.conjugate();
        let mut hooks = Vec::with_capacity(self.norm as usize);
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 1..=row as usize {
                let arm = row as usize - j;
                let leg = conj.part(j) as usize - (i + 1);
                hooks.push((arm + leg + 1) as u32);
            }
        }
        hooks
    }

    /// Number of standard Young tableaux of this shape, by the hook length
    /// formula `|λ|! / Π h`. Overflows are avoided by computing in f64; exact
    /// for the small shapes used here.
    pub fn dimension(&self) -> f64 {
        let mut v = 1.0f64;
        for k in 1..=self.norm {
            v *= k as f64;
        }
        for h in self.hook_lengths() {
            v /= h as f64;
        }
        v.round()
    }

    /// Maya membership: is `x` in `{shift + λ_i - i + 1/2 : i >= 1}`?
    pub fn maya_contains(&self, shift: i64, x: HalfInt) -> bool {
        // x = shift + λ_i - i + 1/2  <=>  λ_i - i = (x.twice - 1)/2 - shift
        let target = (x.twice() - 1) / 2 - shift;
        for (i, &p) in self.parts.iter().enumerate() {
            if p as i64 - (i as i64 + 1) == target {
                return true;
            }
        }
        // rows past the length carry λ_i = 0: target = -i for i > len
        let len = self.parts.len() as i64;
        target < 0 && -target > len
    }

    /// The Maya set restricted to `x >= lo`, ascending. The coordinates
    /// `λ_i - i + 1/2` are strictly decreasing in `i`, so the scan stops at
    /// the first point below `lo`.
    pub fn maya_points(&self, shift: i64, lo: HalfInt) -> Vec<HalfInt> {
        let mut pts = Vec::new();
        let mut i = 1i64;
        loop {
            let h = HalfInt::plus_half(shift + self.part(i as usize) as i64 - i);
            if h < lo {
                break;
            }
            pts.push(h);
            i += 1;
        }
        pts.reverse();
        pts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// `big ≻ small`: the interlacing condition `big_i >= small_i >= big_{i+1}`,
/// i.e. `big/small` is a horizontal strip.
pub fn is_horizontal_strip(big: &Partition, small: &Partition) -> bool {
    let rows = big.len().max(small.len());
    for i in 1..=rows {
        if !(big.part(i) >= small.part(i) && small.part(i) >= big.part(i + 1)) {
            return false;
        }
    }
    true
}

/// All partitions of norm `<= max_norm`, ordered by (norm, lexicographic on
/// the part vectors). The order is what makes every oracle reduction in this
/// crate reproducible.
pub fn enumerate_partitions(max_norm: i64) -> Result<Vec<Partition>> {
    if max_norm < 0 {
        return Err(Error::config("max_norm must be nonnegative"));
    }
    let mut all = Vec::new();
    for n in 0..=max_norm as u64 {
        let mut of_n = Vec::new();
        let mut current = Vec::new();
        gen_partitions_of(n, u32::MAX, &mut current, &mut of_n);
        of_n.sort();
        all.extend(of_n);
    }
    Ok(all)
}

fn gen_partitions_of(
    remaining: u64,
    max_part: u32,
    current: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        let norm = current.iter().map(|&p| p as u64).sum();
        out.push(Partition {
            parts: current.clone(),
            norm,
        });
        return;
    }
    let hi = (max_part as u64).min(remaining) as u32;
    for first in (1..=hi).rev() {
        current.push(first);
        gen_partitions_of(remaining - first as u64, first, current, out);
        current.pop();
    }
}

/// Partitions `μ` such that `of/μ` is a horizontal strip (`of ≻ μ`).
pub fn strips_below(of: &Partition) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = Vec::new();
    fn rec(of: &Partition, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i > of.len() {
            let mut parts = cur.clone();
            while parts.last() == Some(&0) {
                parts.pop();
            }
            let norm = parts.iter().map(|&p| p as u64).sum();
            out.push(Partition { parts, norm });
            return;
        }
        let lo = of.part(i + 1);
        let hi = of.part(i);
        for v in lo..=hi {
            cur.push(v);
            rec(of, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(of, 1, &mut cur, &mut out);
    out
}

/// Partitions `κ` with `κ ≻ of` and `|κ| <= norm_cap`.
pub fn strips_above(of: &Partition, norm_cap: u64) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = Vec::new();
    // κ_i ranges over [max(of_i, κ_{i+1.. built left to right}), of_{i-1}]
    // with κ_1 unbounded above except by the norm cap.
    fn rec(of: &Partition, i: usize, budget: u64, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        // stop once both the strip row and all remaining rows must be zero
        if i > of.len() + 1 || (i > of.len() && budget == 0) {
            let mut parts = cur.clone();
            while parts.last() == Some(&0) {
                parts.pop();
            }
            let norm = parts.iter().map(|&p| p as u64).sum();
            out.push(Partition { parts, norm });
            return;
        }
        let lo = of.part(i);
        let hi_interlace = if i == 1 {
            u64::MAX
        } else {
            of.part(i - 1) as u64
        };
        let hi = hi_interlace.min(lo as u64 + budget);
        if (lo as u64) > hi {
            return;
        }
        for v in lo as u64..=hi {
            cur.push(v as u32);
            rec(of, i + 1, budget - (v - lo as u64), cur, out);
            cur.pop();
        }
    }
    if norm_cap < of.norm() {
        return out;
    }
    rec(of, 1, norm_cap - of.norm(), &mut cur, &mut out);
    // rows beyond of.len()+1 are impossible: κ_{len+2} <= of_{len+1} = 0
    out.sort();
    out.dedup();
    out
}

/// Sub-partitions `μ ⊆ of` (all of them).
pub fn subpartitions(of: &Partition) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = Vec::new();
    fn rec(of: &Partition, i: usize, prev: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i > of.len() {
            let mut parts = cur.clone();
            while parts.last() == Some(&0) {
                parts.pop();
            }
            let norm = parts.iter().map(|&p| p as u64).sum();
            out.push(Partition { parts, norm });
            return;
        }
        let hi = of.part(i).min(prev);
        for v in 0..=hi {
            cur.push(v);
            rec(of, i + 1, v, cur, out);
            cur.pop();
        }
    }
    rec(of, 1, u32::MAX, &mut cur, &mut out);
    out.sort();
    out.dedup();
    out
}

/// Entrywise minimum of two diagrams (their intersection).
pub fn intersect(a: &Partition, b: &Partition) -> Partition {
    let n = a.len().min(b.len());
    let parts: Vec<u32> = (1..=n).map(|i| a.part(i).min(b.part(i))).collect();
    Partition::new(parts).expect("min of partitions is a partition")
}
