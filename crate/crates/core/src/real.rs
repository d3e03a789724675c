//! Greedy expansions in a real base `b > 1`, admissible blocks, and the
//! cylinder intervals that make up the targets of the real game.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{BoundaryPolicy, LatticeDomain, LatticeSystem};
use crate::numeric::{safe_floor, NumericError, Quaternion, Tolerance};

/// Digits of `1` (or of `b - floor b`) computed before giving up on termination.
pub const DEFAULT_DEPTH: usize = 48;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealError {
    #[error("base must be a finite number > 1 (got {0})")]
    BadBase(f64),
    #[error("x must lie in [0, 1) (got {0})")]
    OutOfRange(f64),
    #[error("x is within eps_floor of a digit boundary at digit {step}")]
    Ambiguous { step: usize },
    #[error("digit {digit} exceeds the minimal digit {d_prime} of the quasi-greedy expansion of 1")]
    DigitTooLarge { digit: u32, d_prime: u32 },
    #[error("digit {digit} exceeds the largest digit {max}")]
    NotADigit { digit: u32, max: u32 },
    #[error("block length must be at least {0}")]
    ShortBlock(usize),
    #[error("quasi-greedy expansion of 1 is only known to {known} digits, {wanted} requested")]
    Depth { known: usize, wanted: usize },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Finite or infinite run of base-`b` digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitSequence(pub Vec<u32>);

impl fmt::Display for DigitSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        f.write_str(&s.join(" "))
    }
}

impl std::str::FromStr for DigitSequence {
    type Err = std::num::ParseIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace().map(str::parse).collect::<Result<Vec<_>, _>>().map(DigitSequence)
    }
}

/// The quasi-greedy expansion of 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum QuasiGreedy {
    /// The greedy expansion of 1 is finite, so this block repeats forever.
    Periodic(Vec<u32>),
    /// Greedy expansion of 1 did not terminate; digits known to the computed depth.
    Aperiodic(Vec<u32>),
}

impl QuasiGreedy {
    pub fn digit(&self, i: usize) -> Option<u32> {
        match self {
            QuasiGreedy::Periodic(p) => Some(p[i % p.len()]),
            QuasiGreedy::Aperiodic(v) => v.get(i).copied(),
        }
    }

    pub fn prefix(&self, n: usize) -> Option<Vec<u32>> {
        (0..n).map(|i| self.digit(i)).collect()
    }

    /// Smallest digit that occurs.
    pub fn min_digit(&self) -> u32 {
        match self {
            QuasiGreedy::Periodic(p) => *p.iter().min().expect("nonempty"),
            QuasiGreedy::Aperiodic(v) => *v.iter().min().expect("nonempty"),
        }
    }
}

/// Position of the last nonzero digit of `b - floor b` and its longest run of zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TailShape {
    Determined { last_nonzero: usize, max_zero_run: usize },
    /// The expansion did not terminate within `depth` digits.
    Undetermined { depth: usize, observed_zero_run: usize },
}

impl TailShape {
    /// The zero-run bound used by the winning strategy, if known.
    pub fn zero_run(&self) -> Option<usize> {
        match self {
            TailShape::Determined { max_zero_run, .. } => Some(*max_zero_run),
            TailShape::Undetermined { .. } => None,
        }
    }

    /// Known bound, or the largest run seen so far.
    pub fn zero_run_lower(&self) -> usize {
        match self {
            TailShape::Determined { max_zero_run, .. } => *max_zero_run,
            TailShape::Undetermined { observed_zero_run, .. } => *observed_zero_run,
        }
    }
}

/// Half-open interval of points whose first `k` digits are `block`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CylinderInterval {
    pub block: Vec<u32>,
    pub lo: f64,
    pub hi: f64,
    pub full_length: bool,
}

impl CylinderInterval {
    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn block_string(&self) -> String {
        block_string(&self.block)
    }
}

pub fn block_string(block: &[u32]) -> String {
    if block.iter().all(|d| *d < 10) {
        block.iter().map(|d| char::from(b'0' + *d as u8)).collect()
    } else {
        block.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealBase {
    b: f64,
    tol: Tolerance,
    digit_max: u32,
    quasi_greedy: QuasiGreedy,
    tail: TailShape,
}

/// Greedy digits of `start`, stopping when a remainder snaps to an integer.
fn greedy_until_exact(b: f64, start: f64, depth: usize, tol: &Tolerance) -> Result<(Vec<u32>, bool), NumericError> {
    let mut t = start;
    let mut out = Vec::new();
    for _ in 0..depth {
        let y = b * t;
        let f = safe_floor(y, tol)?;
        if f.ambiguous {
            out.push(y.round() as u32);
            return Ok((out, true));
        }
        out.push(f.value as u32);
        t = y - f.value as f64;
    }
    Ok((out, false))
}

fn longest_zero_run(d: &[u32]) -> usize {
    let mut best = 0;
    let mut cur = 0;
    for x in d {
        if *x == 0 {
            cur += 1;
            best = best.max(cur);
        } else {
            cur = 0;
        }
    }
    best
}

impl RealBase {
    pub fn new(b: f64) -> Result<Self, RealError> {
        RealBase::with_tolerance(b, Tolerance::default(), DEFAULT_DEPTH)
    }

    pub fn with_tolerance(b: f64, tol: Tolerance, depth: usize) -> Result<Self, RealError> {
        if !b.is_finite() || b <= 1.0 {
            return Err(RealError::BadBase(b));
        }
        let integral = (b - b.round()).abs() <= tol.eps_cmp;
        let digit_max = if integral { b.round() as u32 - 1 } else { b.floor() as u32 };
        let (one, finite) = greedy_until_exact(b, 1.0, depth, &tol)?;
        let quasi_greedy = if finite {
            let mut p = one;
            *p.last_mut().expect("nonempty") -= 1;
            QuasiGreedy::Periodic(p)
        } else {
            QuasiGreedy::Aperiodic(one)
        };
        let tail = if integral {
            TailShape::Determined { last_nonzero: 0, max_zero_run: 0 }
        } else {
            let (frac, done) = greedy_until_exact(b, b - b.floor(), depth, &tol)?;
            if done {
                TailShape::Determined { last_nonzero: frac.len(), max_zero_run: longest_zero_run(&frac) }
            } else {
                TailShape::Undetermined { depth, observed_zero_run: longest_zero_run(&frac) }
            }
        };
        Ok(RealBase { b, tol, digit_max, quasi_greedy, tail })
    }

    pub fn value(&self) -> f64 {
        self.b
    }

    pub fn tolerance(&self) -> &Tolerance {
        &self.tol
    }

    /// Largest digit: `b - 1` for integer bases, `floor b` otherwise.
    pub fn digit_max(&self) -> u32 {
        self.digit_max
    }

    pub fn quasi_greedy(&self) -> &QuasiGreedy {
        &self.quasi_greedy
    }

    pub fn tail_shape(&self) -> TailShape {
        self.tail
    }

    /// Smallest digit of the quasi-greedy expansion of 1.
    pub fn min_quasi_greedy_digit(&self) -> u32 {
        self.quasi_greedy.min_digit()
    }

    /// The same base as a one-dimensional lattice system on `[0,1)`.
    pub fn system(&self) -> LatticeSystem {
        LatticeSystem::new(Quaternion::real(self.b), LatticeDomain::unit_interval(), self.tol)
            .expect("b > 1")
    }

    /// First `n` greedy digits of `x` in `[0, 1)`.
    pub fn digits(&self, x: f64, n: usize, policy: BoundaryPolicy) -> Result<DigitSequence, RealError> {
        if !x.is_finite() {
            return Err(NumericError::NonFinite(x).into());
        }
        if !(0.0..1.0).contains(&x) {
            return Err(RealError::OutOfRange(x));
        }
        let mut t = x;
        let mut out = Vec::with_capacity(n);
        for step in 1..=n {
            let y = self.b * t;
            let f = safe_floor(y, &self.tol)?;
            let d = if f.ambiguous {
                match policy {
                    BoundaryPolicy::Error => return Err(RealError::Ambiguous { step }),
                    BoundaryPolicy::NudgeInward => y.round(),
                }
            } else {
                f.value as f64
            };
            let d = d.min(self.digit_max as f64).max(0.0);
            out.push(d as u32);
            t = (y - d).max(0.0);
        }
        Ok(DigitSequence(out))
    }

    /// `sum_j a_j b^{-j}`.
    pub fn block_value(&self, block: &[u32]) -> f64 {
        block.iter().rev().fold(0.0, |v, d| (v + *d as f64) / self.b)
    }

    fn quasi_prefix(&self, n: usize) -> Result<Vec<u32>, RealError> {
        self.quasi_greedy.prefix(n).ok_or(RealError::Depth {
            known: match &self.quasi_greedy {
                QuasiGreedy::Aperiodic(v) => v.len(),
                QuasiGreedy::Periodic(_) => usize::MAX,
            },
            wanted: n,
        })
    }

    /// Every suffix, padded with zeros, is lexicographically at most the quasi-greedy expansion of 1.
    pub fn is_admissible(&self, block: &[u32]) -> Result<bool, RealError> {
        if let Some(d) = block.iter().find(|d| **d > self.digit_max) {
            return Err(RealError::NotADigit { digit: *d, max: self.digit_max });
        }
        let c = self.quasi_prefix(block.len())?;
        Ok((0..block.len()).all(|j| block[j..] <= c[..block.len() - j]))
    }

    /// All admissible blocks of length `n` in lexicographic order.
    pub fn enumerate_admissible(&self, n: usize) -> Result<Vec<Vec<u32>>, RealError> {
        let c = self.quasi_prefix(n)?;
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        self.extend_admissible(&c, n, &mut cur, &mut |b| out.push(b.to_vec()), &|_, _| true);
        Ok(out)
    }

    /// Depth-first walk over admissible blocks; `keep(prefix, value)` prunes subtrees.
    fn extend_admissible(
        &self,
        c: &[u32],
        n: usize,
        cur: &mut Vec<u32>,
        emit: &mut dyn FnMut(&[u32]),
        keep: &dyn Fn(&[u32], f64) -> bool,
    ) {
        if cur.len() == n {
            emit(cur);
            return;
        }
        for d in 0..=self.digit_max {
            cur.push(d);
            let m = cur.len();
            let ok = (0..m).all(|j| cur[j..] <= c[..m - j]);
            if ok && keep(cur, self.block_value(cur)) {
                self.extend_admissible(c, n, cur, emit, keep);
            }
            cur.pop();
        }
    }

    fn check_target_digit(&self, d: u32) -> Result<(), RealError> {
        let d_prime = self.min_quasi_greedy_digit();
        if d > d_prime {
            Err(RealError::DigitTooLarge { digit: d, d_prime })
        } else {
            Ok(())
        }
    }

    /// Whether some suffix of `block` followed by `d + 1` has value above 1.
    pub fn exceeds_after(&self, block: &[u32], d: u32) -> Result<bool, RealError> {
        self.check_target_digit(d)?;
        let mut w = block.to_vec();
        w.push(d + 1);
        Ok((0..block.len()).any(|j| self.block_value(&w[j..]) > 1.0 + self.tol.eps_cmp))
    }

    fn interval_for(&self, block: &[u32]) -> CylinderInterval {
        let k = block.len();
        let lo = self.block_value(block);
        // Points with this prefix are lo + b^-k y where every shifted tail stays below 1.
        let mut room = 1.0_f64;
        for i in 0..k {
            let tail = &block[i..];
            room = room.min(self.b.powi(tail.len() as i32) * (1.0 - self.block_value(tail)));
        }
        let full_length = room >= 1.0 - 1e-9;
        let room = if full_length { 1.0 } else { room.max(0.0) };
        CylinderInterval { block: block.to_vec(), lo, hi: lo + room * self.b.powi(-(k as i32)), full_length }
    }

    /// `Delta(a d)` for every admissible `(k-1)`-block `a`, ordered by left endpoint.
    pub fn cylinder_intervals(&self, d: u32, k: usize) -> Result<Vec<CylinderInterval>, RealError> {
        self.cylinder_intervals_within(d, k, f64::NEG_INFINITY, f64::INFINITY)
    }

    /// Like [`Self::cylinder_intervals`] but only intervals meeting `[lo, hi]`.
    pub fn cylinder_intervals_within(
        &self,
        d: u32,
        k: usize,
        lo: f64,
        hi: f64,
    ) -> Result<Vec<CylinderInterval>, RealError> {
        if k < 2 {
            return Err(RealError::ShortBlock(2));
        }
        self.check_target_digit(d)?;
        let c = self.quasi_prefix(k)?;
        let b = self.b;
        let mut blocks = Vec::new();
        let mut cur = Vec::with_capacity(k);
        let keep = |p: &[u32], v: f64| {
            let span = b.powi(-(p.len() as i32));
            v <= hi && v + span >= lo
        };
        self.extend_admissible(&c, k - 1, &mut cur, &mut |a| blocks.push(a.to_vec()), &keep);
        Ok(blocks
            .into_iter()
            .map(|mut a| {
                a.push(d);
                self.interval_for(&a)
            })
            .filter(|iv| iv.hi >= lo && iv.lo <= hi)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::metallic_mean;

    #[test]
    fn golden_basics() {
        let b = RealBase::new(metallic_mean(1).unwrap()).unwrap();
        assert_eq!(b.digit_max(), 1);
        assert_eq!(b.quasi_greedy(), &QuasiGreedy::Periodic(vec![1, 0]));
        assert_eq!(b.tail_shape(), TailShape::Determined { last_nonzero: 1, max_zero_run: 0 });
        assert_eq!(b.min_quasi_greedy_digit(), 0);
    }

    #[test]
    fn integer_base() {
        let b = RealBase::new(2.0).unwrap();
        assert_eq!(b.digit_max(), 1);
        assert_eq!(b.quasi_greedy(), &QuasiGreedy::Periodic(vec![1]));
        assert_eq!(b.tail_shape(), TailShape::Determined { last_nonzero: 0, max_zero_run: 0 });
        let iv = b.cylinder_intervals(0, 2).unwrap();
        assert_eq!(iv.len(), 2);
        assert_eq!((iv[0].lo, iv[0].hi), (0.0, 0.25));
        assert_eq!((iv[1].lo, iv[1].hi), (0.5, 0.75));
    }

    #[test]
    fn digit_sequence_round_trip() {
        let s = DigitSequence(vec![1, 0, 1, 0, 0]);
        assert_eq!(s.to_string(), "1 0 1 0 0");
        assert_eq!("1 0 1 0 0".parse::<DigitSequence>().unwrap(), s);
    }

    #[test]
    fn rejects_large_target_digit() {
        let b = RealBase::new(3.0).unwrap();
        assert_eq!(b.min_quasi_greedy_digit(), 2);
        assert!(b.cylinder_intervals(3, 2).is_err());
        let g = RealBase::new(metallic_mean(1).unwrap()).unwrap();
        assert!(matches!(g.exceeds_after(&[0, 1], 1), Err(RealError::DigitTooLarge { .. })));
    }
}
