//! Expansions in a complex base over the Gaussian integers, digit-set shape,
//! the containment thresholds `v_N^(k)`, and the region where the
//! second-order containment condition holds.

use std::f64::consts::FRAC_PI_4;
use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{BoundaryPolicy, ExpansionError, LatticeDomain, LatticeSystem};
use crate::numeric::{bisect, NumericError, Quaternion, Tolerance};
use crate::parallel::{map_indexed, Execution};

/// Iterations used for every bisection in this module.
pub const BISECTION_STEPS: u32 = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("modulus must be a finite number > 1 (got {0})")]
    BadModulus(f64),
    #[error("angle must be finite")]
    BadAngle,
    #[error("r lies within eps_cmp of a digit-set region boundary")]
    Ambiguous,
    #[error("digit set is not square")]
    NotSquare,
    #[error("containment of order {0} is not established for this base")]
    ContainmentUnknown(usize),
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Which unit square tiles the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ComplexDomain {
    /// `[-1/2, 1/2)^2`, the domain the thresholds are stated for.
    #[default]
    Centered,
    /// `[0, 1)^2`.
    Unit,
}

impl ComplexDomain {
    pub fn lattice(self) -> LatticeDomain {
        match self {
            ComplexDomain::Centered => LatticeDomain::gaussian(-0.5),
            ComplexDomain::Unit => LatticeDomain::gaussian(0.0),
        }
    }
}

/// Reduce an angle to `[0, pi/4]` using quarter turns and the reflection that swaps cosine and sine.
pub fn canonical_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(FRAC_PI_2);
    if t > FRAC_PI_4 {
        FRAC_PI_2 - t
    } else {
        t
    }
}

/// `(|cos j t| + |sin j t|)` for the canonical angle.
fn spread(j: u32, theta: f64) -> f64 {
    let a = j as f64 * theta;
    a.cos().abs() + a.sin().abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexBase {
    r: f64,
    theta: f64,
    domain: ComplexDomain,
    tol: Tolerance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DigitSetShape {
    pub square: bool,
    /// Half-width of the digit set: real parts range over `-N..=N`.
    pub n: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContainmentStatus {
    pub holds: bool,
    /// The verdict is an equivalence rather than a sufficient condition.
    pub certified: bool,
    pub threshold: f64,
}

impl ComplexBase {
    pub fn new(r: f64, theta: f64) -> Result<Self, ComplexError> {
        ComplexBase::with_domain(r, theta, ComplexDomain::Centered, Tolerance::default())
    }

    pub fn with_domain(r: f64, theta: f64, domain: ComplexDomain, tol: Tolerance) -> Result<Self, ComplexError> {
        if !r.is_finite() || r <= 1.0 {
            return Err(ComplexError::BadModulus(r));
        }
        if !theta.is_finite() {
            return Err(ComplexError::BadAngle);
        }
        Ok(ComplexBase { r, theta, domain, tol })
    }

    pub fn modulus(&self) -> f64 {
        self.r
    }

    pub fn angle(&self) -> f64 {
        self.theta
    }

    pub fn canonical_angle(&self) -> f64 {
        canonical_angle(self.theta)
    }

    pub fn domain(&self) -> ComplexDomain {
        self.domain
    }

    pub fn xi(&self) -> Quaternion {
        Quaternion::from_polar(self.r, self.theta)
    }

    /// `cos t + sin t` at the canonical angle.
    pub fn cs_sum(&self) -> f64 {
        spread(1, self.canonical_angle())
    }

    pub fn system(&self) -> LatticeSystem {
        LatticeSystem::new(self.xi(), self.domain.lattice(), self.tol).expect("r > 1")
    }

    /// Digit of `z`: the Gaussian integer `d` with `xi z - d` back in the domain.
    pub fn digit(&self, z: Quaternion) -> Result<Quaternion, ComplexError> {
        if !self.domain.lattice().contains(z) {
            return Err(ExpansionError::OutsideDomain.into());
        }
        Ok(self.system().step(z, 1)?.0)
    }

    pub fn digits(&self, z: Quaternion, n: usize, policy: BoundaryPolicy) -> Result<Vec<Quaternion>, ComplexError> {
        Ok(self.system().with_policy(policy).digits(z, n)?)
    }

    pub fn classify(&self) -> Result<DigitSetShape, ComplexError> {
        classify_digit_set(self.r, self.theta, &self.tol)
    }

    /// `u_N = (2N+1)/(cos + sin)`, the largest radius with half-width `N`.
    pub fn upper_bound(&self, n: u32) -> f64 {
        (2 * n + 1) as f64 / self.cs_sum()
    }

    /// Containment of order `k`: `k = 1, 2` are decided exactly, higher orders are sufficient only.
    pub fn check_containment(&self, k: usize) -> Result<ContainmentStatus, ComplexError> {
        if k == 0 {
            return Err(ComplexError::ZeroOrder);
        }
        let cs = self.cs_sum();
        if k == 1 {
            return Ok(ContainmentStatus { holds: self.r >= cs, certified: true, threshold: cs });
        }
        let shape = self.classify()?;
        if !shape.square {
            return Err(ComplexError::NotSquare);
        }
        let v = containment_threshold(shape.n, k as u32, self.canonical_angle())?;
        Ok(ContainmentStatus { holds: self.r > v, certified: k <= 2, threshold: v })
    }

    /// Squares of side `r^-k` centred at `sum_j xi^-j a_j` over admissible `(k-1)`-blocks.
    ///
    /// Admissibility is witnessed by the centre itself: its orbit must stay in
    /// the domain, which makes its expansion the block followed by zeros.
    pub fn target_squares(&self, k: usize) -> Result<Vec<TargetSquare>, ComplexError> {
        if k < 2 {
            return Err(ComplexError::ZeroOrder);
        }
        if self.domain != ComplexDomain::Centered {
            return Err(ComplexError::ContainmentUnknown(k));
        }
        for order in 1..=k {
            if !self.check_containment(order)?.holds {
                return Err(ComplexError::ContainmentUnknown(order));
            }
        }
        let n = self.classify()?.n;
        let digits = snake_order(n);
        let inv = self.xi().inv().expect("nonzero");
        let mut powers = vec![Quaternion::ONE];
        for j in 1..=k {
            powers.push(powers[j - 1] * inv);
        }
        let dom = self.domain.lattice();
        let side = self.r.powi(-(k as i32));
        let mut out = Vec::new();
        let mut block = Vec::with_capacity(k - 1);
        let mut tails: Vec<Quaternion> = Vec::with_capacity(k);
        walk_blocks(&digits, &powers, &dom, k - 1, &mut block, &mut tails, &mut |blk, tails| {
            out.push(TargetSquare { block: blk.to_vec(), center: tails[0], side });
        });
        Ok(out)
    }
}

/// Depth-first walk in snake order; `tails[i]` is the value of the block from position `i` on.
fn walk_blocks(
    digits: &[Quaternion],
    powers: &[Quaternion],
    dom: &LatticeDomain,
    len: usize,
    block: &mut Vec<Quaternion>,
    tails: &mut Vec<Quaternion>,
    emit: &mut dyn FnMut(&[Quaternion], &[Quaternion]),
) {
    if block.len() == len {
        let t = if tails.is_empty() { vec![Quaternion::ZERO] } else { tails.clone() };
        emit(block, &t);
        return;
    }
    let m = block.len();
    for d in digits {
        let mut next: Vec<Quaternion> = tails.iter().enumerate().map(|(i, t)| *t + powers[m + 1 - i] * *d).collect();
        next.push(powers[1] * *d);
        if next.iter().all(|p| dom.contains(*p)) {
            block.push(*d);
            std::mem::swap(tails, &mut next);
            walk_blocks(digits, powers, dom, len, block, tails, emit);
            std::mem::swap(tails, &mut next);
            block.pop();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetSquare {
    pub block: Vec<Quaternion>,
    pub center: Quaternion,
    pub side: f64,
}

impl TargetSquare {
    pub fn inradius(&self) -> f64 {
        0.5 * self.side
    }
}

/// Shape of the digit set for modulus `r` and angle `theta` on the centred domain.
pub fn classify_digit_set(r: f64, theta: f64, tol: &Tolerance) -> Result<DigitSetShape, ComplexError> {
    if !r.is_finite() || r <= 1.0 {
        return Err(ComplexError::BadModulus(r));
    }
    if !theta.is_finite() {
        return Err(ComplexError::BadAngle);
    }
    let cs = spread(1, canonical_angle(theta));
    let x = r * cs;
    let n = ((x + 1.0) / 2.0).ceil() - 1.0;
    // x odd means r sits on some u_N; r near (2N-1)(c+s) is the square/rectangle boundary.
    let to_odd = ((x - 1.0) / 2.0 - ((x - 1.0) / 2.0).round()).abs() * 2.0;
    let lower = (2.0 * n - 1.0) * cs;
    if to_odd <= tol.eps_cmp * x.max(1.0) || (r - lower).abs() <= tol.eps_cmp * r {
        return Err(ComplexError::Ambiguous);
    }
    Ok(DigitSetShape { square: r > lower, n: n as u32 })
}

/// `f_N^(k)(r) = r^k - 2N sum_{j<k} r^{k-j} s_j - s_k` with `s_j = |cos j t| + |sin j t|`.
pub fn containment_poly(n: u32, k: u32, theta: f64, r: f64) -> f64 {
    let t = canonical_angle(theta);
    let mut acc = r.powi(k as i32) - spread(k, t);
    for j in 1..k {
        acc -= 2.0 * n as f64 * r.powi((k - j) as i32) * spread(j, t);
    }
    acc
}

/// Unique positive root `v_N^(k)` of [`containment_poly`].
pub fn containment_threshold(n: u32, k: u32, theta: f64) -> Result<f64, ComplexError> {
    let cs = spread(1, canonical_angle(theta));
    let mut hi = 2.0 * n as f64 * cs * k as f64 + 2.0;
    while containment_poly(n, k, theta, hi) <= 0.0 {
        hi *= 2.0;
    }
    Ok(bisect(|r| containment_poly(n, k, theta, r), 1.0, hi, BISECTION_STEPS)?)
}

/// Closed form of `v_N^(2)`.
pub fn containment_threshold_2(n: u32, theta: f64) -> f64 {
    let t = canonical_angle(theta);
    let cs = spread(1, t);
    let n = n as f64;
    n * cs + (n * n * cs * cs + spread(2, t)).sqrt()
}

/// `4 s N^2 - 2(1 - s) N + ((c + s)(cos t + sin t)^2 - 1)` with `c, s` the cosine and sine of `2t`.
///
/// Negative exactly when the second-order interval `(v_N^(2), u_N]` is nonempty.
pub fn order_two_quadratic(n: f64, theta: f64) -> f64 {
    let t = canonical_angle(theta);
    let (s2, c2) = ((2.0 * t).sin(), (2.0 * t).cos());
    let cs = spread(1, t);
    4.0 * s2 * n * n - 2.0 * (1.0 - s2) * n + ((c2 + s2) * cs * cs - 1.0)
}

/// Discriminant of [`order_two_quadratic`] in `N`.
pub fn order_two_discriminant(theta: f64) -> f64 {
    let t = canonical_angle(theta);
    let (s2, c2) = ((2.0 * t).sin(), (2.0 * t).cos());
    let cs = spread(1, t);
    4.0 * (1.0 - s2).powi(2) - 16.0 * s2 * ((c2 + s2) * cs * cs - 1.0)
}

/// Roots `(L-, L+)` of [`order_two_quadratic`], when real.
pub fn order_two_roots(theta: f64) -> Option<(f64, f64)> {
    let t = canonical_angle(theta);
    let s2 = (2.0 * t).sin();
    let disc = order_two_discriminant(t);
    if s2 <= 0.0 || disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    Some(((2.0 * (1.0 - s2) - sq) / (8.0 * s2), (2.0 * (1.0 - s2) + sq) / (8.0 * s2)))
}

/// `x^8 + 16x^7 + 30x^4 - 16x + 1`, whose smallest positive root fixes the second-order angle cutoff.
pub fn cutoff_polynomial(x: f64) -> f64 {
    x.powi(8) + 16.0 * x.powi(7) + 30.0 * x.powi(4) - 16.0 * x + 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleCutoffs {
    /// Largest angle with a real pair of roots `L-, L+`.
    pub discriminant_zero: f64,
    /// Smallest positive root of [`cutoff_polynomial`].
    pub delta: f64,
    /// `2 arctan(delta)`: beyond this angle no radius satisfies second-order containment.
    pub order_two_cutoff: f64,
}

pub fn angle_cutoffs() -> Result<AngleCutoffs, ComplexError> {
    let discriminant_zero = bisect(order_two_discriminant, 1e-12, FRAC_PI_4, BISECTION_STEPS)?;
    let step = 1e-3;
    let mut lo = 0.0;
    while cutoff_polynomial(lo + step) > 0.0 {
        lo += step;
    }
    let delta = bisect(cutoff_polynomial, lo, lo + step, BISECTION_STEPS)?;
    Ok(AngleCutoffs { discriminant_zero, delta, order_two_cutoff: 2.0 * delta.atan() })
}

/// One piece `(v_N^(2), u_N]` of the second-order region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase")]
pub struct RegionPiece {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "v")]
    pub v: f64,
    #[serde(rename = "u")]
    pub u: f64,
}

/// Radii where second-order containment holds at angle `theta`; `cap` bounds `N` at angle zero.
pub fn order_two_region(theta: f64, cap: u32) -> Result<Vec<RegionPiece>, ComplexError> {
    let t = canonical_angle(theta);
    let cut = angle_cutoffs()?.order_two_cutoff;
    if t >= cut {
        return Ok(Vec::new());
    }
    let top = if t == 0.0 {
        cap
    } else {
        match order_two_roots(t) {
            Some((_, lp)) => (lp.ceil() as u32).saturating_sub(1),
            None => 0,
        }
    };
    let cs = spread(1, t);
    Ok((1..=top)
        .map(|n| RegionPiece { n, v: containment_threshold_2(n, t), u: (2 * n + 1) as f64 / cs })
        .filter(|p| p.v < p.u)
        .collect())
}

/// Square digit set `{a + bi : |a|, |b| <= N}` listed row by row, alternating direction,
/// so consecutive entries are at distance 1.
pub fn snake_order(n: u32) -> Vec<Quaternion> {
    let n = n as i64;
    let w = 2 * n + 1;
    let mut out = Vec::with_capacity((w * w) as usize);
    for s in 0..w {
        let sign = if s % 2 == 0 { -1 } else { 1 };
        for t in 1..=w {
            out.push(Quaternion::complex((sign * (n + 1 - t)) as f64, (s - n) as f64));
        }
    }
    out
}

/// Digit-set classification on a grid of radii and angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionCell {
    pub theta: f64,
    pub r: f64,
    pub shape: Option<DigitSetShape>,
    pub order_two: Option<bool>,
}

/// Classify every `(r, theta)` pair of the grid `rs x thetas`, angle-major.
pub fn scan_regions(rs: &[f64], thetas: &[f64], exec: Execution) -> Vec<RegionCell> {
    let tol = Tolerance::default();
    let nr = rs.len();
    map_indexed(nr * thetas.len(), exec, |idx| {
        let theta = thetas[idx / nr];
        let r = rs[idx % nr];
        let shape = classify_digit_set(r, theta, &tol).ok();
        let order_two = shape.filter(|s| s.square).and_then(|s| {
            containment_threshold(s.n, 2, theta).ok().map(|v| r > v)
        });
        RegionCell { theta, r, shape, order_two }
    })
}

/// Distance from `r` to the nearest classification boundary at angle `theta`, relative to `r`.
pub fn boundary_distance(r: f64, theta: f64) -> f64 {
    let cs = spread(1, canonical_angle(theta));
    let x = r * cs;
    let n = ((x + 1.0) / 2.0).ceil() - 1.0;
    let to_upper = ((2.0 * n + 1.0) / cs - r).abs();
    let to_lower_u = ((2.0 * n - 1.0) / cs - r).abs();
    let to_square = ((2.0 * n - 1.0) * cs - r).abs();
    let to_next_square = ((2.0 * n + 1.0) * cs - r).abs();
    to_upper.min(to_lower_u).min(to_square).min(to_next_square) / r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snake_small() {
        let s = snake_order(1);
        let want = [(-1, -1), (0, -1), (1, -1), (1, 0), (0, 0), (-1, 0), (-1, 1), (0, 1), (1, 1)];
        let got: Vec<(i64, i64)> = s.iter().map(|q| (q.a as i64, q.b as i64)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn canonical_angles() {
        assert!((canonical_angle(0.1) - 0.1).abs() < 1e-15);
        assert!((canonical_angle(FRAC_PI_2 - 0.1) - 0.1).abs() < 1e-14);
        assert!((canonical_angle(FRAC_PI_2 + 0.1) - 0.1).abs() < 1e-14);
        assert!((canonical_angle(-0.1) - 0.1).abs() < 1e-14);
    }

    #[test]
    fn first_order_is_always_met_by_square_sets() {
        let b = ComplexBase::new(4.5, 0.05).unwrap();
        let st = b.check_containment(1).unwrap();
        assert!(st.holds && st.certified);
    }

    #[test]
    fn square_example() {
        let s = classify_digit_set(4.5, 0.05, &Tolerance::default()).unwrap();
        assert_eq!(s, DigitSetShape { square: true, n: 2 });
    }
}
