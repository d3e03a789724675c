//! Lattices with box-shaped fundamental domains and the digit map they induce.
//!
//! A domain is a half-open box `lo_i <= t_i < lo_i + width_i` in the
//! coordinates of a basis, tiled by the lattice spanned by that basis plus a
//! finite set of glue vectors. With one glue vector (zero) and unit widths this
//! is the usual parallelotope domain; the Hurwitz order uses two glue vectors
//! and a half-height box. Reals and complex numbers use 1- and 2-dimensional
//! bases inside the quaternions.

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{NumericError, Quaternion, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("dimension must be 1, 2 or 4 (got {0})")]
    BadDimension(usize),
    #[error("basis vector {0} leaves the {1}-dimensional subspace")]
    OutsideSubspace(usize, usize),
    #[error("basis is singular")]
    Singular,
    #[error("box widths must lie in (0, 1]")]
    BadWidth,
    #[error("box volume {0} does not match the lattice covolume")]
    VolumeMismatch(f64),
    #[error("radix must have modulus > 1")]
    SmallRadix,
    #[error("radix leaves the {0}-dimensional subspace")]
    RadixOutsideSubspace(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExpansionError {
    #[error("point lies within eps_floor of a cell boundary at digit {step}")]
    Ambiguous { step: usize },
    #[error("point is not in the fundamental domain")]
    OutsideDomain,
    #[error("no lattice translate contains the point at digit {step}")]
    NoCell { step: usize },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// What to do when a point sits within `eps_floor` of a cell face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BoundaryPolicy {
    #[default]
    Error,
    /// Treat the point as lying on the closed face of the neighbouring cell.
    NudgeInward,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeDomain {
    dim: usize,
    basis: Vec<Quaternion>,
    lo: Vec<f64>,
    width: Vec<f64>,
    glue: Vec<Quaternion>,
    inv: Matrix4<f64>,
    fwd: Matrix4<f64>,
    dual_norm: Vec<f64>,
}

fn in_subspace(q: Quaternion, dim: usize) -> bool {
    let v = q.to_array();
    v[dim..].iter().all(|x| *x == 0.0)
}

impl LatticeDomain {
    pub fn new(
        basis: Vec<Quaternion>,
        lo: Vec<f64>,
        width: Vec<f64>,
        glue: Vec<Quaternion>,
    ) -> Result<Self, LatticeError> {
        let dim = basis.len();
        if !matches!(dim, 1 | 2 | 4) || lo.len() != dim || width.len() != dim {
            return Err(LatticeError::BadDimension(dim));
        }
        for (i, v) in basis.iter().enumerate() {
            if !in_subspace(*v, dim) {
                return Err(LatticeError::OutsideSubspace(i, dim));
            }
        }
        if width.iter().any(|w| !(*w > 0.0 && *w <= 1.0)) {
            return Err(LatticeError::BadWidth);
        }
        let mut fwd = Matrix4::<f64>::identity();
        for (col, v) in basis.iter().enumerate() {
            let a = v.to_array();
            for row in 0..4 {
                fwd[(row, col)] = a[row];
            }
        }
        let inv = fwd.try_inverse().ok_or(LatticeError::Singular)?;
        let glue = if glue.is_empty() { vec![Quaternion::ZERO] } else { glue };
        let volume: f64 = width.iter().product::<f64>() * glue.len() as f64;
        if (volume - 1.0).abs() > 1e-9 {
            return Err(LatticeError::VolumeMismatch(volume));
        }
        let dual_norm = (0..dim)
            .map(|i| (0..dim).map(|j| inv[(i, j)].powi(2)).sum::<f64>().sqrt())
            .collect();
        Ok(LatticeDomain { dim, basis, lo, width, glue, inv, fwd, dual_norm })
    }

    /// Unit-width box in the coordinates of `basis` starting at `lo`.
    pub fn parallelotope(basis: Vec<Quaternion>, lo: Vec<f64>) -> Result<Self, LatticeError> {
        let w = vec![1.0; basis.len()];
        LatticeDomain::new(basis, lo, w, Vec::new())
    }

    /// `[0,1)` with the integers.
    pub fn unit_interval() -> Self {
        LatticeDomain::parallelotope(vec![Quaternion::ONE], vec![0.0]).expect("valid")
    }

    /// Gaussian integers on `[lo, lo+1)^2`.
    pub fn gaussian(lo: f64) -> Self {
        LatticeDomain::parallelotope(vec![Quaternion::ONE, Quaternion::I], vec![lo, lo]).expect("valid")
    }

    /// Lipschitz integers on `[lo, lo+1)^4`.
    pub fn lipschitz(lo: f64) -> Self {
        LatticeDomain::parallelotope(
            vec![Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K],
            vec![lo; 4],
        )
        .expect("valid")
    }

    /// Hurwitz integers on `[0,1)^3 x [0,1/2)`.
    pub fn hurwitz_box() -> Self {
        LatticeDomain::new(
            vec![Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K],
            vec![0.0; 4],
            vec![1.0, 1.0, 1.0, 0.5],
            vec![Quaternion::ZERO, Quaternion::new(0.5, 0.5, 0.5, 0.5)],
        )
        .expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Quaternion] {
        &self.basis
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn width(&self) -> &[f64] {
        &self.width
    }

    pub fn glue(&self) -> &[Quaternion] {
        &self.glue
    }

    pub fn coords(&self, p: Quaternion) -> [f64; 4] {
        let v = self.inv * Vector4::from(p.to_array());
        [v[0], v[1], v[2], v[3]]
    }

    pub fn point(&self, t: &[f64]) -> Quaternion {
        let mut v = Vector4::zeros();
        for (i, x) in t.iter().take(self.dim).enumerate() {
            v[i] = *x;
        }
        let p = self.fwd * v;
        Quaternion::new(p[0], p[1], p[2], p[3])
    }

    pub fn contains(&self, p: Quaternion) -> bool {
        let t = self.coords(p);
        (0..self.dim).all(|i| {
            let u = t[i] - self.lo[i];
            u >= 0.0 && u < self.width[i]
        }) && in_subspace_tol(p, self.dim)
    }

    /// Signed Euclidean distance from `p` to the boundary of the box (negative outside).
    pub fn margin(&self, p: Quaternion) -> f64 {
        let t = self.coords(p);
        (0..self.dim)
            .map(|i| {
                let u = t[i] - self.lo[i];
                u.min(self.width[i] - u) / self.dual_norm[i]
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Vertices of the closed box.
    pub fn corners(&self) -> Vec<Quaternion> {
        (0..1usize << self.dim)
            .map(|mask| {
                let t: Vec<f64> = (0..self.dim)
                    .map(|i| self.lo[i] + if mask >> i & 1 == 1 { self.width[i] } else { 0.0 })
                    .collect();
                self.point(&t)
            })
            .collect()
    }

    pub fn center(&self) -> Quaternion {
        let t: Vec<f64> = (0..self.dim).map(|i| self.lo[i] + 0.5 * self.width[i]).collect();
        self.point(&t)
    }

    /// The lattice point `d` with `w - d` in the box.
    pub fn cell_of(
        &self,
        w: Quaternion,
        tol: &Tolerance,
        policy: BoundaryPolicy,
        step: usize,
    ) -> Result<Quaternion, ExpansionError> {
        if !w.is_finite() {
            return Err(NumericError::NonFinite(f64::NAN).into());
        }
        let shift = match policy {
            BoundaryPolicy::Error => 0.0,
            BoundaryPolicy::NudgeInward => 2.0 * tol.eps_floor,
        };
        let mut found: Option<Quaternion> = None;
        let mut ambiguous = false;
        for g in &self.glue {
            let t = self.coords(w - *g);
            let mut n = [0.0; 4];
            let mut clear = true;
            let mut outside = false;
            for i in 0..self.dim {
                let x = t[i] - self.lo[i] + shift;
                let ni = x.floor();
                let u = x - ni;
                n[i] = ni;
                if u >= self.width[i] + tol.eps_floor {
                    outside = true;
                } else if u >= self.width[i] {
                    // just above an open face of a narrow box
                    outside = true;
                    if policy == BoundaryPolicy::Error {
                        ambiguous = true;
                    }
                } else if policy == BoundaryPolicy::Error
                    && (u <= tol.eps_floor || self.width[i] - u <= tol.eps_floor)
                {
                    clear = false;
                }
            }
            if outside {
                continue;
            }
            if !clear {
                ambiguous = true;
            }
            let d = *g + self.point(&n);
            if found.is_none() {
                found = Some(d);
            } else {
                ambiguous = true;
            }
        }
        if ambiguous {
            return Err(ExpansionError::Ambiguous { step });
        }
        found.ok_or(ExpansionError::NoCell { step })
    }

    /// Snaps coordinates that fell a hair below a lower face back onto it.
    fn clamp_into(&self, p: Quaternion, tol: &Tolerance) -> Quaternion {
        let t = self.coords(p);
        let mut changed = false;
        let mut s = [0.0; 4];
        for i in 0..self.dim {
            let u = t[i] - self.lo[i];
            s[i] = t[i];
            if u < 0.0 && u > -4.0 * tol.eps_floor {
                s[i] = self.lo[i];
                changed = true;
            }
        }
        if changed {
            self.point(&s[..self.dim])
        } else {
            p
        }
    }
}

fn in_subspace_tol(p: Quaternion, dim: usize) -> bool {
    let v = p.to_array();
    v[dim..].iter().all(|x| x.abs() <= 1e-12)
}

/// A radix acting by left multiplication on a lattice domain.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSystem {
    radix: Quaternion,
    domain: LatticeDomain,
    tol: Tolerance,
    policy: BoundaryPolicy,
}

/// Digits of a point together with where its orbit closes up.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expansion {
    pub digits: Vec<Quaternion>,
    /// `(preperiod, period)` when the orbit revisits a point within the window.
    pub cycle: Option<(usize, usize)>,
}

/// Digits shared by every point of a ball.
#[derive(Debug, Clone, PartialEq)]
pub struct BallDigits {
    pub digits: Vec<Quaternion>,
    /// The ball straddled a cell face at this digit, so later digits are unknown.
    pub straddles_at: Option<usize>,
}

impl LatticeSystem {
    pub fn new(radix: Quaternion, domain: LatticeDomain, tol: Tolerance) -> Result<Self, LatticeError> {
        if !in_subspace(radix, domain.dim()) {
            return Err(LatticeError::RadixOutsideSubspace(domain.dim()));
        }
        if radix.norm() <= 1.0 {
            return Err(LatticeError::SmallRadix);
        }
        Ok(LatticeSystem { radix, domain, tol, policy: BoundaryPolicy::Error })
    }

    pub fn with_policy(mut self, policy: BoundaryPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn radix(&self) -> Quaternion {
        self.radix
    }

    pub fn domain(&self) -> &LatticeDomain {
        &self.domain
    }

    pub fn tolerance(&self) -> &Tolerance {
        &self.tol
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// One application of `z -> radix*z - d`.
    pub fn step(&self, z: Quaternion, index: usize) -> Result<(Quaternion, Quaternion), ExpansionError> {
        let w = self.radix * z;
        let d = self.domain.cell_of(w, &self.tol, self.policy, index)?;
        let mut next = w - d;
        if self.policy == BoundaryPolicy::NudgeInward {
            next = self.domain.clamp_into(next, &self.tol);
        }
        Ok((d, next))
    }

    pub fn digits(&self, z: Quaternion, n: usize) -> Result<Vec<Quaternion>, ExpansionError> {
        Ok(self.expand(z, n)?.digits)
    }

    /// First `n` digits of `z` plus orbit-cycle detection.
    pub fn expand(&self, z: Quaternion, n: usize) -> Result<Expansion, ExpansionError> {
        if !self.domain.contains(z) {
            return Err(ExpansionError::OutsideDomain);
        }
        let mut orbit = vec![z];
        let mut digits = Vec::with_capacity(n);
        let mut cur = z;
        for step in 1..=n {
            let (d, next) = self.step(cur, step)?;
            digits.push(d);
            orbit.push(next);
            cur = next;
        }
        Ok(Expansion { digits, cycle: find_cycle(&orbit, 1e-9) })
    }

    /// `sum_j radix^{-j} d_j`.
    pub fn evaluate(&self, digits: &[Quaternion]) -> Quaternion {
        let inv = self.radix.inv().expect("radix is nonzero");
        let mut acc = Quaternion::ZERO;
        let mut p = inv;
        for d in digits {
            acc += p * *d;
            p = p * inv;
        }
        acc
    }

    /// Digits common to every point of the closed ball `B(center, radius)`.
    ///
    /// Stops at the first digit where the ball image crosses a cell face.
    pub fn ball_digits(&self, center: Quaternion, radius: f64, depth: usize) -> BallDigits {
        let q = self.radix.norm();
        let mut digits = Vec::with_capacity(depth);
        let mut cur = center;
        let mut r = radius;
        if self.domain.margin(cur) < r {
            return BallDigits { digits, straddles_at: Some(0) };
        }
        for step in 1..=depth {
            let w = self.radix * cur;
            r *= q;
            let slack = 16.0 * f64::EPSILON * (1.0 + w.norm());
            let d = match self.domain.cell_of(w, &self.tol, BoundaryPolicy::NudgeInward, step) {
                Ok(d) => d,
                Err(_) => return BallDigits { digits, straddles_at: Some(step) },
            };
            let next = w - d;
            if self.domain.margin(next) <= r + slack {
                return BallDigits { digits, straddles_at: Some(step) };
            }
            digits.push(d);
            cur = next;
        }
        BallDigits { digits, straddles_at: None }
    }
}

/// First `(i, j - i)` with `orbit[i]` and `orbit[j]` within `tol` of each other.
pub fn find_cycle(orbit: &[Quaternion], tol: f64) -> Option<(usize, usize)> {
    for j in 1..orbit.len() {
        for i in 0..j {
            if orbit[i].max_abs_diff(orbit[j]) <= tol {
                return Some((i, j - i));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_cells_tile() {
        let dom = LatticeDomain::hurwitz_box();
        let tol = Tolerance::default();
        let w = Quaternion::new(0.3, 0.2, 0.9, 0.7);
        let d = dom.cell_of(w, &tol, BoundaryPolicy::Error, 1).unwrap();
        assert_eq!(d, Quaternion::new(-0.5, -0.5, 0.5, 0.5));
        assert!(dom.contains(w - d));
    }

    #[test]
    fn margin_of_box_center() {
        let dom = LatticeDomain::lipschitz(0.0);
        assert!((dom.margin(Quaternion::new(0.5, 0.5, 0.5, 0.5)) - 0.5).abs() < 1e-15);
        assert!(dom.margin(Quaternion::new(1.5, 0.5, 0.5, 0.5)) < 0.0);
    }

    #[test]
    fn boundary_policy() {
        let dom = LatticeDomain::unit_interval();
        let tol = Tolerance::default();
        let w = Quaternion::real(1.0 - 1e-13);
        assert!(dom.cell_of(w, &tol, BoundaryPolicy::Error, 1).is_err());
        assert_eq!(dom.cell_of(w, &tol, BoundaryPolicy::NudgeInward, 1).unwrap(), Quaternion::ONE);
    }

    #[test]
    fn volume_is_checked() {
        let r = LatticeDomain::new(vec![Quaternion::ONE], vec![0.0], vec![0.5], vec![]);
        assert!(matches!(r, Err(LatticeError::VolumeMismatch(_))));
    }
}
