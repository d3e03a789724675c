//! Quaternion radices over four-dimensional lattices: preset domains, the
//! isoclinic form of left multiplication, the constants that govern the
//! digit-avoiding strategy, and witness search for admissible blocks.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{LatticeDomain, LatticeError, LatticeSystem};
use crate::numeric::{bisect, Quaternion, Tolerance};
use crate::parallel::{map_indexed, Execution};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuaternionError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("zeta lattice needs a pure unit eta orthogonal to zeta")]
    BadZetaFrame,
    #[error("anchor ball is not inside the domain (margin {margin}, radius {rho})")]
    BallOutside { margin: f64, rho: f64 },
    #[error("anchor too close to the origin: |xi| = {xi_norm} but the radius is {rho}")]
    AnchorTooSmall { xi_norm: f64, rho: f64 },
    #[error("block constant {c} is not below |q|^n = {bound}")]
    ConstantTooLarge { c: f64, bound: f64 },
    #[error("cannot parse lattice preset '{0}'")]
    BadPreset(String),
    #[error("block must be nonempty")]
    EmptyBlock,
}

/// Left multiplication by `q / |q|` as a 4x4 orthogonal matrix acting on `(a, b, c, d)`.
pub fn isoclinic_matrix(q: Quaternion) -> [[f64; 4]; 4] {
    let u = q.scale(1.0 / q.norm());
    let (a, b, c, d) = (u.a, u.b, u.c, u.d);
    [[a, -b, -c, -d], [b, a, -d, c], [c, d, a, -b], [d, -c, b, a]]
}

pub fn apply_matrix(m: &[[f64; 4]; 4], x: Quaternion) -> Quaternion {
    let v = x.to_array();
    let row = |r: &[f64; 4]| r.iter().zip(v.iter()).map(|(p, q)| p * q).sum::<f64>();
    Quaternion::new(row(&m[0]), row(&m[1]), row(&m[2]), row(&m[3]))
}

/// Basis `(1, conj zeta, eta, conj(zeta) eta)` on `[-eps, 1 - eps)^4`.
pub fn zeta_lattice(zeta: Quaternion, eta: Quaternion, eps: f64) -> Result<LatticeDomain, QuaternionError> {
    let tiny = 1e-12;
    if eta.a.abs() > tiny || (eta.norm() - 1.0).abs() > tiny || eta.dot(zeta).abs() > tiny {
        return Err(QuaternionError::BadZetaFrame);
    }
    let zc = zeta.conj();
    Ok(LatticeDomain::parallelotope(vec![Quaternion::ONE, zc, eta, zc * eta], vec![-eps; 4])?)
}

/// How the anchor ball sits relative to the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnchorKind {
    /// `|xi| > 2 rho`.
    Standard,
    /// `|xi| = 2 rho`, the ball touches the cube centred at the origin; the gap is `|xi|`.
    Symmetric,
}

/// Ball `B(xi, rho)` inside the domain where the avoiding player starts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub xi: Quaternion,
    pub rho: f64,
    pub kind: AnchorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainConstants {
    /// Supremum of `|z|` over the domain.
    pub sup_norm: f64,
    /// Supremum of `|xi - z|` over the domain.
    pub sup_dist: f64,
    pub xi_norm: f64,
    pub rho: f64,
    /// Distance budget separating the anchor ball from the origin.
    pub gap: f64,
    /// `max(1 + D/rho, M/gap, 1/gap)`.
    pub domain_constant: f64,
}

impl DomainConstants {
    /// Smallest constant that makes the avoiding strategy work for a single digit `d`:
    /// `max(1 + D/rho, (M + |d|)/gap)`.
    pub fn digit_constant(&self, d: Quaternion) -> f64 {
        (1.0 + self.sup_dist / self.rho).max((self.sup_norm + d.norm()) / self.gap)
    }

    /// `C (1 + |sum_j q^{n-j} w_j|)` for a block `w`.
    pub fn block_constant(&self, q: Quaternion, block: &[Quaternion]) -> Result<f64, QuaternionError> {
        if block.is_empty() {
            return Err(QuaternionError::EmptyBlock);
        }
        let folded = block.iter().fold(Quaternion::ZERO, |acc, w| q * acc + *w);
        Ok(self.domain_constant * (1.0 + folded.norm()))
    }
}

pub fn domain_constants(domain: &LatticeDomain, anchor: &Anchor) -> Result<DomainConstants, QuaternionError> {
    let corners = domain.corners();
    let sup_norm = corners.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let sup_dist = corners.iter().map(|c| c.dist(anchor.xi)).fold(0.0, f64::max);
    let xi_norm = anchor.xi.norm();
    let margin = domain.margin(anchor.xi);
    if margin < anchor.rho * (1.0 - 1e-12) {
        return Err(QuaternionError::BallOutside { margin, rho: anchor.rho });
    }
    let gap = match anchor.kind {
        AnchorKind::Standard => xi_norm - 2.0 * anchor.rho,
        AnchorKind::Symmetric => xi_norm,
    };
    if gap <= 0.0 || xi_norm <= anchor.rho {
        return Err(QuaternionError::AnchorTooSmall { xi_norm, rho: anchor.rho });
    }
    let domain_constant = (1.0 + sup_dist / anchor.rho).max(sup_norm / gap).max(1.0 / gap);
    Ok(DomainConstants { sup_norm, sup_dist, xi_norm, rho: anchor.rho, gap, domain_constant })
}

/// Radius that balances `1 + D/rho` against `(M + |d|)/(|xi| - 2 rho)`, capped by the inscribed ball.
pub fn balanced_radius(domain: &LatticeDomain, xi: Quaternion, d: Quaternion) -> Result<f64, QuaternionError> {
    let corners = domain.corners();
    let m = corners.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let big_d = corners.iter().map(|c| c.dist(xi)).fold(0.0, f64::max);
    let xn = xi.norm();
    let f = |rho: f64| 1.0 + big_d / rho - (m + d.norm()) / (xn - 2.0 * rho);
    let hi = 0.5 * xn * (1.0 - 1e-12);
    let rho = bisect(f, 1e-9 * xn, hi, 200).map_err(|_| QuaternionError::AnchorTooSmall { xi_norm: xn, rho: hi })?;
    let cap = domain.margin(xi);
    Ok(rho.min(cap))
}

/// Admissible range for the avoiding game: `alpha` in `[max(C,1)|q|^-n, 1)` and `beta = |q|^-n / alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LosingWindow {
    pub alpha_min: f64,
    pub scale: f64,
}

impl LosingWindow {
    pub fn beta_for(&self, alpha: f64) -> f64 {
        self.scale / alpha
    }

    pub fn contains(&self, alpha: f64) -> bool {
        alpha >= self.alpha_min && alpha < 1.0
    }
}

pub fn losing_parameters(block_constant: f64, q_norm: f64, n: u32) -> Result<LosingWindow, QuaternionError> {
    let scale = q_norm.powi(-(n as i32));
    let bound = q_norm.powi(n as i32);
    if block_constant >= bound {
        return Err(QuaternionError::ConstantTooLarge { c: block_constant, bound });
    }
    Ok(LosingWindow { alpha_min: block_constant.max(1.0) * scale, scale })
}

/// Named lattice domains with their anchor balls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LatticePreset {
    /// Lipschitz integers on `[0,1)^4`.
    Lipschitz,
    /// Hurwitz integers on `[0,1)^3 x [0,1/2)`.
    HurwitzBox,
    /// Lipschitz integers on `[0,1)^4` with the radius balanced for digit 0.
    Rotational,
    /// Basis `(1, conj zeta, eta, conj(zeta) eta)` on `[-eps, 1-eps)^4`.
    Zeta { zeta: Quaternion, eta: Quaternion, eps: f64 },
    /// Cube `[-eps, eps)^4` tiled by `2 eps` times the Lipschitz integers.
    Symmetric { eps: f64 },
    /// Arbitrary basis on `[0,1)^4`, given as four quaternions.
    Basis([f64; 16]),
}

impl LatticePreset {
    pub fn default_zeta() -> Self {
        LatticePreset::Zeta { zeta: Quaternion::new(0.0, 2.0, 0.0, 0.0), eta: Quaternion::J, eps: 0.1 }
    }

    pub fn domain(&self) -> Result<LatticeDomain, QuaternionError> {
        Ok(match self {
            LatticePreset::Lipschitz | LatticePreset::Rotational => LatticeDomain::lipschitz(0.0),
            LatticePreset::HurwitzBox => LatticeDomain::hurwitz_box(),
            LatticePreset::Zeta { zeta, eta, eps } => zeta_lattice(*zeta, *eta, *eps)?,
            LatticePreset::Symmetric { eps } => LatticeDomain::parallelotope(
                vec![Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K]
                    .into_iter()
                    .map(|v| v.scale(2.0 * eps))
                    .collect(),
                vec![-0.5; 4],
            )?,
            LatticePreset::Basis(v) => LatticeDomain::parallelotope(
                (0..4).map(|i| Quaternion::new(v[4 * i], v[4 * i + 1], v[4 * i + 2], v[4 * i + 3])).collect(),
                vec![0.0; 4],
            )?,
        })
    }

    pub fn anchor(&self) -> Result<Anchor, QuaternionError> {
        let std_anchor = |xi, rho| Anchor { xi, rho, kind: AnchorKind::Standard };
        match self {
            LatticePreset::Lipschitz => Ok(std_anchor(Quaternion::new(0.5, 0.5, 0.5, 0.5), 0.4)),
            LatticePreset::HurwitzBox => Ok(std_anchor(Quaternion::new(0.5, 0.5, 0.5, 0.25), 0.25)),
            LatticePreset::Rotational => Ok(std_anchor(Quaternion::new(0.5, 0.5, 0.5, 0.5), rotational_radius(0.0))),
            LatticePreset::Symmetric { eps } => {
                let tau = eps / 4.0;
                Ok(Anchor { xi: Quaternion::new(tau, tau, tau, tau), rho: tau, kind: AnchorKind::Symmetric })
            }
            LatticePreset::Zeta { .. } | LatticePreset::Basis(_) => {
                let dom = self.domain()?;
                let xi = dom.center();
                let rho = balanced_radius(&dom, xi, Quaternion::ZERO)?;
                Ok(std_anchor(xi, rho))
            }
        }
    }

    pub fn constants(&self) -> Result<DomainConstants, QuaternionError> {
        domain_constants(&self.domain()?, &self.anchor()?)
    }
}

/// `(sqrt(t^2 + 6t + 17) - t - 3) / 4` with `t = |d|`: the balanced radius on the Lipschitz cube.
pub fn rotational_radius(d_norm: f64) -> f64 {
    ((d_norm * d_norm + 6.0 * d_norm + 17.0).sqrt() - d_norm - 3.0) / 4.0
}

impl fmt::Display for LatticePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticePreset::Lipschitz => f.write_str("lipschitz"),
            LatticePreset::HurwitzBox => f.write_str("hurwitz-box"),
            LatticePreset::Rotational => f.write_str("rotational"),
            LatticePreset::Zeta { .. } => f.write_str("zeta"),
            LatticePreset::Symmetric { eps } => write!(f, "symmetric:{eps}"),
            LatticePreset::Basis(v) => {
                let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "basis:{}", s.join(","))
            }
        }
    }
}

impl FromStr for LatticePreset {
    type Err = QuaternionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || QuaternionError::BadPreset(s.to_string());
        match s {
            "lipschitz" => return Ok(LatticePreset::Lipschitz),
            "hurwitz-box" => return Ok(LatticePreset::HurwitzBox),
            "rotational" => return Ok(LatticePreset::Rotational),
            "zeta" => return Ok(LatticePreset::default_zeta()),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("symmetric:") {
            let eps: f64 = rest.parse().map_err(|_| bad())?;
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(bad());
            }
            return Ok(LatticePreset::Symmetric { eps });
        }
        if let Some(rest) = s.strip_prefix("basis:") {
            let v: Vec<f64> = rest
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad())?;
            let arr: [f64; 16] = v.try_into().map_err(|_| bad())?;
            return Ok(LatticePreset::Basis(arr));
        }
        Err(bad())
    }
}

/// Outcome of a witness search for an admissible block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Witness {
    /// A point whose expansion starts with the block.
    Found(Quaternion),
    NotCertified,
}

/// Search for a point whose first digits are `block`.
///
/// Candidates are `sum_j q^-j w_j + q^-n p` with `p` drawn from the domain,
/// which covers the cylinder; the first is the image of the domain centre.
pub fn find_witness(
    system: &LatticeSystem,
    block: &[Quaternion],
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Witness {
    if block.is_empty() {
        return Witness::NotCertified;
    }
    let dom = system.domain();
    let q = system.radix();
    let inv = q.inv().expect("nonzero radix");
    let base = system.evaluate(block);
    let scale = inv.powi(block.len() as u32);
    let dim = dom.dim();
    let try_point = |p: Quaternion| {
        let z = base + scale * p;
        match system.digits(z, block.len()) {
            Ok(d) if d == block => Some(z),
            _ => None,
        }
    };
    if let Some(z) = try_point(dom.center()) {
        return Witness::Found(z);
    }
    const CHUNK: usize = 256;
    let chunks = samples.div_ceil(CHUNK);
    let hits = map_indexed(chunks, exec, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (c as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        (0..CHUNK).find_map(|_| {
            let t: Vec<f64> = (0..dim).map(|i| dom.lo()[i] + dom.width()[i] * rng.gen::<f64>()).collect();
            try_point(dom.point(&t))
        })
    });
    hits.into_iter().flatten().next().map_or(Witness::NotCertified, Witness::Found)
}

/// Quaternion system for `q` acting on a preset lattice.
pub fn preset_system(q: Quaternion, preset: &LatticePreset, tol: Tolerance) -> Result<LatticeSystem, QuaternionError> {
    Ok(LatticeSystem::new(q, preset.domain()?, tol)?)
}
