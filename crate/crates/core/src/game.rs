//! Schmidt games between a placing player (Alice) and a shrinking player
//! (Bob), scripted strategies for both, legality auditing, and verification
//! of what the outcome point's expansion does.
//!
//! Bob opens with `B(x0, rho)`. In round `n >= 1` Alice places a ball of
//! radius `alpha rho_{n-1}` inside Bob's last ball, then Bob places a ball of
//! radius `rho_n = (alpha beta)^n rho` inside hers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexBase, ComplexError, TargetSquare};
use crate::lattice::{BoundaryPolicy, LatticeDomain, LatticeSystem};
use crate::numeric::Quaternion;
use crate::quaternion::Anchor;
use crate::real::{RealBase, RealError};

/// Largest `n` and `k` the parameter searches try.
pub const SEARCH_LIMIT: u32 = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("parameters out of range: {0}")]
    BadParams(String),
    #[error("{player} made an illegal move in round {round} (overshoot {excess:e})")]
    IllegalMove { player: Player, round: usize, excess: f64, trace: Box<GameTrace> },
    #[error("{player}'s strategy failed in round {round}: {source}")]
    Strategy { player: Player, round: usize, source: StrategyError },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrategyError {
    #[error("no target within legal reach {reach:e} of the current centre")]
    NoReachableTarget { reach: f64 },
    #[error("a ball centre carries the digit that should be avoided")]
    AvoidedDigitHit,
    #[error("digit computation failed: {0}")]
    Digits(String),
    #[error("the zero-run bound is unknown for this base")]
    UnknownZeroRun,
    #[error("no (n, k) satisfies the inequalities within the search limit")]
    NoParameters,
    #[error(transparent)]
    Real(#[from] RealError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Alice,
    Bob,
}

impl std::fmt::Display for Player {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Player::Alice => "alice",
            Player::Bob => "bob",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameParams {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    /// 1, 2 or 4; centres live in the first `dimension` quaternion components.
    pub dimension: usize,
    /// Bob's opening centre, unless his strategy fixes its own.
    pub start: Quaternion,
    pub seed: u64,
    pub max_rounds: usize,
    /// The game stops once radii fall below this.
    pub min_radius: f64,
}

impl GameParams {
    pub fn new(alpha: f64, beta: f64, rho: f64, dimension: usize, start: Quaternion) -> Self {
        GameParams { alpha, beta, rho, dimension, start, seed: 0, max_rounds: 200, min_radius: 1e-11 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), GameError> {
        let unit = |x: f64| x > 0.0 && x < 1.0;
        if !unit(self.alpha) || !unit(self.beta) {
            return Err(GameError::BadParams(format!("alpha={} beta={}", self.alpha, self.beta)));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(GameError::BadParams(format!("rho={}", self.rho)));
        }
        if !matches!(self.dimension, 1 | 2 | 4) {
            return Err(GameError::BadParams(format!("dimension={}", self.dimension)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Move {
    pub player: Player,
    pub round: usize,
    pub center: Vec<f64>,
    pub radius: f64,
    pub legal: bool,
}

impl Move {
    pub fn center_q(&self) -> Quaternion {
        let mut v = [0.0; 4];
        v[..self.center.len()].copy_from_slice(&self.center);
        Quaternion::from_array(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameTrace {
    pub params: GameParams,
    pub alice: String,
    pub bob: String,
    pub moves: Vec<Move>,
    pub verdict: Option<Verification>,
}

impl GameTrace {
    /// Smallest ball played.
    pub fn final_ball(&self) -> (Quaternion, f64) {
        let m = self.moves.last().expect("Bob's opening move is always recorded");
        (m.center_q(), m.radius)
    }
}

/// What the current player sees.
pub struct Turn<'a> {
    pub player: Player,
    pub round: usize,
    pub params: &'a GameParams,
    /// Centre and radius of the ball the new one must fit inside.
    pub outer_center: Quaternion,
    pub outer_radius: f64,
    /// Radius of the ball to place.
    pub radius: f64,
    pub history: &'a [Move],
}

impl Turn<'_> {
    /// Largest legal displacement of the new centre.
    pub fn reach(&self) -> f64 {
        self.outer_radius - self.radius
    }
}

pub trait Strategy: Send {
    fn name(&self) -> String;

    /// Bob may fix his opening ball.
    fn opening(&mut self, _params: &GameParams) -> Option<(Quaternion, f64)> {
        None
    }

    fn place(&mut self, turn: &Turn<'_>, rng: &mut ChaCha8Rng) -> Result<Quaternion, StrategyError>;
}

fn legality_slack(outer_radius: f64, center: Quaternion) -> f64 {
    1e-9 * outer_radius + 16.0 * f64::EPSILON * (1.0 + center.norm())
}

/// Overshoot of `inner` beyond `outer`; legal when `<= 0`.
pub fn containment_excess(outer: (Quaternion, f64), inner: (Quaternion, f64)) -> f64 {
    outer.0.dist(inner.0) + inner.1 - outer.1 - legality_slack(outer.1, outer.0)
}

fn project(q: Quaternion, dim: usize) -> Vec<f64> {
    q.to_array()[..dim].to_vec()
}

fn in_dim(q: Quaternion, dim: usize) -> bool {
    q.to_array()[dim..].iter().all(|x| *x == 0.0)
}

/// Plays until `max_rounds` or the radius floor, aborting on the first illegal move.
pub fn play(params: &GameParams, alice: &mut dyn Strategy, bob: &mut dyn Strategy) -> Result<GameTrace, GameError> {
    params.validate()?;
    let dim = params.dimension;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (x0, rho) = bob.opening(params).unwrap_or((params.start, params.rho));
    let mut trace = GameTrace {
        params: GameParams { start: x0, rho, ..params.clone() },
        alice: alice.name(),
        bob: bob.name(),
        moves: vec![Move { player: Player::Bob, round: 0, center: project(x0, dim), radius: rho, legal: true }],
        verdict: None,
    };
    let (alpha, beta) = (params.alpha, params.beta);
    let mut outer = (x0, rho);
    for round in 1..=params.max_rounds {
        for player in [Player::Alice, Player::Bob] {
            let radius = match player {
                Player::Alice => alpha * outer.1,
                Player::Bob => beta * outer.1,
            };
            if radius < params.min_radius {
                return Ok(trace);
            }
            let turn = Turn {
                player,
                round,
                params,
                outer_center: outer.0,
                outer_radius: outer.1,
                radius,
                history: &trace.moves,
            };
            let strategy: &mut dyn Strategy = match player {
                Player::Alice => alice,
                Player::Bob => bob,
            };
            let center = strategy.place(&turn, &mut rng).map_err(|source| GameError::Strategy { player, round, source })?;
            let excess = containment_excess(outer, (center, radius));
            let legal = excess <= 0.0 && in_dim(center, dim) && center.is_finite();
            trace.moves.push(Move { player, round, center: project(center, dim), radius, legal });
            if !legal {
                return Err(GameError::IllegalMove { player, round, excess, trace: Box::new(trace) });
            }
            outer = (center, radius);
        }
    }
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditFailure {
    pub player: Player,
    pub round: usize,
    pub excess: f64,
}

/// Re-checks every move of a trace from the recorded centres and radii.
pub fn audit(trace: &GameTrace) -> Result<(), AuditFailure> {
    let (a, b) = (trace.params.alpha, trace.params.beta);
    for w in trace.moves.windows(2) {
        let (prev, cur) = (&w[0], &w[1]);
        let factor = match cur.player {
            Player::Alice => a,
            Player::Bob => b,
        };
        let radius_ok = (cur.radius - factor * prev.radius).abs() <= 1e-12 * prev.radius;
        let excess = containment_excess((prev.center_q(), prev.radius), (cur.center_q(), cur.radius));
        if !radius_ok || excess > 0.0 || !cur.legal || prev.player == cur.player {
            return Err(AuditFailure { player: cur.player, round: cur.round, excess });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Claims and verification

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Claim {
    /// Digit `digit` sits at `position` (1-based).
    ContainsBlock { digit: Quaternion, position: usize },
    /// None of the first `depth` digits equals `digit`.
    AvoidsDigit { digit: Quaternion, depth: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Falsified,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub claim: Claim,
    pub verdict: Verdict,
    /// Digits shared by the whole final ball.
    pub digits: Vec<String>,
    pub note: Option<String>,
}

/// Checks a claim against the digits shared by every point of the final ball.
pub fn verify_outcome(trace: &GameTrace, system: &LatticeSystem, claim: &Claim) -> Verification {
    let (c, r) = trace.final_ball();
    let depth = match claim {
        Claim::ContainsBlock { position, .. } => *position,
        Claim::AvoidsDigit { depth, .. } => *depth,
    };
    let ball = system.ball_digits(c, r, depth);
    let digits: Vec<String> = ball.digits.iter().map(|d| d.to_string()).collect();
    let known = ball.digits.len();
    let (verdict, note) = match claim {
        Claim::ContainsBlock { digit, position } => {
            if known >= *position {
                if ball.digits[position - 1] == *digit {
                    (Verdict::Verified, None)
                } else {
                    (Verdict::Falsified, None)
                }
            } else {
                (Verdict::Indeterminate, Some(format!("final ball straddles a cell face at digit {}", known + 1)))
            }
        }
        Claim::AvoidsDigit { digit, depth } => {
            if ball.digits.contains(digit) {
                (Verdict::Falsified, None)
            } else if known >= *depth {
                (Verdict::Verified, None)
            } else {
                (Verdict::Indeterminate, Some(format!("final ball straddles a cell face at digit {}", known + 1)))
            }
        }
    };
    Verification { claim: claim.clone(), verdict, digits, note }
}

// ---------------------------------------------------------------------------
// Thresholds and parameter searches

/// Lower bound on `beta` for the real winning strategy:
/// `((2P+1)a - 1) / (a((4P-1) - a(2P-1)))` with `P = K b + 2b`.
pub fn real_threshold(b: f64, zero_run: usize, alpha: f64) -> f64 {
    let p = zero_run as f64 * b + 2.0 * b;
    ((2.0 * p + 1.0) * alpha - 1.0) / (alpha * ((4.0 * p - 1.0) - alpha * (2.0 * p - 1.0)))
}

/// Lower bound on `beta` for the complex winning strategy with modulus `r`.
pub fn complex_threshold(r: f64, alpha: f64) -> f64 {
    let s = 2.0 * std::f64::consts::SQRT_2 * r;
    ((s + 1.0) * alpha - 1.0) / (alpha * ((1.0 - s) * alpha + (2.0 * s - 1.0)))
}

/// `2a - 4ab(1-a)/(1-ab)`: the limiting drift of Alice's ball relative to its radius scale.
pub fn drift_term(alpha: f64, beta: f64) -> f64 {
    2.0 * alpha - 4.0 * alpha * beta * (1.0 - alpha) / (1.0 - alpha * beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoldAndTarget {
    /// Rounds Alice waits before aiming.
    pub n: u32,
    /// Length of the targeted digit prefix.
    pub k: u32,
}

/// Smallest `(n, k)`, `n` first, with
/// `(K b + 2b) drift < (K+2)/(rho (ab)^n b^{k-1}) < (1-a)/spread`.
///
/// `spread` is 1 on the line and 2 for the four-coordinate product game.
pub fn find_hold_and_target(
    b: f64,
    zero_run: usize,
    alpha: f64,
    beta: f64,
    rho: f64,
    spread: f64,
) -> Option<HoldAndTarget> {
    let kk = zero_run as f64 + 2.0;
    let low = (zero_run as f64 * b + 2.0 * b) * drift_term(alpha, beta);
    let high = (1.0 - alpha) / spread;
    if low >= high {
        return None;
    }
    let ab = alpha * beta;
    for n in 1..=SEARCH_LIMIT {
        let scale = rho * ab.powi(n as i32);
        if scale == 0.0 {
            return None;
        }
        // smallest k with the middle term below `high`
        let need = kk / (scale * high);
        let guess = if need <= 1.0 { 2.0 } else { (need.ln() / b.ln()).floor() + 2.0 };
        if guess > SEARCH_LIMIT as f64 {
            return None;
        }
        let mut k = guess.max(2.0) as u32;
        while k > 2 && kk / (scale * b.powi(k as i32 - 2)) < high {
            k -= 1;
        }
        while kk / (scale * b.powi(k as i32 - 1)) >= high {
            k += 1;
        }
        if k > SEARCH_LIMIT {
            return None;
        }
        let mid = kk / (scale * b.powi(k as i32 - 1));
        if low < mid {
            return Some(HoldAndTarget { n, k });
        }
    }
    None
}

/// Smallest `n` for the complex strategy at fixed `k`:
/// `drift <= 1/(rho (ab)^n r^k) < (1-a)/(sqrt2 r)`, with `n = 1` forced when `(2-a)b >= 1`.
pub fn find_complex_hold(r: f64, k: u32, alpha: f64, beta: f64, rho: f64) -> Option<u32> {
    let rhs = (1.0 - alpha) / (std::f64::consts::SQRT_2 * r);
    let lhs = drift_term(alpha, beta);
    let ab = alpha * beta;
    let mid = |n: u32| 1.0 / (rho * ab.powi(n as i32) * r.powi(k as i32));
    if (2.0 - alpha) * beta >= 1.0 {
        return (mid(1) < rhs).then_some(1);
    }
    for n in 1..=SEARCH_LIMIT {
        let m = mid(n);
        if m >= rhs {
            return None;
        }
        if lhs <= m {
            return Some(n);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Strategies

fn unit_ball_sample(dim: usize, rng: &mut ChaCha8Rng) -> Quaternion {
    loop {
        let mut v = [0.0; 4];
        for x in v.iter_mut().take(dim) {
            *x = rng.gen_range(-1.0..=1.0);
        }
        let q = Quaternion::from_array(v);
        if q.norm_sqr() <= 1.0 {
            return q;
        }
    }
}

fn in_closure(domain: &Option<LatticeDomain>, p: Quaternion) -> bool {
    domain.as_ref().is_none_or(|d| d.margin(p) >= -1e-12)
}

/// Keeps the previous centre.
pub struct CenterHold;

impl Strategy for CenterHold {
    fn name(&self) -> String {
        "center-hold".into()
    }

    fn place(&mut self, turn: &Turn<'_>, _rng: &mut ChaCha8Rng) -> Result<Quaternion, StrategyError> {
        Ok(turn.outer_center)
    }
}

/// Uniform over legal centres, optionally restricted to the closure of a domain.
pub struct RandomLegal {
    pub within: Option<LatticeDomain>,
}

impl Strategy for RandomLegal {
    fn name(&self) -> String {
        "random-legal".into()
    }

    fn place(&mut self, turn: &Turn<'_>, rng: &mut ChaCha8Rng) -> Result<Quaternion, StrategyError> {
        let reach = turn.reach() * (1.0 - 1e-9);
        for _ in 0..1000 {
            let p = turn.outer_center + unit_ball_sample(turn.params.dimension, rng).scale(reach);
            if in_closure(&self.within, p) {
                return Ok(p);
            }
        }
        Ok(turn.outer_center)
    }
}

/// Moves the full legal distance along a fixed direction, turning back at the domain edge.
pub struct OptimalDrift {
    pub direction: Quaternion,
    pub within: Option<LatticeDomain>,
}

impl OptimalDrift {
    pub fn along_first_axis(within: Option<LatticeDomain>) -> Self {
        OptimalDrift { direction: Quaternion::ONE, within }
    }
}

impl Strategy for OptimalDrift {
    fn name(&self) -> String {
        "optimal-drift".into()
    }

    fn place(&mut self, turn: &Turn<'_>, _rng: &mut ChaCha8Rng) -> Result<Quaternion, StrategyError> {
        let v = self.direction.scale(1.0 / self.direction.norm());
        let step = v.scale(turn.reach());
        for p in [turn.outer_center + step, turn.outer_center - step] {
            if in_closure(&self.within, p) {
                return Ok(p);
            }
        }
        Ok(turn.outer_center)
    }
}

/// Finds the target Alice locks onto once she stops holding.
pub trait TargetFinder: Send {
    fn nearest(&self, x: Quaternion, reach: f64) -> Result<Option<Quaternion>, StrategyError>;
}

/// Centres of full-length intervals of `V_k(b; d)` on the line.
pub struct IntervalTargets {
    pub base: RealBase,
    pub digit: u32,
    pub k: u32,
}

impl IntervalTargets {
    fn nearest_coord(&self, x: f64, reach: f64) -> Result<Option<f64>, StrategyError> {
        let ivs = self.base.cylinder_intervals_within(self.digit, self.k as usize, x - reach, x + reach)?;
        Ok(ivs
            .iter()
            .filter(|iv| iv.full_length)
            .map(|iv| iv.center())
            .filter(|c| (c - x).abs() <= reach)
            .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs())))
    }
}

impl TargetFinder for IntervalTargets {
    fn nearest(&self, x: Quaternion, reach: f64) -> Result<Option<Quaternion>, StrategyError> {
        Ok(self.nearest_coord(x.a, reach)?.map(Quaternion::real))
    }
}

/// Product of interval targets, one digit per quaternion coordinate.
pub struct ProductTargets {
    pub coords: [IntervalTargets; 4],
}

impl TargetFinder for ProductTargets {
    fn nearest(&self, x: Quaternion, reach: f64) -> Result<Option<Quaternion>, StrategyError> {
        let xs = x.to_array();
        let mut out = [0.0; 4];
        for i in 0..4 {
            match self.coords[i].nearest_coord(xs[i], reach)? {
                Some(c) => out[i] = c,
                None => return Ok(None),
            }
        }
        let p = Quaternion::from_array(out);
        Ok((p.dist(x) <= reach).then_some(p))
    }
}

/// Centres of the target squares of a complex base.
pub struct SquareTargets {
    pub squares: Vec<TargetSquare>,
}

impl TargetFinder for SquareTargets {
    fn nearest(&self, x: Quaternion, reach: f64) -> Result<Option<Quaternion>, StrategyError> {
        Ok(self
            .squares
            .iter()
            .map(|s| s.center)
            .filter(|c| c.dist(x) <= reach)
            .min_by(|a, b| a.dist(x).total_cmp(&b.dist(x))))
    }
}

/// Holds the centre for `hold` rounds, jumps to the nearest target, then pulls back toward it.
pub struct HoldThenTarget {
    pub label: String,
    pub hold: u32,
    pub finder: Box<dyn TargetFinder>,
    target: Option<Quaternion>,
}

impl HoldThenTarget {
    pub fn new(label: impl Into<String>, hold: u32, finder: Box<dyn TargetFinder>) -> Self {
        HoldThenTarget { label: label.into(), hold, finder, target: None }
    }

    pub fn target(&self) -> Option<Quaternion> {
        self.target
    }

    /// Real base `b`: aims at a full-length interval of `V_k(b; d)`.
    pub fn real(base: RealBase, digit: u32, plan: HoldAndTarget) -> Self {
        HoldThenTarget::new(
            "real-winning",
            plan.n,
            Box::new(IntervalTargets { base, digit, k: plan.k }),
        )
    }

    /// Complex base: aims at a square of `V_k(xi; 0)`.
    pub fn complex(base: &ComplexBase, k: u32, hold: u32) -> Result<Self, StrategyError> {
        let squares = base.target_squares(k as usize)?;
        Ok(HoldThenTarget::new("complex-winning", hold, Box::new(SquareTargets { squares })))
    }

    /// Real quaternion `q` on the Lipschitz cube: one interval target per coordinate.
    pub fn componentwise(base: RealBase, digits: [u32; 4], plan: HoldAndTarget) -> Self {
        let mk = |d: u32| IntervalTargets { base: base.clone(), digit: d, k: plan.k };
        HoldThenTarget::new(
            "quaternion-componentwise",
            plan.n,
            Box::new(ProductTargets { coords: [mk(digits[0]), mk(digits[1]), mk(digits[2]), mk(digits[3])] }),
        )
    }
}

impl Strategy for HoldThenTarget {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn place(&mut self, turn: &Turn<'_>, _rng: &mut ChaCha8Rng) -> Result<Quaternion, StrategyError> {
        let x = turn.outer_center;
        let reach = turn.reach();
        if (turn.round as u32) <= self.hold {
            return Ok(x);
        }
        let p = match self.target {
            Some(p) => p,
            None => {
                let p = self.finder.nearest(x, reach)?.ok_or(StrategyError::NoReachableTarget { reach })?;
                self.target = Some(p);
                return Ok(p);
            }
        };
        let gap = p.dist(x);
        if gap <= reach {
            Ok(p)
        } else {
            Ok(x + (p - x).scale(reach / gap))
        }
    }
}

/// Bob keeps every point of his ball on one digit path that never uses `digit`.
///
/// His `k`-th centre is `sum_{j<=k} q^-j a_j + q^-k xi`, where `a_j` is the
/// `j`-th digit of Alice's `j`-th centre.
pub struct AvoidDigit {
    pub system: LatticeSystem,
    pub anchor: Anchor,
    pub digit: Quaternion,
    partial: Quaternion,
    digits: Vec<Quaternion>,
}

impl AvoidDigit {
    pub fn new(system: LatticeSystem, anchor: Anchor, digit: Quaternion) -> Self {
        AvoidDigit { system, anchor, digit, partial: Quaternion::ZERO, digits: Vec::new() }
    }

    pub fn digits(&self) -> &[Quaternion] {
        &self.digits
    }
}

impl Strategy for AvoidDigit {
    fn name(&self) -> String {
        "avoid-digit".into()
    }

    fn opening(&mut self, _params: &GameParams) -> Option<(Quaternion, f64)> {
        self.partial = Quaternion::ZERO;
        self.digits.clear();
        Some((self.anchor.xi, self.anchor.rho))
    }

    fn place(&mut self, turn: &Turn<'_>, _rng: &mut ChaCha8Rng) -> Result<Quaternion, StrategyError> {
        let q = self.system.radix();
        let k = self.digits.len() as u32 + 1;
        let a = turn.outer_center;
        // Alice's centre shares its first k-1 digits with ours; the next one comes from the tail.
        let tail = q.powi(k - 1) * (a - self.partial);
        let w = q * tail;
        let tol = *self.system.tolerance();
        let dom = self.system.domain();
        let d = dom
            .cell_of(w, &tol, BoundaryPolicy::Error, k as usize)
            .or_else(|_| dom.cell_of(w, &tol, BoundaryPolicy::NudgeInward, k as usize))
            .map_err(|e| StrategyError::Digits(e.to_string()))?;
        if d == self.digit {
            return Err(StrategyError::AvoidedDigitHit);
        }
        let inv_k = q.inv().expect("nonzero").powi(k);
        self.partial += inv_k * d;
        self.digits.push(d);
        Ok(self.partial + inv_k * self.anchor.xi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_examples() {
        let f = complex_threshold(4.5, 0.6);
        let want = (8495.0 - 180.0 * 2f64.sqrt()) / 11901.0;
        assert!((f - want).abs() < 1e-12, "{f} vs {want}");
        let a = real_threshold(1e6, 0, 0.5);
        assert!((a - 2.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn complex_hold_example() {
        for beta in [0.70, 0.72, 0.9] {
            assert_eq!(find_complex_hold(4.5, 2, 0.6, beta, 2.0), Some(1), "beta={beta}");
        }
    }

    #[test]
    fn audit_accepts_center_hold() {
        let params = GameParams::new(0.5, 0.5, 0.25, 1, Quaternion::real(0.5));
        let t = play(&params, &mut CenterHold, &mut CenterHold).unwrap();
        assert!(audit(&t).is_ok());
    }
}
