//! Ready-made game setups, random samplers for parameter sets that meet the
//! winning and losing hypotheses, and batch runners over them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{order_two_region, ComplexBase, ComplexDomain, ComplexError};
use crate::game::{
    audit, find_complex_hold, find_hold_and_target, play, real_threshold, complex_threshold, AvoidDigit,
    CenterHold, Claim, GameError, GameParams, GameTrace, HoldAndTarget, HoldThenTarget, OptimalDrift,
    RandomLegal, Strategy, Verdict, Verification, verify_outcome,
};
use crate::lattice::{LatticeDomain, LatticeSystem};
use crate::numeric::{metallic_mean, Quaternion, Tolerance};
use crate::parallel::{map_slice, Execution};
use crate::quaternion::{LatticePreset, QuaternionError};
use crate::real::{RealBase, RealError};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("hypotheses not met: {0}")]
    Hypotheses(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Real(#[from] RealError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Quaternion(#[from] QuaternionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BobKind {
    OptimalDrift,
    Random,
    CenterHold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AliceKind {
    Random,
    CenterHold,
}

/// Which constant bounds `alpha` from below in the avoiding game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantKind {
    /// `C (1 + |d|)` with the domain constant `C`.
    Domain,
    /// `max(1 + D/rho, (M + |d|)/gap)`.
    Digit,
    /// A fixed value, for hand-derived constants.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "game", rename_all = "kebab-case")]
pub enum Setup {
    RealWinning {
        b: f64,
        digit: u32,
        alpha: f64,
        beta: f64,
        rho: f64,
        start: f64,
        bob: BobKind,
        /// Overrides the zero-run bound of the base (needed when it is not known).
        zero_run: Option<usize>,
    },
    ComplexWinning {
        r: f64,
        theta: f64,
        k: u32,
        alpha: f64,
        beta: f64,
        rho: f64,
        start: [f64; 2],
        bob: BobKind,
    },
    Componentwise {
        q: f64,
        digits: [u32; 4],
        alpha: f64,
        beta: f64,
        rho: f64,
        start: [f64; 4],
        bob: BobKind,
    },
    Losing {
        preset: LatticePreset,
        q: Quaternion,
        digit: Quaternion,
        alpha: f64,
        alice: AliceKind,
        constant: ConstantKind,
    },
}

/// Everything one game produced.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub trace: GameTrace,
    pub verification: Verification,
    pub audit_ok: bool,
}

impl RunReport {
    pub fn verified(&self) -> bool {
        self.audit_ok && self.verification.verdict == Verdict::Verified
    }
}

fn bob_strategy(kind: BobKind, within: Option<LatticeDomain>) -> Box<dyn Strategy> {
    match kind {
        BobKind::OptimalDrift => Box::new(OptimalDrift::along_first_axis(within)),
        BobKind::Random => Box::new(RandomLegal { within }),
        BobKind::CenterHold => Box::new(CenterHold),
    }
}

/// Parameters, both strategies, the digit system and the claim (absent for losing games).
type Assembled = (GameParams, Box<dyn Strategy>, Box<dyn Strategy>, LatticeSystem, Option<Claim>);

/// Minimum radius for games whose verification iterates a radix of modulus `q`.
const LOSING_MIN_RADIUS: f64 = 1e-9;

impl Setup {
    pub fn dimension(&self) -> usize {
        match self {
            Setup::RealWinning { .. } => 1,
            Setup::ComplexWinning { .. } => 2,
            Setup::Componentwise { .. } | Setup::Losing { .. } => 4,
        }
    }

    fn real_plan(base: &RealBase, zero_run: Option<usize>, alpha: f64, beta: f64, rho: f64, spread: f64)
        -> Result<(usize, HoldAndTarget), ScenarioError> {
        let kk = zero_run
            .or_else(|| base.tail_shape().zero_run())
            .ok_or_else(|| ScenarioError::Hypotheses("zero-run bound of the base is unknown".into()))?;
        let b = base.value();
        let eff_b = if spread > 1.0 { 2.0 * b } else { b };
        if !(beta > real_threshold(eff_b, kk, alpha)) {
            return Err(ScenarioError::Hypotheses(format!("beta={beta} is not above the threshold")));
        }
        let plan = find_hold_and_target(b, kk, alpha, beta, rho, spread)
            .ok_or_else(|| ScenarioError::Hypotheses("no (n, k) within the search limit".into()))?;
        Ok((kk, plan))
    }

    /// Builds strategies and plays one game with the given seed.
    pub fn run(&self, seed: u64) -> Result<RunReport, ScenarioError> {
        let tol = Tolerance::default();
        let (params, mut alice, mut bob, system, claim): Assembled =
            match self {
                Setup::RealWinning { b, digit, alpha, beta, rho, start, bob, zero_run } => {
                    let base = RealBase::new(*b)?;
                    let (_, plan) = Setup::real_plan(&base, *zero_run, *alpha, *beta, *rho, 1.0)?;
                    let system = base.system();
                    let claim = Claim::ContainsBlock { digit: Quaternion::real(*digit as f64), position: plan.k as usize };
                    let params = GameParams::new(*alpha, *beta, *rho, 1, Quaternion::real(*start)).with_seed(seed);
                    let within = Some(LatticeDomain::unit_interval());
                    (params, Box::new(HoldThenTarget::real(base, *digit, plan)), bob_strategy(*bob, within), system, Some(claim))
                }
                Setup::ComplexWinning { r, theta, k, alpha, beta, rho, start, bob } => {
                    let base = ComplexBase::new(*r, *theta)?;
                    if !(*beta > complex_threshold(*r, *alpha)) {
                        return Err(ScenarioError::Hypotheses(format!("beta={beta} is not above the threshold")));
                    }
                    let hold = find_complex_hold(*r, *k, *alpha, *beta, *rho)
                        .ok_or_else(|| ScenarioError::Hypotheses("no hold length n within the search limit".into()))?;
                    let alice = HoldThenTarget::complex(&base, *k, hold)
                        .map_err(|e| ScenarioError::Hypotheses(e.to_string()))?;
                    let claim = Claim::ContainsBlock { digit: Quaternion::ZERO, position: *k as usize };
                    let params = GameParams::new(*alpha, *beta, *rho, 2, Quaternion::complex(start[0], start[1])).with_seed(seed);
                    let within = Some(ComplexDomain::Centered.lattice());
                    (params, Box::new(alice), bob_strategy(*bob, within), base.system(), Some(claim))
                }
                Setup::Componentwise { q, digits, alpha, beta, rho, start, bob } => {
                    let base = RealBase::new(*q)?;
                    let (_, plan) = Setup::real_plan(&base, None, *alpha, *beta, *rho, 2.0)?;
                    let system = LatticeSystem::new(Quaternion::real(*q), LatticeDomain::lipschitz(0.0), tol)
                        .map_err(QuaternionError::from)?;
                    let digit = Quaternion::new(digits[0] as f64, digits[1] as f64, digits[2] as f64, digits[3] as f64);
                    let claim = Claim::ContainsBlock { digit, position: plan.k as usize };
                    let params = GameParams::new(*alpha, *beta, *rho, 4, Quaternion::from_array(*start)).with_seed(seed);
                    let within = Some(LatticeDomain::lipschitz(0.0));
                    (params, Box::new(HoldThenTarget::componentwise(base, *digits, plan)), bob_strategy(*bob, within), system, Some(claim))
                }
                Setup::Losing { preset, q, digit, alpha, alice, constant } => {
                    let domain = preset.domain()?;
                    let anchor = preset.anchor()?;
                    let dc = preset.constants()?;
                    let c = match constant {
                        ConstantKind::Domain => dc.block_constant(*q, &[*digit])?,
                        ConstantKind::Digit => dc.digit_constant(*digit),
                        ConstantKind::Fixed(c) => *c,
                    };
                    let qn = q.norm();
                    if !(*alpha >= c / qn && *alpha < 1.0) {
                        return Err(ScenarioError::Hypotheses(format!("alpha={alpha} is below C/|q| = {}", c / qn)));
                    }
                    let system = LatticeSystem::new(*q, domain, tol).map_err(QuaternionError::from)?;
                    let beta = 1.0 / (alpha * qn);
                    let mut params = GameParams::new(*alpha, beta, anchor.rho, 4, anchor.xi).with_seed(seed);
                    params.min_radius = LOSING_MIN_RADIUS;
                    let alice: Box<dyn Strategy> = match alice {
                        AliceKind::Random => Box::new(RandomLegal { within: None }),
                        AliceKind::CenterHold => Box::new(CenterHold),
                    };
                    (params, alice, Box::new(AvoidDigit::new(system.clone(), anchor, *digit)), system, None)
                }
            };
        let trace = play(&params, alice.as_mut(), bob.as_mut())?;
        let claim = claim.unwrap_or_else(|| {
            let Setup::Losing { digit, .. } = self else { unreachable!() };
            let bob_moves = trace.moves.iter().filter(|m| m.round > 0 && m.player == crate::game::Player::Bob).count();
            Claim::AvoidsDigit { digit: *digit, depth: bob_moves.saturating_sub(1).max(1) }
        });
        let verification = verify_outcome(&trace, &system, &claim);
        let audit_ok = audit(&trace).is_ok();
        let mut trace = trace;
        trace.verdict = Some(verification.clone());
        Ok(RunReport { trace, verification, audit_ok })
    }
}

/// Named setups reachable from the command line.
pub fn preset(name: &str) -> Option<Setup> {
    let phi = metallic_mean(1).expect("j > 0");
    Some(match name {
        "dwinning-golden" => Setup::RealWinning {
            b: phi,
            digit: 0,
            alpha: 0.2,
            beta: 0.5,
            rho: 0.4,
            start: 0.5,
            bob: BobKind::OptimalDrift,
            zero_run: None,
        },
        "dwinning-golden-random" => Setup::RealWinning {
            b: phi,
            digit: 0,
            alpha: 0.2,
            beta: 0.5,
            rho: 0.4,
            start: 0.5,
            bob: BobKind::Random,
            zero_run: None,
        },
        "dwinning-silver" => Setup::RealWinning {
            b: metallic_mean(2).expect("j > 0"),
            digit: 0,
            alpha: 0.1,
            beta: 0.6,
            rho: 0.3,
            start: 0.45,
            bob: BobKind::OptimalDrift,
            zero_run: None,
        },
        "dwinning-complex" => Setup::ComplexWinning {
            r: 4.5,
            theta: 0.05,
            k: 2,
            alpha: 0.6,
            beta: 0.8,
            rho: 2.0,
            start: [0.1, -0.2],
            bob: BobKind::OptimalDrift,
        },
        "componentwise-lipschitz" => Setup::Componentwise {
            q: phi,
            digits: [0, 0, 0, 0],
            alpha: 0.1,
            beta: 0.5,
            rho: 0.45,
            start: [0.5; 4],
            bob: BobKind::OptimalDrift,
        },
        "notwinning-lipschitz" => Setup::Losing {
            preset: LatticePreset::Lipschitz,
            q: Quaternion::new(1.0, 2.0, 3.0, 4.0).scale(25.0 / 30f64.sqrt()),
            digit: Quaternion::ZERO,
            alpha: 0.5,
            alice: AliceKind::Random,
            constant: ConstantKind::Domain,
        },
        "notwinning-hurwitz" => Setup::Losing {
            preset: LatticePreset::HurwitzBox,
            q: Quaternion::new(2.0, -1.0, 1.0, 3.0).scale(12.0 / 15f64.sqrt()),
            digit: Quaternion::ZERO,
            alpha: 0.5,
            alice: AliceKind::Random,
            constant: ConstantKind::Domain,
        },
        "notwinning-zeta" => Setup::Losing {
            preset: LatticePreset::default_zeta(),
            q: Quaternion::new(1.0, 1.0, -2.0, 1.0).scale(25.0 / 7f64.sqrt()),
            digit: Quaternion::ZERO,
            alpha: 0.6,
            alice: AliceKind::Random,
            constant: ConstantKind::Domain,
        },
        "notwinning-symmetric" => Setup::Losing {
            preset: LatticePreset::Symmetric { eps: 0.5 },
            q: Quaternion::new(3.0, 1.0, 1.0, -1.0).scale(25.0 / 12f64.sqrt()),
            digit: Quaternion::ZERO,
            alpha: 0.6,
            alice: AliceKind::Random,
            constant: ConstantKind::Domain,
        },
        _ => return None,
    })
}

pub const PRESET_NAMES: [&str; 9] = [
    "dwinning-golden",
    "dwinning-golden-random",
    "dwinning-silver",
    "dwinning-complex",
    "componentwise-lipschitz",
    "notwinning-lipschitz",
    "notwinning-hurwitz",
    "notwinning-zeta",
    "notwinning-symmetric",
];

/// Random real-winning setups over the given bases, each meeting the hypotheses with margin.
pub fn sample_real_winning(count: usize, bases: &[f64], bob: BobKind, seed: u64) -> Vec<Setup> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let built: Vec<RealBase> = bases.iter().map(|b| RealBase::new(*b).expect("valid base")).collect();
    while out.len() < count {
        let base = &built[out.len() % built.len()];
        let b = base.value();
        let kk = base.tail_shape().zero_run().expect("sampled bases have a known zero run");
        let alpha = rng.gen_range(0.02..0.6);
        let thr = real_threshold(b, kk, alpha).max(0.0);
        if thr >= 0.95 {
            continue;
        }
        let beta = rng.gen_range(thr + 0.02..0.98);
        if !(beta > thr + 0.01) {
            continue;
        }
        let rho = rng.gen_range(0.05..0.5);
        let start = rng.gen_range(rho..=1.0 - rho);
        let Some(plan) = find_hold_and_target(b, kk, alpha, beta, rho, 1.0) else { continue };
        if plan.k > 40 || rho * (alpha * beta).powi(plan.n as i32) < 1e-7 {
            continue;
        }
        let digit = rng.gen_range(0..=base.min_quasi_greedy_digit());
        out.push(Setup::RealWinning { b, digit, alpha, beta, rho, start, bob, zero_run: None });
    }
    out
}

/// Random complex-winning setups with `theta` below the second-order cutoff and `k = 2`.
pub fn sample_complex_winning(count: usize, bob: BobKind, seed: u64) -> Vec<Setup> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let theta = rng.gen_range(0.0..0.1);
        let region = order_two_region(theta, 3).expect("cutoffs computable");
        let Some(piece) = region.get(rng.gen_range(0..region.len().max(1))).copied() else { continue };
        if piece.n > 3 {
            continue;
        }
        let span = piece.u - piece.v;
        let r = piece.v + span * rng.gen_range(0.05..0.95);
        let alpha = rng.gen_range(0.05..0.9);
        let thr = complex_threshold(r, alpha).max(0.0);
        if thr >= 0.95 {
            continue;
        }
        let beta = rng.gen_range(thr + 0.02..0.98);
        let rho = (rng.gen_range(-1.0_f64..3.0)).exp();
        let Some(n) = find_complex_hold(r, 2, alpha, beta, rho) else { continue };
        if rho * (alpha * beta).powi(n as i32) < 1e-6 {
            continue;
        }
        let start = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
        out.push(Setup::ComplexWinning { r, theta, k: 2, alpha, beta, rho, start, bob });
    }
    out
}

/// Random unit quaternion (uniform on the 3-sphere).
pub fn random_unit(rng: &mut ChaCha8Rng) -> Quaternion {
    loop {
        let v = [0; 4].map(|_: i32| rng.gen_range(-1.0..1.0));
        let q = Quaternion::from_array(v);
        let n = q.norm();
        if n > 1e-3 && n <= 1.0 {
            return q.scale(1.0 / n);
        }
    }
}

/// Random avoiding-game setups for `preset`, avoiding digit 0 with the domain constant.
pub fn sample_losing(count: usize, preset: &LatticePreset, alice: AliceKind, seed: u64) -> Vec<Setup> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dc = preset.constants().expect("preset constants");
    let digit = Quaternion::ZERO;
    let c = dc.domain_constant * (1.0 + digit.norm());
    (0..count)
        .map(|_| {
            let qn = c * rng.gen_range(1.3..3.0);
            let q = random_unit(&mut rng).scale(qn);
            let lo = c / qn;
            let alpha = rng.gen_range(lo + 0.1 * (1.0 - lo)..lo + 0.9 * (1.0 - lo));
            Setup::Losing { preset: preset.clone(), q, digit, alpha, alice, constant: ConstantKind::Domain }
        })
        .collect()
}

/// Plays every setup, seeding game `i` with `seed + i`.
pub fn run_batch(setups: &[Setup], seed: u64, exec: Execution) -> Vec<Result<RunReport, ScenarioError>> {
    let indexed: Vec<(usize, &Setup)> = setups.iter().enumerate().collect();
    map_slice(&indexed, exec, |(i, s)| s.run(seed.wrapping_add(*i as u64)))
}
