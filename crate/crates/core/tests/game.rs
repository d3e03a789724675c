use std::f64::consts::SQRT_2;

use beta_arena::game::*;
use beta_arena::lattice::LatticeDomain;
use beta_arena::numeric::metallic_mean;
use beta_arena::quaternion::LatticePreset;
use beta_arena::real::RealBase;
use beta_arena::scenarios::*;
use beta_arena::{Execution, Quaternion};
use rand_chacha::ChaCha8Rng;

fn golden() -> f64 {
    metallic_mean(1).unwrap()
}

fn sweep_bases() -> Vec<f64> {
    vec![golden(), metallic_mean(2).unwrap(), 3.0]
}

#[test]
fn complex_threshold_worked_value() {
    let want = (8495.0 - 180.0 * SQRT_2) / 11901.0;
    assert!((complex_threshold(4.5, 0.6) - want).abs() < 1e-12);
}

#[test]
fn complex_threshold_matches_the_drift_window() {
    let mut checked = 0;
    for r in [1.6, 2.5, 4.5, 7.0] {
        for i in 1..60 {
            let alpha = i as f64 / 60.0;
            let f = complex_threshold(r, alpha);
            for j in 1..60 {
                let beta = j as f64 / 60.0;
                if (beta - f).abs() < 1e-6 {
                    continue;
                }
                let window = drift_term(alpha, beta) < (1.0 - alpha) / (SQRT_2 * r);
                assert_eq!(beta > f, window, "r = {r}, alpha = {alpha}, beta = {beta}");
                checked += 1;
            }
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn real_threshold_matches_the_drift_window() {
    for b in [golden(), 2.5, 3.0, 10.0] {
        for kk in 0..3usize {
            let p = kk as f64 * b + 2.0 * b;
            for i in 1..50 {
                let alpha = i as f64 / 50.0;
                let a = real_threshold(b, kk, alpha);
                for j in 1..50 {
                    let beta = j as f64 / 50.0;
                    if (beta - a).abs() < 1e-6 {
                        continue;
                    }
                    let window = p * drift_term(alpha, beta) < 1.0 - alpha;
                    assert_eq!(beta > a, window, "b = {b}, K = {kk}, alpha = {alpha}, beta = {beta}");
                }
            }
        }
    }
}

#[test]
fn real_threshold_is_increasing_and_below_one() {
    for b in [golden(), metallic_mean(2).unwrap(), metallic_mean(10).unwrap()] {
        let curve: Vec<f64> = (0..60).map(|i| real_threshold(b, 0, 0.01 + 0.005 * i as f64)).collect();
        assert!(curve.windows(2).all(|w| w[1] > w[0]));
        assert!(curve.iter().all(|v| *v < 1.0));
    }
    assert!((real_threshold(1e6, 0, 0.5) - 2.0 / 3.0).abs() < 1e-5);
}

#[test]
fn hold_and_target_satisfies_its_inequalities() {
    let (b, kk, alpha, beta, rho) = (golden(), 0usize, 0.2, 0.5, 0.4);
    let plan = find_hold_and_target(b, kk, alpha, beta, rho, 1.0).unwrap();
    let mid = (kk as f64 + 2.0) / (rho * (alpha * beta).powi(plan.n as i32) * b.powi(plan.k as i32 - 1));
    assert!((kk as f64 * b + 2.0 * b) * drift_term(alpha, beta) < mid);
    assert!(mid < 1.0 - alpha);
    // Below the threshold there is nothing to find.
    assert!(find_hold_and_target(b, kk, 0.9, 0.9, rho, 1.0).is_none());
}

struct Wander;

impl Strategy for Wander {
    fn name(&self) -> String {
        "wander".into()
    }

    fn place(&mut self, turn: &Turn<'_>, _rng: &mut ChaCha8Rng) -> Result<Quaternion, StrategyError> {
        Ok(turn.outer_center + Quaternion::real(2.0 * turn.outer_radius))
    }
}

#[test]
fn illegal_moves_abort_and_name_the_player() {
    let params = GameParams::new(0.5, 0.5, 0.3, 1, Quaternion::real(0.5));
    let err = play(&params, &mut CenterHold, &mut Wander).unwrap_err();
    match err {
        GameError::IllegalMove { player, round, trace, .. } => {
            assert_eq!(player, Player::Bob);
            assert_eq!(round, 1);
            assert!(!trace.moves.last().unwrap().legal);
        }
        other => panic!("unexpected {other}"),
    }
    assert!(matches!(play(&params, &mut Wander, &mut CenterHold), Err(GameError::IllegalMove { player: Player::Alice, .. })));
}

#[test]
fn bad_parameters_are_rejected() {
    for (a, b, r, d) in [(0.0, 0.5, 1.0, 1), (0.5, 1.0, 1.0, 1), (0.5, 0.5, -1.0, 1), (0.5, 0.5, 1.0, 3)] {
        let params = GameParams::new(a, b, r, d, Quaternion::ZERO);
        assert!(matches!(play(&params, &mut CenterHold, &mut CenterHold), Err(GameError::BadParams(_))));
    }
}

#[test]
fn audit_catches_tampering() {
    let report = preset("dwinning-golden").unwrap().run(1).unwrap();
    assert!(audit(&report.trace).is_ok());
    let mut moved = report.trace.clone();
    moved.moves[3].center[0] += 10.0 * moved.moves[2].radius;
    assert!(audit(&moved).is_err());
    let mut shrunk = report.trace.clone();
    shrunk.moves[4].radius *= 0.9;
    assert!(audit(&shrunk).is_err());
}

#[test]
fn balls_are_nested() {
    for name in PRESET_NAMES {
        let report = preset(name).unwrap().run(5).unwrap();
        for w in report.trace.moves.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            assert!(b.radius < a.radius);
            assert!(a.center_q().dist(b.center_q()) + b.radius <= a.radius * (1.0 + 1e-9) + 1e-15, "{name}");
        }
    }
}

#[test]
fn every_preset_is_verified() {
    for name in PRESET_NAMES {
        let report = preset(name).unwrap().run(0).unwrap();
        assert!(report.verified(), "{name}: {:?}", report.verification);
    }
}

#[test]
fn same_seed_same_trace() {
    for name in ["dwinning-golden-random", "notwinning-hurwitz"] {
        let a = preset(name).unwrap().run(42).unwrap();
        let b = preset(name).unwrap().run(42).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(serde_json::to_string(&a.trace).unwrap(), serde_json::to_string(&b.trace).unwrap());
    }
}

#[test]
fn batch_modes_agree() {
    let setups = sample_real_winning(6, &sweep_bases(), BobKind::Random, 3);
    let seq: Vec<_> = run_batch(&setups, 9, Execution::Sequential).into_iter().map(|r| r.unwrap().trace).collect();
    let par: Vec<_> = run_batch(&setups, 9, Execution::Parallel).into_iter().map(|r| r.unwrap().trace).collect();
    assert_eq!(seq, par);
}

#[test]
fn real_winning_sweep() {
    for bob in [BobKind::OptimalDrift, BobKind::Random] {
        let setups = sample_real_winning(15, &sweep_bases(), bob, 100);
        for (s, r) in setups.iter().zip(run_batch(&setups, 1, Execution::Parallel)) {
            let r = r.unwrap();
            assert!(r.verified(), "{s:?}: {:?}", r.verification);
        }
    }
}

#[test]
fn explicit_zero_run_for_an_undetermined_base() {
    let b = RealBase::new(2.5).unwrap();
    assert_eq!(b.tail_shape().zero_run(), None);
    let setup = Setup::RealWinning {
        b: 2.5,
        digit: 0,
        alpha: 0.1,
        beta: 0.6,
        rho: 0.3,
        start: 0.4,
        bob: BobKind::OptimalDrift,
        zero_run: Some(b.tail_shape().zero_run_lower()),
    };
    assert!(setup.run(0).unwrap().verified());
    let mut unknown = setup;
    if let Setup::RealWinning { zero_run, .. } = &mut unknown {
        *zero_run = None;
    }
    assert!(matches!(unknown.run(0), Err(ScenarioError::Hypotheses(_))));
}

#[test]
fn complex_winning_sweep() {
    for bob in [BobKind::OptimalDrift, BobKind::Random] {
        let setups = sample_complex_winning(8, bob, 200);
        for (s, r) in setups.iter().zip(run_batch(&setups, 1, Execution::Parallel)) {
            let r = r.unwrap();
            assert!(r.verified(), "{s:?}: {:?}", r.verification);
        }
    }
}

#[test]
fn losing_sweep() {
    let presets = [
        LatticePreset::Lipschitz,
        LatticePreset::HurwitzBox,
        LatticePreset::default_zeta(),
        LatticePreset::Symmetric { eps: 0.5 },
    ];
    for (i, p) in presets.iter().enumerate() {
        let setups = sample_losing(3, p, AliceKind::Random, 300 + i as u64);
        for (s, r) in setups.iter().zip(run_batch(&setups, 1, Execution::Parallel)) {
            let r = r.unwrap();
            assert!(r.verified(), "{s:?}: {:?}", r.verification);
        }
    }
}

#[test]
fn improved_lipschitz_constant_still_avoids() {
    let setup = Setup::Losing {
        preset: LatticePreset::Lipschitz,
        q: Quaternion::new(2.0, -1.0, 3.0, 1.0).scale(20.0 / 15f64.sqrt()),
        digit: Quaternion::ZERO,
        alpha: 0.3,
        alice: AliceKind::Random,
        constant: ConstantKind::Fixed(5.0),
    };
    for seed in 0..5 {
        let r = setup.run(seed).unwrap();
        assert!(r.verified(), "{:?}", r.verification);
    }
    let Setup::Losing { q, .. } = &setup else { unreachable!() };
    assert!(1.0 / (0.3 * q.norm()) <= 1.0 / 5.0);
}

#[test]
fn below_threshold_reports_unmet_hypotheses() {
    let setup = Setup::RealWinning {
        b: golden(),
        digit: 0,
        alpha: 0.9,
        beta: 0.1,
        rho: 0.3,
        start: 0.5,
        bob: BobKind::OptimalDrift,
        zero_run: None,
    };
    assert!(matches!(setup.run(0), Err(ScenarioError::Hypotheses(_))));
    let losing = Setup::Losing {
        preset: LatticePreset::Lipschitz,
        q: Quaternion::real(12.0),
        digit: Quaternion::ZERO,
        alpha: 0.5,
        alice: AliceKind::Random,
        constant: ConstantKind::Domain,
    };
    assert!(matches!(losing.run(0), Err(ScenarioError::Hypotheses(_))));
}

#[test]
fn wrong_claims_are_falsified() {
    let base = RealBase::new(golden()).unwrap();
    let report = preset("dwinning-golden").unwrap().run(0).unwrap();
    let Claim::ContainsBlock { position, .. } = report.verification.claim else { panic!() };
    let wrong = Claim::ContainsBlock { digit: Quaternion::ONE, position };
    assert_eq!(verify_outcome(&report.trace, &base.system(), &wrong).verdict, Verdict::Falsified);
    let deep = Claim::ContainsBlock { digit: Quaternion::ZERO, position: 10_000 };
    assert_eq!(verify_outcome(&report.trace, &base.system(), &deep).verdict, Verdict::Indeterminate);
}

#[test]
fn random_bob_stays_in_the_domain() {
    let params = GameParams::new(0.5, 0.5, 0.2, 1, Quaternion::real(0.5)).with_seed(8);
    let mut bob = RandomLegal { within: Some(LatticeDomain::unit_interval()) };
    let trace = play(&params, &mut CenterHold, &mut bob).unwrap();
    for m in trace.moves.iter().filter(|m| m.player == Player::Bob) {
        assert!((0.0..=1.0).contains(&m.center[0]));
    }
    assert!(audit(&trace).is_ok());
}
