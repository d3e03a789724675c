use beta_arena::lattice::{BoundaryPolicy, LatticeDomain, LatticeSystem};
use beta_arena::numeric::metallic_mean;
use beta_arena::quaternion::*;
use beta_arena::{Execution, Quaternion, Tolerance};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn golden_i() -> Quaternion {
    Quaternion::new(0.0, metallic_mean(1).unwrap(), 0.0, 0.0)
}

fn random_q(rng: &mut ChaCha8Rng, scale: f64) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

fn random_point(dom: &LatticeDomain, rng: &mut ChaCha8Rng) -> Quaternion {
    let t: Vec<f64> = (0..4).map(|i| dom.lo()[i] + dom.width()[i] * rng.gen::<f64>()).collect();
    dom.point(&t)
}

#[test]
fn lipschitz_worked_expansion() {
    let sys = LatticeSystem::new(golden_i(), LatticeDomain::lipschitz(0.0), Tolerance::default())
        .unwrap()
        .with_policy(BoundaryPolicy::NudgeInward);
    let exp = sys.expand(Quaternion::new(0.5, 0.0, 0.5, 0.0), 12).unwrap();
    let text: Vec<String> = exp.digits.iter().map(|d| d.to_string()).collect();
    let period = ["0", "-2-2j", "i+k", "-1-j", "i+k", "-1-j"];
    for (i, t) in text.iter().enumerate() {
        assert_eq!(t, period[i % 6]);
    }
    assert_eq!(exp.cycle, Some((0, 6)));
}

#[test]
fn zero_is_a_fixed_point() {
    // The origin is a corner of the cube, so only the inward policy accepts it.
    let sys = LatticeSystem::new(golden_i(), LatticeDomain::lipschitz(0.0), Tolerance::default()).unwrap();
    assert!(sys.expand(Quaternion::ZERO, 1).is_err());
    let exp = sys.with_policy(BoundaryPolicy::NudgeInward).expand(Quaternion::ZERO, 8).unwrap();
    assert!(exp.digits.iter().all(|d| *d == Quaternion::ZERO));
    assert_eq!(exp.cycle, Some((0, 1)));
}

#[test]
fn isoclinic_form_of_left_multiplication() {
    let id = isoclinic_matrix(Quaternion::ONE);
    for (r, row) in id.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            assert_eq!(*v, if r == c { 1.0 } else { 0.0 });
        }
    }
    let mi = isoclinic_matrix(Quaternion::I);
    assert_eq!(apply_matrix(&mi, Quaternion::ONE), Quaternion::I);
    assert_eq!(apply_matrix(&mi, Quaternion::J), Quaternion::K);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let q = random_q(&mut rng, 5.0);
        let x = random_q(&mut rng, 1.0);
        let m = isoclinic_matrix(q);
        worst = worst.max(apply_matrix(&m, x).scale(q.norm()).max_abs_diff(q * x));
        // Orthogonal with determinant one.
        let mt = nalgebra::Matrix4::from_fn(|r, c| m[r][c]);
        assert!((mt.transpose() * mt - nalgebra::Matrix4::identity()).abs().max() < 1e-12);
        assert!((mt.determinant() - 1.0).abs() < 1e-12);
    }
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn isoclinic_map_matches_quaternion_map() {
    let q = golden_i() + Quaternion::new(0.3, 0.0, 1.1, -0.4);
    let sys = LatticeSystem::new(q, LatticeDomain::lipschitz(0.0), Tolerance::default()).unwrap();
    let m = isoclinic_matrix(q);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let z = random_point(sys.domain(), &mut rng);
        let Ok((d, next)) = sys.step(z, 1) else { continue };
        let rotated = apply_matrix(&m, z).scale(q.norm()) - d;
        assert!(rotated.max_abs_diff(next) < 1e-10);
    }
}

/// Lattice points near the rounded basis coordinates of `w` that put `w - d` in the domain.
fn candidate_digits(dom: &LatticeDomain, w: Quaternion) -> Vec<Quaternion> {
    let t = dom.coords(w);
    let mut out = Vec::new();
    for code in 0..81 {
        let mut n = [0.0; 4];
        let mut c = code;
        for (i, slot) in n.iter_mut().enumerate() {
            *slot = t[i].round() + (c % 3) as f64 - 1.0;
            c /= 3;
        }
        let d = dom.basis().iter().zip(n).fold(Quaternion::ZERO, |acc, (b, k)| acc + b.scale(k));
        if dom.contains(w - d) {
            out.push(d);
        }
    }
    out
}

#[test]
fn digits_are_unique() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let presets = [LatticePreset::Lipschitz, LatticePreset::default_zeta(), LatticePreset::Symmetric { eps: 0.5 }];
    for preset in presets {
        let dom = preset.domain().unwrap();
        let q = golden_i() + Quaternion::new(1.0, 0.0, 0.5, 0.0);
        let sys = LatticeSystem::new(q, dom.clone(), Tolerance::default()).unwrap();
        for _ in 0..300 {
            let z = random_point(&dom, &mut rng);
            let Ok((d, _)) = sys.step(z, 1) else { continue };
            let found = candidate_digits(&dom, q * z);
            assert_eq!(found.len(), 1, "{preset}");
            assert!(found[0].max_abs_diff(d) < 1e-9);
        }
    }
}

#[test]
fn expansions_reconstruct() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for preset in [LatticePreset::Lipschitz, LatticePreset::HurwitzBox, LatticePreset::default_zeta()] {
        let dom = preset.domain().unwrap();
        let q = Quaternion::new(1.0, 2.0, -1.0, 0.5);
        let sys = LatticeSystem::new(q, dom.clone(), Tolerance::default()).unwrap();
        let diam = dom.corners().iter().flat_map(|a| dom.corners().into_iter().map(move |b| a.dist(b))).fold(0.0, f64::max);
        for _ in 0..100 {
            let z = random_point(&dom, &mut rng);
            let n = 10;
            let Ok(d) = sys.digits(z, n) else { continue };
            assert!((sys.evaluate(&d) - z).norm() <= q.norm().powi(-(n as i32)) * diam + 1e-12, "{preset}");
        }
    }
}

#[test]
fn hurwitz_box_digits_are_hurwitz_integers() {
    let dom = LatticePreset::HurwitzBox.domain().unwrap();
    let sys = LatticeSystem::new(Quaternion::new(2.0, 1.0, 1.0, 1.0), dom.clone(), Tolerance::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..300 {
        let z = random_point(&dom, &mut rng);
        let Ok(d) = sys.digits(z, 3) else { continue };
        for x in d {
            let v = x.to_array();
            let whole = v.iter().all(|c| (c - c.round()).abs() < 1e-9);
            let half = v.iter().all(|c| (c - c.floor() - 0.5).abs() < 1e-9);
            assert!(whole || half, "{x}");
        }
    }
}

#[test]
fn zeta_digits_lie_in_the_plane_of_one_and_eta() {
    let (zeta, eta) = (Quaternion::new(0.0, 2.0, 0.0, 0.0), Quaternion::J);
    let dom = zeta_lattice(zeta, eta, 0.5).unwrap();
    let sys = LatticeSystem::new(zeta, dom.clone(), Tolerance::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut seen = 0;
    for _ in 0..2000 {
        let z = random_point(&dom, &mut rng);
        let Ok(d) = sys.digits(z, 4) else { continue };
        for x in d {
            let t = dom.coords(x);
            assert!(t[1].abs() < 1e-9 && t[3].abs() < 1e-9, "{x}");
            seen += 1;
        }
    }
    assert!(seen > 4000);
    assert_eq!(zeta_lattice(zeta, eta, 0.0).unwrap().lo(), &[0.0; 4]);
    let gram = nalgebra::Matrix4::from_fn(|r, c| dom.basis()[r].dot(dom.basis()[c]));
    assert!(gram.determinant() > 1.0);
    assert!(zeta_lattice(zeta, Quaternion::I, 0.5).is_err());
}

#[test]
fn preset_constants() {
    let lip = LatticePreset::Lipschitz.constants().unwrap();
    assert!((lip.domain_constant - 10.0).abs() < 1e-12);
    assert!((lip.sup_norm - 2.0).abs() < 1e-12 && (lip.sup_dist - 1.0).abs() < 1e-12);
    assert!((lip.xi_norm - 1.0).abs() < 1e-12);

    let hur = LatticePreset::HurwitzBox.constants().unwrap();
    let s13 = 13f64.sqrt();
    assert!((hur.sup_norm - s13 / 2.0).abs() < 1e-12);
    assert!((hur.sup_dist - s13 / 4.0).abs() < 1e-12);

    let rot = LatticePreset::Rotational.constants().unwrap();
    assert!((rot.sup_dist - 1.0).abs() < 1e-12 && (rot.sup_norm - 2.0).abs() < 1e-12);
}

#[test]
fn balanced_digit_constants_stay_above_the_rotational_bound() {
    let dom = LatticeDomain::lipschitz(0.0);
    let xi = Quaternion::new(0.5, 0.5, 0.5, 0.5);
    let floor = 1.0 + 4.0 / (17f64.sqrt() - 3.0);
    assert!((floor - 4.5616).abs() < 1e-4);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for i in 0..60 {
        let d = if i == 0 { Quaternion::ZERO } else { random_q(&mut rng, 6.0).round() };
        let rho = rotational_radius(d.norm());
        assert!((balanced_radius(&dom, xi, d).unwrap() - rho).abs() < 1e-9);
        let c_d = 1.0 + 1.0 / rho;
        let anchor = Anchor { xi, rho, kind: AnchorKind::Standard };
        let k = domain_constants(&dom, &anchor).unwrap();
        assert!((k.digit_constant(d) - c_d).abs() < 1e-8, "{d}");
        assert!(c_d >= floor - 1e-12 && c_d >= 4.56);
    }
}

#[test]
fn symmetric_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for eps in [0.25, 0.5, 1.0] {
        let k = LatticePreset::Symmetric { eps }.constants().unwrap();
        let tau = eps / 4.0;
        assert!((k.domain_constant - (3.0 + 2.0 * eps / tau)).abs() < 1e-9);
        for _ in 0..50 {
            let d = random_q(&mut rng, 2.0 * eps);
            let want = (3.0 + 2.0 * eps / tau).max((2.0 * eps + d.norm()) / (2.0 * tau));
            assert!((k.digit_constant(d) - want).abs() < 1e-9);
            if d.norm() <= 6.0 * tau + 2.0 * eps {
                assert!(k.digit_constant(d) > 7.0);
            }
        }
    }
}

#[test]
fn corner_suprema_dominate_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for preset in [LatticePreset::Lipschitz, LatticePreset::HurwitzBox, LatticePreset::default_zeta()] {
        let dom = preset.domain().unwrap();
        let anchor = preset.anchor().unwrap();
        let k = preset.constants().unwrap();
        let mut m: f64 = 0.0;
        let mut d: f64 = 0.0;
        for _ in 0..100_000 {
            let z = random_point(&dom, &mut rng);
            m = m.max(z.norm());
            d = d.max(z.dist(anchor.xi));
        }
        assert!(m <= k.sup_norm + 1e-12 && d <= k.sup_dist + 1e-12, "{preset}");
        assert!(m > 0.95 * k.sup_norm && d > 0.95 * k.sup_dist, "{preset}");
    }
}

#[test]
fn anchor_balls_sit_inside_their_domains() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for preset in [LatticePreset::Lipschitz, LatticePreset::Rotational, LatticePreset::default_zeta(), LatticePreset::Symmetric { eps: 0.5 }] {
        let dom = preset.domain().unwrap();
        let a = preset.anchor().unwrap();
        for _ in 0..2000 {
            let dir = random_q(&mut rng, 1.0);
            let p = a.xi + dir.scale(a.rho * (1.0 - 1e-9) / dir.norm());
            assert!(dom.contains(p), "{preset}");
        }
    }
    let bad = Anchor { xi: Quaternion::new(0.5, 0.5, 0.5, 0.5), rho: 0.6, kind: AnchorKind::Standard };
    assert!(domain_constants(&LatticeDomain::lipschitz(0.0), &bad).is_err());
}

#[test]
fn block_constants_and_losing_window() {
    let k = LatticePreset::Lipschitz.constants().unwrap();
    let q = Quaternion::new(0.0, 20.0, 0.0, 0.0);
    assert!((k.block_constant(q, &[Quaternion::ZERO]).unwrap() - k.domain_constant).abs() < 1e-12);
    let w = losing_parameters(10.0, 20.0, 1).unwrap();
    assert!((w.alpha_min - 0.5).abs() < 1e-15);
    assert!(w.contains(0.5) && w.contains(0.9) && !w.contains(0.49) && !w.contains(1.0));
    assert!((w.beta_for(0.8) - 1.0 / 16.0).abs() < 1e-15);
    assert!(losing_parameters(25.0, 5.0, 2).is_err());
    assert!(k.block_constant(q, &[]).is_err());
}

#[test]
fn witnesses_for_realised_blocks() {
    let q = golden_i() + Quaternion::new(1.0, 0.0, 1.0, 0.0);
    let sys = LatticeSystem::new(q, LatticeDomain::lipschitz(0.0), Tolerance::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for _ in 0..30 {
        let z = random_point(sys.domain(), &mut rng);
        let Ok(block) = sys.digits(z, 3) else { continue };
        let a = find_witness(&sys, &block, 4096, 1, Execution::Sequential);
        let b = find_witness(&sys, &block, 4096, 1, Execution::Parallel);
        assert_eq!(a, b);
        let Witness::Found(w) = a else { panic!("no witness for {block:?}") };
        assert_eq!(sys.digits(w, 3).unwrap(), block);
    }
    let far = [Quaternion::real(100.0)];
    assert_eq!(find_witness(&sys, &far, 1024, 1, Execution::Parallel), Witness::NotCertified);
}

#[test]
fn preset_names_round_trip() {
    for name in ["lipschitz", "hurwitz-box", "rotational", "zeta", "symmetric:0.5"] {
        let p: LatticePreset = name.parse().unwrap();
        assert_eq!(p.to_string(), name);
    }
    let basis: LatticePreset = "basis:1,0,0,0,0,1,0,0,0,0,1,0,0,0,0,1".parse().unwrap();
    assert_eq!(basis.domain().unwrap().basis()[2], Quaternion::J);
    assert!("basis:1,2".parse::<LatticePreset>().is_err());
    assert!("symmetric:-1".parse::<LatticePreset>().is_err());
    assert!("hurwitz".parse::<LatticePreset>().is_err());
}

proptest! {
    #[test]
    fn norm_is_multiplicative(a in prop::array::uniform4(-10.0f64..10.0), b in prop::array::uniform4(-10.0f64..10.0)) {
        let (p, q) = (Quaternion::from_array(a), Quaternion::from_array(b));
        prop_assert!(((p * q).norm() - p.norm() * q.norm()).abs() <= 1e-12 * (1.0 + p.norm() * q.norm()));
    }

    #[test]
    fn product_is_associative(a in prop::array::uniform4(-5.0f64..5.0), b in prop::array::uniform4(-5.0f64..5.0), c in prop::array::uniform4(-5.0f64..5.0)) {
        let (p, q, r) = (Quaternion::from_array(a), Quaternion::from_array(b), Quaternion::from_array(c));
        prop_assert!(((p * q) * r).max_abs_diff(p * (q * r)) < 1e-10);
    }

    #[test]
    fn conjugation_reverses_products(a in prop::array::uniform4(-5.0f64..5.0), b in prop::array::uniform4(-5.0f64..5.0)) {
        let (p, q) = (Quaternion::from_array(a), Quaternion::from_array(b));
        prop_assert!((p * q).conj().max_abs_diff(q.conj() * p.conj()) < 1e-12);
        if let Some(inv) = p.inv() {
            prop_assert!((p * inv).max_abs_diff(Quaternion::ONE) < 1e-9);
        }
    }
}
