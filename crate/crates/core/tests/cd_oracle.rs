mod common;

use std::collections::BTreeSet;

use bbdcqo::cd::{
    alpha1, build_cd_circuit, build_h_ad, prep_angle, AlphaMode, CircuitOptions, DriverConfig,
    GaugeExpansion, Schedule,
};
use bbdcqo::hubo::{generate, HuboProblem, InstanceSpec};
use bbdcqo::sim::run_circuit;
use bbdcqo::Error;
use bbdcqo_oracle::{alpha_by_action, cost_diagonal, driver_dense, pauli_string, Dense, C};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dense_driver(d: &DriverConfig) -> Dense {
    driver_dense(&d.hx, &d.hb)
}

fn dense_problem(p: &HuboProblem) -> Dense {
    Dense::diagonal(&cost_diagonal(p.n(), &common::terms(p)))
}

fn numerical_alpha(p: &HuboProblem, d: &DriverConfig, lam: f64) -> f64 {
    alpha_by_action(&dense_driver(d), &dense_problem(p), lam, 1e-11)
}

fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> (HuboProblem, DriverConfig) {
    let pairs = n * (n - 1) / 2;
    let triples = if n >= 3 { n * (n - 1) * (n - 2) / 6 } else { 0 };
    let p = generate(&InstanceSpec::dense(
        n,
        pairs.min(3),
        triples.min(2),
        rng.gen(),
    ))
    .unwrap();
    let hb = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    (p, DriverConfig::uniform(-1.0, hb).unwrap())
}

#[test]
fn h_ad_matches_dense_interpolation() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (p, d) = random_instance(&mut rng, 3);
    let sym = common::dense(&build_h_ad(&p, &d, 0.3).unwrap());
    let num = dense_driver(&d)
        .scale(C::new(0.7, 0.0))
        .add(&dense_problem(&p).scale(C::new(0.3, 0.0)));
    assert!(sym.max_abs_diff(&num) < 1e-12);
}

#[test]
fn single_spin_alpha_matches_action_minimum() {
    let p = HuboProblem::new(1, [(0, 0.8)].into(), Default::default(), Default::default()).unwrap();
    let d = DriverConfig::uniform(-1.0, vec![0.0]).unwrap();
    for lam in [0.1, 0.5, 0.9] {
        let closed = alpha1(&p, &d, lam).unwrap();
        assert!(
            (closed - numerical_alpha(&p, &d, lam)).abs() < 1e-8,
            "λ={lam}"
        );
    }
}

#[test]
fn random_three_spin_alpha_matches_action_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (p, d) = random_instance(&mut rng, 3);
    let fast = GaugeExpansion::new(&p, &d).unwrap();
    for lam in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let closed = alpha1(&p, &d, lam).unwrap();
        assert!(
            (closed - numerical_alpha(&p, &d, lam)).abs() < 1e-8,
            "λ={lam}"
        );
        assert!((closed - fast.alpha(lam).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn commuting_driver_gives_no_cd_term() {
    let p = HuboProblem::new(
        2,
        [(0, 1.0)].into(),
        [((0, 1), 0.5)].into(),
        Default::default(),
    )
    .unwrap();
    let d = DriverConfig::uniform(1e-300, vec![0.2, 0.1]).unwrap();
    assert!(matches!(
        alpha1(&p, &d, 0.5),
        Err(Error::UndefinedCoefficient)
    ));
    let c = build_cd_circuit(&p, &d, &Schedule::default(), &CircuitOptions::default()).unwrap();
    assert!(c.rotations.is_empty());
}

#[test]
fn chain_rotation_strings_match_symbolic_commutator() {
    let p = generate(&InstanceSpec::sparse_chain(2, 6)).unwrap();
    let d = DriverConfig::uniform(-1.0, vec![0.4, -0.3]).unwrap();
    let c = build_cd_circuit(&p, &d, &Schedule::default(), &CircuitOptions::default()).unwrap();
    let got: BTreeSet<String> = c.rotations.iter().map(|(s, _)| s.to_string()).collect();
    let allowed: BTreeSet<String> = ["YI", "IY", "YZ", "ZY"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    assert!(got.is_subset(&allowed), "{got:?}");

    // strings of [H_ad, ∂H] at an arbitrary λ
    let h = build_h_ad(&p, &d, 0.42).unwrap();
    let dh = build_h_ad(&p, &d, 1.0)
        .unwrap()
        .linear_combination(1.0, &build_h_ad(&p, &d, 0.0).unwrap(), -1.0)
        .unwrap();
    let o1 = h.commutator(&dh).unwrap();
    let expected: BTreeSet<String> = o1.iter().map(|(s, _)| s.to_string()).collect();
    assert_eq!(got, expected);
}

#[test]
fn generator_matches_dense_commutator() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (p, d) = random_instance(&mut rng, 3);
    let g = GaugeExpansion::new(&p, &d).unwrap().generator;
    let num = dense_driver(&d)
        .commutator(&dense_problem(&p))
        .scale(C::new(0.0, 1.0));
    assert!(common::dense(&g).max_abs_diff(&num) < 1e-12);
}

#[test]
fn prep_angles_give_driver_ground_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let hx: f64 = rng.gen_range(-3.0..3.0);
        let hb: f64 = rng.gen_range(-3.0..3.0);
        let th = prep_angle(hx, hb);
        let v = [C::new((th / 2.0).cos(), 0.0), C::new((th / 2.0).sin(), 0.0)];
        let m = pauli_string("X")
            .scale(C::new(hx, 0.0))
            .add(&pauli_string("Z").scale(C::new(hb, 0.0)));
        let mv = m.apply(&v);
        let lm = -hb.hypot(hx);
        for k in 0..2 {
            assert!((mv[k] - v[k] * lm).norm() < 1e-12);
        }
    }
}

#[test]
fn unbiased_prep_is_uniform() {
    let p = generate(&InstanceSpec::sparse_chain(4, 0)).unwrap();
    let d = DriverConfig::uniform(-1.0, vec![0.0; 4]).unwrap();
    let c = build_cd_circuit(&p, &d, &Schedule::default(), &CircuitOptions::default()).unwrap();
    assert!(c
        .prep_angles
        .iter()
        .all(|t| (t - std::f64::consts::FRAC_PI_2).abs() < 1e-15));
}

#[test]
fn single_spin_transport_reaches_ground_state() {
    // a two-level gauge potential is exactly first order, so the integrated
    // rotation carries the driver ground state onto the problem ground state
    for &(h, hb) in &[(0.8, 0.0), (-1.3, 0.0), (0.5, 0.9), (-0.2, -0.6)] {
        let p =
            HuboProblem::new(1, [(0, h)].into(), Default::default(), Default::default()).unwrap();
        let d = DriverConfig::uniform(-1.0, vec![hb]).unwrap();
        let c = build_cd_circuit(
            &p,
            &d,
            &Schedule::new(2.0).unwrap(),
            &CircuitOptions::default(),
        )
        .unwrap();
        let s = run_circuit(&c, 24).unwrap();
        let ground = if h > 0.0 { 1 } else { 0 };
        let prob = s.amplitudes()[ground].norm_sqr();
        assert!(prob > 1.0 - 1e-6, "h={h} hb={hb}: {prob}");
    }
}

#[test]
fn quadrature_converges() {
    for seed in 0..3 {
        let p = generate(&InstanceSpec::dense(5, 6, 5, seed)).unwrap();
        let d = DriverConfig::uniform(-1.0, vec![0.3, -0.2, 0.9, 0.0, -0.7]).unwrap();
        let base = CircuitOptions::default();
        let fine = CircuitOptions {
            quadrature_panels: 2 * base.quadrature_panels,
            ..base
        };
        let a = build_cd_circuit(&p, &d, &Schedule::default(), &base).unwrap();
        let b = build_cd_circuit(&p, &d, &Schedule::default(), &fine).unwrap();
        assert_eq!(a.rotations.len(), b.rotations.len());
        for ((sa, ta), (sb, tb)) in a.rotations.iter().zip(&b.rotations) {
            assert_eq!(sa, sb);
            assert!((ta - tb).abs() < 1e-6);
        }
    }
}

#[test]
fn fixed_alpha_mode_scales_generator() {
    let p = generate(&InstanceSpec::sparse_chain(4, 2)).unwrap();
    let d = DriverConfig::uniform(-1.0, vec![0.1; 4]).unwrap();
    let exp = GaugeExpansion::new(&p, &d).unwrap();
    let opts = CircuitOptions {
        alpha_mode: AlphaMode::Fixed(0.5),
        ..Default::default()
    };
    let c = build_cd_circuit(&p, &d, &Schedule::default(), &opts).unwrap();
    let a = exp.alpha(0.5).unwrap();
    for (s, theta) in &c.rotations {
        assert!((theta - 2.0 * exp.generator.coefficient(s).re * a).abs() < 1e-12);
    }
}

#[test]
fn chain_circuits_are_local_and_linear_in_size() {
    for n in [6, 12, 24] {
        let p = generate(&InstanceSpec::sparse_chain(n, 1)).unwrap();
        let d = DriverConfig::uniform(-1.0, vec![0.2; n]).unwrap();
        let c = build_cd_circuit(&p, &d, &Schedule::default(), &CircuitOptions::default()).unwrap();
        assert!(c
            .rotations
            .iter()
            .all(|(s, t)| s.weight() <= 4 && t.is_finite()));
        // at most one string per (flipped spin, term containing it)
        assert!(c.rotations.len() <= n + 2 * (n - 1) + 3 * (n - 2));
        let listed: Vec<_> = c.rotations.iter().map(|(s, _)| s.clone()).collect();
        let mut sorted = listed.clone();
        sorted.sort();
        assert_eq!(listed, sorted);
    }
}
