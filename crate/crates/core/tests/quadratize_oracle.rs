mod common;

use std::collections::BTreeMap;

use bbdcqo::hubo::{generate, HuboProblem, InstanceSpec};
use bbdcqo::quadratize::{
    binary_max_abs_coefficient, export_json, hubo_to_qubo, verify_reduction, QuboProblem,
};
use bbdcqo_oracle::{binary_minimisers, naive_minimum, Term};

fn qubo_terms(q: &QuboProblem) -> Vec<Term> {
    let mut t: Vec<Term> = vec![(vec![], q.offset)];
    t.extend(q.linear.iter().map(|&(i, c)| (vec![i], c)));
    t.extend(q.quadratic.iter().map(|&(i, j, c)| (vec![i, j], c)));
    t
}

/// Exhaustive scan over originals and auxiliaries together.
fn exhaustive_check(p: &HuboProblem, penalty: f64) -> (bool, bool, bool) {
    let (q, map) = hubo_to_qubo(p, penalty).unwrap();
    let n = p.n();
    let (_, hmin) = naive_minimum(n, &common::terms(p));
    let scale = 1.0 + p.abs_coefficient_sum();
    let (qmin, args) = binary_minimisers(q.m, &qubo_terms(&q), 1e-9 * scale);
    let min_matches = (qmin - hmin).abs() <= 1e-9 * scale;
    let constraints = args.iter().all(|&x| {
        map.aux
            .iter()
            .all(|&(y, [i, j])| (x >> y) & 1 == ((x >> i) & (x >> j) & 1))
    });
    let projected = args.iter().all(|&x| {
        let low = x & ((1 << n) - 1);
        let e = bbdcqo_oracle::term_energy(&common::terms(p), low);
        (e - hmin).abs() <= 1e-9 * scale
    });
    (min_matches, constraints, projected)
}

fn default_penalty(p: &HuboProblem) -> f64 {
    10.0 * binary_max_abs_coefficient(p)
}

#[test]
fn quadratic_problems_need_no_auxiliaries() {
    let p = generate(&InstanceSpec::dense(6, 10, 0, 2)).unwrap();
    let (q, map) = hubo_to_qubo(&p, 1.0).unwrap();
    assert!(map.aux.is_empty());
    assert_eq!(q.m, 6);
    for x in 0..1u64 << 6 {
        let bits: Vec<u8> = (0..6).map(|b| ((x >> b) & 1) as u8).collect();
        let e = bbdcqo_oracle::term_energy(&common::terms(&p), x);
        assert!((q.energy(&bits).unwrap() - e).abs() < 1e-12);
    }
}

#[test]
fn single_cubic_term_reduces_exactly() {
    for k in [1.0, -2.5, 0.3] {
        let p =
            HuboProblem::new(3, BTreeMap::new(), BTreeMap::new(), [((0, 1, 2), k)].into()).unwrap();
        let (q, map) = hubo_to_qubo(&p, default_penalty(&p)).unwrap();
        assert_eq!(map.aux.len(), 1);
        assert_eq!(q.m, 4);
        let (qmin, args) = binary_minimisers(4, &qubo_terms(&q), 1e-12);
        assert!((qmin + k.abs()).abs() < 1e-12);
        for x in args {
            let (y, [i, j]) = map.aux[0];
            assert_eq!((x >> y) & 1, (x >> i) & (x >> j) & 1);
        }
    }
}

#[test]
fn default_penalty_passes_exhaustive_scan() {
    for seed in 0..20 {
        let n = 4 + (seed as usize % 5);
        let p = generate(&InstanceSpec::dense(n, n, n.min(6), seed)).unwrap();
        let (a, b, c) = exhaustive_check(&p, default_penalty(&p));
        assert!(a && b && c, "seed {seed}: {a} {b} {c}");
        let (q, map) = hubo_to_qubo(&p, default_penalty(&p)).unwrap();
        let report = verify_reduction(&p, &q, &map).unwrap();
        assert!(report.passed());
        assert!((report.hubo_min - report.qubo_min).abs() < 1e-9 * (1.0 + p.abs_coefficient_sum()));
    }
}

#[test]
fn tiny_penalty_breaks_the_reduction() {
    let p = HuboProblem::new(
        3,
        BTreeMap::new(),
        BTreeMap::new(),
        [((0, 1, 2), 5.0)].into(),
    )
    .unwrap();
    let (a, b, _) = exhaustive_check(&p, 0.01);
    assert!(!(a && b));
    let (q, map) = hubo_to_qubo(&p, 0.01).unwrap();
    assert!(!verify_reduction(&p, &q, &map).unwrap().passed());
}

#[test]
fn penalty_above_each_cubic_coefficient_is_exact() {
    // ten times the largest spin coefficient exceeds every binary cubic
    // coefficient (eight times a spin coefficient)
    for seed in 0..30 {
        let p = generate(&InstanceSpec::dense(7, 8, 12, 300 + seed)).unwrap();
        let (a, b, c) = exhaustive_check(&p, 10.0 * p.max_abs_coefficient());
        assert!(a && b && c, "seed {seed}");
    }
}

#[test]
fn larger_penalties_keep_passing() {
    for seed in 0..10 {
        let p = generate(&InstanceSpec::dense(6, 6, 5, seed)).unwrap();
        let m = default_penalty(&p);
        let (q, map) = hubo_to_qubo(&p, m).unwrap();
        let minimal = verify_reduction(&p, &q, &map)
            .unwrap()
            .minimal_penalty
            .unwrap();
        assert!(minimal <= m);
        for f in [1.0, 2.0, 10.0] {
            let (a, b, c) = exhaustive_check(&p, f * m);
            assert!(a && b && c);
        }
        // bisection is honest at its own answer
        let (a, b, c) = exhaustive_check(&p, minimal);
        assert!(a && b && c, "seed {seed} minimal {minimal}");
    }
}

#[test]
fn auxiliaries_cover_every_cubic_term() {
    for seed in 0..10 {
        let p = generate(&InstanceSpec::dense(10, 15, 12, seed)).unwrap();
        let (q, map) = hubo_to_qubo(&p, default_penalty(&p)).unwrap();
        let cubic = p.cubic().len();
        assert!(map.aux.len() <= cubic);
        assert_eq!(q.m, 10 + map.aux.len());
        assert!(map.aux.iter().enumerate().all(|(k, &(y, _))| y == 10 + k));
        assert!(verify_reduction(&p, &q, &map).unwrap().passed());
    }
}

#[test]
fn identity_on_original_assignments() {
    // with every auxiliary set to its product, QUBO and HUBO energies agree
    for seed in 0..5 {
        let p = generate(&InstanceSpec::dense(10, 15, 12, seed)).unwrap();
        let (q, map) = hubo_to_qubo(&p, default_penalty(&p)).unwrap();
        let terms = common::terms(&p);
        for x in 0..1u64 << 10 {
            let mut bits: Vec<u8> = (0..10).map(|b| ((x >> b) & 1) as u8).collect();
            bits.resize(q.m, 0);
            for &(y, [i, j]) in &map.aux {
                bits[y] = bits[i] * bits[j];
            }
            let e = bbdcqo_oracle::term_energy(&terms, x);
            assert!((q.energy(&bits).unwrap() - e).abs() < 1e-9);
        }
    }
}

#[test]
fn export_lists_reduction() {
    let p = generate(&InstanceSpec::dense(5, 4, 3, 1)).unwrap();
    let (q, map) = hubo_to_qubo(&p, 7.0).unwrap();
    let v: serde_json::Value = serde_json::from_str(&export_json(&q, &map)).unwrap();
    assert_eq!(v["n"], q.m);
    assert_eq!(v["reduction"]["penalty"], 7.0);
    assert_eq!(v["reduction"]["original_n"], 5);
    assert_eq!(
        v["reduction"]["aux"].as_array().unwrap().len(),
        map.aux.len()
    );
    assert!(v.get("cubic").is_none());
}
