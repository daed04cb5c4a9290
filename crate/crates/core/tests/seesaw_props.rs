mod common;

use common::{random_hermitian, rng};
use proptest::prelude::*;
use witnesskit::separability::{
    max_product_overlap, seesaw_extremal_expectation, seesaw_run, Direction, SeesawConfig, AGREEMENT_TOL,
};
use witnesskit::states::{random_local_vectors, SystemShape};
use witnesskit::tensor::C64;
use witnesskit::witness::{canonical_witness, StateKind};

fn cfg(restarts: usize, seed: u64) -> SeesawConfig {
    SeesawConfig {
        restarts,
        seed,
        ..SeesawConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn runs_are_monotone(seed in any::<u64>(), dims in prop::collection::vec(2usize..4, 2..=3), max in any::<bool>()) {
        let shape = SystemShape::new(dims).unwrap();
        let mut g = rng(seed);
        let p = random_hermitian(shape.joint_dim(), &mut g);
        let dir = if max { Direction::Max } else { Direction::Min };
        let run = seesaw_run(&p, &shape, dir, random_local_vectors(&shape, &mut g), &SeesawConfig::default()).unwrap();
        let seq: Vec<f64> = std::iter::once(run.history[0]).chain(run.steps.iter().copied()).collect();
        for w in seq.windows(2) {
            let delta = w[1] - w[0];
            let ok = if max { delta >= -1e-12 } else { delta <= 1e-12 };
            prop_assert!(ok, "{:?} step {} -> {}", dir, w[0], w[1]);
        }
    }

    #[test]
    fn scale_covariant(seed in any::<u64>()) {
        let shape = SystemShape::qubits(3).unwrap();
        let p = random_hermitian(8, &mut rng(seed));
        let c = cfg(8, seed);
        let base_min = seesaw_extremal_expectation(&p, &shape, Direction::Min, &c).unwrap().value;
        let base_max = seesaw_extremal_expectation(&p, &shape, Direction::Max, &c).unwrap().value;
        for k in [2.0, 1.0 / 3.0, -1.0, -2.0] {
            let q = p.scale(C64::new(k, 0.0));
            let v = seesaw_extremal_expectation(&q, &shape, Direction::Min, &c).unwrap().value;
            let expect = if k > 0.0 { k * base_min } else { k * base_max };
            prop_assert!((v - expect).abs() < 1e-7 * (1.0 + expect.abs()), "k={} {} vs {}", k, v, expect);
        }
    }
}

#[test]
fn restarts_agree_on_named_targets() {
    for m in 2..=6 {
        for kind in [StateKind::Ghz, StateKind::W] {
            let psi = kind.state(m).unwrap();
            let r = max_product_overlap(psi.amplitudes(), psi.shape(), &cfg(50, 0)).unwrap();
            assert!(r.restarts_agreeing >= 45, "{}{m}: {}/50 agree", kind.name(), r.restarts_agreeing);
            assert!(r.restart_values.iter().filter(|v| (*v - r.value).abs() <= AGREEMENT_TOL).count() >= 45);
        }
    }
}

#[test]
fn canonical_minimum_is_gamma_minus_overlap() {
    for m in 2..=5 {
        for kind in [StateKind::Ghz, StateKind::W] {
            let psi = kind.state(m).unwrap();
            let w = canonical_witness(&psi, None).unwrap();
            let min = seesaw_extremal_expectation(&w.matrix, psi.shape(), Direction::Min, &cfg(20, 1)).unwrap();
            let overlap = max_product_overlap(psi.amplitudes(), psi.shape(), &cfg(20, 2)).unwrap();
            assert!(
                (min.value - (w.gamma - overlap.value)).abs() < 2e-8,
                "{}{m}: {} vs {}",
                kind.name(),
                min.value,
                w.gamma - overlap.value
            );
        }
    }
}

#[test]
fn deterministic_under_seed() {
    let psi = StateKind::W.state(4).unwrap();
    let a = max_product_overlap(psi.amplitudes(), psi.shape(), &cfg(12, 7)).unwrap();
    let b = max_product_overlap(psi.amplitudes(), psi.shape(), &cfg(12, 7)).unwrap();
    assert_eq!(a.restart_values, b.restart_values);
    assert_eq!(a.argopt, b.argopt);
}
