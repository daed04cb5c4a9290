mod common;

use common::{permute_qubits, random_state, rng};
use proptest::prelude::*;
use witnesskit::concurrence::{concurrence_general, concurrence_squared, ConcurrenceBreakdown, DEFAULT_NORMALIZATION};
use witnesskit::states::{random_product_state, PureState, SystemShape};
use witnesskit::tensor::{ComplexVector, C64};

fn terms(b: &ConcurrenceBreakdown) -> Vec<(String, f64)> {
    b.w_terms
        .iter()
        .chain(&b.ghz_terms)
        .map(|(k, v)| (k.clone(), *v))
        .collect()
}

fn breakdown(psi: &PureState) -> ConcurrenceBreakdown {
    concurrence_general(psi, DEFAULT_NORMALIZATION).unwrap()
}

fn local_phase(psi: &PureState, qubit: usize, theta: f64) -> PureState {
    let shape = psi.shape();
    let z = C64::from_polar(1.0, theta);
    let amps = (0..psi.dim())
        .map(|x| {
            let a = psi.amplitudes()[x];
            if shape.labels(x).unwrap()[qubit] == 2 { a * z } else { a }
        })
        .collect();
    PureState::new(shape.clone(), ComplexVector(amps)).unwrap()
}

fn scaled(psi: &PureState, c: C64) -> PureState {
    PureState::new(psi.shape().clone(), psi.amplitudes().scale(c)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn permutation_invariant(seed in any::<u64>(), perm in (2usize..=5).prop_flat_map(|m| Just((0..m).collect::<Vec<_>>()).prop_shuffle())) {
        let shape = SystemShape::qubits(perm.len()).unwrap();
        let psi = random_state(&shape, &mut rng(seed));
        let a = concurrence_squared(&psi).unwrap();
        let b = concurrence_squared(&permute_qubits(&psi, &perm)).unwrap();
        prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn global_quarter_phases_are_exact(seed in any::<u64>(), m in 2usize..=5) {
        let psi = random_state(&SystemShape::qubits(m).unwrap(), &mut rng(seed));
        let base = terms(&breakdown(&psi));
        for c in [C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)] {
            prop_assert_eq!(&terms(&breakdown(&scaled(&psi, c))), &base);
        }
    }

    #[test]
    fn phases_leave_terms_unchanged(seed in any::<u64>(), m in 2usize..=5, theta in -7.0f64..7.0, q in any::<prop::sample::Index>()) {
        let psi = random_state(&SystemShape::qubits(m).unwrap(), &mut rng(seed));
        let base = terms(&breakdown(&psi));
        let global = psi.with_global_phase(theta);
        let local = local_phase(&psi, q.index(m), theta);
        for other in [global, local] {
            for ((k1, v1), (k2, v2)) in base.iter().zip(terms(&breakdown(&other))) {
                prop_assert_eq!(k1, &k2);
                prop_assert!((v1 - v2).abs() < 1e-12, "{}: {} vs {}", k1, v1, v2);
            }
        }
    }
}

#[test]
fn vanishes_on_products() {
    for m in 2..=5 {
        let shape = SystemShape::qubits(m).unwrap();
        for seed in 0..1000 {
            let c2 = concurrence_squared(&random_product_state(&shape, seed)).unwrap();
            assert!((0.0..=1e-10).contains(&c2), "m={m} seed={seed} C^2={c2}");
        }
    }
}

#[test]
fn three_qubit_ceiling() {
    let shape = SystemShape::qubits(3).unwrap();
    let mut g = rng(99);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let c2 = concurrence_squared(&random_state(&shape, &mut g)).unwrap();
        assert!(c2 >= 0.0);
        worst = worst.max(c2);
    }
    assert!(worst <= 9.0 / 8.0 + 1e-9, "max C^2 = {worst}");
}
