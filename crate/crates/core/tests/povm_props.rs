mod common;

use proptest::prelude::*;
use witnesskit::povm::{
    delta, delta_tilde, ghz_class_operator, sign_restrict, sign_split, triangular_split, w_class_operator,
    PhaseAssignment,
};
use witnesskit::states::SystemShape;
use witnesskit::tensor::{kron_all, ComplexMatrix, C64};

fn sigma_y() -> ComplexMatrix {
    let i = C64::new(0.0, 1.0);
    let z = C64::new(0.0, 0.0);
    ComplexMatrix::from_rows(vec![vec![z, -i], vec![i, z]]).unwrap()
}

fn pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=m).flat_map(move |r| (r + 1..=m).map(move |s| (r, s)))
}

#[test]
fn w_class_is_embedded_sigma_y_pair() {
    for m in 2..=6 {
        let shape = SystemShape::qubits(m).unwrap();
        for (r1, r2) in pairs(m) {
            let factors: Vec<ComplexMatrix> = (1..=m)
                .map(|j| if j == r1 || j == r2 { sigma_y() } else { ComplexMatrix::identity(2) })
                .collect();
            let expected = kron_all(&factors);
            let op = w_class_operator(&shape, r1, r2).unwrap();
            assert_eq!(op.matrix(), &expected, "m={m} ({r1},{r2})");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn delta_identities(n in 2usize..7, phi in -7.0f64..7.0) {
        let pa = PhaseAssignment::new(n, phi).unwrap();
        let d = delta(&pa);
        let dt = delta_tilde(&pa);
        prop_assert_eq!(&d.adjoint(), &d);
        for k in 0..n {
            prop_assert_eq!(d.get(k, k), C64::new(1.0, 0.0));
            prop_assert_eq!(dt.get(k, k), C64::new(0.0, 0.0));
        }
        let resid = d.add(&dt).unwrap().sub(&ComplexMatrix::identity(n)).unwrap();
        prop_assert_eq!(resid.max_abs(), 0.0);
    }

    #[test]
    fn class_operators_hermitian_traceless_and_restrictable(
        dims in prop::collection::vec(2usize..4, 2..=4),
        ghz in any::<bool>(),
        pick in any::<prop::sample::Index>(),
    ) {
        let shape = SystemShape::new(dims.clone()).unwrap();
        let all: Vec<_> = pairs(dims.len()).collect();
        let (r1, r2) = all[pick.index(all.len())];
        let op = if ghz {
            ghz_class_operator(&shape, r1, r2).unwrap()
        } else {
            w_class_operator(&shape, r1, r2).unwrap()
        };
        let a = op.matrix();
        prop_assert!(a.hermitian_deviation() <= 1e-12);
        prop_assert!(a.trace().norm() <= 1e-12);

        let kept = sign_restrict(&op);
        let d = op.dim();
        for i in 0..d {
            for j in 0..d {
                if op.is_uniform_sign(i, j) {
                    prop_assert_eq!(kept.get(i, j), a.get(i, j));
                } else {
                    prop_assert_eq!(kept.get(i, j), C64::new(0.0, 0.0));
                }
            }
        }
        let (plus, minus) = sign_split(&op);
        prop_assert_eq!(plus.add(&minus).unwrap(), kept.clone());
        prop_assert_eq!(plus.adjoint(), minus.clone());
        let (upper, lower) = triangular_split(&kept);
        prop_assert_eq!(upper.adjoint(), lower);
    }

    #[test]
    fn triangles_of_hermitian_are_adjoint(seed in any::<u64>(), n in 1usize..9) {
        let h = common::random_hermitian(n, &mut common::rng(seed));
        let (upper, lower) = triangular_split(&h);
        prop_assert_eq!(upper.adjoint(), lower);
    }
}
