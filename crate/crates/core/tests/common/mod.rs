#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use witnesskit::states::{random_local_vector, PureState, SystemShape};
use witnesskit::tensor::{ComplexMatrix, ComplexVector, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_row_major(rows, cols, data).unwrap()
}

pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    random_matrix(n, n, rng).hermitize().unwrap()
}

pub fn random_state<R: Rng>(shape: &SystemShape, rng: &mut R) -> PureState {
    PureState::new(shape.clone(), random_local_vector(shape.joint_dim(), rng)).unwrap()
}

/// Moves qubit `perm[j]` of `psi` to position `j`.
pub fn permute_qubits(psi: &PureState, perm: &[usize]) -> PureState {
    let shape = psi.shape();
    let m = shape.m();
    let mut out = ComplexVector::zeros(psi.dim());
    for x in 0..psi.dim() {
        let old = shape.labels(x).unwrap();
        let new: Vec<usize> = (0..m).map(|j| old[perm[j]]).collect();
        out[shape.flat_index(&new).unwrap()] = psi.amplitudes()[x];
    }
    PureState::new(shape.clone(), out).unwrap()
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.sub(b).unwrap().max_abs()
}
