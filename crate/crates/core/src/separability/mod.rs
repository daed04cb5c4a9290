//! Numerical certification of the witness conditions: nonnegative expectation
//! on every separable state, negative expectation on the target.
//!
//! The separable extremum of a linear functional is attained on pure product
//! states, so the see-saw over local vectors bounds both conditions.

mod seesaw;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use seesaw::{
    max_product_overlap, seesaw_extremal_expectation, seesaw_run, Direction, SeesawConfig, SeesawResult,
    SeesawRun, AGREEMENT_TOL,
};

use crate::error::{Result, WitnessError};
use crate::states::{dirichlet_uniform, random_local_vectors, PureState};
use crate::tensor::{expectation_mixed, expectation_pure, ComplexMatrix, ComplexVector, C64};
use crate::witness::Witness;

/// Verdict threshold absorbing floating-point noise.
pub const VERDICT_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct CertificationReport {
    pub min_product_expectation: f64,
    pub argmin: Vec<ComplexVector>,
    pub is_valid_witness: bool,
    pub detection_value: f64,
    pub detects_target: bool,
    pub sweeps_used: usize,
    pub restarts_agreeing: usize,
    pub restarts: usize,
    pub converged: bool,
}

fn require_hermitian(w: &Witness) -> Result<()> {
    let deviation = w.matrix.hermitian_deviation();
    if deviation > crate::tensor::HERMITIAN_TOL {
        return Err(WitnessError::NotHermitian { deviation });
    }
    Ok(())
}

fn require_same_dim(w: &Witness, target: &PureState) -> Result<()> {
    if w.dims != target.shape().dims() {
        return Err(WitnessError::DimensionMismatch {
            expected: w.dim(),
            found: target.dim(),
        });
    }
    Ok(())
}

/// `Tr(W |psi><psi|)`.
pub fn detection_value(w: &Witness, target: &PureState) -> Result<f64> {
    require_same_dim(w, target)?;
    Ok(expectation_pure(&w.matrix, target.amplitudes())?.re)
}

pub fn certify_witness(w: &Witness, target: &PureState, cfg: &SeesawConfig) -> Result<CertificationReport> {
    require_hermitian(w)?;
    require_same_dim(w, target)?;
    let shape = target.shape();
    let res = seesaw_extremal_expectation(&w.matrix, shape, Direction::Min, cfg)?;
    let detection = detection_value(w, target)?;
    Ok(CertificationReport {
        min_product_expectation: res.value,
        argmin: res.argopt,
        is_valid_witness: res.value >= -VERDICT_TOL,
        detection_value: detection,
        detects_target: detection < -VERDICT_TOL,
        sweeps_used: res.sweeps_used,
        restarts_agreeing: res.restarts_agreeing,
        restarts: cfg.restarts,
        converged: res.converged,
    })
}

/// Smallest white-noise weight `p*` above which
/// `p |psi><psi| + (1 - p) I / d` is detected by `w`.
///
/// With `e = Tr(W |psi><psi|)` and `t = Tr(W) / d`, the expectation is
/// `p e + (1 - p) t`, so `p* = t / (t - e)`. Fails with `NoDetection` unless
/// `e < -VERDICT_TOL` and `e < t`; clamps to 0 when even the maximally mixed state is
/// detected.
pub fn noise_threshold(w: &Witness, target: &PureState) -> Result<f64> {
    require_hermitian(w)?;
    let e = detection_value(w, target)?;
    let t = w.matrix.trace().re / w.dim() as f64;
    if e >= -VERDICT_TOL || e >= t {
        return Err(WitnessError::NoDetection { detection: e });
    }
    Ok((t / (t - e)).max(0.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub min_pure: f64,
    pub min_mixture: f64,
    pub pure_samples: usize,
    pub mixture_samples: usize,
}

impl ProbeReport {
    pub fn worst(&self) -> f64 {
        self.min_pure.min(self.min_mixture)
    }
}

/// Largest component count drawn for a random separable mixture.
const MAX_MIXTURE_COMPONENTS: usize = 6;

/// Sampled lower bound on the separable expectation of `w`: random pure
/// product states and Dirichlet-weighted mixtures of them, the latter
/// evaluated as `Tr(W rho)` on an assembled density matrix.
pub fn positivity_probe(w: &Witness, pure_samples: usize, mixture_samples: usize, seed: u64) -> Result<ProbeReport> {
    require_hermitian(w)?;
    let shape = w.shape()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_pure = f64::INFINITY;
    for _ in 0..pure_samples {
        let v = ComplexVector::kron_all(&random_local_vectors(&shape, &mut rng));
        min_pure = min_pure.min(expectation_pure(&w.matrix, &v)?.re);
    }
    let d = shape.joint_dim();
    let mut min_mixture = f64::INFINITY;
    for _ in 0..mixture_samples {
        let k = rng.gen_range(2..=MAX_MIXTURE_COMPONENTS);
        let weights = dirichlet_uniform(k, &mut rng);
        let mut rho = ComplexMatrix::zeros(d, d);
        for wk in weights {
            let v = ComplexVector::kron_all(&random_local_vectors(&shape, &mut rng));
            rho = rho.add(&v.outer().scale(C64::new(wk, 0.0)))?;
        }
        min_mixture = min_mixture.min(expectation_mixed(&w.matrix, &rho)?.re);
    }
    Ok(ProbeReport {
        min_pure,
        min_mixture,
        pure_samples,
        mixture_samples,
    })
}
