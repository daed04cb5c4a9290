use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Result, WitnessError};
use crate::states::{random_local_vectors, SystemShape};
use crate::tensor::{contract_all_but_one, expectation_pure, hermitian_eig, ComplexMatrix, ComplexVector, HERMITIAN_TOL, ZERO};

/// Eigenvalues closer than this to the extremal one count as degenerate.
const DEGENERACY_GAP: f64 = 1e-12;
/// Restarts within this distance of the best value count as agreeing.
pub const AGREEMENT_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

impl Direction {
    fn better(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Direction::Min => candidate < incumbent,
            Direction::Max => candidate > incumbent,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeesawConfig {
    pub restarts: usize,
    pub max_sweeps: usize,
    /// Stop once one full sweep changes the objective by less than this.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        Self {
            restarts: 50,
            max_sweeps: 500,
            tolerance: 1e-10,
            seed: 0,
        }
    }
}

impl SeesawConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(WitnessError::InvalidConfig("restarts must be >= 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(WitnessError::InvalidConfig("tolerance must be > 0".into()));
        }
        Ok(())
    }
}

/// One restart of the alternating optimization.
#[derive(Clone, Debug)]
pub struct SeesawRun {
    pub value: f64,
    pub locals: Vec<ComplexVector>,
    pub sweeps: usize,
    pub converged: bool,
    /// Objective at the start and after every sweep.
    pub history: Vec<f64>,
    /// Objective after every single-site update.
    pub steps: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct SeesawResult {
    pub value: f64,
    pub argopt: Vec<ComplexVector>,
    /// Sweeps used by the best restart.
    pub sweeps_used: usize,
    /// Whether the best restart met the tolerance within the budget.
    pub converged: bool,
    pub restarts_agreeing: usize,
    pub restart_values: Vec<f64>,
}

fn check_operator(p: &ComplexMatrix, shape: &SystemShape) -> Result<()> {
    let d = shape.joint_dim();
    if p.rows() != d || p.cols() != d {
        return Err(WitnessError::DimensionMismatch {
            expected: d,
            found: p.rows(),
        });
    }
    let deviation = p.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(WitnessError::NotHermitian { deviation });
    }
    Ok(())
}

/// Extremal eigenvector of `m`; within a degenerate extremal eigenspace the
/// incumbent's projection is taken.
fn extremal_vector(m: &ComplexMatrix, direction: Direction, incumbent: &ComplexVector) -> Result<(f64, ComplexVector)> {
    let eig = hermitian_eig(m)?;
    let n = eig.values.len();
    let ext = match direction {
        Direction::Min => eig.values[0],
        Direction::Max => eig.values[n - 1],
    };
    let degenerate: Vec<usize> = (0..n)
        .filter(|&k| (eig.values[k] - ext).abs() < DEGENERACY_GAP)
        .collect();
    let first = match direction {
        Direction::Min => 0,
        Direction::Max => n - 1,
    };
    let mut v = eig.vectors[first].clone();
    if degenerate.len() > 1 {
        let mut proj = ComplexVector::zeros(n);
        for &k in &degenerate {
            let e = &eig.vectors[k];
            let c = e.inner(incumbent);
            for (p, x) in proj.iter_mut().zip(e.iter()) {
                *p += c * x;
            }
        }
        if proj.norm() > 1e-8 {
            v = proj.normalized();
        }
    }
    Ok((ext, fix_phase(v)))
}

/// Rotates the global phase so the largest-modulus component is real positive.
fn fix_phase(v: ComplexVector) -> ComplexVector {
    let pivot = v
        .iter()
        .copied()
        .fold(ZERO, |best, z| if z.norm() > best.norm() + 1e-14 { z } else { best });
    if pivot == ZERO {
        return v;
    }
    v.scale(pivot.conj() / pivot.norm())
}

/// Runs sweeps from the given local vectors until the objective settles.
pub fn seesaw_run(
    p: &ComplexMatrix,
    shape: &SystemShape,
    direction: Direction,
    start: Vec<ComplexVector>,
    cfg: &SeesawConfig,
) -> Result<SeesawRun> {
    check_operator(p, shape)?;
    let dims = shape.dims();
    let mut locals = start;
    let mut value = expectation_pure(p, &ComplexVector::kron_all(&locals))?.re;
    let mut history = vec![value];
    let mut steps = Vec::new();
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < cfg.max_sweeps {
        sweeps += 1;
        for j in 0..dims.len() {
            let m = contract_all_but_one(p, &locals, j, dims)?;
            let (lambda, v) = extremal_vector(&m, direction, &locals[j])?;
            locals[j] = v;
            steps.push(lambda);
        }
        let next = *steps.last().expect("at least one subsystem");
        history.push(next);
        let change = (next - value).abs();
        value = next;
        if change < cfg.tolerance {
            converged = true;
            break;
        }
    }
    Ok(SeesawRun {
        value,
        locals,
        sweeps,
        converged,
        history,
        steps,
    })
}

/// Extremal `<phi|P|phi>` over pure product states `phi`, best over
/// independently seeded restarts (`seed + restart`).
pub fn seesaw_extremal_expectation(
    p: &ComplexMatrix,
    shape: &SystemShape,
    direction: Direction,
    cfg: &SeesawConfig,
) -> Result<SeesawResult> {
    cfg.validate()?;
    check_operator(p, shape)?;
    let mut runs: Vec<SeesawRun> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(r as u64));
            let start = random_local_vectors(shape, &mut rng);
            seesaw_run(p, shape, direction, start, cfg)
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, run) in runs.iter().enumerate().skip(1) {
        if direction.better(run.value, runs[best].value) {
            best = i;
        }
    }
    let best_value = runs[best].value;
    let restarts_agreeing = runs
        .iter()
        .filter(|r| (r.value - best_value).abs() <= AGREEMENT_TOL)
        .count();
    let restart_values = runs.iter().map(|r| r.value).collect();
    let run = runs.swap_remove(best);
    Ok(SeesawResult {
        value: best_value,
        argopt: run.locals,
        sweeps_used: run.sweeps,
        converged: run.converged,
        restarts_agreeing,
        restart_values,
    })
}

/// `max |<phi|psi>|^2` over product states `phi`.
pub fn max_product_overlap(psi: &ComplexVector, shape: &SystemShape, cfg: &SeesawConfig) -> Result<SeesawResult> {
    seesaw_extremal_expectation(&psi.outer(), shape, Direction::Max, cfg)
}
