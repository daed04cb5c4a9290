//! Multi-subsystem pure states and density operators.
//!
//! Basis labels are 1-based (`1..=N_j`) at the API surface and map to
//! 0-based offsets under row-major fusion: the flat index of
//! `(l_1, ..., l_m)` is `sum_j (l_j - 1) * prod_{i > j} N_i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Result, WitnessError};
use crate::tensor::{hermitian_eig, ComplexMatrix, ComplexVector, C64, HERMITIAN_TOL, ZERO};

/// Tolerance on `| ||psi||^2 - 1 |` for a valid [`PureState`].
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance on the smallest eigenvalue of a valid [`DensityOperator`].
pub const PSD_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemShape {
    dims: Vec<usize>,
}

impl SystemShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(WitnessError::InvalidShape("no subsystems".into()));
        }
        if let Some(&n) = dims.iter().find(|&&n| n < 2) {
            return Err(WitnessError::InvalidShape(format!(
                "subsystem dimension {n} < 2"
            )));
        }
        dims.iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .ok_or_else(|| WitnessError::InvalidShape("joint dimension overflows".into()))?;
        Ok(Self { dims })
    }

    pub fn qubits(m: usize) -> Result<Self> {
        Self::new(vec![2; m])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Subsystem count.
    pub fn m(&self) -> usize {
        self.dims.len()
    }

    pub fn joint_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_qubits(&self) -> bool {
        self.dims.iter().all(|&n| n == 2)
    }

    /// 1-based labels to flat offset.
    pub fn flat_index(&self, labels: &[usize]) -> Result<usize> {
        if labels.len() != self.m() {
            return Err(WitnessError::DimensionMismatch {
                expected: self.m(),
                found: labels.len(),
            });
        }
        let mut idx = 0;
        for (position, (&l, &n)) in labels.iter().zip(&self.dims).enumerate() {
            if l < 1 || l > n {
                return Err(WitnessError::LabelOutOfRange {
                    position: position + 1,
                    label: l,
                    max: n,
                });
            }
            idx = idx * n + (l - 1);
        }
        Ok(idx)
    }

    /// Flat offset to 1-based labels.
    pub fn labels(&self, flat: usize) -> Result<Vec<usize>> {
        if flat >= self.joint_dim() {
            return Err(WitnessError::DimensionMismatch {
                expected: self.joint_dim(),
                found: flat + 1,
            });
        }
        let mut out = vec![0; self.m()];
        let mut rem = flat;
        for (slot, &n) in out.iter_mut().zip(&self.dims).rev() {
            *slot = rem % n + 1;
            rem /= n;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    shape: SystemShape,
    amplitudes: ComplexVector,
}

impl PureState {
    /// Validates length and normalization (within [`NORM_TOL`]).
    pub fn new(shape: SystemShape, amplitudes: ComplexVector) -> Result<Self> {
        Self::with_tolerance(shape, amplitudes, NORM_TOL)
    }

    pub fn with_tolerance(shape: SystemShape, amplitudes: ComplexVector, tol: f64) -> Result<Self> {
        if amplitudes.dim() != shape.joint_dim() {
            return Err(WitnessError::DimensionMismatch {
                expected: shape.joint_dim(),
                found: amplitudes.dim(),
            });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(WitnessError::InvalidState("non-finite amplitude".into()));
        }
        let n2 = amplitudes.norm_sqr();
        if (n2 - 1.0).abs() > tol {
            return Err(WitnessError::InvalidState(format!(
                "squared norm {n2} differs from 1"
            )));
        }
        Ok(Self { shape, amplitudes })
    }

    /// Normalizes an arbitrary non-zero vector.
    pub fn from_unnormalized(shape: SystemShape, amplitudes: ComplexVector) -> Result<Self> {
        if amplitudes.norm() == 0.0 {
            return Err(WitnessError::InvalidState("zero vector".into()));
        }
        Self::new(shape, amplitudes.normalized())
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    /// Amplitude at 1-based labels.
    pub fn amplitude(&self, labels: &[usize]) -> Result<C64> {
        Ok(self.amplitudes[self.shape.flat_index(labels)?])
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.dim()
    }

    pub fn with_global_phase(&self, theta: f64) -> Self {
        Self {
            shape: self.shape.clone(),
            amplitudes: self.amplitudes.scale(C64::from_polar(1.0, theta)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    shape: SystemShape,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn new(shape: SystemShape, matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(shape, matrix, HERMITIAN_TOL)
    }

    pub fn with_tolerance(shape: SystemShape, matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let d = shape.joint_dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(WitnessError::DimensionMismatch {
                expected: d,
                found: matrix.rows(),
            });
        }
        let dev = matrix.hermitian_deviation();
        if dev > tol {
            return Err(WitnessError::NotHermitian { deviation: dev });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(WitnessError::InvalidState(format!("trace {tr} differs from 1")));
        }
        let eig = hermitian_eig(&matrix)?;
        if eig.values[0] < -PSD_TOL {
            return Err(WitnessError::InvalidState(format!(
                "negative eigenvalue {}",
                eig.values[0]
            )));
        }
        Ok(Self { shape, matrix })
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

pub fn ghz_state(m: usize) -> Result<PureState> {
    if m < 2 {
        return Err(WitnessError::BadArity(format!("GHZ state needs m >= 2, got {m}")));
    }
    let shape = SystemShape::qubits(m)?;
    let d = shape.joint_dim();
    let mut amps = ComplexVector::zeros(d);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    amps[0] = C64::new(s, 0.0);
    amps[d - 1] = C64::new(s, 0.0);
    PureState::new(shape, amps)
}

/// Uniform superposition over the `m` basis states with exactly one label 2.
pub fn w_state(m: usize) -> Result<PureState> {
    if m < 2 {
        return Err(WitnessError::BadArity(format!("W state needs m >= 2, got {m}")));
    }
    let shape = SystemShape::qubits(m)?;
    let mut amps = ComplexVector::zeros(shape.joint_dim());
    let a = 1.0 / (m as f64).sqrt();
    for bit in 0..m {
        amps[1 << bit] = C64::new(a, 0.0);
    }
    PureState::new(shape, amps)
}

pub fn pure_to_density(psi: &PureState) -> DensityOperator {
    DensityOperator {
        shape: psi.shape.clone(),
        matrix: psi.amplitudes.outer(),
    }
}

/// `p |psi><psi| + (1 - p) I / d`.
pub fn white_noise_mix(psi: &PureState, p: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&p) {
        return Err(WitnessError::BadProbability(p));
    }
    let d = psi.dim();
    let mut m = psi.amplitudes.outer().scale(C64::new(p, 0.0));
    let noise = (1.0 - p) / d as f64;
    for i in 0..d {
        let z = m.get(i, i);
        m.set(i, i, z + noise);
    }
    Ok(DensityOperator {
        shape: psi.shape.clone(),
        matrix: m,
    })
}

/// Haar-random unit vector in `C^n`, via normalized complex Gaussians.
pub fn random_local_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    loop {
        let v = ComplexVector(
            (0..n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    C64::new(re, im)
                })
                .collect(),
        );
        if v.norm() > 1e-300 {
            return v.normalized();
        }
    }
}

pub fn random_local_vectors<R: Rng + ?Sized>(shape: &SystemShape, rng: &mut R) -> Vec<ComplexVector> {
    shape
        .dims()
        .iter()
        .map(|&n| random_local_vector(n, rng))
        .collect()
}

/// Tensor product of local vectors as a [`PureState`].
pub fn product_state(shape: &SystemShape, locals: &[ComplexVector]) -> Result<PureState> {
    if locals.len() != shape.m() {
        return Err(WitnessError::DimensionMismatch {
            expected: shape.m(),
            found: locals.len(),
        });
    }
    for (v, &n) in locals.iter().zip(shape.dims()) {
        if v.dim() != n {
            return Err(WitnessError::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
    }
    PureState::from_unnormalized(shape.clone(), ComplexVector::kron_all(locals))
}

pub fn random_product_state(shape: &SystemShape, seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let locals = random_local_vectors(shape, &mut rng);
    product_state(shape, &locals).expect("local vectors match the shape")
}

/// Convex mixture of `components` random product states with
/// Dirichlet(1, ..., 1) weights.
pub fn random_separable_mixture(
    shape: &SystemShape,
    components: usize,
    seed: u64,
) -> Result<DensityOperator> {
    if components == 0 {
        return Err(WitnessError::InvalidConfig("mixture needs at least one component".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = dirichlet_uniform(components, &mut rng);
    let d = shape.joint_dim();
    let mut m = ComplexMatrix::zeros(d, d);
    for w in weights {
        let locals = random_local_vectors(shape, &mut rng);
        let v = ComplexVector::kron_all(&locals);
        m = m.add(&v.outer().scale(C64::new(w, 0.0)))?;
    }
    Ok(DensityOperator {
        shape: shape.clone(),
        matrix: m,
    })
}

pub(crate) fn dirichlet_uniform<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    if total == 0.0 {
        return vec![1.0 / k as f64; k];
    }
    raw.into_iter().map(|x| x / total).collect()
}

/// Reduced density operator on the subsystems listed in `keep` (0-based, ascending).
pub fn partial_trace(shape: &SystemShape, rho: &ComplexMatrix, keep: &[usize]) -> Result<ComplexMatrix> {
    let dims = shape.dims();
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(WitnessError::InvalidShape(format!("bad subsystem list {keep:?}")));
    }
    let d = shape.joint_dim();
    let kept: usize = keep.iter().map(|&k| dims[k]).product();
    let mut out = ComplexMatrix::zeros(kept, kept);
    let split = |x: usize| -> (usize, usize) {
        let mut rem = x;
        let mut labels = vec![0; dims.len()];
        for (slot, &n) in labels.iter_mut().zip(dims).rev() {
            *slot = rem % n;
            rem /= n;
        }
        let (mut a, mut b) = (0, 0);
        for (i, (&l, &n)) in labels.iter().zip(dims).enumerate() {
            if keep.contains(&i) {
                a = a * n + l;
            } else {
                b = b * n + l;
            }
        }
        (a, b)
    };
    let parts: Vec<(usize, usize)> = (0..d).map(split).collect();
    for x in 0..d {
        for y in 0..d {
            let (kx, tx) = parts[x];
            let (ky, ty) = parts[y];
            if tx == ty {
                let z = rho.get(x, y);
                if z != ZERO {
                    let cur = out.get(kx, ky);
                    out.set(kx, ky, cur + z);
                }
            }
        }
    }
    Ok(out)
}
