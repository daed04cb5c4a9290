//! Quantum-phase POVM matrices and the class operators built from their
//! orthogonal complements.
//!
//! Every local phase obeys `phi_{k,l} = -phi_{l,k}` with `phi_{k,l} = +phi`
//! for `k < l`. Joint operators carry a per-entry signature recording, for
//! each subsystem, which sign of the local phase contributed to that entry.
//! The signature is assembled alongside the tensor product, never read back
//! from the numeric phase.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Result, WitnessError};
use crate::states::SystemShape;
use crate::tensor::{ComplexMatrix, C64, ONE};

/// Largest subsystem count a signature mask can hold.
pub const MAX_SIGNED_SUBSYSTEMS: usize = 32;

/// Uniform phase `phi` on every `(k, l)` pair with `k < l`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseAssignment {
    pub n: usize,
    pub phi: f64,
}

impl PhaseAssignment {
    pub fn new(n: usize, phi: f64) -> Result<Self> {
        if n < 2 {
            return Err(WitnessError::InvalidShape(format!("local dimension {n} < 2")));
        }
        Ok(Self { n, phi })
    }

    /// `phi_{k,l}` for 0-based `k`, `l`.
    pub fn phase(&self, k: usize, l: usize) -> f64 {
        match k.cmp(&l) {
            std::cmp::Ordering::Less => self.phi,
            std::cmp::Ordering::Greater => -self.phi,
            std::cmp::Ordering::Equal => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
            Sign::Zero => "0",
        }
    }
}

/// `Delta[k, l] = exp(i phi_{k,l})`.
pub fn delta(pa: &PhaseAssignment) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(pa.n, pa.n);
    for k in 0..pa.n {
        for l in 0..pa.n {
            let z = if k == l { ONE } else { phasor(pa.phase(k, l)) };
            m.set(k, l, z);
        }
    }
    m
}

/// `e^{i phi}`, exact when `phi` is a whole number of quarter turns.
fn phasor(phi: f64) -> C64 {
    let quarters = phi / FRAC_PI_2;
    let k = quarters.round();
    if (quarters - k).abs() < 1e-12 {
        return match (k as i64).rem_euclid(4) {
            0 => ONE,
            1 => C64::new(0.0, 1.0),
            2 => -ONE,
            _ => C64::new(0.0, -1.0),
        };
    }
    C64::from_polar(1.0, phi)
}

/// `I - Delta`.
pub fn delta_tilde(pa: &PhaseAssignment) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(pa.n, pa.n);
    for k in 0..pa.n {
        for l in 0..pa.n {
            if k != l {
                m.set(k, l, -phasor(pa.phase(k, l)));
            }
        }
    }
    m
}

/// Dense operator with a phase-sign signature per entry.
///
/// Signatures are stored as two bit masks per entry: bit `j` of `plus` is set
/// when subsystem `j` (0-based, leftmost factor first) contributed `+phi`,
/// bit `j` of `minus` when it contributed `-phi`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedOperator {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
    plus: Vec<u32>,
    minus: Vec<u32>,
}

impl SignedOperator {
    /// `I - Delta` for a phase assignment, the phase-free identity for `None`.
    fn local(pa: Option<&PhaseAssignment>, n: usize) -> Self {
        let mut plus = vec![0; n * n];
        let mut minus = vec![0; n * n];
        let matrix = match pa {
            Some(pa) => {
                for k in 0..n {
                    for l in 0..n {
                        match k.cmp(&l) {
                            std::cmp::Ordering::Less => plus[k * n + l] = 1,
                            std::cmp::Ordering::Greater => minus[k * n + l] = 1,
                            std::cmp::Ordering::Equal => {}
                        }
                    }
                }
                delta_tilde(pa)
            }
            None => ComplexMatrix::identity(n),
        };
        Self {
            dims: vec![n],
            matrix,
            plus,
            minus,
        }
    }

    fn kron(&self, other: &Self) -> Self {
        let shift = self.dims.len() as u32;
        let (ra, rb) = (self.matrix.rows(), other.matrix.rows());
        let d = ra * rb;
        let mut matrix = ComplexMatrix::zeros(d, d);
        let mut plus = vec![0u32; d * d];
        let mut minus = vec![0u32; d * d];
        for i1 in 0..ra {
            for j1 in 0..ra {
                let x = self.matrix.get(i1, j1);
                let (pa, ma) = (self.plus[i1 * ra + j1], self.minus[i1 * ra + j1]);
                for i2 in 0..rb {
                    for j2 in 0..rb {
                        let row = i1 * rb + i2;
                        let col = j1 * rb + j2;
                        let b = i2 * rb + j2;
                        matrix.set(row, col, x * other.matrix.get(i2, j2));
                        plus[row * d + col] = pa | (other.plus[b] << shift);
                        minus[row * d + col] = ma | (other.minus[b] << shift);
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            dims,
            matrix,
            plus,
            minus,
        }
    }

    /// Tensor product of local factors; `None` places an identity.
    fn assemble(dims: &[usize], phases: &[Option<f64>]) -> Result<Self> {
        if dims.len() > MAX_SIGNED_SUBSYSTEMS {
            return Err(WitnessError::InvalidShape(format!(
                "signed operators support at most {MAX_SIGNED_SUBSYSTEMS} subsystems"
            )));
        }
        let mut acc: Option<Self> = None;
        for (&n, phase) in dims.iter().zip(phases) {
            let pa = phase.map(|phi| PhaseAssignment { n, phi });
            let f = Self::local(pa.as_ref(), n);
            acc = Some(match acc {
                None => f,
                Some(a) => a.kron(&f),
            });
        }
        acc.ok_or_else(|| WitnessError::InvalidShape("no subsystems".into()))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Per-subsystem signs at `(row, col)`.
    pub fn signature(&self, row: usize, col: usize) -> Vec<Sign> {
        let d = self.dim();
        let (p, m) = (self.plus[row * d + col], self.minus[row * d + col]);
        (0..self.dims.len())
            .map(|j| {
                if p >> j & 1 == 1 {
                    Sign::Plus
                } else if m >> j & 1 == 1 {
                    Sign::Minus
                } else {
                    Sign::Zero
                }
            })
            .collect()
    }

    /// True when every nonzero signature component at `(row, col)` has the
    /// same sign and at least one is nonzero.
    pub fn is_uniform_sign(&self, row: usize, col: usize) -> bool {
        let d = self.dim();
        let (p, m) = (self.plus[row * d + col], self.minus[row * d + col]);
        (p != 0 && m == 0) || (m != 0 && p == 0)
    }
}

fn check_positions(shape: &SystemShape, r1: usize, r2: usize) -> Result<()> {
    let m = shape.m();
    if r1 < 1 || r1 >= r2 || r2 > m {
        return Err(WitnessError::BadPositions { r1, r2, m });
    }
    Ok(())
}

/// `Delta~(pi/2)` at positions `r1 < r2` (1-based), identity elsewhere.
pub fn w_class_operator(shape: &SystemShape, r1: usize, r2: usize) -> Result<SignedOperator> {
    check_positions(shape, r1, r2)?;
    let phases: Vec<Option<f64>> = (1..=shape.m())
        .map(|j| (j == r1 || j == r2).then_some(FRAC_PI_2))
        .collect();
    SignedOperator::assemble(shape.dims(), &phases)
}

/// `Delta~(pi/2)` at positions `r1 < r2` (1-based), `Delta~(pi)` elsewhere.
pub fn ghz_class_operator(shape: &SystemShape, r1: usize, r2: usize) -> Result<SignedOperator> {
    check_positions(shape, r1, r2)?;
    let phases: Vec<Option<f64>> = (1..=shape.m())
        .map(|j| Some(if j == r1 || j == r2 { FRAC_PI_2 } else { PI }))
        .collect();
    SignedOperator::assemble(shape.dims(), &phases)
}

/// Strict upper and lower triangles of a square matrix.
pub fn triangular_split(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let mut upper = ComplexMatrix::zeros(n, a.cols());
    let mut lower = ComplexMatrix::zeros(n, a.cols());
    for i in 0..n {
        for j in 0..a.cols() {
            if i < j {
                upper.set(i, j, a.get(i, j));
            } else if i > j {
                lower.set(i, j, a.get(i, j));
            }
        }
    }
    (upper, lower)
}

/// Keeps the entries whose signature is uniformly `+` or uniformly `-`.
pub fn sign_restrict(a: &SignedOperator) -> ComplexMatrix {
    let d = a.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            if a.is_uniform_sign(i, j) {
                out.set(i, j, a.matrix.get(i, j));
            }
        }
    }
    out
}

/// `(upper, lower)` of [`sign_restrict`]: the all-plus and all-minus parts.
pub fn sign_split(a: &SignedOperator) -> (ComplexMatrix, ComplexMatrix) {
    let d = a.dim();
    let mut plus = ComplexMatrix::zeros(d, d);
    let mut minus = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let (p, m) = (a.plus[i * d + j], a.minus[i * d + j]);
            if p != 0 && m == 0 {
                plus.set(i, j, a.matrix.get(i, j));
            } else if m != 0 && p == 0 {
                minus.set(i, j, a.matrix.get(i, j));
            }
        }
    }
    (plus, minus)
}
