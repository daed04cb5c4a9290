//! Entanglement witnesses: the projector form `gamma I - |psi><psi|` and the
//! diagonal-minus-operator form assembled from sign-restricted class operators.

use std::fmt;
use std::str::FromStr;

use crate::concurrence::concurrence_squared;
use crate::error::{Result, WitnessError};
use crate::povm::{ghz_class_operator, sign_restrict, triangular_split, w_class_operator};
use crate::states::{ghz_state, w_state, PureState, SystemShape};
use crate::tensor::{ComplexMatrix, C64, HERMITIAN_TOL};

/// Amplitudes with modulus above this count as support.
pub const SUPPORT_TOL: f64 = 1e-12;
/// Entrywise differences above this are listed by [`compare_witnesses`].
pub const DISCREPANCY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessForm {
    Canonical,
    OperatorForm,
    HermitizedOperatorForm,
}

impl WitnessForm {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessForm::Canonical => "canonical",
            WitnessForm::OperatorForm => "operator_form",
            WitnessForm::HermitizedOperatorForm => "hermitized_operator_form",
        }
    }
}

impl fmt::Display for WitnessForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WitnessForm {
    type Err = WitnessError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(WitnessForm::Canonical),
            "operator_form" => Ok(WitnessForm::OperatorForm),
            "hermitized_operator_form" => Ok(WitnessForm::HermitizedOperatorForm),
            other => Err(WitnessError::Format(format!("unknown witness form {other:?}"))),
        }
    }
}

/// Target family for [`operator_form_witness`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    Ghz,
    W,
}

impl StateKind {
    pub fn state(self, m: usize) -> Result<PureState> {
        match self {
            StateKind::Ghz => ghz_state(m),
            StateKind::W => w_state(m),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StateKind::Ghz => "ghz",
            StateKind::W => "w",
        }
    }
}

impl FromStr for StateKind {
    type Err = WitnessError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" => Ok(StateKind::Ghz),
            "w" => Ok(StateKind::W),
            other => Err(WitnessError::Format(format!("unknown state kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub dims: Vec<usize>,
    pub matrix: ComplexMatrix,
    pub gamma: f64,
    pub source: String,
    pub form: WitnessForm,
}

impl Witness {
    pub fn shape(&self) -> Result<SystemShape> {
        SystemShape::new(self.dims.clone())
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_hermitian(&self) -> bool {
        self.matrix.is_hermitian(HERMITIAN_TOL)
    }

    /// `(W + W^dagger) / 2`, labelled as the hermitized operator form.
    pub fn hermitized(&self) -> Result<Witness> {
        Ok(Witness {
            dims: self.dims.clone(),
            matrix: self.matrix.hermitize()?,
            gamma: self.gamma,
            source: self.source.clone(),
            form: match self.form {
                WitnessForm::Canonical => WitnessForm::Canonical,
                _ => WitnessForm::HermitizedOperatorForm,
            },
        })
    }
}

/// Diagonal with `c_bar = C^2 - 1` on the target's support and `c = C^2` off it.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalSupportMatrix {
    pub entries: Vec<f64>,
    pub c_bar: f64,
    pub c: f64,
}

impl DiagonalSupportMatrix {
    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&self.entries)
    }
}

/// `gamma I - |psi><psi|`, with `gamma` defaulting to the concurrence `C^2(psi)`.
pub fn canonical_witness(psi: &PureState, gamma: Option<f64>) -> Result<Witness> {
    let gamma = match gamma {
        Some(g) => g,
        None => concurrence_squared(psi)?,
    };
    let d = psi.dim();
    let matrix = ComplexMatrix::identity(d)
        .scale(C64::new(gamma, 0.0))
        .sub(&psi.amplitudes().outer())?;
    Ok(Witness {
        dims: psi.shape().dims().to_vec(),
        matrix,
        gamma,
        source: describe(psi),
        form: WitnessForm::Canonical,
    })
}

pub fn support_diagonal(psi: &PureState, c_squared: f64) -> DiagonalSupportMatrix {
    let c_bar = c_squared - 1.0;
    let entries = psi
        .amplitudes()
        .iter()
        .map(|z| if z.norm() > SUPPORT_TOL { c_bar } else { c_squared })
        .collect();
    DiagonalSupportMatrix {
        entries,
        c_bar,
        c: c_squared,
    }
}

/// Literal diagonal-minus-operator witness.
///
/// GHZ: `D_g - restrict(GHZ-class(1, 2))`.
/// W: `D_w - sum_{r<s} upper(restrict(W-class(r, s)))`, which is not Hermitian;
/// use [`Witness::hermitized`] before certification.
pub fn operator_form_witness(kind: StateKind, m: usize) -> Result<Witness> {
    if m < 2 {
        return Err(WitnessError::BadArity(format!("operator form needs m >= 2, got {m}")));
    }
    let target = kind.state(m)?;
    let shape = target.shape().clone();
    let c2 = concurrence_squared(&target)?;
    let diag = support_diagonal(&target, c2).to_matrix();
    let operator = match kind {
        StateKind::Ghz => sign_restrict(&ghz_class_operator(&shape, 1, 2)?),
        StateKind::W => {
            let d = shape.joint_dim();
            let mut acc = ComplexMatrix::zeros(d, d);
            for r in 1..=m {
                for s in (r + 1)..=m {
                    let restricted = sign_restrict(&w_class_operator(&shape, r, s)?);
                    acc = acc.add(&triangular_split(&restricted).0)?;
                }
            }
            acc
        }
    };
    Ok(Witness {
        dims: shape.dims().to_vec(),
        matrix: diag.sub(&operator)?,
        gamma: c2,
        source: format!("{}{m}", kind.name()),
        form: WitnessForm::OperatorForm,
    })
}

fn describe(psi: &PureState) -> String {
    let m = psi.shape().m();
    if psi.shape().is_qubits() && m >= 2 {
        for kind in [StateKind::Ghz, StateKind::W] {
            if let Ok(s) = kind.state(m) {
                if s.amplitudes().inner(psi.amplitudes()).norm_sqr() > 1.0 - 1e-12 {
                    return format!("{}{m}", kind.name());
                }
            }
        }
    }
    format!("state{:?}", psi.shape().dims())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Discrepancy {
    pub row: usize,
    pub col: usize,
    pub a: C64,
    pub b: C64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscrepancyReport {
    pub max_abs_diff: f64,
    pub positions: Vec<Discrepancy>,
    pub a_hermitian: bool,
    pub b_hermitian: bool,
}

pub fn compare_witnesses(a: &Witness, b: &Witness) -> Result<DiscrepancyReport> {
    let diff = a.matrix.sub(&b.matrix)?;
    let mut positions = Vec::new();
    for i in 0..diff.rows() {
        for j in 0..diff.cols() {
            if diff.get(i, j).norm() > DISCREPANCY_TOL {
                positions.push(Discrepancy {
                    row: i,
                    col: j,
                    a: a.matrix.get(i, j),
                    b: b.matrix.get(i, j),
                });
            }
        }
    }
    Ok(DiscrepancyReport {
        max_abs_diff: diff.max_abs(),
        positions,
        a_hermitian: a.is_hermitian(),
        b_hermitian: b.is_hermitian(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::hermitian_eig;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn canonical_ghz3_entries() {
        let w = canonical_witness(&ghz_state(3).unwrap(), None).unwrap();
        assert!((w.gamma - 0.75).abs() < 1e-15);
        for i in 0..8 {
            for j in 0..8 {
                let expected = match (i, j) {
                    (0, 0) | (7, 7) => 0.25,
                    (0, 7) | (7, 0) => -0.5,
                    _ if i == j => 0.75,
                    _ => 0.0,
                };
                assert!((w.matrix.get(i, j) - c(expected)).norm() < 1e-15, "({i},{j})");
            }
        }
        assert_eq!(w.source, "ghz3");
    }

    #[test]
    fn canonical_w3_entries() {
        let w = canonical_witness(&w_state(3).unwrap(), None).unwrap();
        let sup = [1, 2, 4];
        for i in 0..8 {
            for j in 0..8 {
                let on = sup.contains(&i) && sup.contains(&j);
                let expected = match (i == j, on) {
                    (true, true) => 1.0 / 3.0,
                    (true, false) => 2.0 / 3.0,
                    (false, true) => -1.0 / 3.0,
                    (false, false) => 0.0,
                };
                assert!((w.matrix.get(i, j) - c(expected)).norm() < 1e-15, "({i},{j})");
            }
        }
    }

    #[test]
    fn gamma_one_is_psd() {
        let w = canonical_witness(&w_state(4).unwrap(), Some(1.0)).unwrap();
        let e = hermitian_eig(&w.matrix).unwrap();
        assert!(e.values[0] > -1e-12);
    }

    #[test]
    fn support_diagonals() {
        let dg = support_diagonal(&ghz_state(3).unwrap(), 0.75);
        assert_eq!(dg.entries, vec![-0.25, 0.75, 0.75, 0.75, 0.75, 0.75, 0.75, -0.25]);
        let two_thirds = 2.0 / 3.0;
        let dw = support_diagonal(&w_state(3).unwrap(), two_thirds);
        let cb = two_thirds - 1.0;
        assert_eq!(
            dw.entries,
            vec![two_thirds, cb, cb, two_thirds, cb, two_thirds, two_thirds, two_thirds]
        );
        let full = PureState::new(
            SystemShape::qubits(1).unwrap(),
            crate::tensor::ComplexVector(vec![c(0.6), c(0.8)]),
        )
        .unwrap();
        assert_eq!(support_diagonal(&full, 1.0).entries, vec![0.0, 0.0]);
    }

    #[test]
    fn operator_form_ghz() {
        for (m, cbar, cc) in [(3usize, -0.25, 0.75), (2, -0.25, 0.75)] {
            let w = operator_form_witness(StateKind::Ghz, m).unwrap();
            let d = 1 << m;
            for i in 0..d {
                for j in 0..d {
                    let corner = (i == 0 && j == d - 1) || (i == d - 1 && j == 0);
                    let expected = if corner {
                        1.0
                    } else if i == j {
                        if i == 0 || i == d - 1 { cbar } else { cc }
                    } else {
                        0.0
                    };
                    assert!((w.matrix.get(i, j) - c(expected)).norm() < 1e-15, "m={m} ({i},{j})");
                }
            }
            assert!(w.is_hermitian());
        }
        assert!(matches!(operator_form_witness(StateKind::W, 1), Err(WitnessError::BadArity(_))));
    }

    #[test]
    fn operator_form_w3_literal_and_hermitized() {
        let w = operator_form_witness(StateKind::W, 3).unwrap();
        assert!(!w.is_hermitian());
        // Upper entries of the three restricted W operators: pair (1,2) couples
        // (0,6),(1,7); (1,3) couples (0,5),(2,7); (2,3) couples (0,3),(4,7).
        let upper = [(0, 6), (1, 7), (0, 5), (2, 7), (0, 3), (4, 7)];
        let dw = support_diagonal(&w_state(3).unwrap(), 2.0 / 3.0);
        for i in 0..8 {
            for j in 0..8 {
                let expected = if i == j {
                    dw.entries[i]
                } else if upper.contains(&(i, j)) {
                    1.0
                } else {
                    0.0
                };
                assert!((w.matrix.get(i, j) - c(expected)).norm() < 1e-15, "({i},{j})");
            }
        }
        let h = w.hermitized().unwrap();
        assert_eq!(h.form, WitnessForm::HermitizedOperatorForm);
        assert!(h.is_hermitian());
        assert!((h.matrix.get(6, 0) - c(0.5)).norm() < 1e-15);
    }

    #[test]
    fn compare_ghz3_forms() {
        let canon = canonical_witness(&ghz_state(3).unwrap(), None).unwrap();
        let op = operator_form_witness(StateKind::Ghz, 3).unwrap();
        let rep = compare_witnesses(&canon, &op).unwrap();
        assert!((rep.max_abs_diff - 1.5).abs() < 1e-12);
        let pos: Vec<(usize, usize)> = rep.positions.iter().map(|p| (p.row, p.col)).collect();
        assert_eq!(pos, vec![(0, 0), (0, 7), (7, 0), (7, 7)]);
        let same = compare_witnesses(&canon, &canon).unwrap();
        assert_eq!(same.max_abs_diff, 0.0);
        assert!(same.positions.is_empty());
        let rev = compare_witnesses(&op, &canon).unwrap();
        assert_eq!(rev.max_abs_diff, rep.max_abs_diff);
    }

    #[test]
    fn compare_dimension_mismatch() {
        let a = canonical_witness(&ghz_state(3).unwrap(), None).unwrap();
        let b = canonical_witness(&ghz_state(2).unwrap(), None).unwrap();
        assert!(matches!(compare_witnesses(&a, &b), Err(WitnessError::DimensionMismatch { .. })));
    }
}
