//! JSON file formats.
//!
//! Complex numbers are `[re, im]` pairs; matrices are arrays of rows; vectors
//! and rows are row-major over the joint basis. Floats are written with 17
//! significant digits so identical inputs give byte-identical output.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use serde_json::{json, Value};

use crate::concurrence::ConcurrenceBreakdown;
use crate::error::{Result, WitnessError};
use crate::povm::SignedOperator;
use crate::separability::{CertificationReport, ProbeReport};
use crate::states::{DensityOperator, PureState, SystemShape};
use crate::tensor::{ComplexMatrix, ComplexVector, C64};
use crate::witness::{DiscrepancyReport, Witness};

/// Normalization and Hermiticity tolerance applied when loading files.
pub const LOAD_TOL: f64 = 1e-8;

pub type Pair = [f64; 2];

fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

fn unpair(p: &Pair) -> C64 {
    C64::new(p[0], p[1])
}

fn rows_of(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    (0..m.rows()).map(|i| m.row(i).iter().copied().map(pair).collect()).collect()
}

fn matrix_of(rows: &[Vec<Pair>]) -> Result<ComplexMatrix> {
    let rows = rows.iter().map(|r| r.iter().map(unpair).collect()).collect();
    ComplexMatrix::from_rows(rows)
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct StateDoc {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<Pair>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct DensityDoc {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<Pair>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct WitnessDoc {
    pub dims: Vec<usize>,
    pub gamma: f64,
    pub form: String,
    #[serde(default)]
    pub source: String,
    pub matrix: Vec<Vec<Pair>>,
}

impl StateDoc {
    pub fn from_state(psi: &PureState) -> Self {
        Self::from_vector(psi.shape().dims().to_vec(), psi.amplitudes())
    }

    pub fn from_vector(dims: Vec<usize>, v: &ComplexVector) -> Self {
        Self {
            dims,
            amplitudes: v.iter().copied().map(pair).collect(),
        }
    }

    pub fn to_state(&self) -> Result<PureState> {
        let shape = SystemShape::new(self.dims.clone())?;
        let amps = ComplexVector(self.amplitudes.iter().map(unpair).collect());
        PureState::with_tolerance(shape, amps, LOAD_TOL)
    }
}

impl DensityDoc {
    pub fn from_density(rho: &DensityOperator) -> Self {
        Self {
            dims: rho.shape().dims().to_vec(),
            matrix: rows_of(rho.matrix()),
        }
    }

    pub fn to_density(&self) -> Result<DensityOperator> {
        let shape = SystemShape::new(self.dims.clone())?;
        DensityOperator::with_tolerance(shape, matrix_of(&self.matrix)?, LOAD_TOL)
    }
}

impl WitnessDoc {
    pub fn from_witness(w: &Witness) -> Self {
        Self {
            dims: w.dims.clone(),
            gamma: w.gamma,
            form: w.form.as_str().to_string(),
            source: w.source.clone(),
            matrix: rows_of(&w.matrix),
        }
    }

    pub fn to_witness(&self) -> Result<Witness> {
        let shape = SystemShape::new(self.dims.clone())?;
        let matrix = matrix_of(&self.matrix)?;
        let d = shape.joint_dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(WitnessError::DimensionMismatch {
                expected: d,
                found: matrix.rows(),
            });
        }
        if !self.gamma.is_finite() {
            return Err(WitnessError::Format("gamma must be finite".into()));
        }
        Ok(Witness {
            dims: self.dims.clone(),
            matrix,
            gamma: self.gamma,
            source: self.source.clone(),
            form: self.form.parse()?,
        })
    }
}

/// Either input accepted by witness evaluation.
#[derive(Debug, Clone)]
pub enum StateOrDensity {
    Pure(PureState),
    Mixed(DensityOperator),
}

pub fn parse_state(text: &str) -> Result<PureState> {
    let doc: StateDoc = serde_json::from_str(text).map_err(format_err)?;
    doc.to_state()
}

pub fn parse_density(text: &str) -> Result<DensityOperator> {
    let doc: DensityDoc = serde_json::from_str(text).map_err(format_err)?;
    doc.to_density()
}

pub fn parse_witness(text: &str) -> Result<Witness> {
    let doc: WitnessDoc = serde_json::from_str(text).map_err(format_err)?;
    doc.to_witness()
}

pub fn parse_state_or_density(text: &str) -> Result<StateOrDensity> {
    let v: Value = serde_json::from_str(text).map_err(format_err)?;
    if v.get("amplitudes").is_some() {
        let doc: StateDoc = serde_json::from_value(v).map_err(format_err)?;
        Ok(StateOrDensity::Pure(doc.to_state()?))
    } else if v.get("matrix").is_some() {
        let doc: DensityDoc = serde_json::from_value(v).map_err(format_err)?;
        Ok(StateOrDensity::Mixed(doc.to_density()?))
    } else {
        Err(WitnessError::Format("expected \"amplitudes\" or \"matrix\"".into()))
    }
}

fn format_err(e: serde_json::Error) -> WitnessError {
    WitnessError::Format(e.to_string())
}

pub fn signed_operator_json(op: &SignedOperator) -> Value {
    let m = op.matrix();
    let mut signature = BTreeMap::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if m.get(i, j) != C64::new(0.0, 0.0) {
                let signs: Vec<&str> = op.signature(i, j).into_iter().map(|s| s.as_str()).collect();
                signature.insert(format!("{i},{j}"), signs);
            }
        }
    }
    json!({
        "dims": op.dims(),
        "matrix": rows_of(m),
        "signature": signature,
    })
}

pub fn breakdown_json(b: &ConcurrenceBreakdown, with_terms: bool) -> Value {
    let mut v = json!({
        "normalization": b.normalization,
        "total_squared": b.total_squared,
        "total": b.total,
    });
    if with_terms {
        v["w_terms"] = json!(b.w_terms);
        v["ghz_terms"] = json!(b.ghz_terms);
    }
    v
}

pub fn report_json(r: &CertificationReport, probe: Option<&ProbeReport>) -> Value {
    let argmin: Vec<StateDoc> = r
        .argmin
        .iter()
        .map(|v| StateDoc::from_vector(vec![v.dim()], v))
        .collect();
    let mut v = json!({
        "min_product_expectation": r.min_product_expectation,
        "argmin": argmin,
        "is_valid_witness": r.is_valid_witness,
        "detection_value": r.detection_value,
        "detects_target": r.detects_target,
        "sweeps_used": r.sweeps_used,
        "restarts_agreeing": r.restarts_agreeing,
        "restarts": r.restarts,
        "converged": r.converged,
    });
    if let Some(p) = probe {
        v["positivity_probe"] = json!({
            "min_pure": p.min_pure,
            "min_mixture": p.min_mixture,
            "worst": p.worst(),
            "pure_samples": p.pure_samples,
            "mixture_samples": p.mixture_samples,
        });
    }
    v
}

pub fn discrepancy_json(r: &DiscrepancyReport) -> Value {
    let positions: Vec<Value> = r
        .positions
        .iter()
        .map(|p| json!({"row": p.row, "col": p.col, "a": pair(p.a), "b": pair(p.b)}))
        .collect();
    json!({
        "max_abs_diff": r.max_abs_diff,
        "positions": positions,
        "a_hermitian": r.a_hermitian,
        "b_hermitian": r.b_hermitian,
    })
}

/// Compact JSON with floats in `{:.16e}` notation.
struct FixedPrecision;

impl Formatter for FixedPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedPrecision);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization does not fail");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}
