//! C ABI for witnesskit.
//!
//! States and witnesses cross the boundary as opaque handles. Every function
//! returns a [`WkStatus`]; on failure [`wk_last_error_message`] describes the
//! error on the calling thread. Strings returned through `char **` outputs are
//! owned by the caller and released with [`wk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use witnesskit::concurrence::concurrence_squared;
use witnesskit::io::{parse_state, parse_witness, signed_operator_json, to_json_string, StateDoc, WitnessDoc};
use witnesskit::povm::{ghz_class_operator, w_class_operator};
use witnesskit::separability::{certify_witness, noise_threshold, SeesawConfig};
use witnesskit::states::{PureState, SystemShape};
use witnesskit::tensor::expectation_pure;
use witnesskit::witness::{canonical_witness, operator_form_witness, StateKind, Witness};
use witnesskit::WitnessError;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotHermitian = 3,
    DimensionMismatch = 4,
    NoConvergence = 5,
    NoDetection = 6,
    Format = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WkKind {
    Ghz = 0,
    W = 1,
}

impl From<WkKind> for StateKind {
    fn from(k: WkKind) -> Self {
        match k {
            WkKind::Ghz => StateKind::Ghz,
            WkKind::W => StateKind::W,
        }
    }
}

/// Opaque pure state.
pub struct WkState(PureState);

/// Opaque witness operator.
pub struct WkWitness(Witness);

/// Certification summary. `converged` is false when the see-saw budget ran out.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct WkCertification {
    pub min_product_expectation: f64,
    pub detection_value: f64,
    pub is_valid_witness: bool,
    pub detects_target: bool,
    pub converged: bool,
    pub sweeps_used: usize,
    pub restarts_agreeing: usize,
    pub restarts: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &WitnessError) -> WkStatus {
    match e {
        WitnessError::NotHermitian { .. } => WkStatus::NotHermitian,
        WitnessError::DimensionMismatch { .. } => WkStatus::DimensionMismatch,
        WitnessError::NoConvergence { .. } => WkStatus::NoConvergence,
        WitnessError::NoDetection { .. } => WkStatus::NoDetection,
        WitnessError::Format(_) => WkStatus::Format,
        _ => WkStatus::InvalidArgument,
    }
}

enum Failure {
    Null(&'static str),
    Lib(WitnessError),
    Arg(String),
}

impl From<WitnessError> for Failure {
    fn from(e: WitnessError) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> WkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            WkStatus::Ok
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            WkStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Arg(msg))) => {
            set_error(msg);
            WkStatus::InvalidArgument
        }
        Err(_) => {
            set_error("internal panic".into());
            WkStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure::Arg(format!("{what} is not valid UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::Arg("string contains NUL".into()))?;
    write_out(out, c.into_raw(), "out")
}

unsafe fn box_state(out: *mut *mut WkState, psi: PureState) -> Result<(), Failure> {
    write_out(out, Box::into_raw(Box::new(WkState(psi))), "out")
}

unsafe fn box_witness(out: *mut *mut WkWitness, w: Witness) -> Result<(), Failure> {
    write_out(out, Box::into_raw(Box::new(WkWitness(w))), "out")
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn wk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn wk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_state_ghz(qubits: usize, out: *mut *mut WkState) -> WkStatus {
    guard(|| box_state(out, StateKind::Ghz.state(qubits)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_state_w(qubits: usize, out: *mut *mut WkState) -> WkStatus {
    guard(|| box_state(out, StateKind::W.state(qubits)?))
}

/// Parses a state document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_state_from_json(json: *const c_char, out: *mut *mut WkState) -> WkStatus {
    guard(|| box_state(out, parse_state(read_str(json, "json")?)?))
}

/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_state_to_json(state: *const WkState, out: *mut *mut c_char) -> WkStatus {
    guard(|| {
        let s = deref(state, "state")?;
        write_string(out, to_json_string(&StateDoc::from_state(&s.0)))
    })
}

/// # Safety
/// `state` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wk_state_free(state: *mut WkState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Squared concurrence of a qubit state under the default normalization.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_concurrence_squared(state: *const WkState, out: *mut f64) -> WkStatus {
    guard(|| {
        let s = deref(state, "state")?;
        write_out(out, concurrence_squared(&s.0)?, "out")
    })
}

/// `gamma I - |psi><psi|`; `gamma` is ignored unless `has_gamma`, in which
/// case the squared concurrence is used.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_witness_canonical(
    state: *const WkState,
    has_gamma: bool,
    gamma: f64,
    out: *mut *mut WkWitness,
) -> WkStatus {
    guard(|| {
        let s = deref(state, "state")?;
        box_witness(out, canonical_witness(&s.0, has_gamma.then_some(gamma))?)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_witness_operator_form(kind: WkKind, qubits: usize, out: *mut *mut WkWitness) -> WkStatus {
    guard(|| box_witness(out, operator_form_witness(kind.into(), qubits)?))
}

/// `(W + W^dagger) / 2` as a new handle.
///
/// # Safety
/// `witness` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_witness_hermitize(witness: *const WkWitness, out: *mut *mut WkWitness) -> WkStatus {
    guard(|| {
        let w = deref(witness, "witness")?;
        box_witness(out, w.0.hermitized()?)
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_witness_from_json(json: *const c_char, out: *mut *mut WkWitness) -> WkStatus {
    guard(|| box_witness(out, parse_witness(read_str(json, "json")?)?))
}

/// # Safety
/// `witness` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_witness_to_json(witness: *const WkWitness, out: *mut *mut c_char) -> WkStatus {
    guard(|| {
        let w = deref(witness, "witness")?;
        write_string(out, to_json_string(&WitnessDoc::from_witness(&w.0)))
    })
}

/// # Safety
/// `witness` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wk_witness_free(witness: *mut WkWitness) {
    if !witness.is_null() {
        drop(Box::from_raw(witness));
    }
}

/// Real part of `<psi|W|psi>`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_witness_expectation(
    witness: *const WkWitness,
    state: *const WkState,
    out: *mut f64,
) -> WkStatus {
    guard(|| {
        let w = deref(witness, "witness")?;
        let s = deref(state, "state")?;
        if w.0.dims != s.0.shape().dims() {
            return Err(WitnessError::DimensionMismatch {
                expected: w.0.dim(),
                found: s.0.dim(),
            }
            .into());
        }
        write_out(out, expectation_pure(&w.0.matrix, s.0.amplitudes())?.re, "out")
    })
}

/// Runs the see-saw certification. The report is filled even when the
/// budget runs out; the status is then `NO_CONVERGENCE`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_certify(
    witness: *const WkWitness,
    target: *const WkState,
    restarts: usize,
    seed: u64,
    out: *mut WkCertification,
) -> WkStatus {
    guard(|| {
        let w = deref(witness, "witness")?;
        let t = deref(target, "target")?;
        let cfg = SeesawConfig {
            restarts,
            seed,
            ..SeesawConfig::default()
        };
        let r = certify_witness(&w.0, &t.0, &cfg)?;
        let report = WkCertification {
            min_product_expectation: r.min_product_expectation,
            detection_value: r.detection_value,
            is_valid_witness: r.is_valid_witness,
            detects_target: r.detects_target,
            converged: r.converged,
            sweeps_used: r.sweeps_used,
            restarts_agreeing: r.restarts_agreeing,
            restarts: r.restarts,
        };
        write_out(out, report, "out")?;
        if !r.converged {
            return Err(WitnessError::NoConvergence {
                iterations: r.sweeps_used,
            }
            .into());
        }
        Ok(())
    })
}

/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_noise_threshold(witness: *const WkWitness, target: *const WkState, out: *mut f64) -> WkStatus {
    guard(|| {
        let w = deref(witness, "witness")?;
        let t = deref(target, "target")?;
        write_out(out, noise_threshold(&w.0, &t.0)?, "out")
    })
}

/// Signed W- or GHZ-class operator on `qubits` qubits with the quarter-turn
/// phase at 1-based positions `r1 < r2`, as JSON with its sign signature.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_class_operator_json(
    kind: WkKind,
    qubits: usize,
    r1: usize,
    r2: usize,
    out: *mut *mut c_char,
) -> WkStatus {
    guard(|| {
        let shape = SystemShape::qubits(qubits)?;
        let op = match kind {
            WkKind::W => w_class_operator(&shape, r1, r2)?,
            WkKind::Ghz => ghz_class_operator(&shape, r1, r2)?,
        };
        write_string(out, to_json_string(&signed_operator_json(&op)))
    })
}
