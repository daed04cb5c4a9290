//! Concurrence-based entanglement witnesses for multi-qubit pure states.
//!
//! The crate builds quantum-phase POVM operators and their complements,
//! evaluates pure-state concurrence, assembles witnesses in projector and
//! operator form, and certifies them numerically by a see-saw search over
//! product states.

pub mod cli;
pub mod concurrence;
pub mod error;
pub mod io;
pub mod povm;
pub mod separability;
pub mod states;
pub mod tensor;
pub mod witness;

pub use error::{Result, WitnessError};
