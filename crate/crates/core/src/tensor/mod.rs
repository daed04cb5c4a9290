//! Dense complex linear algebra on joint multi-subsystem spaces.

mod contract;
mod eigen;
mod matrix;

pub use contract::contract_all_but_one;
pub use eigen::{hermitian_eig, HermitianEigen, HERMITIAN_TOL};
pub use matrix::{expectation_mixed, expectation_pure, kron, kron_all, ComplexMatrix, ComplexVector, C64};
pub(crate) use matrix::{ONE, ZERO};
