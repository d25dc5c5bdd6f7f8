//! Quantumness witnesses: operator ordering, witness construction, and the
//! classical models they rule out.

pub mod bell;
pub mod classical;
pub mod collective;
pub mod error;
pub mod format;
pub mod operator;
pub mod optimal;
pub mod phase_space;
pub mod rng;
pub mod states;
pub mod witness;

pub use error::{QwitError, Result};
pub use operator::{CMatrix, EigenDecomposition, HermitianOperator, C64};
pub use states::DensityMatrix;
pub use witness::{WitnessKind, WitnessReport};
