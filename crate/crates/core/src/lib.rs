//! Decoherence-free stabilizer codes from Lindblad models.
//!
//! The crate builds stabilizer generators from the jump operators of a
//! Markovian master equation, checks the decoherence-free conditions both
//! algebraically and by integrating the dynamics, encodes operators in the
//! ζ and vectorization formalisms, and runs a Heisenberg-limit probing
//! protocol on the resulting codes.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod lindblad;
pub mod metrology;
pub mod model;
pub mod operator;
pub mod stabilizer;
pub mod tolerance;
pub mod vectorize;
pub mod zeta;

pub use error::{Error, Result};
pub use lindblad::{check_dfs, dissipator, evolve, DensityMatrix, JumpOperator, LindbladModel, Verdict};
pub use metrology::{run_protocol, HlReport};
pub use operator::{commutator, pauli_matrix, Ket, OperatorMatrix, Pauli, PauliFactor, PauliProduct, PauliSum, C64};
pub use stabilizer::{build_stabilizers, verify_theorem_7, CodeKind, CodeSpace, StabilizerSet};
pub use vectorize::{vectorize, verify_vec_theorem, VecVector};
pub use zeta::{verify_theorem_16, zeta, ZetaVector};
