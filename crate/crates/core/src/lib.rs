//! Matrix product ground states of nearest-neighbour chains with two states
//! per site.
//!
//! The pipeline runs from a constraint space `V ⊂ C²⊗C²` (the tensors `C`
//! with `C_{αβ}A^αA^β = 0`) through its SL₂(C) normal form
//! ([`classifier`]), to a positive semi-definite two-site Hamiltonian whose
//! open-chain sum annihilates the matrix product state ([`hamiltonian`],
//! [`states`]), and finally to exact diagonalization of small chains
//! ([`verifier`]).

pub mod classifier;
pub mod hamiltonian;
pub mod io;
pub mod pauli;
pub mod sampling;
pub mod states;
pub mod verifier;

pub use num_complex::Complex64 as C64;

pub use classifier::{classify, CanonicalForm, CaseId, ClassificationResult};
pub use hamiltonian::{FamilyId, FamilyParams, FullHamiltonian, LocalHamiltonian};
pub use pauli::{CSpace, PauliQuartet, Sl2};
pub use states::{BasisString, MpsSpec, StateVector};
pub use verifier::SpectrumReport;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Pauli(#[from] pauli::PauliError),
    #[error(transparent)]
    Classify(#[from] classifier::ClassifyError),
    #[error(transparent)]
    Hamiltonian(#[from] hamiltonian::HamiltonianError),
    #[error(transparent)]
    State(#[from] states::StateError),
    #[error(transparent)]
    Verify(#[from] verifier::VerifyError),
}
