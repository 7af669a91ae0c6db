//! Exact diagonalization of small chains and zero-mode checks.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

use crate::classifier::{canonical_space, CanonicalForm};
use crate::hamiltonian::{
    conjugate_local, full_chain_with_limit, local_from_espace, CouplingMatrix, EBasis, FullHamiltonian,
    HamiltonianError, LocalHamiltonian, DEFAULT_MAX_SITES,
};
use crate::pauli::Sl2;
use crate::states::{transform_state, StateVector};
use crate::C64;

/// Eigenvalues at most `KERNEL_TOL · max(1, ‖H‖₂)` count as zero.
pub const KERNEL_TOL: f64 = 1e-9;
/// The first eigenvalue above the kernel must exceed the cut by this factor,
/// otherwise the count is flagged as ambiguous.
pub const GAP_FACTOR: f64 = 1e3;
/// Largest chain accepted by [`no_mps_case_report`].
pub const NO_MPS_MAX_SITES: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error("state has {got} sites but the Hamiltonian has {want}")]
    DimensionMismatch { want: usize, got: usize },
    #[error("zero state vector")]
    ZeroState,
    #[error("eigensolver produced non-finite eigenvalues")]
    EigenFailure,
    #[error("chain length {n} outside 2..={max}")]
    SitesOutOfRange { n: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub n_sites: usize,
    pub ground_energy: f64,
    pub kernel_dim: usize,
    pub lowest_k_eigenvalues: Vec<f64>,
    pub residuals: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl SpectrumReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }
}

/// All eigenvalues of a Hermitian matrix, ascending.
pub fn eigenvalues(m: &DMatrix<C64>) -> Result<Vec<f64>, VerifyError> {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    if ev.iter().any(|x| !x.is_finite()) {
        return Err(VerifyError::EigenFailure);
    }
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

pub fn spectrum(h: &FullHamiltonian, k: usize) -> Result<SpectrumReport, VerifyError> {
    spectrum_with_tol(h, k, KERNEL_TOL)
}

pub fn spectrum_with_tol(h: &FullHamiltonian, k: usize, kernel_tol: f64) -> Result<SpectrumReport, VerifyError> {
    let ev = eigenvalues(h.matrix())?;
    let norm = ev.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let cut = kernel_tol * norm.max(1.0);
    let kernel_dim = ev.iter().take_while(|&&x| x <= cut).count();
    let warning = ev.get(kernel_dim).and_then(|&next| {
        (next < GAP_FACTOR * cut).then(|| {
            format!("ambiguous kernel: eigenvalue {next:e} lies within a factor {GAP_FACTOR:e} of the cut {cut:e}")
        })
    });
    Ok(SpectrumReport {
        n_sites: h.n_sites(),
        ground_energy: ev[0],
        kernel_dim,
        lowest_k_eigenvalues: ev.iter().copied().take(k).collect(),
        residuals: BTreeMap::new(),
        warning,
    })
}

/// `‖Hψ‖ / (‖ψ‖ · max(1, ‖H‖_F))`.
pub fn check_zero_member(h: &FullHamiltonian, psi: &StateVector) -> Result<f64, VerifyError> {
    if psi.n_sites() != h.n_sites() {
        return Err(VerifyError::DimensionMismatch {
            want: h.n_sites(),
            got: psi.n_sites(),
        });
    }
    let norm = psi.norm();
    if norm == 0.0 {
        return Err(VerifyError::ZeroState);
    }
    let hpsi = h.matrix() * psi.amplitudes();
    Ok(hpsi.norm() / (norm * h.matrix().norm().max(1.0)))
}

/// Zero-mode residual of `(Γ⁻¹)^{⊗N} ψ` for the chain of `(Γ†⊗Γ†) h (Γ⊗Γ)`.
pub fn covariance_check(h: &LocalHamiltonian, psi: &StateVector, g: &Sl2, n: usize) -> Result<f64, VerifyError> {
    let conj = conjugate_local(h, g);
    let chain = full_chain_with_limit(&conj, n, DEFAULT_MAX_SITES)?;
    check_zero_member(&chain, &transform_state(psi, g))
}

/// Spectrum of the chain built on the canonical constraint space itself,
/// `Λ = identity`. Informational only.
pub fn no_mps_case_report(form: &CanonicalForm, n: usize) -> Result<SpectrumReport, VerifyError> {
    no_mps_case_report_with(form, None, n)
}

pub fn no_mps_case_report_with(
    form: &CanonicalForm,
    lambda: Option<CouplingMatrix>,
    n: usize,
) -> Result<SpectrumReport, VerifyError> {
    if !(2..=NO_MPS_MAX_SITES).contains(&n) {
        return Err(VerifyError::SitesOutOfRange {
            n,
            max: NO_MPS_MAX_SITES,
        });
    }
    let space = canonical_space(form);
    let e = EBasis::new(space.basis().to_vec())?;
    let lambda = lambda.unwrap_or_else(|| CouplingMatrix::identity(e.len()));
    let h = local_from_espace(&e, &lambda)?;
    let chain = full_chain_with_limit(&h, n, NO_MPS_MAX_SITES)?;
    spectrum(&chain, 8)
}
