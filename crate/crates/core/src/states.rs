//! Catalogued ground states and matrix product state contraction.
//!
//! Dense vectors use the chain ordering of [`crate::hamiltonian`]: site 1 is
//! the most significant bit of the basis index.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::classifier::{CanonicalForm, CaseId};
use crate::hamiltonian::FamilyParams;
use crate::pauli::{CSpace, Sl2};
use crate::C64;

/// Largest chain for which dense states are built.
pub const DEFAULT_MAX_STATE_SITES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("chain length {n} outside 1..={max}")]
    SitesOutOfRange { n: usize, max: usize },
    #[error("ratio must be nonzero and finite")]
    BadRatio,
    #[error("ratio {ratio} is not a root of unity of order <= {max_order}")]
    NotRootOfUnity { ratio: C64, max_order: usize },
    #[error("{0}")]
    Precondition(String),
    #[error("A0 and A1 must be square matrices of equal size, got {0}x{1} and {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("case {0} has no constructive representation here")]
    NoRepresentation(String),
    #[error("state has {got} amplitudes, expected {want}")]
    LengthMismatch { want: usize, got: usize },
    #[error("invalid basis string {0:?}")]
    BadString(String),
}

fn check_sites(n: usize, max: usize) -> Result<(), StateError> {
    if n == 0 || n > max {
        Err(StateError::SitesOutOfRange { n, max })
    } else {
        Ok(())
    }
}

/// A string `α₁…α_N` of zeros and ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisString {
    alphas: Vec<u8>,
}

impl BasisString {
    pub fn new(alphas: Vec<u8>) -> Result<Self, StateError> {
        if alphas.is_empty() || alphas.iter().any(|&a| a > 1) {
            return Err(StateError::BadString(format!("{alphas:?}")));
        }
        Ok(Self { alphas })
    }

    /// Basis index `x` of an `n`-site chain.
    pub fn from_index(x: usize, n: usize) -> Self {
        Self {
            alphas: (0..n).map(|i| ((x >> (n - 1 - i)) & 1) as u8).collect(),
        }
    }

    pub fn index(&self) -> usize {
        self.alphas.iter().fold(0, |acc, &a| (acc << 1) | a as usize)
    }

    pub fn alphas(&self) -> &[u8] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn zeros(&self) -> usize {
        self.alphas.iter().filter(|&&a| a == 0).count()
    }
}

impl std::str::FromStr for BasisString {
    type Err = StateError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let alphas = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(StateError::BadString(s.to_string())),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Self::new(alphas)
    }
}

impl fmt::Display for BasisString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.alphas {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Dense amplitudes on `2^N` basis strings.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_sites: usize,
    amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn new(n_sites: usize, amplitudes: DVector<C64>) -> Result<Self, StateError> {
        if amplitudes.len() != 1usize << n_sites {
            return Err(StateError::LengthMismatch {
                want: 1 << n_sites,
                got: amplitudes.len(),
            });
        }
        if !amplitudes.iter().all(|z| z.is_finite()) {
            return Err(StateError::Precondition("non-finite amplitude".into()));
        }
        Ok(Self { n_sites, amplitudes })
    }

    fn zeros(n_sites: usize) -> Self {
        Self {
            n_sites,
            amplitudes: DVector::zeros(1 << n_sites),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, s: &BasisString) -> C64 {
        self.amplitudes[s.index()]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= 1e-12
    }

    /// `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| Self {
            n_sites: self.n_sites,
            amplitudes: &self.amplitudes / C64::new(n, 0.0),
        })
    }
}

/// `e_symbol^{⊗N}`.
pub fn product_state(symbol: u8, n: usize) -> Result<StateVector, StateError> {
    check_sites(n, DEFAULT_MAX_STATE_SITES)?;
    if symbol > 1 {
        return Err(StateError::Precondition(format!("symbol must be 0 or 1, got {symbol}")));
    }
    let mut s = StateVector::zeros(n);
    let idx = if symbol == 0 { 0 } else { (1 << n) - 1 };
    s.amplitudes[idx] = C64::new(1.0, 0.0);
    Ok(s)
}

/// `ratio^{Σ_ℓ (i_ℓ − ℓ)}` with `i_ℓ` the 1-based position of the ℓ-th zero.
pub fn zeta_weight(s: &BasisString, ratio: C64) -> C64 {
    ratio.powu(zeta_exponent(s.alphas()) as u32)
}

fn zeta_exponent(alphas: &[u8]) -> usize {
    alphas
        .iter()
        .enumerate()
        .filter(|(_, &a)| a == 0)
        .enumerate()
        .map(|(ell, (pos, _))| pos - ell)
        .sum()
}

fn zeros_of_index(x: usize) -> impl Fn(usize) -> Vec<u8> {
    move |n| (0..n).map(|i| ((x >> (n - 1 - i)) & 1) as u8).collect()
}

/// Sum over strings whose zero count satisfies `weight`, with amplitude
/// `weight(zeros) · ratio^{exponent}`.
fn weighted_sum(n: usize, ratio: C64, weight: impl Fn(usize) -> Option<C64>) -> StateVector {
    let mut s = StateVector::zeros(n);
    for x in 0..1usize << n {
        let alphas = zeros_of_index(x)(n);
        let z = alphas.iter().filter(|&&a| a == 0).count();
        if let Some(w) = weight(z) {
            s.amplitudes[x] = w * ratio.powu(zeta_exponent(&alphas) as u32);
        }
    }
    s
}

/// Smallest `M ≤ max_order` with `ratio^M = 1` (to `1e-12`).
pub fn root_of_unity_order(ratio: C64, max_order: usize) -> Option<usize> {
    let mut p = C64::new(1.0, 0.0);
    for m in 1..=max_order {
        p *= ratio;
        if (p - C64::new(1.0, 0.0)).norm() <= 1e-12 {
            return Some(m);
        }
    }
    None
}

/// `ψ_k`: strings with exactly `kM` zeros, weighted by [`zeta_weight`].
pub fn psi_k(n: usize, m: usize, k: usize, ratio: C64) -> Result<StateVector, StateError> {
    check_sites(n, DEFAULT_MAX_STATE_SITES)?;
    if !ratio.is_finite() || ratio.norm() == 0.0 {
        return Err(StateError::BadRatio);
    }
    if m == 0 || root_of_unity_order(ratio, m) != Some(m) {
        return Err(StateError::Precondition(format!(
            "M = {m} is not the order of ratio {ratio}"
        )));
    }
    if !n.is_multiple_of(m) {
        return Err(StateError::Precondition(format!(
            "N = {n} is not a multiple of M = {m}"
        )));
    }
    if k * m > n {
        return Err(StateError::Precondition(format!("kM = {} exceeds N = {n}", k * m)));
    }
    let target = k * m;
    Ok(weighted_sum(n, ratio, |z| (z == target).then_some(C64::new(1.0, 0.0))))
}

/// Strings with no two adjacent zeros, in lexicographic order.
pub fn hardcore_states(n: usize) -> Result<Vec<BasisString>, StateError> {
    check_sites(n, DEFAULT_MAX_STATE_SITES)?;
    Ok((0..1usize << n)
        .map(|x| BasisString::from_index(x, n))
        .filter(|s| !s.alphas.windows(2).any(|w| w == [0, 0]))
        .collect())
}

/// A basis string as a unit vector.
pub fn basis_state(s: &BasisString) -> Result<StateVector, StateError> {
    check_sites(s.len(), DEFAULT_MAX_STATE_SITES)?;
    let mut v = StateVector::zeros(s.len());
    v.amplitudes[s.index()] = C64::new(1.0, 0.0);
    Ok(v)
}

/// `ψ′ = Σ_k (−1)^k Σ_{2k zeros} ζ`.
pub fn psi_prime(n: usize, ratio: C64) -> Result<StateVector, StateError> {
    check_sites(n, DEFAULT_MAX_STATE_SITES)?;
    if n % 2 == 1 {
        return Err(StateError::Precondition(format!("N = {n} must be even")));
    }
    if !ratio.is_finite() || ratio.norm() == 0.0 {
        return Err(StateError::BadRatio);
    }
    Ok(weighted_sum(n, ratio, |z| {
        (z % 2 == 0).then(|| C64::new(if (z / 2) % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Odd,
    Even,
}

/// Summation range used for the odd parity sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityBounds {
    /// Odd sum over `2k+1` zeros starting at `k = 1` (single-zero strings
    /// excluded), as printed.
    Literal,
    /// Odd sum starting at `k = 0`.
    KernelComplete,
}

/// `ψ′_o` / `ψ′_e`: amplitude `(−1)^k` on strings with `2k+1` / `2k`
/// zeros, no `ζ` factor. The even sum is the same under both bounds.
pub fn psi_parity(n: usize, parity: Parity, bounds: ParityBounds) -> Result<StateVector, StateError> {
    check_sites(n, DEFAULT_MAX_STATE_SITES)?;
    let k_min = match (parity, bounds) {
        (Parity::Odd, ParityBounds::Literal) => 1,
        _ => 0,
    };
    let one = C64::new(1.0, 0.0);
    Ok(weighted_sum(n, one, |z| {
        let (matches, k) = match parity {
            Parity::Even => (z % 2 == 0, z / 2),
            Parity::Odd => (z % 2 == 1, z / 2),
        };
        (matches && k >= k_min).then(|| C64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
    }))
}

/// Site matrices `A⁰`, `A¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct MpsSpec {
    a0: DMatrix<C64>,
    a1: DMatrix<C64>,
}

impl MpsSpec {
    pub fn new(a0: DMatrix<C64>, a1: DMatrix<C64>) -> Result<Self, StateError> {
        if !a0.is_square() || a0.shape() != a1.shape() || a0.nrows() == 0 {
            return Err(StateError::ShapeMismatch(
                a0.nrows(),
                a0.ncols(),
                a1.nrows(),
                a1.ncols(),
            ));
        }
        if !a0.iter().chain(a1.iter()).all(|z| z.is_finite()) {
            return Err(StateError::Precondition("non-finite matrix entry".into()));
        }
        Ok(Self { a0, a1 })
    }

    pub fn bond_dim(&self) -> usize {
        self.a0.nrows()
    }

    pub fn a(&self, alpha: u8) -> &DMatrix<C64> {
        if alpha == 0 {
            &self.a0
        } else {
            &self.a1
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MpsContraction {
    /// Amplitudes `tr(A^{α₁}⋯A^{α_N})`.
    pub raw: StateVector,
    /// `tr(𝒜^N)`.
    pub z: f64,
    /// True when `Z` is below tolerance and no normalized state exists.
    pub vanishing: bool,
}

impl MpsContraction {
    pub fn normalized(&self) -> Option<StateVector> {
        if self.vanishing {
            None
        } else {
            Some(StateVector {
                n_sites: self.raw.n_sites,
                amplitudes: &self.raw.amplitudes / C64::new(self.z.sqrt(), 0.0),
            })
        }
    }
}

/// Relative threshold on `Z` below which the state counts as vanishing.
const VANISHING_TOL: f64 = 1e-24;

pub fn mps_contract(spec: &MpsSpec, n: usize) -> Result<MpsContraction, StateError> {
    check_sites(n, DEFAULT_MAX_STATE_SITES)?;
    let d = spec.bond_dim();
    let mut amps = DVector::<C64>::zeros(1 << n);
    // depth-first over prefixes, keeping partial products on a stack
    let mut stack: Vec<DMatrix<C64>> = Vec::with_capacity(n + 1);
    stack.push(DMatrix::identity(d, d));
    fill(spec, n, 0, 0, &mut stack, &mut amps);
    let z = transfer_trace(spec, n);
    let scale = spec
        .a0
        .norm_squared()
        .max(spec.a1.norm_squared())
        .powi(n as i32)
        .max(f64::MIN_POSITIVE);
    let vanishing = z <= VANISHING_TOL * scale;
    Ok(MpsContraction {
        raw: StateVector {
            n_sites: n,
            amplitudes: amps,
        },
        z,
        vanishing,
    })
}

fn fill(spec: &MpsSpec, n: usize, depth: usize, prefix: usize, stack: &mut Vec<DMatrix<C64>>, amps: &mut DVector<C64>) {
    if depth == n {
        amps[prefix] = stack.last().expect("nonempty").trace();
        return;
    }
    for alpha in 0..2u8 {
        let next = stack.last().expect("nonempty") * spec.a(alpha);
        stack.push(next);
        fill(spec, n, depth + 1, (prefix << 1) | alpha as usize, stack, amps);
        stack.pop();
    }
}

/// `𝒜 = conj(A⁰) ⊗ A⁰ + conj(A¹) ⊗ A¹`.
pub fn transfer_matrix(spec: &MpsSpec) -> DMatrix<C64> {
    spec.a0.conjugate().kronecker(&spec.a0) + spec.a1.conjugate().kronecker(&spec.a1)
}

/// `Z = tr(𝒜^N)`.
pub fn transfer_trace(spec: &MpsSpec, n: usize) -> f64 {
    let t = transfer_matrix(spec);
    let mut p = DMatrix::<C64>::identity(t.nrows(), t.ncols());
    for _ in 0..n {
        p = &p * &t;
    }
    p.trace().re
}

/// `max_C ‖C_{αβ} A^α A^β‖_F / max(1, ‖A⁰‖_F ‖A¹‖_F)` over the basis of `V`.
pub fn constraint_residual(v: &CSpace, spec: &MpsSpec) -> f64 {
    let scale = (spec.a0.norm() * spec.a1.norm()).max(1.0);
    v.basis()
        .iter()
        .map(|c| {
            let m = c.to_matrix();
            let mut acc = DMatrix::<C64>::zeros(spec.bond_dim(), spec.bond_dim());
            for a in 0..2u8 {
                for b in 0..2u8 {
                    acc += spec.a(a) * spec.a(b) * m[(a as usize, b as usize)];
                }
            }
            acc.norm() / scale
        })
        .fold(0.0, f64::max)
}

fn dm(n: usize, entries: &[C64]) -> DMatrix<C64> {
    DMatrix::from_row_slice(n, n, entries)
}

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn nilpotent() -> DMatrix<C64> {
    dm(2, &[r(0.0), r(1.0), r(0.0), r(0.0)])
}

/// `(U, V)` with `U = diag(q^j)`, `V e_j = e_{j−1}`, so `VU = qUV`.
pub fn clock_shift(q: C64, m: usize) -> (DMatrix<C64>, DMatrix<C64>) {
    let u = DMatrix::from_fn(m, m, |i, j| if i == j { q.powu(i as u32) } else { r(0.0) });
    let v = DMatrix::from_fn(m, m, |i, j| if (i + 1) % m == j { r(1.0) } else { r(0.0) });
    (u, v)
}

/// Largest clock-shift dimension tried before giving up on a ratio.
pub const MAX_CLOCK_ORDER: usize = 64;

/// `A⁰`, `A¹` with `ν′ A⁰A¹ = ν A¹A⁰` for a root-of-unity ratio `ν′/ν`.
fn q_commuting(nu: C64, nu_prime: C64) -> Result<MpsSpec, StateError> {
    if nu.norm() == 0.0 {
        return Err(StateError::NoRepresentation(
            "nu = 0 forces A0 A1 = 0 with no clock-shift pair".into(),
        ));
    }
    let q = nu_prime / nu;
    let m = root_of_unity_order(q, MAX_CLOCK_ORDER).ok_or(StateError::NotRootOfUnity {
        ratio: q,
        max_order: MAX_CLOCK_ORDER,
    })?;
    let (u, v) = clock_shift(q, m);
    MpsSpec::new(u, v)
}

/// A fixed constructive pair satisfying every constraint of the normal form.
/// `dim` sets the size of the diagonal families (C48, C49); it is ignored
/// elsewhere.
pub fn representation_for_case(form: &CanonicalForm, dim: Option<usize>) -> Result<MpsSpec, StateError> {
    let z = r(0.0);
    let one = r(1.0);
    let d = dim.unwrap_or(2).max(1);
    let mu = form.mu().unwrap_or_default();
    let e12_e33 = || {
        let mut a0 = DMatrix::zeros(3, 3);
        a0[(0, 1)] = one;
        let mut a1 = DMatrix::zeros(3, 3);
        a1[(2, 2)] = one;
        MpsSpec::new(a0, a1)
    };
    match form.case() {
        CaseId::C48 | CaseId::C49 => MpsSpec::new(
            DMatrix::from_fn(d, d, |i, j| if i == j { r(i as f64 + 1.0) } else { z }),
            DMatrix::from_fn(d, d, |i, j| if i == j { r((2 * d - 1 - 2 * i) as f64) } else { z }),
        ),
        // τ2 + μσ: (1+μ) A⁰A¹ + (1−μ) A¹A⁰ = 0
        CaseId::C50 => q_commuting(mu - one, mu + one),
        CaseId::C51 => MpsSpec::new(dm(2, &[one, z, z, z]), dm(2, &[z, z, z, one])),
        CaseId::C52 => MpsSpec::new(nilpotent(), dm(2, &[one, z, one, one])),
        CaseId::C53 | CaseId::C54 => MpsSpec::new(nilpotent(), dm(2, &[one, one, z, one])),
        CaseId::C55 if mu.norm() == 0.0 => MpsSpec::new(dm(2, &[one, z, z, -one]), dm(2, &[z, C64::i(), C64::i(), z])),
        CaseId::C57 => MpsSpec::new(nilpotent(), dm(2, &[one + mu, z, z, mu - one])),
        CaseId::C58 | CaseId::C59 => e12_e33(),
        other => Err(StateError::NoRepresentation(form_label(other, form))),
    }
}

fn form_label(case: CaseId, form: &CanonicalForm) -> String {
    if case.forbids_mps() {
        format!("{form}: every trace vanishes")
    } else {
        format!("{form}")
    }
}

/// A pair satisfying the family's own constraints.
pub fn representation_for_family(p: &FamilyParams) -> Result<MpsSpec, StateError> {
    let z = r(0.0);
    let one = r(1.0);
    match *p {
        FamilyParams::F105 { nu, nu_prime, .. } => q_commuting(nu, nu_prime),
        FamilyParams::F107 { .. } => representation_for_case(&CanonicalForm::plain(CaseId::C52), None),
        FamilyParams::F108 { .. } => representation_for_case(&CanonicalForm::plain(CaseId::C53), None),
        FamilyParams::F109 { .. } => representation_for_case(&CanonicalForm::plain(CaseId::C51), None),
        FamilyParams::F111 { .. } => representation_for_case(&CanonicalForm::plain(CaseId::C54), None),
        FamilyParams::F112 { nu, nu_prime, .. } => {
            let scale = nu.norm().max(nu_prime.norm());
            if (nu + nu_prime).norm() <= 1e-12 * scale {
                // (A⁰)² + (A¹)² = 0, anticommuting
                MpsSpec::new(dm(2, &[one, z, z, -one]), dm(2, &[z, C64::i(), C64::i(), z]))
            } else if (nu - nu_prime).norm() <= 1e-12 * scale {
                // (A⁰)² + (A¹)² = 0, commuting
                let (a, b) = (one, r(2.0));
                MpsSpec::new(dm(2, &[a, z, z, b]), dm(2, &[C64::i() * a, z, z, -C64::i() * b]))
            } else {
                Err(StateError::NoRepresentation("F112 needs nu' = nu or nu' = -nu".into()))
            }
        }
        FamilyParams::F116 { nu, nu_prime, .. } => MpsSpec::new(nilpotent(), dm(2, &[nu_prime, z, z, nu])),
        FamilyParams::F117 { .. } | FamilyParams::F59 { .. } => {
            representation_for_case(&CanonicalForm::plain(CaseId::C58), None)
        }
    }
}

/// `(Γ⁻¹)^{⊗N} ψ`.
pub fn transform_state(psi: &StateVector, g: &Sl2) -> StateVector {
    let inv = g.inverse();
    let m = inv.matrix();
    let n = psi.n_sites;
    let mut amps = psi.amplitudes.clone();
    for site in 0..n {
        let bit = 1usize << (n - 1 - site);
        for x in 0..amps.len() {
            if x & bit == 0 {
                let (a, b) = (amps[x], amps[x | bit]);
                amps[x] = m[(0, 0)] * a + m[(0, 1)] * b;
                amps[x | bit] = m[(1, 0)] * a + m[(1, 1)] * b;
            }
        }
    }
    StateVector {
        n_sites: n,
        amplitudes: amps,
    }
}

/// A labelled state claimed to lie in the kernel of a family's chain.
#[derive(Debug, Clone)]
pub struct CataloguedState {
    pub label: String,
    pub state: StateVector,
}

fn entry(label: impl Into<String>, state: StateVector) -> CataloguedState {
    CataloguedState {
        label: label.into(),
        state,
    }
}

/// Every catalogued ground state of the family on `n` sites.
pub fn catalogue(p: &FamilyParams, n: usize) -> Result<Vec<CataloguedState>, StateError> {
    check_sites(n, DEFAULT_MAX_STATE_SITES)?;
    let psi0 = || product_state(0, n).map(|s| entry("psi0", s));
    let psi1 = || product_state(1, n).map(|s| entry("psi1", s));
    let mut out = Vec::new();
    match *p {
        FamilyParams::F105 { nu, nu_prime, .. } => {
            out.push(psi0()?);
            out.push(psi1()?);
            if nu.norm() > 0.0 {
                let ratio = nu_prime / nu;
                if let Some(m) = root_of_unity_order(ratio, MAX_CLOCK_ORDER) {
                    if n.is_multiple_of(m) && m > 1 {
                        for k in 1..n / m {
                            out.push(entry(format!("psi_k(M={m},k={k})"), psi_k(n, m, k, ratio)?));
                        }
                    }
                }
            }
        }
        FamilyParams::F107 { .. } => {
            for s in hardcore_states(n)? {
                out.push(entry(format!("hardcore:{s}"), basis_state(&s)?));
            }
        }
        FamilyParams::F108 { .. }
        | FamilyParams::F111 { .. }
        | FamilyParams::F116 { .. }
        | FamilyParams::F117 { .. }
        | FamilyParams::F59 { .. } => out.push(psi1()?),
        FamilyParams::F109 { .. } => {
            out.push(psi0()?);
            out.push(psi1()?);
        }
        FamilyParams::F112 { nu, nu_prime, .. } => {
            out.push(psi0()?);
            out.push(psi1()?);
            let scale = nu.norm().max(nu_prime.norm());
            if (nu + nu_prime).norm() <= 1e-12 * scale {
                if n.is_multiple_of(2) {
                    out.push(entry("psi_prime", psi_prime(n, r(-1.0))?));
                }
            } else if (nu - nu_prime).norm() <= 1e-12 * scale {
                out.push(entry("psi_prime_o", psi_parity(n, Parity::Odd, ParityBounds::Literal)?));
                out.push(entry(
                    "psi_prime_e",
                    psi_parity(n, Parity::Even, ParityBounds::Literal)?,
                ));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> BasisString {
        text.parse().unwrap()
    }

    #[test]
    fn products() {
        let p = product_state(0, 2).unwrap();
        assert_eq!(p.amplitude(&s("00")), r(1.0));
        let p = product_state(1, 3).unwrap();
        assert_eq!(p.amplitude(&s("111")), r(1.0));
        assert!(p.is_normalized());
    }

    #[test]
    fn zeta_examples() {
        let q = C64::new(0.3, 0.7);
        assert_eq!(zeta_weight(&s("0011"), q), r(1.0));
        assert!((zeta_weight(&s("0101"), q) - q).norm() < 1e-15);
        assert!((zeta_weight(&s("1100"), q) - q.powu(4)).norm() < 1e-15);
    }

    #[test]
    fn psi_k_examples() {
        let v = psi_k(2, 2, 1, r(-1.0)).unwrap();
        assert_eq!(v.amplitude(&s("00")), r(1.0));
        assert_eq!(v.norm(), 1.0);
        let v = psi_k(4, 2, 1, r(-1.0)).unwrap();
        for (t, a) in [
            ("0011", 1.0),
            ("0101", -1.0),
            ("0110", 1.0),
            ("1001", 1.0),
            ("1010", -1.0),
            ("1100", 1.0),
        ] {
            assert_eq!(v.amplitude(&s(t)), r(a), "{t}");
        }
        assert_eq!(psi_k(4, 2, 0, r(-1.0)).unwrap(), product_state(1, 4).unwrap());
        assert!(psi_k(3, 2, 1, r(-1.0)).is_err());
        assert!(psi_k(4, 3, 1, r(-1.0)).is_err());
    }

    #[test]
    fn hardcore_examples() {
        let h: Vec<String> = hardcore_states(2).unwrap().iter().map(|b| b.to_string()).collect();
        assert_eq!(h, ["01", "10", "11"]);
        assert_eq!(hardcore_states(4).unwrap().len(), 8);
        assert_eq!(hardcore_states(1).unwrap().len(), 2);
    }

    #[test]
    fn psi_prime_examples() {
        let v = psi_prime(2, r(-1.0)).unwrap();
        assert_eq!(v.amplitude(&s("11")), r(1.0));
        assert_eq!(v.amplitude(&s("00")), r(-1.0));
        assert_eq!(v.amplitude(&s("01")), r(0.0));
        assert!(psi_prime(3, r(-1.0)).is_err());
    }

    #[test]
    fn parity_examples() {
        let e = psi_parity(2, Parity::Even, ParityBounds::Literal).unwrap();
        assert_eq!(e.amplitude(&s("11")), r(1.0));
        assert_eq!(e.amplitude(&s("00")), r(-1.0));
        assert_eq!(psi_parity(2, Parity::Odd, ParityBounds::Literal).unwrap().norm(), 0.0);
        let o = psi_parity(3, Parity::Odd, ParityBounds::Literal).unwrap();
        assert_eq!(o.amplitude(&s("000")), r(-1.0));
        assert_eq!(o.amplitude(&s("011")), r(0.0));
        let o = psi_parity(3, Parity::Odd, ParityBounds::KernelComplete).unwrap();
        assert_eq!(o.amplitude(&s("011")), r(1.0));
    }

    #[test]
    fn contraction_examples() {
        let one = DMatrix::from_element(1, 1, r(1.0));
        let c = mps_contract(&MpsSpec::new(one.clone(), one).unwrap(), 3).unwrap();
        assert!(c.raw.amplitudes().iter().all(|&a| a == r(1.0)));
        assert!((c.z - 8.0).abs() < 1e-12);

        let spec = MpsSpec::new(
            dm(2, &[r(1.0), r(0.0), r(0.0), r(-1.0)]),
            dm(2, &[r(0.0), C64::i(), C64::i(), r(0.0)]),
        )
        .unwrap();
        let c = mps_contract(&spec, 2).unwrap();
        assert_eq!(c.raw.amplitude(&s("00")), r(2.0));
        assert_eq!(c.raw.amplitude(&s("11")), r(-2.0));
        assert_eq!(c.raw.amplitude(&s("01")), r(0.0));
        assert!((c.z - 8.0).abs() < 1e-12);

        let c = mps_contract(&MpsSpec::new(nilpotent(), DMatrix::zeros(2, 2)).unwrap(), 3).unwrap();
        assert!(c.vanishing);
        assert!(c.normalized().is_none());
    }

    #[test]
    fn transfer_examples() {
        let one = DMatrix::from_element(1, 1, r(1.0));
        let spec = MpsSpec::new(one.clone(), one).unwrap();
        assert_eq!(transfer_matrix(&spec)[(0, 0)], r(2.0));
        assert!((transfer_trace(&spec, 5) - 32.0).abs() < 1e-12);
    }

    #[test]
    fn residual_examples() {
        let v = CSpace::new(vec![crate::PauliQuartet::TAU0 + crate::PauliQuartet::TAU1]).unwrap();
        let spec = MpsSpec::new(nilpotent(), DMatrix::identity(2, 2)).unwrap();
        assert!(constraint_residual(&v, &spec) < 1e-15);
        let zero = MpsSpec::new(DMatrix::zeros(2, 2), DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(constraint_residual(&v, &zero), 0.0);
    }

    #[test]
    fn clock_shift_commutation() {
        for m in 2..=5 {
            let q = C64::from_polar(1.0, std::f64::consts::TAU / m as f64);
            let (u, v) = clock_shift(q, m);
            assert!((&v * &u - &u * &v * q).norm() < 1e-13);
        }
    }

    #[test]
    fn transform_single_site() {
        let g = Sl2::new(nalgebra::Matrix2::new(r(2.0), r(1.0), r(1.0), r(1.0))).unwrap();
        let psi = StateVector::new(1, DVector::from_vec(vec![r(1.0), r(3.0)])).unwrap();
        let out = transform_state(&psi, &g);
        // Γ⁻¹ = [[1,−1],[−1,2]]
        assert_eq!(out.amplitudes()[0], r(-2.0));
        assert_eq!(out.amplitudes()[1], r(5.0));
        assert_eq!(transform_state(&psi, &Sl2::identity()), psi);
    }
}
