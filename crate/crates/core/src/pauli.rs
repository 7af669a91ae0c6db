//! Rank-2 tensors on C²⊗C² in the basis {τ0, τ1, τ2, σ}.
//!
//! A two-site constraint `C_{αβ} A^α A^β = 0` is a 2×2 matrix `C`. Writing
//! `C = v⁰τ0 + v¹τ1 + v²τ2 + uσ` splits it into a symmetric part `v` and an
//! antisymmetric part `u`. An invertible `Γ` acts as `C ↦ Γᵀ C Γ`; on the
//! symmetric part this is a complex Lorentz transformation preserving
//! `v·w = −v⁰w⁰ + v¹w¹ + v²w²`, and `u` is left alone when `det Γ = 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::C64;

/// Default relative tolerance for rank decisions on coefficient matrices.
pub const RANK_TOL: f64 = 1e-10;

/// Allowed deviation of `det Γ` from one.
pub const DET_TOL: f64 = 1e-12;

pub type Mat2 = Matrix2<C64>;

const ZERO: C64 = Complex64::new(0.0, 0.0);
const ONE: C64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PauliError {
    #[error("non-finite value in input")]
    NonFinite,
    #[error("matrix is not unimodular: |det - 1| = {0:e}")]
    NotUnimodular(f64),
    #[error("matrix is singular")]
    Singular,
    #[error("basis is linearly dependent (rank {rank} < {len})")]
    DependentBasis { rank: usize, len: usize },
    #[error("basis rank is ambiguous at tolerance {tol:e} (rank {at_tol} vs {at_loose} at 10x)")]
    AmbiguousRank { tol: f64, at_tol: usize, at_loose: usize },
    #[error("a subspace of C2 (x) C2 has at most 4 basis vectors, got {0}")]
    TooManyVectors(usize),
}

/// Symmetric (`Π⁺`) or antisymmetric (`Π⁻`) projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

/// Coefficients `(v⁰, v¹, v², u)` of `C = vⁱτᵢ + uσ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliQuartet {
    pub v0: C64,
    pub v1: C64,
    pub v2: C64,
    pub u: C64,
}

impl PauliQuartet {
    pub const ZERO: Self = Self::new(ZERO, ZERO, ZERO, ZERO);
    pub const TAU0: Self = Self::new(ONE, ZERO, ZERO, ZERO);
    pub const TAU1: Self = Self::new(ZERO, ONE, ZERO, ZERO);
    pub const TAU2: Self = Self::new(ZERO, ZERO, ONE, ZERO);
    pub const SIGMA: Self = Self::new(ZERO, ZERO, ZERO, ONE);

    pub const fn new(v0: C64, v1: C64, v2: C64, u: C64) -> Self {
        Self { v0, v1, v2, u }
    }

    pub fn real(v0: f64, v1: f64, v2: f64, u: f64) -> Self {
        Self::new(v0.into(), v1.into(), v2.into(), u.into())
    }

    /// Symmetric quartet `(v, 0)`.
    pub fn symmetric(v: [C64; 3]) -> Self {
        Self::new(v[0], v[1], v[2], ZERO)
    }

    pub fn from_array(a: [C64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    /// Closed-form change of basis from the matrix entries.
    pub fn from_matrix(c: &Mat2) -> Self {
        let (c00, c01, c10, c11) = (c[(0, 0)], c[(0, 1)], c[(1, 0)], c[(1, 1)]);
        Self::new(
            (c00 + c11) * 0.5,
            (c00 - c11) * 0.5,
            (c01 + c10) * 0.5,
            (c01 - c10) * 0.5,
        )
    }

    pub fn to_matrix(&self) -> Mat2 {
        Mat2::new(self.v0 + self.v1, self.v2 + self.u, self.v2 - self.u, self.v0 - self.v1)
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.v0, self.v1, self.v2, self.u]
    }

    pub fn symmetric_part(&self) -> [C64; 3] {
        [self.v0, self.v1, self.v2]
    }

    /// The permutation `(PC)_{αβ} = C_{βα}`: `u` changes sign.
    pub fn permuted(&self) -> Self {
        Self { u: -self.u, ..*self }
    }

    pub fn project(&self, parity: Parity) -> Self {
        match parity {
            Parity::Symmetric => Self { u: ZERO, ..*self },
            Parity::Antisymmetric => Self::new(ZERO, ZERO, ZERO, self.u),
        }
    }

    /// Bilinear form `−v⁰w⁰ + v¹w¹ + v²w²` on the symmetric parts. No
    /// complex conjugation.
    pub fn minkowski(&self, other: &Self) -> C64 {
        -self.v0 * other.v0 + self.v1 * other.v1 + self.v2 * other.v2
    }

    /// `tr(C₁σ⁻¹C₂σ⁻¹) = 2[u₁u₂ − v₁⁰v₂⁰ + v₁¹v₂¹ + v₁²v₂²]`.
    pub fn trace_form(&self, other: &Self) -> C64 {
        (self.u * other.u + self.minkowski(other)) * 2.0
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.as_array().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|z| z.is_finite())
    }
}

impl Add for PauliQuartet {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.v0 + rhs.v0, self.v1 + rhs.v1, self.v2 + rhs.v2, self.u + rhs.u)
    }
}

impl Sub for PauliQuartet {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for PauliQuartet {
    type Output = Self;
    fn neg(self) -> Self {
        self * C64::new(-1.0, 0.0)
    }
}

impl Mul<C64> for PauliQuartet {
    type Output = Self;
    fn mul(self, k: C64) -> Self {
        Self::new(self.v0 * k, self.v1 * k, self.v2 * k, self.u * k)
    }
}

impl Mul<f64> for PauliQuartet {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self * C64::new(k, 0.0)
    }
}

impl fmt::Display for PauliQuartet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.v0, self.v1, self.v2, self.u)
    }
}

pub fn sigma_matrix() -> Mat2 {
    PauliQuartet::SIGMA.to_matrix()
}

/// `tr(C₁σ⁻¹C₂σ⁻¹)` evaluated with 2×2 matrix products.
pub fn trace_form_direct(a: &PauliQuartet, b: &PauliQuartet) -> C64 {
    // σ⁻¹ = −σ
    let s_inv = -sigma_matrix();
    (a.to_matrix() * s_inv * b.to_matrix() * s_inv).trace()
}

/// An element of SL₂(C).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2 {
    gamma: Mat2,
}

impl Sl2 {
    /// Accepts `gamma` only if `|det − 1| ≤ DET_TOL`.
    pub fn new(gamma: Mat2) -> Result<Self, PauliError> {
        if !gamma.iter().all(|z| z.is_finite()) {
            return Err(PauliError::NonFinite);
        }
        let dev = (gamma.determinant() - ONE).norm();
        if dev > DET_TOL {
            return Err(PauliError::NotUnimodular(dev));
        }
        Ok(Self { gamma })
    }

    /// Rescales an invertible matrix by the principal square root of its
    /// determinant. The action on subspaces is unchanged by the rescaling.
    pub fn from_invertible(m: Mat2) -> Result<Self, PauliError> {
        if !m.iter().all(|z| z.is_finite()) {
            return Err(PauliError::NonFinite);
        }
        let det = m.determinant();
        let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if det.norm() <= 1e-14 * scale || det.norm() == 0.0 {
            return Err(PauliError::Singular);
        }
        Ok(Self { gamma: m / det.sqrt() })
    }

    pub fn identity() -> Self {
        Self {
            gamma: Mat2::identity(),
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.gamma
    }

    pub fn inverse(&self) -> Self {
        let g = &self.gamma;
        // adjugate; det is one
        Self {
            gamma: Mat2::new(g[(1, 1)], -g[(0, 1)], -g[(1, 0)], g[(0, 0)]),
        }
    }

    /// `self` followed by `next`: `Op_next ∘ Op_self = Op_{self·next}`.
    pub fn then(&self, next: &Sl2) -> Sl2 {
        let m = self.gamma * next.gamma;
        let det = m.determinant();
        Sl2 { gamma: m / det.sqrt() }
    }

    /// `±Γ` act identically; pick the sign that makes the first
    /// non-negligible entry (row-major) have positive real part, or zero real
    /// part and positive imaginary part.
    pub fn with_canonical_sign(&self) -> Sl2 {
        let g = &self.gamma;
        let max = g.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let pivot = [g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]]
            .into_iter()
            .find(|z| z.norm() > 1e-8 * max)
            .unwrap_or(ONE);
        let flip = if pivot.re.abs() > 1e-12 * pivot.norm() {
            pivot.re < 0.0
        } else {
            pivot.im < 0.0
        };
        if flip {
            Sl2 { gamma: -self.gamma }
        } else {
            *self
        }
    }

    /// `Op_Γ C = Γᵀ C Γ`.
    pub fn act(&self, c: &PauliQuartet) -> PauliQuartet {
        PauliQuartet::from_matrix(&(self.gamma.transpose() * c.to_matrix() * self.gamma))
    }

    pub fn act_space(&self, space: &CSpace) -> CSpace {
        let image = space.basis().iter().map(|c| self.act(c)).collect();
        CSpace::from_independent(image)
    }

    /// Ratio of largest to smallest singular value (equals σ_max² here).
    pub fn condition_number(&self) -> f64 {
        let sv = self.gamma.singular_values();
        sv.max() / sv.min()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.gamma.adjoint() * self.gamma - Mat2::identity()).norm() <= tol
    }
}

/// A linear subspace of span{τ0, τ1, τ2, σ}, stored in reduced row echelon
/// form over the coefficient columns `(v⁰, v¹, v², u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCSpace")]
pub struct CSpace {
    basis: Vec<PauliQuartet>,
}

#[derive(Deserialize)]
struct RawCSpace {
    basis: Vec<PauliQuartet>,
}

impl TryFrom<RawCSpace> for CSpace {
    type Error = PauliError;
    fn try_from(raw: RawCSpace) -> Result<Self, Self::Error> {
        CSpace::new(raw.basis)
    }
}

impl CSpace {
    pub fn zero() -> Self {
        Self { basis: Vec::new() }
    }

    /// Validates independence at `RANK_TOL` and canonicalizes.
    pub fn new(vectors: Vec<PauliQuartet>) -> Result<Self, PauliError> {
        Self::with_tolerance(vectors, RANK_TOL)
    }

    pub fn with_tolerance(vectors: Vec<PauliQuartet>, rank_tol: f64) -> Result<Self, PauliError> {
        if vectors.len() > 4 {
            return Err(PauliError::TooManyVectors(vectors.len()));
        }
        if !vectors.iter().all(PauliQuartet::is_finite) {
            return Err(PauliError::NonFinite);
        }
        let len = vectors.len();
        let sv = singular_values(&vectors);
        let at_tol = numerical_rank(&sv, rank_tol);
        let at_loose = numerical_rank(&sv, 10.0 * rank_tol);
        if at_tol == len && at_loose < len {
            return Err(PauliError::AmbiguousRank {
                tol: rank_tol,
                at_tol,
                at_loose,
            });
        }
        if at_tol < len {
            return Err(PauliError::DependentBasis { rank: at_tol, len });
        }
        Ok(Self::from_independent(vectors))
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span_of(vectors: &[PauliQuartet], rank_tol: f64) -> Self {
        let mut rows: Vec<[C64; 4]> = vectors.iter().map(PauliQuartet::as_array).collect();
        let rank = rref(&mut rows, rank_tol);
        rows.truncate(rank);
        Self {
            basis: rows.into_iter().map(PauliQuartet::from_array).collect(),
        }
    }

    /// Canonicalizes vectors already known to be independent.
    pub(crate) fn from_independent(vectors: Vec<PauliQuartet>) -> Self {
        let len = vectors.len();
        let mut rows: Vec<[C64; 4]> = vectors.iter().map(PauliQuartet::as_array).collect();
        let rank = rref(&mut rows, 1e-13);
        debug_assert_eq!(rank, len, "from_independent on dependent input");
        rows.truncate(rank);
        Self {
            basis: rows.into_iter().map(PauliQuartet::from_array).collect(),
        }
    }

    pub fn basis(&self) -> &[PauliQuartet] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Distance of `q` from the span, relative to `|q|`.
    pub fn relative_distance(&self, q: &PauliQuartet) -> f64 {
        let norm = q.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let onb = orthonormal_basis(&self.basis);
        let mut r = q.as_array();
        for _ in 0..2 {
            for e in &onb {
                let coef: C64 = e.iter().zip(&r).map(|(a, b)| a.conj() * b).sum();
                for (ri, ei) in r.iter_mut().zip(e) {
                    *ri -= coef * ei;
                }
            }
        }
        r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / norm
    }

    pub fn contains(&self, q: &PauliQuartet, tol: f64) -> bool {
        self.relative_distance(q) <= tol
    }

    /// Equal dimensions and every basis vector of `self` within relative
    /// distance `tol` of `other`.
    pub fn span_equal(&self, other: &CSpace, tol: f64) -> bool {
        self.dim() == other.dim() && self.basis.iter().all(|b| other.contains(b, tol))
    }
}

fn coefficient_matrix(vectors: &[PauliQuartet]) -> DMatrix<C64> {
    DMatrix::from_fn(vectors.len(), 4, |i, j| vectors[i].as_array()[j])
}

pub(crate) fn singular_values(vectors: &[PauliQuartet]) -> Vec<f64> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = coefficient_matrix(vectors).singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Singular values above `tol` times the largest one.
pub(crate) fn numerical_rank(sv_desc: &[f64], tol: f64) -> usize {
    match sv_desc.first() {
        Some(&top) if top > 0.0 => sv_desc.iter().filter(|&&s| s > tol * top).count(),
        _ => 0,
    }
}

/// In-place reduced row echelon form with partial pivoting; returns the rank.
/// Pivot candidates below `tol` times the largest input entry count as zero.
fn rref<const N: usize>(rows: &mut [[C64; N]], tol: f64) -> usize {
    let scale = rows.iter().flat_map(|r| r.iter()).map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let mut pivot_row = 0;
    for col in 0..N {
        if pivot_row == rows.len() {
            break;
        }
        let (best, best_abs) = (pivot_row..rows.len())
            .map(|r| (r, rows[r][col].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if best_abs <= tol * scale {
            for row in rows.iter_mut().skip(pivot_row) {
                row[col] = ZERO;
            }
            continue;
        }
        rows.swap(pivot_row, best);
        let p = rows[pivot_row][col];
        for z in rows[pivot_row].iter_mut() {
            *z /= p;
        }
        rows[pivot_row][col] = ONE;
        let pivot = rows[pivot_row];
        for (r, row) in rows.iter_mut().enumerate() {
            if r == pivot_row {
                continue;
            }
            let f = row[col];
            if f != ZERO {
                for (z, pz) in row.iter_mut().zip(pivot.iter()) {
                    *z -= f * pz;
                }
                row[col] = ZERO;
            }
        }
        pivot_row += 1;
    }
    pivot_row
}

fn orthonormal_basis(vectors: &[PauliQuartet]) -> Vec<[C64; 4]> {
    let mut onb: Vec<[C64; 4]> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.as_array();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for e in &onb {
                let coef: C64 = e.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                for (wi, ei) in w.iter_mut().zip(e) {
                    *wi -= coef * ei;
                }
            }
        }
        let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 0.0 {
            onb.push(w.map(|z| z / n));
        }
    }
    onb
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn quartet_close(a: &PauliQuartet, b: &PauliQuartet, tol: f64) -> bool {
        (*a - *b).norm() <= tol
    }

    #[test]
    fn decomposes_basis_and_sums() {
        assert_eq!(PauliQuartet::from_matrix(&sigma_matrix()), PauliQuartet::SIGMA);
        let diag = Mat2::new(c(2.0, 0.0), ZERO, ZERO, ZERO);
        assert_eq!(PauliQuartet::from_matrix(&diag), PauliQuartet::real(1.0, 1.0, 0.0, 0.0));
    }

    #[test]
    fn decomposition_matches_linear_solve() {
        // Oracle: solve the 4x4 system whose columns are the flattened basis matrices.
        let basis = [
            PauliQuartet::TAU0,
            PauliQuartet::TAU1,
            PauliQuartet::TAU2,
            PauliQuartet::SIGMA,
        ];
        let a = DMatrix::from_fn(4, 4, |i, j| {
            let m = basis[j].to_matrix();
            m[(i / 2, i % 2)]
        });
        let target = nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        let solved = a.lu().solve(&target).unwrap();
        let m = Mat2::new(c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0));
        let q = PauliQuartet::from_matrix(&m);
        for (x, y) in q.as_array().iter().zip(solved.iter()) {
            assert!(close(*x, *y, 1e-14));
        }
        assert!(quartet_close(&q, &PauliQuartet::real(2.5, -1.5, 2.5, -0.5), 0.0));
        assert_eq!(q.to_matrix(), m);
    }

    #[test]
    fn permute_and_project() {
        assert_eq!(PauliQuartet::SIGMA.permuted(), -PauliQuartet::SIGMA);
        assert_eq!(PauliQuartet::TAU0.permuted(), PauliQuartet::TAU0);
        let q = PauliQuartet::real(1.0, 2.0, 3.0, 4.0);
        assert_eq!(q.project(Parity::Symmetric), PauliQuartet::real(1.0, 2.0, 3.0, 0.0));
        assert_eq!(q.project(Parity::Antisymmetric), PauliQuartet::real(0.0, 0.0, 0.0, 4.0));
        // permutation is the transpose of the recomposed matrix
        let p = PauliQuartet::new(c(0.3, 1.0), c(-2.0, 0.5), c(0.1, 0.0), c(7.0, -3.0));
        assert!(quartet_close(
            &p.permuted(),
            &PauliQuartet::from_matrix(&p.to_matrix().transpose()),
            1e-15
        ));
    }

    #[test]
    fn minkowski_signature() {
        assert_eq!(PauliQuartet::TAU0.minkowski(&PauliQuartet::TAU0), c(-1.0, 0.0));
        assert_eq!(PauliQuartet::TAU2.minkowski(&PauliQuartet::TAU2), c(1.0, 0.0));
        let null = PauliQuartet::TAU0 + PauliQuartet::TAU1;
        assert_eq!(null.minkowski(&null), ZERO);
    }

    #[test]
    fn trace_form_two_routes() {
        assert!(close(
            trace_form_direct(&PauliQuartet::SIGMA, &PauliQuartet::SIGMA),
            c(2.0, 0.0),
            1e-15
        ));
        assert!(close(
            PauliQuartet::SIGMA.trace_form(&PauliQuartet::SIGMA),
            c(2.0, 0.0),
            1e-15
        ));
        assert!(close(
            PauliQuartet::TAU2.trace_form(&PauliQuartet::TAU2),
            c(2.0, 0.0),
            1e-15
        ));
        assert!(close(
            PauliQuartet::TAU0.trace_form(&PauliQuartet::TAU0),
            c(-2.0, 0.0),
            1e-15
        ));
        let a = PauliQuartet::new(c(0.3, 1.0), c(-2.0, 0.5), c(0.1, 0.0), c(7.0, -3.0));
        let b = PauliQuartet::new(c(1.3, -0.2), c(0.0, 0.5), c(-0.4, 2.0), c(0.25, 1.0));
        assert!(close(a.trace_form(&b), trace_form_direct(&a, &b), 1e-12));
    }

    #[test]
    fn sl2_examples() {
        let s = 0.5f64.sqrt();
        let g = Sl2::new(Mat2::new(c(s, 0.0), c(s, 0.0), c(-s, 0.0), c(s, 0.0))).unwrap();
        assert!(quartet_close(&g.act(&PauliQuartet::TAU1), &PauliQuartet::TAU2, 1e-15));
        assert!(quartet_close(&g.act(&PauliQuartet::SIGMA), &PauliQuartet::SIGMA, 1e-15));
        let q = PauliQuartet::new(c(0.3, 1.0), c(-2.0, 0.5), c(0.1, 0.0), c(7.0, -3.0));
        assert!(quartet_close(&Sl2::identity().act(&q), &q, 1e-15));
    }

    #[test]
    fn sl2_rejects_non_unimodular() {
        let m = Mat2::new(c(2.0, 0.0), ZERO, ZERO, c(1.0, 0.0));
        assert!(matches!(Sl2::new(m), Err(PauliError::NotUnimodular(_))));
        let g = Sl2::from_invertible(m).unwrap();
        assert!((g.matrix().determinant() - ONE).norm() < 1e-15);
        assert!(matches!(Sl2::from_invertible(Mat2::zeros()), Err(PauliError::Singular)));
    }

    #[test]
    fn composition_order() {
        let a = Sl2::from_invertible(Mat2::new(c(1.0, 0.0), c(2.0, 0.0), c(0.5, 0.0), c(3.0, 1.0))).unwrap();
        let b = Sl2::from_invertible(Mat2::new(c(0.0, 1.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.2, 0.0))).unwrap();
        let q = PauliQuartet::new(c(0.3, 1.0), c(-2.0, 0.5), c(0.1, 0.0), c(7.0, -3.0));
        let stepwise = b.act(&a.act(&q));
        assert!(quartet_close(&a.then(&b).act(&q), &stepwise, 1e-12));
        assert!(quartet_close(&a.then(&a.inverse()).act(&q), &q, 1e-12));
    }

    #[test]
    fn cspace_rejects_dependent_and_ambiguous() {
        let t2 = PauliQuartet::TAU2;
        assert!(matches!(
            CSpace::new(vec![t2, t2 * 2.0]),
            Err(PauliError::DependentBasis { rank: 1, len: 2 })
        ));
        // second vector sits between rank_tol and 10*rank_tol away from the first
        let nearly = t2 + PauliQuartet::TAU0 * 5e-10;
        assert!(matches!(
            CSpace::new(vec![t2, nearly]),
            Err(PauliError::AmbiguousRank { .. })
        ));
        let nan = PauliQuartet::new(C64::new(f64::NAN, 0.0), ZERO, ZERO, ZERO);
        assert_eq!(CSpace::new(vec![nan]), Err(PauliError::NonFinite));
        assert!(matches!(
            CSpace::new(vec![PauliQuartet::TAU0; 5]),
            Err(PauliError::TooManyVectors(5))
        ));
    }

    #[test]
    fn cspace_canonical_form_is_basis_independent() {
        let a = CSpace::new(vec![PauliQuartet::TAU0, PauliQuartet::TAU1]).unwrap();
        let b = CSpace::new(vec![
            PauliQuartet::TAU0 + PauliQuartet::TAU1,
            PauliQuartet::TAU0 - PauliQuartet::TAU1,
        ])
        .unwrap();
        assert_eq!(a, b);
        assert!(a.span_equal(&b, 1e-12));
    }

    #[test]
    fn span_equal_examples() {
        let t2 = CSpace::new(vec![PauliQuartet::TAU2]).unwrap();
        let t2x2 = CSpace::new(vec![PauliQuartet::TAU2 * 2.0]).unwrap();
        let s = CSpace::new(vec![PauliQuartet::SIGMA]).unwrap();
        assert!(t2.span_equal(&t2x2, 1e-12));
        assert!(!t2.span_equal(&s, 1e-12));
        assert!(!t2.span_equal(&CSpace::zero(), 1e-12));
    }

    #[test]
    fn act_space_preserves_sigma_line() {
        let g = Sl2::from_invertible(Mat2::new(c(1.0, 0.5), c(2.0, 0.0), c(0.5, 0.0), c(3.0, 1.0))).unwrap();
        let s = CSpace::new(vec![PauliQuartet::SIGMA]).unwrap();
        assert!(g.act_space(&s).span_equal(&s, 1e-12));
        let v = CSpace::new(vec![PauliQuartet::TAU0, PauliQuartet::TAU2 + PauliQuartet::SIGMA]).unwrap();
        let back = g.inverse().act_space(&g.act_space(&v));
        assert!(back.span_equal(&v, 1e-12));
        assert!(Sl2::identity().act_space(&v).span_equal(&v, 1e-15));
    }

    #[test]
    fn quartet_json_shape() {
        let q = PauliQuartet::real(1.0, 0.0, 0.0, -2.0);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"{"v0":[1.0,0.0],"v1":[0.0,0.0],"v2":[0.0,0.0],"u":[-2.0,0.0]}"#);
        let space: CSpace = serde_json::from_str(&format!(r#"{{"basis":[{s}]}}"#)).unwrap();
        assert_eq!(space.dim(), 1);
        let bad: Result<CSpace, _> = serde_json::from_str(&format!(r#"{{"basis":[{s},{s}]}}"#));
        assert!(bad.is_err());
    }
}
