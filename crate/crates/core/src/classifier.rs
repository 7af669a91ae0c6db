//! Normal forms of constraint spaces under `C ↦ Γᵀ C Γ`, `Γ ∈ SL₂(C)`.
//!
//! The decision tree works on the symmetric projection `V⁺`:
//!
//! * `dim V⁺ = 1`: the generator is null or not; move it to `τ0+τ1` or `τ2`.
//! * `dim V⁺ = 2`: the Minkowski normal `W` of `V⁺` is null or not; move it
//!   to `τ0+τ1` (so `V⁺ = span{τ0+τ1, τ2}`) or to `τ1` (`V⁺ = span{τ0, τ2}`).
//! * `dim V⁺ = 0, 3`: nothing to normalize.
//!
//! If `σ ∈ V` the antisymmetric coordinate is free and the case is fixed.
//! Otherwise `u = w·v` for a vector `w` that transforms with `V⁺`, and the
//! stabilizer of the normalized `V⁺` is used to bring `w` to the listed
//! representative. Every result carries the witness `Γ` and is checked by
//! re-applying it.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pauli::{self, CSpace, Mat2, PauliError, PauliQuartet, Sl2, RANK_TOL};
use crate::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("case {0} takes a modulus mu but none was given")]
    MissingModulus(CaseId),
    #[error("case {0} has no modulus but mu was given")]
    UnexpectedModulus(CaseId),
    #[error("unknown case id {0:?}")]
    UnknownCase(String),
    #[error("u is not a linear function of v on V (residual {0:e}); input is numerically degenerate")]
    InconsistentProfile(f64),
    #[error("expected a symmetric tensor (u = 0)")]
    NotSymmetric,
    #[error("expected a nonzero tensor")]
    ZeroVector,
    #[error("expected a null vector, got v.v = {0}")]
    NotNull(C64),
    #[error("expected a non-null vector")]
    NotNonNull,
    #[error("expected a two-dimensional symmetric space, got dimension {0}")]
    WrongDimension(usize),
    #[error("witness check failed: transformed space is {0:e} away from the canonical form")]
    Witness(f64),
}

/// Orbit labels. `C48`..`C62` are the fifteen listed forms; `C41S` is
/// `span{τ0, τ2, σ}`, the `σ`-extension of the non-null plane, which the
/// list omits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    C48,
    C49,
    C50,
    C51,
    C52,
    C53,
    C54,
    C55,
    C56,
    C57,
    C58,
    C59,
    C60,
    C61,
    C62,
    C41S,
}

impl CaseId {
    pub const LISTED: [CaseId; 15] = [
        CaseId::C48,
        CaseId::C49,
        CaseId::C50,
        CaseId::C51,
        CaseId::C52,
        CaseId::C53,
        CaseId::C54,
        CaseId::C55,
        CaseId::C56,
        CaseId::C57,
        CaseId::C58,
        CaseId::C59,
        CaseId::C60,
        CaseId::C61,
        CaseId::C62,
    ];

    pub fn has_modulus(self) -> bool {
        matches!(self, CaseId::C50 | CaseId::C55 | CaseId::C57 | CaseId::C60)
    }

    /// Cases for which every trace of a product of `A⁰`, `A¹` is forced to
    /// vanish, so no nonzero matrix product state comes from the constraint.
    pub fn forbids_mps(self) -> bool {
        matches!(
            self,
            CaseId::C56 | CaseId::C60 | CaseId::C61 | CaseId::C62 | CaseId::C41S
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::C48 => "C48",
            CaseId::C49 => "C49",
            CaseId::C50 => "C50",
            CaseId::C51 => "C51",
            CaseId::C52 => "C52",
            CaseId::C53 => "C53",
            CaseId::C54 => "C54",
            CaseId::C55 => "C55",
            CaseId::C56 => "C56",
            CaseId::C57 => "C57",
            CaseId::C58 => "C58",
            CaseId::C59 => "C59",
            CaseId::C60 => "C60",
            CaseId::C61 => "C61",
            CaseId::C62 => "C62",
            CaseId::C41S => "C41S",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = ClassifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseId::LISTED
            .iter()
            .chain(std::iter::once(&CaseId::C41S))
            .copied()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| ClassifyError::UnknownCase(s.to_string()))
    }
}

/// A case label together with its modulus, if the case has one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CanonicalForm {
    #[serde(rename = "case_id")]
    case: CaseId,
    mu: Option<C64>,
}

impl CanonicalForm {
    pub fn new(case: CaseId, mu: Option<C64>) -> Result<Self, ClassifyError> {
        match (case.has_modulus(), mu) {
            (true, None) => Err(ClassifyError::MissingModulus(case)),
            (false, Some(_)) => Err(ClassifyError::UnexpectedModulus(case)),
            (_, Some(m)) if !m.is_finite() => Err(PauliError::NonFinite.into()),
            _ => Ok(Self { case, mu }),
        }
    }

    /// Form without modulus. Panics if `case` needs one.
    pub fn plain(case: CaseId) -> Self {
        Self::new(case, None).expect("case requires a modulus")
    }

    pub fn with_mu(case: CaseId, mu: C64) -> Self {
        Self::new(case, Some(mu)).expect("case takes no modulus")
    }

    pub fn case(&self) -> CaseId {
        self.case
    }

    pub fn mu(&self) -> Option<C64> {
        self.mu
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mu {
            Some(mu) => write!(f, "{}(mu={})", self.case, mu),
            None => write!(f, "{}", self.case),
        }
    }
}

/// The listed basis of each normal form.
pub fn canonical_space(form: &CanonicalForm) -> CSpace {
    use PauliQuartet as Q;
    let null = Q::TAU0 + Q::TAU1;
    let mu = form.mu.unwrap_or_default();
    let basis = match form.case {
        CaseId::C48 => vec![],
        CaseId::C49 => vec![Q::SIGMA],
        CaseId::C50 => vec![Q::TAU2 + Q::SIGMA * mu],
        CaseId::C51 => vec![Q::TAU2, Q::SIGMA],
        CaseId::C52 => vec![null],
        CaseId::C53 => vec![null + Q::SIGMA],
        CaseId::C54 => vec![null, Q::SIGMA],
        CaseId::C55 => vec![Q::TAU0, Q::TAU2 + Q::SIGMA * mu],
        CaseId::C56 => vec![Q::TAU0 + Q::SIGMA, Q::TAU2 + Q::SIGMA],
        CaseId::C57 => vec![null, Q::TAU2 + Q::SIGMA * mu],
        CaseId::C58 => vec![null + Q::SIGMA, Q::TAU2],
        CaseId::C59 => vec![null, Q::TAU2, Q::SIGMA],
        CaseId::C60 => vec![Q::TAU0, Q::TAU1, Q::TAU2 + Q::SIGMA * mu],
        CaseId::C61 => vec![Q::TAU0 + Q::SIGMA, Q::TAU1 + Q::SIGMA, Q::TAU2],
        CaseId::C62 => vec![Q::TAU0, Q::TAU1, Q::TAU2, Q::SIGMA],
        CaseId::C41S => vec![Q::TAU0, Q::TAU2, Q::SIGMA],
    };
    CSpace::from_independent(basis)
}

/// Numerical thresholds for the decision tree.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Relative singular-value cut for `dim V⁺`.
    pub rank: f64,
    /// `|v·v| ≤ null · |v|²` counts as null.
    pub null: f64,
    /// Relative size below which the functional `u(v)` counts as zero.
    pub zero: f64,
    /// Relative distance allowed in the final witness check.
    pub witness: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: RANK_TOL,
            null: 1e-9,
            zero: 1e-9,
            witness: 1e-8,
        }
    }
}

/// `(dim V⁺, σ ∈ V, w)` with `u = w·v` on `V` when `σ ∉ V`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricProfile {
    pub dim_plus: usize,
    pub sigma_in_v: bool,
    /// Minimum-norm solution of `w·vᵢ = uᵢ` over the basis of `V`.
    pub w: Option<[C64; 3]>,
}

/// Orbit invariants computed without classifying.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InvariantSignature {
    pub dim: usize,
    pub dim_plus: usize,
    /// Rank of the Minkowski Gram matrix on `V⁺`.
    pub gram_rank: usize,
    /// `dim_plus − gram_rank`; nonzero when `V⁺` contains a null normal.
    pub nullity: usize,
    pub sigma_in_v: bool,
}

impl fmt::Display for InvariantSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(dim {}, dimV+ {}, {}, {})",
            self.dim,
            self.dim_plus,
            if self.nullity > 0 { "null" } else { "nonnull" },
            if self.sigma_in_v {
                "sigma in V"
            } else {
                "sigma not in V"
            }
        )
    }
}

#[derive(Debug, Clone)]
pub struct ClassificationResult {
    pub form: CanonicalForm,
    /// `Op_Γ(V)` is span-equal to `canonical`.
    pub gamma: Sl2,
    pub canonical: CSpace,
    pub signature: InvariantSignature,
}

/// Symmetric-part data of a space: singular-value split of the `v` rows.
struct Analysis {
    dim_plus: usize,
    sigma_in_v: bool,
    /// Orthonormal-ish rows spanning `V⁺`.
    plus_basis: Vec<[C64; 3]>,
}

fn analyze(space: &CSpace, rank_tol: f64) -> Analysis {
    let basis = space.basis();
    if basis.is_empty() {
        return Analysis {
            dim_plus: 0,
            sigma_in_v: false,
            plus_basis: vec![],
        };
    }
    let full_top = pauli::singular_values(basis)[0];
    let sym = DMatrix::from_fn(basis.len(), 3, |i, j| basis[i].symmetric_part()[j]);
    let svd = sym.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let plus_basis: Vec<[C64; 3]> = order
        .into_iter()
        .filter(|&i| svd.singular_values[i] > rank_tol * full_top)
        .map(|i| [v_t[(i, 0)], v_t[(i, 1)], v_t[(i, 2)]])
        .collect();
    let dim_plus = plus_basis.len();
    Analysis {
        dim_plus,
        sigma_in_v: basis.len() > dim_plus,
        plus_basis,
    }
}

fn sym(v: [C64; 3]) -> PauliQuartet {
    PauliQuartet::symmetric(v)
}

fn norm3(v: &[C64; 3]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn is_null(v: &[C64; 3], tol: f64) -> bool {
    let q = sym(*v);
    q.minkowski(&q).norm() <= tol * norm3(v).powi(2)
}

/// Minkowski normal of a 2-plane: `w = η(b₁ × b₂)`.
fn minkowski_normal(b1: &[C64; 3], b2: &[C64; 3]) -> [C64; 3] {
    let cross = [
        b1[1] * b2[2] - b1[2] * b2[1],
        b1[2] * b2[0] - b1[0] * b2[2],
        b1[0] * b2[1] - b1[1] * b2[0],
    ];
    [-cross[0], cross[1], cross[2]]
}

/// Value of the functional `u(v)` on `target ∈ V⁺`, for `σ ∉ V`.
/// Returns `None` when `target` is not in the symmetric projection.
fn functional_at(space: &CSpace, target: [C64; 3]) -> Option<C64> {
    let basis = space.basis();
    let a = DMatrix::from_fn(3, basis.len(), |i, j| basis[j].symmetric_part()[i]);
    let b = DVector::from_row_slice(&target);
    let coeffs = a.clone().svd(true, true).solve(&b, 1e-13).ok()?;
    let resid = (&a * &coeffs - &b).norm();
    if resid > 1e-7 * b.norm().max(1.0) {
        return None;
    }
    Some(basis.iter().zip(coeffs.iter()).map(|(q, c)| q.u * c).sum())
}

/// Scale of the functional: largest `|uᵢ| / |vᵢ|` over the basis.
fn functional_scale(space: &CSpace) -> f64 {
    space
        .basis()
        .iter()
        .map(|q| q.u.norm() / norm3(&q.symmetric_part()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

/// `(dim V⁺, σ ∈ V, w)`.
pub fn symmetric_rank_profile(space: &CSpace) -> Result<SymmetricProfile, ClassifyError> {
    let a = analyze(space, RANK_TOL);
    if a.sigma_in_v || space.dim() == 0 {
        return Ok(SymmetricProfile {
            dim_plus: a.dim_plus,
            sigma_in_v: a.sigma_in_v,
            w: None,
        });
    }
    let basis = space.basis();
    // rows (ηv)ᵀ so that row · w = v·w
    let g = DMatrix::from_fn(basis.len(), 3, |i, j| {
        let v = basis[i].symmetric_part()[j];
        if j == 0 {
            -v
        } else {
            v
        }
    });
    let u = DVector::from_iterator(basis.len(), basis.iter().map(|q| q.u));
    let w = g
        .clone()
        .svd(true, true)
        .solve(&u, 1e-13)
        .map_err(|_| ClassifyError::InconsistentProfile(f64::INFINITY))?;
    let resid = (&g * &w - &u).norm();
    let scale = g.norm().max(u.norm()).max(1.0);
    if resid > 1e-10 * scale {
        return Err(ClassifyError::InconsistentProfile(resid));
    }
    Ok(SymmetricProfile {
        dim_plus: a.dim_plus,
        sigma_in_v: false,
        w: Some([w[0], w[1], w[2]]),
    })
}

pub fn invariant_signature(space: &CSpace) -> InvariantSignature {
    let a = analyze(space, RANK_TOL);
    let k = a.plus_basis.len();
    let gram_rank = if k == 0 {
        0
    } else {
        let gram = DMatrix::from_fn(k, k, |i, j| sym(a.plus_basis[i]).minkowski(&sym(a.plus_basis[j])));
        let sv = gram.singular_values();
        // plus_basis rows are orthonormal, so an absolute cut is relative
        sv.iter().filter(|&&s| s > 1e-8).count()
    };
    InvariantSignature {
        dim: space.dim(),
        dim_plus: k,
        gram_rank,
        nullity: k - gram_rank,
        sigma_in_v: a.sigma_in_v,
    }
}

fn check_symmetric(s: &PauliQuartet) -> Result<[C64; 3], ClassifyError> {
    let v = s.symmetric_part();
    let n = norm3(&v);
    if n == 0.0 {
        return Err(ClassifyError::ZeroVector);
    }
    if s.u.norm() > 1e-12 * n {
        return Err(ClassifyError::NotSymmetric);
    }
    Ok(v)
}

/// `Γ` with `Op_Γ s ∝ τ0+τ1` for a null symmetric `s`. The result is unitary.
pub fn normalize_null(s: &PauliQuartet) -> Result<Sl2, ClassifyError> {
    let v = check_symmetric(s)?;
    let q = sym(v);
    let vv = q.minkowski(&q);
    if vv.norm() > Tolerances::default().null * norm3(&v).powi(2) {
        return Err(ClassifyError::NotNull(vv));
    }
    // s = λ p pᵀ; any nonzero column is proportional to p
    let m = q.to_matrix();
    let col = if m.column(0).norm() >= m.column(1).norm() { 0 } else { 1 };
    let p = m.column(col).normalize();
    let (p1, p2) = (p[0], p[1]);
    // columns conj(p) and (−p₂, p₁): Γᵀp = (1, 0), det Γ = |p|² = 1
    let gamma = Mat2::new(p1.conj(), -p2, p2.conj(), p1);
    Ok(Sl2::from_invertible(gamma)?)
}

/// `Γ` with `Op_Γ s ∝ τ2` for a non-null symmetric `s`, by factoring the
/// binary quadratic form `xᵀ s x` into two distinct linear forms.
pub fn normalize_nonnull(s: &PauliQuartet) -> Result<Sl2, ClassifyError> {
    let v = check_symmetric(s)?;
    let q = sym(v);
    if q.minkowski(&q).norm() <= Tolerances::default().null * norm3(&v).powi(2) {
        return Err(ClassifyError::NotNonNull);
    }
    let m = q.to_matrix();
    let (a, b, c) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
    let d = (b * b - a * c).sqrt();
    let (p, r) = (-b + d, -b - d);
    // each zero of a x² + 2b xy + c y² has two projective representatives;
    // keep the larger one
    let pick = |x: [C64; 2], y: [C64; 2]| {
        if x[0].norm_sqr() + x[1].norm_sqr() >= y[0].norm_sqr() + y[1].norm_sqr() {
            x
        } else {
            y
        }
    };
    let z1 = pick([p, a], [c, r]);
    let z2 = pick([r, a], [c, p]);
    let form = |z: [C64; 2]| {
        let l = nalgebra::Vector2::new(z[1], -z[0]);
        l.normalize()
    };
    let (l1, l2) = (form(z1), form(z2));
    let lm = Mat2::from_columns(&[l1, l2]);
    let det = lm.determinant();
    let inv_t = lm.try_inverse().ok_or(ClassifyError::NotNonNull)?.transpose();
    let gamma = inv_t * Mat2::new(C64::new(1.0, 0.0), C64::default(), C64::default(), det);
    let g = Sl2::from_invertible(gamma)?;
    // the image is λτ2; keep λ on the principal branch
    if is_principal(g.act(s).v2) {
        Ok(g)
    } else {
        Ok(g.then(&flip_t1_t2()))
    }
}

/// Minkowski normal of a two-dimensional purely symmetric space.
pub fn normal_complement(vplus: &CSpace) -> Result<PauliQuartet, ClassifyError> {
    let a = analyze(vplus, RANK_TOL);
    if a.dim_plus != 2 || a.sigma_in_v {
        return Err(ClassifyError::WrongDimension(a.dim_plus));
    }
    if vplus.basis().iter().any(|q| q.u.norm() > 1e-12 * q.norm()) {
        return Err(ClassifyError::NotSymmetric);
    }
    Ok(sym(minkowski_normal(&a.plus_basis[0], &a.plus_basis[1])))
}

fn c(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

fn sl2(m: Mat2) -> Sl2 {
    Sl2::from_invertible(m).expect("explicit unimodular construction")
}

/// `τ0 ↦ τ0`, `τ1 ↦ −τ1`, `τ2 ↦ −τ2`.
fn flip_t1_t2() -> Sl2 {
    sl2(pauli::sigma_matrix())
}

/// `τ0 ↦ −τ0`, `τ1 ↦ −τ1`, `τ2 ↦ τ2`.
fn flip_t0_t1() -> Sl2 {
    sl2(Mat2::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)))
}

/// `τ2 ↦ τ1`, `τ0 ↦ τ0`.
fn rotate_t2_to_t1() -> Sl2 {
    let s = 0.5f64.sqrt();
    sl2(Mat2::new(c(s, 0.0), c(-s, 0.0), c(s, 0.0), c(s, 0.0)))
}

/// `τ0+τ1 ↦ a²(τ0+τ1)`, `τ0−τ1 ↦ a⁻²(τ0−τ1)`, `τ2 ↦ τ2`.
fn boost_t0_t1(a: C64) -> Sl2 {
    sl2(Mat2::new(a, c(0.0, 0.0), c(0.0, 0.0), a.inv()))
}

/// Fixes `τ1`; `τ0 ↦ cτ0 + sτ2`, `τ2 ↦ sτ0 + cτ2` with `c + s = k²`.
fn boost_t0_t2(k_sq: C64) -> Sl2 {
    let k = k_sq.sqrt();
    let (p, m) = ((k + k.inv()) * 0.5, (k - k.inv()) * 0.5);
    sl2(Mat2::new(p, m, m, p))
}

/// Lower-triangular stabilizer of `span{τ0+τ1}`: `τ0+τ1 ↦ a²(τ0+τ1)`,
/// `τ2 ↦ τ2 + ac(τ0+τ1)`.
fn lower_triangular(a: C64, cc: C64) -> Sl2 {
    sl2(Mat2::new(a, c(0.0, 0.0), cc, a.inv()))
}

/// Principal representative of `±μ`: `Re μ > 0`, or `Re μ = 0` and `Im μ ≥ 0`.
fn is_principal(mu: C64) -> bool {
    let tiny = 1e-12 * mu.norm();
    mu.re > tiny || (mu.re.abs() <= tiny && mu.im >= 0.0)
}

pub fn classify(space: &CSpace) -> Result<ClassificationResult, ClassifyError> {
    classify_with(space, &Tolerances::default())
}

pub fn classify_with(space: &CSpace, tol: &Tolerances) -> Result<ClassificationResult, ClassifyError> {
    use PauliQuartet as Q;
    let a = analyze(space, tol.rank);
    let u_scale = functional_scale(space);
    let u_vanishes = u_scale <= tol.zero;

    let (form, gamma) = match (a.dim_plus, a.sigma_in_v) {
        (0, false) => (CanonicalForm::plain(CaseId::C48), Sl2::identity()),
        (0, true) => (CanonicalForm::plain(CaseId::C49), Sl2::identity()),

        (1, sigma) => {
            let s = sym(a.plus_basis[0]);
            if is_null(&a.plus_basis[0], tol.null) {
                let g = normalize_null(&s)?;
                if sigma {
                    (CanonicalForm::plain(CaseId::C54), g)
                } else if u_vanishes {
                    (CanonicalForm::plain(CaseId::C52), g)
                } else {
                    let moved = g.act_space(space);
                    let p = functional_at(&moved, (Q::TAU0 + Q::TAU1).symmetric_part())
                        .ok_or(ClassifyError::InconsistentProfile(f64::NAN))?;
                    (CanonicalForm::plain(CaseId::C53), g.then(&boost_t0_t1(p.sqrt())))
                }
            } else {
                let g = normalize_nonnull(&s)?;
                if sigma {
                    (CanonicalForm::plain(CaseId::C51), g)
                } else if u_vanishes {
                    (CanonicalForm::with_mu(CaseId::C50, C64::default()), g)
                } else {
                    let moved = g.act_space(space);
                    let mu = functional_at(&moved, Q::TAU2.symmetric_part())
                        .ok_or(ClassifyError::InconsistentProfile(f64::NAN))?;
                    if is_principal(mu) {
                        (CanonicalForm::with_mu(CaseId::C50, mu), g)
                    } else {
                        (CanonicalForm::with_mu(CaseId::C50, -mu), g.then(&flip_t1_t2()))
                    }
                }
            }
        }

        (2, sigma) => {
            let normal = minkowski_normal(&a.plus_basis[0], &a.plus_basis[1]);
            if is_null(&normal, tol.null) {
                // V⁺ → span{τ0+τ1, τ2}
                let g = normalize_null(&sym(normal))?;
                if sigma {
                    (CanonicalForm::plain(CaseId::C59), g)
                } else if u_vanishes {
                    (CanonicalForm::with_mu(CaseId::C57, C64::default()), g)
                } else {
                    let moved = g.act_space(space);
                    let on_null = functional_at(&moved, (Q::TAU0 + Q::TAU1).symmetric_part())
                        .ok_or(ClassifyError::InconsistentProfile(f64::NAN))?;
                    let on_t2 = functional_at(&moved, Q::TAU2.symmetric_part())
                        .ok_or(ClassifyError::InconsistentProfile(f64::NAN))?;
                    // w = α(τ1−τ0) + βτ2 mod (τ0+τ1)
                    let alpha = on_null * 0.5;
                    let beta = on_t2;
                    if alpha.norm() <= tol.zero * beta.norm().max(u_scale).max(1.0) {
                        (CanonicalForm::with_mu(CaseId::C57, beta), g)
                    } else {
                        let scale = (alpha * 2.0).sqrt();
                        let shear = beta * scale / (alpha * 2.0);
                        (
                            CanonicalForm::plain(CaseId::C58),
                            g.then(&lower_triangular(scale, shear)),
                        )
                    }
                }
            } else {
                // V⁺ → span{τ0, τ2}, normal along τ1
                let g = normalize_nonnull(&sym(normal))?.then(&rotate_t2_to_t1());
                if sigma {
                    (CanonicalForm::plain(CaseId::C41S), g)
                } else if u_vanishes {
                    (CanonicalForm::with_mu(CaseId::C55, C64::default()), g)
                } else {
                    let moved = g.act_space(space);
                    let on_t0 = functional_at(&moved, Q::TAU0.symmetric_part())
                        .ok_or(ClassifyError::InconsistentProfile(f64::NAN))?;
                    let on_t2 = functional_at(&moved, Q::TAU2.symmetric_part())
                        .ok_or(ClassifyError::InconsistentProfile(f64::NAN))?;
                    let (w0, w2) = (-on_t0, on_t2);
                    let wsq = w2 * w2 - w0 * w0;
                    if wsq.norm() <= tol.null * (w0.norm_sqr() + w2.norm_sqr()) {
                        // null w: bring to τ2 − τ0
                        let (g, w0, w2) = if (w2 - w0).norm() < (w2 + w0).norm() {
                            (g.then(&flip_t0_t1()), -w0, w2)
                        } else {
                            (g, w0, w2)
                        };
                        let t = (w2 - w0) * 0.5;
                        (CanonicalForm::plain(CaseId::C56), g.then(&boost_t0_t2(t)))
                    } else {
                        let mu = wsq.sqrt();
                        let mu = if is_principal(mu) { mu } else { -mu };
                        let k_sq = (w2 - w0) / mu;
                        (CanonicalForm::with_mu(CaseId::C55, mu), g.then(&boost_t0_t2(k_sq)))
                    }
                }
            }
        }

        (3, true) => (CanonicalForm::plain(CaseId::C62), Sl2::identity()),
        (3, false) => {
            if u_vanishes {
                (CanonicalForm::with_mu(CaseId::C60, C64::default()), Sl2::identity())
            } else {
                let w = [
                    -functional_at(space, Q::TAU0.symmetric_part())
                        .ok_or(ClassifyError::InconsistentProfile(f64::NAN))?,
                    functional_at(space, Q::TAU1.symmetric_part())
                        .ok_or(ClassifyError::InconsistentProfile(f64::NAN))?,
                    functional_at(space, Q::TAU2.symmetric_part())
                        .ok_or(ClassifyError::InconsistentProfile(f64::NAN))?,
                ];
                if is_null(&w, tol.null) {
                    // w → λ(τ0+τ1) → λ(τ0−τ1) → τ1−τ0
                    let g = normalize_null(&sym(w))?;
                    let lambda = g.act(&sym(w)).v0;
                    let g = g.then(&flip_t1_t2());
                    (
                        CanonicalForm::plain(CaseId::C61),
                        g.then(&boost_t0_t1((-lambda).sqrt())),
                    )
                } else {
                    let g = normalize_nonnull(&sym(w))?;
                    let lambda = g.act(&sym(w)).v2;
                    if is_principal(lambda) {
                        (CanonicalForm::with_mu(CaseId::C60, lambda), g)
                    } else {
                        (CanonicalForm::with_mu(CaseId::C60, -lambda), g.then(&flip_t1_t2()))
                    }
                }
            }
        }
        (d, _) => unreachable!("symmetric dimension {d} > 3"),
    };

    let gamma = gamma.with_canonical_sign();
    let canonical = canonical_space(&form);
    let moved = gamma.act_space(space);
    let distance = moved
        .basis()
        .iter()
        .map(|b| canonical.relative_distance(b))
        .fold(0.0, f64::max);
    if moved.dim() != canonical.dim() || distance > tol.witness {
        return Err(ClassifyError::Witness(distance));
    }
    Ok(ClassificationResult {
        form,
        gamma,
        canonical,
        signature: invariant_signature(space),
    })
}
