//! Two-site Hamiltonians `h = Σ Λ_ab (E^a)† E^b` and their open-chain sums.
//!
//! Local operators act on `C² ⊗ C²` in the basis `{00, 01, 10, 11}`; the
//! tensor `E_{αβ}` is read as the covector with component `2α + β`. Chains
//! order site 1 as the most significant bit.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2, Matrix4};
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::pauli::{self, PauliQuartet, Sl2};
use crate::C64;

/// Default largest chain handled by [`full_chain`].
pub const DEFAULT_MAX_SITES: usize = 14;

const HERMITIAN_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HamiltonianError {
    #[error("coupling matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semi-definite (smallest eigenvalue {min:e}, largest {max:e})")]
    NotPsd { min: f64, max: f64 },
    #[error("coupling matrix is {got}x{got} but the E-basis has {want} tensors")]
    DimensionMismatch { want: usize, got: usize },
    #[error("E-basis tensors are linearly dependent")]
    DependentBasis,
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParams { family: FamilyId, reason: String },
    #[error("chain length {n} outside 2..={max}")]
    SitesOutOfRange { n: usize, max: usize },
    #[error("non-finite entry")]
    NonFinite,
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}

type Mat2 = Matrix2<C64>;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn m2(a: C64, b: C64, c: C64, d: C64) -> Mat2 {
    Mat2::new(a, b, c, d)
}

/// Covector of a tensor `E_{αβ}` on `C² ⊗ C²`.
fn covector(e: &PauliQuartet) -> [C64; 4] {
    let m = e.to_matrix();
    [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

fn hermitian_defect(m: &DMatrix<C64>) -> f64 {
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max) / scale
}

/// Smallest and largest eigenvalues of the Hermitian part.
fn eigen_range(m: &DMatrix<C64>) -> (f64, f64) {
    let h = (m + m.adjoint()) * re(0.5);
    let ev = h.symmetric_eigenvalues();
    let min = ev.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (min, max)
}

fn check_hermitian_psd(m: &DMatrix<C64>) -> Result<(), HamiltonianError> {
    if !m.iter().all(|z| z.is_finite()) {
        return Err(HamiltonianError::NonFinite);
    }
    let defect = hermitian_defect(m);
    if defect > HERMITIAN_TOL {
        return Err(HamiltonianError::NotHermitian(defect));
    }
    let (min, max) = eigen_range(m);
    if min < -PSD_TOL * max.max(f64::MIN_POSITIVE) {
        return Err(HamiltonianError::NotPsd { min, max });
    }
    Ok(())
}

/// Linearly independent tensors `E^a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EBasis {
    tensors: Vec<PauliQuartet>,
}

impl EBasis {
    pub fn new(tensors: Vec<PauliQuartet>) -> Result<Self, HamiltonianError> {
        if tensors.iter().any(|t| !t.is_finite()) {
            return Err(HamiltonianError::NonFinite);
        }
        if tensors.len() > 4 {
            return Err(HamiltonianError::DependentBasis);
        }
        if !tensors.is_empty() {
            let sv = pauli::singular_values(&tensors);
            if pauli::numerical_rank(&sv, pauli::RANK_TOL) < tensors.len() {
                return Err(HamiltonianError::DependentBasis);
            }
        }
        Ok(Self { tensors })
    }

    pub fn tensors(&self) -> &[PauliQuartet] {
        &self.tensors
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }
}

/// Hermitian positive semi-definite `Λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    lambda: DMatrix<C64>,
}

impl CouplingMatrix {
    pub fn new(lambda: DMatrix<C64>) -> Result<Self, HamiltonianError> {
        if !lambda.is_square() {
            return Err(HamiltonianError::DimensionMismatch {
                want: lambda.nrows(),
                got: lambda.ncols(),
            });
        }
        check_hermitian_psd(&lambda)?;
        Ok(Self { lambda })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            lambda: DMatrix::identity(n, n),
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.lambda
    }
}

impl Serialize for CouplingMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<C64>> = self.lambda.row_iter().map(|r| r.iter().copied().collect()).collect();
        rows.serialize(s)
    }
}

/// Where a local Hamiltonian came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Family(FamilyParams),
    ESpace {
        e_basis: EBasis,
        lambda: CouplingMatrix,
    },
    Conjugated {
        base: Box<Provenance>,
        gamma: [[C64; 2]; 2],
    },
}

/// A Hermitian positive semi-definite two-site operator.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalHamiltonian {
    h: Matrix4<C64>,
    provenance: Provenance,
}

impl LocalHamiltonian {
    pub fn new(h: Matrix4<C64>, provenance: Provenance) -> Result<Self, HamiltonianError> {
        check_hermitian_psd(&DMatrix::from_iterator(4, 4, h.iter().copied()))?;
        Ok(Self { h, provenance })
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.h
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Largest entry of `h − h†` relative to the largest entry of `h`.
    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&DMatrix::from_iterator(4, 4, self.h.iter().copied()))
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let h = (self.h + self.h.adjoint()) * re(0.5);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[1], ev[2], ev[3]]
    }
}

/// `h = Σ_ab Λ_ab (E^a)† E^b`.
pub fn local_from_espace(e: &EBasis, lambda: &CouplingMatrix) -> Result<LocalHamiltonian, HamiltonianError> {
    let l = lambda.matrix();
    if l.nrows() != e.len() {
        return Err(HamiltonianError::DimensionMismatch {
            want: e.len(),
            got: l.nrows(),
        });
    }
    let rows: Vec<[C64; 4]> = e.tensors().iter().map(covector).collect();
    let h = Matrix4::from_fn(|i, j| {
        let mut acc = C64::default();
        for (a, ra) in rows.iter().enumerate() {
            for (b, rb) in rows.iter().enumerate() {
                acc += l[(a, b)] * ra[i].conj() * rb[j];
            }
        }
        acc
    });
    LocalHamiltonian::new(
        h,
        Provenance::ESpace {
            e_basis: e.clone(),
            lambda: lambda.clone(),
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyId {
    F105,
    F107,
    F108,
    F109,
    F111,
    F112,
    F116,
    F117,
    F59,
}

impl FamilyId {
    pub const ALL: [FamilyId; 9] = [
        FamilyId::F105,
        FamilyId::F107,
        FamilyId::F108,
        FamilyId::F109,
        FamilyId::F111,
        FamilyId::F112,
        FamilyId::F116,
        FamilyId::F117,
        FamilyId::F59,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::F105 => "F105",
            FamilyId::F107 => "F107",
            FamilyId::F108 => "F108",
            FamilyId::F109 => "F109",
            FamilyId::F111 => "F111",
            FamilyId::F112 => "F112",
            FamilyId::F116 => "F116",
            FamilyId::F117 => "F117",
            FamilyId::F59 => "F59",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = HamiltonianError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| HamiltonianError::UnknownFamily(s.to_string()))
    }
}

/// Complex scalars in JSON are `[re, im]`; a bare number means a real value.
#[derive(Deserialize)]
#[serde(untagged)]
enum ComplexRepr {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexRepr> for C64 {
    fn from(r: ComplexRepr) -> Self {
        match r {
            ComplexRepr::Real(x) => C64::new(x, 0.0),
            ComplexRepr::Pair([a, b]) => C64::new(a, b),
        }
    }
}

fn de_complex<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
    ComplexRepr::deserialize(d).map(Into::into)
}

fn de_complex3<'de, D: Deserializer<'de>>(d: D) -> Result<[[C64; 3]; 3], D::Error> {
    let rows = <[[ComplexRepr; 3]; 3]>::deserialize(d)?;
    Ok(rows.map(|r| r.map(Into::into)))
}

/// Parameters of one explicit family. Every field is required; unknown
/// fields are rejected when parsing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum FamilyParams {
    F105 {
        g: f64,
        #[serde(deserialize_with = "de_complex")]
        nu: C64,
        #[serde(deserialize_with = "de_complex")]
        nu_prime: C64,
    },
    F107 {
        g: f64,
    },
    F108 {
        g: f64,
    },
    F109 {
        g1: f64,
        g2: f64,
        #[serde(deserialize_with = "de_complex")]
        g3: C64,
    },
    F111 {
        g1: f64,
        g2: f64,
        #[serde(deserialize_with = "de_complex")]
        g3: C64,
    },
    F112 {
        g1: f64,
        g2: f64,
        #[serde(deserialize_with = "de_complex")]
        g3: C64,
        #[serde(deserialize_with = "de_complex")]
        nu: C64,
        #[serde(deserialize_with = "de_complex")]
        nu_prime: C64,
    },
    F116 {
        g1: f64,
        g2: f64,
        #[serde(deserialize_with = "de_complex")]
        g3: C64,
        #[serde(deserialize_with = "de_complex")]
        nu: C64,
        #[serde(deserialize_with = "de_complex")]
        nu_prime: C64,
    },
    F117 {
        g1: f64,
        g2: f64,
        #[serde(deserialize_with = "de_complex")]
        g3: C64,
    },
    F59 {
        #[serde(deserialize_with = "de_complex3")]
        lambda3: [[C64; 3]; 3],
    },
}

impl FamilyParams {
    pub fn family(&self) -> FamilyId {
        match self {
            FamilyParams::F105 { .. } => FamilyId::F105,
            FamilyParams::F107 { .. } => FamilyId::F107,
            FamilyParams::F108 { .. } => FamilyId::F108,
            FamilyParams::F109 { .. } => FamilyId::F109,
            FamilyParams::F111 { .. } => FamilyId::F111,
            FamilyParams::F112 { .. } => FamilyId::F112,
            FamilyParams::F116 { .. } => FamilyId::F116,
            FamilyParams::F117 { .. } => FamilyId::F117,
            FamilyParams::F59 { .. } => FamilyId::F59,
        }
    }

    /// Parses a JSON object carrying a `"family"` tag, then validates.
    pub fn from_json(text: &str) -> Result<Self, HamiltonianError> {
        let p: FamilyParams = serde_json::from_str(text).map_err(|e| HamiltonianError::InvalidParams {
            family: family_tag(text).unwrap_or(FamilyId::F105),
            reason: e.to_string(),
        })?;
        p.validate()?;
        Ok(p)
    }

    /// `(ν, ν′)` for the families that carry them.
    pub fn nu_pair(&self) -> Option<(C64, C64)> {
        match *self {
            FamilyParams::F105 { nu, nu_prime, .. }
            | FamilyParams::F112 { nu, nu_prime, .. }
            | FamilyParams::F116 { nu, nu_prime, .. } => Some((nu, nu_prime)),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), HamiltonianError> {
        let fail = |reason: String| {
            Err(HamiltonianError::InvalidParams {
                family: self.family(),
                reason,
            })
        };
        let finite = |x: f64| x.is_finite();
        let check_g = |g: f64| {
            if !finite(g) || g <= 0.0 {
                fail(format!("g must be a positive real, got {g}"))
            } else {
                Ok(())
            }
        };
        let check_nu = |nu: C64, nu_prime: C64| {
            if !nu.is_finite() || !nu_prime.is_finite() {
                fail("nu and nu_prime must be finite".into())
            } else if nu.norm() == 0.0 && nu_prime.norm() == 0.0 {
                fail("nu and nu_prime cannot both be zero".into())
            } else {
                Ok(())
            }
        };
        let check_coupling = |g1: f64, g2: f64, g3: C64| {
            if !finite(g1) || !finite(g2) || !g3.is_finite() {
                return fail("couplings must be finite".into());
            }
            if g1 < 0.0 || g2 < 0.0 {
                return fail(format!("g1 and g2 must be nonnegative, got {g1}, {g2}"));
            }
            let slack = 1e-12 * (g1 * g2).max(g3.norm_sqr()).max(1.0);
            if g3.norm_sqr() > g1 * g2 + slack {
                return fail(format!("need g1*g2 >= |g3|^2, got {} < {}", g1 * g2, g3.norm_sqr()));
            }
            Ok(())
        };
        match *self {
            FamilyParams::F105 { g, nu, nu_prime } => {
                check_g(g)?;
                check_nu(nu, nu_prime)
            }
            FamilyParams::F107 { g } | FamilyParams::F108 { g } => check_g(g),
            FamilyParams::F109 { g1, g2, g3 }
            | FamilyParams::F111 { g1, g2, g3 }
            | FamilyParams::F117 { g1, g2, g3 } => check_coupling(g1, g2, g3),
            FamilyParams::F112 {
                g1,
                g2,
                g3,
                nu,
                nu_prime,
            }
            | FamilyParams::F116 {
                g1,
                g2,
                g3,
                nu,
                nu_prime,
            } => {
                check_coupling(g1, g2, g3)?;
                check_nu(nu, nu_prime)
            }
            FamilyParams::F59 { lambda3 } => {
                let m = DMatrix::from_fn(3, 3, |i, j| lambda3[i][j]);
                match check_hermitian_psd(&m) {
                    Ok(()) => Ok(()),
                    Err(e) => fail(format!("lambda3: {e}")),
                }
            }
        }
    }
}

fn family_tag(text: &str) -> Option<FamilyId> {
    let v: serde_json::Value = serde_json::from_str(text).ok()?;
    v.get("family")?.as_str()?.parse().ok()
}

fn coupling2(g1: f64, g2: f64, g3: C64) -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[re(g1), g3, g3.conj(), re(g2)])
}

/// Tensors spanning the constraint space that each family is built on.
pub fn e_basis_for(p: &FamilyParams) -> EBasis {
    let zero = C64::default();
    let one = re(1.0);
    let from = |m: Mat2| PauliQuartet::from_matrix(&m);
    let e0e0 = from(m2(one, zero, zero, zero));
    let e0e1 = from(m2(zero, one, zero, zero));
    let e1e0 = from(m2(zero, zero, one, zero));
    let twisted = |nu: C64, nu_prime: C64| from(m2(zero, nu_prime, -nu, zero));
    let tensors = match *p {
        FamilyParams::F105 { nu, nu_prime, .. } => vec![twisted(nu, nu_prime)],
        FamilyParams::F107 { .. } => vec![from(m2(re(2.0), zero, zero, zero))],
        FamilyParams::F108 { .. } => vec![from(m2(re(2.0), one, -one, zero))],
        FamilyParams::F109 { .. } => vec![e0e1, e1e0],
        FamilyParams::F111 { .. } => vec![e0e0, PauliQuartet::SIGMA],
        FamilyParams::F112 { nu, nu_prime, .. } => vec![PauliQuartet::TAU0, twisted(nu, nu_prime)],
        FamilyParams::F116 { nu, nu_prime, .. } => vec![e0e0, twisted(nu, nu_prime)],
        FamilyParams::F117 { .. } => vec![from(m2(re(2.0), one, one, zero)), PauliQuartet::SIGMA],
        FamilyParams::F59 { .. } => vec![e0e0, e0e1, e1e0],
    };
    EBasis::new(tensors).expect("family tensors are independent")
}

/// `Λ` matching [`e_basis_for`].
pub fn coupling_for(p: &FamilyParams) -> DMatrix<C64> {
    match *p {
        FamilyParams::F105 { g, .. } | FamilyParams::F107 { g } | FamilyParams::F108 { g } => {
            DMatrix::from_element(1, 1, re(g))
        }
        FamilyParams::F109 { g1, g2, g3 }
        | FamilyParams::F111 { g1, g2, g3 }
        | FamilyParams::F112 { g1, g2, g3, .. }
        | FamilyParams::F116 { g1, g2, g3, .. }
        | FamilyParams::F117 { g1, g2, g3 } => coupling2(g1, g2, g3),
        FamilyParams::F59 { lambda3 } => DMatrix::from_fn(3, 3, |i, j| lambda3[i][j]),
    }
}

/// Single-site operators used by the explicit expansions.
struct Pauli {
    id: Mat2,
    s1: Mat2,
    s3: Mat2,
    sp: Mat2,
    sm: Mat2,
}

impl Pauli {
    fn new() -> Self {
        let (z, o) = (C64::default(), re(1.0));
        Self {
            id: Mat2::identity(),
            s1: m2(z, o, o, z),
            s3: m2(o, z, z, -o),
            sp: m2(z, o, z, z),
            sm: m2(z, z, o, z),
        }
    }
}

fn kr(a: &Mat2, b: &Mat2) -> Matrix4<C64> {
    a.kronecker(b)
}

/// The family's Hamiltonian written out in Pauli operators.
fn pauli_expansion(p: &FamilyParams) -> Matrix4<C64> {
    let Pauli { id, s1, s3, sp, sm } = Pauli::new();
    let ii = kr(&id, &id);
    let zz = kr(&s3, &s3);
    let zi_minus_iz = kr(&s3, &id) - kr(&id, &s3);
    let pm = kr(&sp, &sm);
    let mp = kr(&sm, &sp);
    let up = id + s3;
    let r = re;
    match *p {
        FamilyParams::F105 { g, nu, nu_prime } => {
            let a = nu.norm_sqr() + nu_prime.norm_sqr();
            let b = nu_prime.norm_sqr() - nu.norm_sqr();
            ((ii - zz) * r(a / 4.0) + zi_minus_iz * r(b / 4.0)
                - pm * (nu_prime.conj() * nu)
                - mp * (nu_prime * nu.conj()))
                * r(g)
        }
        FamilyParams::F107 { g } => kr(&up, &up) * r(g),
        FamilyParams::F108 { g } => {
            (ii * r(1.5) + kr(&id, &s3) + kr(&s3, &id) + zz * r(0.5) + kr(&up, &s1) - kr(&s1, &up) - mp - pm) * r(g)
        }
        FamilyParams::F109 { g1, g2, g3 } => {
            (ii - zz) * r((g1 + g2) / 4.0) + zi_minus_iz * r((g1 - g2) / 4.0) + pm * g3 + mp * g3.conj()
        }
        FamilyParams::F111 { g1, g2, g3 } => {
            let x = sp * g3 + sm * g3.conj();
            let half_up = up * r(0.5);
            ii * r((g1 + 2.0 * g2) / 4.0) + (kr(&s3, &id) + kr(&id, &s3)) * r(g1 / 4.0) + zz * r((g1 - 2.0 * g2) / 4.0)
                - (pm + mp) * r(g2)
                + kr(&half_up, &x)
                - kr(&x, &half_up)
        }
        FamilyParams::F112 {
            g1,
            g2,
            g3,
            nu,
            nu_prime,
        } => {
            let a = nu.norm_sqr() + nu_prime.norm_sqr();
            let b = nu_prime.norm_sqr() - nu.norm_sqr();
            let (n, np) = (nu, nu_prime);
            let (nc, npc) = (nu.conj(), nu_prime.conj());
            let g3_part = (kr(&id, &(sp * np - sm * n)) + kr(&(sm * np - sp * n), &id) + kr(&s3, &(sp * np + sm * n))
                - kr(&(sm * np + sp * n), &s3))
                * (g3 * 0.5);
            let g3c_part =
                (kr(&id, &(sm * npc - sp * nc)) + kr(&(sp * npc - sm * nc), &id) + kr(&s3, &(sm * npc + sp * nc))
                    - kr(&(sp * npc + sm * nc), &s3))
                    * (g3.conj() * 0.5);
            ii * r((2.0 * g1 + g2 * a) / 4.0)
                + zz * r((2.0 * g1 - g2 * a) / 4.0)
                + (kr(&sp, &sp) + kr(&sm, &sm)) * r(g1)
                - (pm * (npc * n) + mp * (np * nc)) * r(g2)
                + zi_minus_iz * r(g2 * b / 4.0)
                + g3_part
                + g3c_part
        }
        FamilyParams::F116 {
            g1,
            g2,
            g3,
            nu,
            nu_prime,
        } => {
            let a = nu.norm_sqr() + nu_prime.norm_sqr();
            let b = nu_prime.norm_sqr() - nu.norm_sqr();
            let (n, np) = (nu, nu_prime);
            let (nc, npc) = (nu.conj(), nu_prime.conj());
            let g3_part = (kr(&id, &sp) * np - kr(&sp, &id) * n + kr(&s3, &sp) * np - kr(&sp, &s3) * n) * (g3 * 0.5);
            let g3c_part =
                (kr(&id, &sm) * npc - kr(&sm, &id) * nc + kr(&s3, &sm) * npc - kr(&sm, &s3) * nc) * (g3.conj() * 0.5);
            kr(&up, &up) * r(g1 / 4.0) + (ii - zz) * r(g2 * a / 4.0) - (pm * (npc * n) + mp * (np * nc)) * r(g2)
                + zi_minus_iz * r(g2 * b / 4.0)
                + g3_part
                + g3c_part
        }
        FamilyParams::F117 { g1, g2, g3 } => {
            let x = sp * g3 + sm * g3.conj();
            let zx = s3 + s1;
            ii * r((3.0 * g1 + g2) / 2.0)
                + zz * r((g1 - g2) / 2.0)
                + (pm + mp) * r(g1 - g2)
                + (kr(&s3, &s1) + kr(&s1, &s3)) * r(g1)
                + (kr(&zx, &id) + kr(&id, &zx)) * r(g1)
                + kr(&up, &x)
                - kr(&x, &up)
                + (pm - mp) * (g3.conj() - g3)
                + zi_minus_iz * r(g3.re)
        }
        FamilyParams::F59 { lambda3 } => {
            // Λ placed on the block spanned by 00, 01, 10
            Matrix4::from_fn(|i, j| if i < 3 && j < 3 { lambda3[i][j] } else { C64::default() })
        }
    }
}

/// The explicit family Hamiltonian.
pub fn build_family(p: &FamilyParams) -> Result<LocalHamiltonian, HamiltonianError> {
    p.validate()?;
    LocalHamiltonian::new(pauli_expansion(p), Provenance::Family(p.clone()))
}

/// The same family assembled from its tensors and coupling matrix.
pub fn build_family_from_espace(p: &FamilyParams) -> Result<LocalHamiltonian, HamiltonianError> {
    p.validate()?;
    local_from_espace(&e_basis_for(p), &CouplingMatrix::new(coupling_for(p))?)
}

/// `h′ = (Γ† ⊗ Γ†) h (Γ ⊗ Γ)`.
pub fn conjugate_local(h: &LocalHamiltonian, g: &Sl2) -> LocalHamiltonian {
    let gg = kr(g.matrix(), g.matrix());
    let m = gg.adjoint() * h.matrix() * gg;
    let m = (m + m.adjoint()) * re(0.5);
    let gm = g.matrix();
    LocalHamiltonian {
        h: m,
        provenance: Provenance::Conjugated {
            base: Box::new(h.provenance.clone()),
            gamma: [[gm[(0, 0)], gm[(0, 1)]], [gm[(1, 0)], gm[(1, 1)]]],
        },
    }
}

/// Dense open-chain Hamiltonian `Σᵢ id ⊗ … ⊗ h_{i,i+1} ⊗ … ⊗ id`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullHamiltonian {
    n_sites: usize,
    matrix: DMatrix<C64>,
}

impl FullHamiltonian {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }
}

pub fn full_chain(h: &LocalHamiltonian, n: usize) -> Result<FullHamiltonian, HamiltonianError> {
    full_chain_with_limit(h, n, DEFAULT_MAX_SITES)
}

pub fn full_chain_with_limit(
    h: &LocalHamiltonian,
    n: usize,
    max_sites: usize,
) -> Result<FullHamiltonian, HamiltonianError> {
    if !(2..=max_sites).contains(&n) || n >= usize::BITS as usize / 2 {
        return Err(HamiltonianError::SitesOutOfRange { n, max: max_sites });
    }
    let dim = 1usize << n;
    let hm = h.matrix();
    let mut out = DMatrix::<C64>::zeros(dim, dim);
    for bond in 0..n - 1 {
        // sites `bond` and `bond + 1`; site 0 is the most significant bit
        let shift = n - 2 - bond;
        let mask = 3usize << shift;
        for x in 0..dim {
            let local_in = (x >> shift) & 3;
            let rest = x & !mask;
            for local_out in 0..4 {
                let v = hm[(local_out, local_in)];
                if v != C64::default() {
                    out[(rest | (local_out << shift), x)] += v;
                }
            }
        }
    }
    Ok(FullHamiltonian {
        n_sites: n,
        matrix: out,
    })
}
