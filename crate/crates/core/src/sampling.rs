//! Seeded random draws used by the property tests and the CLI.

use nalgebra::{DMatrix, Matrix2};
use rand::Rng;

use crate::hamiltonian::{FamilyId, FamilyParams};
use crate::pauli::{PauliQuartet, Sl2};
use crate::C64;

/// Complex number with both parts uniform in `[-1, 1)`.
pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn quartet<R: Rng + ?Sized>(rng: &mut R) -> PauliQuartet {
    PauliQuartet::new(complex(rng), complex(rng), complex(rng), complex(rng))
}

/// Haar-distributed element of SU(2).
pub fn random_unitary_sl2<R: Rng + ?Sized>(rng: &mut R) -> Sl2 {
    // a uniform point on S³ via rejection from the cube
    let q = loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = q.iter().map(|x| x * x).sum::<f64>();
        if n > 1e-6 && n <= 1.0 {
            let n = n.sqrt();
            break q.map(|x| x / n);
        }
    };
    let a = C64::new(q[0], q[1]);
    let b = C64::new(q[2], q[3]);
    Sl2::from_invertible(Matrix2::new(a, -b.conj(), b, a.conj())).expect("unit quaternion")
}

/// `U · diag(s, 1/s) · W` with `U, W ∈ SU(2)` and `s² ∈ [1, max_condition]`,
/// so the condition number never exceeds the bound.
pub fn random_sl2<R: Rng + ?Sized>(rng: &mut R, max_condition: f64) -> Sl2 {
    assert!(max_condition >= 1.0, "condition number bound below one");
    let s = rng.random_range(1.0..=max_condition).sqrt();
    let d = Sl2::from_invertible(Matrix2::new(
        C64::new(s, 0.0),
        C64::default(),
        C64::default(),
        C64::new(1.0 / s, 0.0),
    ))
    .expect("diagonal");
    random_unitary_sl2(rng).then(&d).then(&random_unitary_sl2(rng))
}

fn coupling<R: Rng + ?Sized>(rng: &mut R, boundary: bool) -> (f64, f64, C64) {
    let g1: f64 = rng.random_range(0.0..2.0);
    let g2: f64 = rng.random_range(0.0..2.0);
    let r = (g1 * g2).sqrt() * if boundary { 1.0 } else { rng.random_range(0.0..1.0) };
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    (g1, g2, C64::from_polar(r, phase))
}

fn nu_pair<R: Rng + ?Sized>(rng: &mut R) -> (C64, C64) {
    loop {
        let (nu, nu_prime) = (complex(rng), complex(rng));
        if nu.norm() + nu_prime.norm() > 1e-3 {
            return (nu, nu_prime);
        }
    }
}

/// Valid parameters for `family`. With `boundary` the coupling sits on
/// `g1·g2 = |g3|²` (and the 3×3 coupling is rank deficient).
pub fn random_family_params<R: Rng + ?Sized>(rng: &mut R, family: FamilyId, boundary: bool) -> FamilyParams {
    let g = rng.random_range(0.1..2.0);
    match family {
        FamilyId::F105 => {
            let (nu, nu_prime) = nu_pair(rng);
            FamilyParams::F105 { g, nu, nu_prime }
        }
        FamilyId::F107 => FamilyParams::F107 { g },
        FamilyId::F108 => FamilyParams::F108 { g },
        FamilyId::F109 => {
            let (g1, g2, g3) = coupling(rng, boundary);
            FamilyParams::F109 { g1, g2, g3 }
        }
        FamilyId::F111 => {
            let (g1, g2, g3) = coupling(rng, boundary);
            FamilyParams::F111 { g1, g2, g3 }
        }
        FamilyId::F112 => {
            let (g1, g2, g3) = coupling(rng, boundary);
            let (nu, nu_prime) = nu_pair(rng);
            FamilyParams::F112 {
                g1,
                g2,
                g3,
                nu,
                nu_prime,
            }
        }
        FamilyId::F116 => {
            let (g1, g2, g3) = coupling(rng, boundary);
            let (nu, nu_prime) = nu_pair(rng);
            FamilyParams::F116 {
                g1,
                g2,
                g3,
                nu,
                nu_prime,
            }
        }
        FamilyId::F117 => {
            let (g1, g2, g3) = coupling(rng, boundary);
            FamilyParams::F117 { g1, g2, g3 }
        }
        FamilyId::F59 => {
            let rank = if boundary { 2 } else { 3 };
            let b = DMatrix::from_fn(rank, 3, |_, _| complex(rng));
            let lambda = b.adjoint() * b;
            // symmetrize away rounding so the Hermitian check is exact
            let lambda = (&lambda + lambda.adjoint()) * C64::new(0.5, 0.0);
            FamilyParams::F59 {
                lambda3: std::array::from_fn(|i| std::array::from_fn(|j| lambda[(i, j)])),
            }
        }
    }
}
