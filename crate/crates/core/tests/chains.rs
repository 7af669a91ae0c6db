use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nnmps::classifier::{classify, CaseId};
use nnmps::hamiltonian::{
    build_family, e_basis_for, full_chain, full_chain_with_limit, FamilyId, FamilyParams, HamiltonianError,
};
use nnmps::sampling::{random_family_params, random_sl2};
use nnmps::states::{catalogue, product_state, psi_k, transform_state};
use nnmps::verifier::{check_zero_member, covariance_check, spectrum};
use nnmps::{CSpace, C64};

/// `Σ_i 1 ⊗ … ⊗ h_{i,i+1} ⊗ … ⊗ 1` by explicit Kronecker products.
fn kron_chain(h: &DMatrix<C64>, n: usize) -> DMatrix<C64> {
    let dim = 1 << n;
    let mut total = DMatrix::zeros(dim, dim);
    for bond in 0..n - 1 {
        let left = DMatrix::<C64>::identity(1 << bond, 1 << bond);
        let right_sites = n - bond - 2;
        let right = DMatrix::<C64>::identity(1 << right_sites, 1 << right_sites);
        total += left.kronecker(h).kronecker(&right);
    }
    total
}

fn no_adjacent_zeros(n: usize) -> usize {
    (0..1usize << n)
        .filter(|x| (0..n - 1).all(|i| (x >> i) & 3 != 0))
        .count()
}

#[test]
fn chain_matches_kronecker_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for family in FamilyId::ALL {
        let h = build_family(&random_family_params(&mut rng, family, false)).unwrap();
        let h4 = DMatrix::from_fn(4, 4, |i, j| h.matrix()[(i, j)]);
        for n in 2..=6 {
            let chain = full_chain(&h, n).unwrap();
            let diff = (chain.matrix() - kron_chain(&h4, n)).norm();
            assert!(diff <= 1e-13, "{family} N={n}: {diff}");
        }
    }
}

#[test]
fn hardcore_kernel_counts_by_enumeration() {
    let h = build_family(&FamilyParams::F107 { g: 0.3 }).unwrap();
    for n in 2..=9 {
        let r = spectrum(&full_chain(&h, n).unwrap(), 4).unwrap();
        assert_eq!(r.kernel_dim, no_adjacent_zeros(n), "N={n}");
        assert!(r.ground_energy.abs() < 1e-12);
    }
}

#[test]
fn chains_are_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for family in FamilyId::ALL {
        for boundary in [false, true] {
            let h = build_family(&random_family_params(&mut rng, family, boundary)).unwrap();
            let r = spectrum(&full_chain(&h, 5).unwrap(), 2).unwrap();
            let scale = r.lowest_k_eigenvalues.last().unwrap().abs().max(1.0);
            assert!(r.ground_energy >= -1e-10 * scale, "{family}: {}", r.ground_energy);
        }
    }
}

#[test]
fn catalogued_states_against_the_spectrum() {
    // every state that passes the residual test lies in the computed kernel
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for family in [
        FamilyId::F108,
        FamilyId::F109,
        FamilyId::F111,
        FamilyId::F116,
        FamilyId::F117,
        FamilyId::F59,
    ] {
        let p = random_family_params(&mut rng, family, false);
        let chain = full_chain(&build_family(&p).unwrap(), 6).unwrap();
        let r = spectrum(&chain, 4).unwrap();
        assert!(r.kernel_dim >= 1, "{family}");
        for c in catalogue(&p, 6).unwrap() {
            assert!(
                check_zero_member(&chain, &c.state).unwrap() <= 1e-12,
                "{family} {}",
                c.label
            );
        }
    }
}

#[test]
fn sign_alternating_xx_chain() {
    // ν′ = −ν: every ψ_k is annihilated; ψ_k wants a root-of-unity ratio
    let one = C64::new(1.0, 0.0);
    let h = build_family(&FamilyParams::F105 {
        g: 1.0,
        nu: one,
        nu_prime: -one,
    })
    .unwrap();
    let chain = full_chain(&h, 6).unwrap();
    for k in 0..=3 {
        let psi = psi_k(6, 2, k, -one).unwrap();
        assert!(check_zero_member(&chain, &psi).unwrap() < 1e-14, "k={k}");
    }
    assert!(psi_k(6, 2, 1, C64::new(0.3, 0.2)).is_err());
}

#[test]
fn covariance_holds_off_the_unitary_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let p = random_family_params(&mut rng, FamilyId::F109, false);
    let h = build_family(&p).unwrap();
    let psi = product_state(1, 5).unwrap();
    for _ in 0..10 {
        let g = random_sl2(&mut rng, 50.0);
        assert!(covariance_check(&h, &psi, &g, 5).unwrap() < 1e-12);
        // Γ⁻¹ is invertible, so the image never collapses
        assert!(transform_state(&psi, &g).norm() > 0.0);
    }
}

#[test]
fn site_guards() {
    let h = build_family(&FamilyParams::F107 { g: 1.0 }).unwrap();
    assert!(matches!(
        full_chain(&h, 1),
        Err(HamiltonianError::SitesOutOfRange { .. })
    ));
    assert!(matches!(
        full_chain(&h, 15),
        Err(HamiltonianError::SitesOutOfRange { .. })
    ));
    assert!(matches!(
        full_chain_with_limit(&h, 4, 3),
        Err(HamiltonianError::SitesOutOfRange { .. })
    ));
    assert!(full_chain_with_limit(&h, 3, 3).is_ok());
}

#[test]
fn f112_branches_classify() {
    let nu = C64::new(0.8, -0.3);
    for (nu_prime, want) in [(-nu, CaseId::C55), (nu, CaseId::C51)] {
        let p = FamilyParams::F112 {
            g1: 1.0,
            g2: 1.0,
            g3: C64::new(0.0, 0.0),
            nu,
            nu_prime,
        };
        let span = CSpace::new(e_basis_for(&p).tensors().to_vec()).unwrap();
        let r = classify(&span).unwrap();
        assert_eq!(r.form.case(), want);
        if want == CaseId::C55 {
            assert!(r.form.mu().unwrap().norm() < 1e-12);
        }
    }
}
