use nalgebra::{DMatrix, Matrix2};
use proptest::prelude::*;

use nnmps::hamiltonian::{FamilyId, FamilyParams};
use nnmps::pauli::{PauliQuartet, Sl2};
use nnmps::states::{mps_contract, transform_state, zeta_weight, BasisString, MpsSpec, StateVector};
use nnmps::C64;

fn c64() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| C64::new(a, b))
}

fn quartet() -> impl Strategy<Value = PauliQuartet> {
    (c64(), c64(), c64(), c64()).prop_map(|(a, b, c, d)| PauliQuartet::new(a, b, c, d))
}

/// Invertible 2×2 with determinant bounded away from zero, rescaled to SL2.
fn sl2() -> impl Strategy<Value = Sl2> {
    (c64(), c64(), c64(), c64())
        .prop_filter("well conditioned", |(a, b, c, d)| (a * d - b * c).norm() > 0.1)
        .prop_map(|(a, b, c, d)| Sl2::from_invertible(Matrix2::new(a, b, c, d)).unwrap())
}

fn close(a: &PauliQuartet, b: &PauliQuartet, tol: f64) -> bool {
    (*a - *b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #[test]
    fn action_is_a_homomorphism(g in sl2(), h in sl2(), c in quartet()) {
        let composed = g.then(&h).act(&c);
        let stepwise = h.act(&g.act(&c));
        prop_assert!(close(&composed, &stepwise, 1e-9));
    }

    #[test]
    fn action_agrees_with_matrix_congruence(g in sl2(), c in quartet()) {
        let m = g.matrix();
        let direct = PauliQuartet::from_matrix(&(m.transpose() * c.to_matrix() * m));
        prop_assert!(close(&g.act(&c), &direct, 1e-12));
    }

    #[test]
    fn basis_strings_round_trip(n in 1usize..16, x in any::<u32>()) {
        let x = x as usize & ((1 << n) - 1);
        let s = BasisString::from_index(x, n);
        prop_assert_eq!(s.index(), x);
        prop_assert_eq!(s.to_string().parse::<BasisString>().unwrap(), s);
    }

    #[test]
    fn zeta_exponent_counts_inversions(n in 1usize..12, x in any::<u32>(), q in c64()) {
        let s = BasisString::from_index(x as usize & ((1 << n) - 1), n);
        let a = s.alphas();
        // pairs (i < j) with a one before a zero
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i] == 1 && a[j] == 0)
            .count();
        let want = q.powu(inversions as u32);
        prop_assert!((zeta_weight(&s, q) - want).norm() <= 1e-12);
    }

    #[test]
    fn transforms_compose(n in 1usize..6, g in sl2(), h in sl2(), seed in any::<u64>()) {
        let dim = 1 << n;
        let amps = nalgebra::DVector::from_fn(dim, |i, _| C64::new(((seed >> (i % 60)) & 7) as f64 - 3.0, i as f64));
        let psi = StateVector::new(n, amps).unwrap();
        let two = transform_state(&transform_state(&psi, &g), &h);
        let one = transform_state(&psi, &g.then(&h));
        let err = (two.amplitudes() - one.amplitudes()).norm();
        prop_assert!(err <= 1e-8 * (1.0 + one.norm()), "{}", err);
    }

    #[test]
    fn bond_dimension_one_is_a_product(n in 1usize..8, a in c64(), b in c64()) {
        let spec = MpsSpec::new(DMatrix::from_element(1, 1, a), DMatrix::from_element(1, 1, b)).unwrap();
        let c = mps_contract(&spec, n).unwrap();
        for x in 0..1usize << n {
            let ones = x.count_ones();
            let want = a.powu(n as u32 - ones) * b.powu(ones);
            prop_assert!((c.raw.amplitudes()[x] - want).norm() <= 1e-14);
        }
        let z = (a.norm_sqr() + b.norm_sqr()).powi(n as i32);
        prop_assert!((c.z - z).abs() <= 1e-12 * z.max(1e-300));
    }

    #[test]
    fn params_survive_json(g1 in 0.0..2.0f64, g2 in 0.0..2.0f64, t in 0.0..1.0f64, nu in c64(), nu_prime in c64()) {
        prop_assume!(nu.norm() + nu_prime.norm() > 1e-6);
        let g3 = C64::from_polar((g1 * g2).sqrt() * t, 1.0);
        let p = FamilyParams::F116 { g1, g2, g3, nu, nu_prime };
        let text = serde_json::to_string(&p).unwrap();
        let back = FamilyParams::from_json(&text).unwrap();
        prop_assert_eq!(back.family(), FamilyId::F116);
        prop_assert_eq!(back, p);
    }
}
