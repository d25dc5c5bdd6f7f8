use proptest::prelude::*;
use qwit_core::bell::{bell_operator, chsh_report, chsh_xy, identity_audit, lhv_chsh_bound, BellSetting};
use qwit_core::collective::{collective_witness, product_state_mean, product_vector, scaling_report};
use qwit_core::operator::{eig_hermitian, is_psd, kron, CMatrix, HermitianOperator};
use qwit_core::optimal::optimal_pair;
use qwit_core::rng::{random_density_op, random_unit_vector, rng_for};

#[test]
fn collective_scaling_for_optimal_pair() {
    let (a, b) = optimal_pair();
    let rep = scaling_report(&a, &b, 4).unwrap();
    assert!((rep.mu - 4.0 / 27.0).abs() < 1e-12);
    for row in &rep.rows {
        assert!(row.lambda_min >= -(4.0 / 27.0) / row.n as f64 - 1e-9, "N = {}", row.n);
        assert!(row.cross_psd && row.cross_lambda_min >= -1e-10);
        assert!(row.decomposition_residual <= 1e-10 && row.cross_form_residual <= 1e-10);
    }
    assert!((rep.rows[0].lambda_min + 4.0 / 27.0).abs() < 1e-12);
}

#[test]
fn product_state_closed_form_matches_brute_force() {
    let (a, b) = optimal_pair();
    for n in 1..=4 {
        let w = collective_witness(&a, &b, n).unwrap();
        for i in 0..10u64 {
            let psi = random_unit_vector(&mut rng_for(0xC011 + n as u64, i), 2);
            let big = product_vector(&psi, n);
            let brute = w.v.sandwich(&big);
            assert!((brute - product_state_mean(&a, &b, &psi, n)).abs() < 1e-10, "N = {n}, state {i}");
        }
    }
}

#[test]
fn collective_rejects_unordered_pair() {
    let (a, b) = optimal_pair();
    assert!(collective_witness(&b, &a, 2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn collective_bound_for_random_ordered_pairs(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = rng_for(seed, 0);
        let a = random_density_op(&mut rng, 2);
        let b = a.add(&random_density_op(&mut rng, 2).scale(0.5)).unwrap();
        let rep = scaling_report(&a, &b, n).unwrap();
        for row in &rep.rows {
            prop_assert!(row.lambda_min >= -rep.mu / row.n as f64 - 1e-9);
            prop_assert!(row.cross_lambda_min >= -1e-10);
        }
    }
}

fn lift_pair(x: &HermitianOperator, y: &HermitianOperator) -> CMatrix {
    kron(x, y).into_matrix()
}

/// `4𝓑 - {X, Y} - [A₁, A₂] ⊗ [B₁, B₂]`, assembled from scratch.
fn identity_defect(s: &BellSetting) -> f64 {
    let (a1, a2, b1, b2) = (s.a1.op(), s.a2.op(), s.b1.op(), s.b2.op());
    let (x, y) = chsh_xy(s);
    let anti = x.matrix().mul(y.matrix()).unwrap().add(&y.matrix().mul(x.matrix()).unwrap()).unwrap();
    let ca = a1.matrix().mul(a2.matrix()).unwrap().sub(&a2.matrix().mul(a1.matrix()).unwrap()).unwrap();
    let cb = b1.matrix().mul(b2.matrix()).unwrap().sub(&b2.matrix().mul(b1.matrix()).unwrap()).unwrap();
    let chsh = lift_pair(a1, b1)
        .add(&lift_pair(a1, b2))
        .unwrap()
        .add(&lift_pair(a2, b1))
        .unwrap()
        .sub(&lift_pair(a2, b2))
        .unwrap();
    let dim = chsh.dim();
    let bell4 = CMatrix::identity(dim).scale_re(8.0).add(&chsh.scale_re(4.0 * s.sign)).unwrap();
    bell4.sub(&anti).unwrap().sub(&ca.kron(&cb)).unwrap().max_abs()
}

#[test]
fn chsh_identity_over_100_seeds() {
    for dim in [2usize, 3] {
        for i in 0..100u64 {
            let s = BellSetting::random(dim, 0xBE11 ^ (i << 8) ^ dim as u64).unwrap();
            let (x, y) = chsh_xy(&s);
            assert!(is_psd(&x, 1e-10) && is_psd(&y, 1e-10));
            assert!(identity_defect(&s) < 1e-10);
            let audit = identity_audit(&s);
            assert_eq!(audit.k_star(), Some(4), "dim {dim} seed {i}: {:?}", audit.residuals);
            // bell operator bounded below by the Tsirelson value
            assert!(eig_hermitian(&bell_operator(&s)).min() >= 2.0 - 2.0 * 2f64.sqrt() - 1e-10);
        }
    }
}

#[test]
fn chsh_reference_values() {
    let lhv = lhv_chsh_bound();
    assert_eq!(lhv.bound, 2.0);
    assert!(lhv.positivity_holds);
    assert_eq!(lhv.values.len(), 16);
    let t = eig_hermitian(&bell_operator(&BellSetting::tsirelson())).min();
    assert!((t - (2.0 - 2.0 * 2f64.sqrt())).abs() < 1e-10);
    let rep = chsh_report(100, &[2, 3], 1).unwrap();
    assert_eq!(rep.k_star, Some(4));
    assert!(!rep.reference_factor_matches);
    assert!(rep.max_residual <= 1e-10);
    assert!(rep.xy_min_eigenvalue >= -1e-10);
}
