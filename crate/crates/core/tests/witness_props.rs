use proptest::prelude::*;
use qwit_core::operator::{eig_hermitian, is_psd, CMatrix, HermitianOperator, C64};
use qwit_core::rng::{random_density_op, random_unit_vector, rng_for};
use qwit_core::states::{bloch_decompose, maximally_mixed, DensityMatrix};
use qwit_core::witness::{
    build_c, build_v, construct_for_state, rank1_anticommutator_eigs, rank1_anticommutator_matrix, square_difference_residual,
};
use qwit_core::QwitError;

/// `Tr(ρ (XY + YX))` by explicit index sums.
fn direct_trace(rho: &CMatrix, x: &CMatrix, y: &CMatrix) -> f64 {
    let n = rho.dim();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                s += rho.get(i, j) * (x.get(j, k) * y.get(k, i) + y.get(j, k) * x.get(k, i));
            }
        }
    }
    s.re
}

fn sorted_eigs(rho: &DensityMatrix) -> Vec<f64> {
    let mut e = eig_hermitian(rho.op()).eigenvalues;
    e.sort_by(|a, b| b.partial_cmp(a).unwrap());
    e
}

#[test]
fn state_witness_on_200_qubit_states() {
    let mut done = 0;
    let mut i = 0u64;
    while done < 200 {
        let rho = DensityMatrix::new(random_density_op(&mut rng_for(0x7E02, i), 2)).unwrap();
        i += 1;
        let r = bloch_decompose(&rho).unwrap().r;
        if r <= 0.05 {
            continue;
        }
        let w = construct_for_state(&rho, None).unwrap();
        let alpha = r / 2.0;
        assert!((w.alpha - alpha).abs() < 1e-12);
        let (x, y) = (&w.report.constituents[0], &w.report.constituents[1]);
        assert!(is_psd(x, 1e-10) && is_psd(y, 1e-10));
        let direct = direct_trace(rho.op().matrix(), x.matrix(), y.matrix());
        assert!((direct - alpha * (alpha - r)).abs() < 1e-10, "state {i}: {direct} vs {}", alpha * (alpha - r));
        assert!(direct < 0.0);
        done += 1;
    }
}

#[test]
fn state_witness_alpha_sweep() {
    let rho = DensityMatrix::new(random_density_op(&mut rng_for(3, 3), 2)).unwrap();
    let r = bloch_decompose(&rho).unwrap().r;
    for k in 1..10 {
        let alpha = r * k as f64 / 10.0;
        let w = construct_for_state(&rho, Some(alpha)).unwrap();
        let direct = direct_trace(rho.op().matrix(), w.report.constituents[0].matrix(), w.report.constituents[1].matrix());
        assert!((direct - alpha * (alpha - r)).abs() < 1e-10);
    }
    assert!(construct_for_state(&rho, Some(r)).is_err());
    assert!(construct_for_state(&rho, Some(0.0)).is_err());
}

#[test]
fn maximally_mixed_has_no_witness() {
    for n in 1..5 {
        assert!(matches!(construct_for_state(&maximally_mixed(n).unwrap(), None), Err(QwitError::NoWitnessExists)));
    }
}

#[test]
fn state_witness_in_dims_3_and_4() {
    for dim in [3usize, 4] {
        for i in 0..50u64 {
            let rho = DensityMatrix::new(random_density_op(&mut rng_for(0xD1A + dim as u64, i), dim)).unwrap();
            let e = sorted_eigs(&rho);
            let (r1, r2) = if (e[0] - e[1]).abs() > 1e-12 { (e[0], e[1]) } else { (e[0], e[dim - 1]) };
            let r_eff = (r1 - r2) / (r1 + r2);
            let w = construct_for_state(&rho, None).unwrap();
            let direct = direct_trace(rho.op().matrix(), w.report.constituents[0].matrix(), w.report.constituents[1].matrix());
            let alpha = r_eff / 2.0;
            assert!((direct - (r1 + r2) * alpha * (alpha - r_eff)).abs() < 1e-10, "dim {dim} state {i}");
            assert!((direct - w.mean).abs() < 1e-10);
            assert!(direct < 0.0);
        }
    }
}

#[test]
fn rank1_eigenvalues_match_eig_for_50_cases() {
    for i in 0..50u64 {
        let mut rng = rng_for(0x4A1, i);
        let a = random_unit_vector(&mut rng, 2);
        let d = random_unit_vector(&mut rng, 2);
        let ov: C64 = a.iter().zip(&d).map(|(x, y)| x.conj() * y).sum();
        let alpha = ov.norm();
        // {|a><a|, |d><d|} has eigenvalues |⟨a|d⟩|(|⟨a|d⟩| ± 1) and zeros
        let c = build_c(&HermitianOperator::projector(&a), &HermitianOperator::projector(&d), 1e-10).unwrap();
        let e = eig_hermitian(&c.witness).eigenvalues;
        assert!((e[0] - alpha * (alpha - 1.0)).abs() < 1e-12, "case {i}");
        assert!((e[1] - alpha * (alpha + 1.0)).abs() < 1e-12, "case {i}");
        let (hi, lo) = rank1_anticommutator_eigs(alpha).unwrap();
        assert!((lo - e[0]).abs() < 1e-12 && (hi - e[1]).abs() < 1e-12);
        let m = rank1_anticommutator_matrix(alpha, C64::new((1.0 - alpha * alpha).sqrt(), 0.0));
        let em = eig_hermitian(&m).eigenvalues;
        assert!((em[0] - lo).abs() < 1e-12 && (em[1] - hi).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn v_witness_is_b2_minus_a2(seed in any::<u64>(), dim in 1usize..5) {
        let mut rng = rng_for(seed, 0);
        let a = random_density_op(&mut rng, dim);
        let gap = random_density_op(&mut rng, dim);
        let b = a.add(&gap).unwrap();
        let rep = build_v(&a, &b, 1e-10).unwrap();
        let direct = b.matrix().mul(b.matrix()).unwrap().sub(&a.matrix().mul(a.matrix()).unwrap()).unwrap();
        prop_assert!(rep.witness.matrix().max_abs_diff(&direct) < 1e-12);
        let v = &rep.certifying_vector;
        prop_assert!((rep.witness.sandwich(v) - rep.lambda_min).abs() < 1e-8);
        prop_assert!(square_difference_residual(&a, &b).unwrap() < 1e-12);
    }
}
