//! Seeded random sampling shared by the batch verifications.
//!
//! Every batch item gets its own ChaCha8 stream seeded from
//! `derive_seed(master, index)`, so results do not depend on evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::operator::{fix_phase, normalize, CMatrix, HermitianOperator, C64};

/// Default master seed used by the CLI and the acceptance suite.
pub const DEFAULT_SEED: u64 = 0x5157_4954_0000_0001;

/// SplitMix64 finalizer applied to `master ^ golden * (index + 1)`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, index))
}

pub fn complex_gaussian<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Unitary from modified Gram-Schmidt on the columns of a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, dim: usize) -> CMatrix {
    let raw: Vec<Vec<C64>> = (0..dim).map(|_| (0..dim).map(|_| complex_gaussian(rng)).collect()).collect();
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for mut c in raw {
        for q in &cols {
            let proj: C64 = q.iter().zip(&c).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in c.iter_mut().zip(q) {
                *x -= proj * y;
            }
        }
        cols.push(normalize(&c));
    }
    crate::operator::from_columns(&cols)
}

/// Haar-ish random unit vector.
pub fn random_unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    let mut v = normalize(&v);
    fix_phase(&mut v);
    v
}

/// Random density matrix `G G† / Tr(G G†)` with a complex Gaussian `G`.
pub fn random_density_op<R: Rng>(rng: &mut R, dim: usize) -> HermitianOperator {
    let g = CMatrix::from_vec(dim, (0..dim * dim).map(|_| complex_gaussian(rng)).collect()).unwrap();
    let m = g.mul(&g.adjoint()).unwrap();
    let tr = m.trace().re;
    HermitianOperator::hermitian_part(&m.scale_re(1.0 / tr))
}

/// Random Hermitian matrix with Gaussian entries of the given scale.
pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> HermitianOperator {
    let g = CMatrix::from_vec(dim, (0..dim * dim).map(|_| complex_gaussian(rng) * scale).collect()).unwrap();
    HermitianOperator::hermitian_part(&g)
}
