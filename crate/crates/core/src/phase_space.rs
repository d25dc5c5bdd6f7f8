//! Truncated single-mode oscillator and phase-space witnesses.
//!
//! `K_m = (a†)²a² - 2m a†a + m² = N² - (2m + 1)N + m²` has symbol
//! `k_m(z) = (|z|² - m)² >= 0`, so its mean is nonnegative on every mixture of
//! coherent states, while Fock levels inside the window
//! `(m + ½ - √(m + ¼), m + ½ + √(m + ¼))` give negative means.
//!
//! The truncation keeps levels `0..D`. The lowering operator is exact on
//! that space, so `a†a = N` exactly, but `[a, a†]` differs from the identity
//! in the `(D-1, D-1)` corner.

use serde_json::{Map, Value};

use crate::error::{QwitError, Result};
use crate::format;
use crate::operator::{eig_hermitian, CMatrix, HermitianOperator, C64};

pub const DEFAULT_TAIL_BUDGET: f64 = 1e-12;
pub const MIN_CUTOFF: usize = 16;
/// Hard ceiling on automatically chosen cutoffs.
pub const MAX_CUTOFF: usize = 1024;

#[derive(Clone, Debug)]
pub struct FockTruncation {
    d: usize,
    a: CMatrix,
    n_op: HermitianOperator,
}

impl FockTruncation {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(QwitError::Precondition(format!("cutoff D = {d} must be at least 2")));
        }
        let mut a = CMatrix::zeros(d);
        for n in 1..d {
            a.set(n - 1, n, C64::new((n as f64).sqrt(), 0.0));
        }
        let n_op = HermitianOperator::diagonal(&(0..d).map(|n| n as f64).collect::<Vec<_>>());
        Ok(FockTruncation { d, a, n_op })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Lowering operator.
    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn a_dag(&self) -> CMatrix {
        self.a.adjoint()
    }

    pub fn n_op(&self) -> &HermitianOperator {
        &self.n_op
    }

    /// `[a, a†]` on the truncated space.
    pub fn ladder_commutator(&self) -> CMatrix {
        crate::operator::commutator(&self.a, &self.a_dag()).unwrap()
    }

    /// `(a†)^m a^n`
    pub fn normal_ordered(&self, m: usize, n: usize) -> CMatrix {
        let ad = self.a_dag();
        let mut out = CMatrix::identity(self.d);
        for _ in 0..m {
            out = out.mul(&ad).unwrap();
        }
        for _ in 0..n {
            out = out.mul(&self.a).unwrap();
        }
        out
    }
}

/// Diagonal entry of `K_m` at level `n`, in exact integer arithmetic.
pub fn k_m_entry(m: u64, n: u64) -> i64 {
    let (m, n) = (m as i64, n as i64);
    n * n - (2 * m + 1) * n + m * m
}

pub fn window_bounds(m: u64) -> (f64, f64) {
    let c = m as f64 + 0.5;
    let r = (m as f64 + 0.25).sqrt();
    (c - r, c + r)
}

/// Smallest cutoff `D` keeping the negative window of `K_m` inside the truncation.
pub fn min_cutoff_for_window(m: u64) -> usize {
    (m as f64 + 1.0 + (m as f64 + 0.25).sqrt()).floor() as usize + 1
}

/// `K_m`, built from the integer diagonal so entries are exact.
pub fn k_m_operator(trunc: &FockTruncation, m: u64) -> Result<HermitianOperator> {
    if m == 0 {
        return Err(QwitError::Precondition("m must be at least 1".into()));
    }
    let need = m as f64 + 1.0 + (m as f64 + 0.25).sqrt();
    if (trunc.d as f64) <= need {
        return Err(QwitError::Precondition(format!(
            "cutoff D = {} too small for the K_{m} window (need D > {need:.4})",
            trunc.d
        )));
    }
    let d: Vec<f64> = (0..trunc.d as u64).map(|n| k_m_entry(m, n) as f64).collect();
    Ok(HermitianOperator::diagonal(&d))
}

/// `(a†)²a² - 2m a†a + m²` assembled from the ladder matrices.
pub fn k_m_from_ladders(trunc: &FockTruncation, m: u64) -> HermitianOperator {
    let mf = m as f64;
    let quartic = trunc.normal_ordered(2, 2);
    let number = trunc.normal_ordered(1, 1).scale_re(2.0 * mf);
    let m2 = CMatrix::identity(trunc.d).scale_re(mf * mf);
    HermitianOperator::hermitian_part(&quartic.sub(&number).unwrap().add(&m2).unwrap())
}

#[derive(Clone, Debug, PartialEq)]
pub struct NegativeWindow {
    pub lo: f64,
    pub hi: f64,
    /// integer levels with strictly negative `K_m` entry
    pub levels: Vec<u64>,
}

pub fn negative_window(m: u64) -> Result<NegativeWindow> {
    if m == 0 {
        return Err(QwitError::Precondition("m must be at least 1".into()));
    }
    let (lo, hi) = window_bounds(m);
    let levels = (0..=hi.ceil() as u64).filter(|&n| k_m_entry(m, n) < 0).collect();
    Ok(NegativeWindow { lo, hi, levels })
}

#[derive(Clone, Debug)]
pub struct CoherentVector {
    pub z: C64,
    pub amps: Vec<C64>,
    /// Poisson mass on levels `>= D`
    pub tail_mass: f64,
}

impl CoherentVector {
    /// `‖a v - z v‖` on the truncation; only the last level contributes.
    pub fn eigen_residual(&self, trunc: &FockTruncation) -> f64 {
        let av = trunc.a.apply(&self.amps);
        av.iter().zip(&self.amps).map(|(x, c)| (x - self.z * c).norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `Σ_{n>=d} P(n)·n^power` for the Poisson law with the given mean.
fn poisson_tail_moment(mean: f64, d: usize, power: i32) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    // log P(d), then P(n+1) = P(n)·mean/(n+1)
    let ln_fact: f64 = (1..=d).map(|k| (k as f64).ln()).sum();
    let mut p = (-mean + d as f64 * mean.ln() - ln_fact).exp();
    let mut sum = 0.0;
    let mut n = d;
    loop {
        let term = p * (n as f64).powi(power);
        sum += term;
        n += 1;
        p *= mean / n as f64;
        if p == 0.0 || (n as f64 > mean + power as f64 && term < sum * 1e-18) {
            break;
        }
    }
    sum
}

fn poisson_tail(mean: f64, d: usize) -> f64 {
    poisson_tail_moment(mean, d, 0)
}

/// Amplitudes `e^{-|z|²/2} zⁿ/√(n!)` for `n < D`; errors when the tail
/// mass beyond the cutoff exceeds `budget`.
pub fn coherent(z: C64, trunc: &FockTruncation, budget: f64) -> Result<CoherentVector> {
    let d = trunc.d;
    let tail_mass = poisson_tail(z.norm_sqr(), d);
    if tail_mass > budget {
        return Err(QwitError::InsufficientTruncation { tail: tail_mass, budget, dim: d });
    }
    let mut amps = Vec::with_capacity(d);
    let mut c = C64::new((-z.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..d {
        if n > 0 {
            c = c * z / (n as f64).sqrt();
        }
        amps.push(c);
    }
    Ok(CoherentVector { z, amps, tail_mass })
}

/// Smallest cutoff `>= MIN_CUTOFF` with Poisson tail at `|z|²` below `budget`.
pub fn required_cutoff(abs_z_sq: f64, budget: f64) -> Result<usize> {
    required_cutoff_for_moment(abs_z_sq, budget, 0)
}

/// Like [`required_cutoff`], but bounds the tail of `nᵖ`. Use `power = 2`
/// for means of `K_m`, whose entries grow like `n²` past the cutoff.
pub fn required_cutoff_for_moment(abs_z_sq: f64, budget: f64, power: i32) -> Result<usize> {
    (MIN_CUTOFF..=MAX_CUTOFF)
        .find(|&d| poisson_tail_moment(abs_z_sq, d, power) <= budget)
        .ok_or(QwitError::CapExceeded { dim: MAX_CUTOFF + 1, cap: MAX_CUTOFF })
}

/// `<z|W|z>` on the truncation of `W`.
pub fn coherent_mean(w: &HermitianOperator, z: C64, budget: f64) -> Result<f64> {
    let trunc = FockTruncation::new(w.dim())?;
    let v = coherent(z, &trunc, budget)?;
    Ok(w.sandwich(&v.amps))
}

/// `Σ_k w_k <z_k|W|z_k>`
pub fn classical_mixture_mean(w: &HermitianOperator, weights: &[f64], zs: &[C64], budget: f64) -> Result<f64> {
    if weights.len() != zs.len() {
        return Err(QwitError::DimensionMismatch { expected: weights.len(), found: zs.len() });
    }
    if weights.iter().any(|&p| !(p >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(QwitError::Precondition("mixture weights must be nonnegative and sum to 1".into()));
    }
    let mut total = 0.0;
    for (&p, &z) in weights.iter().zip(zs) {
        total += p * coherent_mean(w, z, budget)?;
    }
    Ok(total)
}

/// `<n|W|n>`
pub fn fock_mean(w: &HermitianOperator, n: usize) -> f64 {
    w.get(n, n).re
}

pub fn k_m_symbol(m: u64, abs_z_sq: f64) -> f64 {
    (abs_z_sq - m as f64).powi(2)
}

/// Normally ordered polynomial `W = Σ c_mn (a†)^m a^n` with symbol `w(z) = Σ c_mn z̄^m zⁿ`.
#[derive(Clone, Debug)]
pub struct PhaseSpacePolynomial {
    pub terms: Vec<(usize, usize, C64)>,
}

impl PhaseSpacePolynomial {
    pub fn k_m(m: u64) -> Self {
        let mf = m as f64;
        PhaseSpacePolynomial {
            terms: vec![(2, 2, C64::new(1.0, 0.0)), (1, 1, C64::new(-2.0 * mf, 0.0)), (0, 0, C64::new(mf * mf, 0.0))],
        }
    }

    pub fn symbol(&self, z: C64) -> C64 {
        self.terms.iter().map(|&(m, n, c)| c * z.conj().powu(m as u32) * z.powu(n as u32)).sum()
    }

    /// Operator on the truncation, before Hermitization.
    pub fn raw_operator(&self, trunc: &FockTruncation) -> CMatrix {
        let mut acc = CMatrix::zeros(trunc.d);
        for &(m, n, c) in &self.terms {
            acc = acc.add(&trunc.normal_ordered(m, n).scale(c)).unwrap();
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub struct PhaseSpaceCheck {
    pub symbol_min: f64,
    pub symbol_argmin: C64,
    /// largest `|Im w(z)|` on the grid
    pub symbol_imag_max: f64,
    pub lambda_min: f64,
    pub anti_hermitian_residual: f64,
    pub is_phase_space_qw: bool,
}

/// Checks `w(z) >= 0` on a polar grid `|z| ∈ [0, r_max]` and looks for a
/// negative eigenvalue of the truncated operator.
pub fn check_phase_space_witness(
    poly: &PhaseSpacePolynomial,
    trunc: &FockTruncation,
    r_max: f64,
    n_radial: usize,
    n_angular: usize,
    tol: f64,
) -> Result<PhaseSpaceCheck> {
    if n_radial < 2 || n_angular < 1 {
        return Err(QwitError::Precondition("grid needs n_radial >= 2 and n_angular >= 1".into()));
    }
    let mut symbol_min = f64::INFINITY;
    let mut symbol_argmin = C64::new(0.0, 0.0);
    let mut symbol_imag_max = 0.0f64;
    for i in 0..n_radial {
        let r = r_max * i as f64 / (n_radial - 1) as f64;
        for j in 0..n_angular {
            let z = C64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / n_angular as f64);
            let w = poly.symbol(z);
            symbol_imag_max = symbol_imag_max.max(w.im.abs());
            if w.re < symbol_min {
                symbol_min = w.re;
                symbol_argmin = z;
            }
        }
    }
    let raw = poly.raw_operator(trunc);
    let anti_hermitian_residual = raw.sub(&raw.adjoint()).unwrap().max_abs() / 2.0;
    let lambda_min = eig_hermitian(&HermitianOperator::hermitian_part(&raw)).min();
    Ok(PhaseSpaceCheck {
        symbol_min,
        symbol_argmin,
        symbol_imag_max,
        lambda_min,
        anti_hermitian_residual,
        is_phase_space_qw: symbol_min >= -tol && lambda_min < -tol,
    })
}

#[derive(Clone, Debug)]
pub struct PhaseSpaceRow {
    pub abs_z_sq: f64,
    pub coherent_mean: f64,
    pub closed_form: f64,
}

#[derive(Clone, Debug)]
pub struct PhaseSpaceScan {
    pub m: u64,
    pub cutoff: usize,
    pub rows: Vec<PhaseSpaceRow>,
    pub entries: Vec<i64>,
    pub window: NegativeWindow,
}

pub const PHASE_CSV_HEADER: &str = "abs_z_sq,coherent_mean,closed_form";

/// Coherent means of `K_m` along real `z ∈ [0, z_max]` (`n_z` points).
/// The cutoff bounds the second-moment Poisson tail at `z_max` and covers the window.
pub fn phase_space_scan(m: u64, z_max: f64, n_z: usize) -> Result<PhaseSpaceScan> {
    if n_z < 2 || !(z_max >= 0.0) {
        return Err(QwitError::Precondition("need n_z >= 2 and z_max >= 0".into()));
    }
    let cutoff = required_cutoff_for_moment(z_max * z_max, DEFAULT_TAIL_BUDGET, 2)?.max(min_cutoff_for_window(m));
    let trunc = FockTruncation::new(cutoff)?;
    let k = k_m_operator(&trunc, m)?;
    let rows = (0..n_z)
        .map(|i| {
            let x = z_max * i as f64 / (n_z - 1) as f64;
            let mean = coherent_mean(&k, C64::new(x, 0.0), DEFAULT_TAIL_BUDGET)?;
            Ok(PhaseSpaceRow { abs_z_sq: x * x, coherent_mean: mean, closed_form: k_m_symbol(m, x * x) })
        })
        .collect::<Result<Vec<_>>>()?;
    let entries = (0..cutoff as u64).map(|n| k_m_entry(m, n)).collect();
    Ok(PhaseSpaceScan { m, cutoff, rows, entries, window: negative_window(m)? })
}

impl PhaseSpaceScan {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(PHASE_CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format::csv_row(&[r.abs_z_sq, r.coherent_mean, r.closed_form]));
            s.push('\n');
        }
        s
    }

    /// `{levels, entries, negative_levels}` plus the window bounds.
    pub fn spectrum_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("m".into(), Value::from(self.m));
        m.insert("cutoff".into(), Value::from(self.cutoff));
        m.insert("levels".into(), Value::from((0..self.cutoff as u64).collect::<Vec<_>>()));
        m.insert("entries".into(), Value::from(self.entries.clone()));
        m.insert("negative_levels".into(), Value::from(self.window.levels.clone()));
        m.insert("window".into(), format::num_vec(&[self.window.lo, self.window.hi]));
        let worst = self.rows.iter().map(|r| (r.coherent_mean - r.closed_form).abs()).fold(0.0, f64::max);
        m.insert("max_closed_form_error".into(), format::num(worst));
        Value::Object(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_structure() {
        let t = FockTruncation::new(6).unwrap();
        assert_eq!(t.a().get(2, 3), C64::new(3f64.sqrt(), 0.0));
        assert_eq!(t.a().get(3, 2), C64::new(0.0, 0.0));
        let ada = HermitianOperator::hermitian_part(&t.normal_ordered(1, 1));
        assert!(ada.max_abs_diff(t.n_op()) < 1e-14);
        let c = t.ladder_commutator();
        for i in 0..6 {
            for j in 0..6 {
                let want = match (i == j, i) {
                    (true, 5) => -5.0,
                    (true, _) => 1.0,
                    _ => 0.0,
                };
                assert!((c.get(i, j) - C64::new(want, 0.0)).norm() < 1e-14, "({i},{j}) {:?}", c.get(i, j));
            }
        }
    }

    #[test]
    fn k1_entries_exact() {
        let t = FockTruncation::new(16).unwrap();
        let k = k_m_operator(&t, 1).unwrap();
        let got: Vec<f64> = (0..4).map(|n| k.get(n, n).re).collect();
        assert_eq!(got, vec![1.0, -1.0, -1.0, 1.0]);
        assert!(k.max_abs_diff(&k_m_from_ladders(&t, 1)) < 1e-12);
    }

    #[test]
    fn k_m_entry_at_m_is_minus_m() {
        for m in 1..10 {
            assert_eq!(k_m_entry(m, m), -(m as i64));
        }
    }

    #[test]
    fn window_examples() {
        let w = negative_window(1).unwrap();
        assert_eq!(w.levels, vec![1, 2]);
        assert!((w.lo - (1.5 - 1.25f64.sqrt())).abs() < 1e-15);
        assert!((w.hi - 2.618034).abs() < 1e-6);
        let w = negative_window(2).unwrap();
        assert_eq!((w.lo, w.hi), (1.0, 4.0));
        assert_eq!(w.levels, vec![2, 3]);
        assert_eq!(k_m_entry(2, 1), 0);
        assert_eq!(k_m_entry(2, 4), 0);
        assert_eq!(k_m_entry(1, 0), 1);
    }

    #[test]
    fn cutoff_too_small_is_rejected() {
        let t = FockTruncation::new(3).unwrap();
        assert!(k_m_operator(&t, 1).is_err());
        assert!(k_m_operator(&FockTruncation::new(16).unwrap(), 0).is_err());
    }

    #[test]
    fn coherent_examples() {
        let t = FockTruncation::new(30).unwrap();
        let v = coherent(C64::new(0.0, 0.0), &t, DEFAULT_TAIL_BUDGET).unwrap();
        assert_eq!(v.amps[0], C64::new(1.0, 0.0));
        assert!(v.amps[1..].iter().all(|c| *c == C64::new(0.0, 0.0)));
        assert_eq!(v.tail_mass, 0.0);

        let v = coherent(C64::new(1.0, 0.0), &t, DEFAULT_TAIL_BUDGET).unwrap();
        assert!(v.tail_mass <= 1e-12);
        assert!(v.eigen_residual(&t) < 1e-15);
        let mean_n = t.n_op().sandwich(&v.amps);
        assert!((mean_n - 1.0).abs() < 1e-12);

        let small = FockTruncation::new(4).unwrap();
        assert!(matches!(coherent(C64::new(2.0, 0.0), &small, DEFAULT_TAIL_BUDGET), Err(QwitError::InsufficientTruncation { .. })));
    }

    #[test]
    fn moment_cutoff_dominates_mass_cutoff() {
        for x in [0.0, 1.0, 4.0, 9.0, 25.0] {
            let d0 = required_cutoff(x, DEFAULT_TAIL_BUDGET).unwrap();
            let d2 = required_cutoff_for_moment(x, DEFAULT_TAIL_BUDGET, 2).unwrap();
            assert!(d2 >= d0 && d0 >= MIN_CUTOFF);
            assert!(poisson_tail_moment(x, d2, 2) <= DEFAULT_TAIL_BUDGET);
        }
        // P(n >= 1) = 1 - e^{-1} at mean 1
        assert!((poisson_tail(1.0, 1) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn coherent_means_of_k1() {
        let t = FockTruncation::new(40).unwrap();
        let k = k_m_operator(&t, 1).unwrap();
        assert!((coherent_mean(&k, C64::new(0.0, 0.0), DEFAULT_TAIL_BUDGET).unwrap() - 1.0).abs() < 1e-15);
        assert!(coherent_mean(&k, C64::from_polar(1.0, 0.7), DEFAULT_TAIL_BUDGET).unwrap().abs() < 1e-9);
        assert!((coherent_mean(&k, C64::from_polar(2f64.sqrt(), 2.0), DEFAULT_TAIL_BUDGET).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mixtures_and_fock_contrast() {
        let t = FockTruncation::new(40).unwrap();
        let k = k_m_operator(&t, 1).unwrap();
        assert_eq!(classical_mixture_mean(&k, &[1.0], &[C64::new(0.0, 0.0)], DEFAULT_TAIL_BUDGET).unwrap(), 1.0);
        let zs: Vec<C64> = [0.5f64, 1.0, 1.5].iter().map(|x| C64::new(x.sqrt(), 0.0)).collect();
        let w = [1.0 / 3.0; 3];
        let m = classical_mixture_mean(&k, &w, &zs, DEFAULT_TAIL_BUDGET).unwrap();
        assert!((m - 0.5 / 3.0).abs() < 1e-9);
        assert_eq!(fock_mean(&k, 1), -1.0);
        assert!(classical_mixture_mean(&k, &[0.5], &[C64::new(0.0, 0.0)], DEFAULT_TAIL_BUDGET).is_err());
    }

    #[test]
    fn polynomial_checker_on_k_m() {
        let t = FockTruncation::new(16).unwrap();
        let chk = check_phase_space_witness(&PhaseSpacePolynomial::k_m(2), &t, 3.0, 61, 8, 1e-10).unwrap();
        assert!(chk.is_phase_space_qw);
        assert!((chk.lambda_min + 2.0).abs() < 1e-12);
        assert!(chk.symbol_min.abs() < 1e-2);
        assert!(chk.anti_hermitian_residual < 1e-12);

        let number = PhaseSpacePolynomial { terms: vec![(1, 1, C64::new(1.0, 0.0))] };
        let chk = check_phase_space_witness(&number, &t, 3.0, 10, 4, 1e-10).unwrap();
        assert!(!chk.is_phase_space_qw);
    }

    #[test]
    fn scan_has_small_error() {
        let s = phase_space_scan(2, 3.0, 13).unwrap();
        assert!(s.rows.iter().all(|r| (r.coherent_mean - r.closed_form).abs() < 1e-9));
        assert!(s.to_csv().starts_with("abs_z_sq,coherent_mean,closed_form\n0,4,4\n"));
    }
}
