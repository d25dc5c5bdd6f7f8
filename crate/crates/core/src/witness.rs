//! Quantumness witnesses built from operator pairs.
//!
//! For a pair `0 <= A <= B` the operator `V = B² - A²` can only have a
//! negative eigenvalue if `A` and `B` fail to commute; likewise for
//! `X, Y >= 0` the anticommutator `C = XY + YX`. This module builds both
//! kinds, constructs a `C` witness detecting any state that is not
//! maximally mixed, and checks ordered polynomials `W(R;S)` against the
//! spectral positivity condition.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{QwitError, Result};
use crate::format;
use crate::operator::{
    anticommutator, complete_basis, eig_hermitian, from_columns, CMatrix, EigenDecomposition, HermitianOperator,
    OperatorJson, C64,
};
use crate::states::{bloch_decompose, expectation, DensityMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    VFromOrderedPair,
    CFromPositivePair,
    Generalized,
}

impl WitnessKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            WitnessKind::VFromOrderedPair => "V_from_ordered_pair",
            WitnessKind::CFromPositivePair => "C_from_positive_pair",
            WitnessKind::Generalized => "generalized",
        }
    }
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub kind: WitnessKind,
    pub constituents: Vec<HermitianOperator>,
    pub witness: HermitianOperator,
    pub lambda_min: f64,
    pub certifying_vector: Vec<C64>,
    pub is_quantumness_witness: bool,
}

impl WitnessReport {
    fn from_witness(kind: WitnessKind, constituents: Vec<HermitianOperator>, witness: HermitianOperator, tol: f64) -> Self {
        let e = eig_hermitian(&witness);
        let lambda_min = e.min();
        WitnessReport {
            kind,
            constituents,
            witness,
            lambda_min,
            certifying_vector: e.eigenvectors[0].clone(),
            is_quantumness_witness: lambda_min < -tol,
        }
    }

    /// `<v|W|v>` for the certifying vector; equals `lambda_min` up to round-off.
    pub fn certified_mean(&self) -> f64 {
        self.witness.sandwich(&self.certifying_vector)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("kind".into(), Value::from(self.kind.as_str()));
        m.insert("constituents".into(), Value::Array(self.constituents.iter().map(format::operator).collect()));
        m.insert("witness".into(), format::operator(&self.witness));
        m.insert("lambda_min".into(), format::num(self.lambda_min));
        m.insert("certifying_vector".into(), format::complex_vec(&self.certifying_vector));
        m.insert("is_quantumness_witness".into(), Value::from(self.is_quantumness_witness));
        Value::Object(m)
    }
}

/// `V = B² - A²` for an ordered pair `0 <= A <= B`.
pub fn build_v(a: &HermitianOperator, b: &HermitianOperator, tol: f64) -> Result<WitnessReport> {
    if a.dim() != b.dim() {
        return Err(QwitError::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let amin = eig_hermitian(a).min();
    if amin < -tol {
        return Err(QwitError::Precondition(format!(
            "0 <= A violated: min eigenvalue of A is {amin:e} (tolerance {tol:e})"
        )));
    }
    let gap = eig_hermitian(&b.sub(a)?).min();
    if gap < -tol {
        return Err(QwitError::Precondition(format!(
            "A <= B violated: min eigenvalue of B - A is {gap:e} (tolerance {tol:e})"
        )));
    }
    let v = b.square().sub(&a.square())?;
    Ok(WitnessReport::from_witness(WitnessKind::VFromOrderedPair, vec![a.clone(), b.clone()], v, tol))
}

/// `C = XY + YX` for a pair `X, Y >= 0`.
pub fn build_c(x: &HermitianOperator, y: &HermitianOperator, tol: f64) -> Result<WitnessReport> {
    if x.dim() != y.dim() {
        return Err(QwitError::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    for (name, op) in [("X", x), ("Y", y)] {
        let lmin = eig_hermitian(op).min();
        if lmin < -tol {
            return Err(QwitError::Precondition(format!(
                "{name} >= 0 violated: min eigenvalue {lmin:e} (tolerance {tol:e})"
            )));
        }
    }
    let c = anticommutator(x, y)?;
    Ok(WitnessReport::from_witness(WitnessKind::CFromPositivePair, vec![x.clone(), y.clone()], c, tol))
}

/// Eigenvalues `(α(α+1), α(α-1))` of `{|a><a|, |d><d|}` with `|<a|d>| = α`.
pub fn rank1_anticommutator_eigs(alpha: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(QwitError::Precondition(format!("alpha = {alpha} outside [0, 1]")));
    }
    Ok((alpha * (alpha + 1.0), alpha * (alpha - 1.0)))
}

/// Explicit anticommutator of two rank-one projectors in the basis
/// `{|a>, |a⊥>}`, with `|d> = α|a> + β|a⊥>`.
pub fn rank1_anticommutator_matrix(alpha: f64, beta: C64) -> HermitianOperator {
    let a = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let d = [C64::new(alpha, 0.0), beta];
    let x = HermitianOperator::projector(&a);
    let y = HermitianOperator::projector(&d);
    anticommutator(&x, &y).unwrap()
}

/// A `C`-type witness tailored to a given state.
#[derive(Clone, Debug)]
pub struct StateWitness {
    pub report: WitnessReport,
    pub alpha: f64,
    /// Relative gap `(ρ₁ - ρ₂)/(ρ₁ + ρ₂)` of the two eigenvalues spanning the support.
    pub r_eff: f64,
    /// `ρ₁ + ρ₂`
    pub weight: f64,
    pub predicted_mean: f64,
    pub mean: f64,
}

impl StateWitness {
    pub fn to_json(&self) -> Value {
        let mut m = match self.report.to_json() {
            Value::Object(m) => m,
            _ => unreachable!(),
        };
        m.insert("alpha".into(), format::num(self.alpha));
        m.insert("r_eff".into(), format::num(self.r_eff));
        m.insert("weight".into(), format::num(self.weight));
        m.insert("predicted_mean".into(), format::num(self.predicted_mean));
        m.insert("mean".into(), format::num(self.mean));
        Value::Object(m)
    }
}

const MIXED_TOL: f64 = 1e-10;

/// Two-level frame (top eigenvector first) and its `(r_eff, weight)`.
fn witness_frame(rho: &DensityMatrix) -> Result<(Vec<Vec<C64>>, f64, f64)> {
    let n = rho.dim();
    let mixed = HermitianOperator::identity(n).scale(1.0 / n as f64);
    if n == 1 || rho.op().max_abs_diff(&mixed) <= MIXED_TOL {
        return Err(QwitError::NoWitnessExists);
    }
    if n == 2 {
        let bd = bloch_decompose(rho)?;
        if bd.r <= MIXED_TOL {
            return Err(QwitError::NoWitnessExists);
        }
        let frame = complete_basis(&bd.psi);
        return Ok((frame, bd.r, 1.0));
    }
    let e: EigenDecomposition = eig_hermitian(rho.op());
    let top = n - 1;
    let rho1 = e.eigenvalues[top];
    // Second-largest eigenvalue when distinct from the top, else the smallest.
    let second = if rho1 - e.eigenvalues[top - 1] > MIXED_TOL { top - 1 } else { 0 };
    let rho2 = e.eigenvalues[second].max(0.0);
    if rho1 - rho2 <= MIXED_TOL {
        return Err(QwitError::NoWitnessExists);
    }
    let weight = rho1 + rho2;
    let frame = vec![e.eigenvectors[top].clone(), e.eigenvectors[second].clone()];
    Ok((frame, (rho1 - rho2) / weight, weight))
}

/// Embeds a 2×2 operator into the span of `frame` (an orthonormal pair in C^n).
fn embed(op2: &HermitianOperator, frame: &[Vec<C64>]) -> HermitianOperator {
    let n = frame[0].len();
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut z = C64::new(0.0, 0.0);
            for (p, fp) in frame.iter().enumerate() {
                for (q, fq) in frame.iter().enumerate() {
                    z += fp[i] * op2.get(p, q) * fq[j].conj();
                }
            }
            m.set(i, j, z);
        }
    }
    HermitianOperator::hermitian_part(&m)
}

/// Constructs `C = {X, Y}` with `Tr(ρC) < 0` for any state that is not
/// maximally mixed.
///
/// `X = |a><a|`, `Y = |d><d|` with `<a|d> = α` are built in a fiducial basis,
/// then rotated so the λ₋ eigenvector of `{X, Y}` lands on the top
/// eigenvector of `ρ`. For `n > 2` the pair lives on the span of the two
/// eigenvectors chosen by `witness_frame`, and
/// `Tr(ρC) = (ρ₁ + ρ₂)·α·(α - r_eff)`.
///
/// `alpha` defaults to `r_eff / 2` and must lie in `(0, r_eff)`.
pub fn construct_for_state(rho: &DensityMatrix, alpha: Option<f64>) -> Result<StateWitness> {
    let (frame, r_eff, weight) = witness_frame(rho)?;
    let alpha = alpha.unwrap_or(r_eff / 2.0);
    if !(alpha > 0.0 && alpha < r_eff) {
        return Err(QwitError::Precondition(format!("alpha = {alpha} outside (0, r_eff = {r_eff})")));
    }
    let beta = (1.0 - alpha * alpha).sqrt();
    let a = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let d = [C64::new(alpha, 0.0), C64::new(beta, 0.0)];
    let x0 = HermitianOperator::projector(&a);
    let y0 = HermitianOperator::projector(&d);
    let c0 = anticommutator(&x0, &y0)?;
    let v_minus = eig_hermitian(&c0).eigenvectors[0].clone();
    // U sends v_minus to the first frame vector: U = I · W_source†.
    let u = from_columns(&complete_basis(&v_minus)).adjoint();
    let x = embed(&x0.conjugate_by(&u)?, &frame);
    let y = embed(&y0.conjugate_by(&u)?, &frame);
    let report = build_c(&x, &y, crate::operator::DEFAULT_TOL)?;
    let mean = expectation(rho, &report.witness)?;
    Ok(StateWitness { report, alpha, r_eff, weight, predicted_mean: weight * alpha * (alpha - r_eff), mean })
}

#[derive(Clone, Debug)]
pub struct SquareMonotonicityRow {
    pub t: f64,
    /// min eigenvalue of `(X + tY)² - X²`
    pub difference_lambda_min: f64,
    pub difference_psd: bool,
    /// min eigenvalue of `tY² + {X, Y}`
    pub reduced_lambda_min: f64,
}

#[derive(Clone, Debug)]
pub struct SquareMonotonicityRecord {
    pub rows: Vec<SquareMonotonicityRow>,
    pub anticommutator_lambda_min: f64,
}

/// Checks the square-monotonicity route on `A = X`, `B = X + tY` for each `t`:
/// `B² - A² = t(tY² + XY + YX)`, so any negativity of `{X, Y}` shows up for small `t`.
pub fn square_monotonicity_forward(x: &HermitianOperator, y: &HermitianOperator, t_grid: &[f64], tol: f64) -> Result<SquareMonotonicityRecord> {
    let xy = anticommutator(x, y)?;
    let y2 = y.square();
    let x2 = x.square();
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let b = x.add(&y.scale(t))?;
        let diff = b.square().sub(&x2)?;
        let lmin = eig_hermitian(&diff).min();
        let reduced = y2.scale(t).add(&xy)?;
        rows.push(SquareMonotonicityRow {
            t,
            difference_lambda_min: lmin,
            difference_psd: lmin >= -tol,
            reduced_lambda_min: eig_hermitian(&reduced).min(),
        });
    }
    Ok(SquareMonotonicityRecord { rows, anticommutator_lambda_min: eig_hermitian(&xy).min() })
}

/// Residual of `2(B² - A²) = (B - A)(B + A) + (B + A)(B - A)`.
pub fn square_difference_residual(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    let lhs = b.square().sub(&a.square())?.scale(2.0);
    let rhs = anticommutator(&b.sub(a)?, &b.add(a)?)?;
    Ok(lhs.max_abs_diff(&rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Letter {
    R,
    S,
}

/// Ordered product of `R` and `S`; the empty word is the identity.
pub type Word = Vec<Letter>;

pub fn parse_word(s: &str) -> Result<Word> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != '*' && *c != '1')
        .map(|c| match c {
            'R' | 'r' => Ok(Letter::R),
            'S' | 's' => Ok(Letter::S),
            other => Err(QwitError::Malformed(format!("word letter '{other}' is not R or S"))),
        })
        .collect()
}

/// Ordered polynomial `W(R; S) = Σ c_w · w(R, S)`.
#[derive(Clone, Debug)]
pub struct GeneralizedWitnessSpec {
    pub coeffs: Vec<(Word, f64)>,
    pub r: HermitianOperator,
    pub s: HermitianOperator,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneralizedWitnessJson {
    #[serde(rename = "R")]
    pub r: OperatorJson,
    #[serde(rename = "S")]
    pub s: OperatorJson,
    /// word (e.g. `"RS"`, `""` for the identity) to coefficient
    pub coeffs: BTreeMap<String, f64>,
}

impl GeneralizedWitnessSpec {
    pub fn new(coeffs: Vec<(Word, f64)>, r: HermitianOperator, s: HermitianOperator) -> Result<Self> {
        if r.dim() != s.dim() {
            return Err(QwitError::DimensionMismatch { expected: r.dim(), found: s.dim() });
        }
        if let Some((_, c)) = coeffs.iter().find(|(_, c)| !c.is_finite()) {
            return Err(QwitError::Precondition(format!("non-finite coefficient {c}")));
        }
        Ok(GeneralizedWitnessSpec { coeffs, r, s })
    }

    pub fn from_json(j: &GeneralizedWitnessJson) -> Result<Self> {
        let coeffs = j.coeffs.iter().map(|(w, &c)| Ok((parse_word(w)?, c))).collect::<Result<Vec<_>>>()?;
        Self::new(coeffs, HermitianOperator::from_json(&j.r)?, HermitianOperator::from_json(&j.s)?)
    }

    /// `Σ c_w · w(R, S)` before Hermitization.
    pub fn raw_operator(&self) -> CMatrix {
        let n = self.r.dim();
        let mut acc = CMatrix::zeros(n);
        for (word, c) in &self.coeffs {
            let mut m = CMatrix::identity(n);
            for l in word {
                let f = match l {
                    Letter::R => self.r.matrix(),
                    Letter::S => self.s.matrix(),
                };
                m = m.mul(f).unwrap();
            }
            acc = acc.add(&m.scale_re(*c)).unwrap();
        }
        acc
    }

    /// Commutative symbol `w(r, s)`.
    pub fn scalar(&self, r: f64, s: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(word, c)| {
                let nr = word.iter().filter(|l| **l == Letter::R).count() as i32;
                let ns = word.len() as i32 - nr;
                c * r.powi(nr) * s.powi(ns)
            })
            .sum()
    }
}

#[derive(Clone, Debug)]
pub struct GeneralizedReport {
    pub report: WitnessReport,
    pub scalar_min: f64,
    pub scalar_argmin: (f64, f64),
    /// max-norm of the anti-Hermitian part `(M - M†)/2` discarded by Hermitization
    pub anti_hermitian_residual: f64,
    pub is_generalized_qw: bool,
}

impl GeneralizedReport {
    pub fn to_json(&self) -> Value {
        let mut m = match self.report.to_json() {
            Value::Object(m) => m,
            _ => unreachable!(),
        };
        m.insert("scalar_min".into(), format::num(self.scalar_min));
        m.insert("scalar_argmin".into(), format::num_vec(&[self.scalar_argmin.0, self.scalar_argmin.1]));
        m.insert("anti_hermitian_residual".into(), format::num(self.anti_hermitian_residual));
        m.insert("is_generalized_qw".into(), Value::from(self.is_generalized_qw));
        Value::Object(m)
    }
}

pub const GENERALIZED_TOL: f64 = 1e-10;

/// Checks `w(r; s) >= 0` on `Spec(R) × Spec(S)` and looks for a negative
/// eigenvalue of the Hermitized operator `W(R; S)`.
pub fn check_generalized(spec: &GeneralizedWitnessSpec) -> GeneralizedReport {
    let raw = spec.raw_operator();
    let residual = raw.sub(&raw.adjoint()).unwrap().max_abs() / 2.0;
    let witness = HermitianOperator::hermitian_part(&raw);
    let report = WitnessReport::from_witness(
        WitnessKind::Generalized,
        vec![spec.r.clone(), spec.s.clone()],
        witness,
        GENERALIZED_TOL,
    );
    let spec_r = eig_hermitian(&spec.r).eigenvalues;
    let spec_s = eig_hermitian(&spec.s).eigenvalues;
    let mut scalar_min = f64::INFINITY;
    let mut argmin = (f64::NAN, f64::NAN);
    for &r in &spec_r {
        for &s in &spec_s {
            let w = spec.scalar(r, s);
            if w < scalar_min {
                scalar_min = w;
                argmin = (r, s);
            }
        }
    }
    let is_generalized_qw = scalar_min >= -GENERALIZED_TOL && report.lambda_min < -GENERALIZED_TOL;
    GeneralizedReport { report, scalar_min, scalar_argmin: argmin, anti_hermitian_residual: residual, is_generalized_qw }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{is_psd, leq, DEFAULT_TOL};
    use crate::optimal::optimal_pair;
    use crate::states::maximally_mixed;

    #[test]
    fn build_v_examples() {
        let i2 = HermitianOperator::identity(2);
        let rep = build_v(&i2, &i2, DEFAULT_TOL).unwrap();
        assert_eq!(rep.lambda_min, 0.0);
        assert!(!rep.is_quantumness_witness);

        let (a, b) = optimal_pair();
        let rep = build_v(&a, &b, DEFAULT_TOL).unwrap();
        assert!((rep.lambda_min + 4.0 / 27.0).abs() < 1e-12);
        assert!(rep.is_quantumness_witness);
        assert!((rep.certified_mean() - rep.lambda_min).abs() < 1e-8);

        let rep = build_v(&HermitianOperator::diagonal(&[1.0, 0.0]), &HermitianOperator::diagonal(&[2.0, 1.0]), DEFAULT_TOL)
            .unwrap();
        assert!((rep.lambda_min - 1.0).abs() < 1e-15);
        assert!(!rep.is_quantumness_witness);
    }

    #[test]
    fn build_v_reports_failed_ordering() {
        let err = build_v(&HermitianOperator::pauli_z(), &HermitianOperator::identity(2), DEFAULT_TOL).unwrap_err();
        assert!(err.to_string().contains("0 <= A"), "{err}");
        let err = build_v(&HermitianOperator::identity(2), &HermitianOperator::diagonal(&[2.0, 0.5]), DEFAULT_TOL)
            .unwrap_err();
        assert!(err.to_string().contains("A <= B") && err.to_string().contains("-5e-1"), "{err}");
    }

    #[test]
    fn build_c_examples() {
        let p = HermitianOperator::diagonal(&[1.0, 0.0]);
        let rep = build_c(&p, &p, DEFAULT_TOL).unwrap();
        assert!(rep.witness.max_abs_diff(&HermitianOperator::diagonal(&[2.0, 0.0])) < 1e-15);
        assert!(!rep.is_quantumness_witness);

        let a = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let d = [C64::new(0.5, 0.0), C64::new(0.75f64.sqrt(), 0.0)];
        let rep = build_c(&HermitianOperator::projector(&a), &HermitianOperator::projector(&d), DEFAULT_TOL).unwrap();
        assert!((rep.lambda_min + 0.25).abs() < 1e-14);

        assert!(build_c(&HermitianOperator::pauli_z(), &p, DEFAULT_TOL).is_err());
    }

    #[test]
    fn rank1_eigs() {
        assert_eq!(rank1_anticommutator_eigs(0.0).unwrap(), (0.0, 0.0));
        assert_eq!(rank1_anticommutator_eigs(1.0).unwrap(), (2.0, 0.0));
        assert_eq!(rank1_anticommutator_eigs(0.5).unwrap(), (0.75, -0.25));
        assert!(rank1_anticommutator_eigs(1.5).is_err());
        assert!(rank1_anticommutator_eigs(-0.1).is_err());
    }

    #[test]
    fn construct_pure_state() {
        let rho = DensityMatrix::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let w = construct_for_state(&rho, Some(0.5)).unwrap();
        assert!((w.predicted_mean + 0.25).abs() < 1e-15);
        // Direct trace: both X and Y are projectors, C = XY + YX.
        let x = &w.report.constituents[0];
        let y = &w.report.constituents[1];
        let c = x.matrix().mul(y.matrix()).unwrap().add(&y.matrix().mul(x.matrix()).unwrap()).unwrap();
        let direct = expectation(&rho, &HermitianOperator::hermitian_part(&c)).unwrap();
        assert!((direct + 0.25).abs() < 1e-12, "{direct}");
        assert!((w.mean - w.predicted_mean).abs() < 1e-10);
    }

    #[test]
    fn construct_mixed_qubit() {
        let rho = DensityMatrix::new(HermitianOperator::diagonal(&[0.75, 0.25])).unwrap();
        let w = construct_for_state(&rho, Some(0.25)).unwrap();
        assert_eq!(w.predicted_mean, -0.0625);
        assert!((w.mean + 0.0625).abs() < 1e-12);
        assert!(construct_for_state(&rho, Some(0.6)).is_err());
        assert!(construct_for_state(&rho, Some(0.0)).is_err());
        let w = construct_for_state(&rho, None).unwrap();
        assert_eq!(w.alpha, 0.25);
    }

    #[test]
    fn maximally_mixed_has_no_witness() {
        for n in 1..=4 {
            assert!(matches!(construct_for_state(&maximally_mixed(n).unwrap(), None), Err(QwitError::NoWitnessExists)));
        }
    }

    #[test]
    fn degenerate_top_pair_falls_back_to_smallest() {
        let rho = DensityMatrix::new(HermitianOperator::diagonal(&[0.4, 0.2, 0.4])).unwrap();
        let w = construct_for_state(&rho, None).unwrap();
        assert!((w.r_eff - 1.0 / 3.0).abs() < 1e-12);
        assert!((w.mean - w.predicted_mean).abs() < 1e-12);
        assert!(w.mean < 0.0);
    }

    #[test]
    fn square_monotonicity_examples() {
        let x = HermitianOperator::diagonal(&[0.3, 1.0]);
        let y = HermitianOperator::diagonal(&[2.0, 0.1]);
        let rec = square_monotonicity_forward(&x, &y, &[0.0, 0.01, 0.5, 3.0], 1e-12).unwrap();
        assert!(rec.rows.iter().all(|r| r.difference_psd));
        assert_eq!(rec.rows[0].difference_lambda_min, 0.0);

        let rho = DensityMatrix::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let w = construct_for_state(&rho, Some(0.5)).unwrap();
        let (x, y) = (&w.report.constituents[0], &w.report.constituents[1]);
        let rec = square_monotonicity_forward(x, y, &[0.0, 0.01], 1e-12).unwrap();
        assert!(rec.rows[0].difference_psd);
        assert!(!rec.rows[1].difference_psd);
        assert!(rec.rows[1].difference_lambda_min < 0.0);
        assert!((rec.anticommutator_lambda_min + 0.25).abs() < 1e-12);
    }

    #[test]
    fn backward_identity_holds() {
        let (a, b) = optimal_pair();
        assert!(square_difference_residual(&a, &b).unwrap() < 1e-14);
    }

    #[test]
    fn generalized_examples() {
        let (a, b) = optimal_pair();
        let s = b.sub(&a).unwrap();
        let coeffs = vec![(parse_word("RS").unwrap(), 1.0), (parse_word("SR").unwrap(), 1.0), (parse_word("SS").unwrap(), 1.0)];
        let rep = check_generalized(&GeneralizedWitnessSpec::new(coeffs, a.clone(), s).unwrap());
        assert!(rep.scalar_min >= -1e-10);
        assert!((rep.report.lambda_min + 4.0 / 27.0).abs() < 1e-12);
        assert!(rep.is_generalized_qw);
        assert!(rep.anti_hermitian_residual < 1e-12);

        let rho = DensityMatrix::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let w = construct_for_state(&rho, Some(0.5)).unwrap();
        let (x, y) = (w.report.constituents[0].clone(), w.report.constituents[1].clone());
        let coeffs = vec![(parse_word("RS").unwrap(), 1.0), (parse_word("SR").unwrap(), 1.0)];
        let rep = check_generalized(&GeneralizedWitnessSpec::new(coeffs, x, y).unwrap());
        assert!(rep.is_generalized_qw);
        assert!(rep.scalar_min.abs() < 1e-12);

        let rep = check_generalized(
            &GeneralizedWitnessSpec::new(vec![(parse_word("RR").unwrap(), 1.0)], HermitianOperator::pauli_x(), HermitianOperator::pauli_z()).unwrap(),
        );
        assert!(rep.scalar_min >= 0.0 && rep.report.lambda_min >= -1e-12 && !rep.is_generalized_qw);
    }

    #[test]
    fn anti_hermitian_words_are_reported() {
        let spec = GeneralizedWitnessSpec::new(
            vec![(parse_word("RS").unwrap(), 1.0)],
            HermitianOperator::pauli_x(),
            HermitianOperator::pauli_z(),
        )
        .unwrap();
        let rep = check_generalized(&spec);
        // σxσz = -iσy is anti-Hermitian; its Hermitian part vanishes.
        assert!((rep.anti_hermitian_residual - 1.0).abs() < 1e-15);
        assert!(rep.report.witness.max_abs() < 1e-15);
        assert!(parse_word("RX").is_err());
    }

    #[test]
    fn ordered_optimal_pair_sanity() {
        let (a, b) = optimal_pair();
        assert!(is_psd(&a, DEFAULT_TOL));
        assert!(leq(&a, &b, DEFAULT_TOL).unwrap());
    }
}
