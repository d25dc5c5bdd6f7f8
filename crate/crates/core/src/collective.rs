//! Additive N-body observables `A = (1/N) Σ a_i`, `B = (1/N) Σ b_i`.
//!
//! `V = B² - A²` splits into a diagonal part `(1/N²) Σ v_i` and a cross part
//! `(1/N²) Σ_{i≠j} (b_i + a_i)(b_j - a_j)`, which is positive for an ordered
//! single-site pair. Everything here is dense exact diagonalization.

use serde_json::{Map, Value};

use crate::error::{QwitError, Result};
use crate::format;
use crate::operator::{eig_hermitian, kron, leq, HermitianOperator, C64, DEFAULT_TOL};

/// Largest total dimension built as a dense operator.
pub const DIM_CAP: usize = 4096;
/// Largest total dimension that is fully diagonalized.
pub const EIG_DIM_CAP: usize = 1024;

fn total_dim(d: usize, n: usize) -> Result<usize> {
    let mut dim = 1usize;
    for _ in 0..n {
        dim = dim.checked_mul(d).filter(|&x| x <= DIM_CAP).ok_or(QwitError::CapExceeded {
            dim: d.saturating_pow(n as u32),
            cap: DIM_CAP,
        })?;
    }
    Ok(dim)
}

/// `I ⊗ … ⊗ x ⊗ … ⊗ I` with `x` in slot `slot` (1-based) of `n`.
pub fn lift(x: &HermitianOperator, slot: usize, n: usize) -> Result<HermitianOperator> {
    if slot == 0 || slot > n {
        return Err(QwitError::Precondition(format!("slot {slot} outside 1..={n}")));
    }
    let d = x.dim();
    total_dim(d, n)?;
    let left = HermitianOperator::identity(d.pow((slot - 1) as u32));
    let right = HermitianOperator::identity(d.pow((n - slot) as u32));
    Ok(kron(&kron(&left, x), &right))
}

/// `(1/N) Σ_i x_i`
pub fn collective_sum(x: &HermitianOperator, n: usize) -> Result<HermitianOperator> {
    let dim = total_dim(x.dim(), n)?;
    let mut acc = HermitianOperator::zeros(dim);
    for i in 1..=n {
        acc = acc.add(&lift(x, i, n)?)?;
    }
    Ok(acc.scale(1.0 / n as f64))
}

#[derive(Clone, Debug)]
pub struct CollectivePair {
    pub a: HermitianOperator,
    pub b: HermitianOperator,
    pub n: usize,
    pub big_a: HermitianOperator,
    pub big_b: HermitianOperator,
}

impl CollectivePair {
    pub fn new(a: &HermitianOperator, b: &HermitianOperator, n: usize) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(QwitError::DimensionMismatch { expected: a.dim(), found: b.dim() });
        }
        if n == 0 {
            return Err(QwitError::Precondition("N must be at least 1".into()));
        }
        Ok(CollectivePair { a: a.clone(), b: b.clone(), n, big_a: collective_sum(a, n)?, big_b: collective_sum(b, n)? })
    }
}

#[derive(Clone, Debug)]
pub struct CollectiveWitness {
    pub v: HermitianOperator,
    pub diag_part: HermitianOperator,
    pub cross_part: HermitianOperator,
    /// max-norm distance between `cross_part` and `(1/N²) Σ_{i≠j} (b_i + a_i)(b_j - a_j)`
    pub cross_form_residual: f64,
}

fn check_ordered(a: &HermitianOperator, b: &HermitianOperator) -> Result<()> {
    if !leq(&HermitianOperator::zeros(a.dim()), a, DEFAULT_TOL)? {
        return Err(QwitError::Precondition("single-site pair violates 0 <= a".into()));
    }
    if !leq(a, b, DEFAULT_TOL)? {
        return Err(QwitError::Precondition("single-site pair violates a <= b".into()));
    }
    Ok(())
}

pub fn collective_witness(a: &HermitianOperator, b: &HermitianOperator, n: usize) -> Result<CollectiveWitness> {
    check_ordered(a, b)?;
    let pair = CollectivePair::new(a, b, n)?;
    let v = pair.big_b.square().sub(&pair.big_a.square())?;
    let norm = 1.0 / (n * n) as f64;

    let single = b.square().sub(&a.square())?;
    let dim = v.dim();
    let mut diag = HermitianOperator::zeros(dim);
    for i in 1..=n {
        diag = diag.add(&lift(&single, i, n)?)?;
    }
    let diag_part = diag.scale(norm);
    let cross_part = v.sub(&diag_part)?;

    let plus = a.add(b)?;
    let minus = b.sub(a)?;
    let lifted_plus = (1..=n).map(|i| lift(&plus, i, n)).collect::<Result<Vec<_>>>()?;
    let lifted_minus = (1..=n).map(|i| lift(&minus, i, n)).collect::<Result<Vec<_>>>()?;
    let mut cross = crate::operator::CMatrix::zeros(dim);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                cross = cross.add(&lifted_plus[i].matrix().mul(lifted_minus[j].matrix())?)?;
            }
        }
    }
    let cross_form = HermitianOperator::hermitian_part(&cross.scale_re(norm));
    let cross_form_residual = cross_form.max_abs_diff(&cross_part);
    Ok(CollectiveWitness { v, diag_part, cross_part, cross_form_residual })
}

/// `<ψ^⊗N| V |ψ^⊗N> = <v>/N + (N-1)/N · (<b>² - <a>²)`
pub fn product_state_mean(a: &HermitianOperator, b: &HermitianOperator, psi: &[C64], n: usize) -> f64 {
    let ma = a.sandwich(psi);
    let mb = b.sandwich(psi);
    let mv = b.square().sub(&a.square()).unwrap().sandwich(psi);
    mv / n as f64 + (n as f64 - 1.0) / n as f64 * (mb * mb - ma * ma)
}

/// `ψ ⊗ … ⊗ ψ`
pub fn product_vector(psi: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![C64::new(1.0, 0.0)];
    for _ in 0..n {
        out = out.iter().flat_map(|x| psi.iter().map(move |y| x * y)).collect();
    }
    out
}

#[derive(Clone, Debug)]
pub struct ScalingRow {
    pub n: usize,
    pub lambda_min: f64,
    /// `-μ/N` with `μ = -λ_min(b² - a²)`
    pub bound: f64,
    pub cross_lambda_min: f64,
    pub cross_psd: bool,
    pub decomposition_residual: f64,
    pub cross_form_residual: f64,
}

#[derive(Clone, Debug)]
pub struct ScalingReport {
    pub mu: f64,
    pub rows: Vec<ScalingRow>,
}

pub const SCALING_CSV_HEADER: &str = "N,lambda_min,bound";

impl ScalingReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(SCALING_CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!("{},{}\n", r.n, format::csv_row(&[r.lambda_min, r.bound])));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("mu".into(), format::num(self.mu));
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut o = Map::new();
                o.insert("N".into(), Value::from(r.n));
                o.insert("lambda_min".into(), format::num(r.lambda_min));
                o.insert("bound".into(), format::num(r.bound));
                o.insert("cross_lambda_min".into(), format::num(r.cross_lambda_min));
                o.insert("cross_psd".into(), Value::from(r.cross_psd));
                o.insert("decomposition_residual".into(), format::num(r.decomposition_residual));
                o.insert("cross_form_residual".into(), format::num(r.cross_form_residual));
                Value::Object(o)
            })
            .collect();
        m.insert("rows".into(), Value::Array(rows));
        Value::Object(m)
    }
}

/// Exact diagonalization for `N = 1..=n_max`. `μ` is computed from the
/// single-site pair.
pub fn scaling_report(a: &HermitianOperator, b: &HermitianOperator, n_max: usize) -> Result<ScalingReport> {
    check_ordered(a, b)?;
    let dim = a.dim().checked_pow(n_max as u32).unwrap_or(usize::MAX);
    if dim > EIG_DIM_CAP {
        return Err(QwitError::CapExceeded { dim, cap: EIG_DIM_CAP });
    }
    let mu = -eig_hermitian(&b.square().sub(&a.square())?).min();
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let w = collective_witness(a, b, n)?;
        let cross_lambda_min = eig_hermitian(&w.cross_part).min();
        let recomposed = w.diag_part.add(&w.cross_part)?;
        rows.push(ScalingRow {
            n,
            lambda_min: eig_hermitian(&w.v).min(),
            bound: -mu / n as f64,
            cross_lambda_min,
            cross_psd: cross_lambda_min >= -DEFAULT_TOL,
            decomposition_residual: recomposed.max_abs_diff(&w.v),
            cross_form_residual: w.cross_form_residual,
        });
    }
    Ok(ScalingReport { mu, rows })
}
