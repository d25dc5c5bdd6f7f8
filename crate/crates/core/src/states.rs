//! Density matrices, Bloch-parameterized pure states and expectation values.

use std::f64::consts::PI;

use crate::error::{QwitError, Result};
use crate::operator::{eig_hermitian, fix_phase, CMatrix, HermitianOperator, OperatorJson, C64, DEFAULT_TOL};

/// Positive semidefinite, unit-trace Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(HermitianOperator);

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let tr = op.trace();
        if (tr - 1.0).abs() > DEFAULT_TOL {
            return Err(QwitError::Precondition(format!("density matrix trace is {tr}, expected 1")));
        }
        let lmin = eig_hermitian(&op).min();
        if lmin < -DEFAULT_TOL {
            return Err(QwitError::Precondition(format!(
                "density matrix is not positive semidefinite (min eigenvalue {lmin:e})"
            )));
        }
        Ok(DensityMatrix(op))
    }

    /// Normalized pure state `|v><v|`.
    pub fn pure(v: &[C64]) -> Self {
        let v = crate::operator::normalize(v);
        DensityMatrix(HermitianOperator::projector(&v))
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn to_json(&self) -> OperatorJson {
        let mut j = self.0.to_json();
        j.kind = Some("state".to_string());
        j
    }

    /// Loads the operator schema; a `kind` tag, when present, must be `"state"`.
    pub fn from_json(j: &OperatorJson) -> Result<Self> {
        if let Some(kind) = &j.kind {
            if kind != "state" {
                return Err(QwitError::Malformed(format!("expected kind \"state\", found \"{kind}\"")));
            }
        }
        Self::new(HermitianOperator::from_json(j)?)
    }
}

/// `cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`
pub fn bloch_vector(theta: f64, phi: f64) -> Vec<C64> {
    vec![C64::new((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), phi)]
}

pub fn pure_from_bloch(theta: f64, phi: f64) -> Result<DensityMatrix> {
    if !(0.0..=PI).contains(&theta) {
        return Err(QwitError::Precondition(format!("theta = {theta} outside [0, pi]")));
    }
    if !(0.0..2.0 * PI).contains(&phi) {
        return Err(QwitError::Precondition(format!("phi = {phi} outside [0, 2pi)")));
    }
    Ok(DensityMatrix(HermitianOperator::projector(&bloch_vector(theta, phi))))
}

pub fn maximally_mixed(n: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(QwitError::Precondition("dimension must be at least 1".into()));
    }
    Ok(DensityMatrix(HermitianOperator::identity(n).scale(1.0 / n as f64)))
}

/// `Tr(ρ A)`
pub fn expectation(rho: &DensityMatrix, a: &HermitianOperator) -> Result<f64> {
    expectation_op(rho.op(), a)
}

pub(crate) fn expectation_op(rho: &HermitianOperator, a: &HermitianOperator) -> Result<f64> {
    if rho.dim() != a.dim() {
        return Err(QwitError::DimensionMismatch { expected: rho.dim(), found: a.dim() });
    }
    let n = a.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += rho.get(i, j) * a.get(j, i);
        }
    }
    Ok(acc.re)
}

/// Qubit state written as `(1 - r) I/2 + r |psi><psi|`.
#[derive(Clone, Debug)]
pub struct BlochDecomposition {
    pub r: f64,
    pub psi: Vec<C64>,
}

impl BlochDecomposition {
    pub fn reconstruct(&self) -> HermitianOperator {
        let mixed = HermitianOperator::identity(2).scale((1.0 - self.r) / 2.0);
        mixed.add(&HermitianOperator::projector(&self.psi).scale(self.r)).unwrap()
    }
}

/// Spectral gap below which a qubit state is treated as maximally mixed.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// `r` is the eigenvalue gap, `psi` the top eigenvector (phase-fixed).
/// A degenerate spectrum gives `r = 0, psi = |0>`.
pub fn bloch_decompose(rho: &DensityMatrix) -> Result<BlochDecomposition> {
    if rho.dim() != 2 {
        return Err(QwitError::DimensionMismatch { expected: 2, found: rho.dim() });
    }
    let e = eig_hermitian(rho.op());
    let r = e.eigenvalues[1] - e.eigenvalues[0];
    if r <= DEGENERACY_TOL {
        return Ok(BlochDecomposition { r: 0.0, psi: vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)] });
    }
    let mut psi = e.eigenvectors[1].clone();
    fix_phase(&mut psi);
    Ok(BlochDecomposition { r: r.min(1.0), psi })
}

/// Builds `U ρ U†` for a unitary given as a matrix; useful for moving
/// states between bases in tests and reports.
pub fn rotate(rho: &DensityMatrix, u: &CMatrix) -> Result<DensityMatrix> {
    Ok(DensityMatrix(rho.op().conjugate_by(u)?))
}
