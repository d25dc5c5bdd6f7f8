//! Dense complex matrix algebra for small Hermitian operators.
//!
//! [`CMatrix`] is a general square complex matrix used for intermediate
//! products. [`HermitianOperator`] wraps a `CMatrix` whose Hermiticity has
//! been validated, and is the carrier for observables, witnesses and
//! density matrices throughout the crate.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QwitError, Result};

pub type C64 = Complex64;

/// Asymmetry accepted (and symmetrized away) when building a Hermitian operator.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default tolerance for positivity and ordering checks.
pub const DEFAULT_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_vec(n: usize, data: Vec<C64>) -> Result<Self> {
        if n == 0 {
            return Err(QwitError::Malformed("dimension must be at least 1".into()));
        }
        if data.len() != n * n {
            return Err(QwitError::Malformed(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(CMatrix { n, data })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(QwitError::Malformed(format!("row of length {} in {n}x{n} matrix", row.len())));
            }
            data.extend(row.iter().map(|&x| C64::new(x, 0.0)));
        }
        Self::from_vec(n, data)
    }

    /// `|u><v|`
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len());
        let n = u.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = u[i] * v[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    fn check_same_dim(&self, other: &CMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(QwitError::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &CMatrix) -> Result<CMatrix> {
        self.check_same_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(CMatrix { n: self.n, data })
    }

    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.check_same_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(CMatrix { n: self.n, data })
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn mul(&self, other: &CMatrix) -> Result<CMatrix> {
        self.check_same_dim(other)?;
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(CMatrix { n, data: out })
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (na, nb) = (self.n, other.n);
        let n = na * nb;
        let mut out = Self::zeros(n);
        for i in 0..na {
            for j in 0..na {
                let a = self.data[i * na + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..nb {
                    for l in 0..nb {
                        out.data[(i * nb + k) * n + (j * nb + l)] = a * other.data[k * nb + l];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max_ij |M[i][j] - conj(M[j][i])|
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        worst
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `<u|M|v>`
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        let mv = self.apply(v);
        inner(u, &mv)
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn re_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(|r| r.iter().map(|z| z.re).collect()).collect()
    }

    pub fn im_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(|r| r.iter().map(|z| z.im).collect()).collect()
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.n, self.n)?;
        for row in self.data.chunks(self.n) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// `<u, v>` (conjugate-linear in the first argument).
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(v: &[C64]) -> Vec<C64> {
    let nv = norm(v);
    v.iter().map(|z| z / nv).collect()
}

/// Multiply `v` by a global phase so its first component with modulus
/// above `1e-12` is real and positive.
pub fn fix_phase(v: &mut [C64]) {
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-12).copied() {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Orthonormal basis whose first vector is `v` (normalized), completed by
/// modified Gram-Schmidt against the standard basis in index order.
pub fn complete_basis(v: &[C64]) -> Vec<Vec<C64>> {
    let n = v.len();
    let mut basis = vec![normalize(v)];
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut e = vec![ZERO; n];
        e[k] = ONE;
        for b in &basis {
            let c = inner(b, &e);
            for (x, y) in e.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
        let ne = norm(&e);
        if ne > 1e-8 {
            basis.push(e.iter().map(|z| z / ne).collect());
        }
    }
    basis
}

/// Unitary whose columns are the given vectors.
pub fn from_columns(cols: &[Vec<C64>]) -> CMatrix {
    let n = cols.len();
    let mut m = CMatrix::zeros(n);
    for (j, c) in cols.iter().enumerate() {
        for (i, z) in c.iter().enumerate() {
            m.set(i, j, *z);
        }
    }
    m
}

/// A validated Hermitian matrix.
#[derive(Clone, PartialEq)]
pub struct HermitianOperator(CMatrix);

impl fmt::Debug for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian{:?}", self.0)
    }
}

impl HermitianOperator {
    /// Validates Hermiticity: asymmetry up to [`HERMITIAN_TOL`] is symmetrized
    /// away as `(M + M†)/2`, anything larger is rejected.
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, HERMITIAN_TOL)
    }

    pub fn with_tolerance(m: CMatrix, tol: f64) -> Result<Self> {
        let asym = m.max_asymmetry();
        if asym > tol {
            return Err(QwitError::NonHermitian { max_asymmetry: asym, tol });
        }
        Ok(Self::hermitian_part(&m))
    }

    /// `(M + M†)/2` without validation. Use for results that are Hermitian
    /// by construction (squares, anticommutators, conjugations).
    pub fn hermitian_part(m: &CMatrix) -> Self {
        let n = m.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            out.data[i * n + i] = C64::new(m.data[i * n + i].re, 0.0);
            for j in (i + 1)..n {
                let z = (m.data[i * n + j] + m.data[j * n + i].conj()) * 0.5;
                out.data[i * n + j] = z;
                out.data[j * n + i] = z.conj();
            }
        }
        HermitianOperator(out)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(CMatrix::from_real_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        HermitianOperator(CMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianOperator(CMatrix::zeros(n))
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = CMatrix::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, C64::new(x, 0.0));
        }
        HermitianOperator(m)
    }

    /// `|v><v|` for the given (not necessarily normalized) vector.
    pub fn projector(v: &[C64]) -> Self {
        HermitianOperator::hermitian_part(&CMatrix::outer(v, v))
    }

    pub fn pauli_x() -> Self {
        Self::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    pub fn pauli_y() -> Self {
        let m = CMatrix::from_vec(2, vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO]).unwrap();
        HermitianOperator(m)
    }

    pub fn pauli_z() -> Self {
        Self::diagonal(&[1.0, -1.0])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(HermitianOperator(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(HermitianOperator(self.0.sub(&other.0)?))
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianOperator(self.0.scale_re(s))
    }

    pub fn square(&self) -> Self {
        Self::hermitian_part(&self.0.mul(&self.0).unwrap())
    }

    /// Shift by a multiple of the identity.
    pub fn shift(&self, s: f64) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.n {
            m.data[i * m.n + i] += s;
        }
        HermitianOperator(m)
    }

    /// Real mean value `<v|H|v>`.
    pub fn sandwich(&self, v: &[C64]) -> f64 {
        self.0.sandwich(v, v).re
    }

    /// `U H U†`
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        let m = u.mul(&self.0)?.mul(&u.adjoint())?;
        Ok(Self::hermitian_part(&m))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    pub fn to_json(&self) -> OperatorJson {
        OperatorJson { dim: self.dim(), re: self.0.re_rows(), im: self.0.im_rows(), kind: None }
    }

    pub fn from_json(j: &OperatorJson) -> Result<Self> {
        let n = j.dim;
        if j.re.len() != n || j.im.len() != n {
            return Err(QwitError::Malformed(format!("dim {n} but {} re rows, {} im rows", j.re.len(), j.im.len())));
        }
        let mut data = Vec::with_capacity(n * n);
        for (r, i) in j.re.iter().zip(&j.im) {
            if r.len() != n || i.len() != n {
                return Err(QwitError::Malformed(format!("row length mismatch for dim {n}")));
            }
            data.extend(r.iter().zip(i).map(|(&a, &b)| C64::new(a, b)));
        }
        Self::new(CMatrix::from_vec(n, data)?)
    }
}

/// JSON operator schema: `{"dim": n, "re": [[..]], "im": [[..]]}`, row-major.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OperatorJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

/// Eigenvalues sorted ascending, each paired with an orthonormal eigenvector.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<C64>>,
}

impl EigenDecomposition {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// `Σ_k λ_k v_k v_k†`
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut m = CMatrix::zeros(n);
        for (lam, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..n {
                for j in 0..n {
                    m.data[i * n + j] += v[i] * v[j].conj() * *lam;
                }
            }
        }
        m
    }
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigendecomposition of a Hermitian operator.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// a real Givens rotation, so `a_pq` is annihilated exactly. Sweeps visit
/// pairs in row-major order and stop once the off-diagonal Frobenius norm
/// falls below machine precision relative to the full norm. Eigenvalues come
/// out ascending (stable on ties, by original diagonal index); each
/// eigenvector has its first non-negligible component made real positive.
pub fn eig_hermitian(h: &HermitianOperator) -> EigenDecomposition {
    let n = h.dim();
    let mut a = h.0.data.clone();
    let mut v = CMatrix::identity(n).data;

    let frob: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = f64::EPSILON * frob.max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[p * n + q];
                let gabs = g.norm();
                if gabs == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let e = g / gabs;
                let theta = (aqq - app) / (2.0 * gabs);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let ec = e.conj();
                // A <- A J with J = [[c, s], [-s conj(e), c conj(e)]] on (p, q)
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * ec * s;
                    a[k * n + q] = akp * s + akq * ec * c;
                }
                // A <- J† A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * e * s;
                    a[q * n + k] = apk * s + aqk * e * c;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c - vkq * ec * s;
                    v[k * n + q] = vkp * s + vkq * ec * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.partial_cmp(&a[j * n + j].re).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let eigenvectors = order
        .iter()
        .map(|&j| {
            let mut col: Vec<C64> = (0..n).map(|i| v[i * n + j]).collect();
            fix_phase(&mut col);
            col
        })
        .collect();
    EigenDecomposition { eigenvalues, eigenvectors }
}

/// Eigendecomposition of a raw matrix, rejecting non-Hermitian input.
pub fn eig_matrix(m: &CMatrix) -> Result<EigenDecomposition> {
    Ok(eig_hermitian(&HermitianOperator::new(m.clone())?))
}

pub fn min_eigenvalue(h: &HermitianOperator) -> f64 {
    eig_hermitian(h).min()
}

pub fn is_psd(h: &HermitianOperator, tol: f64) -> bool {
    min_eigenvalue(h) >= -tol
}

/// `A <= B` in the operator order, i.e. `B - A` is positive semidefinite.
pub fn leq(a: &HermitianOperator, b: &HermitianOperator, tol: f64) -> Result<bool> {
    Ok(is_psd(&b.sub(a)?, tol))
}

/// `XY + YX`
pub fn anticommutator(x: &HermitianOperator, y: &HermitianOperator) -> Result<HermitianOperator> {
    let xy = x.0.mul(&y.0)?;
    let yx = y.0.mul(&x.0)?;
    Ok(HermitianOperator::hermitian_part(&xy.add(&yx)?))
}

/// `i[X, Y]`, which is Hermitian for Hermitian `X`, `Y`.
pub fn commutator_i(x: &HermitianOperator, y: &HermitianOperator) -> Result<HermitianOperator> {
    let c = commutator(x.matrix(), y.matrix())?;
    Ok(HermitianOperator::hermitian_part(&c.scale(C64::new(0.0, 1.0))))
}

/// Plain commutator `[X, Y] = XY - YX` of two matrices (anti-Hermitian for Hermitian inputs).
pub fn commutator(x: &CMatrix, y: &CMatrix) -> Result<CMatrix> {
    x.mul(y)?.sub(&y.mul(x)?)
}

pub fn kron(a: &HermitianOperator, b: &HermitianOperator) -> HermitianOperator {
    HermitianOperator(a.0.kron(&b.0))
}
