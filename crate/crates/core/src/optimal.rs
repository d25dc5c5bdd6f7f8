//! Optimal single-qubit witness `V = B² - A²` under the normalization `Tr B = 2`.
//!
//! Two parameterizations are provided. The Pauli form `A = s·I + a⃗·σ⃗`,
//! `B = I + b⃗·σ⃗` reduces to the scalars `p = |a⃗|², q = |b⃗|², r = |b⃗ - a⃗|²,
//! s`. The saturated form fixes `B - A = diag(2t, 0)` and leaves `(t, u, z)`;
//! maximizing `z` leaves a two-parameter closed form whose minimum
//! `-4/27` sits at `t = 1/3, u = 4/9`.

use std::f64::consts::PI;

use rand::Rng;
use serde_json::{Map, Value};

use crate::error::{QwitError, Result};
use crate::format;
use crate::operator::{eig_hermitian, inner, is_psd, leq, HermitianOperator, C64, DEFAULT_TOL};
use crate::rng::rng_for;
use crate::states::{bloch_vector, expectation, pure_from_bloch};
use crate::witness::{build_v, WitnessReport};

/// Negative radicands down to this value are clamped to zero.
pub const RADICAND_CLAMP: f64 = 1e-12;

pub const LAMBDA_OPT: f64 = -4.0 / 27.0;
pub const T_OPT: f64 = 1.0 / 3.0;
pub const U_OPT: f64 = 4.0 / 9.0;

fn clamped_sqrt(x: f64, what: &str) -> Result<f64> {
    if x < -RADICAND_CLAMP {
        return Err(QwitError::Domain(format!("{what}: radicand {x:e} is negative")));
    }
    Ok(x.max(0.0).sqrt())
}

/// The optimal pair with `B` diagonal.
pub fn optimal_pair() -> (HermitianOperator, HermitianOperator) {
    let r33 = 33f64.sqrt();
    let a00 = 2.0 / 99.0 * (33.0 + 5.0 * r33);
    let a01 = 4.0 / 3.0 * (2.0f64 / 33.0).sqrt();
    let a11 = 2.0 / 3.0 - 10.0 / (3.0 * r33);
    let a = HermitianOperator::from_real_rows(&[vec![a00, a01], vec![a01, a11]]).unwrap();
    let b = HermitianOperator::diagonal(&[(9.0 + r33) / 9.0, (9.0 - r33) / 9.0]);
    (a, b)
}

/// The printed eigenvector `(2√2/3, 1/3)`. It is not the λ_min eigenvector of
/// `optimal_pair()`; see `certifying_vector_error`.
pub fn optimal_certifying_vector() -> Vec<C64> {
    vec![C64::new(2.0 * 2f64.sqrt() / 3.0, 0.0), C64::new(1.0 / 3.0, 0.0)]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PqrsParams {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
}

impl PqrsParams {
    /// Reads `(p, q, r, s)` off a qubit pair with `Tr B = 2`.
    pub fn from_pair(a: &HermitianOperator, b: &HermitianOperator) -> Result<Self> {
        if a.dim() != 2 || b.dim() != 2 {
            return Err(QwitError::DimensionMismatch { expected: 2, found: a.dim().max(b.dim()) });
        }
        if (b.trace() - 2.0).abs() > 1e-10 {
            return Err(QwitError::Precondition(format!("Tr B = {} but the normalization requires 2", b.trace())));
        }
        let pauli = |h: &HermitianOperator| {
            let off = h.get(0, 1);
            [off.re, -off.im, (h.get(0, 0).re - h.get(1, 1).re) / 2.0]
        };
        let av = pauli(a);
        let bv = pauli(b);
        let sq = |v: [f64; 3]| v.iter().map(|x| x * x).sum::<f64>();
        Ok(PqrsParams {
            p: sq(av),
            q: sq(bv),
            r: sq([bv[0] - av[0], bv[1] - av[1], bv[2] - av[2]]),
            s: a.trace() / 2.0,
        })
    }

    /// `s² >= p` and `(1 - s)² >= r`, i.e. `0 <= A <= B`.
    pub fn is_ordered(&self, tol: f64) -> bool {
        self.s * self.s >= self.p - tol && (1.0 - self.s).powi(2) >= self.r - tol
    }
}

/// `1 - p + q - s² - 2√(q - qs + (r + p(s - 1))s)`
pub fn lambda_minus_pqrs(params: &PqrsParams) -> Result<f64> {
    let PqrsParams { p, q, r, s } = *params;
    let root = clamped_sqrt(q - q * s + (r + p * (s - 1.0)) * s, "lambda_minus_pqrs")?;
    Ok(1.0 - p + q - s * s - 2.0 * root)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TuzParams {
    pub t: f64,
    pub u: f64,
    pub z: f64,
}

impl TuzParams {
    /// Saturated `z = √(u(1 - u - t))`.
    pub fn saturated(t: f64, u: f64) -> Self {
        TuzParams { t, u, z: (u * (1.0 - u - t)).max(0.0).sqrt() }
    }

    pub fn optimal() -> Self {
        TuzParams { t: T_OPT, u: U_OPT, z: 2.0 * 2f64.sqrt() / 9.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let TuzParams { t, u, z } = *self;
        if !(t.is_finite() && u.is_finite() && z.is_finite()) {
            return Err(QwitError::Precondition("non-finite (t, u, z)".into()));
        }
        if t < 0.0 || u < 0.0 {
            return Err(QwitError::Precondition(format!("t = {t} and u = {u} must be nonnegative")));
        }
        if t + u > 1.0 + RADICAND_CLAMP {
            return Err(QwitError::Precondition(format!("t + u = {} exceeds 1, so A is not positive", t + u)));
        }
        if z * z > u * (1.0 - u - t) + RADICAND_CLAMP {
            return Err(QwitError::Precondition(format!("z² = {} exceeds u(1 - u - t) = {}", z * z, u * (1.0 - u - t))));
        }
        Ok(())
    }
}

/// `A = [[2(1 - t - u), 2z], [2z, 2u]]`, `B = [[2 - 2u, 2z], [2z, 2u]]`.
pub fn build_ab_tuz(params: &TuzParams) -> Result<(HermitianOperator, HermitianOperator)> {
    params.validate()?;
    let TuzParams { t, u, z } = *params;
    let a = HermitianOperator::from_real_rows(&[vec![-2.0 * (-1.0 + t + u), 2.0 * z], vec![2.0 * z, 2.0 * u]])?;
    let b = HermitianOperator::from_real_rows(&[vec![2.0 - 2.0 * u, 2.0 * z], vec![2.0 * z, 2.0 * u]])?;
    Ok((a, b))
}

/// `[[-4t(t - 2 + 2u), 4tz], [4tz, 0]]`
pub fn v_tuz_closed_form(params: &TuzParams) -> HermitianOperator {
    let TuzParams { t, u, z } = *params;
    HermitianOperator::from_real_rows(&[vec![-4.0 * t * (-2.0 + t + 2.0 * u), 4.0 * t * z], vec![4.0 * t * z, 0.0]])
        .unwrap()
}

/// Lower eigenvalue of `V` for free `z`.
pub fn lambda_minus_tuz(params: &TuzParams) -> Result<f64> {
    let TuzParams { t, u, z } = *params;
    let k = -2.0 + t + 2.0 * u;
    let root = clamped_sqrt(t * t * (k * k + 4.0 * z * z), "lambda_minus_tuz")?;
    Ok(-2.0 * (t * k + root))
}

/// Lower eigenvalue of `V` with `z` saturated at `z² = u(1 - u - t)`.
pub fn lambda_minus_tu(t: f64, u: f64) -> Result<f64> {
    if t < 0.0 || u < 0.0 || t + u > 1.0 + RADICAND_CLAMP {
        return Err(QwitError::Domain(format!("(t, u) = ({t}, {u}) outside t, u >= 0, t + u <= 1")));
    }
    let root = clamped_sqrt(t * t * ((-2.0 + t).powi(2) - 4.0 * u), "lambda_minus_tu")?;
    Ok(-2.0 * (root + t * (-2.0 + t + 2.0 * u)))
}

/// Closed-form partial derivatives `(∂λ/∂u, ∂λ/∂t)` of [`lambda_minus_tu`].
pub fn stationarity(t: f64, u: f64) -> Result<(f64, f64)> {
    let disc = (t - 2.0).powi(2) - 4.0 * u;
    if disc <= 0.0 {
        return Err(QwitError::Domain(format!("(t - 2)² - 4u = {disc} must be positive")));
    }
    let root = disc.sqrt();
    let d_du = 4.0 * t * (-1.0 + 1.0 / root);
    let d_dt = -4.0 * (-1.0 + t + (2.0 + t * (t - 3.0) - 2.0 * u) / root + u);
    Ok((d_du, d_dt))
}

/// `∂λ/∂t` restricted to the `det A = 0` branch `u = ((t - 2)² - 1)/4`.
pub fn reduced_dt_on_det_branch(t: f64) -> f64 {
    -(t - 1.0) * (3.0 * t - 1.0)
}

pub fn det_branch_u(t: f64) -> f64 {
    ((t - 2.0).powi(2) - 1.0) / 4.0
}

#[derive(Clone, Debug)]
pub struct OptimalReport {
    pub report: WitnessReport,
    pub a: HermitianOperator,
    pub b: HermitianOperator,
    pub trace_b: f64,
    pub zero_le_a: bool,
    pub a_le_b: bool,
    /// max component distance between the phase-aligned certifying vector and `(2√2/3, 1/3)`
    pub certifying_vector_error: f64,
    /// largest spectral difference of `A`, `B`, `V` against the `(t, u, z)` construction
    pub tuz_spectra_residual: f64,
    pub pqrs: PqrsParams,
    pub lambda_pqrs: f64,
}

impl OptimalReport {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("A".into(), format::operator(&self.a));
        m.insert("B".into(), format::operator(&self.b));
        m.insert("witness".into(), format::operator(&self.report.witness));
        m.insert("lambda_min".into(), format::num(self.report.lambda_min));
        m.insert("lambda_exact".into(), format::num(LAMBDA_OPT));
        m.insert("trace_B".into(), format::num(self.trace_b));
        m.insert("zero_le_A".into(), Value::from(self.zero_le_a));
        m.insert("A_le_B".into(), Value::from(self.a_le_b));
        m.insert("certifying_vector".into(), format::complex_vec(&self.report.certifying_vector));
        m.insert("certifying_vector_error".into(), format::num(self.certifying_vector_error));
        m.insert("tuz_spectra_residual".into(), format::num(self.tuz_spectra_residual));
        m.insert("is_quantumness_witness".into(), Value::from(self.report.is_quantumness_witness));
        let mut p = Map::new();
        p.insert("p".into(), format::num(self.pqrs.p));
        p.insert("q".into(), format::num(self.pqrs.q));
        p.insert("r".into(), format::num(self.pqrs.r));
        p.insert("s".into(), format::num(self.pqrs.s));
        m.insert("pqrs".into(), Value::Object(p));
        m.insert("lambda_pqrs".into(), format::num(self.lambda_pqrs));
        let mut tuz = Map::new();
        tuz.insert("t".into(), format::num(T_OPT));
        tuz.insert("u".into(), format::num(U_OPT));
        tuz.insert("z".into(), format::num(TuzParams::optimal().z));
        m.insert("tuz".into(), Value::Object(tuz));
        Value::Object(m)
    }
}

/// Distance between `v` and `target` after removing the relative global phase.
pub fn phase_aligned_distance(v: &[C64], target: &[C64]) -> f64 {
    let ov = inner(v, target);
    let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { C64::new(1.0, 0.0) };
    v.iter().zip(target).map(|(a, b)| (a * phase - b).norm()).fold(0.0, f64::max)
}

fn spectrum_diff(x: &HermitianOperator, y: &HermitianOperator) -> f64 {
    let ex = eig_hermitian(x).eigenvalues;
    let ey = eig_hermitian(y).eigenvalues;
    ex.iter().zip(&ey).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

pub fn optimal_witness() -> OptimalReport {
    let (a, b) = optimal_pair();
    let report = build_v(&a, &b, DEFAULT_TOL).expect("optimal pair is ordered");
    let certifying_vector_error = phase_aligned_distance(&report.certifying_vector, &optimal_certifying_vector());
    let (at, bt) = build_ab_tuz(&TuzParams::optimal()).expect("optimal (t, u, z) is valid");
    let vt = bt.square().sub(&at.square()).unwrap();
    let tuz_spectra_residual =
        spectrum_diff(&a, &at).max(spectrum_diff(&b, &bt)).max(spectrum_diff(&report.witness, &vt));
    let pqrs = PqrsParams::from_pair(&a, &b).expect("Tr B = 2");
    let lambda_pqrs = lambda_minus_pqrs(&pqrs).expect("valid parameters");
    OptimalReport {
        trace_b: b.trace(),
        zero_le_a: is_psd(&a, DEFAULT_TOL),
        a_le_b: leq(&a, &b, DEFAULT_TOL).unwrap(),
        certifying_vector_error,
        tuz_spectra_residual,
        pqrs,
        lambda_pqrs,
        a,
        b,
        report,
    }
}

/// Feasible set explored by [`numeric_search_in`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SearchRegion {
    /// `t, u >= 0`, `t + u <= 1`
    Triangle,
    /// `u = 0`, `t ∈ [0, 1]`
    ULine,
    /// fixed `t`, `u ∈ [0, 1 - t]`
    FixedT(f64),
}

impl SearchRegion {
    fn feasible(&self, t: f64, u: f64) -> bool {
        let base = t >= 0.0 && u >= 0.0 && t + u <= 1.0;
        match *self {
            SearchRegion::Triangle => base,
            SearchRegion::ULine => base && u == 0.0,
            SearchRegion::FixedT(t0) => base && t == t0,
        }
    }

    fn grid(&self, n: usize) -> Vec<(f64, f64)> {
        let h = 1.0 / (n - 1) as f64;
        match *self {
            SearchRegion::Triangle => (0..n)
                .flat_map(|i| (0..n - i).map(move |j| (i as f64 * h, j as f64 * h)))
                .collect(),
            SearchRegion::ULine => (0..n).map(|i| (i as f64 * h, 0.0)).collect(),
            SearchRegion::FixedT(t0) => (0..n).map(|j| (t0, j as f64 * h * (1.0 - t0).max(0.0))).collect(),
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> (f64, f64) {
        match *self {
            SearchRegion::Triangle => {
                let (mut t, mut u): (f64, f64) = (rng.random(), rng.random());
                if t + u > 1.0 {
                    t = 1.0 - t;
                    u = 1.0 - u;
                }
                (t, u)
            }
            SearchRegion::ULine => (rng.random(), 0.0),
            SearchRegion::FixedT(t0) => (t0, rng.random::<f64>() * (1.0 - t0).max(0.0)),
        }
    }

    fn free_axes(&self) -> &'static [usize] {
        match self {
            SearchRegion::Triangle => &[0, 1],
            SearchRegion::ULine => &[0],
            SearchRegion::FixedT(_) => &[1],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchResult {
    pub t: f64,
    pub u: f64,
    pub lambda: f64,
    pub evaluations: usize,
}

/// Number of seeded random starts refined alongside the best grid point.
pub const SEARCH_RESTARTS: u64 = 4;

pub fn numeric_search(grid_n: usize, refine_iters: usize, seed: u64) -> Result<SearchResult> {
    numeric_search_in(SearchRegion::Triangle, grid_n, refine_iters, seed)
}

/// Coarse grid followed by coordinate descent with a halving step.
///
/// The best grid point and `SEARCH_RESTARTS` seeded random points are each
/// refined; the best refined point wins (ties keep the earliest start).
pub fn numeric_search_in(region: SearchRegion, grid_n: usize, refine_iters: usize, seed: u64) -> Result<SearchResult> {
    if grid_n < 50 {
        return Err(QwitError::Precondition(format!("grid_n = {grid_n} must be at least 50")));
    }
    let f = |t: f64, u: f64| lambda_minus_tu(t, u).unwrap_or(f64::INFINITY);
    let mut evaluations = 0usize;

    let mut best = (f64::NAN, f64::NAN, f64::INFINITY);
    for (t, u) in region.grid(grid_n) {
        let v = f(t, u);
        evaluations += 1;
        if v < best.2 {
            best = (t, u, v);
        }
    }
    let mut starts = vec![(best.0, best.1)];
    for k in 0..SEARCH_RESTARTS {
        starts.push(region.sample(&mut rng_for(seed, k)));
    }

    let step0 = 1.0 / (grid_n - 1) as f64;
    let mut winner = (f64::NAN, f64::NAN, f64::INFINITY);
    for (t0, u0) in starts {
        let mut x = [t0, u0];
        let mut fx = f(x[0], x[1]);
        evaluations += 1;
        let mut step = step0;
        for _ in 0..refine_iters {
            if step < 1e-14 {
                break;
            }
            let mut improved = false;
            for &axis in region.free_axes() {
                for dir in [1.0, -1.0] {
                    let mut y = x;
                    y[axis] += dir * step;
                    if !region.feasible(y[0], y[1]) {
                        continue;
                    }
                    let fy = f(y[0], y[1]);
                    evaluations += 1;
                    if fy < fx {
                        x = y;
                        fx = fy;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if fx < winner.2 {
            winner = (x[0], x[1], fx);
        }
    }
    Ok(SearchResult { t: winner.0, u: winner.1, lambda: winner.2, evaluations })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub theta: f64,
    pub phi: f64,
    pub mean_b_minus_a: f64,
    pub mean_v: f64,
}

/// Expectations of `B - A` and `B² - A²` over pure qubit states, row-major
/// in `(theta index, phi index)`.
#[derive(Clone, Debug)]
pub struct ScanTable {
    pub n_theta: usize,
    pub n_phi: usize,
    pub rows: Vec<ScanRow>,
}

pub const CSV_HEADER: &str = "theta,phi,mean_BmA,mean_V";

/// Strictly negative cutoff used to decide membership of the negative region.
pub const NEGATIVE_REGION_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug)]
pub struct ScanSummary {
    pub min_b_minus_a: f64,
    pub argmin_b_minus_a: (f64, f64),
    pub min_v: f64,
    pub argmin_v: (f64, f64),
    pub negative_cells: usize,
    pub negative_components: usize,
}

/// θ includes both endpoints, φ excludes 2π.
pub fn scan_angles(n_theta: usize, n_phi: usize) -> (Vec<f64>, Vec<f64>) {
    let thetas = (0..n_theta).map(|i| PI * i as f64 / (n_theta - 1) as f64).collect();
    let phis = (0..n_phi).map(|j| 2.0 * PI * j as f64 / n_phi as f64).collect();
    (thetas, phis)
}

pub fn bloch_scan(a: &HermitianOperator, b: &HermitianOperator, n_theta: usize, n_phi: usize) -> Result<ScanTable> {
    if n_theta < 2 || n_phi < 2 {
        return Err(QwitError::Precondition(format!("scan needs n_theta, n_phi >= 2 (got {n_theta}, {n_phi})")));
    }
    if a.dim() != 2 || b.dim() != 2 {
        return Err(QwitError::DimensionMismatch { expected: 2, found: a.dim().max(b.dim()) });
    }
    let bma = b.sub(a)?;
    let v = b.square().sub(&a.square())?;
    let (thetas, phis) = scan_angles(n_theta, n_phi);
    let mut rows = Vec::with_capacity(n_theta * n_phi);
    for &theta in &thetas {
        for &phi in &phis {
            let psi = bloch_vector(theta, phi);
            rows.push(ScanRow { theta, phi, mean_b_minus_a: bma.sandwich(&psi), mean_v: v.sandwich(&psi) });
        }
    }
    Ok(ScanTable { n_theta, n_phi, rows })
}

impl ScanTable {
    fn at(&self, i: usize, j: usize) -> &ScanRow {
        &self.rows[i * self.n_phi + j]
    }

    /// Connected components of `{mean_V < -NEGATIVE_REGION_TOL}` under
    /// 4-neighbour adjacency on the sphere: φ wraps around, and each pole
    /// row is a single point.
    pub fn negative_components(&self) -> usize {
        let (nt, np) = (self.n_theta, self.n_phi);
        let neg = |i: usize, j: usize| self.at(i, j).mean_v < -NEGATIVE_REGION_TOL;
        let mut seen = vec![false; nt * np];
        let mut components = 0;
        for start in 0..nt * np {
            if seen[start] || !neg(start / np, start % np) {
                continue;
            }
            components += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(cell) = stack.pop() {
                let (i, j) = (cell / np, cell % np);
                let mut nbrs = vec![(i, (j + 1) % np), (i, (j + np - 1) % np)];
                if i > 0 {
                    nbrs.push((i - 1, j));
                }
                if i + 1 < nt {
                    nbrs.push((i + 1, j));
                }
                if i == 0 || i == nt - 1 {
                    nbrs.extend((0..np).map(|k| (i, k)));
                }
                for (a, b) in nbrs {
                    let idx = a * np + b;
                    if !seen[idx] && neg(a, b) {
                        seen[idx] = true;
                        stack.push(idx);
                    }
                }
            }
        }
        components
    }

    pub fn summary(&self) -> ScanSummary {
        let mut s = ScanSummary {
            min_b_minus_a: f64::INFINITY,
            argmin_b_minus_a: (0.0, 0.0),
            min_v: f64::INFINITY,
            argmin_v: (0.0, 0.0),
            negative_cells: 0,
            negative_components: self.negative_components(),
        };
        for r in &self.rows {
            if r.mean_b_minus_a < s.min_b_minus_a {
                s.min_b_minus_a = r.mean_b_minus_a;
                s.argmin_b_minus_a = (r.theta, r.phi);
            }
            if r.mean_v < s.min_v {
                s.min_v = r.mean_v;
                s.argmin_v = (r.theta, r.phi);
            }
            if r.mean_v < -NEGATIVE_REGION_TOL {
                s.negative_cells += 1;
            }
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * 64);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format::csv_row(&[r.theta, r.phi, r.mean_b_minus_a, r.mean_v]));
            out.push('\n');
        }
        out
    }
}

impl ScanSummary {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("min_mean_BmA".into(), format::num(self.min_b_minus_a));
        m.insert("argmin_mean_BmA".into(), format::num_vec(&[self.argmin_b_minus_a.0, self.argmin_b_minus_a.1]));
        m.insert("min_mean_V".into(), format::num(self.min_v));
        m.insert("argmin_mean_V".into(), format::num_vec(&[self.argmin_v.0, self.argmin_v.1]));
        m.insert("negative_cells".into(), Value::from(self.negative_cells));
        m.insert("negative_components".into(), Value::from(self.negative_components));
        Value::Object(m)
    }
}

/// Mean of `B² - A²` on the pure state at `(theta, phi)`, via the density-matrix path.
pub fn mean_v_at(a: &HermitianOperator, b: &HermitianOperator, theta: f64, phi: f64) -> Result<f64> {
    let v = b.square().sub(&a.square())?;
    expectation(&pure_from_bloch(theta, phi)?, &v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn optimal_pair_spectra() {
        let (a, b) = optimal_pair();
        let eb = eig_hermitian(&b).eigenvalues;
        close(eb[0], (9.0 - 33f64.sqrt()) / 9.0, 1e-15);
        close(eb[1], (9.0 + 33f64.sqrt()) / 9.0, 1e-15);
        close(eb[0], 0.3617153, 1e-6);
        close(eb[1], 1.6382847, 1e-6);
        let ea = eig_hermitian(&a).eigenvalues;
        assert!(ea[0].abs() < 1e-14, "det A = 0 means a zero eigenvalue, got {}", ea[0]);
        assert!(is_psd(&a, 1e-10));
        assert!(leq(&a, &b, 1e-10).unwrap());
    }

    #[test]
    fn pqrs_formula_examples() {
        close(lambda_minus_pqrs(&PqrsParams { p: 0.0, q: 0.0, r: 0.0, s: 0.0 }).unwrap(), 1.0, 0.0);
        close(lambda_minus_pqrs(&PqrsParams { p: 0.0, q: 0.0, r: 0.0, s: 1.0 }).unwrap(), 0.0, 0.0);
        let (a, b) = build_ab_tuz(&TuzParams::optimal()).unwrap();
        let p = PqrsParams::from_pair(&a, &b).unwrap();
        assert!(p.is_ordered(1e-12));
        close(lambda_minus_pqrs(&p).unwrap(), LAMBDA_OPT, 1e-14);
        close(p.p, 4.0 / 9.0, 1e-15);
        close(p.q, 33.0 / 81.0, 1e-15);
        close(p.r, 1.0 / 9.0, 1e-15);
        close(p.s, 2.0 / 3.0, 1e-15);
        assert!(lambda_minus_pqrs(&PqrsParams { p: 0.0, q: -1.0, r: 0.0, s: 0.0 }).is_err());
    }

    #[test]
    fn tuz_construction_examples() {
        let (a, b) = build_ab_tuz(&TuzParams::optimal()).unwrap();
        let r2 = 2f64.sqrt();
        let want_a = HermitianOperator::from_real_rows(&[vec![4.0 / 9.0, 4.0 * r2 / 9.0], vec![4.0 * r2 / 9.0, 8.0 / 9.0]]).unwrap();
        let want_b = HermitianOperator::from_real_rows(&[vec![10.0 / 9.0, 4.0 * r2 / 9.0], vec![4.0 * r2 / 9.0, 8.0 / 9.0]]).unwrap();
        assert!(a.max_abs_diff(&want_a) < 1e-15);
        assert!(b.max_abs_diff(&want_b) < 1e-15);
        let det = a.get(0, 0).re * a.get(1, 1).re - a.get(0, 1).norm_sqr();
        assert!(det.abs() <= 1e-12);
        close(b.trace(), 2.0, 1e-15);

        let (a, b) = build_ab_tuz(&TuzParams { t: 0.0, u: 0.0, z: 0.0 }).unwrap();
        assert_eq!(a, HermitianOperator::diagonal(&[2.0, 0.0]));
        assert_eq!(a, b);

        assert!(build_ab_tuz(&TuzParams { t: 0.5, u: 0.4, z: 0.3 }).is_err());
        assert!(build_ab_tuz(&TuzParams { t: 1.5, u: 0.0, z: 0.0 }).is_err());
        assert!(build_ab_tuz(&TuzParams { t: -0.1, u: 0.2, z: 0.0 }).is_err());
    }

    #[test]
    fn tu_closed_form_examples() {
        close(lambda_minus_tu(T_OPT, U_OPT).unwrap(), LAMBDA_OPT, 1e-15);
        close(lambda_minus_tu(1.0 / 3.0, 0.0).unwrap(), 0.0, 1e-15);
        close(lambda_minus_tu(1.0, 0.0).unwrap(), 0.0, 1e-15);
        assert!(lambda_minus_tu(1.5, 0.0).is_err());
        close(lambda_minus_tuz(&TuzParams::optimal()).unwrap(), LAMBDA_OPT, 1e-15);
    }

    #[test]
    fn stationary_points() {
        let (du, dt) = stationarity(T_OPT, U_OPT).unwrap();
        close(du, 0.0, 1e-14);
        close(dt, 0.0, 1e-14);
        let (du, dt) = stationarity(1.0, 0.0).unwrap();
        close(du, 0.0, 1e-15);
        close(dt, 0.0, 1e-15);
        close(reduced_dt_on_det_branch(1.0), 0.0, 0.0);
        close(reduced_dt_on_det_branch(1.0 / 3.0), 0.0, 1e-16);
        for k in 1..20 {
            let t = 0.05 * k as f64;
            let (_, dt) = stationarity(t, det_branch_u(t)).unwrap();
            close(dt, reduced_dt_on_det_branch(t), 1e-12);
        }
        assert!(stationarity(0.0, 1.0).is_err());
    }

    #[test]
    fn optimal_report() {
        let rep = optimal_witness();
        close(rep.report.lambda_min, LAMBDA_OPT, 1e-12);
        close(rep.trace_b, 2.0, 1e-12);
        assert!(rep.zero_le_a && rep.a_le_b);
        // The printed vector does not diagonalize V for these matrices.
        assert!(rep.certifying_vector_error > 0.5, "{}", rep.certifying_vector_error);
        let v = &rep.report.certifying_vector;
        close(v[0].re, 0.3504736, 1e-6);
        close(v[1].re, 0.9365726, 1e-6);
        assert!(rep.tuz_spectra_residual < 1e-12);
        close(rep.lambda_pqrs, LAMBDA_OPT, 1e-13);
    }

    #[test]
    fn search_restricted_regions() {
        let r = numeric_search_in(SearchRegion::ULine, 60, 200, 1).unwrap();
        close(r.lambda, 0.0, 1e-15);
        let r = numeric_search_in(SearchRegion::FixedT(1.0), 60, 200, 1).unwrap();
        assert!(r.lambda >= LAMBDA_OPT);
        close(r.lambda, 0.0, 1e-15);
        assert!(numeric_search(10, 10, 0).is_err());
    }

    #[test]
    fn scan_small_grid() {
        let (a, b) = optimal_pair();
        let table = bloch_scan(&a, &b, 5, 4).unwrap();
        assert_eq!(table.rows.len(), 20);
        assert_eq!(table.rows[4].theta, PI / 4.0);
        assert_eq!(table.rows[1].phi, PI / 2.0);
        let csv = table.to_csv();
        assert!(csv.starts_with("theta,phi,mean_BmA,mean_V\n0,0,"));
        assert_eq!(csv.lines().count(), 21);
        let same = bloch_scan(&a, &a, 5, 4).unwrap();
        assert!(same.rows.iter().all(|r| r.mean_v.abs() < 1e-15 && r.mean_b_minus_a.abs() < 1e-15));
        assert_eq!(same.negative_components(), 0);
        assert!(bloch_scan(&a, &b, 1, 4).is_err());
    }

    #[test]
    fn scan_matches_density_path() {
        let (a, b) = optimal_pair();
        let table = bloch_scan(&a, &b, 7, 6).unwrap();
        for r in &table.rows {
            close(mean_v_at(&a, &b, r.theta, r.phi).unwrap(), r.mean_v, 1e-14);
        }
    }

    #[test]
    fn components_respect_phi_seam() {
        // Negative band centred on φ = 0 must count as one region.
        let rows = (0..3)
            .flat_map(|i| {
                (0..4).map(move |j| ScanRow {
                    theta: i as f64,
                    phi: j as f64,
                    mean_b_minus_a: 0.0,
                    mean_v: if i == 1 && (j == 0 || j == 3) { -1.0 } else { 1.0 },
                })
            })
            .collect();
        let t = ScanTable { n_theta: 3, n_phi: 4, rows };
        assert_eq!(t.negative_components(), 1);
    }
}
