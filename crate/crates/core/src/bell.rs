//! CHSH observables as quantumness witnesses.
//!
//! With dichotomic `A₁, A₂` on one party and `B₁, B₂` on the other,
//! `X = 2 ± A₁(B₁ + B₂)` and `Y = 2 ± A₂(B₁ - B₂)` are positive, and the
//! Bell observable `𝓑 = 2 ± (A₁B₁ + A₁B₂ + A₂B₁ - A₂B₂)` is tied to
//! `C = {X, Y}` through a commutator term. Expanding `{X, Y}` for dichotomic
//! observables gives `4𝓑 = C + [A₁, A₂] ⊗ [B₁, B₂]`; the audit here finds
//! the factor numerically instead of assuming it.

use rand::Rng;
use serde_json::{Map, Value};

use crate::error::{QwitError, Result};
use crate::format;
use crate::operator::{anticommutator, commutator, eig_hermitian, CMatrix, HermitianOperator, DEFAULT_TOL};
use crate::rng::{derive_seed, random_unitary, rng_for};

/// Factor in front of `𝓑` as commonly quoted for this identity.
pub const REFERENCE_FACTOR: u32 = 2;
/// Candidate factors scanned by [`identity_audit`].
pub const AUDIT_FACTORS: [u32; 4] = [1, 2, 3, 4];
pub const AUDIT_TOL: f64 = 1e-10;

/// Observable with spectrum in `{-1, +1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DichotomicObservable(HermitianOperator);

impl DichotomicObservable {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let resid = op.square().max_abs_diff(&HermitianOperator::identity(op.dim()));
        if resid > DEFAULT_TOL {
            return Err(QwitError::Precondition(format!("observable is not dichotomic: |O² - I|_max = {resid:e}")));
        }
        Ok(DichotomicObservable(op))
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.0
    }
}

/// `U diag(±1) U†` with a seeded Gaussian-orthonormalized `U`. For `dim >= 2`
/// the sign pattern always contains both signs.
pub fn random_dichotomic(dim: usize, seed: u64) -> Result<DichotomicObservable> {
    if dim == 0 {
        return Err(QwitError::Precondition("dimension must be at least 1".into()));
    }
    let mut rng = rng_for(seed, 0);
    let u = random_unitary(&mut rng, dim);
    let mut signs: Vec<f64> = (0..dim).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    if dim >= 2 && signs.iter().all(|&s| s == signs[0]) {
        signs[dim - 1] = -signs[0];
    }
    let op = HermitianOperator::diagonal(&signs).conjugate_by(&u)?;
    DichotomicObservable::new(op)
}

#[derive(Clone, Debug)]
pub struct BellSetting {
    pub a1: DichotomicObservable,
    pub a2: DichotomicObservable,
    pub b1: DichotomicObservable,
    pub b2: DichotomicObservable,
    /// `+1` or `-1`
    pub sign: f64,
}

impl BellSetting {
    pub fn new(
        a1: DichotomicObservable,
        a2: DichotomicObservable,
        b1: DichotomicObservable,
        b2: DichotomicObservable,
        sign: f64,
    ) -> Result<Self> {
        if a1.op().dim() != a2.op().dim() {
            return Err(QwitError::DimensionMismatch { expected: a1.op().dim(), found: a2.op().dim() });
        }
        if b1.op().dim() != b2.op().dim() {
            return Err(QwitError::DimensionMismatch { expected: b1.op().dim(), found: b2.op().dim() });
        }
        if sign != 1.0 && sign != -1.0 {
            return Err(QwitError::Precondition(format!("sign must be ±1, got {sign}")));
        }
        Ok(BellSetting { a1, a2, b1, b2, sign })
    }

    /// `A₁ = σz, A₂ = σx, B₁,₂ = (σz ± σx)/√2`, sign `-1`: the maximal-violation configuration.
    pub fn tsirelson() -> Self {
        let z = HermitianOperator::pauli_z();
        let x = HermitianOperator::pauli_x();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let b1 = z.add(&x).unwrap().scale(h);
        let b2 = z.sub(&x).unwrap().scale(h);
        BellSetting::new(
            DichotomicObservable::new(z).unwrap(),
            DichotomicObservable::new(x).unwrap(),
            DichotomicObservable::new(b1).unwrap(),
            DichotomicObservable::new(b2).unwrap(),
            -1.0,
        )
        .unwrap()
    }

    /// Four independent observables from seeds derived from `(seed, 0..4)`; sign from `(seed, 4)`.
    pub fn random(dim: usize, seed: u64) -> Result<Self> {
        let obs = |k| random_dichotomic(dim, derive_seed(seed, k));
        let sign = if derive_seed(seed, 4) & 1 == 0 { 1.0 } else { -1.0 };
        BellSetting::new(obs(0)?, obs(1)?, obs(2)?, obs(3)?, sign)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.a1.op().dim(), self.b1.op().dim())
    }

    fn lifted(&self) -> [HermitianOperator; 4] {
        let (da, db) = self.dims();
        let ia = HermitianOperator::identity(da);
        let ib = HermitianOperator::identity(db);
        [
            crate::operator::kron(self.a1.op(), &ib),
            crate::operator::kron(self.a2.op(), &ib),
            crate::operator::kron(&ia, self.b1.op()),
            crate::operator::kron(&ia, self.b2.op()),
        ]
    }
}

fn prod(x: &HermitianOperator, y: &HermitianOperator) -> HermitianOperator {
    // Lifted operators on different parties commute, so the product is Hermitian.
    HermitianOperator::hermitian_part(&x.matrix().mul(y.matrix()).unwrap())
}

/// `X = 2 + sign·(A₁B₁ + A₁B₂)`, `Y = 2 + sign·(A₂B₁ - A₂B₂)`.
pub fn chsh_xy(setting: &BellSetting) -> (HermitianOperator, HermitianOperator) {
    let [a1, a2, b1, b2] = setting.lifted();
    let s = setting.sign;
    let x = prod(&a1, &b1).add(&prod(&a1, &b2)).unwrap().scale(s).shift(2.0);
    let y = prod(&a2, &b1).sub(&prod(&a2, &b2)).unwrap().scale(s).shift(2.0);
    (x, y)
}

/// `𝓑 = 2 + sign·(A₁B₁ + A₁B₂ + A₂B₁ - A₂B₂)`
pub fn bell_operator(setting: &BellSetting) -> HermitianOperator {
    let [a1, a2, b1, b2] = setting.lifted();
    let chsh = prod(&a1, &b1).add(&prod(&a1, &b2)).unwrap().add(&prod(&a2, &b1)).unwrap().sub(&prod(&a2, &b2)).unwrap();
    chsh.scale(setting.sign).shift(2.0)
}

#[derive(Clone, Debug)]
pub struct LhvBound {
    pub bound: f64,
    /// every deterministic assignment satisfies `xy >= 0` for the scalar `X`, `Y` (both signs)
    pub positivity_holds: bool,
    pub values: Vec<([i8; 4], f64)>,
}

/// Enumerates the 16 deterministic assignments `(a₁, a₂, b₁, b₂) ∈ {±1}⁴`.
pub fn lhv_chsh_bound() -> LhvBound {
    let mut values = Vec::with_capacity(16);
    let mut positivity_holds = true;
    let mut bound = 0.0f64;
    for mask in 0..16u8 {
        let pick = |bit: u8| if mask & (1 << bit) == 0 { 1i8 } else { -1i8 };
        let v = [pick(3), pick(2), pick(1), pick(0)];
        let [a1, a2, b1, b2] = v.map(f64::from);
        let chsh = a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2;
        for s in [1.0, -1.0] {
            let x = 2.0 + s * (a1 * b1 + a1 * b2);
            let y = 2.0 + s * (a2 * b1 - a2 * b2);
            if x * y < 0.0 || x < 0.0 || y < 0.0 {
                positivity_holds = false;
            }
        }
        bound = bound.max(chsh.abs());
        values.push((v, chsh));
    }
    LhvBound { bound, positivity_holds, values }
}

#[derive(Clone, Debug)]
pub struct IdentityAudit {
    /// factors whose residual is within [`AUDIT_TOL`]
    pub matching: Vec<u32>,
    pub residuals: Vec<(u32, f64)>,
}

impl IdentityAudit {
    /// The unique matching factor, if exactly one matches.
    pub fn k_star(&self) -> Option<u32> {
        match self.matching.as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    pub fn residual(&self, k: u32) -> f64 {
        self.residuals.iter().find(|(f, _)| *f == k).map(|(_, r)| *r).unwrap_or(f64::NAN)
    }
}

/// Residuals `‖k𝓑 - C - [A₁, A₂] ⊗ [B₁, B₂]‖_max` for `k ∈ {1, 2, 3, 4}`.
pub fn identity_audit(setting: &BellSetting) -> IdentityAudit {
    let (x, y) = chsh_xy(setting);
    let c = anticommutator(&x, &y).unwrap();
    let bell = bell_operator(setting);
    let ca = commutator(setting.a1.op().matrix(), setting.a2.op().matrix()).unwrap();
    let cb = commutator(setting.b1.op().matrix(), setting.b2.op().matrix()).unwrap();
    let term: CMatrix = ca.kron(&cb);
    let rhs = c.matrix().add(&term).unwrap();
    let residuals: Vec<(u32, f64)> =
        AUDIT_FACTORS.iter().map(|&k| (k, bell.matrix().scale_re(k as f64).max_abs_diff(&rhs))).collect();
    let matching = residuals.iter().filter(|(_, r)| *r <= AUDIT_TOL).map(|(k, _)| *k).collect();
    IdentityAudit { matching, residuals }
}

#[derive(Clone, Debug)]
pub struct ChshReport {
    pub seeds: usize,
    pub dims: Vec<usize>,
    /// `Some(k)` when every audited setting matched the same single factor
    pub k_star: Option<u32>,
    /// largest residual at `k_star` across all audited settings
    pub max_residual: f64,
    pub reference_factor: u32,
    pub reference_factor_matches: bool,
    pub tsirelson_lambda_min: f64,
    pub lhv_bound: f64,
    pub lhv_positivity_holds: bool,
    /// smallest eigenvalue of X or Y over all audited settings
    pub xy_min_eigenvalue: f64,
    /// smallest eigenvalue of 𝓑 over all audited settings
    pub bell_min_eigenvalue: f64,
}

impl ChshReport {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("seeds".into(), Value::from(self.seeds));
        m.insert("dims".into(), Value::from(self.dims.clone()));
        m.insert("k_star".into(), self.k_star.map(Value::from).unwrap_or(Value::Null));
        m.insert("max_residual".into(), format::num(self.max_residual));
        m.insert("reference_factor".into(), Value::from(self.reference_factor));
        m.insert("reference_factor_matches".into(), Value::from(self.reference_factor_matches));
        m.insert("tsirelson_lambda_min".into(), format::num(self.tsirelson_lambda_min));
        m.insert("lhv_bound".into(), format::num(self.lhv_bound));
        m.insert("lhv_positivity_holds".into(), Value::from(self.lhv_positivity_holds));
        m.insert("xy_min_eigenvalue".into(), format::num(self.xy_min_eigenvalue));
        m.insert("bell_min_eigenvalue".into(), format::num(self.bell_min_eigenvalue));
        Value::Object(m)
    }
}

/// Audits `seeds` random settings per party dimension in `dims`; setting
/// `i` at dimension `d` uses seed `derive_seed(master_seed, d·2³² + i)`.
pub fn chsh_report(seeds: usize, dims: &[usize], master_seed: u64) -> Result<ChshReport> {
    let mut k_values = std::collections::BTreeSet::new();
    let mut all_matched_one = true;
    let mut audits = Vec::new();
    let mut xy_min = f64::INFINITY;
    let mut bell_min = f64::INFINITY;
    for &d in dims {
        for i in 0..seeds {
            let setting = BellSetting::random(d, derive_seed(master_seed, ((d as u64) << 32) | i as u64))?;
            let (x, y) = chsh_xy(&setting);
            xy_min = xy_min.min(eig_hermitian(&x).min()).min(eig_hermitian(&y).min());
            bell_min = bell_min.min(eig_hermitian(&bell_operator(&setting)).min());
            let audit = identity_audit(&setting);
            match audit.k_star() {
                Some(k) => {
                    k_values.insert(k);
                }
                None => all_matched_one = false,
            }
            audits.push(audit);
        }
    }
    let k_star = if all_matched_one && k_values.len() == 1 { k_values.iter().next().copied() } else { None };
    let max_residual = match k_star {
        Some(k) => audits.iter().map(|a| a.residual(k)).fold(0.0, f64::max),
        None => f64::NAN,
    };
    let lhv = lhv_chsh_bound();
    Ok(ChshReport {
        seeds,
        dims: dims.to_vec(),
        k_star,
        max_residual,
        reference_factor: REFERENCE_FACTOR,
        reference_factor_matches: k_star == Some(REFERENCE_FACTOR),
        tsirelson_lambda_min: eig_hermitian(&bell_operator(&BellSetting::tsirelson())).min(),
        lhv_bound: lhv.bound,
        lhv_positivity_holds: lhv.positivity_holds,
        xy_min_eigenvalue: xy_min,
        bell_min_eigenvalue: bell_min,
    })
}
