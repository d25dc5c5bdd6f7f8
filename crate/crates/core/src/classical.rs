//! Classical (commutative) models on a partition of an interval into unit
//! cells, and the minimal-model check on measured first and second moments.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{QwitError, Result};
use crate::format;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Step function `f(x) = Σ f_i χ_i(x)` over `n` unit cells.
#[derive(Clone, Debug, PartialEq)]
pub struct StepObservable(Vec<f64>);

impl StepObservable {
    pub fn new(cells: Vec<f64>) -> Result<Self> {
        if cells.is_empty() {
            return Err(QwitError::Precondition("step observable needs at least one cell".into()));
        }
        if cells.iter().any(|c| !c.is_finite()) {
            return Err(QwitError::Precondition("step observable has a non-finite coefficient".into()));
        }
        Ok(StepObservable(cells))
    }

    pub fn cells(&self) -> &[f64] {
        &self.0
    }

    /// `f <= g` cell by cell, which is the order relation of the commutative algebra.
    pub fn le(&self, other: &StepObservable) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

/// Cell masses `p_i = ∫ χ_i p(x) dx` of a probability density.
#[derive(Clone, Debug, PartialEq)]
pub struct CellState(Vec<f64>);

impl CellState {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(QwitError::Precondition("cell weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(QwitError::Precondition(format!("cell weights sum to {total}, expected 1")));
        }
        Ok(CellState(weights))
    }

    /// All mass in one cell (a sufficiently peaked density).
    pub fn peaked(n: usize, cell: usize) -> Self {
        let mut w = vec![0.0; n];
        w[cell] = 1.0;
        CellState(w)
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }
}

/// `Σ p_i f_i^power`
pub fn classical_expectation(f: &StepObservable, p: &CellState, power: u32) -> Result<f64> {
    if f.0.len() != p.0.len() {
        return Err(QwitError::DimensionMismatch { expected: f.0.len(), found: p.0.len() });
    }
    if !(power == 1 || power == 2) {
        return Err(QwitError::Precondition(format!("power must be 1 or 2, got {power}")));
    }
    Ok(f.0.iter().zip(&p.0).map(|(fi, pi)| pi * fi.powi(power as i32)).sum())
}

/// `A = 3/2` on `[0, 2]`, `0` on `(2, 3]`.
pub fn example_a() -> StepObservable {
    StepObservable(vec![1.5, 1.5, 0.0])
}

/// `B = 3` on `[0, 1]`, `1` on `(1, 3]`.
pub fn example_b() -> StepObservable {
    StepObservable(vec![3.0, 1.0, 1.0])
}

#[derive(Clone, Debug)]
pub struct CellComparison {
    pub cell: usize,
    pub mean_a: f64,
    pub mean_b: f64,
}

#[derive(Clone, Debug)]
pub struct PeakedStatesReport {
    pub comparisons: Vec<CellComparison>,
    pub ordered: bool,
}

impl PeakedStatesReport {
    pub fn verdict(&self) -> &'static str {
        if self.ordered { "ordered" } else { "unordered" }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("example".into(), Value::from(2));
        m.insert(
            "cells".into(),
            Value::Array(
                self.comparisons
                    .iter()
                    .map(|c| {
                        let mut o = Map::new();
                        o.insert("cell".into(), Value::from(c.cell + 1));
                        o.insert("mean_A".into(), format::num(c.mean_a));
                        o.insert("mean_B".into(), format::num(c.mean_b));
                        Value::Object(o)
                    })
                    .collect(),
            ),
        );
        m.insert("verdict".into(), Value::from(self.verdict()));
        Value::Object(m)
    }
}

/// Cell-peaked states resolve each cell, so comparing means on them decides
/// whether `A <= B` or `B <= A` holds in the full model.
pub fn example2_demo() -> PeakedStatesReport {
    let (a, b) = (example_a(), example_b());
    let n = a.cells().len();
    let comparisons: Vec<CellComparison> = (0..n)
        .map(|cell| {
            let p = CellState::peaked(n, cell);
            CellComparison {
                cell,
                mean_a: classical_expectation(&a, &p, 1).unwrap(),
                mean_b: classical_expectation(&b, &p, 1).unwrap(),
            }
        })
        .collect();
    let a_le_b = comparisons.iter().all(|c| c.mean_a <= c.mean_b);
    let b_le_a = comparisons.iter().all(|c| c.mean_b <= c.mean_a);
    PeakedStatesReport { comparisons, ordered: a_le_b || b_le_a }
}

#[derive(Clone, Debug)]
pub struct CoarseStateRow {
    pub name: String,
    pub mean_a: f64,
    pub mean_b: f64,
    pub mean_a2: f64,
    pub mean_b2: f64,
}

impl CoarseStateRow {
    pub fn gap(&self) -> f64 {
        self.mean_b2 - self.mean_a2
    }
}

#[derive(Clone, Debug)]
pub struct LoopholeReport {
    pub rows: Vec<CoarseStateRow>,
    pub verdict: Verdict,
    /// the observables are not ordered cell by cell, so the model itself is classical but not minimal
    pub full_model_ordered: bool,
}

impl LoopholeReport {
    pub fn q2_gap(&self) -> f64 {
        self.rows[1].gap()
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("example".into(), Value::from(3));
        for r in &self.rows {
            let mut o = Map::new();
            o.insert("mean_A".into(), format::num(r.mean_a));
            o.insert("mean_B".into(), format::num(r.mean_b));
            o.insert("mean_A2".into(), format::num(r.mean_a2));
            o.insert("mean_B2".into(), format::num(r.mean_b2));
            o.insert("gap".into(), format::num(r.gap()));
            m.insert(r.name.clone(), Value::Object(o));
        }
        m.insert("q2_gap".into(), format::num(self.q2_gap()));
        m.insert("verdict".into(), self.verdict.to_json());
        m.insert("full_model_ordered".into(), Value::from(self.full_model_ordered));
        Value::Object(m)
    }
}

/// Coarse states `q₁ = (1/2, 1/2, 0)` and `q₂ = (0, 1/2, 1/2)` establish
/// `0 < <A> < <B>` yet `<B²> - <A²> = -1/8` on `q₂`, although the model is
/// commutative.
pub fn example3_demo() -> LoopholeReport {
    let (a, b) = (example_a(), example_b());
    let states = [("q1", vec![0.5, 0.5, 0.0]), ("q2", vec![0.0, 0.5, 0.5])];
    let rows: Vec<CoarseStateRow> = states
        .iter()
        .map(|(name, w)| {
            let p = CellState(w.clone());
            CoarseStateRow {
                name: name.to_string(),
                mean_a: classical_expectation(&a, &p, 1).unwrap(),
                mean_b: classical_expectation(&b, &p, 1).unwrap(),
                mean_a2: classical_expectation(&a, &p, 2).unwrap(),
                mean_b2: classical_expectation(&b, &p, 2).unwrap(),
            }
        })
        .collect();
    let data = MomentDataset::from_step_observables(&[("A", &a), ("B", &b)], &states.map(|(n, w)| (n.to_string(), CellState(w))));
    let verdict = minimal_model_check(&data, "A", "B", DEFAULT_TOL).expect("complete dataset");
    LoopholeReport { rows, verdict, full_model_ordered: a.le(&b) || b.le(&a) }
}

/// Measured first and second moments per state and observable.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct MomentDataset {
    pub observables: Vec<String>,
    pub states: Vec<String>,
    pub m1: BTreeMap<String, BTreeMap<String, f64>>,
    pub m2: BTreeMap<String, BTreeMap<String, f64>>,
}

impl MomentDataset {
    pub fn from_step_observables(obs: &[(&str, &StepObservable)], states: &[(String, CellState)]) -> Self {
        let mut d = MomentDataset {
            observables: obs.iter().map(|(n, _)| n.to_string()).collect(),
            states: states.iter().map(|(n, _)| n.clone()).collect(),
            ..Default::default()
        };
        for (sname, p) in states {
            for (oname, f) in obs {
                d.m1.entry(sname.clone()).or_default().insert(oname.to_string(), classical_expectation(f, p, 1).unwrap());
                d.m2.entry(sname.clone()).or_default().insert(oname.to_string(), classical_expectation(f, p, 2).unwrap());
            }
        }
        d
    }

    pub fn insert(&mut self, state: &str, obs: &str, first: f64, second: f64) {
        if !self.states.iter().any(|s| s == state) {
            self.states.push(state.to_string());
        }
        if !self.observables.iter().any(|o| o == obs) {
            self.observables.push(obs.to_string());
        }
        self.m1.entry(state.to_string()).or_default().insert(obs.to_string(), first);
        self.m2.entry(state.to_string()).or_default().insert(obs.to_string(), second);
    }

    fn moment(&self, table: &BTreeMap<String, BTreeMap<String, f64>>, which: &str, state: &str, obs: &str) -> Result<f64> {
        table
            .get(state)
            .and_then(|row| row.get(obs))
            .copied()
            .ok_or_else(|| QwitError::MissingData(format!("{which} of '{obs}' on state '{state}'")))
    }

    /// Variance nonnegativity `m2 >= m1² - 1e-9` wherever both are present.
    pub fn validate(&self) -> Result<()> {
        for (state, row) in &self.m1 {
            for (obs, &first) in row {
                if let Some(&second) = self.m2.get(state).and_then(|r| r.get(obs)) {
                    if second < first * first - 1e-9 {
                        return Err(QwitError::Precondition(format!(
                            "negative variance for '{obs}' on '{state}': m2 = {second}, m1² = {}",
                            first * first
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// Ordering `0 <= A <= B` holds on every state but `<A²> > <B²>` on the listed states.
    NoMinimalClassicalModel { witnesses: Vec<String> },
    /// Ordering fails on the listed states, so the pair cannot test anything.
    OrderingNotEstablished { violations: Vec<String> },
    ClassicalConsistent,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::NoMinimalClassicalModel { .. } => "NoMinimalClassicalModel",
            Verdict::OrderingNotEstablished { .. } => "OrderingNotEstablished",
            Verdict::ClassicalConsistent => "ClassicalConsistent",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("verdict".into(), Value::from(self.name()));
        match self {
            Verdict::NoMinimalClassicalModel { witnesses } => {
                m.insert("witness_states".into(), Value::from(witnesses.clone()));
            }
            Verdict::OrderingNotEstablished { violations } => {
                m.insert("ordering_violations".into(), Value::from(violations.clone()));
            }
            Verdict::ClassicalConsistent => {}
        }
        Value::Object(m)
    }
}

/// Decides whether the data rule out a minimal classical model for the pair `(A, B)`.
pub fn minimal_model_check(data: &MomentDataset, a: &str, b: &str, tol: f64) -> Result<Verdict> {
    let mut violations = Vec::new();
    let mut witnesses = Vec::new();
    for state in &data.states {
        let ma = data.moment(&data.m1, "first moment", state, a)?;
        let mb = data.moment(&data.m1, "first moment", state, b)?;
        let ma2 = data.moment(&data.m2, "second moment", state, a)?;
        let mb2 = data.moment(&data.m2, "second moment", state, b)?;
        if !(ma >= -tol && ma <= mb + tol) {
            violations.push(state.clone());
        }
        if ma2 > mb2 + tol {
            witnesses.push(state.clone());
        }
    }
    Ok(if !violations.is_empty() {
        Verdict::OrderingNotEstablished { violations }
    } else if !witnesses.is_empty() {
        Verdict::NoMinimalClassicalModel { witnesses }
    } else {
        Verdict::ClassicalConsistent
    })
}
