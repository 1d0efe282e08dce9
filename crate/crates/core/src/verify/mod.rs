//! Randomized, theorem-keyed verification suite.
//!
//! Every registered check runs `trials` independent trials. A trial draws fresh
//! random objects, evaluates an identity and records a residual: the entrywise
//! max-norm of the operator difference, the absolute difference of scalars, or
//! 0/1 for boolean equivalences. A check passes when its worst residual is at
//! most `eps`.

mod checks_inst;
mod checks_ops;
mod conjecture;
mod negatives;
pub mod random;
mod repeat;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::effects::{Effect, ProbabilityMeasure, State};
use crate::error::{Error, Result};
use crate::instruments::{FiniteInstrument, FiniteObservable};
use crate::io::{InstrumentDoc, ObservableDoc, OperationDoc, OperatorDoc};
use crate::linalg::{eig_unchecked, Matrix, Tolerance};
use crate::operations::Operation;

pub use conjecture::{explore_conjecture1, verify_commute_witness, ConjectureReport, FamilyCoverage};
pub use random::{rand_effect, rand_instrument, rand_observable, rand_operation, rand_state, Sampler};

/// Parameters of a suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialConfig {
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub eps: f64,
    /// Exact ids, family prefixes such as `T1.4`, or `all`.
    pub theorem_ids: Vec<String>,
}

impl TrialConfig {
    pub fn new(dim: usize, trials: u64, seed: u64) -> Self {
        Self {
            dim,
            trials,
            seed,
            eps: Tolerance::DEFAULT_EPS,
            theorem_ids: vec!["all".into()],
        }
    }

    pub fn with_ids(mut self, ids: &[&str]) -> Self {
        self.theorem_ids = ids.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    fn validate(&self) -> Result<Tolerance> {
        if self.dim < 2 {
            return Err(Error::InvalidInput(format!("dim must be at least 2, got {}", self.dim)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be positive".into()));
        }
        Tolerance::new(self.eps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremResult {
    pub id: String,
    pub description: String,
    pub trials: u64,
    pub max_residual: f64,
    pub pass: bool,
    pub worst_trial: u64,
    /// Seed of the worst trial (`seed ^ worst_trial`).
    pub trial_seed: u64,
    /// Inputs of the worst trial; present on failure.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub all_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: TrialConfig,
    pub summary: Summary,
    pub results: Vec<TheoremResult>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.summary.all_pass
    }

    pub fn result(&self, id: &str) -> Option<&TheoremResult> {
        self.results.iter().find(|r| r.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// Anything that can be written into a witness.
pub(crate) trait Witness {
    fn to_value(&self) -> Value;
}

impl Witness for Matrix {
    fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("matrix serializes")
    }
}

impl Witness for Effect {
    fn to_value(&self) -> Value {
        serde_json::to_value(OperatorDoc::from_effect(self)).expect("effect serializes")
    }
}

impl Witness for State {
    fn to_value(&self) -> Value {
        serde_json::to_value(OperatorDoc::from_state(self)).expect("state serializes")
    }
}

impl Witness for Operation {
    fn to_value(&self) -> Value {
        serde_json::to_value(OperationDoc::from_operation(self)).expect("operation serializes")
    }
}

impl Witness for FiniteObservable {
    fn to_value(&self) -> Value {
        serde_json::to_value(ObservableDoc::from_observable(self)).expect("observable serializes")
    }
}

impl Witness for FiniteInstrument {
    fn to_value(&self) -> Value {
        serde_json::to_value(InstrumentDoc::from_instrument(self)).expect("instrument serializes")
    }
}

impl Witness for ProbabilityMeasure {
    fn to_value(&self) -> Value {
        Value::Object(
            self.iter()
                .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
                .collect(),
        )
    }
}

impl Witness for f64 {
    fn to_value(&self) -> Value {
        serde_json::json!(self)
    }
}

impl Witness for &str {
    fn to_value(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl Witness for Vec<f64> {
    fn to_value(&self) -> Value {
        serde_json::json!(self)
    }
}

impl Witness for Vec<&str> {
    fn to_value(&self) -> Value {
        serde_json::json!(self)
    }
}

/// Residual accumulator for one trial; optionally records the inputs.
pub(crate) struct Trial {
    residual: f64,
    inputs: Option<Map<String, Value>>,
}

impl Trial {
    fn new(record: bool) -> Self {
        Self {
            residual: 0.0,
            inputs: record.then(Map::new),
        }
    }

    pub fn note<W: Witness + ?Sized>(&mut self, name: &str, value: &W) {
        if let Some(map) = &mut self.inputs {
            map.insert(name.to_string(), value.to_value());
        }
    }

    pub fn residual(&mut self, r: f64) {
        self.residual = if r.is_nan() {
            f64::INFINITY
        } else {
            self.residual.max(r)
        };
    }

    pub fn op_eq(&mut self, a: &Matrix, b: &Matrix) {
        self.residual(a.max_abs_diff(b));
    }

    pub fn scalar_eq(&mut self, a: f64, b: f64) {
        self.residual((a - b).abs());
    }

    pub fn complex_eq(&mut self, a: crate::linalg::C64, b: crate::linalg::C64) {
        self.residual((a - b).norm());
    }

    /// Boolean equivalences count 0 when they hold and 1 otherwise.
    pub fn holds(&mut self, ok: bool) {
        self.residual(if ok { 0.0 } else { 1.0 });
    }

    /// `a ≤ b`; the residual is how far `b − a` is from positive semidefinite.
    pub fn leq(&mut self, a: &Matrix, b: &Matrix) {
        let m = (b - a).hermitian_part();
        self.residual((-eig_unchecked(&m).min()).max(0.0));
    }

    pub fn map_eq(&mut self, j: &Operation, k: &Operation) -> Result<()> {
        self.residual(j.map_distance(k)?);
        Ok(())
    }

    pub fn obs_eq(&mut self, a: &FiniteObservable, b: &FiniteObservable) -> Result<()> {
        self.residual(a.max_abs_diff(b)?);
        Ok(())
    }

    pub fn inst_eq(&mut self, a: &FiniteInstrument, b: &FiniteInstrument) -> Result<()> {
        if a.len() != b.len() {
            return Err(Error::LabelMismatch(format!("{} vs {} outcomes", a.len(), b.len())));
        }
        for (x, op) in a.iter() {
            self.map_eq(op, b.operation(x)?)?;
        }
        Ok(())
    }
}

pub(crate) struct Ctx {
    pub dim: usize,
    pub tol: Tolerance,
    pub index: u64,
}

impl Ctx {
    pub fn eps(&self) -> f64 {
        self.tol.eps()
    }

    /// Alternates planted-positive (even) and planted-negative (odd) trials.
    pub fn even(&self) -> bool {
        self.index.is_multiple_of(2)
    }
}

type CheckFn = fn(&mut Trial, &mut Sampler, &Ctx) -> Result<()>;

/// One executable identity in the registry.
#[derive(Clone, Copy)]
pub struct Check {
    pub id: &'static str,
    pub description: &'static str,
    run: CheckFn,
}

impl std::fmt::Debug for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Check").field("id", &self.id).finish()
    }
}

pub(crate) const fn check(id: &'static str, description: &'static str, run: CheckFn) -> Check {
    Check { id, description, run }
}

/// All checks in report order.
pub fn registry() -> Vec<Check> {
    let mut all = Vec::new();
    all.extend_from_slice(checks_ops::CHECKS);
    all.extend_from_slice(checks_inst::CHECKS);
    all.extend_from_slice(repeat::CHECKS);
    all.extend_from_slice(negatives::CHECKS);
    all
}

pub fn theorem_ids() -> Vec<&'static str> {
    registry().iter().map(|c| c.id).collect()
}

fn matches_selector(id: &str, selector: &str) -> bool {
    if selector.eq_ignore_ascii_case("all") || id == selector {
        return true;
    }
    // `T1.4` selects `T1.4i` … `T1.4vi`; `T1.1` selects `T1.1c`.
    id.strip_prefix(selector)
        .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| matches!(c, 'i' | 'v' | 'x' | 'c')))
}

/// Resolves selectors to checks in registry order.
pub fn select(selectors: &[String]) -> Result<Vec<Check>> {
    let all = registry();
    for sel in selectors {
        if !all.iter().any(|c| matches_selector(c.id, sel)) {
            return Err(Error::UnknownTheoremId(sel.clone()));
        }
    }
    Ok(all
        .into_iter()
        .filter(|c| selectors.iter().any(|s| matches_selector(c.id, s)))
        .collect())
}

/// FNV-1a of the id; selects the generator stream for a check.
fn stream_of(id: &str) -> u64 {
    id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

fn run_trial(check: &Check, cfg: &TrialConfig, tol: Tolerance, index: u64, record: bool) -> (f64, Trial) {
    let mut trial = Trial::new(record);
    let mut sampler = Sampler::for_trial(cfg.seed, stream_of(check.id), index);
    let ctx = Ctx {
        dim: cfg.dim,
        tol,
        index,
    };
    match (check.run)(&mut trial, &mut sampler, &ctx) {
        Ok(()) => (trial.residual, trial),
        Err(e) => {
            trial.note("error", &e.to_string().as_str());
            (1.0f64.max(trial.residual), trial)
        }
    }
}

fn run_check(check: &Check, cfg: &TrialConfig, tol: Tolerance) -> TheoremResult {
    let residuals: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(check, cfg, tol, i, false).0)
        .collect();
    let (worst, max_residual) =
        residuals.iter().enumerate().fold(
            (0usize, 0.0f64),
            |(wi, wr), (i, &r)| if r > wr { (i, r) } else { (wi, wr) },
        );
    let pass = max_residual <= tol.eps();
    let witness = (!pass).then(|| {
        let (_, trial) = run_trial(check, cfg, tol, worst as u64, true);
        Value::Object(trial.inputs.unwrap_or_default())
    });
    TheoremResult {
        id: check.id.to_string(),
        description: check.description.to_string(),
        trials: cfg.trials,
        max_residual: if max_residual.is_finite() {
            max_residual
        } else {
            f64::MAX
        },
        pass,
        worst_trial: worst as u64,
        trial_seed: cfg.seed ^ worst as u64,
        witness,
    }
}

/// Runs every selected check. Identical configurations give identical reports.
pub fn run_suite(cfg: &TrialConfig) -> Result<VerificationReport> {
    let tol = cfg.validate()?;
    let checks = select(&cfg.theorem_ids)?;
    let results: Vec<TheoremResult> = checks.iter().map(|c| run_check(c, cfg, tol)).collect();
    let passed = results.iter().filter(|r| r.pass).count();
    Ok(VerificationReport {
        config: cfg.clone(),
        summary: Summary {
            checks: results.len(),
            passed,
            failed: results.len() - passed,
            all_pass: passed == results.len(),
        },
        results,
    })
}

/// Re-runs one trial of one check and returns its residual and recorded inputs.
pub fn replay(cfg: &TrialConfig, id: &str, trial: u64) -> Result<(f64, Value)> {
    let tol = cfg.validate()?;
    let check = registry()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownTheoremId(id.to_string()))?;
    let (r, t) = run_trial(&check, cfg, tol, trial, true);
    Ok((r, Value::Object(t.inputs.unwrap_or_default())))
}
