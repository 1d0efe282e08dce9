//! Exploratory search for commutation witnesses around the open question
//! "if a commutes with b and with c, where b ⊥ c, does a commute with b + c?".
//!
//! Nothing here can refute the statement: a sample whose hypothesis holds but
//! whose conclusion has no witness in the searched families is only reported as
//! "no witness found in searched families".

use serde::{Deserialize, Serialize};

use super::{stream_of, Sampler, TrialConfig};
use crate::effects::{Effect, State};
use crate::error::{Error, Result};
use crate::linalg::Tolerance;
use crate::operations::{commute_relative, convex_combine_ops, holevo, luders, Operation};

pub const NO_WITNESS: &str = "no witness found in searched families";

const FAMILIES: [&str; 3] = ["luders", "holevo", "mixture"];
const HOLEVO_CANDIDATES: usize = 4;
const MIX_WEIGHTS: [f64; 3] = [0.25, 0.5, 0.75];

/// Whether `(j, k)` witnesses that `a` and `b` commute: `Ĵ = a`, `K̂ = b` and `a[J]b = b[K]a`.
pub fn verify_commute_witness(a: &Effect, b: &Effect, j: &Operation, k: &Operation, tol: Tolerance) -> Result<bool> {
    commute_relative(a, b, j, k, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyCoverage {
    pub family: String,
    /// Samples where witnesses for both `(a, b)` and `(a, c)` were found in this family.
    pub hypothesis_witnessed: u64,
    /// Of those, samples where some searched family also witnesses `(a, b + c)`.
    pub conclusion_witnessed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub dim: usize,
    pub samples: u64,
    pub seed: u64,
    pub families: Vec<FamilyCoverage>,
    /// Samples with a witnessed hypothesis but no witnessed conclusion.
    pub unresolved: u64,
    pub note: String,
}

/// Candidate operations measuring `a` in one family.
fn candidates(family: &str, a: &Effect, states: &[State], tol: Tolerance) -> Result<Vec<Operation>> {
    let mut out = Vec::new();
    match family {
        "luders" => out.push(luders(a)),
        "holevo" => {
            for alpha in states {
                out.push(holevo(alpha, a)?);
            }
        }
        _ => {
            let l = luders(a);
            for alpha in states {
                let h = holevo(alpha, a)?;
                for w in MIX_WEIGHTS {
                    out.push(convex_combine_ops(&[w, 1.0 - w], &[l.clone(), h.clone()], tol)?);
                }
            }
        }
    }
    Ok(out)
}

fn witnessed(family: &str, a: &Effect, b: &Effect, states: &[State], tol: Tolerance) -> Result<bool> {
    let js = candidates(family, a, states, tol)?;
    let ks = candidates(family, b, states, tol)?;
    for j in &js {
        for k in &ks {
            match commute_relative(a, b, j, k, tol) {
                Ok(true) => return Ok(true),
                Ok(false) | Err(Error::WitnessMismatch(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(false)
}

/// Triple `(a, b, c)` with `b + c ≤ I`: generic, jointly diagonal, or proportional.
fn sample_triple(s: &mut Sampler, d: usize, mode: u64) -> (Effect, Effect, Effect) {
    match mode {
        0 => {
            let a = s.effect(d);
            let b = s.effect(d).scaled(0.5).expect("in range");
            let c = s.effect(d).scaled(0.5).expect("in range");
            (a, b, c)
        }
        1 => {
            let u = s.unitary(d);
            let av: Vec<f64> = (0..d).map(|_| s.uniform()).collect();
            let bv: Vec<f64> = (0..d).map(|_| s.uniform()).collect();
            let cv: Vec<f64> = bv.iter().map(|b| (1.0 - b) * s.uniform()).collect();
            (s.diagonal_in(&u, &av), s.diagonal_in(&u, &bv), s.diagonal_in(&u, &cv))
        }
        _ => {
            let a = s.effect(d);
            let lam = s.uniform();
            let mu = (1.0 - lam) * s.uniform();
            let (b, c) = (a.scaled(lam).expect("in range"), a.scaled(mu).expect("in range"));
            (a, b, c)
        }
    }
}

/// Samples `trials` triples at `dim` and searches the Lüders, Holevo and mixture families.
pub fn explore_conjecture1(cfg: &TrialConfig) -> Result<ConjectureReport> {
    let tol = cfg.validate()?;
    let d = cfg.dim;
    let stream = stream_of("conjecture1");
    let mut coverage: Vec<FamilyCoverage> = FAMILIES
        .iter()
        .map(|f| FamilyCoverage {
            family: f.to_string(),
            hypothesis_witnessed: 0,
            conclusion_witnessed: 0,
        })
        .collect();
    let mut unresolved = 0;
    for i in 0..cfg.trials {
        let mut s = Sampler::for_trial(cfg.seed, stream, i);
        let (a, b, c) = sample_triple(&mut s, d, i % 3);
        let mut states: Vec<State> = (0..HOLEVO_CANDIDATES).map(|_| s.state(d)).collect();
        states.push(State::maximally_mixed(d));
        let sum = Effect::from_matrix_unchecked((b.matrix() + c.matrix()).hermitian_part());
        let mut conclusion = None;
        let mut any_hypothesis = false;
        for cov in coverage.iter_mut() {
            let f = cov.family.as_str();
            if !(witnessed(f, &a, &b, &states, tol)? && witnessed(f, &a, &c, &states, tol)?) {
                continue;
            }
            any_hypothesis = true;
            cov.hypothesis_witnessed += 1;
            let found = match conclusion {
                Some(v) => v,
                None => {
                    let mut v = false;
                    for g in FAMILIES {
                        if witnessed(g, &a, &sum, &states, tol)? {
                            v = true;
                            break;
                        }
                    }
                    conclusion = Some(v);
                    v
                }
            };
            if found {
                cov.conclusion_witnessed += 1;
            }
        }
        if any_hypothesis && conclusion == Some(false) {
            unresolved += 1;
        }
    }
    Ok(ConjectureReport {
        dim: d,
        samples: cfg.trials,
        seed: cfg.seed,
        families: coverage,
        unresolved,
        note: if unresolved == 0 {
            "every witnessed hypothesis had a witnessed conclusion".to_string()
        } else {
            format!("{unresolved} sample(s): {NO_WITNESS}")
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    #[test]
    fn commuting_samples_are_witnessed() {
        let cfg = TrialConfig::new(2, 12, 5);
        let report = explore_conjecture1(&cfg).unwrap();
        assert_eq!(report.samples, 12);
        let luders = &report.families[0];
        assert!(luders.hypothesis_witnessed >= 4);
        assert_eq!(luders.hypothesis_witnessed, luders.conclusion_witnessed);
        assert_eq!(report, explore_conjecture1(&cfg).unwrap());
    }

    #[test]
    fn witness_check_wraps_relative_commutation() {
        let a = Effect::new(Matrix::diag(&[0.3, 0.9]), Tolerance::default()).unwrap();
        let b = Effect::new(Matrix::diag(&[0.5, 0.1]), Tolerance::default()).unwrap();
        assert!(verify_commute_witness(&a, &b, &luders(&a), &luders(&b), Tolerance::default()).unwrap());
    }
}
