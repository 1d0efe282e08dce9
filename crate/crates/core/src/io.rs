//! JSON documents for every domain object.
//!
//! All of them embed the matrix literal `{"dim": d, "entries": [[[re, im], ...], ...]}`.

use indexmap::IndexMap;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::effects::{Effect, State};
use crate::error::{Error, Result};
use crate::instruments::{FiniteInstrument, FiniteObservable};
use crate::linalg::{Matrix, Tolerance};
use crate::operations::{kraus_from_choi, Operation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Effect,
    State,
}

/// `{"kind": "effect" | "state", "m": <matrix>}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDoc {
    pub kind: OperatorKind,
    pub m: Matrix,
}

/// `{"dim": d, "kraus": [<matrix>, ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationDoc {
    pub dim: usize,
    pub kraus: Vec<Matrix>,
}

/// `{"dim": d, "choi": <matrix of dimension d²>}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiDoc {
    pub dim: usize,
    pub choi: Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrausList {
    pub kraus: Vec<Matrix>,
}

/// `{"dim": d, "outcomes": [...], "effects": {"x": <matrix>, ...}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableDoc {
    pub dim: usize,
    pub outcomes: Vec<String>,
    pub effects: IndexMap<String, Matrix>,
}

/// `{"dim": d, "outcomes": [...], "operations": {"x": {"kraus": [...]}, ...}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstrumentDoc {
    pub dim: usize,
    pub outcomes: Vec<String>,
    pub operations: IndexMap<String, KrausList>,
}

/// Parses any of the documents above, mapping serde failures to [`Error::InvalidInput`].
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string(doc).expect("documents always serialize")
}

pub fn to_json_pretty<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents always serialize")
}

fn check_declared(declared: usize, m: &Matrix) -> Result<()> {
    if m.dim() != declared {
        return Err(Error::DimMismatch {
            expected: declared,
            found: m.dim(),
        });
    }
    Ok(())
}

/// Reorders `map` by `outcomes`, which must list exactly its keys.
fn ordered<T>(outcomes: Vec<String>, mut map: IndexMap<String, T>) -> Result<Vec<(String, T)>> {
    if outcomes.len() != map.len() {
        return Err(Error::LabelMismatch(format!(
            "{} outcomes listed but {} entries given",
            outcomes.len(),
            map.len()
        )));
    }
    outcomes
        .into_iter()
        .map(|x| {
            let v = map
                .shift_remove(&x)
                .ok_or_else(|| Error::LabelMismatch(format!("outcome `{x}` has no entry")))?;
            Ok((x, v))
        })
        .collect()
}

impl OperatorDoc {
    pub fn from_effect(e: &Effect) -> Self {
        Self {
            kind: OperatorKind::Effect,
            m: e.matrix().clone(),
        }
    }

    pub fn from_state(s: &State) -> Self {
        Self {
            kind: OperatorKind::State,
            m: s.matrix().clone(),
        }
    }

    pub fn to_effect(&self, tol: Tolerance) -> Result<Effect> {
        if self.kind != OperatorKind::Effect {
            return Err(Error::InvalidInput("expected kind \"effect\"".into()));
        }
        Effect::new(self.m.clone(), tol)
    }

    pub fn to_state(&self, tol: Tolerance) -> Result<State> {
        if self.kind != OperatorKind::State {
            return Err(Error::InvalidInput("expected kind \"state\"".into()));
        }
        State::new(self.m.clone(), tol)
    }
}

impl OperationDoc {
    pub fn from_operation(op: &Operation) -> Self {
        Self {
            dim: op.dim(),
            kraus: op.kraus().to_vec(),
        }
    }

    pub fn to_operation(&self, tol: Tolerance) -> Result<Operation> {
        for c in &self.kraus {
            check_declared(self.dim, c)?;
        }
        Operation::new(self.kraus.clone(), tol)
    }
}

impl ChoiDoc {
    pub fn from_operation(op: &Operation) -> Self {
        Self {
            dim: op.dim(),
            choi: op.choi(),
        }
    }

    pub fn to_operation(&self, tol: Tolerance) -> Result<Operation> {
        check_declared(self.dim * self.dim, &self.choi)?;
        kraus_from_choi(&self.choi, tol)
    }
}

impl ObservableDoc {
    pub fn from_observable(a: &FiniteObservable) -> Self {
        Self {
            dim: a.dim(),
            outcomes: a.outcomes().map(str::to_string).collect(),
            effects: a.iter().map(|(x, e)| (x.to_string(), e.matrix().clone())).collect(),
        }
    }

    pub fn to_observable(&self, tol: Tolerance) -> Result<FiniteObservable> {
        let items = ordered(self.outcomes.clone(), self.effects.clone())?;
        let effects = items
            .into_iter()
            .map(|(x, m)| {
                check_declared(self.dim, &m)?;
                Ok((x, Effect::new(m, tol)?))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteObservable::new(effects, tol)
    }
}

impl InstrumentDoc {
    pub fn from_instrument(inst: &FiniteInstrument) -> Self {
        Self {
            dim: inst.dim(),
            outcomes: inst.outcomes().map(str::to_string).collect(),
            operations: inst
                .iter()
                .map(|(x, op)| {
                    (
                        x.to_string(),
                        KrausList {
                            kraus: op.kraus().to_vec(),
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn to_instrument(&self, tol: Tolerance) -> Result<FiniteInstrument> {
        let items = ordered(self.outcomes.clone(), self.operations.clone())?;
        let ops = items
            .into_iter()
            .map(|(x, k)| {
                let doc = OperationDoc {
                    dim: self.dim,
                    kraus: k.kraus,
                };
                Ok((x, doc.to_operation(tol)?))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteInstrument::new(ops, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instruments::luders_instrument;
    use crate::operations::luders;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn effect_doc_round_trip() {
        let e = Effect::new(Matrix::real(&[&[0.6, 0.2], &[0.2, 0.3]]), tol()).unwrap();
        let text = to_json(&OperatorDoc::from_effect(&e));
        assert!(text.starts_with(r#"{"kind":"effect","m":{"dim":2"#));
        let back = from_json::<OperatorDoc>(&text).unwrap().to_effect(tol()).unwrap();
        assert_eq!(back, e);
        assert!(from_json::<OperatorDoc>(&text).unwrap().to_state(tol()).is_err());
    }

    #[test]
    fn operation_doc_round_trip() {
        let e = Effect::new(Matrix::real(&[&[0.6, 0.2], &[0.2, 0.3]]), tol()).unwrap();
        let op = luders(&e);
        let text = to_json(&OperationDoc::from_operation(&op));
        let back = from_json::<OperationDoc>(&text).unwrap().to_operation(tol()).unwrap();
        assert_eq!(back, op);

        let choi = to_json(&ChoiDoc::from_operation(&op));
        let back = from_json::<ChoiDoc>(&choi).unwrap().to_operation(tol()).unwrap();
        assert!(back.map_distance(&op).unwrap() < 1e-14);
    }

    #[test]
    fn operation_doc_rejects_bad_input() {
        let text = r#"{"dim":3,"kraus":[{"dim":2,"entries":[[[1,0],[0,0]],[[0,0],[1,0]]]}]}"#;
        let doc = from_json::<OperationDoc>(text).unwrap();
        assert!(matches!(doc.to_operation(tol()), Err(Error::DimMismatch { .. })));
        let text = r#"{"dim":1,"kraus":[{"dim":1,"entries":[[[2,0]]]}]}"#;
        let doc = from_json::<OperationDoc>(text).unwrap();
        assert!(matches!(
            doc.to_operation(tol()),
            Err(Error::NotTraceNonIncreasing { .. })
        ));
        assert!(from_json::<OperationDoc>(r#"{"dim":1,"kraus":[],"extra":0}"#).is_err());
    }

    #[test]
    fn observable_and_instrument_round_trip() {
        let effects = vec![
            ("b".to_string(), Effect::new(Matrix::diag(&[0.0, 1.0]), tol()).unwrap()),
            ("a".to_string(), Effect::new(Matrix::diag(&[1.0, 0.0]), tol()).unwrap()),
        ];
        let a = FiniteObservable::new(effects, tol()).unwrap();
        let text = to_json(&ObservableDoc::from_observable(&a));
        let back = from_json::<ObservableDoc>(&text).unwrap().to_observable(tol()).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.outcomes().collect::<Vec<_>>(), vec!["b", "a"]);

        let inst = luders_instrument(&a);
        let text = to_json(&InstrumentDoc::from_instrument(&inst));
        let back = from_json::<InstrumentDoc>(&text).unwrap().to_instrument(tol()).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn outcome_list_must_match_entries() {
        let text = r#"{"dim":1,"outcomes":["a","b"],"effects":{"a":{"dim":1,"entries":[[[1,0]]]}}}"#;
        let doc = from_json::<ObservableDoc>(text).unwrap();
        assert!(matches!(doc.to_observable(tol()), Err(Error::LabelMismatch(_))));
        let text = r#"{"dim":1,"outcomes":["c"],"effects":{"a":{"dim":1,"entries":[[[1,0]]]}}}"#;
        let doc = from_json::<ObservableDoc>(text).unwrap();
        assert!(matches!(doc.to_observable(tol()), Err(Error::LabelMismatch(_))));
    }
}
