//! Reading the JSON documents named on the command line.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde_json::Value;

use seqprod::io::{from_json, ChoiDoc, InstrumentDoc, ObservableDoc, OperationDoc, OperatorDoc};
use seqprod::{Effect, FiniteInstrument, FiniteObservable, Matrix, Operation, Tolerance};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn parse<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T> {
    from_json(text).with_context(|| format!("malformed JSON in {}", path.display()))
}

fn has_key(path: &Path, text: &str, key: &str) -> Result<bool> {
    let v: Value = parse(path, text)?;
    Ok(v.get(key).is_some())
}

/// A Kraus document, or a Choi document when the file has a `choi` field.
pub fn operation(path: &Path, tol: Tolerance) -> Result<Operation> {
    let text = read(path)?;
    let op = if has_key(path, &text, "choi")? {
        parse::<ChoiDoc>(path, &text)?.to_operation(tol)
    } else {
        parse::<OperationDoc>(path, &text)?.to_operation(tol)
    };
    op.with_context(|| format!("invalid operation in {}", path.display()))
}

/// An operator document or a bare matrix literal.
pub fn matrix(path: &Path) -> Result<Matrix> {
    let text = read(path)?;
    if has_key(path, &text, "kind")? {
        Ok(parse::<OperatorDoc>(path, &text)?.m)
    } else {
        parse(path, &text)
    }
}

/// An effect document, or a bare matrix literal validated as an effect.
pub fn effect(path: &Path, tol: Tolerance) -> Result<Effect> {
    let text = read(path)?;
    let e = if has_key(path, &text, "kind")? {
        parse::<OperatorDoc>(path, &text)?.to_effect(tol)
    } else {
        Effect::new(parse(path, &text)?, tol)
    };
    e.with_context(|| format!("invalid effect in {}", path.display()))
}

pub fn observable(path: &Path, tol: Tolerance) -> Result<FiniteObservable> {
    let text = read(path)?;
    parse::<ObservableDoc>(path, &text)?
        .to_observable(tol)
        .with_context(|| format!("invalid observable in {}", path.display()))
}

pub fn instrument(path: &Path, tol: Tolerance) -> Result<FiniteInstrument> {
    let text = read(path)?;
    parse::<InstrumentDoc>(path, &text)?
        .to_instrument(tol)
        .with_context(|| format!("invalid instrument in {}", path.display()))
}
