//! Deliberately invalid inputs that constructors must reject with the right error.

use super::{check, Check, Ctx, Sampler, Trial};
use crate::effects::Effect;
use crate::error::{Error, Result};
use crate::instruments::{FiniteInstrument, FiniteObservable};
use crate::linalg::Matrix;
use crate::operations::{kraus_from_choi, Operation};

pub(super) const CHECKS: &[Check] = &[check(
    "NEG",
    "invalid Choi matrices, Kraus lists, observables and instruments are rejected",
    neg,
)];

fn neg(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let d = c.dim;
    let delta = s.range(0.05, 0.5);
    t.note("delta", &delta);
    let rejected = match c.index % 4 {
        0 => {
            let k = s.between(1, 3);
            let choi = s.operation(d, k).choi();
            let v = s.unit_vector(d * d);
            let weight = Matrix::outer(&v, &v).trace_product(&choi).re + delta;
            let bad = &choi - &Matrix::outer(&v, &v).scale(weight);
            t.note("choi", &bad);
            matches!(kraus_from_choi(&bad, c.tol), Err(Error::NotCompletelyPositive { .. }))
        }
        1 => {
            let k = s.between(1, 3);
            let j = s.channel(d, k);
            let kraus: Vec<Matrix> = j.kraus().iter().map(|m| m.scale((1.0 + delta).sqrt())).collect();
            t.note("J", &j);
            matches!(Operation::new(kraus, c.tol), Err(Error::NotTraceNonIncreasing { .. }))
        }
        2 => {
            let n = s.between(2, 4);
            let a = s.observable("x", d, n);
            t.note("A", &a);
            let victim = a
                .iter()
                .map(|(_, e)| e.matrix().trace().re)
                .enumerate()
                .fold((0, f64::MIN), |best, (i, tr)| if tr > best.1 { (i, tr) } else { best })
                .0;
            let effects: Vec<(String, Effect)> = a
                .iter()
                .enumerate()
                .map(|(i, (x, e))| {
                    let e = if i == victim {
                        e.scaled(1.0 - delta).expect("scale in range")
                    } else {
                        e.clone()
                    };
                    (x.to_string(), e)
                })
                .collect();
            matches!(FiniteObservable::new(effects, c.tol), Err(Error::NotNormalized { .. }))
        }
        _ => {
            let n = s.between(2, 4);
            let k = s.between(1, 3);
            let inst = s.instrument("x", d, n, k);
            t.note("I", &inst);
            let shrink = (1.0 - delta).sqrt();
            let ops: Vec<(String, Operation)> = inst
                .iter()
                .map(|(x, op)| {
                    let kraus = op.kraus().iter().map(|m| m.scale(shrink)).collect();
                    Ok((x.to_string(), Operation::new(kraus, c.tol)?))
                })
                .collect::<Result<_>>()?;
            matches!(FiniteInstrument::new(ops, c.tol), Err(Error::NotChannel { .. }))
        }
    };
    t.holds(rejected);
    Ok(())
}
