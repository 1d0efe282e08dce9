//! Qubit walkthroughs of the Lüders and Holevo constructions.

use std::fmt::Write;

use anyhow::Result;
use indexmap::IndexMap;
use seqprod::{
    distribution, holevo, holevo_instrument, holevo_repeatable, is_repeatable, luders, luders_instrument,
    measured_observable, prob, standard_seq_product, Effect, FiniteObservable, Matrix, State, Tolerance,
};

use crate::render::{matrix, measure, num};

fn sharp_qubit(tol: Tolerance) -> Result<FiniteObservable> {
    Ok(FiniteObservable::new(
        [
            ("x0".to_string(), Effect::new(Matrix::diag(&[1.0, 0.0]), tol)?),
            ("x1".to_string(), Effect::new(Matrix::diag(&[0.0, 1.0]), tol)?),
        ],
        tol,
    )?)
}

fn plus() -> Matrix {
    Matrix::real(&[&[0.5, 0.5], &[0.5, 0.5]])
}

fn verdict(out: &mut String, what: &str, inst: &seqprod::FiniteInstrument, tol: Tolerance) {
    let rc = is_repeatable(inst, tol);
    let _ = writeln!(out, "{what}: repeatable: {}", rc.repeatable());
}

pub fn luders_walkthrough(tol: Tolerance) -> Result<String> {
    let mut out = String::new();
    let a = Effect::new(Matrix::diag(&[1.0, 0.0]), tol)?;
    let l = luders(&a);
    writeln!(out, "Lüders operation L^a(ρ) = a^1/2 ρ a^1/2 with a = diag(1, 0)\n")?;
    writeln!(
        out,
        "L^a(I/2) =\n{}",
        matrix(&l.apply(&Matrix::identity(2).scale(0.5))?, 2)
    )?;
    writeln!(out, "L^a(|+⟩⟨+|) =\n{}", matrix(&l.apply(&plus())?, 2))?;
    let hat = l.measured_effect();
    writeln!(
        out,
        "measured effect of L^a equals a: {}",
        hat.matrix().approx_eq(a.matrix(), tol)
    )?;
    let b = Effect::new(plus(), tol)?;
    let ab = standard_seq_product(&a, &b)?;
    writeln!(out, "a ∘ b with b = |+⟩⟨+|:\n{}", matrix(ab.matrix(), 2))?;

    let sharp = sharp_qubit(tol)?;
    let inst = luders_instrument(&sharp);
    let rho = State::new(Matrix::diag(&[0.3, 0.7]), tol)?;
    writeln!(
        out,
        "Lüders instrument of A = {{diag(1, 0), diag(0, 1)}} at ρ = diag(0.3, 0.7):"
    )?;
    out.push_str(&measure(&distribution(&inst, &rho)?));
    verdict(&mut out, "sharp A", &inst, tol);

    let half = Effect::new(Matrix::identity(2).scale(0.5), tol)?;
    let blurred = FiniteObservable::new([("x0".to_string(), half.clone()), ("x1".to_string(), half)], tol)?;
    verdict(&mut out, "A = {I/2, I/2}", &luders_instrument(&blurred), tol);
    Ok(out)
}

pub fn holevo_walkthrough(tol: Tolerance) -> Result<String> {
    let mut out = String::new();
    let alpha = State::new(Matrix::diag(&[1.0, 0.0]), tol)?;
    let a = Effect::new(Matrix::diag(&[0.2, 0.7]), tol)?;
    let h = holevo(&alpha, &a)?;
    let rho = State::new(plus(), tol)?;
    writeln!(
        out,
        "Holevo operation H(α, a)(ρ) = tr(ρa) α with α = |0⟩⟨0|, a = diag(0.2, 0.7)\n"
    )?;
    writeln!(out, "tr(ρa) at ρ = |+⟩⟨+|: {}", num(prob(&rho, &a)?))?;
    writeln!(out, "H(α, a)(|+⟩⟨+|) =\n{}", matrix(&h.apply(rho.matrix())?, 2))?;
    let channel = holevo(&alpha, &Effect::identity(2))?;
    writeln!(out, "H(α, I) is a channel: {}", channel.is_channel(tol))?;
    writeln!(out, "H(α, I)(|+⟩⟨+|) =\n{}", matrix(&channel.apply(rho.matrix())?, 2))?;

    let sharp = sharp_qubit(tol)?;
    let eigen: IndexMap<String, State> = [
        ("x0".to_string(), State::new(Matrix::diag(&[1.0, 0.0]), tol)?),
        ("x1".to_string(), State::new(Matrix::diag(&[0.0, 1.0]), tol)?),
    ]
    .into_iter()
    .collect();
    let inst = holevo_instrument(&eigen, &sharp)?;
    writeln!(
        out,
        "Holevo instrument of A = {{diag(1, 0), diag(0, 1)}} with α_x the eigenprojections:"
    )?;
    writeln!(
        out,
        "measured observable equals A: {}",
        measured_observable(&inst).max_abs_diff(&sharp)? <= tol.eps()
    )?;
    writeln!(
        out,
        "holevo criterion: repeatable: {}",
        holevo_repeatable(&eigen, &sharp, tol)?
    )?;
    verdict(&mut out, "operator criterion", &inst, tol);

    let mixed: IndexMap<String, State> = ["x0", "x1"]
        .iter()
        .map(|x| (x.to_string(), State::maximally_mixed(2)))
        .collect();
    writeln!(out, "same A with α_x = I/2:")?;
    writeln!(
        out,
        "holevo criterion: repeatable: {}",
        holevo_repeatable(&mixed, &sharp, tol)?
    )?;
    verdict(&mut out, "operator criterion", &holevo_instrument(&mixed, &sharp)?, tol);
    Ok(out)
}
