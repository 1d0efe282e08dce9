//! Repeatability criteria, checked against each other on a planted mix of instruments.

use super::{check, Check, Ctx, Sampler, Trial};
use crate::effects::{convex_combine_states, ProbabilityMeasure, State};
use crate::error::Result;
use crate::instruments::{
    compose_instruments, convex_combine_instruments, holevo_instrument, holevo_repeatable, identity_instrument,
    inst_op, is_repeatable, luders_instrument, measured_observable, obs_effect, seq_product_observables,
    state_constant_instrument, FiniteInstrument, FiniteObservable,
};
use crate::label::ProductLabel;
use crate::linalg::Matrix;

pub(super) const CHECKS: &[Check] = &[
    check(
        "T3.7",
        "set-level repeatability forms agree with each other and with the operator test",
        t3_7,
    ),
    check(
        "C3.8",
        "dual-operator repeatability forms agree with the operator test",
        c3_8,
    ),
    check("T4.1", "tr[I_x(ρ)] = tr[I_x(I_x(ρ))] decides repeatability", t4_1),
    check(
        "C4.2",
        "per-outcome repeatability forms agree with the operator test",
        c4_2,
    ),
    check(
        "L4.3",
        "a Holevo instrument is repeatable iff tr(α_x A_x) = 1 whenever A_x ≠ 0",
        l4_3,
    ),
    check(
        "CLOSE",
        "a Lüders instrument is repeatable iff its observable is sharp",
        close,
    ),
];

/// Instrument drawn from a fixed schedule over `index % 7`, with its known verdict.
///
/// Slots 0–4 are generic constructions (never repeatable), slot 5 is a planted
/// repeatable instrument and slot 6 a planted non-repeatable one.
fn sample_mix(s: &mut Sampler, c: &Ctx) -> Result<(FiniteInstrument, bool)> {
    let d = c.dim;
    let n = s.between(2, 4);
    let slot = c.index % 7;
    let flip = (c.index / 7).is_multiple_of(2);
    let inst = match slot {
        0 => {
            let k = s.between(1, 3);
            s.instrument("x", d, n, k)
        }
        1 => luders_instrument(&s.observable("x", d, n)),
        2 => {
            let a = s.observable("x", d, n);
            let alphas = s.states_for(&a);
            holevo_instrument(&alphas, &a)?
        }
        3 => {
            let parts = [
                s.instrument("x", d, n, 2),
                luders_instrument(&s.sharp_observable("x", d, n)),
            ];
            let w = s.range(0.2, 0.8);
            convex_combine_instruments(&[w, 1.0 - w], &parts, c.tol)?
        }
        4 => {
            let k = s.between(1, 3);
            let j = s.instrument("x", d, n, k);
            let alpha = s.state(d);
            state_constant_instrument(&j, &alpha)?
        }
        5 if flip => luders_instrument(&s.sharp_observable("x", d, n)),
        5 => {
            let (a, alphas) = s.repeatable_holevo("x", d, n);
            holevo_instrument(&alphas, &a)?
        }
        _ if flip => luders_instrument(&s.blurred_sharp_observable("x", d, n)),
        _ => {
            let names: Vec<String> = super::random::labels("x", n);
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            identity_instrument(&ProbabilityMeasure::uniform(&refs)?, d)
        }
    };
    Ok((inst, slot == 5))
}

/// Cached pieces shared by the set-level forms.
struct Rep {
    inst: FiniteInstrument,
    names: Vec<String>,
    hat: FiniteObservable,
    twice: FiniteInstrument,
    twice_hat: FiniteObservable,
}

impl Rep {
    fn new(inst: FiniteInstrument) -> Result<Self> {
        let names = inst.outcomes().map(str::to_string).collect();
        let hat = measured_observable(&inst);
        let twice = compose_instruments(&inst, &inst)?;
        let twice_hat = measured_observable(&twice);
        Ok(Self {
            inst,
            names,
            hat,
            twice,
            twice_hat,
        })
    }

    fn masks(&self) -> std::ops::Range<usize> {
        0..1 << self.names.len()
    }

    fn set(&self, mask: usize) -> Vec<&str> {
        self.names
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, x)| x.as_str())
            .collect()
    }

    fn product(&self, m1: usize, m2: usize) -> Vec<String> {
        let mut out = Vec::new();
        for x in self.set(m1) {
            for y in self.set(m2) {
                out.push(ProductLabel::new(x, y).to_string());
            }
        }
        out
    }
}

fn refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

/// Largest residual of a criterion and whether it stays within tolerance.
#[derive(Clone, Copy)]
struct Form(f64);

impl Form {
    fn holds(self, c: &Ctx) -> bool {
        self.0 <= c.eps()
    }
}

fn max_over(items: impl IntoIterator<Item = Result<f64>>) -> Result<Form> {
    let mut worst: f64 = 0.0;
    for r in items {
        worst = worst.max(r?);
    }
    Ok(Form(worst))
}

/// `tr[I(Δ)(I(Δ)ρ)] = tr[I(Δ)ρ]` over every `Δ`.
fn state_form_sets(r: &Rep, rho: &State) -> Result<Form> {
    max_over(r.masks().map(|m| {
        let op = inst_op(&r.inst, &r.set(m))?;
        let once = op.apply(rho.matrix())?;
        let twice = op.apply(&once)?;
        Ok((once.trace().re - twice.trace().re).abs())
    }))
}

fn hat_sets(r: &Rep) -> Result<Form> {
    max_over(r.masks().map(|m| {
        let lhs = obs_effect(&r.hat, &r.set(m))?;
        let rhs = obs_effect(&r.twice_hat, &refs(&r.product(m, m)))?;
        Ok(lhs.matrix().max_abs_diff(rhs.matrix()))
    }))
}

fn pairs(r: &Rep, disjoint_only: bool) -> impl Iterator<Item = (usize, usize)> + '_ {
    r.masks()
        .flat_map(move |a| r.masks().map(move |b| (a, b)))
        .filter(move |(a, b)| !disjoint_only || a & b == 0)
}

fn cross_sets(r: &Rep) -> Result<Form> {
    max_over(pairs(r, true).map(|(a, b)| Ok(obs_effect(&r.twice_hat, &refs(&r.product(a, b)))?.matrix().max_norm())))
}

fn cross_ops(r: &Rep) -> Result<Form> {
    max_over(pairs(r, true).map(|(a, b)| Ok(inst_op(&r.twice, &refs(&r.product(a, b)))?.choi().max_norm())))
}

fn intersection_form(r: &Rep, lhs: &FiniteObservable) -> Result<Form> {
    max_over(pairs(r, false).map(|(a, b)| {
        let l = obs_effect(lhs, &refs(&r.product(a, b)))?;
        let rhs = obs_effect(&r.hat, &r.set(a & b))?;
        Ok(l.matrix().max_abs_diff(rhs.matrix()))
    }))
}

fn dual_unit(r: &Rep, mask: usize) -> Result<Matrix> {
    inst_op(&r.inst, &r.set(mask))?.apply_dual(&Matrix::identity(r.inst.dim()))
}

fn judge(t: &mut Trial, c: &Ctx, inst: &FiniteInstrument, planted: bool, forms: &[Form]) {
    let rc = is_repeatable(inst, c.tol);
    t.holds(rc.agree());
    t.holds(rc.repeatable() == planted);
    for f in forms {
        t.holds(f.holds(c) == rc.repeatable());
    }
}

fn t3_7(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (inst, planted) = sample_mix(s, c)?;
    t.note("I", &inst);
    let r = Rep::new(inst)?;
    let rho = s.state(c.dim);
    let forms = [
        state_form_sets(&r, &State::maximally_mixed(c.dim))?,
        state_form_sets(&r, &rho)?,
        hat_sets(&r)?,
        cross_sets(&r)?,
        cross_ops(&r)?,
        intersection_form(&r, &r.twice_hat)?,
        intersection_form(&r, &seq_product_observables(&r.inst, &r.hat)?)?,
    ];
    judge(t, c, &r.inst, planted, &forms);
    Ok(())
}

fn c3_8(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (inst, planted) = sample_mix(s, c)?;
    t.note("I", &inst);
    let r = Rep::new(inst)?;
    let fixed = max_over(r.masks().map(|m| {
        let once = dual_unit(&r, m)?;
        let twice = inst_op(&r.inst, &r.set(m))?.apply_dual(&once)?;
        Ok(once.max_abs_diff(&twice))
    }))?;
    let nested = |a: usize, b: usize| -> Result<Matrix> { inst_op(&r.inst, &r.set(a))?.apply_dual(&dual_unit(&r, b)?) };
    let cross = max_over(pairs(&r, true).map(|(a, b)| Ok(nested(a, b)?.max_norm())))?;
    let meet = max_over(pairs(&r, false).map(|(a, b)| Ok(nested(a, b)?.max_abs_diff(&dual_unit(&r, a & b)?))))?;
    judge(t, c, &r.inst, planted, &[fixed, cross, meet]);
    Ok(())
}

fn t4_1(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (inst, planted) = sample_mix(s, c)?;
    t.note("I", &inst);
    let states = [State::maximally_mixed(c.dim), s.state(c.dim)];
    let mut forms = Vec::new();
    for rho in &states {
        forms.push(max_over(inst.iter().map(|(_, op)| {
            let once = op.apply(rho.matrix())?;
            Ok((once.trace().re - op.apply(&once)?.trace().re).abs())
        }))?);
    }
    judge(t, c, &inst, planted, &forms);
    Ok(())
}

fn c4_2(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (inst, planted) = sample_mix(s, c)?;
    t.note("I", &inst);
    let r = Rep::new(inst)?;
    let cell = |lhs: &FiniteObservable, x: &str, y: &str| lhs.effect(&ProductLabel::new(x, y).to_string()).cloned();
    let seq = seq_product_observables(&r.inst, &r.hat)?;
    let mut diag = Form(0.0);
    let mut off = Form(0.0);
    let mut meet = Form(0.0);
    let mut meet_seq = Form(0.0);
    for x in &r.names {
        for y in &r.names {
            let twice = cell(&r.twice_hat, x, y)?;
            let via_seq = cell(&seq, x, y)?;
            let expect = if x == y {
                r.hat.effect(x)?.matrix().clone()
            } else {
                Matrix::zeros(c.dim)
            };
            if x == y {
                diag.0 = diag.0.max(twice.matrix().max_abs_diff(&expect));
            } else {
                off.0 = off.0.max(twice.matrix().max_norm());
            }
            meet.0 = meet.0.max(twice.matrix().max_abs_diff(&expect));
            meet_seq.0 = meet_seq.0.max(via_seq.matrix().max_abs_diff(&expect));
        }
    }
    let rc = is_repeatable(&r.inst, c.tol);
    let from_check = [Form(rc.fixed_point_residual), Form(rc.cross_term_residual)];
    judge(
        t,
        c,
        &r.inst,
        planted,
        &[diag, off, meet, meet_seq, from_check[0], from_check[1]],
    );
    Ok(())
}

fn l4_3(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let d = c.dim;
    let n = s.between(2, 4);
    let (a, alphas, planted) = match c.index % 4 {
        0 | 2 => {
            let (a, alphas) = s.repeatable_holevo("x", d, n);
            (a, alphas, true)
        }
        1 => {
            let a = s.observable("x", d, n);
            let alphas = s.states_for(&a);
            (a, alphas, false)
        }
        _ => {
            let (a, alphas) = s.repeatable_holevo("x", d, n);
            let t_mix = s.range(0.05, 0.5);
            let mixed = State::maximally_mixed(d);
            let alphas = alphas
                .into_iter()
                .map(|(x, alpha)| {
                    let blurred = convex_combine_states(&[1.0 - t_mix, t_mix], &[alpha, mixed.clone()], c.tol)?;
                    Ok((x, blurred))
                })
                .collect::<Result<_>>()?;
            (a, alphas, false)
        }
    };
    t.note("A", &a);
    let by_states = holevo_repeatable(&alphas, &a, c.tol)?;
    let inst = holevo_instrument(&alphas, &a)?;
    let rc = is_repeatable(&inst, c.tol);
    t.holds(rc.agree());
    t.holds(by_states == rc.repeatable());
    t.holds(by_states == planted);
    Ok(())
}

fn close(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let n = s.between(2, 4);
    let a = if c.even() {
        s.sharp_observable("x", c.dim, n)
    } else {
        s.blurred_sharp_observable("x", c.dim, n)
    };
    t.note("A", &a);
    let sharp = a.is_sharp(c.tol);
    let rc = is_repeatable(&luders_instrument(&a), c.tol);
    t.holds(rc.agree());
    t.holds(rc.repeatable() == sharp);
    t.holds(sharp == c.even());
    Ok(())
}
