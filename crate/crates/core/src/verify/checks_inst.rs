//! Checks for finite instruments and observables.

use indexmap::IndexMap;

use super::{check, Check, Ctx, Sampler, Trial};
use crate::effects::{normalize, Effect, State};
use crate::error::Result;
use crate::instruments::{
    compose_instruments, conditioned_instrument, conditioned_observable, convex_combine_instruments, distribution,
    holevo_instrument, identity_instrument, identity_observable, inst_op, luders_instrument, measured_observable,
    obs_distribution, obs_effect, seq_product_observables, state_constant_instrument, FiniteInstrument,
    FiniteObservable,
};
use crate::label::ProductLabel;
use crate::linalg::Matrix;
use crate::operations::{holevo, luders, Operation};

pub(super) const CHECKS: &[Check] = &[
    check("E3.1", "tr[ρ I*(Δ)(a)] = tr[I(Δ)(ρ) a]", e3_1),
    check("E3.2", "the distribution of I is that of Î and sums to 1", e3_2),
    check("E3.3", "Î(Δ) = I*(Δ)(I) and Î(Ω) = I", e3_3),
    check("E3.5", "joint distribution of I∘J is that of Î[I]Ĵ", e3_5),
    check("E3.6", "distribution of (B|I|A) is the second marginal of A[I]B", e3_6),
    check("T3.1i", "(Σλᵢ Iᵢ)^ = Σλᵢ Îᵢ and (Σλᵢ Iᵢ)* = Σλᵢ Iᵢ*", t3_1i),
    check("T3.1ii", "(Σλᵢ Iᵢ)∘(Σμⱼ Jⱼ) = Σλᵢμⱼ Iᵢ∘Jⱼ", t3_1ii),
    check(
        "T3.1iii",
        "(I∘J)*(Δ×Γ)(a) = I*(Δ)(J*(Γ)(a)) and (I∘J)^ = I*(Ĵ)",
        t3_1iii,
    ),
    check("L3.2i", "A[I]B = (I∘J)^ for a Lüders realization J of B", l3_2i),
    check(
        "L3.2ii",
        "A[I]B = (I∘J)^ and (B|I|A) = (J|I)^ for a Holevo realization J of B",
        l3_2ii,
    ),
    check("L3.3", "A[I]B(Δ×Ω) = A(Δ) and A[I]B(Ω×Γ) = (B|I|A)(Γ)", l3_3),
    check("T3.4i", "I_μ*(Δ)(a) = μ(Δ) a and Î_μ = A_μ", t3_4i),
    check("T3.4ii", "A[I_μ]B(Δ×Γ) = μ(Δ) B(Γ)", t3_4ii),
    check("T3.4iii", "(B|I_μ|A) = B", t3_4iii),
    check("T3.4iv", "A_μ[I_μ]A_ν = A_{μ×ν}", t3_4iv),
    check("T3.4v", "(J|I_μ) = J and (I_μ|J)(Δ) = μ(Δ) J̄", t3_4v),
    check("T3.5i", "H*(Δ)(b) = tr(αb) A(Δ) and Ĥ = A", t3_5i),
    check("T3.5ii", "A[H]B(Δ×Γ) = tr[αB(Γ)] A(Δ)", t3_5ii),
    check("T3.5iii", "(B|H|A)(Γ) = tr[αB(Γ)] I", t3_5iii),
    check(
        "T3.6i",
        "Ĵ_α(Δ) = tr[J(Δ)(α)] I and J_α*(Δ)(a) = tr[J(Δ)(α) a] I",
        t3_6i,
    ),
    check("T3.6ii", "(I|J_α) = I_{J̄(α)} and (J_α|I) = J_α", t3_6ii),
    check("T3.6iii", "A[J_α]B(Δ×Γ) = tr[J(Δ)(α) B(Γ)] I", t3_6iii),
    check("T3.6iv", "(B|J_α|A)(Γ) = tr[J̄(α) B(Γ)] I", t3_6iv),
    check("T3.6v", "(J|H_(α,A)) = J_α", t3_6v),
    check("T4.4i", "(H*)_x(a) = tr(α_x a) A_x and Ĥ = A", t4_4i),
    check("T4.4ii", "I∘H is Holevo with states α_y and effects I_x*(A_y)", t4_4ii),
    check(
        "T4.4iii",
        "H∘I is Holevo with states I_y(α_x)~ and effects tr[I_y(α_x)] A_x",
        t4_4iii,
    ),
    check(
        "T4.4iv",
        "H_(β,B)∘H_(α,A) is Holevo with effects tr(β_x A_y) B_x",
        t4_4iv,
    ),
    check("T4.4v", "(B|H|A)_y = Σ_x tr(α_x B_y) A_x", t4_4v),
    check("T4.5i", "(L^A)^ = A", t4_5i),
    check("T4.5ii", "(L^A∘J)^_(x,y) = A_x^{1/2} Ĵ_y A_x^{1/2}", t4_5ii),
    check("T4.5iii", "(J∘L^A)^_(y,x) = J_y*(A_x)", t4_5iii),
    check("T4.5iv", "(J|L^A)^_y = Σ_x A_x^{1/2} Ĵ_y A_x^{1/2}", t4_5iv),
    check("T4.5v", "(L^A|J)^_x = J̄*(A_x)", t4_5v),
    check("T4.5vi", "(A[L^A]B)_(x,y) = A_x^{1/2} B_y A_x^{1/2}", t4_5vi),
    check("T4.5vii", "(B|L^A|A)_y = Σ_x A_x^{1/2} B_y A_x^{1/2}", t4_5vii),
    check("C4.6i", "(L^A)^(Δ) = A(Δ)", c4_6i),
    check("C4.6ii", "(L^A∘J)^(Δ×Γ) = Σ_{x∈Δ} A_x^{1/2} Ĵ(Γ) A_x^{1/2}", c4_6ii),
    check("C4.6iii", "(J∘L^A)^(Γ×Δ) = J*(Γ)(A(Δ))", c4_6iii),
    check("C4.6iv", "(J|L^A)^(Γ) = Σ_x A_x^{1/2} Ĵ(Γ) A_x^{1/2}", c4_6iv),
    check("C4.6v", "(L^A|J)^(Δ) = J̄*(A(Δ))", c4_6v),
    check("C4.6vi", "A[L^A]B(Δ×Γ) = Σ_{x∈Δ} A_x^{1/2} B(Γ) A_x^{1/2}", c4_6vi),
    check("C4.6vii", "(B|L^A|A)(Γ) = Σ_x A_x^{1/2} B(Γ) A_x^{1/2}", c4_6vii),
];

fn inst(s: &mut Sampler, prefix: &str, d: usize) -> FiniteInstrument {
    let n = s.between(2, 4);
    let k = s.between(1, 3);
    s.instrument(prefix, d, n, k)
}

fn obs(s: &mut Sampler, prefix: &str, d: usize) -> FiniteObservable {
    let n = s.between(2, 4);
    s.observable(prefix, d, n)
}

fn outcomes_of(i: &FiniteInstrument) -> Vec<String> {
    i.outcomes().map(str::to_string).collect()
}

fn obs_outcomes(a: &FiniteObservable) -> Vec<String> {
    a.outcomes().map(str::to_string).collect()
}

fn product_set(delta: &[&str], gamma: &[&str]) -> Vec<String> {
    let mut out = Vec::with_capacity(delta.len() * gamma.len());
    for x in delta {
        for y in gamma {
            out.push(ProductLabel::new(*x, *y).to_string());
        }
    }
    out
}

fn refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn eff(m: Matrix) -> Effect {
    Effect::from_matrix_unchecked(m.hermitian_part())
}

fn sandwich(a: &Effect, b: &Matrix) -> Result<Matrix> {
    luders(a).apply(b)
}

fn single_holevo(alpha: &State, a: &FiniteObservable) -> Result<FiniteInstrument> {
    let alphas: IndexMap<String, State> = a.outcomes().map(|x| (x.to_string(), alpha.clone())).collect();
    holevo_instrument(&alphas, a)
}

fn holevo_random(
    s: &mut Sampler,
    prefix: &str,
    d: usize,
) -> Result<(FiniteInstrument, FiniteObservable, IndexMap<String, State>)> {
    let a = obs(s, prefix, d);
    let alphas = s.states_for(&a);
    Ok((holevo_instrument(&alphas, &a)?, a, alphas))
}

fn e3_1(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let i = inst(s, "x", c.dim);
    let names = outcomes_of(&i);
    let delta = s.subset(&names);
    let rho = s.state(c.dim);
    let a = s.effect(c.dim);
    t.note("I", &i);
    t.note("delta", &delta);
    let op = inst_op(&i, &delta)?;
    let lhs = rho.matrix().trace_product(&op.apply_dual(a.matrix())?);
    let rhs = op.apply(rho.matrix())?.trace_product(a.matrix());
    t.complex_eq(lhs, rhs);
    Ok(())
}

fn measure_diff(t: &mut Trial, p: &crate::effects::ProbabilityMeasure, q: &crate::effects::ProbabilityMeasure) {
    t.residual(p.max_abs_diff(q).unwrap_or(1.0));
}

fn e3_2(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let i = inst(s, "x", c.dim);
    let rho = s.state(c.dim);
    t.note("I", &i);
    t.note("rho", &rho);
    let p = distribution(&i, &rho)?;
    let q = obs_distribution(&measured_observable(&i), &rho)?;
    measure_diff(t, &p, &q);
    t.scalar_eq(p.total(), 1.0);
    Ok(())
}

fn e3_3(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let i = inst(s, "x", c.dim);
    let names = outcomes_of(&i);
    let delta = s.subset(&names);
    t.note("I", &i);
    t.note("delta", &delta);
    let hat = measured_observable(&i);
    let id = Matrix::identity(c.dim);
    t.op_eq(
        obs_effect(&hat, &delta)?.matrix(),
        &inst_op(&i, &delta)?.apply_dual(&id)?,
    );
    t.op_eq(obs_effect(&hat, &refs(&names))?.matrix(), &id);
    Ok(())
}

fn e3_5(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let i = inst(s, "x", c.dim);
    let j = inst(s, "y", c.dim);
    let rho = s.state(c.dim);
    t.note("I", &i);
    t.note("J", &j);
    t.note("rho", &rho);
    let joint = distribution(&compose_instruments(&i, &j)?, &rho)?;
    let via_obs = obs_distribution(&seq_product_observables(&i, &measured_observable(&j))?, &rho)?;
    measure_diff(t, &joint, &via_obs);
    for (x, ix) in i.iter() {
        let after = ix.apply(rho.matrix())?;
        for (y, jy) in j.iter() {
            let label = ProductLabel::new(x, y).to_string();
            let p = jy.apply(&after)?.trace().re;
            t.scalar_eq(joint.weight(&label).unwrap_or(f64::NAN), p);
        }
    }
    t.scalar_eq(joint.total(), 1.0);
    Ok(())
}

fn e3_6(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let i = inst(s, "x", c.dim);
    let b = obs(s, "y", c.dim);
    let rho = s.state(c.dim);
    t.note("I", &i);
    t.note("B", &b);
    t.note("rho", &rho);
    let cond = obs_distribution(&conditioned_observable(&b, &i)?, &rho)?;
    let joint = obs_distribution(&seq_product_observables(&i, &b)?, &rho)?;
    let xs = outcomes_of(&i);
    for y in b.outcomes() {
        let gamma = product_set(&refs(&xs), &[y]);
        t.scalar_eq(cond.weight(y).unwrap_or(f64::NAN), joint.measure(&refs(&gamma))?);
        let direct = i.total().apply(rho.matrix())?.trace_product(b.effect(y)?.matrix()).re;
        t.scalar_eq(cond.weight(y).unwrap_or(f64::NAN), direct);
    }
    Ok(())
}

fn family(s: &mut Sampler, d: usize, count: usize) -> Vec<FiniteInstrument> {
    let n = s.between(2, 4);
    (0..count)
        .map(|_| {
            let k = s.between(1, 3);
            s.instrument("x", d, n, k)
        })
        .collect()
}

fn t3_1i(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let m = s.between(2, 3);
    let insts = family(s, c.dim, m);
    let w = s.weights(m);
    let a = s.effect(c.dim);
    t.note("weights", &w);
    let mix = convex_combine_instruments(&w, &insts, c.tol)?;
    t.holds(mix.total().is_channel(c.tol));
    let hat = measured_observable(&mix);
    for (x, e) in hat.iter() {
        let mut expect = Matrix::zeros(c.dim);
        let mut dual = Matrix::zeros(c.dim);
        for (wi, i) in w.iter().zip(&insts) {
            let op = i.operation(x)?;
            expect += &op.measured_effect().matrix().scale(*wi);
            dual += &op.apply_dual(a.matrix())?.scale(*wi);
        }
        t.op_eq(e.matrix(), &expect);
        t.op_eq(&mix.operation(x)?.apply_dual(a.matrix())?, &dual);
    }
    Ok(())
}

fn t3_1ii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (m, r) = (s.between(1, 2), s.between(1, 2));
    let is = family(s, c.dim, m);
    let n = s.between(2, 3);
    let js: Vec<FiniteInstrument> = (0..r)
        .map(|_| {
            let k = s.between(1, 2);
            s.instrument("y", c.dim, n, k)
        })
        .collect();
    let lam = s.weights(m);
    let mu = s.weights(r);
    t.note("lambda", &lam);
    t.note("mu", &mu);
    let lhs = compose_instruments(
        &convex_combine_instruments(&lam, &is, c.tol)?,
        &convex_combine_instruments(&mu, &js, c.tol)?,
    )?;
    let mut weights = Vec::new();
    let mut parts = Vec::new();
    for (l, i) in lam.iter().zip(&is) {
        for (u, j) in mu.iter().zip(&js) {
            weights.push(l * u);
            parts.push(compose_instruments(i, j)?);
        }
    }
    let rhs = convex_combine_instruments(&weights, &parts, c.tol)?;
    t.inst_eq(&lhs, &rhs)
}

fn t3_1iii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let i = inst(s, "x", c.dim);
    let j = inst(s, "y", c.dim);
    let (xs, ys) = (outcomes_of(&i), outcomes_of(&j));
    let delta = s.subset(&xs);
    let gamma = s.subset(&ys);
    let a = s.effect(c.dim);
    t.note("I", &i);
    t.note("J", &j);
    t.note("delta", &delta);
    t.note("gamma", &gamma);
    let ij = compose_instruments(&i, &j)?;
    let lhs = inst_op(&ij, &refs(&product_set(&delta, &gamma)))?.apply_dual(a.matrix())?;
    let rhs = inst_op(&i, &delta)?.apply_dual(&inst_op(&j, &gamma)?.apply_dual(a.matrix())?)?;
    t.op_eq(&lhs, &rhs);
    let hat = measured_observable(&ij);
    for (x, ix) in i.iter() {
        for (y, jy) in j.iter() {
            let e = hat.effect(&ProductLabel::new(x, y).to_string())?;
            t.op_eq(e.matrix(), &ix.apply_dual(jy.measured_effect().matrix())?);
        }
    }
    Ok(())
}

fn l3_2i(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let i = inst(s, "x", c.dim);
    let b = obs(s, "y", c.dim);
    t.note("I", &i);
    t.note("B", &b);
    let j = luders_instrument(&b);
    t.obs_eq(&measured_observable(&j), &b)?;
    t.obs_eq(
        &seq_product_observables(&i, &b)?,
        &measured_observable(&compose_instruments(&i, &j)?),
    )?;
    t.obs_eq(
        &conditioned_observable(&b, &i)?,
        &measured_observable(&conditioned_instrument(&j, &i)?),
    )
}

fn l3_2ii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let i = inst(s, "x", c.dim);
    let b = obs(s, "y", c.dim);
    let betas = s.states_for(&b);
    t.note("I", &i);
    t.note("B", &b);
    let j = holevo_instrument(&betas, &b)?;
    t.obs_eq(&measured_observable(&j), &b)?;
    t.obs_eq(
        &seq_product_observables(&i, &b)?,
        &measured_observable(&compose_instruments(&i, &j)?),
    )?;
    t.obs_eq(
        &conditioned_observable(&b, &i)?,
        &measured_observable(&conditioned_instrument(&j, &i)?),
    )
}

fn l3_3(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let i = inst(s, "x", c.dim);
    let b = obs(s, "y", c.dim);
    let (xs, ys) = (outcomes_of(&i), obs_outcomes(&b));
    let delta = s.subset(&xs);
    let gamma = s.subset(&ys);
    t.note("I", &i);
    t.note("B", &b);
    t.note("delta", &delta);
    t.note("gamma", &gamma);
    let ab = seq_product_observables(&i, &b)?;
    let first = obs_effect(&ab, &refs(&product_set(&delta, &refs(&ys))))?;
    t.op_eq(first.matrix(), obs_effect(&measured_observable(&i), &delta)?.matrix());
    let second = obs_effect(&ab, &refs(&product_set(&refs(&xs), &gamma)))?;
    t.op_eq(
        second.matrix(),
        obs_effect(&conditioned_observable(&b, &i)?, &gamma)?.matrix(),
    );
    Ok(())
}

fn t3_4i(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let n = s.between(2, 4);
    let mu = s.measure("x", n);
    let names: Vec<String> = mu.outcomes().map(str::to_string).collect();
    let delta = s.subset(&names);
    let a = s.effect(c.dim);
    t.note("mu", &mu);
    t.note("delta", &delta);
    let i = identity_instrument(&mu, c.dim);
    let m = mu.measure(&delta)?;
    t.op_eq(&inst_op(&i, &delta)?.apply_dual(a.matrix())?, &a.matrix().scale(m));
    t.obs_eq(&measured_observable(&i), &identity_observable(&mu, c.dim))
}

fn t3_4ii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let n = s.between(2, 4);
    let mu = s.measure("x", n);
    let b = obs(s, "y", c.dim);
    let xs: Vec<String> = mu.outcomes().map(str::to_string).collect();
    let ys = obs_outcomes(&b);
    let delta = s.subset(&xs);
    let gamma = s.subset(&ys);
    t.note("mu", &mu);
    t.note("B", &b);
    let ab = seq_product_observables(&identity_instrument(&mu, c.dim), &b)?;
    let lhs = obs_effect(&ab, &refs(&product_set(&delta, &gamma)))?;
    let rhs = obs_effect(&b, &gamma)?.into_matrix().scale(mu.measure(&delta)?);
    t.op_eq(lhs.matrix(), &rhs);
    Ok(())
}

fn t3_4iii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let n = s.between(2, 4);
    let mu = s.measure("x", n);
    let b = obs(s, "y", c.dim);
    t.note("mu", &mu);
    t.note("B", &b);
    t.obs_eq(&conditioned_observable(&b, &identity_instrument(&mu, c.dim))?, &b)
}

fn t3_4iv(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (n, m) = (s.between(2, 4), s.between(2, 4));
    let mu = s.measure("x", n);
    let nu = s.measure("y", m);
    t.note("mu", &mu);
    t.note("nu", &nu);
    let lhs = seq_product_observables(&identity_instrument(&mu, c.dim), &identity_observable(&nu, c.dim))?;
    t.obs_eq(&lhs, &identity_observable(&mu.product(&nu), c.dim))
}

fn t3_4v(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let n = s.between(2, 4);
    let mu = s.measure("x", n);
    let j = inst(s, "y", c.dim);
    t.note("mu", &mu);
    t.note("J", &j);
    let imu = identity_instrument(&mu, c.dim);
    t.inst_eq(&conditioned_instrument(&j, &imu)?, &j)?;
    let cond = conditioned_instrument(&imu, &j)?;
    let total = j.total();
    let xs: Vec<String> = mu.outcomes().map(str::to_string).collect();
    let delta = s.subset(&xs);
    t.note("delta", &delta);
    let expect = total.scaled(mu.measure(&delta)?)?;
    t.map_eq(&inst_op(&cond, &delta)?, &expect)?;
    let hat = measured_observable(&cond);
    t.op_eq(
        obs_effect(&hat, &delta)?.matrix(),
        &Matrix::identity(c.dim).scale(mu.measure(&delta)?),
    );
    t.obs_eq(
        &measured_observable(&conditioned_instrument(&j, &imu)?),
        &measured_observable(&j),
    )
}

fn t3_5i(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = obs(s, "x", c.dim);
    let alpha = s.state(c.dim);
    let b = s.effect(c.dim);
    let names = obs_outcomes(&a);
    let delta = s.subset(&names);
    t.note("A", &a);
    t.note("alpha", &alpha);
    t.note("b", &b);
    let h = single_holevo(&alpha, &a)?;
    let tr = alpha.matrix().trace_product(b.matrix()).re;
    let lhs = inst_op(&h, &delta)?.apply_dual(b.matrix())?;
    t.op_eq(&lhs, &obs_effect(&a, &delta)?.into_matrix().scale(tr));
    t.obs_eq(&measured_observable(&h), &a)
}

fn t3_5ii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = obs(s, "x", c.dim);
    let b = obs(s, "y", c.dim);
    let alpha = s.state(c.dim);
    let (xs, ys) = (obs_outcomes(&a), obs_outcomes(&b));
    let delta = s.subset(&xs);
    let gamma = s.subset(&ys);
    t.note("A", &a);
    t.note("B", &b);
    t.note("alpha", &alpha);
    let ab = seq_product_observables(&single_holevo(&alpha, &a)?, &b)?;
    let lhs = obs_effect(&ab, &refs(&product_set(&delta, &gamma)))?;
    let tr = alpha.matrix().trace_product(obs_effect(&b, &gamma)?.matrix()).re;
    t.op_eq(lhs.matrix(), &obs_effect(&a, &delta)?.into_matrix().scale(tr));
    Ok(())
}

fn t3_5iii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = obs(s, "x", c.dim);
    let b = obs(s, "y", c.dim);
    let alpha = s.state(c.dim);
    t.note("A", &a);
    t.note("B", &b);
    t.note("alpha", &alpha);
    let cond = conditioned_observable(&b, &single_holevo(&alpha, &a)?)?;
    for (y, by) in b.iter() {
        let tr = alpha.matrix().trace_product(by.matrix()).re;
        t.op_eq(cond.effect(y)?.matrix(), &Matrix::identity(c.dim).scale(tr));
    }
    Ok(())
}

fn t3_6i(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let j = inst(s, "x", c.dim);
    let alpha = s.state(c.dim);
    let a = s.effect(c.dim);
    let names = outcomes_of(&j);
    let delta = s.subset(&names);
    t.note("J", &j);
    t.note("alpha", &alpha);
    t.note("delta", &delta);
    let ja = state_constant_instrument(&j, &alpha)?;
    let out = inst_op(&j, &delta)?.apply(alpha.matrix())?;
    let id = Matrix::identity(c.dim);
    let hat = measured_observable(&ja);
    t.op_eq(obs_effect(&hat, &delta)?.matrix(), &id.scale(out.trace().re));
    let lhs = inst_op(&ja, &delta)?.apply_dual(a.matrix())?;
    t.op_eq(&lhs, &id.scale(out.trace_product(a.matrix()).re));
    Ok(())
}

fn t3_6ii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let i = inst(s, "x", c.dim);
    let j = inst(s, "y", c.dim);
    let alpha = s.state(c.dim);
    t.note("I", &i);
    t.note("J", &j);
    t.note("alpha", &alpha);
    let ja = state_constant_instrument(&j, &alpha)?;
    let jbar_alpha = normalize(&j.total().apply(alpha.matrix())?, c.tol)?;
    t.inst_eq(
        &conditioned_instrument(&i, &ja)?,
        &state_constant_instrument(&i, &jbar_alpha)?,
    )?;
    t.inst_eq(&conditioned_instrument(&ja, &i)?, &ja)
}

fn t3_6iii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let j = inst(s, "x", c.dim);
    let b = obs(s, "y", c.dim);
    let alpha = s.state(c.dim);
    let (xs, ys) = (outcomes_of(&j), obs_outcomes(&b));
    let delta = s.subset(&xs);
    let gamma = s.subset(&ys);
    t.note("J", &j);
    t.note("B", &b);
    t.note("alpha", &alpha);
    let ab = seq_product_observables(&state_constant_instrument(&j, &alpha)?, &b)?;
    let lhs = obs_effect(&ab, &refs(&product_set(&delta, &gamma)))?;
    let tr = inst_op(&j, &delta)?
        .apply(alpha.matrix())?
        .trace_product(obs_effect(&b, &gamma)?.matrix())
        .re;
    t.op_eq(lhs.matrix(), &Matrix::identity(c.dim).scale(tr));
    Ok(())
}

fn t3_6iv(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let j = inst(s, "x", c.dim);
    let b = obs(s, "y", c.dim);
    let alpha = s.state(c.dim);
    t.note("J", &j);
    t.note("B", &b);
    t.note("alpha", &alpha);
    let cond = conditioned_observable(&b, &state_constant_instrument(&j, &alpha)?)?;
    let out = j.total().apply(alpha.matrix())?;
    for (y, by) in b.iter() {
        let tr = out.trace_product(by.matrix()).re;
        t.op_eq(cond.effect(y)?.matrix(), &Matrix::identity(c.dim).scale(tr));
    }
    Ok(())
}

fn t3_6v(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let j = inst(s, "x", c.dim);
    let a = obs(s, "y", c.dim);
    let alpha = s.state(c.dim);
    t.note("J", &j);
    t.note("A", &a);
    t.note("alpha", &alpha);
    let lhs = conditioned_instrument(&j, &single_holevo(&alpha, &a)?)?;
    t.inst_eq(&lhs, &state_constant_instrument(&j, &alpha)?)
}

fn t4_4i(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (h, a, alphas) = holevo_random(s, "x", c.dim)?;
    let b = s.effect(c.dim);
    t.note("A", &a);
    t.note("b", &b);
    for (x, hx) in h.iter() {
        let tr = alphas[x].matrix().trace_product(b.matrix()).re;
        t.op_eq(&hx.apply_dual(b.matrix())?, &a.effect(x)?.matrix().scale(tr));
    }
    t.obs_eq(&measured_observable(&h), &a)
}

fn per_outcome_eq(t: &mut Trial, lhs: &FiniteInstrument, expect: Vec<Operation>) -> Result<()> {
    t.holds(lhs.len() == expect.len());
    for ((_, op), e) in lhs.iter().zip(&expect) {
        t.map_eq(op, e)?;
    }
    Ok(())
}

fn t4_4ii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let i = inst(s, "x", c.dim);
    let (h, a, alphas) = holevo_random(s, "y", c.dim)?;
    t.note("I", &i);
    t.note("A", &a);
    let mut expect = Vec::new();
    for (_, ix) in i.iter() {
        for (y, ay) in a.iter() {
            expect.push(holevo(&alphas[y], &eff(ix.apply_dual(ay.matrix())?))?);
        }
    }
    per_outcome_eq(t, &compose_instruments(&i, &h)?, expect)
}

fn t4_4iii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (h, a, alphas) = holevo_random(s, "x", c.dim)?;
    let i = inst(s, "y", c.dim);
    t.note("I", &i);
    t.note("A", &a);
    let mut expect = Vec::new();
    for (x, ax) in a.iter() {
        for (_, iy) in i.iter() {
            let out = iy.apply(alphas[x].matrix())?;
            let tr = out.trace().re;
            expect.push(if tr > c.eps() {
                holevo(&normalize(&out, c.tol)?, &ax.scaled(tr.min(1.0))?)?
            } else {
                Operation::zero(c.dim)
            });
        }
    }
    per_outcome_eq(t, &compose_instruments(&h, &i)?, expect)
}

fn t4_4iv(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (hb, b, betas) = holevo_random(s, "x", c.dim)?;
    let (ha, a, alphas) = holevo_random(s, "y", c.dim)?;
    t.note("A", &a);
    t.note("B", &b);
    let mut expect = Vec::new();
    for (x, bx) in b.iter() {
        for (y, ay) in a.iter() {
            let w = betas[x].matrix().trace_product(ay.matrix()).re;
            expect.push(holevo(&alphas[y], &bx.scaled(w.clamp(0.0, 1.0))?)?);
        }
    }
    per_outcome_eq(t, &compose_instruments(&hb, &ha)?, expect)
}

fn t4_4v(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (h, a, alphas) = holevo_random(s, "x", c.dim)?;
    let b = obs(s, "y", c.dim);
    t.note("A", &a);
    t.note("B", &b);
    let cond = conditioned_observable(&b, &h)?;
    for (y, by) in b.iter() {
        let mut expect = Matrix::zeros(c.dim);
        for (x, ax) in a.iter() {
            expect += &ax.matrix().scale(alphas[x].matrix().trace_product(by.matrix()).re);
        }
        t.op_eq(cond.effect(y)?.matrix(), &expect);
    }
    Ok(())
}

fn t4_5i(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = obs(s, "x", c.dim);
    t.note("A", &a);
    t.obs_eq(&measured_observable(&luders_instrument(&a)), &a)
}

fn t4_5ii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = obs(s, "x", c.dim);
    let j = inst(s, "y", c.dim);
    t.note("A", &a);
    t.note("J", &j);
    let hat = measured_observable(&compose_instruments(&luders_instrument(&a), &j)?);
    for (x, ax) in a.iter() {
        for (y, jy) in j.iter() {
            let e = hat.effect(&ProductLabel::new(x, y).to_string())?;
            t.op_eq(e.matrix(), &sandwich(ax, jy.measured_effect().matrix())?);
        }
    }
    Ok(())
}

fn t4_5iii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = obs(s, "x", c.dim);
    let j = inst(s, "y", c.dim);
    t.note("A", &a);
    t.note("J", &j);
    let hat = measured_observable(&compose_instruments(&j, &luders_instrument(&a))?);
    for (y, jy) in j.iter() {
        for (x, ax) in a.iter() {
            let e = hat.effect(&ProductLabel::new(y, x).to_string())?;
            t.op_eq(e.matrix(), &jy.apply_dual(ax.matrix())?);
        }
    }
    Ok(())
}

fn t4_5iv(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = obs(s, "x", c.dim);
    let j = inst(s, "y", c.dim);
    t.note("A", &a);
    t.note("J", &j);
    let hat = measured_observable(&conditioned_instrument(&j, &luders_instrument(&a))?);
    for (y, jy) in j.iter() {
        let jhat = jy.measured_effect();
        let mut expect = Matrix::zeros(c.dim);
        for (_, ax) in a.iter() {
            expect += &sandwich(ax, jhat.matrix())?;
        }
        t.op_eq(hat.effect(y)?.matrix(), &expect);
    }
    Ok(())
}

fn t4_5v(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = obs(s, "x", c.dim);
    let j = inst(s, "y", c.dim);
    t.note("A", &a);
    t.note("J", &j);
    let hat = measured_observable(&conditioned_instrument(&luders_instrument(&a), &j)?);
    let total = j.total();
    for (x, ax) in a.iter() {
        t.op_eq(hat.effect(x)?.matrix(), &total.apply_dual(ax.matrix())?);
    }
    Ok(())
}

fn t4_5vi(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = obs(s, "x", c.dim);
    let b = obs(s, "y", c.dim);
    t.note("A", &a);
    t.note("B", &b);
    let ab = seq_product_observables(&luders_instrument(&a), &b)?;
    for (x, ax) in a.iter() {
        for (y, by) in b.iter() {
            let e = ab.effect(&ProductLabel::new(x, y).to_string())?;
            t.op_eq(e.matrix(), &sandwich(ax, by.matrix())?);
        }
    }
    Ok(())
}

fn t4_5vii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = obs(s, "x", c.dim);
    let b = obs(s, "y", c.dim);
    t.note("A", &a);
    t.note("B", &b);
    let cond = conditioned_observable(&b, &luders_instrument(&a))?;
    for (y, by) in b.iter() {
        let mut expect = Matrix::zeros(c.dim);
        for (_, ax) in a.iter() {
            expect += &sandwich(ax, by.matrix())?;
        }
        t.op_eq(cond.effect(y)?.matrix(), &expect);
    }
    Ok(())
}

/// Sample `A`, `J`, and subsets `Δ ⊆ Ω_A`, `Γ ⊆ Ω_J`.
fn luders_setup(
    t: &mut Trial,
    s: &mut Sampler,
    c: &Ctx,
) -> (FiniteObservable, FiniteInstrument, Vec<String>, Vec<String>) {
    let a = obs(s, "x", c.dim);
    let j = inst(s, "y", c.dim);
    let (xs, ys) = (obs_outcomes(&a), outcomes_of(&j));
    let delta: Vec<String> = s.subset(&xs).into_iter().map(str::to_string).collect();
    let gamma: Vec<String> = s.subset(&ys).into_iter().map(str::to_string).collect();
    t.note("A", &a);
    t.note("J", &j);
    t.note("delta", &refs(&delta));
    t.note("gamma", &refs(&gamma));
    (a, j, delta, gamma)
}

fn sandwich_sum(a: &FiniteObservable, over: &[&str], m: &Matrix) -> Result<Matrix> {
    let mut out = Matrix::zeros(a.dim());
    for x in over {
        out += &sandwich(a.effect(x)?, m)?;
    }
    Ok(out)
}

fn c4_6i(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (a, _, delta, _) = luders_setup(t, s, c);
    let lhs = inst_op(&luders_instrument(&a), &refs(&delta))?.measured_effect();
    t.op_eq(lhs.matrix(), obs_effect(&a, &refs(&delta))?.matrix());
    Ok(())
}

fn c4_6ii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (a, j, delta, gamma) = luders_setup(t, s, c);
    let hat = measured_observable(&compose_instruments(&luders_instrument(&a), &j)?);
    let lhs = obs_effect(&hat, &refs(&product_set(&refs(&delta), &refs(&gamma))))?;
    let jhat = inst_op(&j, &refs(&gamma))?.measured_effect();
    t.op_eq(lhs.matrix(), &sandwich_sum(&a, &refs(&delta), jhat.matrix())?);
    Ok(())
}

fn c4_6iii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (a, j, delta, gamma) = luders_setup(t, s, c);
    let hat = measured_observable(&compose_instruments(&j, &luders_instrument(&a))?);
    let lhs = obs_effect(&hat, &refs(&product_set(&refs(&gamma), &refs(&delta))))?;
    let rhs = inst_op(&j, &refs(&gamma))?.apply_dual(obs_effect(&a, &refs(&delta))?.matrix())?;
    t.op_eq(lhs.matrix(), &rhs);
    Ok(())
}

fn c4_6iv(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (a, j, _, gamma) = luders_setup(t, s, c);
    let hat = measured_observable(&conditioned_instrument(&j, &luders_instrument(&a))?);
    let lhs = obs_effect(&hat, &refs(&gamma))?;
    let jhat = inst_op(&j, &refs(&gamma))?.measured_effect();
    let all = obs_outcomes(&a);
    t.op_eq(lhs.matrix(), &sandwich_sum(&a, &refs(&all), jhat.matrix())?);
    Ok(())
}

fn c4_6v(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (a, j, delta, _) = luders_setup(t, s, c);
    let hat = measured_observable(&conditioned_instrument(&luders_instrument(&a), &j)?);
    let lhs = obs_effect(&hat, &refs(&delta))?;
    let rhs = j.total().apply_dual(obs_effect(&a, &refs(&delta))?.matrix())?;
    t.op_eq(lhs.matrix(), &rhs);
    Ok(())
}

fn c4_6vi(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (a, _, delta, _) = luders_setup(t, s, c);
    let b = obs(s, "y", c.dim);
    let ys = obs_outcomes(&b);
    let gamma = s.subset(&ys);
    t.note("B", &b);
    t.note("gamma_b", &gamma);
    let ab = seq_product_observables(&luders_instrument(&a), &b)?;
    let lhs = obs_effect(&ab, &refs(&product_set(&refs(&delta), &gamma)))?;
    let bg = obs_effect(&b, &gamma)?;
    t.op_eq(lhs.matrix(), &sandwich_sum(&a, &refs(&delta), bg.matrix())?);
    Ok(())
}

fn c4_6vii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = obs(s, "x", c.dim);
    let b = obs(s, "y", c.dim);
    let ys = obs_outcomes(&b);
    let gamma = s.subset(&ys);
    t.note("A", &a);
    t.note("B", &b);
    t.note("gamma", &gamma);
    let cond = conditioned_observable(&b, &luders_instrument(&a))?;
    let lhs = obs_effect(&cond, &gamma)?;
    let all = obs_outcomes(&a);
    let bg = obs_effect(&b, &gamma)?;
    t.op_eq(lhs.matrix(), &sandwich_sum(&a, &refs(&all), bg.matrix())?);
    Ok(())
}
