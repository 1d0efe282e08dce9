//! Checks for operations, duals, sequential products, Lüders and Holevo operations.

use super::{check, Check, Ctx, Sampler, Trial};
use crate::effects::{normalize, Effect, State};
use crate::error::Result;
use crate::linalg::{Matrix, Tolerance};
use crate::operations::{
    add_ops, commute_luders, commute_relative, compose, conditioned_effect, convex_combine_ops, holevo,
    kraus_from_choi, luders, not_influenced, seq_product_effects, standard_seq_product, Operation,
};

pub(super) const CHECKS: &[Check] = &[
    check("T1.1", "tr[ρ J*(a)] = tr[J(ρ) a]", t1_1),
    check("T1.1c", "the Choi matrix determines the operation and its dual", t1_1c),
    check("K1", "isometric remixing of a Kraus list leaves the map unchanged", k1),
    check("T1.2i", "tr[J(ρ)] = tr(ρ Ĵ)", t1_2i),
    check("T1.2ii", "(Σλᵢ Jᵢ)* = Σλᵢ Jᵢ* and (Σλᵢ Jᵢ)^ = Σλᵢ Ĵᵢ", t1_2ii),
    check("T1.2iii", "(Σλᵢ Jᵢ)∘(Σμⱼ Kⱼ) = Σλᵢμⱼ Jᵢ∘Kⱼ", t1_2iii),
    check("T1.2iv", "(J∘K)*(a) = J*(K*(a)) and (J∘K)^ = J*(K̂)", t1_2iv),
    check("T1.2v", "channel ⟺ Ĵ = I ⟺ J*(I) = I ⟺ (K∘J)^ = K̂ for all K", t1_2v),
    check("C1.3", "(J+K)* = J* + K* and (J+K)^ = Ĵ + K̂", c1_3),
    check("T1.4i", "a[J]b = (J∘K)^ when Ĵ = a, K̂ = b", t1_4i),
    check("T1.4ii", "a[J]b ≤ a", t1_4ii),
    check("T1.4iii", "(λa)[λJ]b = λ(a[J]b) = a[J](λb)", t1_4iii),
    check("T1.4iv", "a[J]I = a", t1_4iv),
    check("T1.4v", "a[J]a′ = Ĵ − J*(Ĵ) and a[J]b′ = Ĵ − J*(b)", t1_4v),
    check("T1.4vi", "(Σλᵢaᵢ)[ΣλᵢJᵢ](Σμⱼbⱼ) = Σλᵢμⱼ aᵢ[Jᵢ]bⱼ", t1_4vi),
    check(
        "E1.2",
        "every effect commutes with 0 and I; commutation survives scaling",
        e1_2,
    ),
    check(
        "E1.3",
        "P_ρ(b|J,K|a) = P_ρ(a) P_{J(ρ)~}(b) + P_ρ(a′) P_{K(ρ)~}(b)",
        e1_3,
    ),
    check("T2.1i", "(L^a∘J)^ = a^{1/2} Ĵ a^{1/2}", t2_1i),
    check("T2.1ii", "a[L^a]b = a^{1/2} b a^{1/2} = L^a(b)", t2_1ii),
    check("T2.1iii", "(J∘L^a)^ = J*(a)", t2_1iii),
    check("T2.1iv", "(L^a∘L^b)^ = a^{1/2} b a^{1/2}", t2_1iv),
    check("T2.1v", "a, b commute relative to Lüders operations ⟺ ab = ba", t2_1v),
    check(
        "T2.1vi",
        "sharp a: b not influenced relative to {L^a, L^a′} ⟺ ab = ba",
        t2_1vi,
    ),
    check("T2.2i", "H*(b) = tr(αb) a and Ĥ = a", t2_2i),
    check("T2.2ii", "H∘J = H_(J(α)~, tr(Jα) a) and J∘H = H_(α, J*(a))", t2_2ii),
    check("T2.2iii", "(H∘J)^ = tr[J(α)] a and (J∘H)^ = J*(a)", t2_2iii),
    check("T2.2iv", "H_(β,b)∘H_(α,a) = H_(α, tr(βa) b)", t2_2iv),
    check("T2.2v", "a[H_(α,a)]b = tr(αb) a", t2_2v),
    check("T2.2vi", "Holevo commutation ⟺ tr(αb) a = tr(βa) b", t2_2vi),
    check("T2.2vii", "not influenced ⟺ b = tr[(α−β)b] a + tr(βb) I", t2_2vii),
    check("T2.2viii", "(b|H_(α,a),H_(β,a′)|a) = tr[(α−β)b] a + tr(βb) I", t2_2viii),
    check("R2.2", "I[H_(α,I)]a = tr(αa) I differs from a", r2_2),
];

fn kraus_count(s: &mut Sampler) -> usize {
    s.between(1, 3)
}

fn op(s: &mut Sampler, d: usize) -> Operation {
    let k = kraus_count(s);
    s.operation(d, k)
}

fn channel(s: &mut Sampler, d: usize) -> Operation {
    let k = kraus_count(s);
    s.channel(d, k)
}

/// An operation and the effect it measures: generic, Lüders or Holevo.
fn measuring(s: &mut Sampler, d: usize) -> (Operation, Effect) {
    match s.index(3) {
        0 => {
            let j = op(s, d);
            let a = j.measured_effect();
            (j, a)
        }
        1 => {
            let a = s.effect(d);
            (luders(&a), a)
        }
        _ => {
            let a = s.effect(d);
            let alpha = s.state(d);
            (holevo(&alpha, &a).expect("dims agree"), a)
        }
    }
}

/// Lüders or Holevo operation measuring `b`.
fn realize(s: &mut Sampler, b: &Effect) -> Operation {
    if s.index(2) == 0 {
        luders(b)
    } else {
        let beta = s.state(b.dim());
        holevo(&beta, b).expect("dims agree")
    }
}

fn eff(m: Matrix) -> Effect {
    Effect::from_matrix_unchecked(m.hermitian_part())
}

fn sqrt_sandwich(a: &Effect, b: &Matrix) -> Matrix {
    standard_seq_product(a, &eff(b.clone()))
        .expect("dims agree")
        .into_matrix()
}

fn t1_1(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let j = op(s, c.dim);
    let rho = s.state(c.dim);
    let a = s.effect(c.dim);
    t.note("J", &j);
    t.note("rho", &rho);
    t.note("a", &a);
    let lhs = rho.matrix().trace_product(&j.apply_dual(a.matrix())?);
    let rhs = j.apply(rho.matrix())?.trace_product(a.matrix());
    t.complex_eq(lhs, rhs);
    Ok(())
}

fn t1_1c(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let j = op(s, c.dim);
    let a = s.effect(c.dim);
    let rho = s.state(c.dim);
    t.note("J", &j);
    let back = kraus_from_choi(&j.choi(), c.tol)?;
    t.map_eq(&j, &back)?;
    t.op_eq(&j.apply_dual(a.matrix())?, &back.apply_dual(a.matrix())?);
    t.op_eq(&j.apply(rho.matrix())?, &back.apply(rho.matrix())?);
    Ok(())
}

fn k1(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let k = kraus_count(s);
    let j = s.operation(c.dim, k);
    let m = k + 1;
    let v = s.unitary(m);
    let mut padded = j.kraus().to_vec();
    padded.push(Matrix::zeros(c.dim));
    let remixed: Vec<Matrix> = (0..m)
        .map(|row| {
            let mut d = Matrix::zeros(c.dim);
            for (i, ci) in padded.iter().enumerate() {
                d += &ci.scale_c(v[(row, i)]);
            }
            d
        })
        .collect();
    let j2 = Operation::new(remixed, c.tol)?;
    t.note("J", &j);
    t.note("V", &v);
    let rho = s.state(c.dim);
    let a = s.effect(c.dim);
    t.op_eq(&j.apply(rho.matrix())?, &j2.apply(rho.matrix())?);
    t.op_eq(&j.apply_dual(a.matrix())?, &j2.apply_dual(a.matrix())?);
    t.map_eq(&j, &j2)
}

fn t1_2i(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let j = op(s, c.dim);
    let rho = s.state(c.dim);
    t.note("J", &j);
    t.note("rho", &rho);
    let lhs = j.apply(rho.matrix())?.trace();
    let rhs = rho.matrix().trace_product(j.measured_effect().matrix());
    t.complex_eq(lhs, rhs);
    Ok(())
}

fn t1_2ii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let n = s.between(2, 3);
    let ops: Vec<Operation> = (0..n).map(|_| op(s, c.dim)).collect();
    let w = s.weights(n);
    let a = s.effect(c.dim);
    let mix = convex_combine_ops(&w, &ops, c.tol)?;
    t.note("weights", &w);
    t.note("a", &a);
    let mut dual = Matrix::zeros(c.dim);
    let mut hat = Matrix::zeros(c.dim);
    for (wi, j) in w.iter().zip(&ops) {
        dual += &j.apply_dual(a.matrix())?.scale(*wi);
        hat += &j.measured_effect().matrix().scale(*wi);
    }
    t.op_eq(&mix.apply_dual(a.matrix())?, &dual);
    t.op_eq(mix.measured_effect().matrix(), &hat);
    Ok(())
}

fn t1_2iii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (n, m) = (s.between(1, 3), s.between(1, 3));
    let js: Vec<Operation> = (0..n).map(|_| op(s, c.dim)).collect();
    let ks: Vec<Operation> = (0..m).map(|_| op(s, c.dim)).collect();
    let lam = s.weights(n);
    let mu = s.weights(m);
    t.note("lambda", &lam);
    t.note("mu", &mu);
    let lhs = compose(
        &convex_combine_ops(&lam, &js, c.tol)?,
        &convex_combine_ops(&mu, &ks, c.tol)?,
    )?;
    let mut weights = Vec::new();
    let mut pairs = Vec::new();
    for (li, ji) in lam.iter().zip(&js) {
        for (mj, kj) in mu.iter().zip(&ks) {
            weights.push(li * mj);
            pairs.push(compose(ji, kj)?);
        }
    }
    let rhs = convex_combine_ops(&weights, &pairs, c.tol)?;
    t.map_eq(&lhs, &rhs)?;
    let a = s.effect(c.dim);
    t.op_eq(&lhs.apply_dual(a.matrix())?, &rhs.apply_dual(a.matrix())?);
    Ok(())
}

fn t1_2iv(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let j = op(s, c.dim);
    let k = op(s, c.dim);
    let a = s.effect(c.dim);
    t.note("J", &j);
    t.note("K", &k);
    t.note("a", &a);
    let jk = compose(&j, &k)?;
    t.op_eq(&jk.apply_dual(a.matrix())?, &j.apply_dual(&k.apply_dual(a.matrix())?)?);
    t.op_eq(
        jk.measured_effect().matrix(),
        &j.apply_dual(k.measured_effect().matrix())?,
    );
    Ok(())
}

fn t1_2v(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let d = c.dim;
    let planted_channel = c.even();
    let j = if planted_channel {
        channel(s, d)
    } else if s.index(2) == 0 {
        let lam = s.range(0.3, 0.95);
        channel(s, d).scaled(lam)?
    } else {
        let k = kraus_count(s);
        let slack = s.range(0.3, 0.95);
        s.operation_with_slack(d, k, slack)
    };
    t.note("J", &j);
    let eps = c.eps();
    let id = Matrix::identity(d);
    let states = [State::maximally_mixed(d), s.state(d)];
    let a_trace = states
        .iter()
        .map(|rho| j.apply(rho.matrix()).map(|m| (m.trace().re - 1.0).abs() <= eps))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|ok| ok);
    let b_hat = j.measured_effect().matrix().max_abs_diff(&id) <= eps;
    let c_dual = j.apply_dual(&id)?.max_abs_diff(&id) <= eps;
    let probes = [Operation::identity(d), op(s, d), luders(&s.effect(d))];
    let mut d_all = true;
    for k in &probes {
        let lhs = compose(k, &j)?.measured_effect();
        d_all &= lhs.matrix().max_abs_diff(k.measured_effect().matrix()) <= eps;
    }
    for verdict in [a_trace, b_hat, c_dual, d_all, j.is_channel(c.tol)] {
        t.holds(verdict == planted_channel);
    }
    Ok(())
}

fn c1_3(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let k = kraus_count(s);
    let inst = s.instrument("x", c.dim, 3, k);
    let j = inst.operation("x0")?;
    let kk = inst.operation("x1")?;
    t.note("J", j);
    t.note("K", kk);
    let sum = add_ops(j, kk, c.tol)?;
    let a = s.effect(c.dim);
    let rho = s.state(c.dim);
    t.op_eq(
        &sum.apply_dual(a.matrix())?,
        &(&j.apply_dual(a.matrix())? + &kk.apply_dual(a.matrix())?),
    );
    t.op_eq(
        &sum.apply(rho.matrix())?,
        &(&j.apply(rho.matrix())? + &kk.apply(rho.matrix())?),
    );
    t.op_eq(
        sum.measured_effect().matrix(),
        &(j.measured_effect().matrix() + kk.measured_effect().matrix()),
    );
    Ok(())
}

fn t1_4i(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (j, a) = measuring(s, c.dim);
    let b = s.effect(c.dim);
    let k = realize(s, &b);
    t.note("J", &j);
    t.note("K", &k);
    t.op_eq(j.measured_effect().matrix(), a.matrix());
    t.op_eq(k.measured_effect().matrix(), b.matrix());
    let lhs = seq_product_effects(&j, &b)?;
    t.op_eq(lhs.matrix(), compose(&j, &k)?.measured_effect().matrix());
    Ok(())
}

fn t1_4ii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (j, a) = measuring(s, c.dim);
    let b = s.effect(c.dim);
    t.note("J", &j);
    t.note("b", &b);
    t.leq(seq_product_effects(&j, &b)?.matrix(), a.matrix());
    Ok(())
}

fn t1_4iii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (j, a) = measuring(s, c.dim);
    let b = s.effect(c.dim);
    let lam = s.uniform();
    t.note("J", &j);
    t.note("b", &b);
    t.note("lambda", &lam);
    let lj = j.scaled(lam)?;
    t.op_eq(lj.measured_effect().matrix(), &a.matrix().scale(lam));
    let base = seq_product_effects(&j, &b)?.into_matrix().scale(lam);
    t.op_eq(seq_product_effects(&lj, &b)?.matrix(), &base);
    t.op_eq(seq_product_effects(&j, &b.scaled(lam)?)?.matrix(), &base);
    Ok(())
}

fn t1_4iv(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (j, a) = measuring(s, c.dim);
    t.note("J", &j);
    t.op_eq(seq_product_effects(&j, &Effect::identity(c.dim))?.matrix(), a.matrix());
    Ok(())
}

fn t1_4v(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (j, a) = measuring(s, c.dim);
    let b = s.effect(c.dim);
    t.note("J", &j);
    t.note("b", &b);
    let hat = j.measured_effect();
    let lhs = seq_product_effects(&j, &a.complement())?;
    t.op_eq(lhs.matrix(), &(hat.matrix() - &j.apply_dual(hat.matrix())?));
    let lhs = seq_product_effects(&j, &b.complement())?;
    t.op_eq(lhs.matrix(), &(hat.matrix() - &j.apply_dual(b.matrix())?));
    Ok(())
}

fn t1_4vi(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (n, m) = (s.between(1, 3), s.between(1, 3));
    let pairs: Vec<(Operation, Effect)> = (0..n).map(|_| measuring(s, c.dim)).collect();
    let bs: Vec<Effect> = (0..m).map(|_| s.effect(c.dim)).collect();
    let lam = s.weights(n);
    let mu = s.weights(m);
    t.note("lambda", &lam);
    t.note("mu", &mu);
    let ops: Vec<Operation> = pairs.iter().map(|(j, _)| j.clone()).collect();
    let mix = convex_combine_ops(&lam, &ops, c.tol)?;
    let mut a_mix = Matrix::zeros(c.dim);
    for (l, (_, a)) in lam.iter().zip(&pairs) {
        a_mix += &a.matrix().scale(*l);
    }
    t.op_eq(mix.measured_effect().matrix(), &a_mix);
    let mut b_mix = Matrix::zeros(c.dim);
    for (w, b) in mu.iter().zip(&bs) {
        b_mix += &b.matrix().scale(*w);
    }
    let lhs = seq_product_effects(&mix, &eff(b_mix))?;
    let mut rhs = Matrix::zeros(c.dim);
    for (l, (j, _)) in lam.iter().zip(&pairs) {
        for (w, b) in mu.iter().zip(&bs) {
            rhs += &seq_product_effects(j, b)?.matrix().scale(l * w);
        }
    }
    t.op_eq(lhs.matrix(), &rhs);
    Ok(())
}

fn e1_2(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let d = c.dim;
    let (j, a) = measuring(s, d);
    t.note("J", &j);
    t.holds(commute_relative(&a, &Effect::zero(d), &j, &Operation::zero(d), c.tol)?);
    t.holds(commute_relative(
        &a,
        &Effect::identity(d),
        &j,
        &Operation::identity(d),
        c.tol,
    )?);
    let (p, q) = if c.even() {
        s.commuting_effects(d)
    } else {
        (s.effect(d), s.effect(d))
    };
    let lam = s.range(0.1, 1.0);
    t.note("a", &p);
    t.note("b", &q);
    t.note("lambda", &lam);
    let before = commute_relative(&p, &q, &luders(&p), &luders(&q), c.tol)?;
    let after = commute_relative(&p, &q.scaled(lam)?, &luders(&p), &luders(&q).scaled(lam)?, c.tol)?;
    t.holds(before == c.even());
    t.holds(!before || after);
    Ok(())
}

fn e1_3(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let d = c.dim;
    let (j, a) = measuring(s, d);
    let k = realize(s, &a.complement());
    let b = s.effect(d);
    let rho = s.state(d);
    t.note("J", &j);
    t.note("K", &k);
    t.note("b", &b);
    t.note("rho", &rho);
    let cond = conditioned_effect(&b, &j, &k, c.tol)?;
    t.leq(&Matrix::zeros(d), cond.matrix());
    t.leq(cond.matrix(), &Matrix::identity(d));
    let branch = |op: &Operation, p: f64| -> Result<f64> {
        if p <= 1e-12 {
            return Ok(0.0);
        }
        let post = normalize(&op.apply(rho.matrix())?, Tolerance::default())?;
        Ok(p * post.matrix().trace_product(b.matrix()).re)
    };
    let pa = rho.matrix().trace_product(a.matrix()).re;
    let bayes = branch(&j, pa)? + branch(&k, 1.0 - pa)?;
    t.scalar_eq(rho.matrix().trace_product(cond.matrix()).re, bayes);
    let unit = conditioned_effect(&Effect::identity(d), &j, &k, c.tol)?;
    t.op_eq(unit.matrix(), &Matrix::identity(d));
    Ok(())
}

fn t2_1i(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = s.effect(c.dim);
    let j = op(s, c.dim);
    t.note("a", &a);
    t.note("J", &j);
    let lhs = compose(&luders(&a), &j)?.measured_effect();
    t.op_eq(lhs.matrix(), &sqrt_sandwich(&a, j.measured_effect().matrix()));
    Ok(())
}

fn t2_1ii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = s.effect(c.dim);
    let b = s.effect(c.dim);
    t.note("a", &a);
    t.note("b", &b);
    let l = luders(&a);
    let lhs = seq_product_effects(&l, &b)?;
    let rhs = standard_seq_product(&a, &b)?;
    t.op_eq(lhs.matrix(), rhs.matrix());
    t.op_eq(lhs.matrix(), &l.apply(b.matrix())?);
    Ok(())
}

fn t2_1iii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = s.effect(c.dim);
    let j = op(s, c.dim);
    t.note("a", &a);
    t.note("J", &j);
    let lhs = compose(&j, &luders(&a))?.measured_effect();
    t.op_eq(lhs.matrix(), &j.apply_dual(a.matrix())?);
    Ok(())
}

fn t2_1iv(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = s.effect(c.dim);
    let b = s.effect(c.dim);
    t.note("a", &a);
    t.note("b", &b);
    let lhs = compose(&luders(&a), &luders(&b))?.measured_effect();
    t.op_eq(lhs.matrix(), &sqrt_sandwich(&a, b.matrix()));
    Ok(())
}

fn t2_1v(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (a, b) = if c.even() {
        s.commuting_effects(c.dim)
    } else {
        (s.effect(c.dim), s.effect(c.dim))
    };
    t.note("a", &a);
    t.note("b", &b);
    let relative = commute_relative(&a, &b, &luders(&a), &luders(&b), c.tol)?;
    let plain = commute_luders(&a, &b, c.tol)?;
    t.holds(relative == plain);
    t.holds(relative == c.even());
    Ok(())
}

fn t2_1vi(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let d = c.dim;
    let rank = s.between(1, d - 1);
    let u = s.unitary(d);
    let diag: Vec<f64> = (0..d).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
    let a = s.diagonal_in(&u, &diag);
    let b = if c.even() {
        let p = a.matrix();
        let q = a.complement().into_matrix();
        let (x, y) = (s.effect(d), s.effect(d));
        eff(&(&(p * x.matrix()) * p) + &(&(&q * y.matrix()) * &q))
    } else {
        s.effect(d)
    };
    t.note("a", &a);
    t.note("b", &b);
    let ni = not_influenced(&b, &luders(&a), &luders(&a.complement()), c.tol)?;
    let comm = commute_luders(&a, &b, c.tol)?;
    t.holds(ni == comm);
    t.holds(comm == c.even());
    Ok(())
}

fn t2_2i(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let alpha = s.state(c.dim);
    let a = s.effect(c.dim);
    let b = s.effect(c.dim);
    t.note("alpha", &alpha);
    t.note("a", &a);
    t.note("b", &b);
    let h = holevo(&alpha, &a)?;
    let tr = alpha.matrix().trace_product(b.matrix()).re;
    t.op_eq(&h.apply_dual(b.matrix())?, &a.matrix().scale(tr));
    t.op_eq(h.measured_effect().matrix(), a.matrix());
    Ok(())
}

fn t2_2ii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let alpha = s.state(c.dim);
    let a = s.effect(c.dim);
    let j = op(s, c.dim);
    t.note("alpha", &alpha);
    t.note("a", &a);
    t.note("J", &j);
    let h = holevo(&alpha, &a)?;
    let j_alpha = j.apply(alpha.matrix())?;
    let tr = j_alpha.trace().re;
    let rhs = holevo(&normalize(&j_alpha, c.tol)?, &a.scaled(tr)?)?;
    t.map_eq(&compose(&h, &j)?, &rhs)?;
    let rhs = holevo(&alpha, &eff(j.apply_dual(a.matrix())?))?;
    t.map_eq(&compose(&j, &h)?, &rhs)
}

fn t2_2iii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let alpha = s.state(c.dim);
    let a = s.effect(c.dim);
    let j = op(s, c.dim);
    t.note("alpha", &alpha);
    t.note("a", &a);
    t.note("J", &j);
    let h = holevo(&alpha, &a)?;
    let tr = j.apply(alpha.matrix())?.trace().re;
    t.op_eq(compose(&h, &j)?.measured_effect().matrix(), &a.matrix().scale(tr));
    t.op_eq(compose(&j, &h)?.measured_effect().matrix(), &j.apply_dual(a.matrix())?);
    Ok(())
}

fn t2_2iv(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let (alpha, beta) = (s.state(c.dim), s.state(c.dim));
    let (a, b) = (s.effect(c.dim), s.effect(c.dim));
    t.note("alpha", &alpha);
    t.note("beta", &beta);
    t.note("a", &a);
    t.note("b", &b);
    let lhs = compose(&holevo(&beta, &b)?, &holevo(&alpha, &a)?)?;
    let tr = beta.matrix().trace_product(a.matrix()).re;
    let rhs = holevo(&alpha, &b.scaled(tr)?)?;
    t.map_eq(&lhs, &rhs)?;
    let rho = s.state(c.dim);
    t.op_eq(&lhs.apply(rho.matrix())?, &rhs.apply(rho.matrix())?);
    Ok(())
}

fn t2_2v(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let alpha = s.state(c.dim);
    let (a, b) = (s.effect(c.dim), s.effect(c.dim));
    t.note("alpha", &alpha);
    t.note("a", &a);
    t.note("b", &b);
    let lhs = seq_product_effects(&holevo(&alpha, &a)?, &b)?;
    let tr = alpha.matrix().trace_product(b.matrix()).re;
    t.op_eq(lhs.matrix(), &a.matrix().scale(tr));
    Ok(())
}

fn t2_2vi(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = s.effect(c.dim);
    let alpha = s.state(c.dim);
    let (b, beta) = if c.even() {
        let lam = s.range(0.1, 1.0);
        (a.scaled(lam)?, alpha.clone())
    } else {
        (s.effect(c.dim), s.state(c.dim))
    };
    t.note("a", &a);
    t.note("b", &b);
    t.note("alpha", &alpha);
    t.note("beta", &beta);
    let commute = commute_relative(&a, &b, &holevo(&alpha, &a)?, &holevo(&beta, &b)?, c.tol)?;
    let lhs = a.matrix().scale(alpha.matrix().trace_product(b.matrix()).re);
    let rhs = b.matrix().scale(beta.matrix().trace_product(a.matrix()).re);
    let condition = lhs.max_abs_diff(&rhs) <= c.eps();
    t.holds(commute == condition);
    t.holds(commute == c.even());
    Ok(())
}

fn holevo_conditioned(alpha: &State, beta: &State, a: &Effect, b: &Effect) -> Matrix {
    let diff = alpha.matrix() - beta.matrix();
    &a.matrix().scale(diff.trace_product(b.matrix()).re)
        + &Matrix::identity(a.dim()).scale(beta.matrix().trace_product(b.matrix()).re)
}

fn t2_2vii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let d = c.dim;
    let a = s.effect(d);
    let alpha = s.state(d);
    let beta = if s.index(2) == 0 { alpha.clone() } else { s.state(d) };
    let b = if c.even() {
        Effect::identity(d).scaled(s.uniform())?
    } else {
        s.effect(d)
    };
    t.note("a", &a);
    t.note("b", &b);
    t.note("alpha", &alpha);
    t.note("beta", &beta);
    let j = holevo(&alpha, &a)?;
    let k = holevo(&beta, &a.complement())?;
    let ni = not_influenced(&b, &j, &k, c.tol)?;
    let condition = b.matrix().max_abs_diff(&holevo_conditioned(&alpha, &beta, &a, &b)) <= c.eps();
    t.holds(ni == condition);
    t.holds(ni == c.even());
    if alpha == beta {
        let special = b
            .matrix()
            .max_abs_diff(&Matrix::identity(d).scale(alpha.matrix().trace_product(b.matrix()).re))
            <= c.eps();
        t.holds(special == ni);
    }
    Ok(())
}

fn t2_2viii(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let a = s.effect(c.dim);
    let b = s.effect(c.dim);
    let (alpha, beta) = (s.state(c.dim), s.state(c.dim));
    t.note("a", &a);
    t.note("b", &b);
    t.note("alpha", &alpha);
    t.note("beta", &beta);
    let cond = conditioned_effect(&b, &holevo(&alpha, &a)?, &holevo(&beta, &a.complement())?, c.tol)?;
    t.op_eq(cond.matrix(), &holevo_conditioned(&alpha, &beta, &a, &b));
    Ok(())
}

fn r2_2(t: &mut Trial, s: &mut Sampler, c: &Ctx) -> Result<()> {
    let d = c.dim;
    let u = s.unitary(d);
    let mut vals = vec![0.05, 0.95];
    vals.extend((2..d).map(|_| s.range(0.05, 0.95)));
    let a = s.diagonal_in(&u, &vals);
    let e0 = u.column(0);
    let alpha = State::from_matrix_unchecked(Matrix::outer(&e0, &e0));
    t.note("a", &a);
    t.note("alpha", &alpha);
    let h = holevo(&alpha, &Effect::identity(d))?;
    let lhs = seq_product_effects(&h, &a)?;
    let tr = alpha.matrix().trace_product(a.matrix()).re;
    t.op_eq(lhs.matrix(), &Matrix::identity(d).scale(tr));
    t.holds(lhs.matrix().max_abs_diff(a.matrix()) > 0.1);
    Ok(())
}
