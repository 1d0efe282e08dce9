//! Finite observables and finite instruments.
//!
//! Both are stored per outcome in insertion order. Set-level values `A(Δ)` and
//! `I(Δ)` are computed by summation when asked for.

use indexmap::IndexMap;

use crate::effects::{check_weights, normalize, Effect, ProbabilityMeasure, State};
use crate::error::{Error, Result};
use crate::label::{validate_label, ProductLabel};
use crate::linalg::{Matrix, Tolerance};
use crate::operations::{compose, convex_combine_ops, holevo, luders, Operation};

/// Outcome-labeled effects summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteObservable {
    dim: usize,
    effects: IndexMap<String, Effect>,
}

/// Outcome-labeled operations whose sum is a channel.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteInstrument {
    dim: usize,
    operations: IndexMap<String, Operation>,
}

fn collect_labeled<T>(
    items: impl IntoIterator<Item = (String, T)>,
    dim_of: impl Fn(&T) -> usize,
) -> Result<(usize, IndexMap<String, T>)> {
    let mut map = IndexMap::new();
    let mut dim = None;
    for (label, item) in items {
        validate_label(&label)?;
        let d = dim_of(&item);
        match dim {
            None => dim = Some(d),
            Some(expected) if expected != d => return Err(Error::DimMismatch { expected, found: d }),
            _ => {}
        }
        if map.insert(label.clone(), item).is_some() {
            return Err(Error::InvalidLabel(format!("duplicate outcome `{label}`")));
        }
    }
    let dim = dim.ok_or_else(|| Error::InvalidInput("at least one outcome is required".into()))?;
    Ok((dim, map))
}

fn lookup<'a, T>(map: &'a IndexMap<String, T>, label: &str) -> Result<&'a T> {
    map.get(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

fn same_labels<A, B>(a: &IndexMap<String, A>, b: &IndexMap<String, B>) -> Result<()> {
    if a.len() != b.len() || a.keys().any(|k| !b.contains_key(k)) {
        let fmt = |keys: Vec<&String>| keys.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ");
        return Err(Error::LabelMismatch(format!(
            "{{{}}} vs {{{}}}",
            fmt(a.keys().collect()),
            fmt(b.keys().collect())
        )));
    }
    Ok(())
}

fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimMismatch { expected, found });
    }
    Ok(())
}

impl FiniteObservable {
    /// Checks that the effects sum to `I` within `tol`.
    pub fn new(effects: impl IntoIterator<Item = (String, Effect)>, tol: Tolerance) -> Result<Self> {
        let (dim, effects) = collect_labeled(effects, Effect::dim)?;
        let obs = Self { dim, effects };
        let deviation = obs.sum_matrix().max_abs_diff(&Matrix::identity(dim));
        if deviation > tol.eps() {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(obs)
    }

    pub(crate) fn from_unchecked(dim: usize, effects: IndexMap<String, Effect>) -> Self {
        Self { dim, effects }
    }

    fn sum_matrix(&self) -> Matrix {
        let mut s = Matrix::zeros(self.dim);
        for e in self.effects.values() {
            s += e.matrix();
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &str> {
        self.effects.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Effect)> {
        self.effects.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn effect(&self, label: &str) -> Result<&Effect> {
        lookup(&self.effects, label)
    }

    /// `A(Δ) = Σ_{x∈Δ} A_x`.
    pub fn effect_of(&self, delta: &[&str]) -> Result<Effect> {
        obs_effect(self, delta)
    }

    /// Every `A_x` is a projection.
    pub fn is_sharp(&self, tol: Tolerance) -> bool {
        self.effects.values().all(|e| e.is_sharp(tol))
    }

    /// Largest entrywise deviation between matching outcomes; the label sets must agree.
    pub fn max_abs_diff(&self, other: &FiniteObservable) -> Result<f64> {
        same_labels(&self.effects, &other.effects)?;
        check_same_dim(self.dim, other.dim)?;
        Ok(self
            .effects
            .iter()
            .map(|(k, e)| e.matrix().max_abs_diff(other.effects[k].matrix()))
            .fold(0.0, f64::max))
    }
}

impl FiniteInstrument {
    /// Checks that the total `Σ I_x` is a channel within `tol`.
    pub fn new(operations: impl IntoIterator<Item = (String, Operation)>, tol: Tolerance) -> Result<Self> {
        let (dim, operations) = collect_labeled(operations, Operation::dim)?;
        let inst = Self { dim, operations };
        let deviation = inst
            .total()
            .measured_effect()
            .matrix()
            .max_abs_diff(&Matrix::identity(dim));
        if deviation > tol.eps() {
            return Err(Error::NotChannel { deviation });
        }
        Ok(inst)
    }

    pub(crate) fn from_unchecked(dim: usize, operations: IndexMap<String, Operation>) -> Self {
        Self { dim, operations }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operations.is_empty()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &str> {
        self.operations.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Operation)> {
        self.operations.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn operation(&self, label: &str) -> Result<&Operation> {
        lookup(&self.operations, label)
    }

    /// The total channel `Ī = Σ_x I_x`.
    pub fn total(&self) -> Operation {
        sum_ops(self.dim, self.operations.values())
    }

    /// `I(Δ) = Σ_{x∈Δ} I_x`.
    pub fn operation_of(&self, delta: &[&str]) -> Result<Operation> {
        inst_op(self, delta)
    }
}

fn sum_ops<'a>(dim: usize, ops: impl IntoIterator<Item = &'a Operation>) -> Operation {
    let kraus: Vec<Matrix> = ops.into_iter().flat_map(|op| op.kraus().iter().cloned()).collect();
    if kraus.is_empty() {
        return Operation::zero(dim);
    }
    Operation::from_kraus_unchecked(kraus)
}

/// `A(Δ) = Σ_{x∈Δ} A_x`.
pub fn obs_effect(a: &FiniteObservable, delta: &[&str]) -> Result<Effect> {
    let mut s = Matrix::zeros(a.dim);
    for x in delta {
        s += lookup(&a.effects, x)?.matrix();
    }
    Ok(Effect::from_matrix_unchecked(s))
}

/// `I(Δ) = Σ_{x∈Δ} I_x`; the empty set gives the zero operation.
pub fn inst_op(inst: &FiniteInstrument, delta: &[&str]) -> Result<Operation> {
    let ops = delta
        .iter()
        .map(|x| lookup(&inst.operations, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(sum_ops(inst.dim, ops))
}

/// `Î_x = I_x*(I)` for every outcome.
pub fn measured_observable(inst: &FiniteInstrument) -> FiniteObservable {
    let effects = inst
        .operations
        .iter()
        .map(|(k, op)| (k.clone(), op.measured_effect()))
        .collect();
    FiniteObservable::from_unchecked(inst.dim, effects)
}

/// `x ↦ tr[I_x(ρ)]`.
pub fn distribution(inst: &FiniteInstrument, rho: &State) -> Result<ProbabilityMeasure> {
    check_same_dim(inst.dim, rho.dim())?;
    let weights = inst
        .operations
        .iter()
        .map(|(k, op)| Ok((k.clone(), op.apply(rho.matrix())?.trace().re)))
        .collect::<Result<IndexMap<_, _>>>()?;
    Ok(ProbabilityMeasure::from_unchecked(weights))
}

/// `x ↦ tr(ρA_x)`.
pub fn obs_distribution(a: &FiniteObservable, rho: &State) -> Result<ProbabilityMeasure> {
    check_same_dim(a.dim, rho.dim())?;
    let weights = a
        .effects
        .iter()
        .map(|(k, e)| (k.clone(), rho.matrix().trace_product(e.matrix()).re))
        .collect();
    Ok(ProbabilityMeasure::from_unchecked(weights))
}

fn product_label(x: &str, y: &str) -> String {
    ProductLabel::new(x, y).to_string()
}

/// `(I∘J)_(x,y) = I_x ∘ J_y` (first `I_x`, then `J_y`) over product labels `x⊗y`.
pub fn compose_instruments(i: &FiniteInstrument, j: &FiniteInstrument) -> Result<FiniteInstrument> {
    check_same_dim(i.dim, j.dim)?;
    let mut ops = IndexMap::with_capacity(i.len() * j.len());
    for (x, ix) in &i.operations {
        for (y, jy) in &j.operations {
            ops.insert(product_label(x, y), compose(ix, jy)?);
        }
    }
    Ok(FiniteInstrument::from_unchecked(i.dim, ops))
}

/// `(J|I)_y = Ī ∘ J_y`: apply the total channel of `i`, then `J_y`.
pub fn conditioned_instrument(j: &FiniteInstrument, i: &FiniteInstrument) -> Result<FiniteInstrument> {
    check_same_dim(j.dim, i.dim)?;
    let total = i.total();
    let ops = j
        .operations
        .iter()
        .map(|(y, jy)| Ok((y.clone(), compose(&total, jy)?)))
        .collect::<Result<IndexMap<_, _>>>()?;
    Ok(FiniteInstrument::from_unchecked(i.dim, ops))
}

/// `(Î[I]B)_(x,y) = I_x*(B_y)`.
pub fn seq_product_observables(i: &FiniteInstrument, b: &FiniteObservable) -> Result<FiniteObservable> {
    check_same_dim(i.dim, b.dim)?;
    let mut effects = IndexMap::with_capacity(i.len() * b.len());
    for (x, ix) in &i.operations {
        let dual = ix.dual();
        for (y, by) in &b.effects {
            effects.insert(product_label(x, y), dual.apply_effect(by)?);
        }
    }
    Ok(FiniteObservable::from_unchecked(i.dim, effects))
}

/// `(B|I|Î)_y = Ī*(B_y)`.
pub fn conditioned_observable(b: &FiniteObservable, i: &FiniteInstrument) -> Result<FiniteObservable> {
    check_same_dim(b.dim, i.dim)?;
    let total = i.total();
    let dual = total.dual();
    let effects = b
        .effects
        .iter()
        .map(|(y, by)| Ok((y.clone(), dual.apply_effect(by)?)))
        .collect::<Result<IndexMap<_, _>>>()?;
    Ok(FiniteObservable::from_unchecked(b.dim, effects))
}

/// `I_μ`: outcome `x` has the single Kraus matrix `√μ(x) I`.
pub fn identity_instrument(mu: &ProbabilityMeasure, dim: usize) -> FiniteInstrument {
    let ops = mu
        .iter()
        .map(|(x, w)| {
            let op = Operation::from_kraus_unchecked(vec![Matrix::identity(dim).scale(w.max(0.0).sqrt())]);
            (x.to_string(), op)
        })
        .collect();
    FiniteInstrument::from_unchecked(dim, ops)
}

/// `A_μ`: outcome `x` has effect `μ(x) I`.
pub fn identity_observable(mu: &ProbabilityMeasure, dim: usize) -> FiniteObservable {
    let effects = mu
        .iter()
        .map(|(x, w)| {
            (
                x.to_string(),
                Effect::from_matrix_unchecked(Matrix::identity(dim).scale(w)),
            )
        })
        .collect();
    FiniteObservable::from_unchecked(dim, effects)
}

/// Holevo instrument `ρ ↦ tr(ρA_x) α_x`, one state per outcome.
pub fn holevo_instrument(alphas: &IndexMap<String, State>, a: &FiniteObservable) -> Result<FiniteInstrument> {
    same_labels(&a.effects, alphas)?;
    let ops = a
        .effects
        .iter()
        .map(|(x, ax)| {
            let alpha = &alphas[x];
            check_same_dim(a.dim, alpha.dim())?;
            Ok((x.clone(), holevo(alpha, ax)?))
        })
        .collect::<Result<IndexMap<_, _>>>()?;
    Ok(FiniteInstrument::from_unchecked(a.dim, ops))
}

/// `J_α`: outcome `x` acts as `ρ ↦ tr(ρ) J_x(α)`.
pub fn state_constant_instrument(j: &FiniteInstrument, alpha: &State) -> Result<FiniteInstrument> {
    check_same_dim(j.dim, alpha.dim())?;
    let drop_below = Tolerance::default();
    let ops = j
        .operations
        .iter()
        .map(|(x, jx)| {
            let out = jx.apply(alpha.matrix())?;
            let t = out.trace().re;
            let op = if t > drop_below.eps() {
                let state = normalize(&out, drop_below)?;
                let weight = Effect::from_matrix_unchecked(Matrix::identity(j.dim).scale(t.min(1.0)));
                holevo(&state, &weight)?
            } else {
                Operation::zero(j.dim)
            };
            Ok((x.clone(), op))
        })
        .collect::<Result<IndexMap<_, _>>>()?;
    Ok(FiniteInstrument::from_unchecked(j.dim, ops))
}

/// `L^A_x(ρ) = A_x^{1/2} ρ A_x^{1/2}`.
pub fn luders_instrument(a: &FiniteObservable) -> FiniteInstrument {
    let ops = a.effects.iter().map(|(x, ax)| (x.clone(), luders(ax))).collect();
    FiniteInstrument::from_unchecked(a.dim, ops)
}

/// `Σ λᵢ Iᵢ` outcome by outcome; all instruments need the same outcome set.
pub fn convex_combine_instruments(
    weights: &[f64],
    instruments: &[FiniteInstrument],
    tol: Tolerance,
) -> Result<FiniteInstrument> {
    check_weights(weights, instruments.len(), tol)?;
    let first = &instruments[0];
    for other in &instruments[1..] {
        same_labels(&first.operations, &other.operations)?;
        check_same_dim(first.dim, other.dim)?;
    }
    let ops = first
        .operations
        .keys()
        .map(|x| {
            let parts: Vec<Operation> = instruments.iter().map(|i| i.operations[x].clone()).collect();
            Ok((x.clone(), convex_combine_ops(weights, &parts, tol)?))
        })
        .collect::<Result<IndexMap<_, _>>>()?;
    Ok(FiniteInstrument::from_unchecked(first.dim, ops))
}

/// Verdict of [`is_repeatable`] with the two operator criteria it is built from.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RepeatabilityCheck {
    /// `max_x ‖I_x*(Î_x) − Î_x‖`.
    pub fixed_point_residual: f64,
    /// `max_{x≠y} ‖I_x*(Î_y)‖`, i.e. the off-diagonal outcomes of `(I∘I)^`.
    pub cross_term_residual: f64,
    pub fixed_point_holds: bool,
    pub cross_terms_vanish: bool,
}

impl RepeatabilityCheck {
    pub fn repeatable(&self) -> bool {
        self.fixed_point_holds && self.cross_terms_vanish
    }

    /// Both criteria reached the same verdict.
    pub fn agree(&self) -> bool {
        self.fixed_point_holds == self.cross_terms_vanish
    }
}

/// Operator-level repeatability test: `I_x*(Î_x) = Î_x` for every `x`, cross-checked
/// against `I_x*(Î_y) = 0` for `x ≠ y`.
pub fn is_repeatable(inst: &FiniteInstrument, tol: Tolerance) -> RepeatabilityCheck {
    let measured: Vec<Matrix> = inst
        .operations
        .values()
        .map(|op| op.measured_effect().into_matrix())
        .collect();
    let mut fixed: f64 = 0.0;
    let mut cross: f64 = 0.0;
    for (xi, op) in inst.operations.values().enumerate() {
        let dual = op.dual();
        for (yi, hat) in measured.iter().enumerate() {
            let v = dual.apply(hat).expect("dimensions agree within an instrument");
            if xi == yi {
                fixed = fixed.max(v.max_abs_diff(hat));
            } else {
                cross = cross.max(v.max_norm());
            }
        }
    }
    RepeatabilityCheck {
        fixed_point_residual: fixed,
        cross_term_residual: cross,
        fixed_point_holds: fixed <= tol.eps(),
        cross_terms_vanish: cross <= tol.eps(),
    }
}

/// `tr(α_x A_x) = 1` for every outcome with `A_x ≠ 0`.
pub fn holevo_repeatable(alphas: &IndexMap<String, State>, a: &FiniteObservable, tol: Tolerance) -> Result<bool> {
    same_labels(&a.effects, alphas)?;
    let mut ok = true;
    for (x, ax) in &a.effects {
        let alpha = &alphas[x];
        check_same_dim(a.dim, alpha.dim())?;
        if ax.matrix().max_norm() <= tol.eps() {
            continue;
        }
        let t = alpha.matrix().trace_product(ax.matrix()).re;
        ok &= (t - 1.0).abs() <= tol.eps();
    }
    Ok(ok)
}
