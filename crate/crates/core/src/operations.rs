//! Operations in Kraus form and everything built from them: duals, measured
//! effects, sequential products, Lüders and Holevo operations, commutation
//! and conditioning of effects.
//!
//! Composition order: [`compose(j, k)`](compose) is "first `j`, then `k`",
//! i.e. `compose(j, k)(A) = k(j(A))`. This is the reverse of the usual
//! function-composition convention.

use crate::effects::{check_weights, unit_scale, Effect, State};
use crate::error::{Error, Result};
use crate::linalg::{eig_unchecked, hermitian_eig, sqrt_unchecked, Matrix, Tolerance};

/// A completely positive, trace non-increasing map `A ↦ Σ Cᵢ A Cᵢ†`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operation {
    dim: usize,
    kraus: Vec<Matrix>,
}

impl Operation {
    /// Builds an operation, checking `Σ Cᵢ†Cᵢ ≤ I` within `tol`.
    pub fn new(kraus: Vec<Matrix>, tol: Tolerance) -> Result<Self> {
        let op = Self::checked_shape(kraus)?;
        let e = hermitian_eig(&op.measured_matrix(), tol)?;
        if e.max() > 1.0 + tol.eps() {
            return Err(Error::NotTraceNonIncreasing {
                max_eigenvalue: e.max(),
            });
        }
        Ok(op)
    }

    fn checked_shape(kraus: Vec<Matrix>) -> Result<Self> {
        let dim = kraus
            .first()
            .ok_or_else(|| Error::InvalidInput("an operation needs at least one Kraus matrix".into()))?
            .dim();
        for c in &kraus {
            c.check_dim(dim)?;
            if !c.is_finite() {
                return Err(Error::InvalidMatrix("Kraus matrix has non-finite entries".into()));
            }
        }
        Ok(Self { dim, kraus })
    }

    /// Caller guarantees the Kraus bound.
    pub(crate) fn from_kraus_unchecked(mut kraus: Vec<Matrix>) -> Self {
        let dim = kraus[0].dim();
        if kraus.len() > 1 {
            kraus.retain(|c| c.max_norm() > 0.0);
            if kraus.is_empty() {
                kraus.push(Matrix::zeros(dim));
            }
        }
        Self { dim, kraus }
    }

    /// The identity channel, Kraus list `[I]`.
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kraus: vec![Matrix::identity(dim)],
        }
    }

    /// The zero operation, Kraus list `[0]`.
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            kraus: vec![Matrix::zeros(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[Matrix] {
        &self.kraus
    }

    /// `J(A) = Σ Cᵢ A Cᵢ†`.
    pub fn apply(&self, a: &Matrix) -> Result<Matrix> {
        a.check_dim(self.dim)?;
        let mut out = Matrix::zeros(self.dim);
        for c in &self.kraus {
            out += &(&(c * a) * &c.adjoint());
        }
        Ok(out)
    }

    pub fn dual(&self) -> DualOperation<'_> {
        DualOperation { primal: self }
    }

    /// `J*(A) = Σ Cᵢ† A Cᵢ`.
    pub fn apply_dual(&self, a: &Matrix) -> Result<Matrix> {
        self.dual().apply(a)
    }

    fn measured_matrix(&self) -> Matrix {
        let mut out = Matrix::zeros(self.dim);
        for c in &self.kraus {
            out += &(&c.adjoint() * c);
        }
        out.hermitian_part()
    }

    /// `Ĵ = J*(I)`, the unique effect this operation measures.
    pub fn measured_effect(&self) -> Effect {
        Effect::from_matrix_unchecked(self.measured_matrix())
    }

    /// `J*(I) = I` within `tol`.
    pub fn is_channel(&self, tol: Tolerance) -> bool {
        self.measured_matrix().max_abs_diff(&Matrix::identity(self.dim)) <= tol.eps()
    }

    /// "First `self`, then `then`".
    pub fn compose(&self, then: &Operation) -> Result<Operation> {
        compose(self, then)
    }

    /// `λJ` for `λ ∈ [0, 1]`, Kraus list `√λ Cᵢ`.
    pub fn scaled(&self, lambda: f64) -> Result<Operation> {
        let s = unit_scale(lambda)?.sqrt();
        Ok(Self {
            dim: self.dim,
            kraus: self.kraus.iter().map(|c| c.scale(s)).collect(),
        })
    }

    /// Choi matrix `Σ_ij E_ij ⊗ J(E_ij)` (dimension `d²`).
    ///
    /// Entry `[(i·d + k, j·d + l)]` is `J(E_ij)[k, l]`. Equivalently, with the
    /// column-stacking vectorization `vec(C)[i·d + k] = C[k, i]`, the Choi matrix
    /// is `Σ vec(Cₘ) vec(Cₘ)†` over the Kraus list.
    pub fn choi(&self) -> Matrix {
        let d = self.dim;
        let mut out = Matrix::zeros(d * d);
        for c in &self.kraus {
            let v: Vec<_> = (0..d * d).map(|r| c[(r % d, r / d)]).collect();
            out += &Matrix::outer(&v, &v);
        }
        out
    }

    /// Largest entrywise difference between the two maps, measured on the Choi matrices.
    pub fn map_distance(&self, other: &Operation) -> Result<f64> {
        other.kraus[0].check_dim(self.dim)?;
        Ok(self.choi().max_abs_diff(&other.choi()))
    }
}

/// The dual `J*` of an operation: a view over the primal Kraus list, applied as `Σ Cᵢ† A Cᵢ`.
#[derive(Debug, Clone, Copy)]
pub struct DualOperation<'a> {
    primal: &'a Operation,
}

impl DualOperation<'_> {
    pub fn dim(&self) -> usize {
        self.primal.dim
    }

    /// The same Kraus list as the primal.
    pub fn kraus(&self) -> &[Matrix] {
        &self.primal.kraus
    }

    pub fn apply(&self, a: &Matrix) -> Result<Matrix> {
        a.check_dim(self.dim())?;
        let mut out = Matrix::zeros(self.dim());
        for c in self.kraus() {
            out += &(&(&c.adjoint() * a) * c);
        }
        Ok(out)
    }

    /// `J*(a)` of an effect, which is again an effect.
    pub fn apply_effect(&self, a: &Effect) -> Result<Effect> {
        Ok(Effect::from_matrix_unchecked(self.apply(a.matrix())?.hermitian_part()))
    }
}

/// `J ∘ K`: first `j`, then `k`. Kraus list `{Dⱼ Cᵢ}`.
pub fn compose(j: &Operation, k: &Operation) -> Result<Operation> {
    k.kraus[0].check_dim(j.dim)?;
    let mut kraus = Vec::with_capacity(j.kraus.len() * k.kraus.len());
    for c in &j.kraus {
        for d in &k.kraus {
            kraus.push(d * c);
        }
    }
    Ok(Operation::from_kraus_unchecked(kraus))
}

/// `Σ λᵢ Jᵢ`, Kraus list `{√λᵢ C}`.
pub fn convex_combine_ops(weights: &[f64], ops: &[Operation], tol: Tolerance) -> Result<Operation> {
    check_weights(weights, ops.len(), tol)?;
    let dim = ops[0].dim;
    let mut kraus = Vec::new();
    for (w, op) in weights.iter().zip(ops) {
        op.kraus[0].check_dim(dim)?;
        let s = w.max(0.0).sqrt();
        kraus.extend(op.kraus.iter().map(|c| c.scale(s)));
    }
    Ok(Operation::from_kraus_unchecked(kraus))
}

/// `J + K`, defined when the concatenated Kraus list is still trace non-increasing.
pub fn add_ops(j: &Operation, k: &Operation, tol: Tolerance) -> Result<Operation> {
    k.kraus[0].check_dim(j.dim)?;
    let kraus = j.kraus.iter().chain(&k.kraus).cloned().collect();
    let sum = Operation::new(kraus, tol)?;
    Ok(Operation::from_kraus_unchecked(sum.kraus))
}

/// `Ĵ[J]b = J*(b)`: first measure `Ĵ` with `J`, then `b`.
pub fn seq_product_effects(j: &Operation, b: &Effect) -> Result<Effect> {
    j.dual().apply_effect(b)
}

/// `a □ b = a^{1/2} b a^{1/2}`.
pub fn standard_seq_product(a: &Effect, b: &Effect) -> Result<Effect> {
    b.matrix().check_dim(a.dim())?;
    let r = sqrt_unchecked(a.matrix());
    Ok(Effect::from_matrix_unchecked(
        (&(&r * b.matrix()) * &r).hermitian_part(),
    ))
}

/// Lüders operation `L^a(A) = a^{1/2} A a^{1/2}`.
pub fn luders(a: &Effect) -> Operation {
    Operation {
        dim: a.dim(),
        kraus: vec![sqrt_unchecked(a.matrix())],
    }
}

/// Holevo operation `H_(α,a)(ρ) = tr(ρa) α`.
///
/// With `α = Σ λᵢ|uᵢ⟩⟨uᵢ|` and `a = Σ μⱼ|vⱼ⟩⟨vⱼ|`, the Kraus list is
/// `√(λᵢμⱼ) |uᵢ⟩⟨vⱼ|` with terms `λᵢμⱼ ≤ eps` dropped.
pub fn holevo(alpha: &State, a: &Effect) -> Result<Operation> {
    let dim = alpha.dim();
    a.matrix().check_dim(dim)?;
    let drop_below = Tolerance::default().eps();
    let ea = eig_unchecked(alpha.matrix());
    let eb = eig_unchecked(a.matrix());
    let mut kraus = Vec::new();
    for (i, &lam) in ea.values.iter().enumerate() {
        for (j, &mu) in eb.values.iter().enumerate() {
            let w = lam.max(0.0) * mu.max(0.0);
            if w <= drop_below {
                continue;
            }
            let u = ea.vectors.column(i);
            let v = eb.vectors.column(j);
            kraus.push(Matrix::outer(&u, &v).scale(w.sqrt()));
        }
    }
    if kraus.is_empty() {
        return Ok(Operation::zero(dim));
    }
    Ok(Operation { dim, kraus })
}

fn check_measures(op: &Operation, effect: &Matrix, what: &str, tol: Tolerance) -> Result<()> {
    effect.check_dim(op.dim)?;
    let dev = op.measured_matrix().max_abs_diff(effect);
    if dev > tol.eps() {
        return Err(Error::WitnessMismatch(format!(
            "{what} does not measure the given effect (max deviation {dev:e})"
        )));
    }
    Ok(())
}

/// `a[J]b = b[K]a`, i.e. `J*(b) = K*(a)`, where `Ĵ = a` and `K̂ = b` are required.
pub fn commute_relative(a: &Effect, b: &Effect, j: &Operation, k: &Operation, tol: Tolerance) -> Result<bool> {
    b.matrix().check_dim(a.dim())?;
    check_measures(j, a.matrix(), "J", tol)?;
    check_measures(k, b.matrix(), "K", tol)?;
    let lhs = j.apply_dual(b.matrix())?;
    let rhs = k.apply_dual(a.matrix())?;
    Ok(lhs.max_abs_diff(&rhs) <= tol.eps())
}

/// Commutation relative to Lüders operations: `ab = ba`.
pub fn commute_luders(a: &Effect, b: &Effect, tol: Tolerance) -> Result<bool> {
    b.matrix().check_dim(a.dim())?;
    Ok(a.matrix().commutator(b.matrix()).max_norm() <= tol.eps())
}

/// `(b|J,K|a) = a[J]b + a′[K]b = J*(b) + K*(b)`, requiring `K̂ = (Ĵ)′`.
pub fn conditioned_effect(b: &Effect, j: &Operation, k: &Operation, tol: Tolerance) -> Result<Effect> {
    b.matrix().check_dim(j.dim)?;
    let a_comp = j.measured_effect().complement();
    check_measures(k, a_comp.matrix(), "K", tol)?;
    let m = &j.apply_dual(b.matrix())? + &k.apply_dual(b.matrix())?;
    Ok(Effect::from_matrix_unchecked(m.hermitian_part()))
}

/// `b = (b|J,K|a)` within `tol`.
pub fn not_influenced(b: &Effect, j: &Operation, k: &Operation, tol: Tolerance) -> Result<bool> {
    let c = conditioned_effect(b, j, k, tol)?;
    Ok(c.matrix().max_abs_diff(b.matrix()) <= tol.eps())
}

/// Recovers a Kraus list from a Choi matrix in the layout of [`Operation::choi`].
pub fn kraus_from_choi(choi: &Matrix, tol: Tolerance) -> Result<Operation> {
    let n = choi.dim();
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(Error::InvalidInput(format!(
            "Choi matrix dimension {n} is not a perfect square"
        )));
    }
    let e = hermitian_eig(choi, tol)?;
    if e.min() < -tol.eps() {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: e.min(),
        });
    }
    let norm = e.values.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let floor = 64.0 * f64::EPSILON * norm.max(1.0);
    let mut kraus = Vec::new();
    for (m, &lam) in e.values.iter().enumerate() {
        if lam <= floor {
            continue;
        }
        let s = lam.sqrt();
        kraus.push(Matrix::from_fn(d, |k, i| e.vectors[(i * d + k, m)] * s));
    }
    if kraus.is_empty() {
        kraus.push(Matrix::zeros(d));
    }
    Operation::new(kraus, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effects::normalize;
    use crate::linalg::C64;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn eff(m: Matrix) -> Effect {
        Effect::new(m, tol()).unwrap()
    }

    fn state(m: Matrix) -> State {
        State::new(m, tol()).unwrap()
    }

    fn plus() -> Matrix {
        Matrix::real(&[&[0.5, 0.5], &[0.5, 0.5]])
    }

    #[test]
    fn new_rejects_trace_increasing() {
        let c = Matrix::identity(2).scale(1.1);
        assert!(matches!(
            Operation::new(vec![c], tol()),
            Err(Error::NotTraceNonIncreasing { .. })
        ));
        assert!(Operation::new(vec![], tol()).is_err());
        assert!(matches!(
            Operation::new(vec![Matrix::identity(2), Matrix::zeros(3)], tol()),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn apply_examples() {
        let rho = state(Matrix::real(&[&[0.7, 0.2], &[0.2, 0.3]]));
        assert_eq!(Operation::identity(2).apply(rho.matrix()).unwrap(), *rho.matrix());

        let l = luders(&eff(Matrix::diag(&[1.0, 0.0])));
        let out = l.apply(State::maximally_mixed(2).matrix()).unwrap();
        assert!(out.max_abs_diff(&Matrix::diag(&[0.5, 0.0])) < 1e-15);

        let alpha = state(Matrix::diag(&[0.2, 0.8]));
        let a = eff(Matrix::diag(&[0.6, 0.3]));
        let h = holevo(&alpha, &a).unwrap();
        let out = h.apply(rho.matrix()).unwrap();
        let p = rho.matrix().trace_product(a.matrix()).re;
        assert!(out.max_abs_diff(&alpha.matrix().scale(p)) < 1e-14);
    }

    #[test]
    fn dual_examples() {
        let a = eff(Matrix::real(&[&[0.6, 0.2], &[0.2, 0.3]]));
        let b = eff(Matrix::diag(&[0.9, 0.1]));
        let id = Operation::identity(2);
        assert_eq!(id.apply_dual(a.matrix()).unwrap(), *a.matrix());

        let l = luders(&a);
        let r = sqrt_unchecked(a.matrix());
        let expected = &(&r * b.matrix()) * &r;
        assert!(l.apply_dual(b.matrix()).unwrap().max_abs_diff(&expected) < 1e-14);
        assert!(l.apply(b.matrix()).unwrap().max_abs_diff(&expected) < 1e-14);

        let alpha = state(Matrix::real(&[&[0.5, 0.25], &[0.25, 0.5]]));
        let h = holevo(&alpha, &a).unwrap();
        let tr = alpha.matrix().trace_product(b.matrix()).re;
        assert!(h.apply_dual(b.matrix()).unwrap().max_abs_diff(&a.matrix().scale(tr)) < 1e-14);
    }

    #[test]
    fn measured_effect_examples() {
        assert_eq!(*Operation::identity(3).measured_effect().matrix(), Matrix::identity(3));
        let a = eff(Matrix::real(&[&[0.6, 0.2], &[0.2, 0.3]]));
        assert!(luders(&a).measured_effect().matrix().max_abs_diff(a.matrix()) < 1e-14);
        for alpha in [State::maximally_mixed(2), state(Matrix::diag(&[1.0, 0.0]))] {
            let h = holevo(&alpha, &a).unwrap();
            assert!(h.measured_effect().matrix().max_abs_diff(a.matrix()) < 1e-14);
        }
    }

    #[test]
    fn channel_examples() {
        assert!(Operation::identity(2).is_channel(tol()));
        assert!(!luders(&eff(Matrix::diag(&[0.5, 0.5]))).is_channel(tol()));
        let alpha = state(Matrix::diag(&[0.3, 0.7]));
        assert!(holevo(&alpha, &Effect::identity(2)).unwrap().is_channel(tol()));
    }

    #[test]
    fn compose_examples() {
        let a = eff(Matrix::real(&[&[0.6, 0.2], &[0.2, 0.3]]));
        let b = eff(Matrix::diag(&[0.9, 0.4]));
        let rho = state(Matrix::real(&[&[0.7, 0.1], &[0.1, 0.3]]));

        let k = luders(&b);
        let ik = compose(&Operation::identity(2), &k).unwrap();
        assert!(ik.map_distance(&k).unwrap() < 1e-15);

        let lab = compose(&luders(&a), &luders(&b)).unwrap();
        let r = sqrt_unchecked(a.matrix());
        let expected = &(&r * b.matrix()) * &r;
        assert!(lab.measured_effect().matrix().max_abs_diff(&expected) < 1e-14);

        // H_(β,b) ∘ H_(α,a) = H_(α, tr(βa) b)
        let alpha = state(Matrix::diag(&[0.2, 0.8]));
        let beta = state(Matrix::real(&[&[0.5, 0.5], &[0.5, 0.5]]));
        let hb = holevo(&beta, &b).unwrap();
        let ha = holevo(&alpha, &a).unwrap();
        let lhs = compose(&hb, &ha).unwrap();
        let s = beta.matrix().trace_product(a.matrix()).re;
        let rhs = holevo(&alpha, &b.scaled(s).unwrap()).unwrap();
        assert!(
            lhs.apply(rho.matrix())
                .unwrap()
                .max_abs_diff(&rhs.apply(rho.matrix()).unwrap())
                < 1e-14
        );
        assert!(lhs.map_distance(&rhs).unwrap() < 1e-14);

        // order: first J then K
        let x = Matrix::real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let flip = Operation::new(vec![x], tol()).unwrap();
        let p0 = luders(&eff(Matrix::diag(&[1.0, 0.0])));
        let seq = compose(&flip, &p0).unwrap();
        let out = seq.apply(&Matrix::diag(&[1.0, 0.0])).unwrap();
        assert!(out.max_abs_diff(&Matrix::zeros(2)) < 1e-15);
    }

    #[test]
    fn convex_and_add_examples() {
        let a = eff(Matrix::real(&[&[0.6, 0.2], &[0.2, 0.3]]));
        let j = luders(&a);
        let one = convex_combine_ops(&[1.0], std::slice::from_ref(&j), tol()).unwrap();
        assert!(one.map_distance(&j).unwrap() < 1e-15);

        let mix = convex_combine_ops(&[0.5, 0.5], &[luders(&a), luders(&a.complement())], tol()).unwrap();
        assert!(mix.measured_effect().matrix().max_abs_diff(&Matrix::diag(&[0.5, 0.5])) < 1e-14);

        let z = add_ops(&j, &Operation::zero(2), tol()).unwrap();
        assert!(z.map_distance(&j).unwrap() < 1e-15);

        let p = eff(Matrix::diag(&[1.0, 0.0]));
        let sum = add_ops(&luders(&p), &luders(&p.complement()), tol()).unwrap();
        assert!(sum.is_channel(tol()));

        let big = eff(Matrix::diag(&[0.8, 0.8]));
        assert!(matches!(
            add_ops(&luders(&big), &luders(&big), tol()),
            Err(Error::NotTraceNonIncreasing { .. })
        ));
        assert!(matches!(
            convex_combine_ops(&[0.7, 0.7], &[j.clone(), j], tol()),
            Err(Error::BadWeights(_))
        ));
    }

    #[test]
    fn seq_product_examples() {
        let a = eff(Matrix::real(&[&[0.6, 0.2], &[0.2, 0.3]]));
        let b = eff(Matrix::real(&[&[0.4, -0.1], &[-0.1, 0.8]]));
        let j = luders(&a);
        let at_i = seq_product_effects(&j, &Effect::identity(2)).unwrap();
        assert!(at_i.matrix().max_abs_diff(a.matrix()) < 1e-14);
        let lab = seq_product_effects(&j, &b).unwrap();
        let box_ab = standard_seq_product(&a, &b).unwrap();
        assert!(lab.matrix().max_abs_diff(box_ab.matrix()) < 1e-14);

        let alpha = state(Matrix::diag(&[1.0, 0.0]));
        let h = holevo(&alpha, &Effect::identity(2)).unwrap();
        let ia = seq_product_effects(&h, &a).unwrap();
        assert!(ia.matrix().max_abs_diff(&Matrix::identity(2).scale(0.6)) < 1e-14);
        assert!(ia.matrix().max_abs_diff(a.matrix()) > 0.1);
    }

    #[test]
    fn standard_seq_product_examples() {
        let a = eff(Matrix::real(&[&[0.6, 0.2], &[0.2, 0.3]]));
        assert!(
            standard_seq_product(&a, &Effect::identity(2))
                .unwrap()
                .matrix()
                .max_abs_diff(a.matrix())
                < 1e-14
        );
        let p = eff(Matrix::diag(&[1.0, 0.0]));
        let r = standard_seq_product(&p, &eff(plus())).unwrap();
        assert!(r.matrix().max_abs_diff(&Matrix::diag(&[0.5, 0.0])) < 1e-15);
        assert!(
            standard_seq_product(&Effect::identity(2), &a)
                .unwrap()
                .matrix()
                .max_abs_diff(a.matrix())
                < 1e-15
        );
    }

    #[test]
    fn luders_examples() {
        assert!(
            luders(&Effect::identity(2))
                .map_distance(&Operation::identity(2))
                .unwrap()
                < 1e-15
        );
        let out = luders(&eff(Matrix::diag(&[1.0, 0.0]))).apply(&plus()).unwrap();
        assert!(out.max_abs_diff(&Matrix::diag(&[0.5, 0.0])) < 1e-15);
    }

    #[test]
    fn holevo_examples() {
        let alpha = state(Matrix::real(&[&[0.3, 0.1], &[0.1, 0.7]]));
        let rho = state(plus());
        let h = holevo(&alpha, &Effect::identity(2)).unwrap();
        assert!(h.apply(rho.matrix()).unwrap().max_abs_diff(alpha.matrix()) < 1e-14);
        let z = holevo(&alpha, &Effect::zero(2)).unwrap();
        assert!(z.map_distance(&Operation::zero(2)).unwrap() < 1e-15);
        assert!(holevo(&alpha, &Effect::zero(3)).is_err());
    }

    #[test]
    fn commute_relative_examples() {
        let a = eff(Matrix::real(&[&[0.6, 0.2], &[0.2, 0.3]]));
        let j = luders(&a);
        assert!(commute_relative(&a, &Effect::zero(2), &j, &Operation::zero(2), tol()).unwrap());
        assert!(commute_relative(&a, &Effect::identity(2), &j, &Operation::identity(2), tol()).unwrap());
        let d1 = eff(Matrix::diag(&[0.2, 0.7]));
        let d2 = eff(Matrix::diag(&[0.9, 0.5]));
        assert!(commute_relative(&d1, &d2, &luders(&d1), &luders(&d2), tol()).unwrap());
        assert!(matches!(
            commute_relative(&a, &d1, &luders(&d2), &luders(&d1), tol()),
            Err(Error::WitnessMismatch(_))
        ));
    }

    #[test]
    fn commute_luders_examples() {
        let d1 = eff(Matrix::diag(&[0.2, 0.7]));
        let d2 = eff(Matrix::diag(&[0.9, 0.5]));
        assert!(commute_luders(&d1, &d2, tol()).unwrap());
        assert!(!commute_luders(&eff(Matrix::diag(&[1.0, 0.0])), &eff(plus()), tol()).unwrap());
        let a = eff(Matrix::real(&[&[0.6, 0.2], &[0.2, 0.3]]));
        assert!(commute_luders(&a, &a.complement(), tol()).unwrap());
        let p = eff(Matrix::diag(&[1.0, 0.0]));
        let q = eff(plus());
        assert_eq!(
            commute_luders(&p, &q, tol()).unwrap(),
            commute_relative(&p, &q, &luders(&p), &luders(&q), tol()).unwrap()
        );
    }

    #[test]
    fn conditioned_effect_examples() {
        let p = eff(Matrix::diag(&[1.0, 0.0]));
        let b = eff(Matrix::diag(&[0.3, 0.6]));
        let c = conditioned_effect(&b, &luders(&p), &luders(&p.complement()), tol()).unwrap();
        assert!(c.matrix().max_abs_diff(b.matrix()) < 1e-15);
        assert!(not_influenced(&b, &luders(&p), &luders(&p.complement()), tol()).unwrap());
        assert!(!not_influenced(&eff(plus()), &luders(&p), &luders(&p.complement()), tol()).unwrap());

        let a = eff(Matrix::real(&[&[0.6, 0.2], &[0.2, 0.3]]));
        let alpha = state(Matrix::diag(&[0.9, 0.1]));
        let beta = state(Matrix::real(&[&[0.4, 0.1], &[0.1, 0.6]]));
        let hj = holevo(&alpha, &a).unwrap();
        let hk = holevo(&beta, &a.complement()).unwrap();
        let b = eff(Matrix::real(&[&[0.5, 0.3], &[0.3, 0.5]]));
        let c = conditioned_effect(&b, &hj, &hk, tol()).unwrap();
        let diff = alpha.matrix() - beta.matrix();
        let expected = &a.matrix().scale(diff.trace_product(b.matrix()).re)
            + &Matrix::identity(2).scale(beta.matrix().trace_product(b.matrix()).re);
        assert!(c.matrix().max_abs_diff(&expected) < 1e-14);

        // (I|J,K|a) = I
        let c = conditioned_effect(&Effect::identity(2), &hj, &hk, tol()).unwrap();
        assert!(c.matrix().max_abs_diff(&Matrix::identity(2)) < 1e-14);

        // equal α, β: not influenced iff b = tr(αb) I
        let hk_same = holevo(&alpha, &a.complement()).unwrap();
        assert!(not_influenced(&eff(Matrix::identity(2).scale(0.4)), &hj, &hk_same, tol()).unwrap());
        assert!(!not_influenced(&b, &hj, &hk_same, tol()).unwrap());

        assert!(matches!(
            conditioned_effect(&b, &hj, &hj, tol()),
            Err(Error::WitnessMismatch(_))
        ));
    }

    #[test]
    fn choi_round_trips() {
        let id = Operation::identity(2);
        let back = kraus_from_choi(&id.choi(), tol()).unwrap();
        assert_eq!(back.kraus().len(), 1);
        assert!(back.map_distance(&id).unwrap() < 1e-14);

        let l = luders(&eff(Matrix::diag(&[1.0, 0.0])));
        // Choi built independently from the action on matrix units.
        let d = 2;
        let mut choi = Matrix::zeros(4);
        for i in 0..d {
            for j in 0..d {
                choi += &Matrix::unit(d, i, j).kron(&l.apply(&Matrix::unit(d, i, j)).unwrap());
            }
        }
        assert!(choi.max_abs_diff(&l.choi()) < 1e-15);
        let back = kraus_from_choi(&choi, tol()).unwrap();
        assert_eq!(back.kraus().len(), 1);
        let rho = plus();
        assert!(back.apply(&rho).unwrap().max_abs_diff(&l.apply(&rho).unwrap()) < 1e-14);

        let mut bad = Operation::identity(2).choi();
        bad += &Matrix::diag(&[0.0, -0.1, 0.0, 0.0]);
        assert!(matches!(
            kraus_from_choi(&bad, tol()),
            Err(Error::NotCompletelyPositive { .. })
        ));
        let big = Operation::identity(2).choi().scale(1.5);
        assert!(matches!(
            kraus_from_choi(&big, tol()),
            Err(Error::NotTraceNonIncreasing { .. })
        ));
    }

    #[test]
    fn kraus_from_choi_complex_operation() {
        let c1 = Matrix::from_rows(vec![
            vec![C64::new(0.5, 0.1), C64::new(0.0, 0.3)],
            vec![C64::new(0.2, 0.0), C64::new(0.1, -0.4)],
        ])
        .unwrap();
        let c2 = Matrix::real(&[&[0.3, 0.0], &[0.1, 0.2]]);
        let op = Operation::new(vec![c1, c2], tol()).unwrap();
        let back = kraus_from_choi(&op.choi(), tol()).unwrap();
        assert!(back.map_distance(&op).unwrap() < 1e-14);
        let rho = normalize(&Matrix::real(&[&[2.0, 1.0], &[1.0, 1.0]]), tol()).unwrap();
        assert!(
            back.apply(rho.matrix())
                .unwrap()
                .max_abs_diff(&op.apply(rho.matrix()).unwrap())
                < 1e-14
        );
    }
}
