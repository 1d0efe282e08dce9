//! Effects, states and finite probability measures.

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::label::{validate_label, ProductLabel};
use crate::linalg::{eig_unchecked, hermitian_eig, Matrix, Tolerance};

/// An operator `a` with `0 ≤ a ≤ I`: a yes/no measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect(Matrix);

impl Effect {
    /// Validates Hermiticity and `0 ≤ m ≤ I` within `tol`.
    pub fn new(m: Matrix, tol: Tolerance) -> Result<Self> {
        let e = hermitian_eig(&m, tol)?;
        if e.min() < -tol.eps() || e.max() > 1.0 + tol.eps() {
            return Err(Error::NotEffect {
                min: e.min(),
                max: e.max(),
            });
        }
        Ok(Self(m.hermitian_part()))
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix) -> Self {
        Self(m)
    }

    pub fn zero(dim: usize) -> Self {
        Self(Matrix::zeros(dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(Matrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// `a′ = I - a`.
    pub fn complement(&self) -> Effect {
        Self(&Matrix::identity(self.dim()) - &self.0)
    }

    /// `λa` for `λ ∈ [0, 1]`.
    pub fn scaled(&self, lambda: f64) -> Result<Effect> {
        Ok(Self(self.0.scale(unit_scale(lambda)?)))
    }

    /// `a ⊥ b`: `a + b` is again an effect, equivalently `b ≤ a′`.
    pub fn is_perp(&self, other: &Effect, tol: Tolerance) -> Result<bool> {
        other.0.check_dim(self.dim())?;
        let sum = &self.0 + &other.0;
        Ok(eig_unchecked(&sum).max() <= 1.0 + tol.eps())
    }

    /// Sharp means projection: `‖a² - a‖_max ≤ eps`.
    pub fn is_sharp(&self, tol: Tolerance) -> bool {
        (&self.0 * &self.0).max_abs_diff(&self.0) <= tol.eps()
    }

    /// `a + b`, provided `a ⊥ b`.
    pub fn sum(&self, other: &Effect, tol: Tolerance) -> Result<Effect> {
        Effect::new(&self.0 + &other.0, tol)
    }
}

/// A density operator: positive with unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct State(Matrix);

impl State {
    pub fn new(m: Matrix, tol: Tolerance) -> Result<Self> {
        let e = hermitian_eig(&m, tol)?;
        if e.min() < -tol.eps() {
            return Err(Error::NotState(format!("min eigenvalue {:e} is negative", e.min())));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol.eps() || tr.im.abs() > tol.eps() {
            return Err(Error::NotState(format!("trace {} is not 1", tr)));
        }
        Ok(Self(m.hermitian_part()))
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix) -> Self {
        Self(m)
    }

    /// `I / d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self(Matrix::identity(dim).scale(1.0 / dim as f64))
    }

    /// `|ψ⟩⟨ψ|` for a nonzero vector, normalized.
    pub fn pure(psi: &[num_complex::Complex64]) -> Result<Self> {
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if n <= 0.0 || !n.is_finite() {
            return Err(Error::ZeroTrace { trace: n });
        }
        Ok(Self(Matrix::outer(psi, psi).scale(1.0 / n)))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }
}

/// `P_ρ(a) = tr(ρa)`.
pub fn prob(rho: &State, a: &Effect) -> Result<f64> {
    a.matrix().check_dim(rho.dim())?;
    Ok(rho.matrix().trace_product(a.matrix()).re)
}

/// `α̃ = α / tr(α)` for a positive `α` with nonzero trace.
pub fn normalize(alpha: &Matrix, tol: Tolerance) -> Result<State> {
    let e = hermitian_eig(alpha, tol)?;
    if e.min() < -tol.eps() {
        return Err(Error::NotPsd {
            min_eigenvalue: e.min(),
        });
    }
    let tr = alpha.trace().re;
    if tr <= tol.eps() {
        return Err(Error::ZeroTrace { trace: tr });
    }
    Ok(State(alpha.hermitian_part().scale(1.0 / tr)))
}

/// Validates a scale factor in `[0, 1]`, absorbing roundoff within the default tolerance.
pub(crate) fn unit_scale(lambda: f64) -> Result<f64> {
    let eps = Tolerance::default().eps();
    if !(-eps..=1.0 + eps).contains(&lambda) {
        return Err(Error::BadWeights(format!("scale factor {lambda} outside [0, 1]")));
    }
    Ok(lambda.clamp(0.0, 1.0))
}

pub(crate) fn check_weights(weights: &[f64], count: usize, tol: Tolerance) -> Result<()> {
    if weights.len() != count {
        return Err(Error::BadWeights(format!(
            "{} weights for {count} items",
            weights.len()
        )));
    }
    if count == 0 {
        return Err(Error::BadWeights("empty convex combination".into()));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < -tol.eps()) {
        return Err(Error::BadWeights(format!("weight {w} is negative")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > tol.eps() {
        return Err(Error::BadWeights(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

fn combine(weights: &[f64], items: &[&Matrix], tol: Tolerance) -> Result<Matrix> {
    check_weights(weights, items.len(), tol)?;
    let dim = items[0].dim();
    let mut acc = Matrix::zeros(dim);
    for (w, m) in weights.iter().zip(items) {
        m.check_dim(dim)?;
        acc += &m.scale(w.max(0.0));
    }
    Ok(acc)
}

/// `Σ λᵢ aᵢ`.
pub fn convex_combine_effects(weights: &[f64], items: &[Effect], tol: Tolerance) -> Result<Effect> {
    let ms: Vec<&Matrix> = items.iter().map(Effect::matrix).collect();
    Ok(Effect(combine(weights, &ms, tol)?))
}

/// `Σ λᵢ ρᵢ`.
pub fn convex_combine_states(weights: &[f64], items: &[State], tol: Tolerance) -> Result<State> {
    let ms: Vec<&Matrix> = items.iter().map(State::matrix).collect();
    Ok(State(combine(weights, &ms, tol)?))
}

/// A probability measure on a finite, ordered outcome set.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMeasure {
    weights: IndexMap<String, f64>,
}

impl ProbabilityMeasure {
    pub fn new(weights: impl IntoIterator<Item = (String, f64)>, tol: Tolerance) -> Result<Self> {
        let mut map = IndexMap::new();
        for (label, w) in weights {
            validate_label(&label)?;
            if map.insert(label.clone(), w).is_some() {
                return Err(Error::InvalidLabel(format!("{label} (duplicate)")));
            }
        }
        let ws: Vec<f64> = map.values().copied().collect();
        check_weights(&ws, ws.len(), tol)?;
        Ok(Self { weights: map })
    }

    pub(crate) fn from_unchecked(weights: IndexMap<String, f64>) -> Self {
        Self { weights }
    }

    pub fn point_mass(label: &str) -> Result<Self> {
        Self::new([(label.to_string(), 1.0)], Tolerance::default())
    }

    pub fn uniform(labels: &[&str]) -> Result<Self> {
        let w = 1.0 / labels.len().max(1) as f64;
        Self::new(labels.iter().map(|l| (l.to_string(), w)), Tolerance::default())
    }

    pub fn weight(&self, label: &str) -> Option<f64> {
        self.weights.get(label).copied()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &str> {
        self.weights.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.weights.values().sum()
    }

    /// `μ(Δ)`.
    pub fn measure(&self, delta: &[&str]) -> Result<f64> {
        delta
            .iter()
            .map(|l| self.weight(l).ok_or_else(|| Error::UnknownLabel(l.to_string())))
            .sum()
    }

    /// Product measure `μ × ν` on product labels.
    pub fn product(&self, other: &ProbabilityMeasure) -> ProbabilityMeasure {
        let mut map = IndexMap::new();
        for (x, p) in self.iter() {
            for (y, q) in other.iter() {
                map.insert(ProductLabel::new(x, y).to_string(), p * q);
            }
        }
        Self { weights: map }
    }

    /// `max_x |μ(x) - ν(x)|`, or `None` when the outcome sets differ.
    pub fn max_abs_diff(&self, other: &ProbabilityMeasure) -> Option<f64> {
        if self.len() != other.len() {
            return None;
        }
        self.iter()
            .map(|(l, p)| other.weight(l).map(|q| (p - q).abs()))
            .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn eff(vals: &[f64]) -> Effect {
        Effect::new(Matrix::diag(vals), tol()).unwrap()
    }

    #[test]
    fn effect_validation() {
        assert!(Effect::new(Matrix::diag(&[0.0, 1.0]), tol()).is_ok());
        assert!(matches!(
            Effect::new(Matrix::diag(&[1.2, 0.0]), tol()),
            Err(Error::NotEffect { .. })
        ));
        assert!(matches!(
            Effect::new(Matrix::diag(&[-0.1, 0.5]), tol()),
            Err(Error::NotEffect { .. })
        ));
        let skew = Matrix::real(&[&[0.5, 0.1], &[0.0, 0.5]]);
        assert!(matches!(Effect::new(skew, tol()), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(Effect::zero(2).complement(), Effect::identity(2));
        assert_eq!(eff(&[1.0, 0.0]).complement(), eff(&[0.0, 1.0]));
        let c = eff(&[0.3, 0.7]).complement();
        assert!(c.matrix().max_abs_diff(&Matrix::diag(&[0.7, 0.3])) < 1e-15);
        let a = eff(&[0.3, 0.7]);
        assert!(a.complement().complement().matrix().max_abs_diff(a.matrix()) < 1e-15);
    }

    #[test]
    fn perp_examples() {
        let a = eff(&[0.4, 0.9]);
        assert!(Effect::zero(2).is_perp(&a, tol()).unwrap());
        assert!(!Effect::identity(2).is_perp(&a, tol()).unwrap());
        assert!(Effect::identity(2).is_perp(&Effect::zero(2), tol()).unwrap());
        assert!(!eff(&[0.6, 0.2]).is_perp(&eff(&[0.5, 0.5]), tol()).unwrap());
        assert!(Effect::zero(2).is_perp(&Effect::zero(3), tol()).is_err());
    }

    #[test]
    fn prob_examples() {
        let rho = State::new(Matrix::diag(&[0.25, 0.75]), tol()).unwrap();
        assert!((prob(&rho, &Effect::identity(2)).unwrap() - 1.0).abs() < 1e-15);
        let rho = State::new(Matrix::diag(&[1.0, 0.0]), tol()).unwrap();
        assert_eq!(prob(&rho, &eff(&[0.0, 1.0])).unwrap(), 0.0);
        let mixed = State::maximally_mixed(2);
        assert!((prob(&mixed, &eff(&[1.0, 0.0])).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn normalize_examples() {
        let s = normalize(&Matrix::diag(&[2.0, 2.0]), tol()).unwrap();
        assert!(s.matrix().max_abs_diff(&Matrix::diag(&[0.5, 0.5])) < 1e-15);
        let s = normalize(&Matrix::diag(&[3.0, 1.0]), tol()).unwrap();
        assert!(s.matrix().max_abs_diff(&Matrix::diag(&[0.75, 0.25])) < 1e-15);
        let rho = State::new(Matrix::diag(&[0.4, 0.6]), tol()).unwrap();
        assert_eq!(normalize(rho.matrix(), tol()).unwrap(), rho);
        assert!(matches!(
            normalize(&Matrix::zeros(2), tol()),
            Err(Error::ZeroTrace { .. })
        ));
        assert!(matches!(
            normalize(&Matrix::diag(&[1.0, -0.5]), tol()),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn sharpness() {
        assert!(eff(&[1.0, 0.0]).is_sharp(tol()));
        assert!(!eff(&[0.5, 0.5]).is_sharp(tol()));
        assert!(Effect::identity(3).is_sharp(tol()));
    }

    #[test]
    fn convex_examples() {
        let a = eff(&[0.2, 0.9]);
        assert_eq!(
            convex_combine_effects(&[1.0], std::slice::from_ref(&a), tol()).unwrap(),
            a
        );
        let mid = convex_combine_effects(&[0.5, 0.5], &[Effect::zero(2), Effect::identity(2)], tol()).unwrap();
        assert!(mid.matrix().max_abs_diff(&Matrix::diag(&[0.5, 0.5])) < 1e-15);
        let w = convex_combine_effects(&[0.25, 0.75], &[eff(&[1.0, 0.0]), eff(&[0.0, 1.0])], tol()).unwrap();
        assert!(w.matrix().max_abs_diff(&Matrix::diag(&[0.25, 0.75])) < 1e-15);
        assert!(matches!(
            convex_combine_effects(&[0.5, 0.6], &[a.clone(), a.clone()], tol()),
            Err(Error::BadWeights(_))
        ));
        assert!(matches!(
            convex_combine_effects(&[0.5, 0.5], &[a, Effect::zero(3)], tol()),
            Err(Error::DimMismatch { .. })
        ));
        let s = convex_combine_states(
            &[0.5, 0.5],
            &[
                State::maximally_mixed(2),
                State::pure(&[1.0.into(), 0.0.into()]).unwrap(),
            ],
            tol(),
        )
        .unwrap();
        assert!(s.matrix().max_abs_diff(&Matrix::diag(&[0.75, 0.25])) < 1e-15);
    }

    #[test]
    fn measure_validation() {
        assert!(ProbabilityMeasure::new([("a".into(), 0.5), ("b".into(), 0.4)], tol()).is_err());
        assert!(ProbabilityMeasure::new([("a".into(), 1.5), ("b".into(), -0.5)], tol()).is_err());
        let mu = ProbabilityMeasure::uniform(&["a", "b"]).unwrap();
        assert_eq!(mu.measure(&["a", "b"]).unwrap(), 1.0);
        assert!(mu.measure(&["c"]).is_err());
        let prod = mu.product(&ProbabilityMeasure::point_mass("z").unwrap());
        assert_eq!(prod.weight("a⊗z"), Some(0.5));
    }
}
