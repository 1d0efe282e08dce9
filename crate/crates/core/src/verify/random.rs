//! Seeded generators for every domain object.
//!
//! The generator is ChaCha8 (`rand_chacha`). A trial uses the 64-bit seed
//! `seed ^ trial_index` on a stream derived from the check id, so results are
//! independent of thread scheduling and platform.

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::effects::{Effect, ProbabilityMeasure, State};
use crate::instruments::{FiniteInstrument, FiniteObservable};
use crate::linalg::{eig_unchecked, sqrt_unchecked, Matrix, C64};
use crate::operations::Operation;

pub struct Sampler {
    rng: ChaCha8Rng,
}

/// Outcome labels `prefix0, prefix1, ...`.
pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn inverse_sqrt(m: &Matrix) -> Matrix {
    eig_unchecked(m).map_spectrum(|l| 1.0 / l.sqrt())
}

fn kraus_sum(kraus: &[Matrix], dim: usize) -> Matrix {
    let mut s = Matrix::zeros(dim);
    for c in kraus {
        s += &(&c.adjoint() * c);
    }
    s.hermitian_part()
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn for_trial(seed: u64, stream: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ trial);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn between(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Standard complex Gaussian, `E|z|² = 1`.
    pub fn complex_gaussian(&mut self) -> C64 {
        C64::new(self.gaussian(), self.gaussian()) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// Matrix with i.i.d. standard complex Gaussian entries.
    pub fn ginibre(&mut self, dim: usize) -> Matrix {
        Matrix::from_fn(dim, |_, _| self.complex_gaussian())
    }

    pub fn unit_vector(&mut self, dim: usize) -> Vec<C64> {
        let v: Vec<C64> = (0..dim).map(|_| self.complex_gaussian()).collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / n).collect()
    }

    /// Haar-random unitary from Gram–Schmidt on a Ginibre matrix.
    pub fn unitary(&mut self, dim: usize) -> Matrix {
        let g = self.ginibre(dim);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut v = g.column(j);
            for _ in 0..2 {
                for q in &cols {
                    let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= proj * qi;
                    }
                }
            }
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
        Matrix::from_fn(dim, |i, j| cols[j][i])
    }

    /// Flat Dirichlet weights.
    pub fn weights(&mut self, n: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..n).map(|_| -(1.0 - self.uniform()).ln()).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    }

    pub fn measure(&mut self, prefix: &str, n: usize) -> ProbabilityMeasure {
        let w = self.weights(n);
        ProbabilityMeasure::from_unchecked(labels(prefix, n).into_iter().zip(w).collect())
    }

    /// Nonempty random subset, in the given order.
    pub fn subset<'a>(&mut self, items: &'a [String]) -> Vec<&'a str> {
        loop {
            let pick: Vec<&str> = items
                .iter()
                .filter(|_| self.uniform() < 0.5)
                .map(String::as_str)
                .collect();
            if !pick.is_empty() {
                return pick;
            }
        }
    }

    /// `GG† / tr(GG†)`.
    pub fn state(&mut self, dim: usize) -> State {
        let g = self.ginibre(dim);
        let m = &g * &g.adjoint();
        let t = m.trace().re;
        State::from_matrix_unchecked(m.scale(1.0 / t).hermitian_part())
    }

    pub fn pure_state(&mut self, dim: usize) -> State {
        let v = self.unit_vector(dim);
        State::from_matrix_unchecked(Matrix::outer(&v, &v))
    }

    /// `G†G / (λ_max + u)` with `u` uniform in `[0, 1)`.
    pub fn effect(&mut self, dim: usize) -> Effect {
        let g = self.ginibre(dim);
        let h = (&g.adjoint() * &g).hermitian_part();
        let top = eig_unchecked(&h).max();
        let u = self.uniform();
        Effect::from_matrix_unchecked(h.scale(1.0 / (top + u)))
    }

    /// Projection onto `rank` columns of a random unitary.
    pub fn projection(&mut self, dim: usize, rank: usize) -> Effect {
        let u = self.unitary(dim);
        let mut p = Matrix::zeros(dim);
        for j in 0..rank {
            let c = u.column(j);
            p += &Matrix::outer(&c, &c);
        }
        Effect::from_matrix_unchecked(p.hermitian_part())
    }

    /// `U diag(values) U†`.
    pub fn diagonal_in(&mut self, u: &Matrix, values: &[f64]) -> Effect {
        Effect::from_matrix_unchecked((&(u * &Matrix::diag(values)) * &u.adjoint()).hermitian_part())
    }

    /// Two effects diagonal in a common random basis.
    pub fn commuting_effects(&mut self, dim: usize) -> (Effect, Effect) {
        let u = self.unitary(dim);
        let a: Vec<f64> = (0..dim).map(|_| self.uniform()).collect();
        let b: Vec<f64> = (0..dim).map(|_| self.uniform()).collect();
        (self.diagonal_in(&u, &a), self.diagonal_in(&u, &b))
    }

    fn ginibre_kraus(&mut self, dim: usize, count: usize) -> Vec<Matrix> {
        (0..count).map(|_| self.ginibre(dim)).collect()
    }

    /// Ginibre Kraus list with `ΣC†C ≤ slack·I`, the slack uniform in `(0, 1]`.
    pub fn operation(&mut self, dim: usize, kraus_count: usize) -> Operation {
        let slack = 1.0 - self.uniform();
        self.operation_with_slack(dim, kraus_count, slack)
    }

    /// Ginibre Kraus list rescaled so the largest eigenvalue of `ΣC†C` is `slack`.
    pub fn operation_with_slack(&mut self, dim: usize, kraus_count: usize, slack: f64) -> Operation {
        let kraus = self.ginibre_kraus(dim, kraus_count);
        let top = eig_unchecked(&kraus_sum(&kraus, dim)).max();
        let s = (slack / top).sqrt();
        Operation::from_kraus_unchecked(kraus.iter().map(|c| c.scale(s)).collect())
    }

    /// Ginibre Kraus list `Cᵢ S^{-1/2}` with `S = ΣC†C`.
    pub fn channel(&mut self, dim: usize, kraus_count: usize) -> Operation {
        let kraus = self.ginibre_kraus(dim, kraus_count);
        let r = inverse_sqrt(&kraus_sum(&kraus, dim));
        Operation::from_kraus_unchecked(kraus.iter().map(|c| c * &r).collect())
    }

    /// `A_i = S^{-1/2} H_i S^{-1/2}` with `H_i = G_i†G_i` and `S = ΣH_i`.
    pub fn observable(&mut self, prefix: &str, dim: usize, n: usize) -> FiniteObservable {
        let hs: Vec<Matrix> = (0..n)
            .map(|_| {
                let g = self.ginibre(dim);
                &g.adjoint() * &g
            })
            .collect();
        let mut s = Matrix::zeros(dim);
        for h in &hs {
            s += h;
        }
        let r = inverse_sqrt(&s.hermitian_part());
        let effects = labels(prefix, n)
            .into_iter()
            .zip(&hs)
            .map(|(x, h)| (x, Effect::from_matrix_unchecked((&(&r * h) * &r).hermitian_part())))
            .collect();
        FiniteObservable::from_unchecked(dim, effects)
    }

    /// Random projections onto a partition of a random basis; groups may be empty.
    pub fn sharp_observable(&mut self, prefix: &str, dim: usize, n: usize) -> FiniteObservable {
        let u = self.unitary(dim);
        let mut groups = vec![Vec::new(); n];
        for j in 0..dim {
            let g = if j < n { j } else { self.index(n) };
            groups[g].push(j);
        }
        let effects = labels(prefix, n)
            .into_iter()
            .zip(groups)
            .map(|(x, cols)| {
                let mut p = Matrix::zeros(dim);
                for j in cols {
                    let c = u.column(j);
                    p += &Matrix::outer(&c, &c);
                }
                (x, Effect::from_matrix_unchecked(p.hermitian_part()))
            })
            .collect();
        FiniteObservable::from_unchecked(dim, effects)
    }

    /// `(1 − t) P_x + (t/n) I` for a random sharp `P` and `t ∈ [0.05, 0.5)`; never sharp.
    pub fn blurred_sharp_observable(&mut self, prefix: &str, dim: usize, n: usize) -> FiniteObservable {
        let sharp = self.sharp_observable(prefix, dim, n);
        let t = self.range(0.05, 0.5);
        let effects = sharp
            .iter()
            .map(|(x, p)| {
                let m = &p.matrix().scale(1.0 - t) + &Matrix::identity(dim).scale(t / n as f64);
                (x.to_string(), Effect::from_matrix_unchecked(m))
            })
            .collect();
        FiniteObservable::from_unchecked(dim, effects)
    }

    /// Per-outcome Ginibre Kraus lists scaled below a channel, with the deficit
    /// `I − ΣC†C` repaired by one extra Kraus term `(I − ΣC†C)^{1/2}` on a random outcome.
    pub fn instrument(&mut self, prefix: &str, dim: usize, n: usize, kraus_count: usize) -> FiniteInstrument {
        let mut lists: Vec<Vec<Matrix>> = (0..n).map(|_| self.ginibre_kraus(dim, kraus_count)).collect();
        let all: Vec<Matrix> = lists.iter().flatten().cloned().collect();
        let top = eig_unchecked(&kraus_sum(&all, dim)).max();
        let slack = self.uniform();
        let s = 1.0 / (top * (1.0 + slack)).sqrt();
        for list in &mut lists {
            for c in list.iter_mut() {
                *c = c.scale(s);
            }
        }
        let all: Vec<Matrix> = lists.iter().flatten().cloned().collect();
        let deficit = &Matrix::identity(dim) - &kraus_sum(&all, dim);
        let target = self.index(n);
        lists[target].push(sqrt_unchecked(&deficit.hermitian_part()));
        let ops = labels(prefix, n)
            .into_iter()
            .zip(lists)
            .map(|(x, k)| (x, Operation::from_kraus_unchecked(k)))
            .collect();
        FiniteInstrument::from_unchecked(dim, ops)
    }

    pub fn states_for(&mut self, obs: &FiniteObservable) -> IndexMap<String, State> {
        let dim = obs.dim();
        obs.outcomes().map(|x| (x.to_string(), self.state(dim))).collect()
    }

    /// An observable and states with `tr(α_x A_x) = 1` on every non-null outcome.
    ///
    /// `A_x = P_x + Σ_j w_{x,j} |e_j⟩⟨e_j|` where `P_x` projects onto basis vectors owned
    /// by `x` and the remaining basis vectors are shared with random weights, and
    /// `α_x` is a pure state inside the range of `P_x`. Outcomes without their own
    /// basis vector get `A_x = 0` when there are more outcomes than dimensions.
    pub fn repeatable_holevo(
        &mut self,
        prefix: &str,
        dim: usize,
        n: usize,
    ) -> (FiniteObservable, IndexMap<String, State>) {
        let u = self.unitary(dim);
        let owned = n.min(dim);
        let mut effects = vec![Matrix::zeros(dim); n];
        let mut alphas = Vec::with_capacity(n);
        for (x, m) in effects.iter_mut().enumerate().take(owned) {
            let c = u.column(x);
            *m += &Matrix::outer(&c, &c);
        }
        for j in owned..dim {
            let w = self.weights(owned);
            let c = u.column(j);
            let p = Matrix::outer(&c, &c);
            for (x, wx) in w.iter().enumerate() {
                effects[x] += &p.scale(*wx);
            }
        }
        for x in 0..n {
            let alpha = if x < owned {
                let c = u.column(x);
                State::from_matrix_unchecked(Matrix::outer(&c, &c))
            } else {
                self.state(dim)
            };
            alphas.push(alpha);
        }
        let names = labels(prefix, n);
        let obs = FiniteObservable::from_unchecked(
            dim,
            names
                .iter()
                .cloned()
                .zip(
                    effects
                        .into_iter()
                        .map(|m| Effect::from_matrix_unchecked(m.hermitian_part())),
                )
                .collect(),
        );
        (obs, names.into_iter().zip(alphas).collect())
    }
}

/// Normalized Ginibre state.
pub fn rand_state(dim: usize, seed: u64) -> State {
    Sampler::new(seed).state(dim)
}

pub fn rand_effect(dim: usize, seed: u64) -> Effect {
    Sampler::new(seed).effect(dim)
}

pub fn rand_operation(dim: usize, kraus_count: usize, seed: u64) -> Operation {
    Sampler::new(seed).operation(dim, kraus_count)
}

/// Outcomes are labeled `x0, x1, ...`.
pub fn rand_observable(dim: usize, n_outcomes: usize, seed: u64) -> FiniteObservable {
    Sampler::new(seed).observable("x", dim, n_outcomes)
}

/// Outcomes are labeled `x0, x1, ...`.
pub fn rand_instrument(dim: usize, n_outcomes: usize, kraus_count: usize, seed: u64) -> FiniteInstrument {
    Sampler::new(seed).instrument("x", dim, n_outcomes, kraus_count)
}
