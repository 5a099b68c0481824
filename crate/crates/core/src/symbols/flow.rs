use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Real;
use crate::wigner::PhasePoint;

use super::{PhaseSymbol, SymbolClass};

/// Harmonic-oscillator flow `φ_t(z) = e^{-it} z`, i.e.
/// `x ↦ x cos t + ξ sin t`, `ξ ↦ -x sin t + ξ cos t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowMap<T> {
    pub t: T,
    pub n: usize,
}

impl<T: Real> FlowMap<T> {
    pub fn new(t: T, n: usize) -> Self {
        Self { t, n }
    }

    pub fn apply(&self, w: &PhasePoint<T>) -> PhasePoint<T> {
        let (s, c) = self.t.sin_cos();
        let x = w.x.iter().zip(&w.xi).map(|(&x, &xi)| x * c + xi * s).collect();
        let xi = w.x.iter().zip(&w.xi).map(|(&x, &xi)| -x * s + xi * c).collect();
        PhasePoint { x, xi }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { t: self.t + other.t, n: self.n }
    }

    /// The `2n×2n` matrix `[[cos t I, sin t I], [-sin t I, cos t I]]`.
    pub fn matrix(&self) -> Vec<Vec<T>> {
        let (s, c) = self.t.sin_cos();
        let n = self.n;
        let mut m = vec![vec![T::zero(); 2 * n]; 2 * n];
        for k in 0..n {
            m[k][k] = c;
            m[k][n + k] = s;
            m[n + k][k] = -s;
            m[n + k][n + k] = c;
        }
        m
    }
}

pub fn classical_flow<T: Real>(t: T, w: &PhasePoint<T>) -> PhasePoint<T> {
    FlowMap::new(t, w.dim()).apply(w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub max_deviation: f64,
}

/// `max |f(φ_t(w)) - f(w)|` over the samples.
pub fn flow_invariance_check<T: Real, S: PhaseSymbol<T> + ?Sized>(
    f: &S,
    samples: &[(PhasePoint<T>, T)],
    tol: f64,
) -> InvarianceReport {
    let max_deviation =
        samples.iter().map(|(w, t)| (f.eval(&classical_flow(*t, w)) - f.eval(w)).norm().as_f64()).fold(0.0, f64::max);
    InvarianceReport { invariant: max_deviation <= tol, max_deviation }
}

/// Seeded sample pairs `(w, t)` with `w ∈ [-radius, radius]^{2n}`, `t ∈ [0, 2π)`.
pub fn flow_samples<T: Real>(n: usize, count: usize, radius: f64, seed: u64) -> Vec<(PhasePoint<T>, T)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x = (0..n).map(|_| T::lit(rng.random_range(-radius..radius))).collect();
            let xi = (0..n).map(|_| T::lit(rng.random_range(-radius..radius))).collect();
            let t = T::lit(rng.random_range(0.0..std::f64::consts::TAU));
            (PhasePoint { x, xi }, t)
        })
        .collect()
}

/// Node count that averages a degree-`d` polynomial exactly.
pub fn default_average_nodes(degree: usize) -> usize {
    2 * degree + 1
}

/// Orbit average `w ↦ (1/N) Σ_j f(φ_{2πj/N}(w))`.
#[derive(Debug, Clone)]
pub struct AveragedSymbol<S> {
    inner: S,
    nodes: usize,
}

impl<S> AveragedSymbol<S> {
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }
}

/// Builds the orbit average of `f`; `t_nodes` is clamped to at least 1.
pub fn classical_average<S>(f: S, t_nodes: usize) -> AveragedSymbol<S> {
    AveragedSymbol { inner: f, nodes: t_nodes.max(1) }
}

impl<T: Real, S: PhaseSymbol<T>> PhaseSymbol<T> for AveragedSymbol<S> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, w: &PhasePoint<T>) -> Complex<T> {
        let step = T::TAU() / T::from_usize_lossy(self.nodes);
        let sum = (0..self.nodes).fold(Complex::new(T::zero(), T::zero()), |acc, j| {
            acc + self.inner.eval(&classical_flow(step * T::from_usize_lossy(j), w))
        });
        sum / T::from_usize_lossy(self.nodes)
    }

    fn class(&self) -> SymbolClass {
        self.inner.class()
    }

    fn polynomial_degree(&self) -> Option<usize> {
        self.inner.polynomial_degree()
    }

    fn is_real(&self) -> bool {
        self.inner.is_real()
    }

    fn describe(&self) -> String {
        format!("avg[{}]({})", self.nodes, self.inner.describe())
    }
}

impl<T: Real, S: PhaseSymbol<T> + ?Sized> PhaseSymbol<T> for &S {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval(&self, w: &PhasePoint<T>) -> Complex<T> {
        (**self).eval(w)
    }

    fn class(&self) -> SymbolClass {
        (**self).class()
    }

    fn polynomial_degree(&self) -> Option<usize> {
        (**self).polynomial_degree()
    }

    fn is_real(&self) -> bool {
        (**self).is_real()
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}
