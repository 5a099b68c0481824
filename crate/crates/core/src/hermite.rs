//! Orthonormal Hermite functions and the Gauss-type quadrature rules used by
//! the quantizer, the Wigner oracle and the coarea integrator.
//!
//! Node-count guidance: a polynomial symbol of total degree `D` quantized up
//! to shell `K` is integrated exactly by a Gauss–Hermite rule with
//! `m ≥ (D + 2K)/2 + 1` nodes per phase-space axis.

use crate::error::{Error, Result};
use crate::indexing::MultiIndex;
use crate::scalar::Real;

const MAX_NEWTON: usize = 200;

/// Which weight function a [`QuadratureRule`] integrates against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightKind {
    /// `e^{-t²}` on the real line.
    Hermite,
    /// `t^alpha e^{-t}` on `[0, ∞)`.
    Laguerre { alpha: usize },
    /// unit weight on `[a, b]`.
    Legendre { a: f64, b: f64 },
}

/// Nodes and positive weights of a Gauss rule, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    kind: WeightKind,
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `Σ wᵢ f(tᵢ)`, i.e. the integral of `f` against the rule's weight function.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.iter().map(|(t, w)| w * f(t)).sum()
    }

    fn from_unsorted(kind: WeightKind, mut pairs: Vec<(T, T)>) -> Self {
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));
        let (nodes, weights) = pairs.into_iter().unzip();
        Self { kind, nodes, weights }
    }
}

/// Gauss–Hermite rule of order `m` for the weight `e^{-t²}`.
///
/// Newton iteration on the orthonormal Hermite recurrence, seeded with the
/// classical asymptotic root estimates.
pub fn gauss_hermite_rule<T: Real>(m: usize) -> Result<QuadratureRule<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("quadrature order must be at least 1".into()));
    }
    let pim4 = T::PI().powf(T::lit(-0.25));
    let tol = T::tol(1e-15);
    let two = T::lit(2.0);
    let mf = T::from_usize_lossy(m);
    let mut roots: Vec<T> = Vec::with_capacity(m.div_ceil(2));
    let mut pairs = Vec::with_capacity(m);
    for i in 0..m.div_ceil(2) {
        let mut z = match i {
            0 => {
                let s = T::lit(2.0 * m as f64 + 1.0);
                s.sqrt() - T::lit(1.85575) * s.powf(T::lit(-1.0 / 6.0))
            }
            1 => {
                let z0 = roots[0];
                z0 - T::lit(1.14) * mf.powf(T::lit(0.426)) / z0
            }
            2 => T::lit(1.86) * roots[1] - T::lit(0.86) * roots[0],
            3 => T::lit(1.91) * roots[2] - T::lit(0.91) * roots[1],
            _ => two * roots[i - 1] - roots[i - 2],
        };
        let mut converged = false;
        for _ in 0..MAX_NEWTON {
            let (p1, p2) = orthonormal_hermite_pair(m, z, pim4);
            let pp = (two * mf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= tol * z.abs().max(T::one()) {
                converged = true;
                break;
            }
        }
        if !converged || !z.is_finite() {
            return Err(Error::RootFinding { order: m });
        }
        // recompute the derivative at the converged root
        let (_, p2) = orthonormal_hermite_pair(m, z, pim4);
        let pp = (two * mf).sqrt() * p2;
        let w = two / (pp * pp);
        roots.push(z);
        if m % 2 == 1 && i == m / 2 {
            pairs.push((T::zero(), w));
        } else {
            pairs.push((z, w));
            pairs.push((-z, w));
        }
    }
    Ok(QuadratureRule::from_unsorted(WeightKind::Hermite, pairs))
}

/// Values `(p_m(z), p_{m-1}(z))` of the Hermite polynomials orthonormal for `e^{-t²}`.
fn orthonormal_hermite_pair<T: Real>(m: usize, z: T, pim4: T) -> (T, T) {
    let mut p1 = pim4;
    let mut p2 = T::zero();
    for j in 1..=m {
        let p3 = p2;
        p2 = p1;
        let jf = T::from_usize_lossy(j);
        p1 = z * (T::lit(2.0) / jf).sqrt() * p2 - ((jf - T::one()) / jf).sqrt() * p3;
    }
    (p1, p2)
}

/// Generalized Gauss–Laguerre rule for the weight `t^alpha e^{-t}` on `[0, ∞)`.
pub fn gauss_laguerre_rule<T: Real>(m: usize, alpha: usize) -> Result<QuadratureRule<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("quadrature order must be at least 1".into()));
    }
    let a = T::from_usize_lossy(alpha);
    let mf = T::from_usize_lossy(m);
    let tol = T::tol(1e-15);
    // Γ(m+α)/Γ(m) for integer α
    let gamma_ratio = (0..alpha).fold(T::one(), |acc, i| acc * T::from_usize_lossy(m + i));
    let mut xs: Vec<T> = Vec::with_capacity(m);
    let mut pairs = Vec::with_capacity(m);
    for i in 0..m {
        let mut z = match i {
            0 => (T::one() + a) * (T::lit(3.0) + T::lit(0.92) * a) / (T::one() + T::lit(2.4) * mf + T::lit(1.8) * a),
            1 => xs[0] + (T::lit(15.0) + T::lit(6.25) * a) / (T::one() + T::lit(0.9) * a + T::lit(2.5) * mf),
            _ => {
                let ai = T::from_usize_lossy(i - 1);
                let step = ((T::one() + T::lit(2.55) * ai) / (T::lit(1.9) * ai)
                    + T::lit(1.26) * ai * a / (T::one() + T::lit(3.5) * ai))
                    * (xs[i - 1] - xs[i - 2])
                    / (T::one() + T::lit(0.3) * a);
                xs[i - 1] + step
            }
        };
        let mut converged = false;
        for _ in 0..MAX_NEWTON {
            let (p1, _, pp) = laguerre_eval(m, a, z);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= tol * z.abs().max(T::one()) {
                converged = true;
                break;
            }
        }
        if !converged || !z.is_finite() {
            return Err(Error::RootFinding { order: m });
        }
        let (_, p2, pp) = laguerre_eval(m, a, z);
        let w = -gamma_ratio / (pp * mf * p2);
        xs.push(z);
        pairs.push((z, w));
    }
    Ok(QuadratureRule::from_unsorted(WeightKind::Laguerre { alpha }, pairs))
}

/// `(L_m^α(z), L_{m-1}^α(z), d/dz L_m^α(z))`.
fn laguerre_eval<T: Real>(m: usize, a: T, z: T) -> (T, T, T) {
    let mut p1 = T::one();
    let mut p2 = T::zero();
    for j in 1..=m {
        let p3 = p2;
        p2 = p1;
        let jf = T::from_usize_lossy(j);
        p1 = ((T::lit(2.0) * jf - T::one() + a - z) * p2 - (jf - T::one() + a) * p3) / jf;
    }
    let mf = T::from_usize_lossy(m);
    let pp = (mf * p1 - (mf + a) * p2) / z;
    (p1, p2, pp)
}

/// Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre_rule<T: Real>(m: usize, a: f64, b: f64) -> Result<QuadratureRule<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("quadrature order must be at least 1".into()));
    }
    let tol = T::tol(1e-15);
    let half = T::lit(0.5 * (b - a));
    let mid = T::lit(0.5 * (b + a));
    let mut pairs = Vec::with_capacity(m);
    for i in 0..m.div_ceil(2) {
        let mut z = (T::PI() * (T::lit(i as f64 + 0.75)) / T::lit(m as f64 + 0.5)).cos();
        let mut converged = false;
        let mut pp = T::one();
        for _ in 0..MAX_NEWTON {
            let (p1, p2) = legendre_pair(m, z);
            pp = T::from_usize_lossy(m) * (z * p1 - p2) / (z * z - T::one());
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::RootFinding { order: m });
        }
        let w = T::lit(2.0) * half / ((T::one() - z * z) * pp * pp);
        if m % 2 == 1 && i == m / 2 {
            pairs.push((mid, w));
        } else {
            pairs.push((mid - half * z, w));
            pairs.push((mid + half * z, w));
        }
    }
    Ok(QuadratureRule::from_unsorted(WeightKind::Legendre { a, b }, pairs))
}

fn legendre_pair<T: Real>(m: usize, z: T) -> (T, T) {
    let mut p1 = T::one();
    let mut p2 = T::zero();
    for j in 1..=m {
        let p3 = p2;
        p2 = p1;
        let jf = T::from_usize_lossy(j);
        p1 = ((T::lit(2.0) * jf - T::one()) * z * p2 - (jf - T::one()) * p3) / jf;
    }
    (p1, p2)
}

/// `φ_0(t), …, φ_max(t)` by the stable three-term recurrence.
pub fn hermite_functions<T: Real>(max: usize, t: T) -> Vec<T> {
    let base = T::PI().powf(T::lit(-0.25)) * (-t * t / T::lit(2.0)).exp();
    hermite_recurrence(max, t, base)
}

/// Same recurrence without the Gaussian: `φ_m(t) e^{t²/2}`.
pub fn hermite_polynomials_normalized<T: Real>(max: usize, t: T) -> Vec<T> {
    hermite_recurrence(max, t, T::PI().powf(T::lit(-0.25)))
}

fn hermite_recurrence<T: Real>(max: usize, t: T, base: T) -> Vec<T> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(base);
    if max >= 1 {
        out.push(t * T::lit(2.0).sqrt() * base);
    }
    for m in 1..max {
        let mf = T::from_usize_lossy(m);
        let next = t * (T::lit(2.0) / (mf + T::one())).sqrt() * out[m] - (mf / (mf + T::one())).sqrt() * out[m - 1];
        out.push(next);
    }
    out
}

/// Single 1D Hermite function value `φ_m(t)`.
pub fn hermite_fn<T: Real>(m: usize, t: T) -> T {
    hermite_functions(m, t)[m]
}

/// `φ_α(x) = ∏ φ_{α_k}(x_k)`.
pub fn hermite_eval<T: Real>(alpha: &MultiIndex, x: &[T]) -> Result<T> {
    if alpha.dim() != x.len() {
        return Err(Error::DimensionMismatch { expected: alpha.dim(), found: x.len() });
    }
    Ok(alpha.components().iter().zip(x).map(|(&a, &t)| hermite_fn(a, t)).fold(T::one(), |acc, v| acc * v))
}

/// Evaluator for the tensor Hermite basis in `n` dimensions up to a degree cap.
#[derive(Debug, Clone, Copy)]
pub struct HermiteBasis {
    n: usize,
    max_degree: usize,
}

impl HermiteBasis {
    pub fn new(n: usize, max_degree: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self { n, max_degree })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Per-axis tables `φ_j(x_k)` for `j ≤ max_degree`, reused across indices.
    pub fn tables<T: Real>(&self, x: &[T]) -> Result<Vec<Vec<T>>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        Ok(x.iter().map(|&t| hermite_functions(self.max_degree, t)).collect())
    }

    pub fn eval_from_tables<T: Real>(&self, tables: &[Vec<T>], alpha: &MultiIndex) -> T {
        alpha.components().iter().zip(tables).map(|(&a, tab)| tab[a]).fold(T::one(), |acc, v| acc * v)
    }

    /// `⟨φ_α, φ_β⟩` by tensor Gauss–Hermite quadrature (Gaussian folded into the weights).
    pub fn inner_product<T: Real>(&self, alpha: &MultiIndex, beta: &MultiIndex, rule: &QuadratureRule<T>) -> T {
        alpha
            .components()
            .iter()
            .zip(beta.components())
            .map(|(&a, &b)| {
                rule.integrate(|t| {
                    let h = hermite_polynomials_normalized(a.max(b), t);
                    h[a] * h[b]
                })
            })
            .fold(T::one(), |acc, v| acc * v)
    }
}
