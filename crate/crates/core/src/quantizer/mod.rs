//! Weyl quantization in the Hermite basis.
//!
//! The coefficient matrix of a symbol `f` is
//!
//! ```text
//! c_{α,β} = ⟨Op(f)φ_α, φ_β⟩ = (2π)^{-n} ∫ f(w) Φ^{β,α}(w) dw,   Φ^{β,α} = W(φ_α, φ_β),
//! ```
//!
//! normalized so that `Op(1)` is the identity. Every `Φ^{β,α}` carries the
//! Gaussian `e^{-|w|²}`, which is folded into tensor Gauss–Hermite weights;
//! for a polynomial `f` the remaining integrand is polynomial and the rule is
//! exact. A [`CoefficientMatrix`] with cutoff `K` is the exact compression
//! `P_{≤K} Op(f) P_{≤K}`, never an approximation of an infinite object.

mod coarea;
mod growth;
mod io;

use num_complex::Complex;
use rayon::prelude::*;

use crate::com_algebra::{BlockOperator, CMatrix};
use crate::error::{Error, Result};
use crate::hermite::{gauss_hermite_rule, QuadratureRule};
use crate::indexing::{IndexSet, MultiIndex};
use crate::scalar::Real;
use crate::symbols::PhaseSymbol;
use crate::wigner::{AxisFactor, PhasePoint};

pub use coarea::{coeff_coarea, default_coarea_nodes, CoareaResult, SphereRule};
pub use growth::{growth_diagnostic, GrowthReport};
pub use io::CoefficientFile;

/// Tag recorded in every output: `Op(1) = id`, i.e. `c = (2π)^{-n} ∫ f·W(φ_α,φ_β)`.
pub const NORMALIZATION_TAG: &str = "op(1)=id";

/// Successive refinements of a non-polynomial symbol must agree this closely.
pub const REFINEMENT_TOL: f64 = 1e-10;

/// Largest tensor grid (points in `R^{2n}`) the refinement loop will build.
pub const MAX_GRID_POINTS: usize = 1 << 22;

/// How the quantizer picks its Gauss–Hermite order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    /// Exact order for polynomial symbols, doubling refinement otherwise.
    #[default]
    Auto,
    /// A fixed order per axis.
    Fixed(usize),
}

/// Exact order `(D + 2K)/2 + 1` for a degree-`D` polynomial up to shell `K`.
pub fn polynomial_order(degree: usize, cutoff: usize) -> usize {
    (degree + 2 * cutoff) / 2 + 1
}

/// Starting order of the doubling refinement.
pub fn refinement_start(cutoff: usize) -> usize {
    (2 * cutoff + 8).max(16)
}

/// Per-axis order cap implied by [`MAX_GRID_POINTS`].
pub fn max_order(n: usize) -> usize {
    let mut m = 1usize;
    while ((m + 1) as f64).powi(2 * n as i32) <= MAX_GRID_POINTS as f64 {
        m += 1;
    }
    m
}

/// `c_{α,β}` for all `|α|, |β| ≤ K`, row `α`, column `β`, in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix<T> {
    index: IndexSet,
    entries: Vec<Complex<T>>,
    symbol: String,
    quadrature_order: usize,
    seed: Option<u64>,
}

impl<T: Real> CoefficientMatrix<T> {
    pub fn zeros(n: usize, cutoff: usize, symbol: impl Into<String>) -> Result<Self> {
        Ok(Self::zeros_with_index(IndexSet::new(n, cutoff)?, symbol))
    }

    pub(crate) fn zeros_with_index(index: IndexSet, symbol: impl Into<String>) -> Self {
        let len = index.len();
        Self {
            index,
            entries: vec![Complex::new(T::zero(), T::zero()); len * len],
            symbol: symbol.into(),
            quadrature_order: 0,
            seed: None,
        }
    }

    /// The matrix with a single unit entry at `(α, β)`.
    pub fn elementary(n: usize, cutoff: usize, alpha: &MultiIndex, beta: &MultiIndex) -> Result<Self> {
        let mut c = Self::zeros(n, cutoff, format!("P[{alpha},{beta}]"))?;
        let i = c.require(alpha)?;
        let j = c.require(beta)?;
        c.set(i, j, Complex::new(T::one(), T::zero()));
        Ok(c)
    }

    fn require(&self, alpha: &MultiIndex) -> Result<usize> {
        self.index.position(alpha).ok_or_else(|| {
            Error::InvalidArgument(format!("index {alpha} outside n = {}, cutoff = {}", self.n(), self.cutoff()))
        })
    }

    pub fn n(&self) -> usize {
        self.index.n()
    }

    pub fn cutoff(&self) -> usize {
        self.index.cutoff()
    }

    pub fn index_set(&self) -> &IndexSet {
        &self.index
    }

    /// Number of basis functions `Σ_{k≤K} d_k`.
    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn quadrature_order(&self) -> usize {
        self.quadrature_order
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn with_symbol(mut self, symbol: impl Into<String>) -> Self {
        self.symbol = symbol.into();
        self
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_quadrature_order(mut self, m: usize) -> Self {
        self.quadrature_order = m;
        self
    }

    /// Entry at canonical positions `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.dim() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        let d = self.dim();
        self.entries[i * d + j] = v;
    }

    pub fn get(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Option<Complex<T>> {
        Some(self.at(self.index.position(alpha)?, self.index.position(beta)?))
    }

    /// `(α, β, c_{α,β})` in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, Complex<T>)> + '_ {
        let d = self.dim();
        self.entries.iter().enumerate().map(move |(p, &c)| (self.index.get(p / d), self.index.get(p % d), c))
    }

    /// Applies `f(i, j, c)` to every entry; metadata is kept.
    pub fn map_entries(&self, f: impl Fn(usize, usize, Complex<T>) -> Complex<T>) -> Self {
        let d = self.dim();
        let entries = self.entries.iter().enumerate().map(|(p, &c)| f(p / d, p % d, c)).collect();
        Self { entries, ..self.clone() }
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: Complex<T>, other: &Self, b: Complex<T>) -> Result<Self> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(x, y)| x * a + y * b).collect();
        Ok(Self { entries, symbol: format!("lin({}, {})", self.symbol, other.symbol), ..self.clone() })
    }

    pub fn max_abs(&self) -> T {
        self.entries.iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_same_shape(other)?;
        Ok(self.entries.iter().zip(&other.entries).map(|(x, y)| (x - y).norm()).fold(T::zero(), T::max))
    }

    /// `max |c_{β,α} − conj c_{α,β}|`.
    pub fn hermitian_defect(&self) -> T {
        let d = self.dim();
        let mut out = T::zero();
        for i in 0..d {
            for j in i..d {
                out = out.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        out
    }

    /// `Σ |c_{α,β}|²`.
    pub fn sum_sqr(&self) -> T {
        self.entries.iter().map(|c| c.norm_sqr()).sum()
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: other.n() });
        }
        if self.cutoff() != other.cutoff() {
            return Err(Error::CutoffMismatch { left: self.cutoff(), right: other.cutoff() });
        }
        Ok(())
    }
}

/// Reduced `Φ^{b,a}` on every node pair `(x_i, ξ_j)` of one axis:
/// `table[(i·m + j)·Q + b·(K+1) + a]`, `Q = (K+1)²`, Gaussian removed.
fn axis_table<T: Real>(rule: &QuadratureRule<T>, cutoff: usize) -> Vec<Complex<T>> {
    let kp = cutoff + 1;
    let factors: Vec<AxisFactor<T>> = (0..kp).flat_map(|b| (0..kp).map(move |a| AxisFactor::new(b, a))).collect();
    let nodes = rule.nodes();
    nodes
        .iter()
        .flat_map(|&x| nodes.iter().map(move |&xi| (x, xi)))
        .flat_map(|(x, xi)| factors.iter().map(move |f| f.eval_reduced(x, xi)).collect::<Vec<_>>())
        .collect()
}

/// Weighted symbol values on the tensor grid, last axis pair fastest.
fn weighted_samples<T: Real, S: PhaseSymbol<T> + ?Sized>(f: &S, rule: &QuadratureRule<T>) -> Vec<Complex<T>> {
    let n = f.dim();
    let m = rule.order();
    let pairs = m * m;
    let total = pairs.pow(n as u32);
    let nodes = rule.nodes();
    let weights = rule.weights();
    (0..total)
        .into_par_iter()
        .map(|g| {
            let mut x = vec![T::zero(); n];
            let mut xi = vec![T::zero(); n];
            let mut w = T::one();
            let mut rest = g;
            for k in (0..n).rev() {
                let p = rest % pairs;
                rest /= pairs;
                let (i, j) = (p / m, p % m);
                x[k] = nodes[i];
                xi[k] = nodes[j];
                w *= weights[i] * weights[j];
            }
            f.eval(&PhasePoint { x, xi }) * w
        })
        .collect()
}

/// Contracts each node-pair axis of `samples` against `table`, last axis first.
/// Returns `S[q_1, …, q_n]` with `q_k = β_k·(K+1) + α_k`, `q_1` slowest.
fn contract<T: Real>(
    samples: Vec<Complex<T>>,
    table: &[Complex<T>],
    n: usize,
    pairs: usize,
    q: usize,
) -> Vec<Complex<T>> {
    let mut cur = samples;
    let mut right = 1usize;
    for _ in 0..n {
        let left = cur.len() / (pairs * right);
        let src = &cur;
        let mut next = vec![Complex::new(T::zero(), T::zero()); left * q * right];
        next.par_chunks_mut(q * right).enumerate().for_each(|(l, out)| {
            for qi in 0..q {
                for r in 0..right {
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for p in 0..pairs {
                        acc += src[(l * pairs + p) * right + r] * table[p * q + qi];
                    }
                    out[qi * right + r] = acc;
                }
            }
        });
        cur = next;
        right *= q;
    }
    cur
}

fn quantize_with_rule<T: Real, S: PhaseSymbol<T> + ?Sized>(
    f: &S,
    index: &IndexSet,
    rule: &QuadratureRule<T>,
) -> Vec<Complex<T>> {
    let n = index.n();
    let kp = index.cutoff() + 1;
    let q = kp * kp;
    let table = axis_table(rule, index.cutoff());
    let pairs = rule.order() * rule.order();
    let reduced = contract(weighted_samples(f, rule), &table, n, pairs, q);
    let norm = T::TAU().powi(-(n as i32));
    let d = index.len();
    let mut entries = Vec::with_capacity(d * d);
    for alpha in index.indices() {
        for beta in index.indices() {
            let pos =
                alpha.components().iter().zip(beta.components()).fold(0usize, |acc, (&a, &b)| acc * q + b * kp + a);
            entries.push(reduced[pos] * norm);
        }
    }
    entries
}

fn check_dim<T: Real, S: PhaseSymbol<T> + ?Sized>(f: &S, n: usize) -> Result<()> {
    if f.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
    }
    Ok(())
}

/// A single coefficient `c_{α,β}` with an explicit rule.
pub fn coeff<T: Real, S: PhaseSymbol<T> + ?Sized>(
    f: &S,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    rule: &QuadratureRule<T>,
) -> Result<Complex<T>> {
    let n = alpha.dim();
    if beta.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: beta.dim() });
    }
    check_dim(f, n)?;
    let factors: Vec<AxisFactor<T>> =
        alpha.components().iter().zip(beta.components()).map(|(&a, &b)| AxisFactor::new(b, a)).collect();
    let m = rule.order();
    let pairs = m * m;
    let total = pairs.pow(n as u32);
    let nodes = rule.nodes();
    let weights = rule.weights();
    let mut acc = Complex::new(T::zero(), T::zero());
    for g in 0..total {
        let mut x = vec![T::zero(); n];
        let mut xi = vec![T::zero(); n];
        let mut phi = Complex::new(T::one(), T::zero());
        let mut rest = g;
        for k in (0..n).rev() {
            let p = rest % pairs;
            rest /= pairs;
            let (i, j) = (p / m, p % m);
            x[k] = nodes[i];
            xi[k] = nodes[j];
            phi = phi * factors[k].eval_reduced(nodes[i], nodes[j]) * (weights[i] * weights[j]);
        }
        acc += f.eval(&PhasePoint { x, xi }) * phi;
    }
    Ok(acc * T::TAU().powi(-(n as i32)))
}

/// The full coefficient matrix up to shell `cutoff`.
///
/// Entries are computed in parallel with a fixed summation order, so the
/// result does not depend on the number of worker threads.
pub fn coeff_matrix<T: Real, S: PhaseSymbol<T> + ?Sized>(
    f: &S,
    cutoff: usize,
    quadrature: Quadrature,
) -> Result<CoefficientMatrix<T>> {
    let n = f.dim();
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let index = IndexSet::new(n, cutoff)?;
    let build = |m: usize| -> Result<Vec<Complex<T>>> {
        let rule = gauss_hermite_rule::<T>(m)?;
        Ok(quantize_with_rule(f, &index, &rule))
    };
    let (entries, order) = match (quadrature, f.polynomial_degree()) {
        (Quadrature::Fixed(m), _) => (build(m)?, m),
        (Quadrature::Auto, Some(deg)) => {
            let m = polynomial_order(deg, cutoff);
            (build(m)?, m)
        }
        (Quadrature::Auto, None) => {
            let cap = max_order(n);
            let mut m = refinement_start(cutoff).min(cap);
            let mut prev = build(m)?;
            loop {
                if m >= cap {
                    let change = f64::INFINITY;
                    return Err(Error::QuadratureNotConverged { order: m, change });
                }
                let next_m = (2 * m).min(cap);
                let next = build(next_m)?;
                let change = prev.iter().zip(&next).map(|(a, b)| (a - b).norm()).fold(T::zero(), T::max);
                if change <= T::tol(REFINEMENT_TOL) {
                    break (next, next_m);
                }
                if next_m >= cap {
                    return Err(Error::QuadratureNotConverged { order: next_m, change: change.as_f64() });
                }
                prev = next;
                m = next_m;
            }
        }
    };
    let mut c = CoefficientMatrix::zeros_with_index(index, f.describe()).with_quadrature_order(order);
    c.entries = entries;
    Ok(c)
}

/// Partial sum `Σ_{|α|,|β|≤K} c_{α,β} Φ^{α,β}(w)` with closed-form `Φ`.
pub fn reconstruct<T: Real>(c: &CoefficientMatrix<T>, w: &PhasePoint<T>) -> Result<Complex<T>> {
    let n = c.n();
    if w.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: w.dim() });
    }
    let kp = c.cutoff() + 1;
    // tables[k][a·(K+1) + b] = reduced Φ^{a,b} on axis k
    let tables: Vec<Vec<Complex<T>>> = (0..n)
        .map(|k| {
            (0..kp)
                .flat_map(|a| (0..kp).map(move |b| AxisFactor::<T>::new(a, b).eval_reduced(w.x[k], w.xi[k])))
                .collect()
        })
        .collect();
    let mut acc = Complex::new(T::zero(), T::zero());
    for (alpha, beta, v) in c.iter() {
        if v.re == T::zero() && v.im == T::zero() {
            continue;
        }
        let phi = alpha
            .components()
            .iter()
            .zip(beta.components())
            .enumerate()
            .fold(Complex::new(T::one(), T::zero()), |p, (k, (&a, &b))| p * tables[k][a * kp + b]);
        acc += v * phi;
    }
    Ok(acc * (-w.norm_sqr()).exp())
}

/// Shell blocks `|α| = |β| = k` and the off-block residual `max_{|α|≠|β|} |c_{α,β}|`.
pub fn block_extract<T: Real>(c: &CoefficientMatrix<T>) -> (BlockOperator<T>, T) {
    let index = c.index_set();
    let blocks = (0..=c.cutoff())
        .map(|k| {
            let r = index.shell_range(k);
            let d = r.len();
            CMatrix::from_fn(d, d, |i, j| c.at(r.start + i, r.start + j))
        })
        .collect();
    let mut residual = T::zero();
    for i in 0..c.dim() {
        for j in 0..c.dim() {
            if index.shell_of(i) != index.shell_of(j) {
                residual = residual.max(c.at(i, j).norm());
            }
        }
    }
    let op = BlockOperator::new(c.n(), blocks).expect("blocks built from a valid index set");
    (op, residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{catalog, CatalogEntry, SymbolExpr};
    use crate::wigner::phi_closed_form;
    use approx::assert_abs_diff_eq;

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn order_guidance() {
        assert_eq!(polynomial_order(2, 4), 6);
        assert_eq!(polynomial_order(0, 0), 1);
        assert_eq!(max_order(1), 2048);
        assert!(max_order(2).pow(4) <= MAX_GRID_POINTS);
    }

    #[test]
    fn identity_symbol() {
        let one = SymbolExpr::parse("1", 2).unwrap();
        let c = coeff_matrix::<f64, _>(&one, 3, Quadrature::Auto).unwrap();
        for i in 0..c.dim() {
            for j in 0..c.dim() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!((c.at(i, j) - Complex::new(expect, 0.0)).norm(), 0.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn h0_diagonal_n1() {
        let h = catalog(&CatalogEntry::H0, 1).unwrap();
        let c = coeff_matrix::<f64, _>(&h, 4, Quadrature::Auto).unwrap();
        let (blocks, residual) = block_extract(&c);
        assert!(residual < 1e-12);
        for k in 0..=4 {
            assert_abs_diff_eq!(blocks.shell(k)[(0, 0)].re, k as f64 + 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn single_entry_matches_matrix() {
        let f = SymbolExpr::parse("x1^2*xi2 + z1*zb2", 2).unwrap();
        let c = coeff_matrix::<f64, _>(&f, 2, Quadrature::Auto).unwrap();
        let rule = gauss_hermite_rule(c.quadrature_order()).unwrap();
        for (a, b) in [(mi(&[1, 0]), mi(&[0, 1])), (mi(&[2, 0]), mi(&[0, 1])), (mi(&[0, 0]), mi(&[1, 1]))] {
            let single: Complex<f64> = coeff(&f, &a, &b, &rule).unwrap();
            assert_abs_diff_eq!((single - c.get(&a, &b).unwrap()).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn position_operator() {
        let x = SymbolExpr::parse("x1", 1).unwrap();
        let c = coeff_matrix::<f64, _>(&x, 2, Quadrature::Auto).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(c.at(0, 1).re, s, epsilon = 1e-13);
        assert_abs_diff_eq!(c.at(1, 0).re, s, epsilon = 1e-13);
        assert_abs_diff_eq!(c.at(1, 2).re, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(c.at(0, 0).norm() + c.at(0, 2).norm() + c.at(1, 1).norm(), 0.0, epsilon = 1e-13);
        let high = coeff_matrix::<f64, _>(&x, 2, Quadrature::Fixed(40)).unwrap();
        assert!(c.max_abs_diff(&high).unwrap() < 1e-12);
        let (_, residual) = block_extract(&c);
        assert!(residual >= s - 1e-12);
    }

    #[test]
    fn rank_one_law_small() {
        let a = mi(&[2]);
        let b = mi(&[1]);
        let phi = phi_closed_form::<f64>(&a, &b).unwrap();
        let c = coeff_matrix(&phi, 3, Quadrature::Auto).unwrap();
        let e = CoefficientMatrix::elementary(1, 3, &a, &b).unwrap();
        assert!(c.max_abs_diff(&e).unwrap() < 1e-10);
        let w = PhasePoint::new(vec![0.3], vec![-0.8]).unwrap();
        let r = reconstruct(&e, &w).unwrap();
        assert_abs_diff_eq!((r - phi.eval(&w)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn hermitian_and_linear() {
        let f = SymbolExpr::parse("x1*xi1 + 3*x2^2 - xi1*x2", 2).unwrap();
        let g = SymbolExpr::parse("z1*zb2", 2).unwrap();
        let cf = coeff_matrix::<f64, _>(&f, 3, Quadrature::Fixed(8)).unwrap();
        assert!(cf.hermitian_defect() < 1e-10);
        let cg = coeff_matrix::<f64, _>(&g, 3, Quadrature::Fixed(8)).unwrap();
        let fg = SymbolExpr::parse("2*(x1*xi1 + 3*x2^2 - xi1*x2) - 0.5i*z1*zb2", 2).unwrap();
        let cfg = coeff_matrix::<f64, _>(&fg, 3, Quadrature::Fixed(8)).unwrap();
        let lin = cf.linear_combination(Complex::new(2.0, 0.0), &cg, Complex::new(0.0, -0.5)).unwrap();
        assert!(cfg.max_abs_diff(&lin).unwrap() < 1e-12);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let f = SymbolExpr::parse("x1^3*xi2 + z1*zb2^2", 2).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| coeff_matrix::<f64, _>(&f, 3, Quadrature::Auto).unwrap())
        };
        let a = run(1);
        let b = run(4);
        assert!(a
            .entries()
            .iter()
            .zip(b.entries())
            .all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
    }

    #[test]
    fn single_precision_h0() {
        let h = catalog(&CatalogEntry::H0, 1).unwrap();
        let c = coeff_matrix::<f32, _>(&h, 3, Quadrature::Auto).unwrap();
        for k in 0..=3 {
            assert!((c.at(k, k).re - (k as f32 + 0.5)).abs() < 1e-4);
        }
    }
}
