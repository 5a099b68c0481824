//! Wigner transforms of Hermite basis pairs, `Φ^{α,β} = W(φ_β, φ_α)`, with
//!
//! ```text
//! W(u, v)(x, ξ) = ∫ e^{-iξ·p} u(x + p/2) conj(v(x - p/2)) dp
//! ```
//!
//! (no `2π` prefactor). Two evaluators are provided: [`wigner_oracle`], which
//! integrates the definition by quadrature, and [`phi_closed_form`], which uses
//! the per-axis factorization
//!
//! ```text
//! Φ^{a,b}(x, ξ) = 2 (-1)^min √(min!/max!) (√2 ζ)^{|a-b|} L_min^{(|a-b|)}(2|z|²) e^{-|z|²}
//! ```
//!
//! with `z = x + iξ`, `ζ = z` when `a ≥ b` and `ζ = z̄` otherwise. Every constant
//! in that formula is pinned by agreement with the oracle.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::{gauss_hermite_rule, hermite_polynomials_normalized, QuadratureRule};
use crate::indexing::MultiIndex;
use crate::scalar::Real;

/// Sign σ in the flow covariance `Φ^{α,β} ∘ φ_t = e^{iσt(|α|-|β|)} Φ^{α,β}`
/// for the flow `φ_t(z) = e^{-it} z`.
pub const FLOW_PHASE_SIGN: i32 = -1;

/// Default Gauss–Hermite order for the oracle integral on `[-4, 4]` grids.
pub const ORACLE_ORDER: usize = 96;

/// A point `(x, ξ) ∈ R^{2n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint<T> {
    pub x: Vec<T>,
    pub xi: Vec<T>,
}

impl<T: Real> PhasePoint<T> {
    pub fn new(x: Vec<T>, xi: Vec<T>) -> Result<Self> {
        if x.len() != xi.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: xi.len() });
        }
        if x.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(Self { x, xi })
    }

    pub fn origin(n: usize) -> Self {
        Self { x: vec![T::zero(); n], xi: vec![T::zero(); n] }
    }

    /// Builds a point from complex coordinates `z_k = x_k + iξ_k`.
    pub fn from_complex(z: &[Complex<T>]) -> Self {
        Self { x: z.iter().map(|c| c.re).collect(), xi: z.iter().map(|c| c.im).collect() }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn z(&self, k: usize) -> Complex<T> {
        Complex::new(self.x[k], self.xi[k])
    }

    pub fn complex_coords(&self) -> Vec<Complex<T>> {
        (0..self.dim()).map(|k| self.z(k)).collect()
    }

    /// `‖x‖² + ‖ξ‖²`.
    pub fn norm_sqr(&self) -> T {
        self.x.iter().chain(&self.xi).map(|&v| v * v).sum()
    }
}

/// Per-axis factor of `Φ^{α,β}`: angular monomial, radial polynomial, Gaussian.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisFactor<T> {
    a: usize,
    b: usize,
    prefactor: T,
}

impl<T: Real> AxisFactor<T> {
    pub(crate) fn new(a: usize, b: usize) -> Self {
        let (lo, hi) = (a.min(b), a.max(b));
        // 2 (-1)^lo sqrt(lo!/hi!) 2^{(hi-lo)/2}, accumulated as a product to avoid overflow
        let mut pre = T::lit(2.0);
        for j in (lo + 1)..=hi {
            pre *= (T::lit(2.0) / T::from_usize_lossy(j)).sqrt();
        }
        if lo % 2 == 1 {
            pre = -pre;
        }
        Self { a, b, prefactor: pre }
    }

    /// Signed exponent `a - b`: positive means `z^{a-b}`, negative means `z̄^{b-a}`.
    pub fn angular_exponent(&self) -> i64 {
        self.a as i64 - self.b as i64
    }

    pub fn prefactor(&self) -> T {
        self.prefactor
    }

    /// Coefficients in `s = |z|²` of `L_min^{(d)}(2s)`, lowest degree first,
    /// generated by the three-term Laguerre recurrence on polynomials.
    pub fn radial_coefficients(&self) -> Vec<T> {
        let lo = self.a.min(self.b);
        let d = T::from_usize_lossy(self.a.abs_diff(self.b));
        let mut prev: Vec<T> = vec![];
        let mut cur: Vec<T> = vec![T::one()];
        for j in 0..lo {
            let jf = T::from_usize_lossy(j);
            // (j+1) L_{j+1} = (2j+1+d - 2s) L_j - (j+d) L_{j-1}
            let mut next = vec![T::zero(); cur.len() + 1];
            for (i, &c) in cur.iter().enumerate() {
                next[i] += (T::lit(2.0) * jf + T::one() + d) * c;
                next[i + 1] -= T::lit(2.0) * c;
            }
            for (i, &c) in prev.iter().enumerate() {
                next[i] -= (jf + d) * c;
            }
            let inv = T::one() / (jf + T::one());
            next.iter_mut().for_each(|c| *c *= inv);
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Radial factor `L_min^{(d)}(2s)` evaluated by the numeric recurrence.
    fn radial(&self, s: T) -> T {
        let lo = self.a.min(self.b);
        let d = T::from_usize_lossy(self.a.abs_diff(self.b));
        let y = T::lit(2.0) * s;
        let mut prev = T::zero();
        let mut cur = T::one();
        for j in 0..lo {
            let jf = T::from_usize_lossy(j);
            let next = ((T::lit(2.0) * jf + T::one() + d - y) * cur - (jf + d) * prev) / (jf + T::one());
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Factor value with the Gaussian `e^{-(x²+ξ²)}` removed.
    pub fn eval_reduced(&self, x: T, xi: T) -> Complex<T> {
        let z = Complex::new(x, xi);
        let s = x * x + xi * xi;
        let zeta = if self.a >= self.b { z } else { z.conj() };
        let ang = zeta.powu(self.a.abs_diff(self.b) as u32);
        ang * (self.prefactor * self.radial(s))
    }

    pub fn eval(&self, x: T, xi: T) -> Complex<T> {
        self.eval_reduced(x, xi) * (-(x * x + xi * xi)).exp()
    }
}

/// Closed-form evaluator for `Φ^{α,β}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerBasisFunction<T> {
    alpha: MultiIndex,
    beta: MultiIndex,
    axes: Vec<AxisFactor<T>>,
}

impl<T: Real> WignerBasisFunction<T> {
    pub fn alpha(&self) -> &MultiIndex {
        &self.alpha
    }

    pub fn beta(&self) -> &MultiIndex {
        &self.beta
    }

    pub fn dim(&self) -> usize {
        self.alpha.dim()
    }

    pub fn axes(&self) -> &[AxisFactor<T>] {
        &self.axes
    }

    /// `|α| - |β|`; the function is flow invariant iff this is zero.
    pub fn shell_gap(&self) -> i64 {
        self.alpha.degree() as i64 - self.beta.degree() as i64
    }

    pub fn eval(&self, w: &PhasePoint<T>) -> Complex<T> {
        self.eval_reduced(w) * (-w.norm_sqr()).exp()
    }

    /// Value with the Gaussian `e^{-(‖x‖²+‖ξ‖²)}` stripped off.
    pub fn eval_reduced(&self, w: &PhasePoint<T>) -> Complex<T> {
        self.axes
            .iter()
            .enumerate()
            .fold(Complex::new(T::one(), T::zero()), |acc, (k, f)| acc * f.eval_reduced(w.x[k], w.xi[k]))
    }
}

/// Builds the closed-form evaluator of `Φ^{α,β}`; shells of `α` and `β` may differ.
pub fn phi_closed_form<T: Real>(alpha: &MultiIndex, beta: &MultiIndex) -> Result<WignerBasisFunction<T>> {
    if alpha.dim() != beta.dim() {
        return Err(Error::DimensionMismatch { expected: alpha.dim(), found: beta.dim() });
    }
    let axes = alpha.components().iter().zip(beta.components()).map(|(&a, &b)| AxisFactor::new(a, b)).collect();
    Ok(WignerBasisFunction { alpha: alpha.clone(), beta: beta.clone(), axes })
}

/// `Φ^{α,β}(w)` by direct quadrature of the defining integral, axis by axis.
///
/// With `p = 2t` each axis reads
/// `2 e^{-x²} ∫ e^{-2iξt} h_β(x+t) h_α(x-t) e^{-t²} dt`, where `h_m = φ_m e^{t²/2}`;
/// the `e^{-t²}` goes into the Gauss–Hermite weights.
pub fn wigner_oracle<T: Real>(
    alpha: &MultiIndex,
    beta: &MultiIndex,
    w: &PhasePoint<T>,
    rule: &QuadratureRule<T>,
) -> Result<Complex<T>> {
    if alpha.dim() != beta.dim() {
        return Err(Error::DimensionMismatch { expected: alpha.dim(), found: beta.dim() });
    }
    if alpha.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: alpha.dim(), found: w.dim() });
    }
    let mut acc = Complex::new(T::one(), T::zero());
    for (k, (&a, &b)) in alpha.components().iter().zip(beta.components()).enumerate() {
        let (x, xi) = (w.x[k], w.xi[k]);
        let mut sum = Complex::new(T::zero(), T::zero());
        for (t, wt) in rule.iter() {
            let hb = hermite_polynomials_normalized(b, x + t)[b];
            let ha = hermite_polynomials_normalized(a, x - t)[a];
            let phase = Complex::from_polar(T::one(), -T::lit(2.0) * xi * t);
            sum += phase * (wt * hb * ha);
        }
        acc = acc * sum * (T::lit(2.0) * (-x * x).exp());
    }
    Ok(acc)
}

/// Oracle with the default rule of order [`ORACLE_ORDER`].
pub fn wigner_oracle_default(alpha: &MultiIndex, beta: &MultiIndex, w: &PhasePoint<f64>) -> Result<Complex<f64>> {
    let rule = gauss_hermite_rule::<f64>(ORACLE_ORDER)?;
    wigner_oracle(alpha, beta, w, &rule)
}

/// Phase picked up by `Φ^{α,β}` along the flow: `e^{iσt(|α|-|β|)}`.
pub fn flow_phase<T: Real>(shell_gap: i64, t: T) -> Complex<T> {
    let angle = T::lit(FLOW_PHASE_SIGN as f64) * t * T::lit(shell_gap as f64);
    Complex::from_polar(T::one(), angle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexing::IndexSet;
    use crate::symbols::classical_flow;
    use approx::assert_abs_diff_eq;

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    fn pt(x: &[f64], xi: &[f64]) -> PhasePoint<f64> {
        PhasePoint::new(x.to_vec(), xi.to_vec()).unwrap()
    }

    #[test]
    fn oracle_ground_state_and_odd_case() {
        let v = wigner_oracle_default(&mi(&[0]), &mi(&[0]), &pt(&[0.0], &[0.0])).unwrap();
        assert_abs_diff_eq!(v.re, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
        let v = wigner_oracle_default(&mi(&[0]), &mi(&[1]), &pt(&[0.0], &[0.0])).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn oracle_conjugate_symmetry() {
        let w = pt(&[0.7, -1.2], &[0.3, 0.9]);
        let a = mi(&[2, 1]);
        let b = mi(&[0, 3]);
        let ab = wigner_oracle_default(&a, &b, &w).unwrap();
        let ba = wigner_oracle_default(&b, &a, &w).unwrap();
        assert_abs_diff_eq!(ab.re, ba.re, epsilon = 1e-12);
        assert_abs_diff_eq!(ab.im, -ba.im, epsilon = 1e-12);
    }

    #[test]
    fn ground_state_closed_form() {
        for n in 1..=3 {
            let phi = phi_closed_form::<f64>(&MultiIndex::zero(n), &MultiIndex::zero(n)).unwrap();
            let v = phi.eval(&PhasePoint::origin(n));
            assert_abs_diff_eq!(v.re, 2f64.powi(n as i32), epsilon = 1e-14);
            let w = pt(&vec![0.5; n], &vec![-0.25; n]);
            let want = 2f64.powi(n as i32) * (-w.norm_sqr()).exp();
            assert_abs_diff_eq!(phi.eval(&w).re, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn closed_form_matches_oracle_n1() {
        let rule = gauss_hermite_rule::<f64>(ORACLE_ORDER).unwrap();
        let grid: Vec<f64> = (0..9).map(|i| -4.0 + i as f64).collect();
        for a in 0..=5 {
            for b in 0..=5 {
                let f = phi_closed_form::<f64>(&mi(&[a]), &mi(&[b])).unwrap();
                for &x in &grid {
                    for &xi in &grid {
                        let w = pt(&[x], &[xi]);
                        let d = f.eval(&w) - wigner_oracle(&mi(&[a]), &mi(&[b]), &w, &rule).unwrap();
                        assert!(d.norm() < 1e-8, "a={a} b={b} x={x} xi={xi}: {}", d.norm());
                    }
                }
            }
        }
    }

    #[test]
    fn product_structure() {
        let w = pt(&[1.0, -1.0], &[0.5, 2.0]);
        let full = phi_closed_form::<f64>(&mi(&[1, 1]), &mi(&[1, 1])).unwrap().eval(&w);
        let f1 = phi_closed_form::<f64>(&mi(&[1]), &mi(&[1])).unwrap().eval(&pt(&[1.0], &[0.5]));
        let f2 = phi_closed_form::<f64>(&mi(&[1]), &mi(&[1])).unwrap().eval(&pt(&[-1.0], &[2.0]));
        assert_abs_diff_eq!((full - f1 * f2).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn flow_covariance_example() {
        let f = phi_closed_form::<f64>(&mi(&[2]), &mi(&[0])).unwrap();
        let w = pt(&[1.0], &[0.5]);
        let t = 0.7;
        let moved = f.eval(&classical_flow(t, &w));
        let want = flow_phase(2, t) * f.eval(&w);
        assert_abs_diff_eq!((moved - want).norm(), 0.0, epsilon = 1e-12);
        // the printed +sign corresponds to running the flow backwards
        let back = f.eval(&classical_flow(-t, &w));
        let plus = Complex::from_polar(1.0, 2.0 * t) * f.eval(&w);
        assert_abs_diff_eq!((back - plus).norm(), 0.0, epsilon = 1e-12);
        assert!((moved - plus).norm() > 1e-3);
    }

    #[test]
    fn conjugate_symmetry_closed_form() {
        let set = IndexSet::new(2, 3).unwrap();
        let w = pt(&[0.3, -0.8], &[1.1, 0.2]);
        for a in set.indices() {
            for b in set.indices() {
                let ab = phi_closed_form::<f64>(a, b).unwrap().eval(&w);
                let ba = phi_closed_form::<f64>(b, a).unwrap().eval(&w);
                assert_abs_diff_eq!((ab - ba.conj()).norm(), 0.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn radial_coefficients_agree_with_recurrence() {
        for a in 0..6 {
            for b in 0..6 {
                let f = AxisFactor::<f64>::new(a, b);
                let coeffs = f.radial_coefficients();
                for s in [0.0, 0.3, 1.7, 4.0] {
                    let horner = coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c);
                    assert_abs_diff_eq!(horner, f.radial(s), epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn high_degree_is_finite() {
        let f = phi_closed_form::<f64>(&mi(&[40]), &mi(&[37])).unwrap();
        for x in [-4.0, 0.0, 2.5, 4.0] {
            let v = f.eval(&pt(&[x], &[x / 2.0]));
            assert!(v.re.is_finite() && v.im.is_finite());
            assert!(v.norm() <= 2.0 + 1e-9);
        }
    }

    #[test]
    fn single_precision_closed_form() {
        let f = phi_closed_form::<f32>(&mi(&[2]), &mi(&[1])).unwrap();
        let g = phi_closed_form::<f64>(&mi(&[2]), &mi(&[1])).unwrap();
        let v32 = f.eval(&PhasePoint::new(vec![0.4f32], vec![-0.6f32]).unwrap());
        let v64 = g.eval(&pt(&[0.4], &[-0.6]));
        assert!((v32.re as f64 - v64.re).abs() < 1e-5);
        assert!((v32.im as f64 - v64.im).abs() < 1e-5);
    }
}
