//! Coefficients of constants of motion as energy-shell integrals.
//!
//! For `|α| = |β|` and a flow-invariant `f`, the integrand `f·Φ^{β,α}` is
//! constant along the circle orbits of the flow, so the phase-space integral
//! splits into a radial integral over the level `λ = h₀` and an integral over
//! the sphere of radius `r = √(2λ)`. The orbit space of that sphere is `CP^{n-1}`;
//! its integral is the sphere integral divided by the orbit length `2πr`, and
//!
//! ```text
//! c_{α,β} = (2π)^{-n} · 2π ∫₀^∞ CP(λ) dλ,   CP(λ) = (1/2πr) ∫_{S_r} f Φ^{β,α} dS.
//! ```
//!
//! With `μ = 2λ = r²` the Gaussian of `Φ` and the volume factor `μ^{n-1}` are
//! handled by a generalized Gauss–Laguerre rule.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermite::{gauss_laguerre_rule, gauss_legendre_rule};
use crate::indexing::MultiIndex;
use crate::scalar::Real;
use crate::symbols::{flow_invariance_check, flow_samples, PhaseSymbol};
use crate::wigner::{phi_closed_form, PhasePoint, WignerBasisFunction};

const INVARIANCE_SEED: u64 = 0x5eed_c0a4;
const INVARIANCE_SAMPLES: usize = 24;

/// Quadrature on the unit sphere `S^{2n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SphereRule {
    /// `n = 1`: equispaced points on the circle.
    Circle { nodes: usize },
    /// `n = 2`: `z₁ = √(1-s) e^{iθ₁}`, `z₂ = √s e^{iθ₂}`, `dS = ½ ds dθ₁ dθ₂`;
    /// trapezoid in both angles and Gauss–Legendre in `s ∈ [0, 1]`.
    Torus { angle_nodes: usize, s_nodes: usize },
    /// Any `n`: seeded uniform samples, reported with a standard error.
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoareaResult<T> {
    pub value: Complex<T>,
    /// Standard error of the Monte Carlo estimate; `None` for deterministic rules.
    pub std_error: Option<T>,
    pub radial_nodes: usize,
    pub sphere: SphereRule,
}

/// Node counts that make the coarea integral exact for a polynomial of
/// degree `degree` (`None`: generous fixed counts), Monte Carlo for `n ≥ 3`.
pub fn default_coarea_nodes(
    n: usize,
    degree: Option<usize>,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    seed: u64,
) -> (usize, SphereRule) {
    let (radial, angle, s) = match degree {
        Some(d) => {
            let total = d + alpha.degree() + beta.degree();
            (total / 2 + 1, total + 1, total / 2 + 1)
        }
        None => (48, 48, 24),
    };
    let sphere = match n {
        1 => SphereRule::Circle { nodes: angle },
        2 => SphereRule::Torus { angle_nodes: angle, s_nodes: s },
        _ => SphereRule::MonteCarlo { samples: 20_000, seed },
    };
    (radial, sphere)
}

/// `|S^{2n-1}| = 2πⁿ/(n-1)!`.
fn sphere_area<T: Real>(n: usize) -> T {
    let fact: T = (1..n).map(T::from_usize_lossy).fold(T::one(), |a, b| a * b);
    T::lit(2.0) * T::PI().powi(n as i32) / fact
}

fn integrand<T: Real, S: PhaseSymbol<T> + ?Sized>(
    f: &S,
    phi: &WignerBasisFunction<T>,
    w: &PhasePoint<T>,
) -> Complex<T> {
    f.eval(w) * phi.eval_reduced(w)
}

/// `∫_{S^{2n-1}} f Φ_red(r u) dS(u)` for the deterministic rules.
fn sphere_integral<T: Real, S: PhaseSymbol<T> + ?Sized>(
    f: &S,
    phi: &WignerBasisFunction<T>,
    r: T,
    rule: SphereRule,
    legendre: &[(T, T)],
) -> Complex<T> {
    let zero = Complex::new(T::zero(), T::zero());
    match rule {
        SphereRule::Circle { nodes } => {
            let h = T::TAU() / T::from_usize_lossy(nodes);
            (0..nodes).fold(zero, |acc, j| {
                let th = h * T::from_usize_lossy(j);
                let w = PhasePoint { x: vec![r * th.cos()], xi: vec![r * th.sin()] };
                acc + integrand(f, phi, &w) * h
            })
        }
        SphereRule::Torus { angle_nodes, .. } => {
            let h = T::TAU() / T::from_usize_lossy(angle_nodes);
            let mut acc = zero;
            for &(s, ws) in legendre {
                let (a1, a2) = (r * (T::one() - s).sqrt(), r * s.sqrt());
                for j1 in 0..angle_nodes {
                    let t1 = h * T::from_usize_lossy(j1);
                    for j2 in 0..angle_nodes {
                        let t2 = h * T::from_usize_lossy(j2);
                        let w = PhasePoint {
                            x: vec![a1 * t1.cos(), a2 * t2.cos()],
                            xi: vec![a1 * t1.sin(), a2 * t2.sin()],
                        };
                        acc += integrand(f, phi, &w) * (T::lit(0.5) * ws * h * h);
                    }
                }
            }
            acc
        }
        SphereRule::MonteCarlo { .. } => unreachable!("Monte Carlo handled by the caller"),
    }
}

/// `c_{α,β}` for a constant of motion through the energy-shell decomposition.
///
/// Requires `|α| = |β|` and a flow-invariant `f`; either violation is an
/// [`Error::Hypothesis`].
pub fn coeff_coarea<T: Real, S: PhaseSymbol<T> + ?Sized>(
    f: &S,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    radial_nodes: usize,
    sphere: SphereRule,
) -> Result<CoareaResult<T>> {
    let n = alpha.dim();
    if beta.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: beta.dim() });
    }
    if f.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
    }
    if alpha.degree() != beta.degree() {
        return Err(Error::Hypothesis(format!(
            "coarea form needs |α| = |β|, got |{alpha}| = {} and |{beta}| = {}",
            alpha.degree(),
            beta.degree()
        )));
    }
    let samples = flow_samples::<T>(n, INVARIANCE_SAMPLES, 2.0, INVARIANCE_SEED);
    let scale = samples.iter().map(|(w, _)| f.eval(w).norm().as_f64()).fold(1.0, f64::max);
    let report = flow_invariance_check(f, &samples, T::tol(1e-9).as_f64() * scale);
    if !report.invariant {
        return Err(Error::Hypothesis(format!("symbol is not flow invariant (deviation {:e})", report.max_deviation)));
    }
    match (sphere, n) {
        (SphereRule::Circle { nodes }, 1) | (SphereRule::Torus { angle_nodes: nodes, .. }, 2) if nodes == 0 => {
            return Err(Error::InvalidArgument("sphere rule needs at least one node".into()));
        }
        (SphereRule::Circle { .. }, 1) | (SphereRule::Torus { .. }, 2) | (SphereRule::MonteCarlo { .. }, _) => {}
        (rule, _) => return Err(Error::InvalidArgument(format!("sphere rule {rule:?} does not apply to n = {n}"))),
    }

    let phi = phi_closed_form::<T>(beta, alpha)?;
    let radial = gauss_laguerre_rule::<T>(radial_nodes, n - 1)?;
    let norm = T::TAU().powi(-(n as i32)) * T::lit(0.5);

    if let SphereRule::MonteCarlo { samples, seed } = sphere {
        if samples < 2 {
            return Err(Error::InvalidArgument("Monte Carlo needs at least two samples".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let area = sphere_area::<T>(n);
        let ys: Vec<Complex<T>> = (0..samples)
            .map(|_| {
                let mut u: Vec<f64> = (0..2 * n).map(|_| StandardNormal.sample(&mut rng)).collect();
                let len = u.iter().map(|v| v * v).sum::<f64>().sqrt();
                u.iter_mut().for_each(|v| *v /= len);
                radial.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (mu, v)| {
                    let r = mu.sqrt();
                    let w = PhasePoint {
                        x: u[..n].iter().map(|&c| T::lit(c) * r).collect(),
                        xi: u[n..].iter().map(|&c| T::lit(c) * r).collect(),
                    };
                    acc + integrand(f, &phi, &w) * (v * area * norm)
                })
            })
            .collect();
        let count = T::from_usize_lossy(samples);
        let mean = ys.iter().fold(Complex::new(T::zero(), T::zero()), |a, &y| a + y) / count;
        let var = ys.iter().map(|y| (y - mean).norm_sqr()).sum::<T>() / (count - T::one());
        return Ok(CoareaResult { value: mean, std_error: Some((var / count).sqrt()), radial_nodes, sphere });
    }

    let legendre: Vec<(T, T)> = match sphere {
        SphereRule::Torus { s_nodes, .. } => gauss_legendre_rule::<T>(s_nodes, 0.0, 1.0)?.iter().collect(),
        _ => Vec::new(),
    };
    // CP(λ) with the Gaussian and the volume factor μ^{n-1} removed
    let cp_reduced = |mu: T| sphere_integral(f, &phi, mu.sqrt(), sphere, &legendre) / T::TAU();
    let value = radial.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (mu, v)| acc + cp_reduced(mu) * v)
        * (norm * T::TAU());
    Ok(CoareaResult { value, std_error: None, radial_nodes, sphere })
}
