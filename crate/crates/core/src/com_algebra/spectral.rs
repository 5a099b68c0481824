use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::indexing::{shell_dim, ORDERING_TAG};
use crate::quantizer::NORMALIZATION_TAG;
use crate::scalar::Real;

use super::{hermitian_eigenvalues, BlockOperator};

/// Relative slack when comparing the upper and lower halves of a shell trend.
const TREND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellSpectrum<T> {
    pub k: usize,
    pub dim: usize,
    /// Ascending, with multiplicity.
    pub eigenvalues: Vec<T>,
    /// `max |eigenvalue|`.
    pub norm: T,
}

/// Per-shell spectra of a Hermitian block operator and their union.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralData<T> {
    pub n: usize,
    pub cutoff: usize,
    pub shells: Vec<ShellSpectrum<T>>,
    /// Multiset union of the shell spectra, ascending.
    pub union: Vec<T>,
    /// Largest per-shell norm over the computed shells.
    pub sup_estimate: T,
    /// Upper-half shells have strictly larger norms than the lower half.
    pub unbounded_trend: bool,
}

/// True when `max(upper half) > max(lower half)·(1 + slack)`.
fn rising<T: Real>(values: &[T]) -> bool {
    if values.len() < 2 {
        return false;
    }
    let mid = (values.len() - 1) / 2;
    let lower = values[..=mid].iter().copied().fold(T::zero(), T::max);
    let upper = values[mid + 1..].iter().copied().fold(T::zero(), T::max);
    upper > lower * (T::one() + T::lit(TREND_SLACK))
}

/// Eigenvalues of every shell block.
pub fn spectrum<T: Real>(f: &BlockOperator<T>) -> Result<SpectralData<T>> {
    if let Some((shell, defect)) = f.hermitian_violation() {
        return Err(Error::NotHermitian { shell, defect });
    }
    let shells = f
        .blocks()
        .par_iter()
        .enumerate()
        .map(|(k, b)| {
            let eigenvalues = hermitian_eigenvalues(b)?;
            let norm = eigenvalues.iter().map(|e| e.abs()).fold(T::zero(), T::max);
            Ok(ShellSpectrum { k, dim: b.rows(), eigenvalues, norm })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut union: Vec<T> = shells.iter().flat_map(|s| s.eigenvalues.iter().copied()).collect();
    union.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let norms: Vec<T> = shells.iter().map(|s| s.norm).collect();
    Ok(SpectralData {
        n: f.n(),
        cutoff: f.cutoff(),
        sup_estimate: norms.iter().copied().fold(T::zero(), T::max),
        unbounded_trend: rising(&norms),
        shells,
        union,
    })
}

impl<T: Real> SpectralData<T> {
    pub fn to_json(&self, symbol: &str, quadrature_order: usize) -> serde_json::Value {
        let f = |x: T| x.as_f64() + 0.0;
        serde_json::json!({
            "version": crate::VERSION,
            "normalization": NORMALIZATION_TAG,
            "ordering": ORDERING_TAG,
            "quadrature_order": quadrature_order,
            "symbol": symbol,
            "n": self.n,
            "cutoff": self.cutoff,
            "shells": self.shells.iter().map(|s| serde_json::json!({
                "k": s.k,
                "dim": s.dim,
                "eigenvalues": s.eigenvalues.iter().map(|&e| f(e)).collect::<Vec<_>>(),
                "norm": f(s.norm),
            })).collect::<Vec<_>>(),
            "union": self.union.iter().map(|&e| f(e)).collect::<Vec<_>>(),
            "sup_estimate": f(self.sup_estimate),
            "unbounded_trend": self.unbounded_trend,
        })
    }

    /// `k,eigenvalue` rows, one per eigenvalue, shells ascending.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,eigenvalue\n");
        for s in &self.shells {
            for e in &s.eigenvalues {
                out.push_str(&format!("{},{:?}\n", s.k, e.as_f64() + 0.0));
            }
        }
        out
    }
}

/// Finite-cutoff evidence for the boundedness criterion
/// `sup_{|α|=|β|} |c_{α,β}| · |α|^{n-1} < ∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessReport<T> {
    /// `d_k · max_{|α|=|β|=k} |c_{α,β}|`, an upper bound for `‖Op^k(f)‖`.
    pub upper_bounds: Vec<T>,
    /// `max_{|α|=|β|=k} |c_{α,β}| · k^{n-1}`.
    pub weighted_max: Vec<T>,
    /// The weighted maxima do not rise from the lower to the upper half of
    /// the observed shells. A trend statement, not a proof.
    pub criterion_holds: bool,
    /// Largest per-shell operator norm, when the blocks are Hermitian.
    pub sup_estimate: Option<T>,
}

pub fn boundedness_check<T: Real>(f: &BlockOperator<T>) -> BoundednessReport<T> {
    let n = f.n();
    let maxima: Vec<T> = f.blocks().iter().map(|b| b.max_abs()).collect();
    let upper_bounds = maxima.iter().enumerate().map(|(k, &m)| T::from_usize_lossy(shell_dim(n, k)) * m).collect();
    let weighted_max: Vec<T> =
        maxima.iter().enumerate().map(|(k, &m)| m * T::from_usize_lossy(k).powi(n as i32 - 1)).collect();
    let sup_estimate = if f.is_hermitian() { spectrum(f).ok().map(|s| s.sup_estimate) } else { None };
    BoundednessReport { criterion_holds: !rising(&weighted_max), upper_bounds, weighted_max, sup_estimate }
}
