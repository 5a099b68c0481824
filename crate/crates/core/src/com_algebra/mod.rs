//! Block operators: the shell-diagonal part of a coefficient matrix, one
//! `d_k × d_k` matrix per energy shell, and the algebra they carry.
//!
//! Blocks use the coefficient layout of [`CoefficientMatrix`]: row `α`,
//! column `β`, entry `c_{α,β}`. In that layout the Moyal product of two
//! shell-respecting symbols is the plain matrix product `C·D` per shell, so
//! `Φ^{α,β} ⋆ Φ^{α',β'} = δ_{α',β} Φ^{α,β'}` holds literally. Since
//! `Op(f)φ_α = Σ_β c_{α,β} φ_β`, the product `C·D` is the coefficient matrix
//! of the operator composition `Op(g)∘Op(f)`.

mod jacobi;
mod matrix;
mod spectral;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::indexing::{shell_dim, IndexSet, ORDERING_TAG};
use crate::quantizer::{CoefficientMatrix, NORMALIZATION_TAG};
use crate::scalar::Real;

pub use jacobi::{hermitian_eigenvalues, MAX_SWEEPS};
pub use matrix::CMatrix;
pub use spectral::{boundedness_check, spectrum, BoundednessReport, ShellSpectrum, SpectralData};

/// Absolute Hermiticity tolerance for the flag, scaled by `max(1, max |entry|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Shell blocks `Op^k(f)` for `k = 0..=cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator<T> {
    n: usize,
    blocks: Vec<CMatrix<T>>,
    hermitian: bool,
}

impl<T: Real> BlockOperator<T> {
    /// Checks block sizes against `d_k` and sets the Hermitian flag.
    pub fn new(n: usize, blocks: Vec<CMatrix<T>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if blocks.is_empty() {
            return Err(Error::InvalidArgument("a block operator needs at least shell 0".into()));
        }
        for (k, b) in blocks.iter().enumerate() {
            let d = shell_dim(n, k);
            if b.rows() != d || b.cols() != d {
                return Err(Error::DimensionMismatch { expected: d, found: b.rows().max(b.cols()) });
            }
        }
        let hermitian = first_non_hermitian(&blocks).is_none();
        Ok(Self { n, blocks, hermitian })
    }

    pub fn identity(n: usize, cutoff: usize) -> Result<Self> {
        Self::new(n, (0..=cutoff).map(|k| CMatrix::identity(shell_dim(n, k))).collect())
    }

    pub fn zeros(n: usize, cutoff: usize) -> Result<Self> {
        Self::new(n, (0..=cutoff).map(|k| CMatrix::zeros(shell_dim(n, k), shell_dim(n, k))).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn blocks(&self) -> &[CMatrix<T>] {
        &self.blocks
    }

    pub fn shell(&self, k: usize) -> &CMatrix<T> {
        &self.blocks[k]
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// `(shell, defect)` of the first block failing the Hermiticity test.
    pub fn hermitian_violation(&self) -> Option<(usize, f64)> {
        first_non_hermitian(&self.blocks)
    }

    /// Per-shell conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self { n: self.n, blocks: self.blocks.iter().map(CMatrix::adjoint).collect(), hermitian: self.hermitian }
    }

    /// Largest entrywise difference to another operator of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        check_compatible(self, other)?;
        Ok(self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.sub(b).max_abs()).fold(T::zero(), T::max))
    }

    /// Embeds the blocks into a full coefficient matrix with zero off-shell entries.
    pub fn to_coefficient_matrix(&self, symbol: impl Into<String>) -> Result<CoefficientMatrix<T>> {
        let index = IndexSet::new(self.n, self.cutoff())?;
        let mut c = CoefficientMatrix::zeros_with_index(index, symbol);
        for (k, b) in self.blocks.iter().enumerate() {
            let r = c.index_set().shell_range(k);
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    c.set(r.start + i, r.start + j, b[(i, j)]);
                }
            }
        }
        Ok(c)
    }

    /// Blocks as `[re, im]` pairs, row-major per shell, with the usual tags.
    pub fn to_json(&self, symbol: &str, quadrature_order: usize) -> serde_json::Value {
        let f = |x: T| x.as_f64() + 0.0;
        let blocks: Vec<_> = self
            .blocks
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let entries: Vec<[f64; 2]> = b.as_slice().iter().map(|c| [f(c.re), f(c.im)]).collect();
                serde_json::json!({ "k": k, "dim": b.rows(), "entries": entries })
            })
            .collect();
        serde_json::json!({
            "version": crate::VERSION,
            "normalization": NORMALIZATION_TAG,
            "ordering": ORDERING_TAG,
            "quadrature_order": quadrature_order,
            "symbol": symbol,
            "n": self.n,
            "cutoff": self.cutoff(),
            "hermitian": self.hermitian,
            "blocks": blocks,
        })
    }
}

fn first_non_hermitian<T: Real>(blocks: &[CMatrix<T>]) -> Option<(usize, f64)> {
    let scale = blocks.iter().map(CMatrix::max_abs).fold(T::one(), T::max);
    let tol = T::tol(HERMITIAN_TOL) * scale;
    blocks.iter().enumerate().find_map(|(k, b)| {
        let d = b.hermitian_defect();
        (d > tol).then(|| (k, d.as_f64()))
    })
}

fn check_compatible<T: Real>(f: &BlockOperator<T>, g: &BlockOperator<T>) -> Result<()> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch { expected: f.n, found: g.n });
    }
    if f.cutoff() != g.cutoff() {
        return Err(Error::CutoffMismatch { left: f.cutoff(), right: g.cutoff() });
    }
    Ok(())
}

/// Moyal product of two block operators: `F_k · G_k` on every shell.
///
/// Exact for constants of motion, whose blocks never couple different shells.
pub fn moyal_block<T: Real>(f: &BlockOperator<T>, g: &BlockOperator<T>) -> Result<BlockOperator<T>> {
    check_compatible(f, g)?;
    let blocks = f.blocks.par_iter().zip(&g.blocks).map(|(a, b)| a.matmul(b)).collect();
    BlockOperator::new(f.n, blocks)
}

/// `F ⋆ G − G ⋆ F` per shell.
pub fn commutator<T: Real>(f: &BlockOperator<T>, g: &BlockOperator<T>) -> Result<BlockOperator<T>> {
    check_compatible(f, g)?;
    let blocks = f.blocks.par_iter().zip(&g.blocks).map(|(a, b)| a.matmul(b).sub(&b.matmul(a))).collect();
    BlockOperator::new(f.n, blocks)
}

/// `c_{α,β} ↦ e^{it(|α|−|β|)} c_{α,β}`.
///
/// With the flow `φ_t(z) = e^{-it}z` this is the coefficient matrix of
/// `Op(f ∘ φ_{-t})`; block-diagonal matrices are fixed points.
pub fn conjugate_evolution<T: Real>(c: &CoefficientMatrix<T>, t: T) -> CoefficientMatrix<T> {
    let index = c.index_set();
    let shells: Vec<usize> = (0..index.len()).map(|i| index.shell_of(i)).collect();
    c.map_entries(|i, j, v| {
        let gap = shells[i] as i64 - shells[j] as i64;
        if gap == 0 {
            v
        } else {
            v * Complex::from_polar(T::one(), t * T::lit(gap as f64))
        }
    })
}

/// Weinstein average in coefficient form: keep the `|α| = |β|` blocks.
///
/// This is at once the classical orbit average of the symbol and the quantum
/// average `(1/2π)∫ e^{itH₀} F e^{-itH₀} dt`.
pub fn weinstein_average_coeff<T: Real>(c: &CoefficientMatrix<T>) -> BlockOperator<T> {
    crate::quantizer::block_extract(c).0
}
