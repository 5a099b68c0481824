//! Constants of motion of the quantum harmonic oscillator, computed in the
//! Hermite basis.
//!
//! A phase-space symbol `f` is quantized into its coefficient matrix
//! `c_{α,β} = ⟨Op(f)φ_α, φ_β⟩ = (2π)^{-n} ∫ f · W(φ_α, φ_β)`, normalized so that
//! `Op(1)` is the identity. Constants of motion (symbols invariant under the
//! oscillator flow) have block-diagonal matrices with one block per energy
//! shell `|α| = k`; [`com_algebra`] works with those blocks directly.
//!
//! All numerical kernels are generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases below name the double-precision instances used by the CLI.

pub mod com_algebra;
pub mod error;
pub mod hermite;
pub mod indexing;
pub mod quantizer;
pub mod scalar;
pub mod symbols;
pub mod verify;
pub mod wigner;

pub use com_algebra::{
    boundedness_check, commutator, conjugate_evolution, hermitian_eigenvalues, moyal_block, spectrum,
    weinstein_average_coeff, BlockOperator, BoundednessReport, CMatrix, SpectralData,
};
pub use error::{Error, ParseError, Result};
pub use hermite::{gauss_hermite_rule, hermite_eval, HermiteBasis, QuadratureRule};
pub use indexing::{index_rank, shell_dim, shell_enumerate, IndexSet, MultiIndex, Shell, ORDERING_TAG};
pub use quantizer::{
    block_extract, coeff, coeff_coarea, coeff_matrix, growth_diagnostic, reconstruct, CoareaResult, CoefficientMatrix,
    GrowthReport, Quadrature, SphereRule, NORMALIZATION_TAG,
};
pub use scalar::Real;
pub use symbols::{
    catalog, classical_average, classical_flow, flow_invariance_check, CatalogEntry, Expr, FlowMap, PhaseSymbol,
    SymbolClass, SymbolExpr,
};
pub use wigner::{phi_closed_form, wigner_oracle, PhasePoint, WignerBasisFunction};

/// Library version embedded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;
pub type PhasePoint64 = PhasePoint<f64>;
pub type PhasePoint32 = PhasePoint<f32>;
pub type QuadratureRule64 = QuadratureRule<f64>;
pub type QuadratureRule32 = QuadratureRule<f32>;
pub type WignerBasisFunction64 = WignerBasisFunction<f64>;
pub type WignerBasisFunction32 = WignerBasisFunction<f32>;
pub type CoefficientMatrix64 = CoefficientMatrix<f64>;
pub type CoefficientMatrix32 = CoefficientMatrix<f32>;
pub type BlockOperator64 = BlockOperator<f64>;
pub type BlockOperator32 = BlockOperator<f32>;
pub type SpectralData64 = SpectralData<f64>;
