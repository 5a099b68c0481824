use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indexing::{IndexSet, MultiIndex, ORDERING_TAG};
use crate::scalar::Real;

use super::{CoefficientMatrix, NORMALIZATION_TAG};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
    pub re: f64,
    pub im: f64,
}

/// On-disk form of a coefficient matrix; entries row-major in canonical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub version: String,
    pub n: usize,
    pub cutoff: usize,
    pub ordering: String,
    pub normalization: String,
    pub quadrature_order: usize,
    pub symbol: String,
    pub seed: Option<u64>,
    pub entries: Vec<EntryRecord>,
}

impl<T: Real> CoefficientMatrix<T> {
    pub fn to_file(&self) -> CoefficientFile {
        CoefficientFile {
            version: crate::VERSION.to_string(),
            n: self.n(),
            cutoff: self.cutoff(),
            ordering: ORDERING_TAG.to_string(),
            normalization: NORMALIZATION_TAG.to_string(),
            quadrature_order: self.quadrature_order(),
            symbol: self.symbol().to_string(),
            seed: self.seed(),
            entries: self
                .iter()
                .map(|(a, b, c)| EntryRecord {
                    alpha: a.clone(),
                    beta: b.clone(),
                    // + 0.0 folds -0.0 into 0.0
                    re: c.re.as_f64() + 0.0,
                    im: c.im.as_f64() + 0.0,
                })
                .collect(),
        }
    }

    /// Pretty-printed JSON with shortest round-trip floats and a trailing newline.
    pub fn to_json_string(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.to_file())?;
        s.push('\n');
        Ok(s)
    }

    /// Validates tags and that every entry is present in canonical order.
    pub fn from_file(file: &CoefficientFile) -> Result<Self> {
        if file.ordering != ORDERING_TAG {
            return Err(Error::Format(format!("ordering `{}`, expected `{ORDERING_TAG}`", file.ordering)));
        }
        if file.normalization != NORMALIZATION_TAG {
            return Err(Error::Format(format!(
                "normalization `{}`, expected `{NORMALIZATION_TAG}`",
                file.normalization
            )));
        }
        let index = IndexSet::new(file.n, file.cutoff)?;
        let d = index.len();
        if file.entries.len() != d * d {
            return Err(Error::Format(format!("{} entries, expected {}", file.entries.len(), d * d)));
        }
        let mut c = CoefficientMatrix::zeros_with_index(index, file.symbol.clone())
            .with_quadrature_order(file.quadrature_order)
            .with_seed(file.seed);
        for (p, e) in file.entries.iter().enumerate() {
            let (i, j) = (p / d, p % d);
            if &e.alpha != c.index_set().get(i) || &e.beta != c.index_set().get(j) {
                return Err(Error::Format(format!("entry {p} is ({}, {}), out of canonical order", e.alpha, e.beta)));
            }
            c.set(i, j, Complex::new(T::lit(e.re), T::lit(e.im)));
        }
        Ok(c)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }
}
