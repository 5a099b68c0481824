//! Multi-indices of the Hermite lattice, grouped into degree shells.
//!
//! Within a shell the canonical order is graded-lexicographic descending:
//! the first component decreases, ties are broken on the later components,
//! also descending. For `n = 2, k = 3` this gives `(3,0), (2,1), (1,2), (0,3)`.
//! Every matrix and file in the crate follows this order.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tag written into every output file describing the index order.
pub const ORDERING_TAG: &str = "graded-lex-desc";

/// A tuple of nonnegative integers `α ∈ ℕⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(components: Vec<usize>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(Self(components))
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n.max(1)])
    }

    pub fn components(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α|`, the component sum.
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// All multi-indices of a fixed degree, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shell {
    n: usize,
    k: usize,
    indices: Vec<MultiIndex>,
}

impl Shell {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }
}

/// `C(a, b)` in `u128`; exact for every size this crate can enumerate.
pub fn binomial(a: usize, b: usize) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Shell dimension `d_k = C(n+k-1, k)`.
pub fn shell_dim(n: usize, k: usize) -> usize {
    if n == 0 {
        return 0;
    }
    binomial(n + k - 1, k) as usize
}

/// Number of ways to write `total` as an ordered sum of `parts` nonnegative integers.
fn compositions(parts: usize, total: usize) -> usize {
    if parts == 0 {
        return usize::from(total == 0);
    }
    shell_dim(parts, total)
}

/// Enumerates the degree-`k` shell of `ℕⁿ` in canonical order.
pub fn shell_enumerate(n: usize, k: usize) -> Result<Shell> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut indices = Vec::with_capacity(shell_dim(n, k));
    let mut scratch = vec![0usize; n];
    fill_shell(&mut scratch, 0, k, &mut indices);
    Ok(Shell { n, k, indices })
}

fn fill_shell(scratch: &mut [usize], pos: usize, remaining: usize, out: &mut Vec<MultiIndex>) {
    if pos + 1 == scratch.len() {
        scratch[pos] = remaining;
        out.push(MultiIndex(scratch.to_vec()));
        return;
    }
    for v in (0..=remaining).rev() {
        scratch[pos] = v;
        fill_shell(scratch, pos + 1, remaining - v, out);
    }
}

/// Returns `(|α|, position of α inside its shell)`.
pub fn index_rank(alpha: &MultiIndex) -> (usize, usize) {
    let n = alpha.dim();
    let k = alpha.degree();
    let mut remaining = k;
    let mut position = 0;
    for (i, &a) in alpha.components().iter().enumerate() {
        let tail_parts = n - i - 1;
        // every tuple whose i-th component exceeds `a` comes first
        for v in (a + 1)..=remaining {
            position += compositions(tail_parts, remaining - v);
        }
        remaining -= a;
    }
    (k, position)
}

/// All multi-indices with `|α| ≤ cutoff`, shells concatenated in increasing degree.
#[derive(Debug, Clone)]
pub struct IndexSet {
    n: usize,
    cutoff: usize,
    indices: Vec<MultiIndex>,
    shell_offsets: Vec<usize>,
    lookup: HashMap<MultiIndex, usize>,
}

impl PartialEq for IndexSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.cutoff == other.cutoff
    }
}

impl IndexSet {
    pub fn new(n: usize, cutoff: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut indices = Vec::new();
        let mut shell_offsets = Vec::with_capacity(cutoff + 2);
        for k in 0..=cutoff {
            shell_offsets.push(indices.len());
            indices.extend(shell_enumerate(n, k)?.indices);
        }
        shell_offsets.push(indices.len());
        let lookup = indices.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        Ok(Self { n, cutoff, indices, shell_offsets, lookup })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn get(&self, pos: usize) -> &MultiIndex {
        &self.indices[pos]
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    /// Global position range occupied by shell `k`.
    pub fn shell_range(&self, k: usize) -> std::ops::Range<usize> {
        self.shell_offsets[k]..self.shell_offsets[k + 1]
    }

    pub fn shell_of(&self, pos: usize) -> usize {
        self.indices[pos].degree()
    }
}
