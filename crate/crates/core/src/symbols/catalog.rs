use std::ops::{Add, Mul};
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};

use super::{Expr, SymbolClass, SymbolExpr, Var};

/// Named symbols.
///
/// `quadratic(A)` takes `A ∈ u(n)` as a complex `n×n` matrix (row-major),
/// acting on `z = x + iξ`. With `A = B + iC` its real form on `w = (x, ξ)` is
/// `[[B, -C], [C, B]]`, the symplectic matrix is `J = [[0, I], [-I, 0]]` and
/// the symbol is `p_A(w) = -½ w·(A J)·w`. Under this choice the Hamiltonian
/// flow of `p_A` is `e^{tA}`, and `A = -i·I` (the generator of `φ_t`) gives
/// exactly `h0`.
#[derive(Debug, Clone, PartialEq)]
pub enum CatalogEntry {
    H0,
    Monomial {
        alpha: Vec<usize>,
        beta: Vec<usize>,
    },
    /// `x_j ξ_k - x_k ξ_j`, 1-based indices.
    AngularMomentum {
        j: usize,
        k: usize,
    },
    Quadratic {
        a: Vec<Complex<f64>>,
    },
}

/// Parses `h0`, `monomial:1,0;0,1`, `angular_momentum:1,2` or
/// `quadratic:re:im,re:im,...` (row-major entries of `A`).
impl FromStr for CatalogEntry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = match s.split_once(':') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), ""),
        };
        let bad = |msg: &str| Error::InvalidCatalog(format!("{s}: {msg}"));
        let ints = |text: &str| -> Result<Vec<usize>> {
            text.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad("expected nonnegative integers")))
                .collect()
        };
        match name {
            "h0" if params.is_empty() => Ok(Self::H0),
            "h0" => Err(bad("h0 takes no parameters")),
            "monomial" => {
                let (a, b) = params.split_once(';').ok_or_else(|| bad("expected alpha;beta"))?;
                Ok(Self::Monomial { alpha: ints(a)?, beta: ints(b)? })
            }
            "angular_momentum" | "angular-momentum" | "l" => {
                let v = ints(params)?;
                match v.as_slice() {
                    [j, k] => Ok(Self::AngularMomentum { j: *j, k: *k }),
                    _ => Err(bad("expected two indices j,k")),
                }
            }
            "quadratic" => {
                let a = params
                    .split(',')
                    .map(|entry| {
                        let (re, im) = entry.split_once(':').unwrap_or((entry, "0"));
                        let re: f64 = re.trim().parse().map_err(|_| bad("malformed matrix entry"))?;
                        let im: f64 = im.trim().parse().map_err(|_| bad("malformed matrix entry"))?;
                        Ok(Complex::new(re, im))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::Quadratic { a })
            }
            _ => Err(bad("unknown catalog name")),
        }
    }
}

fn sum_chain(terms: Vec<Expr>) -> Expr {
    let mut it = terms.into_iter();
    let first = it.next().unwrap_or(Expr::Real(0.0));
    it.fold(first, Expr::add)
}

fn product_chain(factors: Vec<Expr>) -> Expr {
    let mut it = factors.into_iter();
    let first = it.next().unwrap_or(Expr::Real(1.0));
    it.fold(first, Expr::mul)
}

fn power(v: Var, k: usize) -> Option<Expr> {
    match k {
        0 => None,
        1 => Some(Expr::Var(v)),
        k => Some(Expr::Var(v).pow(k as u32)),
    }
}

/// Builds a named symbol over `n` phase-space dimensions.
pub fn catalog(entry: &CatalogEntry, n: usize) -> Result<SymbolExpr> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let expr = match entry {
        CatalogEntry::H0 => {
            let squares = (0..n)
                .map(|k| Expr::Var(Var::X(k)).pow(2))
                .chain((0..n).map(|k| Expr::Var(Var::Xi(k)).pow(2)))
                .collect();
            Expr::Real(0.5) * sum_chain(squares)
        }
        CatalogEntry::Monomial { alpha, beta } => {
            if alpha.len() != n || beta.len() != n {
                return Err(Error::InvalidCatalog(format!("monomial indices must have length {n}")));
            }
            let factors = alpha
                .iter()
                .enumerate()
                .filter_map(|(k, &a)| power(Var::Z(k), a))
                .chain(beta.iter().enumerate().filter_map(|(k, &b)| power(Var::Zb(k), b)))
                .collect();
            product_chain(factors)
        }
        CatalogEntry::AngularMomentum { j, k } => {
            if *j == 0 || *k == 0 || *j > n || *k > n || j == k {
                return Err(Error::InvalidCatalog(format!(
                    "angular momentum needs distinct indices in 1..={n}, got ({j},{k})"
                )));
            }
            let (j, k) = (j - 1, k - 1);
            Expr::Var(Var::X(j)) * Expr::Var(Var::Xi(k)) - Expr::Var(Var::X(k)) * Expr::Var(Var::Xi(j))
        }
        CatalogEntry::Quadratic { a } => quadratic_expr(a, n)?,
    };
    SymbolExpr::new(expr, n, SymbolClass::Polynomial)
}

/// Symmetric matrix `S = A J` in the `(x, ξ)` coordinates.
pub(crate) fn quadratic_form(a: &[Complex<f64>], n: usize) -> Result<Vec<Vec<f64>>> {
    if a.len() != n * n {
        return Err(Error::InvalidCatalog(format!("quadratic needs {} matrix entries, got {}", n * n, a.len())));
    }
    let scale = a.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let mut defect: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            defect = defect.max((a[r * n + c] + a[c * n + r].conj()).norm());
        }
    }
    if defect > 1e-12 * scale {
        return Err(Error::NotUnitaryAlgebra { defect });
    }
    let mut s = vec![vec![0.0; 2 * n]; 2 * n];
    for r in 0..n {
        for c in 0..n {
            let (b, cc) = (a[r * n + c].re, a[r * n + c].im);
            s[r][c] = cc;
            s[r][n + c] = b;
            s[n + r][c] = -b;
            s[n + r][n + c] = cc;
        }
    }
    Ok(s)
}

#[allow(clippy::needless_range_loop)]
fn quadratic_expr(a: &[Complex<f64>], n: usize) -> Result<Expr> {
    let s = quadratic_form(a, n)?;
    let coord = |i: usize| if i < n { Var::X(i) } else { Var::Xi(i - n) };
    let mut terms: Vec<(f64, Expr)> = Vec::new();
    for i in 0..2 * n {
        for j in i..2 * n {
            let c = if i == j { -0.5 * s[i][i] } else { -0.5 * (s[i][j] + s[j][i]) };
            if c == 0.0 {
                continue;
            }
            let mono = if i == j { Expr::Var(coord(i)).pow(2) } else { Expr::Var(coord(i)) * Expr::Var(coord(j)) };
            let term = if c.abs() == 1.0 { mono } else { Expr::Real(c.abs()) * mono };
            terms.push((c, term));
        }
    }
    let mut it = terms.into_iter();
    let Some((c0, t0)) = it.next() else {
        return Ok(Expr::Real(0.0));
    };
    let first = if c0 < 0.0 { -t0 } else { t0 };
    Ok(it.fold(first, |acc, (c, t)| if c < 0.0 { acc - t } else { acc + t }))
}
