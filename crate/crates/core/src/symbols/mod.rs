//! Phase-space symbols: a small expression language, a catalog of named
//! symbols, the harmonic-oscillator flow and orbit averaging.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary ("*" unary)*
//! unary   := "-" unary | power
//! power   := primary ("^" INTEGER)?
//! primary := NUMBER | NUMBER "i" | "i" | VARIABLE | "h0"
//!          | "exp" "(" expr ")" | "(" expr ")"
//! VARIABLE := ("x" | "xi" | "z" | "zb") INDEX        (1-based, ≤ n)
//! ```
//!
//! Division and non-integer powers are not part of the language, so the
//! polynomial degree of an exp-free expression is always known.

mod catalog;
mod flow;
mod parser;

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::wigner::{PhasePoint, WignerBasisFunction};

pub use catalog::{catalog, CatalogEntry};
pub use flow::{
    classical_average, classical_flow, default_average_nodes, flow_invariance_check, flow_samples, AveragedSymbol,
    FlowMap, InvarianceReport,
};
pub use parser::parse_expr;

/// Declared growth class of a symbol; selects quadrature strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymbolClass {
    Polynomial,
    Schwartz,
    PolyBounded,
}

impl SymbolClass {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Polynomial => "polynomial",
            Self::Schwartz => "schwartz",
            Self::PolyBounded => "poly-bounded",
        }
    }
}

impl std::str::FromStr for SymbolClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "polynomial" => Ok(Self::Polynomial),
            "schwartz" => Ok(Self::Schwartz),
            "poly-bounded" | "polybounded" => Ok(Self::PolyBounded),
            other => Err(Error::InvalidArgument(format!("unknown symbol class `{other}`"))),
        }
    }
}

/// Phase-space coordinate referenced by an expression; indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X(usize),
    Xi(usize),
    Z(usize),
    Zb(usize),
    /// `½(‖x‖² + ‖ξ‖²)`
    H0,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(k) => write!(f, "x{}", k + 1),
            Var::Xi(k) => write!(f, "xi{}", k + 1),
            Var::Z(k) => write!(f, "z{}", k + 1),
            Var::Zb(k) => write!(f, "zb{}", k + 1),
            Var::H0 => write!(f, "h0"),
        }
    }
}

/// Expression tree. Literals are nonnegative; signs are explicit nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Real(f64),
    Imag(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Exp(Box<Expr>),
}

impl std::ops::Add for Expr {
    type Output = Expr;

    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;

    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;

    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl Expr {
    pub fn real(v: f64) -> Self {
        if v < 0.0 {
            Expr::Neg(Box::new(Expr::Real(-v)))
        } else {
            Expr::Real(v)
        }
    }

    pub fn var(v: Var) -> Self {
        Expr::Var(v)
    }

    pub fn pow(self, k: u32) -> Self {
        Expr::Pow(Box::new(self), k)
    }

    pub fn exp(self) -> Self {
        Expr::Exp(Box::new(self))
    }

    pub fn eval<T: Real>(&self, w: &PhasePoint<T>) -> Complex<T> {
        match self {
            Expr::Real(v) => Complex::new(T::lit(*v), T::zero()),
            Expr::Imag(v) => Complex::new(T::zero(), T::lit(*v)),
            Expr::Var(v) => match *v {
                Var::X(k) => Complex::new(w.x[k], T::zero()),
                Var::Xi(k) => Complex::new(w.xi[k], T::zero()),
                Var::Z(k) => w.z(k),
                Var::Zb(k) => w.z(k).conj(),
                Var::H0 => Complex::new(w.norm_sqr() / T::lit(2.0), T::zero()),
            },
            Expr::Neg(e) => -e.eval(w),
            Expr::Add(a, b) => a.eval(w) + b.eval(w),
            Expr::Sub(a, b) => a.eval(w) - b.eval(w),
            Expr::Mul(a, b) => a.eval(w) * b.eval(w),
            Expr::Pow(b, k) => b.eval(w).powu(*k),
            Expr::Exp(e) => e.eval(w).exp(),
        }
    }

    /// Total polynomial degree, or `None` if the expression contains a
    /// non-constant exponential.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match self {
            Expr::Real(_) | Expr::Imag(_) => Some(0),
            Expr::Var(Var::H0) => Some(2),
            Expr::Var(_) => Some(1),
            Expr::Neg(e) => e.polynomial_degree(),
            Expr::Add(a, b) | Expr::Sub(a, b) => Some(a.polynomial_degree()?.max(b.polynomial_degree()?)),
            Expr::Mul(a, b) => Some(a.polynomial_degree()? + b.polynomial_degree()?),
            Expr::Pow(b, k) => Some(b.polynomial_degree()? * *k as usize),
            Expr::Exp(e) => match e.polynomial_degree() {
                Some(0) => Some(0),
                _ => None,
            },
        }
    }

    /// Largest 0-based variable index referenced, if any.
    pub fn max_var_index(&self) -> Option<usize> {
        match self {
            Expr::Real(_) | Expr::Imag(_) | Expr::Var(Var::H0) => None,
            Expr::Var(Var::X(k) | Var::Xi(k) | Var::Z(k) | Var::Zb(k)) => Some(*k),
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Exp(e) => e.max_var_index(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => match (a.max_var_index(), b.max_var_index()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }

    fn collect_exp_args<'a>(&'a self, out: &mut Vec<&'a Expr>) {
        match self {
            Expr::Exp(e) => {
                out.push(e);
                e.collect_exp_args(out);
            }
            Expr::Neg(e) | Expr::Pow(e, _) => e.collect_exp_args(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_exp_args(out);
                b.collect_exp_args(out);
            }
            _ => {}
        }
    }

    /// True when no imaginary literal or complex coordinate appears.
    fn is_manifestly_real(&self) -> bool {
        match self {
            Expr::Real(_) => true,
            Expr::Imag(_) => false,
            Expr::Var(v) => matches!(v, Var::X(_) | Var::Xi(_) | Var::H0),
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Exp(e) => e.is_manifestly_real(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.is_manifestly_real() && b.is_manifestly_real(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let paren = self.precedence() < min_prec;
        if paren {
            write!(f, "(")?;
        }
        match self {
            Expr::Real(v) => write!(f, "{v:?}")?,
            Expr::Imag(v) => write!(f, "{v:?}i")?,
            Expr::Var(v) => write!(f, "{v}")?,
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.write_at(f, 3)?;
            }
            Expr::Add(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " + ")?;
                b.write_at(f, 2)?;
            }
            Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " - ")?;
                b.write_at(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "*")?;
                b.write_at(f, 3)?;
            }
            Expr::Pow(b, k) => {
                b.write_at(f, 5)?;
                write!(f, "^{k}")?;
            }
            Expr::Exp(e) => {
                write!(f, "exp(")?;
                e.write_at(f, 0)?;
                write!(f, ")")?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Prints text that parses back to the identical tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// Anything that can be sampled on phase space and quantized.
pub trait PhaseSymbol<T: Real>: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, w: &PhasePoint<T>) -> Complex<T>;
    fn class(&self) -> SymbolClass;
    /// Total polynomial degree when the symbol is a polynomial.
    fn polynomial_degree(&self) -> Option<usize>;
    /// Whether the symbol is known to be real valued.
    fn is_real(&self) -> bool {
        false
    }
    fn describe(&self) -> String;
}

/// A parsed or cataloged symbol together with its dimension and class tag.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolExpr {
    expr: Expr,
    n: usize,
    class: SymbolClass,
}

impl SymbolExpr {
    /// Wraps an expression, checking variable ranges and the class tag.
    pub fn new(expr: Expr, n: usize, class: SymbolClass) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if let Some(k) = expr.max_var_index() {
            if k >= n {
                return Err(Error::DimensionMismatch { expected: n, found: k + 1 });
            }
        }
        let s = Self { expr, n, class };
        s.validate_class()?;
        Ok(s)
    }

    /// Parses DSL text; the class is `polynomial` unless declared otherwise.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        Self::parse_with_class(text, n, SymbolClass::Polynomial)
    }

    pub fn parse_with_class(text: &str, n: usize, class: SymbolClass) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let expr = parse_expr(text, n)?;
        Self::new(expr, n, class)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn class(&self) -> SymbolClass {
        self.class
    }

    pub fn eval<T: Real>(&self, w: &PhasePoint<T>) -> Complex<T> {
        self.expr.eval(w)
    }

    /// Rejects tags that contradict the tree: `polynomial` with an
    /// exponential, or `schwartz` for something that does not decay.
    fn validate_class(&self) -> Result<()> {
        match self.class {
            SymbolClass::Polynomial => {
                if self.expr.polynomial_degree().is_none() {
                    return Err(Error::ClassMismatch("polynomial tag on an expression containing exp".into()));
                }
            }
            SymbolClass::Schwartz => {
                let mut args = Vec::new();
                self.expr.collect_exp_args(&mut args);
                if args.is_empty() {
                    return Err(Error::ClassMismatch("schwartz tag without any decaying exponential".into()));
                }
                for (w, far) in probe_points(self.n) {
                    for a in &args {
                        let v: Complex<f64> = a.eval(&w);
                        if v.re >= 0.0 {
                            return Err(Error::ClassMismatch(format!("exp({a}) does not decay in every direction")));
                        }
                    }
                    if far {
                        let v: Complex<f64> = self.expr.eval(&w);
                        if v.norm() > 1e-8 {
                            return Err(Error::ClassMismatch("symbol does not decay at large radius".into()));
                        }
                    }
                }
            }
            SymbolClass::PolyBounded => {}
        }
        Ok(())
    }
}

/// Deterministic directions on the sphere of radius 10 (and 12 for the decay probe).
fn probe_points(n: usize) -> Vec<(PhasePoint<f64>, bool)> {
    let mut out = Vec::new();
    let dim = 2 * n;
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    for j in 0..(8 * dim).max(32) {
        let mut v: Vec<f64> = (0..dim)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state as f64 / u64::MAX as f64) * 2.0 - 1.0
            })
            .collect();
        if j < dim {
            v = (0..dim).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
        }
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-12);
        for (radius, far) in [(10.0, false), (12.0, true)] {
            let s: Vec<f64> = v.iter().map(|c| c / norm * radius).collect();
            out.push((PhasePoint { x: s[..n].to_vec(), xi: s[n..].to_vec() }, far));
        }
    }
    out
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}

impl<T: Real> PhaseSymbol<T> for SymbolExpr {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, w: &PhasePoint<T>) -> Complex<T> {
        self.expr.eval(w)
    }

    fn class(&self) -> SymbolClass {
        self.class
    }

    fn polynomial_degree(&self) -> Option<usize> {
        self.expr.polynomial_degree()
    }

    fn is_real(&self) -> bool {
        self.expr.is_manifestly_real()
    }

    fn describe(&self) -> String {
        self.expr.to_string()
    }
}

impl<T: Real> PhaseSymbol<T> for WignerBasisFunction<T> {
    fn dim(&self) -> usize {
        WignerBasisFunction::dim(self)
    }

    fn eval(&self, w: &PhasePoint<T>) -> Complex<T> {
        WignerBasisFunction::eval(self, w)
    }

    fn class(&self) -> SymbolClass {
        SymbolClass::Schwartz
    }

    fn polynomial_degree(&self) -> Option<usize> {
        None
    }

    fn is_real(&self) -> bool {
        self.alpha() == self.beta()
    }

    fn describe(&self) -> String {
        format!("Phi^{{{},{}}}", self.alpha(), self.beta())
    }
}

/// Symbol given by a closure; used for synthetic inputs and tests.
pub struct FnSymbol<F> {
    n: usize,
    class: SymbolClass,
    degree: Option<usize>,
    real: bool,
    label: String,
    f: F,
}

impl<F> FnSymbol<F> {
    pub fn new(n: usize, class: SymbolClass, degree: Option<usize>, label: impl Into<String>, f: F) -> Self {
        Self { n, class, degree, real: false, label: label.into(), f }
    }

    pub fn real(mut self) -> Self {
        self.real = true;
        self
    }
}

impl<T: Real, F> PhaseSymbol<T> for FnSymbol<F>
where
    F: Fn(&PhasePoint<T>) -> Complex<T> + Sync,
{
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, w: &PhasePoint<T>) -> Complex<T> {
        (self.f)(w)
    }

    fn class(&self) -> SymbolClass {
        self.class
    }

    fn polynomial_degree(&self) -> Option<usize> {
        self.degree
    }

    fn is_real(&self) -> bool {
        self.real
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}
