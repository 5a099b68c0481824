use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use hocom::verify::{run_suite, Suite};
use hocom::{
    block_extract, classical_average, coeff_matrix, moyal_block, phi_closed_form, spectrum as block_spectrum,
    CoefficientMatrix, Error, PhasePoint, PhaseSymbol, Quadrature,
};
use serde_json::{json, Value};

use crate::source::{parse_multi_index, Source};
use crate::SymbolArgs;

/// Largest number of rows `wigner-grid` will write.
const MAX_GRID_ROWS: usize = 10_000_000;

/// Orbit nodes for averaging a symbol without a known degree.
const DEFAULT_T_NODES: usize = 64;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or inputs; exit code 2.
    Usage(String),
    /// A numerical property failed; exit code 1.
    Failed { property: String, detail: String },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    pub fn failed(property: &str, detail: impl Into<String>) -> Self {
        Self::Failed { property: property.to_string(), detail: detail.into() }
    }

    pub fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Failed { .. } => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(msg) => write!(f, "usage error: {msg}"),
            Self::Failed { property, detail } => write!(f, "{property} failed: {detail}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let property = match &e {
            Error::QuadratureNotConverged { .. } => "quadrature_convergence",
            Error::RootFinding { .. } => "quadrature_nodes",
            Error::NotHermitian { .. } => "hermitian",
            Error::EigenNotConverged { .. } => "eigensolver_convergence",
            Error::Hypothesis(_) => "hypothesis",
            _ => return Self::Usage(e.to_string()),
        };
        Self::failed(property, e.to_string())
    }
}

fn write_text(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn insert(value: &mut Value, key: &str, v: Value) {
    if let Some(obj) = value.as_object_mut() {
        obj.insert(key.to_string(), v);
    }
}

fn read_coefficients(path: &Path) -> Result<CoefficientMatrix<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    CoefficientMatrix::from_json_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// Off-block residual threshold, relative to `max(1, max |c|)`.
fn block_threshold(c: &CoefficientMatrix<f64>, tol: f64) -> f64 {
    tol * c.max_abs().max(1.0)
}

pub fn quantize(args: &SymbolArgs, out: Option<&Path>) -> Result<(), CliError> {
    let c = Source::resolve(args)?.coefficients(args)?;
    write_text(out, &c.to_json_string()?)
}

pub fn spectrum(args: &SymbolArgs, tol: f64, out: Option<&Path>, csv: Option<&Path>) -> Result<(), CliError> {
    let c = Source::resolve(args)?.coefficients(args)?;
    let (blocks, residual) = block_extract(&c);
    let threshold = block_threshold(&c, tol);
    if residual > threshold {
        return Err(CliError::failed(
            "block_vanishing",
            format!(
                "off-block residual {residual:e} exceeds {threshold:e}; `{}` is not a constant of motion",
                c.symbol()
            ),
        ));
    }
    let data = block_spectrum(&blocks)?;
    let mut value = data.to_json(c.symbol(), c.quadrature_order());
    insert(&mut value, "off_block_residual", json!(residual + 0.0));
    insert(&mut value, "seed", json!(c.seed()));
    write_text(out, &pretty(&value))?;
    let csv_path: Option<PathBuf> = csv.map(Path::to_path_buf).or_else(|| out.map(|p| p.with_extension("csv")));
    if let Some(path) = csv_path {
        write_text(Some(&path), &data.to_csv())?;
    }
    Ok(())
}

pub fn moyal(left: &Path, right: &Path, tol: f64, out: Option<&Path>) -> Result<(), CliError> {
    let a = read_coefficients(left)?;
    let b = read_coefficients(right)?;
    if a.n() != b.n() {
        return Err(CliError::usage(format!(
            "dimension mismatch: {} has n = {}, {} has n = {}",
            left.display(),
            a.n(),
            right.display(),
            b.n()
        )));
    }
    if a.cutoff() != b.cutoff() {
        return Err(CliError::usage(format!(
            "cutoff mismatch: {} has K = {}, {} has K = {}",
            left.display(),
            a.cutoff(),
            right.display(),
            b.cutoff()
        )));
    }
    let mut factors = Vec::new();
    for (path, c) in [(left, &a), (right, &b)] {
        let (blocks, residual) = block_extract(c);
        let threshold = block_threshold(c, tol);
        if residual > threshold {
            return Err(CliError::failed(
                "block_vanishing",
                format!("{}: off-block residual {residual:e} exceeds {threshold:e}", path.display()),
            ));
        }
        factors.push(blocks);
    }
    let product = moyal_block(&factors[0], &factors[1])?;
    let c = product
        .to_coefficient_matrix(format!("({}) ⋆ ({})", a.symbol(), b.symbol()))?
        .with_quadrature_order(a.quadrature_order().max(b.quadrature_order()))
        .with_seed(a.seed().or(b.seed()));
    write_text(out, &c.to_json_string()?)
}

/// Quantizes the orbit average of `f` and returns its blocks as JSON plus the
/// discrepancy to `averaged`.
fn classical_path<S: PhaseSymbol<f64> + Clone>(
    f: &S,
    args: &SymbolArgs,
    cutoff: usize,
    t_nodes: Option<usize>,
    averaged: &hocom::BlockOperator<f64>,
) -> Result<(Value, f64), CliError> {
    let nodes = t_nodes.unwrap_or_else(|| f.polynomial_degree().map_or(DEFAULT_T_NODES, |d| 2 * d + 1));
    let quadrature = args.order.map_or(Quadrature::Auto, Quadrature::Fixed);
    let c = coeff_matrix(&classical_average(f.clone(), nodes), cutoff, quadrature)?;
    let (blocks, residual) = block_extract(&c);
    let discrepancy = averaged.max_abs_diff(&blocks)?;
    let value = json!({
        "symbol": c.symbol(),
        "t_nodes": nodes,
        "quadrature_order": c.quadrature_order(),
        "off_block_residual": residual + 0.0,
        "discrepancy": discrepancy + 0.0,
    });
    Ok((value, discrepancy))
}

pub fn average(
    args: &SymbolArgs,
    both: bool,
    t_nodes: Option<usize>,
    tol: f64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let source = Source::resolve(args)?;
    let c = source.coefficients(args)?;
    let (averaged, removed) = block_extract(&c);
    let mut value = averaged.to_json(c.symbol(), c.quadrature_order());
    insert(&mut value, "removed_off_block", json!(removed + 0.0));
    insert(&mut value, "seed", json!(c.seed()));
    let mut discrepancy = None;
    if both {
        let (classical, d) = match &source {
            Source::Expr(f) => classical_path(f, args, c.cutoff(), t_nodes, &averaged)?,
            Source::Phi(f) => classical_path(f, args, c.cutoff(), t_nodes, &averaged)?,
            Source::File(_) => return Err(CliError::usage("--both needs a symbol source, not --input")),
        };
        insert(&mut value, "classical_path", classical);
        discrepancy = Some(d);
    }
    write_text(out, &pretty(&value))?;
    match discrepancy {
        Some(d) if d > tol => Err(CliError::failed(
            "average_intertwining",
            format!("the two averaging paths differ by {d:e} (tol {tol:e})"),
        )),
        _ => Ok(()),
    }
}

pub fn wigner_grid(
    alpha: &str,
    beta: &str,
    min: f64,
    max: f64,
    points: usize,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let (a, b) = (parse_multi_index(alpha)?, parse_multi_index(beta)?);
    if a.dim() != b.dim() {
        return Err(CliError::usage(format!("α has length {} but β has length {}", a.dim(), b.dim())));
    }
    if points == 0 || !(min.is_finite() && max.is_finite()) || min > max {
        return Err(CliError::usage("grid needs --points ≥ 1 and finite --min ≤ --max"));
    }
    let n = a.dim();
    let rows =
        u32::try_from(2 * n).ok().and_then(|e| points.checked_pow(e)).filter(|&r| r <= MAX_GRID_ROWS).ok_or_else(
            || CliError::usage(format!("grid with {points}^{} points exceeds {MAX_GRID_ROWS} rows", 2 * n)),
        )?;
    let phi = phi_closed_form::<f64>(&a, &b)?;
    let axis: Vec<f64> = (0..points)
        .map(|i| if points == 1 { min } else { min + (max - min) * i as f64 / (points - 1) as f64 })
        .collect();

    let mut text = String::new();
    let header: Vec<String> = (1..=n)
        .map(|k| format!("x{k}"))
        .chain((1..=n).map(|k| format!("xi{k}")))
        .chain(["re".into(), "im".into()])
        .collect();
    text.push_str(&header.join(","));
    text.push('\n');
    let mut digits = vec![0usize; 2 * n];
    for _ in 0..rows {
        let coords: Vec<f64> = digits.iter().map(|&d| axis[d]).collect();
        let v = phi.eval(&PhasePoint::new(coords[..n].to_vec(), coords[n..].to_vec())?);
        for c in &coords {
            text.push_str(&format!("{:?},", c + 0.0));
        }
        text.push_str(&format!("{:?},{:?}\n", v.re + 0.0, v.im + 0.0));
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < points {
                break;
            }
            *d = 0;
        }
    }
    write_text(out, &text)
}

pub fn verify(suite: &str, n: usize, cutoff: usize) -> Result<(), CliError> {
    let suite: Suite = suite.parse().map_err(|_| {
        CliError::usage(format!("unknown suite `{suite}`; expected one of {}", Suite::NAMES.join(", ")))
    })?;
    let results = run_suite(suite, n, cutoff)?;
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    println!("{}/{} checks passed", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::failed("verify", failed.join(", ")))
    }
}
