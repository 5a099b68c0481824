use std::fs;

use hocom::{
    catalog, coeff_matrix, phi_closed_form, CatalogEntry, CoefficientMatrix, MultiIndex, PhaseSymbol, Quadrature,
    SymbolClass, SymbolExpr, WignerBasisFunction,
};

use crate::commands::CliError;
use crate::SymbolArgs;

/// A resolved symbol source.
pub enum Source {
    Expr(SymbolExpr),
    Phi(WignerBasisFunction<f64>),
    File(CoefficientMatrix<f64>),
}

pub fn parse_multi_index(text: &str) -> Result<MultiIndex, CliError> {
    let parts = text
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::usage(format!("`{text}` is not a comma-separated list of nonnegative integers")))?;
    Ok(MultiIndex::new(parts)?)
}

fn parse_phi(text: &str) -> Result<(MultiIndex, MultiIndex), CliError> {
    let (a, b) = text.split_once(';').ok_or_else(|| CliError::usage(format!("--phi `{text}`: expected α;β")))?;
    let (a, b) = (parse_multi_index(a)?, parse_multi_index(b)?);
    if a.dim() != b.dim() {
        return Err(CliError::usage(format!("--phi `{text}`: α and β have different lengths")));
    }
    Ok((a, b))
}

impl Source {
    pub fn resolve(args: &SymbolArgs) -> Result<Self, CliError> {
        let explicit_n = args.n;
        let n = explicit_n.unwrap_or(1);
        if args.class.is_some() && args.symbol.is_none() {
            return Err(CliError::usage("--class applies to --symbol only"));
        }
        if let Some(path) = &args.input {
            if args.order.is_some() {
                return Err(CliError::usage("--order cannot be combined with --input"));
            }
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
            let c = CoefficientMatrix::<f64>::from_json_str(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            check_n(explicit_n, c.n())?;
            return Ok(Self::File(c));
        }
        if let Some(text) = &args.symbol {
            let class = match args.class.as_deref() {
                Some(c) => c.parse()?,
                None => SymbolClass::Polynomial,
            };
            let expr = SymbolExpr::parse_with_class(text, n, class)?;
            return Ok(Self::Expr(expr));
        }
        if let Some(name) = &args.catalog {
            let entry: CatalogEntry = name.parse()?;
            return Ok(Self::Expr(catalog(&entry, n)?));
        }
        if let Some(text) = &args.phi {
            let (a, b) = parse_phi(text)?;
            check_n(explicit_n, a.dim())?;
            return Ok(Self::Phi(phi_closed_form(&a, &b)?));
        }
        Err(CliError::usage("no symbol source given"))
    }

    pub fn symbol(&self) -> Option<&dyn PhaseSymbol<f64>> {
        match self {
            Self::Expr(e) => Some(e),
            Self::Phi(p) => Some(p),
            Self::File(_) => None,
        }
    }

    /// Coefficient matrix up to `cutoff`; a file source is returned as read.
    pub fn coefficients(&self, args: &SymbolArgs) -> Result<CoefficientMatrix<f64>, CliError> {
        let c = match (self, self.symbol()) {
            (Self::File(c), _) => {
                if args.cutoff.is_some() {
                    return Err(CliError::usage("--cutoff cannot be combined with --input"));
                }
                return Ok(match args.seed {
                    Some(s) => c.clone().with_seed(Some(s)),
                    None => c.clone(),
                });
            }
            (_, Some(f)) => {
                let cutoff = args.cutoff.ok_or_else(|| CliError::usage("--cutoff is required"))?;
                let quadrature = args.order.map_or(Quadrature::Auto, Quadrature::Fixed);
                coeff_matrix(f, cutoff, quadrature)?
            }
            (_, None) => unreachable!("only file sources lack a symbol"),
        };
        Ok(c.with_seed(args.seed))
    }
}

fn check_n(explicit: Option<usize>, found: usize) -> Result<(), CliError> {
    match explicit {
        Some(n) if n != found => Err(CliError::usage(format!("--n {n} does not match the source dimension {found}"))),
        _ => Ok(()),
    }
}
