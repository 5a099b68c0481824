//! Named invariant checks, grouped into suites, run by `hocom verify`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::com_algebra::{
    commutator, conjugate_evolution, moyal_block, spectrum, weinstein_average_coeff, BlockOperator,
};
use crate::error::{Error, Result};
use crate::hermite::{gauss_hermite_rule, HermiteBasis};
use crate::indexing::{shell_dim, IndexSet, MultiIndex};
use crate::quantizer::{
    block_extract, coeff_coarea, coeff_matrix, default_coarea_nodes, growth_diagnostic, CoefficientMatrix, Quadrature,
};
use crate::symbols::{
    catalog, classical_average, default_average_nodes, flow_invariance_check, flow_samples, CatalogEntry, PhaseSymbol,
    SymbolExpr,
};
use crate::wigner::{flow_phase, phi_closed_form, wigner_oracle, PhasePoint, ORACLE_ORDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Hermite,
    Wigner,
    Symbols,
    Quantizer,
    Algebra,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["all", "hermite", "wigner", "symbols", "quantizer", "algebra"];

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "hermite" => Suite::Hermite,
            "wigner" => Suite::Wigner,
            "symbols" => Suite::Symbols,
            "quantizer" => Suite::Quantizer,
            "algebra" => Suite::Algebra,
            other => return Err(Error::InvalidArgument(format!("unknown suite `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn check(name: &'static str, run: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    match run() {
        Ok((passed, detail)) => CheckResult { name, passed, detail },
        Err(e) => CheckResult { name, passed: false, detail: format!("error: {e}") },
    }
}

fn bound(value: f64, tol: f64) -> (bool, String) {
    (value < tol, format!("max deviation {value:.3e} (tol {tol:.0e})"))
}

fn zero() -> Complex<f64> {
    Complex::new(0.0, 0.0)
}

/// Catalog constants of motion for dimension `n`.
pub fn catalog_constants_of_motion(n: usize) -> Vec<(String, CatalogEntry)> {
    let mut out = vec![("h0".to_string(), CatalogEntry::H0)];
    for k in 1..=2 {
        let shell = IndexSet::new(n, k).expect("n ≥ 1");
        for a in shell.indices().iter().filter(|a| a.degree() == k) {
            for b in shell.indices().iter().filter(|b| b.degree() == k) {
                out.push((
                    format!("monomial {a},{b}"),
                    CatalogEntry::Monomial { alpha: a.components().to_vec(), beta: b.components().to_vec() },
                ));
            }
        }
    }
    for j in 1..=n {
        for k in (j + 1)..=n {
            out.push((format!("angular_momentum {j},{k}"), CatalogEntry::AngularMomentum { j, k }));
        }
    }
    let mut a = vec![zero(); n * n];
    for k in 0..n {
        a[k * n + k] = Complex::new(0.0, -1.0);
    }
    out.push(("quadratic -iI".into(), CatalogEntry::Quadratic { a }));
    if n >= 2 {
        let mut a = vec![zero(); n * n];
        a[0] = Complex::new(0.0, 0.5);
        a[1] = Complex::new(1.0, 2.0);
        a[n] = Complex::new(-1.0, 2.0);
        a[n + 1] = Complex::new(0.0, -1.5);
        out.push(("quadratic hermitian-generator".into(), CatalogEntry::Quadratic { a }));
    }
    out
}

fn hermite_checks(n: usize, cutoff: usize, out: &mut Vec<CheckResult>) {
    out.push(check("hermite.rule_weights", || {
        let mut worst = 0.0f64;
        for m in [1usize, 2, 5, 20, 2 * cutoff + 8] {
            let r = gauss_hermite_rule::<f64>(m)?;
            worst = worst.max((r.weights().iter().sum::<f64>() - std::f64::consts::PI.sqrt()).abs());
        }
        Ok(bound(worst, 1e-12))
    }));
    out.push(check("hermite.orthonormality", || {
        let deg = cutoff.min(8);
        let basis = HermiteBasis::new(n.min(2), deg)?;
        let index = IndexSet::new(n.min(2), deg)?;
        let rule = gauss_hermite_rule::<f64>(deg + 2)?;
        let mut worst = 0.0f64;
        for a in index.indices() {
            for b in index.indices() {
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((basis.inner_product(a, b, &rule) - expect).abs());
            }
        }
        Ok(bound(worst, 1e-10))
    }));
}

fn wigner_checks(n: usize, cutoff: usize, out: &mut Vec<CheckResult>) {
    out.push(check("wigner.closed_form_vs_oracle", || {
        let n = n.min(2);
        let index = IndexSet::new(n, cutoff.min(5))?;
        let rule = gauss_hermite_rule::<f64>(ORACLE_ORDER)?;
        let ticks = [-3.0, -1.25, 0.0, 0.5, 2.0];
        let points: Vec<PhasePoint<f64>> = (0..ticks.len().pow(2 * n as u32))
            .step_by(if n == 1 { 1 } else { 7 })
            .map(|g| {
                let c: Vec<f64> = (0..2 * n).map(|k| ticks[(g / ticks.len().pow(k as u32)) % ticks.len()]).collect();
                PhasePoint { x: c[..n].to_vec(), xi: c[n..].to_vec() }
            })
            .collect();
        let mut worst = 0.0f64;
        for a in index.indices() {
            for b in index.indices() {
                let phi = phi_closed_form::<f64>(a, b)?;
                for w in &points {
                    worst = worst.max((phi.eval(w) - wigner_oracle(a, b, w, &rule)?).norm());
                }
            }
        }
        Ok(bound(worst, 1e-8))
    }));
    out.push(check("wigner.flow_phase_law", || {
        let index = IndexSet::new(n, cutoff.min(4))?;
        let samples = flow_samples::<f64>(n, 50, 2.0, 17);
        let mut worst = 0.0f64;
        for (s, (w, t)) in samples.iter().enumerate() {
            let a = index.get(s % index.len());
            let b = index.get((7 * s + 3) % index.len());
            let phi = phi_closed_form::<f64>(a, b)?;
            let moved = phi.eval(&crate::symbols::classical_flow(*t, w));
            worst = worst.max((moved - flow_phase(phi.shell_gap(), *t) * phi.eval(w)).norm());
        }
        Ok(bound(worst, 1e-10))
    }));
    out.push(check("wigner.conjugate_symmetry", || {
        let index = IndexSet::new(n, cutoff.min(4))?;
        let mut worst = 0.0f64;
        for (w, _) in flow_samples::<f64>(n, 10, 2.0, 4) {
            for a in index.indices() {
                for b in index.indices() {
                    let ab = phi_closed_form::<f64>(a, b)?.eval(&w);
                    let ba = phi_closed_form::<f64>(b, a)?.eval(&w);
                    worst = worst.max((ab.conj() - ba).norm());
                }
            }
        }
        Ok(bound(worst, 1e-14))
    }));
}

fn symbol_checks(n: usize, out: &mut Vec<CheckResult>) {
    out.push(check("symbols.constants_of_motion_invariant", || {
        let samples = flow_samples::<f64>(n, 40, 2.0, 23);
        let mut worst = 0.0f64;
        for (_, entry) in catalog_constants_of_motion(n) {
            worst = worst.max(flow_invariance_check(&catalog(&entry, n)?, &samples, 1e-10).max_deviation);
        }
        Ok(bound(worst, 1e-10))
    }));
    out.push(check("symbols.average_is_invariant_projection", || {
        let f = SymbolExpr::parse("x1^3*xi1 + 2*x1 - xi1^2", n)?;
        let once = classical_average(&f, default_average_nodes(4));
        let twice = classical_average(&once, default_average_nodes(4));
        let samples = flow_samples::<f64>(n, 30, 1.5, 8);
        let mut worst = flow_invariance_check(&once, &samples, 1e-10).max_deviation;
        for (w, _) in &samples {
            worst = worst.max((PhaseSymbol::<f64>::eval(&once, w) - PhaseSymbol::<f64>::eval(&twice, w)).norm());
        }
        Ok(bound(worst, 1e-10))
    }));
    out.push(check("symbols.print_parse_round_trip", || {
        for (_, entry) in catalog_constants_of_motion(n) {
            let s = catalog(&entry, n)?;
            let again = SymbolExpr::parse(&s.to_string(), n)?;
            if again != s {
                return Ok((false, format!("`{s}` did not round-trip")));
            }
        }
        Ok((true, "catalog round-trips".into()))
    }));
}

fn quantizer_checks(n: usize, cutoff: usize, out: &mut Vec<CheckResult>) {
    out.push(check("quantizer.identity", || {
        let c = coeff_matrix::<f64, _>(&SymbolExpr::parse("1", n)?, cutoff, Quadrature::Auto)?;
        let mut worst = 0.0f64;
        for i in 0..c.dim() {
            for j in 0..c.dim() {
                worst = worst.max((c.at(i, j) - if i == j { 1.0 } else { 0.0 }).norm());
            }
        }
        Ok(bound(worst, 1e-12))
    }));
    out.push(check("quantizer.h0_diagonal", || {
        let c = coeff_matrix::<f64, _>(&catalog(&CatalogEntry::H0, n)?, cutoff, Quadrature::Auto)?;
        let mut worst = 0.0f64;
        for i in 0..c.dim() {
            for j in 0..c.dim() {
                let expect = if i == j { c.index_set().shell_of(i) as f64 + n as f64 / 2.0 } else { 0.0 };
                worst = worst.max((c.at(i, j) - expect).norm());
            }
        }
        Ok(bound(worst, 1e-9))
    }));
    out.push(check("quantizer.rank_one_law", || {
        let k = cutoff.min(if n == 1 { 4 } else { 2 });
        let index = IndexSet::new(n, k)?;
        let mut worst = 0.0f64;
        for a in index.indices() {
            for b in index.indices() {
                let c = coeff_matrix(&phi_closed_form::<f64>(a, b)?, k, Quadrature::Auto)?;
                worst = worst.max(c.max_abs_diff(&CoefficientMatrix::elementary(n, k, a, b)?)?);
            }
        }
        Ok(bound(worst, 1e-8))
    }));
    out.push(check("quantizer.block_vanishing", || {
        let mut worst = 0.0f64;
        for (_, entry) in catalog_constants_of_motion(n) {
            let c = coeff_matrix::<f64, _>(&catalog(&entry, n)?, cutoff, Quadrature::Auto)?;
            worst = worst.max(block_extract(&c).1);
        }
        Ok(bound(worst, 1e-8))
    }));
    out.push(check("quantizer.hermitian", || {
        let f = SymbolExpr::parse("x1^3 - 2*x1*xi1 + xi1^2*x1 + 0.25", n)?;
        Ok(bound(coeff_matrix::<f64, _>(&f, cutoff, Quadrature::Auto)?.hermitian_defect(), 1e-10))
    }));
    out.push(check("quantizer.coarea_agreement", || {
        let mut symbols = vec![catalog(&CatalogEntry::H0, n)?];
        if n >= 2 {
            let mut alpha = vec![0; n];
            let mut beta = vec![0; n];
            alpha[0] = 1;
            beta[1] = 1;
            symbols.push(catalog(&CatalogEntry::Monomial { alpha, beta }, n)?);
        }
        let k = cutoff.min(2);
        let index = IndexSet::new(n, k)?;
        let mut worst = 0.0f64;
        let mut tol = 1e-6f64;
        for f in &symbols {
            let c = coeff_matrix::<f64, _>(f, k, Quadrature::Auto)?;
            for a in index.indices() {
                for b in index.indices().iter().filter(|b| b.degree() == a.degree()) {
                    let (r, s) = default_coarea_nodes(n, f.expr().polynomial_degree(), a, b, 5);
                    let res = coeff_coarea::<f64, _>(f, a, b, r, s)?;
                    if let Some(se) = res.std_error {
                        tol = tol.max(6.0 * se);
                    }
                    worst = worst.max((res.value - c.get(a, b).expect("index in range")).norm());
                }
            }
        }
        Ok(bound(worst, tol))
    }));
    out.push(check("quantizer.growth", || {
        let k = cutoff.max(4);
        let h = growth_diagnostic(&coeff_matrix::<f64, _>(&catalog(&CatalogEntry::H0, n)?, k, Quadrature::Auto)?);
        let zero = MultiIndex::zero(n);
        let g = growth_diagnostic(&coeff_matrix(&phi_closed_form::<f64>(&zero, &zero)?, k, Quadrature::Auto)?);
        let exp = h.exponent.unwrap_or(f64::NAN);
        let ok = g.rapid_decay && !h.rapid_decay && (exp - 1.0).abs() < 0.2;
        Ok((ok, format!("h0 exponent {exp:.4}, h0 rapid {}, Phi00 rapid {}", h.rapid_decay, g.rapid_decay)))
    }));
}

fn shell_respecting_phi_blocks(n: usize, k: usize) -> Result<Vec<(MultiIndex, MultiIndex, BlockOperator<f64>)>> {
    let index = IndexSet::new(n, k)?;
    let mut out = Vec::new();
    for a in index.indices() {
        for b in index.indices().iter().filter(|b| b.degree() == a.degree()) {
            let e = CoefficientMatrix::<f64>::elementary(n, k, a, b)?;
            out.push((a.clone(), b.clone(), block_extract(&e).0));
        }
    }
    Ok(out)
}

fn algebra_checks(n: usize, cutoff: usize, out: &mut Vec<CheckResult>) {
    out.push(check("algebra.moyal_wigner_products", || {
        let k = cutoff.min(if n == 1 { 4 } else { 3 });
        let phis = shell_respecting_phi_blocks(n, k)?;
        let mut worst = 0.0f64;
        for (a, b, f) in &phis {
            for (a2, b2, g) in &phis {
                let prod = moyal_block(f, g)?;
                let expect = if a2 == b {
                    block_extract(&CoefficientMatrix::elementary(n, k, a, b2)?).0
                } else {
                    BlockOperator::zeros(n, k)?
                };
                worst = worst.max(prod.max_abs_diff(&expect)?);
            }
        }
        Ok((worst == 0.0, format!("max deviation {worst:e} (exact)")))
    }));
    out.push(check("algebra.associativity_and_adjoint", || {
        let mk = |text: &str| -> Result<BlockOperator<f64>> {
            let f = SymbolExpr::parse(text, n)?;
            Ok(weinstein_average_coeff(&coeff_matrix::<f64, _>(&f, cutoff, Quadrature::Auto)?))
        };
        let f = mk("x1^2 + 0.5*xi1^2")?;
        let g = mk("x1*xi1 + h0^2")?;
        let h = mk("h0 - x1^4")?;
        let left = moyal_block(&moyal_block(&f, &g)?, &h)?;
        let right = moyal_block(&f, &moyal_block(&g, &h)?)?;
        let assoc = left.max_abs_diff(&right)?;
        let scale = left.blocks().iter().map(|b| b.max_abs()).fold(1.0, f64::max);
        let adj = moyal_block(&f, &g)?.adjoint().max_abs_diff(&moyal_block(&g.adjoint(), &f.adjoint())?)?;
        let ok = assoc <= 1e-13 * scale && adj == 0.0;
        Ok((ok, format!("associativity {assoc:.2e} (scale {scale:.2e}), adjoint {adj:e}")))
    }));
    out.push(check("algebra.average_intertwining", || {
        let mut worst = 0.0f64;
        for text in ["x1", "x1^2", "x1*xi1"] {
            let f = SymbolExpr::parse(text, n)?;
            let deg = f.expr().polynomial_degree().unwrap_or(0);
            let avg = classical_average(&f, default_average_nodes(deg));
            let lhs = block_extract(&coeff_matrix::<f64, _>(&avg, cutoff, Quadrature::Auto)?);
            let rhs = weinstein_average_coeff(&coeff_matrix::<f64, _>(&f, cutoff, Quadrature::Auto)?);
            worst = worst.max(lhs.0.max_abs_diff(&rhs)?).max(lhs.1);
        }
        Ok(bound(worst, 1e-9))
    }));
    out.push(check("algebra.conjugation_law", || {
        let f = SymbolExpr::parse("x1 + x1*xi1 + h0", n)?;
        let c = coeff_matrix::<f64, _>(&f, cutoff, Quadrature::Auto)?;
        let mut worst = 0.0f64;
        for t in [0.3, -1.1, 2.5] {
            let e = conjugate_evolution(&c, t);
            worst = worst.max(conjugate_evolution(&e, -t).max_abs_diff(&c)?);
            let avg_moved = weinstein_average_coeff(&e);
            worst = worst.max(avg_moved.max_abs_diff(&weinstein_average_coeff(&c))?);
            let blocks = weinstein_average_coeff(&c).to_coefficient_matrix("avg")?;
            worst = worst.max(conjugate_evolution(&blocks, t).max_abs_diff(&blocks)?);
        }
        Ok(bound(worst, 1e-13))
    }));
    out.push(check("algebra.h0_spectrum", || {
        let c = coeff_matrix::<f64, _>(&catalog(&CatalogEntry::H0, n)?, cutoff, Quadrature::Auto)?;
        let s = spectrum(&block_extract(&c).0)?;
        let mut worst = 0.0f64;
        for sh in &s.shells {
            if sh.eigenvalues.len() != shell_dim(n, sh.k) {
                return Ok((false, format!("shell {} has {} eigenvalues", sh.k, sh.eigenvalues.len())));
            }
            for e in &sh.eigenvalues {
                worst = worst.max((e - (sh.k as f64 + n as f64 / 2.0)).abs());
            }
        }
        Ok(bound(worst, 1e-9))
    }));
    out.push(check("algebra.h0_commutes_with_generators", || {
        let h = block_extract(&coeff_matrix::<f64, _>(&catalog(&CatalogEntry::H0, n)?, cutoff, Quadrature::Auto)?).0;
        let mut worst = 0.0f64;
        for (_, entry) in catalog_constants_of_motion(n) {
            let (blocks, residual) =
                block_extract(&coeff_matrix::<f64, _>(&catalog(&entry, n)?, cutoff, Quadrature::Auto)?);
            let comm = commutator(&h, &blocks)?;
            worst = worst.max(residual).max(comm.blocks().iter().map(|b| b.max_abs()).fold(0.0, f64::max));
        }
        Ok(bound(worst, 1e-8))
    }));
}

/// Runs the checks of `suite` for dimension `n` and cutoff `cutoff`.
pub fn run_suite(suite: Suite, n: usize, cutoff: usize) -> Result<Vec<CheckResult>> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut out = Vec::new();
    if suite.includes(Suite::Hermite) {
        hermite_checks(n, cutoff, &mut out);
    }
    if suite.includes(Suite::Wigner) {
        wigner_checks(n, cutoff, &mut out);
    }
    if suite.includes(Suite::Symbols) {
        symbol_checks(n, &mut out);
    }
    if suite.includes(Suite::Quantizer) {
        quantizer_checks(n, cutoff, &mut out);
    }
    if suite.includes(Suite::Algebra) {
        algebra_checks(n, cutoff, &mut out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass_small() {
        for r in run_suite(Suite::All, 1, 3).unwrap() {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn suite_names_parse() {
        for name in Suite::NAMES {
            name.parse::<Suite>().unwrap();
        }
        assert!("everything".parse::<Suite>().is_err());
    }
}
