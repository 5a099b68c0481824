use serde::Serialize;

use crate::scalar::Real;

use super::CoefficientMatrix;

/// Shells whose maximum is below this fraction of the overall maximum count as zero.
pub const NEGLIGIBLE: f64 = 1e-12;

/// Fitted exponents below this are reported as rapid decay.
pub const RAPID_DECAY_EXPONENT: f64 = -8.0;

/// Smallest cutoff for which a fit is attempted.
pub const MIN_FIT_CUTOFF: usize = 4;

/// Polynomial growth of coefficient magnitudes across shells.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    /// `m_k = max |c_{α,β}|` over entries with `max(|α|, |β|) = k`.
    pub shell_max: Vec<f64>,
    /// Slope of `log m_k` against `log(k+1)` over the tail shells, if at least
    /// two of them are non-negligible.
    pub exponent: Option<f64>,
    /// Shell range `[⌈K/2⌉, K]` used for the fit.
    pub fit_range: (usize, usize),
    /// Rapid decay on every prefix cutoff `K' ≥ min(4, K)`: the tail is
    /// negligible or falls faster than `(k+1)^{-8}`.
    pub rapid_decay: bool,
}

fn fit_range(cutoff: usize) -> (usize, usize) {
    (cutoff.div_ceil(2), cutoff)
}

fn tail_fit(shell_max: &[f64], cutoff: usize) -> (Option<f64>, bool) {
    let overall = shell_max[..=cutoff].iter().copied().fold(0.0, f64::max);
    let (lo, hi) = fit_range(cutoff);
    if overall == 0.0 {
        return (None, true);
    }
    let pts: Vec<(f64, f64)> = (lo..=hi)
        .filter(|&k| shell_max[k] > NEGLIGIBLE * overall)
        .map(|k| (((k + 1) as f64).ln(), shell_max[k].ln()))
        .collect();
    if pts.is_empty() {
        return (None, true);
    }
    if pts.len() < 2 {
        return (None, false);
    }
    let np = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / np;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / np;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (Some(slope), slope < RAPID_DECAY_EXPONENT)
}

/// Log-log fit of per-shell coefficient maxima; meaningful for `K ≥ 4`.
pub fn growth_diagnostic<T: Real>(c: &CoefficientMatrix<T>) -> GrowthReport {
    let cutoff = c.cutoff();
    let index = c.index_set();
    let mut shell_max = vec![0.0f64; cutoff + 1];
    for i in 0..c.dim() {
        for j in 0..c.dim() {
            let k = index.shell_of(i).max(index.shell_of(j));
            shell_max[k] = shell_max[k].max(c.at(i, j).norm().as_f64());
        }
    }
    let (exponent, _) = tail_fit(&shell_max, cutoff);
    let rapid_decay = (MIN_FIT_CUTOFF.min(cutoff)..=cutoff).all(|kc| tail_fit(&shell_max, kc).1);
    GrowthReport { shell_max, exponent, fit_range: fit_range(cutoff), rapid_decay }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn diagonal(cutoff: usize, v: impl Fn(usize) -> f64) -> CoefficientMatrix<f64> {
        let mut c = CoefficientMatrix::zeros(1, cutoff, "diag").unwrap();
        for k in 0..=cutoff {
            c.set(k, k, Complex::new(v(k), 0.0));
        }
        c
    }

    #[test]
    fn exponents() {
        let lin = growth_diagnostic(&diagonal(8, |k| k as f64 + 1.0));
        assert!((lin.exponent.unwrap() - 1.0).abs() < 1e-12);
        assert!(!lin.rapid_decay);
        let quad = growth_diagnostic(&diagonal(8, |k| (k as f64 + 1.0).powi(2)));
        assert!((quad.exponent.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rapid_decay_cases() {
        assert!(growth_diagnostic(&diagonal(6, |k| if k == 0 { 2.0 } else { 0.0 })).rapid_decay);
        assert!(growth_diagnostic(&diagonal(10, |k| (-(k as f64) * 3.0).exp())).rapid_decay);
        assert!(growth_diagnostic(&CoefficientMatrix::<f64>::zeros(1, 5, "zero").unwrap()).rapid_decay);
    }

    #[test]
    fn flag_is_monotone_in_cutoff() {
        // decays fast after shell 6 but not before; false on a prefix stays false
        let v = |k: usize| if k <= 6 { 1.0 } else { 1e-20 };
        assert!(!growth_diagnostic(&diagonal(6, v)).rapid_decay);
        assert!(!growth_diagnostic(&diagonal(14, v)).rapid_decay);
    }
}
