//! Least-squares power-law fits.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerFit {
    /// Exponent `p` in `y ~ K x^p`.
    pub exponent: f64,
    pub prefactor: f64,
    pub points: usize,
}

/// Fits `log y = p log x + log K` by ordinary least squares. Needs at least
/// two points with distinct `x`; nonpositive values are skipped.
pub fn power_law(xs: &[f64], ys: &[f64]) -> Option<PowerFit> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    Some(PowerFit {
        exponent,
        prefactor: (my - exponent * mx).exp(),
        points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power() {
        let xs: Vec<f64> = (1..8).map(|k| 0.5f64.powi(k)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(1.5)).collect();
        let fit = power_law(&xs, &ys).unwrap();
        assert!((fit.exponent - 1.5).abs() < 1e-12);
        assert!((fit.prefactor - 3.0).abs() < 1e-10);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(power_law(&[1.0], &[1.0]).is_none());
        assert!(power_law(&[1.0, 1.0], &[1.0, 2.0]).is_none());
        assert!(power_law(&[1.0, 2.0], &[0.0, 0.0]).is_none());
    }
}
