//! Concentration of the distance to a base point around its median.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stats::{linear_fit, quantile_sorted, sorted};

pub const MIN_SAMPLES: usize = 10_000;
/// Tail fits with smaller `R²` are inconclusive.
pub const MIN_R2: f64 = 0.7;

#[derive(Debug, Clone, Serialize)]
pub struct ConcentrationReport {
    pub r_med: f64,
    /// `(γ, share of samples with |d - R_med| ≥ γ)`.
    pub tail: Vec<(f64, f64)>,
    pub slope: f64,
    pub r2: f64,
    /// `exp(-slope)`.
    pub a: f64,
    pub conclusive: bool,
    /// `R_X ≤ R_med ≤ R_X + 3 ln R_X`, when `R_X` is given.
    pub window: Option<(f64, f64, bool)>,
}

/// Fits `ln Pr(|d - R_med| ≥ γ)` linearly in `γ` on `γ = step, 2 step, …`
/// while at least 10 finite samples remain in the tail. Samples beyond the
/// measured range may be `+∞`.
pub fn concentration_fit(samples: &[f64], step: f64, r_x: Option<f64>) -> Result<ConcentrationReport> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::Insufficient(format!(
            "{} samples, need {MIN_SAMPLES}",
            samples.len()
        )));
    }
    let s = sorted(samples);
    let r_med = quantile_sorted(&s, 0.5);
    if !r_med.is_finite() {
        return Err(Error::Insufficient("median lies beyond the measured range".into()));
    }
    let n = s.len() as f64;
    let mut tail = Vec::new();
    let mut g = step;
    loop {
        let m = s.iter().filter(|d| (**d - r_med).abs() >= g).count();
        // censored samples alone cannot resolve the tail any further
        let resolved = s.iter().filter(|d| d.is_finite() && (**d - r_med).abs() >= g).count();
        if resolved < 10 {
            break;
        }
        tail.push((g, m as f64 / n));
        g += step;
    }
    if tail.len() < 3 {
        return Err(Error::Insufficient(format!("only {} tail points", tail.len())));
    }
    let xs: Vec<f64> = tail.iter().map(|t| t.0).collect();
    let ys: Vec<f64> = tail.iter().map(|t| t.1.ln()).collect();
    let fit = linear_fit(&xs, &ys)?;
    let window = r_x.map(|rx| {
        let hi = rx + 3.0 * rx.ln();
        (rx, hi, rx <= r_med && r_med <= hi)
    });
    Ok(ConcentrationReport {
        r_med,
        tail,
        slope: fit.slope,
        r2: fit.r2,
        a: (-fit.slope).exp(),
        conclusive: fit.r2 >= MIN_R2,
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::walker_rng;
    use rand::Rng;
    use rand_distr::Exp1;

    #[test]
    fn synthetic_exponential_tail() {
        // |d - R| is Exp(1), so Pr(|d - R| ≥ γ) = e^{-γ}
        let mut rng = walker_rng(3, 0);
        let s: Vec<f64> = (0..100_000)
            .map(|_| {
                let e: f64 = rng.sample(Exp1);
                if rng.random::<bool>() { 5.0 + e } else { 5.0 - e }
            })
            .collect();
        let r = concentration_fit(&s, 0.25, None).unwrap();
        assert!((r.slope + 1.0).abs() < 0.05, "{}", r.slope);
        assert!(r.conclusive);
    }

    #[test]
    fn degenerate_sample_refused() {
        assert!(concentration_fit(&[1.0, 2.0], 0.25, None).is_err());
        assert!(concentration_fit(&vec![1.0; 20_000], 0.25, None).is_err());
    }

    #[test]
    fn censored_samples_end_the_grid() {
        let mut s: Vec<f64> = (0..20_000).map(|i| 5.0 + ((i % 200) as f64 - 100.0) / 100.0).collect();
        s.extend(std::iter::repeat_n(f64::INFINITY, 50));
        let r = concentration_fit(&s, 0.1, None).unwrap();
        assert!(r.tail.last().unwrap().0 <= 1.0);
    }
}
