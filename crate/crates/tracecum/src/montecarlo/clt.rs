use crate::error::{Error, Result};
use crate::randmat::EnsembleTag;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

/// Fitted stand-in for the concentration inequality
/// P(𝐗 ≥ x) ≤ exp(−x² / (2(H + x^{2−α} / Δ̄^α))): the x^{2−α} coefficient
/// comes from least squares on x²/(−2 ln p), then H is raised to the
/// smallest value that makes the curve an upper envelope of the tail table.
#[derive(Clone, Debug, Serialize)]
pub struct ConcentrationFit {
    pub alpha: f64,
    pub h: f64,
    /// Δ̄; infinite when the fitted x^{2−α} coefficient is zero.
    pub delta_bar: f64,
    pub slack: f64,
    /// Grid points where the empirical tail exceeds slack × fitted curve.
    pub violations: Vec<f64>,
}

impl ConcentrationFit {
    pub fn curve(&self, x: f64) -> f64 {
        let b = if self.delta_bar.is_finite() { self.delta_bar.powf(-self.alpha) } else { 0.0 };
        (-x * x / (2.0 * (self.h + b * x.powf(2.0 - self.alpha)))).exp()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CltDiagnostics {
    pub samples: usize,
    pub ks: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// (x, P(𝐗 ≥ x)) for x = 0, 0.5, ..., 5.
    pub exceedance: Vec<(f64, f64)>,
    pub concentration: ConcentrationFit,
}

pub const MIN_CLT_SAMPLES: usize = 10_000;

/// α of the concentration form: 2/M for GUE/GOE, 1/(3M) for Wigner, and
/// 1/M for Wigner under the absolute-value norm condition.
pub fn concentration_alpha(tag: EnsembleTag, degree: usize, abs_norm_condition: bool) -> f64 {
    let m = degree as f64;
    match tag {
        EnsembleTag::Gue | EnsembleTag::Goe => 2.0 / m,
        EnsembleTag::Wigner if abs_norm_condition => 1.0 / m,
        EnsembleTag::Wigner => 1.0 / (3.0 * m),
    }
}

/// sup_t |F_n(t) − Φ(t)| over the sorted sample.
pub fn ks_distance(xs: &[f64]) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    let phi = Normal::new(0.0, 1.0).expect("standard normal");
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = phi.cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

fn fit_concentration(grid: &[(f64, f64)], alpha: f64, slack: f64) -> ConcentrationFit {
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .filter(|&&(x, p)| x > 0.0 && p > 0.0 && p < 1.0)
        .map(|&(x, p)| (x.powf(2.0 - alpha), x * x / (-2.0 * p.ln())))
        .collect();
    let (mut h, mut b) = (0.0, 0.0);
    if pts.len() >= 2 {
        let k = pts.len() as f64;
        let mu = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mu).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mu) * (p.1 - my)).sum();
        b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        h = my - b * mu;
        if b < 0.0 {
            b = 0.0;
        }
    }
    // raise H until the curve lies above every observed tail value
    if let Some(need) = pts.iter().map(|p| p.1 - b * p.0).reduce(f64::max) {
        h = h.max(need);
    }
    h = h.max(f64::MIN_POSITIVE);
    let delta_bar = if b > 0.0 { b.powf(-1.0 / alpha) } else { f64::INFINITY };
    let mut fit = ConcentrationFit { alpha, h, delta_bar, slack, violations: Vec::new() };
    fit.violations = grid.iter().filter(|&&(x, p)| p > slack * fit.curve(x)).map(|&(x, _)| x).collect();
    fit
}

/// KS distance, moments, tail table and concentration fit of a normalized
/// statistic.
pub fn clt_diagnostics(z: &[f64], alpha: f64, slack: f64) -> Result<CltDiagnostics> {
    if z.len() < MIN_CLT_SAMPLES {
        return Err(Error::Size(format!("{} samples; CLT diagnostics need at least {MIN_CLT_SAMPLES}", z.len())));
    }
    let n = z.len() as f64;
    let mean = z.iter().sum::<f64>() / n;
    let m2 = z.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = z.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    let m4 = z.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    let exceedance: Vec<(f64, f64)> = (0..=10)
        .map(|k| {
            let x = k as f64 * 0.5;
            (x, z.iter().filter(|&&v| v >= x).count() as f64 / n)
        })
        .collect();
    Ok(CltDiagnostics {
        samples: z.len(),
        ks: ks_distance(z),
        skewness: m3 / m2.powf(1.5),
        excess_kurtosis: m4 / (m2 * m2) - 3.0,
        concentration: fit_concentration(&exceedance, alpha, slack),
        exceedance,
    })
}
