use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingVerdict {
    Consistent,
    Inconsistent,
    /// Too few points or estimates indistinguishable from zero.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub band: (f64, f64),
    pub target: f64,
    pub verdict: ScalingVerdict,
}

fn ls_slope(pts: &[(f64, f64)]) -> f64 {
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Least-squares slope of log|K| against log N, with a 95% band from 200
/// parametric resamples of the estimates (zero width for exact input), and a
/// verdict against `target` with tolerance `tol` beyond the band.
///
/// `points` holds (N, estimate, standard error).
pub fn fit_scaling_exponent(points: &[(usize, f64, f64)], target: f64, tol: f64) -> Result<ScalingFit> {
    let mut ns: Vec<usize> = points.iter().map(|p| p.0).collect();
    ns.sort_unstable();
    ns.dedup();
    let usable = points.iter().all(|p| p.1.is_finite() && p.1 != 0.0 && p.1.abs() >= 3.0 * p.2);
    if ns.len() < 3 || !usable {
        return Ok(ScalingFit { slope: f64::NAN, band: (f64::NAN, f64::NAN), target, verdict: ScalingVerdict::Inconclusive });
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|p| ((p.0 as f64).ln(), p.1.abs().ln())).collect();
    let slope = ls_slope(&logs);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5CA1E);
    let mut slopes = Vec::with_capacity(200);
    for _ in 0..200 {
        let pts: Vec<(f64, f64)> = points
            .iter()
            .zip(&logs)
            .map(|(p, l)| {
                let noise = if p.2 > 0.0 { Normal::new(0.0, p.2).map_err(|e| Error::Numeric(e.to_string()))?.sample(&mut rng) } else { 0.0 };
                Ok((l.0, (p.1 + noise).abs().max(f64::MIN_POSITIVE).ln()))
            })
            .collect::<Result<_>>()?;
        slopes.push(ls_slope(&pts));
    }
    slopes.sort_by(|a, b| a.total_cmp(b));
    let band = (slopes[4].min(slope), slopes[195].max(slope));
    let verdict = if target >= band.0 - tol && target <= band.1 + tol {
        ScalingVerdict::Consistent
    } else {
        ScalingVerdict::Inconsistent
    };
    Ok(ScalingFit { slope, band, target, verdict })
}
