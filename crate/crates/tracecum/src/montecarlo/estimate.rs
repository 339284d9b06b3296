use super::TraceSampleSet;
use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;
use crate::partitions::{cumulants_from_moments, MomentCumulantTable};
use crate::randmat::substream_rng;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const BOOTSTRAP_RESAMPLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorKind {
    KStatistic,
    PlugIn,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CumulantEstimate {
    pub order: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub kind: EstimatorKind,
}

fn kind(order: usize) -> EstimatorKind {
    if order <= 4 {
        EstimatorKind::KStatistic
    } else {
        EstimatorKind::PlugIn
    }
}

fn sum(xs: impl Iterator<Item = f64>) -> f64 {
    xs.map(|x| Complex64::new(x, 0.0)).collect::<NeumaierSum>().value().re
}

/// Orders 1..=r_max: k-statistics up to order 4, plug-in Möbius inversion of
/// central moments above.
fn point_estimates(xs: &[f64], r_max: usize) -> Result<Vec<f64>> {
    let n = xs.len() as f64;
    let mean = sum(xs.iter().copied()) / n;
    let mut m = vec![0.0; r_max.max(4) + 1];
    for (j, mj) in m.iter_mut().enumerate().skip(2) {
        *mj = sum(xs.iter().map(|x| (x - mean).powi(j as i32))) / n;
    }
    let mut out = vec![mean];
    if r_max >= 2 {
        out.push(n / (n - 1.0) * m[2]);
    }
    if r_max >= 3 {
        out.push(n * n / ((n - 1.0) * (n - 2.0)) * m[3]);
    }
    if r_max >= 4 {
        out.push(n * n * ((n + 1.0) * m[4] - 3.0 * (n - 1.0) * m[2] * m[2]) / ((n - 1.0) * (n - 2.0) * (n - 3.0)));
    }
    if r_max >= 5 {
        let mut central = vec![0.0; r_max];
        central[1..].copy_from_slice(&m[2..=r_max]);
        let k = cumulants_from_moments(&MomentCumulantTable::real(&central))?;
        for order in 5..=r_max {
            out.push(k.at(order, 0).re);
        }
    }
    out.truncate(r_max);
    Ok(out)
}

/// Cumulant estimates of orders 1..=r_max with bootstrap standard errors
/// from [`BOOTSTRAP_RESAMPLES`] resamples drawn from substreams of `seed`.
pub fn estimate_cumulants(samples: &TraceSampleSet, r_max: usize, seed: u64) -> Result<Vec<CumulantEstimate>> {
    let xs = samples.real_values()?;
    let need = 10usize.saturating_mul(1usize.checked_shl(r_max as u32).unwrap_or(usize::MAX));
    if xs.len() < need.max(5) {
        return Err(Error::Size(format!("{} samples; order {r_max} needs at least {}", xs.len(), need.max(5))));
    }
    let point = point_estimates(&xs, r_max)?;
    let boot: Vec<Vec<f64>> = (0..BOOTSTRAP_RESAMPLES as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = substream_rng(seed, b, 0xBEEF);
            let re: Vec<f64> = (0..xs.len()).map(|_| xs[rng.gen_range(0..xs.len())]).collect();
            point_estimates(&re, r_max)
        })
        .collect::<Result<_>>()?;
    let nb = boot.len() as f64;
    Ok((0..r_max)
        .map(|j| {
            let mean = boot.iter().map(|v| v[j]).sum::<f64>() / nb;
            let var = boot.iter().map(|v| (v[j] - mean).powi(2)).sum::<f64>() / (nb - 1.0);
            CumulantEstimate { order: j + 1, estimate: point[j], stderr: var.sqrt(), kind: kind(j + 1) }
        })
        .collect())
}

/// Sample mean and E|z − Ez|², valid for complex traces too.
pub fn mean_variance(samples: &TraceSampleSet) -> Result<(Complex64, f64)> {
    if samples.is_empty() {
        return Err(Error::Size("no samples".into()));
    }
    let n = samples.len() as f64;
    let mean = samples.values.iter().copied().collect::<NeumaierSum>().value() / n;
    let var = sum(samples.values.iter().map(|z| (z - mean).norm_sqr())) / n;
    Ok((mean, var))
}

/// (Tr P − E Tr P)/√Var(Tr P), with the sample mean and variance unless
/// exact values are supplied.
pub fn normalize_statistic(samples: &TraceSampleSet, exact: Option<(f64, f64)>) -> Result<TraceSampleSet> {
    let xs = samples.real_values()?;
    let (mean, var) = match exact {
        Some(mv) => mv,
        None => {
            let (m, v) = mean_variance(samples)?;
            (m.re, v)
        }
    };
    if !(var > 1e-14 * mean * mean + f64::MIN_POSITIVE) {
        return Err(Error::ConditionC2(format!(
            "variance {var} of the trace statistic is not bounded away from 0"
        )));
    }
    let sd = var.sqrt();
    let mut values: Vec<f64> = xs.iter().map(|x| (x - mean) / sd).collect();
    if exact.is_none() {
        // one refinement pass removes the rounding left in mean and scale
        let n = values.len() as f64;
        let m2 = sum(values.iter().copied()) / n;
        values.iter_mut().for_each(|v| *v -= m2);
        let s2 = (sum(values.iter().map(|v| v * v)) / n).sqrt();
        values.iter_mut().for_each(|v| *v /= s2);
    }
    Ok(TraceSampleSet::from_real(samples.n, samples.spec_id, samples.seed, &values))
}
