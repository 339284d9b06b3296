//! Sampled traces and what can be read off them: cumulant estimates with
//! bootstrap errors, the normalized statistic, scaling fits and CLT
//! diagnostics.

mod clt;
mod estimate;
mod scaling;

pub use clt::{clt_diagnostics, concentration_alpha, ks_distance, CltDiagnostics, ConcentrationFit};
pub use estimate::{estimate_cumulants, mean_variance, normalize_statistic, CumulantEstimate, EstimatorKind, BOOTSTRAP_RESAMPLES};
pub use scaling::{fit_scaling_exponent, ScalingFit, ScalingVerdict};

use crate::error::{Error, Result};
use crate::expansion::{DeterministicSet, PolynomialSpec};
use crate::randmat::{sample_batch, trace_poly, Ensemble};
use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;
use rayon::prelude::*;
use std::io::{Read, Write};

/// Tr P(X, D) over independent samples.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceSampleSet {
    pub n: usize,
    pub spec_id: u64,
    pub values: Vec<Complex64>,
    pub seed: u64,
}

/// Imaginary parts up to this multiple of the largest |value| count as real.
pub const REAL_TOL: f64 = 1e-10;

impl TraceSampleSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Real parts, or a mode error if some imaginary part is not negligible.
    pub fn real_values(&self) -> Result<Vec<f64>> {
        let scale = self.values.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        if let Some((i, z)) = self.values.iter().enumerate().find(|(_, z)| z.im.abs() > REAL_TOL * scale) {
            return Err(Error::Mode(format!(
                "sample {i} has imaginary part {} (the statistic is not real; use a self-adjoint polynomial)",
                z.im
            )));
        }
        Ok(self.values.iter().map(|z| z.re).collect())
    }

    pub fn from_real(n: usize, spec_id: u64, seed: u64, values: &[f64]) -> Self {
        TraceSampleSet { n, spec_id, seed, values: values.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    const MAGIC: &'static [u8; 4] = b"TCS1";

    /// Little-endian: magic, N, spec id, count, seed (u64 each), then
    /// (re, im) float64 pairs.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(Self::MAGIC)?;
        for h in [self.n as u64, self.spec_id, self.values.len() as u64, self.seed] {
            w.write_u64::<LittleEndian>(h)?;
        }
        for z in &self.values {
            w.write_f64::<LittleEndian>(z.re)?;
            w.write_f64::<LittleEndian>(z.im)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != Self::MAGIC {
            return Err(Error::Parse("not a trace sample file".into()));
        }
        let mut h = [0u64; 4];
        for x in h.iter_mut() {
            *x = r.read_u64::<LittleEndian>()?;
        }
        let count = h[2] as usize;
        let mut values = Vec::with_capacity(count);
        for _ in 0..count {
            let re = r.read_f64::<LittleEndian>()?;
            let im = r.read_f64::<LittleEndian>()?;
            values.push(Complex64::new(re, im));
        }
        Ok(TraceSampleSet { n: h[0] as usize, spec_id: h[1], values, seed: h[3] })
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(f)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::read_from(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

/// Samples `count` values of Tr P. Sample k uses substreams (seed, k, symbol),
/// so the result does not depend on the thread count.
pub fn simulate(
    spec: &PolynomialSpec,
    spec_id: u64,
    ens: &Ensemble,
    det: &DeterministicSet,
    count: usize,
    seed: u64,
) -> Result<TraceSampleSet> {
    let n = det.dim();
    let symbols = spec.symbols().iter().next_back().map_or(0, |s| s + 1);
    let values = (0..count as u64)
        .into_par_iter()
        .map(|k| trace_poly(spec, &sample_batch(n, ens, symbols, seed, k), det))
        .collect::<Result<Vec<_>>>()?;
    Ok(TraceSampleSet { n, spec_id, values, seed })
}
