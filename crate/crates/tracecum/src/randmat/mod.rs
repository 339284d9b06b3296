//! Samplers for GUE/GOE/Wigner matrices, deterministic builtins, and trace
//! evaluation of polynomial words.
//!
//! Matrices follow the normalization X = N^{-1/2}(x_ij) with x_ij = conj(x_ji).

mod dist;
mod io;
mod norm;

pub use dist::{EntryDistribution, EntryLaw};
pub use io::{format_complex, parse_complex, read_matrix_csv, write_matrix_csv};
pub use norm::{abs_operator_norm, operator_norm};

use crate::error::{Error, Result};
use crate::expansion::{DeterministicSet, PolynomialSpec};
use crate::partitions::Mark;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleTag {
    Gue,
    Goe,
    Wigner,
}

/// Entry laws for the strict upper triangle and the diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub tag: EnsembleTag,
    pub off: EntryDistribution,
    pub diag: EntryDistribution,
}

impl Ensemble {
    /// Off-diagonal ℂN(0,1), diagonal N(0,1).
    pub fn gue() -> Self {
        Ensemble {
            tag: EnsembleTag::Gue,
            off: EntryDistribution::standard(EntryLaw::GaussianComplex),
            diag: EntryDistribution::standard(EntryLaw::GaussianReal),
        }
    }

    /// Off-diagonal N(0,1), diagonal N(0,2).
    pub fn goe() -> Self {
        Ensemble {
            tag: EnsembleTag::Goe,
            off: EntryDistribution::standard(EntryLaw::GaussianReal),
            diag: EntryDistribution { law: EntryLaw::GaussianReal, scale: std::f64::consts::SQRT_2 },
        }
    }

    pub fn wigner(off: EntryDistribution, diag: EntryDistribution) -> Result<Self> {
        off.validate()?;
        diag.validate()?;
        if diag.is_complex() {
            return Err(Error::Config("diagonal entries must be real".into()));
        }
        Ok(Ensemble { tag: EnsembleTag::Wigner, off, diag })
    }

    /// Every entry uniform(−1/2, 1/2).
    pub fn uniform_wigner() -> Self {
        let u = EntryDistribution::standard(EntryLaw::Uniform);
        Ensemble { tag: EnsembleTag::Wigner, off: u.clone(), diag: u }
    }
}

/// Matrices for each random symbol of one sample.
#[derive(Clone, Debug)]
pub struct SampleBatch {
    pub matrices: Vec<DMatrix<Complex64>>,
    pub seed: u64,
    pub substream: u64,
}

/// One self-adjoint N×N draw, built from the upper triangle.
pub fn sample_ensemble<R: Rng + ?Sized>(n: usize, ens: &Ensemble, rng: &mut R) -> DMatrix<Complex64> {
    let s = 1.0 / (n as f64).sqrt();
    let mut x = DMatrix::zeros(n, n);
    for i in 0..n {
        x[(i, i)] = Complex64::new(ens.diag.sample(rng).re * s, 0.0);
        for j in i + 1..n {
            let z = ens.off.sample(rng) * s;
            x[(i, j)] = z;
            x[(j, i)] = z.conj();
        }
    }
    x
}

/// The RNG for (seed, sample, symbol): one ChaCha stream per pair.
pub fn substream_rng(seed: u64, sample: u64, symbol: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((sample << 16) | symbol as u64);
    rng
}

/// Independent matrices for symbols 0..symbols, reproducible from
/// (seed, sample).
pub fn sample_batch(n: usize, ens: &Ensemble, symbols: usize, seed: u64, sample: u64) -> SampleBatch {
    let matrices = (0..symbols)
        .map(|sym| sample_ensemble(n, ens, &mut substream_rng(seed, sample, sym)))
        .collect();
    SampleBatch { matrices, seed, substream: sample }
}

pub const BUILTINS: &[(&str, &str)] = &[
    ("identity", "the identity matrix"),
    ("upper-bidiagonal-ones", "ones on the diagonal and the first superdiagonal (norm at most 2)"),
    ("diag-alternating-signs", "diag(1, -1, 1, ...)"),
    ("random-unit-norm:<seed>", "real Gaussian matrix from the seed, rescaled to operator norm 1"),
    ("file:<path>", "matrix read from a CSV file (first line N, then rows of a+bi entries)"),
];

pub fn builtin_deterministic(name: &str, n: usize) -> Result<DMatrix<Complex64>> {
    let re = |f: &dyn Fn(usize, usize) -> f64| DMatrix::from_fn(n, n, |i, j| Complex64::new(f(i, j), 0.0));
    match name {
        "identity" => Ok(DMatrix::identity(n, n)),
        "upper-bidiagonal-ones" => Ok(re(&|i, j| if i == j || j == i + 1 { 1.0 } else { 0.0 })),
        "diag-alternating-signs" => Ok(re(&|i, j| if i != j { 0.0 } else if i % 2 == 0 { 1.0 } else { -1.0 })),
        _ => {
            if let Some(seed) = name.strip_prefix("random-unit-norm:") {
                let seed: u64 = seed.parse().map_err(|_| Error::Config(format!("bad seed in '{name}'")))?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let g = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.sample(rand_distr::StandardNormal), 0.0));
                let norm = operator_norm(&g)?;
                if norm == 0.0 {
                    return Err(Error::Numeric("random matrix has zero norm".into()));
                }
                Ok(g / Complex64::new(norm, 0.0))
            } else if let Some(path) = name.strip_prefix("file:") {
                let m = read_matrix_csv(std::path::Path::new(path)).map_err(|e| Error::Config(e.to_string()))?;
                if m.nrows() != n {
                    return Err(Error::Config(format!("'{path}' holds a {}x{} matrix, expected N={n}", m.nrows(), m.ncols())));
                }
                Ok(m)
            } else {
                Err(Error::Config(format!("unknown deterministic builtin '{name}'")))
            }
        }
    }
}

/// A [`DeterministicSet`] from builtin names, indexed in order.
pub fn builtin_set(names: &[&str], n: usize) -> Result<DeterministicSet> {
    let mut d = DeterministicSet::new(n);
    for name in names {
        d.push(name, builtin_deterministic(name, n)?)?;
    }
    Ok(d)
}

/// Tr(A·B) without forming the product.
fn trace_of_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

/// Tr P(X, D) on one sample. The last multiplication of each word is
/// replaced by a trace-of-product sum, and identity letters cost nothing.
pub fn trace_poly(spec: &PolynomialSpec, batch: &SampleBatch, det: &DeterministicSet) -> Result<Complex64> {
    let n = det.dim();
    let mut total = Complex64::new(0.0, 0.0);
    for mono in &spec.monomials {
        let mut factors: Vec<std::borrow::Cow<DMatrix<Complex64>>> = Vec::new();
        for l in &mono.letters {
            let x = batch
                .matrices
                .get(l.symbol)
                .ok_or_else(|| Error::Config(format!("no sampled matrix for symbol X{}", l.symbol)))?;
            if x.nrows() != n {
                return Err(Error::Shape(format!("sample is {}x{}, deterministic set has N={n}", x.nrows(), x.ncols())));
            }
            factors.push(match l.mark {
                Mark::Plain => std::borrow::Cow::Borrowed(x),
                Mark::Transposed => std::borrow::Cow::Owned(x.transpose()),
            });
            for &j in &l.det {
                factors.push(std::borrow::Cow::Borrowed(det.get(j)?));
            }
        }
        let value = match factors.len() {
            1 => factors[0].trace(),
            _ => {
                let last = factors.pop().unwrap();
                let mut acc = factors[0].clone().into_owned();
                for f in &factors[1..] {
                    acc = &acc * f.as_ref();
                }
                trace_of_product(&acc, &last)
            }
        };
        total += mono.coeff * value;
    }
    Ok(total)
}
