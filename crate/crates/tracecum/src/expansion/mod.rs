//! Exact mixed cumulants of traces of words in random and deterministic
//! matrices.
//!
//! The general path expands over partitions π of ±[m] and τ of [m]; the
//! Gaussian path sums over pairings only; the oracle enumerates every index
//! map. All three agree on the test grids.

mod bounds;
mod contract;
mod detset;
mod exact;
mod gaussian;
mod model;
mod oracle;
mod spec;
mod word;

pub use bounds::{
    corollary_bound, evaluate_exact, fit_theta, theorem_shape, verify_bound, verify_bounds, BoundCase, ThetaFit, Verdict,
};
pub use detset::DeterministicSet;
pub use exact::{entry_cumulant_for, exact_cumulant, write_ledger_csv, ExactCumulantResult, ExpansionPlan, LedgerRow};
pub use gaussian::{admissible_pairings, exact_cumulant_gaussian, GOE_MAX_M};
pub use model::EntryCumulantModel;
pub use oracle::bruteforce_cumulant_oracle;
pub use spec::{Letter, Monomial, PolynomialSpec};
pub use word::{s_pi_eq, s_pi_eq_direct, s_pi_geq, s_pi_geq_direct, TraceWord};

use crate::error::Result;
use crate::numeric::NeumaierSum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Work limits. Exceeding any of them is a size error, never a silent
/// truncation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    /// Largest m for the general expansion (Bell(2m) partitions).
    pub max_m: usize,
    /// Largest intermediate tensor N^k in a contraction.
    pub max_tensor: u64,
    /// Largest N^{#blocks} for direct S_π enumeration.
    pub max_direct: u64,
    /// Largest N^{2m} for the brute-force oracle.
    pub max_oracle: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_m: 6, max_tensor: 1 << 24, max_direct: 1_000_000, max_oracle: 6u64.pow(8) }
    }
}

/// K_r(Tr P, ..., Tr P) for P = Σ c_k w_k, expanded by multilinearity into
/// mixed cumulants of the words. Each multiset of words is evaluated once and
/// weighted by its multinomial count.
pub fn polynomial_cumulant<F>(spec: &PolynomialSpec, r: usize, mut eval: F) -> Result<Complex64>
where
    F: FnMut(&TraceWord) -> Result<Complex64>,
{
    let t = spec.monomials.len();
    let mut acc = NeumaierSum::default();
    // nondecreasing index tuples of length r over 0..t
    let mut idx = vec![0usize; r];
    loop {
        let words: Vec<&Monomial> = idx.iter().map(|&k| &spec.monomials[k]).collect();
        let mut weight: f64 = (1..=r).map(|i| i as f64).product();
        let mut run = 1usize;
        for w in idx.windows(2) {
            if w[0] == w[1] {
                run += 1;
                weight /= run as f64;
            } else {
                run = 1;
            }
        }
        let coeff = words.iter().fold(Complex64::new(weight, 0.0), |c, w| c * w.coeff);
        if coeff != Complex64::new(0.0, 0.0) {
            acc.add(coeff * eval(&TraceWord::new(&words)?)?);
        }
        let Some(p) = (0..r).rev().find(|&p| idx[p] + 1 < t) else { break };
        let v = idx[p] + 1;
        idx[p..].iter_mut().for_each(|x| *x = v);
    }
    Ok(acc.value())
}
