//! Pairing-only evaluation for Gaussian ensembles.
//!
//! For GUE, E[x_ab x_cd] = δ_ad δ_bc, so each pairing τ with τ ∨ γ = 1 and
//! τ ≤ ker(i) contributes S_{π_τ^ε}(N). GOE is reached through
//! X = (Z + Zᵀ)/√2 with Z a GUE matrix, which turns one word into 2^m
//! marked GUE words.

use super::word::{s_geq_raw, TraceWord};
use super::{Budget, DeterministicSet, ExactCumulantResult};
use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;
use crate::partitions::{enumerate_pairings, join, lift_pairing_eps, GroundSet, Mark, SetPartition};
use crate::randmat::EnsembleTag;
use num_complex::Complex64;
use std::collections::HashMap;

/// Largest m accepted on the GOE path (2^m marked words).
pub const GOE_MAX_M: usize = 10;

/// Pairings τ of [m] with τ ∨ γ = 1 and τ ≤ ker(i).
pub fn admissible_pairings(word: &TraceWord) -> Result<Vec<SetPartition>> {
    let m = word.m();
    if m % 2 == 1 {
        return Ok(Vec::new());
    }
    let gamma = word.gamma().partition();
    let mut out = Vec::new();
    for tau in enumerate_pairings(GroundSet::range(m))? {
        let same_symbol = tau.blocks().iter().all(|b| word.letter(b[0]).symbol == word.letter(b[1]).symbol);
        if same_symbol && join(&tau, gamma)?.is_one() {
            out.push(tau);
        }
    }
    Ok(out)
}

/// K_r for GUE or GOE by summing over pairings.
pub fn exact_cumulant_gaussian(
    word: &TraceWord,
    det: &DeterministicSet,
    tag: EnsembleTag,
    budget: &Budget,
) -> Result<ExactCumulantResult> {
    let m = word.m();
    let zero = ExactCumulantResult { value: Complex64::new(0.0, 0.0), contributing: 0, ledger: None };
    if m % 2 == 1 {
        return Ok(zero);
    }
    if tag == EnsembleTag::Goe && m > GOE_MAX_M {
        return Err(Error::Size(format!("GOE expansion visits 2^m marked words; m = {m} exceeds {GOE_MAX_M}")));
    }
    let pairings = admissible_pairings(word)?;
    if pairings.is_empty() {
        return Ok(zero);
    }
    let mats = word.resolve(det)?;
    let n = det.dim();
    let mut cache: HashMap<Vec<u8>, Complex64> = HashMap::new();
    let mut gue_sum = |marks: &[Mark], acc: &mut NeumaierSum| -> Result<()> {
        for tau in &pairings {
            let pi = lift_pairing_eps(tau, marks)?;
            let rgs: Vec<u8> = pi.assignment().iter().map(|&b| b as u8).collect();
            let s = match cache.get(&rgs) {
                Some(s) => *s,
                None => {
                    let s = s_geq_raw(word, &rgs, &mats, n, budget)?;
                    cache.insert(rgs, s);
                    s
                }
            };
            acc.add(s);
        }
        Ok(())
    };
    let base = word.marks();
    let mut acc = NeumaierSum::default();
    let scale = match tag {
        EnsembleTag::Gue => {
            gue_sum(&base, &mut acc)?;
            1.0
        }
        EnsembleTag::Goe => {
            for flips in 0u32..(1 << m) {
                let marks: Vec<Mark> = base
                    .iter()
                    .enumerate()
                    .map(|(k, &e)| match (e, flips >> k & 1 == 1) {
                        (e, false) => e,
                        (Mark::Plain, true) => Mark::Transposed,
                        (Mark::Transposed, true) => Mark::Plain,
                    })
                    .collect();
                gue_sum(&marks, &mut acc)?;
            }
            2f64.powf(-(m as f64) / 2.0)
        }
        EnsembleTag::Wigner => return Err(Error::Mode("the pairing path needs a Gaussian ensemble".into())),
    };
    Ok(ExactCumulantResult {
        value: acc.value() * scale * (n as f64).powf(-(m as f64) / 2.0),
        contributing: pairings.len(),
        ledger: None,
    })
}
