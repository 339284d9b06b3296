//! Construction of a pairing σ ≤ τ whose join with γ has at most r/2 blocks.
//!
//! Follows the recursive argument: peel a pair off an oversized block while
//! the join stays connected; when it disconnects, solve both sides and, if
//! one side is a single cycle, re-pair across the cut. Free choices always
//! take the smallest candidates.

use super::{enumerate_even_partitions, gamma_partition, is_refinement, join, GroundSet, SetPartition};
use crate::error::{Error, Result};

/// Returns a pairing σ ≤ τ with #(σ∨γ) ≤ ⌊r/2⌋, where r = #γ ≥ 2.
///
/// Requires every block of τ to be even and τ∨γ = 1.
pub fn find_crossing_pairing(tau: &SetPartition, gamma: &SetPartition) -> Result<SetPartition> {
    if tau.domain() != gamma.domain() {
        return Err(Error::Contract("τ and γ live on different ground sets".into()));
    }
    if !tau.has_even_blocks() {
        return Err(Error::Contract(format!("τ = {tau} has a block of odd size")));
    }
    if gamma.num_blocks() < 2 {
        return Err(Error::Contract("γ must have at least two blocks".into()));
    }
    if !join(tau, gamma)?.is_one() {
        return Err(Error::Contract(format!("τ ∨ γ ≠ 1 for τ = {tau}")));
    }
    solve(tau, gamma)
}

fn pair_up(tau: &SetPartition) -> SetPartition {
    let blocks = tau.blocks().iter().flat_map(|b| b.chunks(2).map(|c| c.to_vec())).collect();
    SetPartition::from_blocks(tau.domain().clone(), blocks).expect("even blocks split into pairs")
}

fn solve(tau: &SetPartition, gamma: &SetPartition) -> Result<SetPartition> {
    let r = gamma.num_blocks();
    if tau.is_pairing() || r == 1 {
        return Ok(pair_up(tau));
    }
    if r == 2 {
        return Ok(two_cycle_case(tau, gamma));
    }
    let mut current = tau.clone();
    loop {
        let Some(bi) = current.blocks().iter().position(|b| b.len() >= 4) else {
            return Ok(current);
        };
        let block = current.blocks()[bi].clone();
        let (u, v) = (block[0], block[1]);
        let rest: Vec<i64> = block[2..].to_vec();
        let mut blocks: Vec<Vec<i64>> = current.blocks().to_vec();
        blocks[bi] = vec![u, v];
        blocks.push(rest.clone());
        let split = SetPartition::from_blocks(current.domain().clone(), blocks)?;
        let j = join(&split, gamma)?;
        if j.is_one() {
            current = split;
            continue;
        }
        if j.num_blocks() != 2 {
            return Err(Error::Contract("splitting one block produced more than two components".into()));
        }
        let ci = j.block_of(u).expect("u in domain");
        let c_set = GroundSet::new(j.blocks()[ci].clone())?;
        let d_set = GroundSet::new(j.blocks()[1 - ci].clone())?;
        let (tau_c, gamma_c) = (split.restrict(&c_set)?, gamma.restrict(&c_set)?);
        let (tau_d, gamma_d) = (split.restrict(&d_set)?, gamma.restrict(&d_set)?);
        let (rc, rd) = (gamma_c.num_blocks(), gamma_d.num_blocks());
        let sigma_c = solve(&tau_c, &gamma_c)?;
        let sigma_d = solve(&tau_d, &gamma_d)?;
        let mut pairs: Vec<Vec<i64>> = sigma_c.blocks().to_vec();
        pairs.extend(sigma_d.blocks().iter().cloned());
        if rc == 1 || rd == 1 {
            // One side is a single cycle: cross {u,v} with a pair {a,b} taken
            // from B \ {u,v} so the two sides become connected.
            let ab = sigma_d
                .blocks()
                .iter()
                .find(|p| rest.contains(&p[0]) && rest.contains(&p[1]))
                .cloned()
                .ok_or_else(|| Error::Contract("no pair inside B \\ {u,v}".into()))?;
            pairs.retain(|p| *p != vec![u, v] && *p != ab);
            pairs.push(vec![u, ab[0]]);
            pairs.push(vec![v, ab[1]]);
        }
        return SetPartition::from_blocks(tau.domain().clone(), pairs);
    }
}

fn two_cycle_case(tau: &SetPartition, gamma: &SetPartition) -> SetPartition {
    let block = tau
        .blocks()
        .iter()
        .find(|b| b.iter().any(|&x| !gamma.same_block(x, b[0])))
        .expect("τ ∨ γ = 1 forces a block meeting both cycles")
        .clone();
    let u = block[0];
    let v = *block.iter().find(|&&x| !gamma.same_block(x, u)).unwrap();
    let mut pairs = vec![vec![u, v]];
    let rest: Vec<i64> = block.iter().copied().filter(|&x| x != u && x != v).collect();
    pairs.extend(rest.chunks(2).map(|c| c.to_vec()));
    for b in tau.blocks() {
        if *b != block {
            pairs.extend(b.chunks(2).map(|c| c.to_vec()));
        }
    }
    SetPartition::from_blocks(tau.domain().clone(), pairs).expect("pairs cover the domain")
}

/// Compositions of m into exactly r positive parts, in lexicographic order.
pub fn compositions(m: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(m: usize, r: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if r == 1 {
            if m >= 1 {
                prefix.push(m);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        for first in 1..m {
            if m - first < r - 1 {
                break;
            }
            prefix.push(first);
            go(m - first, r - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r >= 1 && m >= r {
        go(m, r, &mut Vec::new(), &mut out);
    }
    out
}

/// Outcome of the exhaustive check of [`find_crossing_pairing`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossingSuiteReport {
    pub checked: usize,
    /// Cases breaking the contract (r/2 for even r, (r+1)/2 for odd r).
    pub violations: Vec<String>,
    /// Cases where #(σ∨γ) exceeded ⌊r/2⌋ (only possible for odd r).
    pub above_floor: usize,
}

/// Runs the construction on every even-block τ with τ∨γ = 1 for all shapes
/// with even m ≤ max_m and 2 ≤ r ≤ max_r.
pub fn crossing_suite(max_m: usize, max_r: usize) -> Result<CrossingSuiteReport> {
    let mut report = CrossingSuiteReport::default();
    for m in (2..=max_m).step_by(2) {
        let taus: Vec<SetPartition> = enumerate_even_partitions(m)?.collect();
        for r in 2..=max_r.min(m) {
            for shape in compositions(m, r) {
                let gamma = gamma_partition(&shape)?;
                let g = gamma.partition();
                for tau in &taus {
                    if !join(tau, g)?.is_one() {
                        continue;
                    }
                    report.checked += 1;
                    let sigma = find_crossing_pairing(tau, g)?;
                    let k = join(&sigma, g)?.num_blocks();
                    let bound = r.div_ceil(2);
                    if !sigma.is_pairing() || !is_refinement(&sigma, tau)? || k > bound {
                        report.violations.push(format!(
                            "shape {shape:?} τ = {tau}: σ = {sigma}, #(σ∨γ) = {k}"
                        ));
                    }
                    if k > r / 2 {
                        report.above_floor += 1;
                    }
                }
            }
        }
    }
    Ok(report)
}
