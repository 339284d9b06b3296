//! Exhaustive and randomized checks of the graph-order lemmas.
//!
//! Each suite returns a [`SuiteReport`]; a violation is a counterexample to
//! the inequality being checked, recorded as a human-readable line.

use super::{build_word_graphs, merge_by_graph, quotient, t_exponent, cycle_count, GogEdge, GraphOfGraphs, HalfInteger, MultiGraph};
use crate::error::Result;
use crate::partitions::{
    compositions, enumerate_even_partitions, enumerate_pairings, join, lift_pairing, lift_pairing_eps,
    GroundSet, Mark, SetPartition,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checked: usize,
    pub violations: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.to_string(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn half(twice: i64) -> HalfInteger {
    HalfInteger::from_twice(twice)
}

/// r = 1: D^{π_τ} has at most m/2 + 1 cycles for every pairing τ of [m].
pub fn gue_cycle_suite(max_m: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("gue-cycle-bound");
    for m in (2..=max_m).step_by(2) {
        let w = build_word_graphs(&[m])?;
        for tau in enumerate_pairings(GroundSet::range(m))? {
            rep.checked += 1;
            let c = cycle_count(&w.d_quotient(&lift_pairing(&tau)?)?)?;
            if c > m / 2 + 1 {
                rep.violations.push(format!("m={m} τ={tau}: {c} cycles"));
            }
        }
    }
    Ok(rep)
}

/// t(D^{π_τ}) ≤ m/2 + 2 - r over pairings τ with τ∨γ = 1.
pub fn gue_order_suite(rs: &[usize], max_m: usize) -> Result<SuiteReport> {
    order_suite("gue-order-bound", rs, max_m, false)
}

/// As [`gue_order_suite`] with π_τ^ε for every ε ∈ {1,T}^m.
pub fn gue_eps_suite(rs: &[usize], max_m: usize) -> Result<SuiteReport> {
    order_suite("gue-eps-order-bound", rs, max_m, true)
}

fn order_suite(name: &str, rs: &[usize], max_m: usize, with_eps: bool) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(name);
    for m in (2..=max_m).step_by(2) {
        let taus: Vec<SetPartition> = enumerate_pairings(GroundSet::range(m))?.collect();
        for &r in rs {
            let bound = half(m as i64 + 4 - 2 * r as i64);
            for shape in compositions(m, r) {
                let w = build_word_graphs(&shape)?;
                for tau in &taus {
                    if !join(tau, w.gamma.partition())?.is_one() {
                        continue;
                    }
                    let patterns: Vec<Vec<Mark>> = if with_eps {
                        (0..1u32 << m)
                            .map(|bits| {
                                (0..m)
                                    .map(|i| if bits >> i & 1 == 1 { Mark::Transposed } else { Mark::Plain })
                                    .collect()
                            })
                            .collect()
                    } else {
                        vec![vec![Mark::Plain; m]]
                    };
                    for eps in patterns {
                        rep.checked += 1;
                        let pi = lift_pairing_eps(tau, &eps)?;
                        let t = t_exponent(&w.d_quotient(&pi)?)?;
                        if t > bound {
                            rep.violations.push(format!("shape {shape:?} τ={tau} ε={eps:?}: t={t} > {bound}"));
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// The partition {V, -V : V ∈ τ} of ±[m].
pub fn sign_split(tau: &SetPartition) -> Result<SetPartition> {
    signed_split(tau, &vec![false; tau.domain().len()])
}

/// Blocks A_V, B_V for each V ∈ τ: j ∈ A_V and -j ∈ B_V unless `flip[j-1]`,
/// in which case the two are swapped.
pub fn signed_split(tau: &SetPartition, flip: &[bool]) -> Result<SetPartition> {
    let mut blocks = Vec::with_capacity(2 * tau.num_blocks());
    for b in tau.blocks() {
        let s = |j: i64| if flip[j as usize - 1] { -j } else { j };
        blocks.push(b.iter().map(|&j| s(j)).collect::<Vec<i64>>());
        blocks.push(b.iter().map(|&j| -s(j)).collect());
    }
    SetPartition::from_blocks(GroundSet::signed(tau.domain().len()), blocks)
}

/// r ≥ 2, even-block τ with τ∨γ = 1: t(D^π) ≤ m/2 + 1 - r/2 for every π made of
/// blocks A_V, B_V (V ∈ τ) with each pair {j, -j}, j ∈ V, split between them.
pub fn wigner_sigma_suite(max_m: usize, max_r: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("wigner-order-bound");
    for m in (2..=max_m).step_by(2) {
        let taus: Vec<SetPartition> = enumerate_even_partitions(m)?.collect();
        for r in 2..=max_r.min(m) {
            let bound = half(m as i64 + 2 - r as i64);
            for shape in compositions(m, r) {
                let w = build_word_graphs(&shape)?;
                for tau in &taus {
                    if !join(tau, w.gamma.partition())?.is_one() {
                        continue;
                    }
                    // the smallest element of each block is never flipped
                    let free: Vec<usize> = tau
                        .blocks()
                        .iter()
                        .flat_map(|b| b[1..].iter().map(|&j| j as usize - 1))
                        .collect();
                    for bits in 0..1u64 << free.len() {
                        let mut flip = vec![false; m];
                        for (k, &j) in free.iter().enumerate() {
                            flip[j] = bits >> k & 1 == 1;
                        }
                        rep.checked += 1;
                        let t = t_exponent(&w.d_quotient(&signed_split(tau, &flip)?)?)?;
                        if t > bound {
                            rep.violations.push(format!("shape {shape:?} τ={tau} flip={flip:?}: t={t} > {bound}"));
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

fn random_graph(rng: &mut ChaCha8Rng, labels: Vec<i64>, edges: usize, first_id: usize) -> MultiGraph {
    let mut g = MultiGraph::new(labels.clone(), false).expect("distinct labels");
    for k in 0..edges {
        let a = labels[rng.gen_range(0..labels.len())];
        let b = labels[rng.gen_range(0..labels.len())];
        g.add_edge(first_id + k, a, b).expect("fresh id");
    }
    g
}

/// A graph all of whose edges lie on cycles: a union of random closed walks
/// (a walk of length one is a loop, of length two a doubled edge).
fn random_bridgeless_graph(rng: &mut ChaCha8Rng, labels: Vec<i64>, first_id: usize) -> MultiGraph {
    let mut g = MultiGraph::new(labels.clone(), false).expect("distinct labels");
    let mut id = first_id;
    for _ in 0..rng.gen_range(0..=3) {
        let len = rng.gen_range(1..=labels.len().max(1) + 1);
        let walk: Vec<i64> = (0..len).map(|_| labels[rng.gen_range(0..labels.len())]).collect();
        for i in 0..len {
            g.add_edge(id, walk[i], walk[(i + 1) % len]).expect("fresh id");
            id += 1;
        }
    }
    g
}

/// Random member graphs used by the merge suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MemberFamily {
    /// Every edge lies on a cycle, so F(G_i) has no edges.
    Bridgeless,
    /// Arbitrary multigraphs with loops.
    Unrestricted,
}

fn random_gog(rng: &mut ChaCha8Rng, family: MemberFamily, extra_links: usize) -> GraphOfGraphs {
    let n = rng.gen_range(1..=6usize);
    let mut members = Vec::with_capacity(n);
    let mut next_label = 1i64;
    let mut next_id = 1usize;
    for _ in 0..n {
        let size = rng.gen_range(1..=4i64);
        let labels: Vec<i64> = (next_label..next_label + size).collect();
        next_label += size;
        let g = match family {
            MemberFamily::Bridgeless => random_bridgeless_graph(rng, labels, next_id),
            MemberFamily::Unrestricted => {
                let e = rng.gen_range(0..=5);
                random_graph(rng, labels, e, next_id)
            }
        };
        next_id += g.num_edges() + 1;
        members.push(g);
    }
    let mut links = Vec::new();
    let link = |rng: &mut ChaCha8Rng, i: usize, j: usize| {
        let vi = members[i].labels()[rng.gen_range(0..members[i].num_vertices())];
        let vj = members[j].labels()[rng.gen_range(0..members[j].num_vertices())];
        GogEdge { i, j, vi, vj }
    };
    for i in 1..n {
        let j = rng.gen_range(0..i);
        links.push(link(rng, j, i));
    }
    if n >= 2 {
        for _ in 0..extra_links {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            links.push(link(rng, i, j));
        }
    }
    GraphOfGraphs { members, links }
}

fn merge_suite(name: &str, trials: usize, seed: u64, family: MemberFamily, tree: bool) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(name);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while rep.checked < trials {
        let extra = if tree { 0 } else { rng.gen_range(1..=3) };
        let gog = random_gog(&mut rng, family, extra);
        if !tree && gog.is_tree() {
            continue;
        }
        rep.checked += 1;
        let n = gog.members.len() as i64;
        let sum: HalfInteger = gog.members.iter().map(t_exponent).collect::<Result<Vec<_>>>()?.into_iter().sum();
        let rhs = sum - HalfInteger::from_int(n) + HalfInteger::ONE;
        let (g, _) = merge_by_graph(&gog)?;
        let t = t_exponent(&g)?;
        let ok = if tree { t == rhs } else { t <= rhs };
        if !ok {
            let shapes: Vec<String> = gog.members.iter().map(|m| m.to_text().replace('\n', "; ")).collect();
            rep.violations.push(format!(
                "t(G^T)={t}, Σt-n+1={rhs}; members [{}]; links {:?}",
                shapes.join(" | "),
                gog.links
            ));
        }
    }
    Ok(rep)
}

/// Tree-shaped T: t(G^T) = Σ t(G_i) - n + 1.
pub fn tree_merge_suite(trials: usize, seed: u64, family: MemberFamily) -> Result<SuiteReport> {
    merge_suite("tree-merge-identity", trials, seed, family, true)
}

/// Connected T with at least one cycle: t(G^T) ≤ Σ t(G_i) - n + 1.
pub fn connected_merge_suite(trials: usize, seed: u64, family: MemberFamily) -> Result<SuiteReport> {
    merge_suite("connected-merge-bound", trials, seed, family, false)
}

/// Random π ≤ σ on random graphs: t(G^σ) ≤ t(G^π).
pub fn monotonicity_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("quotient-monotonicity");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let n = rng.gen_range(1..=12usize);
        let e = rng.gen_range(0..=20usize);
        let g = random_graph(&mut rng, (1..=n as i64).collect(), e, 1);
        let k = rng.gen_range(1..=n);
        let fine: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let merge: Vec<usize> = (0..k).map(|_| rng.gen_range(0..k)).collect();
        let coarse: Vec<usize> = fine.iter().map(|&b| merge[b]).collect();
        let domain = g.vertex_set()?;
        let pi = SetPartition::from_assignment(domain.clone(), &fine);
        let sigma = SetPartition::from_assignment(domain, &coarse);
        rep.checked += 1;
        let (tp, ts) = (t_exponent(&quotient(&g, &pi)?)?, t_exponent(&quotient(&g, &sigma)?)?);
        if ts > tp {
            rep.violations.push(format!("{} π={pi} σ={sigma}: {ts} > {tp}", g.to_text().replace('\n', "; ")));
        }
    }
    Ok(rep)
}
