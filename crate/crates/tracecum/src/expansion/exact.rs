//! The partition expansion
//!
//!   K_r = N^{−m/2} Σ_{π ∈ P(±[m])} S⁰_π(N) Σ_{τ ∨ γ = 1} Π_{B ∈ τ} K(B).
//!
//! Under ker ψ = π each letter reads a definite entry, so letters fall into
//! classes (same symbol, same unordered block pair). Only τ finer than this
//! class partition, with even blocks, can contribute; π whose classes are odd
//! or whose class partition does not connect the traces are pruned. The
//! τ-sum depends only on the class pattern and is memoized.
//!
//! S⁰_π is expanded by Möbius inversion into S_σ over coarsenings σ ≥ π, so
//! the coefficients are gathered per σ and every S_σ is contracted once.

use super::word::{canonical, coarsenings, num_blocks, s_geq_raw, TraceWord};
use super::{Budget, DeterministicSet, EntryCumulantModel};
use crate::error::{Error, Result};
use crate::graphs::{build_word_graphs, t_exponent};
use crate::numeric::NeumaierSum;
use crate::partitions::{enumerate_even_partitions, GroundSet, SetPartition, UnionFind};
use dashmap::DashMap;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;

/// One (π, τ) term of the expansion.
#[derive(Clone, Debug, Serialize)]
pub struct LedgerRow {
    pub pi: String,
    pub tau: String,
    pub s0: Complex64,
    pub k_tau: Complex64,
    pub contribution: Complex64,
}

#[derive(Clone, Debug)]
pub struct ExactCumulantResult {
    pub value: Complex64,
    /// Number of π with a nonzero τ-sum.
    pub contributing: usize,
    pub ledger: Option<Vec<LedgerRow>>,
}

/// Per-letter reading of the entry under ker ψ = π.
struct Reading {
    classes: Vec<u8>,
    diag: Vec<bool>,
    // letter reads the conjugate (row block > col block)
    flipped: Vec<bool>,
}

fn reading(word: &TraceWord, rgs: &[u8]) -> Reading {
    let m = word.m();
    let mut ids: Vec<(usize, u8, u8)> = Vec::with_capacity(m);
    let mut classes = Vec::with_capacity(m);
    let mut flipped = Vec::with_capacity(m);
    for (k, &(a, b)) in word.entry_table().iter().enumerate() {
        let (row, col) = (rgs[a], rgs[b]);
        let key = (word.letters()[k].symbol, row.min(col), row.max(col));
        let c = match ids.iter().position(|x| *x == key) {
            Some(c) => c,
            None => {
                ids.push(key);
                ids.len() - 1
            }
        };
        classes.push(c as u8);
        flipped.push(row > col);
    }
    let diag = ids.iter().map(|k| k.1 == k.2).collect();
    Reading { classes, diag, flipped }
}

fn connects(blocks: &[u8], uf_base: &UnionFind) -> bool {
    let mut uf = uf_base.clone();
    let mut first = [usize::MAX; 256];
    for (l, &b) in blocks.iter().enumerate() {
        if first[b as usize] == usize::MAX {
            first[b as usize] = l;
        } else {
            uf.union(first[b as usize], l);
        }
    }
    uf.count() == 1
}

/// Union-find over letters 0..m with the trace cycles already merged.
fn gamma_uf(word: &TraceWord) -> UnionFind {
    let mut uf = UnionFind::new(word.m());
    for l in 1..=word.m() as i64 {
        uf.union((l - 1) as usize, (word.gamma().next(l) - 1) as usize);
    }
    uf
}

type MemoKey = (Vec<u8>, Vec<bool>, Vec<bool>);

/// Expansion of one cumulant into Σ_σ coeff(σ) S_σ.
#[derive(Clone, Debug)]
pub struct ExpansionPlan {
    word: TraceWord,
    // surviving π (canonical strings over ±[m]) with their τ-sums
    survivors: Vec<(Vec<u8>, Complex64)>,
    terms: Vec<(Vec<u8>, Complex64)>,
}

struct Planner<'a> {
    word: &'a TraceWord,
    model: &'a EntryCumulantModel,
    gamma: UnionFind,
    memo: DashMap<MemoKey, Complex64>,
    // even-block partitions of [k] as block strings, per k
    even: Vec<Vec<Vec<u8>>>,
}

impl<'a> Planner<'a> {
    fn new(word: &'a TraceWord, model: &'a EntryCumulantModel) -> Result<Self> {
        let m = word.m();
        let mut even = vec![Vec::new(); m + 1];
        for (k, slot) in even.iter_mut().enumerate().skip(2).step_by(2) {
            *slot = enumerate_even_partitions(k)?.map(|p| p.assignment().iter().map(|&b| b as u8).collect()).collect();
        }
        Ok(Planner { word, model, gamma: gamma_uf(word), memo: DashMap::new(), even })
    }

    fn prune(&self, r: &Reading) -> bool {
        let mut sizes = [0usize; 256];
        for &c in &r.classes {
            sizes[c as usize] += 1;
        }
        sizes.iter().any(|s| s % 2 == 1) || !connects(&r.classes, &self.gamma)
    }

    /// All τ ≤ class partition with even blocks and τ ∨ γ = 1, each with
    /// its product of entry cumulants.
    fn tau_terms(&self, r: &Reading) -> Result<Vec<(Vec<u8>, Complex64)>> {
        let m = self.word.m();
        let nclass = num_blocks(&r.classes);
        let members: Vec<Vec<usize>> = (0..nclass as u8).map(|c| (0..m).filter(|&l| r.classes[l] == c).collect()).collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; nclass];
        loop {
            let mut tau = vec![0u8; m];
            let mut offset = 0u8;
            for (c, mem) in members.iter().enumerate() {
                let sub = &self.even[mem.len()][choice[c]];
                for (k, &l) in mem.iter().enumerate() {
                    tau[l] = offset + sub[k];
                }
                offset += num_blocks(sub) as u8;
            }
            if connects(&tau, &self.gamma) {
                let mut k = Complex64::new(1.0, 0.0);
                for b in 0..offset {
                    let ls: Vec<usize> = (0..m).filter(|&l| tau[l] == b).collect();
                    let class = r.classes[ls[0]] as usize;
                    k *= if r.diag[class] {
                        self.model.diag(ls.len())?
                    } else {
                        self.model.off_diag(ls.len(), ls.iter().filter(|&&l| r.flipped[l]).count())?
                    };
                    if k == Complex64::new(0.0, 0.0) {
                        break;
                    }
                }
                if k != Complex64::new(0.0, 0.0) {
                    out.push((canonical(&tau), k));
                }
            }
            // odometer over the per-class choices
            let mut c = 0;
            while c < nclass {
                choice[c] += 1;
                if choice[c] < self.even[members[c].len()].len() {
                    break;
                }
                choice[c] = 0;
                c += 1;
            }
            if c == nclass {
                break;
            }
        }
        Ok(out)
    }

    fn tau_sum(&self, r: &Reading) -> Result<Complex64> {
        let key = (r.classes.clone(), r.diag.clone(), r.flipped.clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(*v);
        }
        let v = self.tau_terms(r)?.into_iter().map(|(_, k)| k).collect::<NeumaierSum>().value();
        self.memo.insert(key, v);
        Ok(v)
    }

    fn visit(&self, rgs: &[u8]) -> Result<Option<Complex64>> {
        let r = reading(self.word, rgs);
        if self.prune(&r) {
            return Ok(None);
        }
        let c = self.tau_sum(&r)?;
        Ok((c != Complex64::new(0.0, 0.0)).then_some(c))
    }
}

/// Calls `f` on every restricted growth string of length `n` extending
/// `prefix` (whose largest letter is `max`).
fn extend_rgs(buf: &mut Vec<u8>, n: usize, max: i16, f: &mut dyn FnMut(&[u8]) -> Result<()>) -> Result<()> {
    if buf.len() == n {
        return f(buf);
    }
    for b in 0..=(max + 1) as u8 {
        buf.push(b);
        extend_rgs(buf, n, max.max(b as i16), f)?;
        buf.pop();
    }
    Ok(())
}

fn prefixes(n: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut buf = Vec::new();
    extend_rgs(&mut buf, k.min(n), -1, &mut |p| {
        out.push(p.to_vec());
        Ok(())
    })
    .expect("infallible");
    out
}

impl ExpansionPlan {
    pub fn build(word: &TraceWord, model: &EntryCumulantModel, budget: &Budget) -> Result<Self> {
        let m = word.m();
        if m > budget.max_m {
            return Err(Error::Size(format!(
                "total word length m = {m} exceeds the enumeration budget {} (Bell(2m) partitions)",
                budget.max_m
            )));
        }
        let planner = Planner::new(word, model)?;
        let n = 2 * m;
        let chunks: Vec<Result<Vec<(Vec<u8>, Complex64)>>> = prefixes(n, 6)
            .into_par_iter()
            .map(|p| {
                let mut found = Vec::new();
                let max = p.iter().map(|&b| b as i16).max().unwrap_or(-1);
                let mut buf = p.clone();
                extend_rgs(&mut buf, n, max, &mut |rgs| {
                    if let Some(c) = planner.visit(rgs)? {
                        found.push((rgs.to_vec(), c));
                    }
                    Ok(())
                })?;
                Ok(found)
            })
            .collect();
        let mut survivors = Vec::new();
        for c in chunks {
            survivors.extend(c?);
        }
        let mut coeff: BTreeMap<Vec<u8>, NeumaierSum> = BTreeMap::new();
        for (pi, c) in &survivors {
            for (sigma, mu) in coarsenings(pi) {
                coeff.entry(sigma).or_default().add(c * mu);
            }
        }
        let terms = coeff
            .into_iter()
            .map(|(s, v)| (s, v.value()))
            .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
            .collect();
        Ok(ExpansionPlan { word: word.clone(), survivors, terms })
    }

    pub fn word(&self) -> &TraceWord {
        &self.word
    }

    /// Number of π with nonzero τ-sum.
    pub fn contributing(&self) -> usize {
        self.survivors.len()
    }

    /// Number of distinct S_σ needed.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn normalization(&self, n: usize) -> f64 {
        (n as f64).powf(-(self.word.m() as f64) / 2.0)
    }

    pub fn evaluate(&self, det: &DeterministicSet, budget: &Budget) -> Result<ExactCumulantResult> {
        let mats = self.word.resolve(det)?;
        let n = det.dim();
        let parts: Vec<Result<Complex64>> = self
            .terms
            .par_iter()
            .map(|(sigma, c)| Ok(c * s_geq_raw(&self.word, sigma, &mats, n, budget)?))
            .collect();
        let mut acc = NeumaierSum::default();
        for p in parts {
            acc.add(p?);
        }
        Ok(ExactCumulantResult { value: acc.value() * self.normalization(n), contributing: self.survivors.len(), ledger: None })
    }

    /// Term-by-term evaluation with a ledger of every (π, τ) pair, plus the
    /// check |S_σ| ≤ N^{t(D^σ)} Π‖D_l‖ for every S_σ used.
    pub fn audit(&self, det: &DeterministicSet, model: &EntryCumulantModel, budget: &Budget) -> Result<(ExactCumulantResult, Vec<String>)> {
        let mats = self.word.resolve(det)?;
        let n = det.dim();
        let scale = self.normalization(n);
        let planner = Planner::new(&self.word, model)?;
        let domain = GroundSet::signed(self.word.m());
        let letters = GroundSet::range(self.word.m());
        let mut s_cache: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
        let mut s_of = |sigma: &Vec<u8>| -> Result<Complex64> {
            if let Some(v) = s_cache.get(sigma) {
                return Ok(*v);
            }
            let v = s_geq_raw(&self.word, sigma, &mats, n, budget)?;
            s_cache.insert(sigma.clone(), v);
            Ok(v)
        };
        let mut rows = Vec::new();
        let mut acc = NeumaierSum::default();
        for (pi, _) in &self.survivors {
            let mut s0 = NeumaierSum::default();
            for (sigma, mu) in coarsenings(pi) {
                s0.add(s_of(&sigma)? * mu);
            }
            let s0 = s0.value();
            let pi_str = SetPartition::from_assignment(domain.clone(), pi).to_string();
            for (tau, k) in planner.tau_terms(&reading(&self.word, pi))? {
                let contribution = s0 * k * scale;
                acc.add(contribution);
                rows.push(LedgerRow {
                    pi: pi_str.clone(),
                    tau: SetPartition::from_assignment(letters.clone(), &tau).to_string(),
                    s0,
                    k_tau: k,
                    contribution,
                });
            }
        }
        let graphs = build_word_graphs(self.word.m_vec())?;
        let norms = self.word.norm_product(det)?;
        let mut violations = Vec::new();
        for (sigma, s) in &s_cache {
            let part = SetPartition::from_assignment(domain.clone(), sigma);
            let t = t_exponent(&graphs.d_quotient(&part)?)?.to_f64();
            let bound = (n as f64).powf(t) * norms;
            if s.norm() > bound * (1.0 + 1e-9) + 1e-12 {
                violations.push(format!("|S| = {} > N^{t} Π‖D‖ = {bound} for {part}", s.norm()));
            }
        }
        Ok((
            ExactCumulantResult { value: acc.value(), contributing: self.survivors.len(), ledger: Some(rows) },
            violations,
        ))
    }
}

/// K_r(Tr Y_1, ..., Tr Y_r) by the partition expansion.
pub fn exact_cumulant(
    word: &TraceWord,
    model: &EntryCumulantModel,
    det: &DeterministicSet,
    budget: &Budget,
) -> Result<ExactCumulantResult> {
    ExpansionPlan::build(word, model, budget)?.evaluate(det, budget)
}

/// The factor K(B) of one τ-block under ker ψ = π: zero unless every letter
/// of the block names the same random symbol and reads the same entry (or
/// its conjugate), else the model cumulant of that entry.
pub fn entry_cumulant_for(
    word: &TraceWord,
    pi: &SetPartition,
    block: &[i64],
    model: &EntryCumulantModel,
) -> Result<Complex64> {
    let rgs = word.check_partition(pi)?;
    if block.is_empty() || block.iter().any(|&l| l < 1 || l as usize > word.m()) {
        return Err(Error::Domain(format!("block {block:?} is not a nonempty subset of [{}]", word.m())));
    }
    let r = reading(word, &rgs);
    let first = r.classes[(block[0] - 1) as usize];
    if block.iter().any(|&l| r.classes[(l - 1) as usize] != first) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if r.diag[first as usize] {
        model.diag(block.len())
    } else {
        model.off_diag(block.len(), block.iter().filter(|&&l| r.flipped[(l - 1) as usize]).count())
    }
}

pub fn write_ledger_csv(path: &Path, rows: &[LedgerRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
    w.write_record(["pi", "tau", "s0_re", "s0_im", "k_tau_re", "k_tau_im", "contribution_re", "contribution_im"])
        .map_err(|e| Error::Io(e.to_string()))?;
    for r in rows {
        w.write_record([
            r.pi.clone(),
            r.tau.clone(),
            r.s0.re.to_string(),
            r.s0.im.to_string(),
            r.k_tau.re.to_string(),
            r.k_tau.im.to_string(),
            r.contribution.re.to_string(),
            r.contribution.im.to_string(),
        ])
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::lift_pairing;
    use crate::randmat::builtin_set;

    fn val(words: &[&str], model: &EntryCumulantModel, det: &DeterministicSet) -> Complex64 {
        exact_cumulant(&TraceWord::parse(words).unwrap(), model, det, &Budget::default()).unwrap().value
    }

    #[test]
    fn gue_square_trace() {
        let g = EntryCumulantModel::gue();
        for n in 1..=5 {
            let det = DeterministicSet::new(n);
            assert!((val(&["X0 X0"], &g, &det) - n as f64).norm() < 1e-9);
            assert!((val(&["X0 X0", "X0 X0"], &g, &det) - 2.0).norm() < 1e-9);
        }
    }

    #[test]
    fn odd_length_is_zero() {
        let det = DeterministicSet::new(3);
        assert_eq!(val(&["X0 X0 X0"], &EntryCumulantModel::gue(), &det), Complex64::new(0.0, 0.0));
        let plan = ExpansionPlan::build(&TraceWord::parse(&["X0", "X0 X0"]).unwrap(), &EntryCumulantModel::goe(), &Budget::default()).unwrap();
        assert_eq!(plan.contributing(), 0);
    }

    #[test]
    fn prefix_enumeration_covers_all_partitions() {
        let mut count = 0;
        for p in prefixes(7, 3) {
            let max = p.iter().map(|&b| b as i16).max().unwrap_or(-1);
            extend_rgs(&mut p.clone(), 7, max, &mut |_| {
                count += 1;
                Ok(())
            })
            .unwrap();
        }
        assert_eq!(count, 877);
    }

    #[test]
    fn entry_cumulants_of_blocks() {
        let w = TraceWord::parse(&["X0 X0", "X0 X1"]).unwrap();
        let tau = SetPartition::from_blocks(GroundSet::range(4), vec![vec![1, 2], vec![3, 4]]).unwrap();
        let pi = lift_pairing(&tau).unwrap();
        let g = EntryCumulantModel::gue();
        assert_eq!(entry_cumulant_for(&w, &pi, &[1, 2], &g).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(entry_cumulant_for(&w, &pi, &[3, 4], &g).unwrap(), Complex64::new(0.0, 0.0));
        // all four points of a single letter pair in one block: diagonal
        let one = SetPartition::one_block(GroundSet::signed(4));
        let u = EntryCumulantModel::from_ensemble(&crate::randmat::Ensemble::uniform_wigner(), 4).unwrap();
        let k4 = entry_cumulant_for(&w, &one, &[1, 2, 3], &u).unwrap();
        assert!((k4.re - 0.0).abs() < 1e-15);
        let w4 = TraceWord::parse(&["X0 X0 X0 X0"]).unwrap();
        let k = entry_cumulant_for(&w4, &SetPartition::one_block(GroundSet::signed(4)), &[1, 2, 3, 4], &u).unwrap();
        assert!((k.re + 1.0 / 120.0).abs() < 1e-14);
    }

    #[test]
    fn audit_matches_evaluate_and_respects_bounds() {
        let det = builtin_set(&["upper-bidiagonal-ones", "random-unit-norm:7"], 3).unwrap();
        let w = TraceWord::parse(&["X0 D0 X0 D1", "X0 X0"]).unwrap();
        let b = Budget::default();
        for model in [EntryCumulantModel::gue(), EntryCumulantModel::goe()] {
            let plan = ExpansionPlan::build(&w, &model, &b).unwrap();
            let fast = plan.evaluate(&det, &b).unwrap();
            let (slow, violations) = plan.audit(&det, &model, &b).unwrap();
            assert!(violations.is_empty(), "{violations:?}");
            assert!((fast.value - slow.value).norm() < 1e-10 * fast.value.norm().max(1.0));
            let rows = slow.ledger.unwrap();
            assert!(!rows.is_empty());
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("ledger.csv");
            write_ledger_csv(&p, &rows).unwrap();
            let text = std::fs::read_to_string(&p).unwrap();
            assert_eq!(text.lines().count(), rows.len() + 1);
        }
    }

    #[test]
    fn budget_guard() {
        let w = TraceWord::parse(&["X0 X0 X0 X0", "X0 X0 X0 X0"]).unwrap();
        assert!(matches!(
            ExpansionPlan::build(&w, &EntryCumulantModel::gue(), &Budget::default()),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn self_adjoint_values_are_real() {
        let det = DeterministicSet::new(3);
        let g = EntryCumulantModel::gue();
        for words in [&["X0 X0", "X0 X0 X0 X0"][..], &["X0 X1 X0 X1"][..], &["X0 X0 X0", "X0"][..]] {
            let v = val(words, &g, &det);
            assert!(v.im.abs() <= 1e-10 * v.norm().max(1.0), "{words:?}: {v}");
        }
    }
}
