//! Set partitions over signed and unsigned ground sets.
//!
//! A [`SetPartition`] is always stored in canonical form: elements sorted
//! inside each block, blocks sorted by their smallest element. Equality and
//! hashing therefore agree with equality of partitions.

mod counting;
mod crossing;
mod moments;
mod special;

pub use counting::{bell_number, double_factorial, integer_partition_count};
pub use crossing::{compositions, crossing_suite, find_crossing_pairing, CrossingSuiteReport};
pub use moments::{cumulants_from_moments, moments_from_cumulants, MomentCumulantTable, TableMode};
pub use special::{gamma_partition, lift_pairing, lift_pairing_eps, Gamma, Mark};

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

/// Default refusal threshold for full enumeration of P(n).
pub const DEFAULT_ENUMERATION_LIMIT: usize = 14;

/// Ordered set of distinct integer labels. Stored sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet {
    elements: Vec<i64>,
}

impl GroundSet {
    pub fn new(mut elements: Vec<i64>) -> Result<Self> {
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("ground set labels must be distinct".into()));
        }
        Ok(GroundSet { elements })
    }

    /// [n] = {1, ..., n}.
    pub fn range(n: usize) -> Self {
        GroundSet { elements: (1..=n as i64).collect() }
    }

    /// ±[m] = {-m, ..., -1, 1, ..., m}.
    pub fn signed(m: usize) -> Self {
        let m = m as i64;
        GroundSet { elements: (-m..=-1).chain(1..=m).collect() }
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, label: i64) -> Option<usize> {
        self.elements.binary_search(&label).ok()
    }

    pub fn contains(&self, label: i64) -> bool {
        self.index_of(label).is_some()
    }
}

/// A partition of a [`GroundSet`] in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    domain: GroundSet,
    blocks: Vec<Vec<i64>>,
    // block index of each domain element, derived from `blocks`
    assign: Vec<usize>,
}

impl SetPartition {
    /// Builds a partition from arbitrary block lists; validates and canonicalizes.
    pub fn from_blocks(domain: GroundSet, blocks: Vec<Vec<i64>>) -> Result<Self> {
        let mut assign = vec![usize::MAX; domain.len()];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Domain("empty block".into()));
            }
            for &x in block {
                let i = domain
                    .index_of(x)
                    .ok_or_else(|| Error::Domain(format!("label {x} not in ground set")))?;
                if assign[i] != usize::MAX {
                    return Err(Error::Domain(format!("label {x} appears twice")));
                }
                assign[i] = b;
            }
        }
        if assign.contains(&usize::MAX) {
            return Err(Error::Domain("blocks do not cover the ground set".into()));
        }
        Ok(Self::from_assignment(domain, &assign))
    }

    /// Builds a partition from a block id per domain position (any ids).
    pub fn from_assignment<T: Eq + Hash + Clone>(domain: GroundSet, ids: &[T]) -> Self {
        assert_eq!(domain.len(), ids.len());
        let mut relabel: HashMap<T, usize> = HashMap::new();
        let mut blocks: Vec<Vec<i64>> = Vec::new();
        let mut assign = Vec::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            let next = relabel.len();
            let b = *relabel.entry(id.clone()).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(domain.elements[i]);
            assign.push(b);
        }
        // Domain is sorted, so first-appearance order is min-element order.
        SetPartition { domain, blocks, assign }
    }

    /// The partition {{x} : x in domain}.
    pub fn singletons(domain: GroundSet) -> Self {
        let ids: Vec<usize> = (0..domain.len()).collect();
        Self::from_assignment(domain, &ids)
    }

    /// The one-block partition.
    pub fn one_block(domain: GroundSet) -> Self {
        let ids = vec![0usize; domain.len()];
        Self::from_assignment(domain, &ids)
    }

    pub fn domain(&self) -> &GroundSet {
        &self.domain
    }

    pub fn blocks(&self) -> &[Vec<i64>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block index per domain position.
    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    /// Index of the block containing `label`.
    pub fn block_of(&self, label: i64) -> Option<usize> {
        self.domain.index_of(label).map(|i| self.assign[i])
    }

    pub fn same_block(&self, a: i64, b: i64) -> bool {
        match (self.block_of(a), self.block_of(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }

    pub fn is_pairing(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    pub fn has_even_blocks(&self) -> bool {
        self.blocks.iter().all(|b| b.len() % 2 == 0)
    }

    pub fn is_one(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Restriction to a subset that is a union of blocks.
    pub fn restrict(&self, subset: &GroundSet) -> Result<Self> {
        let blocks: Vec<Vec<i64>> = self
            .blocks
            .iter()
            .filter(|b| subset.contains(b[0]))
            .cloned()
            .collect();
        Self::from_blocks(subset.clone(), blocks)
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "{{")?;
            for (i, x) in b.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// Restricted growth strings of length n in lexicographic order.
///
/// Exposed so hot loops can iterate without allocating a [`SetPartition`]
/// per item.
#[derive(Clone, Debug)]
pub struct Rgs {
    a: Vec<u8>,
    // maxes[i] = max(a[0..=i])
    maxes: Vec<u8>,
    started: bool,
}

impl Rgs {
    pub fn new(n: usize) -> Self {
        assert!((1..255).contains(&n));
        Rgs { a: vec![0; n], maxes: vec![0; n], started: false }
    }

    /// Advances and returns the current string, or `None` when exhausted.
    pub fn next_rgs(&mut self) -> Option<&[u8]> {
        if !self.started {
            self.started = true;
            return Some(&self.a);
        }
        let n = self.a.len();
        let mut i = n - 1;
        while i >= 1 {
            if self.a[i] <= self.maxes[i - 1] {
                self.a[i] += 1;
                self.maxes[i] = self.maxes[i - 1].max(self.a[i]);
                for j in i + 1..n {
                    self.a[j] = 0;
                    self.maxes[j] = self.maxes[i];
                }
                return Some(&self.a);
            }
            i -= 1;
        }
        None
    }
}

/// Stream of all partitions of a ground set in restricted-growth order.
pub struct Partitions {
    domain: GroundSet,
    rgs: Rgs,
}

impl Iterator for Partitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        let a = self.rgs.next_rgs()?;
        Some(SetPartition::from_assignment(self.domain.clone(), a))
    }
}

/// All partitions of [n]. Refuses n above [`DEFAULT_ENUMERATION_LIMIT`].
pub fn enumerate_partitions(n: usize) -> Result<Partitions> {
    enumerate_partitions_of(GroundSet::range(n), DEFAULT_ENUMERATION_LIMIT)
}

/// All partitions of an arbitrary ground set, with an explicit size guard.
pub fn enumerate_partitions_of(domain: GroundSet, limit: usize) -> Result<Partitions> {
    let n = domain.len();
    if n == 0 {
        return Err(Error::Size("cannot enumerate partitions of an empty set".into()));
    }
    if n > limit {
        return Err(Error::Size(format!(
            "refusing to enumerate Bell({n}) = {} partitions (limit n <= {limit})",
            bell_number(n)
        )));
    }
    Ok(Partitions { domain, rgs: Rgs::new(n) })
}

/// Stream of perfect pairings of an even ground set.
pub struct Pairings {
    domain: GroundSet,
    // mixed-radix digits; digit t ranges over 0..(n - 1 - 2t)
    choice: Vec<usize>,
    done: bool,
}

impl Iterator for Pairings {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let mut rem: Vec<i64> = self.domain.elements().to_vec();
        let mut blocks = Vec::with_capacity(self.choice.len());
        for &c in &self.choice {
            let a = rem.remove(0);
            let b = rem.remove(c);
            blocks.push(vec![a, b]);
        }
        let n = self.domain.len();
        let mut t = self.choice.len();
        self.done = true;
        while t > 0 {
            t -= 1;
            if self.choice[t] + 1 < n - 1 - 2 * t {
                self.choice[t] += 1;
                for c in &mut self.choice[t + 1..] {
                    *c = 0;
                }
                self.done = false;
                break;
            }
        }
        Some(SetPartition::from_blocks(self.domain.clone(), blocks).expect("valid pairing"))
    }
}

/// All perfect pairings of `domain`; there are (|domain| - 1)!! of them.
pub fn enumerate_pairings(domain: GroundSet) -> Result<Pairings> {
    let n = domain.len();
    if !n.is_multiple_of(2) {
        return Err(Error::Parity(format!("cannot pair a set of odd size {n}")));
    }
    Ok(Pairings { domain, choice: vec![0; n / 2], done: n == 0 })
}

/// Partitions of [n] whose blocks all have even size.
pub fn enumerate_even_partitions(n: usize) -> Result<impl Iterator<Item = SetPartition>> {
    if !n.is_multiple_of(2) {
        return Err(Error::Parity(format!("no even-block partitions of odd n = {n}")));
    }
    Ok(enumerate_partitions(n)?.filter(|p| p.has_even_blocks()))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Small union-find over positions, shared with other modules.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        find(&mut self.parent, x)
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        union(&mut self.parent, a, b)
    }

    pub(crate) fn roots(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|i| find(&mut self.parent, i)).collect()
    }

    pub(crate) fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| find(&mut self.parent, i) == i).count()
    }
}

fn check_domains(a: &SetPartition, b: &SetPartition) -> Result<()> {
    if a.domain != b.domain {
        return Err(Error::Domain("partitions live on different ground sets".into()));
    }
    Ok(())
}

/// The least partition above both `a` and `b`.
pub fn join(a: &SetPartition, b: &SetPartition) -> Result<SetPartition> {
    check_domains(a, b)?;
    let mut uf = UnionFind::new(a.domain.len());
    for p in [a, b] {
        let mut first = vec![usize::MAX; p.num_blocks()];
        for (i, &blk) in p.assign.iter().enumerate() {
            if first[blk] == usize::MAX {
                first[blk] = i;
            } else {
                uf.union(first[blk], i);
            }
        }
    }
    let roots = uf.roots();
    Ok(SetPartition::from_assignment(a.domain.clone(), &roots))
}

/// True iff every block of `a` lies inside a block of `b`.
pub fn is_refinement(a: &SetPartition, b: &SetPartition) -> Result<bool> {
    check_domains(a, b)?;
    let mut image = vec![usize::MAX; a.num_blocks()];
    for (i, &blk) in a.assign.iter().enumerate() {
        let target = b.assign[i];
        if image[blk] == usize::MAX {
            image[blk] = target;
        } else if image[blk] != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// ker of a list of values indexed by [n].
pub fn kernel<T: Eq + Hash + Clone>(values: &[T]) -> SetPartition {
    SetPartition::from_assignment(GroundSet::range(values.len()), values)
}

/// ker of a list of values indexed by an arbitrary ground set.
pub fn kernel_on<T: Eq + Hash + Clone>(domain: GroundSet, values: &[T]) -> Result<SetPartition> {
    if domain.len() != values.len() {
        return Err(Error::Shape("one value per domain element required".into()));
    }
    Ok(SetPartition::from_assignment(domain, values))
}
