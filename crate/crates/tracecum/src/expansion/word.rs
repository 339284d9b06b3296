use super::contract::{contract, enumerate, Factor};
use super::{Budget, DeterministicSet, Letter, Monomial};
use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;
use crate::partitions::{gamma_partition, Gamma, GroundSet, Mark, Rgs, SetPartition};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// The r words Y_1, ..., Y_r of a cumulant K_r(Tr Y_1, ..., Tr Y_r), with
/// letters numbered 1..=m across the words.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceWord {
    letters: Vec<Letter>,
    gamma: Gamma,
    // entry_points per letter, precomputed
    entries: Vec<(usize, usize)>,
}

impl TraceWord {
    pub fn new(words: &[&Monomial]) -> Result<Self> {
        Self::from_letters(words.iter().map(|w| w.letters.clone()).collect())
    }

    pub fn from_letters(words: Vec<Vec<Letter>>) -> Result<Self> {
        let m_vec: Vec<usize> = words.iter().map(|w| w.len()).collect();
        let gamma = gamma_partition(&m_vec)?;
        let mut w = TraceWord { letters: words.into_iter().flatten().collect(), gamma, entries: Vec::new() };
        w.entries = (1..=w.m() as i64).map(|l| w.entry_points(l)).collect();
        Ok(w)
    }

    /// Parses one word per trace, e.g. `["X0 X0", "X0 D0"]`.
    pub fn parse(words: &[&str]) -> Result<Self> {
        let monos: Vec<Monomial> = words.iter().map(|w| w.parse()).collect::<Result<_>>()?;
        Self::new(&monos.iter().collect::<Vec<_>>())
    }

    /// The same word repeated r times.
    pub fn repeated(word: &Monomial, r: usize) -> Result<Self> {
        Self::new(&vec![word; r])
    }

    pub fn m(&self) -> usize {
        self.letters.len()
    }

    pub fn r(&self) -> usize {
        self.gamma.r()
    }

    pub fn m_vec(&self) -> &[usize] {
        self.gamma.m_vec()
    }

    pub fn gamma(&self) -> &Gamma {
        &self.gamma
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Letter l, 1-based.
    pub fn letter(&self, l: i64) -> &Letter {
        &self.letters[(l - 1) as usize]
    }

    pub fn marks(&self) -> Vec<Mark> {
        self.letters.iter().map(|l| l.mark).collect()
    }

    /// ker(i): letters grouped by random symbol.
    pub fn symbol_kernel(&self) -> SetPartition {
        let syms: Vec<usize> = self.letters.iter().map(|l| l.symbol).collect();
        SetPartition::from_assignment(GroundSet::range(self.m()), &syms)
    }

    /// Position of label l ∈ ±[m] in the sorted ground set ±[m].
    pub(crate) fn point(&self, l: i64) -> usize {
        let m = self.m() as i64;
        (if l < 0 { l + m } else { m + l - 1 }) as usize
    }

    /// Points (row, col) of the entry read by letter l, honouring its mark.
    pub(crate) fn entry_points(&self, l: i64) -> (usize, usize) {
        let (a, b) = (self.point(l), self.point(-l));
        match self.letter(l).mark {
            Mark::Plain => (a, b),
            Mark::Transposed => (b, a),
        }
    }

    pub(crate) fn entry_table(&self) -> &[(usize, usize)] {
        &self.entries
    }

    /// Deterministic chain products per letter, `None` for identities.
    pub(crate) fn resolve(&self, det: &DeterministicSet) -> Result<Vec<Option<DMatrix<Complex64>>>> {
        self.letters.iter().map(|l| det.chain(&l.det)).collect()
    }

    /// Product of ‖D_l‖ over letters (identity letters count 1).
    pub fn norm_product(&self, det: &DeterministicSet) -> Result<f64> {
        self.letters.iter().map(|l| det.chain_norm(&l.det)).product()
    }

    /// The D-graph factors d_l[ψ(−l), ψ(γ(l))] on blocks of a kernel given
    /// as a block id per point of ±[m].
    pub(crate) fn factors<'a>(&self, assign: &[u8], mats: &'a [Option<DMatrix<Complex64>>]) -> Vec<Factor<'a>> {
        (1..=self.m() as i64)
            .map(|l| Factor {
                row: assign[self.point(-l)] as usize,
                col: assign[self.point(self.gamma.next(l))] as usize,
                mat: mats[(l - 1) as usize].as_ref(),
            })
            .collect()
    }

    pub(crate) fn check_partition(&self, pi: &SetPartition) -> Result<Vec<u8>> {
        if *pi.domain() != GroundSet::signed(self.m()) {
            return Err(Error::Domain(format!("expected a partition of ±[{}]", self.m())));
        }
        Ok(pi.assignment().iter().map(|&b| b as u8).collect())
    }
}

/// Canonical restricted growth string of a block id list.
pub(crate) fn canonical(ids: &[u8]) -> Vec<u8> {
    let mut map = [u8::MAX; 256];
    let mut next = 0u8;
    ids.iter()
        .map(|&b| {
            if map[b as usize] == u8::MAX {
                map[b as usize] = next;
                next += 1;
            }
            map[b as usize]
        })
        .collect()
}

pub(crate) fn num_blocks(rgs: &[u8]) -> usize {
    rgs.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
}

/// (−1)^{k−1}(k−1)!
pub(crate) fn mobius_factor(k: usize) -> f64 {
    let f: f64 = (1..k).map(|i| i as f64).product();
    if k % 2 == 1 {
        f
    } else {
        -f
    }
}

/// Coarsenings σ ≥ π (as canonical strings) with μ(π, σ).
pub(crate) fn coarsenings(rgs: &[u8]) -> Vec<(Vec<u8>, f64)> {
    let nb = num_blocks(rgs);
    let mut out = Vec::new();
    let mut it = Rgs::new(nb);
    while let Some(rho) = it.next_rgs() {
        let mut sizes = [0usize; 256];
        for &b in rho {
            sizes[b as usize] += 1;
        }
        let mu: f64 = sizes.iter().take_while(|&&s| s > 0).map(|&s| mobius_factor(s)).product();
        let merged: Vec<u8> = rgs.iter().map(|&b| rho[b as usize]).collect();
        out.push((canonical(&merged), mu));
    }
    out
}

pub(crate) fn s_geq_raw(
    word: &TraceWord,
    rgs: &[u8],
    mats: &[Option<DMatrix<Complex64>>],
    n: usize,
    budget: &Budget,
) -> Result<Complex64> {
    contract(num_blocks(rgs), &word.factors(rgs, mats), n, budget.max_tensor)
}

/// S_π(N) = Σ_{ψ: ker ψ ≥ π} Π_l d^{(l)}_{ψ(−l), ψ(γ(l))}, by contraction.
pub fn s_pi_geq(word: &TraceWord, pi: &SetPartition, det: &DeterministicSet, budget: &Budget) -> Result<Complex64> {
    let rgs = word.check_partition(pi)?;
    s_geq_raw(word, &rgs, &word.resolve(det)?, det.dim(), budget)
}

/// S_π(N) by enumerating all N^{#π} labelings.
pub fn s_pi_geq_direct(word: &TraceWord, pi: &SetPartition, det: &DeterministicSet, budget: &Budget) -> Result<Complex64> {
    let rgs = word.check_partition(pi)?;
    let mats = word.resolve(det)?;
    enumerate(num_blocks(&rgs), &word.factors(&rgs, &mats), det.dim(), budget.max_direct, false)
}

/// S⁰_π(N), the sum over ker ψ = π, by Möbius inversion over the
/// coarsenings of π.
pub fn s_pi_eq(word: &TraceWord, pi: &SetPartition, det: &DeterministicSet, budget: &Budget) -> Result<Complex64> {
    let rgs = word.check_partition(pi)?;
    let mats = word.resolve(det)?;
    let mut acc = NeumaierSum::default();
    for (sigma, mu) in coarsenings(&rgs) {
        acc.add(s_geq_raw(word, &sigma, &mats, det.dim(), budget)? * mu);
    }
    Ok(acc.value())
}

/// S⁰_π(N) by enumerating injective labelings of the blocks.
pub fn s_pi_eq_direct(word: &TraceWord, pi: &SetPartition, det: &DeterministicSet, budget: &Budget) -> Result<Complex64> {
    let rgs = word.check_partition(pi)?;
    let mats = word.resolve(det)?;
    enumerate(num_blocks(&rgs), &word.factors(&rgs, &mats), det.dim(), budget.max_direct, true)
}
