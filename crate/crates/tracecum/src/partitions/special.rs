use super::{GroundSet, SetPartition};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Transpose mark on a random letter: x_{ij}(T) = x_{ji}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Mark {
    #[default]
    Plain,
    Transposed,
}

/// The trace-cycle permutation γ = (1..m_1)(m_1+1..m_1+m_2)... and its
/// orbit partition of [m].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gamma {
    m_vec: Vec<usize>,
    partition: SetPartition,
    succ: Vec<i64>,
    pred: Vec<i64>,
}

impl Gamma {
    pub fn partition(&self) -> &SetPartition {
        &self.partition
    }

    pub fn m_vec(&self) -> &[usize] {
        &self.m_vec
    }

    /// Total length m.
    pub fn m(&self) -> usize {
        self.succ.len()
    }

    /// Number of cycles r.
    pub fn r(&self) -> usize {
        self.m_vec.len()
    }

    /// γ(l) for l in [m].
    pub fn next(&self, l: i64) -> i64 {
        self.succ[(l - 1) as usize]
    }

    /// γ⁻¹(l) for l in [m].
    pub fn prev(&self, l: i64) -> i64 {
        self.pred[(l - 1) as usize]
    }

    /// Index k (0-based) of the cycle containing l.
    pub fn cycle_of(&self, l: i64) -> usize {
        self.partition.block_of(l).expect("label in [m]")
    }
}

/// Builds γ for monomial lengths m_vec.
pub fn gamma_partition(m_vec: &[usize]) -> Result<Gamma> {
    if m_vec.is_empty() || m_vec.contains(&0) {
        return Err(Error::Shape("monomial lengths must be positive and r >= 1".into()));
    }
    let m: usize = m_vec.iter().sum();
    let mut succ = vec![0i64; m];
    let mut pred = vec![0i64; m];
    let mut ids = Vec::with_capacity(m);
    let mut start = 1i64;
    for (k, &len) in m_vec.iter().enumerate() {
        let end = start + len as i64 - 1;
        for l in start..=end {
            let nxt = if l == end { start } else { l + 1 };
            succ[(l - 1) as usize] = nxt;
            pred[(nxt - 1) as usize] = l;
            ids.push(k);
        }
        start = end + 1;
    }
    let partition = SetPartition::from_assignment(GroundSet::range(m), &ids);
    Ok(Gamma { m_vec: m_vec.to_vec(), partition, succ, pred })
}

fn pairs_of(tau: &SetPartition) -> Result<Vec<(i64, i64)>> {
    if !tau.is_pairing() {
        return Err(Error::Shape(format!("{tau} is not a pairing")));
    }
    Ok(tau.blocks().iter().map(|b| (b[0], b[1])).collect())
}

fn ground_m(tau: &SetPartition) -> Result<usize> {
    let m = tau.domain().len();
    if *tau.domain() != GroundSet::range(m) {
        return Err(Error::Domain("expected a partition of [m]".into()));
    }
    Ok(m)
}

/// π_τ: each pair {u,v} of τ becomes {u,-v} and {v,-u}.
pub fn lift_pairing(tau: &SetPartition) -> Result<SetPartition> {
    let m = ground_m(tau)?;
    let mut blocks = Vec::with_capacity(m);
    for (u, v) in pairs_of(tau)? {
        blocks.push(vec![u, -v]);
        blocks.push(vec![v, -u]);
    }
    SetPartition::from_blocks(GroundSet::signed(m), blocks)
}

/// π_τ^ε: equal marks lift as in [`lift_pairing`]; mixed marks give
/// {u,v} and {-u,-v}.
pub fn lift_pairing_eps(tau: &SetPartition, eps: &[Mark]) -> Result<SetPartition> {
    let m = ground_m(tau)?;
    if eps.len() != m {
        return Err(Error::Shape(format!("expected {m} marks, got {}", eps.len())));
    }
    let mut blocks = Vec::with_capacity(m);
    for (u, v) in pairs_of(tau)? {
        if eps[(u - 1) as usize] == eps[(v - 1) as usize] {
            blocks.push(vec![u, -v]);
            blocks.push(vec![v, -u]);
        } else {
            blocks.push(vec![u, v]);
            blocks.push(vec![-u, -v]);
        }
    }
    SetPartition::from_blocks(GroundSet::signed(m), blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::enumerate_pairings;

    fn pairing(m: usize, pairs: &[(i64, i64)]) -> SetPartition {
        SetPartition::from_blocks(
            GroundSet::range(m),
            pairs.iter().map(|&(a, b)| vec![a, b]).collect(),
        )
        .unwrap()
    }

    fn signed(m: usize, blocks: &[&[i64]]) -> SetPartition {
        SetPartition::from_blocks(GroundSet::signed(m), blocks.iter().map(|b| b.to_vec()).collect())
            .unwrap()
    }

    #[test]
    fn gamma_examples() {
        let g = gamma_partition(&[8, 6]).unwrap();
        assert_eq!(g.partition().blocks()[0], (1..=8).collect::<Vec<_>>());
        assert_eq!(g.partition().blocks()[1], (9..=14).collect::<Vec<_>>());
        assert_eq!(g.next(8), 1);
        assert_eq!(g.next(14), 9);
        assert_eq!(g.prev(9), 14);
        let single = gamma_partition(&[4]).unwrap();
        assert!(single.partition().is_one());
        assert_eq!((1..=4).map(|l| single.next(l)).collect::<Vec<_>>(), vec![2, 3, 4, 1]);
        let id = gamma_partition(&[1, 1, 1]).unwrap();
        assert_eq!(id.partition().num_blocks(), 3);
        assert!((1..=3).all(|l| id.next(l) == l));
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_pairing(&pairing(2, &[(1, 2)])).unwrap(), signed(2, &[&[1, -2], &[2, -1]]));
        assert_eq!(
            lift_pairing(&pairing(4, &[(1, 3), (2, 4)])).unwrap(),
            signed(4, &[&[1, -3], &[3, -1], &[2, -4], &[4, -2]])
        );
        let tau = pairing(
            14,
            &[(1, 8), (2, 13), (3, 5), (4, 7), (6, 10), (9, 14), (11, 12)],
        );
        let lifted = lift_pairing(&tau).unwrap();
        assert!(lifted.same_block(1, -8) && lifted.same_block(-1, 8) && lifted.same_block(2, -13));
        assert_eq!(lifted.num_blocks(), 14);
        assert!(lift_pairing(&SetPartition::one_block(GroundSet::range(4))).is_err());
    }

    #[test]
    fn lift_eps_examples() {
        use Mark::*;
        let t = pairing(2, &[(1, 2)]);
        assert_eq!(lift_pairing_eps(&t, &[Plain, Plain]).unwrap(), signed(2, &[&[1, -2], &[2, -1]]));
        assert_eq!(
            lift_pairing_eps(&t, &[Plain, Transposed]).unwrap(),
            signed(2, &[&[1, 2], &[-1, -2]])
        );
        assert_eq!(
            lift_pairing_eps(&t, &[Transposed, Transposed]).unwrap(),
            signed(2, &[&[1, -2], &[2, -1]])
        );
        assert!(lift_pairing_eps(&t, &[Plain]).is_err());
    }

    #[test]
    fn lift_is_pairing_and_negation_symmetric() {
        for m in [2usize, 4, 6, 8] {
            for tau in enumerate_pairings(GroundSet::range(m)).unwrap() {
                let pi = lift_pairing(&tau).unwrap();
                assert!(pi.is_pairing());
                let negated: Vec<Vec<i64>> =
                    pi.blocks().iter().map(|b| b.iter().map(|x| -x).collect()).collect();
                let again = SetPartition::from_blocks(GroundSet::signed(m), negated).unwrap();
                assert_eq!(again, pi);
            }
        }
    }
}
