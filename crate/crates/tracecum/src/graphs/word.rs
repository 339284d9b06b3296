use super::{quotient, MultiGraph};
use crate::error::Result;
use crate::partitions::{gamma_partition, Gamma, SetPartition};

/// The graphs attached to a product of r traces of lengths m_1, ..., m_r.
///
/// `d` is oriented on ±[m] with edge k running from γ(k) to -k; it carries
/// the deterministic factors. `g` adds the unoriented edge {k, -k} for each
/// random factor; its D-edges keep id k and its X-edges get id m + k.
#[derive(Clone, Debug)]
pub struct WordGraphs {
    pub gamma: Gamma,
    pub d: MultiGraph,
    pub g: MultiGraph,
}

impl WordGraphs {
    pub fn m(&self) -> usize {
        self.gamma.m()
    }

    /// D^π.
    pub fn d_quotient(&self, pi: &SetPartition) -> Result<MultiGraph> {
        quotient(&self.d, pi)
    }
}

pub fn build_word_graphs(m_vec: &[usize]) -> Result<WordGraphs> {
    let gamma = gamma_partition(m_vec)?;
    let m = gamma.m() as i64;
    let labels: Vec<i64> = (-m..=-1).chain(1..=m).collect();
    let mut d = MultiGraph::new(labels.clone(), true)?;
    let mut g = MultiGraph::new(labels, false)?;
    for k in 1..=m {
        d.add_edge(k as usize, gamma.next(k), -k)?;
        g.add_edge(k as usize, gamma.next(k), -k)?;
    }
    for k in 1..=m {
        g.add_edge((m + k) as usize, k, -k)?;
    }
    Ok(WordGraphs { gamma, d, g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::cycle_count;

    #[test]
    fn d_and_g_shapes() {
        let w = build_word_graphs(&[8, 6]).unwrap();
        assert_eq!(w.d.num_edges(), 14);
        assert_eq!(w.g.num_edges(), 28);
        assert_eq!(cycle_count(&w.g).unwrap(), 2);
        let mut sizes: Vec<usize> = w.g.edge_components().iter().map(|c| c.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![12, 16]);
    }

    #[test]
    fn small_words() {
        let one = build_word_graphs(&[1]).unwrap();
        let e = one.d.edge(1).unwrap();
        assert_eq!((one.d.labels()[e.a], one.d.labels()[e.b]), (1, -1));
        assert_eq!(cycle_count(&one.g).unwrap(), 1);
        assert_eq!(one.g.num_vertices(), 2);

        let two = build_word_graphs(&[2]).unwrap();
        let ends: Vec<(i64, i64)> = two
            .d
            .edges()
            .iter()
            .map(|e| (two.d.labels()[e.a], two.d.labels()[e.b]))
            .collect();
        assert_eq!(ends, vec![(2, -1), (1, -2)]);
        assert_eq!(cycle_count(&two.g).unwrap(), 1);
        assert_eq!(two.g.num_vertices(), 4);
    }

    #[test]
    fn g_has_one_cycle_per_trace() {
        for shape in [vec![1, 1, 1], vec![3, 2], vec![4], vec![2, 2, 1, 3]] {
            let w = build_word_graphs(&shape).unwrap();
            assert_eq!(cycle_count(&w.g).unwrap(), shape.len());
        }
    }
}
