use super::{quotient, MultiGraph};
use crate::error::{Error, Result};
use crate::partitions::{GroundSet, SetPartition, UnionFind};

/// An edge of T: vertex `vi` of member `i` is glued to vertex `vj` of member `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GogEdge {
    pub i: usize,
    pub j: usize,
    pub vi: i64,
    pub vj: i64,
}

/// Member graphs with disjoint vertex labels, glued along the edges of T.
#[derive(Clone, Debug)]
pub struct GraphOfGraphs {
    pub members: Vec<MultiGraph>,
    pub links: Vec<GogEdge>,
}

/// Returns G^T and the partition π_T of the union's vertices.
pub fn merge_by_graph(gog: &GraphOfGraphs) -> Result<(MultiGraph, SetPartition)> {
    let oriented = gog.members.first().map(|g| g.is_oriented()).unwrap_or(false);
    let labels: Vec<i64> = gog.members.iter().flat_map(|g| g.labels().iter().copied()).collect();
    let mut union = MultiGraph::new(labels, oriented)
        .map_err(|_| Error::Domain("member graphs must have disjoint vertex labels".into()))?;
    for g in &gog.members {
        for e in g.edges() {
            union.add_edge(e.id, g.labels()[e.a], g.labels()[e.b])?;
        }
    }
    let domain = union.vertex_set()?;
    let mut uf = UnionFind::new(domain.len());
    for l in &gog.links {
        let pos = |member: usize, v: i64| -> Result<usize> {
            let g = gog
                .members
                .get(member)
                .ok_or_else(|| Error::Domain(format!("no member graph {member}")))?;
            if g.vertex_index(v).is_none() {
                return Err(Error::Domain(format!("vertex {v} is not in member {member}")));
            }
            Ok(domain.index_of(v).unwrap())
        };
        uf.union(pos(l.i, l.vi)?, pos(l.j, l.vj)?);
    }
    let pi = SetPartition::from_assignment(domain, &uf.roots());
    Ok((quotient(&union, &pi)?, pi))
}

impl GraphOfGraphs {
    /// Whether the links, viewed as edges between member indices, form a tree.
    pub fn is_tree(&self) -> bool {
        let n = self.members.len();
        let mut uf = UnionFind::new(n);
        for l in &self.links {
            if uf.find(l.i) == uf.find(l.j) {
                return false;
            }
            uf.union(l.i, l.j);
        }
        uf.count() == 1
    }

    pub fn vertex_set(&self) -> Result<GroundSet> {
        GroundSet::new(self.members.iter().flat_map(|g| g.labels().iter().copied()).collect())
    }
}
