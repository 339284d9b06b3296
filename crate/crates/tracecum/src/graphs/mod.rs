//! Multigraphs with loops, their quotients, bridges, and the exponent t(G).
//!
//! t(G) is read off the forest F(G) whose vertices are the two-edge-connected
//! components of G and whose edges are the bridges: each isolated forest
//! vertex contributes 1 and each degree-one vertex contributes 1/2.

mod half;
pub mod lemmas;
mod merge;
mod word;

pub use half::HalfInteger;
pub use merge::{merge_by_graph, GogEdge, GraphOfGraphs};
pub use word::{build_word_graphs, WordGraphs};

use crate::error::{Error, Result};
use crate::partitions::{GroundSet, SetPartition, UnionFind};
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

/// An edge between vertex indices `a` and `b`; for oriented graphs `a` is
/// the source and `b` the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: usize,
    pub a: usize,
    pub b: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    labels: Vec<i64>,
    // original labels merged into each vertex (a singleton for base graphs)
    members: Vec<Vec<i64>>,
    edges: Vec<Edge>,
    oriented: bool,
    index: HashMap<i64, usize>,
}

impl MultiGraph {
    pub fn new(labels: Vec<i64>, oriented: bool) -> Result<Self> {
        let members = labels.iter().map(|&l| vec![l]).collect();
        Self::with_members(labels, members, oriented)
    }

    fn with_members(labels: Vec<i64>, members: Vec<Vec<i64>>, oriented: bool) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, &l) in labels.iter().enumerate() {
            if index.insert(l, i).is_some() {
                return Err(Error::Domain(format!("duplicate vertex label {l}")));
            }
        }
        Ok(MultiGraph { labels, members, edges: Vec::new(), oriented, index })
    }

    /// Adds edge `id` between the vertices labelled `a` and `b`.
    pub fn add_edge(&mut self, id: usize, a: i64, b: i64) -> Result<()> {
        let ia = self.vertex_index(a).ok_or_else(|| Error::Domain(format!("unknown vertex {a}")))?;
        let ib = self.vertex_index(b).ok_or_else(|| Error::Domain(format!("unknown vertex {b}")))?;
        if self.edges.iter().any(|e| e.id == id) {
            return Err(Error::Domain(format!("duplicate edge id {id}")));
        }
        self.edges.push(Edge { id, a: ia, b: ib });
        Ok(())
    }

    pub fn vertex_index(&self, label: i64) -> Option<usize> {
        self.index.get(&label).copied()
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    /// Original vertices merged into vertex `v`.
    pub fn members(&self, v: usize) -> &[i64] {
        &self.members[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_oriented(&self) -> bool {
        self.oriented
    }

    pub fn vertex_set(&self) -> Result<GroundSet> {
        GroundSet::new(self.labels.clone())
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.a == v) as usize + (e.b == v) as usize).sum()
    }

    /// Number of connected components (orientation ignored).
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.num_vertices());
        for e in &self.edges {
            uf.union(e.a, e.b);
        }
        uf.count()
    }

    /// Edge ids grouped by connected component, each list sorted; components
    /// without edges are omitted.
    pub fn edge_components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.num_vertices());
        for e in &self.edges {
            uf.union(e.a, e.b);
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for e in &self.edges {
            groups.entry(uf.find(e.a)).or_default().push(e.id);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.iter_mut().for_each(|g| g.sort_unstable());
        out.sort();
        out
    }

    /// Line-oriented text form: a `vertices` line, then `id a b [oriented]`.
    pub fn to_text(&self) -> String {
        let mut s = String::from("vertices");
        for l in &self.labels {
            let _ = write!(s, " {l}");
        }
        s.push('\n');
        for e in &self.edges {
            let _ = write!(s, "{} {} {}", e.id, self.labels[e.a], self.labels[e.b]);
            if self.oriented {
                s.push_str(" oriented");
            }
            s.push('\n');
        }
        s
    }

    /// Parses [`MultiGraph::to_text`] output. Blank lines and `#` comments
    /// are ignored; an edgeless graph reads back as unoriented.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap().trim())
            .enumerate()
            .filter(|(_, l)| !l.is_empty());
        let (_, head) = lines.next().ok_or_else(|| Error::Parse("empty graph text".into()))?;
        let mut toks = head.split_whitespace();
        if toks.next() != Some("vertices") {
            return Err(Error::Parse("first line must start with `vertices`".into()));
        }
        let labels = toks
            .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad vertex label `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        let mut rows = Vec::new();
        let mut mode: Option<bool> = None;
        for (no, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            let oriented = match t.len() {
                3 => false,
                4 if t[3] == "oriented" => true,
                _ => return Err(Error::Parse(format!("line {}: expected `id a b [oriented]`", no + 1))),
            };
            if *mode.get_or_insert(oriented) != oriented {
                return Err(Error::Parse(format!("line {}: mixed edge orientation", no + 1)));
            }
            let num = |s: &str| s.parse::<i64>().map_err(|_| Error::Parse(format!("line {}: bad number `{s}`", no + 1)));
            rows.push((num(t[0])? as usize, num(t[1])?, num(t[2])?));
        }
        let mut g = MultiGraph::new(labels, mode.unwrap_or(false))?;
        for (id, a, b) in rows {
            g.add_edge(id, a, b)?;
        }
        Ok(g)
    }
}

/// Identifies the vertices inside each block of `pi`. Edge ids and
/// multiplicities are kept; an edge inside a block becomes a loop. The new
/// vertex carries the smallest label of its block.
pub fn quotient(g: &MultiGraph, pi: &SetPartition) -> Result<MultiGraph> {
    if *pi.domain() != g.vertex_set()? {
        return Err(Error::Domain("partition does not cover exactly the vertex set".into()));
    }
    let labels: Vec<i64> = pi.blocks().iter().map(|b| b[0]).collect();
    let members: Vec<Vec<i64>> = pi
        .blocks()
        .iter()
        .map(|b| {
            let mut m: Vec<i64> =
                b.iter().flat_map(|&l| g.members[g.vertex_index(l).unwrap()].clone()).collect();
            m.sort_unstable();
            m
        })
        .collect();
    let mut q = MultiGraph::with_members(labels, members, g.oriented)?;
    let block_of: Vec<usize> = g.labels.iter().map(|&l| pi.block_of(l).unwrap()).collect();
    q.edges = g
        .edges
        .iter()
        .map(|e| Edge { id: e.id, a: block_of[e.a], b: block_of[e.b] })
        .collect();
    Ok(q)
}

/// Ids of the cutting edges, ignoring orientation. Parallel edges and loops
/// are never bridges.
pub fn bridges(g: &MultiGraph) -> BTreeSet<usize> {
    let n = g.num_vertices();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, e) in g.edges.iter().enumerate() {
        if !e.is_loop() {
            adj[e.a].push((e.b, k));
            adj[e.b].push((e.a, k));
        }
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0usize;
    let mut out = BTreeSet::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // frame: (vertex, edge index used to enter, next adjacency position)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(top) = stack.last_mut() {
            let (v, via) = (top.0, top.1);
            if top.2 < adj[v].len() {
                let (w, k) = adj[v][top.2];
                top.2 += 1;
                if k == via {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, k, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        out.insert(g.edges[via].id);
                    }
                }
            }
        }
    }
    out
}

/// Partition of the vertex labels into two-edge-connected components.
pub fn two_edge_cc(g: &MultiGraph) -> Result<SetPartition> {
    let cut = bridges(g);
    let mut uf = UnionFind::new(g.num_vertices());
    for e in &g.edges {
        if !cut.contains(&e.id) {
            uf.union(e.a, e.b);
        }
    }
    let roots = uf.roots();
    let domain = g.vertex_set()?;
    let ids: Vec<usize> = domain.elements().iter().map(|&l| roots[g.vertex_index(l).unwrap()]).collect();
    Ok(SetPartition::from_assignment(domain, &ids))
}

/// The forest F(G): one vertex per two-edge-connected component, one
/// unoriented edge per bridge.
pub fn forest_2ecc(g: &MultiGraph) -> Result<MultiGraph> {
    let cut = bridges(g);
    let comps = two_edge_cc(g)?;
    let mut f = quotient(g, &comps)?;
    f.oriented = false;
    f.edges.retain(|e| cut.contains(&e.id));
    assert!(f.edges.iter().all(|e| !e.is_loop()), "bridge collapsed to a loop");
    assert_eq!(
        f.num_edges() + f.component_count(),
        f.num_vertices(),
        "F(G) contains a cycle"
    );
    Ok(f)
}

/// t(G): 1 per isolated vertex of F(G) plus 1/2 per degree-one vertex.
pub fn t_exponent(g: &MultiGraph) -> Result<HalfInteger> {
    let f = forest_2ecc(g)?;
    Ok((0..f.num_vertices())
        .map(|v| match f.degree(v) {
            0 => HalfInteger::ONE,
            1 => HalfInteger::HALF,
            _ => HalfInteger::ZERO,
        })
        .sum())
}

/// Number of cycles of a 2-regular graph.
pub fn cycle_count(g: &MultiGraph) -> Result<usize> {
    if let Some(v) = (0..g.num_vertices()).find(|&v| g.degree(v) != 2) {
        return Err(Error::Shape(format!(
            "vertex {} has degree {}, expected 2",
            g.labels[v],
            g.degree(v)
        )));
    }
    Ok(g.component_count())
}
