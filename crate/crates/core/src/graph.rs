//! Simple undirected graphs and small motifs.
//!
//! Nodes are 0-based in the Rust API. The JSON file format uses 1-based
//! node numbers; the conversion happens in [`crate::io`].

use std::collections::BTreeSet;

use crate::error::{bail, Result};

/// A simple undirected graph: no loops, no multi-edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<bool>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: BTreeSet::new(), adj: vec![false; n * n] }
    }

    /// Builds a graph from 0-based edges. Duplicate edges (in either
    /// orientation) are rejected, as are loops and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (i, j) in edges {
            if i >= n || j >= n {
                bail!(Input, "edge ({i}, {j}) has an endpoint outside 0..{n}");
            }
            if i == j {
                bail!(Input, "loop at node {i}");
            }
            if !g.insert_edge(i, j) {
                bail!(Input, "duplicate edge ({i}, {j})");
            }
        }
        Ok(g)
    }

    /// Inserts an edge, returning `false` if it was already present.
    pub(crate) fn insert_edge(&mut self, i: usize, j: usize) -> bool {
        debug_assert!(i != j && i < self.n && j < self.n);
        let key = (i.min(j), i.max(j));
        if !self.edges.insert(key) {
            return false;
        }
        self.adj[i * self.n + j] = true;
        self.adj[j * self.n + i] = true;
        true
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    /// Adjacency entry `A_ij` as 0.0 or 1.0.
    #[inline]
    pub fn a(&self, i: usize, j: usize) -> f64 {
        if self.has_edge(i, j) {
            1.0
        } else {
            0.0
        }
    }

    pub fn degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.has_edge(i, j)).count()
    }

    /// Adjacency rows as bitmasks; only valid for `n <= 64`.
    pub(crate) fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64);
        (0..self.n)
            .map(|i| (0..self.n).filter(|&j| self.has_edge(i, j)).fold(0u64, |m, j| m | (1 << j)))
            .collect()
    }

    /// Number of edges with one endpoint in `in_s` and the other outside.
    pub fn cut_size(&self, in_s: &[bool]) -> usize {
        self.edges.iter().filter(|&&(i, j)| in_s[i] != in_s[j]).count()
    }
}

/// Largest motif order supported by the exact homomorphism counters.
pub const MAX_MOTIF_NODES: usize = 5;

/// A small pattern graph `F` for homomorphism densities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Motif {
    graph: Graph,
}

impl Motif {
    pub fn new(graph: Graph) -> Result<Self> {
        if graph.n() == 0 || graph.n() > MAX_MOTIF_NODES {
            bail!(Capacity, "motif must have between 1 and {MAX_MOTIF_NODES} nodes, got {}", graph.n());
        }
        Ok(Motif { graph })
    }

    pub fn edge() -> Self {
        Self::fixed(2, &[(0, 1)])
    }

    /// Path on three nodes (two edges).
    pub fn path3() -> Self {
        Self::fixed(3, &[(0, 1), (1, 2)])
    }

    pub fn triangle() -> Self {
        Self::fixed(3, &[(0, 1), (1, 2), (0, 2)])
    }

    pub fn cycle4() -> Self {
        Self::fixed(4, &[(0, 1), (1, 2), (2, 3), (0, 3)])
    }

    fn fixed(k: usize, edges: &[(usize, usize)]) -> Self {
        Motif { graph: Graph::from_edges(k, edges.iter().copied()).expect("static motif") }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        Ok(match name {
            "edge" => Self::edge(),
            "path3" => Self::path3(),
            "triangle" => Self::triangle(),
            "cycle4" | "4-cycle" => Self::cycle4(),
            other => bail!(Input, "unknown motif '{other}'"),
        })
    }

    pub fn order(&self) -> usize {
        self.graph.n()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}
