//! Graphs, bipartitions, edge subsets and the constructions used by the
//! reductions.
//!
//! Edge ids are the positions in the input edge list and are never
//! reindexed. Every construction documents its id layout so that edge
//! orderings and subset masks stay reproducible.

mod bipartite;
mod components;
mod construct;
mod io;
mod matching;
mod subset;
mod treedec;

pub use bipartite::{BipartiteGraph, Side};
pub use components::{
    bipartite_components, components, count_components_mask, Component, Components, UnionFind,
};
pub use construct::{cloud_blowup, gadget_upsilon1, gadget_upsilon2, stretch_sum, two_stretch, Gadget};
pub use io::{parse_edge_list, parse_graph, parse_json, GraphDocument, GraphFormat, ParsedGraph};
pub use matching::{max_matching, max_matching_bipartite, MAX_EXHAUSTIVE_MATCHING_EDGES};
pub use subset::EdgeSubset;
pub use treedec::{TreeDecomposition, TreeDecompositionDocument};

use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph is not bipartite (odd cycle through vertex {0})")]
    NotBipartite(usize),
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),
    #[error("vertex {0} is not on the U side")]
    NotOnUSide(usize),
    #[error("{0} is not an odd prime")]
    NotAnOddPrime(u64),
    #[error("gadget parameter k = {0} is out of range")]
    InvalidGadgetParameter(usize),
    #[error("exhaustive matching on a non-bipartite subgraph is limited to {limit} edges, got {edges}")]
    MatchingTooLarge { edges: usize, limit: usize },
    #[error("graph contains a cycle")]
    NotAForest,
    #[error("invalid tree decomposition: {0}")]
    InvalidTreeDecomposition(String),
    #[error("label list has {labels} entries for {n} vertices")]
    LabelCount { labels: usize, n: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A simple undirected graph with stable edge ids `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range
    /// endpoints. Edge `i` is the `i`-th pair of the iterator.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let edges: Vec<(usize, usize)> = edges.into_iter().collect();
        let mut seen = HashSet::with_capacity(edges.len());
        for &(a, b) in &edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
        }
        Ok(Self { n, edges, labels: None })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelCount {
                labels: labels.len(),
                n: self.n,
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Name of vertex `v`: its label if present, otherwise its index.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Number of vertices with no incident edge.
    pub fn isolated_count(&self) -> usize {
        self.degrees().iter().filter(|&&d| d == 0).count()
    }

    /// For each vertex, the ids of its incident edges in increasing order.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            inc[a].push(i);
            inc[b].push(i);
        }
        inc
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn full_subset(&self) -> EdgeSubset {
        EdgeSubset::full(self.m())
    }

    pub fn empty_subset(&self) -> EdgeSubset {
        EdgeSubset::empty(self.m())
    }

    /// Number of connected components of `(V, E)`, isolated vertices included.
    pub fn component_count(&self) -> usize {
        components(self, &self.full_subset()).kappa
    }

    pub fn is_forest(&self) -> bool {
        self.m() + self.component_count() == self.n
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Path on `n` vertices `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    /// Cycle on `n >= 3` vertices; edge `i` joins `i` and `(i+1) mod n`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    /// Star with centre `0` and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        Self::new(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star is simple")
    }

    /// `rows x cols` grid; vertex `(r, c)` has id `r * cols + c`. Horizontal
    /// edges come first, row by row, then vertical edges.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 1..cols {
                edges.push((r * cols + c - 1, r * cols + c));
            }
        }
        for r in 1..rows {
            for c in 0..cols {
                edges.push(((r - 1) * cols + c, r * cols + c));
            }
        }
        Self::new(rows * cols, edges).expect("grid is simple")
    }

    /// Heap-shaped binary tree on `n` vertices: the parent of `i > 0` is `(i-1)/2`.
    pub fn binary_tree(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| ((i - 1) / 2, i))).expect("tree is simple")
    }

    /// Tree from a parent array: `parents[i]` is the parent of vertex `i + 1`
    /// and must be at most `i`.
    pub fn from_parents(parents: &[usize]) -> Self {
        let n = parents.len() + 1;
        Self::new(n, parents.iter().enumerate().map(|(i, &p)| (p, i + 1))).expect("parent array is simple")
    }

    /// Subgraph on the same vertex set containing only the edges of `s`,
    /// renumbered in increasing id order.
    pub fn edge_subgraph(&self, s: &EdgeSubset) -> Graph {
        Graph {
            n: self.n,
            edges: s.iter().map(|e| self.edges[e]).collect(),
            labels: self.labels.clone(),
        }
    }
}
