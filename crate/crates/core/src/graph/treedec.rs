use super::{components, Graph, GraphError};
use serde::{Deserialize, Serialize};

/// A tree decomposition `(T, {U_h})` of some graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    tree: Graph,
    bags: Vec<Vec<usize>>,
}

/// JSON form: `{"tree_edges": [[0,1]], "bags": [[0,1,2],[2,3]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecompositionDocument {
    pub tree_edges: Vec<(usize, usize)>,
    pub bags: Vec<Vec<usize>>,
}

impl TreeDecomposition {
    /// `tree` must be a tree on `bags.len()` nodes.
    pub fn new(tree: Graph, mut bags: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        if tree.n() != bags.len() {
            return Err(GraphError::InvalidTreeDecomposition(format!(
                "{} tree nodes but {} bags",
                tree.n(),
                bags.len()
            )));
        }
        if tree.n() == 0 {
            return Err(GraphError::InvalidTreeDecomposition("empty decomposition tree".into()));
        }
        if !(tree.is_forest() && tree.is_connected()) {
            return Err(GraphError::InvalidTreeDecomposition("decomposition graph is not a tree".into()));
        }
        for bag in &mut bags {
            bag.sort_unstable();
            bag.dedup();
        }
        Ok(Self { tree, bags })
    }

    pub fn from_document(doc: TreeDecompositionDocument) -> Result<Self, GraphError> {
        let tree = Graph::new(doc.bags.len(), doc.tree_edges)
            .map_err(|e| GraphError::InvalidTreeDecomposition(format!("tree: {e}")))?;
        Self::new(tree, doc.bags)
    }

    pub fn to_document(&self) -> TreeDecompositionDocument {
        TreeDecompositionDocument {
            tree_edges: self.tree.edges().to_vec(),
            bags: self.bags.clone(),
        }
    }

    /// Path decomposition with one bag per consecutive window of vertices:
    /// bag `i` is `{i, ..., i + width}`. Valid for any graph whose edges join
    /// vertices at most `width` apart.
    pub fn sliding_window(n: usize, width: usize) -> Result<Self, GraphError> {
        let count = n.saturating_sub(width).max(1);
        let bags = (0..count).map(|i| (i..(i + width + 1).min(n)).collect()).collect();
        Self::new(Graph::path(count), bags)
    }

    /// One bag per edge of a tree, joined along the tree itself (edges that
    /// share a vertex in a star pattern are chained through the parent edge).
    pub fn from_tree_edges(t: &Graph) -> Result<Self, GraphError> {
        if !t.is_forest() || !t.is_connected() || t.m() == 0 {
            return Err(GraphError::InvalidTreeDecomposition("need a tree with at least one edge".into()));
        }
        // root at 0; the bag of edge (parent, child) attaches to the bag of the parent's own parent edge,
        // or to the first bag at the root
        let adj = t.neighbors();
        let inc = t.incidence();
        let mut parent_edge = vec![usize::MAX; t.n()];
        let mut order = vec![0usize];
        let mut seen = vec![false; t.n()];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for (&x, &e) in adj[v].iter().zip(&inc[v]) {
                if !seen[x] {
                    seen[x] = true;
                    parent_edge[x] = e;
                    order.push(x);
                }
            }
        }
        let bags: Vec<Vec<usize>> = t.edges().iter().map(|&(a, b)| vec![a, b]).collect();
        let root_edge = inc[0][0];
        let mut tree_edges = Vec::new();
        for &v in order.iter().skip(1) {
            let e = parent_edge[v];
            let (a, b) = t.edge(e);
            let parent = if parent_edge[a] == e { b } else { a };
            let anchor = if parent == 0 { root_edge } else { parent_edge[parent] };
            if anchor != e {
                tree_edges.push((anchor, e));
            }
        }
        let tree = Graph::new(t.m(), tree_edges).map_err(|e| GraphError::InvalidTreeDecomposition(e.to_string()))?;
        Self::new(tree, bags)
    }

    pub fn tree(&self) -> &Graph {
        &self.tree
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    /// `max |U_h| - 1`.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// Checks that every edge of `g` lies in some bag and that, for every
    /// vertex, the tree nodes whose bags contain it induce a connected subtree
    /// (equivalent to `U_a ∩ U_c ⊆ U_b` for `b` on the `a`–`c` path).
    pub fn validate_for(&self, g: &Graph) -> Result<(), GraphError> {
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        for (h, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= g.n() {
                    return Err(GraphError::InvalidTreeDecomposition(format!(
                        "bag {h} names vertex {v} outside the graph"
                    )));
                }
                holders[v].push(h);
            }
        }
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            let covered = holders[a].iter().any(|h| self.bags[*h].binary_search(&b).is_ok());
            if !covered {
                return Err(GraphError::InvalidTreeDecomposition(format!("edge {e} = {{{a}, {b}}} is in no bag")));
            }
        }
        for (v, nodes) in holders.iter().enumerate() {
            if nodes.len() <= 1 {
                continue;
            }
            let mut inside = vec![false; self.tree.n()];
            for &h in nodes {
                inside[h] = true;
            }
            let sub = Graph::new(
                self.tree.n(),
                self.tree.edges().iter().copied().filter(|&(a, b)| inside[a] && inside[b]),
            )
            .expect("subgraph of a simple graph");
            let parts = components(&sub, &sub.full_subset()).kappa - (self.tree.n() - nodes.len());
            if parts != 1 {
                return Err(GraphError::InvalidTreeDecomposition(format!(
                    "bags containing vertex {v} are not connected in the tree"
                )));
            }
        }
        Ok(())
    }
}
