//! Edge orderings and their linear width.

use super::MixingError;
use crate::graph::{Graph, TreeDecomposition};
use serde::Serialize;

/// Largest `m` for [`optimal_linear_width`].
pub const OPTIMAL_WIDTH_MAX_EDGES: usize = 20;

/// An ordering `σ` of the edges with its dangerous-vertex profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeOrdering {
    /// `perm[i]` is the edge at position `i`.
    pub perm: Vec<usize>,
    /// `profile[i] = |D_i|`: vertices with an incident edge before position `i`
    /// and one at or after it.
    pub profile: Vec<usize>,
    pub width: usize,
}

impl EdgeOrdering {
    /// `position[e]` = index of edge `e` in the ordering.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.perm.len()];
        for (i, &e) in self.perm.iter().enumerate() {
            pos[e] = i;
        }
        pos
    }

    /// Dangerous vertices for the cut before position `i`.
    pub fn dangerous(g: &Graph, perm: &[usize], i: usize) -> Vec<usize> {
        let mut before = vec![false; g.n()];
        let mut after = vec![false; g.n()];
        for (j, &e) in perm.iter().enumerate() {
            let (a, b) = g.edge(e);
            let side = if j < i { &mut before } else { &mut after };
            side[a] = true;
            side[b] = true;
        }
        (0..g.n()).filter(|&v| before[v] && after[v]).collect()
    }
}

/// Profile and width of `perm`, which must be a permutation of the edge ids.
pub fn linear_width_of_ordering(g: &Graph, perm: &[usize]) -> Result<EdgeOrdering, MixingError> {
    let m = g.m();
    let mut seen = vec![false; m];
    if perm.len() != m || perm.iter().any(|&e| e >= m || std::mem::replace(&mut seen[e], true)) {
        return Err(MixingError::NotAPermutation { m });
    }
    let mut first = vec![usize::MAX; g.n()];
    let mut last = vec![0usize; g.n()];
    for (i, &e) in perm.iter().enumerate() {
        let (a, b) = g.edge(e);
        for v in [a, b] {
            first[v] = first[v].min(i);
            last[v] = i;
        }
    }
    // v is dangerous at i iff first_v < i ≤ last_v
    let mut diff = vec![0i64; m + 1];
    for v in 0..g.n() {
        if first[v] != usize::MAX && first[v] < last[v] {
            diff[first[v] + 1] += 1;
            diff[last[v] + 1] -= 1;
        }
    }
    let mut profile = Vec::with_capacity(m);
    let mut acc = 0i64;
    for d in diff.iter().take(m) {
        acc += d;
        profile.push(acc as usize);
    }
    let width = profile.iter().copied().max().unwrap_or(0);
    Ok(EdgeOrdering {
        perm: perm.to_vec(),
        profile,
        width,
    })
}

/// Edges in id order.
pub fn natural_ordering(g: &Graph) -> EdgeOrdering {
    let perm: Vec<usize> = (0..g.m()).collect();
    linear_width_of_ordering(g, &perm).expect("identity is a permutation")
}

/// `⌊log₂ n⌋` (0 for `n ≤ 1`).
pub fn floor_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - 1 - n.leading_zeros()) as usize
    }
}

/// DFS edge ordering of a forest: each component is rooted at its smallest
/// vertex, children are explored in increasing order of subtree size (ties by
/// vertex id), and edges are listed in discovery order. The width is at most
/// `⌊log₂ n⌋`.
pub fn dfs_tree_ordering(t: &Graph) -> Result<EdgeOrdering, MixingError> {
    if !t.is_forest() {
        return Err(MixingError::NotAForest);
    }
    let n = t.n();
    let adj = t.neighbors();
    let inc = t.incidence();
    let mut parent = vec![usize::MAX; n];
    let mut parent_edge = vec![usize::MAX; n];
    let mut visited = vec![false; n];
    let mut size = vec![1usize; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut roots = Vec::new();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        roots.push(root);
        visited[root] = true;
        let mut order = vec![root];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for (&x, &e) in adj[v].iter().zip(&inc[v]) {
                if !visited[x] {
                    visited[x] = true;
                    parent[x] = v;
                    parent_edge[x] = e;
                    children[v].push(x);
                    order.push(x);
                }
            }
        }
        for &v in order.iter().rev() {
            if parent[v] != usize::MAX {
                size[parent[v]] += size[v];
            }
        }
    }
    for ch in children.iter_mut() {
        ch.sort_by_key(|&c| (size[c], c));
    }
    let mut perm = Vec::with_capacity(t.m());
    for root in roots {
        // iterative preorder
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            if parent_edge[v] != usize::MAX {
                perm.push(parent_edge[v]);
            }
            for &c in children[v].iter().rev() {
                stack.push(c);
            }
        }
    }
    linear_width_of_ordering(t, &perm)
}

/// Ordering derived from a tree decomposition: bags are visited by a DFS of
/// the decomposition tree from node 0 (smaller subtrees first, ties by node
/// id); each edge is assigned to the first visited bag containing both
/// endpoints, and edges within a bag are sorted by id.
pub fn treedec_ordering(g: &Graph, td: &TreeDecomposition) -> Result<EdgeOrdering, MixingError> {
    td.validate_for(g)?;
    let tree = td.tree();
    let node_order = dfs_tree_node_order(tree);
    let mut rank = vec![0usize; tree.n()];
    for (i, &h) in node_order.iter().enumerate() {
        rank[h] = i;
    }
    let bags = td.bags();
    let mut keyed: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| {
            let first = (0..tree.n())
                .filter(|&h| bags[h].binary_search(&a).is_ok() && bags[h].binary_search(&b).is_ok())
                .map(|h| rank[h])
                .min()
                .expect("validated decomposition covers every edge");
            (first, e)
        })
        .collect();
    keyed.sort_unstable();
    let perm: Vec<usize> = keyed.into_iter().map(|(_, e)| e).collect();
    linear_width_of_ordering(g, &perm)
}

/// Preorder of a tree's nodes from node 0, smaller subtrees first.
fn dfs_tree_node_order(tree: &Graph) -> Vec<usize> {
    let n = tree.n();
    let adj = tree.neighbors();
    let mut parent = vec![usize::MAX; n];
    let mut bfs = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < bfs.len() {
        let v = bfs[i];
        i += 1;
        for &x in &adj[v] {
            if !seen[x] {
                seen[x] = true;
                parent[x] = v;
                bfs.push(x);
            }
        }
    }
    let mut size = vec![1usize; n];
    for &v in bfs.iter().rev() {
        if parent[v] != usize::MAX {
            size[parent[v]] += size[v];
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        out.push(v);
        let mut ch: Vec<usize> = adj[v].iter().copied().filter(|&x| parent[x] == v).collect();
        ch.sort_by_key(|&c| (size[c], c));
        stack.extend(ch.into_iter().rev());
    }
    out
}

/// `(w + 1)(⌊log₂ max(n, r)⌋ + 1)` for a decomposition of width `w` with `r`
/// tree nodes on an `n`-vertex graph.
pub fn treedec_width_bound(n: usize, nodes: usize, width: usize) -> usize {
    (width + 1) * (floor_log2(n.max(nodes)) + 1)
}

/// Exact linear width by dynamic programming over edge prefix sets:
/// `best(P) = max(cut(P), min_{e∈P} best(P∖e))`, where `cut(P)` counts
/// vertices touched by both `P` and its complement.
pub fn optimal_linear_width(g: &Graph) -> Result<usize, MixingError> {
    let m = g.m();
    if m > OPTIMAL_WIDTH_MAX_EDGES {
        return Err(MixingError::TooManyEdges {
            m,
            limit: OPTIMAL_WIDTH_MAX_EDGES,
        });
    }
    if g.n() > 128 {
        return Err(MixingError::TooManyVertices { n: g.n(), limit: 128 });
    }
    let ends: Vec<u128> = g.edges().iter().map(|&(a, b)| (1u128 << a) | (1u128 << b)).collect();
    let full = (1u32 << m) - 1;
    let touched = |set: u32| -> u128 {
        let mut acc = 0u128;
        let mut rest = set;
        while rest != 0 {
            acc |= ends[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        acc
    };
    let mut best = vec![u32::MAX; 1 << m];
    best[0] = 0;
    for set in 1..=full {
        let cut = (touched(set) & touched(full ^ set)).count_ones();
        let mut inner = u32::MAX;
        let mut rest = set;
        while rest != 0 {
            let e = rest.trailing_zeros();
            rest &= rest - 1;
            inner = inner.min(best[(set ^ (1 << e)) as usize]);
        }
        best[set as usize] = inner.max(cut);
    }
    Ok(best[full as usize] as usize)
}
