use super::{BipartiteGraph, EdgeSubset, Graph, Side};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
        self.size.iter_mut().for_each(|s| *s = 1);
        self.sets = self.parent.len();
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns `false` if already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.sets -= 1;
        true
    }

    pub fn sets(&self) -> usize {
        self.sets
    }
}

/// One connected component of `(V, S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Vertices in increasing order.
    pub vertices: Vec<usize>,
    /// `Some(true)` when every `W` vertex of the component has subset-degree
    /// exactly 2. `None` when no bipartition was supplied.
    pub pure: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// `κ(S)`, isolated vertices included.
    pub kappa: usize,
    /// Components ordered by their smallest vertex.
    pub components: Vec<Component>,
}

impl Components {
    /// `κ'(S)`, the number of pure components, if purity flags are present.
    pub fn pure_count(&self) -> Option<usize> {
        self.components
            .iter()
            .map(|c| c.pure.map(usize::from))
            .sum::<Option<usize>>()
    }
}

fn group(g: &Graph, s: &EdgeSubset) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(g.n());
    for e in s.iter() {
        let (a, b) = g.edge(e);
        uf.union(a, b);
    }
    let mut slot = vec![usize::MAX; g.n()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.n() {
        let r = uf.find(v);
        if slot[r] == usize::MAX {
            slot[r] = out.len();
            out.push(Vec::new());
        }
        out[slot[r]].push(v);
    }
    out
}

/// Connected components of `(V, S)` without purity flags.
pub fn components(g: &Graph, s: &EdgeSubset) -> Components {
    let comps: Vec<Component> = group(g, s)
        .into_iter()
        .map(|vertices| Component { vertices, pure: None })
        .collect();
    Components {
        kappa: comps.len(),
        components: comps,
    }
}

/// Connected components of `(U ∪ W, S)` with pure/mixed flags.
///
/// Isolated `U` vertices are pure (they contain no `W` vertex); isolated `W`
/// vertices are mixed.
pub fn bipartite_components(g: &BipartiteGraph, s: &EdgeSubset) -> Components {
    let mut deg = vec![0usize; g.n()];
    for e in s.iter() {
        let (a, b) = g.graph().edge(e);
        deg[a] += 1;
        deg[b] += 1;
    }
    let comps: Vec<Component> = group(g.graph(), s)
        .into_iter()
        .map(|vertices| {
            let pure = vertices.iter().all(|&v| g.side(v) == Side::U || deg[v] == 2);
            Component {
                vertices,
                pure: Some(pure),
            }
        })
        .collect();
    Components {
        kappa: comps.len(),
        components: comps,
    }
}

/// `κ(S)` for a subset given as a mask over `edges` (at most 64 edges).
pub fn count_components_mask(uf: &mut UnionFind, edges: &[(usize, usize)], mask: u64) -> usize {
    uf.reset();
    let mut rest = mask;
    while rest != 0 {
        let e = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let (a, b) = edges[e];
        uf.union(a, b);
    }
    uf.sets()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> BipartiteGraph {
        // u1 - w - u2 with w = vertex 1
        BipartiteGraph::new(Graph::path(3), &[0, 2]).unwrap()
    }

    #[test]
    fn k3_empty_subset_has_three_components() {
        let g = Graph::complete(3);
        assert_eq!(components(&g, &g.empty_subset()).kappa, 3);
        assert_eq!(components(&g, &g.full_subset()).kappa, 1);
    }

    #[test]
    fn p3_full_is_one_pure_component() {
        let b = p3();
        let c = bipartite_components(&b, &b.graph().full_subset());
        assert_eq!(c.kappa, 1);
        assert_eq!(c.pure_count(), Some(1));
    }

    #[test]
    fn p3_empty_has_two_pure_components() {
        let b = p3();
        let c = bipartite_components(&b, &b.graph().empty_subset());
        assert_eq!(c.kappa, 3);
        assert_eq!(c.pure_count(), Some(2));
        let w = c.components.iter().find(|c| c.vertices == vec![1]).unwrap();
        assert_eq!(w.pure, Some(false));
    }

    #[test]
    fn mask_counting_matches() {
        let g = Graph::cycle(5);
        let mut uf = UnionFind::new(5);
        for mask in 0..32u64 {
            let s = EdgeSubset::from_mask(5, mask);
            assert_eq!(count_components_mask(&mut uf, g.edges(), mask), components(&g, &s).kappa);
        }
    }
}
