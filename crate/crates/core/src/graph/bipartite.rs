use super::{Graph, GraphError};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    U,
    W,
}

/// A graph together with a bipartition `V = U ∪ W` that every edge crosses.
///
/// Rows of the bipartite adjacency matrix are the `U` vertices in increasing
/// id order, columns the `W` vertices in increasing id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    graph: Graph,
    side: Vec<Side>,
    side_index: Vec<usize>,
    u: Vec<usize>,
    w: Vec<usize>,
    entries: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    /// Bipartition with the given `U` side; every other vertex goes to `W`.
    pub fn new(graph: Graph, u_side: &[usize]) -> Result<Self, GraphError> {
        let mut side = vec![Side::W; graph.n()];
        for &v in u_side {
            if v >= graph.n() {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: graph.n() });
            }
            if side[v] == Side::U {
                return Err(GraphError::InvalidBipartition(format!("vertex {v} listed twice in U")));
            }
            side[v] = Side::U;
        }
        Self::from_side_vec(graph, side)
    }

    /// Bipartition from explicit `U` and `W` lists, which must partition `0..n`.
    pub fn from_sides(graph: Graph, u_side: &[usize], w_side: &[usize]) -> Result<Self, GraphError> {
        let n = graph.n();
        let mut seen = vec![false; n];
        for &v in u_side.iter().chain(w_side) {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if seen[v] {
                return Err(GraphError::InvalidBipartition(format!("vertex {v} appears more than once")));
            }
            seen[v] = true;
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(GraphError::InvalidBipartition(format!("vertex {v} is in neither side")));
        }
        Self::new(graph, u_side)
    }

    pub fn from_side_vec(graph: Graph, side: Vec<Side>) -> Result<Self, GraphError> {
        if side.len() != graph.n() {
            return Err(GraphError::InvalidBipartition(format!(
                "{} side labels for {} vertices",
                side.len(),
                graph.n()
            )));
        }
        for &(a, b) in graph.edges() {
            if side[a] == side[b] {
                return Err(GraphError::InvalidBipartition(format!("edge {{{a}, {b}}} lies inside one side")));
            }
        }
        let mut side_index = vec![0; graph.n()];
        let (mut u, mut w) = (Vec::new(), Vec::new());
        for (v, s) in side.iter().enumerate() {
            match s {
                Side::U => {
                    side_index[v] = u.len();
                    u.push(v);
                }
                Side::W => {
                    side_index[v] = w.len();
                    w.push(v);
                }
            }
        }
        let entries = graph
            .edges()
            .iter()
            .map(|&(a, b)| {
                if side[a] == Side::U {
                    (side_index[a], side_index[b])
                } else {
                    (side_index[b], side_index[a])
                }
            })
            .collect();
        Ok(Self {
            graph,
            side,
            side_index,
            u,
            w,
            entries,
        })
    }

    /// Two-colours the graph by BFS; in each component the smallest vertex goes
    /// to `U`.
    pub fn two_color(graph: Graph) -> Result<Self, GraphError> {
        let adj = graph.neighbors();
        let mut color: Vec<Option<Side>> = vec![None; graph.n()];
        for start in 0..graph.n() {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(Side::U);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let cv = color[v].unwrap();
                let other = if cv == Side::U { Side::W } else { Side::U };
                for &x in &adj[v] {
                    match color[x] {
                        None => {
                            color[x] = Some(other);
                            queue.push_back(x);
                        }
                        Some(c) if c == cv => return Err(GraphError::NotBipartite(x)),
                        Some(_) => {}
                    }
                }
            }
        }
        let side = color.into_iter().map(|c| c.unwrap()).collect();
        Self::from_side_vec(graph, side)
    }

    /// `K_{a,b}` with `U = 0..a` and `W = a..a+b`; edges in row-major order.
    pub fn complete(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j)));
        let g = Graph::new(a + b, edges).expect("complete bipartite graph is simple");
        Self::new(g, &(0..a).collect::<Vec<_>>()).expect("valid bipartition")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn side(&self, v: usize) -> Side {
        self.side[v]
    }

    pub fn sides(&self) -> &[Side] {
        &self.side
    }

    /// Position of `v` among the vertices of its own side.
    pub fn side_index(&self, v: usize) -> usize {
        self.side_index[v]
    }

    pub fn u_vertices(&self) -> &[usize] {
        &self.u
    }

    pub fn w_vertices(&self) -> &[usize] {
        &self.w
    }

    pub fn u_count(&self) -> usize {
        self.u.len()
    }

    pub fn w_count(&self) -> usize {
        self.w.len()
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.graph.m()
    }

    /// `(row, column)` of edge `e` in the bipartite adjacency matrix.
    #[inline]
    pub fn entry(&self, e: usize) -> (usize, usize) {
        self.entries[e]
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    /// Largest degree of a `W` vertex (0 when `W` is empty).
    pub fn max_w_degree(&self) -> usize {
        let deg = self.graph.degrees();
        self.w.iter().map(|&v| deg[v]).max().unwrap_or(0)
    }

    /// The first `W` vertex whose degree exceeds `bound`, with its degree.
    pub fn w_degree_violation(&self, bound: usize) -> Option<(usize, usize)> {
        let deg = self.graph.degrees();
        self.w.iter().find(|&&v| deg[v] > bound).map(|&v| (v, deg[v]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_coloring() {
        let b = BipartiteGraph::two_color(Graph::cycle(6)).unwrap();
        assert_eq!(b.u_vertices(), &[0, 2, 4]);
        assert_eq!(b.w_vertices(), &[1, 3, 5]);
        assert!(matches!(
            BipartiteGraph::two_color(Graph::cycle(5)),
            Err(GraphError::NotBipartite(_))
        ));
    }

    #[test]
    fn explicit_sides_must_partition() {
        let g = Graph::path(3);
        assert!(BipartiteGraph::from_sides(g.clone(), &[0, 2], &[1]).is_ok());
        assert!(BipartiteGraph::from_sides(g.clone(), &[0], &[1]).is_err());
        assert!(BipartiteGraph::from_sides(g.clone(), &[0, 1], &[2]).is_err());
        assert!(BipartiteGraph::from_sides(g, &[0, 2], &[1, 2]).is_err());
    }

    #[test]
    fn entries_map_edges_to_matrix_cells() {
        let b = BipartiteGraph::complete(2, 3);
        assert_eq!(b.entry(4), (1, 1));
        assert_eq!(b.max_w_degree(), 2);
    }
}
