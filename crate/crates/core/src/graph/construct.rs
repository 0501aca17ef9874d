use super::{BipartiteGraph, Graph, GraphError, Side};
use crate::arith::is_prime;

/// A bipartite gadget with a distinguished root on its `U` side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub graph: BipartiteGraph,
    pub root: usize,
}

/// Replaces every edge of `h` by a path of length 2.
///
/// Layout: vertices `0..n` are the original vertices (side `U`), vertex
/// `n + i` is the midpoint of edge `i` (side `W`). Edge `i = {a, b}` becomes
/// edges `2i = {a, n+i}` and `2i+1 = {n+i, b}`.
pub fn two_stretch(h: &Graph) -> BipartiteGraph {
    let (n, m) = (h.n(), h.m());
    let mut edges = Vec::with_capacity(2 * m);
    for (i, &(a, b)) in h.edges().iter().enumerate() {
        edges.push((a, n + i));
        edges.push((n + i, b));
    }
    let mut labels: Vec<String> = (0..n).map(|v| h.label(v)).collect();
    labels.extend(h.edges().iter().map(|&(a, b)| format!("mid({},{})", h.label(a), h.label(b))));
    let g = Graph::new(n + m, edges)
        .and_then(|g| g.with_labels(labels))
        .expect("2-stretch of a simple graph is simple");
    let side = (0..n + m).map(|v| if v < n { Side::U } else { Side::W }).collect();
    BipartiteGraph::from_side_vec(g, side).expect("2-stretch is bipartite")
}

/// Stretch-sum of `h` and `(upsilon, root)`: the 2-stretch of `h` with a fresh
/// copy of `upsilon` glued onto every original vertex `v` by identifying `v`
/// with the copy's `root`.
///
/// Layout: the 2-stretch comes first (see [`two_stretch`]). Then, for each
/// `v` in increasing order, the non-root vertices of the copy get fresh ids in
/// `upsilon`'s vertex order, and the copy's edges follow in `upsilon`'s edge
/// order. Hence `|E| = 2|E_h| + |V_h| |E_upsilon|`.
pub fn stretch_sum(h: &Graph, upsilon: &BipartiteGraph, root: usize) -> Result<BipartiteGraph, GraphError> {
    if root >= upsilon.n() {
        return Err(GraphError::VertexOutOfRange {
            vertex: root,
            n: upsilon.n(),
        });
    }
    if upsilon.side(root) != Side::U {
        return Err(GraphError::NotOnUSide(root));
    }
    let base = two_stretch(h);
    let mut labels: Vec<String> = (0..base.n()).map(|v| base.graph().label(v)).collect();
    let mut side: Vec<Side> = base.sides().to_vec();
    let mut edges: Vec<(usize, usize)> = base.graph().edges().to_vec();
    for v in 0..h.n() {
        let mut map = vec![0usize; upsilon.n()];
        for x in 0..upsilon.n() {
            if x == root {
                map[x] = v;
            } else {
                map[x] = side.len();
                side.push(upsilon.side(x));
                labels.push(format!("{}/{}", h.label(v), upsilon.graph().label(x)));
            }
        }
        edges.extend(upsilon.graph().edges().iter().map(|&(a, b)| (map[a], map[b])));
    }
    let g = Graph::new(side.len(), edges)?.with_labels(labels)?;
    BipartiteGraph::from_side_vec(g, side)
}

fn named(n: usize, edges: Vec<(usize, usize)>, labels: Vec<String>, u_count: usize) -> BipartiteGraph {
    let g = Graph::new(n, edges)
        .and_then(|g| g.with_labels(labels))
        .expect("gadget is simple");
    BipartiteGraph::new(g, &(0..u_count).collect::<Vec<_>>()).expect("gadget is bipartite")
}

/// Gadget with `U = {u0, u1}`, `W = {v0..vk}`, edge `{u0, v0}` and an edge
/// from `u1` to every `vi`. Ids: `u0 = 0`, `u1 = 1`, `vi = 2 + i`. Root `u0`.
pub fn gadget_upsilon1(k: usize) -> Gadget {
    let n = k + 3;
    let mut edges = vec![(0, 2)];
    edges.extend((0..=k).map(|i| (1, 2 + i)));
    let mut labels = vec!["u0".to_string(), "u1".to_string()];
    labels.extend((0..=k).map(|i| format!("v{i}")));
    Gadget {
        graph: named(n, edges, labels, 2),
        root: 0,
    }
}

/// Gadget with `U = {u0, u1, u2}`, `W = {v0..v2k}`, edges `{u0, v0}`,
/// `{u1, v0}` and the complete bipartite graph between `{u1, u2}` and
/// `{v1..v2k}` (`4k + 2` edges). Ids: `ui = i`, `vi = 3 + i`. Root `u0`.
pub fn gadget_upsilon2(k: usize) -> Result<Gadget, GraphError> {
    if k == 0 {
        return Err(GraphError::InvalidGadgetParameter(k));
    }
    let n = 3 + 2 * k + 1;
    let mut edges = vec![(0, 3), (1, 3)];
    for u in [1, 2] {
        edges.extend((1..=2 * k).map(|i| (u, 3 + i)));
    }
    let mut labels = vec!["u0".to_string(), "u1".to_string(), "u2".to_string()];
    labels.extend((0..=2 * k).map(|i| format!("v{i}")));
    Ok(Gadget {
        graph: named(n, edges, labels, 3),
        root: 0,
    })
}

/// Replaces each vertex by a cloud of `k p` vertices and each edge by a cloud
/// of `p - 1` vertices, joining the cloud of `v` completely to the cloud of
/// every edge incident to `v`.
///
/// Layout: the cloud of vertex `v` is `v kp .. (v+1) kp` (side `U`); the cloud
/// of edge `e` is `n kp + e (p-1) ..` (side `W`). Edges are emitted per
/// original edge `{a, b}`: first the join with `a`'s cloud, then with `b`'s,
/// each in row-major order.
pub fn cloud_blowup(g: &Graph, p: u64, k: usize) -> Result<BipartiteGraph, GraphError> {
    if p <= 2 || !is_prime(p) {
        return Err(GraphError::NotAnOddPrime(p));
    }
    if k == 0 {
        return Err(GraphError::InvalidGadgetParameter(k));
    }
    let vc = k * p as usize;
    let ec = p as usize - 1;
    let n = g.n() * vc + g.m() * ec;
    let mut edges = Vec::with_capacity(2 * g.m() * vc * ec);
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        let eb = g.n() * vc + e * ec;
        for v in [a, b] {
            for x in v * vc..(v + 1) * vc {
                edges.extend((eb..eb + ec).map(|y| (x, y)));
            }
        }
    }
    let mut labels: Vec<String> = (0..g.n())
        .flat_map(|v| (0..vc).map(move |i| (v, i)))
        .map(|(v, i)| format!("{}#{i}", g.label(v)))
        .collect();
    labels.extend((0..g.m()).flat_map(|e| (0..ec).map(move |i| format!("e{e}#{i}"))));
    let graph = Graph::new(n, edges)?.with_labels(labels)?;
    BipartiteGraph::new(graph, &(0..g.n() * vc).collect::<Vec<_>>())
}
