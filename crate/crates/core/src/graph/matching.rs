use super::{BipartiteGraph, EdgeSubset, Graph, GraphError};
use std::collections::VecDeque;

/// Non-bipartite subgraphs are matched by exhaustive search up to this many edges.
pub const MAX_EXHAUSTIVE_MATCHING_EDGES: usize = 24;

/// Size of a maximum matching of `(V, S)`.
///
/// Bipartite subgraphs use Hopcroft–Karp on a 2-colouring of `(V, S)`; other
/// subgraphs fall back to exhaustive search and are rejected above
/// [`MAX_EXHAUSTIVE_MATCHING_EDGES`] edges.
pub fn max_matching(g: &Graph, s: &EdgeSubset) -> Result<usize, GraphError> {
    let sub = g.edge_subgraph(s);
    match BipartiteGraph::two_color(sub.clone()) {
        Ok(b) => Ok(max_matching_bipartite(&b, &b.graph().full_subset())),
        Err(_) => {
            if sub.m() > MAX_EXHAUSTIVE_MATCHING_EDGES {
                return Err(GraphError::MatchingTooLarge {
                    edges: sub.m(),
                    limit: MAX_EXHAUSTIVE_MATCHING_EDGES,
                });
            }
            let mut used = vec![false; g.n()];
            Ok(exhaustive(sub.edges(), &mut used))
        }
    }
}

fn exhaustive(edges: &[(usize, usize)], used: &mut [bool]) -> usize {
    let Some(pos) = edges.iter().position(|&(a, b)| !used[a] && !used[b]) else {
        return 0;
    };
    let (a, b) = edges[pos];
    let rest = &edges[pos + 1..];
    let skip = exhaustive(rest, used);
    used[a] = true;
    used[b] = true;
    let take = 1 + exhaustive(rest, used);
    used[a] = false;
    used[b] = false;
    skip.max(take)
}

/// Hopcroft–Karp maximum matching of `(U ∪ W, S)`.
pub fn max_matching_bipartite(g: &BipartiteGraph, s: &EdgeSubset) -> usize {
    let nl = g.u_count();
    let nr = g.w_count();
    let mut adj = vec![Vec::new(); nl];
    for e in s.iter() {
        let (r, c) = g.entry(e);
        adj[r].push(c);
    }
    hopcroft_karp(nl, nr, &adj)
}

const NIL: usize = usize::MAX;

fn hopcroft_karp(nl: usize, nr: usize, adj: &[Vec<usize>]) -> usize {
    let mut match_l = vec![NIL; nl];
    let mut match_r = vec![NIL; nr];
    let mut dist = vec![0usize; nl];
    let mut matched = 0;
    loop {
        // layered BFS from free left vertices
        let mut queue = VecDeque::new();
        for l in 0..nl {
            if match_l[l] == NIL {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = match_r[r];
                if next == NIL {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }
        for l in 0..nl {
            if match_l[l] == NIL && augment(l, adj, &mut match_l, &mut match_r, &mut dist) {
                matched += 1;
            }
        }
    }
    matched
}

fn augment(l: usize, adj: &[Vec<usize>], match_l: &mut [usize], match_r: &mut [usize], dist: &mut [usize]) -> bool {
    for &r in &adj[l] {
        let next = match_r[r];
        if next == NIL || (dist[next] == dist[l] + 1 && augment(next, adj, match_l, match_r, dist)) {
            match_l[l] = r;
            match_r[r] = l;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}
