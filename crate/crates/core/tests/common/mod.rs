//! Brute-force oracles and graph corpora shared by the integration tests.
//! Nothing here calls into the library's evaluators.

#![allow(dead_code)]

use num::{BigInt, BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankpoly::graph::{BipartiteGraph, Graph, Side};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rank over GF(2) of a matrix given as row bitmasks.
pub fn gf2_rank(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for bit in 0..64 {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && *r >> bit & 1 == 1 {
                *r ^= p;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the `U × W` adjacency matrix of the edges in `mask`.
pub fn biadjacency_rank(g: &BipartiteGraph, mask: u64) -> usize {
    let mut rows = vec![0u64; g.n()];
    for (e, &(a, b)) in g.graph().edges().iter().enumerate() {
        if mask >> e & 1 == 1 {
            let (u, w) = if g.side(a) == Side::U { (a, b) } else { (b, a) };
            rows[u] ^= 1 << w;
        }
    }
    gf2_rank(rows)
}

/// Connected components of `(V, mask)`, isolated vertices included.
pub fn components(g: &Graph, mask: u64) -> usize {
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = g.n();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if mask >> e & 1 == 1 {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                count -= 1;
            }
        }
    }
    count
}

pub fn independent_sets(g: &Graph) -> u64 {
    let n = g.n();
    (0u64..1 << n)
        .filter(|s| g.edges().iter().all(|&(a, b)| s >> a & 1 == 0 || s >> b & 1 == 0))
        .count() as u64
}

/// `Σ_σ (1+η)^{#edges with both ends 1} (1−η)^{#other edges}`.
pub fn pbis_labellings(g: &Graph, eta: &BigRational) -> BigRational {
    let one = BigRational::one();
    let (up, down) = (&one + eta, &one - eta);
    let m = g.m();
    let mut by_count = vec![0u64; m + 1];
    for s in 0u64..1 << g.n() {
        let bad = g.edges().iter().filter(|&&(a, b)| s >> a & 1 == 1 && s >> b & 1 == 1).count();
        by_count[bad] += 1;
    }
    let mut total = BigRational::zero();
    for (bad, &c) in by_count.iter().enumerate() {
        if c > 0 {
            total += num::pow(up.clone(), bad) * num::pow(down.clone(), m - bad) * BigRational::from_integer(c.into());
        }
    }
    total
}

/// Maximum matching of a forest by repeatedly matching a leaf to its parent.
pub fn forest_matching(g: &Graph) -> usize {
    let n = g.n();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in g.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut removed = vec![false; n];
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut leaves: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    let mut size = 0;
    while let Some(v) = leaves.pop() {
        if removed[v] || deg[v] != 1 {
            continue;
        }
        let u = *adj[v].iter().find(|&&x| !removed[x]).expect("a leaf has a live neighbour");
        size += 1;
        for x in [v, u] {
            removed[x] = true;
            for &y in &adj[x] {
                if !removed[y] {
                    deg[y] -= 1;
                    if deg[y] == 1 {
                        leaves.push(y);
                    }
                }
            }
        }
    }
    size
}

pub fn bip(g: Graph) -> BipartiteGraph {
    BipartiteGraph::two_color(g).expect("bipartite")
}

/// Random bipartite graph on `a + b` vertices (`U = 0..a`) with `m` distinct edges.
pub fn random_bipartite(r: &mut ChaCha8Rng, a: usize, b: usize, m: usize) -> BipartiteGraph {
    let mut all: Vec<(usize, usize)> = (0..a).flat_map(|u| (0..b).map(move |w| (u, a + w))).collect();
    for i in 0..m {
        let j = r.gen_range(i..all.len());
        all.swap(i, j);
    }
    all.truncate(m);
    let g = Graph::new(a + b, all).expect("simple graph");
    BipartiteGraph::new(g, &(0..a).collect::<Vec<_>>()).expect("valid sides")
}

pub fn random_tree(r: &mut ChaCha8Rng, n: usize) -> Graph {
    // mix of bushy and path-like shapes
    let reach = r.gen_range(1..=n.max(1));
    let parents: Vec<usize> = (0..n.saturating_sub(1)).map(|i| r.gen_range(i.saturating_sub(reach - 1)..=i)).collect();
    Graph::from_parents(&parents)
}

/// Named bipartite corpus: paths, even cycles, stars, `K_{a,b}` with
/// `ab ≤ 12`, and random graphs with at most 12 edges.
pub fn bipartite_corpus(random: usize, seed: u64) -> Vec<(String, BipartiteGraph)> {
    let mut out = Vec::new();
    for n in 1..=13 {
        out.push((format!("P{n}"), bip(Graph::path(n))));
    }
    for n in (4..=12).step_by(2) {
        out.push((format!("C{n}"), bip(Graph::cycle(n))));
    }
    for l in 1..=12 {
        out.push((format!("S{l}"), bip(Graph::star(l))));
    }
    for a in 1..=12 {
        for b in a..=12 {
            if a * b <= 12 {
                out.push((format!("K{a},{b}"), BipartiteGraph::complete(a, b)));
            }
        }
    }
    let mut r = rng(seed);
    for i in 0..random {
        let a = r.gen_range(1..=6);
        let b = r.gen_range(1..=6);
        let m = r.gen_range(0..=(a * b).min(12));
        out.push((format!("R{i}"), random_bipartite(&mut r, a, b, m)));
    }
    out
}

pub fn two_pow(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(num::pow(BigInt::from(2), e as usize))
    } else {
        BigRational::from_integer(num::pow(BigInt::from(2), (-e) as usize)).recip()
    }
}
