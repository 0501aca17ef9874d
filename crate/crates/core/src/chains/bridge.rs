//! Moving between RWS(1/2, 1) samples and independent sets of a bipartite graph.

use crate::f2::{bipartite_adjacency, BitVec, RankProfile};
use crate::graph::{BipartiteGraph, EdgeSubset};
use num::{BigInt, BigRational};
use rand::Rng;

/// Number of `W` vertices with no neighbour in the `U`-vector `u`; the
/// vector `u` extends to `2^k` independent sets.
fn free_columns(g: &BipartiteGraph, u: &BitVec) -> usize {
    let mut blocked = vec![false; g.w_count()];
    for &(r, c) in g.entries() {
        if u.get(r) {
            blocked[c] = true;
        }
    }
    blocked.iter().filter(|&&b| !b).count()
}

/// Turns an RWS(1/2, 1) sample `s` into an independent set `(u, v)`: `u` is
/// uniform on the left null space of the bipartite adjacency matrix of `s`,
/// and `v` is uniform among the `W` vertices with no neighbour in `u`. Both
/// vectors are indexed by side position.
pub fn bis_sample_bridge<R: Rng + ?Sized>(g: &BipartiteGraph, s: &EdgeSubset, rng: &mut R) -> (BitVec, BitVec) {
    let u = RankProfile::new(bipartite_adjacency(g, s)).sample_left_nullspace(rng);
    let mut blocked = vec![false; g.w_count()];
    for &(r, c) in g.entries() {
        if u.get(r) {
            blocked[c] = true;
        }
    }
    let v = BitVec::from_bools(&blocked.iter().map(|&b| !b && rng.gen::<bool>()).collect::<Vec<_>>());
    (u, v)
}

/// The reverse direction: given an independent set's `U`-part `u`, draws a
/// uniform subset `B ≤ A` with `uᵀB = 0`, which is an RWS(1/2, 1) sample when
/// `u` comes from a uniform independent set.
pub fn rws_sample_from_bis<R: Rng + ?Sized>(g: &BipartiteGraph, u: &BitVec, rng: &mut R) -> EdgeSubset {
    let m = g.m();
    let mut s = EdgeSubset::empty(m);
    // per column: uniform subset of its edges, then fix the parity toward u with one designated edge
    let mut parity = vec![false; g.w_count()];
    let mut designated = vec![usize::MAX; g.w_count()];
    for (e, &(r, c)) in g.entries().iter().enumerate() {
        if rng.gen::<bool>() {
            s.insert(e);
            if u.get(r) {
                parity[c] ^= true;
            }
        }
        if u.get(r) && designated[c] == usize::MAX {
            designated[c] = e;
        }
    }
    for c in 0..g.w_count() {
        if parity[c] {
            s.toggle(designated[c]);
        }
    }
    s
}

/// Exact marginal distribution of `u` over all `2^{|U|}` vectors (indexed by
/// bitmask): `P(u) = 2^k / #BIS(G)`.
///
/// # Panics
/// Panics if `|U| > 24`.
pub fn bis_u_marginal(g: &BipartiteGraph) -> Vec<BigRational> {
    let nu = g.u_count();
    assert!(nu <= 24, "exact u-marginal is limited to 24 U vertices");
    let weights: Vec<BigInt> = (0u64..1 << nu)
        .map(|mask| BigInt::from(1u8) << free_columns(g, &BitVec::from_mask(nu, mask)))
        .collect();
    let total: BigInt = weights.iter().sum();
    weights.into_iter().map(|w| BigRational::new(w, total.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::chain_rng;
    use crate::f2::F2Matrix;
    use crate::graph::Graph;

    #[test]
    fn empty_sample_gives_uniform_u() {
        let g = BipartiteGraph::two_color(Graph::path(3)).unwrap();
        let mut rng = chain_rng(5, 0);
        let mut hits = [0u32; 4];
        for _ in 0..4000 {
            let (u, v) = bis_sample_bridge(&g, &EdgeSubset::empty(2), &mut rng);
            hits[u.to_mask().unwrap() as usize] += 1;
            if u.count_ones() > 0 {
                assert!(v.is_zero());
            }
        }
        assert!(hits.iter().all(|&h| (850..1150).contains(&h)), "{hits:?}");
    }

    #[test]
    fn k2_marginal() {
        let g = BipartiteGraph::two_color(Graph::path(2)).unwrap();
        let p = bis_u_marginal(&g);
        assert_eq!(p, vec![BigRational::new(2.into(), 3.into()), BigRational::new(1.into(), 3.into())]);
    }

    #[test]
    fn reverse_direction_respects_parity() {
        let g = BipartiteGraph::complete(3, 3);
        let mut rng = chain_rng(3, 0);
        let u = BitVec::from_mask(3, 0b101);
        for _ in 0..200 {
            let s = rws_sample_from_bis(&g, &u, &mut rng);
            let b: F2Matrix = bipartite_adjacency(&g, &s);
            assert!(b.left_mul(&u).is_zero());
        }
    }
}
