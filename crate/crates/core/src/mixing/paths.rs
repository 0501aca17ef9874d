//! Canonical paths, the path-encoding injection, and exact congestion.

use super::{ExactChain, MixingError};
use crate::chains::ChainParams;
use crate::graph::EdgeSubset;
use num::{BigInt, BigRational, BigUint, One, ToPrimitive, Zero};
use serde::Serialize;

/// Largest `m` for exact congestion.
pub const CONGESTION_MAX_EDGES: usize = 13;

/// `H₀ = I, …, H_k = F`, flipping the edges of `I ⊕ F` in ordering order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalPath {
    pub states: Vec<EdgeSubset>,
}

impl CanonicalPath {
    /// Number of transitions, `|I ⊕ F|`.
    pub fn len(&self) -> usize {
        self.states.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn canonical_path(i: &EdgeSubset, f: &EdgeSubset, perm: &[usize]) -> CanonicalPath {
    let diff = i.symmetric_difference(f);
    let mut states = vec![i.clone()];
    let mut cur = i.clone();
    for &e in perm {
        if diff.contains(e) {
            cur.toggle(e);
            states.push(cur.clone());
        }
    }
    CanonicalPath { states }
}

/// The pairs `(I, F)` whose canonical path uses the transition
/// `H → H ⊕ {perm[t]}`, as bitmasks. Positions `≥ t` of `I` agree with `H`,
/// positions `≤ t` of `F` agree with `H'`; the rest are free, giving
/// `2^{m−1}` pairs.
pub fn pairs_through(h: u64, t: usize, perm: &[usize], mut visit: impl FnMut(u64, u64)) {
    let e = perm[t];
    let h2 = h ^ (1 << e);
    // masks of edges by position
    let prefix: u64 = perm[..t].iter().fold(0, |a, &x| a | 1 << x);
    let suffix: u64 = perm[t + 1..].iter().fold(0, |a, &x| a | 1 << x);
    let i_fixed = h & !prefix;
    let f_fixed = h2 & !suffix;
    // enumerate submasks of prefix (I free part) and suffix (F free part)
    let mut p = prefix;
    loop {
        let i = i_fixed | p;
        let mut s = suffix;
        loop {
            visit(i, f_fixed | s);
            if s == 0 {
                break;
            }
            s = (s - 1) & suffix;
        }
        if p == 0 {
            break;
        }
        p = (p - 1) & prefix;
    }
}

/// Checks that `(I, F) ↦ I ⊕ F ⊕ Ĥ` is injective on the pairs of every
/// transition, where `Ĥ` is the lighter endpoint of the transition.
pub fn encoding_is_injective(space: &ExactChain, perm: &[usize]) -> Result<bool, MixingError> {
    let m = space.m();
    if m > CONGESTION_MAX_EDGES {
        return Err(MixingError::TooManyEdges {
            m,
            limit: CONGESTION_MAX_EDGES,
        });
    }
    let mut seen = vec![u32::MAX; 1 << m];
    let mut stamp = 0u32;
    for h in 0..1u64 << m {
        for t in 0..m {
            let h2 = h ^ (1 << perm[t]);
            let hat = if space.weight_le(h, h2) { h } else { h2 };
            let mut ok = true;
            pairs_through(h, t, perm, |i, f| {
                let j = (i ^ f ^ hat) as usize;
                if seen[j] == stamp {
                    ok = false;
                }
                seen[j] = stamp;
            });
            if !ok {
                return Ok(false);
            }
            stamp += 1;
        }
    }
    Ok(true)
}

/// Exact congestion of the canonical paths for an ordering.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Congestion {
    /// `ρ = max ρ_(H,H')`.
    #[serde(serialize_with = "crate::mixing::ser_rational")]
    pub rho: BigRational,
    /// The maximizing transition: state bitmask (hex) and flipped edge.
    pub argmax_state: String,
    pub argmax_edge: usize,
    pub ell: usize,
    /// `2|E|² w̄^ℓ` with `w̄ = max(w, 1/w)`.
    #[serde(serialize_with = "crate::mixing::ser_rational")]
    pub bound: BigRational,
}

impl Congestion {
    pub fn within_bound(&self) -> bool {
        self.rho <= self.bound
    }
}

/// `2|E|² w̄^ℓ` for the chain's weight `w` (`λ` or `q`).
pub fn congestion_bound(m: usize, params: &ChainParams, ell: usize) -> BigRational {
    let w = &params.weight;
    let bar = if w >= &BigRational::one() { w.clone() } else { w.recip() };
    BigRational::from_integer(BigInt::from(2 * m * m)) * num::pow(bar, ell)
}

trait Acc: Clone + Zero + One + std::ops::Add<Output = Self> + std::ops::Mul<Output = Self> {
    fn from_u64(v: u64) -> Self;
    fn to_big(&self) -> BigUint;
}

impl Acc for u128 {
    fn from_u64(v: u64) -> Self {
        v as u128
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Acc for BigUint {
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

/// `ρ_(H,H') = 2m Σ W(I)W(F)|I⊕F| / (Z · min(W(H), W(H')))` maximized over
/// all transitions, with integer weights `W ∝ π`.
pub fn congestion(space: &ExactChain, perm: &[usize], ell: usize) -> Result<Congestion, MixingError> {
    let m = space.m();
    if m > CONGESTION_MAX_EDGES {
        return Err(MixingError::TooManyEdges {
            m,
            limit: CONGESTION_MAX_EDGES,
        });
    }
    let weights = space.integer_weights();
    let max_w = weights.iter().max().cloned().unwrap_or_default();
    // Σ over 2^{m-1} pairs of W² · m must fit comfortably in 128 bits
    let budget = &max_w * &max_w * BigUint::from(m as u64 + 1) << m;
    let (num, den, h, e) = if budget.bits() < 127 {
        let w: Vec<u128> = weights.iter().map(|x| x.to_u128().expect("checked size")).collect();
        congestion_loads(&w, perm, m)
    } else {
        congestion_loads(&weights, perm, m)
    };
    let z: BigUint = weights.iter().sum();
    let rho = BigRational::new(
        BigInt::from(num) * BigInt::from(2 * m as u64),
        BigInt::from(den) * BigInt::from(z),
    );
    Ok(Congestion {
        rho,
        argmax_state: EdgeSubset::from_mask(m, h).to_hex(),
        argmax_edge: e,
        ell,
        bound: congestion_bound(m, space.params(), ell),
    })
}

/// Returns the maximizing `(Σ W(I)W(F)|I⊕F|, min(W(H),W(H')), H, e)`.
fn congestion_loads<T: Acc>(w: &[T], perm: &[usize], m: usize) -> (BigUint, BigUint, u64, usize) {
    let mut best: Option<(BigUint, BigUint, u64, usize)> = None;
    for h in 0..1u64 << m {
        for t in 0..m {
            let h2 = h ^ (1 << perm[t]);
            let mut load = T::zero();
            pairs_through(h, t, perm, |i, f| {
                let len = (i ^ f).count_ones() as u64;
                load = load.clone() + w[i as usize].clone() * w[f as usize].clone() * T::from_u64(len);
            });
            let lo = if w[h as usize].to_big() <= w[h2 as usize].to_big() { h } else { h2 };
            let (n, d) = (load.to_big(), w[lo as usize].to_big());
            let better = match &best {
                None => true,
                Some((bn, bd, _, _)) => &n * bd > bn * &d,
            };
            if better {
                best = Some((n, d, h, perm[t]));
            }
        }
    }
    best.expect("at least one transition")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::ChainParams;
    use crate::graph::{BipartiteGraph, Graph};
    use crate::mixing::{dfs_tree_ordering, natural_ordering, ExactChain};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn path_shapes() {
        let perm = [2, 0, 1];
        let i = EdgeSubset::from_mask(3, 0b011);
        assert_eq!(canonical_path(&i, &i, &perm).states.len(), 1);
        let p = canonical_path(&EdgeSubset::empty(3), &EdgeSubset::from_mask(3, 0b100), &perm);
        assert_eq!(p.states, vec![EdgeSubset::empty(3), EdgeSubset::from_mask(3, 0b100)]);
        let f = EdgeSubset::from_mask(3, 0b110);
        let p = canonical_path(&i, &f, &perm);
        assert_eq!(p.len(), 2);
        assert_eq!(p.states[1], EdgeSubset::from_mask(3, 0b111));
    }

    #[test]
    fn pairs_through_matches_paths() {
        let perm = [1, 3, 0, 2];
        let m = 4;
        for h in 0..16u64 {
            for t in 0..m {
                let h2 = h ^ (1 << perm[t]);
                let mut fast = Vec::new();
                pairs_through(h, t, &perm, |i, f| fast.push((i, f)));
                fast.sort_unstable();
                let mut slow = Vec::new();
                for i in 0..16u64 {
                    for f in 0..16u64 {
                        let p = canonical_path(&EdgeSubset::from_mask(m, i), &EdgeSubset::from_mask(m, f), &perm);
                        let uses = p.states.windows(2).any(|w| {
                            w[0].to_mask() == Some(h) && w[1].to_mask() == Some(h2)
                        });
                        if uses {
                            slow.push((i, f));
                        }
                    }
                }
                assert_eq!(fast, slow);
                assert_eq!(fast.len(), 1 << (m - 1));
            }
        }
    }

    #[test]
    fn k2_congestion() {
        let g = BipartiteGraph::two_color(Graph::path(2)).unwrap();
        let params = ChainParams::rws(q(1, 1), q(1, 1)).unwrap();
        let space = ExactChain::rws(&g, &params).unwrap();
        let c = congestion(&space, &[0], 0).unwrap();
        // uniform 2-state chain: load = π(∅)π({e})·1 = 1/4, P = 1/2, π(H) = 1/2 → ρ = 1
        assert_eq!(c.rho, q(1, 1));
        assert_eq!(c.bound, q(2, 1));
        assert!(encoding_is_injective(&space, &[0]).unwrap());
    }

    #[test]
    fn small_trees_within_bound() {
        let t = Graph::path(4);
        let g = BipartiteGraph::two_color(t.clone()).unwrap();
        let params = ChainParams::rws(q(1, 2), q(1, 1)).unwrap();
        let space = ExactChain::rws(&g, &params).unwrap();
        let o = dfs_tree_ordering(&t).unwrap();
        let c = congestion(&space, &o.perm, o.width).unwrap();
        assert!(c.within_bound());
        assert_eq!(c.bound, q(36, 1));
        let star = Graph::star(4);
        let params = ChainParams::rc(q(2, 1), q(1, 1)).unwrap();
        let space = ExactChain::rc(&star, &params).unwrap();
        let o = natural_ordering(&star);
        let c = congestion(&space, &o.perm, o.width).unwrap();
        assert!(c.within_bound(), "{c:?}");
        assert!(encoding_is_injective(&space, &o.perm).unwrap());
    }
}
