//! Independent-set style counts and matchings, each with a direct oracle.

use super::{bipartite_rank_table, rank_table, rat, EnumOptions, ExactError};
use crate::arith::{as_integer, format_rational, pow2, powers};
use crate::graph::{BipartiteGraph, Graph, Side};
use num::{BigInt, BigRational, One, Zero};
use std::collections::BTreeMap;

/// Vertex cap for [`count_bis_oracle`].
pub const BIS_ORACLE_MAX_VERTICES: usize = 30;
/// Vertex cap for [`count_pbis_oracle`].
pub const PBIS_ORACLE_MAX_VERTICES: usize = 24;

fn integer(r: BigRational) -> Result<BigInt, ExactError> {
    as_integer(&r).ok_or_else(|| ExactError::NonInteger(format_rational(&r)))
}

/// Number of independent sets as `2^{|U|+|W|−|E|} R'_2(G; 1/2, 1)`.
pub fn count_bis(g: &BipartiteGraph, opts: EnumOptions) -> Result<BigInt, ExactError> {
    let table = bipartite_rank_table(g, opts)?;
    let r = table.evaluate(&rat(1, 2), &BigRational::one());
    integer(pow2(g.n() as i64 - g.m() as i64) * r)
}

fn neighbour_masks(g: &Graph) -> Vec<u64> {
    let mut nb = vec![0u64; g.n()];
    for &(a, b) in g.edges() {
        nb[a] |= 1 << b;
        nb[b] |= 1 << a;
    }
    nb
}

/// Number of independent sets by direct enumeration of all vertex subsets.
pub fn count_bis_oracle(g: &Graph) -> Result<u64, ExactError> {
    let n = g.n();
    if n > BIS_ORACLE_MAX_VERTICES {
        return Err(ExactError::TooManyVertices {
            what: "independent-set enumeration",
            n,
            limit: BIS_ORACLE_MAX_VERTICES,
        });
    }
    let nb = neighbour_masks(g);
    let mut count = 0u64;
    for set in 0u64..1 << n {
        let mut rest = set;
        let mut ok = true;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if nb[v] & set != 0 {
                ok = false;
                break;
            }
        }
        count += u64::from(ok);
    }
    Ok(count)
}

/// `#PBIS(G; η) = 2^{|V|} R'_2(G; 1/2, −η)`.
pub fn count_pbis(g: &BipartiteGraph, eta: &BigRational, opts: EnumOptions) -> Result<BigRational, ExactError> {
    let table = bipartite_rank_table(g, opts)?;
    Ok(pow2(g.n() as i64) * table.evaluate(&rat(1, 2), &-eta))
}

/// `Σ_w c_w (1+η)^w (1−η)^{m−w}` for a labelling-weight polynomial `c`.
fn pbis_weight_sum(coeffs: &[BigInt], eta: &BigRational) -> BigRational {
    let m = coeffs.len().saturating_sub(1);
    let one = BigRational::one();
    let up = powers(&(&one + eta), m);
    let down = powers(&(&one - eta), m);
    let mut acc = BigRational::zero();
    for (w, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            acc += &up[w] * &down[m - w] * BigRational::from_integer(c.clone());
        }
    }
    acc
}

/// `#PBIS(G; η) = Σ_σ (1+η)^{w(σ)} (1−η)^{|E|−w(σ)}` over all `2^n` 0/1
/// labellings, where `w(σ)` counts edges with both endpoints labelled 1.
pub fn count_pbis_oracle(g: &Graph, eta: &BigRational) -> Result<BigRational, ExactError> {
    let n = g.n();
    if n > PBIS_ORACLE_MAX_VERTICES {
        return Err(ExactError::TooManyVertices {
            what: "labelling enumeration",
            n,
            limit: PBIS_ORACLE_MAX_VERTICES,
        });
    }
    let mut by_weight = vec![0u64; g.m() + 1];
    for sigma in 0u64..1 << n {
        let w = g
            .edges()
            .iter()
            .filter(|&&(a, b)| sigma >> a & 1 == 1 && sigma >> b & 1 == 1)
            .count();
        by_weight[w] += 1;
    }
    let coeffs: Vec<BigInt> = by_weight.into_iter().map(BigInt::from).collect();
    Ok(pbis_weight_sum(&coeffs, eta))
}

fn binomials(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// Exact `#PBIS(G; η)` that collapses twin vertices.
///
/// Vertices with identical neighbourhoods (and the same side) are
/// interchangeable, so only the number of 1-labels per twin class matters.
/// One side's class counts are enumerated; every class on the other side then
/// contributes an independent factor `(1 + z^d)^{size}`, where `d` is the
/// number of 1-labelled neighbours. The result is the same sum as
/// [`count_pbis_oracle`] but scales with the number of twin classes instead
/// of `n`, which is what makes the cloud graphs of the BIS reduction
/// tractable.
pub fn count_pbis_twins(g: &BipartiteGraph, eta: &BigRational) -> BigRational {
    let adj = g.graph().neighbors();
    let vertex_key: Vec<(bool, Vec<usize>)> = (0..g.n())
        .map(|v| {
            let mut nb = adj[v].clone();
            nb.sort_unstable();
            (g.side(v) == Side::W, nb)
        })
        .collect();
    let mut classes: BTreeMap<&(bool, Vec<usize>), usize> = BTreeMap::new();
    for key in &vertex_key {
        *classes.entry(key).or_default() += 1;
    }
    let keys: Vec<&(bool, Vec<usize>)> = classes.keys().copied().collect();
    let sizes: Vec<usize> = classes.values().copied().collect();
    let class_of: Vec<usize> = vertex_key
        .iter()
        .map(|k| keys.binary_search(&k).expect("every key is a class"))
        .collect();
    let u_classes: Vec<usize> = (0..keys.len()).filter(|&c| !keys[c].0).collect();
    let w_classes: Vec<usize> = (0..keys.len()).filter(|&c| keys[c].0).collect();
    let combos = |cs: &[usize]| cs.iter().map(|&c| (sizes[c] + 1) as f64).product::<f64>();
    let (outer, inner) = if combos(&u_classes) <= combos(&w_classes) {
        (u_classes, w_classes)
    } else {
        (w_classes, u_classes)
    };
    // class adjacency: inner class -> outer classes it touches (with multiplicity 1;
    // twins on the outer side are all adjacent or all not)
    let mut touches: Vec<Vec<usize>> = vec![Vec::new(); keys.len()];
    for &c in &inner {
        let rep_nb = &keys[c].1;
        let mut outs: Vec<usize> = rep_nb.iter().map(|&x| class_of[x]).collect();
        outs.sort_unstable();
        // each neighbour vertex counted once; group by class
        let mut grouped: Vec<usize> = Vec::new();
        for o in outs {
            if grouped.last() != Some(&o) {
                grouped.push(o);
            }
        }
        touches[c] = grouped;
    }
    let binom: Vec<Vec<BigInt>> = sizes.iter().map(|&s| binomials(s)).collect();
    let m = g.m();
    let mut total = vec![BigInt::zero(); m + 1];
    let mut counts = vec![0usize; keys.len()];
    loop {
        // multiplicity of this count vector on the outer side
        let mut mult = BigInt::one();
        for &c in &outer {
            mult *= &binom[c][counts[c]];
        }
        let mut poly = vec![BigInt::zero(); m + 1];
        poly[0] = mult;
        let mut deg = 0usize;
        for &c in &inner {
            let d: usize = touches[c].iter().map(|&o| counts[o]).sum();
            let s = sizes[c];
            // multiply by (1 + z^d)^s
            let mut next = vec![BigInt::zero(); m + 1];
            for (i, a) in poly.iter().enumerate().take(deg + 1) {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in binom[c].iter().enumerate() {
                    next[i + j * d] += a * b;
                }
            }
            poly = next;
            deg += s * d;
        }
        for (t, p) in total.iter_mut().zip(poly) {
            *t += p;
        }
        // odometer over the outer classes
        let mut advanced = false;
        for &c in &outer {
            if counts[c] < sizes[c] {
                counts[c] += 1;
                advanced = true;
                break;
            }
            counts[c] = 0;
        }
        if !advanced {
            break;
        }
    }
    pbis_weight_sum(&total, eta)
}

/// Matchings counted as subsets with `rk₂(A_S) = 2|S|`.
pub fn count_matchings(g: &Graph, opts: EnumOptions) -> Result<u64, ExactError> {
    let table = rank_table(g, opts)?;
    Ok((0..=g.m()).map(|s| table.get(2 * s, s)).sum())
}

/// Perfect matchings counted as subsets with `|S| = n/2` and `rk₂(A_S) = n`.
pub fn count_perfect_matchings(g: &Graph, opts: EnumOptions) -> Result<u64, ExactError> {
    if g.n() % 2 == 1 {
        return Ok(0);
    }
    let table = rank_table(g, opts)?;
    Ok(table.get(g.n(), g.n() / 2))
}

fn matching_subsets(g: &Graph, opts: EnumOptions) -> Result<Vec<u32>, ExactError> {
    opts.check(g.m())?;
    let mut sizes = Vec::new();
    for s in 0u64..1 << g.m() {
        let mut used = vec![false; g.n()];
        let mut ok = true;
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            if s >> e & 1 == 1 {
                if used[a] || used[b] {
                    ok = false;
                    break;
                }
                used[a] = true;
                used[b] = true;
            }
        }
        if ok {
            sizes.push(s.count_ones());
        }
    }
    Ok(sizes)
}

/// Matchings by direct vertex-disjointness check over all subsets.
pub fn count_matchings_oracle(g: &Graph, opts: EnumOptions) -> Result<u64, ExactError> {
    Ok(matching_subsets(g, opts)?.len() as u64)
}

pub fn count_perfect_matchings_oracle(g: &Graph, opts: EnumOptions) -> Result<u64, ExactError> {
    let half = g.n() / 2;
    if g.n() % 2 == 1 {
        return Ok(0);
    }
    Ok(matching_subsets(g, opts)?.into_iter().filter(|&s| s as usize == half).count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::graph::cloud_blowup;

    fn bip(g: Graph) -> BipartiteGraph {
        BipartiteGraph::two_color(g).unwrap()
    }

    #[test]
    fn bis_small() {
        let o = EnumOptions::default();
        for (g, expect) in [(Graph::path(2), 3u64), (Graph::path(3), 5), (Graph::cycle(4), 7)] {
            assert_eq!(count_bis(&bip(g.clone()), o).unwrap(), BigInt::from(expect));
            assert_eq!(count_bis_oracle(&g).unwrap(), expect);
        }
    }

    #[test]
    fn pbis_small() {
        let o = EnumOptions::default();
        let k2 = bip(Graph::path(2));
        assert_eq!(count_pbis(&k2, &int(-1), o).unwrap(), int(6));
        assert_eq!(count_pbis_oracle(k2.graph(), &int(-1)).unwrap(), int(6));
        let g = bip(Graph::grid(2, 3));
        for eta in [int(0), int(1), rat(-1, 2), int(2)] {
            let a = count_pbis(&g, &eta, o).unwrap();
            assert_eq!(a, count_pbis_oracle(g.graph(), &eta).unwrap());
            assert_eq!(a, count_pbis_twins(&g, &eta));
        }
        assert_eq!(count_pbis(&g, &int(0), o).unwrap(), int(64));
        assert_eq!(count_pbis(&g, &int(1), o).unwrap(), pow2(7));
    }

    #[test]
    fn twin_collapse_on_clouds() {
        let g = cloud_blowup(&Graph::path(2), 3, 1).unwrap();
        for eta in [rat(1, 2), int(3), rat(-2, 5)] {
            assert_eq!(count_pbis_twins(&g, &eta), count_pbis_oracle(g.graph(), &eta).unwrap());
        }
        let star = BipartiteGraph::complete(1, 4);
        let with_iso = BipartiteGraph::two_color(Graph::new(7, [(0, 1), (0, 2), (3, 4)]).unwrap()).unwrap();
        for g in [star, with_iso] {
            assert_eq!(count_pbis_twins(&g, &int(3)), count_pbis_oracle(g.graph(), &int(3)).unwrap());
        }
    }

    #[test]
    fn matchings() {
        let o = EnumOptions::default();
        let cases = [
            (Graph::complete(3), 4, 0),
            (Graph::cycle(4), 7, 2),
            (Graph::empty(3), 1, 0),
            (Graph::empty(0), 1, 1),
            (Graph::complete(4), 10, 3),
        ];
        for (g, all, perfect) in cases {
            assert_eq!(count_matchings(&g, o).unwrap(), all);
            assert_eq!(count_matchings_oracle(&g, o).unwrap(), all);
            assert_eq!(count_perfect_matchings(&g, o).unwrap(), perfect);
            assert_eq!(count_perfect_matchings_oracle(&g, o).unwrap(), perfect);
        }
    }
}
