//! Built-in identity checks, grouped so that a failure points at one module.

use crate::arith::{format_rational, pow2};
use crate::chains::ChainParams;
use crate::exact::{
    count_bis, count_bis_oracle, count_pbis, count_pbis_oracle, count_pbis_twins, eval_r2, eval_r2_prime,
    eval_tutte, eval_z_rc, eval_zp_zm, rat, upsilon1_closed_form, upsilon2_closed_form, EnumOptions,
};
use crate::f2::{F2Matrix, RankProfile};
use crate::graph::{gadget_upsilon1, gadget_upsilon2, two_stretch, BipartiteGraph, Graph};
use crate::mixing::{dfs_tree_ordering, floor_log2, natural_ordering, optimal_linear_width, ExactChain};
use crate::reductions::{bis_via_pbis_oracle, crt_reconstruct, tutte_via_oracle, BisOptions, ModP, TutteOptions};
use num::{BigInt, BigRational, One};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelftestOptions {
    /// Only the sub-second groups.
    pub quick: bool,
    /// Break the incremental rank update so that `rank-consistency` fails.
    pub inject_rank_fault: bool,
    pub seed: u64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self {
            quick: false,
            inject_rank_fault: false,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupReport {
    pub group: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    /// Wall-clock time; left out of the serialized report so that it is
    /// reproducible.
    #[serde(skip)]
    pub millis: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub passed: bool,
    pub groups: Vec<GroupReport>,
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 10 {
            self.failures.push(what());
        }
    }
}

type GroupFn = fn(&SelftestOptions, &mut Tally);

/// Runs every group (or only the quick ones) and collects a report.
pub fn run(opts: &SelftestOptions) -> SelftestReport {
    let groups: [(&'static str, bool, GroupFn); 9] = [
        ("rank-consistency", true, rank_consistency),
        ("bis-identity", true, bis_identity),
        ("pbis-identity", true, pbis_identity),
        ("rank-polynomial-relations", true, rank_relations),
        ("gadget-closed-forms", true, gadget_forms),
        ("tutte-random-cluster", true, tutte_rc),
        ("detailed-balance", true, detailed_balance),
        ("linear-width", true, linear_width),
        ("reductions", false, reductions),
    ];
    let mut reports = Vec::new();
    for (name, quick, f) in groups {
        if opts.quick && !quick {
            continue;
        }
        let start = Instant::now();
        let mut t = Tally::default();
        f(opts, &mut t);
        reports.push(GroupReport {
            group: name,
            passed: t.failures.is_empty(),
            checks: t.checks,
            failures: t.failures,
            millis: start.elapsed().as_millis(),
        });
    }
    SelftestReport {
        passed: reports.iter().all(|r| r.passed),
        groups: reports,
    }
}

fn small_bipartite() -> Vec<BipartiteGraph> {
    let mut out: Vec<BipartiteGraph> = (1..=7)
        .map(|n| BipartiteGraph::two_color(Graph::path(n)).expect("paths are bipartite"))
        .collect();
    out.extend([4, 6, 8].map(|n| BipartiteGraph::two_color(Graph::cycle(n)).expect("even cycle")));
    out.extend([(1, 3), (2, 2), (2, 3), (3, 3)].map(|(a, b)| BipartiteGraph::complete(a, b)));
    out.push(BipartiteGraph::two_color(Graph::star(4)).expect("star"));
    out.push(BipartiteGraph::two_color(Graph::grid(2, 3)).expect("grid"));
    out
}

fn rank_consistency(opts: &SelftestOptions, t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let flips = if opts.quick { 2_000 } else { 20_000 };
    for (rows, cols) in [(7, 9), (12, 12), (70, 5)] {
        let mut prof = RankProfile::new(F2Matrix::random(rows, cols, &mut rng));
        if opts.inject_rank_fault {
            prof.inject_fault();
        }
        for step in 0..flips {
            let (i, j) = (rng.gen_range(0..rows), rng.gen_range(0..cols));
            let r = prof.flip(i, j);
            let direct = prof.source().rank();
            t.check(r == direct, || format!("{rows}x{cols} flip {step}: tracked rank {r}, direct {direct}"));
            if step % 97 == 0 {
                let res = prof.check();
                t.check(res.is_ok(), || format!("{rows}x{cols} flip {step}: {}", res.unwrap_err()));
            }
        }
    }
}

fn bis_identity(_: &SelftestOptions, t: &mut Tally) {
    for g in small_bipartite() {
        let via_rank = count_bis(&g, EnumOptions::default()).expect("small graph");
        let direct = BigInt::from(count_bis_oracle(g.graph()).expect("small graph"));
        t.check(via_rank == direct, || format!("n={} m={}: {via_rank} vs {direct}", g.n(), g.m()));
    }
}

fn pbis_identity(_: &SelftestOptions, t: &mut Tally) {
    for g in small_bipartite().into_iter().filter(|g| g.n() <= 10) {
        for eta in [rat(-1, 1), rat(-1, 2), rat(1, 2), rat(2, 1)] {
            let a = count_pbis(&g, &eta, EnumOptions::default()).expect("small graph");
            let b = count_pbis_oracle(g.graph(), &eta).expect("small graph");
            let c = count_pbis_twins(&g, &eta);
            t.check(a == b && b == c, || {
                format!(
                    "n={} η={}: {} / {} / {}",
                    g.n(),
                    format_rational(&eta),
                    format_rational(&a),
                    format_rational(&b),
                    format_rational(&c)
                )
            });
        }
    }
}

fn rank_relations(_: &SelftestOptions, t: &mut Tally) {
    let opts = EnumOptions::default();
    let (lambda, mu) = (rat(2, 3), rat(-3, 5));
    for g in small_bipartite().into_iter().filter(|g| g.m() <= 12) {
        let full = eval_r2(g.graph(), &lambda, &mu, opts).expect("small").value;
        let half = eval_r2_prime(&g, &(&lambda * &lambda), &mu, opts).expect("small").value;
        t.check(full == half, || format!("R2(λ,μ) ≠ R'2(λ²,μ) on n={} m={}", g.n(), g.m()));
        // #PBIS(G; 1) forces every non-isolated vertex to 1
        let v = eval_r2_prime(&g, &rat(1, 2), &rat(-1, 1), opts).expect("small").value;
        let isolated = g.graph().isolated_count() as i64;
        let expected = pow2(g.m() as i64 - g.n() as i64 + isolated);
        t.check(v == expected, || format!("R'2(1/2,−1) ≠ 2^(|E|−|V|+t) on n={} m={}", g.n(), g.m()));
    }
    for h in [Graph::path(3), Graph::cycle(3), Graph::complete(4)] {
        let s = two_stretch(&h);
        t.check(s.m() == 2 * h.m() && s.n() == h.n() + h.m(), || "2-stretch size".into());
    }
}

fn gadget_forms(_: &SelftestOptions, t: &mut Tally) {
    let opts = EnumOptions::default();
    for lambda in [rat(1, 3), rat(2, 5)] {
        for mu in [rat(1, 1), rat(3, 1), rat(-2, 1)] {
            for k in 0..=4 {
                let gad = gadget_upsilon1(k);
                let (zp, zm) = eval_zp_zm(&gad.graph, gad.root, &lambda, &mu, opts).expect("small gadget");
                let x = &lambda * zp;
                let y = &x + zm;
                t.check((x, y) == upsilon1_closed_form(k, &lambda, &mu), || {
                    format!("Υ₁ k={k} λ={} μ={}", format_rational(&lambda), format_rational(&mu))
                });
            }
        }
        let mu = rat(-2, 1);
        for k in 1..=2 {
            let gad = gadget_upsilon2(k).expect("k ≥ 1");
            let (zp, zm) = eval_zp_zm(&gad.graph, gad.root, &lambda, &mu, opts).expect("small gadget");
            let x = &lambda * zp;
            let y = &x + zm;
            t.check((x, y) == upsilon2_closed_form(k, &lambda), || {
                format!("Υ₂ k={k} λ={}", format_rational(&lambda))
            });
        }
    }
}

fn tutte_rc(_: &SelftestOptions, t: &mut Tally) {
    let opts = EnumOptions::default();
    let one = BigRational::one();
    for g in [Graph::path(2), Graph::path(4), Graph::cycle(4), Graph::complete(4), Graph::empty(3)] {
        for (x, y) in [(rat(3, 1), rat(2, 1)), (rat(-1, 2), rat(5, 3)), (rat(2, 1), rat(-2, 1))] {
            let direct = eval_tutte(&g, &x, &y, opts).expect("small");
            let q = (&x - &one) * (&y - &one);
            let z = eval_z_rc(&g, &q, &(&y - &one), opts).expect("small").value;
            let via_rc = crate::arith::pow_signed(&(&x - &one), -(g.component_count() as i64)).expect("x ≠ 1")
                * crate::arith::pow_signed(&(&y - &one), -(g.n() as i64)).expect("y ≠ 1")
                * z;
            t.check(direct == via_rc, || format!("n={} m={} at ({x}, {y})", g.n(), g.m()));
        }
    }
    let x = rat(7, 3);
    let k2 = eval_tutte(&Graph::path(2), &x, &rat(4, 1), opts).expect("tiny");
    t.check(k2 == x, || "T(K₂; x, y) ≠ x".into());
}

fn detailed_balance(_: &SelftestOptions, t: &mut Tally) {
    let rws = ChainParams::rws(rat(1, 2), rat(1, 1)).expect("positive");
    let rc = ChainParams::rc(rat(2, 1), rat(3, 2)).expect("positive");
    for g in small_bipartite().into_iter().filter(|g| (1..=8).contains(&g.m())) {
        let chain = ExactChain::rws(&g, &rws).expect("small");
        let res = chain.detailed_balance();
        t.check(res.is_ok(), || format!("RWS n={} m={}: {}", g.n(), g.m(), res.unwrap_err()));
        let chain = ExactChain::rc(g.graph(), &rc).expect("small");
        let res = chain.detailed_balance();
        t.check(res.is_ok(), || format!("RC n={} m={}: {}", g.n(), g.m(), res.unwrap_err()));
    }
}

fn linear_width(opts: &SelftestOptions, t: &mut Tally) {
    t.check(natural_ordering(&Graph::path(8)).width == 1, || "path width".into());
    t.check(optimal_linear_width(&Graph::cycle(7)).ok() == Some(2), || "cycle width".into());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..50 {
        let n = rng.gen_range(2..200);
        let parents: Vec<usize> = (0..n - 1).map(|i| rng.gen_range(0..=i)).collect();
        let tree = Graph::from_parents(&parents);
        let w = dfs_tree_ordering(&tree).expect("tree").width;
        t.check(w <= floor_log2(n), || format!("tree on {n} vertices: width {w}"));
    }
}

fn reductions(_: &SelftestOptions, t: &mut Tally) {
    let primes = [101u64, 103, 107];
    for l in [-400_000i64, -1, 0, 7, 524_287] {
        let rs: Vec<ModP> = primes.iter().map(|&p| ModP::new(l.rem_euclid(p as i64) as u64, p).unwrap()).collect();
        let back = crt_reconstruct(&rs, &BigInt::from(540_000));
        t.check(back == Ok(BigInt::from(l)), || format!("CRT round trip of {l}"));
    }
    let h = Graph::path(3);
    let (x, y) = (rat(4, 1), rat(2, 1));
    match tutte_via_oracle(&h, &x, &y, &TutteOptions::default()) {
        Ok(cert) => {
            let direct = eval_tutte(&h, &x, &y, EnumOptions::default()).expect("tiny");
            t.check(cert.value == direct && cert.verify(), || "Tutte reduction on P₃".into());
        }
        Err(e) => t.check(false, || format!("Tutte reduction on P₃: {e}")),
    }
    let g = Graph::path(2);
    match bis_via_pbis_oracle(&g, &rat(1, 8), &BisOptions::default()) {
        Ok(cert) => t.check(cert.l == BigInt::from(3) && cert.verify(), || "BIS reduction on K₂".into()),
        Err(e) => t.check(false, || format!("BIS reduction on K₂: {e}")),
    }
}
