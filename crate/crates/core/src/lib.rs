//! Exact evaluation, sampling and mixing diagnostics for the mod-2 rank
//! polynomial of a graph.
//!
//! For a graph `G = (V, E)` the rank polynomial sums `λ^rk(S) μ^|S|` over all
//! edge subsets `S`, where `rk(S)` is the rank over GF(2) of the adjacency
//! matrix of `(V, S)`. For bipartite graphs the primed variant uses the
//! bipartite adjacency matrix instead. The crate provides:
//!
//! * [`graph`]: graphs, bipartitions, edge subsets, and the constructions
//!   (2-stretch, stretch-sum, gadgets, vertex/edge clouds) the reductions need.
//! * [`f2`]: bit-packed GF(2) matrices and an elimination state that tracks
//!   rank under single-entry flips.
//! * [`exact`]: brute-force exact evaluation of the rank polynomials, the
//!   random cluster partition function, the Tutte polynomial, and the
//!   independent-set style counts they encode.
//! * [`chains`]: the single-bond-flip Metropolis chains for rank-weighted
//!   subgraphs and for the random cluster model.
//! * [`mixing`]: linear-width orderings, canonical paths, exact congestion and
//!   exact mixing times on small state spaces.
//! * [`reductions`]: executable modular reductions (Tutte to the rank
//!   polynomial, bipartite independent sets to the permissive variant) with
//!   prime search and CRT reconstruction.

pub mod arith;
pub mod chains;
pub mod exact;
pub mod f2;
pub mod graph;
pub mod mixing;
pub mod reductions;
pub mod selftest;

pub use num::{BigInt, BigRational};
