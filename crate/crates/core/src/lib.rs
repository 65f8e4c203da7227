//! Exact and Monte-Carlo tooling for hat-guessing games on hypercubes.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] holds the bit-vector [`Graph`](graph::Graph), the exact
//!   maximum-independent-set solver and the independent-set enumerators.
//! * [`constructions`] generates Kneser hypercube graphs, Hamming products and
//!   powers, shift graphs, Cayley distance graphs and `G(n, p)` samples.
//! * [`hat_game`] evaluates winning families, strategies and exact game values.
//! * [`blockers`] builds and certifies disjoint blocker families.
//! * [`random_subgraphs`] estimates independence numbers of random induced
//!   subgraphs.
//! * [`hitting_sets`] computes minimum sets meeting every maximum independent set.
//! * [`suite`] is the acceptance battery shared by the test-suite and the CLI.
//!
//! With the default `parallel` feature the data-parallel loops run on rayon;
//! without it every loop runs sequentially and produces identical results.

pub mod bitset;
pub mod blockers;
pub mod budget;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod hat_game;
pub mod hitting_sets;
pub mod par;
pub mod random_subgraphs;
pub mod ratio;
pub mod suite;

pub use bitset::VertexSet;
pub use budget::Budget;
pub use error::{Error, Result};
pub use graph::Graph;
