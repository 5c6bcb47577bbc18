//! Partition functions of perfect matchings in weighted complete k-uniform
//! and complete k-partite hypergraphs.
//!
//! * [`hypergraph`]: specs, canonical edge indexing, sublists, degrees.
//! * [`exact`]: exact `P_H(W)`, subset DP, Ryser permanent, hafnian,
//!   matching counts.
//! * [`scaling`]: scaling to k-stochastic weights and its certificates.
//! * [`bounds`]: `Φ_k(m)`, sandwich constants and intervals, regular-hypergraph
//!   matching bound.
//! * [`tester`]: the many-matchings / few-perfect-matchings dichotomy.
//! * [`io`]: instance files, seeded generators, run configuration.

pub mod bounds;
pub mod error;
pub mod exact;
pub mod hypergraph;
pub mod io;
pub mod numeric;
pub mod scaling;
pub mod tester;
pub mod weight;

pub use error::{Error, Result};
pub use hypergraph::{Edge, EdgeSublist, HypergraphSpec, Kind};
pub use weight::WeightVector;
