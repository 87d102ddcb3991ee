//! Counting, estimating and sampling directed hypergraphs with a given
//! degree sequence and hyperedge size profile.
//!
//! * [`model`] holds instances, dihypergraphs and their bipartite-pair
//!   encoding.
//! * [`oracle`] counts everything exactly at desk scale.
//! * [`asymptotics`] evaluates the closed-form estimates and their error
//!   parameters in log space.
//! * [`sampler`] draws exactly uniform bipartite graphs and dihypergraphs.

pub mod error;
pub mod model;
pub mod oracle;
pub mod asymptotics;
pub mod families;
pub mod sampler;
pub mod verify;

pub use error::{Error, Result};
pub use model::{
    BipartiteGraph, BipartitePair, Dihypergraph, Hyperedge, Instance, KVectors, Profile,
};
pub use oracle::{ExactCount, ForcedAvoidConstraint, Oracle};
