//! Deterministic, parallel graph sampling for GNN mini-batch construction.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: immutable CSR storage, edge-list ingestion and the binary cache.
//! - [`partition`]: multi-source BFS clustering.
//! - [`rng`]: counter-based random draws.
//! - [`engine`]: the sampling API with sample-parallel and transit-parallel executors.
//! - [`algorithms`]: k-hop, random walk, FastGCN, LADIES, ClusterGCN and GraphSAINT samplers.
//! - [`minibatch`]: block assembly, replication metrics and the block file format.
//! - [`gnn`]: a mean-aggregator reference forward pass used as a correctness oracle.

pub mod algorithms;
pub mod engine;
pub mod error;
pub mod generators;
pub mod gnn;
pub mod graph;
pub mod minibatch;
mod parallel;
pub mod partition;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{Graph, VertexId, SENTINEL};
pub use parallel::Stopwatch;
