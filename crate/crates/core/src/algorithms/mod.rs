//! Sampling algorithms expressed over the engine.
//!
//! Node-wise samplers ([`khop_spec`], [`random_walk_spec`]) are Individual
//! specs. Layer-wise samplers ([`fastgcn_spec`], [`ladies_spec`]) are
//! Collective specs. Subgraph samplers ([`clustergcn_batches`],
//! [`graphsaint_rw_spec`]) produce vertex sets to be turned into induced
//! subgraphs.

mod khop;
mod layerwise;
mod subgraph;
mod walk;

pub use khop::{khop_exhaustive_spec, khop_spec, KhopSpec};
pub use layerwise::{fastgcn_spec, ladies_spec, FastGcnSpec, LadiesSpec, LayerQuota};
pub use subgraph::{clustergcn_batches, graphsaint_rw_spec, SaintRwBatcher};
pub use walk::{random_walk_spec, RandomWalkSpec};

pub(crate) fn join_sizes(sizes: &[usize]) -> String {
    sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}
