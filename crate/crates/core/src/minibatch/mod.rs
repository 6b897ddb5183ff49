//! Mini-batches as per-layer message-passing blocks.
//!
//! Vertices of a mini-batch get dense local ids: targets first, then the
//! vertices first reached at each deeper layer in ascending global id. Block
//! `j` (outermost first) has the `num_dst` vertices reachable within `j`
//! steps as destinations and those within `j + 1` steps as sources, so every
//! block's destinations are a prefix of its sources and of the next block's
//! destinations. Arcs point in aggregation direction: sampled neighbor to
//! transit.

mod assemble;
mod io;
mod replication;

pub use assemble::assemble;
pub use io::{export_minibatch, import_minibatch, MINIBATCH_FORMAT_VERSION, MINIBATCH_MAGIC};
pub use replication::{replication_factor, ReplicationReport};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub num_src: u32,
    pub num_dst: u32,
    /// `(source, destination)` local ids, sorted by destination then source.
    pub arcs: Vec<(u32, u32)>,
}

impl Block {
    /// Arc index range for each destination. Requires sorted arcs.
    pub fn dst_offsets(&self) -> Vec<usize> {
        let mut offsets = vec![0usize; self.num_dst as usize + 1];
        for &(_, d) in &self.arcs {
            offsets[d as usize + 1] += 1;
        }
        for i in 0..self.num_dst as usize {
            offsets[i + 1] += offsets[i];
        }
        offsets
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiniBatch {
    pub targets: Vec<VertexId>,
    /// Outermost (computes the targets) to innermost (reads input features).
    pub layers: Vec<Block>,
    pub local_to_global: Vec<VertexId>,
    pub num_input_vertices: usize,
}

impl MiniBatch {
    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    /// Global ids of the input vertices, in local order.
    pub fn input_vertices(&self) -> &[VertexId] {
        &self.local_to_global[..self.num_input_vertices]
    }

    /// Global ids of the vertices whose layer-`k` feature this batch computes
    /// (`k = 0` are the inputs, `k = num_layers` the targets).
    pub fn computed_at_layer(&self, k: usize) -> &[VertexId] {
        let n = self.num_layers();
        if k == 0 {
            self.input_vertices()
        } else {
            &self.local_to_global[..self.layers[n - k].num_dst as usize]
        }
    }

    /// Every target's computation is closed under the batch.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Structural(msg));
        if self.layers.is_empty() {
            return fail("mini-batch has no layers".into());
        }
        if self.local_to_global.len() != self.num_input_vertices {
            return fail("local_to_global length differs from num_input_vertices".into());
        }
        if self.layers[0].num_dst as usize != self.targets.len() {
            return fail("outer block destinations differ from target count".into());
        }
        if self.local_to_global[..self.targets.len()] != self.targets[..] {
            return fail("targets must occupy the first local ids".into());
        }
        for (j, b) in self.layers.iter().enumerate() {
            if b.num_dst > b.num_src {
                return fail(format!("block {j} has more destinations than sources"));
            }
            if let Some(next) = self.layers.get(j + 1) {
                if next.num_dst != b.num_src {
                    return fail(format!("block {} destinations must equal block {j} sources", j + 1));
                }
            }
            if let Some(&(s, d)) = b.arcs.iter().find(|&&(s, d)| s >= b.num_src || d >= b.num_dst) {
                return fail(format!("block {j} arc ({s} -> {d}) out of bounds"));
            }
            if b.arcs.windows(2).any(|w| (w[0].1, w[0].0) > (w[1].1, w[1].0)) {
                return fail(format!("block {j} arcs are not sorted by destination"));
            }
        }
        if self.layers.last().unwrap().num_src as usize != self.num_input_vertices {
            return fail("innermost block sources differ from input vertices".into());
        }
        Ok(())
    }

    /// Whole-subgraph mini-batch: every vertex is a target and every layer
    /// aggregates over all arcs of the subgraph.
    pub fn from_subgraph(sub: &Graph, local_to_global: Vec<VertexId>, num_layers: usize) -> Result<Self> {
        if num_layers == 0 {
            return Err(Error::argument("mini-batch needs at least one layer"));
        }
        if local_to_global.len() != sub.num_vertices() {
            return Err(Error::argument("mapping length differs from subgraph size"));
        }
        let m = sub.num_vertices() as u32;
        let mut arcs: Vec<(u32, u32)> = sub.arcs().map(|(v, u)| (u, v)).collect();
        arcs.sort_unstable_by_key(|&(s, d)| (d, s));
        let block = Block { num_src: m, num_dst: m, arcs };
        Ok(MiniBatch {
            targets: local_to_global.clone(),
            layers: vec![block; num_layers],
            num_input_vertices: local_to_global.len(),
            local_to_global,
        })
    }
}
