use crate::engine::{run_sampling, SampleSet, Strategy};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, SENTINEL};
use crate::partition::PartitionAssignment;
use crate::rng::{derive_seed, prf_draw};

use super::random_walk_spec;

const CLUSTER_STREAM: u64 = 0xC1C1;
const SAINT_ROOT_STREAM: u64 = 0x5A17;

/// One epoch of ClusterGCN mini-batches.
///
/// Part ids are shuffled by `seed`, then taken `clusters_per_batch` at a
/// time (the last batch may hold fewer). Each batch is the ascending union of
/// its clusters' vertices.
pub fn clustergcn_batches(
    assign: &PartitionAssignment,
    clusters_per_batch: usize,
    seed: u64,
) -> Result<Vec<Vec<VertexId>>> {
    let k = assign.num_parts();
    if clusters_per_batch == 0 || clusters_per_batch > k {
        return Err(Error::argument(format!("clusters_per_batch must be in 1..={k}, got {clusters_per_batch}")));
    }
    let mut order: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        let j = prf_draw(seed, CLUSTER_STREAM, 0, i as u64, i as u64 + 1)? as usize;
        order.swap(i, j);
    }
    let members = assign.members();
    Ok(order
        .chunks(clusters_per_batch)
        .map(|chunk| {
            let mut batch: Vec<VertexId> = chunk.iter().flat_map(|&p| members[p].iter().copied()).collect();
            batch.sort_unstable();
            batch
        })
        .collect())
}

/// GraphSAINT random-walk subgraph sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SaintRwBatcher {
    num_roots: usize,
    walk_length: usize,
}

pub fn graphsaint_rw_spec(num_roots: usize, walk_length: usize) -> Result<SaintRwBatcher> {
    if num_roots == 0 {
        return Err(Error::argument("num_roots must be at least 1"));
    }
    random_walk_spec(walk_length)?;
    Ok(SaintRwBatcher { num_roots, walk_length })
}

impl SaintRwBatcher {
    pub fn num_roots(&self) -> usize {
        self.num_roots
    }

    pub fn walk_length(&self) -> usize {
        self.walk_length
    }

    /// Roots for batch `batch`, drawn uniformly with replacement.
    pub fn roots(&self, g: &Graph, seed: u64, batch: u64) -> Result<Vec<VertexId>> {
        let n = g.num_vertices() as u64;
        if n == 0 {
            return Err(Error::argument("cannot pick walk roots in an empty graph"));
        }
        (0..self.num_roots as u64).map(|i| Ok(prf_draw(seed, SAINT_ROOT_STREAM, batch, i, n)? as VertexId)).collect()
    }

    /// Runs the walks for batch `batch` and returns them with the subgraph
    /// vertex set (roots plus every visited vertex, ascending).
    pub fn sample(
        &self,
        g: &Graph,
        seed: u64,
        batch: u64,
        strategy: Strategy,
        workers: usize,
    ) -> Result<(SampleSet, Vec<VertexId>)> {
        let roots = self.roots(g, seed, batch)?;
        let spec = random_walk_spec(self.walk_length)?;
        let (walks, _) = run_sampling(g, &spec, &roots, derive_seed(seed, batch), strategy, workers)?;
        let mut set: Vec<VertexId> = roots
            .iter()
            .copied()
            .chain(walks.samples.iter().flat_map(|s| s.steps.iter().map(|st| st.vertices[0])))
            .filter(|&v| v != SENTINEL)
            .collect();
        set.sort_unstable();
        set.dedup();
        Ok((walks, set))
    }

    pub fn vertex_set(&self, g: &Graph, seed: u64, batch: u64) -> Result<Vec<VertexId>> {
        Ok(self.sample(g, seed, batch, Strategy::SampleParallel, 1)?.1)
    }
}
