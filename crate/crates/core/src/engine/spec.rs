use crate::graph::{Graph, VertexId, SENTINEL};
use crate::rng::Draws;

use super::sample_set::StepRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamplingType {
    /// Each transit draws its own neighbors.
    Individual,
    /// All transits of a pool draw one shared vertex set per step.
    Collective,
}

/// How roots are pooled for collective steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollectiveScope {
    /// Each sample has its own layer sets.
    PerSample,
    /// Consecutive runs of this many samples share one layer set per step.
    Batch(usize),
    /// Every sample of the run shares one layer set per step.
    Run,
}

impl CollectiveScope {
    pub(crate) fn pool_size(self) -> usize {
        match self {
            CollectiveScope::PerSample => 1,
            CollectiveScope::Batch(b) => b.max(1),
            CollectiveScope::Run => usize::MAX,
        }
    }
}

/// Read-only view of one sample while a later step is being expanded.
#[derive(Debug, Clone, Copy)]
pub struct SampleView<'a> {
    pub(crate) root: VertexId,
    pub(crate) completed: &'a [StepRecord],
}

impl<'a> SampleView<'a> {
    pub fn root(&self) -> VertexId {
        self.root
    }

    /// Number of steps already expanded.
    pub fn completed_steps(&self) -> usize {
        self.completed.len()
    }

    pub fn step_vertices(&self, step: usize) -> &'a [VertexId] {
        &self.completed[step].vertices
    }

    /// Vertex at `index` of the step `back` steps before the current one.
    ///
    /// Going back past step 0 yields the root. Out-of-range indices yield
    /// [`SENTINEL`].
    pub fn prev_vertex(&self, back: usize, index: usize) -> VertexId {
        let len = self.completed.len();
        if back == 0 || back > len {
            return if index == 0 { self.root } else { SENTINEL };
        }
        self.completed[len - back].vertices.get(index).copied().unwrap_or(SENTINEL)
    }
}

/// Everything an Individual-mode `next` call may look at.
pub struct NextContext<'a> {
    pub sample: SampleView<'a>,
    pub sample_id: usize,
    pub transit: VertexId,
    /// Sorted out-neighbors of the transit, never empty.
    pub neighbors: &'a [VertexId],
    pub step: usize,
    pub transit_index: usize,
    /// Slot index within this step of the sample.
    pub slot: usize,
    /// Position among the slots served by this transit occurrence.
    pub slot_in_transit: usize,
    pub draws: &'a Draws,
}

/// Pooled input of one collective step.
pub struct CollectiveContext<'a> {
    pub graph: &'a Graph,
    pub step: usize,
    pub quota: usize,
    /// Distinct non-sentinel transits of the pool, ascending.
    pub transits: &'a [VertexId],
    /// Distinct out-neighbors of the transits, ascending.
    pub candidates: &'a [VertexId],
    /// For each candidate, how many transits list it as a neighbor.
    pub arc_counts: &'a [u64],
    pub seed: u64,
    /// Key for the pool's draws (the first sample id of the pool).
    pub pool_id: u64,
}

/// A layer-wise sampler invoked once per pool per step.
pub trait CollectiveSampler: Send + Sync {
    fn collective_next(&self, ctx: &CollectiveContext<'_>) -> Vec<VertexId>;
}

/// A user-programmable sampling algorithm.
///
/// Mirrors the classic transit-based API: `steps`, `sample_size`, `next`,
/// `unique`, `sampling_type` and `step_transits`. Defaults reproduce a
/// recursive neighborhood expansion where step `s` transits across every
/// vertex produced at step `s - 1` (the root at step 0).
pub trait SamplingSpec: Send + Sync {
    /// Stable identifier written into dumps and manifests.
    fn id(&self) -> String;

    fn steps(&self) -> usize;

    fn sample_size(&self, step: usize) -> usize;

    /// Picks a neighbor of `ctx.transit`, or `None` for an empty slot.
    ///
    /// Must return a member of `ctx.neighbors`.
    fn next(&self, ctx: &NextContext<'_>) -> Option<VertexId>;

    fn unique(&self, _step: usize) -> bool {
        false
    }

    fn sampling_type(&self) -> SamplingType {
        SamplingType::Individual
    }

    fn num_transits(&self, step: usize, sample: &SampleView<'_>) -> usize {
        if step == 0 {
            1
        } else {
            sample.step_vertices(step - 1).len()
        }
    }

    /// Transit vertex for `transit_index` at `step`.
    ///
    /// Must be the root or a vertex produced by an earlier step.
    fn step_transits(&self, _step: usize, sample: &SampleView<'_>, transit_index: usize) -> VertexId {
        sample.prev_vertex(1, transit_index)
    }

    fn collective(&self) -> Option<&dyn CollectiveSampler> {
        None
    }

    fn collective_scope(&self) -> CollectiveScope {
        CollectiveScope::PerSample
    }
}
