use crate::engine::{NextContext, SamplingSpec};
use crate::error::{Error, Result};
use crate::graph::VertexId;

use super::join_sizes;

/// GraphSAGE-style k-hop neighborhood sampling.
///
/// Step `s` transits across every vertex drawn at step `s - 1` and draws
/// `fanouts[s]` neighbors of each. The default draw is uniform with
/// replacement. The exhaustive variant instead assigns slot `j` of a transit
/// to its `j`-th neighbor (empty past the degree), which turns the spec into a
/// deterministic bounded BFS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KhopSpec {
    fanouts: Vec<usize>,
    exhaustive: bool,
    unique: bool,
}

pub fn khop_spec(fanouts: &[usize]) -> Result<KhopSpec> {
    KhopSpec::new(fanouts, false, false)
}

pub fn khop_exhaustive_spec(fanouts: &[usize], unique: bool) -> Result<KhopSpec> {
    KhopSpec::new(fanouts, true, unique)
}

impl KhopSpec {
    pub fn new(fanouts: &[usize], exhaustive: bool, unique: bool) -> Result<Self> {
        if fanouts.is_empty() {
            return Err(Error::argument("k-hop needs at least one fanout"));
        }
        if fanouts.contains(&0) {
            return Err(Error::argument("fanouts must be at least 1"));
        }
        Ok(Self { fanouts: fanouts.to_vec(), exhaustive, unique })
    }

    pub fn with_unique(mut self, unique: bool) -> Self {
        self.unique = unique;
        self
    }

    pub fn fanouts(&self) -> &[usize] {
        &self.fanouts
    }

    pub fn is_exhaustive(&self) -> bool {
        self.exhaustive
    }
}

impl SamplingSpec for KhopSpec {
    fn id(&self) -> String {
        let kind = if self.exhaustive { "khop-exhaustive" } else { "khop" };
        let suffix = if self.unique { "+unique" } else { "" };
        format!("{kind}:{}{suffix}", join_sizes(&self.fanouts))
    }

    fn steps(&self) -> usize {
        self.fanouts.len()
    }

    fn sample_size(&self, step: usize) -> usize {
        self.fanouts[step]
    }

    fn next(&self, ctx: &NextContext<'_>) -> Option<VertexId> {
        if self.exhaustive {
            ctx.neighbors.get(ctx.slot_in_transit).copied()
        } else {
            Some(ctx.neighbors[ctx.draws.draw(ctx.neighbors.len())])
        }
    }

    fn unique(&self, _step: usize) -> bool {
        self.unique
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run_sampling, SamplingType, Strategy};
    use crate::generators;
    use crate::graph::Graph;

    #[test]
    fn graphsage_two_hop_fields() {
        let spec = khop_spec(&[25, 10]).unwrap();
        assert_eq!(spec.steps(), 2);
        assert_eq!(spec.sample_size(0), 25);
        assert_eq!(spec.sample_size(1), 10);
        assert!(!spec.unique(0) && !spec.unique(1));
        assert_eq!(spec.sampling_type(), SamplingType::Individual);
        assert_eq!(spec.id(), "khop:25,10");
    }

    #[test]
    fn single_hop_on_chain() {
        let g = Graph::from_arcs(2, &[(0, 1)], false).unwrap();
        let (set, _) = run_sampling(&g, &khop_spec(&[1]).unwrap(), &[0], 0, Strategy::SampleParallel, 1).unwrap();
        assert_eq!(set.vertex_set(0), vec![0, 1]);
        assert_eq!(set.samples[0].steps[0].vertices, vec![1]);
    }

    #[test]
    fn exhaustive_unique_on_path() {
        let g = generators::path(3);
        let spec = khop_exhaustive_spec(&[2, 2], true).unwrap();
        let (set, _) = run_sampling(&g, &spec, &[1], 0, Strategy::TransitParallel, 1).unwrap();
        assert_eq!(set.vertex_set(0), vec![0, 1, 2]);
        // step 1: transit 0 -> [1, _], transit 2 -> [1 (dup), _]
        assert_eq!(set.samples[0].steps[1].vertices, vec![1, u32::MAX, u32::MAX, u32::MAX]);
    }

    #[test]
    fn rejects_empty_fanouts() {
        assert!(matches!(khop_spec(&[]), Err(Error::Argument(_))));
        assert!(matches!(khop_spec(&[3, 0]), Err(Error::Argument(_))));
    }
}
