use crate::engine::{NextContext, SamplingSpec};
use crate::error::{Error, Result};
use crate::graph::VertexId;

/// Uniform random walk: one slot per step, transiting the previous position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomWalkSpec {
    length: usize,
}

pub fn random_walk_spec(length: usize) -> Result<RandomWalkSpec> {
    if length == 0 {
        return Err(Error::argument("walk length must be at least 1"));
    }
    Ok(RandomWalkSpec { length })
}

impl RandomWalkSpec {
    pub fn length(&self) -> usize {
        self.length
    }
}

impl SamplingSpec for RandomWalkSpec {
    fn id(&self) -> String {
        format!("walk:{}", self.length)
    }

    fn steps(&self) -> usize {
        self.length
    }

    fn sample_size(&self, _step: usize) -> usize {
        1
    }

    fn next(&self, ctx: &NextContext<'_>) -> Option<VertexId> {
        Some(ctx.neighbors[ctx.draws.draw(ctx.neighbors.len())])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run_sampling, SampleSet, Strategy};
    use crate::generators;
    use crate::graph::{Graph, SENTINEL};

    fn walk(set: &SampleSet, i: usize) -> Vec<VertexId> {
        set.samples[i].steps.iter().map(|s| s.vertices[0]).collect()
    }

    #[test]
    fn directed_cycle_is_forced() {
        let g = generators::directed_cycle(3);
        let (set, _) = run_sampling(&g, &random_walk_spec(3).unwrap(), &[0], 4, Strategy::SampleParallel, 1).unwrap();
        assert_eq!(walk(&set, 0), vec![1, 2, 0]);
    }

    #[test]
    fn dead_end_pads_with_sentinel() {
        let g = Graph::empty(2);
        let (set, _) = run_sampling(&g, &random_walk_spec(2).unwrap(), &[1], 4, Strategy::TransitParallel, 1).unwrap();
        assert_eq!(walk(&set, 0), vec![SENTINEL, SENTINEL]);
    }

    #[test]
    fn two_vertex_path_alternates() {
        let g = generators::path(2);
        let (set, _) = run_sampling(&g, &random_walk_spec(4).unwrap(), &[0], 4, Strategy::SampleParallel, 2).unwrap();
        assert_eq!(walk(&set, 0), vec![1, 0, 1, 0]);
    }

    #[test]
    fn zero_length_rejected() {
        assert!(random_walk_spec(0).is_err());
    }
}
