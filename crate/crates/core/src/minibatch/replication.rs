use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

use super::MiniBatch;

/// Redundancy across a set of mini-batches.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationReport {
    /// Total input vertices over distinct input vertices.
    pub factor: f64,
    pub total_inputs: usize,
    pub distinct_inputs: usize,
    /// Fraction of the graph's vertices used as input by some batch.
    pub coverage: f64,
    /// Entry `k`: vertices whose layer-`k` feature is computed by two or more
    /// batches (`k = 0` counts inputs loaded more than once).
    pub recomputed_per_layer: Vec<usize>,
}

pub fn replication_factor(batches: &[MiniBatch], g: &Graph) -> Result<ReplicationReport> {
    if batches.is_empty() {
        return Err(Error::argument("replication_factor needs at least one mini-batch"));
    }
    let total_inputs: usize = batches.iter().map(|b| b.num_input_vertices).sum();
    let layers = batches.iter().map(MiniBatch::num_layers).max().unwrap_or(0);

    let mut recomputed_per_layer = Vec::with_capacity(layers + 1);
    let mut distinct_inputs = 0;
    for k in 0..=layers {
        let mut seen: HashMap<VertexId, u32> = HashMap::new();
        for b in batches.iter().filter(|b| k <= b.num_layers()) {
            for &v in b.computed_at_layer(k) {
                *seen.entry(v).or_default() += 1;
            }
        }
        if k == 0 {
            distinct_inputs = seen.len();
        }
        recomputed_per_layer.push(seen.values().filter(|&&c| c >= 2).count());
    }
    let factor = if distinct_inputs == 0 { 1.0 } else { total_inputs as f64 / distinct_inputs as f64 };
    let coverage = if g.num_vertices() == 0 { 0.0 } else { distinct_inputs as f64 / g.num_vertices() as f64 };
    Ok(ReplicationReport { factor, total_inputs, distinct_inputs, coverage, recomputed_per_layer })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::khop_exhaustive_spec;
    use crate::engine::{run_sampling, Strategy};
    use crate::generators;
    use crate::minibatch::assemble;

    fn batches(g: &Graph, roots: &[VertexId], layers: usize) -> Vec<MiniBatch> {
        let spec = khop_exhaustive_spec(&vec![g.max_degree().max(1); layers], false).unwrap();
        let (set, _) = run_sampling(g, &spec, roots, 0, Strategy::SampleParallel, 1).unwrap();
        assemble(&set, g, layers, 1).unwrap()
    }

    #[test]
    fn single_batch_is_one() {
        let g = generators::erdos_renyi(30, 0.1, 1);
        let r = replication_factor(&batches(&g, &[0], 2), &g).unwrap();
        assert_eq!(r.factor, 1.0);
        assert!(r.recomputed_per_layer.iter().all(|&c| c == 0));
    }

    #[test]
    fn complete_graph_two_batches() {
        let g = generators::complete(4);
        let r = replication_factor(&batches(&g, &[0, 1], 2), &g).unwrap();
        assert_eq!(r.factor, 2.0);
        assert_eq!(r.distinct_inputs, 4);
        assert_eq!(r.coverage, 1.0);
        assert_eq!(r.recomputed_per_layer, vec![4, 4, 0]);
    }

    #[test]
    fn disjoint_batches_are_one() {
        // two separate paths 0-1 and 2-3
        let g = Graph::from_edges_undirected(4, &[(0, 1), (2, 3)], false).unwrap();
        let r = replication_factor(&batches(&g, &[0, 2], 2), &g).unwrap();
        assert_eq!(r.factor, 1.0);
    }

    #[test]
    fn empty_input_rejected() {
        let g = generators::path(2);
        assert!(replication_factor(&[], &g).is_err());
    }
}
