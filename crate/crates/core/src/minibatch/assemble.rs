use std::collections::HashMap;

use crate::engine::{Sample, SampleSet, SamplingType};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, SENTINEL};

use super::{Block, MiniBatch};

/// Turns a sample set into mini-batches of `batch_size` consecutive samples.
///
/// Within a batch the per-target samples are unioned and each layer frontier
/// is deduplicated. For Individual sample sets, block `j` holds every sampled
/// `(drawn -> transit)` arc of steps `0..=j`; sampled duplicates are kept as
/// parallel arcs. For Collective sample sets, block `j` holds every arc of `g`
/// from its sources into its destinations.
pub fn assemble(set: &SampleSet, g: &Graph, num_layers: usize, batch_size: usize) -> Result<Vec<MiniBatch>> {
    if num_layers == 0 || set.num_steps != num_layers {
        return Err(Error::argument(format!(
            "sample set has {} steps but {num_layers} layers were requested",
            set.num_steps
        )));
    }
    if batch_size == 0 {
        return Err(Error::argument("batch size must be at least 1"));
    }
    set.samples.chunks(batch_size).map(|chunk| assemble_one(set.sampling_type, chunk, g, num_layers)).collect()
}

struct LocalIds {
    ids: HashMap<VertexId, u32>,
    local_to_global: Vec<VertexId>,
    /// `level_end[d]` = number of vertices within `d` steps of the targets.
    level_end: Vec<usize>,
}

impl LocalIds {
    fn new(targets: &[VertexId]) -> Self {
        let mut ids = HashMap::new();
        for (i, &t) in targets.iter().enumerate() {
            ids.insert(t, i as u32);
        }
        Self { ids, local_to_global: targets.to_vec(), level_end: vec![targets.len()] }
    }

    fn push_level(&mut self, vertices: impl Iterator<Item = VertexId>) {
        let mut fresh: Vec<VertexId> = vertices.filter(|&v| v != SENTINEL && !self.ids.contains_key(&v)).collect();
        fresh.sort_unstable();
        fresh.dedup();
        for v in fresh {
            self.ids.insert(v, self.local_to_global.len() as u32);
            self.local_to_global.push(v);
        }
        self.level_end.push(self.local_to_global.len());
    }

    fn get(&self, v: VertexId) -> Option<u32> {
        self.ids.get(&v).copied()
    }
}

fn assemble_one(kind: SamplingType, samples: &[Sample], g: &Graph, num_layers: usize) -> Result<MiniBatch> {
    let mut targets: Vec<VertexId> = Vec::with_capacity(samples.len());
    for s in samples {
        if !targets.contains(&s.root) {
            targets.push(s.root);
        }
    }
    let mut local = LocalIds::new(&targets);
    for d in 0..num_layers {
        local.push_level(samples.iter().flat_map(|s| s.steps[d].vertices.iter().copied()));
    }

    let layers = match kind {
        SamplingType::Individual => individual_blocks(samples, g, num_layers, &local)?,
        SamplingType::Collective => collective_blocks(g, num_layers, &local),
    };
    let mb = MiniBatch {
        targets,
        layers,
        num_input_vertices: local.local_to_global.len(),
        local_to_global: local.local_to_global,
    };
    mb.validate()?;
    Ok(mb)
}

fn individual_blocks(samples: &[Sample], g: &Graph, num_layers: usize, local: &LocalIds) -> Result<Vec<Block>> {
    let mut arcs: Vec<(u32, u32)> = Vec::new();
    let mut blocks = Vec::with_capacity(num_layers);
    for j in 0..num_layers {
        let num_dst = local.level_end[j] as u32;
        for s in samples {
            for (transit, drawn) in s.steps[j].sampled_arcs() {
                if !g.has_arc(transit, drawn) {
                    return Err(Error::Structural(format!("sampled pair ({transit}, {drawn}) is not an arc")));
                }
                let t = local.get(transit).filter(|&t| t < num_dst).ok_or_else(|| {
                    Error::Structural(format!("transit {transit} at step {j} is not in the frontier"))
                })?;
                let d = local.get(drawn).expect("drawn vertices were registered");
                arcs.push((d, t));
            }
        }
        let mut sorted = arcs.clone();
        sorted.sort_unstable_by_key(|&(s, d)| (d, s));
        blocks.push(Block { num_src: local.level_end[j + 1] as u32, num_dst, arcs: sorted });
    }
    Ok(blocks)
}

fn collective_blocks(g: &Graph, num_layers: usize, local: &LocalIds) -> Vec<Block> {
    (0..num_layers)
        .map(|j| {
            let num_dst = local.level_end[j] as u32;
            let num_src = local.level_end[j + 1] as u32;
            let mut arcs = Vec::new();
            for (dst, &v) in local.local_to_global[..num_dst as usize].iter().enumerate() {
                for &u in g.neighbors_unchecked(v) {
                    if let Some(src) = local.get(u).filter(|&s| s < num_src) {
                        arcs.push((src, dst as u32));
                    }
                }
            }
            arcs.sort_unstable_by_key(|&(s, d)| (d, s));
            Block { num_src, num_dst, arcs }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{khop_exhaustive_spec, khop_spec, ladies_spec, LayerQuota};
    use crate::engine::{run_sampling, Strategy};
    use crate::generators;

    fn exhaustive(g: &Graph, roots: &[VertexId], layers: usize) -> SampleSet {
        let fanout = g.max_degree().max(1);
        let spec = khop_exhaustive_spec(&vec![fanout; layers], false).unwrap();
        run_sampling(g, &spec, roots, 0, Strategy::SampleParallel, 1).unwrap().0
    }

    fn global_arcs(mb: &MiniBatch, j: usize) -> Vec<(VertexId, VertexId)> {
        let mut v: Vec<_> = mb.layers[j]
            .arcs
            .iter()
            .map(|&(s, d)| (mb.local_to_global[s as usize], mb.local_to_global[d as usize]))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    #[test]
    fn path_two_layers() {
        let g = generators::path(3);
        let set = exhaustive(&g, &[0], 2);
        let mbs = assemble(&set, &g, 2, 1).unwrap();
        let mb = &mbs[0];
        assert_eq!(global_arcs(mb, 0), vec![(1, 0)]);
        // vertex 0 keeps its own neighborhood one layer down
        assert_eq!(global_arcs(mb, 1), vec![(0, 1), (1, 0), (2, 1)]);
        let mut inputs = mb.input_vertices().to_vec();
        inputs.sort_unstable();
        assert_eq!(inputs, vec![0, 1, 2]);
        assert_eq!(mb.local_to_global, vec![0, 1, 2]);
    }

    #[test]
    fn isolated_target() {
        let g = Graph::empty(4);
        let set = exhaustive(&g, &[2], 3);
        let mb = &assemble(&set, &g, 3, 1).unwrap()[0];
        assert!(mb.layers.iter().all(|b| b.arcs.is_empty()));
        assert_eq!(mb.input_vertices(), &[2]);
    }

    #[test]
    fn shared_transit_in_both_batches() {
        let g = generators::shared_transit_fixture();
        let set = exhaustive(&g, &[0, 6, 1, 5], 2);
        let mbs = assemble(&set, &g, 2, 2).unwrap();
        assert_eq!(mbs[0].targets, vec![0, 6]);
        assert_eq!(mbs[1].targets, vec![1, 5]);
        for mb in &mbs {
            assert!(mb.computed_at_layer(1).contains(&3), "D's layer-1 feature is computed");
        }
    }

    #[test]
    fn layer_mismatch() {
        let g = generators::path(3);
        let set = exhaustive(&g, &[0], 2);
        assert!(matches!(assemble(&set, &g, 3, 1), Err(Error::Argument(_))));
        assert!(matches!(assemble(&set, &g, 2, 0), Err(Error::Argument(_))));
    }

    #[test]
    fn random_khop_blocks_are_valid() {
        let g = generators::erdos_renyi(60, 0.08, 5);
        let roots: Vec<VertexId> = (0..20).collect();
        let (set, _) = run_sampling(&g, &khop_spec(&[4, 3]).unwrap(), &roots, 9, Strategy::TransitParallel, 2).unwrap();
        for mb in assemble(&set, &g, 2, 6).unwrap() {
            mb.validate().unwrap();
            for b in &mb.layers {
                for &(s, d) in &b.arcs {
                    assert!(g.has_arc(mb.local_to_global[d as usize], mb.local_to_global[s as usize]));
                }
            }
        }
    }

    #[test]
    fn collective_blocks_use_graph_arcs() {
        let g = generators::star(4);
        let spec = ladies_spec(LayerQuota::new(vec![2, 1]).unwrap());
        let (set, _) = run_sampling(&g, &spec, &[0], 1, Strategy::SampleParallel, 1).unwrap();
        let mb = &assemble(&set, &g, 2, 1).unwrap()[0];
        assert_eq!(mb.layers[0].num_dst, 1);
        assert_eq!(mb.layers[0].arcs.len(), 2);
        assert!(mb.layers[0].arcs.iter().all(|&(_, d)| d == 0));
    }
}
