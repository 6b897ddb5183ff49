//! Step evaluator for layer-wise (Collective) specs.
//!
//! Samples are pooled according to the spec's [`CollectiveScope`]. Each pool
//! gathers the distinct transits of the previous layer (the roots at step 0),
//! reads each transit's neighbor list once, and hands the pooled candidate
//! set with per-candidate arc counts to the spec's sampler.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, SENTINEL};
use crate::parallel;

use super::sample_set::{Sample, StepRecord};
use super::spec::{CollectiveContext, SamplingSpec};

pub(crate) fn expand_step(
    g: &Graph,
    spec: &dyn SamplingSpec,
    samples: &mut [Sample],
    step: usize,
    seed: u64,
    workers: usize,
) -> Result<(u64, u64)> {
    let sampler = spec
        .collective()
        .ok_or_else(|| Error::Config(format!("collective spec {} has no collective_next", spec.id())))?;
    let pool_size = spec.collective_scope().pool_size();
    let quota = spec.sample_size(step);
    let num_pools = samples.len().div_ceil(pool_size);

    let frozen: &[Sample] = samples;
    let results = parallel::map_ranges(num_pools, workers, |pools| -> Result<Vec<(StepRecord, u64)>> {
        let mut out = Vec::with_capacity(pools.len());
        for pool in pools {
            let members = &frozen[pool * pool_size..(pool + 1).saturating_mul(pool_size).min(frozen.len())];
            let mut transits: Vec<VertexId> = if step == 0 {
                members.iter().map(|s| s.root).collect()
            } else {
                members.iter().flat_map(|s| s.steps[step - 1].vertices.iter().copied()).collect()
            };
            transits.retain(|&t| t != SENTINEL);
            transits.sort_unstable();
            transits.dedup();

            let mut pooled: Vec<VertexId> =
                transits.iter().flat_map(|&t| g.neighbors_unchecked(t).iter().copied()).collect();
            pooled.sort_unstable();
            let mut candidates = Vec::new();
            let mut arc_counts = Vec::new();
            for v in pooled {
                if candidates.last() == Some(&v) {
                    *arc_counts.last_mut().unwrap() += 1;
                } else {
                    candidates.push(v);
                    arc_counts.push(1u64);
                }
            }

            let ctx = CollectiveContext {
                graph: g,
                step,
                quota,
                transits: &transits,
                candidates: &candidates,
                arc_counts: &arc_counts,
                seed,
                pool_id: (pool * pool_size) as u64,
            };
            let mut layer = sampler.collective_next(&ctx);
            layer.sort_unstable();
            layer.dedup();
            if let Some(&bad) = layer.iter().find(|&&v| v as usize >= g.num_vertices()) {
                return Err(Error::Config(format!("collective_next returned vertex {bad} outside the graph")));
            }
            let fetched = transits.len() as u64;
            out.push((StepRecord { transits, fanout: 0, vertices: layer }, fetched));
        }
        Ok(out)
    });

    let mut fetches = 0;
    let mut draws = 0;
    let mut pool = 0;
    for chunk in results {
        for (record, fetched) in chunk? {
            fetches += fetched;
            draws += record.vertices.len() as u64;
            let lo = pool * pool_size;
            let hi = lo.saturating_add(pool_size).min(samples.len());
            for s in &mut samples[lo..hi] {
                s.steps.push(record.clone());
            }
            pool += 1;
        }
    }
    Ok((fetches, draws))
}
