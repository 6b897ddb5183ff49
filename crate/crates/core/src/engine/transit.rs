use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, SENTINEL};

use super::sample_set::Sample;
use super::spec::{SampleView, SamplingSpec};

/// All (sample, slot) pairs that transit across one vertex at one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitGroup {
    pub transit: VertexId,
    /// Ordered by `(sample, slot)`.
    pub members: Vec<(u32, u32)>,
}

impl TransitGroup {
    /// The group of slots whose transit is [`SENTINEL`].
    pub fn is_skip(&self) -> bool {
        self.transit == SENTINEL
    }
}

/// Resolves every sample's transit list for `step`.
pub(crate) fn resolve_transits(
    g: &Graph,
    spec: &dyn SamplingSpec,
    samples: &[Sample],
    step: usize,
) -> Result<Vec<Vec<VertexId>>> {
    samples
        .iter()
        .map(|s| {
            let view = SampleView { root: s.root, completed: &s.steps[..step] };
            let count = spec.num_transits(step, &view);
            (0..count)
                .map(|i| {
                    let t = spec.step_transits(step, &view, i);
                    if t != SENTINEL && t as usize >= g.num_vertices() {
                        Err(Error::Config(format!(
                            "step_transits returned vertex {t} outside the graph at step {step}"
                        )))
                    } else if t == SENTINEL || t == view.prev_vertex(1, i) || already_sampled(&view, t) {
                        Ok(t)
                    } else {
                        Err(Error::Config(format!(
                            "step_transits returned vertex {t} at step {step}, which is neither the root nor an earlier output"
                        )))
                    }
                })
                .collect()
        })
        .collect()
}

fn already_sampled(view: &SampleView<'_>, v: VertexId) -> bool {
    v == view.root() || (0..view.completed_steps()).any(|s| view.step_vertices(s).contains(&v))
}

/// Groups slots by transit vertex, ordered by transit id.
///
/// Every slot of every sample lands in exactly one group; slots whose
/// transit is [`SENTINEL`] form the trailing skip group.
pub(crate) fn group_by_transit(transits: &[Vec<VertexId>], fanout: usize) -> Vec<TransitGroup> {
    let mut keyed: Vec<(VertexId, u32, u32)> = Vec::new();
    for (sample, list) in transits.iter().enumerate() {
        for (ti, &t) in list.iter().enumerate() {
            for j in 0..fanout {
                keyed.push((t, sample as u32, (ti * fanout + j) as u32));
            }
        }
    }
    keyed.sort_unstable();
    let mut groups: Vec<TransitGroup> = Vec::new();
    for (t, sample, slot) in keyed {
        match groups.last_mut() {
            Some(g) if g.transit == t => g.members.push((sample, slot)),
            _ => groups.push(TransitGroup { transit: t, members: vec![(sample, slot)] }),
        }
    }
    groups
}

/// Transit groups for `step` of a partially expanded sample list.
///
/// Steps before `step` must be complete.
pub fn build_transit_groups(
    g: &Graph,
    samples: &[Sample],
    step: usize,
    spec: &dyn SamplingSpec,
) -> Result<Vec<TransitGroup>> {
    if step >= spec.steps() {
        return Err(Error::argument(format!("step {step} >= spec steps {}", spec.steps())));
    }
    if let Some(i) = samples.iter().position(|s| s.steps.len() < step) {
        return Err(Error::argument(format!("sample {i} has not completed step {}", step - 1)));
    }
    let transits = resolve_transits(g, spec, samples, step)?;
    Ok(group_by_transit(&transits, spec.sample_size(step)))
}
