use std::collections::HashSet;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, SENTINEL};
use crate::parallel::{self, Stopwatch};
use crate::rng::Draws;

use super::collective;
use super::sample_set::{Sample, SampleSet, StepRecord};
use super::spec::{NextContext, SampleView, SamplingSpec, SamplingType};
use super::transit::{group_by_transit, resolve_transits, TransitGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    SampleParallel,
    TransitParallel,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sample" | "sample-parallel" => Ok(Strategy::SampleParallel),
            "transit" | "transit-parallel" => Ok(Strategy::TransitParallel),
            _ => Err(Error::Config(format!("unknown strategy {s:?} (expected sample|transit)"))),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::SampleParallel => "sample",
            Strategy::TransitParallel => "transit",
        })
    }
}

/// Memory-access proxy counters for one run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AccessStats {
    /// Neighbor-list reads.
    pub adjacency_fetches: u64,
    pub fetches_per_step: Vec<u64>,
    /// Random numbers consumed.
    pub draws: u64,
    pub wall_time: Duration,
}

/// Expands one sample at a time; a worker owns a contiguous range of samples.
pub fn execute_sample_parallel(
    g: &Graph,
    spec: &dyn SamplingSpec,
    roots: &[VertexId],
    seed: u64,
    workers: usize,
) -> Result<(SampleSet, AccessStats)> {
    execute(g, spec, roots, seed, workers, Strategy::SampleParallel)
}

/// Expands one transit group at a time; each neighbor list is read once per
/// group and serves every member slot.
pub fn execute_transit_parallel(
    g: &Graph,
    spec: &dyn SamplingSpec,
    roots: &[VertexId],
    seed: u64,
    workers: usize,
) -> Result<(SampleSet, AccessStats)> {
    execute(g, spec, roots, seed, workers, Strategy::TransitParallel)
}

pub fn run_sampling(
    g: &Graph,
    spec: &dyn SamplingSpec,
    roots: &[VertexId],
    seed: u64,
    strategy: Strategy,
    workers: usize,
) -> Result<(SampleSet, AccessStats)> {
    execute(g, spec, roots, seed, workers, strategy)
}

fn validate(g: &Graph, spec: &dyn SamplingSpec, roots: &[VertexId], workers: usize) -> Result<()> {
    if workers == 0 {
        return Err(Error::argument("workers must be at least 1"));
    }
    let steps = spec.steps();
    if steps == 0 {
        return Err(Error::Config(format!("spec {} has zero steps", spec.id())));
    }
    match spec.sampling_type() {
        SamplingType::Individual => {
            if let Some(s) = (0..steps).find(|&s| spec.sample_size(s) == 0) {
                return Err(Error::Config(format!("sample_size({s}) must be at least 1")));
            }
        }
        SamplingType::Collective => {
            if spec.collective().is_none() {
                return Err(Error::Config(format!("collective spec {} has no collective_next", spec.id())));
            }
        }
    }
    for &r in roots {
        g.check_vertex(r).map_err(|_| Error::argument(format!("root {r} is not a vertex of the graph")))?;
    }
    Ok(())
}

fn execute(
    g: &Graph,
    spec: &dyn SamplingSpec,
    roots: &[VertexId],
    seed: u64,
    workers: usize,
    strategy: Strategy,
) -> Result<(SampleSet, AccessStats)> {
    validate(g, spec, roots, workers)?;
    let clock = Stopwatch::start();
    let mut samples: Vec<Sample> =
        roots.iter().map(|&root| Sample { root, steps: Vec::with_capacity(spec.steps()) }).collect();
    let mut stats = AccessStats::default();

    for step in 0..spec.steps() {
        let (fetches, draws) = match spec.sampling_type() {
            SamplingType::Collective => collective::expand_step(g, spec, &mut samples, step, seed, workers)?,
            SamplingType::Individual => {
                let transits = resolve_transits(g, spec, &samples, step)?;
                let fanout = spec.sample_size(step);
                let (mut outputs, fetches, draws) = match strategy {
                    Strategy::SampleParallel => {
                        sample_parallel_step(g, spec, &samples, &transits, step, fanout, seed, workers)?
                    }
                    Strategy::TransitParallel => {
                        transit_parallel_step(g, spec, &samples, &transits, step, fanout, seed, workers)?
                    }
                };
                if spec.unique(step) {
                    outputs.iter_mut().for_each(|o| collapse_duplicates(o));
                }
                for ((sample, transits), vertices) in samples.iter_mut().zip(transits).zip(outputs) {
                    sample.steps.push(StepRecord { transits, fanout: fanout as u32, vertices });
                }
                (fetches, draws)
            }
        };
        stats.adjacency_fetches += fetches;
        stats.fetches_per_step.push(fetches);
        stats.draws += draws;
    }
    stats.wall_time = clock.elapsed();

    let set =
        SampleSet { spec_id: spec.id(), seed, sampling_type: spec.sampling_type(), num_steps: spec.steps(), samples };
    Ok((set, stats))
}

/// Later copies of a vertex within one step become empty slots.
fn collapse_duplicates(vertices: &mut [VertexId]) {
    let mut seen = HashSet::with_capacity(vertices.len());
    for v in vertices.iter_mut() {
        if *v != SENTINEL && !seen.insert(*v) {
            *v = SENTINEL;
        }
    }
}

/// Draws one slot. Shared by both executors so keying cannot drift apart.
#[allow(clippy::too_many_arguments)]
#[inline]
fn fill_slot(
    spec: &dyn SamplingSpec,
    sample: &Sample,
    sample_id: usize,
    step: usize,
    transit: VertexId,
    neighbors: &[VertexId],
    slot: usize,
    fanout: usize,
    seed: u64,
) -> Result<(VertexId, u64)> {
    if neighbors.is_empty() {
        return Ok((SENTINEL, 0));
    }
    let draws = Draws::new(seed, sample_id as u64, step as u64, slot as u64);
    let ctx = NextContext {
        sample: SampleView { root: sample.root, completed: &sample.steps[..step] },
        sample_id,
        transit,
        neighbors,
        step,
        transit_index: slot / fanout,
        slot,
        slot_in_transit: slot % fanout,
        draws: &draws,
    };
    let picked = spec.next(&ctx);
    match picked {
        Some(v) if neighbors.binary_search(&v).is_err() => {
            Err(Error::Config(format!("spec {} returned {v}, which is not a neighbor of transit {transit}", spec.id())))
        }
        Some(v) => Ok((v, draws.used())),
        None => Ok((SENTINEL, draws.used())),
    }
}

#[allow(clippy::too_many_arguments)]
fn sample_parallel_step(
    g: &Graph,
    spec: &dyn SamplingSpec,
    samples: &[Sample],
    transits: &[Vec<VertexId>],
    step: usize,
    fanout: usize,
    seed: u64,
    workers: usize,
) -> Result<(Vec<Vec<VertexId>>, u64, u64)> {
    let chunks = parallel::map_ranges(samples.len(), workers, |range| -> Result<_> {
        let mut outputs = Vec::with_capacity(range.len());
        let (mut fetches, mut draws) = (0u64, 0u64);
        for i in range {
            let sample = &samples[i];
            let mut out = vec![SENTINEL; transits[i].len() * fanout];
            for (ti, &t) in transits[i].iter().enumerate() {
                if t == SENTINEL {
                    continue;
                }
                fetches += 1;
                let neighbors = g.neighbors_unchecked(t);
                for j in 0..fanout {
                    let slot = ti * fanout + j;
                    let (v, used) = fill_slot(spec, sample, i, step, t, neighbors, slot, fanout, seed)?;
                    out[slot] = v;
                    draws += used;
                }
            }
            outputs.push(out);
        }
        Ok((outputs, fetches, draws))
    });
    let mut outputs = Vec::with_capacity(samples.len());
    let (mut fetches, mut draws) = (0, 0);
    for chunk in chunks {
        let (o, f, d) = chunk?;
        outputs.extend(o);
        fetches += f;
        draws += d;
    }
    Ok((outputs, fetches, draws))
}

#[allow(clippy::too_many_arguments)]
fn transit_parallel_step(
    g: &Graph,
    spec: &dyn SamplingSpec,
    samples: &[Sample],
    transits: &[Vec<VertexId>],
    step: usize,
    fanout: usize,
    seed: u64,
    workers: usize,
) -> Result<(Vec<Vec<VertexId>>, u64, u64)> {
    let groups: Vec<TransitGroup> =
        group_by_transit(transits, fanout).into_iter().filter(|grp| !grp.is_skip()).collect();
    let weights: Vec<usize> = groups.iter().map(|grp| grp.members.len()).collect();
    let chunks = parallel::map_weighted_ranges(&weights, workers, |range| -> Result<_> {
        let mut filled = Vec::new();
        let mut draws = 0u64;
        for grp in &groups[range.clone()] {
            let neighbors = g.neighbors_unchecked(grp.transit);
            for &(sample, slot) in &grp.members {
                let (i, slot) = (sample as usize, slot as usize);
                let (v, used) = fill_slot(spec, &samples[i], i, step, grp.transit, neighbors, slot, fanout, seed)?;
                filled.push((sample, slot as u32, v));
                draws += used;
            }
        }
        Ok((filled, range.len() as u64, draws))
    });
    let mut outputs: Vec<Vec<VertexId>> = transits.iter().map(|t| vec![SENTINEL; t.len() * fanout]).collect();
    let (mut fetches, mut draws) = (0, 0);
    for chunk in chunks {
        let (filled, f, d) = chunk?;
        for (sample, slot, v) in filled {
            outputs[sample as usize][slot as usize] = v;
        }
        fetches += f;
        draws += d;
    }
    Ok((outputs, fetches, draws))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{khop_spec, random_walk_spec};
    use crate::generators;

    #[test]
    fn forced_chain() {
        let g = Graph::from_arcs(3, &[(0, 1), (1, 2)], false).unwrap();
        let spec = khop_spec(&[1, 1]).unwrap();
        for strategy in [Strategy::SampleParallel, Strategy::TransitParallel] {
            let (set, _) = run_sampling(&g, &spec, &[0], 5, strategy, 1).unwrap();
            assert_eq!(set.samples[0].steps[0].vertices, vec![1]);
            assert_eq!(set.samples[0].steps[1].vertices, vec![2]);
        }
    }

    #[test]
    fn dead_end_root() {
        let g = Graph::from_arcs(3, &[(0, 1)], false).unwrap();
        let spec = khop_spec(&[3, 2]).unwrap();
        let (set, stats) = execute_sample_parallel(&g, &spec, &[2], 1, 1).unwrap();
        assert!(set.samples[0].steps.iter().all(|s| s.vertices.iter().all(|&v| v == SENTINEL)));
        assert_eq!(set.samples[0].steps[1].vertices.len(), 6);
        assert_eq!(stats.draws, 0);
        // the root is fetched and found empty; the sentinel transits are not
        assert_eq!(stats.fetches_per_step, vec![1, 0]);
    }

    #[test]
    fn fanout_25_10_shape() {
        let g = generators::erdos_renyi(1000, 0.01, 4);
        let spec = khop_spec(&[25, 10]).unwrap();
        let root = (0..1000).find(|&v| g.degree(v) > 0).unwrap();
        let (set, _) = execute_sample_parallel(&g, &spec, &[root], 3, 2).unwrap();
        assert_eq!(set.samples[0].steps[0].vertices.len(), 25);
        assert_eq!(set.samples[0].steps[1].vertices.len(), 250);
    }

    #[test]
    fn star_step_zero_fetches() {
        let g = generators::star(20);
        let spec = random_walk_spec(1).unwrap();
        let roots = vec![0; 1000];
        let (_, ts) = execute_transit_parallel(&g, &spec, &roots, 1, 4).unwrap();
        let (_, ss) = execute_sample_parallel(&g, &spec, &roots, 1, 4).unwrap();
        assert_eq!(ts.adjacency_fetches, 1);
        assert_eq!(ss.adjacency_fetches, 1000);
    }

    #[test]
    fn executors_agree_on_shared_transit_fixture() {
        let g = generators::shared_transit_fixture();
        let spec = khop_spec(&[3, 2]).unwrap();
        for workers in [1, 3] {
            let (a, sa) = execute_sample_parallel(&g, &spec, &[0, 6, 1, 5], 77, workers).unwrap();
            let (b, sb) = execute_transit_parallel(&g, &spec, &[0, 6, 1, 5], 77, workers).unwrap();
            assert_eq!(a, b);
            assert_eq!(sa.draws, sb.draws);
            assert!(sb.adjacency_fetches < sa.adjacency_fetches);
        }
    }

    #[test]
    fn argument_errors() {
        let g = generators::path(3);
        let spec = khop_spec(&[1]).unwrap();
        assert!(matches!(run_sampling(&g, &spec, &[3], 0, Strategy::SampleParallel, 1), Err(Error::Argument(_))));
        assert!(matches!(run_sampling(&g, &spec, &[0], 0, Strategy::TransitParallel, 0), Err(Error::Argument(_))));
    }

    #[test]
    fn unique_collapses_within_step() {
        let mut v = vec![3, 1, 3, SENTINEL, 1, 2];
        collapse_duplicates(&mut v);
        assert_eq!(v, vec![3, 1, SENTINEL, SENTINEL, SENTINEL, 2]);
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("transit".parse::<Strategy>().unwrap(), Strategy::TransitParallel);
        assert_eq!("sample".parse::<Strategy>().unwrap(), Strategy::SampleParallel);
        assert!("gpu".parse::<Strategy>().is_err());
    }
}
