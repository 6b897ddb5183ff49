mod bench;
mod export;
mod partition;
mod sample;
mod verify;

pub use bench::cmd_bench;
pub use export::cmd_export;
pub use partition::cmd_partition;
pub use sample::cmd_sample;
pub use verify::cmd_verify;

use khop_core::algorithms::{
    clustergcn_batches, fastgcn_spec, graphsaint_rw_spec, khop_exhaustive_spec, khop_spec, ladies_spec,
    random_walk_spec, LayerQuota,
};
use khop_core::engine::{run_sampling, AccessStats, CollectiveScope, SampleSet, SamplingSpec, Strategy};
use khop_core::gnn::FeatureMatrix;
use khop_core::minibatch::{assemble, MiniBatch};
use khop_core::partition::partition_bfs;
use khop_core::rng::prf_draw;
use khop_core::{Graph, VertexId};

use crate::config::{Algorithm, FeatureSource, RootSelection, RunConfig};
use crate::error::{CliError, CliResult, ExitKind};

const ROOT_STREAM: u64 = 0x2007;

pub(crate) fn load_graph(cfg: &RunConfig) -> CliResult<Graph> {
    let path = cfg.graph_path()?;
    khop_core::graph::load_graph(path, cfg.directed, cfg.dedup).map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("{path}: {}", err.message);
        err
    })
}

/// Root ids for a selection. Random roots are distinct.
pub fn resolve_roots(sel: &RootSelection, g: &Graph) -> CliResult<Vec<VertexId>> {
    let n = g.num_vertices();
    match sel {
        RootSelection::All => Ok((0..n as VertexId).collect()),
        RootSelection::List(ids) => {
            if let Some(&bad) = ids.iter().find(|&&v| v as usize >= n) {
                return Err(CliError::config(format!("root {bad} is not a vertex ({n} vertices)")));
            }
            Ok(ids.clone())
        }
        RootSelection::Random { count, seed } => {
            if *count > n {
                return Err(CliError::config(format!("cannot pick {count} distinct roots from {n} vertices")));
            }
            let mut pool: Vec<VertexId> = (0..n as VertexId).collect();
            for i in 0..*count {
                let j = i + prf_draw(*seed, ROOT_STREAM, 0, i as u64, (n - i) as u64)? as usize;
                pool.swap(i, j);
            }
            pool.truncate(*count);
            Ok(pool)
        }
    }
}

/// Spec for root-driven algorithms; `None` for the subgraph samplers.
pub(crate) fn build_spec(cfg: &RunConfig, g: &Graph) -> CliResult<Option<Box<dyn SamplingSpec>>> {
    let scope = CollectiveScope::Batch(cfg.batch_size);
    Ok(match &cfg.alg {
        Algorithm::Khop { fanouts } => Some(Box::new(khop_spec(fanouts)?)),
        Algorithm::KhopExhaustive { layers } => {
            Some(Box::new(khop_exhaustive_spec(&vec![g.max_degree().max(1); *layers], false)?))
        }
        Algorithm::Walk { length } => Some(Box::new(random_walk_spec(*length)?)),
        Algorithm::FastGcn { quotas } => {
            Some(Box::new(fastgcn_spec(LayerQuota::new(quotas.clone())?, g)?.with_scope(scope)))
        }
        Algorithm::Ladies { quotas } => Some(Box::new(ladies_spec(LayerQuota::new(quotas.clone())?).with_scope(scope))),
        Algorithm::ClusterGcn { .. } | Algorithm::SaintRw { .. } => None,
    })
}

pub(crate) fn features(cfg: &RunConfig, rows: usize, dim: usize) -> CliResult<FeatureMatrix> {
    let x = match &cfg.features {
        FeatureSource::Random(seed) => FeatureMatrix::random(rows, dim, seed.unwrap_or(cfg.seed)),
        FeatureSource::OneHot => FeatureMatrix::onehot(rows, dim),
        FeatureSource::File(path) => FeatureMatrix::load(path)?,
    };
    if x.rows() != rows || x.dim() != dim {
        return Err(CliError::config(format!("features are {}x{}, run needs {rows}x{dim}", x.rows(), x.dim())));
    }
    Ok(x)
}

/// Everything one sampling pass produces.
pub(crate) struct Sampled {
    /// Named sample sets (empty for clustergcn).
    pub sets: Vec<(String, SampleSet)>,
    pub batches: Vec<MiniBatch>,
    pub stats: Option<AccessStats>,
    pub num_samples: usize,
}

pub(crate) fn sample_batches(cfg: &RunConfig, g: &Graph, strategy: Strategy) -> CliResult<Sampled> {
    let layers = cfg.alg.num_layers();
    if let Some(spec) = build_spec(cfg, g)? {
        let roots = resolve_roots(&cfg.roots, g)?;
        let (set, stats) = run_sampling(g, spec.as_ref(), &roots, cfg.seed, strategy, cfg.workers)?;
        let batches = assemble(&set, g, layers, cfg.batch_size)?;
        return Ok(Sampled {
            num_samples: set.len(),
            sets: vec![("samples".into(), set)],
            batches,
            stats: Some(stats),
        });
    }
    match &cfg.alg {
        Algorithm::ClusterGcn { parts, clusters, .. } => {
            let assign = partition_bfs(g, *parts)?;
            let batches = clustergcn_batches(&assign, *clusters, cfg.seed)?
                .iter()
                .map(|vs| {
                    let (sub, map) = g.induced_subgraph(vs)?;
                    MiniBatch::from_subgraph(&sub, map, layers)
                })
                .collect::<khop_core::Result<Vec<_>>>()?;
            Ok(Sampled { sets: Vec::new(), num_samples: batches.len(), batches, stats: None })
        }
        Algorithm::SaintRw { num_roots, walk_length, num_batches, .. } => {
            let sampler = graphsaint_rw_spec(*num_roots, *walk_length)?;
            let mut sets = Vec::new();
            let mut batches = Vec::new();
            for b in 0..*num_batches {
                let (walks, vs) = sampler.sample(g, cfg.seed, b as u64, strategy, cfg.workers)?;
                let (sub, map) = g.induced_subgraph(&vs)?;
                batches.push(MiniBatch::from_subgraph(&sub, map, layers)?);
                sets.push((format!("samples_{b:04}"), walks));
            }
            Ok(Sampled { num_samples: sets.iter().map(|(_, s)| s.len()).sum(), sets, batches, stats: None })
        }
        _ => unreachable!("root-driven algorithms have a spec"),
    }
}

pub(crate) fn create_out_dir(cfg: &RunConfig) -> CliResult<()> {
    std::fs::create_dir_all(&cfg.out)
        .map_err(|e| CliError { kind: ExitKind::Io, message: format!("{}: {e}", cfg.out.display()) })
}

pub(crate) fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}
