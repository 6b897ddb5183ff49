use khop_core::Stopwatch;

use super::{create_out_dir, join, load_graph, sample_batches};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::report::Report;

/// Samples, assembles and writes `samples*.ksmp`, `batch_NNNN.kmbb` (each with
/// a `.manifest`) and `run.manifest` into the output directory.
pub fn cmd_sample(cfg: &RunConfig) -> CliResult<Report> {
    let g = load_graph(cfg)?;
    create_out_dir(cfg)?;
    let clock = Stopwatch::start();
    let sampled = sample_batches(cfg, &g, cfg.strategy)?;
    let elapsed = clock.elapsed();

    for (name, set) in &sampled.sets {
        set.save(cfg.out.join(format!("{name}.ksmp")))?;
    }
    for (i, mb) in sampled.batches.iter().enumerate() {
        khop_core::minibatch::export_minibatch(mb, cfg.out.join(format!("batch_{i:04}.kmbb")))?;
    }

    let mut report = Report::new("sample");
    report.add("alg", cfg.alg.name());
    report.add("graph_vertices", g.num_vertices());
    report.add("graph_arcs", g.num_arcs());
    report.add("num_samples", sampled.num_samples);
    report.add("steps", cfg.alg.num_layers());
    report.add("num_batches", sampled.batches.len());
    if let Some(stats) = &sampled.stats {
        report.add("strategy", cfg.strategy);
        report.add("adjacency_fetches", stats.adjacency_fetches);
        report.add("fetches_per_step", join(&stats.fetches_per_step));
        report.add("draws", stats.draws);
    }
    report.add("wall_time_us", elapsed.as_micros());
    report.add("out", cfg.out.display());

    let mut manifest = cfg.to_manifest();
    for (k, v) in report.rows() {
        manifest.push_str(&format!("result.{k}={v}\n"));
    }
    std::fs::write(cfg.out.join("run.manifest"), manifest)?;
    Ok(report)
}
