use std::time::Duration;

use khop_core::engine::{run_sampling, Strategy};
use khop_core::gnn::{forward_minibatch, gather_inputs, init_model};
use khop_core::minibatch::replication_factor;
use khop_core::rng::derive_seed;
use khop_core::Stopwatch;

use super::{build_spec, features, join, load_graph, resolve_roots, sample_batches};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::report::Report;

/// Per epoch: time sampling plus assembly against the reference forward pass
/// over the resulting batches. Also counts adjacency fetches under both
/// strategies and the replication factor of the first epoch's batches.
pub fn cmd_bench(cfg: &RunConfig) -> CliResult<Report> {
    let g = load_graph(cfg)?;
    let dims = cfg.model_dims();
    let model = init_model(&dims, cfg.seed)?;
    let x = features(cfg, g.num_vertices(), dims[0])?;

    let mut sampling = Duration::ZERO;
    let mut forward = Duration::ZERO;
    let mut first_batches = None;
    for epoch in 0..cfg.epochs {
        let epoch_cfg = RunConfig { seed: derive_seed(cfg.seed, epoch as u64), ..cfg.clone() };
        let clock = Stopwatch::start();
        let sampled = sample_batches(&epoch_cfg, &g, cfg.strategy)?;
        sampling += clock.elapsed();
        let clock = Stopwatch::start();
        for mb in &sampled.batches {
            forward_minibatch(mb, &gather_inputs(mb, &x)?, &model)?;
        }
        forward += clock.elapsed();
        if first_batches.is_none() {
            first_batches = Some(sampled.batches);
        }
    }
    let batches = first_batches.expect("epochs >= 1");
    let rep = replication_factor(&batches, &g)?;

    let mut report = Report::new("bench");
    report.add("alg", cfg.alg.name());
    report.add("epochs", cfg.epochs);
    report.add("num_batches", batches.len());
    report.add("sampling_ms", format!("{:.3}", sampling.as_secs_f64() * 1e3));
    report.add("forward_ms", format!("{:.3}", forward.as_secs_f64() * 1e3));
    let total = (sampling + forward).as_secs_f64();
    let fraction = if total > 0.0 { sampling.as_secs_f64() / total } else { 0.0 };
    report.add("sampling_fraction", format!("{fraction:.4}"));

    if let Some(spec) = build_spec(cfg, &g)? {
        let roots = resolve_roots(&cfg.roots, &g)?;
        let (_, s) = run_sampling(&g, spec.as_ref(), &roots, cfg.seed, Strategy::SampleParallel, cfg.workers)?;
        let (_, t) = run_sampling(&g, spec.as_ref(), &roots, cfg.seed, Strategy::TransitParallel, cfg.workers)?;
        report.add("fetches_sample", s.adjacency_fetches);
        report.add("fetches_transit", t.adjacency_fetches);
        report.add("fetches_sample_per_step", join(&s.fetches_per_step));
        report.add("fetches_transit_per_step", join(&t.fetches_per_step));
        let ratio =
            if t.adjacency_fetches == 0 { 1.0 } else { s.adjacency_fetches as f64 / t.adjacency_fetches as f64 };
        report.add("fetch_ratio", format!("{ratio:.4}"));
    }
    report.add("replication_factor", format!("{}", rep.factor));
    report.add("input_coverage", format!("{:.4}", rep.coverage));
    report.add("recomputed_per_layer", join(&rep.recomputed_per_layer));
    Ok(report)
}
