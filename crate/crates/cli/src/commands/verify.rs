use khop_core::algorithms::khop_exhaustive_spec;
use khop_core::engine::{run_sampling, SampleDiff, SampleSet, Strategy};
use khop_core::gnn::{forward_full, forward_minibatch, gather_inputs, init_model};
use khop_core::minibatch::{assemble, MiniBatch};
use khop_core::{VertexId, SENTINEL};

use super::{build_spec, features, load_graph, resolve_roots};
use crate::config::{Fault, RunConfig};
use crate::error::{CliError, CliResult};
use crate::report::Report;

pub const MAX_VERIFY_VERTICES: usize = 10_000;
pub const TOLERANCE: f64 = 1e-6;

/// Exhaustive sampling + mini-batch forward pass against the whole-graph
/// forward pass, then the configured sampler under both strategies.
pub fn cmd_verify(cfg: &RunConfig) -> CliResult<Report> {
    let g = load_graph(cfg)?;
    if g.num_vertices() > MAX_VERIFY_VERTICES {
        return Err(CliError::config(format!(
            "verify runs exhaustive sampling and is limited to {MAX_VERIFY_VERTICES} vertices, graph has {}",
            g.num_vertices()
        )));
    }
    let roots = resolve_roots(&cfg.roots, &g)?;
    let layers = cfg.alg.num_layers();
    let dims = cfg.model_dims();
    let model = init_model(&dims, cfg.seed)?;
    let x = features(cfg, g.num_vertices(), dims[0])?;

    let fanout = g.max_degree().max(1);
    let exhaustive = khop_exhaustive_spec(&vec![fanout; layers], false)?;
    let (set, _) = run_sampling(&g, &exhaustive, &roots, cfg.seed, cfg.strategy, cfg.workers)?;
    let mut batches = assemble(&set, &g, layers, cfg.batch_size)?;
    if cfg.inject_fault == Some(Fault::BlockArc) {
        corrupt_first_arc(&mut batches);
    }

    let full = forward_full(&g, &x, &model)?;
    let mut max_dev: f64 = 0.0;
    let mut first_bad: Option<(VertexId, usize, f64)> = None;
    for mb in &batches {
        let out = forward_minibatch(mb, &gather_inputs(mb, &x)?, &model)?;
        for (i, &t) in mb.targets.iter().enumerate() {
            for (d, (a, b)) in out.row(i).iter().zip(full.row(t as usize)).enumerate() {
                let dev = (a - b).abs();
                max_dev = max_dev.max(dev);
                if dev > TOLERANCE && first_bad.is_none() {
                    first_bad = Some((t, d, dev));
                }
            }
        }
    }

    let strategy_diff = compare_strategies(cfg, &g, &roots)?;

    let mut report = Report::new("verify");
    report.add("graph_vertices", g.num_vertices());
    report.add("targets", roots.len());
    report.add("layers", layers);
    report.add("num_batches", batches.len());
    report.add("max_deviation", format!("{max_dev:e}"));
    report.add("tolerance", format!("{TOLERANCE:e}"));
    report.add("forward", if first_bad.is_none() { "pass" } else { "fail" });
    report.add("strategies", if strategy_diff.is_none() { "identical" } else { "differ" });

    let mut failures = Vec::new();
    if let Some((t, d, dev)) = first_bad {
        report.add("first_divergence", format!("target={t} dim={d} deviation={dev:e}"));
        failures.push(format!("forward pass diverges at target {t}, dim {d} (|delta| = {dev:e})"));
    }
    if let Some(diff) = strategy_diff {
        report.add("first_strategy_difference", &diff);
        failures.push(format!("strategies disagree: {diff}"));
    }
    if !failures.is_empty() {
        report.failure = Some(failures.join("; "));
    }
    Ok(report)
}

fn compare_strategies(cfg: &RunConfig, g: &khop_core::Graph, roots: &[VertexId]) -> CliResult<Option<String>> {
    let layers = cfg.alg.num_layers();
    let spec = match build_spec(cfg, g)? {
        Some(spec) => spec,
        None => Box::new(khop_exhaustive_spec(&vec![g.max_degree().max(1); layers], false)?),
    };
    let (a, _) = run_sampling(g, spec.as_ref(), roots, cfg.seed, Strategy::SampleParallel, cfg.workers)?;
    let (mut b, _) = run_sampling(g, spec.as_ref(), roots, cfg.seed, Strategy::TransitParallel, cfg.workers)?;
    if cfg.inject_fault == Some(Fault::SampleSlot) {
        corrupt_first_slot(&mut b);
    }
    Ok(a.first_difference(&b).map(|d| match d {
        SampleDiff::Header(field) => format!("header field {field}"),
        SampleDiff::Slot { sample, step, slot } => format!("sample={sample} step={step} slot={slot}"),
    }))
}

fn corrupt_first_arc(batches: &mut [MiniBatch]) {
    for mb in batches {
        for block in &mut mb.layers {
            if let Some(&(s, d)) = block.arcs.first() {
                if block.num_src > 1 {
                    block.arcs[0] = ((s + 1) % block.num_src, d);
                    block.arcs.sort_unstable_by_key(|&(s, d)| (d, s));
                } else {
                    block.arcs.remove(0);
                }
                return;
            }
        }
    }
}

fn corrupt_first_slot(set: &mut SampleSet) {
    if let Some(step) = set.samples.first_mut().and_then(|s| s.steps.first_mut()) {
        if let Some(v) = step.vertices.first_mut() {
            *v = if *v == SENTINEL { 0 } else { SENTINEL };
        }
    }
}
