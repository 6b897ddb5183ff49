use super::{create_out_dir, features, load_graph};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::report::Report;

/// Writes the binary graph cache and the input feature matrix.
pub fn cmd_export(cfg: &RunConfig) -> CliResult<Report> {
    let g = load_graph(cfg)?;
    create_out_dir(cfg)?;
    let graph_path = cfg.out.join("graph.khop");
    g.save_cache(&graph_path)?;
    let dim = cfg.model_dims()[0];
    let x = features(cfg, g.num_vertices(), dim)?;
    let feature_path = cfg.out.join("features.kfea");
    x.save(&feature_path)?;

    let mut report = Report::new("export");
    report.add("vertices", g.num_vertices());
    report.add("arcs", g.num_arcs());
    report.add("graph_cache", graph_path.display());
    report.add("feature_dim", dim);
    report.add("features", feature_path.display());
    Ok(report)
}
