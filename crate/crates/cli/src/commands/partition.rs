use std::fmt::Write as _;

use khop_core::partition::partition_bfs;

use super::{create_out_dir, load_graph};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::report::Report;

/// Writes `parts.txt` (`vertex part` per line) into the output directory.
pub fn cmd_partition(cfg: &RunConfig) -> CliResult<Report> {
    let g = load_graph(cfg)?;
    create_out_dir(cfg)?;
    let assign = partition_bfs(&g, cfg.parts)?;
    let mut text = format!("# {} vertices, {} parts\n", g.num_vertices(), cfg.parts);
    for (v, p) in assign.part_of().iter().enumerate() {
        writeln!(text, "{v} {p}").expect("writing to a String");
    }
    let path = cfg.out.join("parts.txt");
    std::fs::write(&path, text)?;

    let mut report = Report::new("partition");
    report.add("parts", cfg.parts);
    for (p, members) in assign.members().iter().enumerate() {
        report.add(format!("part.{p}.size"), members.len());
    }
    report.add("out", path.display());
    Ok(report)
}
