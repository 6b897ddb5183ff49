//! Browser bindings for the sampling engine. Each exported function takes
//! plain numbers and strings and returns a JSON document for the page to draw.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use khop_core::algorithms::{khop_exhaustive_spec, khop_spec, random_walk_spec};
use khop_core::engine::{run_sampling, Strategy};
use khop_core::minibatch::{assemble, replication_factor};
use khop_core::{generators, Graph, VertexId};

/// Demo graphs: `grid` (size x size), `star` (size leaves), `random`
/// (size vertices, edge probability `p`), `fixture` (the eight-vertex
/// shared-transit example).
pub fn demo_graph(kind: &str, size: usize, p: f64, seed: u64) -> Result<Graph, String> {
    let size = size.clamp(1, 400);
    Ok(match kind {
        "grid" => generators::grid(size.min(20), size.min(20)),
        "star" => generators::star(size),
        "random" => generators::erdos_renyi(size, p.clamp(0.0, 1.0), seed),
        "fixture" => generators::shared_transit_fixture(),
        _ => return Err(format!("unknown graph kind {kind:?}")),
    })
}

fn parse_sizes(s: &str) -> Result<Vec<usize>, String> {
    s.split(',').map(|t| t.trim().parse().map_err(|_| format!("bad size {t:?}"))).collect()
}

#[derive(Serialize)]
pub struct SampleView {
    pub num_vertices: usize,
    pub edges: Vec<(VertexId, VertexId)>,
    pub roots: Vec<VertexId>,
    /// Distinct vertices first reached at each step.
    pub layers: Vec<Vec<VertexId>>,
    /// `(transit, drawn, step)` for every non-empty slot.
    pub sampled: Vec<(VertexId, VertexId, usize)>,
}

/// k-hop sample from each root with per-step fanouts like `"3,2"`.
pub fn khop_sample(graph: &Graph, roots: &[VertexId], fanouts: &str, seed: u64) -> Result<SampleView, String> {
    let spec = khop_spec(&parse_sizes(fanouts)?).map_err(|e| e.to_string())?;
    let (set, _) = run_sampling(graph, &spec, roots, seed, Strategy::TransitParallel, 1).map_err(|e| e.to_string())?;
    let mut seen: std::collections::HashSet<VertexId> = roots.iter().copied().collect();
    let mut layers = Vec::new();
    let mut sampled = Vec::new();
    for step in 0..set.num_steps {
        let mut fresh = Vec::new();
        for s in &set.samples {
            for (t, v) in s.steps[step].sampled_arcs() {
                sampled.push((t, v, step));
                if seen.insert(v) {
                    fresh.push(v);
                }
            }
        }
        fresh.sort_unstable();
        layers.push(fresh);
    }
    let edges = graph.arcs().filter(|(u, v)| u < v).collect();
    Ok(SampleView { num_vertices: graph.num_vertices(), edges, roots: roots.to_vec(), layers, sampled })
}

#[derive(Serialize, Debug, PartialEq)]
pub struct FetchComparison {
    pub sample_parallel: Vec<u64>,
    pub transit_parallel: Vec<u64>,
    pub identical: bool,
}

/// Per-step adjacency reads of both executors for `walks` random walks
/// started at `root`.
pub fn fetch_comparison(
    graph: &Graph,
    root: VertexId,
    walks: usize,
    length: usize,
    seed: u64,
) -> Result<FetchComparison, String> {
    let spec = random_walk_spec(length).map_err(|e| e.to_string())?;
    let roots = vec![root; walks.max(1)];
    let (a, s) = run_sampling(graph, &spec, &roots, seed, Strategy::SampleParallel, 1).map_err(|e| e.to_string())?;
    let (b, t) = run_sampling(graph, &spec, &roots, seed, Strategy::TransitParallel, 1).map_err(|e| e.to_string())?;
    Ok(FetchComparison {
        sample_parallel: s.fetches_per_step,
        transit_parallel: t.fetches_per_step,
        identical: a.to_bytes() == b.to_bytes(),
    })
}

#[derive(Serialize, Debug, PartialEq)]
pub struct ReplicationPoint {
    pub batch_size: usize,
    pub factor: f64,
}

/// Replication factor of exhaustive `layers`-deep mini-batches over every
/// vertex, for batch sizes 1, 2, 4, ... up to the vertex count.
pub fn replication_curve(graph: &Graph, layers: usize) -> Result<Vec<ReplicationPoint>, String> {
    let layers = layers.clamp(1, 4);
    let fanout = graph.max_degree().max(1);
    let spec = khop_exhaustive_spec(&vec![fanout; layers], false).map_err(|e| e.to_string())?;
    let roots: Vec<VertexId> = (0..graph.num_vertices() as VertexId).collect();
    let (set, _) = run_sampling(graph, &spec, &roots, 0, Strategy::TransitParallel, 1).map_err(|e| e.to_string())?;
    let mut points = Vec::new();
    let mut b = 1;
    loop {
        let batches = assemble(&set, graph, layers, b).map_err(|e| e.to_string())?;
        let r = replication_factor(&batches, graph).map_err(|e| e.to_string())?;
        points.push(ReplicationPoint { batch_size: b, factor: r.factor });
        if b >= roots.len() {
            break;
        }
        b = (b * 2).min(roots.len());
    }
    Ok(points)
}

fn to_json<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let value = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

// Seeds are u32 here so the page passes plain numbers rather than BigInt.
#[wasm_bindgen]
pub fn sample_graph(
    kind: &str,
    size: usize,
    p: f64,
    graph_seed: u32,
    roots: &str,
    fanouts: &str,
    seed: u32,
) -> Result<String, JsError> {
    to_json(demo_graph(kind, size, p, graph_seed.into()).and_then(|g| {
        let roots: Vec<VertexId> = parse_sizes(roots)?.into_iter().map(|r| r as VertexId).collect();
        khop_sample(&g, &roots, fanouts, seed.into())
    }))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn compare_fetches(
    kind: &str,
    size: usize,
    p: f64,
    graph_seed: u32,
    root: u32,
    walks: usize,
    length: usize,
    seed: u32,
) -> Result<String, JsError> {
    to_json(
        demo_graph(kind, size, p, graph_seed.into())
            .and_then(|g| fetch_comparison(&g, root, walks, length, seed.into())),
    )
}

#[wasm_bindgen]
pub fn replication(kind: &str, size: usize, p: f64, graph_seed: u32, layers: usize) -> Result<String, JsError> {
    to_json(demo_graph(kind, size, p, graph_seed.into()).and_then(|g| replication_curve(&g, layers)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_layers_are_new_vertices() {
        let g = demo_graph("grid", 5, 0.0, 0).unwrap();
        let view = khop_sample(&g, &[12], "3,2", 4).unwrap();
        assert_eq!(view.layers.len(), 2);
        assert!(!view.layers.concat().contains(&12));
        assert!(view.sampled.iter().all(|&(t, v, _)| g.has_arc(t, v)));
    }

    #[test]
    fn star_fetches_collapse() {
        let g = demo_graph("star", 1, 0.0, 0).unwrap();
        let c = fetch_comparison(&g, 0, 100, 4, 1).unwrap();
        assert_eq!(c.sample_parallel, vec![100; 4]);
        assert_eq!(c.transit_parallel, vec![1; 4]);
        assert!(c.identical);
    }

    #[test]
    fn replication_reaches_one_for_a_single_batch() {
        let g = demo_graph("fixture", 0, 0.0, 0).unwrap();
        let curve = replication_curve(&g, 2).unwrap();
        assert_eq!(curve.first().unwrap().batch_size, 1);
        assert_eq!(curve.last().unwrap().batch_size, 8);
        assert_eq!(curve.last().unwrap().factor, 1.0);
        assert!(curve.windows(2).all(|w| w[0].factor >= w[1].factor));
    }

    #[test]
    fn bad_inputs_are_errors() {
        assert!(demo_graph("torus", 3, 0.0, 0).is_err());
        let g = demo_graph("path", 3, 0.0, 0);
        assert!(g.is_err());
        let g = demo_graph("star", 3, 0.0, 0).unwrap();
        assert!(khop_sample(&g, &[0], "3,x", 0).is_err());
        assert!(khop_sample(&g, &[9], "1", 0).is_err());
    }
}
