//! Independent oracles. Nothing here goes through the engine, the assembler or
//! the forward pass under test.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use khop_core::engine::SampleSet;
use khop_core::gnn::{FeatureMatrix, Model};
use khop_core::{Graph, VertexId, SENTINEL};

/// Vertices within `k` hops of `root` (root included), by plain BFS.
pub fn bfs_within(g: &Graph, root: VertexId, k: usize) -> BTreeSet<VertexId> {
    let mut dist: HashMap<VertexId, usize> = HashMap::new();
    dist.insert(root, 0);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == k {
            continue;
        }
        for &u in g.neighbors(v).unwrap() {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(u) {
                e.insert(d + 1);
                queue.push_back(u);
            }
        }
    }
    dist.into_keys().collect()
}

/// Arcs of the subgraph induced by `set`, as global pairs, by scanning every arc.
pub fn induced_arcs(g: &Graph, set: &[VertexId]) -> BTreeSet<(VertexId, VertexId)> {
    let members: BTreeSet<VertexId> = set.iter().copied().collect();
    g.arcs().filter(|(u, v)| members.contains(u) && members.contains(v)).collect()
}

/// Embedding of `v` after `layer` layers, evaluated recursively with scalar loops.
pub fn scalar_embedding(g: &Graph, x: &FeatureMatrix, m: &Model, v: VertexId, layer: usize) -> Vec<f64> {
    let mut memo = HashMap::new();
    embed(g, x, m, v, layer, &mut memo)
}

fn embed(
    g: &Graph,
    x: &FeatureMatrix,
    m: &Model,
    v: VertexId,
    layer: usize,
    memo: &mut HashMap<(VertexId, usize), Vec<f64>>,
) -> Vec<f64> {
    if layer == 0 {
        return x.row(v as usize).to_vec();
    }
    if let Some(h) = memo.get(&(v, layer)) {
        return h.clone();
    }
    let own = embed(g, x, m, v, layer - 1, memo);
    let d_in = own.len();
    let mut agg = vec![0.0; d_in];
    let nbrs = g.neighbors(v).unwrap();
    for &u in nbrs {
        let hu = embed(g, x, m, u, layer - 1, memo);
        for i in 0..d_in {
            agg[i] += hu[i];
        }
    }
    if !nbrs.is_empty() {
        for a in &mut agg {
            *a /= nbrs.len() as f64;
        }
    }
    let k = layer - 1;
    let (rows, cols) = m.shape(k);
    let w = m.weights(k);
    let mut out = vec![0.0; rows];
    for r in 0..rows {
        let mut acc = 0.0;
        for c in 0..cols {
            let input = if c < d_in { own[c] } else { agg[c - d_in] };
            acc += w[r * cols + c] * input;
        }
        out[r] = if layer < m.num_layers() && acc < 0.0 { 0.0 } else { acc };
    }
    memo.insert((v, layer), out.clone());
    out
}

/// Per step: (non-sentinel transit occurrences, distinct non-sentinel transits),
/// replayed from the recorded transits of an Individual sample set.
pub fn transit_counts(set: &SampleSet) -> Vec<(u64, u64)> {
    (0..set.num_steps)
        .map(|step| {
            let mut occurrences = 0u64;
            let mut distinct = BTreeSet::new();
            for s in &set.samples {
                for &t in &s.steps[step].transits {
                    if t != SENTINEL {
                        occurrences += 1;
                        distinct.insert(t);
                    }
                }
            }
            (occurrences, distinct.len() as u64)
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
