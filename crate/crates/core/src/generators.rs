//! Small deterministic graph families for tests, demos and benchmarks.

use crate::graph::{Graph, VertexId};
use crate::rng::prf_unit;

const GEN_STREAM: u64 = 0x6E65_7267;

/// Undirected G(n, p), deduplicated, no self-loops.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if prf_unit(seed, GEN_STREAM, u as u64, v as u64) < p {
                edges.push((u as VertexId, v as VertexId));
            }
        }
    }
    Graph::from_edges_undirected(n, &edges, true).expect("generated ids are in range")
}

/// Directed G(n, p) including possible self-loops.
pub fn erdos_renyi_directed(n: usize, p: f64, seed: u64) -> Graph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if prf_unit(seed, GEN_STREAM + 1, u as u64, v as u64) < p {
                arcs.push((u as VertexId, v as VertexId));
            }
        }
    }
    Graph::from_arcs(n, &arcs, true).expect("generated ids are in range")
}

/// Undirected star: center 0, leaves `1..=leaves`.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves as VertexId).map(|l| (0, l)).collect();
    Graph::from_edges_undirected(leaves + 1, &edges, true).expect("generated ids are in range")
}

/// Undirected path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n as VertexId).map(|v| (v - 1, v)).collect();
    Graph::from_edges_undirected(n, &edges, true).expect("generated ids are in range")
}

/// Directed cycle `0 -> 1 -> ... -> (n-1) -> 0`.
pub fn directed_cycle(n: usize) -> Graph {
    let arcs: Vec<_> = (0..n as VertexId).map(|v| (v, (v + 1) % n as VertexId)).collect();
    Graph::from_arcs(n, &arcs, true).expect("generated ids are in range")
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            edges.push((u, v));
        }
    }
    Graph::from_edges_undirected(n, &edges, true).expect("generated ids are in range")
}

/// Undirected `rows x cols` grid.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| (r * cols + c) as VertexId;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::from_edges_undirected(rows * cols, &edges, true).expect("generated ids are in range")
}

/// Two targets sharing transit structure, in the spirit of the classic
/// two-device example: targets {A, G} and {B, F} with one-hop sets
/// {D, H, F} and {C, D, G}; D is a shared transit.
///
/// Ids: A=0 B=1 C=2 D=3 E=4 F=5 G=6 H=7.
pub fn shared_transit_fixture() -> Graph {
    const A: u32 = 0;
    const B: u32 = 1;
    const C: u32 = 2;
    const D: u32 = 3;
    const E: u32 = 4;
    const F: u32 = 5;
    const G: u32 = 6;
    const H: u32 = 7;
    let edges = [(A, D), (A, H), (G, F), (G, D), (B, C), (B, D), (F, G), (F, C), (D, E), (H, E), (C, E)];
    Graph::from_edges_undirected(8, &edges, true).expect("fixture ids are in range")
}
