//! Deterministic multi-source BFS partitioning.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionAssignment {
    part_of: Vec<u32>,
    num_parts: usize,
}

impl PartitionAssignment {
    pub fn new(part_of: Vec<u32>, num_parts: usize) -> Result<Self> {
        if let Some(&p) = part_of.iter().find(|&&p| p as usize >= num_parts) {
            return Err(Error::argument(format!("part id {p} >= num_parts {num_parts}")));
        }
        Ok(Self { part_of, num_parts })
    }

    pub fn num_parts(&self) -> usize {
        self.num_parts
    }

    pub fn part_of(&self) -> &[u32] {
        &self.part_of
    }

    /// Vertices of each part, ascending.
    pub fn members(&self) -> Vec<Vec<VertexId>> {
        let mut parts = vec![Vec::new(); self.num_parts];
        for (v, &p) in self.part_of.iter().enumerate() {
            parts[p as usize].push(v as VertexId);
        }
        parts
    }
}

/// Partitions `g` into `k` parts.
///
/// Seeds are the `k` highest-degree vertices (ties to the smaller id). Each
/// round, every part pops one vertex from its frontier and claims its
/// unvisited out-neighbors. Vertices never reached join the currently
/// smallest part.
pub fn partition_bfs(g: &Graph, k: usize) -> Result<PartitionAssignment> {
    let n = g.num_vertices();
    if k == 0 || k > n {
        return Err(Error::argument(format!("partition count {k} must be in 1..={n}")));
    }
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));

    const UNCLAIMED: u32 = u32::MAX;
    let mut part_of = vec![UNCLAIMED; n];
    let mut sizes = vec![1usize; k];
    let mut frontiers: Vec<VecDeque<VertexId>> = Vec::with_capacity(k);
    for (p, &seed) in order[..k].iter().enumerate() {
        part_of[seed as usize] = p as u32;
        frontiers.push(VecDeque::from([seed]));
    }

    loop {
        let mut progressed = false;
        for p in 0..k {
            let Some(v) = frontiers[p].pop_front() else { continue };
            progressed = true;
            for &u in g.neighbors_unchecked(v) {
                if part_of[u as usize] == UNCLAIMED {
                    part_of[u as usize] = p as u32;
                    sizes[p] += 1;
                    frontiers[p].push_back(u);
                }
            }
        }
        if !progressed {
            break;
        }
    }

    for part in part_of.iter_mut() {
        if *part == UNCLAIMED {
            let smallest = (0..k).min_by_key(|&p| (sizes[p], p)).unwrap();
            *part = smallest as u32;
            sizes[smallest] += 1;
        }
    }
    PartitionAssignment::new(part_of, k)
}
