use crate::engine::{CollectiveContext, CollectiveSampler, CollectiveScope, NextContext, SamplingSpec, SamplingType};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::rng::prf_draw;

use super::join_sizes;

/// Per-layer sample sizes, outermost layer first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerQuota {
    sizes: Vec<usize>,
}

impl LayerQuota {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::argument("layer quota needs at least one layer"));
        }
        if sizes.contains(&0) {
            return Err(Error::argument("layer quotas must be at least 1"));
        }
        Ok(Self { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn num_layers(&self) -> usize {
        self.sizes.len()
    }
}

/// Fenwick tree over integer weights supporting removal and prefix search.
struct WeightTree {
    tree: Vec<u64>,
    total: u64,
}

impl WeightTree {
    fn new(weights: &[u64]) -> Self {
        let n = weights.len();
        let mut tree = vec![0u64; n + 1];
        for (i, &w) in weights.iter().enumerate() {
            tree[i + 1] += w;
            let parent = (i + 1) + ((i + 1) & (i + 1).wrapping_neg());
            if parent <= n {
                tree[parent] += tree[i + 1];
            }
        }
        Self { tree, total: weights.iter().sum() }
    }

    fn remove(&mut self, index: usize, weight: u64) {
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] -= weight;
            i += i & i.wrapping_neg();
        }
        self.total -= weight;
    }

    /// Index `i` with `prefix(i) <= target < prefix(i + 1)`.
    fn find(&self, mut target: u64) -> usize {
        let n = self.tree.len() - 1;
        let mut pos = 0;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }
}

/// Draws `quota` distinct indices with probability proportional to `weights`.
///
/// Equivalent in distribution to repeated weighted draws that reject
/// duplicates: the `k`-th accepted draw is proportional to the weights not yet
/// taken. Draw `k` is keyed by slot counter `k`. If fewer than `quota` indices
/// have positive weight, all of them are returned. Output is ascending.
pub(crate) fn weighted_without_replacement(
    weights: &[u64],
    quota: usize,
    seed: u64,
    key: u64,
    step: u64,
) -> Vec<usize> {
    let positive = weights.iter().filter(|&&w| w > 0).count();
    if quota >= positive {
        return (0..weights.len()).filter(|&i| weights[i] > 0).collect();
    }
    let mut tree = WeightTree::new(weights);
    let mut picked = Vec::with_capacity(quota);
    for k in 0..quota {
        let r = prf_draw(seed, key, step, k as u64, tree.total).expect("remaining weight is positive");
        let idx = tree.find(r);
        tree.remove(idx, weights[idx]);
        picked.push(idx);
    }
    picked.sort_unstable();
    picked
}

/// Layer-independent importance sampling over all vertices.
///
/// Each layer draws its quota of distinct vertices from the whole graph with
/// probability proportional to `degree(v)^2`, independently of every other
/// layer.
#[derive(Debug, Clone)]
pub struct FastGcnSpec {
    quotas: LayerQuota,
    weights: Vec<u64>,
    scope: CollectiveScope,
}

pub fn fastgcn_spec(quotas: LayerQuota, g: &Graph) -> Result<FastGcnSpec> {
    let n = g.num_vertices();
    if let Some(&q) = quotas.sizes().iter().find(|&&q| q > n) {
        return Err(Error::argument(format!("layer quota {q} exceeds {n} vertices")));
    }
    let weights = (0..n as VertexId).map(|v| (g.degree(v) as u64).pow(2)).collect();
    Ok(FastGcnSpec { quotas, weights, scope: CollectiveScope::Run })
}

impl FastGcnSpec {
    pub fn with_scope(mut self, scope: CollectiveScope) -> Self {
        self.scope = scope;
        self
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }
}

impl SamplingSpec for FastGcnSpec {
    fn id(&self) -> String {
        format!("fastgcn:{}", join_sizes(self.quotas.sizes()))
    }

    fn steps(&self) -> usize {
        self.quotas.num_layers()
    }

    fn sample_size(&self, step: usize) -> usize {
        self.quotas.sizes()[step]
    }

    fn next(&self, _ctx: &NextContext<'_>) -> Option<VertexId> {
        None
    }

    fn sampling_type(&self) -> SamplingType {
        SamplingType::Collective
    }

    fn collective(&self) -> Option<&dyn CollectiveSampler> {
        Some(self)
    }

    fn collective_scope(&self) -> CollectiveScope {
        self.scope
    }
}

impl CollectiveSampler for FastGcnSpec {
    fn collective_next(&self, ctx: &CollectiveContext<'_>) -> Vec<VertexId> {
        let mut layer: Vec<VertexId> =
            weighted_without_replacement(&self.weights, ctx.quota, ctx.seed, ctx.pool_id, ctx.step as u64)
                .into_iter()
                .map(|i| i as VertexId)
                .collect();
        // Zero-degree vertices carry no weight; top up with the lowest ids.
        if layer.len() < ctx.quota {
            let fill: Vec<VertexId> = (0..self.weights.len())
                .filter(|&i| self.weights[i] == 0)
                .take(ctx.quota - layer.len())
                .map(|i| i as VertexId)
                .collect();
            layer.extend(fill);
            layer.sort_unstable();
        }
        layer
    }
}

/// Layer-dependent sampling: candidates for a layer are the neighbors of the
/// layer above, weighted by how many arcs connect them to it.
#[derive(Debug, Clone)]
pub struct LadiesSpec {
    quotas: LayerQuota,
    scope: CollectiveScope,
}

pub fn ladies_spec(quotas: LayerQuota) -> LadiesSpec {
    LadiesSpec { quotas, scope: CollectiveScope::Run }
}

impl LadiesSpec {
    pub fn with_scope(mut self, scope: CollectiveScope) -> Self {
        self.scope = scope;
        self
    }
}

impl SamplingSpec for LadiesSpec {
    fn id(&self) -> String {
        format!("ladies:{}", join_sizes(self.quotas.sizes()))
    }

    fn steps(&self) -> usize {
        self.quotas.num_layers()
    }

    fn sample_size(&self, step: usize) -> usize {
        self.quotas.sizes()[step]
    }

    fn next(&self, _ctx: &NextContext<'_>) -> Option<VertexId> {
        None
    }

    fn sampling_type(&self) -> SamplingType {
        SamplingType::Collective
    }

    fn collective(&self) -> Option<&dyn CollectiveSampler> {
        Some(self)
    }

    fn collective_scope(&self) -> CollectiveScope {
        self.scope
    }
}

impl CollectiveSampler for LadiesSpec {
    fn collective_next(&self, ctx: &CollectiveContext<'_>) -> Vec<VertexId> {
        weighted_without_replacement(ctx.arc_counts, ctx.quota, ctx.seed, ctx.pool_id, ctx.step as u64)
            .into_iter()
            .map(|i| ctx.candidates[i])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run_sampling, Strategy};
    use crate::generators;

    #[test]
    fn fenwick_find_matches_linear_scan() {
        let weights = [3u64, 0, 5, 1, 0, 0, 7, 2];
        let tree = WeightTree::new(&weights);
        let total: u64 = weights.iter().sum();
        for target in 0..total {
            let mut acc = 0;
            let expected = weights
                .iter()
                .position(|&w| {
                    acc += w;
                    acc > target
                })
                .unwrap();
            assert_eq!(tree.find(target), expected, "target {target}");
        }
    }

    #[test]
    fn fenwick_remove() {
        let weights = [3u64, 4, 5];
        let mut tree = WeightTree::new(&weights);
        tree.remove(1, 4);
        assert_eq!(tree.total, 8);
        assert_eq!(tree.find(2), 0);
        assert_eq!(tree.find(3), 2);
    }

    #[test]
    fn weighted_draw_distinct_and_complete() {
        let weights = [1u64, 2, 3, 4, 5, 0];
        for seed in 0..50 {
            let picked = weighted_without_replacement(&weights, 3, seed, 0, 0);
            assert_eq!(picked.len(), 3);
            assert!(picked.windows(2).all(|w| w[0] < w[1]));
            assert!(!picked.contains(&5));
        }
        assert_eq!(weighted_without_replacement(&weights, 5, 1, 0, 0), vec![0, 1, 2, 3, 4]);
        assert_eq!(weighted_without_replacement(&weights, 9, 1, 0, 0), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn fastgcn_quota_four_of_ten() {
        let g = generators::erdos_renyi(10, 0.4, 2);
        let spec = fastgcn_spec(LayerQuota::new(vec![4, 4]).unwrap(), &g).unwrap();
        let (set, _) = run_sampling(&g, &spec, &[0, 1], 3, Strategy::SampleParallel, 1).unwrap();
        for step in &set.samples[0].steps {
            assert_eq!(step.vertices.len(), 4);
        }
        // one pool: both samples share layer sets
        assert_eq!(set.samples[0].steps, set.samples[1].steps);
    }

    #[test]
    fn fastgcn_full_quota_is_all_vertices() {
        let mut g_edges = vec![(0, 1), (1, 2)];
        g_edges.push((2, 3));
        // vertex 4 isolated
        let g = Graph::from_edges_undirected(5, &g_edges, true).unwrap();
        let spec = fastgcn_spec(LayerQuota::new(vec![5]).unwrap(), &g).unwrap();
        let (set, _) = run_sampling(&g, &spec, &[0], 1, Strategy::TransitParallel, 1).unwrap();
        assert_eq!(set.samples[0].steps[0].vertices, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn fastgcn_regular_graph_has_equal_weights() {
        let g = generators::directed_cycle(6);
        let spec = fastgcn_spec(LayerQuota::new(vec![1]).unwrap(), &g).unwrap();
        assert!(spec.weights().iter().all(|&w| w == 1));
    }

    #[test]
    fn fastgcn_quota_too_large() {
        let g = generators::path(3);
        assert!(fastgcn_spec(LayerQuota::new(vec![4]).unwrap(), &g).is_err());
    }

    #[test]
    fn ladies_star_takes_leaves() {
        let g = generators::star(5);
        let spec = ladies_spec(LayerQuota::new(vec![3]).unwrap());
        let (set, _) = run_sampling(&g, &spec, &[0], 8, Strategy::SampleParallel, 1).unwrap();
        let layer = &set.samples[0].steps[0].vertices;
        assert_eq!(layer.len(), 3);
        assert!(layer.iter().all(|&v| (1..=5).contains(&v)));
    }

    #[test]
    fn ladies_dead_end_is_empty() {
        let g = Graph::empty(3);
        let spec = ladies_spec(LayerQuota::new(vec![2, 2]).unwrap());
        let (set, stats) = run_sampling(&g, &spec, &[1], 8, Strategy::SampleParallel, 1).unwrap();
        assert!(set.samples[0].steps.iter().all(|s| s.vertices.is_empty()));
        assert_eq!(stats.fetches_per_step, vec![1, 0]);
    }

    #[test]
    fn ladies_fewer_candidates_than_quota() {
        let g = generators::path(3);
        let spec = ladies_spec(LayerQuota::new(vec![10]).unwrap());
        let (set, _) = run_sampling(&g, &spec, &[0], 8, Strategy::SampleParallel, 1).unwrap();
        assert_eq!(set.samples[0].steps[0].vertices, vec![1]);
    }

    #[test]
    fn layer_quota_validation() {
        assert!(LayerQuota::new(vec![]).is_err());
        assert!(LayerQuota::new(vec![2, 0]).is_err());
    }
}
