//! Reference forward pass.
//!
//! One layer computes, for every vertex `v`,
//! `h_v' = act(W * concat(h_v, mean_{u in N(v)} h_u))`: the message is the
//! source feature, the reduction an arithmetic mean (zero for an empty
//! neighborhood), the update a dense layer. Sums run in ascending neighbor
//! order so results are bit-for-bit reproducible.

mod features;
mod model;

pub use features::{FeatureMatrix, FEATURE_FORMAT_VERSION, FEATURE_MAGIC};
pub use model::{init_model, Model};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::minibatch::MiniBatch;

fn check_input(x: &FeatureMatrix, m: &Model) -> Result<()> {
    if x.dim() != m.dims()[0] {
        return Err(Error::argument(format!("features have dimension {}, model expects {}", x.dim(), m.dims()[0])));
    }
    Ok(())
}

/// Whole-graph forward pass; returns the last layer's features for every vertex.
pub fn forward_full(g: &Graph, x: &FeatureMatrix, m: &Model) -> Result<FeatureMatrix> {
    check_input(x, m)?;
    if x.rows() != g.num_vertices() {
        return Err(Error::argument(format!("{} feature rows for {} vertices", x.rows(), g.num_vertices())));
    }
    let mut h = x.clone();
    for k in 0..m.num_layers() {
        let d_in = m.dims()[k];
        let mut next = FeatureMatrix::zeros(g.num_vertices(), m.dims()[k + 1]);
        let mut agg = vec![0.0; d_in];
        for v in 0..g.num_vertices() {
            agg.iter_mut().for_each(|a| *a = 0.0);
            let neighbors = g.neighbors_unchecked(v as VertexId);
            for &u in neighbors {
                for (a, &x) in agg.iter_mut().zip(h.row(u as usize)) {
                    *a += x;
                }
            }
            if !neighbors.is_empty() {
                let inv = 1.0 / neighbors.len() as f64;
                agg.iter_mut().for_each(|a| *a *= inv);
            }
            m.apply(k, h.row(v), &agg, next.row_mut(v));
        }
        h = next;
    }
    Ok(h)
}

/// Mini-batch forward pass over the batch's blocks.
///
/// `x_gather` holds the input features in local-id order (see
/// [`gather_inputs`]). Returns one row per target, in target order.
pub fn forward_minibatch(mb: &MiniBatch, x_gather: &FeatureMatrix, m: &Model) -> Result<FeatureMatrix> {
    check_input(x_gather, m)?;
    mb.validate()?;
    if mb.num_layers() != m.num_layers() {
        return Err(Error::argument(format!("mini-batch has {} layers, model {}", mb.num_layers(), m.num_layers())));
    }
    if x_gather.rows() != mb.num_input_vertices {
        return Err(Error::argument(format!(
            "{} gathered rows for {} input vertices",
            x_gather.rows(),
            mb.num_input_vertices
        )));
    }
    let n = m.num_layers();
    let mut h = x_gather.clone();
    for k in 0..n {
        let block = &mb.layers[n - 1 - k];
        if block.num_src as usize != h.rows() {
            return Err(Error::Structural(format!(
                "block {} reads {} sources but {} features are available",
                n - 1 - k,
                block.num_src,
                h.rows()
            )));
        }
        let offsets = block.dst_offsets();
        let d_in = m.dims()[k];
        let mut next = FeatureMatrix::zeros(block.num_dst as usize, m.dims()[k + 1]);
        let mut agg = vec![0.0; d_in];
        for v in 0..block.num_dst as usize {
            agg.iter_mut().for_each(|a| *a = 0.0);
            let arcs = &block.arcs[offsets[v]..offsets[v + 1]];
            for &(s, _) in arcs {
                for (a, &x) in agg.iter_mut().zip(h.row(s as usize)) {
                    *a += x;
                }
            }
            if !arcs.is_empty() {
                let inv = 1.0 / arcs.len() as f64;
                agg.iter_mut().for_each(|a| *a *= inv);
            }
            m.apply(k, h.row(v), &agg, next.row_mut(v));
        }
        h = next;
    }
    Ok(h)
}

/// Input features of a mini-batch, gathered from a whole-graph matrix.
pub fn gather_inputs(mb: &MiniBatch, x: &FeatureMatrix) -> Result<FeatureMatrix> {
    x.gather(mb.input_vertices())
}
