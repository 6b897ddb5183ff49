use crate::error::{Error, Result};
use crate::rng::prf_unit;

const WEIGHT_STREAM: u64 = 0x5EED_0FDE;

/// Mean-aggregator GNN weights.
///
/// Layer `k` maps `concat(h_v, mean_{u in N(v)} h_u)` of width `2 * dims[k]`
/// to width `dims[k + 1]`. All layers but the last apply a ReLU.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    dims: Vec<usize>,
    /// Row-major `dims[k + 1] x (2 * dims[k])` matrices.
    weights: Vec<Vec<f64>>,
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.len() < 2 {
        return Err(Error::argument("a model needs at least input and output dimensions"));
    }
    if dims.contains(&0) {
        return Err(Error::argument("feature dimensions must be at least 1"));
    }
    Ok(())
}

/// Weights uniform in `[-0.1, 0.1)`, a pure function of `(dims, seed)`.
pub fn init_model(dims: &[usize], seed: u64) -> Result<Model> {
    check_dims(dims)?;
    let weights = dims
        .windows(2)
        .enumerate()
        .map(|(k, w)| {
            let cols = 2 * w[0];
            (0..w[1] * cols)
                .map(|i| {
                    let u = prf_unit(seed, WEIGHT_STREAM, k as u64, i as u64);
                    -0.1 + 0.2 * u
                })
                .collect()
        })
        .collect();
    Ok(Model { dims: dims.to_vec(), weights })
}

impl Model {
    pub fn zeros(dims: &[usize]) -> Result<Self> {
        check_dims(dims)?;
        let weights = dims.windows(2).map(|w| vec![0.0; w[1] * 2 * w[0]]).collect();
        Ok(Model { dims: dims.to_vec(), weights })
    }

    pub fn from_weights(dims: &[usize], weights: Vec<Vec<f64>>) -> Result<Self> {
        check_dims(dims)?;
        if weights.len() != dims.len() - 1 {
            return Err(Error::argument("one weight matrix per layer expected"));
        }
        for (k, (w, d)) in weights.iter().zip(dims.windows(2)).enumerate() {
            if w.len() != d[1] * 2 * d[0] {
                return Err(Error::argument(format!(
                    "layer {k} weights have {} entries, expected {} x {}",
                    w.len(),
                    d[1],
                    2 * d[0]
                )));
            }
        }
        Ok(Model { dims: dims.to_vec(), weights })
    }

    pub fn num_layers(&self) -> usize {
        self.weights.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `(rows, cols)` of layer `k`'s weight matrix (0-based).
    pub fn shape(&self, k: usize) -> (usize, usize) {
        (self.dims[k + 1], 2 * self.dims[k])
    }

    pub fn weights(&self, k: usize) -> &[f64] {
        &self.weights[k]
    }

    /// `out = act(W_k * concat(h_self, agg))`.
    pub(crate) fn apply(&self, k: usize, h_self: &[f64], agg: &[f64], out: &mut [f64]) {
        let (rows, cols) = self.shape(k);
        let d_in = cols / 2;
        let w = &self.weights[k];
        let relu = k + 1 < self.num_layers();
        for (r, o) in out.iter_mut().enumerate().take(rows) {
            let row = &w[r * cols..(r + 1) * cols];
            let mut acc = 0.0;
            for i in 0..d_in {
                acc += row[i] * h_self[i];
            }
            for i in 0..d_in {
                acc += row[d_in + i] * agg[i];
            }
            *o = if relu { acc.max(0.0) } else { acc };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        assert_eq!(init_model(&[4, 8, 2], 3).unwrap(), init_model(&[4, 8, 2], 3).unwrap());
        assert_ne!(init_model(&[4, 8, 2], 3).unwrap(), init_model(&[4, 8, 2], 4).unwrap());
    }

    #[test]
    fn shapes() {
        let m = init_model(&[4, 8, 2], 1).unwrap();
        assert_eq!(m.num_layers(), 2);
        assert_eq!(m.shape(0), (8, 8));
        assert_eq!(m.shape(1), (2, 16));
        assert_eq!(m.weights(1).len(), 32);
        assert!(m.weights(0).iter().all(|w| (-0.1..0.1).contains(w)));
    }

    #[test]
    fn zero_model() {
        let m = Model::zeros(&[3, 3]).unwrap();
        assert!(m.weights(0).iter().all(|&w| w == 0.0));
    }

    #[test]
    fn bad_dims() {
        assert!(init_model(&[4], 1).is_err());
        assert!(init_model(&[4, 0, 2], 1).is_err());
        assert!(Model::from_weights(&[1, 1], vec![vec![1.0]]).is_err());
    }
}
