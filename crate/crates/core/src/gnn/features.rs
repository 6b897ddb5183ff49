use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{read_u32, read_u64, VertexId};
use crate::rng::prf_unit;

pub const FEATURE_MAGIC: &[u8; 4] = b"KFEA";
pub const FEATURE_FORMAT_VERSION: u32 = 1;

const FEATURE_STREAM: u64 = 0xFEA7;

/// Row-major dense feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    rows: usize,
    dim: usize,
    data: Vec<f64>,
}

impl FeatureMatrix {
    pub fn new(rows: usize, dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::argument("feature dimension must be at least 1"));
        }
        if data.len() != rows * dim {
            return Err(Error::argument(format!("expected {} values, got {}", rows * dim, data.len())));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::argument("features must be finite"));
        }
        Ok(Self { rows, dim, data })
    }

    pub fn zeros(rows: usize, dim: usize) -> Self {
        Self { rows, dim, data: vec![0.0; rows * dim] }
    }

    /// Entries uniform in `[0, 1)`, keyed by `(seed, row, column)`.
    pub fn random(rows: usize, dim: usize, seed: u64) -> Self {
        let data =
            (0..rows * dim).map(|i| prf_unit(seed, FEATURE_STREAM, (i / dim) as u64, (i % dim) as u64)).collect();
        Self { rows, dim, data }
    }

    /// Row `v` is the unit vector at column `v mod dim`.
    pub fn onehot(rows: usize, dim: usize) -> Self {
        let mut m = Self::zeros(rows, dim);
        for v in 0..rows {
            m.data[v * dim + v % dim] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Rows `ids[0], ids[1], ...` of this matrix.
    pub fn gather(&self, ids: &[VertexId]) -> Result<Self> {
        let mut data = Vec::with_capacity(ids.len() * self.dim);
        for &v in ids {
            if v as usize >= self.rows {
                return Err(Error::Bounds { vertex: v as u64, num_vertices: self.rows });
            }
            data.extend_from_slice(self.row(v as usize));
        }
        Ok(Self { rows: ids.len(), dim: self.dim, data })
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(FEATURE_MAGIC)?;
        w.write_all(&FEATURE_FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(self.rows as u64).to_le_bytes())?;
        w.write_all(&(self.dim as u32).to_le_bytes())?;
        for x in &self.data {
            w.write_all(&x.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != FEATURE_MAGIC {
            return Err(Error::format("not a feature file (bad magic)"));
        }
        let version = read_u32(&mut r)?;
        if version != FEATURE_FORMAT_VERSION {
            return Err(Error::format(format!("unsupported feature file version {version}")));
        }
        let rows = read_u64(&mut r)? as usize;
        let dim = read_u32(&mut r)? as usize;
        let mut data = Vec::with_capacity((rows * dim).min(1 << 24));
        for _ in 0..rows * dim {
            data.push(f64::from_bits(read_u64(&mut r)?));
        }
        FeatureMatrix::new(rows, dim, data).map_err(|e| Error::format(e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_round_trip() {
        let m = FeatureMatrix::random(5, 3, 2);
        let mut bytes = Vec::new();
        m.write_to(&mut bytes).unwrap();
        assert_eq!(bytes.len(), 4 + 4 + 8 + 4 + 5 * 3 * 8);
        assert_eq!(FeatureMatrix::read_from(bytes.as_slice()).unwrap(), m);
    }

    #[test]
    fn onehot_rows() {
        let m = FeatureMatrix::onehot(5, 3);
        assert_eq!(m.row(4), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn gather_and_bounds() {
        let m = FeatureMatrix::onehot(3, 3);
        let g = m.gather(&[2, 0]).unwrap();
        assert_eq!(g.row(0), m.row(2));
        assert!(m.gather(&[3]).is_err());
    }

    #[test]
    fn non_finite_rejected() {
        assert!(FeatureMatrix::new(1, 1, vec![f64::NAN]).is_err());
        assert!(FeatureMatrix::new(1, 2, vec![1.0]).is_err());
    }
}
