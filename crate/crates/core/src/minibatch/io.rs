use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{read_u32, read_u64};

use super::{Block, MiniBatch};

pub const MINIBATCH_MAGIC: &[u8; 4] = b"KMBB";
pub const MINIBATCH_FORMAT_VERSION: u32 = 1;

impl MiniBatch {
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MINIBATCH_MAGIC)?;
        w.write_all(&MINIBATCH_FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(self.layers.len() as u32).to_le_bytes())?;
        for b in &self.layers {
            w.write_all(&b.num_src.to_le_bytes())?;
            w.write_all(&b.num_dst.to_le_bytes())?;
            w.write_all(&(b.arcs.len() as u64).to_le_bytes())?;
            for &(s, d) in &b.arcs {
                w.write_all(&s.to_le_bytes())?;
                w.write_all(&d.to_le_bytes())?;
            }
        }
        for &v in &self.local_to_global {
            w.write_all(&v.to_le_bytes())?;
        }
        w.write_all(&(self.targets.len() as u32).to_le_bytes())?;
        for &t in &self.targets {
            w.write_all(&t.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_to(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    /// Reads a mini-batch; `local_to_global` length comes from the innermost block.
    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MINIBATCH_MAGIC {
            return Err(Error::format("not a mini-batch file (bad magic)"));
        }
        let version = read_u32(&mut r)?;
        if version != MINIBATCH_FORMAT_VERSION {
            return Err(Error::format(format!("unsupported mini-batch version {version}")));
        }
        let num_layers = read_u32(&mut r)? as usize;
        if num_layers == 0 {
            return Err(Error::format("mini-batch has no layers"));
        }
        let mut layers = Vec::with_capacity(num_layers);
        for _ in 0..num_layers {
            let num_src = read_u32(&mut r)?;
            let num_dst = read_u32(&mut r)?;
            let num_arcs = read_u64(&mut r)? as usize;
            let mut arcs = Vec::with_capacity(num_arcs.min(1 << 24));
            for _ in 0..num_arcs {
                arcs.push((read_u32(&mut r)?, read_u32(&mut r)?));
            }
            layers.push(Block { num_src, num_dst, arcs });
        }
        let num_input_vertices = layers.last().unwrap().num_src as usize;
        let local_to_global = (0..num_input_vertices).map(|_| read_u32(&mut r)).collect::<Result<Vec<_>>>()?;
        let num_targets = read_u32(&mut r)? as usize;
        let targets = (0..num_targets).map(|_| read_u32(&mut r)).collect::<Result<Vec<_>>>()?;
        let mb = MiniBatch { targets, layers, local_to_global, num_input_vertices };
        mb.validate().map_err(|e| Error::format(e.to_string()))?;
        Ok(mb)
    }

    /// Human-readable `key=value` summary.
    pub fn manifest(&self) -> String {
        let mut out = String::new();
        out.push_str("format=KMBB\n");
        out.push_str(&format!("version={MINIBATCH_FORMAT_VERSION}\n"));
        out.push_str(&format!("num_layers={}\n", self.layers.len()));
        out.push_str(&format!("num_targets={}\n", self.targets.len()));
        out.push_str(&format!("num_input_vertices={}\n", self.num_input_vertices));
        for (j, b) in self.layers.iter().enumerate() {
            out.push_str(&format!("layer.{j}.num_src={}\n", b.num_src));
            out.push_str(&format!("layer.{j}.num_dst={}\n", b.num_dst));
            out.push_str(&format!("layer.{j}.num_arcs={}\n", b.arcs.len()));
        }
        out
    }
}

fn manifest_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest");
    PathBuf::from(name)
}

/// Writes `path` in the binary block format and `path.manifest` beside it.
pub fn export_minibatch(mb: &MiniBatch, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = BufWriter::new(File::create(path)?);
    mb.write_to(&mut w)?;
    w.flush()?;
    std::fs::write(manifest_path(path), mb.manifest())?;
    Ok(())
}

pub fn import_minibatch(path: impl AsRef<Path>) -> Result<MiniBatch> {
    MiniBatch::read_from(BufReader::new(File::open(path)?))
}
