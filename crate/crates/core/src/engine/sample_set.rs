use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{read_u32, read_u64, VertexId, SENTINEL};

use super::spec::SamplingType;

pub const SAMPLE_MAGIC: &[u8; 4] = b"KSMP";
pub const SAMPLE_FORMAT_VERSION: u32 = 1;

/// One expanded step of one sample.
///
/// In Individual mode slot `i` was drawn from `transits[i / fanout]`, so
/// `vertices.len() == transits.len() * fanout`. In Collective mode `fanout`
/// is 0, `transits` is the pooled previous layer and `vertices` the
/// selected layer set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StepRecord {
    pub transits: Vec<VertexId>,
    pub fanout: u32,
    pub vertices: Vec<VertexId>,
}

impl StepRecord {
    pub fn transit_of_slot(&self, slot: usize) -> VertexId {
        self.transits[slot / self.fanout as usize]
    }

    /// `(transit, drawn)` pairs for every filled slot.
    pub fn sampled_arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != SENTINEL)
            .map(|(slot, &v)| (self.transit_of_slot(slot), v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub root: VertexId,
    pub steps: Vec<StepRecord>,
}

/// Output of one sampling run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSet {
    pub spec_id: String,
    pub seed: u64,
    pub sampling_type: SamplingType,
    pub num_steps: usize,
    pub samples: Vec<Sample>,
}

/// Location of the first disagreement between two sample sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleDiff {
    Header(&'static str),
    Slot { sample: usize, step: usize, slot: usize },
}

impl std::fmt::Display for SampleDiff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SampleDiff::Header(field) => write!(f, "header field `{field}` differs"),
            SampleDiff::Slot { sample, step, slot } => write!(f, "sample {sample}, step {step}, slot {slot}"),
        }
    }
}

impl SampleSet {
    pub fn roots(&self) -> Vec<VertexId> {
        self.samples.iter().map(|s| s.root).collect()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Distinct non-sentinel vertices of a sample, root included.
    pub fn vertex_set(&self, sample: usize) -> Vec<VertexId> {
        let s = &self.samples[sample];
        let mut out: Vec<VertexId> = std::iter::once(s.root)
            .chain(s.steps.iter().flat_map(|st| st.vertices.iter().copied()))
            .filter(|&v| v != SENTINEL)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn first_difference(&self, other: &SampleSet) -> Option<SampleDiff> {
        if self.spec_id != other.spec_id {
            return Some(SampleDiff::Header("spec_id"));
        }
        if self.seed != other.seed {
            return Some(SampleDiff::Header("seed"));
        }
        if self.sampling_type != other.sampling_type {
            return Some(SampleDiff::Header("sampling_type"));
        }
        if self.num_steps != other.num_steps {
            return Some(SampleDiff::Header("steps"));
        }
        if self.samples.len() != other.samples.len() {
            return Some(SampleDiff::Header("num_samples"));
        }
        for (i, (a, b)) in self.samples.iter().zip(&other.samples).enumerate() {
            if a.root != b.root {
                return Some(SampleDiff::Slot { sample: i, step: 0, slot: 0 });
            }
            for (s, (x, y)) in a.steps.iter().zip(&b.steps).enumerate() {
                if x.transits != y.transits || x.fanout != y.fanout {
                    return Some(SampleDiff::Slot { sample: i, step: s, slot: 0 });
                }
                let n = x.vertices.len().max(y.vertices.len());
                if let Some(slot) = (0..n).find(|&k| x.vertices.get(k) != y.vertices.get(k)) {
                    return Some(SampleDiff::Slot { sample: i, step: s, slot });
                }
            }
        }
        None
    }

    /// Serializes to the binary dump format.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(SAMPLE_MAGIC)?;
        w.write_all(&SAMPLE_FORMAT_VERSION.to_le_bytes())?;
        let id = self.spec_id.as_bytes();
        w.write_all(&(id.len() as u32).to_le_bytes())?;
        w.write_all(id)?;
        w.write_all(&self.seed.to_le_bytes())?;
        w.write_all(&(self.samples.len() as u64).to_le_bytes())?;
        w.write_all(&(self.num_steps as u32).to_le_bytes())?;
        let kind: u32 = match self.sampling_type {
            SamplingType::Individual => 0,
            SamplingType::Collective => 1,
        };
        w.write_all(&kind.to_le_bytes())?;
        let write_list = |w: &mut W, list: &[VertexId]| -> Result<()> {
            w.write_all(&(list.len() as u32).to_le_bytes())?;
            for &v in list {
                w.write_all(&v.to_le_bytes())?;
            }
            Ok(())
        };
        for sample in &self.samples {
            w.write_all(&sample.root.to_le_bytes())?;
            for step in &sample.steps {
                w.write_all(&step.fanout.to_le_bytes())?;
                write_list(&mut w, &step.transits)?;
                write_list(&mut w, &step.vertices)?;
            }
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_to(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != SAMPLE_MAGIC {
            return Err(Error::format("not a sample dump (bad magic)"));
        }
        let version = read_u32(&mut r)?;
        if version != SAMPLE_FORMAT_VERSION {
            return Err(Error::format(format!("unsupported sample dump version {version}")));
        }
        let id_len = read_u32(&mut r)? as usize;
        let mut id = vec![0u8; id_len];
        r.read_exact(&mut id)?;
        let spec_id = String::from_utf8(id).map_err(|_| Error::format("spec id is not UTF-8"))?;
        let seed = read_u64(&mut r)?;
        let num_samples = read_u64(&mut r)? as usize;
        let num_steps = read_u32(&mut r)? as usize;
        let sampling_type = match read_u32(&mut r)? {
            0 => SamplingType::Individual,
            1 => SamplingType::Collective,
            k => return Err(Error::format(format!("unknown sampling type {k}"))),
        };
        let read_list = |r: &mut R| -> Result<Vec<VertexId>> {
            let len = read_u32(r)? as usize;
            (0..len).map(|_| read_u32(r)).collect()
        };
        let mut samples = Vec::with_capacity(num_samples.min(1 << 20));
        for _ in 0..num_samples {
            let root = read_u32(&mut r)?;
            let mut steps = Vec::with_capacity(num_steps);
            for _ in 0..num_steps {
                let fanout = read_u32(&mut r)?;
                let transits = read_list(&mut r)?;
                let vertices = read_list(&mut r)?;
                if sampling_type == SamplingType::Individual && vertices.len() != transits.len() * fanout as usize {
                    return Err(Error::format("step shape does not match transits x fanout"));
                }
                steps.push(StepRecord { transits, fanout, vertices });
            }
            samples.push(Sample { root, steps });
        }
        Ok(SampleSet { spec_id, seed, sampling_type, num_steps, samples })
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

    fn tiny() -> SampleSet {
        SampleSet {
            spec_id: "walk:2".into(),
            seed: 9,
            sampling_type: SamplingType::Individual,
            num_steps: 2,
            samples: vec![
                Sample {
                    root: 0,
                    steps: vec![
                        StepRecord { transits: vec![0], fanout: 1, vertices: vec![1] },
                        StepRecord { transits: vec![1], fanout: 1, vertices: vec![2] },
                    ],
                },
                Sample {
                    root: 5,
                    steps: vec![
                        StepRecord { transits: vec![5], fanout: 1, vertices: vec![SENTINEL] },
                        StepRecord { transits: vec![SENTINEL], fanout: 1, vertices: vec![SENTINEL] },
                    ],
                },
            ],
        }
    }

    #[test]
    fn dump_round_trip() {
        let s = tiny();
        let bytes = s.to_bytes();
        assert_eq!(&bytes[..4], b"KSMP");
        let back = SampleSet::read_from(bytes.as_slice()).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn sentinel_encoded_as_all_ones() {
        let bytes = tiny().to_bytes();
        let tail = &bytes[bytes.len() - 4..];
        assert_eq!(tail, &[0xFF; 4]);
    }

    #[test]
    fn diff_locates_slot() {
        let a = tiny();
        let mut b = tiny();
        b.samples[0].steps[1].vertices[0] = 0;
        assert_eq!(a.first_difference(&b), Some(SampleDiff::Slot { sample: 0, step: 1, slot: 0 }));
        assert_eq!(a.first_difference(&a), None);
        b.seed = 1;
        assert_eq!(a.first_difference(&b), Some(SampleDiff::Header("seed")));
    }

    #[test]
    fn vertex_set_skips_sentinels() {
        let s = tiny();
        assert_eq!(s.vertex_set(0), vec![0, 1, 2]);
        assert_eq!(s.vertex_set(1), vec![5]);
    }

    #[test]
    fn truncated_dump_rejected() {
        let mut bytes = tiny().to_bytes();
        bytes.pop();
        assert!(SampleSet::read_from(bytes.as_slice()).is_err());
    }
}
