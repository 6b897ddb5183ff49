use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use khop_core::engine::{Strategy, SAMPLE_FORMAT_VERSION};
use khop_core::gnn::FEATURE_FORMAT_VERSION;
use khop_core::graph::CSR_FORMAT_VERSION;
use khop_core::minibatch::MINIBATCH_FORMAT_VERSION;
use khop_core::rng::PRF_FORMAT_VERSION;

use crate::error::{CliError, CliResult};

/// Keys accepted in a config file. Flags use the same names with dashes.
pub const CONFIG_KEYS: &[&str] = &[
    "graph",
    "directed",
    "dedup",
    "alg",
    "fanouts",
    "length",
    "quotas",
    "layers",
    "parts",
    "clusters",
    "num_roots",
    "walk_length",
    "num_batches",
    "roots",
    "seed",
    "strategy",
    "workers",
    "out",
    "batch_size",
    "features",
    "dims",
    "epochs",
    "inject_fault",
];

/// Binary format versions a manifest may pin.
pub fn format_versions() -> [(&'static str, u32); 5] {
    [
        ("format.prf", PRF_FORMAT_VERSION),
        ("format.csr", CSR_FORMAT_VERSION),
        ("format.samples", SAMPLE_FORMAT_VERSION),
        ("format.minibatch", MINIBATCH_FORMAT_VERSION),
        ("format.features", FEATURE_FORMAT_VERSION),
    ]
}

/// Flags shared by every subcommand. Any flag given overrides the same key
/// from `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Flat key=value config file (a run manifest works too).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Edge list or binary graph cache.
    #[arg(long)]
    pub graph: Option<String>,
    /// Treat each edge-list line as a single arc.
    #[arg(long)]
    pub directed: bool,
    /// Keep parallel arcs from the edge list.
    #[arg(long)]
    pub keep_duplicates: bool,
    /// khop | khop-exhaustive | walk | fastgcn | ladies | clustergcn | saint-rw
    #[arg(long)]
    pub alg: Option<String>,
    /// Per-step fanouts for khop, e.g. 25,10.
    #[arg(long)]
    pub fanouts: Option<String>,
    /// Walk length for walk.
    #[arg(long)]
    pub length: Option<String>,
    /// Per-layer vertex quotas for fastgcn and ladies.
    #[arg(long)]
    pub quotas: Option<String>,
    /// Depth for khop-exhaustive, clustergcn and saint-rw.
    #[arg(long)]
    pub layers: Option<String>,
    #[arg(long)]
    pub parts: Option<String>,
    /// Clusters per batch for clustergcn.
    #[arg(long)]
    pub clusters: Option<String>,
    #[arg(long)]
    pub num_roots: Option<String>,
    #[arg(long)]
    pub walk_length: Option<String>,
    #[arg(long)]
    pub num_batches: Option<String>,
    /// Comma-separated ids, `all`, or `random:K:SEED`.
    #[arg(long)]
    pub roots: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// sample | transit
    #[arg(long)]
    pub strategy: Option<String>,
    #[arg(long)]
    pub workers: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub batch_size: Option<String>,
    /// `random`, `random:SEED`, `onehot` or `file:PATH`.
    #[arg(long)]
    pub features: Option<String>,
    /// Model dimensions d0,d1,...,dn.
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long)]
    pub epochs: Option<String>,
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}

impl RunArgs {
    fn flag_pairs(&self) -> Vec<(&'static str, String)> {
        let mut pairs = Vec::new();
        let options: [(&'static str, &Option<String>); 21] = [
            ("graph", &self.graph),
            ("alg", &self.alg),
            ("fanouts", &self.fanouts),
            ("length", &self.length),
            ("quotas", &self.quotas),
            ("layers", &self.layers),
            ("parts", &self.parts),
            ("clusters", &self.clusters),
            ("num_roots", &self.num_roots),
            ("walk_length", &self.walk_length),
            ("num_batches", &self.num_batches),
            ("roots", &self.roots),
            ("seed", &self.seed),
            ("strategy", &self.strategy),
            ("workers", &self.workers),
            ("out", &self.out),
            ("batch_size", &self.batch_size),
            ("features", &self.features),
            ("dims", &self.dims),
            ("epochs", &self.epochs),
            ("inject_fault", &self.inject_fault),
        ];
        for (k, v) in options {
            if let Some(v) = v {
                pairs.push((k, v.clone()));
            }
        }
        if self.directed {
            pairs.push(("directed", "true".into()));
        }
        if self.keep_duplicates {
            pairs.push(("dedup", "false".into()));
        }
        pairs
    }

    /// Config file (if any) overlaid with the flags.
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let mut map = match &self.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        for (k, v) in self.flag_pairs() {
            map.insert(k.to_string(), v);
        }
        RunConfig::from_map(&map)
    }
}

pub fn read_config_file(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError { kind: crate::ExitKind::Io, message: format!("{}: {e}", path.display()) })?;
    parse_config(&text)
}

/// Parses flat `key=value` lines. `#` starts a comment line. Keys under
/// `result.` are ignored so a run manifest can be fed back in; `format.`
/// keys must match this build's format versions.
pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("config line {}: expected key=value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.starts_with("result.") {
            continue;
        }
        if k.starts_with("format.") {
            let Some((_, want)) = format_versions().into_iter().find(|(name, _)| *name == k) else {
                return Err(CliError::config(format!("config line {}: unknown format key {k}", i + 1)));
            };
            if v != want.to_string() {
                return Err(CliError::config(format!("config pins {k}={v} but this build reads version {want}")));
            }
            continue;
        }
        if !CONFIG_KEYS.contains(&k) {
            return Err(CliError::config(format!("config line {}: unknown key {k}", i + 1)));
        }
        map.insert(k.to_string(), v.to_string());
    }
    Ok(map)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Algorithm {
    Khop {
        fanouts: Vec<usize>,
    },
    /// Every neighbor at every step: a bounded BFS.
    KhopExhaustive {
        layers: usize,
    },
    Walk {
        length: usize,
    },
    FastGcn {
        quotas: Vec<usize>,
    },
    Ladies {
        quotas: Vec<usize>,
    },
    ClusterGcn {
        parts: usize,
        clusters: usize,
        layers: usize,
    },
    SaintRw {
        num_roots: usize,
        walk_length: usize,
        layers: usize,
        num_batches: usize,
    },
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Khop { .. } => "khop",
            Algorithm::KhopExhaustive { .. } => "khop-exhaustive",
            Algorithm::Walk { .. } => "walk",
            Algorithm::FastGcn { .. } => "fastgcn",
            Algorithm::Ladies { .. } => "ladies",
            Algorithm::ClusterGcn { .. } => "clustergcn",
            Algorithm::SaintRw { .. } => "saint-rw",
        }
    }

    /// Depth of the mini-batches this algorithm produces.
    pub fn num_layers(&self) -> usize {
        match self {
            Algorithm::Khop { fanouts } => fanouts.len(),
            Algorithm::Walk { length } => *length,
            Algorithm::KhopExhaustive { layers } => *layers,
            Algorithm::FastGcn { quotas } | Algorithm::Ladies { quotas } => quotas.len(),
            Algorithm::ClusterGcn { layers, .. } | Algorithm::SaintRw { layers, .. } => *layers,
        }
    }

    /// Whether the algorithm draws per-root samples from `--roots`.
    pub fn uses_roots(&self) -> bool {
        !matches!(self, Algorithm::ClusterGcn { .. } | Algorithm::SaintRw { .. })
    }

    fn pairs(&self) -> Vec<(&'static str, String)> {
        match self {
            Algorithm::Khop { fanouts } => vec![("fanouts", join(fanouts))],
            Algorithm::Walk { length } => vec![("length", length.to_string())],
            Algorithm::KhopExhaustive { layers } => vec![("layers", layers.to_string())],
            Algorithm::FastGcn { quotas } | Algorithm::Ladies { quotas } => vec![("quotas", join(quotas))],
            Algorithm::ClusterGcn { clusters, layers, .. } => {
                vec![("clusters", clusters.to_string()), ("layers", layers.to_string())]
            }
            Algorithm::SaintRw { num_roots, walk_length, layers, num_batches } => vec![
                ("num_roots", num_roots.to_string()),
                ("walk_length", walk_length.to_string()),
                ("layers", layers.to_string()),
                ("num_batches", num_batches.to_string()),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootSelection {
    All,
    List(Vec<u32>),
    Random { count: usize, seed: u64 },
}

impl FromStr for RootSelection {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        if s == "all" {
            return Ok(RootSelection::All);
        }
        if let Some(rest) = s.strip_prefix("random:") {
            let (count, seed) =
                rest.split_once(':').ok_or_else(|| CliError::config(format!("roots {s:?}: expected random:K:SEED")))?;
            return Ok(RootSelection::Random { count: number("roots", count)?, seed: number("roots", seed)? });
        }
        let list = parse_list::<u32>("roots", s)?;
        if list.is_empty() {
            return Err(CliError::config("roots list is empty"));
        }
        Ok(RootSelection::List(list))
    }
}

impl std::fmt::Display for RootSelection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RootSelection::All => f.write_str("all"),
            RootSelection::List(ids) => f.write_str(&join(ids)),
            RootSelection::Random { count, seed } => write!(f, "random:{count}:{seed}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeatureSource {
    /// Uniform `[0, 1)` entries; `None` uses the run seed.
    Random(Option<u64>),
    OneHot,
    File(PathBuf),
}

impl FromStr for FeatureSource {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "random" => Ok(FeatureSource::Random(None)),
            "onehot" => Ok(FeatureSource::OneHot),
            _ => {
                if let Some(seed) = s.strip_prefix("random:") {
                    Ok(FeatureSource::Random(Some(number("features", seed)?)))
                } else if let Some(path) = s.strip_prefix("file:") {
                    Ok(FeatureSource::File(PathBuf::from(path)))
                } else {
                    Err(CliError::config(format!("features {s:?}: expected random[:SEED], onehot or file:PATH")))
                }
            }
        }
    }
}

impl std::fmt::Display for FeatureSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FeatureSource::Random(None) => f.write_str("random"),
            FeatureSource::Random(Some(s)) => write!(f, "random:{s}"),
            FeatureSource::OneHot => f.write_str("onehot"),
            FeatureSource::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// Test hooks that corrupt an intermediate result on purpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Redirect (or drop) one block arc before the forward pass.
    BlockArc,
    /// Overwrite one slot of the transit-parallel sample set.
    SampleSlot,
}

impl FromStr for Fault {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "block-arc" => Ok(Fault::BlockArc),
            "sample-slot" => Ok(Fault::SampleSlot),
            _ => Err(CliError::config(format!("unknown fault {s:?}"))),
        }
    }
}

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub graph: Option<String>,
    pub directed: bool,
    pub dedup: bool,
    pub alg: Algorithm,
    pub roots: RootSelection,
    pub seed: u64,
    pub strategy: Strategy,
    pub workers: usize,
    pub out: PathBuf,
    pub batch_size: usize,
    /// Partition count for `partition` and clustergcn.
    pub parts: usize,
    pub features: FeatureSource,
    pub dims: Option<Vec<usize>>,
    pub epochs: usize,
    pub inject_fault: Option<Fault>,
}

fn number<T: FromStr>(key: &str, s: &str) -> CliResult<T> {
    s.trim().parse().map_err(|_| CliError::config(format!("{key}: cannot parse {s:?}")))
}

fn parse_list<T: FromStr>(key: &str, s: &str) -> CliResult<Vec<T>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| number(key, t)).collect()
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn boolean(key: &str, s: &str) -> CliResult<bool> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::config(format!("{key}: expected true or false, got {s:?}"))),
    }
}

fn positive(key: &str, v: usize) -> CliResult<usize> {
    if v == 0 {
        Err(CliError::config(format!("{key} must be at least 1")))
    } else {
        Ok(v)
    }
}

impl RunConfig {
    pub fn from_map(map: &BTreeMap<String, String>) -> CliResult<Self> {
        let get = |k: &str| map.get(k).map(String::as_str);
        let count = |k: &str, default: usize| -> CliResult<usize> {
            positive(k, get(k).map(|v| number(k, v)).transpose()?.unwrap_or(default))
        };
        let sizes = |k: &str, default: &str| -> CliResult<Vec<usize>> {
            let list = parse_list::<usize>(k, get(k).unwrap_or(default))?;
            if list.is_empty() || list.contains(&0) {
                return Err(CliError::config(format!("{k} must be a non-empty list of positive sizes")));
            }
            Ok(list)
        };

        let parts = count("parts", 8)?;
        let alg = match get("alg").unwrap_or("khop") {
            "khop" => Algorithm::Khop { fanouts: sizes("fanouts", "25,10")? },
            "khop-exhaustive" => Algorithm::KhopExhaustive { layers: count("layers", 2)? },
            "walk" => Algorithm::Walk { length: count("length", 8)? },
            "fastgcn" => Algorithm::FastGcn { quotas: sizes("quotas", "64,64")? },
            "ladies" => Algorithm::Ladies { quotas: sizes("quotas", "64,64")? },
            "clustergcn" => {
                Algorithm::ClusterGcn { parts, clusters: count("clusters", 2)?, layers: count("layers", 2)? }
            }
            "saint-rw" => Algorithm::SaintRw {
                num_roots: count("num_roots", 64)?,
                walk_length: count("walk_length", 4)?,
                layers: count("layers", 2)?,
                num_batches: count("num_batches", 1)?,
            },
            other => {
                return Err(CliError::config(format!(
                    "unknown algorithm {other:?} (khop, khop-exhaustive, walk, fastgcn, ladies, clustergcn, saint-rw)"
                )))
            }
        };
        let dims = match get("dims") {
            Some(d) => {
                let dims = sizes("dims", d)?;
                if dims.len() != alg.num_layers() + 1 {
                    return Err(CliError::config(format!(
                        "dims lists {} sizes but {} needs {} (input plus one per layer)",
                        dims.len(),
                        alg.name(),
                        alg.num_layers() + 1
                    )));
                }
                Some(dims)
            }
            None => None,
        };
        let strategy =
            get("strategy").unwrap_or("transit").parse::<Strategy>().map_err(|e| CliError::config(e.to_string()))?;

        Ok(RunConfig {
            graph: get("graph").map(str::to_string),
            directed: get("directed").map(|v| boolean("directed", v)).transpose()?.unwrap_or(false),
            dedup: get("dedup").map(|v| boolean("dedup", v)).transpose()?.unwrap_or(true),
            alg,
            roots: get("roots").unwrap_or("all").parse()?,
            seed: get("seed").map(|v| number("seed", v)).transpose()?.unwrap_or(0),
            strategy,
            workers: count("workers", 1)?,
            out: PathBuf::from(get("out").unwrap_or("khop-out")),
            batch_size: count("batch_size", 64)?,
            parts,
            features: get("features").unwrap_or("random").parse()?,
            dims,
            epochs: count("epochs", 1)?,
            inject_fault: get("inject_fault").map(str::parse).transpose()?,
        })
    }

    /// Model dimensions: the configured ones, or 8 inputs, 16 hidden, 4 outputs.
    pub fn model_dims(&self) -> Vec<usize> {
        self.dims.clone().unwrap_or_else(|| {
            let layers = self.alg.num_layers();
            let mut dims = vec![8];
            dims.extend(std::iter::repeat_n(16, layers - 1));
            dims.push(4);
            dims
        })
    }

    pub fn graph_path(&self) -> CliResult<&str> {
        self.graph.as_deref().ok_or_else(|| CliError::config("no graph given (--graph or graph= in the config)"))
    }

    /// Canonical `key=value` lines that reproduce this config.
    pub fn to_manifest(&self) -> String {
        let mut lines: Vec<(&str, String)> = Vec::new();
        if let Some(g) = &self.graph {
            lines.push(("graph", g.clone()));
        }
        lines.push(("directed", self.directed.to_string()));
        lines.push(("dedup", self.dedup.to_string()));
        lines.push(("alg", self.alg.name().to_string()));
        lines.extend(self.alg.pairs());
        lines.push(("roots", self.roots.to_string()));
        lines.push(("seed", self.seed.to_string()));
        lines.push(("strategy", self.strategy.to_string()));
        lines.push(("workers", self.workers.to_string()));
        lines.push(("out", self.out.display().to_string()));
        lines.push(("batch_size", self.batch_size.to_string()));
        lines.push(("parts", self.parts.to_string()));
        lines.push(("features", self.features.to_string()));
        lines.push(("dims", join(&self.model_dims())));
        lines.push(("epochs", self.epochs.to_string()));
        let mut text: String = lines.into_iter().map(|(k, v)| format!("{k}={v}\n")).collect();
        for (k, v) in format_versions() {
            text.push_str(&format!("{k}={v}\n"));
        }
        text
    }
}
