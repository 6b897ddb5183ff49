//! Immutable CSR graph storage.
//!
//! Neighbor lists are kept sorted ascending, which gives reproducible
//! iteration order and `O(log d)` membership tests. Self-loops are allowed;
//! duplicate arcs survive unless deduplication is requested at build time.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub type VertexId = u32;

/// Marks a sample slot that could not be filled.
pub const SENTINEL: VertexId = u32::MAX;

pub const CSR_MAGIC: &[u8; 4] = b"KHOP";
pub const CSR_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    row_offsets: Vec<u64>,
    col_indices: Vec<VertexId>,
}

impl Graph {
    /// Empty graph with `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Self { row_offsets: vec![0; n + 1], col_indices: Vec::new() }
    }

    /// Builds the canonical CSR form from an arc list.
    pub fn from_arcs(num_vertices: usize, arcs: &[(VertexId, VertexId)], dedup: bool) -> Result<Self> {
        if num_vertices >= SENTINEL as usize {
            return Err(Error::argument(format!("too many vertices: {num_vertices}")));
        }
        let mut degree = vec![0u64; num_vertices];
        for &(u, v) in arcs {
            for x in [u, v] {
                if x as usize >= num_vertices {
                    return Err(Error::Bounds { vertex: x as u64, num_vertices });
                }
            }
            degree[u as usize] += 1;
        }
        let mut row_offsets = Vec::with_capacity(num_vertices + 1);
        row_offsets.push(0u64);
        let mut acc = 0u64;
        for d in &degree {
            acc += d;
            row_offsets.push(acc);
        }
        let mut cursor: Vec<u64> = row_offsets[..num_vertices].to_vec();
        let mut col_indices = vec![0 as VertexId; arcs.len()];
        for &(u, v) in arcs {
            let c = &mut cursor[u as usize];
            col_indices[*c as usize] = v;
            *c += 1;
        }
        for v in 0..num_vertices {
            let (lo, hi) = (row_offsets[v] as usize, row_offsets[v + 1] as usize);
            col_indices[lo..hi].sort_unstable();
        }
        let mut g = Self { row_offsets, col_indices };
        if dedup {
            g = g.deduplicated();
        }
        Ok(g)
    }

    /// Builds from edges, adding both directions of every edge.
    pub fn from_edges_undirected(num_vertices: usize, edges: &[(VertexId, VertexId)], dedup: bool) -> Result<Self> {
        let mut arcs = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in edges {
            arcs.push((u, v));
            arcs.push((v, u));
        }
        Self::from_arcs(num_vertices, &arcs, dedup)
    }

    /// Validates raw CSR parts without re-sorting.
    pub fn from_csr(row_offsets: Vec<u64>, col_indices: Vec<VertexId>) -> Result<Self> {
        if row_offsets.is_empty() || row_offsets[0] != 0 {
            return Err(Error::format("row_offsets must start at 0"));
        }
        let n = row_offsets.len() - 1;
        if n >= SENTINEL as usize {
            return Err(Error::format("too many vertices"));
        }
        if *row_offsets.last().unwrap() != col_indices.len() as u64 {
            return Err(Error::format("row_offsets must end at num_arcs"));
        }
        for w in row_offsets.windows(2) {
            if w[0] > w[1] {
                return Err(Error::format("row_offsets must be non-decreasing"));
            }
            let list = &col_indices[w[0] as usize..w[1] as usize];
            if list.windows(2).any(|p| p[0] > p[1]) {
                return Err(Error::format("neighbor lists must be sorted"));
            }
        }
        if let Some(&bad) = col_indices.iter().find(|&&c| c as usize >= n) {
            return Err(Error::Bounds { vertex: bad as u64, num_vertices: n });
        }
        Ok(Self { row_offsets, col_indices })
    }

    fn deduplicated(&self) -> Self {
        let n = self.num_vertices();
        let mut row_offsets = Vec::with_capacity(n + 1);
        let mut col_indices = Vec::with_capacity(self.col_indices.len());
        row_offsets.push(0);
        for v in 0..n {
            let mut last = None;
            for &u in self.neighbors_unchecked(v as VertexId) {
                if last != Some(u) {
                    col_indices.push(u);
                    last = Some(u);
                }
            }
            row_offsets.push(col_indices.len() as u64);
        }
        Self { row_offsets, col_indices }
    }

    pub fn num_vertices(&self) -> usize {
        self.row_offsets.len() - 1
    }

    pub fn num_arcs(&self) -> usize {
        self.col_indices.len()
    }

    pub fn row_offsets(&self) -> &[u64] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[VertexId] {
        &self.col_indices
    }

    /// Out-neighbors of `v`, sorted ascending.
    pub fn neighbors(&self, v: VertexId) -> Result<&[VertexId]> {
        self.check_vertex(v)?;
        Ok(self.neighbors_unchecked(v))
    }

    /// Panics if `v` is out of range.
    #[inline]
    pub fn neighbors_unchecked(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.col_indices[self.row_offsets[v] as usize..self.row_offsets[v + 1] as usize]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        (self.row_offsets[v + 1] - self.row_offsets[v]) as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_vertices()).map(|v| self.degree(v as VertexId)).max().unwrap_or(0)
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        (u as usize) < self.num_vertices() && self.neighbors_unchecked(u).binary_search(&v).is_ok()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.num_vertices() {
            Ok(())
        } else {
            Err(Error::Bounds { vertex: v as u64, num_vertices: self.num_vertices() })
        }
    }

    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.num_vertices() as VertexId).flat_map(move |u| self.neighbors_unchecked(u).iter().map(move |&v| (u, v)))
    }

    /// Subgraph on `vertex_set` relabeled to dense ids in ascending global order.
    ///
    /// Returns the subgraph and the local → global mapping.
    pub fn induced_subgraph(&self, vertex_set: &[VertexId]) -> Result<(Graph, Vec<VertexId>)> {
        if vertex_set.is_empty() {
            return Err(Error::argument("induced_subgraph needs a non-empty vertex set"));
        }
        let mut mapping = vertex_set.to_vec();
        mapping.sort_unstable();
        mapping.dedup();
        for &v in &mapping {
            self.check_vertex(v)?;
        }
        let mut row_offsets = Vec::with_capacity(mapping.len() + 1);
        let mut col_indices = Vec::new();
        row_offsets.push(0);
        for &u in &mapping {
            // Both lists are sorted, so local ids come out sorted too.
            for &v in self.neighbors_unchecked(u) {
                if let Ok(local) = mapping.binary_search(&v) {
                    col_indices.push(local as VertexId);
                }
            }
            row_offsets.push(col_indices.len() as u64);
        }
        Ok((Graph { row_offsets, col_indices }, mapping))
    }

    /// Writes the binary CSR cache.
    pub fn write_cache<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(CSR_MAGIC)?;
        w.write_all(&CSR_FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(self.num_vertices() as u64).to_le_bytes())?;
        w.write_all(&(self.num_arcs() as u64).to_le_bytes())?;
        for &o in &self.row_offsets {
            w.write_all(&o.to_le_bytes())?;
        }
        for &c in &self.col_indices {
            w.write_all(&c.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_cache<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != CSR_MAGIC {
            return Err(Error::format("not a CSR cache (bad magic)"));
        }
        let version = read_u32(&mut r)?;
        if version != CSR_FORMAT_VERSION {
            return Err(Error::format(format!("unsupported CSR cache version {version}")));
        }
        let n = read_u64(&mut r)? as usize;
        let m = read_u64(&mut r)? as usize;
        let mut row_offsets = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            row_offsets.push(read_u64(&mut r)?);
        }
        let mut col_indices = Vec::with_capacity(m);
        for _ in 0..m {
            col_indices.push(read_u32(&mut r)?);
        }
        Graph::from_csr(row_offsets, col_indices)
    }

    pub fn save_cache(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_cache(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load_cache(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_cache(BufReader::new(File::open(path)?))
    }
}

pub(crate) fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b).map_err(truncated)?;
    Ok(u32::from_le_bytes(b))
}

pub(crate) fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).map_err(truncated)?;
    Ok(u64::from_le_bytes(b))
}

fn truncated(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::format("unexpected end of file")
    } else {
        Error::Io(e)
    }
}

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `#` are comments, except `#n <count>` which declares
/// the vertex count (allowing isolated trailing vertices).
pub fn parse_edge_list<R: BufRead>(reader: R, directed: bool, dedup: bool) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut max_id: Option<u64> = None;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let mut toks = rest.split_whitespace();
            if toks.next() == Some("n") {
                let count = toks
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .filter(|_| toks.next().is_none())
                    .ok_or_else(|| Error::Parse { line: line_no, message: "malformed #n header".into() })?;
                declared = Some(count);
            }
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let mut ids = [0u64; 2];
        for id in &mut ids {
            let tok =
                toks.next().ok_or_else(|| Error::Parse { line: line_no, message: "expected two vertex ids".into() })?;
            let val: i64 =
                tok.parse().map_err(|_| Error::Parse { line: line_no, message: format!("not an integer: {tok:?}") })?;
            if val < 0 {
                return Err(Error::Parse { line: line_no, message: format!("negative vertex id {val}") });
            }
            if val >= SENTINEL as i64 {
                return Err(Error::Parse { line: line_no, message: format!("vertex id {val} too large") });
            }
            *id = val as u64;
        }
        if toks.next().is_some() {
            return Err(Error::Parse { line: line_no, message: "expected exactly two vertex ids".into() });
        }
        max_id = max_id.max(Some(ids[0].max(ids[1])));
        edges.push((ids[0] as VertexId, ids[1] as VertexId));
    }
    let seen = max_id.map_or(0, |m| m as usize + 1);
    let n = match declared {
        Some(count) if count < seen => {
            return Err(Error::Parse {
                line: 0,
                message: format!("#n header declares {count} vertices but id {} appears", seen - 1),
            })
        }
        Some(count) => count,
        None => seen,
    };
    if directed {
        Graph::from_arcs(n, &edges, dedup)
    } else {
        Graph::from_edges_undirected(n, &edges, dedup)
    }
}

pub fn load_edge_list(path: impl AsRef<Path>, directed: bool, dedup: bool) -> Result<Graph> {
    parse_edge_list(BufReader::new(File::open(path)?), directed, dedup)
}

/// Loads either format, sniffing the cache magic.
pub fn load_graph(path: impl AsRef<Path>, directed: bool, dedup: bool) -> Result<Graph> {
    let path = path.as_ref();
    let mut head = [0u8; 4];
    let is_cache = File::open(path)?.read(&mut head)? == 4 && &head == CSR_MAGIC;
    if is_cache {
        Graph::load_cache(path)
    } else {
        load_edge_list(path, directed, dedup)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, directed: bool, dedup: bool) -> Result<Graph> {
        parse_edge_list(text.as_bytes(), directed, dedup)
    }

    #[test]
    fn path_graph() {
        let g = parse("0 1\n1 2", false, true).unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.num_arcs(), 4);
        assert_eq!(g.neighbors(1).unwrap(), &[0, 2]);
    }

    #[test]
    fn header_only() {
        let g = parse("#n 5\n", false, true).unwrap();
        assert_eq!(g.num_vertices(), 5);
        assert_eq!(g.num_arcs(), 0);
        assert!(g.neighbors(4).unwrap().is_empty());
    }

    #[test]
    fn triangle_degrees() {
        let g = parse("0 1\n1 2\n0 2", false, false).unwrap();
        assert!((0..3).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn k4_neighbors() {
        let mut text = String::new();
        for u in 0..4 {
            for v in u + 1..4 {
                text.push_str(&format!("{u} {v}\n"));
            }
        }
        let g = parse(&text, false, false).unwrap();
        assert_eq!(g.neighbors(3).unwrap(), &[0, 1, 2]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse("# a comment\n\n0 1\n  # indented\n1 0\n", true, false).unwrap();
        assert_eq!(g.num_arcs(), 2);
    }

    #[test]
    fn duplicates_and_self_loops() {
        let g = parse("0 1\n0 1\n1 1", true, false).unwrap();
        assert_eq!(g.neighbors(0).unwrap(), &[1, 1]);
        assert_eq!(g.neighbors(1).unwrap(), &[1]);
        let g = parse("0 1\n0 1\n1 1", true, true).unwrap();
        assert_eq!(g.neighbors(0).unwrap(), &[1]);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match parse("0 1\n1 x\n", true, false) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse("0 1\n3\n", true, false) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("0 1 2\n", true, false), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn negative_id_rejected() {
        assert!(matches!(parse("0 -1\n", true, false), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn header_smaller_than_ids_rejected() {
        assert!(matches!(parse("#n 2\n0 5\n", true, false), Err(Error::Parse { .. })));
    }

    #[test]
    fn out_of_range_neighbors() {
        let g = Graph::empty(3);
        assert!(matches!(g.neighbors(3), Err(Error::Bounds { vertex: 3, .. })));
        assert!(g.neighbors(2).unwrap().is_empty());
    }

    #[test]
    fn cache_round_trip_bit_exact() {
        let g = parse("0 1\n1 2\n2 0\n2 2\n#n 6", true, false).unwrap();
        let mut bytes = Vec::new();
        g.write_cache(&mut bytes).unwrap();
        assert_eq!(&bytes[..4], b"KHOP");
        assert_eq!(bytes.len(), 4 + 4 + 8 + 8 + 8 * 7 + 4 * 4);
        let back = Graph::read_cache(bytes.as_slice()).unwrap();
        assert_eq!(back, g);
        let mut again = Vec::new();
        back.write_cache(&mut again).unwrap();
        assert_eq!(again, bytes);
    }

    #[test]
    fn cache_rejects_garbage() {
        assert!(matches!(Graph::read_cache(&b"NOPE...."[..]), Err(Error::Format(_))));
        let g = Graph::empty(2);
        let mut bytes = Vec::new();
        g.write_cache(&mut bytes).unwrap();
        bytes.truncate(bytes.len() - 1);
        assert!(matches!(Graph::read_cache(bytes.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn induced_subgraph_examples() {
        let tri = parse("0 1\n1 2\n0 2", false, false).unwrap();
        let (sub, map) = tri.induced_subgraph(&[1, 0]).unwrap();
        assert_eq!(map, vec![0, 1]);
        assert_eq!(sub.num_vertices(), 2);
        assert_eq!(sub.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);

        let (sub, map) = tri.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(sub, tri);
        assert_eq!(map, vec![0, 1, 2]);

        let star = parse("0 1\n0 2\n0 3", false, false).unwrap();
        let (sub, _) = star.induced_subgraph(&[1, 2]).unwrap();
        assert_eq!(sub.num_vertices(), 2);
        assert_eq!(sub.num_arcs(), 0);

        assert!(matches!(tri.induced_subgraph(&[]), Err(Error::Argument(_))));
        assert!(matches!(tri.induced_subgraph(&[7]), Err(Error::Bounds { .. })));
    }
}
