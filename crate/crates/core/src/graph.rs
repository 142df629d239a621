//! Undirected weighted simple graphs in CSR form, plus edge-list I/O.
//!
//! Vertices are dense `u32` indices. External string ids live in a
//! [`VertexMap`] so the rest of the crate never touches strings.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

/// Immutable undirected simple graph. Parallel input edges are collapsed
/// ahead of construction by summing weights; self-loops are never stored.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    m: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices from an arbitrary edge list.
    /// Duplicate pairs (in either orientation) collapse into one edge whose
    /// weight is the sum; self-loops are dropped.
    pub fn from_edges(n: usize, edges: &[(u32, u32, f64)]) -> Graph {
        let mut pairs: Vec<(u32, u32, f64)> = edges
            .iter()
            .filter(|(u, v, _)| u != v)
            .map(|&(u, v, w)| if u < v { (u, v, w) } else { (v, u, w) })
            .collect();
        pairs.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        pairs.dedup_by(|cur, acc| {
            if cur.0 == acc.0 && cur.1 == acc.1 {
                acc.2 += cur.2;
                true
            } else {
                false
            }
        });

        let mut deg = vec![0usize; n];
        for &(u, v, _) in &pairs {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + deg[i];
        }
        let mut targets = vec![0u32; offsets[n]];
        let mut weights = vec![0f64; offsets[n]];
        let mut cursor = offsets.clone();
        for &(u, v, w) in &pairs {
            targets[cursor[u as usize]] = v;
            weights[cursor[u as usize]] = w;
            cursor[u as usize] += 1;
            targets[cursor[v as usize]] = u;
            weights[cursor[v as usize]] = w;
            cursor[v as usize] += 1;
        }
        // Adjacency comes out sorted because pairs are sorted and every
        // (u, v) with u < v is appended to u before any later row touches v.
        for i in 0..n {
            let s = offsets[i];
            let e = offsets[i + 1];
            let mut row: Vec<(u32, f64)> = targets[s..e]
                .iter()
                .copied()
                .zip(weights[s..e].iter().copied())
                .collect();
            if !row.is_sorted_by_key(|p| p.0) {
                row.sort_by_key(|p| p.0);
            }
            for (k, (t, w)) in row.into_iter().enumerate() {
                targets[s + k] = t;
                weights[s + k] = w;
            }
        }
        Graph {
            offsets,
            targets,
            weights,
            m: pairs.len(),
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    /// Number of (collapsed) undirected edges.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: u32) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn weighted_degree(&self, v: u32) -> f64 {
        let v = v as usize;
        self.weights[self.offsets[v]..self.offsets[v + 1]].iter().sum()
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn neighbor_weights(&self, v: u32) -> &[f64] {
        let v = v as usize;
        &self.weights[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn edge_weight(&self, u: u32, v: u32) -> Option<f64> {
        self.neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|i| self.neighbor_weights(u)[i])
    }

    /// Iterates each undirected edge once, as (u, v, w) with u < v.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        (0..self.n() as u32).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .zip(self.neighbor_weights(u))
                .filter(move |(&v, _)| u < v)
                .map(move |(&v, &w)| (u, v, w))
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).sum()
    }
}

/// Bidirectional map between external string ids and dense indices.
/// Indices are assigned in order of first appearance, so loading the same
/// file always yields the same numbering.
#[derive(Clone, Debug, Default)]
pub struct VertexMap {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl VertexMap {
    pub fn new() -> VertexMap {
        VertexMap::default()
    }

    /// Returns the dense index for `name`, inserting it if unseen.
    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len() as u32;
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), i);
        i
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: u32) -> &str {
        &self.names[v as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Identity map 0..n with the decimal digits as names.
    pub fn numeric(n: usize) -> VertexMap {
        let mut m = VertexMap::new();
        for i in 0..n {
            m.intern(&i.to_string());
        }
        m
    }
}

/// Borrowed view of a vertex subset of a parent graph.
#[derive(Clone, Copy, Debug)]
pub struct SubgraphRef<'g> {
    pub parent: &'g Graph,
    pub members: &'g [u32],
}

impl<'g> SubgraphRef<'g> {
    pub fn new(parent: &'g Graph, members: &'g [u32]) -> SubgraphRef<'g> {
        SubgraphRef { parent, members }
    }

    pub fn induced(&self) -> Result<(Graph, Vec<u32>)> {
        induced_subgraph(self.parent, self.members)
    }
}

/// Counters reported by [`load_edge_list`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub lines_read: usize,
    pub self_loops_dropped: usize,
    pub duplicates_merged: usize,
}

/// Reads a whitespace-separated edge list: `u v [w]` per line, `#` starts a
/// comment. With `weighted = false` the third column is ignored and every
/// line counts weight 1, so duplicate lines accumulate multiplicity.
pub fn load_edge_list(path: &Path, weighted: bool) -> Result<(Graph, VertexMap, LoadReport)> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut map = VertexMap::new();
    let mut edges: Vec<(u32, u32, f64)> = Vec::new();
    let mut report = LoadReport::default();

    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        let body = match line.split_once('#') {
            Some((before, _)) => before,
            None => line.as_str(),
        };
        let mut fields = body.split_whitespace();
        let Some(a) = fields.next() else { continue };
        let Some(b) = fields.next() else {
            return Err(Error::Parse {
                path: path.to_owned(),
                line: lineno,
                msg: "expected at least two columns".into(),
            });
        };
        let w = if weighted {
            match fields.next() {
                Some(raw) => raw.parse::<f64>().map_err(|_| Error::Parse {
                    path: path.to_owned(),
                    line: lineno,
                    msg: format!("bad weight {raw:?}"),
                })?,
                None => 1.0,
            }
        } else {
            1.0
        };
        if !w.is_finite() || w < 0.0 {
            return Err(Error::NegativeWeight {
                path: path.to_owned(),
                line: lineno,
                weight: w,
            });
        }
        report.lines_read += 1;
        let u = map.intern(a);
        let v = map.intern(b);
        if u == v {
            report.self_loops_dropped += 1;
            continue;
        }
        edges.push((u, v, w));
    }

    let g = Graph::from_edges(map.len(), &edges);
    report.duplicates_merged = edges.len().saturating_sub(g.m());
    Ok((g, map, report))
}

/// Writes a graph back as `u v w` lines using the map's external names.
/// Weights use Rust's shortest round-trip float formatting.
pub fn write_edge_list(path: &Path, g: &Graph, map: &VertexMap) -> Result<()> {
    let mut out = String::new();
    for (u, v, w) in g.edges() {
        writeln!(out, "{}\t{}\t{}", map.name(u), map.name(v), w).expect("string write");
    }
    std::fs::write(path, out).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// Induced subgraph on `members` (deduplicated, sorted ascending).
/// Returns the new graph plus the back-map: vertex `i` of the subgraph is
/// `back[i]` in the parent.
pub fn induced_subgraph(g: &Graph, members: &[u32]) -> Result<(Graph, Vec<u32>)> {
    let mut back: Vec<u32> = members.to_vec();
    back.sort_unstable();
    back.dedup();
    if let Some(&v) = back.last() {
        if v as usize >= g.n() {
            return Err(Error::VertexOutOfRange(v, g.n()));
        }
    }
    let mut local = vec![u32::MAX; g.n()];
    for (i, &v) in back.iter().enumerate() {
        local[v as usize] = i as u32;
    }
    let mut edges = Vec::new();
    for &v in &back {
        let lv = local[v as usize];
        for (&t, &w) in g.neighbors(v).iter().zip(g.neighbor_weights(v)) {
            if t > v && local[t as usize] != u32::MAX {
                edges.push((lv, local[t as usize], w));
            }
        }
    }
    Ok((Graph::from_edges(back.len(), &edges), back))
}

/// Connected components as sorted vertex lists, ordered by smallest member.
pub fn connected_components(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n as u32 {
        if seen[s as usize] {
            continue;
        }
        seen[s as usize] = true;
        stack.push(s);
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &t in g.neighbors(v) {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().expect("tmp file");
        f.write_all(contents.as_bytes()).expect("write");
        f
    }

    #[test]
    fn duplicate_lines_sum_weights() {
        let f = write_tmp("a b\nb c\na b\n");
        let (g, map, report) = load_edge_list(f.path(), false).unwrap();
        let a = map.get("a").unwrap();
        let b = map.get("b").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert_eq!(g.edge_weight(a, b), Some(2.0));
        assert_eq!(report.duplicates_merged, 1);
        assert_eq!(report.self_loops_dropped, 0);
    }

    #[test]
    fn self_loops_dropped_and_counted() {
        let f = write_tmp("a a 3.0\na b 1.0\n# comment line\nb c 2.5 # trailing\n");
        let (g, map, report) = load_edge_list(f.path(), true).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert_eq!(report.self_loops_dropped, 1);
        let b = map.get("b").unwrap();
        let c = map.get("c").unwrap();
        assert_eq!(g.edge_weight(b, c), Some(2.5));
    }

    #[test]
    fn negative_weight_rejected() {
        let f = write_tmp("a b -1\n");
        let err = load_edge_list(f.path(), true).unwrap_err();
        assert!(matches!(err, Error::NegativeWeight { line: 1, .. }));
    }

    #[test]
    fn malformed_line_reports_position() {
        let f = write_tmp("a b\nc\n");
        let err = load_edge_list(f.path(), false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_edge_list(Path::new("/nonexistent/edges.tsv"), false).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn induced_subgraph_keeps_inner_edges() {
        // Path 0-1-2-3 plus chord 0-2.
        let g = Graph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 2, 1.0)]);
        let (sub, back) = induced_subgraph(&g, &[2, 0, 1]).unwrap();
        assert_eq!(back, vec![0, 1, 2]);
        assert_eq!(sub.m(), 3);
        assert!(sub.has_edge(0, 2));
        assert!(induced_subgraph(&g, &[9]).is_err());
    }

    #[test]
    fn components_sorted_by_min_member() {
        let g = Graph::from_edges(6, &[(4, 5, 1.0), (0, 1, 1.0), (1, 2, 1.0)]);
        let comps = connected_components(&g);
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3], vec![4, 5]]);
    }

    #[test]
    fn roundtrip_preserves_structure() {
        let f = write_tmp("a b 1.5\nb c 2\na c 0.25\nd c 1\n");
        let (g, map, _) = load_edge_list(f.path(), true).unwrap();
        let out = tempfile::NamedTempFile::new().unwrap();
        write_edge_list(out.path(), &g, &map).unwrap();
        let (g2, map2, _) = load_edge_list(out.path(), true).unwrap();
        assert_eq!(g.n(), g2.n());
        assert_eq!(g.m(), g2.m());
        for (u, v, w) in g.edges() {
            let u2 = map2.get(map.name(u)).unwrap();
            let v2 = map2.get(map.name(v)).unwrap();
            assert_eq!(g2.edge_weight(u2, v2), Some(w));
        }
    }

    #[test]
    fn degree_sum_is_twice_edge_count() {
        let g = Graph::from_edges(5, &[(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0), (0, 4, 1.0)]);
        let total: usize = (0..g.n() as u32).map(|v| g.degree(v)).sum();
        assert_eq!(total, 2 * g.m());
    }
}
