//! Motif catalog, induced-instance enumeration, and the weighted motif
//! adjacency machinery.
//!
//! All instances use *induced* semantics: a vertex set is an instance of a
//! pattern iff its induced subgraph is isomorphic to the pattern. Four-vertex
//! classes are distinguished purely by edge count and sorted degree sequence,
//! which is a complete invariant at this size.

use crate::error::{Error, Result};
use crate::graph::Graph;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The supported motif patterns.
///
/// `M32` is the triangle; the four-vertex patterns follow a fixed catalog:
/// star (`M42`), 4-cycle (`M43`), tailed triangle (`M44`), diamond (`M45`)
/// and clique (`M46`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MotifId {
    M32,
    M42,
    M43,
    M44,
    M45,
    M46,
}

impl MotifId {
    pub const ALL: [MotifId; 6] = [
        MotifId::M32,
        MotifId::M42,
        MotifId::M43,
        MotifId::M44,
        MotifId::M45,
        MotifId::M46,
    ];

    /// Number of vertices in the pattern.
    pub fn size(self) -> usize {
        match self {
            MotifId::M32 => 3,
            _ => 4,
        }
    }

    /// Number of edges in the pattern.
    pub fn edge_count(self) -> usize {
        match self {
            MotifId::M32 => 3,
            MotifId::M42 => 3,
            MotifId::M43 => 4,
            MotifId::M44 => 4,
            MotifId::M45 => 5,
            MotifId::M46 => 6,
        }
    }

    /// Minimum degree inside the pattern. Decomposing at `k <=` this value
    /// preserves every instance intact inside one piece.
    pub fn min_degree(self) -> u32 {
        match self {
            MotifId::M32 => 2,
            MotifId::M42 => 1,
            MotifId::M43 => 2,
            MotifId::M44 => 1,
            MotifId::M45 => 2,
            MotifId::M46 => 3,
        }
    }

    /// Sorted degree sequence of the pattern.
    fn degree_signature(self) -> [u8; 4] {
        match self {
            MotifId::M32 => [0, 2, 2, 2],
            MotifId::M42 => [1, 1, 1, 3],
            MotifId::M43 => [2, 2, 2, 2],
            MotifId::M44 => [1, 2, 2, 3],
            MotifId::M45 => [2, 2, 3, 3],
            MotifId::M46 => [3, 3, 3, 3],
        }
    }
}

impl fmt::Display for MotifId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MotifId::M32 => "M32",
            MotifId::M42 => "M42",
            MotifId::M43 => "M43",
            MotifId::M44 => "M44",
            MotifId::M45 => "M45",
            MotifId::M46 => "M46",
        };
        f.write_str(s)
    }
}

impl FromStr for MotifId {
    type Err = Error;

    fn from_str(s: &str) -> Result<MotifId> {
        match s.to_ascii_uppercase().as_str() {
            "M32" => Ok(MotifId::M32),
            "M42" => Ok(MotifId::M42),
            "M43" => Ok(MotifId::M43),
            "M44" => Ok(MotifId::M44),
            "M45" => Ok(MotifId::M45),
            "M46" => Ok(MotifId::M46),
            other => Err(Error::InvalidParameter(format!(
                "unknown motif '{other}' (expected one of M32, M42..M46)"
            ))),
        }
    }
}

/// One induced instance: `vertices[..size]` sorted ascending; for triangles
/// the fourth slot is unused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MotifInstance {
    pub vertices: [u32; 4],
    pub size: u8,
}

impl MotifInstance {
    pub fn members(&self) -> &[u32] {
        &self.vertices[..self.size as usize]
    }

    fn tri(a: u32, b: u32, c: u32) -> MotifInstance {
        let mut v = [a, b, c];
        v.sort_unstable();
        MotifInstance {
            vertices: [v[0], v[1], v[2], u32::MAX],
            size: 3,
        }
    }

    fn quad(mut v: [u32; 4]) -> MotifInstance {
        v.sort_unstable();
        MotifInstance { vertices: v, size: 4 }
    }
}

/// Enumerates all induced instances of `motif` in `g`, sorted by vertex
/// tuple. Enumeration ignores edge weights.
pub fn enumerate_instances(g: &Graph, motif: MotifId) -> Vec<MotifInstance> {
    let mut out = match motif {
        MotifId::M32 => enumerate_triangles(g),
        other => enumerate_quads(g, other),
    };
    out.sort_unstable_by_key(|i| i.vertices);
    out
}

/// Triangles via edge-iterator neighborhood intersection: for each edge
/// (u, v) with u < v, common neighbors w > v close a triangle exactly once.
fn enumerate_triangles(g: &Graph) -> Vec<MotifInstance> {
    let rows: Vec<Vec<MotifInstance>> = (0..g.n() as u32)
        .into_par_iter()
        .map(|u| {
            let mut found = Vec::new();
            let nu = g.neighbors(u);
            for &v in nu.iter().filter(|&&v| v > u) {
                let nv = g.neighbors(v);
                let (mut i, mut j) = (0, 0);
                while i < nu.len() && j < nv.len() {
                    match nu[i].cmp(&nv[j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            if nu[i] > v {
                                found.push(MotifInstance::tri(u, v, nu[i]));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                }
            }
            found
        })
        .collect();
    rows.into_iter().flatten().collect()
}

/// Connected four-vertex subgraph enumeration (each connected vertex set
/// visited exactly once), classified by (edge count, degree sequence).
///
/// The expansion rule: grow from the minimum vertex `r`, keeping an
/// extension frontier of neighbors greater than `r` that are not adjacent to
/// an earlier-chosen subgraph vertex with smaller index — the standard
/// uniqueness discipline for connected induced subgraph enumeration.
fn enumerate_quads(g: &Graph, motif: MotifId) -> Vec<MotifInstance> {
    let want_edges = motif.edge_count();
    let want_sig = motif.degree_signature();
    let rows: Vec<Vec<MotifInstance>> = (0..g.n() as u32)
        .into_par_iter()
        .map(|r| {
            let mut found = Vec::new();
            let ext: Vec<u32> = g.neighbors(r).iter().copied().filter(|&v| v > r).collect();
            extend_quad(g, r, &mut vec![r], &ext, &mut found, want_edges, want_sig);
            found
        })
        .collect();
    rows.into_iter().flatten().collect()
}

fn extend_quad(
    g: &Graph,
    root: u32,
    sub: &mut Vec<u32>,
    ext: &[u32],
    out: &mut Vec<MotifInstance>,
    want_edges: usize,
    want_sig: [u8; 4],
) {
    if sub.len() == 4 {
        if classify_four(g, sub) == Some((want_edges, want_sig)) {
            out.push(MotifInstance::quad([sub[0], sub[1], sub[2], sub[3]]));
        }
        return;
    }
    for (idx, &w) in ext.iter().enumerate() {
        sub.push(w);
        if sub.len() == 4 {
            if classify_four(g, sub) == Some((want_edges, want_sig)) {
                out.push(MotifInstance::quad([sub[0], sub[1], sub[2], sub[3]]));
            }
        } else {
            // New frontier: remaining extension candidates plus exclusive
            // neighbors of w (greater than root, not adjacent to any earlier
            // subgraph vertex, not already in the frontier).
            let mut next: Vec<u32> = ext[idx + 1..].to_vec();
            for &nb in g.neighbors(w) {
                if nb <= root || sub.contains(&nb) {
                    continue;
                }
                let adjacent_earlier = sub[..sub.len() - 1]
                    .iter()
                    .any(|&s| g.has_edge(s, nb));
                if !adjacent_earlier && !ext.contains(&nb) {
                    next.push(nb);
                }
            }
            extend_quad(g, root, sub, &next, out, want_edges, want_sig);
        }
        sub.pop();
    }
}

/// (edge count, sorted degree sequence) of the induced subgraph on exactly
/// four vertices; `None` if fewer than 3 edges (cannot be connected).
fn classify_four(g: &Graph, vs: &[u32]) -> Option<(usize, [u8; 4])> {
    let mut deg = [0u8; 4];
    let mut edges = 0usize;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if g.has_edge(vs[i], vs[j]) {
                deg[i] += 1;
                deg[j] += 1;
                edges += 1;
            }
        }
    }
    if edges < 3 {
        return None;
    }
    deg.sort_unstable();
    // A degree-0 vertex means the subgraph is disconnected.
    if deg[0] == 0 {
        return None;
    }
    // 3 edges with min degree >= 1 is connected (star or path); 4+ edges on
    // 4 vertices with min degree >= 1 is always connected.
    Some((edges, deg))
}

/// Per-vertex index over an instance list: CSR from vertex to the indices of
/// instances containing it.
pub struct InstanceIndex {
    offsets: Vec<u32>,
    instance_ids: Vec<u32>,
    pub total_instances: usize,
}

impl InstanceIndex {
    pub fn build(n: usize, instances: &[MotifInstance]) -> InstanceIndex {
        let mut counts = vec![0u32; n + 1];
        for inst in instances {
            for &v in inst.members() {
                counts[v as usize + 1] += 1;
            }
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut cursor = counts;
        let mut instance_ids = vec![0u32; offsets[n] as usize];
        for (id, inst) in instances.iter().enumerate() {
            for &v in inst.members() {
                instance_ids[cursor[v as usize] as usize] = id as u32;
                cursor[v as usize] += 1;
            }
        }
        InstanceIndex {
            offsets,
            instance_ids,
            total_instances: instances.len(),
        }
    }

    /// Instances containing vertex `v` (ids into the instance list).
    pub fn for_vertex(&self, v: u32) -> &[u32] {
        let lo = self.offsets[v as usize] as usize;
        let hi = self.offsets[v as usize + 1] as usize;
        &self.instance_ids[lo..hi]
    }

    /// Motif degree of `v`: the number of instances containing it.
    pub fn motif_degree(&self, v: u32) -> usize {
        self.for_vertex(v).len()
    }
}

/// Weighted motif adjacency: W[u][v] = number of instances containing both
/// u and v (u != v). Stored as CSR over vertices with motif degree > 0
/// retained implicitly (rows of inactive vertices are empty).
pub struct MotifAdjacency {
    offsets: Vec<u32>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
}

impl MotifAdjacency {
    pub fn build(n: usize, instances: &[MotifInstance]) -> MotifAdjacency {
        // Count pair contributions per vertex, then bucket and merge.
        let mut pair_lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for inst in instances {
            let mem = inst.members();
            for i in 0..mem.len() {
                for j in 0..mem.len() {
                    if i != j {
                        pair_lists[mem[i] as usize].push(mem[j]);
                    }
                }
            }
        }
        let mut offsets = vec![0u32; n + 1];
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut degrees = vec![0.0; n];
        for v in 0..n {
            let row = &mut pair_lists[v];
            row.sort_unstable();
            let mut i = 0;
            while i < row.len() {
                let t = row[i];
                let mut c = 0u32;
                while i < row.len() && row[i] == t {
                    c += 1;
                    i += 1;
                }
                targets.push(t);
                weights.push(c as f64);
                degrees[v] += c as f64;
            }
            offsets[v + 1] = targets.len() as u32;
        }
        MotifAdjacency {
            offsets,
            targets,
            weights,
            degrees,
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, v: u32) -> (&[u32], &[f64]) {
        let lo = self.offsets[v as usize] as usize;
        let hi = self.offsets[v as usize + 1] as usize;
        (&self.targets[lo..hi], &self.weights[lo..hi])
    }

    /// Weighted motif degree: sum of W[v][*]. For pattern size s each
    /// instance containing v contributes s - 1.
    pub fn degree(&self, v: u32) -> f64 {
        self.degrees[v as usize]
    }

    /// Vertices with positive motif degree, ascending.
    pub fn active_vertices(&self) -> Vec<u32> {
        (0..self.n() as u32)
            .filter(|&v| self.degrees[v as usize] > 0.0)
            .collect()
    }
}

/// Motif conductance of a vertex set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conductance {
    /// Instances with at least one vertex on each side.
    pub cut: usize,
    /// Sum over instances of members inside the set.
    pub vol_inside: usize,
    /// Sum over instances of members outside the set.
    pub vol_outside: usize,
    /// cut / min(vol_inside, vol_outside); 1.0 when the smaller volume is 0
    /// but the cut is not, 0.0 when both are 0.
    pub phi: f64,
}

/// Computes motif conductance of `set` (vertex ids in the instance space)
/// against the full instance list.
pub fn motif_conductance(n: usize, instances: &[MotifInstance], set: &[u32]) -> Conductance {
    let mut inside = vec![false; n];
    for &v in set {
        inside[v as usize] = true;
    }
    let mut cut = 0usize;
    let mut vol_inside = 0usize;
    let mut vol_outside = 0usize;
    for inst in instances {
        let members = inst.members();
        let k = members.iter().filter(|&&v| inside[v as usize]).count();
        vol_inside += k;
        vol_outside += members.len() - k;
        if k != 0 && k != members.len() {
            cut += 1;
        }
    }
    let denom = vol_inside.min(vol_outside);
    let phi = if cut == 0 {
        0.0
    } else if denom == 0 {
        1.0
    } else {
        cut as f64 / denom as f64
    };
    Conductance {
        cut,
        vol_inside,
        vol_outside,
        phi,
    }
}
