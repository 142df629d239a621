//! Cluster quality metrics: modularity, co-occurrence interaction index,
//! and center-based path statistics.

use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Graph};
use std::collections::VecDeque;

/// Weighted Newman modularity of a disjoint cluster family, restricted to
/// the clustered vertices: Q = Σ_c (e_c / m − (d_c / 2m)²), where m is the
/// total edge weight of `g`, e_c the weight inside cluster c, and d_c the
/// weighted degree sum of its members.
pub fn modularity(g: &Graph, clusters: &[Vec<u32>]) -> Result<f64> {
    if g.m() == 0 {
        return Err(Error::NoEdges);
    }
    let mut label = vec![u32::MAX; g.n()];
    for (c, members) in clusters.iter().enumerate() {
        for &v in members {
            if v as usize >= g.n() {
                return Err(Error::VertexOutOfRange(v, g.n()));
            }
            if label[v as usize] != u32::MAX {
                return Err(Error::InvalidParameter(format!(
                    "vertex {v} appears in two clusters"
                )));
            }
            label[v as usize] = c as u32;
        }
    }
    let m = g.total_weight();
    let mut inside = vec![0.0; clusters.len()];
    for (u, v, w) in g.edges() {
        let (lu, lv) = (label[u as usize], label[v as usize]);
        if lu != u32::MAX && lu == lv {
            inside[lu as usize] += w;
        }
    }
    let mut q = 0.0;
    for (c, members) in clusters.iter().enumerate() {
        let d_c: f64 = members.iter().map(|&v| g.weighted_degree(v)).sum();
        q += inside[c] / m - (d_c / (2.0 * m)).powi(2);
    }
    Ok(q)
}

/// Collaboration intensity index between two authors:
/// `CII = co_papers² / (papers_i · papers_j)`.
///
/// Symmetric, lands in (0, 1] whenever `co_papers ≥ 1`, and is 0 exactly
/// when the pair never collaborated. Zero paper counts and co-paper counts
/// exceeding either marginal are rejected.
pub fn cii(papers_i: usize, papers_j: usize, co_papers: usize) -> Result<f64> {
    if papers_i == 0 || papers_j == 0 {
        return Err(Error::InvalidParameter(
            "paper counts must be positive".into(),
        ));
    }
    if co_papers > papers_i.min(papers_j) {
        return Err(Error::InvalidParameter(
            "co-paper count exceeds a marginal count".into(),
        ));
    }
    let co = co_papers as f64;
    Ok(co * co / (papers_i as f64 * papers_j as f64))
}

/// Breadth-first distances inside `g` from `src`; `u32::MAX` marks
/// unreachable vertices.
fn bfs_distances(g: &Graph, src: u32) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.n()];
    dist[src as usize] = 0;
    let mut q = VecDeque::new();
    q.push_back(src);
    while let Some(v) = q.pop_front() {
        let d = dist[v as usize] + 1;
        for &t in g.neighbors(v) {
            if dist[t as usize] == u32::MAX {
                dist[t as usize] = d;
                q.push_back(t);
            }
        }
    }
    dist
}

/// The cluster center: the member with maximum degree *inside* the cluster,
/// ties broken toward the smallest vertex id.
pub fn cluster_center(g: &Graph, members: &[u32]) -> Result<u32> {
    if members.is_empty() {
        return Err(Error::EmptySide);
    }
    let (sub, back) = induced_subgraph(g, members)?;
    let mut best = 0u32;
    for v in 1..sub.n() as u32 {
        if sub.degree(v) > sub.degree(best) {
            best = v;
        }
    }
    Ok(back[best as usize])
}

/// Cluster cohesion proxy: mean hop distance from each member to the
/// cluster center, measured inside the induced subgraph. Errors when the
/// induced subgraph is disconnected.
pub fn ccp(g: &Graph, members: &[u32]) -> Result<f64> {
    if members.is_empty() {
        return Err(Error::EmptySide);
    }
    if members.len() == 1 {
        return Ok(0.0);
    }
    let (sub, back) = induced_subgraph(g, members)?;
    let center = cluster_center(g, members)?;
    let local_center = back.iter().position(|&v| v == center).unwrap() as u32;
    let dist = bfs_distances(&sub, local_center);
    let mut total = 0u64;
    for (v, &d) in dist.iter().enumerate() {
        if d == u32::MAX {
            let _ = v;
            return Err(Error::DisconnectedCluster);
        }
        total += d as u64;
    }
    Ok(total as f64 / sub.n() as f64)
}

/// Cluster separation statistics: pairwise distances between cluster
/// centers measured in the *original* graph.
#[derive(Clone, Debug, PartialEq)]
pub struct CspResult {
    /// Mean center-to-center distance over connected pairs; `None` when no
    /// pair is connected (fewer than two clusters, or all pairs span
    /// components).
    pub mean: Option<f64>,
    pub included_pairs: usize,
    /// Pairs whose centers are mutually unreachable in `g`.
    pub excluded_pairs: usize,
}

/// Mean pairwise center separation across clusters. Unreachable center
/// pairs are excluded from the mean and reported.
pub fn csp(g: &Graph, clusters: &[Vec<u32>]) -> Result<CspResult> {
    let centers: Vec<u32> = clusters
        .iter()
        .map(|c| cluster_center(g, c))
        .collect::<Result<_>>()?;
    let mut total = 0u64;
    let mut included = 0usize;
    let mut excluded = 0usize;
    for i in 0..centers.len() {
        let dist = bfs_distances(g, centers[i]);
        for &cj in centers.iter().skip(i + 1) {
            let d = dist[cj as usize];
            if d == u32::MAX {
                excluded += 1;
            } else {
                total += d as u64;
                included += 1;
            }
        }
    }
    Ok(CspResult {
        mean: (included > 0).then(|| total as f64 / included as f64),
        included_pairs: included,
        excluded_pairs: excluded,
    })
}
