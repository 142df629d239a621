//! Independent oracles for the acceptance suite.
//!
//! Every function here recomputes a quantity the library also computes, via
//! a different algorithm — exhaustive enumeration, bounded max-flow, cyclic
//! Jacobi — and never calls the code path it is used to validate.

#![allow(dead_code)] // each acceptance test pulls a different subset

use motifcut_core::{Graph, MotifId, MotifInstance};
use rand::rngs::StdRng;
use rand::Rng;

// ---------------------------------------------------------------------------
// Random graphs and fixtures
// ---------------------------------------------------------------------------

/// Erdős–Rényi G(n, p) with unit weights.
pub fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if rng.gen_bool(p) {
                edges.push((u, v, 1.0));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Random connected simple graph: spanning tree plus `extra` distinct
/// chords, all unit weight.
pub fn random_connected(rng: &mut StdRng, n: usize, extra: usize) -> Graph {
    let mut pairs: Vec<(u32, u32)> = (1..n as u32)
        .map(|v| (rng.gen_range(0..v), v))
        .collect();
    for _ in 0..extra {
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        if u != v {
            pairs.push((u.min(v), u.max(v)));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let edges: Vec<(u32, u32, f64)> = pairs.into_iter().map(|(u, v)| (u, v, 1.0)).collect();
    Graph::from_edges(n, &edges)
}

/// Two K4s joined by two vertex-disjoint bridge edges: the canonical
/// decomposition fixture (3-edge-connected cliques behind a 2-edge cut).
pub fn barbell() -> Graph {
    let mut edges = Vec::new();
    for i in 0..4u32 {
        for j in (i + 1)..4 {
            edges.push((i, j, 1.0));
            edges.push((i + 4, j + 4, 1.0));
        }
    }
    edges.push((3, 4, 1.0));
    edges.push((2, 5, 1.0));
    Graph::from_edges(8, &edges)
}

// ---------------------------------------------------------------------------
// Exhaustive minimum cut
// ---------------------------------------------------------------------------

/// Minimum cut weight over all 2^(n-1) - 1 bipartitions (vertex 0 pinned to
/// one side). Graphs must have n in 2..=20.
pub fn brute_min_cut(g: &Graph) -> f64 {
    let n = g.n();
    assert!((2..=20).contains(&n), "exhaustive cut needs 2 <= n <= 20");
    let edges: Vec<(u32, u32, f64)> = g.edges().collect();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << (n - 1)) {
        let side = |v: u32| v != 0 && (mask >> (v - 1)) & 1 == 1;
        let w: f64 = edges
            .iter()
            .filter(|&&(u, v, _)| side(u) != side(v))
            .map(|&(_, _, w)| w)
            .sum();
        if w < best {
            best = w;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Maximal k-edge-connected family via bounded max-flow
// ---------------------------------------------------------------------------

/// All maximal vertex sets (|S| >= 2) whose induced subgraph is
/// k-edge-connected, as sorted member lists ordered by smallest member.
/// Certification is by unit-capacity max-flow (Edmonds–Karp bounded at k),
/// entirely independent of the contraction engine under test.
pub fn brute_max_kec_family(g: &Graph, k: u32) -> Vec<Vec<u32>> {
    let n = g.n();
    assert!(n <= 16, "oracle is exponential in n");
    let adj_mask: Vec<u32> = (0..n as u32)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &t| m | (1 << t)))
        .collect();

    let mut candidates: Vec<u32> = Vec::new();
    'mask: for mask in 1u32..(1 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        // Necessary condition: induced degree >= k everywhere.
        for v in 0..n {
            if mask >> v & 1 == 1 && (adj_mask[v] & mask).count_ones() < k {
                continue 'mask;
            }
        }
        if !mask_connected(mask, &adj_mask) {
            continue;
        }
        if induced_edge_connectivity_at_least(g, mask, k) {
            candidates.push(mask);
        }
    }

    // Keep only set-maximal candidates.
    let mut family: Vec<u32> = candidates
        .iter()
        .copied()
        .filter(|&m| !candidates.iter().any(|&o| o != m && o & m == m))
        .collect();
    family.sort_by_key(|m| m.trailing_zeros());
    family
        .into_iter()
        .map(|m| (0..n as u32).filter(|&v| m >> v & 1 == 1).collect())
        .collect()
}

fn mask_connected(mask: u32, adj_mask: &[u32]) -> bool {
    let start = mask.trailing_zeros() as usize;
    let mut seen = 1u32 << start;
    loop {
        let mut next = seen;
        let mut bits = seen;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            next |= adj_mask[v] & mask;
        }
        if next == seen {
            break;
        }
        seen = next;
    }
    seen == mask
}

/// True iff the subgraph induced on `mask` has edge connectivity >= k,
/// decided by n-1 bounded s-t max-flows from the lowest member.
fn induced_edge_connectivity_at_least(g: &Graph, mask: u32, k: u32) -> bool {
    let members: Vec<u32> = (0..g.n() as u32).filter(|&v| mask >> v & 1 == 1).collect();
    let local: Vec<usize> = {
        let mut m = vec![usize::MAX; g.n()];
        for (i, &v) in members.iter().enumerate() {
            m[v as usize] = i;
        }
        m
    };
    let mut arcs: Vec<(usize, usize)> = Vec::new(); // (to, reverse-arc index)
    let mut heads: Vec<Vec<usize>> = vec![Vec::new(); members.len()];
    for &v in &members {
        for &t in g.neighbors(v) {
            if t > v && mask >> t & 1 == 1 {
                let (a, b) = (local[v as usize], local[t as usize]);
                let i = arcs.len();
                arcs.push((b, i + 1));
                arcs.push((a, i));
                heads[a].push(i);
                heads[b].push(i + 1);
            }
        }
    }
    for t in 1..members.len() {
        if bounded_maxflow(&heads, &arcs, 0, t, k) < k {
            return false;
        }
    }
    true
}

/// Unit-capacity Edmonds–Karp from s to t, stopping once `bound` augmenting
/// paths are found.
fn bounded_maxflow(heads: &[Vec<usize>], arcs: &[(usize, usize)], s: usize, t: usize, bound: u32) -> u32 {
    let mut cap = vec![1u8; arcs.len()];
    let mut flow = 0;
    let mut parent_arc = vec![usize::MAX; heads.len()];
    while flow < bound {
        for p in parent_arc.iter_mut() {
            *p = usize::MAX;
        }
        let mut queue = std::collections::VecDeque::from([s]);
        let mut reached = false;
        'bfs: while let Some(v) = queue.pop_front() {
            for &a in &heads[v] {
                let (to, _) = arcs[a];
                if cap[a] > 0 && to != s && parent_arc[to] == usize::MAX {
                    parent_arc[to] = a;
                    if to == t {
                        reached = true;
                        break 'bfs;
                    }
                    queue.push_back(to);
                }
            }
        }
        if !reached {
            break;
        }
        let mut v = t;
        while v != s {
            let a = parent_arc[v];
            cap[a] -= 1;
            cap[arcs[a].1] += 1;
            v = arcs[arcs[a].1].0;
        }
        flow += 1;
    }
    flow
}

// ---------------------------------------------------------------------------
// Motif instances by permutation isomorphism
// ---------------------------------------------------------------------------

/// Pattern edge list on local labels 0..size, independent of the library's
/// degree-signature classifier.
fn pattern_edges(motif: MotifId) -> (&'static [(usize, usize)], usize) {
    match motif {
        MotifId::M32 => (&[(0, 1), (0, 2), (1, 2)], 3),
        MotifId::M42 => (&[(0, 1), (0, 2), (0, 3)], 4),
        MotifId::M43 => (&[(0, 1), (1, 2), (2, 3), (0, 3)], 4),
        MotifId::M44 => (&[(0, 1), (0, 2), (1, 2), (2, 3)], 4),
        MotifId::M45 => (&[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)], 4),
        MotifId::M46 => (&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 4),
    }
}

/// All vertex sets whose induced subgraph is isomorphic to the pattern,
/// found by scanning every C(n, size) subset and trying all permutations.
pub fn brute_instances(g: &Graph, motif: MotifId) -> Vec<Vec<u32>> {
    let (pat, size) = pattern_edges(motif);
    let n = g.n();
    let mut out = Vec::new();
    let mut subset = vec![0u32; size];
    scan_subsets(n as u32, size, 0, 0, &mut subset, &mut |set: &[u32]| {
        if induced_matches(g, set, pat) {
            out.push(set.to_vec());
        }
    });
    out
}

fn scan_subsets(
    n: u32,
    size: usize,
    depth: usize,
    start: u32,
    subset: &mut Vec<u32>,
    f: &mut impl FnMut(&[u32]),
) {
    if depth == size {
        f(subset);
        return;
    }
    for v in start..n {
        subset[depth] = v;
        scan_subsets(n, size, depth + 1, v + 1, subset, f);
    }
}

fn induced_matches(g: &Graph, set: &[u32], pat: &[(usize, usize)]) -> bool {
    let size = set.len();
    let mut have = [[false; 4]; 4];
    let mut edge_count = 0;
    for i in 0..size {
        for j in (i + 1)..size {
            if g.has_edge(set[i], set[j]) {
                have[i][j] = true;
                have[j][i] = true;
                edge_count += 1;
            }
        }
    }
    if edge_count != pat.len() {
        return false;
    }
    let mut perm: Vec<usize> = (0..size).collect();
    loop {
        // perm maps pattern label -> subset position.
        if pat
            .iter()
            .all(|&(a, b)| have[perm[a]][perm[b]])
        {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

// ---------------------------------------------------------------------------
// Exhaustive motif conductance minimum
// ---------------------------------------------------------------------------

/// Exhaustive minimum motif conductance over every bipartition with both
/// motif volumes positive. `None` when no bipartition is scoreable.
pub fn phi_star(n: usize, instances: &[MotifInstance]) -> Option<f64> {
    assert!(n <= 20);
    let inst_masks: Vec<(u32, u32)> = instances
        .iter()
        .map(|i| {
            let m = i.members().iter().fold(0u32, |m, &v| m | (1 << v));
            (m, i.members().len() as u32)
        })
        .collect();
    let mut best: Option<f64> = None;
    // Vertex 0 pinned outside S: phi(S) = phi(complement).
    for mask in 1u32..(1 << (n - 1)) {
        let s = mask << 1;
        let mut cut = 0u32;
        let mut vol_in = 0u32;
        let mut vol_out = 0u32;
        for &(im, sz) in &inst_masks {
            let inside = (im & s).count_ones();
            vol_in += inside;
            vol_out += sz - inside;
            if inside > 0 && inside < sz {
                cut += 1;
            }
        }
        let denom = vol_in.min(vol_out);
        if denom == 0 {
            continue;
        }
        let phi = cut as f64 / denom as f64;
        if best.is_none_or(|b| phi < b) {
            best = Some(phi);
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi eigensolver
// ---------------------------------------------------------------------------

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
/// ascending. A from-scratch O(n^3)-per-sweep solver used as the
/// independent oracle for the spectral module.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for row in &a {
        assert_eq!(row.len(), n, "matrix must be square");
    }
    if n == 0 {
        return Vec::new();
    }
    for _sweep in 0..64 {
        let mut off: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[p][i];
                    let aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Dense normalized motif Laplacian assembled directly from an instance
/// list: W[i][j] = co-occurrence count, L = I - D^(-1/2) W D^(-1/2) on the
/// positive-degree vertices (ascending). Returns (active vertices, L).
pub fn dense_motif_laplacian(n: usize, instances: &[MotifInstance]) -> (Vec<u32>, Vec<Vec<f64>>) {
    let mut w = vec![vec![0.0f64; n]; n];
    for inst in instances {
        let mem = inst.members();
        for i in 0..mem.len() {
            for j in (i + 1)..mem.len() {
                w[mem[i] as usize][mem[j] as usize] += 1.0;
                w[mem[j] as usize][mem[i] as usize] += 1.0;
            }
        }
    }
    let deg: Vec<f64> = w.iter().map(|row| row.iter().sum()).collect();
    let active: Vec<u32> = (0..n as u32).filter(|&v| deg[v as usize] > 0.0).collect();
    let a = active.len();
    let mut lap = vec![vec![0.0f64; a]; a];
    for (li, &u) in active.iter().enumerate() {
        for (lj, &v) in active.iter().enumerate() {
            let norm = w[u as usize][v as usize] / (deg[u as usize] * deg[v as usize]).sqrt();
            lap[li][lj] = if li == lj { 1.0 - norm } else { -norm };
        }
    }
    (active, lap)
}

/// Connected components of the co-occurrence graph over active vertices.
pub fn motif_component_count(n: usize, instances: &[MotifInstance]) -> usize {
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], v: u32) -> u32 {
        let mut v = v;
        while parent[v as usize] != v {
            parent[v as usize] = parent[parent[v as usize] as usize];
            v = parent[v as usize];
        }
        v
    }
    let mut touched = vec![false; n];
    for inst in instances {
        let mem = inst.members();
        for &v in mem {
            touched[v as usize] = true;
        }
        for pair in mem.windows(2) {
            let (a, b) = (find(&mut parent, pair[0]), find(&mut parent, pair[1]));
            if a != b {
                parent[a as usize] = b;
            }
        }
    }
    (0..n as u32)
        .filter(|&v| touched[v as usize] && find(&mut parent, v) == v)
        .count()
}

/// Median of a sample (not in-place; averages the middle pair on even n).
pub fn median(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty());
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    let mid = s.len() / 2;
    if s.len() % 2 == 1 {
        s[mid]
    } else {
        0.5 * (s[mid - 1] + s[mid])
    }
}
