//! Maximal k-edge-connected subgraph decomposition by recursive minimum-cut
//! splitting.
//!
//! A worklist starts from the connected components. Each piece is repeatedly
//! split along any cut with fewer than k edges (connectivity is unweighted:
//! every edge counts 1) until its minimum cut reaches k, at which point the
//! piece is emitted. The final family is exactly the set of maximal vertex
//! sets whose induced subgraph is k-edge-connected — deleting a sub-k cut can
//! never split such a set — so the output is independent of split order.
//!
//! Two exact accelerations keep large pieces cheap: vertices (or contracted
//! groups) whose degree inside the piece falls below k are peeled off
//! immediately, and endpoint pairs whose local edge connectivity provably
//! reaches k (direct multiplicity plus common-neighbor two-hop capacity) are
//! contracted before the max-adjacency phases run. Neither changes the
//! result; both are covered by the exhaustive oracle tests.

use crate::error::{Error, Result};
use crate::graph::{connected_components, induced_subgraph, Graph};
use crate::mincut::{run_phases, MultiGraph, PhaseOutcome};

/// Result of [`decompose`]: member lists sorted ascending, subgraphs ordered
/// by their smallest member, `removed_edges` = every original edge not
/// internal to a kept subgraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub k: u32,
    pub subgraphs: Vec<Vec<u32>>,
    pub singletons: Vec<u32>,
    pub removed_edges: Vec<(u32, u32)>,
}

impl Decomposition {
    /// Subgraph index per vertex (`None` for singletons).
    pub fn owner_map(&self, n: usize) -> Vec<Option<u32>> {
        let mut owner = vec![None; n];
        for (i, s) in self.subgraphs.iter().enumerate() {
            for &v in s {
                owner[v as usize] = Some(i as u32);
            }
        }
        owner
    }
}

/// Decomposes `g` into its maximal k-edge-connected subgraphs plus leftover
/// singletons. k = 1 reduces to connected components.
pub fn decompose(g: &Graph, k: u32) -> Result<Decomposition> {
    if k == 0 {
        return Err(Error::InvalidK(0));
    }
    let comps = connected_components(g);
    if k == 1 {
        let mut subgraphs = Vec::new();
        let mut singletons = Vec::new();
        for c in comps {
            if c.len() >= 2 {
                subgraphs.push(c);
            } else {
                singletons.push(c[0]);
            }
        }
        return Ok(assemble(g, k, subgraphs, singletons));
    }
    let table = GroupTable::identity(g.n());
    let pieces: Vec<Vec<u32>> = comps;
    Ok(run_worklist(g, k, &table, pieces))
}

/// Refines an existing decomposition at `base.k` into one at `k`.
///
/// When `k <= base.k` each base subgraph is contracted to a supernode —
/// a sub-k cut can never split a base.k-connected set — and the worklist
/// runs over the contracted multigraph. Otherwise each base subgraph is
/// decomposed independently at the stricter k.
pub fn decompose_from_base(base: &Decomposition, g: &Graph, k: u32) -> Result<Decomposition> {
    if k == 0 {
        return Err(Error::InvalidK(0));
    }
    validate_base(base, g)?;

    if base.k >= k {
        let table = GroupTable::from_base(base, g.n());
        // Pieces = connected components of g, expressed as group-id sets.
        let mut pieces = Vec::new();
        for comp in connected_components(g) {
            let mut gids: Vec<u32> = comp.iter().map(|&v| table.group_of[v as usize]).collect();
            gids.sort_unstable();
            gids.dedup();
            pieces.push(gids);
        }
        Ok(run_worklist(g, k, &table, pieces))
    } else {
        let mut subgraphs = Vec::new();
        let mut singletons = base.singletons.clone();
        for members in &base.subgraphs {
            let (sub, back) = induced_subgraph(g, members)?;
            let dec = decompose(&sub, k)?;
            for s in dec.subgraphs {
                subgraphs.push(s.iter().map(|&v| back[v as usize]).collect());
            }
            singletons.extend(dec.singletons.iter().map(|&v| back[v as usize]));
        }
        singletons.sort_unstable();
        Ok(assemble(g, k, subgraphs, singletons))
    }
}

fn validate_base(base: &Decomposition, g: &Graph) -> Result<()> {
    if base.k == 0 {
        return Err(Error::BaseMismatch("base.k must be >= 1".into()));
    }
    let n = g.n();
    let mut seen = vec![false; n];
    let mut count = 0usize;
    for s in base.subgraphs.iter().chain(std::iter::once(&base.singletons)) {
        for &v in s {
            if v as usize >= n {
                return Err(Error::BaseMismatch(format!("vertex {v} out of range")));
            }
            if seen[v as usize] {
                return Err(Error::BaseMismatch(format!("vertex {v} assigned twice")));
            }
            seen[v as usize] = true;
            count += 1;
        }
    }
    if count != n {
        return Err(Error::BaseMismatch(format!(
            "base covers {count} of {n} vertices"
        )));
    }
    Ok(())
}

/// Maps vertices to atomic groups. A multi-member group is guaranteed
/// k-edge-connected internally by the caller and is never split.
struct GroupTable {
    members: Vec<Vec<u32>>,
    group_of: Vec<u32>,
}

impl GroupTable {
    fn identity(n: usize) -> GroupTable {
        GroupTable {
            members: (0..n as u32).map(|v| vec![v]).collect(),
            group_of: (0..n as u32).collect(),
        }
    }

    fn from_base(base: &Decomposition, n: usize) -> GroupTable {
        let mut members = Vec::new();
        let mut group_of = vec![u32::MAX; n];
        for s in &base.subgraphs {
            let gid = members.len() as u32;
            for &v in s {
                group_of[v as usize] = gid;
            }
            members.push(s.clone());
        }
        for &v in &base.singletons {
            group_of[v as usize] = members.len() as u32;
            members.push(vec![v]);
        }
        GroupTable { members, group_of }
    }
}

fn run_worklist(g: &Graph, k: u32, table: &GroupTable, pieces: Vec<Vec<u32>>) -> Decomposition {
    let kf = k as f64;
    let mut subgraphs: Vec<Vec<u32>> = Vec::new();
    let mut singletons: Vec<u32> = Vec::new();
    let mut stack = pieces;
    // Scratch: local index per group, reused across pieces.
    let mut local_of = vec![u32::MAX; table.members.len()];

    let emit = |gids: &[u32], subgraphs: &mut Vec<Vec<u32>>, singletons: &mut Vec<u32>| {
        let mut verts: Vec<u32> = gids
            .iter()
            .flat_map(|&gid| table.members[gid as usize].iter().copied())
            .collect();
        if verts.len() == 1 {
            singletons.push(verts[0]);
        } else {
            verts.sort_unstable();
            subgraphs.push(verts);
        }
    };

    while let Some(piece) = stack.pop() {
        if piece.len() == 1 {
            emit(&piece, &mut subgraphs, &mut singletons);
            continue;
        }

        // Contracted adjacency among the piece's groups, multiplicity weights.
        let p = piece.len();
        for (i, &gid) in piece.iter().enumerate() {
            local_of[gid as usize] = i as u32;
        }
        let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); p];
        for (i, &gid) in piece.iter().enumerate() {
            for &v in &table.members[gid as usize] {
                for &t in g.neighbors(v) {
                    let tg = table.group_of[t as usize];
                    let j = local_of[tg as usize];
                    if j != u32::MAX && j as usize != i {
                        upsert_local(&mut adj[i], j);
                    }
                }
            }
        }
        for row in adj.iter_mut() {
            row.sort_unstable_by_key(|e| e.0);
        }
        for &gid in &piece {
            local_of[gid as usize] = u32::MAX;
        }

        // Peel groups whose degree inside the piece is below k. Such a group
        // is separated from the rest by a sub-k cut and is itself maximal.
        let mut alive = vec![true; p];
        let mut degree: Vec<f64> = adj.iter().map(|r| r.iter().map(|e| e.1).sum()).collect();
        let mut queue: Vec<u32> = (0..p as u32).filter(|&i| degree[i as usize] < kf).collect();
        let mut peeled = 0usize;
        while let Some(i) = queue.pop() {
            if !alive[i as usize] {
                continue;
            }
            alive[i as usize] = false;
            peeled += 1;
            emit(&[piece[i as usize]], &mut subgraphs, &mut singletons);
            for &(j, w) in &adj[i as usize] {
                if alive[j as usize] {
                    degree[j as usize] -= w;
                    if degree[j as usize] < kf {
                        queue.push(j);
                    }
                }
            }
        }

        if peeled == p {
            continue;
        }

        // Components of the surviving contracted graph.
        let comps = local_components(&adj, &alive);
        if comps.len() > 1 || peeled > 0 {
            for comp in comps {
                stack.push(comp.into_iter().map(|i| piece[i as usize]).collect());
            }
            continue;
        }

        // One component, nothing peeled: certify or split.
        let survivors: Vec<u32> = (0..p as u32).filter(|&i| alive[i as usize]).collect();
        if survivors.len() == 1 {
            emit(&piece, &mut subgraphs, &mut singletons);
            continue;
        }
        let mut mg = MultiGraph::from_adj(
            adj,
            piece
                .iter()
                .map(|&gid| table.members[gid as usize].clone())
                .collect(),
        );
        connectivity_contractions(&mut mg, kf);
        match run_phases(&mut mg, Some(kf)) {
            PhaseOutcome::Below { side, .. } => {
                let mut side_groups: Vec<u32> =
                    side.iter().map(|&v| table.group_of[v as usize]).collect();
                side_groups.sort_unstable();
                side_groups.dedup();
                let mut in_side = vec![false; table.members.len()];
                for &gid in &side_groups {
                    in_side[gid as usize] = true;
                }
                let rest: Vec<u32> = piece
                    .iter()
                    .copied()
                    .filter(|&gid| !in_side[gid as usize])
                    .collect();
                stack.push(side_groups);
                stack.push(rest);
            }
            PhaseOutcome::AtLeast => emit(&piece, &mut subgraphs, &mut singletons),
            PhaseOutcome::Global { .. } => unreachable!("bounded run"),
        }
    }

    assemble(g, k, subgraphs, singletons)
}

fn upsert_local(row: &mut Vec<(u32, f64)>, key: u32) {
    // Rows are built unsorted (sorted once afterwards); linear scan of the
    // tail is enough because repeats of a key arrive in bursts per member.
    for e in row.iter_mut() {
        if e.0 == key {
            e.1 += 1.0;
            return;
        }
    }
    row.push((key, 1.0));
}

fn local_components(adj: &[Vec<(u32, f64)>], alive: &[bool]) -> Vec<Vec<u32>> {
    let mut seen: Vec<bool> = alive.iter().map(|&a| !a).collect();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for s in 0..adj.len() as u32 {
        if seen[s as usize] {
            continue;
        }
        seen[s as usize] = true;
        stack.push(s);
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &(t, _) in &adj[v as usize] {
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

/// Contracts supernode pairs whose local edge connectivity provably reaches
/// k: direct multiplicity plus sum over common neighbors of min adjacent
/// multiplicity. Sub-k cuts never separate such a pair, so the contracted
/// graph has a sub-k cut iff the original piece does.
fn connectivity_contractions(mg: &mut MultiGraph, k: f64) {
    for _pass in 0..2 {
        let mut merged_any = false;
        let nodes: Vec<u32> = mg.alive_nodes().collect();
        for mut u in nodes {
            if !mg.alive[u as usize] {
                continue;
            }
            loop {
                let mut target = None;
                for &(v, wuv) in &mg.adj[u as usize] {
                    let bound = wuv + two_hop_capacity(&mg.adj[u as usize], &mg.adj[v as usize]);
                    if bound >= k {
                        target = Some(v);
                        break;
                    }
                }
                let Some(v) = target else { break };
                u = mg.contract(u, v);
                merged_any = true;
                if mg.n_alive == 1 {
                    return;
                }
            }
        }
        if !merged_any {
            break;
        }
    }
}

/// Sum over common neighbors of min(w_u, w_v); both rows sorted by key.
fn two_hop_capacity(a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
    let mut total = 0.0;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                total += a[i].1.min(b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    total
}

fn assemble(
    g: &Graph,
    k: u32,
    mut subgraphs: Vec<Vec<u32>>,
    mut singletons: Vec<u32>,
) -> Decomposition {
    subgraphs.sort_by_key(|s| s[0]);
    singletons.sort_unstable();
    let mut owner = vec![u32::MAX; g.n()];
    for (i, s) in subgraphs.iter().enumerate() {
        for &v in s {
            owner[v as usize] = i as u32;
        }
    }
    let removed_edges: Vec<(u32, u32)> = g
        .edges()
        .filter(|&(u, v, _)| {
            owner[u as usize] == u32::MAX || owner[u as usize] != owner[v as usize]
        })
        .map(|(u, v, _)| (u, v))
        .collect();
    Decomposition {
        k,
        subgraphs,
        singletons,
        removed_edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn barbell() -> Graph {
        let mut edges = vec![];
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

    #[test]
    fn barbell_splits_at_k3() {
        let g = barbell();
        let d = decompose(&g, 3).unwrap();
        assert_eq!(d.subgraphs, vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]);
        assert!(d.singletons.is_empty());
        assert_eq!(d.removed_edges, vec![(2, 5), (3, 4)]);
    }

    #[test]
    fn barbell_is_single_piece_at_k2() {
        let g = barbell();
        let d = decompose(&g, 2).unwrap();
        assert_eq!(d.subgraphs.len(), 1);
        assert_eq!(d.subgraphs[0], (0..8).collect::<Vec<_>>());
        assert!(d.removed_edges.is_empty());
    }

    #[test]
    fn k4_dissolves_at_k4() {
        let g = barbell();
        let d = decompose(&g, 4).unwrap();
        assert!(d.subgraphs.is_empty());
        assert_eq!(d.singletons, (0..8).collect::<Vec<_>>());
        assert_eq!(d.removed_edges.len(), g.m());
    }

    #[test]
    fn k1_is_connected_components() {
        let g = Graph::from_edges(6, &[(0, 1, 1.0), (1, 2, 1.0), (4, 5, 1.0)]);
        let d = decompose(&g, 1).unwrap();
        assert_eq!(d.subgraphs, vec![vec![0, 1, 2], vec![4, 5]]);
        assert_eq!(d.singletons, vec![3]);
        assert!(d.removed_edges.is_empty());
    }

    #[test]
    fn tree_dissolves_at_k2() {
        let g = Graph::from_edges(5, &[(0, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0), (3, 4, 1.0)]);
        let d = decompose(&g, 2).unwrap();
        assert!(d.subgraphs.is_empty());
        assert_eq!(d.singletons, vec![0, 1, 2, 3, 4]);
        assert_eq!(d.removed_edges.len(), 4);
    }

    #[test]
    fn rejects_k_zero() {
        let g = Graph::from_edges(2, &[(0, 1, 1.0)]);
        assert!(matches!(decompose(&g, 0), Err(Error::InvalidK(0))));
    }

    // --- brute-force oracle -------------------------------------------------

    fn induced_min_cut_at_least(g: &Graph, set: &[u32], k: u32) -> bool {
        let (sub, _) = induced_subgraph(g, set).unwrap();
        if connected_components(&sub).len() != 1 {
            return false;
        }
        if sub.n() == 1 {
            return false;
        }
        let n = sub.n();
        let mut best = usize::MAX;
        for mask in 1..(1u32 << (n - 1)) {
            let side = |v: u32| v != 0 && (mask >> (v - 1)) & 1 == 1;
            let w = sub.edges().filter(|&(u, v, _)| side(u) != side(v)).count();
            best = best.min(w);
        }
        best >= k as usize
    }

    /// Maximal vertex sets with k-edge-connected induced subgraphs, by brute
    /// force over all subsets.
    pub(crate) fn brute_decompose(g: &Graph, k: u32) -> (Vec<Vec<u32>>, Vec<u32>) {
        let n = g.n();
        assert!(n <= 14);
        let mut ok_sets: Vec<u32> = Vec::new();
        for mask in 1u32..(1 << n) {
            if mask.count_ones() < 2 {
                continue;
            }
            let set: Vec<u32> = (0..n as u32).filter(|&v| (mask >> v) & 1 == 1).collect();
            if induced_min_cut_at_least(g, &set, k) {
                ok_sets.push(mask);
            }
        }
        let mut maximal: Vec<u32> = Vec::new();
        for &m in &ok_sets {
            if !ok_sets.iter().any(|&o| o != m && o & m == m) {
                maximal.push(m);
            }
        }
        let mut subgraphs: Vec<Vec<u32>> = maximal
            .iter()
            .map(|&m| (0..n as u32).filter(|&v| (m >> v) & 1 == 1).collect())
            .collect();
        subgraphs.sort_by_key(|s| s[0]);
        let covered: u32 = maximal.iter().fold(0, |acc, &m| acc | m);
        let singletons: Vec<u32> = (0..n as u32).filter(|&v| (covered >> v) & 1 == 0).collect();
        (subgraphs, singletons)
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut rng = StdRng::seed_from_u64(99);
        for trial in 0..120 {
            let n = rng.gen_range(3..=10);
            let p = rng.gen_range(0.25..0.75);
            let mut edges = vec![];
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    if rng.gen_bool(p) {
                        edges.push((u, v, 1.0));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges);
            for k in 2..=4u32 {
                let d = decompose(&g, k).unwrap();
                let (want_subs, want_singles) = brute_decompose(&g, k);
                assert_eq!(d.subgraphs, want_subs, "trial {trial} k {k} g {g:?}");
                assert_eq!(d.singletons, want_singles, "trial {trial} k {k}");
            }
        }
    }

    #[test]
    fn from_base_refines_and_coarsens() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..60 {
            let n = rng.gen_range(4..=11);
            let p = rng.gen_range(0.3..0.7);
            let mut edges = vec![];
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    if rng.gen_bool(p) {
                        edges.push((u, v, 1.0));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges);
            for (kb, k) in [(2u32, 3u32), (2, 4), (3, 4), (3, 2), (4, 2), (4, 3), (3, 3)] {
                let base = decompose(&g, kb).unwrap();
                let refined = decompose_from_base(&base, &g, k).unwrap();
                let direct = decompose(&g, k).unwrap();
                assert_eq!(refined.subgraphs, direct.subgraphs, "kb {kb} k {k}");
                assert_eq!(refined.singletons, direct.singletons, "kb {kb} k {k}");
                assert_eq!(refined.removed_edges, direct.removed_edges);
            }
        }
    }

    #[test]
    fn from_base_rejects_bad_base() {
        let g = Graph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
        let bad = Decomposition {
            k: 2,
            subgraphs: vec![vec![0, 1]],
            singletons: vec![],
            removed_edges: vec![],
        };
        assert!(matches!(
            decompose_from_base(&bad, &g, 3),
            Err(Error::BaseMismatch(_))
        ));
    }

    #[test]
    fn relabeling_gives_same_families() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..40 {
            let n = rng.gen_range(4..=10);
            let p = 0.5;
            let mut edges = vec![];
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    if rng.gen_bool(p) {
                        edges.push((u, v, 1.0));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges);
            // Random permutation of vertex labels.
            let mut perm: Vec<u32> = (0..n as u32).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                perm.swap(i, j);
            }
            let relabeled: Vec<(u32, u32, f64)> = edges
                .iter()
                .map(|&(u, v, w)| (perm[u as usize], perm[v as usize], w))
                .collect();
            let g2 = Graph::from_edges(n, &relabeled);
            for k in 2..=3 {
                let d1 = decompose(&g, k).unwrap();
                let d2 = decompose(&g2, k).unwrap();
                let mut mapped: Vec<Vec<u32>> = d1
                    .subgraphs
                    .iter()
                    .map(|s| {
                        let mut t: Vec<u32> = s.iter().map(|&v| perm[v as usize]).collect();
                        t.sort_unstable();
                        t
                    })
                    .collect();
                mapped.sort_by_key(|s| s[0]);
                assert_eq!(mapped, d2.subgraphs);
            }
        }
    }
}
