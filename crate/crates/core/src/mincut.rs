//! Global minimum cut via maximum-adjacency phases with contraction, plus a
//! bounded variant that stops as soon as any cut below a threshold shows up.
//!
//! Each phase grows a set by repeatedly absorbing the most strongly connected
//! remaining vertex (priority queue, lazy deletion); the weight at which the
//! final vertex joins is a candidate cut separating that vertex's contracted
//! group from everything else. Contracting the last two phase vertices and
//! repeating over n-1 phases yields the global minimum. Ties in the
//! max-adjacency selection break toward the lowest vertex index and each
//! phase is seeded from the lowest live index, so results are deterministic.
//!
//! Worst-case cost is O(nm + n^2 log n); the bounded variant usually exits
//! far earlier because any phase cut or any supernode degree below the
//! threshold terminates the run.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{connected_components, Graph};

/// A bipartition realizing a cut. `side_a` is the side containing vertex 0;
/// `cut_edges` are the original graph edges crossing it, as (u, v) with
/// u < v, sorted. `weight` is the sum of their weights.
#[derive(Clone, Debug)]
pub struct CutResult {
    pub weight: f64,
    pub side_a: Vec<u32>,
    pub side_b: Vec<u32>,
    pub cut_edges: Vec<(u32, u32)>,
}

/// Outcome of [`sw_mincut_bounded`].
#[derive(Clone, Debug)]
pub enum BoundedCut {
    /// Some cut with weight < k (not necessarily the global minimum).
    Cut(CutResult),
    /// Certificate that every cut has weight >= k.
    AtLeastK,
}

/// Exact global minimum cut. Errors on graphs with fewer than 2 vertices or
/// more than one connected component.
pub fn sw_mincut(g: &Graph) -> Result<CutResult> {
    check_input(g)?;
    let mut mg = MultiGraph::from_graph(g, true);
    match run_phases(&mut mg, None) {
        PhaseOutcome::Global { side, .. } => Ok(cut_from_side(g, &side)),
        _ => unreachable!("unbounded run always produces a global cut"),
    }
}

/// Early-stopping variant: returns the first discovered cut with weight < k,
/// or a certificate that the minimum cut is at least k.
pub fn sw_mincut_bounded(g: &Graph, k: u32) -> Result<BoundedCut> {
    if k == 0 {
        return Err(Error::InvalidK(0));
    }
    check_input(g)?;
    let mut mg = MultiGraph::from_graph(g, false);
    match run_phases(&mut mg, Some(k as f64)) {
        PhaseOutcome::Below { side, .. } => Ok(BoundedCut::Cut(cut_from_side(g, &side))),
        PhaseOutcome::AtLeast => Ok(BoundedCut::AtLeastK),
        PhaseOutcome::Global { .. } => unreachable!("bounded run never reports a global cut"),
    }
}

fn check_input(g: &Graph) -> Result<()> {
    if g.n() < 2 {
        return Err(Error::TooSmall(g.n()));
    }
    if connected_components(g).len() != 1 {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Materializes a cut from one side's vertex set by scanning original edges.
fn cut_from_side(g: &Graph, side: &[u32]) -> CutResult {
    let mut in_side = vec![false; g.n()];
    for &v in side {
        in_side[v as usize] = true;
    }
    if !in_side[0] {
        for f in in_side.iter_mut() {
            *f = !*f;
        }
    }
    let mut side_a = Vec::new();
    let mut side_b = Vec::new();
    for v in 0..g.n() as u32 {
        if in_side[v as usize] {
            side_a.push(v);
        } else {
            side_b.push(v);
        }
    }
    let mut weight = 0.0;
    let mut cut_edges = Vec::new();
    for (u, v, w) in g.edges() {
        if in_side[u as usize] != in_side[v as usize] {
            weight += w;
            cut_edges.push((u, v));
        }
    }
    CutResult {
        weight,
        side_a,
        side_b,
        cut_edges,
    }
}

// ---------------------------------------------------------------------------
// Shared contraction engine (also used by the k-edge-connected decomposition)
// ---------------------------------------------------------------------------

/// Contracted multigraph. Supernode adjacency is kept as sorted
/// `(neighbor, weight)` vectors so iteration order — and therefore every
/// floating-point accumulation — is deterministic.
#[derive(Clone, Debug)]
pub(crate) struct MultiGraph {
    pub(crate) adj: Vec<Vec<(u32, f64)>>,
    pub(crate) members: Vec<Vec<u32>>,
    pub(crate) alive: Vec<bool>,
    pub(crate) degree: Vec<f64>,
    pub(crate) n_alive: usize,
    /// Lazy min-heap over (degree, supernode) used for threshold checks.
    degree_queue: BinaryHeap<MinDegree>,
}

impl MultiGraph {
    pub(crate) fn from_graph(g: &Graph, weighted: bool) -> MultiGraph {
        let n = g.n();
        let mut adj = Vec::with_capacity(n);
        for v in 0..n as u32 {
            let row: Vec<(u32, f64)> = g
                .neighbors(v)
                .iter()
                .zip(g.neighbor_weights(v))
                .map(|(&t, &w)| (t, if weighted { w } else { 1.0 }))
                .collect();
            adj.push(row);
        }
        MultiGraph::from_adj(adj, (0..n as u32).map(|v| vec![v]).collect())
    }

    /// Builds directly from prepared adjacency rows (sorted by neighbor) and
    /// per-supernode member lists.
    pub(crate) fn from_adj(adj: Vec<Vec<(u32, f64)>>, members: Vec<Vec<u32>>) -> MultiGraph {
        let n = adj.len();
        let degree: Vec<f64> = adj.iter().map(|row| row.iter().map(|e| e.1).sum()).collect();
        let mut degree_queue = BinaryHeap::with_capacity(n);
        for v in 0..n {
            degree_queue.push(MinDegree {
                degree: degree[v],
                v: v as u32,
            });
        }
        MultiGraph {
            adj,
            members,
            alive: vec![true; n],
            degree,
            n_alive: n,
            degree_queue,
        }
    }

    pub(crate) fn alive_nodes(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.alive.len() as u32).filter(|&v| self.alive[v as usize])
    }

    /// Lowest-degree live supernode, if any falls strictly below `bound`.
    fn below_degree(&mut self, bound: f64) -> Option<u32> {
        while let Some(top) = self.degree_queue.peek() {
            let v = top.v as usize;
            if !self.alive[v] || self.degree[v] != top.degree {
                self.degree_queue.pop();
                continue;
            }
            return if top.degree < bound { Some(top.v) } else { None };
        }
        None
    }

    /// Merges supernode `b` into... whichever of the pair has the larger
    /// adjacency list survives (ties keep the smaller id). Returns the
    /// survivor.
    pub(crate) fn contract(&mut self, a: u32, b: u32) -> u32 {
        let (keep, gone) = match self.adj[a as usize].len().cmp(&self.adj[b as usize].len()) {
            Ordering::Greater => (a, b),
            Ordering::Less => (b, a),
            Ordering::Equal => (a.min(b), a.max(b)),
        };
        let (ki, gi) = (keep as usize, gone as usize);
        let mutual = remove_entry(&mut self.adj[ki], gone).unwrap_or(0.0);
        remove_entry(&mut self.adj[gi], keep);

        let gone_list = std::mem::take(&mut self.adj[gi]);
        // Point every neighbor of the absorbed node at the survivor.
        for &(x, w) in &gone_list {
            let row = &mut self.adj[x as usize];
            remove_entry(row, gone);
            upsert(row, keep, w);
        }
        let keep_list = std::mem::take(&mut self.adj[ki]);
        self.adj[ki] = merge_rows(keep_list, gone_list);

        self.degree[ki] = self.degree[ki] + self.degree[gi] - 2.0 * mutual;
        self.degree_queue.push(MinDegree {
            degree: self.degree[ki],
            v: keep,
        });
        self.alive[gi] = false;
        self.n_alive -= 1;
        let mut gone_members = std::mem::take(&mut self.members[gi]);
        self.members[ki].append(&mut gone_members);
        keep
    }
}

fn remove_entry(row: &mut Vec<(u32, f64)>, key: u32) -> Option<f64> {
    match row.binary_search_by_key(&key, |e| e.0) {
        Ok(i) => Some(row.remove(i).1),
        Err(_) => None,
    }
}

fn upsert(row: &mut Vec<(u32, f64)>, key: u32, w: f64) {
    match row.binary_search_by_key(&key, |e| e.0) {
        Ok(i) => row[i].1 += w,
        Err(i) => row.insert(i, (key, w)),
    }
}

fn merge_rows(a: Vec<(u32, f64)>, b: Vec<(u32, f64)>) -> Vec<(u32, f64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Max-heap item: highest connection weight first, lowest vertex id on ties.
#[derive(Clone, Copy, Debug, PartialEq)]
struct MaxConn {
    w: f64,
    v: u32,
}

impl Eq for MaxConn {}

impl Ord for MaxConn {
    fn cmp(&self, other: &Self) -> Ordering {
        self.w
            .partial_cmp(&other.w)
            .expect("finite weights")
            .then_with(|| other.v.cmp(&self.v))
    }
}

impl PartialOrd for MaxConn {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Min-heap item over supernode degrees (reversed ordering).
#[derive(Clone, Copy, Debug, PartialEq)]
struct MinDegree {
    degree: f64,
    v: u32,
}

impl Eq for MinDegree {}

impl Ord for MinDegree {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree
            .partial_cmp(&self.degree)
            .expect("finite degrees")
            .then_with(|| other.v.cmp(&self.v))
    }
}

impl PartialOrd for MinDegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) enum PhaseOutcome {
    /// Bounded mode: found a cut with weight < bound.
    Below { side: Vec<u32> },
    /// Bounded mode: certified min cut >= bound.
    AtLeast,
    /// Unbounded mode: exact global minimum.
    Global { side: Vec<u32> },
}

/// Runs maximum-adjacency phases to completion (or until a cut below
/// `bound` appears). The multigraph must be connected.
pub(crate) fn run_phases(mg: &mut MultiGraph, bound: Option<f64>) -> PhaseOutcome {
    let n = mg.adj.len();
    let mut conn = vec![0f64; n];
    let mut stamp = vec![0u64; n];
    let mut epoch = 0u64;
    let mut heap: BinaryHeap<MaxConn> = BinaryHeap::new();
    let mut best_weight = f64::INFINITY;
    let mut best_side: Vec<u32> = Vec::new();
    let mut seed_cursor = 0usize;

    while mg.n_alive > 1 {
        if let Some(b) = bound {
            // A supernode with weighted degree < b is itself a cut below the
            // threshold; no phase needed.
            if let Some(v) = mg.below_degree(b) {
                return PhaseOutcome::Below {
                    side: mg.members[v as usize].clone(),
                };
            }
        }

        while !mg.alive[seed_cursor] {
            seed_cursor += 1;
        }
        let seed = seed_cursor as u32;

        epoch += 1;
        heap.clear();
        // stamp[v] == epoch marks "already absorbed"; epoch+offset trick is
        // avoided by keeping a separate visited epoch and conn reset below.
        conn[seed as usize] = 0.0;
        heap.push(MaxConn { w: 0.0, v: seed });
        let mut fresh = vec![];
        let mut order: Vec<(u32, f64)> = Vec::with_capacity(mg.n_alive);
        while order.len() < mg.n_alive {
            let Some(MaxConn { w, v }) = heap.pop() else {
                unreachable!("connected multigraph always fills the phase");
            };
            if stamp[v as usize] == epoch || w != conn[v as usize] {
                continue; // stale entry
            }
            stamp[v as usize] = epoch;
            order.push((v, w));
            for &(x, wx) in &mg.adj[v as usize] {
                if stamp[x as usize] != epoch {
                    if conn[x as usize] == 0.0 {
                        fresh.push(x);
                    }
                    conn[x as usize] += wx;
                    heap.push(MaxConn {
                        w: conn[x as usize],
                        v: x,
                    });
                }
            }
        }
        for v in fresh {
            conn[v as usize] = 0.0;
        }
        conn[seed as usize] = 0.0;
        let &(last, last_w) = order.last().expect("phase visits at least two nodes");

        match bound {
            Some(b) if last_w < b => {
                return PhaseOutcome::Below {
                    side: mg.members[last as usize].clone(),
                };
            }
            Some(b) => {
                // Any cut separating consecutive phase vertices weighs at
                // least the attachment of the later one (the phase lemma
                // applied to the first active vertex of such a cut), so
                // every pair with attachment >= b is inseparable by any
                // cut below the threshold and can be contracted in one
                // batch. The final pair always qualifies here.
                contract_qualified_pairs(mg, &order, b);
            }
            None => {
                if last_w < best_weight {
                    best_weight = last_w;
                    best_side = mg.members[last as usize].clone();
                }
                let prev = order[order.len() - 2].0;
                mg.contract(prev, last);
            }
        }
    }

    match bound {
        Some(_) => PhaseOutcome::AtLeast,
        None => PhaseOutcome::Global { side: best_side },
    }
}

/// Contracts every consecutive pair of the phase order whose later vertex
/// attached with weight >= `bound`. Sound because such a pair cannot be
/// separated by any cut lighter than `bound`; contracting the pairs in
/// order keeps chains of qualified vertices in a single supernode.
fn contract_qualified_pairs(mg: &mut MultiGraph, order: &[(u32, f64)], bound: f64) {
    // contract() picks its own survivor, so follow merged ids through a
    // tiny union-find keyed by supernode id.
    let mut parent: Vec<u32> = (0..mg.adj.len() as u32).collect();
    fn find(parent: &mut [u32], mut v: u32) -> u32 {
        while parent[v as usize] != v {
            parent[v as usize] = parent[parent[v as usize] as usize];
            v = parent[v as usize];
        }
        v
    }
    for i in 1..order.len() {
        let (v, conn) = order[i];
        if conn < bound {
            continue;
        }
        let a = find(&mut parent, order[i - 1].0);
        let b = find(&mut parent, v);
        if a == b {
            continue;
        }
        let keep = mg.contract(a, b);
        parent[a as usize] = keep;
        parent[b as usize] = keep;
    }
}
