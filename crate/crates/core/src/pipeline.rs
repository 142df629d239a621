//! End-to-end motif clustering driver.
//!
//! Stages: optional prune (weight threshold, then iterated k-core), maximal
//! k-edge-connected decomposition, then per-piece spectral clustering on the
//! motif adjacency with recursive sweep-cut bisection. Baseline mode skips
//! prune and decomposition and clusters connected components directly —
//! identical quality machinery, no acceleration.
//!
//! Mode selection mirrors the structure-preservation regime: when the
//! motif's internal minimum degree is at least k, no instance can be severed
//! by the decomposition (`St`); otherwise instances may be cut and the run
//! is approximate (`Ap`).

use crate::error::{Error, Result};
use crate::graph::{connected_components, induced_subgraph, Graph};
use crate::kcc::{decompose, Decomposition};
use crate::motif::{enumerate_instances, MotifAdjacency, MotifId, MotifInstance};
use crate::spectral::{build_laplacian, fiedler_vector_relaxed, sweep_cut};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

/// Relaxed Fiedler residual accepted (with a warning) when the strict
/// tolerance is not reached within the iteration budget.
const RELAXED_RESIDUAL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Pick `St` when the motif's min degree is at least k, else `Ap`.
    Auto,
    /// Structure-preserving: decomposition cannot sever any instance.
    St,
    /// Approximate: decomposition may sever instances.
    Ap,
    /// No prune, no decomposition; cluster connected components directly.
    Baseline,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Auto => "auto",
            Mode::St => "st",
            Mode::Ap => "ap",
            Mode::Baseline => "baseline",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(Mode::Auto),
            "st" => Ok(Mode::St),
            "ap" => Ok(Mode::Ap),
            "baseline" => Ok(Mode::Baseline),
            other => Err(Error::InvalidParameter(format!(
                "unknown mode '{other}' (expected auto, st, ap or baseline)"
            ))),
        }
    }
}

/// Clustering configuration. `new` applies the stock defaults; fields are
/// public for explicit overrides.
#[derive(Clone, Debug)]
pub struct ChiefConfig {
    pub motif: MotifId,
    pub k: u32,
    pub mode: Mode,
    /// Sets smaller than this are emitted without further splitting.
    pub min_cluster_size: usize,
    /// A sweep cut is committed only at conductance <= this bound.
    pub max_conductance: f64,
    /// Edges lighter than this are dropped before decomposition.
    pub weight_threshold: Option<f64>,
    pub seed: u64,
}

impl ChiefConfig {
    pub fn new(motif: MotifId, k: u32) -> ChiefConfig {
        ChiefConfig {
            motif,
            k,
            mode: Mode::Auto,
            min_cluster_size: 2 * motif.size(),
            max_conductance: 0.5,
            weight_threshold: None,
            seed: 42,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidK(0));
        }
        if !self.max_conductance.is_finite() || self.max_conductance <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "max_conductance {} must be positive",
                self.max_conductance
            )));
        }
        if self.min_cluster_size < 2 {
            return Err(Error::InvalidParameter(
                "min_cluster_size must be at least 2".into(),
            ));
        }
        if let Some(t) = self.weight_threshold {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "weight_threshold {t} must be a finite non-negative number"
                )));
            }
        }
        Ok(())
    }
}

/// Resolved mode for a configuration.
pub fn classify_mode(mode: Mode, motif: MotifId, k: u32) -> Mode {
    match mode {
        Mode::Auto => {
            if k <= motif.min_degree() {
                Mode::St
            } else {
                Mode::Ap
            }
        }
        m => m,
    }
}

/// Why a vertex ended up outside every cluster.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnclusteredReason {
    /// Removed by the weight/k-core prune.
    Pruned,
    /// Not inside any maximal k-edge-connected subgraph.
    Singleton,
    /// No motif instance contains it at the point it was considered.
    NoMotif,
}

impl fmt::Display for UnclusteredReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnclusteredReason::Pruned => "pruned",
            UnclusteredReason::Singleton => "singleton",
            UnclusteredReason::NoMotif => "no_motif",
        })
    }
}

/// One emitted cluster: members sorted ascending (original vertex ids), the
/// motif conductance of the cut that separated it (0.0 for sets never cut),
/// and the decomposition piece it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub members: Vec<u32>,
    pub conductance: f64,
    pub piece: u32,
}

/// Phase timings in milliseconds.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Timings {
    pub prune_ms: f64,
    pub decompose_ms: f64,
    pub cluster_ms: f64,
    pub total_ms: f64,
}

/// Run statistics, serialized alongside cluster output.
#[derive(Clone, Debug, Serialize)]
pub struct RunStats {
    pub mode_used: String,
    pub motif: String,
    pub k: u32,
    pub n: usize,
    pub m: usize,
    pub pruned_vertices: usize,
    pub singleton_vertices: usize,
    pub pieces: usize,
    pub largest_piece: usize,
    /// Motif instances enumerated across top-level pieces.
    pub instances: usize,
    pub clusters: usize,
    pub clustered_vertices: usize,
    pub no_motif_vertices: usize,
    /// Eigensolves accepted at the relaxed residual.
    pub relaxed_solves: usize,
    pub timings: Timings,
}

/// Full pipeline output.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub clusters: Vec<Cluster>,
    pub unclustered: Vec<(u32, UnclusteredReason)>,
    pub stats: RunStats,
}

/// Runs the full clustering pipeline on `g`.
pub fn run_chief(g: &Graph, cfg: &ChiefConfig) -> Result<RunResult> {
    cfg.validate()?;
    let t_start = Instant::now();
    let mode = classify_mode(cfg.mode, cfg.motif, cfg.k);
    log::info!(
        "run: motif={} k={} mode={} n={} m={}",
        cfg.motif,
        cfg.k,
        mode,
        g.n(),
        g.m()
    );

    let mut unclustered: Vec<(u32, UnclusteredReason)> = Vec::new();

    // Prune.
    let t0 = Instant::now();
    let pruned_store;
    let (work, work_back): (&Graph, Option<&[u32]>) = if mode == Mode::Baseline {
        (g, None)
    } else {
        pruned_store = prune(g, cfg.weight_threshold, cfg.k);
        for &v in &pruned_store.removed {
            unclustered.push((v, UnclusteredReason::Pruned));
        }
        (&pruned_store.graph, Some(&pruned_store.back))
    };
    let pruned_vertices = unclustered.len();
    let prune_ms = ms_since(t0);
    if pruned_vertices > 0 {
        log::debug!("prune removed {pruned_vertices} vertices");
    }

    // Decompose.
    let t0 = Instant::now();
    let pieces: Vec<Vec<u32>> = if mode == Mode::Baseline {
        connected_components(work)
    } else {
        let dec = decompose(work, cfg.k)?;
        for &v in &dec.singletons {
            unclustered.push((orig_id(v, work_back), UnclusteredReason::Singleton));
        }
        dec.subgraphs
    };
    let singleton_vertices = unclustered.len() - pruned_vertices;
    let decompose_ms = ms_since(t0);
    let largest_piece = pieces.iter().map(Vec::len).max().unwrap_or(0);
    log::debug!(
        "{} pieces (largest {largest_piece}), {singleton_vertices} singletons",
        pieces.len()
    );

    // Cluster each piece.
    let t0 = Instant::now();
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut instances_total = 0usize;
    let mut relaxed_solves = 0usize;
    for (piece_id, members) in pieces.iter().enumerate() {
        let (sub, back) = induced_subgraph(work, members)?;
        let instances = enumerate_instances(&sub, cfg.motif);
        instances_total += instances.len();
        let mut local_clusters: Vec<(Vec<u32>, f64)> = Vec::new();
        let mut local_nomotif: Vec<u32> = Vec::new();
        let all: Vec<u32> = (0..sub.n() as u32).collect();
        split_recursive(
            &sub,
            &instances,
            (0..instances.len() as u32).collect(),
            all,
            0.0,
            cfg,
            &mut local_clusters,
            &mut local_nomotif,
            &mut relaxed_solves,
        )?;
        for (set, phi) in local_clusters {
            let mut orig: Vec<u32> = set
                .iter()
                .map(|&v| orig_id(back[v as usize], work_back))
                .collect();
            orig.sort_unstable();
            clusters.push(Cluster {
                members: orig,
                conductance: phi,
                piece: piece_id as u32,
            });
        }
        for v in local_nomotif {
            unclustered.push((
                orig_id(back[v as usize], work_back),
                UnclusteredReason::NoMotif,
            ));
        }
    }
    let cluster_ms = ms_since(t0);

    clusters.sort_by_key(|c| c.members[0]);
    unclustered.sort_by_key(|&(v, _)| v);
    let clustered_vertices: usize = clusters.iter().map(|c| c.members.len()).sum();
    debug_assert_eq!(clustered_vertices + unclustered.len(), g.n());
    let no_motif_vertices = unclustered.len() - pruned_vertices - singleton_vertices;

    let stats = RunStats {
        mode_used: mode.to_string(),
        motif: cfg.motif.to_string(),
        k: cfg.k,
        n: g.n(),
        m: g.m(),
        pruned_vertices,
        singleton_vertices,
        pieces: pieces.len(),
        largest_piece,
        instances: instances_total,
        clusters: clusters.len(),
        clustered_vertices,
        no_motif_vertices,
        relaxed_solves,
        timings: Timings {
            prune_ms,
            decompose_ms,
            cluster_ms,
            total_ms: ms_since(t_start),
        },
    };
    log::info!(
        "done: {} clusters, {} instances, {:.1} ms",
        stats.clusters,
        stats.instances,
        stats.timings.total_ms
    );
    Ok(RunResult {
        clusters,
        unclustered,
        stats,
    })
}

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn orig_id(v: u32, back: Option<&[u32]>) -> u32 {
    match back {
        Some(b) => b[v as usize],
        None => v,
    }
}

struct PruneOutcome {
    graph: Graph,
    /// Work id -> original id.
    back: Vec<u32>,
    /// Original ids removed, ascending.
    removed: Vec<u32>,
}

/// Drops edges under the weight threshold, then iteratively peels vertices
/// of degree < k. Removed vertices cannot belong to any k-edge-connected
/// subgraph, so the decomposition result is unchanged.
fn prune(g: &Graph, threshold: Option<f64>, k: u32) -> PruneOutcome {
    let kept: Vec<(u32, u32, f64)> = g
        .edges()
        .filter(|&(_, _, w)| threshold.map_or(true, |t| w >= t))
        .collect();
    let mut degree = vec![0u32; g.n()];
    for &(u, v, _) in &kept {
        degree[u as usize] += 1;
        degree[v as usize] += 1;
    }
    let mut alive = vec![true; g.n()];
    let mut queue: Vec<u32> = (0..g.n() as u32)
        .filter(|&v| degree[v as usize] < k)
        .collect();
    // Peeling needs adjacency; reuse the kept list bucketed per vertex.
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); g.n()];
    for &(u, v, _) in &kept {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    while let Some(v) = queue.pop() {
        if !alive[v as usize] {
            continue;
        }
        alive[v as usize] = false;
        for &t in &adj[v as usize] {
            if alive[t as usize] {
                degree[t as usize] -= 1;
                if degree[t as usize] < k {
                    queue.push(t);
                }
            }
        }
    }
    let back: Vec<u32> = (0..g.n() as u32).filter(|&v| alive[v as usize]).collect();
    let removed: Vec<u32> = (0..g.n() as u32).filter(|&v| !alive[v as usize]).collect();
    let mut new_id = vec![u32::MAX; g.n()];
    for (i, &v) in back.iter().enumerate() {
        new_id[v as usize] = i as u32;
    }
    let edges: Vec<(u32, u32, f64)> = kept
        .iter()
        .filter(|&&(u, v, _)| alive[u as usize] && alive[v as usize])
        .map(|&(u, v, w)| (new_id[u as usize], new_id[v as usize], w))
        .collect();
    PruneOutcome {
        graph: Graph::from_edges(back.len(), &edges),
        back,
        removed,
    }
}

/// Recursive sweep-cut bisection of `set` (local vertex ids of `sub`),
/// scored over the instances listed in `inst_ids`. `phi_in` is the
/// conductance of the cut that produced this set.
#[allow(clippy::too_many_arguments)]
fn split_recursive(
    sub: &Graph,
    instances: &[MotifInstance],
    inst_ids: Vec<u32>,
    set: Vec<u32>,
    phi_in: f64,
    cfg: &ChiefConfig,
    clusters: &mut Vec<(Vec<u32>, f64)>,
    nomotif: &mut Vec<u32>,
    relaxed: &mut usize,
) -> Result<()> {
    // Motif components of the set under its surviving instances.
    let mut uf = UnionFind::new(sub.n());
    let mut active = vec![false; sub.n()];
    for &ii in &inst_ids {
        let mem = instances[ii as usize].members();
        for &v in mem {
            active[v as usize] = true;
            uf.union(mem[0], v);
        }
    }
    for &v in &set {
        if !active[v as usize] {
            nomotif.push(v);
        }
    }
    // Group instances and vertices by component root.
    let mut idx_of_root = vec![u32::MAX; sub.n()];
    let mut comps: Vec<(Vec<u32>, Vec<u32>)> = Vec::new(); // (vertices, inst ids)
    for &v in &set {
        if !active[v as usize] {
            continue;
        }
        let r = uf.find(v) as usize;
        if idx_of_root[r] == u32::MAX {
            idx_of_root[r] = comps.len() as u32;
            comps.push((Vec::new(), Vec::new()));
        }
        comps[idx_of_root[r] as usize].0.push(v);
    }
    for &ii in &inst_ids {
        let r = uf.find(instances[ii as usize].vertices[0]) as usize;
        comps[idx_of_root[r] as usize].1.push(ii);
    }
    let multi = comps.len() > 1;

    for (comp, comp_insts) in comps {
        let phi_here = if multi { 0.0 } else { phi_in };
        if comp.len() < cfg.min_cluster_size {
            clusters.push((comp, phi_here));
            continue;
        }
        // Build the motif adjacency restricted to this component's
        // instances and locate the best sweep cut.
        let inst_slice: Vec<MotifInstance> = comp_insts
            .iter()
            .map(|&ii| instances[ii as usize])
            .collect();
        let w = MotifAdjacency::build(sub.n(), &inst_slice);
        let lap = build_laplacian(&w)?;
        debug_assert_eq!(lap.active, comp);
        let (fiedler, strict) = fiedler_vector_relaxed(&lap, cfg.seed, RELAXED_RESIDUAL)?;
        if !strict {
            *relaxed += 1;
            log::warn!(
                "eigensolve accepted at relaxed residual {:.2e} ({} vertices)",
                fiedler.residual,
                comp.len()
            );
        }
        let sweep = sweep_cut(&lap, &fiedler.vector, sub.n(), &inst_slice)?;
        if sweep.best.phi <= cfg.max_conductance {
            let mut in_a = vec![false; sub.n()];
            for &v in &sweep.best_set {
                in_a[v as usize] = true;
            }
            let side_b: Vec<u32> = comp.iter().copied().filter(|&v| !in_a[v as usize]).collect();
            let (ids_a, ids_b): (Vec<u32>, Vec<u32>) = {
                let mut a = Vec::new();
                let mut b = Vec::new();
                for &ii in &comp_insts {
                    let mem = instances[ii as usize].members();
                    let cnt = mem.iter().filter(|&&v| in_a[v as usize]).count();
                    if cnt == mem.len() {
                        a.push(ii);
                    } else if cnt == 0 {
                        b.push(ii);
                    } // severed instances vanish from both sides
                }
                (a, b)
            };
            split_recursive(
                sub,
                instances,
                ids_a,
                sweep.best_set.clone(),
                sweep.best.phi,
                cfg,
                clusters,
                nomotif,
                relaxed,
            )?;
            split_recursive(
                sub, instances, ids_b, side_b, sweep.best.phi, cfg, clusters, nomotif, relaxed,
            )?;
        } else {
            clusters.push((comp, phi_here));
        }
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, v: u32) -> u32 {
        let mut r = v;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut c = v;
        while self.parent[c as usize] != r {
            let next = self.parent[c as usize];
            self.parent[c as usize] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins: keeps component roots deterministic.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Outcome of checking that a decomposition severed no motif instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreservationReport {
    pub total: usize,
    pub preserved: usize,
}

impl PreservationReport {
    pub fn holds(&self) -> bool {
        self.total == self.preserved
    }
}

/// Counts how many instances of `motif` in `g` lie entirely inside a single
/// piece of `dec`. In the structure-preserving regime (min degree of the
/// motif at least k) every instance must be preserved.
pub fn st_preservation_check(g: &Graph, dec: &Decomposition, motif: MotifId) -> PreservationReport {
    let owner = dec.owner_map(g.n());
    let instances = enumerate_instances(g, motif);
    let preserved = instances
        .iter()
        .filter(|inst| {
            let mem = inst.members();
            match owner[mem[0] as usize] {
                None => false,
                Some(o) => mem.iter().all(|&v| owner[v as usize] == Some(o)),
            }
        })
        .count();
    PreservationReport {
        total: instances.len(),
        preserved,
    }
}
