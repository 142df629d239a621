//! Reproducible small-world benchmark graphs.
//!
//! The generator follows the ring-rewiring recipe: vertices on a ring, each
//! connected to its three nearest neighbors on both sides (K = 6, so the
//! edge count is exactly 3·NV), then each edge's far endpoint is rewired
//! with probability `rrp` to a uniformly random non-adjacent vertex.
//!
//! Determinism contract: every edge draws from its own stream of a
//! counter-based RNG seeded by the master seed, so the output is a pure
//! function of `(nv, rrp, seed)` independent of thread count or platform.

use crate::error::{Error, Result};
use crate::graph::Graph;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Parameters for the small-world generator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthSpec {
    /// Number of vertices; at least 7 so the K = 6 ring lattice is simple.
    pub nv: usize,
    /// Per-edge rewiring probability in [0, 1].
    pub rrp: f64,
    pub seed: u64,
}

/// The benchmark ladder used across the stock experiments.
pub const BENCH_LADDER: [(usize, f64); 5] = [
    (100, 0.2),
    (1_000, 0.3),
    (10_000, 0.4),
    (100_000, 0.5),
    (1_000_000, 0.6),
];

/// Generates the small-world graph for `spec`. The result always has
/// exactly `3 * nv` edges and no duplicate edges or self-loops.
pub fn generate(spec: &SynthSpec) -> Result<Graph> {
    if spec.nv < 7 {
        return Err(Error::TooSmall(spec.nv));
    }
    if !(0.0..=1.0).contains(&spec.rrp) {
        return Err(Error::InvalidParameter(format!(
            "rewiring probability {} outside [0, 1]",
            spec.rrp
        )));
    }
    let n = spec.nv as u32;
    // Adjacency as sorted neighbor sets for O(log d) membership tests while
    // rewiring.
    let mut adj: Vec<Vec<u32>> = vec![Vec::with_capacity(8); spec.nv];
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(3 * spec.nv);
    for u in 0..n {
        for j in 1..=3u32 {
            let v = (u + j) % n;
            edges.push((u, v));
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
    }
    for row in adj.iter_mut() {
        row.sort_unstable();
    }

    let has = |adj: &Vec<Vec<u32>>, a: u32, b: u32| adj[a as usize].binary_search(&b).is_ok();

    for (ei, e) in edges.iter_mut().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(ei as u64);
        if !rng.gen_bool(spec.rrp) {
            continue;
        }
        let (u, old_v) = *e;
        // Retarget the far endpoint: uniform draw, rejected while it hits
        // u itself or an existing neighbor of u; bounded attempts keep the
        // loop total even in dense corners.
        let mut chosen = None;
        for _ in 0..100 {
            let cand = rng.gen_range(0..n);
            if cand != u && cand != old_v && !has(&adj, u, cand) {
                chosen = Some(cand);
                break;
            }
        }
        let Some(new_v) = chosen else { continue };
        // Detach old edge, attach new one.
        let pos = adj[u as usize].binary_search(&old_v).unwrap();
        adj[u as usize].remove(pos);
        let pos = adj[old_v as usize].binary_search(&u).unwrap();
        adj[old_v as usize].remove(pos);
        let ins = adj[u as usize].binary_search(&new_v).unwrap_err();
        adj[u as usize].insert(ins, new_v);
        let ins = adj[new_v as usize].binary_search(&u).unwrap_err();
        adj[new_v as usize].insert(ins, u);
        *e = (u, new_v);
    }

    let weighted: Vec<(u32, u32, f64)> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
    Ok(Graph::from_edges(spec.nv, &weighted))
}
