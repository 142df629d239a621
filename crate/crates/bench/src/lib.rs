//! Shared fixtures for the criterion benchmarks.

use motifcut_core::{generate, Graph, SynthSpec};

/// Small-world benchmark graph: `nv` vertices, exactly `3 * nv` edges.
pub fn small_world(nv: usize, rrp: f64, seed: u64) -> Graph {
    generate(&SynthSpec { nv, rrp, seed }).expect("valid synth spec")
}

/// Two K4 cliques joined by two bridge edges; the stock 8-vertex fixture.
pub fn barbell() -> Graph {
    let edges: Vec<(u32, u32, f64)> = [
        (0, 1),
        (0, 2),
        (0, 3),
        (1, 2),
        (1, 3),
        (2, 3),
        (4, 5),
        (4, 6),
        (4, 7),
        (5, 6),
        (5, 7),
        (6, 7),
        (3, 4),
        (2, 5),
    ]
    .into_iter()
    .map(|(u, v)| (u, v, 1.0))
    .collect();
    Graph::from_edges(8, &edges)
}
