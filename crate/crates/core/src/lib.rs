//! Motif-aware graph clustering on top of maximal k-edge-connected
//! decomposition.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] — compact CSR graphs, edge-list I/O, induced subgraphs.
//! * [`mincut`] — deterministic global minimum cut (maximum-adjacency
//!   phases with contraction) plus a bounded variant that stops as soon as
//!   a cut below a threshold is found.
//! * [`kcc`] — maximal k-edge-connected subgraph decomposition.
//! * [`motif`] — 3/4-vertex motif catalog, induced-instance enumeration,
//!   motif adjacency and motif conductance.
//! * [`spectral`] — normalized motif Laplacian, Fiedler vector, sweep cuts.
//! * [`pipeline`] — the end-to-end clustering driver and its configuration.
//! * [`metrics`] — modularity, co-occurrence interaction, cluster path
//!   statistics.
//! * [`synth`] — reproducible small-world benchmark graphs.
//! * [`verify`] — numeric spectra comparisons between the full graph and
//!   its decomposition.

pub mod error;
pub mod graph;
pub mod kcc;
pub mod metrics;
pub mod mincut;
pub mod motif;
pub mod pipeline;
pub mod spectral;
pub mod synth;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{
    connected_components, induced_subgraph, load_edge_list, write_edge_list, Graph, LoadReport,
    SubgraphRef, VertexMap,
};
pub use kcc::{decompose, decompose_from_base, Decomposition};
pub use metrics::{cii, ccp, csp, modularity, CspResult};
pub use mincut::{sw_mincut, sw_mincut_bounded, BoundedCut, CutResult};
pub use motif::{
    enumerate_instances, motif_conductance, Conductance, InstanceIndex, MotifAdjacency, MotifId,
    MotifInstance,
};
pub use pipeline::{
    classify_mode, run_chief, st_preservation_check, ChiefConfig, Cluster, Mode,
    PreservationReport, RunResult, RunStats, UnclusteredReason,
};
pub use spectral::{build_laplacian, fiedler_vector, sweep_cut, FiedlerResult, MotifLaplacian, SweepResult};
pub use synth::{generate, SynthSpec, BENCH_LADDER};
pub use verify::{
    check_adjacency_perturbation, check_laplacian_perturbation, check_spectral_ordering,
    motif_components, PerturbationReport,
};
