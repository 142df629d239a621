//! `motifcut` — command-line front end for motif-aware clustering over
//! maximal k-edge-connected decompositions.
//!
//! Subcommands: `cluster` (full pipeline), `decompose` (pieces only),
//! `kscan` (metric sweep over a k range), `bench` (chief vs. baseline wall
//! times), `synth` (small-world generator), `audit` (spectral perturbation
//! checks over a corpus directory).
//!
//! Exit codes: 0 success, 2 flag/usage errors, 3 I/O or input-format
//! failures, 4 algorithmic failures (the error message names the module
//! contract that was violated). Logging goes to stderr, controlled by the
//! `CHIEF_LOG` env var (`error`, `info`, `debug`).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use motifcut_core::{
    ccp, check_adjacency_perturbation, check_laplacian_perturbation, cii, classify_mode, csp,
    decompose, enumerate_instances, generate, load_edge_list, modularity, motif_conductance,
    run_chief, ChiefConfig, Error, Graph, Mode, MotifId, RunResult, RunStats, SynthSpec,
    VertexMap,
};
use serde::Serialize;

fn parse_motif(s: &str) -> Result<MotifId, String> {
    s.parse::<MotifId>().map_err(|e| e.to_string())
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse::<Mode>().map_err(|e| e.to_string())
}

#[derive(Parser)]
#[command(
    name = "motifcut",
    version,
    about = "Motif-aware clustering over k-edge-connected decompositions"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the full clustering pipeline and write cluster assignments.
    Cluster(ClusterArgs),
    /// Decompose into maximal k-edge-connected pieces and write the owner
    /// of every vertex.
    Decompose(DecomposeArgs),
    /// Decompose at every k in a range and report modularity / CCP / CSP
    /// per k, flagging the best-modularity row.
    Kscan(KscanArgs),
    /// Time the accelerated pipeline against the baseline on one input.
    Bench(BenchArgs),
    /// Generate a small-world benchmark graph.
    Synth(SynthArgs),
    /// Run the spectral perturbation checks over a directory of edge lists.
    Audit(AuditArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Edge-list file: `u v [w]` per line, `#` comments.
    #[arg(long)]
    input: PathBuf,
    /// Read the third column as edge weight (default: every edge weighs 1).
    #[arg(long)]
    weighted: bool,
}

#[derive(Args)]
struct ClusterArgs {
    /// Edge-list file: `u v [w]` per line, `#` comments. Either this or
    /// the --papers/--co-papers pair must be given.
    #[arg(long, required_unless_present = "co_papers", conflicts_with_all = ["papers", "co_papers"])]
    input: Option<PathBuf>,
    /// Read the third column of --input as edge weight.
    #[arg(long)]
    weighted: bool,
    /// Per-vertex paper counts (`name count` per line); with --co-papers,
    /// edges are weighted by the collaboration intensity index instead of
    /// reading --input.
    #[arg(long, requires = "co_papers")]
    papers: Option<PathBuf>,
    /// Per-pair co-authored paper counts (`name name count` per line).
    #[arg(long, requires = "papers")]
    co_papers: Option<PathBuf>,
    #[arg(long, value_parser = parse_motif)]
    motif: MotifId,
    /// Connectivity threshold for the decomposition.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    #[arg(long, value_parser = parse_mode, default_value = "auto")]
    mode: Mode,
    /// Stop splitting below this size (default: twice the motif size).
    #[arg(long)]
    min_cluster: Option<usize>,
    /// Commit a sweep cut only at conductance <= this bound.
    #[arg(long, default_value_t = 0.5)]
    max_conductance: f64,
    /// Drop edges lighter than this before decomposing.
    #[arg(long)]
    weight_threshold: Option<f64>,
    /// Cluster assignment output (TSV: external_id, cluster_id,
    /// conductance). A `<out>.unclustered` sidecar lists the rest.
    #[arg(long)]
    out: PathBuf,
    /// Run statistics JSON (default: `<out>.stats.json`).
    #[arg(long)]
    stats: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads (default: all cores). `--threads 1` is the
    /// sequential reference path.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    /// Output TSV: external_id, piece_id, piece_kind.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct KscanArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = parse_motif)]
    motif: MotifId,
    #[arg(long)]
    k_min: u32,
    #[arg(long)]
    k_max: u32,
    /// Also write the report here (always printed to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = parse_motif)]
    motif: MotifId,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    /// Timed repetitions per mode (median reported); must be positive.
    #[arg(long, default_value_t = 3)]
    repeat: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct SynthArgs {
    /// Vertex count (>= 7); the output has exactly 3*nv edges.
    #[arg(long, value_parser = clap::value_parser!(u64).range(7..))]
    nv: u64,
    /// Rewiring probability in [0, 1].
    #[arg(long)]
    rrp: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AuditArgs {
    /// Directory of edge-list files (every regular file is checked).
    #[arg(long)]
    dir: PathBuf,
    #[arg(long, default_value_t = 2)]
    k_min: u32,
    #[arg(long, default_value_t = 4)]
    k_max: u32,
    #[arg(long)]
    weighted: bool,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CHIEF_LOG")).init();
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("motifcut: error: {e}");
            match e {
                Error::Io { .. } | Error::Parse { .. } | Error::NegativeWeight { .. } => 3,
                _ => 4,
            }
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> Result<i32, Error> {
    match cli.cmd {
        Cmd::Cluster(args) => cmd_cluster(args),
        Cmd::Decompose(args) => cmd_decompose(args),
        Cmd::Kscan(args) => cmd_kscan(args),
        Cmd::Bench(args) => cmd_bench(args),
        Cmd::Synth(args) => cmd_synth(args),
        Cmd::Audit(args) => cmd_audit(args),
    }
}

/// Flag-level validation failure: print like clap and exit 2.
fn usage_error(msg: &str) -> Result<i32, Error> {
    eprintln!("error: {msg}\n\nFor more information, try '--help'.");
    Ok(2)
}

// ---------------------------------------------------------------------------
// cluster
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct StatsDoc<'a> {
    load_ms: f64,
    lines_read: usize,
    #[serde(flatten)]
    run: &'a RunStats,
}

fn cmd_cluster(args: ClusterArgs) -> Result<i32, Error> {
    let t_load = Instant::now();
    let (g, map, lines_read) = match (&args.papers, &args.co_papers) {
        (Some(papers), Some(co_papers)) => load_cii_graph(papers, co_papers)?,
        _ => {
            let input = args.input.as_ref().expect("clap enforces --input");
            let (g, map, report) = load_edge_list(input, args.weighted)?;
            (g, map, report.lines_read)
        }
    };
    let load_ms = t_load.elapsed().as_secs_f64() * 1e3;

    let mut cfg = ChiefConfig::new(args.motif, args.k);
    cfg.mode = args.mode;
    cfg.max_conductance = args.max_conductance;
    cfg.weight_threshold = args.weight_threshold;
    cfg.seed = args.seed;
    if let Some(mc) = args.min_cluster {
        cfg.min_cluster_size = mc;
    }

    let result = run_in_pool(args.threads, || run_chief(&g, &cfg))?;

    let mut out = String::new();
    for (cid, cluster) in result.clusters.iter().enumerate() {
        for &v in &cluster.members {
            writeln!(out, "{}\t{}\t{:.6}", map.name(v), cid, cluster.conductance)
                .expect("string write");
        }
    }
    write_text(&args.out, &out)?;

    let mut side = String::new();
    for &(v, reason) in &result.unclustered {
        writeln!(side, "{}\t{}", map.name(v), reason).expect("string write");
    }
    write_text(&sidecar_path(&args.out, "unclustered"), &side)?;

    let stats_path = args
        .stats
        .clone()
        .unwrap_or_else(|| sidecar_path(&args.out, "stats.json"));
    let doc = StatsDoc {
        load_ms,
        lines_read,
        run: &result.stats,
    };
    let json = serde_json::to_string_pretty(&doc).expect("stats serialize");
    write_text(&stats_path, &json)?;

    println!(
        "clustered {} vertices into {} clusters (mode {}, {} unclustered); \
         wrote {}",
        result.stats.clustered_vertices,
        result.stats.clusters,
        result.stats.mode_used,
        result.unclustered.len(),
        args.out.display()
    );
    Ok(0)
}

/// Builds a CII-weighted graph from a per-vertex paper-count file and a
/// per-pair co-paper-count file. The pair file provides the edges.
fn load_cii_graph(
    papers_path: &Path,
    co_papers_path: &Path,
) -> Result<(Graph, VertexMap, usize), Error> {
    let mut map = VertexMap::new();
    let mut counts: Vec<usize> = Vec::new();
    for (lineno, fields) in read_rows(papers_path)? {
        let [name, count] = expect_columns(papers_path, lineno, &fields)?;
        let count: usize = count.parse().map_err(|_| Error::Parse {
            path: papers_path.to_owned(),
            line: lineno,
            msg: format!("bad paper count {count:?}"),
        })?;
        let v = map.intern(name) as usize;
        if v < counts.len() {
            return Err(Error::Parse {
                path: papers_path.to_owned(),
                line: lineno,
                msg: format!("duplicate paper count for {name:?}"),
            });
        }
        counts.push(count);
    }

    let mut lines = 0usize;
    let mut edges: Vec<(u32, u32, f64)> = Vec::new();
    for (lineno, fields) in read_rows(co_papers_path)? {
        let [a, b, co] = expect_columns(co_papers_path, lineno, &fields)?;
        let co: usize = co.parse().map_err(|_| Error::Parse {
            path: co_papers_path.to_owned(),
            line: lineno,
            msg: format!("bad co-paper count {co:?}"),
        })?;
        let resolve = |name: &str| {
            map.get(name).ok_or_else(|| Error::Parse {
                path: co_papers_path.to_owned(),
                line: lineno,
                msg: format!("no paper count for {name:?}"),
            })
        };
        let u = resolve(a)?;
        let v = resolve(b)?;
        if u == v {
            continue;
        }
        let w = cii(counts[u as usize], counts[v as usize], co).map_err(|e| Error::Parse {
            path: co_papers_path.to_owned(),
            line: lineno,
            msg: e.to_string(),
        })?;
        lines += 1;
        if w > 0.0 {
            edges.push((u, v, w));
        }
    }
    Ok((Graph::from_edges(map.len(), &edges), map, lines))
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

fn cmd_decompose(args: DecomposeArgs) -> Result<i32, Error> {
    let (g, map, _) = load_edge_list(&args.input.input, args.input.weighted)?;
    let dec = decompose(&g, args.k)?;
    let mut out = String::new();
    for (pid, piece) in dec.subgraphs.iter().enumerate() {
        for &v in piece {
            writeln!(out, "{}\t{}\tsubgraph", map.name(v), pid).expect("string write");
        }
    }
    let base = dec.subgraphs.len();
    for (i, &v) in dec.singletons.iter().enumerate() {
        writeln!(out, "{}\t{}\tsingleton", map.name(v), base + i).expect("string write");
    }
    write_text(&args.out, &out)?;
    println!(
        "decomposed at k={}: {} subgraphs, {} singletons; wrote {}",
        args.k,
        dec.subgraphs.len(),
        dec.singletons.len(),
        args.out.display()
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// kscan
// ---------------------------------------------------------------------------

fn cmd_kscan(args: KscanArgs) -> Result<i32, Error> {
    if args.k_min == 0 || args.k_min > args.k_max {
        return usage_error(&format!(
            "--k-min {} must be positive and at most --k-max {}",
            args.k_min, args.k_max
        ));
    }
    let (g, _map, _) = load_edge_list(&args.input.input, args.input.weighted)?;

    struct Row {
        k: u32,
        pieces: usize,
        singletons: usize,
        metrics: Option<(f64, Option<f64>, Option<f64>)>,
    }
    let mut rows: Vec<Row> = Vec::new();
    for k in args.k_min..=args.k_max {
        let dec = decompose(&g, k)?;
        if dec.subgraphs.is_empty() {
            rows.push(Row {
                k,
                pieces: 0,
                singletons: dec.singletons.len(),
                metrics: None,
            });
            continue;
        }
        let q = modularity(&g, &dec.subgraphs)?;
        // CCP per piece; pieces are k-edge-connected, hence connected.
        let mut ccp_sum = 0.0;
        let mut ccp_n = 0usize;
        for piece in &dec.subgraphs {
            match ccp(&g, piece) {
                Ok(c) => {
                    ccp_sum += c;
                    ccp_n += 1;
                }
                Err(e) => log::warn!("k={k}: ccp undefined for a piece: {e}"),
            }
        }
        let avg_ccp = (ccp_n > 0).then(|| ccp_sum / ccp_n as f64);
        let avg_csp = if dec.subgraphs.len() >= 2 {
            csp(&g, &dec.subgraphs)?.mean
        } else {
            None
        };
        rows.push(Row {
            k,
            pieces: dec.subgraphs.len(),
            singletons: dec.singletons.len(),
            metrics: Some((q, avg_ccp, avg_csp)),
        });
    }

    let best = rows
        .iter()
        .filter_map(|r| r.metrics.map(|(q, _, _)| (r.k, q)))
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(k, _)| k);

    let fmt_opt = |x: Option<f64>| match x {
        Some(v) => format!("{v:.6}"),
        None => "-".into(),
    };
    let mut out = String::from("k\tpieces\tsingletons\tmodularity\tavg_ccp\tavg_csp\tbest\n");
    for r in &rows {
        let (q, avg_ccp, avg_csp) = match r.metrics {
            Some((q, c, s)) => (Some(q), c, s),
            None => (None, None, None),
        };
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.k,
            r.pieces,
            r.singletons,
            fmt_opt(q),
            fmt_opt(avg_ccp),
            fmt_opt(avg_csp),
            if best == Some(r.k) { "*" } else { "" }
        )
        .expect("string write");
    }
    print!("{out}");
    if let Some(path) = &args.out {
        write_text(path, &out)?;
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

fn cmd_bench(args: BenchArgs) -> Result<i32, Error> {
    if args.repeat == 0 {
        return usage_error("--repeat must be positive");
    }
    let (g, _map, _) = load_edge_list(&args.input.input, args.input.weighted)?;

    let mut chief_cfg = ChiefConfig::new(args.motif, args.k);
    chief_cfg.seed = args.seed;
    let mut base_cfg = chief_cfg.clone();
    base_cfg.mode = Mode::Baseline;
    let resolved = classify_mode(chief_cfg.mode, args.motif, args.k);

    // Warm-up pass (untimed) so allocator and page-cache effects hit both
    // modes equally, then timed interleaved pairs.
    let mut chief_last = run_chief(&g, &chief_cfg)?;
    let mut base_last = run_chief(&g, &base_cfg)?;
    let mut chief_ms = Vec::with_capacity(args.repeat);
    let mut base_ms = Vec::with_capacity(args.repeat);
    for _ in 0..args.repeat {
        let t = Instant::now();
        base_last = run_chief(&g, &base_cfg)?;
        base_ms.push(t.elapsed().as_secs_f64() * 1e3);
        let t = Instant::now();
        chief_last = run_chief(&g, &chief_cfg)?;
        chief_ms.push(t.elapsed().as_secs_f64() * 1e3);
    }
    let base_med = median(&mut base_ms);
    let chief_med = median(&mut chief_ms);

    if chief_last.stats.instances > base_last.stats.instances {
        return Err(Error::InvalidParameter(format!(
            "bench invariant violated: accelerated mode enumerated {} motif \
             instances but the baseline enumerated {}",
            chief_last.stats.instances, base_last.stats.instances
        )));
    }

    // Quality parity: in structure-preserving mode both cluster families
    // must score the same total motif conductance (within 5%), measured
    // against the full graph's instance list.
    let parity = if resolved == Mode::St {
        let instances = enumerate_instances(&g, args.motif);
        let score = |r: &RunResult| -> f64 {
            r.clusters
                .iter()
                .map(|c| motif_conductance(g.n(), &instances, &c.members).phi)
                .sum()
        };
        let (sc, sb) = (score(&chief_last), score(&base_last));
        let tol = 0.05 * sb.abs().max(sc.abs());
        if (sc - sb).abs() > tol + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "bench invariant violated: motif-conductance sums diverge \
                 beyond 5% in st mode (chief {sc:.6}, baseline {sb:.6})"
            )));
        }
        "ok"
    } else {
        "n/a"
    };

    println!("mode\t{resolved}");
    println!("repeat\t{}", args.repeat);
    println!("baseline_median_ms\t{base_med:.3}");
    println!("chief_median_ms\t{chief_med:.3}");
    println!("speedup\t{:.3}", base_med / chief_med);
    println!("baseline_instances\t{}", base_last.stats.instances);
    println!("chief_instances\t{}", chief_last.stats.instances);
    println!("baseline_clusters\t{}", base_last.stats.clusters);
    println!("chief_clusters\t{}", chief_last.stats.clusters);
    println!("parity\t{parity}");
    Ok(0)
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

fn cmd_synth(args: SynthArgs) -> Result<i32, Error> {
    if !(0.0..=1.0).contains(&args.rrp) {
        return usage_error(&format!("--rrp {} must lie in [0, 1]", args.rrp));
    }
    let spec = SynthSpec {
        nv: args.nv as usize,
        rrp: args.rrp,
        seed: args.seed,
    };
    let g = generate(&spec)?;
    let mut out = format!(
        "# small-world graph: nv={} rrp={} seed={} edges={}\n",
        spec.nv,
        spec.rrp,
        spec.seed,
        g.m()
    );
    for (u, v, _) in g.edges() {
        writeln!(out, "{u}\t{v}").expect("string write");
    }
    write_text(&args.out, &out)?;
    println!(
        "generated {} vertices / {} edges; wrote {}",
        g.n(),
        g.m(),
        args.out.display()
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

fn cmd_audit(args: AuditArgs) -> Result<i32, Error> {
    if args.k_min == 0 || args.k_min > args.k_max {
        return usage_error(&format!(
            "--k-min {} must be positive and at most --k-max {}",
            args.k_min, args.k_max
        ));
    }
    let entries = std::fs::read_dir(&args.dir).map_err(|source| Error::Io {
        path: args.dir.clone(),
        source,
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();

    println!("file\tk\tdelta\tadjacency\tlaplacian");
    let mut checks = 0usize;
    let mut violations = 0usize;
    for path in &files {
        let (g, _map, _) = load_edge_list(path, args.weighted)?;
        let name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        for k in args.k_min..=args.k_max {
            let adj = check_adjacency_perturbation(&g, k)?;
            let lap = match check_laplacian_perturbation(&g, k) {
                Ok(r) => Some(r),
                Err(Error::EmptyMatrices) => None, // decomposition kept nothing
                Err(e) => return Err(e),
            };
            checks += 1;
            let adj_ok = adj.holds;
            let lap_ok = lap.map(|r| r.laplacian_holds);
            if !adj_ok || lap_ok == Some(false) {
                violations += 1;
            }
            println!(
                "{name}\t{k}\t{:.6}\t{}\t{}",
                adj.delta,
                if adj_ok { "pass" } else { "FAIL" },
                match lap_ok {
                    Some(true) => "pass",
                    Some(false) => "FAIL",
                    None => "skip",
                }
            );
        }
    }
    println!("audit: {checks} graph/k checks, {violations} violations");
    Ok(if violations == 0 { 0 } else { 4 })
}

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

fn run_in_pool<T>(
    threads: Option<u64>,
    job: impl FnOnce() -> Result<T, Error> + Send,
) -> Result<T, Error>
where
    T: Send,
{
    match threads {
        None => job(),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(job),
    }
}

fn write_text(path: &Path, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// `clusters.tsv` → `clusters.tsv.unclustered` etc.; keeps the original
/// extension so related outputs sort together.
fn sidecar_path(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

/// Non-comment rows of a whitespace-separated file, 1-based line numbers.
fn read_rows(path: &Path) -> Result<Vec<(usize, Vec<String>)>, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split_once('#').map_or(line, |(b, _)| b);
        let fields: Vec<String> = body.split_whitespace().map(str::to_owned).collect();
        if !fields.is_empty() {
            rows.push((i + 1, fields));
        }
    }
    Ok(rows)
}

fn expect_columns<'a, const N: usize>(
    path: &Path,
    lineno: usize,
    fields: &'a [String],
) -> Result<[&'a str; N], Error> {
    if fields.len() != N {
        return Err(Error::Parse {
            path: path.to_owned(),
            line: lineno,
            msg: format!("expected {N} columns, found {}", fields.len()),
        });
    }
    let mut out = [""; N];
    for (slot, f) in out.iter_mut().zip(fields) {
        *slot = f;
    }
    Ok(out)
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}
