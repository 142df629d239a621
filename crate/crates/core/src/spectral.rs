//! Normalized motif Laplacian, Fiedler vector, and sweep cuts.
//!
//! The Laplacian is built on the *active* vertex set (motif degree > 0):
//! L = I − D^(−1/2) W D^(−1/2). Its smallest eigenvalue is exactly 0 with
//! eigenvector D^(1/2)·1 per connected component; the second eigenvector
//! restricted to a connected motif graph orders vertices for the sweep.
//!
//! Two solvers share the interface: a dense symmetric eigendecomposition for
//! small active sets, and Lanczos with full reorthogonalization against a
//! growing basis plus explicit deflation of the known null vector for large
//! ones.

use crate::error::{Error, Result};
use crate::motif::{Conductance, MotifAdjacency, MotifInstance};
use nalgebra::DMatrix;

/// Dense solves are used at or below this active-set size.
const DENSE_LIMIT: usize = 512;
/// Lanczos convergence tolerance on the Ritz residual.
const LANCZOS_TOL: f64 = 1e-8;
/// Hard cap on Lanczos basis size per restart cycle.
const LANCZOS_BASIS: usize = 256;

/// Motif Laplacian over the active vertices of a motif adjacency.
pub struct MotifLaplacian {
    /// Active vertices (original ids), ascending; row i of the operator
    /// corresponds to `active[i]`.
    pub active: Vec<u32>,
    /// Vertices with zero motif degree, excluded from the operator.
    pub zero_degree: Vec<u32>,
    /// CSR of the normalized adjacency D^(−1/2) W D^(−1/2) on active rows.
    offsets: Vec<u32>,
    targets: Vec<u32>,
    norm_weights: Vec<f64>,
    /// sqrt of weighted motif degree per active row.
    d_sqrt: Vec<f64>,
}

impl MotifLaplacian {
    /// Local (active-row) index of an original vertex id, if active.
    pub fn local_index(&self, v: u32) -> Option<usize> {
        self.active.binary_search(&v).ok()
    }

    pub fn n_active(&self) -> usize {
        self.active.len()
    }

    /// y = L x = x − N x where N is the normalized adjacency.
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..x.len() {
            let lo = self.offsets[i] as usize;
            let hi = self.offsets[i + 1] as usize;
            let mut acc = 0.0;
            for e in lo..hi {
                acc += self.norm_weights[e] * x[self.targets[e] as usize];
            }
            y[i] = x[i] - acc;
        }
    }

    /// Dense matrix of L (for small active sets and for tests).
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n_active();
        let mut m = DMatrix::identity(n, n);
        for i in 0..n {
            let lo = self.offsets[i] as usize;
            let hi = self.offsets[i + 1] as usize;
            for e in lo..hi {
                m[(i, self.targets[e] as usize)] -= self.norm_weights[e];
            }
        }
        m
    }
}

/// Builds the normalized motif Laplacian from a motif adjacency. Errors with
/// [`Error::EmptyMotifSignal`] when no vertex has positive motif degree and
/// [`Error::TooFewActive`] when fewer than two do.
pub fn build_laplacian(w: &MotifAdjacency) -> Result<MotifLaplacian> {
    let active = w.active_vertices();
    if active.is_empty() {
        return Err(Error::EmptyMotifSignal);
    }
    if active.len() < 2 {
        return Err(Error::TooFewActive);
    }
    let zero_degree: Vec<u32> = (0..w.n() as u32)
        .filter(|&v| w.degree(v) == 0.0)
        .collect();
    let mut local = vec![u32::MAX; w.n()];
    for (i, &v) in active.iter().enumerate() {
        local[v as usize] = i as u32;
    }
    let d_sqrt: Vec<f64> = active.iter().map(|&v| w.degree(v).sqrt()).collect();
    let mut offsets = vec![0u32; active.len() + 1];
    let mut targets = Vec::new();
    let mut norm_weights = Vec::new();
    for (i, &v) in active.iter().enumerate() {
        let (ts, ws) = w.neighbors(v);
        for (&t, &wt) in ts.iter().zip(ws) {
            let j = local[t as usize];
            debug_assert_ne!(j, u32::MAX, "motif edge to zero-degree vertex");
            targets.push(j);
            norm_weights.push(wt / (d_sqrt[i] * d_sqrt[j as usize]));
        }
        offsets[i + 1] = targets.len() as u32;
    }
    Ok(MotifLaplacian {
        active,
        zero_degree,
        offsets,
        targets,
        norm_weights,
        d_sqrt,
    })
}

/// Fiedler computation outcome.
pub struct FiedlerResult {
    /// Second-smallest eigenvalue of L.
    pub lambda_2: f64,
    /// Eigenvector in active-row order, sign-fixed: first nonzero
    /// coordinate positive.
    pub vector: Vec<f64>,
    /// Achieved residual ‖Lx − λx‖ (0 for the dense path).
    pub residual: f64,
    pub iterations: usize,
}

/// Computes the Fiedler pair of the motif Laplacian.
///
/// The caller must pass a Laplacian whose motif graph is connected; with
/// several components the second eigenvalue is another 0 and the vector
/// mixes components arbitrarily, so the pipeline splits components first.
pub fn fiedler_vector(lap: &MotifLaplacian, seed: u64) -> Result<FiedlerResult> {
    let n = lap.n_active();
    let mut res = if n <= DENSE_LIMIT {
        dense_fiedler(lap)
    } else {
        lanczos_fiedler(lap, seed)
    }?;
    fix_sign(&mut res.vector);
    Ok(res)
}

fn dense_fiedler(lap: &MotifLaplacian) -> Result<FiedlerResult> {
    let m = lap.to_dense();
    // Symmetrize against roundoff before factorizing.
    let sym = (&m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let idx = order[1];
    let lambda_2 = eig.eigenvalues[idx];
    let vector: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
    Ok(FiedlerResult {
        lambda_2,
        vector,
        residual: 0.0,
        iterations: 0,
    })
}

/// Lanczos on L with explicit deflation of v0 = D^(1/2)·1 / ‖·‖ (the exact
/// null vector on a connected motif graph), full reorthogonalization, and
/// thick restarts from the best Ritz vector.
fn lanczos_fiedler(lap: &MotifLaplacian, seed: u64) -> Result<FiedlerResult> {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    let n = lap.n_active();
    let mut rng = StdRng::seed_from_u64(seed);
    let v0 = {
        let mut v: Vec<f64> = lap.d_sqrt.clone();
        normalize(&mut v);
        v
    };
    let max_iters = 10 * n;
    let mut total_iters = 0usize;
    let mut start: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut best: Option<(f64, Vec<f64>, f64)> = None;

    while total_iters < max_iters {
        // Deflate the null direction and any converged estimate's direction
        // is unnecessary: restarting from the Ritz vector suffices.
        orthogonalize(&mut start, &v0);
        if norm(&start) < 1e-12 {
            // Degenerate restart vector; re-randomize.
            for x in start.iter_mut() {
                *x = rng.gen_range(-1.0..1.0);
            }
            orthogonalize(&mut start, &v0);
        }
        normalize(&mut start);

        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut w = vec![0.0; n];

        let budget = LANCZOS_BASIS.min(max_iters - total_iters).max(2);
        for j in 0..budget {
            total_iters += 1;
            lap.apply(&basis[j], &mut w);
            let alpha = dot(&w, &basis[j]);
            alphas.push(alpha);
            // w -= alpha * v_j + beta_{j-1} * v_{j-1}
            for i in 0..n {
                w[i] -= alpha * basis[j][i];
            }
            if j > 0 {
                let b = betas[j - 1];
                for i in 0..n {
                    w[i] -= b * basis[j - 1][i];
                }
            }
            // Full reorthogonalization against v0 and the whole basis.
            orthogonalize(&mut w, &v0);
            for q in &basis {
                orthogonalize(&mut w, q);
            }
            let beta = norm(&w);
            if beta < 1e-14 {
                break;
            }
            if j + 1 < budget {
                betas.push(beta);
                basis.push(w.iter().map(|x| x / beta).collect());
            }
        }

        // Smallest Ritz pair of the tridiagonal.
        let m = alphas.len();
        let mut t = DMatrix::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alphas[i];
            if i + 1 < m {
                t[(i, i + 1)] = betas[i];
                t[(i + 1, i)] = betas[i];
            }
        }
        let eig = t.symmetric_eigen();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let idx = order[0];
        let theta = eig.eigenvalues[idx];
        let y = eig.eigenvectors.column(idx);
        let mut ritz = vec![0.0; n];
        for (j, q) in basis.iter().enumerate() {
            let c = y[j];
            for i in 0..n {
                ritz[i] += c * q[i];
            }
        }
        orthogonalize(&mut ritz, &v0);
        normalize(&mut ritz);
        let mut lr = vec![0.0; n];
        lap.apply(&ritz, &mut lr);
        let mut resid = 0.0;
        for i in 0..n {
            let r = lr[i] - theta * ritz[i];
            resid += r * r;
        }
        let resid = resid.sqrt();
        match &best {
            Some((_, _, br)) if *br <= resid => {}
            _ => best = Some((theta, ritz.clone(), resid)),
        }
        if resid <= LANCZOS_TOL {
            let (lambda_2, vector, residual) = best.unwrap();
            return Ok(FiedlerResult {
                lambda_2,
                vector,
                residual,
                iterations: total_iters,
            });
        }
        start = ritz;
    }

    match best {
        Some((_, _, residual)) => Err(Error::NonConvergence {
            residual,
            iterations: total_iters,
        }),
        None => Err(Error::NonConvergence {
            residual: f64::INFINITY,
            iterations: total_iters,
        }),
    }
}

/// Best-effort variant: returns the best Ritz pair even when the residual
/// misses the strict tolerance, as long as it is usable for ordering.
pub fn fiedler_vector_relaxed(
    lap: &MotifLaplacian,
    seed: u64,
    accept_residual: f64,
) -> Result<(FiedlerResult, bool)> {
    match fiedler_vector(lap, seed) {
        Ok(r) => Ok((r, true)),
        Err(Error::NonConvergence { residual, .. }) if residual <= accept_residual => {
            // Rerun capturing the best vector: same deterministic trajectory,
            // but accept the relaxed tolerance.
            let r = lanczos_best_effort(lap, seed)?;
            Ok((r, false))
        }
        Err(e) => Err(e),
    }
}

fn lanczos_best_effort(lap: &MotifLaplacian, seed: u64) -> Result<FiedlerResult> {
    // Identical to the strict path except the final error carries the best
    // pair; implemented by catching the strict run's best state.
    match lanczos_fiedler_capture(lap, seed) {
        Some(r) => {
            let mut r = r;
            fix_sign(&mut r.vector);
            Ok(r)
        }
        None => Err(Error::NonConvergence {
            residual: f64::INFINITY,
            iterations: 0,
        }),
    }
}

fn lanczos_fiedler_capture(lap: &MotifLaplacian, seed: u64) -> Option<FiedlerResult> {
    match lanczos_fiedler(lap, seed) {
        Ok(r) => Some(r),
        Err(Error::NonConvergence { .. }) => {
            // One long re-run with a bigger budget, returning best-so-far.
            relaxed_rerun(lap, seed)
        }
        Err(_) => None,
    }
}

fn relaxed_rerun(lap: &MotifLaplacian, seed: u64) -> Option<FiedlerResult> {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let n = lap.n_active();
    let mut rng = StdRng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let v0 = {
        let mut v: Vec<f64> = lap.d_sqrt.clone();
        normalize(&mut v);
        v
    };
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    orthogonalize(&mut x, &v0);
    normalize(&mut x);
    // Plain inverse-free power iteration on (2I − L): converges to the
    // smallest nonzero eigenpair after deflation; slow but robust.
    let mut y = vec![0.0; n];
    for it in 0..(50 * n) {
        lap.apply(&x, &mut y);
        for i in 0..n {
            y[i] = 2.0 * x[i] - y[i];
        }
        orthogonalize(&mut y, &v0);
        normalize(&mut y);
        std::mem::swap(&mut x, &mut y);
        if it % 32 == 31 {
            lap.apply(&x, &mut y);
            let theta = dot(&x, &y);
            let mut resid = 0.0;
            for i in 0..n {
                let r = y[i] - theta * x[i];
                resid += r * r;
            }
            if resid.sqrt() <= 1e-6 {
                return Some(FiedlerResult {
                    lambda_2: theta,
                    vector: x,
                    residual: resid.sqrt(),
                    iterations: it + 1,
                });
            }
        }
    }
    lap.apply(&x, &mut y);
    let theta = dot(&x, &y);
    let mut resid = 0.0;
    for i in 0..n {
        let r = y[i] - theta * x[i];
        resid += r * r;
    }
    Some(FiedlerResult {
        lambda_2: theta,
        vector: x,
        residual: resid.sqrt(),
        iterations: 50 * n,
    })
}

fn fix_sign(v: &mut [f64]) {
    for &x in v.iter() {
        if x != 0.0 {
            if x < 0.0 {
                for y in v.iter_mut() {
                    *y = -*y;
                }
            }
            return;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    if n > 0.0 {
        for x in a.iter_mut() {
            *x /= n;
        }
    }
}

fn orthogonalize(a: &mut [f64], q: &[f64]) {
    let c = dot(a, q);
    for i in 0..a.len() {
        a[i] -= c * q[i];
    }
}

/// Result of a sweep over the Fiedler ordering.
#[derive(Clone, Debug)]
pub struct SweepResult {
    /// Best prefix as original vertex ids, sorted ascending.
    pub best_set: Vec<u32>,
    /// Conductance of the best prefix.
    pub best: Conductance,
    /// Prefix length (1-based) achieving the best conductance.
    pub best_prefix: usize,
    /// Conductance value per prefix length (diagnostics).
    pub profile: Vec<f64>,
}

/// Sweeps prefixes of the Fiedler ordering of `lap.active`, scoring each by
/// motif conductance over `instances`, and returns the best strict
/// bipartition (prefix lengths 1..active−1).
///
/// Instance membership counts are maintained incrementally: moving one
/// vertex into the prefix updates only the instances containing it.
pub fn sweep_cut(
    lap: &MotifLaplacian,
    fiedler: &[f64],
    n: usize,
    instances: &[MotifInstance],
) -> Result<SweepResult> {
    let active = &lap.active;
    if active.len() < 2 {
        return Err(Error::TooFewActive);
    }
    // Order by the degree-scaled embedding D^(−1/2) z — the random-walk
    // eigenvector — which is what the sweep-cut conductance guarantee is
    // stated for. Ties break by vertex id for determinism.
    let scaled: Vec<f64> = fiedler
        .iter()
        .zip(&lap.d_sqrt)
        .map(|(z, d)| z / d)
        .collect();
    let mut order: Vec<usize> = (0..active.len()).collect();
    order.sort_by(|&a, &b| scaled[a].total_cmp(&scaled[b]).then(active[a].cmp(&active[b])));

    let index = crate::motif::InstanceIndex::build(n, instances);
    let total_volume: usize = instances.iter().map(|i| i.members().len()).sum();
    // inside_count[i] = how many members of instance i are in the prefix.
    let mut inside_count = vec![0u8; instances.len()];
    let mut cut = 0usize;
    let mut vol_inside = 0usize;
    let mut best: Option<(f64, usize, Conductance)> = None;
    let mut profile = Vec::with_capacity(active.len().saturating_sub(1));

    for (pos, &oi) in order.iter().enumerate().take(active.len() - 1) {
        let v = active[oi];
        for &iid in index.for_vertex(v) {
            let sz = instances[iid as usize].members().len() as u8;
            let c = inside_count[iid as usize];
            // Transitions: entering 0 -> 1 opens a cut; reaching full size
            // closes it.
            if c == 0 {
                cut += 1;
            }
            if c + 1 == sz {
                cut -= 1;
            }
            inside_count[iid as usize] = c + 1;
            vol_inside += 1;
        }
        let vol_outside = total_volume - vol_inside;
        let denom = vol_inside.min(vol_outside);
        let phi = if cut == 0 {
            0.0
        } else if denom == 0 {
            1.0
        } else {
            cut as f64 / denom as f64
        };
        profile.push(phi);
        let better = match &best {
            None => true,
            Some((bp, _, _)) => phi < *bp - 1e-15,
        };
        if better {
            best = Some((
                phi,
                pos + 1,
                Conductance {
                    cut,
                    vol_inside,
                    vol_outside,
                    phi,
                },
            ));
        }
    }

    let (_, best_prefix, best) = best.expect("at least one prefix scored");
    let mut best_set: Vec<u32> = order[..best_prefix].iter().map(|&oi| active[oi]).collect();
    best_set.sort_unstable();
    Ok(SweepResult {
        best_set,
        best,
        best_prefix,
        profile,
    })
}
