//! Finding, classifying and counting stationary points of the free energy.
//!
//! Damped Newton runs on the local gradient are started from every point of
//! a barycentric seed lattice. Converged roots are sorted in `(x, y)` and
//! merged, so the result does not depend on how the seeds were scheduled.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    raw, sym2_eigenvalues, AprioriMeasure, ModelParams, SpinDistribution, ToleranceConfig,
};

/// Seed lattice density used by [`census`].
pub const DEFAULT_SEED_DENSITY: usize = 64;
/// Seeds on the lattice boundary are pushed this far into the simplex.
pub const SEED_CORNER_MARGIN: f64 = 1e-3;

const MAX_NEWTON_ITERATIONS: usize = 200;
const MAX_HALVINGS: usize = 40;
const NEWTON_HANDOVER: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StationaryKind {
    Minimum,
    Saddle,
    Maximum,
    Degenerate,
}

impl StationaryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StationaryKind::Minimum => "minimum",
            StationaryKind::Saddle => "saddle",
            StationaryKind::Maximum => "maximum",
            StationaryKind::Degenerate => "degenerate",
        }
    }

    pub fn from_eigenvalues(lo: f64, hi: f64, degeneracy_tol: f64) -> Self {
        if lo.abs().min(hi.abs()) <= degeneracy_tol {
            StationaryKind::Degenerate
        } else if lo > 0.0 {
            StationaryKind::Minimum
        } else if hi < 0.0 {
            StationaryKind::Maximum
        } else {
            StationaryKind::Saddle
        }
    }
}

impl std::fmt::Display for StationaryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub nu: SpinDistribution,
    /// Hessian eigenvalues in the local chart, ascending.
    pub hess_eigenvalues: (f64, f64),
    pub kind: StationaryKind,
    /// Free energy at `nu`.
    pub value: f64,
}

impl StationaryPoint {
    pub fn classify(params: &ModelParams, nu: SpinDistribution, tol: &ToleranceConfig) -> Self {
        let c = nu.components();
        let (lo, hi) = sym2_eigenvalues(&raw::hessian(params.beta, &c));
        StationaryPoint {
            nu,
            hess_eigenvalues: (lo, hi),
            kind: StationaryKind::from_eigenvalues(lo, hi, tol.degeneracy),
            value: raw::free_energy(params.beta, &params.alpha.components(), &c),
        }
    }

    pub fn is_minimum(&self) -> bool {
        self.kind == StationaryKind::Minimum
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimaCensus {
    pub params: ModelParams,
    pub points: Vec<StationaryPoint>,
    pub n_local_minima: usize,
    pub global_minimizers: Vec<StationaryPoint>,
    /// Set when some stationary point is degenerate; the count is then only
    /// what was observed at this exact parameter, not a cell property.
    pub degenerate_warning: bool,
}

impl MinimaCensus {
    pub fn minima(&self) -> impl Iterator<Item = &StationaryPoint> {
        self.points.iter().filter(|p| p.is_minimum())
    }

    pub fn count(&self, kind: StationaryKind) -> usize {
        self.points.iter().filter(|p| p.kind == kind).count()
    }

    /// `#minima − #saddles + #maxima`; equals 1 away from the bifurcation set.
    pub fn morse_index_sum(&self) -> i64 {
        self.count(StationaryKind::Minimum) as i64 - self.count(StationaryKind::Saddle) as i64
            + self.count(StationaryKind::Maximum) as i64
    }

    pub fn global_value(&self) -> Option<f64> {
        self.global_minimizers.first().map(|p| p.value)
    }
}

/// Barycentric seed lattice of the given density. Boundary lattice points
/// are pushed inward to [`SEED_CORNER_MARGIN`].
pub fn seed_lattice(density: usize) -> Vec<[f64; 3]> {
    let n = density as f64;
    let mut seeds = Vec::with_capacity((density + 1) * (density + 2) / 2);
    for i in 0..=density {
        for j in 0..=(density - i) {
            let k = density - i - j;
            let raw = [i as f64 / n, j as f64 / n, k as f64 / n];
            let pushed = raw.map(|c| c.max(SEED_CORNER_MARGIN));
            let total: f64 = pushed.iter().sum();
            seeds.push(pushed.map(|c| c / total));
        }
    }
    seeds
}

fn norm2(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

fn solve2(m: &[[f64; 2]; 2], rhs: [f64; 2]) -> Option<[f64; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    Some([
        (rhs[0] * m[1][1] - rhs[1] * m[0][1]) / det,
        (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
    ])
}

/// Damped Newton iteration on the local gradient from `start`. Each step is
/// halved until the gradient norm decreases and the trial point stays inside
/// the clamp margin. Returns `None` if the run does not reach the residual
/// tolerance.
pub fn newton_stationary(
    params: &ModelParams,
    start: [f64; 3],
    tol: &ToleranceConfig,
) -> Option<SpinDistribution> {
    let alpha = params.alpha.components();
    let beta = params.beta;
    let mut local = [start[0], start[1]];
    let mut nu = raw::from_local(local);
    if !raw::is_inside(&nu, tol.clamp_margin) {
        return None;
    }
    let mut grad = raw::gradient(beta, &alpha, &nu);
    let mut gnorm = norm2(grad);
    // Iterate past the residual tolerance until the gradient stops shrinking:
    // near degenerate roots convergence is only linear, and stopping at the
    // tolerance would leave distinct copies of one root.
    for _ in 0..MAX_NEWTON_ITERATIONS {
        if gnorm == 0.0 {
            break;
        }
        let hess = raw::hessian(beta, &nu);
        let Some(step) = solve2(&hess, [-grad[0], -grad[1]]) else { break };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial_local = [local[0] + lambda * step[0], local[1] + lambda * step[1]];
            let trial = raw::from_local(trial_local);
            if raw::is_inside(&trial, tol.clamp_margin) {
                let g = raw::gradient(beta, &alpha, &trial);
                let n = norm2(g);
                if n < gnorm {
                    local = trial_local;
                    nu = trial;
                    grad = g;
                    gnorm = n;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if gnorm <= tol.residual {
        SpinDistribution::from_weights(nu).ok()
    } else {
        None
    }
}

/// Descends from `start` to a local minimum: Newton steps where the Hessian
/// is positive definite, steepest descent otherwise, with Armijo
/// backtracking on the free energy.
pub fn descend_to_minimum(
    params: &ModelParams,
    start: [f64; 3],
    tol: &ToleranceConfig,
) -> Option<SpinDistribution> {
    let alpha = params.alpha.components();
    let beta = params.beta;
    let mut local = [start[0], start[1]];
    let mut nu = raw::from_local(local);
    if !raw::is_inside(&nu, tol.clamp_margin) {
        return None;
    }
    let mut value = raw::free_energy(beta, &alpha, &nu);
    for _ in 0..2000 {
        let grad = raw::gradient(beta, &alpha, &nu);
        if norm2(grad) <= tol.residual {
            return SpinDistribution::from_weights(nu).ok();
        }
        let hess = raw::hessian(beta, &nu);
        let (lo, _) = sym2_eigenvalues(&hess);
        let newton = if lo > 0.0 { solve2(&hess, [-grad[0], -grad[1]]) } else { None };
        if let Some(step) = newton {
            // Inside a convex basin with a short step the energy differences
            // drop below rounding; plain Newton finishes from here.
            if norm2(step) <= NEWTON_HANDOVER {
                return newton_stationary(params, nu, tol);
            }
        }
        let dir = newton.unwrap_or([-grad[0], -grad[1]]);
        let slope = grad[0] * dir[0] + grad[1] * dir[1];
        let mut lambda = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let trial_local = [local[0] + lambda * dir[0], local[1] + lambda * dir[1]];
            let trial = raw::from_local(trial_local);
            if raw::is_inside(&trial, tol.clamp_margin) {
                let v = raw::free_energy(beta, &alpha, &trial);
                if v <= value + 1e-4 * lambda * slope {
                    local = trial_local;
                    nu = trial;
                    value = v;
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !moved {
            // Line search exhausted: finish with plain Newton if we are close.
            return newton_stationary(params, nu, tol);
        }
    }
    newton_stationary(params, nu, tol)
}

/// All stationary points reached from a seed lattice of the given density,
/// merged within the merge radius and sorted lexicographically in `(x, y)`.
pub fn find_stationary_points(
    params: &ModelParams,
    grid_density: usize,
    tol: &ToleranceConfig,
) -> Result<Vec<StationaryPoint>> {
    if grid_density < 8 {
        return Err(Error::domain(format!("seed grid density must be at least 8, got {grid_density}")));
    }
    let seeds = seed_lattice(grid_density);
    let mut roots: Vec<SpinDistribution> = seeds
        .par_iter()
        .filter_map(|s| newton_stationary(params, *s, tol))
        .collect();
    roots.sort_by(|a, b| {
        let (pa, pb) = (a.to_xy(), b.to_xy());
        pa.x.total_cmp(&pb.x).then(pa.y.total_cmp(&pb.y))
    });
    let mut kept: Vec<SpinDistribution> = Vec::new();
    for r in roots {
        if !kept.iter().any(|k| k.xy_distance(&r) <= tol.merge_radius) {
            kept.push(r);
        }
    }
    if kept.is_empty() {
        return Err(Error::numerical(format!(
            "no stationary point found for beta = {}, alpha = {:?}",
            params.beta,
            params.alpha.components()
        )));
    }
    Ok(kept.into_iter().map(|nu| StationaryPoint::classify(params, nu, tol)).collect())
}

/// Stationary points with default density and tolerances, plus the minima
/// count and the set of global minimizers.
pub fn census(params: &ModelParams) -> Result<MinimaCensus> {
    census_with(params, DEFAULT_SEED_DENSITY, &ToleranceConfig::default())
}

pub fn census_with(
    params: &ModelParams,
    grid_density: usize,
    tol: &ToleranceConfig,
) -> Result<MinimaCensus> {
    let points = find_stationary_points(params, grid_density, tol)?;
    Ok(census_from_points(*params, points, tol))
}

pub(crate) fn census_from_points(
    params: ModelParams,
    points: Vec<StationaryPoint>,
    tol: &ToleranceConfig,
) -> MinimaCensus {
    let minima: Vec<&StationaryPoint> = points.iter().filter(|p| p.is_minimum()).collect();
    let lowest = minima.iter().map(|p| p.value).fold(f64::INFINITY, f64::min);
    let global_minimizers = minima
        .iter()
        .filter(|p| p.value <= lowest + tol.depth)
        .map(|p| **p)
        .collect();
    MinimaCensus {
        params,
        n_local_minima: minima.len(),
        global_minimizers,
        degenerate_warning: points.iter().any(|p| p.kind == StationaryKind::Degenerate),
        points,
    }
}

/// Grid search for the global minimizer followed by one Newton refinement.
/// Intended as an independent oracle for the census.
pub fn brute_force_global_min(params: &ModelParams, grid_density: usize) -> Result<SpinDistribution> {
    if grid_density < 100 {
        return Err(Error::domain(format!(
            "brute-force grid density must be at least 100, got {grid_density}"
        )));
    }
    let alpha = params.alpha.components();
    let n = grid_density as f64;
    let best = (1..grid_density)
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::INFINITY, [1.0 / 3.0; 3]);
            for j in 1..(grid_density - i) {
                let k = grid_density - i - j;
                let nu = [i as f64 / n, j as f64 / n, k as f64 / n];
                let v = raw::free_energy(params.beta, &alpha, &nu);
                if v < best.0 {
                    best = (v, nu);
                }
            }
            best
        })
        .reduce(|| (f64::INFINITY, [1.0 / 3.0; 3]), |a, b| if b.0 < a.0 { b } else { a });
    let tol = ToleranceConfig::default();
    match newton_stationary(params, best.1, &tol) {
        Some(refined)
            if raw::free_energy(params.beta, &alpha, &refined.components()) <= best.0 + 1e-12 =>
        {
            Ok(refined)
        }
        _ => SpinDistribution::from_weights(best.1),
    }
}

/// Convenience constructor used by tests and the CLI.
pub fn params(beta: f64, alpha: [f64; 3]) -> Result<ModelParams> {
    ModelParams::new(beta, AprioriMeasure::from_array(alpha)?)
}
