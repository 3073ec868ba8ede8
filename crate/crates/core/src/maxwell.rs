//! Coexistence (Maxwell) sets at fixed inverse temperature.
//!
//! All constructs are returned for one representative of the S3 orbit: the
//! mirror axis `x = 0` of the field triangle, where `α1 = α2`, with `α3 < 1/3`
//! (`y < 0`). The remaining copies are obtained with [`permute_xy`] or
//! [`CoexistencePoint::permuted`].

use serde::{Deserialize, Serialize};

use crate::critical::{beta_ellis_wang, BETA_BUTTERFLY};
use crate::error::{Error, Result};
use crate::model::{
    components_of_xy, raw, sym2_eigenvalues, xy_of, AprioriMeasure, CoordUV, CoordXY, ModelParams,
    Permutation, SpinDistribution, ToleranceConfig,
};
use crate::roots;
use crate::stationary::{census_with, newton_stationary, MinimaCensus, DEFAULT_SEED_DENSITY};

/// Depth agreement required of coexisting minimizers.
pub const DEPTH_TOLERANCE: f64 = 1e-8;
/// Distance below which the two continued minima count as merged.
pub const MERGE_GAP: f64 = 1e-6;
/// Smallest continuation step tried before a curve is truncated.
pub const MIN_STEP: f64 = 1e-6;

const AXIS_EDGE: f64 = 1e-3;
const TRACK_STEP: f64 = 2e-3;
const TRACK_MIN_STEP: f64 = 1e-12;
const MAX_TRACK_JUMP: f64 = 0.02;
const SYMMETRY_TOL: f64 = 1e-7;
const MAX_CONTINUATION_STEPS: usize = 200_000;
const MERGE_EIGENVALUE_FACTOR: f64 = 100.0;
const CORRECTOR_ITERATIONS: usize = 30;
const CORRECTOR_RESIDUAL: f64 = 1e-13;

/// A straight segment in `(x, y)` field coordinates, open at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSegment {
    pub start: CoordXY,
    pub end: CoordXY,
}

impl AxisSegment {
    pub fn midpoint(&self) -> CoordXY {
        CoordXY {
            x: 0.5 * (self.start.x + self.end.x),
            y: 0.5 * (self.start.y + self.end.y),
        }
    }

    pub fn point_at(&self, t: f64) -> CoordXY {
        CoordXY {
            x: self.start.x + t * (self.end.x - self.start.x),
            y: self.start.y + t * (self.end.y - self.start.y),
        }
    }

    pub fn permuted(&self, sigma: Permutation) -> AxisSegment {
        AxisSegment {
            start: permute_xy(self.start, sigma),
            end: permute_xy(self.end, sigma),
        }
    }

    /// The three distinct copies under S3: the segment itself and its images
    /// under the two 120° rotations.
    pub fn images(&self) -> [AxisSegment; 3] {
        [
            *self,
            self.permuted(Permutation::ALL[4]),
            self.permuted(Permutation::ALL[5]),
        ]
    }
}

/// Action of a permutation on `(x, y)` field coordinates. Defined on the
/// closed triangle, so segment endpoints on the boundary are allowed.
pub fn permute_xy(xy: CoordXY, sigma: Permutation) -> CoordXY {
    xy_of(&sigma.apply(&components_of_xy(xy)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoexistencePoint {
    pub beta: f64,
    pub alpha: AprioriMeasure,
    pub minimizers: Vec<SpinDistribution>,
    /// Common free-energy value of the minimizers.
    pub depth: f64,
}

impl CoexistencePoint {
    fn from_minimizers(beta: f64, alpha: AprioriMeasure, minimizers: Vec<SpinDistribution>) -> Self {
        let a = alpha.components();
        let depth = minimizers
            .iter()
            .map(|m| raw::free_energy(beta, &a, &m.components()))
            .fold(f64::INFINITY, f64::min);
        CoexistencePoint { beta, alpha, minimizers, depth }
    }

    pub fn params(&self) -> ModelParams {
        ModelParams { beta: self.beta, alpha: self.alpha }
    }

    /// Free energies of the minimizers at this field.
    pub fn values(&self) -> Vec<f64> {
        let a = self.alpha.components();
        self.minimizers
            .iter()
            .map(|m| raw::free_energy(self.beta, &a, &m.components()))
            .collect()
    }

    /// Largest pairwise difference of the minimizers' free energies.
    pub fn depth_spread(&self) -> f64 {
        let v = self.values();
        let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        hi - lo
    }

    /// Whether every minimizer has a positive definite Hessian.
    pub fn all_minima(&self) -> bool {
        self.minimizers.iter().all(|m| {
            let (lo, _) = sym2_eigenvalues(&raw::hessian(self.beta, &m.components()));
            lo > 0.0
        })
    }

    pub fn permuted(&self, sigma: Permutation) -> CoexistencePoint {
        CoexistencePoint {
            beta: self.beta,
            alpha: self.alpha.permuted(sigma),
            minimizers: self.minimizers.iter().map(|m| m.permuted(sigma)).collect(),
            depth: self.depth,
        }
    }
}

/// Upper `y` of the closed-form two-phase segment on the axis,
/// `−(1−r)/(2+r)` with `r = (β−2)e^{3−β}`.
pub fn symmetric_segment_endpoint(beta: f64) -> f64 {
    let r = (beta - 2.0) * (3.0 - beta).exp();
    -(1.0 - r) / (2.0 + r)
}

fn axis_segment(y_end: f64) -> AxisSegment {
    AxisSegment {
        start: CoordXY { x: 0.0, y: -0.5 },
        end: CoordXY { x: 0.0, y: y_end },
    }
}

/// Fields on the axis with two mirror-image global minimizers. `None` for
/// `β ≤ 2`. Past the butterfly temperature the segment stops at the triple
/// point, and from `4 log 2` on it reaches the uniform field.
pub fn symmetric_segment(beta: f64) -> Result<Option<AxisSegment>> {
    crate::model::check_beta(beta)?;
    if beta <= 2.0 {
        return Ok(None);
    }
    if beta <= BETA_BUTTERFLY {
        return Ok(Some(axis_segment(symmetric_segment_endpoint(beta))));
    }
    if beta >= beta_ellis_wang() {
        return Ok(Some(axis_segment(0.0)));
    }
    let triple = triple_point(beta)?;
    Ok(Some(axis_segment(triple.alpha.to_xy().y)))
}

/// Two-phase segment for `β ≥ 4 log 2`: the axis from the edge to the
/// uniform field.
pub fn beyond_ellis_wang_segment(beta: f64) -> Result<AxisSegment> {
    crate::model::check_beta(beta)?;
    if beta < beta_ellis_wang() {
        return Err(Error::domain(format!(
            "segment requires beta >= 4 log 2, got {beta}"
        )));
    }
    Ok(axis_segment(0.0))
}

fn axis_alpha(y: f64) -> Result<AprioriMeasure> {
    AprioriMeasure::from_xy(CoordXY { x: 0.0, y })
}

fn is_symmetric(nu: &[f64; 3]) -> bool {
    (nu[0] - nu[1]).abs() <= SYMMETRY_TOL
}

fn swap12(nu: SpinDistribution) -> SpinDistribution {
    nu.permuted(Permutation::ALL[1])
}

/// A minimum followed along the axis by Newton continuation in `y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisBranch {
    /// Sample positions, ascending.
    pub ys: Vec<f64>,
    pub minima: Vec<SpinDistribution>,
}

impl AxisBranch {
    pub fn y_range(&self) -> (f64, f64) {
        (self.ys[0], *self.ys.last().unwrap())
    }

    /// The branch's minimum at `y`, continued from the nearest sample.
    pub fn at(&self, params: &ModelParams, tol: &ToleranceConfig) -> Option<SpinDistribution> {
        let y = params.alpha.to_xy().y;
        let k = self.ys.partition_point(|&s| s < y);
        let near = if k == 0 {
            0
        } else if k == self.ys.len() || y - self.ys[k - 1] <= self.ys[k] - y {
            k - 1
        } else {
            k
        };
        let from = self.minima[near];
        let nu = track(params, from, tol)?;
        (is_symmetric(&nu.components()) == is_symmetric(&from.components())
            && nu.xy_distance(&from) <= MAX_TRACK_JUMP)
            .then_some(nu)
    }
}

/// The two branches whose equal-depth point is the triple point: the mirror
/// pair followed up from the edge `α3 → 0` and the symmetric minimum followed
/// down from the uniform field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisTracks {
    pub beta: f64,
    /// Member of the pair with `ν1 > ν2`.
    pub pair: AxisBranch,
    pub symmetric: AxisBranch,
}

impl AxisTracks {
    /// The `y` interval on which both branches exist, if any.
    pub fn overlap(&self) -> Option<(f64, f64)> {
        let lo = self.symmetric.y_range().0;
        let hi = self.pair.y_range().1;
        (lo < hi).then_some((lo, hi))
    }

    /// `f(symmetric) − f(pair)` at `y`; positive where the pair is lower.
    pub fn depth_gap(&self, y: f64) -> Option<f64> {
        let (s, p, alpha) = self.minima_at(y)?;
        let a = alpha.components();
        Some(raw::free_energy(self.beta, &a, &s.components()) - raw::free_energy(self.beta, &a, &p.components()))
    }

    fn minima_at(&self, y: f64) -> Option<(SpinDistribution, SpinDistribution, AprioriMeasure)> {
        let alpha = axis_alpha(y).ok()?;
        let params = ModelParams { beta: self.beta, alpha };
        let tol = ToleranceConfig::default();
        Some((self.symmetric.at(&params, &tol)?, self.pair.at(&params, &tol)?, alpha))
    }
}

fn track(params: &ModelParams, from: SpinDistribution, tol: &ToleranceConfig) -> Option<SpinDistribution> {
    let nu = newton_stationary(params, from.components(), tol)?;
    let (lo, _) = sym2_eigenvalues(&raw::hessian(params.beta, &nu.components()));
    (lo > 0.0).then_some(nu)
}

/// Follows a minimum from `y_start` towards `y_end` until it disappears in
/// a fold or the end is reached. The step is halved on failure, so the last
/// sample sits within `TRACK_MIN_STEP` of the fold.
fn follow_axis(beta: f64, y_start: f64, y_end: f64, seed: SpinDistribution) -> Result<AxisBranch> {
    let tol = ToleranceConfig::default();
    let dir = (y_end - y_start).signum();
    let mut ys = vec![y_start];
    let mut minima = vec![seed];
    let mut h = TRACK_STEP;
    let symmetric = is_symmetric(&seed.components());
    while h >= TRACK_MIN_STEP {
        let y_prev = *ys.last().unwrap();
        if (y_end - y_prev) * dir <= 0.0 {
            break;
        }
        let y = if (y_end - y_prev).abs() <= h { y_end } else { y_prev + dir * h };
        let params = ModelParams::new(beta, axis_alpha(y)?)?;
        let prev = *minima.last().unwrap();
        match track(&params, prev, &tol) {
            Some(nu)
                if is_symmetric(&nu.components()) == symmetric
                    && nu.xy_distance(&prev) <= MAX_TRACK_JUMP =>
            {
                ys.push(y);
                minima.push(nu);
                h = (2.0 * h).min(TRACK_STEP);
            }
            _ => h *= 0.5,
        }
    }
    if dir < 0.0 {
        ys.reverse();
        minima.reverse();
    }
    Ok(AxisBranch { ys, minima })
}

/// Seeds both branches with a census at the axis ends and follows them.
pub fn axis_tracks(beta: f64) -> Result<AxisTracks> {
    crate::model::check_beta(beta)?;
    let tol = ToleranceConfig::default();
    let y_edge = -0.5 + AXIS_EDGE;
    let at_edge = census_with(&ModelParams::new(beta, axis_alpha(y_edge)?)?, DEFAULT_SEED_DENSITY, &tol)?;
    let pair_seed = lowest_minimum(&at_edge, |c| !is_symmetric(c) && c[0] > c[1])
        .ok_or_else(|| Error::numerical(format!("no asymmetric minimum near the edge at beta = {beta}")))?;
    let at_centre = census_with(&ModelParams::new(beta, axis_alpha(0.0)?)?, DEFAULT_SEED_DENSITY, &tol)?;
    let sym_seed = lowest_minimum(&at_centre, is_symmetric)
        .ok_or_else(|| Error::numerical(format!("no symmetric minimum at the uniform field at beta = {beta}")))?;
    Ok(AxisTracks {
        beta,
        pair: follow_axis(beta, y_edge, 0.0, pair_seed)?,
        symmetric: follow_axis(beta, 0.0, y_edge, sym_seed)?,
    })
}

fn lowest_minimum(census: &MinimaCensus, pred: impl Fn(&[f64; 3]) -> bool) -> Option<SpinDistribution> {
    census
        .minima()
        .filter(|p| pred(&p.nu.components()))
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .map(|p| p.nu)
}

/// Depth gap sampled at `samples + 1` evenly spaced points strictly inside
/// the branch overlap. Empty if the branches do not overlap.
pub fn axis_gap_scan(tracks: &AxisTracks, samples: usize) -> Vec<(f64, f64)> {
    let Some((lo, hi)) = tracks.overlap() else { return Vec::new() };
    let inset = 1e-3 * (hi - lo);
    let (lo, hi) = (lo + inset, hi - inset);
    (0..=samples)
        .filter_map(|k| {
            let y = lo + (hi - lo) * k as f64 / samples.max(1) as f64;
            tracks.depth_gap(y).map(|g| (y, g))
        })
        .collect()
}

/// The field on the axis with three equal-depth global minimizers: one with
/// `ν1 = ν2` and a mirror-image pair. Minimizers are returned as
/// `[symmetric, ν1 > ν2, ν1 < ν2]`.
pub fn triple_point(beta: f64) -> Result<CoexistencePoint> {
    crate::model::check_beta(beta)?;
    if !(beta > BETA_BUTTERFLY && beta < beta_ellis_wang()) {
        return Err(Error::domain(format!(
            "triple point requires 18/7 < beta < 4 log 2, got {beta}"
        )));
    }
    let tracks = axis_tracks(beta)?;
    let (lo, hi) = tracks
        .overlap()
        .ok_or_else(|| Error::numerical(format!("axis branches do not overlap at beta = {beta}")))?;
    let gap = |y: f64| tracks.depth_gap(y).unwrap_or(f64::NAN);
    let bracket = roots::bisect(gap, lo, hi, roots::BISECTION_WIDTH)
        .map_err(|e| Error::numerical(format!("triple point not bracketed at beta = {beta}: {e}")))?;
    let y = [bracket.lo, bracket.hi]
        .into_iter()
        .min_by(|a, b| gap(*a).abs().total_cmp(&gap(*b).abs()))
        .unwrap();
    let (s, p, alpha) = tracks
        .minima_at(y)
        .ok_or_else(|| Error::numerical(format!("lost a tracked minimum at y = {y}")))?;
    let point = CoexistencePoint::from_minimizers(beta, alpha, vec![s, p, swap12(p)]);
    if point.depth_spread() > DEPTH_TOLERANCE || !point.all_minima() {
        return Err(Error::numerical(format!(
            "triple point at beta = {beta} failed the depth check (spread {})",
            point.depth_spread()
        )));
    }
    Ok(point)
}

/// How a coexistence curve ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveStatus {
    /// The two minima merged, or both became degenerate, on the bifurcation
    /// set.
    ReachedMerge,
    /// One of the continued points stopped being a minimum.
    LeftMinima,
    /// The corrector failed even at the smallest step.
    Truncated,
    /// The step budget ran out.
    MaxSteps,
}

impl CurveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveStatus::ReachedMerge => "reached_merge",
            CurveStatus::LeftMinima => "left_minima",
            CurveStatus::Truncated => "truncated",
            CurveStatus::MaxSteps => "max_steps",
        }
    }

    pub fn is_normal(&self) -> bool {
        *self == CurveStatus::ReachedMerge
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoexistenceCurve {
    pub beta: f64,
    pub step: f64,
    /// The triple point the curve starts from.
    pub origin: CoexistencePoint,
    /// Points after the origin, each with minimizers `[μ, ν]`.
    pub points: Vec<CoexistencePoint>,
    pub status: CurveStatus,
}

impl CoexistenceCurve {
    /// Field coordinates of the origin followed by every point.
    pub fn uv_path(&self) -> Vec<CoordUV> {
        std::iter::once(&self.origin)
            .chain(&self.points)
            .map(|p| p.alpha.to_uv())
            .collect()
    }

    /// Distance `|μ − ν|` in the local chart along the curve.
    pub fn gaps(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| {
                let (m, n) = (p.minimizers[0].components(), p.minimizers[1].components());
                (m[0] - n[0]).hypot(m[1] - n[1])
            })
            .collect()
    }

    pub fn permuted(&self, sigma: Permutation) -> CoexistenceCurve {
        CoexistenceCurve {
            beta: self.beta,
            step: self.step,
            origin: self.origin.permuted(sigma),
            points: self.points.iter().map(|p| p.permuted(sigma)).collect(),
            status: self.status,
        }
    }
}

/// `dv/du = −(ν1 − μ1)/(ν2 − μ2)` along the coexistence curve, returned as
/// the unit direction `(ν2 − μ2, −(ν1 − μ1))` up to sign.
pub fn ivp_direction(mu: &SpinDistribution, nu: &SpinDistribution) -> [f64; 2] {
    let d = [nu[1] - mu[1], -(nu[0] - mu[0])];
    let n = d[0].hypot(d[1]);
    [d[0] / n, d[1] / n]
}

type State = [f64; 4];

fn split(z: &State) -> ([f64; 3], [f64; 3]) {
    (raw::from_local([z[0], z[1]]), raw::from_local([z[2], z[3]]))
}

/// Gradient of the stationary value in the local chart.
fn stationary_value_gradient(beta: f64, nu: &[f64; 3]) -> [f64; 2] {
    let min = nu.iter().cloned().fold(f64::INFINITY, f64::min);
    let e = nu.map(|n| (-beta * (n - min)).exp());
    let z: f64 = nu.iter().zip(&e).map(|(n, e)| n * e).sum();
    let d: Vec<f64> = (0..3).map(|i| beta * nu[i] + (1.0 - beta * nu[i]) * e[i] / z).collect();
    [d[0] - d[2], d[1] - d[2]]
}

fn residual(beta: f64, z: &State) -> [f64; 3] {
    let (m, n) = split(z);
    let cm = raw::catastrophe_uv(beta, &m);
    let cn = raw::catastrophe_uv(beta, &n);
    [
        cm[0] - cn[0],
        cm[1] - cn[1],
        raw::stationary_value(beta, &m) - raw::stationary_value(beta, &n),
    ]
}

fn jacobian(beta: f64, z: &State) -> [[f64; 4]; 3] {
    let (m, n) = split(z);
    // The catastrophe map in (u, v) has the Hessian as its local Jacobian.
    let hm = raw::hessian(beta, &m);
    let hn = raw::hessian(beta, &n);
    let sm = stationary_value_gradient(beta, &m);
    let sn = stationary_value_gradient(beta, &n);
    [
        [hm[0][0], hm[0][1], -hn[0][0], -hn[0][1]],
        [hm[1][0], hm[1][1], -hn[1][0], -hn[1][1]],
        [sm[0], sm[1], -sn[0], -sn[1]],
    ]
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Unit null vector of a 3×4 matrix from its signed maximal minors.
fn null_vector(j: &[[f64; 4]; 3]) -> Option<State> {
    let mut t = [0.0; 4];
    for (k, tk) in t.iter_mut().enumerate() {
        let mut minor = [[0.0; 3]; 3];
        for r in 0..3 {
            let mut c = 0;
            for col in 0..4 {
                if col != k {
                    minor[r][c] = j[r][col];
                    c += 1;
                }
            }
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *tk = sign * det3(minor);
    }
    let n = t.iter().map(|x| x * x).sum::<f64>().sqrt();
    (n > 0.0 && n.is_finite()).then(|| t.map(|x| x / n))
}

/// Gaussian elimination with partial pivoting.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &k| a[i][col].abs().total_cmp(&a[k][col].abs()))?;
        if a[piv][col] == 0.0 || !a[piv][col].is_finite() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..4 {
            let f = a[r][col] / a[col][col];
            for c in col..4 {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for r in (0..4).rev() {
        let s: f64 = ((r + 1)..4).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn inside(z: &State) -> bool {
    let (m, n) = split(z);
    raw::is_inside(&m, 1e-12) && raw::is_inside(&n, 1e-12)
}

/// Newton on the equal-depth system plus the arclength constraint
/// `t·(z − z_pred) = 0`.
fn correct(beta: f64, pred: State, t: &State) -> Option<State> {
    let mut z = pred;
    for _ in 0..CORRECTOR_ITERATIONS {
        if !inside(&z) {
            return None;
        }
        let r = residual(beta, &z);
        let arc: f64 = (0..4).map(|k| t[k] * (z[k] - pred[k])).sum();
        let norm = r.iter().map(|x| x.abs()).fold(arc.abs(), f64::max);
        if norm <= CORRECTOR_RESIDUAL {
            return Some(z);
        }
        let j = jacobian(beta, &z);
        let a = [j[0], j[1], j[2], *t];
        let dz = solve4(a, [-r[0], -r[1], -r[2], -arc])?;
        for k in 0..4 {
            z[k] += dz[k];
        }
    }
    let r = residual(beta, &z);
    (inside(&z) && r.iter().all(|x| x.abs() <= 1e-11)).then_some(z)
}

fn gap_vector(z: &State) -> [f64; 2] {
    [z[2] - z[0], z[3] - z[1]]
}

/// Smallest Hessian eigenvalue of `μ` and of `ν`.
fn lowest_eigenvalues(beta: f64, z: &State) -> (f64, f64) {
    let (m, n) = split(z);
    (sym2_eigenvalues(&raw::hessian(beta, &m)).0, sym2_eigenvalues(&raw::hessian(beta, &n)).0)
}

fn point_of(beta: f64, z: &State) -> Result<CoexistencePoint> {
    let (m, n) = split(z);
    let alpha = AprioriMeasure::from_weights(raw::catastrophe_map(beta, &n))?;
    Ok(CoexistencePoint::from_minimizers(
        beta,
        alpha,
        vec![SpinDistribution::from_weights(m)?, SpinDistribution::from_weights(n)?],
    ))
}

/// Continues the equal-depth locus of the symmetric minimum `μ` and the
/// minimum `ν` with `ν1 > ν2` away from the triple point, into the half
/// plane `α1 > α2` where the mirror minimum is higher. Pseudo-arclength
/// continuation in the local coordinates of `(μ, ν)`; `step` is the
/// arclength increment.
pub fn coexistence_curve(beta: f64, step: f64) -> Result<CoexistenceCurve> {
    if !(step > 1e-5 && step <= 1e-1) {
        return Err(Error::domain(format!("continuation step must lie in (1e-5, 0.1], got {step}")));
    }
    let origin = triple_point(beta)?;
    let tol = ToleranceConfig::default();
    let (mu, nu) = (origin.minimizers[0].components(), origin.minimizers[1].components());
    let mut z: State = [mu[0], mu[1], nu[0], nu[1]];
    let mut t = null_vector(&jacobian(beta, &z))
        .ok_or_else(|| Error::numerical("singular equal-depth system at the triple point"))?;
    // d(u − v) = (row0 − row1 of H(ν))·dν; orient towards α1 > α2.
    let hn = raw::hessian(beta, &nu);
    let duv = (hn[0][0] - hn[1][0]) * t[2] + (hn[0][1] - hn[1][1]) * t[3];
    if duv < 0.0 {
        t = t.map(|x| -x);
    }
    let mut points = Vec::new();
    let mut h = step;
    let mut status = CurveStatus::MaxSteps;
    for _ in 0..MAX_CONTINUATION_STEPS {
        let pred: State = std::array::from_fn(|k| z[k] + h * t[k]);
        let old_gap = gap_vector(&z);
        let accepted = correct(beta, pred, &t).filter(|zn| {
            let g = gap_vector(zn);
            // Do not step across the merge point onto the relabelled branch.
            g[0] * old_gap[0] + g[1] * old_gap[1] > 0.0
        });
        let Some(zn) = accepted else {
            let g = old_gap[0].hypot(old_gap[1]);
            if g < MERGE_GAP {
                status = CurveStatus::ReachedMerge;
                break;
            }
            h *= 0.5;
            // Near the merge point the step may shrink below the failure
            // floor; the gap then sets the scale.
            if h < MIN_STEP && h < 0.25 * g {
                status = CurveStatus::Truncated;
                break;
            }
            continue;
        };
        let g = gap_vector(&zn);
        if g[0].hypot(g[1]) < MERGE_GAP {
            status = CurveStatus::ReachedMerge;
            break;
        }
        // Near the merge the system's conditioning degrades with the Hessian
        // eigenvalues, so the curve ends once both minima are degenerate at
        // the census tolerance.
        let (em, en) = lowest_eigenvalues(beta, &zn);
        if em.min(en) <= tol.degeneracy {
            status = if em.max(en) <= MERGE_EIGENVALUE_FACTOR * tol.degeneracy {
                CurveStatus::ReachedMerge
            } else {
                CurveStatus::LeftMinima
            };
            break;
        }
        let Some(mut tn) = null_vector(&jacobian(beta, &zn)) else {
            status = CurveStatus::Truncated;
            break;
        };
        if (0..4).map(|k| tn[k] * t[k]).sum::<f64>() < 0.0 {
            tn = tn.map(|x| -x);
        }
        points.push(point_of(beta, &zn)?);
        z = zn;
        t = tn;
    }
    Ok(CoexistenceCurve { beta, step, origin, points, status })
}

/// The triple point's six S3 copies, identity first.
pub fn triple_point_images(point: &CoexistencePoint) -> Vec<CoexistencePoint> {
    Permutation::ALL.iter().map(|s| point.permuted(*s)).collect()
}
