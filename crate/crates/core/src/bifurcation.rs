//! Closed-form geometry of the bifurcation set.
//!
//! For fixed `β` the degenerate stationary points are the S3 orbit of the
//! graph `ν = (x, γ_β(x), 1 − x − γ_β(x))`, `x ∈ D_β`; their images under the
//! catastrophe map form the constant-`β` slice. Solving the degeneracy
//! condition for `β` instead gives the two-sheeted parametric surface `F±`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{raw, AprioriMeasure, Permutation, SpinDistribution};
use crate::roots;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Beak-to-beak inverse temperature, where the domain case split changes.
pub const BETA_BEAK_TO_BEAK: f64 = 8.0 / 3.0;
/// Default number of samples per interval of `D_β`.
pub const DEFAULT_SLICE_SAMPLES: usize = 400;
/// Finest step of the butterfly finite differences.
pub const BUTTERFLY_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    fn open(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi || (self.lo == self.hi && self.lo_closed && self.hi_closed))
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// The domain `D_β` of `γ_β` as an ordered union of disjoint intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainIntervals {
    pub beta: f64,
    pub intervals: Vec<Interval>,
}

impl DomainIntervals {
    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    pub fn interval_of(&self, x: f64) -> Option<usize> {
        self.intervals.iter().position(|i| i.contains(x))
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

fn sqrt_two_over(beta: f64) -> f64 {
    (1.0 - 2.0 / beta).max(0.0).sqrt()
}

fn sqrt_eight_thirds_over(beta: f64) -> f64 {
    (1.0 - 8.0 / (3.0 * beta)).max(0.0).sqrt()
}

/// `D_β`, following the three-case split at `β = 8/3` and `β = 3`. The value
/// `8/3` belongs to the middle case. Empty for `β ≤ 2`.
pub fn domain_intervals(beta: f64) -> DomainIntervals {
    let mut intervals = Vec::new();
    if beta > 2.0 && beta.is_finite() {
        let r2 = sqrt_two_over(beta);
        let cusp = 1.0 - 2.0 / beta;
        let (outer_lo, outer_hi) = (0.5 - 0.5 * r2, 0.5 + 0.5 * r2);
        if beta < BETA_BEAK_TO_BEAK {
            intervals.push(Interval { lo: 0.0, hi: cusp, lo_closed: false, hi_closed: true });
            intervals.push(Interval::open(outer_lo, outer_hi));
        } else {
            let r8 = sqrt_eight_thirds_over(beta);
            let (inner_lo, inner_hi) = (0.5 - 0.5 * r8, 0.5 + 0.5 * r8);
            intervals.push(Interval::open(0.0, outer_lo));
            if beta < 3.0 {
                intervals.push(Interval::open(cusp, inner_lo));
            } else {
                intervals.push(Interval::open(inner_lo, cusp));
            }
            intervals.push(Interval::open(inner_hi, outer_hi));
        }
    }
    // Coinciding closed-form endpoints can differ by rounding.
    intervals.retain(|i| !i.is_empty() && i.hi - i.lo > 1e-14);
    DomainIntervals { beta, intervals }
}

/// Roots of `x ↦ (3βx − 2)(2 − β(1 − x))(2 − 3βx(1 − x))`, ascending.
pub fn discriminant_roots(beta: f64) -> Result<Vec<f64>> {
    if !(beta > 2.0 && beta.is_finite()) {
        return Err(Error::domain(format!("discriminant roots need beta > 2, got {beta}")));
    }
    let mut roots = vec![2.0 / (3.0 * beta), 1.0 - 2.0 / beta];
    if beta >= BETA_BEAK_TO_BEAK {
        let r8 = sqrt_eight_thirds_over(beta);
        roots.push(0.5 - 0.5 * r8);
        roots.push(0.5 + 0.5 * r8);
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// The discriminant factor product itself.
pub fn discriminant_factor(beta: f64, x: f64) -> f64 {
    (3.0 * beta * x - 2.0) * (2.0 - beta * (1.0 - x)) * (2.0 - 3.0 * beta * x * (1.0 - x))
}

/// Constant term `c = (1 − 2βx(1−x)) / (β(2 − 3βx))` of the monic quadratic
/// `ν2² − (1−x)ν2 + c = 0`, in factored form so that the common zero of
/// numerator and denominator at `β = 8/3` cancels.
fn quadratic_constant(beta: f64, x: f64) -> f64 {
    let r2 = sqrt_two_over(beta);
    let (lo, hi) = (0.5 - 0.5 * r2, 0.5 + 0.5 * r2);
    let pole = 2.0 / (3.0 * beta);
    -2.0 * (x - lo) * (x - hi) / (3.0 * beta * (x - pole))
}

/// `γ_β(x)`, the smaller root in `ν2` of the degeneracy condition with
/// `ν1 = x`.
pub fn gamma(beta: f64, x: f64) -> Result<f64> {
    if !(beta > 2.0 && beta.is_finite()) {
        return Err(Error::domain(format!("D_beta is empty for beta = {beta} <= 2")));
    }
    let pole = 2.0 / (3.0 * beta);
    if (x - pole).abs() <= 1e-14 {
        if (beta - BETA_BEAK_TO_BEAK).abs() <= 1e-12 {
            return Ok(0.25);
        }
        return Err(Error::Singular(format!(
            "gamma diverges as x -> 2/(3 beta) = {pole}; the limit is finite (1/4) only at beta = 8/3"
        )));
    }
    let domain = domain_intervals(beta);
    if !domain.contains(x) {
        return Err(Error::domain(format!(
            "x = {x} is outside D_beta = {} for beta = {beta}",
            domain.intervals.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" u ")
        )));
    }
    Ok(gamma_unchecked(beta, x))
}

fn gamma_unchecked(beta: f64, x: f64) -> f64 {
    let a = 1.0 - x;
    let c = quadratic_constant(beta, x);
    let disc = (a * a - 4.0 * c).max(0.0);
    // Product form of (a − √disc)/2; stable when the root is small.
    2.0 * c / (a + disc.sqrt())
}

/// Residual of the degeneracy quadratic in `(ν1, ν2)` coordinates.
pub fn degeneracy_quadratic(beta: f64, nu1: f64, nu2: f64) -> f64 {
    let lead = beta * (2.0 - 3.0 * beta * nu1);
    lead * nu2 * nu2 - lead * (1.0 - nu1) * nu2 + 1.0 - 2.0 * beta * nu1 * (1.0 - nu1)
}

/// Degeneracy condition written in `(x, y)` coordinates.
pub fn degenerate_locus_xy(beta: f64, x: f64, y: f64) -> f64 {
    let b2 = beta * beta;
    (6.0 * beta * (x * x + y * y - 1.0) + b2 * (2.0 * y + 1.0) * ((y - 1.0).powi(2) - 3.0 * x * x)
        + 9.0)
        / 9.0
}

fn degenerate_locus_xy_dy(beta: f64, x: f64, y: f64) -> f64 {
    let b2 = beta * beta;
    (12.0 * beta * y
        + b2 * (2.0 * ((y - 1.0).powi(2) - 3.0 * x * x) + (2.0 * y + 1.0) * 2.0 * (y - 1.0)))
        / 9.0
}

/// The degenerate-locus polynomial restricted to the symmetry axis `x = 0`:
/// `2β²y³ + 3β(2−β)y² + (β−3)²`.
pub fn axis_cubic(beta: f64, y: f64) -> f64 {
    2.0 * beta * beta * y.powi(3) + 3.0 * beta * (2.0 - beta) * y * y + (beta - 3.0).powi(2)
}

fn spin_from_xy(x: f64, y: f64) -> [f64; 3] {
    let base = (1.0 - y) / 3.0;
    let half_gap = x / SQRT3;
    [base + half_gap, base - half_gap, (1.0 + 2.0 * y) / 3.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceSample {
    /// The parameter `x = ν1` of the base branch before permutation.
    pub x_param: f64,
    /// Index of the interval of `D_β` the sample came from.
    pub interval: usize,
    pub nu: SpinDistribution,
    pub alpha: AprioriMeasure,
}

/// One S3 image of the sampled curve `Γ_β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceCurve {
    pub beta: f64,
    pub branch: Permutation,
    pub samples: Vec<SliceSample>,
}

impl SliceCurve {
    /// Samples grouped by interval of `D_β`; consecutive samples in a group
    /// lie on one connected piece.
    pub fn segments(&self) -> Vec<&[SliceSample]> {
        self.samples.chunk_by(|a, b| a.interval == b.interval).collect()
    }
}

/// Cosine spacing: sample gaps shrink quadratically towards both ends.
fn cosine_spacing(interval: &Interval, samples: usize) -> Vec<f64> {
    let width = interval.hi - interval.lo;
    let mut xs = Vec::with_capacity(samples + 2);
    if interval.lo_closed {
        xs.push(interval.lo);
    }
    for k in 0..samples {
        let t = (k as f64 + 0.5) / samples as f64;
        let phi = 0.5 * (1.0 - (std::f64::consts::PI * t).cos());
        xs.push(interval.lo + width * phi);
    }
    if interval.hi_closed {
        xs.push(interval.hi);
    }
    xs
}

/// Samples the base branch `Γ_β` over each interval of `D_β`.
pub fn base_branch(beta: f64, samples_per_interval: usize) -> Result<Vec<SliceSample>> {
    if !(beta > 2.0 && beta.is_finite()) {
        return Err(Error::domain(format!("slice needs beta > 2, got {beta}")));
    }
    let domain = domain_intervals(beta);
    let pole = 2.0 / (3.0 * beta);
    let mut out = Vec::new();
    for (index, interval) in domain.intervals.iter().enumerate() {
        for x in cosine_spacing(interval, samples_per_interval) {
            let g = if (x - pole).abs() <= 1e-14 { gamma(beta, x)? } else { gamma_unchecked(beta, x) };
            let Ok(nu) = SpinDistribution::new(x, g, 1.0 - x - g) else { continue };
            let Ok(alpha) = AprioriMeasure::from_array(raw::catastrophe_map(beta, &nu.components()))
            else {
                continue;
            };
            out.push(SliceSample { x_param: x, interval: index, nu, alpha });
        }
    }
    Ok(out)
}

/// Constant-`β` slice of the bifurcation set as the six S3 images of the
/// base branch. Empty for `β ≤ 2`.
pub fn slice(beta: f64, samples_per_interval: usize) -> Result<Vec<SliceCurve>> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::domain(format!("inverse temperature must be positive, got {beta}")));
    }
    if beta <= 2.0 {
        return Ok(Vec::new());
    }
    if samples_per_interval == 0 {
        return Err(Error::domain("samples per interval must be positive"));
    }
    let base = base_branch(beta, samples_per_interval)?;
    Ok(Permutation::ALL
        .iter()
        .map(|&sigma| SliceCurve {
            beta,
            branch: sigma,
            samples: base
                .iter()
                .map(|s| SliceSample {
                    x_param: s.x_param,
                    interval: s.interval,
                    nu: s.nu.permuted(sigma),
                    alpha: s.alpha.permuted(sigma),
                })
                .collect(),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceSign {
    Plus,
    Minus,
}

impl SurfaceSign {
    pub fn as_str(&self) -> &'static str {
        match self {
            SurfaceSign::Plus => "+",
            SurfaceSign::Minus => "-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSample {
    pub nu: SpinDistribution,
    pub beta: f64,
    pub alpha: AprioriMeasure,
    /// Lattice indices `(i, j)` of `nu`, `k = density − i − j`.
    pub lattice: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfacePatch {
    pub sign: SurfaceSign,
    pub density: usize,
    pub samples: Vec<SurfaceSample>,
    /// Lattice points dropped because the field left the representable
    /// interior of the simplex.
    pub skipped: usize,
}

/// Both roots `F±_1(ν)` of the degeneracy condition viewed as a quadratic in
/// `β`, as `(plus, minus)`.
pub fn surface_betas(nu: &SpinDistribution) -> (f64, f64) {
    let c = nu.components();
    let prod = c[0] * c[1] * c[2];
    let pairs = c[0] * c[1] + c[1] * c[2] + c[2] * c[0];
    let disc = (pairs * pairs - 3.0 * prod).max(0.0);
    let plus = (pairs + disc.sqrt()) / (3.0 * prod);
    // Product of the roots is 1/(3ν1ν2ν3).
    let minus = 1.0 / (3.0 * prod * plus);
    (plus, minus)
}

/// `F±` evaluated on the interior barycentric lattice of the given density.
pub fn surface_patches(grid_density: usize) -> Result<(SurfacePatch, SurfacePatch)> {
    if grid_density < 16 {
        return Err(Error::domain(format!("surface grid density must be at least 16, got {grid_density}")));
    }
    let n = grid_density as f64;
    let mut plus = SurfacePatch { sign: SurfaceSign::Plus, density: grid_density, samples: Vec::new(), skipped: 0 };
    let mut minus = SurfacePatch { sign: SurfaceSign::Minus, density: grid_density, samples: Vec::new(), skipped: 0 };
    for i in 1..grid_density {
        for j in 1..(grid_density - i) {
            let k = grid_density - i - j;
            let nu = SpinDistribution::from_weights([i as f64 / n, j as f64 / n, k as f64 / n])?;
            let (bp, bm) = surface_betas(&nu);
            for (patch, beta) in [(&mut plus, bp), (&mut minus, bm)] {
                let alpha = if beta.is_finite() {
                    AprioriMeasure::from_array(raw::catastrophe_map(beta, &nu.components())).ok()
                } else {
                    None
                };
                match alpha {
                    Some(alpha) => patch.samples.push(SurfaceSample { nu, beta, alpha, lattice: (i, j) }),
                    None => patch.skipped += 1,
                }
            }
        }
    }
    Ok((plus, minus))
}

/// Local expansion of the slice near the tip of one cusp, in `(u, v)`
/// target coordinates. With `s = (u + v)/2` and `a = (v − u)/2` along the
/// branch `y = g_β(x)` through `(0, y0)`:
/// `s(x) − s(0) = c2 x² + c4 x⁴ + …` and `a(x) = c1 x + c3 x³ + …`, where
/// `x = (√3/2)(ν1 − ν2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ButterflyExpansion {
    pub beta: f64,
    pub y0: f64,
    /// `g_β''(0) / 2`.
    pub g2: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

/// Negative root of the axis cubic, bracketed in `(−1/2, 0)`.
pub fn butterfly_root(beta: f64) -> Result<f64> {
    if !(beta > 2.0 && beta < BETA_BEAK_TO_BEAK) {
        return Err(Error::domain(format!("butterfly expansion needs 2 < beta < 8/3, got {beta}")));
    }
    roots::bisect_then_polish(
        |y| axis_cubic(beta, y),
        |y| 6.0 * beta * beta * y * y + 6.0 * beta * (2.0 - beta) * y,
        -0.5,
        0.0,
        roots::BISECTION_WIDTH,
    )
    .map_err(|e| Error::domain(format!("cannot bracket the axis root for beta = {beta}: {e}")))
}

/// Solves the xy degeneracy equation for `y` near `guess` by Newton.
fn solve_branch(beta: f64, x: f64, guess: f64) -> Result<f64> {
    let mut y = guess;
    for _ in 0..60 {
        let f = degenerate_locus_xy(beta, x, y);
        let df = degenerate_locus_xy_dy(beta, x, y);
        if df == 0.0 {
            break;
        }
        let step = f / df;
        y -= step;
        if step.abs() <= 1e-16 * (1.0 + y.abs()) {
            return Ok(y);
        }
    }
    if degenerate_locus_xy(beta, x, y).abs() < 1e-14 {
        Ok(y)
    } else {
        Err(Error::numerical(format!("branch solve failed at beta = {beta}, x = {x}")))
    }
}

fn richardson(values: [f64; 3]) -> f64 {
    // values at steps h, 2h, 4h of an estimate with error series in h².
    let level1 = [(4.0 * values[0] - values[1]) / 3.0, (4.0 * values[1] - values[2]) / 3.0];
    (16.0 * level1[0] - level1[1]) / 15.0
}

/// Taylor coefficients of the slice near a cusp tip for `2 < β < 8/3`, from
/// finite differences along the solved branch with two Richardson levels.
pub fn butterfly_expansion(beta: f64) -> Result<ButterflyExpansion> {
    let y0 = butterfly_root(beta)?;
    let h = BUTTERFLY_STEP;
    // Branch values at x = k h for k = −8..=8, continued outward from x = 0.
    let mut ys = [0.0f64; 17];
    ys[8] = y0;
    for k in 1..=8 {
        let x = k as f64 * h;
        ys[8 + k] = solve_branch(beta, x, ys[8 + k - 1])?;
        ys[8 - k] = solve_branch(beta, -x, ys[8 - k + 1])?;
    }
    let mut sym = [0.0f64; 17];
    let mut anti = [0.0f64; 17];
    for (idx, y) in ys.iter().enumerate() {
        let x = (idx as f64 - 8.0) * h;
        let uv = raw::catastrophe_uv(beta, &spin_from_xy(x, *y));
        sym[idx] = 0.5 * (uv[0] + uv[1]);
        anti[idx] = 0.5 * (uv[1] - uv[0]);
    }
    let at = |arr: &[f64; 17], k: i32| arr[(8 + k) as usize];
    let second = |arr: &[f64; 17], m: i32| {
        let step = m as f64 * h;
        (at(arr, m) - 2.0 * at(arr, 0) + at(arr, -m)) / (step * step)
    };
    let first = |arr: &[f64; 17], m: i32| (at(arr, m) - at(arr, -m)) / (2.0 * m as f64 * h);
    let third = |arr: &[f64; 17], m: i32| {
        let step = m as f64 * h;
        (at(arr, 2 * m) - 2.0 * at(arr, m) + 2.0 * at(arr, -m) - at(arr, -2 * m)) / (2.0 * step.powi(3))
    };
    let fourth = |arr: &[f64; 17], m: i32| {
        let step = m as f64 * h;
        (at(arr, 2 * m) - 4.0 * at(arr, m) + 6.0 * at(arr, 0) - 4.0 * at(arr, -m) + at(arr, -2 * m))
            / step.powi(4)
    };
    let scales = [1, 2, 4];
    let d1 = richardson(scales.map(|m| first(&anti, m)));
    let d2 = richardson(scales.map(|m| second(&sym, m)));
    let d3 = richardson(scales.map(|m| third(&anti, m)));
    let d4 = richardson(scales.map(|m| fourth(&sym, m)));
    let g2 = richardson(scales.map(|m| second(&ys, m))) / 2.0;
    Ok(ButterflyExpansion {
        beta,
        y0,
        g2,
        c1: d1,
        c2: d2 / 2.0,
        c3: d3 / 6.0,
        c4: d4 / 24.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::degeneracy_lhs;

    #[test]
    fn domain_first_case() {
        let d = domain_intervals(2.4);
        assert_eq!(d.intervals.len(), 2);
        let first = d.intervals[0];
        assert!((first.hi - 1.0 / 6.0).abs() < 1e-15);
        assert!(first.hi_closed && !first.lo_closed);
        let r = (1.0f64 - 2.0 / 2.4).sqrt();
        assert!((d.intervals[1].lo - (0.5 - 0.5 * r)).abs() < 1e-15);
        assert!((d.intervals[1].hi - (0.5 + 0.5 * r)).abs() < 1e-15);
    }

    #[test]
    fn domain_at_regime_boundaries() {
        let d = domain_intervals(8.0 / 3.0);
        assert_eq!(d.intervals.len(), 3);
        assert!((d.intervals[0].hi - 0.25).abs() < 1e-15);
        assert!((d.intervals[1].lo - 0.25).abs() < 1e-15);
        assert!((d.intervals[1].hi - 0.5).abs() < 1e-15);
        assert!((d.intervals[2].lo - 0.5).abs() < 1e-15);
        assert!((d.intervals[2].hi - 0.75).abs() < 1e-15);
        let d3 = domain_intervals(3.0);
        assert_eq!(d3.intervals.len(), 2, "middle interval collapses at beta = 3");
        assert!(domain_intervals(2.0).is_empty());
        assert!(domain_intervals(1.0).is_empty());
    }

    #[test]
    fn domain_endpoints_match_discriminant_roots() {
        for beta in [2.2, 2.5, 2.7, 2.9, 3.4, 5.0] {
            let d = domain_intervals(beta);
            let roots = discriminant_roots(beta).unwrap();
            let r2 = sqrt_two_over(beta);
            let endpoints: Vec<f64> = d.intervals.iter().flat_map(|i| [i.lo, i.hi]).collect();
            for e in endpoints {
                let from_lemmas = [0.0, 0.5 - 0.5 * r2, 0.5 + 0.5 * r2];
                let matched = roots.iter().chain(from_lemmas.iter()).any(|r| (r - e).abs() <= 1e-14);
                assert!(matched, "endpoint {e} at beta {beta}");
            }
            for r in &roots {
                assert!(discriminant_factor(beta, *r).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn discriminant_root_ordering() {
        let r = discriminant_roots(2.4).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] - 1.0 / 6.0).abs() < 1e-15 && (r[1] - 5.0 / 18.0).abs() < 1e-15);
        let r = discriminant_roots(8.0 / 3.0).unwrap();
        assert!((r[0] - 0.25).abs() < 1e-15 && (r[1] - 0.25).abs() < 1e-15);
        assert!((r[2] - 0.5).abs() < 1e-15 && (r[3] - 0.5).abs() < 1e-15);
        let r = discriminant_roots(3.0).unwrap();
        assert!((r[1] - 1.0 / 3.0).abs() < 1e-15 && (r[2] - 1.0 / 3.0).abs() < 1e-15);
        assert!(discriminant_roots(2.0).is_err());
    }

    #[test]
    fn gamma_limit_and_errors() {
        let beta = 8.0 / 3.0;
        assert_eq!(gamma(beta, 2.0 / (3.0 * beta)).unwrap(), 0.25);
        for eps in [1e-4, 1e-6, 1e-8] {
            let g = gamma(beta, 0.25 + eps).unwrap();
            assert!((g - 0.25).abs() < 10.0 * eps, "{g}");
            let g = gamma(beta, 0.25 - eps).unwrap();
            assert!((g - 0.25).abs() < 10.0 * eps, "{g}");
        }
        assert!(matches!(gamma(2.9, 2.0 / (3.0 * 2.9)), Err(Error::Singular(_))));
        assert!(matches!(gamma(2.4, 0.2), Err(Error::Domain(_))));
        assert!(gamma(1.9, 0.1).is_err());
    }

    #[test]
    fn gamma_solves_quadratic() {
        let g = gamma(2.2, 0.05).unwrap();
        assert!(degeneracy_quadratic(2.2, 0.05, g).abs() <= 1e-10);
        let d = domain_intervals(3.2);
        let mid = d.intervals[1];
        let x = 0.5 * (mid.lo + mid.hi);
        let g = gamma(3.2, x).unwrap();
        assert!(g > 0.0 && g < 1.0 - x);
        assert!(SpinDistribution::new(x, g, 1.0 - x - g).is_ok());
    }

    #[test]
    fn surface_hand_values() {
        let (p, m) = surface_betas(&SpinDistribution::uniform());
        assert!((p - 3.0).abs() < 1e-7 && (m - 3.0).abs() < 1e-7);
        let nu = SpinDistribution::new(0.5, 0.25, 0.25).unwrap();
        let (p, m) = surface_betas(&nu);
        assert!((p - 4.0).abs() < 1e-13);
        assert!((m - 8.0 / 3.0).abs() < 1e-13);
        assert!(degeneracy_lhs(p, &nu).abs() < 1e-13);
        assert!(degeneracy_lhs(m, &nu).abs() < 1e-13);
    }

    #[test]
    fn axis_cubic_matches_locus() {
        for y in [-0.4, -0.1, 0.0, 0.3] {
            assert!((axis_cubic(2.5, y) / 9.0 - degenerate_locus_xy(2.5, 0.0, y)).abs() < 1e-14);
        }
        assert!(axis_cubic(2.5, -1.0) < 0.0 && axis_cubic(2.5, 0.0) > 0.0);
        assert!(degenerate_locus_xy(3.0, 0.0, 0.0).abs() < 1e-15);
    }

    #[test]
    fn slice_below_onset_is_empty() {
        assert!(slice(1.5, 10).unwrap().is_empty());
        assert!(slice(2.0, 10).unwrap().is_empty());
        assert!(slice(-1.0, 10).is_err());
    }
}
