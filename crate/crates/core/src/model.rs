//! Exact model definitions for the three-state mean-field Potts free energy.
//!
//! Points of the open unit simplex are stored with all three components. The
//! derivative routines work in the local chart `(ν1, ν2)` with
//! `ν3 = 1 − ν1 − ν2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Smallest component accepted by the simplex constructors.
pub const INTERIOR_MARGIN: f64 = 1e-12;
/// Tolerance on `Σ components = 1` at construction.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Numerical tolerances shared by the analysis routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Gradient norm accepted as stationary.
    pub residual: f64,
    /// `|eigenvalue|` at or below which a stationary point is degenerate.
    pub degeneracy: f64,
    /// Distance in `(x, y)` below which two roots are merged.
    pub merge_radius: f64,
    /// Free-energy window for grouping global minimizers.
    pub depth: f64,
    /// Trial points are kept at least this far from the simplex boundary.
    pub clamp_margin: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            residual: 1e-10,
            degeneracy: 1e-7,
            merge_radius: 1e-7,
            depth: 1e-9,
            clamp_margin: 1e-9,
        }
    }
}

fn validate(components: [f64; 3], what: &'static str) -> Result<[f64; 3]> {
    if components.iter().any(|c| !c.is_finite()) {
        return Err(Error::domain(format!("{what} has a non-finite component: {components:?}")));
    }
    if components.iter().any(|&c| c < INTERIOR_MARGIN) {
        return Err(Error::domain(format!(
            "{what} {components:?} is not in the open simplex (components must exceed {INTERIOR_MARGIN:e})"
        )));
    }
    let sum: f64 = components.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::domain(format!("{what} {components:?} sums to {sum}, not 1")));
    }
    Ok(components)
}

pub(crate) fn xy_of(c: &[f64; 3]) -> CoordXY {
    CoordXY {
        x: 0.5 * SQRT3 * (c[0] - c[1]),
        y: 0.5 * (3.0 * c[2] - 1.0),
    }
}

pub(crate) fn components_of_xy(xy: CoordXY) -> [f64; 3] {
    let base = (1.0 - xy.y) / 3.0;
    let half_gap = xy.x / SQRT3;
    [base + half_gap, base - half_gap, (1.0 + 2.0 * xy.y) / 3.0]
}

macro_rules! simplex_point {
    ($(#[$meta:meta])* $name:ident, $what:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
        #[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
        pub struct $name([f64; 3]);

        impl $name {
            /// Validates that the components lie in the open simplex.
            pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
                validate([c1, c2, c3], $what).map($name)
            }

            pub fn from_array(components: [f64; 3]) -> Result<Self> {
                validate(components, $what).map($name)
            }

            /// Normalizes positive weights onto the simplex.
            pub fn from_weights(weights: [f64; 3]) -> Result<Self> {
                let total: f64 = weights.iter().sum();
                if !(total.is_finite() && total > 0.0) {
                    return Err(Error::domain(format!("cannot normalize weights {weights:?}")));
                }
                Self::from_array([weights[0] / total, weights[1] / total, weights[2] / total])
            }

            pub fn uniform() -> Self {
                $name([1.0 / 3.0; 3])
            }

            pub fn components(&self) -> [f64; 3] {
                self.0
            }

            pub fn to_xy(&self) -> CoordXY {
                xy_of(&self.0)
            }

            pub fn from_xy(xy: CoordXY) -> Result<Self> {
                // The xy inverse is exact up to rounding; renormalize so the
                // sum constraint holds to the last bit.
                Self::from_weights(components_of_xy(xy))
            }

            pub fn permuted(&self, sigma: Permutation) -> Self {
                $name(sigma.apply(&self.0))
            }

            /// Euclidean distance in `(x, y)` coordinates.
            pub fn xy_distance(&self, other: &Self) -> f64 {
                let a = self.to_xy();
                let b = other.to_xy();
                (a.x - b.x).hypot(a.y - b.y)
            }
        }

        impl std::ops::Index<usize> for $name {
            type Output = f64;
            fn index(&self, i: usize) -> &f64 {
                &self.0[i]
            }
        }

        impl TryFrom<[f64; 3]> for $name {
            type Error = Error;
            fn try_from(c: [f64; 3]) -> Result<Self> {
                Self::from_array(c)
            }
        }

        impl From<$name> for [f64; 3] {
            fn from(p: $name) -> [f64; 3] {
                p.0
            }
        }
    };
}

simplex_point!(
    /// Empirical spin distribution `ν` in the open unit simplex.
    SpinDistribution,
    "spin distribution"
);
simplex_point!(
    /// A-priori measure `α` encoding the vector-valued external field.
    AprioriMeasure,
    "a-priori measure"
);

impl AprioriMeasure {
    pub fn to_uv(&self) -> CoordUV {
        CoordUV {
            u: (self.0[0] / self.0[2]).ln(),
            v: (self.0[1] / self.0[2]).ln(),
        }
    }

    pub fn from_uv(uv: CoordUV) -> Result<Self> {
        let shift = uv.u.max(uv.v).max(0.0);
        Self::from_weights([(uv.u - shift).exp(), (uv.v - shift).exp(), (-shift).exp()])
    }

    pub fn to_pq(&self) -> CoordPQ {
        CoordPQ {
            p: SQRT3 * (self.0[0] / self.0[1]).ln(),
            q: (self.0[0] * self.0[1] / (self.0[2] * self.0[2])).ln(),
        }
    }

    pub fn from_pq(pq: CoordPQ) -> Result<Self> {
        Self::from_uv(pq.to_uv())
    }
}

/// Coordinates in which the simplex is the equilateral triangle with vertices
/// `(0, 1)` and `(±√3/2, −1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoordXY {
    pub x: f64,
    pub y: f64,
}

/// Log-ratio field coordinates `u = log(α1/α3)`, `v = log(α2/α3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoordUV {
    pub u: f64,
    pub v: f64,
}

/// Symmetric field coordinates `p = √3 log(α1/α2)`, `q = log(α1α2/α3²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoordPQ {
    pub p: f64,
    pub q: f64,
}

impl CoordPQ {
    pub fn to_uv(self) -> CoordUV {
        let diff = self.p / SQRT3;
        CoordUV {
            u: 0.5 * (self.q + diff),
            v: 0.5 * (self.q - diff),
        }
    }
}

impl CoordUV {
    pub fn to_pq(self) -> CoordPQ {
        CoordPQ {
            p: SQRT3 * (self.u - self.v),
            q: self.u + self.v,
        }
    }
}

/// An element of S3 acting on simplex points by permuting components:
/// `(σ·c)[i] = c[σ(i)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation([usize; 3]);

impl Permutation {
    pub const IDENTITY: Permutation = Permutation([0, 1, 2]);

    /// The six group elements; the identity comes first.
    pub const ALL: [Permutation; 6] = [
        Permutation([0, 1, 2]),
        Permutation([1, 0, 2]),
        Permutation([0, 2, 1]),
        Permutation([2, 1, 0]),
        Permutation([1, 2, 0]),
        Permutation([2, 0, 1]),
    ];

    pub fn new(images: [usize; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &i in &images {
            if i > 2 || seen[i] {
                return Err(Error::domain(format!("{images:?} is not a permutation of 0..3")));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    pub fn images(&self) -> [usize; 3] {
        self.0
    }

    pub fn apply(&self, c: &[f64; 3]) -> [f64; 3] {
        [c[self.0[0]], c[self.0[1]], c[self.0[2]]]
    }

    /// `(self ∘ other)·c = self·(other·c)`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation([other.0[self.0[0]], other.0[self.0[1]], other.0[self.0[2]]])
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = [0; 3];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// Short label such as `123` or `213` (one-based images).
    pub fn label(&self) -> String {
        self.0.iter().map(|i| char::from(b'1' + *i as u8)).collect()
    }
}

/// Inverse temperature together with the external field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub beta: f64,
    pub alpha: AprioriMeasure,
}

impl ModelParams {
    pub fn new(beta: f64, alpha: AprioriMeasure) -> Result<Self> {
        check_beta(beta)?;
        Ok(ModelParams { beta, alpha })
    }

    pub fn zero_field(beta: f64) -> Result<Self> {
        Self::new(beta, AprioriMeasure::uniform())
    }

    pub fn permuted(&self, sigma: Permutation) -> Self {
        ModelParams {
            beta: self.beta,
            alpha: self.alpha.permuted(sigma),
        }
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("inverse temperature must be finite and positive, got {beta}")))
    }
}

/// `f(ν) = −(β/2)⟨ν,ν⟩ + Σ ν_i log(ν_i/α_i)`.
pub fn free_energy(params: &ModelParams, nu: &SpinDistribution) -> f64 {
    raw::free_energy(params.beta, &params.alpha.0, &nu.0)
}

/// Gradient of the free energy in the local chart `(ν1, ν2)`.
pub fn gradient_local(params: &ModelParams, nu: &SpinDistribution) -> [f64; 2] {
    raw::gradient(params.beta, &params.alpha.0, &nu.0)
}

/// Hessian of the free energy in the local chart `(ν1, ν2)`. It does not
/// depend on the field.
pub fn hessian_local(params: &ModelParams, nu: &SpinDistribution) -> [[f64; 2]; 2] {
    raw::hessian(params.beta, &nu.0)
}

/// Left-hand side of the degeneracy condition
/// `3ν1ν2ν3β² − 2(ν1ν2 + ν2ν3 + ν3ν1)β + 1`.
pub fn degeneracy_lhs(beta: f64, nu: &SpinDistribution) -> f64 {
    raw::degeneracy_lhs(beta, &nu.0)
}

/// The unique field for which `ν` is a stationary point at inverse
/// temperature `β`: `α_i ∝ ν_i e^{−βν_i}`.
pub fn catastrophe_map(beta: f64, nu: &SpinDistribution) -> Result<AprioriMeasure> {
    check_beta(beta)?;
    AprioriMeasure::from_array(raw::catastrophe_map(beta, &nu.0))
}

/// Free energy at `ν` for the field `χ_β(ν)`, computed without `α`:
/// `Σ_i ((β/2)ν_i² + ν_i log Σ_j ν_j e^{−βν_j})`.
pub fn stationary_value(beta: f64, nu: &SpinDistribution) -> f64 {
    raw::stationary_value(beta, &nu.0)
}

/// Eigenvalues of a symmetric 2×2 matrix, ascending.
pub fn sym2_eigenvalues(m: &[[f64; 2]; 2]) -> (f64, f64) {
    let mean = 0.5 * (m[0][0] + m[1][1]);
    let radius = (0.5 * (m[0][0] - m[1][1])).hypot(m[0][1]);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    // The eigenvalue of larger magnitude is computed directly, the other one
    // from the determinant to avoid cancellation.
    if mean >= 0.0 {
        let big = mean + radius;
        let small = if big != 0.0 { det / big } else { 0.0 };
        (small, big)
    } else {
        let big = mean - radius;
        (big, det / big)
    }
}

/// Formulas on bare component arrays, used by the iterative solvers where
/// trial points are clamped rather than validated.
pub mod raw {
    pub fn free_energy(beta: f64, alpha: &[f64; 3], nu: &[f64; 3]) -> f64 {
        let quad: f64 = nu.iter().map(|n| n * n).sum();
        let entropy: f64 = nu.iter().zip(alpha).map(|(n, a)| n * (n / a).ln()).sum();
        -0.5 * beta * quad + entropy
    }

    fn potential_slope(beta: f64, alpha: f64, nu: f64) -> f64 {
        -beta * nu + (nu / alpha).ln()
    }

    pub fn gradient(beta: f64, alpha: &[f64; 3], nu: &[f64; 3]) -> [f64; 2] {
        let s3 = potential_slope(beta, alpha[2], nu[2]);
        [
            potential_slope(beta, alpha[0], nu[0]) - s3,
            potential_slope(beta, alpha[1], nu[1]) - s3,
        ]
    }

    pub fn hessian(beta: f64, nu: &[f64; 3]) -> [[f64; 2]; 2] {
        let inv3 = 1.0 / nu[2];
        let off = inv3 - beta;
        [
            [1.0 / nu[0] + inv3 - 2.0 * beta, off],
            [off, 1.0 / nu[1] + inv3 - 2.0 * beta],
        ]
    }

    pub fn degeneracy_lhs(beta: f64, nu: &[f64; 3]) -> f64 {
        let prod = nu[0] * nu[1] * nu[2];
        let pairs = nu[0] * nu[1] + nu[1] * nu[2] + nu[2] * nu[0];
        3.0 * prod * beta * beta - 2.0 * pairs * beta + 1.0
    }

    pub fn catastrophe_map(beta: f64, nu: &[f64; 3]) -> [f64; 3] {
        // Shift the exponent by the smallest component to keep the weights
        // in range for large β.
        let min = nu.iter().cloned().fold(f64::INFINITY, f64::min);
        let w = nu.map(|n| n * (-beta * (n - min)).exp());
        let total: f64 = w.iter().sum();
        w.map(|x| x / total)
    }

    pub fn log_partition(beta: f64, nu: &[f64; 3]) -> f64 {
        let min = nu.iter().cloned().fold(f64::INFINITY, f64::min);
        let shifted: f64 = nu.iter().map(|n| n * (-beta * (n - min)).exp()).sum();
        shifted.ln() - beta * min
    }

    pub fn stationary_value(beta: f64, nu: &[f64; 3]) -> f64 {
        let log_z = log_partition(beta, nu);
        nu.iter().map(|n| 0.5 * beta * n * n + n * log_z).sum()
    }

    /// Log-ratio coordinates of `χ_β(ν)`, evaluated without normalizing.
    pub fn catastrophe_uv(beta: f64, nu: &[f64; 3]) -> [f64; 2] {
        [
            (nu[0] / nu[2]).ln() - beta * (nu[0] - nu[2]),
            (nu[1] / nu[2]).ln() - beta * (nu[1] - nu[2]),
        ]
    }

    pub fn from_local(local: [f64; 2]) -> [f64; 3] {
        [local[0], local[1], 1.0 - local[0] - local[1]]
    }

    pub fn is_inside(nu: &[f64; 3], margin: f64) -> bool {
        nu.iter().all(|&c| c >= margin)
    }
}
