//! The five distinguished inverse temperatures.
//!
//! Two of them have no closed form and are computed by bisection on fixed
//! brackets followed by a Newton polish.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{self, BISECTION_WIDTH};

/// Butterfly onset in each cusp.
pub const BETA_BUTTERFLY: f64 = 18.0 / 7.0;
/// Elliptic umbilic at the uniform distribution in zero field.
pub const BETA_UMBILIC: f64 = 3.0;

/// Four equally deep minimizers in zero field at `4 log 2`.
pub fn beta_ellis_wang() -> f64 {
    4.0 * std::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalTemps {
    pub butterfly: f64,
    pub cross: f64,
    pub ellis_wang: f64,
    pub touch: f64,
    pub umbilic: f64,
}

impl CriticalTemps {
    /// Named values in increasing order.
    pub fn named(&self) -> [(&'static str, f64); 5] {
        [
            ("butterfly", self.butterfly),
            ("cross", self.cross),
            ("ellis_wang", self.ellis_wang),
            ("touch", self.touch),
            ("umbilic", self.umbilic),
        ]
    }
}

/// `g(x) = 3x/((1+2x)(1−x)) − log((1+2x)/(1−x))`, whose root in `(1/4, 1)`
/// fixes the crossing temperature.
pub fn crossing_function(x: f64) -> f64 {
    3.0 * x / ((1.0 + 2.0 * x) * (1.0 - x)) - ((1.0 + 2.0 * x) / (1.0 - x)).ln()
}

fn crossing_function_derivative(x: f64) -> f64 {
    let d = (1.0 + 2.0 * x) * (1.0 - x);
    // d/dx [3x/d] = 3(d − x d')/d², d' = 1 − 4x; d/dx log(...) = 3/d.
    3.0 * (d - x * (1.0 - 4.0 * x)) / (d * d) - 3.0 / d
}

/// Root `s` of [`crossing_function`] on `(1/4, 1)`.
pub fn crossing_root(width: f64) -> Result<f64> {
    roots::bisect_then_polish(
        crossing_function,
        crossing_function_derivative,
        0.25,
        1.0 - 1e-9,
        width,
    )
    .map_err(|e| Error::numerical(format!("crossing temperature bracket failed: {e}")))
}

/// Inverse temperature at which the symmetric corner minima appear in zero
/// field, `3/((1+2s)(1−s))`.
pub fn beta_cross() -> Result<f64> {
    let s = crossing_root(BISECTION_WIDTH)?;
    Ok(3.0 / ((1.0 + 2.0 * s) * (1.0 - s)))
}

fn artanh(z: f64) -> f64 {
    0.5 * ((1.0 + z) / (1.0 - z)).ln()
}

fn touch_root_arg(x: f64) -> f64 {
    // Clamped so the left end of the bracket evaluates to z = 0, not NaN.
    (1.0 - 8.0 / (3.0 * x)).max(0.0).sqrt().min(1.0 - f64::EPSILON)
}

/// Difference between the `p`-coordinates of the central triangle's vertex
/// and the centre of the opposite fold line, divided by `√3`. Increasing on
/// `[8/3, 3]` with end values `1 − log 3` and `3/2 − log 4`.
pub fn touch_function(x: f64) -> f64 {
    let z = touch_root_arg(x);
    ((x - 2.0) / 2.0).ln() + 3.0 - 2.0 * artanh(z) - 0.75 * x * (1.0 - z)
}

fn touch_function_derivative(x: f64) -> f64 {
    let z = touch_root_arg(x);
    if z <= 0.0 {
        return f64::NAN;
    }
    // dz/dx = (8/(3x²)) / (2z)
    let dz = 4.0 / (3.0 * x * x * z);
    1.0 / (x - 2.0) - 2.0 * dz / (1.0 - z * z) - 0.75 * (1.0 - z) + 0.75 * x * dz
}

/// Inverse temperature at which the vertices of the central triangle touch
/// the fold lines; the unique root of [`touch_function`] in `[8/3, 3]`.
pub fn beta_touch() -> Result<f64> {
    roots::bisect_then_polish(
        touch_function,
        touch_function_derivative,
        8.0 / 3.0,
        3.0,
        BISECTION_WIDTH,
    )
    .map_err(|e| Error::numerical(format!("triangle-touch temperature bracket failed: {e}")))
}

pub fn all_critical_temps() -> Result<CriticalTemps> {
    let temps = CriticalTemps {
        butterfly: BETA_BUTTERFLY,
        cross: beta_cross()?,
        ellis_wang: beta_ellis_wang(),
        touch: beta_touch()?,
        umbilic: BETA_UMBILIC,
    };
    let named = temps.named();
    if named.windows(2).any(|w| w[0].1 >= w[1].1) {
        return Err(Error::numerical(format!("critical temperatures out of order: {named:?}")));
    }
    Ok(temps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_value() {
        let b = beta_cross().unwrap();
        assert!((b - 2.74564).abs() <= 1e-4, "{b}");
        let s = crossing_root(1e-12).unwrap();
        assert!((s - 0.3772).abs() < 1e-3, "{s}");
        assert!(crossing_function(s).abs() < 1e-13);
    }

    #[test]
    fn crossing_root_is_stable_under_tighter_bisection() {
        let a = crossing_root(1e-12).unwrap();
        let b = crossing_root(0.5e-12).unwrap();
        let beta = |s: f64| 3.0 / ((1.0 + 2.0 * s) * (1.0 - s));
        assert!((beta(a) - beta(b)).abs() <= 1e-10);
    }

    #[test]
    fn crossing_function_shape() {
        assert!(crossing_function(1e-6).abs() < 1e-10);
        assert!(crossing_function_derivative(0.25).abs() < 1e-12);
        assert!(crossing_function(0.2) < crossing_function(0.1));
        assert!(crossing_function(0.3) > crossing_function(0.25));
        let h = 1e-6;
        for x in [0.1, 0.4, 0.7] {
            let fd = (crossing_function(x + h) - crossing_function(x - h)) / (2.0 * h);
            assert!((fd - crossing_function_derivative(x)).abs() < 1e-7);
        }
    }

    #[test]
    fn touch_value_and_endpoints() {
        let b = beta_touch().unwrap();
        assert!((b - 2.8024).abs() <= 1e-3, "{b}");
        assert!((touch_function(8.0 / 3.0) - (1.0 - 3f64.ln())).abs() < 1e-14);
        assert!((touch_function(3.0) - (1.5 - 4f64.ln())).abs() < 1e-14);
        let h = 1e-6;
        for x in [2.7, 2.8, 2.95] {
            let fd = (touch_function(x + h) - touch_function(x - h)) / (2.0 * h);
            assert!((fd - touch_function_derivative(x)).abs() < 1e-6);
        }
    }

    #[test]
    fn touch_function_increases_on_bracket() {
        let n = 1000;
        let vals: Vec<f64> = (0..=n).map(|k| touch_function(8.0 / 3.0 + (1.0 / 3.0) * k as f64 / n as f64)).collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn ordering() {
        let t = all_critical_temps().unwrap();
        assert_eq!(t.butterfly, 18.0 / 7.0);
        assert_eq!(t.umbilic, 3.0);
        assert_eq!(t.ellis_wang, 4.0 * 2f64.ln());
        assert!(t.butterfly < t.cross && t.cross < t.ellis_wang && t.ellis_wang < t.touch && t.touch < t.umbilic);
    }
}
