//! Bracketed scalar root finding: bisection down to a target width, then an
//! optional Newton polish that is only accepted if it stays in the bracket.

use crate::error::{Error, Result};

/// Default bracket width at which bisection stops.
pub const BISECTION_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Shrinks `[lo, hi]` around a sign change of `f` until its width is at most
/// `width`. Fails if `f(lo)` and `f(hi)` have the same strict sign.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, width: f64) -> Result<Bracket>
where
    F: FnMut(f64) -> f64,
{
    if !(lo < hi) {
        return Err(Error::domain(format!("empty bracket [{lo}, {hi}]")));
    }
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(Bracket { lo: a, hi: a });
    }
    if fb == 0.0 {
        return Ok(Bracket { lo: b, hi: b });
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::numerical(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {fa}, f(hi) = {fb}"
        )));
    }
    let rising = fb > 0.0;
    // 200 halvings exhaust the f64 mantissa for any finite bracket.
    for _ in 0..200 {
        if b - a <= width {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(Bracket { lo: mid, hi: mid });
        }
        if (fm > 0.0) == rising {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(Bracket { lo: a, hi: b })
}

/// Bisection followed by one Newton step from the midpoint, kept only if it
/// lands inside the final bracket.
pub fn bisect_then_polish<F, D>(f: F, df: D, lo: f64, hi: f64, width: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64 + Clone,
    D: Fn(f64) -> f64,
{
    let mut g = f.clone();
    let bracket = bisect(f, lo, hi, width)?;
    let x0 = bracket.midpoint();
    let slope = df(x0);
    if slope != 0.0 && slope.is_finite() {
        let x1 = x0 - g(x0) / slope;
        if bracket.contains(x1) {
            return Ok(x1);
        }
    }
    Ok(x0)
}

/// Sign changes of `f` over an evenly spaced scan of `[lo, hi]`, returned as
/// brackets between consecutive samples.
pub fn scan_sign_changes<F>(mut f: F, lo: f64, hi: f64, samples: usize) -> Vec<Bracket>
where
    F: FnMut(f64) -> f64,
{
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=samples {
        let x = lo + (hi - lo) * k as f64 / samples as f64;
        let fx = f(x);
        if !fx.is_finite() {
            prev = None;
            continue;
        }
        if let Some((px, pf)) = prev {
            if pf == 0.0 || (pf.signum() != fx.signum() && fx != 0.0) {
                out.push(Bracket { lo: px, hi: x });
            }
        }
        prev = Some((x, fx));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect_then_polish(|x| x * x - 2.0, |x| 2.0 * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bracket_without_sign_change() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
        assert!(bisect(|x| x, 1.0, 0.0, 1e-12).is_err());
    }

    #[test]
    fn decreasing_function() {
        let b = bisect(|x| 1.0 - x, 0.0, 3.0, 1e-13).unwrap();
        assert!(b.width() <= 1e-13);
        assert!(b.contains(1.0) || (b.midpoint() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn scan_counts_roots_of_cubic() {
        let brackets = scan_sign_changes(|x| (x - 0.1) * (x - 0.5) * (x - 0.9), 0.0, 1.0, 97);
        assert_eq!(brackets.len(), 3);
    }
}
