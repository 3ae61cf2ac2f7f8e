//! Adaptive Simpson quadrature.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("non-finite integrand at x = {x}")]
    NonFinite { x: f64 },
    #[error("recursion limit reached on [{a}, {b}]; estimate {estimate}")]
    DepthExceeded { a: f64, b: f64, estimate: f64 },
}

const MAX_DEPTH: u32 = 48;

/// Integral of `f` over `[a, b]` with absolute tolerance `tol`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64, QuadError>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let eval = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { x })
        }
    };
    // Five-panel seed avoids aliasing on integrands that vanish at the
    // three Simpson nodes of the whole interval.
    let panels = 5;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let lo = a + h * i as f64;
        let hi = if i == panels - 1 { b } else { lo + h };
        let mid = 0.5 * (lo + hi);
        let (fl, fm, fh) = (eval(lo)?, eval(mid)?, eval(hi)?);
        let whole = (hi - lo) / 6.0 * (fl + 4.0 * fm + fh);
        total += step(&eval, lo, hi, fl, fm, fh, whole, tol / panels as f64, MAX_DEPTH)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn step<E>(
    eval: &E,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, QuadError>
where
    E: Fn(f64) -> Result<f64, QuadError>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(lm)?;
    let frm = eval(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || lm <= a || rm >= b {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(QuadError::DepthExceeded {
            a,
            b,
            estimate: left + right,
        });
    }
    let l = step(eval, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = step(eval, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = adaptive_simpson(|x| x * x * x - x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory() {
        let v = adaptive_simpson(f64::sin, 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn gaussian_tail() {
        let v = adaptive_simpson(|x| (-x * x).exp(), 0.0, 8.0, 1e-13).unwrap();
        assert!((v - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn reports_non_finite() {
        assert!(matches!(
            adaptive_simpson(|x| 1.0 / x, 0.0, 1.0, 1e-8),
            Err(QuadError::NonFinite { .. })
        ));
    }
}
