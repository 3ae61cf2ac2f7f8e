//! Bracketed scalar root finders and sign-change scanning.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("interval [{a}, {b}] does not bracket a root (f = {fa}, {fb})")]
    NotBracketed { a: f64, b: f64, fa: f64, fb: f64 },
    #[error("non-finite function value at x = {x}")]
    NonFinite { x: f64 },
    #[error("no convergence after {iterations} iterations")]
    MaxIterations { iterations: usize },
}

/// Converged root with its final bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

fn check_bracket(a: f64, b: f64, fa: f64, fb: f64) -> Result<(), RootError> {
    if !fa.is_finite() {
        return Err(RootError::NonFinite { x: a });
    }
    if !fb.is_finite() {
        return Err(RootError::NonFinite { x: b });
    }
    if fa * fb > 0.0 {
        return Err(RootError::NotBracketed { a, b, fa, fb });
    }
    Ok(())
}

/// Interval halving until the bracket width falls below `xtol`.
pub fn bisect<F>(mut f: F, a: f64, b: f64, xtol: f64) -> Result<Root, RootError>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut flo = f(lo);
    let fhi = f(hi);
    check_bracket(lo, hi, flo, fhi)?;
    if flo == 0.0 {
        return Ok(Root {
            x: lo,
            fx: 0.0,
            bracket: (lo, lo),
            iterations: 0,
        });
    }
    if fhi == 0.0 {
        return Ok(Root {
            x: hi,
            fx: 0.0,
            bracket: (hi, hi),
            iterations: 0,
        });
    }
    for it in 1..=400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= xtol {
            let fm = f(mid);
            return Ok(Root {
                x: mid,
                fx: fm,
                bracket: (lo, hi),
                iterations: it,
            });
        }
        let fm = f(mid);
        if !fm.is_finite() {
            return Err(RootError::NonFinite { x: mid });
        }
        if fm == 0.0 {
            return Ok(Root {
                x: mid,
                fx: 0.0,
                bracket: (mid, mid),
                iterations: it,
            });
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Err(RootError::MaxIterations { iterations: 400 })
}

/// Brent's method. Terminates when the bracket is below `xtol + 4 eps |x|`.
pub fn brent<F>(mut f: F, a: f64, b: f64, xtol: f64) -> Result<Root, RootError>
where
    F: FnMut(f64) -> f64,
{
    let mut a = a;
    let mut b = b;
    let mut fa = f(a);
    let mut fb = f(b);
    check_bracket(a, b, fa, fb)?;
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            fx: 0.0,
            bracket: (a, a),
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            fx: 0.0,
            bracket: (b, b),
            iterations: 0,
        });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for it in 1..=200 {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            let bracket = if b < c { (b, c) } else { (c, b) };
            return Ok(Root {
                x: b,
                fx: fb,
                bracket,
                iterations: it,
            });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(RootError::NonFinite { x: b });
        }
    }
    Err(RootError::MaxIterations { iterations: 200 })
}

/// Ridders' method; stops when the bracket is below `xtol`.
pub fn ridders<F>(mut f: F, a: f64, b: f64, xtol: f64) -> Result<Root, RootError>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut flo = f(lo);
    let mut fhi = f(hi);
    check_bracket(lo, hi, flo, fhi)?;
    if flo == 0.0 {
        return Ok(Root {
            x: lo,
            fx: 0.0,
            bracket: (lo, lo),
            iterations: 0,
        });
    }
    if fhi == 0.0 {
        return Ok(Root {
            x: hi,
            fx: 0.0,
            bracket: (hi, hi),
            iterations: 0,
        });
    }
    for it in 1..=200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        let s = (fm * fm - flo * fhi).sqrt();
        if s == 0.0 || !s.is_finite() {
            return Ok(Root {
                x: mid,
                fx: fm,
                bracket: (lo, hi),
                iterations: it,
            });
        }
        let sign = if flo >= fhi { 1.0 } else { -1.0 };
        let xn = (mid + (mid - lo) * sign * fm / s).clamp(lo, hi);
        let fnew = f(xn);
        if !fnew.is_finite() {
            return Err(RootError::NonFinite { x: xn });
        }
        if fnew == 0.0 {
            return Ok(Root {
                x: xn,
                fx: 0.0,
                bracket: (xn, xn),
                iterations: it,
            });
        }
        if (fm < 0.0) != (fnew < 0.0) {
            let (l, h) = if mid < xn { (mid, xn) } else { (xn, mid) };
            let (fl, fh) = if mid < xn { (fm, fnew) } else { (fnew, fm) };
            lo = l;
            hi = h;
            flo = fl;
            fhi = fh;
        } else if (flo < 0.0) != (fnew < 0.0) {
            hi = xn;
            fhi = fnew;
        } else {
            lo = xn;
            flo = fnew;
        }
        if hi - lo <= xtol {
            return Ok(Root {
                x: xn,
                fx: fnew,
                bracket: (lo, hi),
                iterations: it,
            });
        }
    }
    Err(RootError::MaxIterations { iterations: 200 })
}

/// `n` log-spaced points from `a` to `b` inclusive, `0 < a < b`.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > a && n >= 2);
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                a
            } else if i == n - 1 {
                b
            } else {
                (la + (lb - la) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linear_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(b > a && n >= 2);
    (0..n)
        .map(|i| {
            if i == n - 1 {
                b
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Adjacent grid pairs over which `f` changes sign. Non-finite samples break brackets.
pub fn scan_sign_changes<F>(mut f: F, grid: &[f64]) -> Vec<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &x in grid {
        let fx = f(x);
        if !fx.is_finite() {
            prev = None;
            continue;
        }
        if let Some((px, pf)) = prev {
            if fx == 0.0 || (pf != 0.0 && (pf < 0.0) != (fx < 0.0)) {
                out.push((px, x));
            }
        }
        prev = Some((x, fx));
    }
    out
}
