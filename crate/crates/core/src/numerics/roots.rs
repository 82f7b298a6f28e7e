//! First sign change of a scalar function.

use crate::{Error, Result};

pub const DEFAULT_SCAN_STEP: f64 = 0.01;

/// Scan forward from `start` in steps of `step` up to `start + 1000 * step`
/// and refine the first sign change by bisection to `tol`.
pub fn find_first_zero<F: FnMut(f64) -> f64>(f: F, start: f64, step: f64, tol: f64) -> Result<f64> {
    find_first_zero_within(f, start, step, tol, start + 1000.0 * step)
}

/// As [`find_first_zero`] with an explicit horizon. `f(start)` must be
/// nonzero.
pub fn find_first_zero_within<F: FnMut(f64) -> f64>(
    mut f: F,
    start: f64,
    step: f64,
    tol: f64,
    horizon: f64,
) -> Result<f64> {
    if !(step > 0.0) || !(tol > 0.0) || !(horizon > start) {
        return Err(Error::Domain(format!(
            "bad scan parameters: start {start}, step {step}, tol {tol}, horizon {horizon}"
        )));
    }
    let mut a = start;
    let mut fa = f(a);
    if !fa.is_finite() {
        return Err(Error::Domain(format!(
            "non-finite value at scan start {start}"
        )));
    }
    if fa == 0.0 {
        return Err(Error::Domain(format!(
            "function vanishes at scan start {start}"
        )));
    }
    let mut i = 1usize;
    loop {
        let b = (start + i as f64 * step).min(horizon);
        let fb = f(b);
        if fb == 0.0 {
            return Ok(b);
        }
        if fb.signum() != fa.signum() {
            return bisect(f, a, b, fa, tol);
        }
        if b >= horizon {
            return Err(Error::NotFound { start, horizon });
        }
        a = b;
        fa = fb;
        i += 1;
    }
}

/// Bisection on a bracket with `f(a) = fa` and `f(b)` of opposite sign.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    tol: f64,
) -> Result<f64> {
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let fm = f(m);
        if !fm.is_finite() {
            return Err(Error::Domain(format!(
                "non-finite value at {m} during bisection"
            )));
        }
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}
