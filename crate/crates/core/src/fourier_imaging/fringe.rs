use crate::numerics::bisect;
use crate::{Error, Result};

/// Local minima of `f` on `[lo, hi]`: bracketed by a scan with spacing
/// `step`, then located by bisection on a central-difference derivative.
pub fn local_minima<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(hi > lo) || !(step > 0.0) || !step.is_finite() {
        return Err(Error::Domain(format!("bad scan [{lo}, {hi}] with step {step}")));
    }
    let n = ((hi - lo) / step).ceil() as usize;
    let xs: Vec<f64> = (0..=n).map(|i| (lo + i as f64 * step).min(hi)).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let h = step * 1e-4;
    let df = |x: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let mut out = Vec::new();
    for i in 1..n {
        if ys[i] <= ys[i - 1] && ys[i] < ys[i + 1] {
            let (a, b) = (xs[i - 1], xs[i + 1]);
            let fa = df(a);
            let fb = df(b);
            let x = if fa < 0.0 && fb > 0.0 {
                bisect(&df, a, b, fa, step * 1e-13)?
            } else {
                xs[i]
            };
            out.push(x);
        }
    }
    Ok(out)
}

/// Mean spacing of consecutive local minima of `f` on `[lo, hi]`.
pub fn fringe_period<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, step: f64) -> Result<f64> {
    let m = local_minima(f, lo, hi, step)?;
    if m.len() < 2 {
        return Err(Error::NotFound { start: lo, horizon: hi });
    }
    Ok((m[m.len() - 1] - m[0]) / (m.len() - 1) as f64)
}
