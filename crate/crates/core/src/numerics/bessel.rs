//! Bessel function of the first kind, order one, and the Airy amplitude
//! `2 J1(x) / x`.
//!
//! Three regimes are used:
//!
//! - `|x| < 4`: the ascending power series. Terms stay below 3 there, so
//!   cancellation is mild.
//! - `4 <= |x| < 25`: Miller's backward recurrence normalised with
//!   `J0 + 2 (J2 + J4 + ...) = 1`.
//! - `|x| >= 25`: Hankel's asymptotic expansion. The smallest term there is
//!   about `exp(-2x) < 1e-21`, well below double precision.

use crate::{Error, Result};

const SERIES_LIMIT: f64 = 4.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// Below this argument [`jinc`] uses `1 - x^2/8 + x^4/192`. Small enough that
/// the jump across the switch is far below the local slope times `1e-3 eps`.
pub const JINC_SERIES_EPS: f64 = 1e-5;

/// `J1(x)`. Returns a domain error for non-finite input.
pub fn bessel_j1(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!(
            "bessel_j1 of non-finite argument {x}"
        )));
    }
    Ok(j1(x))
}

/// `2 J1(x) / x` with the removable singularity at the origin handled by its
/// Taylor series.
pub fn jinc(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("jinc of non-finite argument {x}")));
    }
    Ok(jinc_unchecked(x))
}

/// Unchecked [`jinc`] for hot loops; NaN in, NaN out.
#[inline]
pub fn jinc_unchecked(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= JINC_SERIES_EPS {
        let x2 = ax * ax;
        1.0 - x2 / 8.0 + x2 * x2 / 192.0
    } else {
        2.0 * j1(ax) / ax
    }
}

/// Unchecked `J0(x)`. Even in `x`.
pub fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SERIES_LIMIT {
        let h2 = 0.25 * ax * ax;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            let kf = k as f64;
            term *= -h2 / (kf * kf);
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    } else if ax < ASYMPTOTIC_LIMIT {
        miller(ax).0
    } else {
        hankel(ax, 0.0)
    }
}

/// Unchecked `J1(x)`. Odd in `x`.
pub fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < SERIES_LIMIT {
        series(ax)
    } else if ax < ASYMPTOTIC_LIMIT {
        miller(ax).1
    } else {
        hankel(ax, 4.0)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn series(x: f64) -> f64 {
    let h = 0.5 * x;
    let h2 = h * h;
    let mut term = h;
    let mut sum = h;
    for k in 0..60 {
        let kf = k as f64;
        term *= -h2 / ((kf + 1.0) * (kf + 2.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `(J0(x), J1(x))` by backward recurrence.
fn miller(x: f64) -> (f64, f64) {
    // Start well above x so that J_n has decayed below double precision.
    let start = (x + 20.0 + 6.0 * x.cbrt()).ceil() as usize;
    let start = start + (start & 1);
    let two_over_x = 2.0 / x;

    let mut above = 0.0_f64;
    let mut current = 1e-30_f64;
    let mut j1_unnorm = 0.0;
    let mut j0_unnorm = 0.0;
    let mut norm = 0.0;
    for n in (1..=start).rev() {
        // current = J_n, above = J_{n+1}
        let below = n as f64 * two_over_x * current - above;
        above = current;
        current = below;
        // current is now J_{n-1}
        let order = n - 1;
        if order == 1 {
            j1_unnorm = current;
        }
        if order == 0 {
            j0_unnorm = current;
        }
        if order % 2 == 0 {
            norm += if order == 0 { current } else { 2.0 * current };
        }
        if current.abs() > 1e250 {
            above *= 1e-250;
            current *= 1e-250;
            j1_unnorm *= 1e-250;
            norm *= 1e-250;
        }
    }
    (j0_unnorm / norm, j1_unnorm / norm)
}

/// Hankel expansion of `J_nu` with `mu = 4 nu^2`, for `nu` in {0, 1}.
fn hankel(x: f64, mu: f64) -> f64 {
    let mut p = 1.0;
    let mut q = 0.0;
    let mut t = 1.0_f64;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        t *= (mu - odd * odd) / (8.0 * k as f64 * x);
        let at = t.abs();
        if at > prev {
            break;
        }
        prev = at;
        // Signs: P = a0 - a2/x^2 + a4/x^4 ..., Q = a1/x - a3/x^3 + ...
        match k % 4 {
            0 => p += t,
            1 => q += t,
            2 => p -= t,
            _ => q -= t,
        }
        if at < 1e-17 {
            break;
        }
    }
    // chi = x - pi/4 - nu pi/2, expanded to avoid rounding a shifted argument.
    let (s, c) = x.sin_cos();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (cos_chi, sin_chi) = if mu == 0.0 {
        ((c + s) * r, (s - c) * r)
    } else {
        ((s - c) * r, -(s + c) * r)
    };
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}
