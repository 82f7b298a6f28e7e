//! Shape-preserving (Fritsch-Carlson) cubic interpolation on a uniform grid.
//!
//! Tables of even functions should be built over a symmetric range so that
//! the node at the origin receives its exact zero slope.

use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    /// Samples `y[i]` at `x0 + i h`.
    pub fn uniform(x0: f64, h: f64, y: Vec<f64>) -> Result<Self> {
        let n = y.len();
        if n < 2 {
            return Err(Error::Shape(
                "interpolation needs at least two samples".into(),
            ));
        }
        if !(h > 0.0) {
            return Err(Error::Domain(format!(
                "interpolation step must be positive, got {h}"
            )));
        }
        let delta: Vec<f64> = y.windows(2).map(|w| (w[1] - w[0]) / h).collect();
        let mut d = vec![0.0; n];
        d[0] = end_slope(&delta, false);
        d[n - 1] = end_slope(&delta, true);
        for i in 1..n - 1 {
            let (a, b) = (delta[i - 1], delta[i]);
            d[i] = if a * b <= 0.0 {
                0.0
            } else {
                // Centred slope, clipped to the Fritsch-Carlson region.
                let c = 0.5 * (a + b);
                let cap = 3.0 * a.abs().min(b.abs());
                c.signum() * c.abs().min(cap)
            };
        }
        Ok(Self { x0, h, y, d })
    }

    pub fn x_max(&self) -> f64 {
        self.x0 + (self.y.len() - 1) as f64 * self.h
    }

    /// Value at `x`; `None` outside the tabulated range.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let t = (x - self.x0) / self.h;
        let last = self.y.len() - 1;
        if !(t >= 0.0) || t > last as f64 {
            return None;
        }
        let i = (t.floor() as usize).min(last - 1);
        let s = t - i as f64;
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.d[i] * self.h, self.d[i + 1] * self.h);
        let s2 = s * s;
        let s3 = s2 * s;
        Some(
            (2.0 * s3 - 3.0 * s2 + 1.0) * y0
                + (s3 - 2.0 * s2 + s) * m0
                + (-2.0 * s3 + 3.0 * s2) * y1
                + (s3 - s2) * m1,
        )
    }
}

// Second-order one-sided slope, zeroed if it would reverse the first secant.
fn end_slope(delta: &[f64], right: bool) -> f64 {
    let m = delta.len();
    let (d0, d1) = if right {
        (
            delta[m - 1],
            if m > 1 { delta[m - 2] } else { delta[m - 1] },
        )
    } else {
        (delta[0], if m > 1 { delta[1] } else { delta[0] })
    };
    let s = 0.5 * (3.0 * d0 - d1);
    if s * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}
