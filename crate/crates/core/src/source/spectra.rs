//! Temporal spectra `S(Omega)` and spatial correlations `G(rho)`.

use crate::numerics::{integrate_1d, j0, QuadratureSpec};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Gaussian spectra are treated as zero beyond this many `1/T0`; the tail
/// there is below `1e-42` of the peak.
const GAUSSIAN_CUTOFF: f64 = 14.0;

#[derive(Debug, Clone, PartialEq)]
pub enum TemporalSpectrum {
    /// `peak * exp(-T0^2 Omega^2 / 2)`.
    Gaussian { t0: f64, peak: f64 },
    /// `height` on `|Omega| < w`, zero elsewhere.
    Flat { w: f64, height: f64 },
    /// Linear interpolation between samples, zero outside them.
    Tabulated { omega: Vec<f64>, values: Vec<f64> },
}

impl TemporalSpectrum {
    /// Unit-area Gaussian, `sqrt(2 pi T0^2) exp(-T0^2 Omega^2 / 2)`.
    pub fn gaussian(t0: f64) -> Result<Self> {
        positive("t0", t0)?;
        Ok(Self::Gaussian { t0, peak: (2.0 * PI).sqrt() * t0 })
    }

    /// Unit-area flat spectrum, `pi / W` on `|Omega| < W`.
    pub fn flat(w: f64) -> Result<Self> {
        positive("W", w)?;
        Ok(Self::Flat { w, height: PI / w })
    }

    /// Samples must be strictly increasing in `omega` and nonnegative. With
    /// `unit_area` the table is rescaled so that `int S dOmega / 2 pi = 1`.
    pub fn tabulated(omega: Vec<f64>, values: Vec<f64>, unit_area: bool) -> Result<Self> {
        if omega.len() != values.len() || omega.len() < 2 {
            return Err(Error::Shape("spectrum table needs matching omega/value columns of length >= 2".into()));
        }
        if omega.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("spectrum frequencies must be strictly increasing".into()));
        }
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::Domain("spectrum values must be finite and nonnegative".into()));
        }
        let mut s = Self::Tabulated { omega, values };
        if unit_area {
            let a = s.area();
            if !(a > 0.0) {
                return Err(Error::Domain("cannot normalise an all-zero spectrum".into()));
            }
            if let Self::Tabulated { values, .. } = &mut s {
                values.iter_mut().for_each(|v| *v /= a);
            }
        }
        Ok(s)
    }

    pub fn eval(&self, omega: f64) -> f64 {
        match self {
            Self::Gaussian { t0, peak } => peak * (-0.5 * (t0 * omega).powi(2)).exp(),
            Self::Flat { w, height } => {
                if omega.abs() < *w {
                    *height
                } else {
                    0.0
                }
            }
            Self::Tabulated { omega: om, values } => {
                if omega < om[0] || omega > om[om.len() - 1] {
                    return 0.0;
                }
                let i = om.partition_point(|&o| o <= omega).clamp(1, om.len() - 1);
                let t = (omega - om[i - 1]) / (om[i] - om[i - 1]);
                values[i - 1] + t * (values[i] - values[i - 1])
            }
        }
    }

    /// Interval outside which the spectrum is zero (or negligible).
    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::Gaussian { t0, .. } => (-GAUSSIAN_CUTOFF / t0, GAUSSIAN_CUTOFF / t0),
            Self::Flat { w, .. } => (-w, *w),
            Self::Tabulated { omega, .. } => (omega[0], omega[omega.len() - 1]),
        }
    }

    /// Coherence time `1 / sigma_Omega`, with `sigma_Omega` the rms width
    /// (`T0` for the Gaussian).
    pub fn time_scale(&self) -> f64 {
        match self {
            Self::Gaussian { t0, .. } => *t0,
            Self::Flat { w, .. } => 3f64.sqrt() / w,
            Self::Tabulated { omega, values } => {
                let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
                for (o, v) in omega.windows(2).zip(values.windows(2)) {
                    let h = o[1] - o[0];
                    for (x, y) in [(o[0], v[0]), (o[1], v[1])] {
                        m0 += 0.5 * h * y;
                        m1 += 0.5 * h * y * x;
                        m2 += 0.5 * h * y * x * x;
                    }
                }
                let var = (m2 / m0 - (m1 / m0).powi(2)).max(f64::MIN_POSITIVE);
                1.0 / var.sqrt()
            }
        }
    }

    /// Breakpoints where the integrand has kinks.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::Tabulated { omega, .. } => omega.clone(),
            _ => {
                let (a, b) = self.support();
                vec![a, b]
            }
        }
    }

    /// `int S(Omega) dOmega / 2 pi` over the whole line.
    pub fn area(&self) -> f64 {
        match self {
            Self::Gaussian { t0, peak } => peak / ((2.0 * PI).sqrt() * t0),
            Self::Flat { w, height } => height * w / PI,
            Self::Tabulated { omega, values } => {
                let s: f64 = omega
                    .windows(2)
                    .zip(values.windows(2))
                    .map(|(o, v)| 0.5 * (o[1] - o[0]) * (v[0] + v[1]))
                    .sum();
                s / (2.0 * PI)
            }
        }
    }

    /// `int_{lo}^{hi} S(Omega) dOmega / 2 pi`, clipped to the support.
    pub fn partial_area(&self, lo: f64, hi: f64) -> Result<f64> {
        let (a, b) = self.support();
        let (lo, hi) = (lo.max(a), hi.min(b));
        if lo >= hi {
            return Ok(0.0);
        }
        if let Self::Flat { height, .. } = self {
            return Ok(height * (hi - lo) / (2.0 * PI));
        }
        let mut pts: Vec<f64> = self.breakpoints().into_iter().filter(|&p| p > lo && p < hi).collect();
        pts.insert(0, lo);
        pts.push(hi);
        let spec = QuadratureSpec::with_tolerances(1e-12, 0.0);
        let mut total = 0.0;
        for w in pts.windows(2) {
            total += integrate_1d(|o| self.eval(o), w[0], w[1], &spec)?.value;
        }
        Ok(total / (2.0 * PI))
    }

    /// Pointwise square root, used for the quantum-max phase-sensitive
    /// spectrum.
    pub fn sqrt(&self) -> Self {
        match self {
            Self::Gaussian { t0, peak } => Self::Gaussian { t0: t0 / 2f64.sqrt(), peak: peak.sqrt() },
            Self::Flat { w, height } => Self::Flat { w: *w, height: height.sqrt() },
            Self::Tabulated { omega, values } => Self::Tabulated {
                omega: omega.clone(),
                values: values.iter().map(|v| v.sqrt()).collect(),
            },
        }
    }
}

/// Radially symmetric spatial correlation `G(rho)` with 2-D transform
/// `Gt(k) = int d rho e^{-i k . rho} G(rho)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpatialCorrelation {
    /// `G = peak exp(-rho^2 / 2 rho0^2)`, `Gt = 2 pi rho0^2 peak exp(-k^2 rho0^2 / 2)`.
    Gaussian { rho0: f64, peak: f64 },
    /// `G = i0 delta(rho)`, `Gt = i0`.
    DeltaIncoherent { i0: f64 },
    /// Tabulated radial transform `Gt(|k|)`, linearly interpolated and zero
    /// beyond the last sample.
    Tabulated { k: Vec<f64>, spectrum: Vec<f64> },
}

impl SpatialCorrelation {
    pub fn gaussian(rho0: f64, peak: f64) -> Result<Self> {
        positive("rho0", rho0)?;
        if !(peak >= 0.0) || !peak.is_finite() {
            return Err(Error::Domain(format!("correlation peak must be nonnegative, got {peak}")));
        }
        Ok(Self::Gaussian { rho0, peak })
    }

    /// Gaussian with prescribed `Gt(0)`.
    pub fn gaussian_with_transform_peak(rho0: f64, gt0: f64) -> Result<Self> {
        positive("rho0", rho0)?;
        Self::gaussian(rho0, gt0 / (2.0 * PI * rho0 * rho0))
    }

    pub fn delta(i0: f64) -> Result<Self> {
        if !(i0 >= 0.0) || !i0.is_finite() {
            return Err(Error::Domain(format!("flux density must be nonnegative, got {i0}")));
        }
        Ok(Self::DeltaIncoherent { i0 })
    }

    pub fn tabulated(k: Vec<f64>, spectrum: Vec<f64>) -> Result<Self> {
        if k.len() != spectrum.len() || k.len() < 2 {
            return Err(Error::Shape("correlation table needs matching columns of length >= 2".into()));
        }
        if k[0] != 0.0 || k.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("table wavenumbers must start at 0 and increase".into()));
        }
        if spectrum.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::Domain("correlation spectrum must be nonnegative".into()));
        }
        Ok(Self::Tabulated { k, spectrum })
    }

    pub fn transform(&self, k: f64) -> f64 {
        let k = k.abs();
        match self {
            Self::Gaussian { rho0, peak } => 2.0 * PI * rho0 * rho0 * peak * (-0.5 * (k * rho0).powi(2)).exp(),
            Self::DeltaIncoherent { i0 } => *i0,
            Self::Tabulated { k: ks, spectrum } => {
                if k > ks[ks.len() - 1] {
                    return 0.0;
                }
                let i = ks.partition_point(|&x| x <= k).clamp(1, ks.len() - 1);
                let t = (k - ks[i - 1]) / (ks[i] - ks[i - 1]);
                spectrum[i - 1] + t * (spectrum[i] - spectrum[i - 1])
            }
        }
    }

    /// `G(rho)`. The delta kind has no pointwise value.
    pub fn value(&self, rho: f64) -> Result<f64> {
        match self {
            Self::Gaussian { rho0, peak } => Ok(peak * (-0.5 * (rho / rho0).powi(2)).exp()),
            Self::DeltaIncoherent { .. } => {
                Err(Error::Unsupported("a delta-correlated source has no pointwise G(rho)".into()))
            }
            Self::Tabulated { k, .. } => {
                // G(rho) = (1/2 pi) int k Gt(k) J0(k rho) dk, piecewise over the table.
                let spec = QuadratureSpec::with_tolerances(1e-10, 1e-300);
                let mut total = 0.0;
                for w in k.windows(2) {
                    total += integrate_1d(|q| q * self.transform(q) * j0(q * rho), w[0], w[1], &spec)?.value;
                }
                Ok(total / (2.0 * PI))
            }
        }
    }

    /// Coherence radius: the `rho0` of a Gaussian, otherwise `1/k` at the
    /// point where `Gt` falls to `e^{-1/2}` of its peak (the same definition
    /// applied to a Gaussian).
    pub fn coherence_radius(&self) -> f64 {
        match self {
            Self::Gaussian { rho0, .. } => *rho0,
            Self::DeltaIncoherent { .. } => 0.0,
            Self::Tabulated { k, .. } => {
                let target = self.transform(0.0) * (-0.5f64).exp();
                let last = k[k.len() - 1];
                let mut lo = 0.0;
                let mut hi = last;
                if self.transform(hi) > target {
                    return 1.0 / last;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.transform(mid) > target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                1.0 / (0.5 * (lo + hi))
            }
        }
    }

    /// Correlation whose transform is `sqrt(Gt)`.
    pub fn sqrt_transform(&self) -> Self {
        match self {
            Self::Gaussian { rho0, peak } => {
                let gt0 = (2.0 * PI * rho0 * rho0 * peak).sqrt();
                let r = rho0 / 2f64.sqrt();
                Self::Gaussian { rho0: r, peak: gt0 / (2.0 * PI * r * r) }
            }
            Self::DeltaIncoherent { i0 } => Self::DeltaIncoherent { i0: i0.sqrt() },
            Self::Tabulated { k, spectrum } => Self::Tabulated {
                k: k.clone(),
                spectrum: spectrum.iter().map(|v| v.sqrt()).collect(),
            },
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
    }
}
