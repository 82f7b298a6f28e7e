//! Transmission masks `T(rho)` and their Fourier transforms.

use crate::numerics::Grid2D;
use crate::{Error, Result, Vec2};
use num_complex::Complex64;

/// Which power of the mask to transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskVariant {
    /// `|T|^2`
    Tn,
    /// `T^2`
    Tp,
    /// `T`
    Tc,
}

/// A mask stored on a square grid. Pixels are point samples of area `dx^2`,
/// so transforms are exact sums over the support.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledMask {
    grid: Grid2D,
    values: Vec<Complex64>,
    support: Vec<(Vec2, Complex64)>,
}

impl SampledMask {
    fn new(grid: Grid2D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!(
                "mask has {} samples, grid needs {}",
                values.len(),
                grid.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.norm() <= 1.0 + 1e-12)) {
            return Err(Error::Domain(format!("mask transmission {v} exceeds unit modulus")));
        }
        let support = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm_sqr() > 0.0)
            .map(|(i, v)| (grid.point(i), *v))
            .collect();
        Ok(Self { grid, values, support })
    }

    pub fn grid(&self) -> Grid2D {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Nonzero pixels as `(position, value)`.
    pub fn support(&self) -> &[(Vec2, Complex64)] {
        &self.support
    }

    fn value(&self, rho: Vec2) -> Complex64 {
        let g = self.grid;
        let idx = |x: f64| {
            let i = (x / g.dx + (g.n / 2) as f64).round();
            (i >= 0.0 && i < g.n as f64).then_some(i as usize)
        };
        match (idx(rho[0]), idx(rho[1])) {
            (Some(i), Some(j)) => self.values[i * g.n + j],
            _ => Complex64::default(),
        }
    }

    fn transform(&self, variant: MaskVariant, k: Vec2) -> Complex64 {
        let area = self.grid.dx * self.grid.dx;
        let mut acc = Complex64::default();
        for &(p, v) in &self.support {
            let w = match variant {
                MaskVariant::Tn => Complex64::new(v.norm_sqr(), 0.0),
                MaskVariant::Tp => v * v,
                MaskVariant::Tc => v,
            };
            acc += w * Complex64::from_polar(1.0, -(k[0] * p[0] + k[1] * p[1]));
        }
        acc * area
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mask {
    /// Two open rectangles of width `slit_width` (along x) and length
    /// `slit_length` (along y), centred at `x = +/- separation / 2`.
    TwoSlit { slit_width: f64, separation: f64, slit_length: f64 },
    /// `T(rho) = exp(-|rho|^2 / a0^2)`, so `|T|^2` has 1/e^2 radius `a0`.
    GaussianDisk { a0: f64 },
    ZeroOneSampled(SampledMask),
    ComplexSampled(SampledMask),
}

impl Mask {
    pub fn two_slit(slit_width: f64, separation: f64, slit_length: f64) -> Result<Self> {
        for (name, v) in [("slit_width", slit_width), ("separation", separation), ("slit_length", slit_length)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if slit_width >= separation {
            return Err(Error::Domain(format!(
                "slit width {slit_width} must be smaller than separation {separation}"
            )));
        }
        Ok(Mask::TwoSlit { slit_width, separation, slit_length })
    }

    pub fn gaussian_disk(a0: f64) -> Result<Self> {
        if !(a0 > 0.0) || !a0.is_finite() {
            return Err(Error::Domain(format!("a0 must be positive, got {a0}")));
        }
        Ok(Mask::GaussianDisk { a0 })
    }

    /// Samples must be exactly 0 or 1.
    pub fn zero_one(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|&&v| v != 0.0 && v != 1.0) {
            return Err(Error::Domain(format!("zero-one mask contains {v}")));
        }
        let values = values.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
        Ok(Mask::ZeroOneSampled(SampledMask::new(grid, values)?))
    }

    pub fn complex(grid: Grid2D, values: Vec<Complex64>) -> Result<Self> {
        Ok(Mask::ComplexSampled(SampledMask::new(grid, values)?))
    }

    /// Point-sample an analytic two-slit onto `grid` as a zero-one mask.
    pub fn two_slit_sampled(grid: Grid2D, slit_width: f64, separation: f64, slit_length: f64) -> Result<Self> {
        let analytic = Mask::two_slit(slit_width, separation, slit_length)?;
        let values = (0..grid.len()).map(|i| analytic.value(grid.point(i)).re).collect();
        Mask::zero_one(grid, values)
    }

    pub fn value(&self, rho: Vec2) -> Complex64 {
        match self {
            Mask::TwoSlit { slit_width, separation, slit_length } => {
                let open = rho[1].abs() <= 0.5 * slit_length
                    && (rho[0].abs() - 0.5 * separation).abs() <= 0.5 * slit_width;
                Complex64::new(if open { 1.0 } else { 0.0 }, 0.0)
            }
            Mask::GaussianDisk { a0 } => Complex64::new((-crate::norm2(rho) / (a0 * a0)).exp(), 0.0),
            Mask::ZeroOneSampled(s) | Mask::ComplexSampled(s) => s.value(rho),
        }
    }

    /// `T` is real everywhere.
    pub fn is_real(&self) -> bool {
        match self {
            Mask::ComplexSampled(s) => s.values.iter().all(|v| v.im == 0.0),
            _ => true,
        }
    }

    /// `T` takes only the values 0 and 1, so `T = T^2 = |T|^2`.
    pub fn is_zero_one(&self) -> bool {
        matches!(self, Mask::TwoSlit { .. } | Mask::ZeroOneSampled(_))
    }

    /// Transverse radius `a0` of `|T|^2`.
    pub fn radius(&self) -> f64 {
        match self {
            Mask::TwoSlit { slit_width, separation, slit_length } => {
                (0.5 * (separation + slit_width)).hypot(0.5 * slit_length)
            }
            Mask::GaussianDisk { a0 } => *a0,
            Mask::ZeroOneSampled(s) | Mask::ComplexSampled(s) => {
                let dx = s.grid.dx;
                s.support.iter().map(|(p, _)| crate::norm(*p)).fold(0.0, f64::max) + 0.5 * dx
            }
        }
    }

    pub fn sampled(&self) -> Option<&SampledMask> {
        match self {
            Mask::ZeroOneSampled(s) | Mask::ComplexSampled(s) => Some(s),
            _ => None,
        }
    }

    /// Sample `T` on `grid`.
    pub fn sample(&self, grid: Grid2D) -> Vec<Complex64> {
        match self.sampled() {
            Some(s) if s.grid == grid => s.values.clone(),
            _ => (0..grid.len()).map(|i| self.value(grid.point(i))).collect(),
        }
    }

    /// The 2-D Fourier transform `int d rho e^{-i k . rho} F(rho)` of
    /// `F = |T|^2`, `T^2` or `T`.
    pub fn transform(&self, variant: MaskVariant, k: Vec2) -> Complex64 {
        match self {
            Mask::TwoSlit { slit_width, separation, slit_length } => {
                // Every power of a zero-one mask is the mask itself.
                let sx = slit_width * sinc(0.5 * k[0] * slit_width) * 2.0 * (0.5 * k[0] * separation).cos();
                let sy = slit_length * sinc(0.5 * k[1] * slit_length);
                Complex64::new(sx * sy, 0.0)
            }
            Mask::GaussianDisk { a0 } => {
                let k2 = crate::norm2(k) * a0 * a0;
                let v = match variant {
                    MaskVariant::Tn | MaskVariant::Tp => 0.5 * std::f64::consts::PI * a0 * a0 * (-k2 / 8.0).exp(),
                    MaskVariant::Tc => std::f64::consts::PI * a0 * a0 * (-k2 / 4.0).exp(),
                };
                Complex64::new(v, 0.0)
            }
            Mask::ZeroOneSampled(s) | Mask::ComplexSampled(s) => s.transform(variant, k),
        }
    }
}

/// `sin(x) / x`.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Free-function form of [`Mask::transform`].
pub fn mask_transform(mask: &Mask, variant: MaskVariant, k: Vec2) -> Complex64 {
    mask.transform(variant, k)
}
