use super::{DetectorModel, DiffractionImager};
use crate::source::MaskVariant;
use crate::validity::Severity;
use crate::{Error, Result, Vec2, SPEED_OF_LIGHT};
use rayon::prelude::*;
use std::f64::consts::PI;

const RADIAL_SAMPLES: usize = 96;
const ANGULAR_SAMPLES: usize = 96;

/// Image contrast over a disk of radius `region` about the axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contrast {
    /// `cs * ct`.
    pub c: f64,
    /// Spatial factor `(max - min) |Tp|^2 / Tn(0)^2`.
    pub cs: f64,
    /// Temporal factor.
    pub ct: f64,
    /// `(max - min) C / C0(0)` taken directly on the full correlation,
    /// background variation included.
    pub direct: f64,
    pub region: f64,
}

/// Disk radius holding the first three lobes of `|Tp(2 omega0 rho / cL)|^2`.
pub fn default_region_radius(imager: &DiffractionImager) -> f64 {
    let d = 2.0 * imager.model().mask().radius();
    3.0 * PI * SPEED_OF_LIGHT * imager.distance() / (imager.model().omega0() * d)
}

/// `(min, max)` of `f` over the disk `|rho| <= radius`: a polar scan followed
/// by compass-search refinement of the best samples.
pub fn disk_extrema<F>(f: F, radius: f64) -> (f64, f64)
where
    F: Fn(Vec2) -> f64 + Sync,
{
    let mut pts = vec![[0.0, 0.0]];
    for i in 1..=RADIAL_SAMPLES {
        let r = radius * i as f64 / RADIAL_SAMPLES as f64;
        for j in 0..ANGULAR_SAMPLES {
            let th = 2.0 * PI * j as f64 / ANGULAR_SAMPLES as f64;
            pts.push([r * th.cos(), r * th.sin()]);
        }
    }
    let vals: Vec<f64> = pts.par_iter().map(|&p| f(p)).collect();
    let pick = |better: fn(f64, f64) -> bool| {
        let mut best = 0;
        for (i, &v) in vals.iter().enumerate() {
            if better(v, vals[best]) {
                best = i;
            }
        }
        best
    };
    let lo = pick(|a, b| a < b);
    let hi = pick(|a, b| a > b);
    let step = radius / RADIAL_SAMPLES as f64;
    let min = compass(&f, pts[lo], vals[lo], step, radius);
    let max = -compass(&|p| -f(p), pts[hi], -vals[hi], step, radius);
    (min, max)
}

fn compass<F: Fn(Vec2) -> f64>(f: &F, mut x: Vec2, mut fx: f64, mut step: f64, radius: f64) -> f64 {
    let floor = radius * 1e-12;
    let dirs = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0], [0.6, 0.8], [-0.6, -0.8], [0.8, -0.6], [-0.8, 0.6]];
    while step > floor {
        let mut moved = false;
        for d in dirs {
            let mut y = [x[0] + step * d[0], x[1] + step * d[1]];
            // Project back onto the disk so the search can slide along the rim.
            let ny = crate::norm(y);
            if ny > radius {
                y = [y[0] * radius / ny, y[1] * radius / ny];
            }
            let fy = f(y);
            if fy < fx {
                x = y;
                fx = fy;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    fx
}

impl DiffractionImager {
    /// Contrast over the disk `|rho| <= region`; `None` picks
    /// [`default_region_radius`].
    pub fn contrast(&self, region: Option<f64>) -> Result<Contrast> {
        let mask = self.model().mask();
        if !mask.is_real() {
            return Err(Error::Unsupported("contrast is defined for real-valued masks only".into()));
        }
        let region = region.unwrap_or_else(|| default_region_radius(self));
        if !(region > 0.0) || !region.is_finite() {
            return Err(Error::Domain(format!("contrast region radius must be positive, got {region}")));
        }
        let q = 2.0 * self.k_per_rho();
        let (tmin, tmax) = disk_extrema(|r| mask.transform(MaskVariant::Tp, [q * r[0], q * r[1]]).norm_sqr(), region);
        let tn0 = mask.transform(MaskVariant::Tn, [0.0, 0.0]).re;
        let cs = (tmax - tmin) / (tn0 * tn0);
        let ct = self.temporal_contrast();
        let c0 = self.background([0.0, 0.0])?;
        let total = |r: Vec2| self.correlation(r).map_or(f64::NAN, |s| s.total);
        let (cmin, cmax) = disk_extrema(total, region);
        Ok(Contrast { c: cs * ct, cs, ct, direct: (cmax - cmin) / c0, region })
    }
}

/// One-shot form of [`DiffractionImager::contrast`].
pub fn contrast(
    model: &crate::source::SourceModel,
    det: &DetectorModel,
    l: f64,
    region: Option<f64>,
) -> Result<Contrast> {
    DiffractionImager::new(model, det, l, Severity::Warn)?.contrast(region)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extrema_of_a_shifted_paraboloid() {
        let (lo, hi) = disk_extrema(|p| (p[0] - 0.3).powi(2) + (p[1] + 0.2).powi(2), 1.0);
        assert!(lo.abs() < 1e-18);
        let far = (1.0 + (0.09f64 + 0.04).sqrt()).powi(2);
        assert!((hi - far).abs() < 1e-9, "{hi} vs {far}");
    }
}
