use crate::numerics::jinc_unchecked;
use crate::propagation::phase_mod;
use crate::{Error, Result, Vec2, SPEED_OF_LIGHT};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Thin lens of radius `r` and focal length `f` imaging the plane `d1`
/// in front of it onto the plane `d2` behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LensGeometry {
    pub radius: f64,
    pub focal_length: f64,
    pub d1: f64,
    pub d2: f64,
    pub omega0: f64,
}

impl LensGeometry {
    /// `d2 = None` derives the image distance from `1/d1 + 1/d2 = 1/f`.
    pub fn new(radius: f64, focal_length: f64, d1: f64, d2: Option<f64>, omega0: f64) -> Result<Self> {
        for (name, v) in [("radius", radius), ("focal_length", focal_length), ("d1", d1), ("omega0", omega0)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("lens {name} must be positive, got {v}")));
            }
        }
        if d1 <= focal_length {
            return Err(Error::Domain(format!("object distance {d1} must exceed the focal length {focal_length}")));
        }
        let derived = 1.0 / (1.0 / focal_length - 1.0 / d1);
        let d2 = d2.unwrap_or(derived);
        if !(d2 > 0.0) || !d2.is_finite() {
            return Err(Error::Domain(format!("lens d2 must be positive, got {d2}")));
        }
        let mismatch = ((1.0 / d1 + 1.0 / d2) * focal_length - 1.0).abs();
        if mismatch > 1e-12 {
            return Err(Error::Config(format!(
                "1/d1 + 1/d2 = 1/f violated by {mismatch:e} relative (d1 = {d1}, d2 = {d2}, f = {focal_length})"
            )));
        }
        Ok(Self { radius, focal_length, d1, d2, omega0 })
    }

    /// `omega0 R / c d1`.
    pub fn r_scale(&self) -> f64 {
        self.omega0 * self.radius / (SPEED_OF_LIGHT * self.d1)
    }

    /// Dimensionless radius `(omega0 R / c d1) |d1 rho / d2 + rho_src|`.
    pub fn r(&self, rho: Vec2, rho_src: Vec2) -> f64 {
        let m = self.d1 / self.d2;
        self.r_scale() * crate::norm([m * rho[0] + rho_src[0], m * rho[1] + rho_src[1]])
    }

    /// Geometric image of the source point `rho_src`.
    pub fn image_point(&self, rho_src: Vec2) -> Vec2 {
        let m = self.d2 / self.d1;
        [-m * rho_src[0], -m * rho_src[1]]
    }

    /// `kappa = I0 omega0^2 R^4 / 4 c^2 d1^2 d2^2`.
    pub fn kappa(&self, i0: f64) -> f64 {
        let c = SPEED_OF_LIGHT;
        i0 * self.omega0.powi(2) * self.radius.powi(4) / (4.0 * c * c * self.d1.powi(2) * self.d2.powi(2))
    }

    /// Source-plane distance corresponding to a unit step in `r`.
    pub fn source_length(&self) -> f64 {
        1.0 / self.r_scale()
    }

    /// `H(r, xi) = -(omega0^2 R^2 xi^2 / 4 pi c^2 d1 d2) jinc(r xi)`.
    pub fn amplitude(&self, r: f64, xi: f64) -> f64 {
        let c = SPEED_OF_LIGHT;
        -(self.omega0 * self.radius * xi).powi(2) / (4.0 * PI * c * c * self.d1 * self.d2) * jinc_unchecked(r * xi)
    }
}

/// Source-to-image impulse response `H(r, omega / omega0) e^{i phi}` with
/// `phi = omega (d1 + d2 + |rho|^2 / 2 d2 + |rho_src|^2 / 2 d1) / c`.
pub fn lens_psf(geom: &LensGeometry, rho: Vec2, rho_src: Vec2, omega: f64) -> Result<Complex64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!("lens_psf needs a positive frequency, got {omega}")));
    }
    if rho.iter().chain(&rho_src).any(|v| !v.is_finite()) {
        return Err(Error::Domain("lens_psf position is not finite".into()));
    }
    let xi = omega / geom.omega0;
    let amp = geom.amplitude(geom.r(rho, rho_src), xi);
    let c = SPEED_OF_LIGHT;
    let path = phase_mod(omega * (geom.d1 + geom.d2) / c);
    let parabolic = omega * (crate::norm2(rho) / (2.0 * geom.d2) + crate::norm2(rho_src) / (2.0 * geom.d1)) / c;
    Ok(Complex64::from_polar(amp, path + parabolic))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom() -> LensGeometry {
        LensGeometry::new(5e-3, 0.1, 0.3, None, 2.35e15).unwrap()
    }

    #[test]
    fn lens_law_and_derived_image_distance() {
        let g = geom();
        assert!(((1.0 / g.d1 + 1.0 / g.d2) * g.focal_length - 1.0).abs() < 1e-14);
        assert!(LensGeometry::new(5e-3, 0.1, 0.3, Some(0.16), 2.35e15).is_err());
        assert!(LensGeometry::new(-5e-3, 0.1, 0.3, None, 2.35e15).is_err());
    }

    #[test]
    fn peak_at_the_geometric_image() {
        let g = geom();
        let src = [1e-4, -2e-4];
        let h = lens_psf(&g, g.image_point(src), src, g.omega0).unwrap();
        let c = SPEED_OF_LIGHT;
        let want = (g.omega0 * g.radius).powi(2) / (4.0 * PI * c * c * g.d1 * g.d2);
        assert!((h.norm() - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn non_positive_frequency_is_rejected() {
        assert!(lens_psf(&geom(), [0.0, 0.0], [0.0, 0.0], 0.0).is_err());
    }
}
