use crate::{Error, Result, ELECTRON_CHARGE};
use std::f64::consts::PI;

/// Pinhole photodetector with a Gaussian, unit-area current pulse
/// `h_B(t) = exp(-8 t^2 / Td^2) sqrt(8 / pi Td^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorModel {
    pub eta: f64,
    /// Photosensitive area, m^2.
    pub area: f64,
    /// e^-2 duration of the impulse response, s.
    pub td: f64,
}

impl DetectorModel {
    pub fn new(eta: f64, area: f64, td: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::Domain(format!("quantum efficiency must lie in (0, 1], got {eta}")));
        }
        for (name, v) in [("area", area), ("td", td)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("detector {name} must be positive, got {v}")));
            }
        }
        Ok(Self { eta, area, td })
    }

    /// Electron charge, C.
    pub fn q(&self) -> f64 {
        ELECTRON_CHARGE
    }

    pub fn impulse_response(&self, t: f64) -> f64 {
        (-8.0 * t * t / (self.td * self.td)).exp() * (8.0 / (PI * self.td * self.td)).sqrt()
    }

    /// Transfer function `int h_B(t) e^{i nu t} dt = exp(-nu^2 Td^2 / 32)`.
    pub fn transfer(&self, nu: f64) -> f64 {
        (-nu * nu * self.td * self.td / 32.0).exp()
    }
}
