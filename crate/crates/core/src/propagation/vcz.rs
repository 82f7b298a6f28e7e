//! Far-field (van Cittert-Zernike) forms of the propagated spectra.

use super::fresnel::phase_mod;
use crate::source::{MaskVariant, Regime, SourceModel};
use crate::validity::{Severity, ValidityCheck};
use crate::{Error, Result, Vec2, SPEED_OF_LIGHT};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Far-field ratios `omega0 a0 rho0 / 2cL` and `omega0 a0^2 / 2cL`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarFieldCheck {
    pub condition_n: f64,
    pub condition_p: f64,
    pub threshold: f64,
}

impl FarFieldCheck {
    pub fn phase_insensitive(&self) -> ValidityCheck {
        ValidityCheck::at_most("far_field_phase_insensitive", self.condition_n, self.threshold)
    }

    pub fn phase_sensitive(&self) -> ValidityCheck {
        ValidityCheck::at_most("far_field_phase_sensitive", self.condition_p, self.threshold)
    }
}

/// Far-field ratios for `model` at distance `l`, with the default 0.1
/// threshold.
pub fn far_field_check(model: &SourceModel, l: f64) -> FarFieldCheck {
    let a0 = model.mask().radius();
    let rho0 = model.spatial_n().coherence_radius();
    let k = model.omega0() / (2.0 * SPEED_OF_LIGHT * l);
    FarFieldCheck { condition_n: k * a0 * rho0, condition_p: k * a0 * a0, threshold: 0.1 }
}

/// Far-field evaluator with a configurable validity policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vcz {
    pub threshold: f64,
    pub severity: Severity,
}

impl Default for Vcz {
    fn default() -> Self {
        Self { threshold: 0.1, severity: Severity::Warn }
    }
}

impl Vcz {
    pub fn check(&self, model: &SourceModel, l: f64) -> FarFieldCheck {
        FarFieldCheck { threshold: self.threshold, ..far_field_check(model, l) }
    }

    /// `(omega0^2 S_n / (2 pi c L)^2) e^{i omega0 rho_s . rho_d / cL}
    /// Tn(omega0 rho_d / cL) Gt_n(omega0 rho_s / cL)`.
    pub fn phase_insensitive(&self, model: &SourceModel, l: f64, rho1: Vec2, rho2: Vec2, omega: f64) -> Result<Complex64> {
        validate(model, l)?;
        self.check(model, l).phase_insensitive().enforce(self.severity)?;
        let (w0, c) = (model.omega0(), SPEED_OF_LIGHT);
        let (rs, rd) = sum_diff(rho1, rho2);
        let q = w0 / (c * l);
        let amp = w0 * w0 * model.temporal_n().eval(omega) / (2.0 * PI * c * l).powi(2);
        let phase = Complex64::from_polar(1.0, q * (rs[0] * rd[0] + rs[1] * rd[1]));
        let t = model.mask().transform(MaskVariant::Tn, [q * rd[0], q * rd[1]]);
        let g = model.spatial_n().transform(q * crate::norm(rs));
        Ok(amp * phase * t * g)
    }

    /// `(-omega0^2 S_p / (2 pi c L)^2) e^{i omega0 (2L^2 + |rho_s|^2 +
    /// |rho_d|^2/4) / cL} Tp(2 omega0 rho_s / cL) Gt_p(omega0 rho_d / 2cL)`.
    pub fn phase_sensitive(&self, model: &SourceModel, l: f64, rho1: Vec2, rho2: Vec2, omega: f64) -> Result<Complex64> {
        validate(model, l)?;
        self.check(model, l).phase_sensitive().enforce(self.severity)?;
        let (Some(sp), Some(gp)) = (model.temporal_p(), model.spatial_p()) else {
            return Ok(Complex64::default());
        };
        let (w0, c) = (model.omega0(), SPEED_OF_LIGHT);
        let (rs, rd) = sum_diff(rho1, rho2);
        let q = w0 / (c * l);
        let amp = -w0 * w0 * sp.eval(omega) / (2.0 * PI * c * l).powi(2);
        let ph = phase_mod(2.0 * w0 * l / c) + q * (crate::norm2(rs) + 0.25 * crate::norm2(rd));
        let t = model.mask().transform(MaskVariant::Tp, [2.0 * q * rs[0], 2.0 * q * rs[1]]);
        let g = gp.transform(0.5 * q * crate::norm(rd));
        Ok(model.ps_amplitude() * amp * Complex64::from_polar(1.0, ph) * t * g)
    }
}

fn validate(model: &SourceModel, l: f64) -> Result<()> {
    if !(l > 0.0) {
        return Err(Error::Domain(format!("propagation distance must be positive, got {l}")));
    }
    if let Regime::Coherent { .. } = model.regime() {
        return Err(Error::Config("the far-field correlation theorems need a stochastic source".into()));
    }
    Ok(())
}

fn sum_diff(a: Vec2, b: Vec2) -> (Vec2, Vec2) {
    ([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])], [b[0] - a[0], b[1] - a[1]])
}

/// [`Vcz::phase_insensitive`] with the default policy (warn only).
pub fn vcz_phase_insensitive(model: &SourceModel, l: f64, rho1: Vec2, rho2: Vec2, omega: f64) -> Result<Complex64> {
    Vcz::default().phase_insensitive(model, l, rho1, rho2, omega)
}

/// [`Vcz::phase_sensitive`] with the default policy (warn only).
pub fn vcz_phase_sensitive(model: &SourceModel, l: f64, rho1: Vec2, rho2: Vec2, omega: f64) -> Result<Complex64> {
    Vcz::default().phase_sensitive(model, l, rho1, rho2, omega)
}
