use super::{temporal_convolution, DetectorModel};
use crate::propagation::far_field_check;
use crate::source::{MaskVariant, Regime, SourceModel, TemporalSpectrum};
use crate::validity::{Severity, ValidityCheck};
use crate::{Error, Result, Vec2, SPEED_OF_LIGHT};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Smallest `T0 omega0` for which the `-omega0` cut-off of Gaussian spectra is
/// immaterial.
pub const MIN_T0_OMEGA0: f64 = 10.0;

/// One sample of the photocurrent cross correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationSample {
    pub total: f64,
    pub background: f64,
    pub image: f64,
}

/// Photocurrent correlation over a set of far-field positions.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffractionImage {
    pub rho: Vec<Vec2>,
    pub total: Vec<f64>,
    pub background: Vec<f64>,
    pub image: Vec<f64>,
    pub l: f64,
    pub omega0: f64,
    pub regime: &'static str,
    /// Set when the image term vanishes identically, with the reason.
    pub note: Option<String>,
}

/// Far-field diffraction-pattern imager (both detectors at distance `l`).
#[derive(Debug, Clone)]
pub struct DiffractionImager {
    model: SourceModel,
    det: DetectorModel,
    l: f64,
    /// `omega0^2 q eta A / (4 pi^2 c^2 L^2)`.
    k: f64,
    /// `int_{-omega0} S_n dOmega / 2 pi`.
    flux_integral: f64,
    /// Temporal factor for `S_p` (zero when there is none).
    conv_p: f64,
    /// Temporal factor for `S_n`, used by the mirrored-scan variant.
    conv_n: f64,
    checks: Vec<ValidityCheck>,
}

impl DiffractionImager {
    /// Validity failures are recorded in [`Self::checks`] under
    /// [`Severity::Warn`] and returned as errors under [`Severity::Error`].
    pub fn new(model: &SourceModel, det: &DetectorModel, l: f64, severity: Severity) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::Domain(format!("propagation distance must be positive, got {l}")));
        }
        let w0 = model.omega0();
        let c = SPEED_OF_LIGHT;
        let k = w0 * w0 * det.q() * det.eta * det.area / (4.0 * PI * PI * c * c * l * l);
        let ff = far_field_check(model, l);
        let mut checks = vec![ff.phase_sensitive().enforce(severity)?];
        if !matches!(model.regime(), Regime::Coherent { .. }) {
            checks.push(ff.phase_insensitive().enforce(severity)?);
        }
        if let TemporalSpectrum::Gaussian { t0, .. } = model.temporal_n() {
            checks.push(ValidityCheck::at_least("t0_omega0", t0 * w0, MIN_T0_OMEGA0).enforce(severity)?);
        }
        let (flux_integral, conv_n, conv_p) = match model.regime() {
            Regime::Coherent { .. } => (0.0, 0.0, 0.0),
            _ => {
                let sn = model.temporal_n();
                let flux = sn.partial_area(-w0, f64::INFINITY)?;
                let conv_n = temporal_convolution(sn, -w0, f64::INFINITY, det)?;
                let conv_p = match model.temporal_p() {
                    Some(sp) => temporal_convolution(sp, -w0, w0, det)?,
                    None => 0.0,
                };
                (flux, conv_n, conv_p)
            }
        };
        Ok(Self { model: model.clone(), det: *det, l, k, flux_integral, conv_n, conv_p, checks })
    }

    pub fn model(&self) -> &SourceModel {
        &self.model
    }

    pub fn detector(&self) -> &DetectorModel {
        &self.det
    }

    pub fn distance(&self) -> f64 {
        self.l
    }

    pub fn checks(&self) -> &[ValidityCheck] {
        &self.checks
    }

    /// `omega0 / cL`: far-field position to spatial frequency.
    pub fn k_per_rho(&self) -> f64 {
        self.model.omega0() / (SPEED_OF_LIGHT * self.l)
    }

    /// `omega0^2 q eta A / (4 pi^2 c^2 L^2)`.
    pub fn gain(&self) -> f64 {
        self.k
    }

    /// `C_p` with the unit-area detector response.
    pub fn cp(&self) -> f64 {
        self.k * self.k * self.conv_p
    }

    /// Temporal contrast factor `C_t = conv_p Gt_p(0)^2 / (Gt_n(0) int S_n)^2`.
    pub fn temporal_contrast(&self) -> f64 {
        let gp0 = self.model.spatial_p().map_or(0.0, |g| g.transform(0.0));
        let gn0 = self.model.spatial_n().transform(0.0);
        self.conv_p * gp0 * gp0 / (gn0 * self.flux_integral).powi(2)
    }

    fn stochastic(&self) -> Result<()> {
        if let Regime::Coherent { .. } = self.model.regime() {
            return Err(Error::Config("photocurrent correlation needs a stochastic source; use coherent_baseline".into()));
        }
        Ok(())
    }

    pub fn background(&self, rho: Vec2) -> Result<f64> {
        self.stochastic()?;
        let q = self.k_per_rho();
        let t0 = self.model.mask().transform(MaskVariant::Tn, [0.0, 0.0]).re;
        let g = self.model.spatial_n().transform(q * crate::norm(rho));
        Ok((self.k * t0 * g * self.flux_integral).powi(2))
    }

    /// `C_p |Gt_p(0) Tp(2 omega0 rho / cL)|^2`, zero without phase-sensitive
    /// correlation.
    pub fn image_term(&self, rho: Vec2) -> Result<f64> {
        self.stochastic()?;
        let Some(gp) = self.model.spatial_p() else {
            return Ok(0.0);
        };
        let q = 2.0 * self.k_per_rho();
        let t = self.model.mask().transform(MaskVariant::Tp, [q * rho[0], q * rho[1]]);
        Ok(self.cp() * (gp.transform(0.0) * t.norm()).powi(2))
    }

    pub fn correlation(&self, rho: Vec2) -> Result<CorrelationSample> {
        let background = self.background(rho)?;
        let image = self.image_term(rho)?;
        Ok(CorrelationSample { total: background + image, background, image })
    }

    /// Why the image term vanishes, if it does.
    pub fn image_note(&self) -> Option<String> {
        match self.model.regime() {
            Regime::ThermalOnly => Some("thermal_only source: no phase-sensitive correlation, image term is zero".into()),
            _ => None,
        }
    }

    pub fn image(&self, rhos: &[Vec2]) -> Result<DiffractionImage> {
        let samples: Result<Vec<CorrelationSample>> = rhos.par_iter().map(|&r| self.correlation(r)).collect();
        let samples = samples?;
        Ok(DiffractionImage {
            rho: rhos.to_vec(),
            total: samples.iter().map(|s| s.total).collect(),
            background: samples.iter().map(|s| s.background).collect(),
            image: samples.iter().map(|s| s.image).collect(),
            l: self.l,
            omega0: self.model.omega0(),
            regime: self.model.regime().name(),
            note: self.image_note(),
        })
    }

    /// Mean photocurrent `K I0 |Tc(omega0 rho / cL)|^2` for a coherent source.
    pub fn coherent_baseline(&self, rho: Vec2) -> Result<f64> {
        let Regime::Coherent { i0 } = self.model.regime() else {
            return Err(Error::Config(format!(
                "coherent baseline needs a coherent source, got {}",
                self.model.regime().name()
            )));
        };
        let q = self.k_per_rho();
        let t = self.model.mask().transform(MaskVariant::Tc, [q * rho[0], q * rho[1]]);
        Ok(self.k * i0 * t.norm_sqr())
    }

    /// Correlation when one detector sits at `rho` and the other at `-rho`,
    /// both viewing the same phase-insensitive field. The image term is
    /// `K^2 conv_n |Gt_n(0) Tn(2 omega0 rho / cL)|^2`.
    pub fn mirrored_scan(&self, rho: Vec2) -> Result<CorrelationSample> {
        let background = self.background(rho)?;
        let q = 2.0 * self.k_per_rho();
        let t = self.model.mask().transform(MaskVariant::Tn, [q * rho[0], q * rho[1]]);
        let g0 = self.model.spatial_n().transform(0.0);
        let image = self.k * self.k * self.conv_n * (g0 * t.norm()).powi(2);
        Ok(CorrelationSample { total: background + image, background, image })
    }
}

/// One-shot form of [`DiffractionImager::correlation`] with warnings only.
pub fn photocurrent_correlation(model: &SourceModel, det: &DetectorModel, l: f64, rho: Vec2) -> Result<CorrelationSample> {
    DiffractionImager::new(model, det, l, Severity::Warn)?.correlation(rho)
}

/// One-shot form of [`DiffractionImager::coherent_baseline`].
pub fn coherent_baseline(model: &SourceModel, det: &DetectorModel, l: f64, rho: Vec2) -> Result<f64> {
    DiffractionImager::new(model, det, l, Severity::Warn)?.coherent_baseline(rho)
}

/// Image term of [`DiffractionImager::mirrored_scan`].
pub fn mirrored_scan_image(model: &SourceModel, det: &DetectorModel, l: f64, rho: Vec2) -> Result<f64> {
    Ok(DiffractionImager::new(model, det, l, Severity::Warn)?.mirrored_scan(rho)?.image)
}
