//! Source models and their source-plane correlation spectra.

use super::{Mask, SpatialCorrelation, TemporalSpectrum};
use crate::propagation::{CorrelationKind, CorrelationSpectrum, SchellFactors};
use crate::validity::ValidityCheck;
use crate::{Error, Result, Vec2, SPEED_OF_LIGHT};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Strength of the signal/idler phase-sensitive cross correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// `|S_p Gt_p| = S_n Gt_n`, the largest value a classical state allows.
    ClassicalMax,
    /// `|S_p Gt_p| = sqrt(S_n Gt_n)` in the low-brightness limit.
    /// `brightness = Gt_n(0) S_n(0)`.
    QuantumMax { brightness: f64 },
    /// No phase-sensitive correlation.
    ThermalOnly,
    /// Deterministic field `sqrt(i0) T(rho)`.
    Coherent { i0: f64 },
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::ClassicalMax => "classical_max",
            Regime::QuantumMax { .. } => "quantum_max",
            Regime::ThermalOnly => "thermal_only",
            Regime::Coherent { .. } => "coherent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceOptions {
    /// Global phase of the phase-sensitive spectrum.
    pub ps_phase: f64,
    /// Largest brightness accepted for [`Regime::QuantumMax`].
    pub brightness_threshold: f64,
    /// Smallest `a0 / rho0` before the Schell approximation is flagged.
    pub min_a0_over_rho0: f64,
}

impl Default for SourceOptions {
    fn default() -> Self {
        Self { ps_phase: 0.0, brightness_threshold: 1e-2, min_a0_over_rho0: 10.0 }
    }
}

/// Mask, spectra and regime of one source. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceModel {
    mask: Mask,
    spatial_n: SpatialCorrelation,
    spatial_p: Option<SpatialCorrelation>,
    temporal_n: TemporalSpectrum,
    temporal_p: Option<TemporalSpectrum>,
    regime: Regime,
    omega0: f64,
    options: SourceOptions,
}

impl SourceModel {
    pub fn new(
        mask: Mask,
        spatial: SpatialCorrelation,
        temporal: TemporalSpectrum,
        regime: Regime,
        omega0: f64,
    ) -> Result<Self> {
        Self::with_options(mask, spatial, temporal, regime, omega0, SourceOptions::default())
    }

    pub fn with_options(
        mask: Mask,
        spatial_n: SpatialCorrelation,
        temporal_n: TemporalSpectrum,
        regime: Regime,
        omega0: f64,
        options: SourceOptions,
    ) -> Result<Self> {
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(Error::Domain(format!("omega0 must be positive, got {omega0}")));
        }
        let (spatial_p, temporal_p) = match regime {
            Regime::ClassicalMax => (Some(spatial_n.clone()), Some(temporal_n.clone())),
            Regime::QuantumMax { brightness } => {
                let b = spatial_n.transform(0.0) * temporal_n.eval(0.0);
                if !(brightness > 0.0) || (b - brightness).abs() > 1e-9 * brightness {
                    return Err(Error::Config(format!(
                        "quantum_max brightness {brightness:e} disagrees with Gt_n(0) S_n(0) = {b:e}"
                    )));
                }
                if brightness > options.brightness_threshold {
                    return Err(Error::Validity {
                        name: "brightness".into(),
                        value: brightness,
                        threshold: options.brightness_threshold,
                    });
                }
                (Some(spatial_n.sqrt_transform()), Some(temporal_n.sqrt()))
            }
            Regime::ThermalOnly => (None, None),
            Regime::Coherent { i0 } => {
                if !(i0 > 0.0) || !i0.is_finite() {
                    return Err(Error::Domain(format!("coherent flux density must be positive, got {i0}")));
                }
                (None, None)
            }
        };
        Ok(Self { mask, spatial_n, spatial_p, temporal_n, temporal_p, regime, omega0, options })
    }

    pub fn mask(&self) -> &Mask {
        &self.mask
    }
    pub fn spatial_n(&self) -> &SpatialCorrelation {
        &self.spatial_n
    }
    /// `None` when the regime has no phase-sensitive correlation.
    pub fn spatial_p(&self) -> Option<&SpatialCorrelation> {
        self.spatial_p.as_ref()
    }
    pub fn temporal_n(&self) -> &TemporalSpectrum {
        &self.temporal_n
    }
    pub fn temporal_p(&self) -> Option<&TemporalSpectrum> {
        self.temporal_p.as_ref()
    }
    pub fn regime(&self) -> Regime {
        self.regime
    }
    pub fn omega0(&self) -> f64 {
        self.omega0
    }
    pub fn options(&self) -> SourceOptions {
        self.options
    }

    /// `e^{i theta}` for regimes with a phase-sensitive correlation, else 0.
    pub fn ps_amplitude(&self) -> Complex64 {
        if self.spatial_p.is_some() {
            Complex64::from_polar(1.0, self.options.ps_phase)
        } else {
            Complex64::default()
        }
    }

    /// `Gt_n(0) S_n(0)`.
    pub fn brightness(&self) -> f64 {
        self.spatial_n.transform(0.0) * self.temporal_n.eval(0.0)
    }

    /// `a0 / rho0`, the Schell-model validity ratio.
    pub fn schell_ratio_check(&self) -> ValidityCheck {
        let rho0 = self.spatial_n.coherence_radius();
        let ratio = if rho0 > 0.0 { self.mask.radius() / rho0 } else { f64::INFINITY };
        ValidityCheck::at_least("a0_over_rho0", ratio, self.options.min_a0_over_rho0)
    }
}

/// Source-plane spectra together with any validity flags raised while
/// building them.
#[derive(Debug, Clone)]
pub struct SchellSpectra {
    pub s0_n: CorrelationSpectrum,
    pub s0_p: CorrelationSpectrum,
    pub warnings: Vec<ValidityCheck>,
}

/// `S0_n = |T(rho_s)|^2 G_n(rho_d) S_n(Omega)` and
/// `S0_p = e^{i theta} T(rho_s)^2 G_p(rho_d) S_p(Omega)`.
pub fn build_schell_spectra(model: &SourceModel) -> Result<SchellSpectra> {
    if let Regime::Coherent { .. } = model.regime {
        return Err(Error::Config("a coherent source has no stochastic correlation spectra".into()));
    }
    if let SpatialCorrelation::DeltaIncoherent { .. } = model.spatial_n {
        return Err(Error::Config(
            "delta-correlated sources use incoherent_thinlens_spectra, not the Schell form".into(),
        ));
    }
    let check = model.schell_ratio_check();
    let warnings = if check.passed() { vec![] } else { vec![check] };
    let s0_n = CorrelationSpectrum::schell(
        CorrelationKind::PhaseInsensitive,
        SchellFactors {
            mask: model.mask.clone(),
            spatial: model.spatial_n.clone(),
            temporal: model.temporal_n.clone(),
            amplitude: Complex64::new(1.0, 0.0),
        },
        model.omega0,
    );
    let s0_p = CorrelationSpectrum::schell(
        CorrelationKind::PhaseSensitive,
        SchellFactors {
            mask: model.mask.clone(),
            // Thermal light keeps the shape but has zero amplitude.
            spatial: model.spatial_p.clone().unwrap_or_else(|| model.spatial_n.clone()),
            temporal: model.temporal_p.clone().unwrap_or_else(|| model.temporal_n.clone()),
            amplitude: model.ps_amplitude(),
        },
        model.omega0,
    );
    Ok(SchellSpectra { s0_n, s0_p, warnings })
}

/// Delta-correlated source spectra for the thin-lens scenario, with the
/// focusing phase that cancels the lens's source-plane parabola.
#[derive(Debug, Clone)]
pub struct IncoherentSpectra {
    model: SourceModel,
    d1: f64,
    i0_n: f64,
    i0_p: f64,
}

/// Thin-lens source spectra. `d1` is the object distance that sets the
/// focusing phase `e^{-i omega0 |rho1|^2 / c d1}` on `S0_p`.
pub fn incoherent_thinlens_spectra(model: &SourceModel, d1: f64) -> Result<IncoherentSpectra> {
    let i0_n = match model.spatial_n {
        SpatialCorrelation::DeltaIncoherent { i0 } => i0,
        _ => return Err(Error::Config("thin-lens spectra need a delta_incoherent spatial correlation".into())),
    };
    if let Regime::Coherent { .. } = model.regime {
        return Err(Error::Config("a coherent source has no stochastic correlation spectra".into()));
    }
    if !(d1 > 0.0) {
        return Err(Error::Domain(format!("d1 must be positive, got {d1}")));
    }
    let i0_p = match model.spatial_p {
        Some(SpatialCorrelation::DeltaIncoherent { i0 }) => i0,
        _ => 0.0,
    };
    Ok(IncoherentSpectra { model: model.clone(), d1, i0_n, i0_p })
}

impl IncoherentSpectra {
    /// `[2 pi c / (omega0 + Omega)]^2`.
    pub fn prefactor_n(&self, omega: f64) -> f64 {
        (2.0 * PI * SPEED_OF_LIGHT / (self.model.omega0 + omega)).powi(2)
    }

    /// `(2 pi c)^2 / (omega0^2 - Omega^2)`.
    pub fn prefactor_p(&self, omega: f64) -> f64 {
        let w0 = self.model.omega0;
        (2.0 * PI * SPEED_OF_LIGHT).powi(2) / (w0 * w0 - omega * omega)
    }

    /// Coefficient of `delta(rho2 - rho1)` in `S0_n` at `rho1`.
    pub fn weight_n(&self, rho: Vec2, omega: f64) -> f64 {
        self.model.mask.value(rho).norm_sqr() * self.prefactor_n(omega) * self.i0_n * self.model.temporal_n.eval(omega)
    }

    /// Coefficient of `delta(rho2 - rho1)` in `S0_p` at `rho1`, zero outside
    /// `|Omega| < omega0`.
    pub fn weight_p(&self, rho: Vec2, omega: f64) -> Complex64 {
        let Some(s) = self.model.temporal_p.as_ref() else {
            return Complex64::default();
        };
        if omega.abs() >= self.model.omega0 {
            return Complex64::default();
        }
        let t = self.model.mask.value(rho);
        let focus = Complex64::from_polar(1.0, -self.model.omega0 * crate::norm2(rho) / (SPEED_OF_LIGHT * self.d1));
        self.model.ps_amplitude() * focus * t * t * self.prefactor_p(omega) * self.i0_p * s.eval(omega)
    }

    /// `S0_n(rho1, rho2, Omega)` as the coefficient of the delta function:
    /// zero off the diagonal.
    pub fn eval_n(&self, rho1: Vec2, rho2: Vec2, omega: f64) -> f64 {
        if rho1 == rho2 {
            self.weight_n(rho1, omega)
        } else {
            0.0
        }
    }

    /// As [`Self::eval_n`] for `S0_p`.
    pub fn eval_p(&self, rho1: Vec2, rho2: Vec2, omega: f64) -> Complex64 {
        if rho1 == rho2 {
            self.weight_p(rho1, omega)
        } else {
            Complex64::default()
        }
    }
}
