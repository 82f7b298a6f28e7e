#![allow(dead_code)]

use twophoton::fourier_imaging::DetectorModel;
use twophoton::source::{Mask, Regime, SourceModel, SpatialCorrelation, TemporalSpectrum};
use twophoton::SPEED_OF_LIGHT;

pub const LAMBDA0: f64 = 800e-9;

pub fn omega0() -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / LAMBDA0
}

pub const T0: f64 = 1e-12;

/// Two 10 um slits 60 um apart, 40 um long.
pub fn two_slit() -> Mask {
    Mask::two_slit(10e-6, 60e-6, 40e-6).unwrap()
}

/// Gaussian-Schell source with `a0 / rho0 = 20` and a Gaussian spectrum.
pub fn gaussian_schell(mask: Mask, regime: Regime, gt0: f64) -> SourceModel {
    let rho0 = mask.radius() / 20.0;
    let spatial = SpatialCorrelation::gaussian_with_transform_peak(rho0, gt0).unwrap();
    SourceModel::new(mask, spatial, TemporalSpectrum::gaussian(T0).unwrap(), regime, omega0()).unwrap()
}

pub fn classical(mask: Mask) -> SourceModel {
    gaussian_schell(mask, Regime::ClassicalMax, 1.0)
}

/// Quantum source with brightness `b`.
pub fn quantum(mask: Mask, b: f64) -> SourceModel {
    let s0 = (2.0 * std::f64::consts::PI).sqrt() * T0;
    gaussian_schell(mask, Regime::QuantumMax { brightness: b }, b / s0)
}

pub fn detector(td: f64) -> DetectorModel {
    DetectorModel::new(0.8, 1e-10, td).unwrap()
}

/// Distance putting the phase-sensitive far-field ratio at 0.01.
pub fn far_distance(mask: &Mask) -> f64 {
    omega0() * mask.radius().powi(2) / (2.0 * SPEED_OF_LIGHT * 0.01)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub mod mc {
    use super::*;
    use twophoton::mc_oracle::{McScenario, OpticalTrain};
    use twophoton::numerics::Grid2D;
    use twophoton::Vec2;

    /// Far-field distance of the Monte-Carlo two-slit; the phase-sensitive
    /// far-field ratio is below 1e-3 there.
    pub const L: f64 = 20.0;

    pub fn grid() -> Grid2D {
        Grid2D::new(64, 2e-6).unwrap()
    }

    /// The analytic two-slit point-sampled on the Monte-Carlo grid.
    pub fn mask() -> Mask {
        Mask::two_slit_sampled(grid(), 10e-6, 60e-6, 40e-6).unwrap()
    }

    /// Spatially incoherent source, for which the Schell factorization of
    /// the far field is exact.
    pub fn source(regime: Regime) -> SourceModel {
        let spatial = SpatialCorrelation::delta(1e20).unwrap();
        SourceModel::new(mask(), spatial, TemporalSpectrum::gaussian(T0).unwrap(), regime, omega0()).unwrap()
    }

    /// Period of the image-term fringes, `lambda L / 2 d`.
    pub fn image_period() -> f64 {
        LAMBDA0 * L / (2.0 * 60e-6)
    }

    /// 17 probes along x covering four image-term fringes.
    pub fn probes() -> Vec<Vec2> {
        (0..17).map(|i| [(i as f64 - 8.0) * image_period() / 4.0, 0.0]).collect()
    }

    pub fn scenario(regime: Regime) -> McScenario {
        McScenario::new(source(regime), OpticalTrain::FarField { l: L }, detector(0.1 * T0), probes()).unwrap()
    }
}
