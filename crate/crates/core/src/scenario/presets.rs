//! Built-in scenarios reproducing the standard figures.

use super::config::*;
use crate::source::Mask;
use crate::thinlens::PsfKind;
use crate::{Error, Result, SPEED_OF_LIGHT};
use std::f64::consts::PI;

const LAMBDA0: f64 = 800e-9;
const T0: f64 = 1e-12;
const SLIT_WIDTH: f64 = 10e-6;
const SEPARATION: f64 = 60e-6;
const SLIT_LENGTH: f64 = 40e-6;

/// Name and one-line description of every preset.
pub const PRESETS: [(&str, &str); 6] = [
    ("fig1_twoslit_classical", "far-field two-slit image with a classical_max Gaussian-Schell source"),
    ("fig1_twoslit_biphoton", "far-field two-slit image with a low-brightness quantum_max source"),
    ("fig3_W025", "thin-lens PSF profiles at W/omega0 = 0.25"),
    ("fig4_W1", "thin-lens PSF profiles at W/omega0 = 1"),
    ("fig5_pointsource_spots", "monochromatic point-source spots at five relative frequencies"),
    ("mc_twoslit_validation", "Monte-Carlo two-slit correlation against the analytic result"),
];

pub fn list_presets() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

fn omega0() -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / LAMBDA0
}

fn two_slit(grid: Option<GridConfig>) -> MaskConfig {
    MaskConfig::TwoSlit { slit_width: SLIT_WIDTH, separation: SEPARATION, slit_length: SLIT_LENGTH, grid }
}

fn detector(td: f64) -> DetectorConfig {
    DetectorConfig { eta: 0.8, area: 1e-10, td }
}

fn base(scenario: ScenarioKind, source: SourceConfig, sweep: SweepConfig) -> ScenarioConfig {
    ScenarioConfig {
        scenario,
        strict: false,
        seed: None,
        source,
        geometry: GeometryConfig::default(),
        detector: None,
        sweep,
        thinlens: None,
        montecarlo: None,
        output: OutputConfig::default(),
    }
}

/// Two-slit Gaussian-Schell source at a far-field ratio of 0.01.
fn fig1(regime: RegimeName, brightness: Option<f64>) -> Result<ScenarioConfig> {
    let a0 = Mask::two_slit(SLIT_WIDTH, SEPARATION, SLIT_LENGTH)?.radius();
    let w0 = omega0();
    let l = w0 * a0 * a0 / (2.0 * SPEED_OF_LIGHT * 0.01);
    let source = SourceConfig {
        regime,
        omega0: w0,
        brightness,
        coherent_i0: None,
        ps_phase: None,
        mask: two_slit(None),
        spatial: SpatialConfig::Gaussian { rho0: a0 / 20.0, gt0: if brightness.is_some() { None } else { Some(1.0) } },
        temporal: TemporalConfig::Gaussian { t0: T0 },
    };
    let sweep = SweepConfig { axis: Axis::X, start: -0.02, stop: 0.02, samples: 401 };
    let mut c = base(ScenarioKind::Fourier, source, sweep);
    c.geometry.l = Some(l);
    c.detector = Some(detector(2.0 * T0));
    Ok(c)
}

/// On-axis point source 0.3 m in front of a 5 mm, f = 0.1 m lens, with a
/// flat spectrum of half-width `w_over_omega0 * omega0`.
fn thinlens(w_over_omega0: f64, output: ThinLensConfig, sweep: SweepConfig) -> ScenarioConfig {
    let source = SourceConfig {
        regime: RegimeName::ClassicalMax,
        omega0: omega0(),
        brightness: None,
        coherent_i0: None,
        ps_phase: None,
        mask: MaskConfig::Points { grid: GridConfig { n: 16, dx: 1e-6 }, points: vec![[0.0, 0.0]] },
        spatial: SpatialConfig::Delta { i0: 1.0 },
        temporal: TemporalConfig::Flat { w: w_over_omega0 * omega0() },
    };
    let mut c = base(ScenarioKind::Thinlens, source, sweep);
    c.geometry.lens = Some(LensConfig { radius: 5e-3, focal_length: 0.1, d1: 0.3, d2: None });
    c.thinlens = Some(output);
    c
}

fn psf_figure(w_over_omega0: f64) -> ScenarioConfig {
    let out = ThinLensConfig {
        output: ThinLensOutput::PsfProfile,
        kinds: vec![PsfKind::PhaseInsensitive, PsfKind::PhaseSensitive, PsfKind::Quasimono],
        xi: Vec::new(),
    };
    thinlens(w_over_omega0, out, SweepConfig { axis: Axis::R, start: 0.0, stop: 20.0, samples: 2001 })
}

fn spots() -> ScenarioConfig {
    let out = ThinLensConfig { output: ThinLensOutput::Spots, kinds: Vec::new(), xi: vec![0.5, 0.75, 1.0, 1.25, 1.5] };
    thinlens(0.5, out, SweepConfig { axis: Axis::R, start: 0.0, stop: 20.0, samples: 2001 })
}

/// Pixel-sampled two-slit with a delta-correlated source, 17 probes over
/// four image fringes.
fn mc_validation() -> ScenarioConfig {
    let l = 20.0;
    let grid = GridConfig { n: 64, dx: 2e-6 };
    let source = SourceConfig {
        regime: RegimeName::ClassicalMax,
        omega0: omega0(),
        brightness: None,
        coherent_i0: None,
        ps_phase: None,
        mask: two_slit(Some(grid)),
        spatial: SpatialConfig::Delta { i0: 1e20 },
        temporal: TemporalConfig::Gaussian { t0: T0 },
    };
    let period = LAMBDA0 * l / (2.0 * SEPARATION);
    let sweep = SweepConfig { axis: Axis::X, start: -2.0 * period, stop: 2.0 * period, samples: 17 };
    let mut c = base(ScenarioKind::Montecarlo, source, sweep);
    c.seed = Some(7);
    c.geometry.l = Some(l);
    c.detector = Some(detector(0.1 * T0));
    c.montecarlo = Some(MonteCarloConfig { realizations: 10_000, n_omega: 33, grid: None });
    c
}

/// The named preset, writing into `out/<name>`.
pub fn preset(name: &str) -> Result<ScenarioConfig> {
    let mut c = match name {
        "fig1_twoslit_classical" => fig1(RegimeName::ClassicalMax, None)?,
        "fig1_twoslit_biphoton" => fig1(RegimeName::QuantumMax, Some(1e-3))?,
        "fig3_W025" => psf_figure(0.25),
        "fig4_W1" => psf_figure(1.0),
        "fig5_pointsource_spots" => spots(),
        "mc_twoslit_validation" => mc_validation(),
        _ => {
            return Err(Error::Config(format!("unknown preset `{name}`; available: {}", list_presets().join(", "))))
        }
    };
    c.output.directory = format!("out/{name}");
    c.validate()?;
    Ok(c)
}
