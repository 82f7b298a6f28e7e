//! Scenario files: TOML with one section per component. Lengths are in
//! metres, times in seconds and angular frequencies in rad/s.

use crate::fourier_imaging::DetectorModel;
use crate::numerics::Grid2D;
use crate::source::{Mask, Regime, SourceModel, SourceOptions, SpatialCorrelation, TemporalSpectrum};
use crate::thinlens::{LensGeometry, PsfKind};
use crate::{Error, Result, Vec2};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Fourier,
    Thinlens,
    Montecarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeName {
    ClassicalMax,
    QuantumMax,
    ThermalOnly,
    Coherent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub dx: f64,
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid2D> {
        Grid2D::new(self.n, self.dx)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MaskConfig {
    /// Analytic two-slit, or point-sampled onto `grid` when one is given.
    TwoSlit {
        slit_width: f64,
        separation: f64,
        slit_length: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridConfig>,
    },
    GaussianDisk { a0: f64 },
    /// Open pixels at the grid points nearest to `points`.
    Points { grid: GridConfig, points: Vec<Vec2> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpatialConfig {
    /// Gaussian `G` of radius `rho0` with transform peak `gt0`. For
    /// `quantum_max` sources `gt0` may be left out and is then derived from
    /// the brightness.
    Gaussian {
        rho0: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gt0: Option<f64>,
    },
    Delta { i0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TemporalConfig {
    Gaussian { t0: f64 },
    Flat { w: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    pub regime: RegimeName,
    pub omega0: f64,
    /// `Gt_n(0) S_n(0)`, required for `quantum_max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brightness: Option<f64>,
    /// Flux density of a `coherent` source.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coherent_i0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ps_phase: Option<f64>,
    pub mask: MaskConfig,
    pub spatial: SpatialConfig,
    pub temporal: TemporalConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LensConfig {
    pub radius: f64,
    pub focal_length: f64,
    pub d1: f64,
    /// Derived from the lens law when left out.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d2: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    /// Far-field distance for `fourier` and `montecarlo`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lens: Option<LensConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorConfig {
    pub eta: f64,
    pub area: f64,
    pub td: f64,
}

impl DetectorConfig {
    pub fn build(&self) -> Result<DetectorModel> {
        DetectorModel::new(self.eta, self.area, self.td)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Positions `(v, 0)`, m.
    X,
    /// Positions `(0, v)`, m.
    Y,
    /// Dimensionless PSF radius `r`.
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub samples: usize,
}

impl SweepConfig {
    /// `samples` evenly spaced values from `start` to `stop` inclusive.
    pub fn values(&self) -> Vec<f64> {
        let n = self.samples;
        let step = (self.stop - self.start) / (n - 1) as f64;
        (0..n).map(|i| if i + 1 == n { self.stop } else { self.start + i as f64 * step }).collect()
    }

    pub fn points(&self) -> Vec<Vec2> {
        self.values()
            .into_iter()
            .map(|v| match self.axis {
                Axis::Y => [0.0, v],
                _ => [v, 0.0],
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThinLensOutput {
    /// `g / kappa` against `r` for each of `kinds`.
    PsfProfile,
    /// Image-plane correlations of the source mask along the sweep.
    Image,
    /// Monochromatic spot profiles at the relative frequencies `xi`.
    Spots,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThinLensConfig {
    pub output: ThinLensOutput,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kinds: Vec<PsfKind>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub xi: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloConfig {
    pub realizations: usize,
    #[serde(default = "default_slices")]
    pub n_omega: usize,
    /// Defaults to the mask's grid, or 512 x 512 over four mask radii.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
}

fn default_slices() -> usize {
    33
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_directory")]
    pub directory: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
}

fn default_directory() -> String {
    "out".into()
}

fn default_formats() -> Vec<String> {
    vec!["csv".into()]
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { directory: default_directory(), formats: default_formats() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default)]
    pub strict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub source: SourceConfig,
    #[serde(default)]
    pub geometry: GeometryConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector: Option<DetectorConfig>,
    pub sweep: SweepConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thinlens: Option<ThinLensConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub montecarlo: Option<MonteCarloConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// 1-based line and column of byte `offset` in `text`.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parse and validate a scenario file's contents.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        Error::Parse { line, column, message: e.message().to_string() }
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive, got {v}")))
    }
}

impl ScenarioConfig {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("cannot serialize configuration: {e}")))
    }

    /// Structural checks that do not need the physics modules.
    pub fn validate(&self) -> Result<()> {
        let s = &self.source;
        positive("source.omega0", s.omega0)?;
        match &s.mask {
            MaskConfig::TwoSlit { slit_width, separation, slit_length, grid } => {
                positive("mask.slit_width", *slit_width)?;
                positive("mask.separation", *separation)?;
                positive("mask.slit_length", *slit_length)?;
                if let Some(g) = grid {
                    positive("mask.grid.dx", g.dx)?;
                }
            }
            MaskConfig::GaussianDisk { a0 } => positive("mask.a0", *a0)?,
            MaskConfig::Points { grid, points } => {
                positive("mask.grid.dx", grid.dx)?;
                if points.is_empty() {
                    return Err(Error::Config("mask.points is empty".into()));
                }
            }
        }
        match s.spatial {
            SpatialConfig::Gaussian { rho0, gt0 } => {
                positive("spatial.rho0", rho0)?;
                if let Some(g) = gt0 {
                    positive("spatial.gt0", g)?;
                }
            }
            SpatialConfig::Delta { i0 } => positive("spatial.i0", i0)?,
        }
        match s.temporal {
            TemporalConfig::Gaussian { t0 } => positive("temporal.t0", t0)?,
            TemporalConfig::Flat { w } => positive("temporal.w", w)?,
        }
        if let Some(d) = &self.detector {
            if !(d.eta > 0.0 && d.eta <= 1.0) {
                return Err(Error::Config(format!("detector.eta must lie in (0, 1], got {}", d.eta)));
            }
            positive("detector.area", d.area)?;
            positive("detector.td", d.td)?;
        }
        if self.sweep.samples < 2 {
            return Err(Error::Config(format!("sweep.samples must be at least 2, got {}", self.sweep.samples)));
        }
        if !(self.sweep.start.is_finite() && self.sweep.stop.is_finite()) {
            return Err(Error::Config("sweep range must be finite".into()));
        }
        if let Some(l) = self.geometry.l {
            positive("geometry.l", l)?;
        }
        if let Some(lens) = &self.geometry.lens {
            positive("lens.radius", lens.radius)?;
            positive("lens.focal_length", lens.focal_length)?;
            positive("lens.d1", lens.d1)?;
            if let Some(d2) = lens.d2 {
                positive("lens.d2", d2)?;
            }
        }
        if let Some(f) = self.output.formats.iter().find(|f| f.as_str() != "csv") {
            return Err(Error::Config(format!("unsupported output format `{f}`; only csv is available")));
        }
        match self.scenario {
            ScenarioKind::Fourier | ScenarioKind::Montecarlo => {
                if self.geometry.l.is_none() {
                    return Err(Error::Config("geometry.l is required for far-field scenarios".into()));
                }
                if self.detector.is_none() {
                    return Err(Error::Config("a [detector] section is required".into()));
                }
                if self.sweep.axis == Axis::R {
                    return Err(Error::Config("far-field sweeps run along x or y".into()));
                }
            }
            ScenarioKind::Thinlens => {
                if self.geometry.lens.is_none() {
                    return Err(Error::Config("geometry.lens is required for thinlens scenarios".into()));
                }
                let Some(t) = &self.thinlens else {
                    return Err(Error::Config("a [thinlens] section is required".into()));
                };
                let want_r = t.output != ThinLensOutput::Image;
                if want_r != (self.sweep.axis == Axis::R) {
                    return Err(Error::Config("psf_profile and spots sweeps run along r, image sweeps along x or y".into()));
                }
                if t.output == ThinLensOutput::PsfProfile && t.kinds.is_empty() {
                    return Err(Error::Config("thinlens.kinds is empty".into()));
                }
                if t.output == ThinLensOutput::Spots && t.xi.iter().all(|x| *x <= 0.0) {
                    return Err(Error::Config("thinlens.xi needs positive relative frequencies".into()));
                }
            }
        }
        if self.scenario == ScenarioKind::Montecarlo && self.montecarlo.is_none() {
            return Err(Error::Config("a [montecarlo] section is required".into()));
        }
        Ok(())
    }

    pub fn mask(&self) -> Result<Mask> {
        match &self.source.mask {
            MaskConfig::TwoSlit { slit_width, separation, slit_length, grid: None } => {
                Mask::two_slit(*slit_width, *separation, *slit_length)
            }
            MaskConfig::TwoSlit { slit_width, separation, slit_length, grid: Some(g) } => {
                Mask::two_slit_sampled(g.build()?, *slit_width, *separation, *slit_length)
            }
            MaskConfig::GaussianDisk { a0 } => Mask::gaussian_disk(*a0),
            MaskConfig::Points { grid, points } => {
                let g = grid.build()?;
                let mut v = vec![0.0; g.len()];
                let half = (g.n / 2) as f64;
                for p in points {
                    let i = (p[0] / g.dx + half).round();
                    let j = (p[1] / g.dx + half).round();
                    if !(0.0..g.n as f64).contains(&i) || !(0.0..g.n as f64).contains(&j) {
                        return Err(Error::Config(format!("mask point {p:?} lies outside the grid")));
                    }
                    v[i as usize * g.n + j as usize] = 1.0;
                }
                Mask::zero_one(g, v)
            }
        }
    }

    pub fn temporal(&self) -> Result<TemporalSpectrum> {
        match self.source.temporal {
            TemporalConfig::Gaussian { t0 } => TemporalSpectrum::gaussian(t0),
            TemporalConfig::Flat { w } => TemporalSpectrum::flat(w),
        }
    }

    pub fn source_model(&self) -> Result<SourceModel> {
        let s = &self.source;
        let temporal = self.temporal()?;
        let regime = match s.regime {
            RegimeName::ClassicalMax => Regime::ClassicalMax,
            RegimeName::ThermalOnly => Regime::ThermalOnly,
            RegimeName::QuantumMax => {
                let b = s.brightness.ok_or_else(|| Error::Config("quantum_max needs source.brightness".into()))?;
                Regime::QuantumMax { brightness: b }
            }
            RegimeName::Coherent => Regime::Coherent {
                i0: s.coherent_i0.ok_or_else(|| Error::Config("coherent needs source.coherent_i0".into()))?,
            },
        };
        let spatial = match s.spatial {
            SpatialConfig::Delta { i0 } => SpatialCorrelation::delta(i0)?,
            SpatialConfig::Gaussian { rho0, gt0 } => {
                let gt0 = match (gt0, regime) {
                    (Some(g), _) => g,
                    (None, Regime::QuantumMax { brightness }) => brightness / temporal.eval(0.0),
                    (None, _) => return Err(Error::Config("spatial.gt0 is required".into())),
                };
                SpatialCorrelation::gaussian_with_transform_peak(rho0, gt0)?
            }
        };
        let options = SourceOptions { ps_phase: s.ps_phase.unwrap_or(0.0), ..SourceOptions::default() };
        SourceModel::with_options(self.mask()?, spatial, temporal, regime, s.omega0, options)
    }

    pub fn lens(&self) -> Result<LensGeometry> {
        let l = self.geometry.lens.ok_or_else(|| Error::Config("geometry.lens is missing".into()))?;
        LensGeometry::new(l.radius, l.focal_length, l.d1, l.d2, self.source.omega0)
    }

    pub fn detector_model(&self) -> Result<DetectorModel> {
        self.detector.ok_or_else(|| Error::Config("a [detector] section is required".into()))?.build()
    }
}
