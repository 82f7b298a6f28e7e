//! Declarative scenarios: a TOML file names the source, geometry, detector
//! and sweep, and [`run`] writes CSV tables plus a `report.txt` holding the
//! configuration echo, every validity check and the derived constants.

mod config;
mod presets;
mod run;

pub use config::{
    load_config, parse_config, Axis, DetectorConfig, GeometryConfig, GridConfig, LensConfig, MaskConfig,
    MonteCarloConfig, OutputConfig, RegimeName, ScenarioConfig, ScenarioKind, SourceConfig, SpatialConfig,
    SweepConfig, TemporalConfig, ThinLensConfig, ThinLensOutput,
};
pub use presets::{list_presets, preset, PRESETS};
pub use run::{config_from_report, format_f64, run, run_file, RunReport, RunStatus};
