use super::config::{load_config, ScenarioConfig, ScenarioKind, SpatialConfig, TemporalConfig, ThinLensOutput};
use crate::fourier_imaging::DiffractionImager;
use crate::mc_oracle::{estimate_photocurrent_correlation, McScenario, OpticalTrain};
use crate::numerics::jinc_unchecked;
use crate::source::{Regime, SourceModel, SourceOptions};
use crate::thinlens::{first_zero_narrowing, psf_profile, PsfKind, ThinLensImager, ThinLensOptions};
use crate::validity::{CheckStatus, Severity, ValidityCheck};
use crate::{Error, Result, Vec2};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// First zero of `jinc`.
const AIRY_ZERO: f64 = 3.831_705_970_207_512;

/// Largest `Td` over the coherence time for which the thin-lens
/// coincidence form holds.
const DETECTOR_COHERENCE_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Failed,
}

/// What a run did: the configuration it ran, every validity check with its
/// dimensionless value, derived constants and the files written.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub status: RunStatus,
    pub config: ScenarioConfig,
    pub checks: Vec<ValidityCheck>,
    pub derived: BTreeMap<String, f64>,
    pub outputs: Vec<String>,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("cannot serialize report: {e}")))
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &ValidityCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

#[derive(Deserialize)]
struct Echo {
    config: ScenarioConfig,
}

/// The configuration echoed in a `report.txt`.
pub fn config_from_report(text: &str) -> Result<ScenarioConfig> {
    let e: Echo = toml::from_str(text).map_err(|e| Error::Config(format!("not a run report: {}", e.message())))?;
    e.config.validate()?;
    Ok(e.config)
}

/// Shortest decimal that reads back to the same `f64`, switching to
/// exponent form for very small and very large magnitudes.
pub fn format_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

struct Table {
    name: String,
    header: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl Table {
    fn new(name: &str) -> Self {
        Self { name: name.into(), header: Vec::new(), columns: Vec::new() }
    }

    fn column(mut self, head: &str, values: Vec<f64>) -> Self {
        self.header.push(head.into());
        self.columns.push(values);
        self
    }

    fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        let rows = self.columns.first().map_or(0, Vec::len);
        for i in 0..rows {
            for (j, c) in self.columns.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                s.push_str(&format_f64(c[i]));
            }
            s.push('\n');
        }
        s
    }
}

/// Checks, derived numbers and tables of one scenario.
#[derive(Default)]
struct Outcome {
    checks: Vec<ValidityCheck>,
    derived: BTreeMap<String, f64>,
    tables: Vec<Table>,
}

impl Outcome {
    fn set(&mut self, key: &str, v: f64) {
        self.derived.insert(key.into(), v);
    }
}

fn xy_columns(t: Table, pts: &[Vec2]) -> Table {
    t.column("rho_x [m]", pts.iter().map(|p| p[0]).collect())
        .column("rho_y [m]", pts.iter().map(|p| p[1]).collect())
}

/// Checks that depend only on the source.
fn source_checks(cfg: &ScenarioConfig, model: &SourceModel, out: &mut Outcome) {
    if let Regime::QuantumMax { brightness } = model.regime() {
        out.checks.push(ValidityCheck::at_most("brightness", brightness, model.options().brightness_threshold));
    }
    if let SpatialConfig::Gaussian { .. } = cfg.source.spatial {
        out.checks.push(model.schell_ratio_check());
    }
    out.set("omega0_rad_per_s", model.omega0());
    out.set("mask_radius_m", model.mask().radius());
}

fn fourier(cfg: &ScenarioConfig, model: &SourceModel, out: &mut Outcome, plan_only: bool) -> Result<()> {
    let l = cfg.geometry.l.expect("validated");
    let det = cfg.detector_model()?;
    let imager = DiffractionImager::new(model, &det, l, Severity::Warn)?;
    out.checks.extend(imager.checks().iter().cloned());
    for c in imager.checks() {
        out.set(&c.name, c.value);
    }
    if plan_only {
        return Ok(());
    }
    let pts = cfg.sweep.points();
    if let Regime::Coherent { .. } = model.regime() {
        let v: Result<Vec<f64>> = pts.iter().map(|&p| imager.coherent_baseline(p)).collect();
        out.tables.push(xy_columns(Table::new("photocurrent.csv"), &pts).column("mean_photocurrent [A]", v?));
        return Ok(());
    }
    out.set("gain_k", imager.gain());
    out.set("cp", imager.cp());
    out.set("temporal_contrast", imager.temporal_contrast());
    let img = imager.image(&pts)?;
    // The same mask under coherent illumination, normalized on axis.
    let coherent = SourceModel::with_options(
        model.mask().clone(),
        model.spatial_n().clone(),
        model.temporal_n().clone(),
        Regime::Coherent { i0: 1.0 },
        model.omega0(),
        SourceOptions::default(),
    )?;
    let base = DiffractionImager::new(&coherent, &det, l, Severity::Warn)?;
    let b0 = base.coherent_baseline([0.0, 0.0])?;
    let baseline: Result<Vec<f64>> = pts.iter().map(|&p| Ok(base.coherent_baseline(p)? / b0)).collect();
    if model.mask().is_real() {
        let c = imager.contrast(None)?;
        out.set("contrast", c.c);
        out.set("contrast_spatial", c.cs);
        out.set("contrast_temporal", c.ct);
        out.set("contrast_direct", c.direct);
        out.set("contrast_region_m", c.region);
    }
    out.tables.push(
        xy_columns(Table::new("correlation.csv"), &pts)
            .column("total [A^2]", img.total)
            .column("background [A^2]", img.background)
            .column("image [A^2]", img.image)
            .column("coherent_baseline [1]", baseline?),
    );
    Ok(())
}

fn flat_ratio(cfg: &ScenarioConfig) -> Result<f64> {
    match cfg.source.temporal {
        TemporalConfig::Flat { w } => Ok(w / cfg.source.omega0),
        TemporalConfig::Gaussian { .. } => {
            Err(Error::Config("psf_profile and spots outputs need a flat temporal spectrum".into()))
        }
    }
}

fn delta_i0(cfg: &ScenarioConfig) -> f64 {
    match cfg.source.spatial {
        SpatialConfig::Delta { i0 } => i0,
        SpatialConfig::Gaussian { .. } => 1.0,
    }
}

fn thinlens(cfg: &ScenarioConfig, model: &SourceModel, out: &mut Outcome, plan_only: bool) -> Result<()> {
    let t = cfg.thinlens.as_ref().expect("validated");
    let geom = cfg.lens()?;
    out.set("lens_d2_m", geom.d2);
    out.set("r_scale_per_m", geom.r_scale());
    out.set("kappa", geom.kappa(delta_i0(cfg)));
    match t.output {
        ThinLensOutput::PsfProfile | ThinLensOutput::Spots => {
            let w = flat_ratio(cfg)?;
            out.checks.push(ValidityCheck::at_most("w_over_omega0", w, 1.0));
            out.set("w_over_omega0", w);
        }
        ThinLensOutput::Image => {
            if let Some(d) = &cfg.detector {
                let coherence = model.temporal_p().unwrap_or(model.temporal_n()).time_scale();
                let ratio = d.td / coherence;
                out.checks.push(ValidityCheck::at_most("detector_time_over_coherence_time", ratio, DETECTOR_COHERENCE_LIMIT));
            }
        }
    }
    if plan_only {
        return Ok(());
    }
    let values = cfg.sweep.values();
    match t.output {
        ThinLensOutput::PsfProfile => {
            let w = flat_ratio(cfg)?;
            let mut table = Table::new("psf_profile.csv").column("r [1]", values.clone());
            for &kind in &t.kinds {
                let p = psf_profile(&geom, kind, w, &values, delta_i0(cfg))?;
                table = table.column(&format!("g_over_kappa_{} [1]", kind.name()), p.g_over_kappa);
                if kind == PsfKind::PhaseSensitive || kind == PsfKind::Quasimono {
                    let n = first_zero_narrowing(&geom, kind, w)?;
                    out.set(&format!("first_zero_{}", kind.name()), n.first_zero);
                    out.set(&format!("narrowing_factor_{}", kind.name()), n.narrowing_factor);
                }
            }
            out.tables.push(table);
        }
        ThinLensOutput::Spots => {
            let xi: Vec<f64> = t.xi.iter().copied().filter(|x| *x > 0.0).collect();
            let mut table = Table::new("spots.csv").column("r [1]", values.clone());
            for &x in &xi {
                let col = values.iter().map(|&r| x.powi(4) * jinc_unchecked(r * x).powi(2)).collect();
                table = table.column(&format!("xi_{} [1]", format_f64(x)), col);
            }
            out.tables.push(table);
            out.tables.push(
                Table::new("spot_radii.csv")
                    .column("xi [1]", xi.clone())
                    .column("first_zero_r [1]", xi.iter().map(|x| AIRY_ZERO / x).collect())
                    .column("first_zero_source_m [m]", xi.iter().map(|x| AIRY_ZERO / x * geom.source_length()).collect()),
            );
        }
        ThinLensOutput::Image => {
            let pts = cfg.sweep.points();
            let reach = pts.iter().map(|p| crate::norm(*p)).fold(0.0, f64::max);
            let options = ThinLensOptions { max_image_radius: reach, ..Default::default() };
            let imager = ThinLensImager::new(model, &geom, options)?;
            let k = imager.image(&pts)?;
            let mut table = xy_columns(Table::new("image.csv"), &pts)
                .column("kn [W^2/m^4]", k.iter().map(|c| c.kn).collect())
                .column("kp_magnitude [W^2/m^4]", k.iter().map(|c| c.kp_magnitude).collect());
            if let Some(d) = &cfg.detector {
                let det = d.build()?;
                let c: Result<Vec<_>> = pts.iter().map(|&p| imager.coincidence(&det, p)).collect();
                let c = c?;
                table = table
                    .column("coincidence [A^2]", c.iter().map(|v| v.value).collect())
                    .column("image_term [A^2]", c.iter().map(|v| v.image_term).collect())
                    .column("background_term [A^2]", c.iter().map(|v| v.background_term).collect());
            }
            out.tables.push(table);
        }
    }
    Ok(())
}

fn montecarlo(cfg: &ScenarioConfig, model: &SourceModel, out: &mut Outcome, plan_only: bool) -> Result<()> {
    // The analytic reference supplies the same far-field checks.
    fourier_checks_only(cfg, model, out)?;
    let mc = cfg.montecarlo.expect("validated");
    let seed = cfg.seed.unwrap_or(0);
    out.set("seed", seed as f64);
    out.set("realizations", mc.realizations as f64);
    if plan_only {
        return Ok(());
    }
    let l = cfg.geometry.l.expect("validated");
    let det = cfg.detector_model()?;
    let pts = cfg.sweep.points();
    let mut sc = McScenario::new(model.clone(), OpticalTrain::FarField { l }, det, pts.clone())?.with_n_omega(mc.n_omega);
    if let Some(g) = mc.grid {
        sc = sc.with_grid(g.build()?);
    }
    let est = estimate_photocurrent_correlation(&sc, mc.realizations, seed)?;
    let imager = DiffractionImager::new(model, &det, l, Severity::Warn)?;
    let analytic: Result<Vec<f64>> = pts.iter().map(|&p| Ok(imager.correlation(p)?.total)).collect();
    let analytic = analytic?;
    let z: Vec<f64> = (0..pts.len()).map(|i| (est.mean[i] - analytic[i]) / est.std_error[i]).collect();
    let within = z.iter().filter(|z| z.abs() <= 3.0).count();
    out.set("fraction_within_3_sigma", within as f64 / pts.len() as f64);
    out.tables.push(
        xy_columns(Table::new("montecarlo.csv"), &pts)
            .column("mean [A^2]", est.mean)
            .column("std_error [A^2]", est.std_error)
            .column("n [1]", vec![est.n as f64; pts.len()])
            .column("analytic [A^2]", analytic)
            .column("z [1]", z),
    );
    Ok(())
}

fn fourier_checks_only(cfg: &ScenarioConfig, model: &SourceModel, out: &mut Outcome) -> Result<()> {
    fourier(cfg, model, out, true)
}

fn evaluate(cfg: &ScenarioConfig, plan_only: bool) -> Result<Outcome> {
    let model = cfg.source_model()?;
    let mut out = Outcome::default();
    source_checks(cfg, &model, &mut out);
    match cfg.scenario {
        ScenarioKind::Fourier => fourier(cfg, &model, &mut out, plan_only)?,
        ScenarioKind::Thinlens => thinlens(cfg, &model, &mut out, plan_only)?,
        ScenarioKind::Montecarlo => montecarlo(cfg, &model, &mut out, plan_only)?,
    }
    Ok(out)
}

fn write_report(dir: &Path, report: &RunReport) -> Result<()> {
    let mut text = String::new();
    let _ = writeln!(text, "# twophoton run report");
    text.push_str(&report.to_toml()?);
    std::fs::write(dir.join("report.txt"), text)?;
    Ok(())
}

/// Run a scenario, writing its CSVs and `report.txt` into
/// `output.directory`. Validity failures are warnings unless `strict` is
/// set; a strict failure still writes the report, then returns
/// [`Error::Validity`].
pub fn run(config: &ScenarioConfig) -> Result<RunReport> {
    let start = Instant::now();
    config.validate()?;
    let dir = PathBuf::from(&config.output.directory);
    std::fs::create_dir_all(&dir)?;
    let plan = evaluate(config, true)?;
    let failed = plan.checks.iter().find(|c| !c.passed()).cloned();
    if let (true, Some(f)) = (config.strict, failed) {
        let checks = plan
            .checks
            .into_iter()
            .map(|mut c| {
                if !c.passed() {
                    c.status = CheckStatus::Fail;
                }
                c
            })
            .collect();
        let report = RunReport {
            status: RunStatus::Failed,
            config: config.clone(),
            checks,
            derived: plan.derived,
            outputs: Vec::new(),
            wall_time_s: start.elapsed().as_secs_f64(),
        };
        write_report(&dir, &report)?;
        return Err(Error::Validity { name: f.name, value: f.value, threshold: f.threshold });
    }
    let outcome = evaluate(config, false)?;
    let mut outputs = Vec::new();
    for t in &outcome.tables {
        std::fs::write(dir.join(&t.name), t.render())?;
        outputs.push(t.name.clone());
    }
    outputs.push("report.txt".into());
    let report = RunReport {
        status: RunStatus::Ok,
        config: config.clone(),
        checks: outcome.checks,
        derived: outcome.derived,
        outputs,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    write_report(&dir, &report)?;
    Ok(report)
}

/// Load a scenario file and [`run`] it.
pub fn run_file(path: &Path) -> Result<RunReport> {
    run(&load_config(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_round_trips() {
        for x in [0.0, 1.0, -2.5, 1e-20, 6.02214076e23, 0.1 + 0.2, 1e-4, 9.99e14, 1e15, f64::MIN_POSITIVE] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_f64(1e-20), "1e-20");
        assert_eq!(format_f64(0.25), "0.25");
    }

    #[test]
    fn table_renders_header_and_rows() {
        let t = Table::new("x.csv").column("a [m]", vec![1.0, 2.0]).column("b [1]", vec![0.5, 1e-9]);
        assert_eq!(t.render(), "a [m],b [1]\n1,0.5\n2,1e-9\n");
    }
}
