use super::sampling::{Sampler, Shaping};
use crate::fourier_imaging::DetectorModel;
use crate::numerics::Grid2D;
use crate::propagation::huygens_kernel;
use crate::source::{SourceModel, SpatialCorrelation};
use crate::thinlens::{lens_psf, LensGeometry};
use crate::{Error, Result, Vec2};
use num_complex::Complex64;
use rayon::prelude::*;

/// Fewer realizations than this give meaningless standard errors.
pub const MIN_REALIZATIONS: usize = 100;

const DEFAULT_N: usize = 512;
const DEFAULT_SLICES: usize = 33;

/// What sits between the source and the two detectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpticalTrain {
    /// Free space over `l`, detectors in the far field.
    FarField { l: f64 },
    /// Thin-lens imaging; the source must be delta-correlated.
    ThinLens(LensGeometry),
}

/// A fully specified Monte-Carlo experiment. Both detectors sit at each
/// probe position in turn.
#[derive(Debug, Clone)]
pub struct McScenario {
    pub model: SourceModel,
    pub train: OpticalTrain,
    pub detector: DetectorModel,
    pub grid: Grid2D,
    pub n_omega: usize,
    pub probes: Vec<Vec2>,
}

/// `512 x 512` samples spanning four mask radii, or the mask's own grid when
/// it is sampled.
pub fn default_grid(model: &SourceModel) -> Result<Grid2D> {
    match model.mask().sampled() {
        Some(s) => Ok(s.grid()),
        None => Grid2D::new(DEFAULT_N, 4.0 * model.mask().radius() / DEFAULT_N as f64),
    }
}

impl McScenario {
    /// Default grid and 33 frequency slices.
    pub fn new(model: SourceModel, train: OpticalTrain, detector: DetectorModel, probes: Vec<Vec2>) -> Result<Self> {
        let grid = default_grid(&model)?;
        Ok(Self { model, train, detector, grid, n_omega: DEFAULT_SLICES, probes })
    }

    pub fn with_grid(mut self, grid: Grid2D) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_n_omega(mut self, n_omega: usize) -> Self {
        self.n_omega = n_omega;
        self
    }
}

/// Per-probe ensemble means with their standard errors. The per-realization
/// products are kept so that derived quantities get honest error bars.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleEstimate {
    pub rho: Vec<Vec2>,
    pub mean: Vec<f64>,
    /// Sample standard deviation over `sqrt(n)`.
    pub std_error: Vec<f64>,
    pub n: usize,
    /// `samples[r][p]`: realization `r`, probe `p`.
    pub samples: Vec<Vec<f64>>,
}

/// Mean and standard error of a sample, with deterministic summation order.
fn mean_and_error(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = pairwise_sum(x) / n;
    let dev: Vec<f64> = x.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&dev) / (n - 1.0);
    (mean, (var / n).sqrt())
}

impl EnsembleEstimate {
    fn from_samples(rho: Vec<Vec2>, samples: Vec<Vec<f64>>) -> Self {
        let n = samples.len();
        let (mean, std_error) = (0..rho.len())
            .map(|p| {
                let col: Vec<f64> = samples.iter().map(|s| s[p]).collect();
                mean_and_error(&col)
            })
            .unzip();
        Self { rho, mean, std_error, n, samples }
    }

    /// Mean and standard error of `sum_p w_p C(rho_p)`, evaluated
    /// realization by realization so that correlations between probes are
    /// accounted for.
    pub fn linear_combination(&self, weights: &[f64]) -> Result<(f64, f64)> {
        if weights.len() != self.rho.len() {
            return Err(Error::Shape(format!("{} weights for {} probes", weights.len(), self.rho.len())));
        }
        let combined: Vec<f64> =
            self.samples.iter().map(|s| s.iter().zip(weights).map(|(x, w)| x * w).sum()).collect();
        Ok(mean_and_error(&combined))
    }

    /// Estimate from the first `n` realizations only.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n < 2 || n > self.n {
            return Err(Error::Config(format!("cannot truncate {} realizations to {n}", self.n)));
        }
        Ok(Self::from_samples(self.rho.clone(), self.samples[..n].to_vec()))
    }
}

/// Sum with a fixed binary tree, so the result does not depend on how the
/// terms were produced.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 8 {
        return x.iter().sum();
    }
    let (a, b) = x.split_at(x.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Source-pixel to probe propagators, `[probe][slice][support pixel]`,
/// including the pixel area.
fn kernels(sc: &McScenario, sampler: &Sampler) -> Result<Vec<Vec<Vec<Complex64>>>> {
    let area = sc.grid.dx * sc.grid.dx;
    let pts: Vec<Vec2> = sampler.support.iter().map(|&i| sc.grid.point(i)).collect();
    sc.probes
        .par_iter()
        .map(|&p| {
            sampler
                .omegas
                .iter()
                .map(|&o| {
                    let w = sampler.omega0 + o;
                    pts.iter()
                        .map(|&a| {
                            let k = match sc.train {
                                OpticalTrain::FarField { l } => huygens_kernel([p[0] - a[0], p[1] - a[1]], l, w)?,
                                OpticalTrain::ThinLens(g) => lens_psf(&g, p, a, w)?,
                            };
                            Ok(k * area)
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn propagate(kernel: &[Vec<Complex64>], field: &[Vec<Complex64>]) -> Vec<Complex64> {
    kernel.iter().zip(field).map(|(k, f)| k.iter().zip(f).map(|(a, b)| a * b).sum()).collect()
}

/// `q eta A sum_jk conj(E_j) E_k H(Omega_j - Omega_k)`: the filtered
/// photocurrent at one instant.
fn photocurrent(e: &[Complex64], h: &[Vec<f64>], gain: f64) -> f64 {
    let mut acc = 0.0;
    for (j, ej) in e.iter().enumerate() {
        let mut row = Complex64::default();
        for (k, ek) in e.iter().enumerate() {
            row += ek * h[j][k];
        }
        acc += (ej.conj() * row).re;
    }
    gain * acc
}

/// Monte-Carlo estimate of `<i_1 i_2>` at every probe, with the detector
/// response applied as a spectral weight on the field products.
/// Realization `r` uses stream `r` of `seed`, so results do not depend on
/// the thread count.
pub fn estimate_photocurrent_correlation(sc: &McScenario, n_realizations: usize, seed: u64) -> Result<EnsembleEstimate> {
    if n_realizations < MIN_REALIZATIONS {
        return Err(Error::Config(format!(
            "{n_realizations} realizations are statistically meaningless, at least {MIN_REALIZATIONS} are required"
        )));
    }
    if sc.probes.is_empty() {
        return Err(Error::Config("no probe positions given".into()));
    }
    let shaping = match sc.train {
        OpticalTrain::FarField { .. } => Shaping::None,
        OpticalTrain::ThinLens(g) => {
            if !matches!(sc.model.spatial_n(), SpatialCorrelation::DeltaIncoherent { .. }) {
                return Err(Error::Config("the thin-lens train needs a delta_incoherent source".into()));
            }
            if (g.omega0 - sc.model.omega0()).abs() > 1e-12 * g.omega0 {
                return Err(Error::Config("lens omega0 differs from the source's".into()));
            }
            Shaping::ThinLens { d1: g.d1 }
        }
    };
    let sampler = Sampler::new(&sc.model, sc.grid, sc.n_omega, shaping)?;
    let k = kernels(sc, &sampler)?;
    let h: Vec<Vec<f64>> = sampler
        .omegas
        .iter()
        .map(|a| sampler.omegas.iter().map(|b| sc.detector.transfer(a - b)).collect())
        .collect();
    let d = sc.detector;
    let gain = d.q() * d.eta * d.area;
    let samples: Result<Vec<Vec<f64>>> = (0..n_realizations as u64)
        .into_par_iter()
        .map(|r| {
            let (s, i) = sampler.draw(seed, r)?;
            Ok(k
                .iter()
                .map(|kp| photocurrent(&propagate(kp, &s), &h, gain) * photocurrent(&propagate(kp, &i), &h, gain))
                .collect())
        })
        .collect();
    Ok(EnsembleEstimate::from_samples(sc.probes.clone(), samples?))
}
