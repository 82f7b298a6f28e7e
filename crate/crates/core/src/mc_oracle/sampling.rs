use crate::numerics::{fftfreq, Direction, Fft2, Grid2D};
use crate::source::{Regime, SourceModel, SpatialCorrelation, TemporalSpectrum};
use crate::{Error, Result, SPEED_OF_LIGHT};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Signal and idler fields of one realization: one `grid`-sized slice per
/// baseband frequency, `signal[j][pixel]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldRealization {
    pub grid: Grid2D,
    /// Baseband frequencies `Omega_j`, symmetric about zero.
    pub omegas: Vec<f64>,
    pub omega0: f64,
    pub signal: Vec<Vec<Complex64>>,
    pub idler: Vec<Vec<Complex64>>,
    pub seed: u64,
}

/// `n` odd midpoint slices spanning the spectrum and their spacing.
/// Gaussian spectra are cut at `+/- 5 / T0`.
pub fn slice_frequencies(spectrum: &TemporalSpectrum, n: usize) -> Result<(Vec<f64>, f64)> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Config(format!("frequency slice count must be odd and >= 3, got {n}")));
    }
    let half = match spectrum {
        TemporalSpectrum::Gaussian { t0, .. } => 5.0 / t0,
        other => {
            let (a, b) = other.support();
            a.abs().max(b.abs())
        }
    };
    let d = 2.0 * half / n as f64;
    let h = (n / 2) as f64;
    Ok(((0..n).map(|j| (j as f64 - h) * d).collect(), d))
}

/// Extra spectral shaping for delta-correlated thin-lens sources: the
/// `2 pi c / omega` amplitude and the focusing phase on the idler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Shaping {
    None,
    ThinLens { d1: f64 },
}

#[derive(Debug)]
enum Noise {
    /// `sqrt(Gt(k)) / dx` per spectral bin, applied to white noise and
    /// inverse transformed.
    Filtered { filter: Vec<f64>, fft: Fft2 },
    /// Independent pixels of standard deviation `sqrt(i0) / dx`.
    White(f64),
}

/// Precomputed filters for drawing realizations of one source on one grid.
/// Only pixels where the mask is nonzero are kept.
#[derive(Debug)]
pub(crate) struct Sampler {
    pub grid: Grid2D,
    pub omegas: Vec<f64>,
    pub omega0: f64,
    /// Grid indices of the mask support.
    pub support: Vec<usize>,
    /// `sqrt(S(Omega_j) dOmega / 2 pi)` times the shaping amplitude.
    amp: Vec<f64>,
    /// `e^{i theta}`, times `(omega0 - Omega) / (omega0 + Omega)` under
    /// thin-lens shaping.
    idler_factor: Vec<Complex64>,
    noise: Noise,
    /// Mask values on the support, times the focusing phase for the idler.
    t_signal: Vec<Complex64>,
    t_idler: Vec<Complex64>,
    correlated_idler: bool,
}

fn unit_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

impl Sampler {
    pub fn new(model: &SourceModel, grid: Grid2D, n_omega: usize, shaping: Shaping) -> Result<Self> {
        let correlated_idler = match model.regime() {
            Regime::ClassicalMax => true,
            Regime::ThermalOnly => false,
            Regime::QuantumMax { .. } => {
                return Err(Error::Unsupported(
                    "classical oracle only: quantum_max correlations have no classical sampling".into(),
                ))
            }
            Regime::Coherent { .. } => {
                return Err(Error::Unsupported("the Monte-Carlo oracle samples stochastic sources only".into()))
            }
        };
        let w0 = model.omega0();
        let c = SPEED_OF_LIGHT;
        let (omegas, d_omega) = slice_frequencies(model.temporal_n(), n_omega)?;
        if let Some(o) = omegas.iter().find(|o| o.abs() >= w0) {
            return Err(Error::Config(format!("frequency slice {o:e} reaches beyond -omega0")));
        }
        let amp = omegas
            .iter()
            .map(|&o| {
                let base = (model.temporal_n().eval(o) * d_omega / (2.0 * PI)).sqrt();
                match shaping {
                    Shaping::None => base,
                    Shaping::ThinLens { .. } => base * 2.0 * PI * c / (w0 + o),
                }
            })
            .collect();
        let theta = model.options().ps_phase;
        let idler_factor = omegas
            .iter()
            .map(|&o| {
                let f = Complex64::from_polar(1.0, theta);
                match shaping {
                    Shaping::None => f,
                    Shaping::ThinLens { .. } => f * (w0 - o) / (w0 + o),
                }
            })
            .collect();
        let noise = match model.spatial_n() {
            SpatialCorrelation::DeltaIncoherent { i0 } => Noise::White(i0.sqrt() / grid.dx),
            g => {
                let k = fftfreq(grid.n, grid.dx);
                let mut filter = Vec::with_capacity(grid.len());
                for kx in &k {
                    for ky in &k {
                        filter.push(g.transform(kx.hypot(*ky)).max(0.0).sqrt() / grid.dx);
                    }
                }
                Noise::Filtered { filter, fft: Fft2::new(grid.n)? }
            }
        };
        let mask = model.mask().sample(grid);
        let support: Vec<usize> = (0..grid.len()).filter(|&i| mask[i].norm_sqr() > 0.0).collect();
        if support.is_empty() {
            return Err(Error::Sampling("the mask has no open pixels on this grid".into()));
        }
        let t_signal: Vec<Complex64> = support.iter().map(|&i| mask[i]).collect();
        let t_idler = match shaping {
            Shaping::None => t_signal.clone(),
            Shaping::ThinLens { d1 } => support
                .iter()
                .map(|&i| {
                    let focus = Complex64::from_polar(1.0, -w0 * crate::norm2(grid.point(i)) / (c * d1));
                    mask[i] * focus
                })
                .collect(),
        };
        Ok(Self { grid, omegas, omega0: w0, support, amp, idler_factor, noise, t_signal, t_idler, correlated_idler })
    }

    pub fn n_omega(&self) -> usize {
        self.omegas.len()
    }

    /// Unmasked unit-weight noise on the support.
    fn draw_noise(&self, rng: &mut ChaCha8Rng, out: &mut [Complex64], scratch: &mut [Complex64]) -> Result<()> {
        match &self.noise {
            Noise::Filtered { filter, fft } => {
                for (s, g) in scratch.iter_mut().zip(filter) {
                    *s = unit_normal(rng) * *g;
                }
                fft.process(scratch, Direction::Inverse)?;
                for (o, &i) in out.iter_mut().zip(&self.support) {
                    *o = scratch[i];
                }
            }
            Noise::White(sigma) => {
                for o in out.iter_mut() {
                    *o = unit_normal(rng) * *sigma;
                }
            }
        }
        Ok(())
    }

    /// Signal and idler on the mask support, `[slice][support pixel]`, for
    /// realization `stream` of `seed`.
    pub fn draw(&self, seed: u64, stream: u64) -> Result<(Vec<Vec<Complex64>>, Vec<Vec<Complex64>>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let na = self.support.len();
        let m = self.n_omega();
        let mut scratch = match self.noise {
            Noise::Filtered { .. } => vec![Complex64::default(); self.grid.len()],
            Noise::White(_) => Vec::new(),
        };
        let mut noise = Vec::with_capacity(m);
        for _ in 0..m {
            let mut v = vec![Complex64::default(); na];
            self.draw_noise(&mut rng, &mut v, &mut scratch)?;
            noise.push(v);
        }
        let signal = noise
            .iter()
            .zip(&self.amp)
            .map(|(v, &a)| v.iter().zip(&self.t_signal).map(|(x, t)| x * t * a).collect())
            .collect();
        let mut idler = Vec::with_capacity(m);
        for j in 0..m {
            let f = self.idler_factor[j];
            let v: Vec<Complex64> = if self.correlated_idler {
                // Slice m - 1 - j holds -Omega_j.
                let mirror = m - 1 - j;
                let a = self.amp[mirror];
                // The noise is conjugated but the mask is not, so <E_S E_I> carries
                // T^2 even for complex masks.
                noise[mirror].iter().zip(&self.t_idler).map(|(x, t)| x.conj() * t * a * f).collect()
            } else {
                let mut v = vec![Complex64::default(); na];
                self.draw_noise(&mut rng, &mut v, &mut scratch)?;
                // An independent field with the idler's own spectrum.
                let a = self.amp[j];
                v.iter().zip(&self.t_idler).map(|(x, t)| x * t * a).collect()
            };
            idler.push(v);
        }
        Ok((signal, idler))
    }

    fn scatter(&self, slices: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
        slices
            .into_iter()
            .map(|s| {
                let mut full = vec![Complex64::default(); self.grid.len()];
                for (v, &i) in s.into_iter().zip(&self.support) {
                    full[i] = v;
                }
                full
            })
            .collect()
    }

    pub fn realization(&self, seed: u64, stream: u64) -> Result<FieldRealization> {
        let (signal, idler) = self.draw(seed, stream)?;
        Ok(FieldRealization {
            grid: self.grid,
            omegas: self.omegas.clone(),
            omega0: self.omega0,
            signal: self.scatter(signal),
            idler: self.scatter(idler),
            seed,
        })
    }
}

/// One classical signal/idler realization on `grid` with `n_omega`
/// frequency slices, by filtering white noise and masking with `T`.
/// For `classical_max` the idler is `e^{i theta} conj(signal(rho, -Omega))`,
/// for `thermal_only` an independent copy.
pub fn sample_classical_pair(model: &SourceModel, grid: Grid2D, n_omega: usize, seed: u64) -> Result<FieldRealization> {
    Sampler::new(model, grid, n_omega, Shaping::None)?.realization(seed, 0)
}

impl FieldRealization {
    /// `(E_S, E_I)` at grid index `pixel` and time `t`, summed over slices
    /// with `e^{-i Omega_j t}`.
    pub fn at(&self, pixel: usize, t: f64) -> (Complex64, Complex64) {
        let mut s = Complex64::default();
        let mut i = Complex64::default();
        for (j, &o) in self.omegas.iter().enumerate() {
            let ph = Complex64::from_polar(1.0, -o * t);
            s += self.signal[j][pixel] * ph;
            i += self.idler[j][pixel] * ph;
        }
        (s, i)
    }
}
