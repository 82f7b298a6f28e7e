use super::psf::{psf_phase_insensitive, psf_phase_sensitive};
use super::LensGeometry;
use crate::fourier_imaging::DetectorModel;
use crate::numerics::{Grid2D, MonotoneCubic};
use crate::source::{incoherent_thinlens_spectra, Regime, SourceModel, SpatialCorrelation, TemporalSpectrum};
use crate::validity::ValidityCheck;
use crate::{Error, Result, Vec2};
use num_complex::Complex64;
use rayon::prelude::*;

/// First zero of `jinc`.
const AIRY_ZERO: f64 = 3.831_705_970_207_512;
const MAX_GRID: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThinLensOptions {
    /// Spacing of the PSF tables in `r`.
    pub table_step: f64,
    /// Largest image-plane radius that will be queried, m. Queries beyond it
    /// fall back to direct quadrature.
    pub max_image_radius: f64,
    /// Grid for sampling analytic masks; `None` picks one from the PSF main
    /// lobe.
    pub mask_grid: Option<Grid2D>,
    /// Fewest mask pixels per PSF main-lobe radius.
    pub min_samples_per_lobe: f64,
}

impl Default for ThinLensOptions {
    fn default() -> Self {
        Self { table_step: 0.01, max_image_radius: 0.0, mask_grid: None, min_samples_per_lobe: 4.0 }
    }
}

/// Image-plane autocorrelation `Kn` and the modulus of the phase-sensitive
/// cross correlation `Kp` (parabolic phase dropped).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagePlaneCorrelations {
    pub kn: f64,
    pub kp_magnitude: f64,
}

/// Photocurrent correlation at one image-plane point.
#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceImage {
    /// Reported correlation: the image term alone for `quantum_max`, the
    /// full two-term form otherwise.
    pub value: f64,
    /// `q^2 eta^2 A^2 |Kp|^2`.
    pub image_term: f64,
    /// `q^2 eta^2 A^2 Kn Kn`.
    pub background_term: f64,
    /// `background_term / image_term`.
    pub background_ratio: f64,
    pub full_form: bool,
    pub checks: Vec<ValidityCheck>,
}

/// PSF, either tabulated on a symmetric range or by direct quadrature.
#[derive(Debug, Clone)]
struct PsfTable {
    table: MonotoneCubic,
    phase_sensitive: bool,
    spectrum: TemporalSpectrum,
}

impl PsfTable {
    fn build(geom: &LensGeometry, spectrum: &TemporalSpectrum, phase_sensitive: bool, r_max: f64, h: f64) -> Result<Self> {
        let m = (r_max / h).ceil() as usize + 2;
        let vals: Result<Vec<f64>> = (0..=2 * m)
            .into_par_iter()
            .map(|i| {
                let r = (i as f64 - m as f64).abs() * h;
                if phase_sensitive {
                    psf_phase_sensitive(geom, spectrum, r)
                } else {
                    psf_phase_insensitive(geom, spectrum, r)
                }
            })
            .collect();
        let table = MonotoneCubic::uniform(-(m as f64) * h, h, vals?)?;
        Ok(Self { table, phase_sensitive, spectrum: spectrum.clone() })
    }

    fn eval(&self, geom: &LensGeometry, r: f64) -> Result<f64> {
        match self.table.eval(r) {
            Some(v) => Ok(v),
            None if self.phase_sensitive => psf_phase_sensitive(geom, &self.spectrum, r),
            None => psf_phase_insensitive(geom, &self.spectrum, r),
        }
    }
}

/// Image-plane correlation synthesis for a spatially incoherent source.
#[derive(Debug, Clone)]
pub struct ThinLensImager {
    model: SourceModel,
    geom: LensGeometry,
    /// `(position, T)` for every nonzero mask pixel.
    pixels: Vec<(Vec2, Complex64)>,
    pixel_area: f64,
    g_n: PsfTable,
    g_p: Option<PsfTable>,
    kappa_n: f64,
    kappa_p: f64,
}

fn delta_i0(g: Option<&SpatialCorrelation>) -> f64 {
    match g {
        Some(SpatialCorrelation::DeltaIncoherent { i0 }) => *i0,
        _ => 0.0,
    }
}

impl ThinLensImager {
    pub fn new(model: &SourceModel, geom: &LensGeometry, options: ThinLensOptions) -> Result<Self> {
        incoherent_thinlens_spectra(model, geom.d1)?;
        if (model.omega0() - geom.omega0).abs() > 1e-12 * geom.omega0 {
            return Err(Error::Config(format!(
                "source omega0 {:e} differs from the lens geometry's {:e}",
                model.omega0(),
                geom.omega0
            )));
        }
        let lobe = AIRY_ZERO * geom.source_length();
        let mask = model.mask();
        let grid = match (mask.sampled(), options.mask_grid) {
            (Some(s), _) => s.grid(),
            (None, Some(g)) => g,
            (None, None) => {
                let dx = lobe / (2.0 * options.min_samples_per_lobe);
                let n = (2.0 * mask.radius() / dx + 4.0).ceil().max(16.0) as usize;
                let n = n.next_power_of_two();
                if n > MAX_GRID {
                    return Err(Error::Sampling(format!(
                        "mask radius {:e} m needs a {n}^2 grid to resolve the {lobe:e} m PSF lobe",
                        mask.radius()
                    )));
                }
                Grid2D::new(n, dx)?
            }
        };
        if grid.dx * options.min_samples_per_lobe > lobe {
            return Err(Error::Sampling(format!(
                "mask pixel {:e} m under-resolves the PSF main lobe {lobe:e} m (need {} samples)",
                grid.dx, options.min_samples_per_lobe
            )));
        }
        let pixels: Vec<(Vec2, Complex64)> = match mask.sampled() {
            Some(s) => s.support().to_vec(),
            None => (0..grid.len())
                .map(|i| (grid.point(i), mask.value(grid.point(i))))
                .filter(|(_, v)| v.norm_sqr() > 0.0)
                .collect(),
        };
        let reach = options.max_image_radius * geom.d1 / geom.d2 + mask.radius() + grid.dx;
        let r_max = geom.r_scale() * reach;
        let g_n = PsfTable::build(geom, model.temporal_n(), false, r_max, options.table_step)?;
        let g_p = match model.temporal_p() {
            Some(s) => Some(PsfTable::build(geom, s, true, r_max, options.table_step)?),
            None => None,
        };
        Ok(Self {
            model: model.clone(),
            geom: *geom,
            pixels,
            pixel_area: grid.dx * grid.dx,
            g_n,
            g_p,
            kappa_n: geom.kappa(delta_i0(Some(model.spatial_n()))),
            kappa_p: geom.kappa(delta_i0(model.spatial_p())),
        })
    }

    pub fn geometry(&self) -> &LensGeometry {
        &self.geom
    }

    pub fn model(&self) -> &SourceModel {
        &self.model
    }

    /// `kappa` for the phase-insensitive and phase-sensitive PSFs.
    pub fn kappas(&self) -> (f64, f64) {
        (self.kappa_n, self.kappa_p)
    }

    /// `Kn = int |T|^2 g_n(r)` and `|Kp| = |int T^2 g_p(r)|` as pixel sums.
    pub fn correlations(&self, rho: Vec2) -> Result<ImagePlaneCorrelations> {
        let mut kn = 0.0;
        let mut kp = Complex64::default();
        for &(p, t) in &self.pixels {
            let r = self.geom.r(rho, p);
            kn += t.norm_sqr() * self.g_n.eval(&self.geom, r)?;
            if let Some(g_p) = &self.g_p {
                kp += t * t * g_p.eval(&self.geom, r)?;
            }
        }
        let a = self.pixel_area;
        Ok(ImagePlaneCorrelations { kn: self.kappa_n * a * kn, kp_magnitude: self.kappa_p * a * kp.norm() })
    }

    /// [`Self::correlations`] over many points, in parallel.
    pub fn image(&self, rhos: &[Vec2]) -> Result<Vec<ImagePlaneCorrelations>> {
        rhos.par_iter().map(|&r| self.correlations(r)).collect()
    }

    /// Photocurrent correlation `q^2 eta^2 A^2 [Kn Kn + |Kp|^2]`. For
    /// `quantum_max` only the `|Kp|^2` term is reported as the value; both
    /// terms are always returned.
    pub fn coincidence(&self, det: &DetectorModel, rho: Vec2) -> Result<CoincidenceImage> {
        let k = self.correlations(rho)?;
        let pref = (det.q() * det.eta * det.area).powi(2);
        let image_term = pref * k.kp_magnitude.powi(2);
        let background_term = pref * k.kn * k.kn;
        let biphoton = matches!(self.model.regime(), Regime::QuantumMax { .. });
        let coherence = self.model.temporal_p().unwrap_or(self.model.temporal_n()).time_scale();
        let checks = vec![ValidityCheck::at_most("detector_time_over_coherence_time", det.td / coherence, 0.1)];
        Ok(CoincidenceImage {
            value: if biphoton { image_term } else { image_term + background_term },
            image_term,
            background_term,
            background_ratio: if image_term > 0.0 { background_term / image_term } else { f64::INFINITY },
            full_form: !biphoton,
            checks,
        })
    }
}

fn options_for(rho: Vec2) -> ThinLensOptions {
    ThinLensOptions { max_image_radius: crate::norm(rho), ..Default::default() }
}

/// One-shot form of [`ThinLensImager::correlations`].
pub fn image_plane_correlations(model: &SourceModel, geom: &LensGeometry, rho: Vec2) -> Result<ImagePlaneCorrelations> {
    ThinLensImager::new(model, geom, options_for(rho))?.correlations(rho)
}

/// One-shot form of [`ThinLensImager::coincidence`].
pub fn biphoton_coincidence_image(
    model: &SourceModel,
    geom: &LensGeometry,
    det: &DetectorModel,
    rho: Vec2,
) -> Result<CoincidenceImage> {
    ThinLensImager::new(model, geom, options_for(rho))?.coincidence(det, rho)
}
