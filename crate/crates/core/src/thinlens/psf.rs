use super::LensGeometry;
use crate::numerics::{find_first_zero_within, integrate_1d, jinc_unchecked, QuadratureSpec, DEFAULT_SCAN_STEP};
use crate::source::TemporalSpectrum;
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::f64::consts::PI;

/// Upper end of the first-zero search in `r`.
pub const FIRST_ZERO_HORIZON: f64 = 10.0;

const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsfKind {
    PhaseInsensitive,
    PhaseSensitive,
    /// `W -> 0` limit shared by both kinds: `jinc^2(r)`.
    Quasimono,
}

impl PsfKind {
    pub fn name(&self) -> &'static str {
        match self {
            PsfKind::PhaseInsensitive => "phase_insensitive",
            PsfKind::PhaseSensitive => "phase_sensitive",
            PsfKind::Quasimono => "quasimono",
        }
    }
}

fn quad() -> QuadratureSpec {
    QuadratureSpec::with_tolerances(1e-12, 1e-15)
}

fn check_r(r: f64) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("psf radius must be finite and non-negative, got {r}")));
    }
    Ok(())
}

/// `int_lo^hi f(u) du`, split at the spectrum's breakpoints (in `u`).
fn integrate_in_u<F: Fn(f64) -> f64>(f: F, spectrum: &TemporalSpectrum, omega0: f64, lo: f64, hi: f64) -> Result<f64> {
    if lo >= hi {
        return Ok(0.0);
    }
    let mut pts: Vec<f64> = spectrum
        .breakpoints()
        .into_iter()
        .map(|o| o / omega0)
        .filter(|&u| u > lo && u < hi)
        .collect();
    pts.insert(0, lo);
    pts.push(hi);
    let spec = quad();
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += integrate_1d(&f, w[0], w[1], &spec)?.value;
    }
    Ok(total)
}

/// `g_n(r) / kappa = int_{-omega0}^inf dOmega/2pi s(Omega) xi^2 jinc^2(r xi)`
/// with `xi = 1 + Omega / omega0`.
pub fn psf_phase_insensitive(geom: &LensGeometry, spectrum: &TemporalSpectrum, r: f64) -> Result<f64> {
    check_r(r)?;
    let w0 = geom.omega0;
    let (a, b) = spectrum.support();
    let (lo, hi) = ((a / w0).max(-1.0), b / w0);
    integrate_in_u(
        |u| {
            let xi = 1.0 + u;
            let j = jinc_unchecked(r * xi);
            w0 / (2.0 * PI) * spectrum.eval(w0 * u) * xi * xi * j * j
        },
        spectrum,
        w0,
        lo,
        hi,
    )
}

/// `g_p(r) / kappa = int_{-omega0}^{omega0} dOmega/2pi s(Omega) (1 - u^2)
/// jinc(r (1 + u)) jinc(r (1 - u))` with `u = Omega / omega0`.
///
/// A flat or tabulated spectrum reaching past `+/- omega0` is a domain error;
/// the Gaussian's nominal support is clipped to `(-omega0, omega0)`.
pub fn psf_phase_sensitive(geom: &LensGeometry, spectrum: &TemporalSpectrum, r: f64) -> Result<f64> {
    check_r(r)?;
    let w0 = geom.omega0;
    let (a, b) = spectrum.support();
    if !matches!(spectrum, TemporalSpectrum::Gaussian { .. }) && (a < -w0 || b > w0) {
        return Err(Error::Domain(format!(
            "phase-sensitive spectrum support [{a:e}, {b:e}] exceeds +/- omega0 = {w0:e}"
        )));
    }
    let (lo, hi) = ((a / w0).max(-1.0), (b / w0).min(1.0));
    integrate_in_u(
        |u| {
            let s = spectrum.eval(w0 * u);
            w0 / (2.0 * PI) * s * (1.0 - u * u) * jinc_unchecked(r * (1.0 + u)) * jinc_unchecked(r * (1.0 - u))
        },
        spectrum,
        w0,
        lo,
        hi,
    )
}

/// `g / kappa` of the given kind. The spectrum is ignored for
/// [`PsfKind::Quasimono`].
pub fn psf(geom: &LensGeometry, kind: PsfKind, spectrum: &TemporalSpectrum, r: f64) -> Result<f64> {
    match kind {
        PsfKind::PhaseInsensitive => psf_phase_insensitive(geom, spectrum, r),
        PsfKind::PhaseSensitive => psf_phase_sensitive(geom, spectrum, r),
        PsfKind::Quasimono => {
            check_r(r)?;
            Ok(jinc_unchecked(r).powi(2))
        }
    }
}

/// Sampled point-spread function for a flat spectrum of half-width
/// `w_over_omega0 * omega0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsfProfile {
    pub r: Vec<f64>,
    pub g_over_kappa: Vec<f64>,
    pub kind: PsfKind,
    pub w_over_omega0: f64,
    pub kappa: f64,
}

fn flat_kind(kind: PsfKind, w_over_omega0: f64, omega0: f64) -> Result<(PsfKind, Option<TemporalSpectrum>)> {
    if !(0.0..=1.0).contains(&w_over_omega0) {
        return Err(Error::Domain(format!("W / omega0 must lie in [0, 1], got {w_over_omega0}")));
    }
    if kind == PsfKind::Quasimono || w_over_omega0 == 0.0 {
        return Ok((PsfKind::Quasimono, None));
    }
    Ok((kind, Some(TemporalSpectrum::flat(w_over_omega0 * omega0)?)))
}

/// `g / kappa` at each of `r`, with `kappa` for flux density `i0`.
pub fn psf_profile(geom: &LensGeometry, kind: PsfKind, w_over_omega0: f64, r: &[f64], i0: f64) -> Result<PsfProfile> {
    let (eff, spectrum) = flat_kind(kind, w_over_omega0, geom.omega0)?;
    let dummy = TemporalSpectrum::flat(geom.omega0)?;
    let spec = spectrum.as_ref().unwrap_or(&dummy);
    let g: Result<Vec<f64>> = r.par_iter().map(|&x| psf(geom, eff, spec, x)).collect();
    Ok(PsfProfile {
        r: r.to_vec(),
        g_over_kappa: g?,
        kind,
        w_over_omega0: if kind == PsfKind::Quasimono { 0.0 } else { w_over_omega0 },
        kappa: geom.kappa(i0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Narrowing {
    pub first_zero: f64,
    /// Quasimonochromatic first zero over this one.
    pub narrowing_factor: f64,
}

fn first_zero_of<F: Fn(f64) -> Result<f64>>(f: F) -> Result<f64> {
    let failure = RefCell::new(None);
    let root = find_first_zero_within(
        |r| {
            f(r).unwrap_or_else(|e| {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            })
        },
        0.0,
        DEFAULT_SCAN_STEP,
        ROOT_TOL,
        FIRST_ZERO_HORIZON,
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None => root,
    }
}

/// First positive zero of the flat-spectrum PSF and the factor by which it
/// is narrower than the quasimonochromatic Airy pattern. For `W = 0` the
/// zero of `jinc` (whose square is the PSF) is used.
///
/// The phase-insensitive PSF is a superposition of squares and has no sign
/// change for `W > 0`, so it yields [`Error::NotFound`].
pub fn first_zero_narrowing(geom: &LensGeometry, kind: PsfKind, w_over_omega0: f64) -> Result<Narrowing> {
    let (eff, spectrum) = flat_kind(kind, w_over_omega0, geom.omega0)?;
    let reference = first_zero_of(|r| Ok(jinc_unchecked(r)))?;
    let first_zero = match spectrum {
        None => reference,
        Some(s) => first_zero_of(|r| psf(geom, eff, &s, r))?,
    };
    Ok(Narrowing { first_zero, narrowing_factor: reference / first_zero })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom() -> LensGeometry {
        LensGeometry::new(5e-3, 0.1, 0.3, None, 2.35e15).unwrap()
    }

    #[test]
    fn peak_laws() {
        let g = geom();
        for w in [0.1, 0.25, 0.5, 1.0] {
            let s = TemporalSpectrum::flat(w * g.omega0).unwrap();
            let n = psf_phase_insensitive(&g, &s, 0.0).unwrap();
            let p = psf_phase_sensitive(&g, &s, 0.0).unwrap();
            assert!((n - (1.0 + w * w / 3.0)).abs() <= 1e-9, "{w}: {n}");
            assert!((p - (1.0 - w * w / 3.0)).abs() <= 1e-9, "{w}: {p}");
        }
    }

    #[test]
    fn wide_flat_spectrum_is_rejected_for_phase_sensitive() {
        let g = geom();
        let s = TemporalSpectrum::flat(1.5 * g.omega0).unwrap();
        assert!(matches!(psf_phase_sensitive(&g, &s, 1.0), Err(Error::Domain(_))));
        assert!(psf_phase_insensitive(&g, &s, 1.0).is_ok());
    }
}
