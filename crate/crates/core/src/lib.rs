//! Second-order coherence propagation and two-photon imaging with
//! Gaussian-state light.
//!
//! The crate models signal/idler field pairs whose joint state is zero-mean
//! Gaussian and therefore fully described by phase-insensitive
//! (`<E^dagger E>`) and phase-sensitive (`<E E>`) correlation spectra. It
//! provides:
//!
//! - [`numerics`]: Bessel J1/jinc, adaptive quadrature, root bracketing, FFTs.
//! - [`source`]: transmission masks, temporal and spatial spectra, and the
//!   source families (classical-max, quantum-max, thermal, coherent).
//! - [`propagation`]: Fresnel propagation of correlation spectra and the two
//!   far-field (van Cittert-Zernike) theorems.
//! - [`fourier_imaging`]: far-field diffraction-pattern imaging by photocurrent
//!   correlation and the classical/quantum contrast laws.
//! - [`thinlens`]: broadband thin-lens point-spread functions and image
//!   synthesis.
//! - [`mc_oracle`]: a Monte-Carlo oracle that samples classical fields and
//!   estimates photocurrent correlations empirically.
//! - [`scenario`]: declarative scenario files, presets and CSV/report output.

pub mod error;
pub mod fourier_imaging;
pub mod mc_oracle;
pub mod numerics;
pub mod propagation;
pub mod scenario;
pub mod source;
pub mod thinlens;
pub mod validity;

pub use error::{Error, Result};

/// Vacuum speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Elementary charge, C.
pub const ELECTRON_CHARGE: f64 = 1.602_176_634e-19;

/// A transverse position or spatial frequency, `[x, y]`.
pub type Vec2 = [f64; 2];

pub(crate) fn norm2(v: Vec2) -> f64 {
    v[0] * v[0] + v[1] * v[1]
}

pub(crate) fn norm(v: Vec2) -> f64 {
    norm2(v).sqrt()
}
