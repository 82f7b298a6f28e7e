//! Broadband thin-lens imaging with phase-insensitive and phase-sensitive
//! illumination.
//!
//! Point-spread functions are computed in the dimensionless image radius
//! `r = (omega0 R / c d1) |d1 rho / d2 + rho'|` and returned divided by
//! `kappa = I0 omega0^2 R^4 / 4 c^2 d1^2 d2^2`, the quasimonochromatic
//! on-axis value.

mod geometry;
mod image;
mod psf;

pub use geometry::{lens_psf, LensGeometry};
pub use image::{
    biphoton_coincidence_image, image_plane_correlations, CoincidenceImage, ImagePlaneCorrelations, ThinLensImager,
    ThinLensOptions,
};
pub use psf::{
    first_zero_narrowing, psf, psf_phase_insensitive, psf_phase_sensitive, psf_profile, Narrowing, PsfKind,
    PsfProfile, FIRST_ZERO_HORIZON,
};
