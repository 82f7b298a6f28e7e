//! Far-field diffraction-pattern imaging by photocurrent cross correlation.
//!
//! Two pinhole detectors sit a distance `L` from a masked stochastic source.
//! Their photocurrent correlation splits into a broad background and an
//! image term that traces `|Tp(2 omega0 rho / cL)|^2`, a diffraction pattern
//! compressed by two relative to the coherent-state baseline
//! `|Tc(omega0 rho / cL)|^2`.

mod contrast;
mod detector;
mod fringe;
mod imager;
mod temporal;

pub use contrast::{contrast, default_region_radius, disk_extrema, Contrast};
pub use detector::DetectorModel;
pub use fringe::{fringe_period, local_minima};
pub use imager::{
    coherent_baseline, mirrored_scan_image, photocurrent_correlation, CorrelationSample, DiffractionImage,
    DiffractionImager, MIN_T0_OMEGA0,
};
pub use temporal::{temporal_convolution, temporal_convolution_grid};
