//! Special functions, quadrature, root finding and FFT primitives.
//!
//! Everything here is pure and reentrant.

mod bessel;
mod fft;
mod interp;
mod quadrature;
mod roots;

pub use bessel::{bessel_j1, j0, j1, jinc, jinc_unchecked, JINC_SERIES_EPS};
pub use fft::{fft2_centered, fftfreq, Direction, Fft2, Grid2D};
pub use interp::MonotoneCubic;
pub use quadrature::{integrate_1d, Integral, QuadMethod, QuadratureSpec};
pub use roots::{bisect, find_first_zero, find_first_zero_within, DEFAULT_SCAN_STEP};
