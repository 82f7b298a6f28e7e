//! Free-space transport of correlation spectra and the far-field theorems.

mod fresnel;
mod spectrum;
mod vcz;

pub use fresnel::{fresnel_propagate, huygens_kernel, FresnelMethod, FresnelPropagator};
pub(crate) use fresnel::phase_mod;
pub use spectrum::{
    propagate_spectrum, CorrelationKind, CorrelationSpectrum, GriddedSlice, Representation, SchellFactors,
};
pub use vcz::{far_field_check, vcz_phase_insensitive, vcz_phase_sensitive, FarFieldCheck, Vcz};
