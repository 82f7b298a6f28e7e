//! Source-plane descriptions: masks, spectra, correlation regimes.

mod mask;
mod model;
mod spectra;

pub use mask::{mask_transform, Mask, MaskVariant, SampledMask};
pub use model::{
    build_schell_spectra, incoherent_thinlens_spectra, IncoherentSpectra, Regime, SchellSpectra, SourceModel,
    SourceOptions,
};
pub use spectra::{SpatialCorrelation, TemporalSpectrum};
