//! Monte-Carlo oracle for classical Gaussian sources.
//!
//! Signal and idler realizations are drawn per discrete frequency slice,
//! propagated, and turned into photocurrents whose products are averaged.
//! Only classical states can be sampled this way, so the quantum regime is
//! rejected.

mod estimate;
mod optics;
mod sampling;

pub use estimate::{
    default_grid, estimate_photocurrent_correlation, pairwise_sum, EnsembleEstimate, McScenario, OpticalTrain,
    MIN_REALIZATIONS,
};
pub use optics::{apply_lens, fresnel_propagate_realization};
pub use sampling::{sample_classical_pair, slice_frequencies, FieldRealization};
