//! Uncertainty matrices, the Robertson inequality, closed-form variances and
//! photon statistics.

mod closed;
mod uncertainty;

pub use closed::{
    cat_variances, closed_form_k_variances, fock_moments, mean_k3, photon_statistics, poisson_reference,
    quadrature_variances, CatVariances, FockMoments, KVariances, MeanK3, PhotonStatistics, QuadratureVariances,
};
pub use uncertainty::{
    assemble_b, condition_number, sigma_from_beta, squeezing_predicates, uncertainty_matrix, RelativeFlag,
    SqueezeVerdict, UncertaintyJson, UncertaintyReport,
};
