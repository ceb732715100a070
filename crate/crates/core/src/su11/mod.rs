//! Eigenstates of u K- + v K+ + w K3 in the discrete series with index k.

mod bigfloat;
mod construct;
mod params;

pub use construct::{
    closed_form_log_coefficients, coefficients_closed_form, coefficients_closed_form_branch, coefficients_recurrence,
    construct, construct_closed_form, eigenvector_by_substitution, even_odd_state, ladder_to_fock, norm_inverse_closed_form, norm_inverse_direct,
    BuildOptions, Method, Su11State,
};
pub(crate) use construct::norm_inverse_at;
pub use params::{
    derive, derive_branch, is_degenerate, is_normalizable, squeezed_cat_params, Branch, DerivedParams,
    Normalizability, Su11Params, Terminating,
};
