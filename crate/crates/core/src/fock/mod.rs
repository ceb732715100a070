//! Truncated bases, sparse operators, and state vectors.

mod basis;
mod generators;
mod operator;
mod state;

pub use basis::{Basis, LadderBasis, Parity};
pub use generators::{
    build_boson_operators, build_one_mode_quadratic, build_one_mode_quadratic_full, build_su11_generators,
    build_two_boson_realization, embed_two_mode, two_boson_sector_k, BosonOperators, Su11Generators,
};
pub use operator::{combination, OperatorMatrix};
pub use state::{StateRecord, StateVector, TwoModeState};
