//! Generalized squeezed and intelligent states.
//!
//! Eigenstates of `u K- + v K+ + w K3` for the su(1,1) algebra, canonical
//! multimode Gaussian eigenstates, uncertainty matrices and the Robertson
//! inequality, and a conditional-measurement generation scheme.

pub mod canonical;
pub mod error;
pub mod figures;
pub mod fock;
pub mod genscheme;
pub mod io;
pub mod moments;
pub mod sampling;
pub mod su11;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
