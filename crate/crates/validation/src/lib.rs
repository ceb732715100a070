//! End-to-end acceptance checks for `sqstates`; everything lives in
//! `tests/acceptance.rs`.
