//! Seeded random parameter and state generators for property checks.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::canonical::{beta_from_m, BetaMatrix, GaussianParams};
use crate::fock::{Basis, OperatorMatrix, StateVector};
use crate::su11::Su11Params;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const LISTED_K: [f64; 6] = [0.25, 0.75, 0.5, 1.0, 1.5, 2.0];

pub fn complex_in_disk<R: Rng>(rng: &mut R, radius: f64) -> C64 {
    let r = radius * rng.gen::<f64>().sqrt();
    C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn complex_gaussian<R: Rng>(rng: &mut R) -> C64 {
    // Box-Muller, unit variance per component
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    C64::new(r * (std::f64::consts::TAU * u2).cos(), r * (std::f64::consts::TAU * u2).sin())
}

/// Normalizable (z, u, v, w, k) drawn through the characteristic roots:
/// u r^2 + w r + v = u (r - r1)(r - r2) with |r_i| <= `max_root`.
pub fn normalizable_params<R: Rng>(rng: &mut R, max_root: f64) -> Su11Params {
    let k = LISTED_K[rng.gen_range(0..LISTED_K.len())];
    let u = C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
    let r1 = complex_in_disk(rng, max_root);
    let r2 = complex_in_disk(rng, max_root);
    let z = complex_in_disk(rng, 3.0);
    Su11Params { z, u, v: u * r1 * r2, w: -u * (r1 + r2), k }
}

/// w = 0 parameters with |v| <= ratio |u|.
pub fn k1k2_params<R: Rng>(rng: &mut R, ratio: f64, k: f64) -> Su11Params {
    let u = C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
    let v = u.norm() * complex_in_disk(rng, ratio);
    Su11Params { z: complex_in_disk(rng, 3.0), u, v, w: C64::new(0.0, 0.0), k }
}

/// Random normalized vector on a basis.
pub fn random_state<R: Rng>(rng: &mut R, basis: Basis) -> StateVector {
    let amps = (0..basis.dim()).map(|_| complex_gaussian(rng)).collect();
    StateVector::normalized(basis, amps).expect("nonzero random vector")
}

/// Random Hermitian operator with Gaussian entries.
pub fn random_hermitian<R: Rng>(rng: &mut R, basis: Basis) -> OperatorMatrix {
    let n = basis.dim();
    let g = DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let h = (&g + g.adjoint()) * C64::new(0.5, 0.0);
    OperatorMatrix::from_dense(basis, &h).expect("square matrix on basis")
}

/// Symmetric M with positive-definite real part.
pub fn random_gaussian<R: Rng>(rng: &mut R, n: usize) -> GaussianParams {
    let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let re = &a * a.transpose() + DMatrix::identity(n, n) * 0.3;
    let b = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-0.7..0.7));
    let im = (&b + b.transpose()) * 0.5;
    let m = DMatrix::from_fn(n, n, |i, j| C64::new(re[(i, j)], im[(i, j)]));
    let nvec = DVector::from_fn(n, |_, _| complex_in_disk(rng, 1.0));
    GaussianParams::new(m, nvec).expect("positive definite by construction")
}

/// Random unitary from QR of a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let g = DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    // fix the column phases so the distribution is Haar
    let d = DMatrix::from_fn(n, n, |i, j| if i == j { r[(i, i)] / r[(i, i)].norm() } else { C64::new(0.0, 0.0) });
    q * d
}

/// Canonical beta (commutators [A,A^dag] = 1, [A,A] = 0) mixed by a random
/// unitary so it is not the eigen-decomposition choice.
pub fn random_canonical_beta<R: Rng>(rng: &mut R, n: usize) -> BetaMatrix {
    let g = random_gaussian(rng, n);
    let b = beta_from_m(&g).expect("positive definite");
    let u = random_unitary(rng, n);
    BetaMatrix::new(&u * &b.beta1, &u * &b.beta2, &u * &b.z).expect("unitary mixing keeps B nonsingular")
}

/// beta with commuting A's but arbitrary positive [A, A^dag]:
/// beta2 = -2i beta1 M for symmetric M.
pub fn random_compatible_beta<R: Rng>(rng: &mut R, n: usize) -> BetaMatrix {
    let g = random_gaussian(rng, n);
    let beta1 = DMatrix::identity(n, n).map(|x: f64| C64::new(x, 0.0))
        + DMatrix::from_fn(n, n, |_, _| complex_in_disk(rng, 0.4));
    let beta2 = (&beta1 * &g.m) * C64::new(0.0, -2.0);
    let z = DVector::from_fn(n, |_, _| complex_in_disk(rng, 1.0));
    BetaMatrix::new(beta1, beta2, z).expect("well conditioned by construction")
}
