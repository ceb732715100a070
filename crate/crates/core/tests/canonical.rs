use nalgebra::{DMatrix, DVector};
use sqstates::canonical::*;
use sqstates::fock::{Basis, Parity, StateVector};
use sqstates::sampling;
use sqstates::su11::{even_odd_state, squeezed_cat_params, BuildOptions};
use sqstates::verify::gaussian_fock_oracle;
use sqstates::{Error, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn r(x: f64) -> C64 {
    c(x, 0.0)
}

fn scalar(x: C64) -> DMatrix<C64> {
    DMatrix::from_element(1, 1, x)
}

fn zeros(n: usize) -> DVector<C64> {
    DVector::zeros(n)
}

#[test]
fn one_mode_gaussian_widths() {
    let s2 = 0.5f64.sqrt();
    let b = BetaMatrix::new(scalar(c(0.0, s2)), scalar(r(s2)), zeros(1)).unwrap();
    let g = gaussian_from_beta(&b).unwrap();
    assert!((g.m[(0, 0)] - r(0.5)).norm() < 1e-15);
    for s in [0.5, 1.0, 3.0] {
        let b = BetaMatrix::new(scalar(c(0.0, 1.0)), scalar(r(s * s)), zeros(1)).unwrap();
        let g = gaussian_from_beta(&b).unwrap();
        assert!((g.m[(0, 0)] - r(s * s / 2.0)).norm() < 1e-15);
    }
}

#[test]
fn gaussian_from_beta_errors() {
    let b = BetaMatrix { beta1: scalar(r(0.0)), beta2: scalar(r(1.0)), z: zeros(1) };
    assert!(matches!(gaussian_from_beta(&b), Err(Error::SingularBeta1)));
    // M = -1/2: not normalizable
    let b = BetaMatrix::new(scalar(c(0.0, 1.0)), scalar(r(-1.0)), zeros(1)).unwrap();
    assert!(matches!(gaussian_from_beta(&b), Err(Error::NotPositiveDefinite)));
    let m = DMatrix::from_row_slice(2, 2, &[r(1.0), r(0.2), r(0.3), r(1.0)]);
    assert!(GaussianParams::new(m, zeros(2)).is_err());
    assert!(matches!(BetaMatrix::new(scalar(r(1.0)), scalar(r(1.0)), zeros(1)), Err(Error::SingularB { .. })));
}

#[test]
fn random_compatible_beta_gives_symmetric_m() {
    let mut rng = sampling::rng(3);
    for _ in 0..50 {
        let b = sampling::random_compatible_beta(&mut rng, 2);
        let g = gaussian_from_beta(&b).unwrap();
        let asym = (&g.m - g.m.transpose()).camax();
        assert!(asym < 1e-14);
    }
}

#[test]
fn beta_from_m_vacuum() {
    let g = GaussianParams::new(scalar(r(0.5)), zeros(1)).unwrap();
    let b = beta_from_m(&g).unwrap();
    let s2 = 0.5f64.sqrt();
    assert!((b.beta1[(0, 0)] - r(s2)).norm() < 1e-15);
    assert!((b.beta2[(0, 0)] - c(0.0, -s2)).norm() < 1e-15);
    // A = -i a: P = -i, Q = 0
    let (p, q) = b.ladder_form();
    assert!((p[(0, 0)] - c(0.0, -1.0)).norm() < 1e-15);
    assert!(q[(0, 0)].norm() < 1e-15);
    let vac = materialize(&b, 10).unwrap();
    assert!((vac.amplitudes()[0].norm() - 1.0).abs() < 1e-15);
}

#[test]
fn beta_from_m_congruence() {
    let m = DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.7, 0.2), c(2.5, -1.0)]));
    let g = GaussianParams::new(m, zeros(2)).unwrap();
    let b = beta_from_m(&g).unwrap();
    let rp = g.re_part_twice().map(|x| r(x));
    let lhs = &b.beta1 * rp * b.beta1.adjoint();
    assert!((lhs - DMatrix::<C64>::identity(2, 2) * r(0.5)).camax() < 1e-14);
    // eigenvalues sorted descending: the larger width first
    assert!(b.beta1[(0, 1)].norm() > 0.0 && b.beta1[(0, 0)].norm() == 0.0);
    assert!(b.canonical_residual() < 1e-14);
    assert!(second_condition_residual(&b.beta1, &g.m) == 0.0);
}

#[test]
fn beta_from_m_random_commutators() {
    let mut rng = sampling::rng(4);
    for i in 0..50 {
        let g = sampling::random_gaussian(&mut rng, 1 + i % 3);
        let b = beta_from_m(&g).unwrap();
        assert!(b.canonical_residual() < 1e-12);
        assert!(second_condition_residual(&b.beta1, &g.m) < 1e-14);
    }
    let not_pd = GaussianParams { m: scalar(r(-0.1)), nvec: zeros(1) };
    assert!(matches!(beta_from_m(&not_pd), Err(Error::NotPositiveDefinite)));
}

#[test]
fn lambda_nonsingularity() {
    let mut rng = sampling::rng(5);
    for _ in 0..20 {
        let b = sampling::random_canonical_beta(&mut rng, 2);
        let l = lambda_from_beta(&b);
        assert!(!l.singular && l.det.abs() > 1e-6);
    }
    let s2 = 0.5f64.sqrt();
    let cs = BetaMatrix::new(scalar(c(0.0, s2)), scalar(r(s2)), zeros(1)).unwrap();
    assert!(!lambda_from_beta(&cs).singular);
    // beta2 = 3 beta1 with real ratio: rank deficient, and so is B
    let b1 = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.5), r(0.2), c(0.0, 0.3), r(1.0)]);
    let lam = lambda_matrix(&b1, &(&b1 * r(3.0)));
    assert!(lam.clone().singular_values().min() < 1e-12);
    assert!(BetaMatrix::new(b1.clone(), &b1 * r(3.0), zeros(2)).is_err());
    // beta2 = i beta1 is a creation operator combination: B stays regular
    let lam = lambda_matrix(&b1, &(&b1 * c(0.0, 1.0)));
    assert!(lam.singular_values().min() > 1e-3);
}

#[test]
fn hn_vacuum_and_squeezed() {
    for n in [1usize, 2] {
        let g = GaussianParams::new(DMatrix::identity(n, n) * r(0.5), zeros(n)).unwrap();
        let b = beta_from_m(&g).unwrap();
        let rep = verify_hn_ris(&b, 20).unwrap();
        let expect = 0.25f64.powi(n as i32);
        assert!((rep.report.det_sigma - expect).abs() < 1e-14);
        assert!((rep.report.det_c - expect).abs() < 1e-14);
        assert!((rep.sigma_beta.clone() - DMatrix::identity(2 * n, 2 * n) * 0.5).amax() < 1e-14);
    }
    let g = GaussianParams::new(scalar(c(1.7, 0.4)), DVector::from_vec(vec![c(0.3, -0.2)])).unwrap();
    let b = beta_from_m(&g).unwrap();
    let rep = verify_hn_ris(&b, 80).unwrap();
    assert!((rep.sigma_beta.determinant() - 0.25).abs() < 1e-14);
    assert!((rep.report.det_sigma - 0.25).abs() < 1e-10);
    assert!(rep.max_sigma_diff < 1e-8);
}

#[test]
fn hn_random_two_mode_saturates() {
    let mut rng = sampling::rng(6);
    for _ in 0..5 {
        let b = sampling::random_canonical_beta(&mut rng, 2);
        let cutoff = sqstates::verify::canonical_cutoff(&b).unwrap();
        let rep = verify_hn_ris(&b, cutoff).unwrap();
        assert!(rep.saturation < 1e-8, "{}", rep.saturation);
        assert!(rep.max_sigma_diff < 1e-8);
        assert!(rep.eigen_residual < 1e-8);
    }
}

#[test]
fn materialized_state_matches_position_space_oracle() {
    let mut rng = sampling::rng(8);
    for n in [1usize, 2] {
        let g = sampling::random_gaussian(&mut rng, n);
        let b = beta_from_m(&g).unwrap();
        let cutoff = sqstates::verify::canonical_cutoff(&b).unwrap().min(60);
        let s = materialize(&b, cutoff).unwrap();
        let o = gaussian_fock_oracle(&g, cutoff).unwrap();
        assert!(s.overlap(&o).unwrap() > 1.0 - 1e-8);
    }
}

#[test]
fn round_trip_keeps_the_eigenstate() {
    let mut rng = sampling::rng(9);
    for n in [1usize, 2] {
        let b = sampling::random_compatible_beta(&mut rng, n);
        let back = beta_from_m(&gaussian_from_beta(&b).unwrap()).unwrap();
        let cutoff = 60;
        let s1 = materialize(&b, cutoff).unwrap();
        let s2 = materialize(&back, cutoff).unwrap();
        assert!(s1.overlap(&s2).unwrap() > 1.0 - 1e-10);
    }
}

#[test]
fn one_mode_squeezed_vacuum_matches_su11_construction() {
    // S(zeta)|0> is annihilated by cosh r a - e^{i theta} sinh r a^dag
    let zeta = C64::from_polar(0.45, 0.8);
    let (rr, e) = (zeta.norm(), zeta / zeta.norm());
    let b = BetaMatrix::from_ladder(scalar(r(rr.cosh())), scalar(-e * rr.sinh()), zeros(1)).unwrap();
    assert!(b.canonical_residual() < 1e-14);
    let cutoff = 120;
    let gauss = materialize(&b, cutoff).unwrap();
    let p = squeezed_cat_params(r(0.0), zeta, Parity::Even).unwrap();
    let s = even_odd_state(p.z, p.u, p.v, p.w, Parity::Even, &BuildOptions { cutoff, ..Default::default() }).unwrap();
    let amps: Vec<C64> = (0..=cutoff).map(|i| s.amplitudes().get(i).copied().unwrap_or(r(0.0))).collect();
    let s = StateVector::new(Basis::fock(cutoff), amps).unwrap();
    assert!(s.overlap(&gauss).unwrap() > 1.0 - 1e-10);
    let rep = verify_hn_ris(&b, cutoff).unwrap();
    assert!(rep.saturation < 1e-8);
}

#[test]
fn beta_json_round_trip() {
    let mut rng = sampling::rng(10);
    let b = sampling::random_canonical_beta(&mut rng, 2);
    let json = serde_json::to_string(&b.to_json()).unwrap();
    let back = BetaMatrix::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
    assert_eq!(back, b);
    let no_z: BetaJson = serde_json::from_str(r#"{"beta1": [[[1,0]]], "beta2": [[[0,1]]]}"#).unwrap();
    assert_eq!(BetaMatrix::from_json(&no_z).unwrap().z[0], r(0.0));
}
