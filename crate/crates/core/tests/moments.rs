use nalgebra::DMatrix;
use sqstates::figures::figure_options;
use sqstates::fock::*;
use sqstates::moments::*;
use sqstates::sampling;
use sqstates::su11::*;
use sqstates::{Error, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn r(x: f64) -> C64 {
    c(x, 0.0)
}

fn ladder(s: &StateVector) -> LadderBasis {
    match s.basis() {
        Basis::Ladder(b) => *b,
        _ => panic!("expected a ladder state"),
    }
}

fn fig1a_state(x: f64) -> StateVector {
    let u = r((1.0f64 + x * x).sqrt());
    even_odd_state(r(1.0), u, r(-x), r(0.0), Parity::Even, &figure_options(512)).unwrap()
}

#[test]
fn vacuum_qp_report() {
    let b = build_boson_operators(10).unwrap();
    let vac = StateVector::basis_vector(Basis::fock(10), 0).unwrap();
    let rep = uncertainty_matrix(&vac, &[&b.q, &b.p]).unwrap();
    assert!((&rep.sigma - DMatrix::from_diagonal_element(2, 2, 0.5)).amax() < 1e-15);
    assert_eq!(rep.cmat[(0, 0)], 0.0);
    assert!((rep.cmat[(0, 1)] - 0.5).abs() < 1e-15);
    assert!((rep.det_c - 0.25).abs() < 1e-15);
    assert!(rep.robertson_slack().abs() < 1e-15);
    let v = squeezing_predicates(&rep, &[0.5f64.sqrt()]).unwrap();
    assert_eq!(v.absolute, vec![false, false]);
    assert!(!v.joint);
    assert_eq!(v.relative, vec![RelativeFlag::NotSqueezed; 2]);
}

#[test]
fn lowest_weight_trio_has_vanishing_det_c() {
    let b = LadderBasis::new(0.75, 8).unwrap();
    let g = build_su11_generators(&b);
    let s = StateVector::basis_vector(Basis::Ladder(b), 0).unwrap();
    let rep = uncertainty_matrix(&s, &[&g.k1, &g.k2, &g.k3]).unwrap();
    assert_eq!(rep.det_c, 0.0);
    // C_12 = -<K3>/2 is still there
    assert!((rep.cmat[(0, 1)] + 0.375).abs() < 1e-15);
    let v = squeezing_predicates(&rep, &[1.0]).unwrap();
    assert_eq!(v.relative, vec![RelativeFlag::NotApplicable; 3]);
}

#[test]
fn robertson_inequality_on_random_states() {
    let mut rng = sampling::rng(7);
    let b = LadderBasis::new(0.5, 20).unwrap();
    let g = build_su11_generators(&b);
    for _ in 0..200 {
        let s = sampling::random_state(&mut rng, Basis::Ladder(b));
        let rep = uncertainty_matrix(&s, &[&g.k1, &g.k2]).unwrap();
        assert!(rep.robertson_slack() >= -1e-9);
        let h: Vec<OperatorMatrix> = (0..4).map(|_| sampling::random_hermitian(&mut rng, Basis::Ladder(b))).collect();
        for n in 2..=4 {
            let obs: Vec<&OperatorMatrix> = h[..n].iter().collect();
            let rep = uncertainty_matrix(&s, &obs).unwrap();
            assert!(rep.robertson_slack() >= -1e-9 * rep.det_c.abs().max(1.0));
            for i in 0..n {
                assert!(rep.sigma[(i, i)] >= -1e-12);
                for j in 0..n {
                    assert_eq!(rep.sigma[(i, j)], rep.sigma[(j, i)]);
                }
            }
        }
    }
}

#[test]
fn uncertainty_matrix_rejects_bad_input() {
    let b = LadderBasis::new(0.5, 6).unwrap();
    let g = build_su11_generators(&b);
    let s = StateVector::basis_vector(Basis::Ladder(b), 2).unwrap();
    assert!(matches!(uncertainty_matrix(&s, &[&g.k1, &g.k_plus]), Err(Error::NotHermitian(_))));
    let q = build_boson_operators(6).unwrap().q;
    assert!(matches!(uncertainty_matrix(&s, &[&g.k1, &q]), Err(Error::BasisMismatch)));
}

#[test]
fn sigma_from_beta_coherent_state() {
    // A = (q + i p)/sqrt 2 = a, C' = <[a, a^dag]>/2 = 1/2
    let s2 = 0.5f64.sqrt();
    let beta1 = DMatrix::from_element(1, 1, r(s2));
    let beta2 = DMatrix::from_element(1, 1, c(0.0, s2));
    let cp = DMatrix::from_element(1, 1, r(0.5));
    let sigma = sigma_from_beta(&beta1, &beta2, &cp).unwrap();
    assert!((sigma - DMatrix::from_diagonal_element(2, 2, 0.5)).amax() < 1e-15);
    // the same operator scaled by i: the transformation absorbs the phase
    let sigma = sigma_from_beta(&(beta1.clone() * c(0.0, 1.0)), &(beta2.clone() * c(0.0, 1.0)), &cp).unwrap();
    assert!((sigma - DMatrix::from_diagonal_element(2, 2, 0.5)).amax() < 1e-15);
    // beta2 = beta1: B is singular
    let singular = sigma_from_beta(&beta1, &beta1, &cp);
    assert!(matches!(singular, Err(Error::SingularB { .. })));
}

#[test]
fn k_variances_bg_and_real_pairs() {
    let opts = BuildOptions::default();
    let p = Su11Params::bg_cs(c(0.7, -0.2), 0.75).unwrap();
    let kv = closed_form_k_variances(&p, &opts).unwrap();
    assert!((kv.var_k1 - kv.mean_k3 / 2.0).abs() < 1e-15);
    assert!((kv.var_k2 - kv.mean_k3 / 2.0).abs() < 1e-15);
    assert_eq!(kv.cov_k1k2, 0.0);
    let p = Su11Params::k1k2_is(r(0.4), r(1.3), r(0.6), 0.5).unwrap();
    assert_eq!(closed_form_k_variances(&p, &opts).unwrap().cov_k1k2, 0.0);
    let p = Su11Params::new(r(0.4), r(1.3), r(0.6), r(0.1), 0.5).unwrap();
    assert!(matches!(closed_form_k_variances(&p, &opts), Err(Error::RequiresW0)));
}

#[test]
fn k_variances_match_direct_computation() {
    let opts = BuildOptions::default();
    let mut rng = sampling::rng(11);
    for i in 0..40 {
        let k = sampling::LISTED_K[i % sampling::LISTED_K.len()];
        let p = sampling::k1k2_params(&mut rng, 0.8, k);
        let kv = closed_form_k_variances(&p, &opts).unwrap();
        let s = construct(&p, &opts).unwrap();
        let g = build_su11_generators(&ladder(&s.state));
        let rep = uncertainty_matrix(&s.state, &[&g.k1, &g.k2]).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
        assert!(rel(kv.var_k1, rep.sigma[(0, 0)]) < 1e-8);
        assert!(rel(kv.var_k2, rep.sigma[(1, 1)]) < 1e-8);
        assert!((kv.cov_k1k2 - rep.sigma[(0, 1)]).abs() < 1e-8 * kv.mean_k3);
        // every w = 0 state saturates the Schrodinger inequality for K1, K2
        assert!(rep.relative_saturation() < 1e-8);
    }
}

#[test]
fn fig1a_k2_squeezing_at_x2() {
    let p = Su11Params::k1k2_is(r(1.0), r(5.0f64.sqrt()), r(-2.0), 0.25).unwrap();
    let kv = closed_form_k_variances(&p, &figure_options(512)).unwrap();
    assert!(8.0 * kv.var_k2 < 1.0);
}

#[test]
fn mean_k3_examples() {
    let opts = BuildOptions::default();
    for k in [0.25, 1.5] {
        let m = mean_k3(&Su11Params::bg_cs(r(0.0), k).unwrap(), &opts).unwrap();
        assert_eq!(m.direct, k);
    }
    let p = Su11Params::new(c(-0.5, -5.0), r(1.25f64.sqrt()), r(-0.5), r(0.0), 0.25).unwrap();
    let m = mean_k3(&p, &opts).unwrap();
    assert!((m.direct - 3.78).abs() < 0.01);
    if let Some(cf) = m.closed_form {
        assert!((cf - m.direct).abs() < 1e-6 * m.direct);
    }
}

#[test]
fn quadrature_variances_examples() {
    let opts = BuildOptions::default();
    let vac = quadrature_variances(r(0.0), r(1.0), r(0.0), Parity::Even, &opts).unwrap();
    assert_eq!((vac.var_q, vac.var_p), (0.5, 0.5));
    let at = |x: f64| quadrature_variances(r(1.0), r((1.0f64 + x * x).sqrt()), r(-x), Parity::Even, &figure_options(512)).unwrap();
    assert!(at(1.0).var_p < 0.5);
    // the crossing of 1/2 sits within 3.8 +- 0.1
    assert!(at(3.7).var_p < 0.5 && at(3.9).var_p > 0.5);
    let q = at(2.0);
    assert!((q.var_q + q.var_p - (1.0 + 2.0 * q.mean_n)).abs() < 1e-12);
}

#[test]
fn quadrature_variances_match_direct_computation() {
    let opts = BuildOptions::default();
    let mut rng = sampling::rng(12);
    for i in 0..20 {
        let parity = if i % 2 == 0 { Parity::Even } else { Parity::Odd };
        let p = sampling::k1k2_params(&mut rng, 0.8, parity.bargmann_k());
        let qv = quadrature_variances(p.z, p.u, p.v, parity, &opts).unwrap();
        let s = even_odd_state(p.z, p.u, p.v, p.w, parity, &opts).unwrap();
        let b = build_boson_operators(s.dim() - 1).unwrap();
        let vq = s.variance(&b.q).unwrap();
        let vp = s.variance(&b.p).unwrap();
        assert!((qv.var_q - vq).abs() < 1e-8 * vq);
        assert!((qv.var_p - vp).abs() < 1e-8 * vp);
        let cv = cat_variances(&s).unwrap();
        assert!(cv.parity_ok);
        assert!((cv.var_q - vq).abs() < 1e-8 * vq);
    }
}

#[test]
fn cat_variances_vacuum_and_direct() {
    let vac = StateVector::basis_vector(Basis::fock(8), 0).unwrap();
    let cv = cat_variances(&vac).unwrap();
    assert_eq!((cv.var_q, cv.var_p, cv.var_k1t, cv.var_k2t), (0.5, 0.5, 1.0, 1.0));
    // squeezed cat against matrix variances of K~ = 2 sqrt 2 K
    let p = squeezed_cat_params(r(-0.2), r(0.31), Parity::Even).unwrap();
    let s = even_odd_state(p.z, p.u, p.v, p.w, Parity::Even, &BuildOptions::default()).unwrap();
    let m = s.dim() - 1;
    let q = build_one_mode_quadratic_full(m).unwrap();
    let k1t = q.k1.scale_re(8.0f64.sqrt());
    let k2t = q.k2.scale_re(8.0f64.sqrt());
    let cv = cat_variances(&s).unwrap();
    assert!((cv.var_k1t - s.variance(&k1t).unwrap()).abs() < 1e-8);
    assert!((cv.var_k2t - s.variance(&k2t).unwrap()).abs() < 1e-8);
    // a state with <a> != 0 is flagged
    let coh = StateVector::normalized(Basis::fock(3), vec![r(1.0), r(0.5), r(0.0), r(0.0)]).unwrap();
    assert!(!cat_variances(&coh).unwrap().parity_ok);
}

#[test]
fn fig1b_cat_variances() {
    let at = |d: f64| {
        let p = squeezed_cat_params(r(-d), r(0.31), Parity::Even).unwrap();
        let s = even_odd_state(p.z, p.u, p.v, p.w, Parity::Even, &BuildOptions::default()).unwrap();
        cat_variances(&s).unwrap()
    };
    let v = at(0.2);
    assert!(2.0 * v.var_q < 1.0 && v.var_k1t < 1.0);
    assert!(at(0.6).var_q >= 0.5);
}

#[test]
fn double_intelligence_of_squeezed_vacuum() {
    let p = squeezed_cat_params(r(0.0), C64::from_polar(0.4, 0.7), Parity::Even).unwrap();
    let s = even_odd_state(p.z, p.u, p.v, p.w, Parity::Even, &BuildOptions::default()).unwrap();
    let m = s.dim() - 1;
    let b = build_boson_operators(m).unwrap();
    let q = build_one_mode_quadratic_full(m).unwrap();
    let qp = uncertainty_matrix(&s, &[&b.q, &b.p]).unwrap();
    let kk = uncertainty_matrix(&s, &[&q.k1, &q.k2]).unwrap();
    assert!(qp.saturation(1e-12) < 1e-8);
    assert!(kk.saturation(1e-12) < 1e-8);
}

#[test]
fn ris_saturation_for_hermitian_combination() {
    let (u, w, k, n) = (c(0.6, 0.3), 2.0, 0.75, 1usize);
    let l = (w * w - 4.0 * u.norm_sqr()).sqrt();
    let p = Su11Params::new(r((k + n as f64) * l), u, u.conj(), r(w), k).unwrap();
    let s = construct(&p, &BuildOptions::default()).unwrap();
    let g = build_su11_generators(&ladder(&s.state));
    let rep = uncertainty_matrix(&s.state, &[&g.k1, &g.k2, &g.k3]).unwrap();
    assert!(rep.relative_saturation() < 1e-6);
}

#[test]
fn photon_statistics_examples() {
    let p = Su11Params::new(c(-0.5, -5.0), r(1.25f64.sqrt()), r(-0.5), r(0.0), 0.25).unwrap();
    let s = even_odd_state(p.z, p.u, p.v, p.w, Parity::Even, &BuildOptions::default()).unwrap();
    let st = photon_statistics(&s).unwrap();
    assert!((st.distribution.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!((st.mandel_q + 0.21).abs() < 0.01);
    assert!((st.mean - 7.06).abs() < 0.02);
    assert!(st.distribution.iter().skip(1).step_by(2).all(|&x| x == 0.0));
    let coh: Vec<C64> = (0..40).map(|n| r(1.5f64.powi(n) / (1..=n).map(|j| (j as f64).sqrt()).product::<f64>())).collect();
    let coh = StateVector::normalized(Basis::fock(39), coh).unwrap();
    let st = photon_statistics(&coh).unwrap();
    assert!(st.mandel_q.abs() < 1e-10);
    let pr = poisson_reference(st.mean, 40);
    for (a, b) in pr.iter().zip(&st.distribution) {
        assert!((a - b).abs() < 1e-12);
    }
    let ladder_state = StateVector::basis_vector(Basis::Ladder(LadderBasis::new(0.5, 3).unwrap()), 0).unwrap();
    assert!(matches!(photon_statistics(&ladder_state), Err(Error::BasisMismatch)));
}

#[test]
fn squeezing_predicates_on_fig1a() {
    let s = fig1a_state(2.0);
    let m = s.dim() - 1;
    let b = build_boson_operators(m).unwrap();
    let q = build_one_mode_quadratic_full(m).unwrap();
    let k2t = q.k2.scale_re(8.0f64.sqrt());
    let rep = uncertainty_matrix(&s, &[&b.p, &k2t]).unwrap();
    let v = squeezing_predicates(&rep, &[0.5f64.sqrt(), 1.0]).unwrap();
    assert_eq!(v.absolute, vec![true, true]);
    assert!(v.joint);
    assert!(squeezing_predicates(&rep, &[1.0, 1.0, 1.0]).is_err());
    assert!(squeezing_predicates(&rep, &[0.0]).is_err());
}
