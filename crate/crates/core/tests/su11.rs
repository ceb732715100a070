use sqstates::fock::*;
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

fn residual(st: &Su11State) -> f64 {
    let p = st.params;
    let op = build_su11_generators(&ladder(&st.state)).combination(p.u, p.v, p.w);
    st.state.eigen_residual(&op, p.z).unwrap()
}

#[test]
fn derive_values() {
    let p = Su11Params { z: r(0.0), u: r(1.0), v: r(-1.0), w: r(0.0), k: 0.5 };
    let d = derive(&p).unwrap();
    assert!((d.l - r(2.0)).norm() < 1e-15);
    assert!((d.c - r(-1.0)).norm() < 1e-15);
    assert!((d.zeta - r(2.0)).norm() < 1e-15);

    let p = Su11Params { v: r(1.0), ..p };
    let d = derive(&p).unwrap();
    assert!((d.l - c(0.0, 2.0)).norm() < 1e-15);
    assert!((d.c - c(0.0, -1.0)).norm() < 1e-15);
    assert!((d.zeta - r(2.0)).norm() < 1e-15);
    assert!((d.zeta + d.l / (p.u * d.c)).norm() < 1e-14);

    // w = 0 family used for the quadrature figure
    let x = 1.0f64;
    let p = Su11Params { z: r(1.0), u: r((1.0 + x * x).sqrt()), v: r(-x), w: r(0.0), k: 0.25 };
    let d = derive(&p).unwrap();
    assert!((d.l * d.l + 4.0 * p.u * p.v).norm() < 1e-14);
    assert!((d.a - (p.k + p.z / d.l)).norm() < 1e-15);
    assert_eq!(d.s, -d.c.norm_sqr());

    let bg = Su11Params { z: r(0.3), u: r(1.0), v: r(0.0), w: r(0.0), k: 0.5 };
    assert!(matches!(derive(&bg), Err(Error::DegenerateKilling)));
}

#[test]
fn normalizability_cases() {
    let check = |u: f64, v: f64, w: f64| is_normalizable(&Su11Params { z: r(0.2), u: r(u), v: r(v), w: r(w), k: 0.5 });
    let n = check(1.0, 0.5, 0.0);
    assert!(n.normalizable && n.margin > 0.0);
    assert!((n.margin - (2.0 - 2.0f64.sqrt())).abs() < 1e-15);
    let n = check(1.0, -1.0, 0.0);
    assert!(!n.normalizable && n.margin.abs() < 1e-15);
    assert!(!check(1.0, 1.0, 0.0).normalizable);
    let n = check(0.1, 1.0, 0.0);
    assert!(!n.normalizable && n.margin < 0.0);

    assert!(matches!(Su11Params::new(r(0.2), r(0.1), r(1.0), r(0.0), 0.5), Err(Error::NotNormalizable { .. })));
    assert!(matches!(Su11Params::new(r(0.2), r(0.0), r(0.1), r(0.0), 0.5), Err(Error::ZeroU)));
    assert!(matches!(Su11Params::new(r(0.2), r(1.0), r(0.1), r(0.0), 0.0), Err(Error::InvalidK(_))));
    assert!(Su11Params::new(c(f64::NAN, 0.0), r(1.0), r(0.1), r(0.0), 0.5).is_err());
}

#[test]
fn one_root_outside_is_rejected_for_generic_z() {
    // roots of r^2 + 2.5 r + 1: -0.5 and -2
    let p = Su11Params { z: c(0.3, 0.1), u: r(1.0), v: r(1.0), w: r(2.5), k: 0.5 };
    let n = is_normalizable(&p);
    assert!(n.either_root && !n.normalizable);
    // the recurrence from such a z blows up
    let raw = norm_inverse_direct(&p, 200);
    assert!(raw > 1e30);
}

#[test]
fn bg_cs_trivial_and_series() {
    for k in [0.25, 0.75, 1.0] {
        let s = construct(&Su11Params::bg_cs(r(0.0), k).unwrap(), &BuildOptions::default()).unwrap();
        assert_eq!(s.state.amplitudes()[0], r(1.0));
        assert!(s.state.amplitudes()[1..].iter().all(|x| x.norm() == 0.0));
    }
    // k = 1, z = 1: C_m proportional to 1/sqrt(m! (m+1)!)
    let s = construct(&Su11Params::bg_cs(r(1.0), 1.0).unwrap(), &BuildOptions::default()).unwrap();
    let mut oracle = vec![1.0f64];
    for m in 1..s.state.dim() {
        let prev = oracle[m - 1];
        oracle.push(prev / ((m * (m + 1)) as f64).sqrt());
    }
    let norm = oracle.iter().map(|x| x * x).sum::<f64>().sqrt();
    for (a, o) in s.state.amplitudes().iter().zip(&oracle) {
        assert!((a - r(o / norm)).norm() < 1e-15);
    }
    assert!(residual(&s) < 1e-12);
}

#[test]
fn fig2a_photon_number() {
    let p = Su11Params::new(c(-0.5, -5.0), r(1.25f64.sqrt()), r(-0.5), r(0.0), 0.25).unwrap();
    let s = construct(&p, &BuildOptions::default()).unwrap();
    assert!(residual(&s) < 1e-8);
    let k3: f64 = s.state.amplitudes().iter().enumerate().map(|(m, a)| (0.25 + m as f64) * a.norm_sqr()).sum();
    let n = 2.0 * k3 - 0.5;
    assert!((n - 7.06).abs() < 0.02, "<n> = {n}");
}

#[test]
fn closed_form_low_orders() {
    let p = Su11Params::new(c(0.4, -0.3), c(1.1, 0.2), c(0.3, -0.1), c(0.2, 0.4), 0.75).unwrap();
    let d = derive(&p).unwrap();
    let logs = closed_form_log_coefficients(&d, p.k, 3);
    assert!((logs[0].unwrap().exp() - r(1.0)).norm() < 1e-15);
    let g1 = d.c * (2.0 * p.k).sqrt() * (1.0 - d.a * d.zeta / (2.0 * p.k));
    assert!((logs[1].unwrap().exp() - g1).norm() < 1e-14 * g1.norm().max(1.0));
    // g1 also solves the first recurrence step: u sqrt(2k) C1 + w k = z
    let c1 = (p.z - p.w * p.k) / (p.u * (2.0 * p.k).sqrt());
    assert!((g1 - c1).norm() < 1e-14);
}

#[test]
fn closed_form_matches_recurrence_for_listed_k() {
    let params = [
        (c(0.4, -0.3), c(1.1, 0.2), c(0.3, -0.1), c(0.2, 0.4)),
        (c(-1.0, 2.0), r(1.0), c(0.0, 0.5), r(0.0)),
        (r(2.0), c(0.8, -0.8), c(0.2, 0.1), c(-0.3, 0.0)),
    ];
    for (z, u, v, w) in params {
        for k in [0.25, 0.75, 0.5, 1.0, 1.5, 2.0] {
            let p = Su11Params::new(z, u, v, w, k).unwrap();
            let rec = construct(&p, &BuildOptions::default()).unwrap();
            let cf = coefficients_closed_form(&p, &ladder(&rec.state)).unwrap();
            for (a, b) in cf.amplitudes().iter().zip(rec.state.amplitudes()) {
                assert!((a - b).norm() < 1e-10, "k = {k}");
            }
        }
    }
}

#[test]
fn branch_independence() {
    let p = Su11Params::new(c(0.4, -0.3), c(1.1, 0.2), c(0.3, -0.1), c(0.2, 0.4), 0.5).unwrap();
    let basis = LadderBasis::new(0.5, 256).unwrap();
    let a = coefficients_closed_form_branch(&p, &basis, Branch::Principal).unwrap();
    let b = coefficients_closed_form_branch(&p, &basis, Branch::Flipped).unwrap();
    assert!(a.overlap(&b).unwrap() > 1.0 - 1e-10);
}

#[test]
fn terminating_ris_state() {
    // Hermitian combination with |w| > 2|u|: z on the discrete spectrum
    let (u, w, k, n) = (c(0.6, 0.3), 2.0, 0.75, 2usize);
    let l = (w * w - 4.0 * u.norm_sqr()).sqrt();
    let p = Su11Params::new(r((k + n as f64) * l), u, u.conj(), r(w), k).unwrap();
    let t = is_normalizable(&p).terminating.expect("discrete eigenvalue");
    assert_eq!(t.n, n);
    let s = construct(&p, &BuildOptions::default()).unwrap();
    assert!(residual(&s) < 1e-10);
    // a generic z at the same (u, v, w) is rejected
    assert!(Su11Params::new(r((k + 2.3) * l), u, u.conj(), r(w), k).is_err());
}

#[test]
fn norm_inverse_closed_form_matches_direct_sum() {
    let p = Su11Params::new(c(0.5, 0.2), r(1.0), r(0.2), r(0.1), 0.5).unwrap();
    let d = derive(&p).unwrap();
    let closed = norm_inverse_closed_form(&d, p.k).expect("formula applies");
    // direct sum is normalized to C_0 = 1, the closed form to g_0 = 1
    let direct = norm_inverse_direct(&p, 400);
    assert!((closed - direct).abs() < 1e-12 * direct, "{closed} vs {direct}");
    let m = sqstates::moments::mean_k3(&p, &BuildOptions::default()).unwrap();
    assert!((m.closed_form.unwrap() - m.direct).abs() < 1e-7);
}

#[test]
fn even_odd_lowest_states() {
    let opts = BuildOptions::default();
    let even = even_odd_state(r(0.0), r(1.0), r(0.0), r(0.0), Parity::Even, &opts).unwrap();
    assert_eq!(even.amplitudes()[0], r(1.0));
    assert!(even.amplitudes()[1..].iter().all(|x| x.norm() == 0.0));
    let odd = even_odd_state(r(0.0), r(1.0), r(0.0), r(0.0), Parity::Odd, &opts).unwrap();
    assert_eq!(odd.amplitudes()[1], r(1.0));
    assert!(odd.amplitudes().iter().enumerate().all(|(n, x)| n == 1 || x.norm() == 0.0));
}

#[test]
fn parity_states_have_exact_parity() {
    let opts = BuildOptions::default();
    for parity in [Parity::Even, Parity::Odd] {
        let s = even_odd_state(c(0.7, 0.4), r(1.2), c(0.3, 0.2), c(0.1, 0.0), parity, &opts).unwrap();
        for (n, a) in s.amplitudes().iter().enumerate() {
            if Parity::of(n) != parity {
                assert_eq!(a.norm(), 0.0);
            }
        }
    }
}

#[test]
fn fig1a_states_solve_the_quadratic_eigenproblem() {
    let opts = sqstates::figures::figure_options(512);
    for x in [0.0, 0.5, 2.0, 6.0] {
        let u = r((1.0f64 + x * x).sqrt());
        let v = r(-x);
        let s = even_odd_state(r(1.0), u, v, r(0.0), Parity::Even, &opts).unwrap();
        let cutoff = s.dim() - 1;
        let q = build_one_mode_quadratic_full(cutoff).unwrap();
        let op = q.combination(u, v, r(0.0));
        let res = s.eigen_residual(&op, r(1.0)).unwrap();
        assert!(res < 1e-8, "x = {x}: residual {res}");
    }
}

#[test]
fn squeezed_cat_parameters() {
    let p = squeezed_cat_params(r(0.7), r(0.0), Parity::Even).unwrap();
    assert_eq!((p.u, p.v, p.w), (r(1.0), r(0.0), r(0.0)));
    let p = squeezed_cat_params(r(0.7), r(0.31), Parity::Even).unwrap();
    assert!((p.u.re - 0.31f64.cosh().powi(2)).abs() < 1e-15);
    assert!((p.u.re - 1.0992).abs() < 1e-4);
    assert!((p.w.re.abs() - 0.6605).abs() < 1e-4);
    assert_eq!(p.k, 0.25);
    // normalizable for large squeezing too
    for r0 in [0.5, 1.0, 2.0] {
        assert!(squeezed_cat_params(c(0.3, 0.2), C64::from_polar(r0, 1.1), Parity::Odd).is_ok());
    }
}

#[test]
fn squeezed_cat_equals_squeezed_even_cat() {
    // |z;+> is the even cat with a^2 eigenvalue 2z; squeeze it with
    // S(zeta) = exp[(zeta a^dag^2 - zeta^* a^2)/2]
    let cutoff = 160;
    let z = c(0.6, -0.4);
    let alpha = (2.0 * z).sqrt();
    let mut coh = vec![r(1.0)];
    for n in 1..=cutoff {
        let prev = coh[n - 1];
        coh.push(prev * alpha / (n as f64).sqrt());
    }
    let cat: Vec<C64> = coh.iter().enumerate().map(|(n, x)| if n % 2 == 0 { *x } else { r(0.0) }).collect();
    let cat = StateVector::normalized(Basis::fock(cutoff), cat).unwrap();
    let b = build_boson_operators(cutoff).unwrap();
    let a2 = b.a.matmul(&b.a);
    let ad2 = b.a_dag.matmul(&b.a_dag);
    for zeta in [c(0.31, 0.0), C64::from_polar(0.4, 0.9)] {
        let gen = combination(&[(zeta * 0.5, &ad2), (-zeta.conj() * 0.5, &a2)]);
        let squeezed = cat.evolve(&gen, r(1.0)).unwrap();
        assert!(squeezed.tail_mass() < 1e-14);
        let p = squeezed_cat_params(z, zeta, Parity::Even).unwrap();
        let opts = BuildOptions { cutoff, ..BuildOptions::default() };
        let s = even_odd_state(p.z, p.u, p.v, p.w, Parity::Even, &opts).unwrap();
        let mut amps = s.amplitudes().to_vec();
        amps.resize(cutoff + 1, r(0.0));
        let s = StateVector::new(Basis::fock(cutoff), amps[..=cutoff].to_vec()).unwrap();
        assert!(s.overlap(&squeezed).unwrap() > 1.0 - 1e-12, "zeta = {zeta}");
    }
}

#[test]
fn k1k2_subfamily() {
    let p = Su11Params::k1k2_is(r(1.0), r(2.0f64.sqrt()), r(1.0), 0.5).unwrap();
    let s = construct(&p, &BuildOptions::default()).unwrap();
    assert!(residual(&s) < 1e-8);
    // (u K- + v K+) sum tau^m sqrt((2k)_m/m!) |m> = [u tau (K3 + k) + (v/tau)(K3 - k)] |tau>,
    // constant for tau^2 = -v/u with eigenvalue 2 k u tau: the SU(1,1) coherent state
    let (u, v, k) = (1.25f64.sqrt(), -0.5, 0.5);
    let z = -2.0 * k * (-u * v).sqrt();
    let p = Su11Params::k1k2_is(r(z), r(u), r(v), k).unwrap();
    let s = construct(&p, &BuildOptions::default()).unwrap();
    // for k = 1/2 the Perelomov state has C_m = tau^m with |tau| < 1
    let amps = s.state.amplitudes();
    let tau = amps[1] / amps[0];
    for m in 1..20 {
        assert!((amps[m + 1] - amps[m] * tau).norm() < 1e-12);
    }
    assert!((tau + r((-v / u).sqrt())).norm() < 1e-14);
}

#[test]
fn ideal_squeezing_limits() {
    // u fixed, v, w -> 0 approaches the BG coherent state
    let bg = construct(&Su11Params::bg_cs(c(0.8, 0.2), 0.5).unwrap(), &BuildOptions::default()).unwrap();
    let mut prev = 0.0;
    for eps in [1e-1, 1e-2, 1e-3] {
        let p = Su11Params::new(c(0.8, 0.2), r(1.0), r(eps), r(eps), 0.5).unwrap();
        let s = construct(&p, &BuildOptions { cutoff: ladder(&bg.state).cutoff(), ..Default::default() }).unwrap();
        let n = s.state.dim().min(bg.state.dim());
        let a = StateVector::normalized(Basis::fock(n - 1), s.state.amplitudes()[..n].to_vec()).unwrap();
        let b = StateVector::normalized(Basis::fock(n - 1), bg.state.amplitudes()[..n].to_vec()).unwrap();
        let ov = a.overlap(&b).unwrap();
        assert!(ov > prev);
        prev = ov;
    }
    assert!(prev > 1.0 - 1e-5);
    // (u, v) -> 0 with w fixed: K3 eigenstates
    for k in [0.25, 0.5] {
        for m in 0..3 {
            let z = r(k + m as f64);
            let p = Su11Params::new(z, r(1e-4), r(0.0), r(1.0), k).unwrap();
            let s = construct(&p, &BuildOptions::default()).unwrap();
            let g = build_su11_generators(&ladder(&s.state));
            let var = s.state.variance(&g.k3).unwrap();
            assert!(var < 1e-6, "k = {k}, m = {m}: {var}");
        }
    }
}

#[test]
fn construction_reports_non_convergence() {
    let p = Su11Params::new(r(1.0), r(1.0), r(-0.98), r(0.0), 0.25).unwrap();
    let opts = BuildOptions { cutoff: 64, max_cutoff: 128, ..Default::default() };
    assert!(matches!(construct(&p, &opts), Err(Error::NonConvergent { .. })));
    let basis = LadderBasis::new(0.25, 64).unwrap();
    assert!(matches!(coefficients_recurrence(&p, &basis), Err(Error::NonConvergent { .. })));
}

#[test]
fn substitution_agrees_with_recurrence() {
    let p = Su11Params::new(c(0.4, -0.3), c(1.1, 0.2), c(0.3, -0.1), c(0.2, 0.4), 0.25).unwrap();
    let rec = construct(&p, &BuildOptions::default()).unwrap();
    let q = build_one_mode_quadratic(2 * rec.state.dim() - 2, Parity::Even).unwrap();
    let sub = eigenvector_by_substitution(&q.combination(p.u, p.v, p.w), p.z).unwrap();
    for (a, b) in sub.amplitudes().iter().zip(rec.state.amplitudes()) {
        assert!((a - b).norm() < 1e-12);
    }
}
