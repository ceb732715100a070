//! Conditional generation of su(1,1) eigenstates: degenerate and
//! non-degenerate parametric amplification, a photon-number measurement on
//! mode a, and single-mode operations on mode b.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    build_boson_operators, build_one_mode_quadratic_full, combination, embed_two_mode, Basis, OperatorMatrix, Parity,
    StateVector, TwoModeState,
};
use crate::su11::{even_odd_state, BuildOptions};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Optical controls. `alpha` and `gamma2` default to the values the
/// parameter displays prescribe when left out.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub chi: C64,
    #[serde(default)]
    pub gamma1: C64,
    #[serde(default)]
    pub n: usize,
    #[serde(default)]
    pub alpha: Option<C64>,
    #[serde(default)]
    pub gamma2: Option<C64>,
}

impl SchemeConfig {
    pub fn new(chi: C64, gamma1: C64, n: usize) -> Result<Self> {
        let c = SchemeConfig { chi, gamma1, n, alpha: None, gamma2: None };
        c.validate()?;
        Ok(c)
    }

    /// |chi| = coth(omega), phi = arg chi
    pub fn from_omega(omega: f64, phi: f64, gamma1: C64, n: usize) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::InvalidChi(f64::NAN));
        }
        Self::new(C64::from_polar(1.0 / omega.tanh(), phi), gamma1, n)
    }

    pub fn validate(&self) -> Result<()> {
        let a = self.chi.norm();
        if !(a > 1.0) || !a.is_finite() {
            return Err(Error::InvalidChi(a));
        }
        Ok(())
    }

    pub fn omega(&self) -> f64 {
        (1.0 / self.chi.norm()).atanh()
    }

    pub fn phi(&self) -> f64 {
        self.chi.arg()
    }

    /// 1/cosh(omega) = sqrt(|chi|^2 - 1)/|chi|
    pub fn lambda(&self) -> f64 {
        let c = self.chi.norm();
        (c * c - 1.0).sqrt() / c
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n)
    }
}

/// Everything the parameter displays derive from a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeTargets {
    pub omega: f64,
    pub phi: f64,
    pub lambda: f64,
    pub k: f64,
    pub beta_tilde: C64,
    pub alpha_tilde: C64,
    pub gamma2: C64,
    pub zeta: C64,
    /// eigenvalue of lambda K1 - i K2
    pub eigenvalue: C64,
    /// eigenvalue of u K- + v K+ (= eigenvalue / sqrt(lambda))
    pub z: C64,
    pub u: f64,
    pub v: f64,
}

/// Evaluates the beta~, alpha~, gamma2 and zeta displays as printed, then
/// z = (1/2)(1/2 + n + zeta) sqrt((1 - lambda^2)/lambda).
pub fn scheme_targets(cfg: &SchemeConfig) -> Result<SchemeTargets> {
    cfg.validate()?;
    let chi = cfg.chi;
    let om = cfg.omega();
    let phi = cfg.phi();
    let lambda = cfg.lambda();
    let g1 = cfg.gamma1;
    let (ch, sh, th) = ((om / 2.0).cosh(), (om / 2.0).sinh(), (om / 2.0).tanh());
    let e = C64::from_polar(1.0, phi / 2.0);
    let ei = e.conj();
    let beta_tilde = (g1 + 2.0 * g1.conj() * chi.conj()) * ch * e + (g1.conj() + 2.0 * g1 * chi) * sh * ei
        + g1 * sh * th * e
        - g1.conj() * ch / th * ei;
    let alpha_tilde = (ch + sh) * e * beta_tilde.re - I * (ch - sh) * e * beta_tilde.im;
    let gamma2 = th * (g1 * sh * e - (g1.conj() + 2.0 * g1 * chi - alpha_tilde) * ch * ei);
    let zeta = g1.norm_sqr() + g1 * g1 / om.tanh() * C64::from_polar(1.0, phi) - g1 * alpha_tilde
        + 0.5 * (gamma2 * gamma2 / th - gamma2.conj() * gamma2.conj() * th);
    let root = (1.0 - lambda * lambda).sqrt();
    let eigenvalue = 0.5 * (0.5 + cfg.n as f64 + zeta) * root;
    let sl = lambda.sqrt();
    Ok(SchemeTargets {
        omega: om,
        phi,
        lambda,
        k: cfg.parity().bargmann_k(),
        beta_tilde,
        alpha_tilde,
        gamma2,
        zeta,
        eigenvalue,
        z: eigenvalue / sl,
        u: (lambda + 1.0) / (2.0 * sl),
        v: (lambda - 1.0) / (2.0 * sl),
    })
}

/// Eigenvalue of lambda K1 - i K2 reached without the displacements:
/// (k + [n/2]) sqrt(1 - lambda^2) = (n + 1/2) sqrt(1 - lambda^2) / 2.
pub fn unmodified_eigenvalue(lambda: f64, n: usize) -> f64 {
    (Parity::of(n).bargmann_k() + (n / 2) as f64) * (1.0 - lambda * lambda).sqrt()
}

/// The analytic |z,u,v;k> for the targets, on Fock levels.
pub fn analytic_state(t: &SchemeTargets, parity: Parity, opts: &BuildOptions) -> Result<StateVector> {
    even_odd_state(t.z, C64::new(t.u, 0.0), C64::new(t.v, 0.0), C64::new(0.0, 0.0), parity, opts)
}

/// Interaction strengths times durations: H1 = (g1 a^dag^2 + h.c.)/2 acting
/// for unit time with g1 = g1t1, likewise H2 = (g2 a^dag b^dag + h.c.)/2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub g1t1: C64,
    pub g2t2: C64,
}

/// chi reached by the amplifiers. exp(-iH2) squeezes with parameter
/// |g2t2|/2, and exp(-iH1) carries a phase -i, so
/// chi = i e^{i(theta1 - 2 theta2)} tanh|g1t1| / sinh^2(|g2t2|/2).
pub fn chi_from_physical(p: &PhysicalParams) -> C64 {
    let s = p.g2t2.norm() / 2.0;
    let th1 = p.g1t1.arg();
    let th2 = p.g2t2.arg();
    I * C64::from_polar(p.g1t1.norm().tanh() / s.sinh().powi(2), th1 - 2.0 * th2)
}

/// The relation as usually quoted, without the half-angle and phase factor.
pub fn chi_quoted(p: &PhysicalParams) -> C64 {
    C64::from_polar(p.g1t1.norm().tanh() / p.g2t2.norm().sinh().powi(2), p.g1t1.arg() - 2.0 * p.g2t2.arg())
}

/// Amplifier settings realizing `chi` with two-mode squeeze parameter
/// `s = |g2t2|/2` and real g2.
pub fn physical_for_chi(chi: C64, s: f64) -> Result<PhysicalParams> {
    let x = chi.norm() * s.sinh().powi(2);
    if !(x < 1.0) || !(s > 0.0) {
        return Err(Error::Invalid(format!("|chi| sinh^2 s = {x} must lie in (0, 1)")));
    }
    let th1 = chi.arg() - std::f64::consts::FRAC_PI_2;
    Ok(PhysicalParams { g1t1: C64::from_polar(x.atanh(), th1), g2t2: C64::new(2.0 * s, 0.0) })
}

/// gamma2 that cancels the displacement left over from gamma1 when the
/// input is vacuum and n = 0: cosh(w/2) g2 - sinh(w/2) g2* = -e^{i phi/2} g1.
pub fn cancelling_gamma2(cfg: &SchemeConfig) -> C64 {
    let om = cfg.omega();
    let r = -C64::from_polar(1.0, cfg.phi() / 2.0) * cfg.gamma1;
    C64::new((om / 2.0).exp() * r.re, (-om / 2.0).exp() * r.im)
}

#[derive(Clone, Debug)]
pub struct SimulationOutput {
    pub state: StateVector,
    pub probability: f64,
    pub tail_a: f64,
    pub tail_b: f64,
    pub alpha: C64,
    pub gamma2: C64,
}

/// Runs the optical pipeline on truncated Fock spaces:
/// |alpha>|0> -> exp(-iH1) -> exp(-iH2) -> project a on |n> -> D(gamma1)
/// -> exp(i phi K3) -> exp(i omega K2) -> D(gamma2), returning mode b.
/// The SU(1,1) factor exp(i omega K2) exp(i phi K3) acts right to left.
pub fn simulate_scheme(cfg: &SchemeConfig, phys: &PhysicalParams, cutoff_a: usize, cutoff_b: usize) -> Result<SimulationOutput> {
    cfg.validate()?;
    let targets = scheme_targets(cfg)?;
    let alpha = cfg.alpha.unwrap_or(targets.alpha_tilde);
    let gamma2 = cfg.gamma2.unwrap_or(targets.gamma2);
    let ba = build_boson_operators(cutoff_a)?;
    let bb = build_boson_operators(cutoff_b)?;

    let vac_a = StateVector::basis_vector(Basis::fock(cutoff_a), 0)?;
    let psi_a = vac_a.evolve(&displacement_generator(&ba.a, &ba.a_dag, alpha), C64::new(1.0, 0.0))?;
    let a2 = &ba.a * &ba.a;
    let ad2 = &ba.a_dag * &ba.a_dag;
    let h1 = combination(&[(0.5 * phys.g1t1, &ad2), (0.5 * phys.g1t1.conj(), &a2)]);
    let psi_a = psi_a.evolve(&h1, -I)?;

    let vac_b = StateVector::basis_vector(Basis::fock(cutoff_b), 0)?;
    let two = TwoModeState::product(&psi_a, &vac_b)?.to_state_vector();
    let ab = embed_two_mode(&ba.a, 0, cutoff_b).matmul(&embed_two_mode(&bb.a, 1, cutoff_a));
    let h2 = combination(&[(0.5 * phys.g2t2, &ab.adjoint()), (0.5 * phys.g2t2.conj(), &ab)]);
    let two = TwoModeState::from_state_vector(&two.evolve(&h2, -I)?)?;
    let tail_a = two.tail_mass_a();
    let (psi_b, probability) = two.project_a(cfg.n)?;

    let k = build_one_mode_quadratic_full(cutoff_b)?;
    let out = psi_b
        .evolve(&displacement_generator(&bb.a, &bb.a_dag, cfg.gamma1), C64::new(1.0, 0.0))?
        .evolve(&k.k3, I * cfg.phi())?
        .evolve(&k.k2, I * cfg.omega())?
        .evolve(&displacement_generator(&bb.a, &bb.a_dag, gamma2), C64::new(1.0, 0.0))?;
    let out = out.normalize()?;
    let tail_b = out.tail_mass();
    Ok(SimulationOutput { state: out, probability, tail_a, tail_b, alpha, gamma2 })
}

/// g a^dag - g* a, so that exp of it is D(g).
fn displacement_generator(a: &OperatorMatrix, a_dag: &OperatorMatrix, g: C64) -> OperatorMatrix {
    combination(&[(g, a_dag), (-g.conj(), a)])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeVerification {
    /// <A> for A = lambda K1 - i K2
    pub fitted_eigenvalue: C64,
    /// <A>/sqrt(lambda), comparable with z of u K- + v K+
    pub fitted_z: C64,
    /// ||(A - <A>) psi||
    pub residual: f64,
    /// residual^2 = <A^dag A> - |<A>|^2
    pub a_variance: f64,
    pub relative_z_error: f64,
    /// |<analytic|psi>| when the analytic state could be built
    pub fidelity: Option<f64>,
}

/// Checks that a Fock-basis state is an eigenstate of lambda K1 - i K2.
pub fn verify_scheme_output(state: &StateVector, lambda: f64, expected_z: C64, parity: Parity) -> Result<SchemeVerification> {
    let cutoff = match state.basis() {
        Basis::Fock { cutoff } => *cutoff,
        _ => return Err(Error::BasisMismatch),
    };
    let k = build_one_mode_quadratic_full(cutoff)?;
    let a = combination(&[(C64::new(lambda, 0.0), &k.k1), (-I, &k.k2)]);
    let m = state.expectation(&a)?;
    let residual = state.eigen_residual(&a, m)?;
    let fitted_z = m / lambda.sqrt();
    let sl = lambda.sqrt();
    let (u, v) = ((lambda + 1.0) / (2.0 * sl), (lambda - 1.0) / (2.0 * sl));
    let fidelity = even_odd_state(expected_z, C64::new(u, 0.0), C64::new(v, 0.0), C64::new(0.0, 0.0), parity, &BuildOptions::default())
        .ok()
        .and_then(|s| fock_overlap(&s, state));
    Ok(SchemeVerification {
        fitted_eigenvalue: m,
        fitted_z,
        residual,
        a_variance: residual * residual,
        relative_z_error: (fitted_z - expected_z).norm() / expected_z.norm().max(1e-300),
        fidelity,
    })
}

/// |<a|b>| for Fock states of possibly different cutoffs.
pub fn fock_overlap(a: &StateVector, b: &StateVector) -> Option<f64> {
    match (a.basis(), b.basis()) {
        (Basis::Fock { .. }, Basis::Fock { .. }) => {
            let s: C64 = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x.conj() * y).sum();
            Some(s.norm() / (a.norm() * b.norm()))
        }
        _ => None,
    }
}
