use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::bigfloat::ln_terminating_2f1;
use super::params::{derive, derive_branch, is_degenerate, is_normalizable, Branch, DerivedParams, Su11Params};
use crate::error::{Error, Result};
use crate::fock::{Basis, LadderBasis, OperatorMatrix, Parity, StateVector};

/// Truncation policy for state construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// First ladder cutoff tried.
    pub cutoff: usize,
    /// Hard cap for automatic doubling.
    pub max_cutoff: usize,
    /// Accepted probability in the top 10% of levels.
    pub tail_tol: f64,
    /// Accepted eigen-residual leaking through the truncation edge.
    pub leak_tol: f64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { cutoff: 256, max_cutoff: 4096, tail_tol: 1e-12, leak_tol: 1e-10 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Recurrence,
    ClosedForm,
}

/// A constructed eigenstate with its convergence diagnostics.
#[derive(Clone, Debug)]
pub struct Su11State {
    pub params: Su11Params,
    pub state: StateVector,
    /// ||(A - z)psi|| caused by truncation, from the first dropped coefficient.
    pub leak: f64,
    pub method: Method,
}

/// Unnormalized coefficients C_0..=C_{M+1} with C_0 = 1 (or a rescaled
/// multiple of it).
fn recurrence_raw(p: &Su11Params, cutoff: usize) -> Vec<C64> {
    let k = p.k;
    let mut c = vec![C64::new(0.0, 0.0); cutoff + 2];
    c[0] = C64::new(1.0, 0.0);
    for m in 0..=cutoff {
        let mf = m as f64;
        let prev = if m >= 1 { c[m - 1] * (mf * (mf - 1.0 + 2.0 * k)).sqrt() } else { C64::new(0.0, 0.0) };
        let next = ((p.z - p.w * (k + mf)) * c[m] - p.v * prev) / (p.u * ((mf + 1.0) * (mf + 2.0 * k)).sqrt());
        c[m + 1] = next;
        if next.norm() > 1e150 {
            for x in c[..=m + 1].iter_mut() {
                *x *= 1e-150;
            }
        }
    }
    c
}

fn normalize_with_leak(p: &Su11Params, raw: &[C64], basis: LadderBasis) -> Result<(StateVector, f64)> {
    let m = basis.cutoff();
    let norm = raw[..=m].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::NonConvergent { tail_mass: f64::INFINITY, cutoff: m });
    }
    let mf = m as f64;
    let edge = p.u.norm() * ((mf + 1.0) * (mf + 2.0 * p.k)).sqrt();
    let leak = edge * raw[m + 1].norm() / norm;
    let amps = raw[..=m].iter().map(|x| x / norm).collect();
    Ok((StateVector::new(Basis::Ladder(basis), amps)?, leak))
}

/// Three-term recurrence solution on a fixed basis, normalized.
///
/// Errors with `NonConvergent` when the tail mass exceeds 1e-12.
pub fn coefficients_recurrence(p: &Su11Params, basis: &LadderBasis) -> Result<StateVector> {
    p.validate()?;
    let raw = recurrence_raw(&p.with_k(basis.k()), basis.cutoff());
    let (state, _) = normalize_with_leak(p, &raw, *basis)?;
    if !state.is_converged(BuildOptions::default().tail_tol) {
        return Err(Error::NonConvergent { tail_mass: state.tail_mass(), cutoff: basis.cutoff() });
    }
    Ok(state)
}

/// Natural logs of g_m = c^m sqrt((2k)_m/m!) 2F1(a,-m;2k;zeta), m = 0..=cutoff.
/// `None` marks an exactly vanishing coefficient.
pub fn closed_form_log_coefficients(d: &DerivedParams, k: f64, cutoff: usize) -> Vec<Option<C64>> {
    let lnc = d.c.ln();
    let mut lpoch = 0.0;
    let mut out = Vec::with_capacity(cutoff + 1);
    for m in 0..=cutoff {
        if m > 0 {
            let j = (m - 1) as f64;
            lpoch += ((2.0 * k + j) / (j + 1.0)).ln();
        }
        let lpref = lnc * m as f64 + 0.5 * lpoch;
        let scale_log2 = lpref.re / std::f64::consts::LN_2;
        out.push(ln_terminating_2f1(d.a, m, 2.0 * k, d.zeta, scale_log2).map(|lf| lf + lpref));
    }
    out
}

/// Unnormalized closed-form coefficients g_0..=g_len-1 rescaled so the
/// largest has modulus 1.
fn closed_form_raw(d: &DerivedParams, k: f64, len: usize) -> Vec<C64> {
    let logs = closed_form_log_coefficients(d, k, len - 1);
    let top = logs.iter().flatten().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    logs.iter().map(|l| l.map_or(C64::new(0.0, 0.0), |l| (l - top).exp())).collect()
}

fn closed_form_with(d: &DerivedParams, basis: &LadderBasis) -> Result<StateVector> {
    StateVector::normalized(Basis::Ladder(*basis), closed_form_raw(d, basis.k(), basis.dim()))
}

/// Derived parameters for the closed form. For a terminating series the
/// surviving branch is used and a is snapped to the exact integer.
fn closed_form_params(p: &Su11Params) -> Result<DerivedParams> {
    match is_normalizable(p).terminating {
        Some(t) => {
            let branch = if t.flipped { Branch::Flipped } else { Branch::Principal };
            let mut d = derive_branch(p, branch)?;
            d.a = C64::new(-(t.n as f64), 0.0);
            Ok(d)
        }
        // the series is branch independent; v = 0 can put c = 0 on the principal one
        None => derive(p).or_else(|_| derive_branch(p, Branch::Flipped)),
    }
}

/// The forward recurrence is unstable when one characteristic root lies
/// outside the unit circle; the terminating closed form is used instead.
fn needs_closed_form(p: &Su11Params) -> bool {
    is_normalizable(p).terminating.is_some() && p.v.norm() != 0.0
}

/// Closed-form hypergeometric coefficients, normalized by direct summation.
/// Falls back to the recurrence when the Killing invariant vanishes.
pub fn coefficients_closed_form(p: &Su11Params, basis: &LadderBasis) -> Result<StateVector> {
    p.validate()?;
    let p = p.with_k(basis.k());
    if is_degenerate(&p) || (is_normalizable(&p).terminating.is_some() && p.v.norm() == 0.0) {
        return coefficients_recurrence(&p, basis);
    }
    let d = closed_form_params(&p)?;
    let state = closed_form_with(&d, basis)?;
    if !state.is_converged(BuildOptions::default().tail_tol) {
        return Err(Error::NonConvergent { tail_mass: state.tail_mass(), cutoff: basis.cutoff() });
    }
    Ok(state)
}

/// Closed form evaluated on a chosen square-root branch of l.
pub fn coefficients_closed_form_branch(p: &Su11Params, basis: &LadderBasis, branch: Branch) -> Result<StateVector> {
    p.validate()?;
    let p = p.with_k(basis.k());
    let d = derive_branch(&p, branch)?;
    closed_form_with(&d, basis)
}

/// Builds |z,u,v,w;k> by recurrence, doubling the cutoff until both the tail
/// mass and the truncation leak are below tolerance.
pub fn construct(p: &Su11Params, opts: &BuildOptions) -> Result<Su11State> {
    p.validate()?;
    let closed = if needs_closed_form(p) { Some(closed_form_params(p)?) } else { None };
    let mut cutoff = opts.cutoff.max(1);
    loop {
        let basis = LadderBasis::with_any_k(p.k, cutoff)?;
        let raw = match &closed {
            Some(d) => closed_form_raw(d, p.k, cutoff + 2),
            None => recurrence_raw(p, cutoff),
        };
        let (state, leak) = normalize_with_leak(p, &raw, basis)?;
        if state.tail_mass() < opts.tail_tol && leak < opts.leak_tol {
            let method = if closed.is_some() { Method::ClosedForm } else { Method::Recurrence };
            return Ok(Su11State { params: *p, state, leak, method });
        }
        if cutoff >= opts.max_cutoff {
            return Err(Error::NonConvergent { tail_mass: state.tail_mass().max(leak), cutoff });
        }
        cutoff = (cutoff * 2).min(opts.max_cutoff);
    }
}

/// Same as `construct` but with closed-form coefficients at the cutoff the
/// recurrence found sufficient.
pub fn construct_closed_form(p: &Su11Params, opts: &BuildOptions) -> Result<Su11State> {
    let rec = construct(p, opts)?;
    if is_degenerate(p) || rec.method == Method::ClosedForm {
        return Ok(rec);
    }
    let basis = match rec.state.basis() {
        Basis::Ladder(b) => *b,
        _ => unreachable!("construct returns ladder states"),
    };
    let state = coefficients_closed_form(p, &basis)?;
    Ok(Su11State { state, method: Method::ClosedForm, ..rec })
}

/// Maps a ladder state with k = 1/4 (3/4) onto even (odd) Fock levels.
pub fn ladder_to_fock(state: &StateVector, parity: Parity, fock_cutoff: usize) -> Result<StateVector> {
    let off = parity.offset();
    let mut amps = vec![C64::new(0.0, 0.0); fock_cutoff + 1];
    for (m, c) in state.amplitudes().iter().enumerate() {
        let n = 2 * m + off;
        if n > fock_cutoff {
            if c.norm() > 0.0 {
                return Err(Error::Dimension { expected: fock_cutoff + 1, got: n + 1 });
            }
            continue;
        }
        amps[n] = *c;
    }
    StateVector::new(Basis::fock(fock_cutoff), amps)
}

/// Even or odd one-mode state: the k = 1/4 or 3/4 solution placed on Fock
/// levels 2m or 2m+1. `opts.cutoff` counts Fock levels; it is doubled on
/// demand like `construct`.
pub fn even_odd_state(z: C64, u: C64, v: C64, w: C64, parity: Parity, opts: &BuildOptions) -> Result<StateVector> {
    let p = Su11Params::new(z, u, v, w, parity.bargmann_k())?;
    let ladder_opts = BuildOptions {
        cutoff: (opts.cutoff.saturating_sub(parity.offset()) / 2).max(1),
        max_cutoff: (opts.max_cutoff.saturating_sub(parity.offset()) / 2).max(1),
        ..*opts
    };
    let s = construct(&p, &ladder_opts)?;
    let m = s.state.dim() - 1;
    ladder_to_fock(&s.state, parity, 2 * m + 1)
}

/// N^-2 = sum |g_m|^2 from the Gauss-function formula with s = -|c|^2.
///
/// Returns None outside the region where that formula converges or is real.
pub fn norm_inverse_closed_form(d: &DerivedParams, k: f64) -> Option<f64> {
    norm_inverse_at(d.s, d.zeta, d.a, k)
}

pub(crate) fn norm_inverse_at(s: f64, zeta: C64, a: C64, k: f64) -> Option<f64> {
    let t = 1.0 + s - s * zeta;
    let x = -s * zeta.norm_sqr() / t.norm_sqr();
    if !(0.0..1.0).contains(&x) || 1.0 + s <= 0.0 {
        return None;
    }
    let f = gauss_2f1_conj(a, 2.0 * k, x)?;
    let pre = (1.0 + s).powf(-2.0 * k + 2.0 * a.re) * (-2.0 * (a * t.ln()).re).exp();
    let v = pre * f;
    if v.is_finite() {
        Some(v)
    } else {
        None
    }
}

/// 2F1(a, a*; b; x) for real 0 <= x < 1; all terms are non-negative.
fn gauss_2f1_conj(a: C64, b: f64, x: f64) -> Option<f64> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for j in 0..2_000_000usize {
        let jf = j as f64;
        term *= (a + jf).norm_sqr() / ((b + jf) * (jf + 1.0)) * x;
        sum += term;
        if term <= 1e-17 * sum && jf > (a.norm() + 1.0) * x / (1.0 - x) {
            return Some(sum);
        }
        if !sum.is_finite() {
            return None;
        }
    }
    None
}

/// Direct-sum N^-2 over the recurrence coefficients normalized to C_0 = 1.
pub fn norm_inverse_direct(p: &Su11Params, cutoff: usize) -> f64 {
    // recompute without rescaling so C_0 = 1 is kept
    let k = p.k;
    let mut prev = C64::new(0.0, 0.0);
    let mut cur = C64::new(1.0, 0.0);
    let mut sum = 1.0;
    for m in 0..cutoff {
        let mf = m as f64;
        let back = if m >= 1 { prev * (mf * (mf - 1.0 + 2.0 * k)).sqrt() } else { C64::new(0.0, 0.0) };
        let next = ((p.z - p.w * (k + mf)) * cur - p.v * back) / (p.u * ((mf + 1.0) * (mf + 2.0 * k)).sqrt());
        prev = cur;
        cur = next;
        sum += cur.norm_sqr();
    }
    sum
}

/// Eigenvector of a lower Hessenberg operator matrix (nonzero superdiagonal,
/// nothing above it) by forward substitution from psi_0 = 1. Works in any
/// realization, so it checks the ladder recurrence against the operator
/// matrices themselves.
pub fn eigenvector_by_substitution(op: &OperatorMatrix, z: C64) -> Result<StateVector> {
    let n = op.dim();
    let mut psi = vec![C64::new(0.0, 0.0); n];
    psi[0] = C64::new(1.0, 0.0);
    for i in 0..n - 1 {
        let mut acc = z * psi[i];
        let mut sup = C64::new(0.0, 0.0);
        for &(j, x) in &op.rows()[i] {
            if j == i + 1 {
                sup = x;
            } else if j > i + 1 {
                return Err(Error::Invalid(format!("entry ({i}, {j}) above the superdiagonal")));
            } else {
                acc -= x * psi[j];
            }
        }
        if sup.norm() == 0.0 {
            return Err(Error::Invalid(format!("zero superdiagonal at row {i}")));
        }
        psi[i + 1] = acc / sup;
    }
    StateVector::normalized(op.basis().clone(), psi)
}
