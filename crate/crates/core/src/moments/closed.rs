use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{Basis, Parity, StateVector};
use crate::su11::{self, BuildOptions, Su11Params};

/// <K3> by direct summation, with the derivative formula as a cross-check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanK3 {
    pub direct: f64,
    /// k + s N^2 dN^-2/ds with zeta and a held fixed; None when the Gauss
    /// function formula does not apply.
    pub closed_form: Option<f64>,
}

pub fn mean_k3(p: &Su11Params, opts: &BuildOptions) -> Result<MeanK3> {
    let s = su11::construct(p, opts)?;
    let direct = ladder_mean_k3(&s.state, p.k);
    let closed_form = if su11::is_degenerate(p) {
        None
    } else {
        let d = su11::derive(p)?;
        let h = 1e-5 * d.s.abs().max(1e-3);
        let f = |s: f64| su11::norm_inverse_at(s, d.zeta, d.a, p.k);
        match (f(d.s), f(d.s + h), f(d.s - h)) {
            (Some(n0), Some(np), Some(nm)) => Some(p.k + d.s * (np - nm) / (2.0 * h) / n0),
            _ => None,
        }
    };
    Ok(MeanK3 { direct, closed_form })
}

fn ladder_mean_k3(state: &StateVector, k: f64) -> f64 {
    state.amplitudes().iter().enumerate().map(|(m, c)| (k + m as f64) * c.norm_sqr()).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KVariances {
    pub var_k1: f64,
    pub var_k2: f64,
    pub cov_k1k2: f64,
    pub mean_k3: f64,
}

fn require_w0(p: &Su11Params) -> Result<f64> {
    if p.w.norm() != 0.0 {
        return Err(Error::RequiresW0);
    }
    let d = p.u.norm_sqr() - p.v.norm_sqr();
    if !(d > 0.0) {
        return Err(Error::RequiresUOverV);
    }
    Ok(d)
}

/// Second moments of K1, K2 in |z,u,v,0;k> in terms of <K3>.
pub fn closed_form_k_variances(p: &Su11Params, opts: &BuildOptions) -> Result<KVariances> {
    let d = require_w0(p)?;
    let k3 = mean_k3(p, opts)?.direct;
    Ok(KVariances {
        var_k1: 0.5 * (p.u - p.v).norm_sqr() * k3 / d,
        var_k2: 0.5 * (p.u + p.v).norm_sqr() * k3 / d,
        cov_k1k2: (p.u.conj() * p.v).im * k3 / d,
        mean_k3: k3,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureVariances {
    pub var_q: f64,
    pub var_p: f64,
    pub mean_n: f64,
}

/// Var q and Var p of the even/odd one-mode state with w = 0, using
/// <a^dag a> = 2<K3> - 1/2 and <a^2> = 2<K->.
pub fn quadrature_variances(z: C64, u: C64, v: C64, parity: Parity, opts: &BuildOptions) -> Result<QuadratureVariances> {
    let p = Su11Params::new(z, u, v, C64::new(0.0, 0.0), parity.bargmann_k())?;
    let d = require_w0(&p)?;
    let mean_n = 2.0 * mean_k3(&p, opts)?.direct - 0.5;
    let shift = 2.0 * ((u - v) * z.conj()).re / d;
    Ok(QuadratureVariances { var_q: 0.5 + mean_n + shift, var_p: 0.5 + mean_n - shift, mean_n })
}

/// Normally ordered moments of a Fock-basis state, evaluated on the
/// truncated amplitudes (levels beyond the cutoff count as zero).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FockMoments {
    pub a: C64,
    pub a2: C64,
    pub a4: C64,
    pub n: f64,
    pub n2: f64,
    /// <a^dag^2 a^2>
    pub ad2a2: f64,
}

fn lowering_moment(c: &[C64], r: usize) -> C64 {
    // <a^r> = sum_n conj(c_n) c_{n+r} sqrt((n+1)...(n+r))
    let mut acc = C64::new(0.0, 0.0);
    for n in 0..c.len().saturating_sub(r) {
        let f: f64 = (1..=r).map(|j| (n + j) as f64).product::<f64>().sqrt();
        acc += c[n].conj() * c[n + r] * f;
    }
    acc
}

pub fn fock_moments(state: &StateVector) -> Result<FockMoments> {
    if !matches!(state.basis(), Basis::Fock { .. }) {
        return Err(Error::BasisMismatch);
    }
    let c = state.amplitudes();
    let mut n = 0.0;
    let mut n2 = 0.0;
    let mut ad2a2 = 0.0;
    for (k, x) in c.iter().enumerate() {
        let p = x.norm_sqr();
        let kf = k as f64;
        n += kf * p;
        n2 += kf * kf * p;
        ad2a2 += kf * (kf - 1.0) * p;
    }
    Ok(FockMoments { a: lowering_moment(c, 1), a2: lowering_moment(c, 2), a4: lowering_moment(c, 4), n, n2, ad2a2 })
}

/// Quadrature and squared-amplitude variances of a parity state;
/// K~1 = (a^2 + a^dag^2)/sqrt 2, K~2 = i(a^dag^2 - a^2)/sqrt 2 so that the
/// vacuum has unit variance in both.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatVariances {
    pub var_q: f64,
    pub var_p: f64,
    pub var_k1t: f64,
    pub var_k2t: f64,
    /// |<a>|; the formulas assume it vanishes.
    pub mean_a_abs: f64,
    pub parity_ok: bool,
}

pub fn cat_variances(state: &StateVector) -> Result<CatVariances> {
    let m = fock_moments(state)?;
    let sq2 = std::f64::consts::SQRT_2;
    let k1 = sq2 * m.a2.re;
    let k2 = sq2 * m.a2.im;
    let base = 1.0 + 2.0 * m.n + m.ad2a2;
    let mean_a_abs = m.a.norm();
    Ok(CatVariances {
        var_q: 0.5 + m.n + m.a2.re,
        var_p: 0.5 + m.n - m.a2.re,
        var_k1t: base + m.a4.re - k1 * k1,
        var_k2t: base - m.a4.re - k2 * k2,
        mean_a_abs,
        parity_ok: mean_a_abs <= 1e-10,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhotonStatistics {
    pub distribution: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
    /// (Var n - <n>)/<n>
    pub mandel_q: f64,
}

pub fn photon_statistics(state: &StateVector) -> Result<PhotonStatistics> {
    if !matches!(state.basis(), Basis::Fock { .. }) {
        return Err(Error::BasisMismatch);
    }
    let total: f64 = state.amplitudes().iter().map(|c| c.norm_sqr()).sum();
    let distribution: Vec<f64> = state.amplitudes().iter().map(|c| c.norm_sqr() / total).collect();
    let mean: f64 = distribution.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let second: f64 = distribution.iter().enumerate().map(|(n, p)| (n * n) as f64 * p).sum();
    let variance = second - mean * mean;
    let mandel_q = if mean > 0.0 { (variance - mean) / mean } else { 0.0 };
    Ok(PhotonStatistics { distribution, mean, variance, mandel_q })
}

/// Poisson probabilities with the given mean, for plotting alongside p(n).
pub fn poisson_reference(mean: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut lp = -mean;
    for n in 0..len {
        if n > 0 {
            lp += mean.ln() - (n as f64).ln();
        }
        out.push(lp.exp());
    }
    out
}
