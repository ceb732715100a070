use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{OperatorMatrix, StateVector};
use crate::io::RealMatrix;

/// Second moments of a set of Hermitian observables in one state.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertaintyReport {
    /// sigma_ij = <X_i X_j + X_j X_i>/2 - <X_i><X_j>
    pub sigma: DMatrix<f64>,
    /// C_kj = (-i/2)<[X_k, X_j]>
    pub cmat: DMatrix<f64>,
    pub det_sigma: f64,
    pub det_c: f64,
    pub variances: Vec<f64>,
    pub means: Vec<f64>,
}

impl UncertaintyReport {
    pub fn from_matrices(sigma: DMatrix<f64>, cmat: DMatrix<f64>, means: Vec<f64>) -> Self {
        let det_sigma = sigma.clone().determinant();
        let det_c = cmat.clone().determinant();
        let variances = sigma.diagonal().iter().cloned().collect();
        UncertaintyReport { sigma, cmat, det_sigma, det_c, variances, means }
    }

    pub fn n(&self) -> usize {
        self.sigma.nrows()
    }

    /// det sigma - det C; non-negative for every physical state.
    pub fn robertson_slack(&self) -> f64 {
        self.det_sigma - self.det_c
    }

    /// |det sigma - det C| / max(det C, floor)
    pub fn saturation(&self, floor: f64) -> f64 {
        (self.det_sigma - self.det_c).abs() / self.det_c.abs().max(floor)
    }

    /// |det sigma - det C| / max(|det C|, prod sigma_ii). The product of the
    /// variances bounds det sigma, so this stays meaningful when det C = 0.
    pub fn relative_saturation(&self) -> f64 {
        let scale = self.variances.iter().product::<f64>().max(self.det_c.abs());
        (self.det_sigma - self.det_c).abs() / scale.max(f64::MIN_POSITIVE)
    }

    pub fn to_json(&self) -> UncertaintyJson {
        UncertaintyJson {
            sigma: RealMatrix::from(&self.sigma),
            cmat: RealMatrix::from(&self.cmat),
            det_sigma: self.det_sigma,
            det_c: self.det_c,
            variances: self.variances.clone(),
            means: self.means.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyJson {
    pub sigma: RealMatrix,
    pub cmat: RealMatrix,
    pub det_sigma: f64,
    pub det_c: f64,
    pub variances: Vec<f64>,
    pub means: Vec<f64>,
}

/// Uncertainty and commutator matrices of Hermitian observables.
///
/// With centered images y_i = (X_i - <X_i>) psi, sigma_ij = Re<y_i, y_j> and
/// C_ij = Im<y_i, y_j> = (-i/2)<[X_i, X_j]>. det sigma is taken from a QR
/// factorization of the stacked real and imaginary parts of the y_i, which
/// keeps it accurate when some combination of the X_i nearly annihilates
/// psi. For odd n, det C vanishes identically and is reported as 0.
pub fn uncertainty_matrix(state: &StateVector, observables: &[&OperatorMatrix]) -> Result<UncertaintyReport> {
    let n = observables.len();
    let psi = state.amplitudes();
    let dot = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    let mut centered = Vec::with_capacity(n);
    let mut means = Vec::with_capacity(n);
    for op in observables {
        if op.basis() != state.basis() {
            return Err(Error::BasisMismatch);
        }
        if !op.is_hermitian() {
            return Err(Error::NotHermitian(op.max_asymmetry()));
        }
        let y = op.apply(psi);
        let m = dot(psi, &y).re;
        means.push(m);
        centered.push(y.iter().zip(psi).map(|(a, p)| a - m * p).collect::<Vec<C64>>());
    }
    let mut sigma = DMatrix::zeros(n, n);
    let mut cmat = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let g = dot(&centered[i], &centered[j]);
            sigma[(i, j)] = g.re;
            sigma[(j, i)] = g.re;
            if i != j {
                cmat[(i, j)] = g.im;
                cmat[(j, i)] = -g.im;
            }
        }
    }
    let d = psi.len();
    let stacked = DMatrix::from_fn(2 * d, n, |r, c| if r < d { centered[c][r].re } else { centered[c][r - d].im });
    let det_sigma = if n == 0 { 1.0 } else { stacked.qr().r().diagonal().iter().map(|x| x * x).product() };
    let det_c = if n % 2 == 1 { 0.0 } else { cmat.clone().determinant() };
    let variances = sigma.diagonal().iter().cloned().collect();
    Ok(UncertaintyReport { sigma, cmat, det_sigma, det_c, variances, means })
}

/// 2-norm condition number from singular values.
pub fn condition_number(m: &DMatrix<C64>) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Assembles B = [[beta1, beta2], [conj beta1, conj beta2]].
pub fn assemble_b(beta1: &DMatrix<C64>, beta2: &DMatrix<C64>) -> DMatrix<C64> {
    let n = beta1.nrows();
    let mut b = DMatrix::zeros(2 * n, 2 * n);
    b.view_mut((0, 0), (n, n)).copy_from(beta1);
    b.view_mut((0, n), (n, n)).copy_from(beta2);
    b.view_mut((n, 0), (n, n)).copy_from(&beta1.map(|x| x.conj()));
    b.view_mut((n, n), (n, n)).copy_from(&beta2.map(|x| x.conj()));
    b
}

/// Uncertainty matrix of X = (X_1..X_N, X_{N+1}..X_{2N}) in a common
/// eigenstate of A_nu = sum_i beta1_{nu i} X_i + beta2_{nu i} X_{N+i}:
/// sigma = B^-1 [[0, C'], [C'^T, 0]] (B^-1)^T with C'_{nu mu} = <[A_nu, A_mu^dag]>/2.
pub fn sigma_from_beta(beta1: &DMatrix<C64>, beta2: &DMatrix<C64>, cprime: &DMatrix<C64>) -> Result<DMatrix<f64>> {
    let n = beta1.nrows();
    if beta1.ncols() != n || beta2.shape() != (n, n) || cprime.shape() != (n, n) {
        return Err(Error::Dimension { expected: n, got: beta2.nrows() });
    }
    let b = assemble_b(beta1, beta2);
    let cond = condition_number(&b);
    if !(cond <= 1e12) {
        return Err(Error::SingularB { cond });
    }
    let binv = b.try_inverse().ok_or(Error::SingularB { cond })?;
    let mut mid = DMatrix::zeros(2 * n, 2 * n);
    mid.view_mut((0, n), (n, n)).copy_from(cprime);
    mid.view_mut((n, 0), (n, n)).copy_from(&cprime.transpose());
    let s = &binv * mid * binv.transpose();
    // symmetrize away rounding; the exact result is real and symmetric
    Ok(DMatrix::from_fn(2 * n, 2 * n, |i, j| 0.5 * (s[(i, j)].re + s[(j, i)].re)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelativeFlag {
    Squeezed,
    NotSqueezed,
    /// Odd n or det C = 0: the relative criterion is undefined.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqueezeVerdict {
    /// Reference standard deviations Delta_0 per observable.
    pub reference: Vec<f64>,
    /// Var X_j < Delta_0^2
    pub absolute: Vec<bool>,
    /// Var X_j < (det C)^(1/n)
    pub relative: Vec<RelativeFlag>,
    /// every observable absolutely squeezed at once
    pub joint: bool,
}

/// Squeezing flags. `reference` holds Delta_0 for each observable (one value
/// is broadcast to all).
pub fn squeezing_predicates(report: &UncertaintyReport, reference: &[f64]) -> Result<SqueezeVerdict> {
    let n = report.n();
    let reference: Vec<f64> = match reference.len() {
        1 => vec![reference[0]; n],
        m if m == n => reference.to_vec(),
        m => return Err(Error::Dimension { expected: n, got: m }),
    };
    if reference.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::Invalid("reference Delta_0 must be positive".into()));
    }
    let absolute: Vec<bool> = report.variances.iter().zip(&reference).map(|(v, d)| *v < d * d).collect();
    let relative = if n % 2 == 1 || report.det_c.abs() <= 1e-14 || report.det_c < 0.0 {
        vec![RelativeFlag::NotApplicable; n]
    } else {
        let level = report.det_c.powf(1.0 / n as f64);
        report
            .variances
            .iter()
            .map(|&v| if v < level { RelativeFlag::Squeezed } else { RelativeFlag::NotSqueezed })
            .collect()
    };
    let joint = absolute.iter().all(|&a| a);
    Ok(SqueezeVerdict { reference, absolute, relative, joint })
}
