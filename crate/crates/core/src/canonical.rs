//! Canonical multimode squeezed states: eigenstates of A = beta1 p + beta2 q.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{build_boson_operators, Basis, OperatorMatrix, StateVector};
use crate::io::ComplexMatrix;
use crate::moments::{assemble_b, condition_number, sigma_from_beta, uncertainty_matrix, UncertaintyReport};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// N operators A_nu = sum_i beta1_{nu i} p_i + beta2_{nu i} q_i with common
/// eigenvalues z_nu.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaMatrix {
    pub beta1: DMatrix<C64>,
    pub beta2: DMatrix<C64>,
    pub z: DVector<C64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaJson {
    pub beta1: ComplexMatrix,
    pub beta2: ComplexMatrix,
    #[serde(default)]
    pub z: Option<Vec<C64>>,
}

impl BetaMatrix {
    pub fn new(beta1: DMatrix<C64>, beta2: DMatrix<C64>, z: DVector<C64>) -> Result<Self> {
        let n = beta1.nrows();
        if beta1.ncols() != n || beta2.shape() != (n, n) || z.len() != n {
            return Err(Error::Dimension { expected: n, got: beta2.nrows() });
        }
        let b = BetaMatrix { beta1, beta2, z };
        let cond = condition_number(&assemble_b(&b.beta1, &b.beta2));
        if !(cond <= 1e12) {
            return Err(Error::SingularB { cond });
        }
        Ok(b)
    }

    /// A = P a + Q a^dag form of the same operators.
    pub fn from_ladder(p: DMatrix<C64>, q: DMatrix<C64>, z: DVector<C64>) -> Result<Self> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let beta2 = (&p + &q) * C64::new(r, 0.0);
        let beta1 = (&p - &q) * (I * r);
        Self::new(beta1, beta2, z)
    }

    pub fn modes(&self) -> usize {
        self.beta1.nrows()
    }

    /// (P, Q) with A = P a + Q a^dag.
    pub fn ladder_form(&self) -> (DMatrix<C64>, DMatrix<C64>) {
        let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let p = (&self.beta2 - &self.beta1 * I) * r;
        let q = (&self.beta2 + &self.beta1 * I) * r;
        (p, q)
    }

    /// [A_mu, A_nu^dag] = -i beta1 beta2^dag + i beta2 beta1^dag
    pub fn commutator_dagger(&self) -> DMatrix<C64> {
        (&self.beta1 * self.beta2.adjoint()) * (-I) + (&self.beta2 * self.beta1.adjoint()) * I
    }

    /// [A_mu, A_nu] = -i beta1 beta2^T + i beta2 beta1^T
    pub fn commutator_plain(&self) -> DMatrix<C64> {
        (&self.beta1 * self.beta2.transpose()) * (-I) + (&self.beta2 * self.beta1.transpose()) * I
    }

    /// max(|[A,A^dag] - 1|, |[A,A]|) entrywise.
    pub fn canonical_residual(&self) -> f64 {
        let n = self.modes();
        let d = self.commutator_dagger() - DMatrix::<C64>::identity(n, n);
        let e = self.commutator_plain();
        d.iter().chain(e.iter()).map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> BetaJson {
        BetaJson {
            beta1: ComplexMatrix::from(&self.beta1),
            beta2: ComplexMatrix::from(&self.beta2),
            z: Some(self.z.iter().cloned().collect()),
        }
    }

    pub fn from_json(j: &BetaJson) -> Result<Self> {
        let beta1 = j.beta1.to_dmatrix()?;
        let beta2 = j.beta2.to_dmatrix()?;
        let n = beta1.nrows();
        let z = match &j.z {
            Some(z) => DVector::from_vec(z.clone()),
            None => DVector::zeros(n),
        };
        Self::new(beta1, beta2, z)
    }
}

/// psi(q) proportional to exp(-q^T M q + N^T q).
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianParams {
    pub m: DMatrix<C64>,
    pub nvec: DVector<C64>,
}

fn asymmetry(m: &DMatrix<C64>) -> f64 {
    (m - m.transpose()).iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn is_positive_definite(r: &DMatrix<f64>) -> bool {
    r.clone().cholesky().is_some()
}

impl GaussianParams {
    pub fn new(m: DMatrix<C64>, nvec: DVector<C64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n || nvec.len() != n {
            return Err(Error::Dimension { expected: n, got: nvec.len() });
        }
        let scale = m.iter().map(|x| x.norm()).fold(1.0, f64::max);
        if asymmetry(&m) > 1e-12 * scale {
            return Err(Error::Invalid("M is not symmetric".into()));
        }
        let g = GaussianParams { m, nvec };
        if !is_positive_definite(&g.re_part_twice()) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(g)
    }

    /// M + M^* = 2 Re M
    pub fn re_part_twice(&self) -> DMatrix<f64> {
        self.m.map(|x| 2.0 * x.re)
    }
}

/// M = (i/2) beta1^-1 beta2, N = i beta1^-1 z.
pub fn gaussian_from_beta(b: &BetaMatrix) -> Result<GaussianParams> {
    let inv = b.beta1.clone().try_inverse().ok_or(Error::SingularBeta1)?;
    if condition_number(&b.beta1) > 1e12 {
        return Err(Error::SingularBeta1);
    }
    let m = (&inv * &b.beta2) * (I * 0.5);
    let scale = m.iter().map(|x| x.norm()).fold(1.0, f64::max);
    if asymmetry(&m) > 1e-10 * scale {
        return Err(Error::Invalid("operators do not commute; no common eigenstate".into()));
    }
    let m = (&m + m.transpose()) * C64::new(0.5, 0.0);
    let nvec = (&inv * &b.z) * I;
    GaussianParams::new(m, nvec)
}

/// Canonical operators whose common eigenstate is the given Gaussian.
///
/// With M + M^* = O D O^T (eigenvalues descending, first nonzero entry of
/// each eigenvector positive), beta = D^{-1/2} O^T / sqrt 2 makes
/// beta (M + M^*) beta^dag = 1/2, and gamma = -2i beta M^T.
pub fn beta_from_m(g: &GaussianParams) -> Result<BetaMatrix> {
    let r = g.re_part_twice();
    let n = r.nrows();
    let eig = SymmetricEigen::new(r);
    if eig.eigenvalues.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::NotPositiveDefinite);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let mut beta = DMatrix::<C64>::zeros(n, n);
    for (row, &col) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(col);
        let sign = v.iter().find(|x| x.abs() > 1e-14).map_or(1.0, |x| x.signum());
        let f = sign / (2.0 * eig.eigenvalues[col]).sqrt();
        for j in 0..n {
            beta[(row, j)] = C64::new(f * v[j], 0.0);
        }
    }
    let gamma = (&beta * g.m.transpose()) * (-2.0 * I);
    // N = i beta^-1 z  =>  z = -i beta N
    let z = (&beta * &g.nvec) * (-I);
    BetaMatrix::new(beta, gamma, z)
}

/// beta M beta^T - beta M^T beta^T, zero for symmetric M.
pub fn second_condition_residual(beta: &DMatrix<C64>, m: &DMatrix<C64>) -> f64 {
    let d = beta * m * beta.transpose() - beta * m.transpose() * beta.transpose();
    d.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaReport {
    /// Lambda_{nu i} = Re beta_{nu i}, Lambda_{N+nu, i} = -Im beta_{nu i}
    /// over beta = [beta1 | beta2].
    pub lambda: DMatrix<f64>,
    pub det: f64,
    pub cond: f64,
    pub singular: bool,
}

pub fn lambda_from_beta(b: &BetaMatrix) -> LambdaReport {
    let lambda = lambda_matrix(&b.beta1, &b.beta2);
    let det = lambda.clone().determinant();
    let sv = lambda.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let cond = if min == 0.0 { f64::INFINITY } else { max / min };
    LambdaReport { lambda, det, cond, singular: !(cond <= 1e12) }
}

/// Lambda without the BetaMatrix validation, so singular cases can be probed.
pub fn lambda_matrix(beta1: &DMatrix<C64>, beta2: &DMatrix<C64>) -> DMatrix<f64> {
    let n = beta1.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let x = if c < n { beta1[(r % n, c)] } else { beta2[(r % n, c - n)] };
        if r < n {
            x.re
        } else {
            -x.im
        }
    })
}

/// Fock amplitudes of the common eigenstate for N = 1 or 2.
///
/// With A = P a + Q a^dag the state is exp(a^dag T a^dag / 2 + b a^dag)|0>
/// with T = -P^-1 Q and b = P^-1 z, giving
/// sqrt(n_i + 1) c_{n+e_i} = b_i c_n + sum_j T_ij sqrt(n_j) c_{n-e_j}.
pub fn materialize(b: &BetaMatrix, cutoff: usize) -> Result<StateVector> {
    let n = b.modes();
    let (p, q) = b.ladder_form();
    let pinv = p.try_inverse().ok_or(Error::SingularB { cond: f64::INFINITY })?;
    let t = -(&pinv * q);
    let bv = &pinv * &b.z;
    let dim = cutoff + 1;
    match n {
        1 => {
            let mut c = vec![C64::new(0.0, 0.0); dim];
            c[0] = C64::new(1.0, 0.0);
            for k in 0..cutoff {
                let back = if k >= 1 { t[(0, 0)] * (k as f64).sqrt() * c[k - 1] } else { C64::new(0.0, 0.0) };
                c[k + 1] = (bv[0] * c[k] + back) / ((k + 1) as f64).sqrt();
            }
            StateVector::normalized(Basis::fock(cutoff), c)
        }
        2 => {
            let idx = |i: usize, j: usize| i * dim + j;
            let mut c = vec![C64::new(0.0, 0.0); dim * dim];
            c[0] = C64::new(1.0, 0.0);
            for total in 1..=(2 * cutoff) {
                for i in total.saturating_sub(cutoff)..=total.min(cutoff) {
                    let j = total - i;
                    // raise along mode 0 when possible, else along mode 1
                    let (mode, n0, n1) = if i > 0 { (0, i - 1, j) } else { (1, i, j - 1) };
                    let from = [n0, n1];
                    let mut acc = bv[mode] * c[idx(n0, n1)];
                    for (jm, &nj) in from.iter().enumerate() {
                        if nj > 0 {
                            let prev = if jm == 0 { idx(n0 - 1, n1) } else { idx(n0, n1 - 1) };
                            acc += t[(mode, jm)] * (nj as f64).sqrt() * c[prev];
                        }
                    }
                    c[idx(i, j)] = acc / ((from[mode] + 1) as f64).sqrt();
                }
            }
            StateVector::normalized(Basis::Modes(vec![cutoff, cutoff]), c)
        }
        _ => Err(Error::Invalid("Fock materialization supports N = 1 or 2".into())),
    }
}

/// Quadratures in the ordering (p_1..p_N, q_1..q_N) on a Fock grid.
pub fn quadrature_operators(modes: usize, cutoff: usize) -> Result<(Vec<OperatorMatrix>, Vec<OperatorMatrix>)> {
    let ops = build_boson_operators(cutoff)?;
    match modes {
        1 => Ok((vec![ops.p], vec![ops.q])),
        2 => {
            let id = OperatorMatrix::identity(Basis::fock(cutoff));
            Ok((vec![ops.p.kron(&id), id.kron(&ops.p)], vec![ops.q.kron(&id), id.kron(&ops.q)]))
        }
        _ => Err(Error::Invalid("Fock grids support N = 1 or 2".into())),
    }
}

/// The operators A_nu as Fock matrices.
pub fn a_operators(b: &BetaMatrix, cutoff: usize) -> Result<Vec<OperatorMatrix>> {
    let (ps, qs) = quadrature_operators(b.modes(), cutoff)?;
    let n = b.modes();
    Ok((0..n)
        .map(|nu| {
            let mut acc = OperatorMatrix::zeros(ps[0].basis().clone());
            for i in 0..n {
                acc = acc.axpy(b.beta1[(nu, i)], &ps[i]).axpy(b.beta2[(nu, i)], &qs[i]);
            }
            acc
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct HnRisReport {
    pub report: UncertaintyReport,
    /// sigma from the beta formula with C' = [A, A^dag]/2
    pub sigma_beta: DMatrix<f64>,
    pub max_sigma_diff: f64,
    /// |det sigma - det C| / det C
    pub saturation: f64,
    /// max_nu ||(A_nu - z_nu) psi||
    pub eigen_residual: f64,
    pub tail_mass: f64,
}

/// Builds the common eigenstate on a Fock grid and checks that it saturates
/// the Robertson inequality for (p, q) and that sigma matches the beta formula.
pub fn verify_hn_ris(b: &BetaMatrix, cutoff: usize) -> Result<HnRisReport> {
    let state = materialize(b, cutoff)?;
    let (ps, qs) = quadrature_operators(b.modes(), cutoff)?;
    let obs: Vec<&OperatorMatrix> = ps.iter().chain(qs.iter()).collect();
    let report = uncertainty_matrix(&state, &obs)?;
    let cprime = b.commutator_dagger() * C64::new(0.5, 0.0);
    let sigma_beta = sigma_from_beta(&b.beta1, &b.beta2, &cprime)?;
    let max_sigma_diff = (&report.sigma - &sigma_beta).iter().map(|x| x.abs()).fold(0.0, f64::max);
    let saturation = report.saturation(1e-300);
    let mut eigen_residual = 0.0f64;
    for (nu, a) in a_operators(b, cutoff)?.iter().enumerate() {
        eigen_residual = eigen_residual.max(state.eigen_residual(a, b.z[nu])?);
    }
    Ok(HnRisReport { report, sigma_beta, max_sigma_diff, saturation, eigen_residual, tail_mass: state.tail_mass() })
}
