use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::basis::{Basis, LadderBasis};
use super::operator::OperatorMatrix;
use crate::error::{Error, Result};

/// Number of top levels (10%, at least one) counted as the truncation tail.
fn tail_len(dim: usize) -> usize {
    ((dim + 9) / 10).max(1)
}

fn tail_of(amps: &[C64]) -> f64 {
    let n = amps.len();
    amps[n - tail_len(n)..].iter().map(|c| c.norm_sqr()).sum()
}

/// Amplitude vector on a truncated basis, with its truncation tail mass.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: Basis,
    amplitudes: Vec<C64>,
    tail_mass: f64,
}

impl StateVector {
    /// Wraps amplitudes as given (no normalization).
    pub fn new(basis: Basis, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::Dimension { expected: basis.dim(), got: amplitudes.len() });
        }
        let tail_mass = match &basis {
            Basis::Modes(c) => per_mode_tails(c, &amplitudes).into_iter().fold(0.0, f64::max),
            _ => tail_of(&amplitudes),
        };
        Ok(StateVector { basis, amplitudes, tail_mass })
    }

    pub fn normalized(basis: Basis, amplitudes: Vec<C64>) -> Result<Self> {
        let s = Self::new(basis, amplitudes)?;
        s.normalize()
    }

    pub fn basis_vector(basis: Basis, index: usize) -> Result<Self> {
        let mut amps = vec![C64::new(0.0, 0.0); basis.dim()];
        if index >= amps.len() {
            return Err(Error::Dimension { expected: amps.len(), got: index + 1 });
        }
        amps[index] = C64::new(1.0, 0.0);
        Self::new(basis, amps)
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Probability mass in the top 10% of levels (max over modes for
    /// multimode bases).
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn is_converged(&self, tol: f64) -> bool {
        self.tail_mass < tol
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Invalid("cannot normalize a zero or non-finite vector".into()));
        }
        Self::new(self.basis.clone(), self.amplitudes.iter().map(|c| c / n).collect())
    }

    /// <self|other>
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// |<self|other>| for normalized vectors.
    pub fn overlap(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm() / (self.norm() * other.norm()))
    }

    pub fn apply(&self, op: &OperatorMatrix) -> Result<Self> {
        if op.basis() != &self.basis {
            return Err(Error::BasisMismatch);
        }
        Self::new(self.basis.clone(), op.apply(&self.amplitudes))
    }

    /// exp(s A)|self>
    pub fn evolve(&self, op: &OperatorMatrix, s: C64) -> Result<Self> {
        if op.basis() != &self.basis {
            return Err(Error::BasisMismatch);
        }
        Self::new(self.basis.clone(), op.exp_apply(s, &self.amplitudes))
    }

    /// <A>
    pub fn expectation(&self, op: &OperatorMatrix) -> Result<C64> {
        if op.basis() != &self.basis {
            return Err(Error::BasisMismatch);
        }
        let ax = op.apply(&self.amplitudes);
        Ok(self.amplitudes.iter().zip(&ax).map(|(a, b)| a.conj() * b).sum())
    }

    /// <X^2> - <X>^2 for Hermitian X.
    pub fn variance(&self, op: &OperatorMatrix) -> Result<f64> {
        self.covariance(op, op)
    }

    /// Symmetrized covariance Re<X psi, Y psi> - <X><Y> for Hermitian X, Y.
    pub fn covariance(&self, x: &OperatorMatrix, y: &OperatorMatrix) -> Result<f64> {
        for op in [x, y] {
            if op.basis() != &self.basis {
                return Err(Error::BasisMismatch);
            }
            if !op.is_hermitian() {
                return Err(Error::NotHermitian(op.max_asymmetry()));
            }
        }
        let xp = x.apply(&self.amplitudes);
        let yp = y.apply(&self.amplitudes);
        let dot = |u: &[C64], v: &[C64]| -> C64 { u.iter().zip(v).map(|(a, b)| a.conj() * b).sum() };
        let ex = dot(&self.amplitudes, &xp).re;
        let ey = dot(&self.amplitudes, &yp).re;
        Ok(dot(&xp, &yp).re - ex * ey)
    }

    /// ||(A - <A>) psi||^2 = <A^dag A> - |<A>|^2, defined for any A.
    pub fn dispersion(&self, op: &OperatorMatrix) -> Result<f64> {
        let m = self.expectation(op)?;
        let ap = op.apply(&self.amplitudes);
        Ok(ap.iter().zip(&self.amplitudes).map(|(a, p)| (a - m * p).norm_sqr()).sum())
    }

    /// ||(A - z) psi||
    pub fn eigen_residual(&self, op: &OperatorMatrix, z: C64) -> Result<f64> {
        if op.basis() != &self.basis {
            return Err(Error::BasisMismatch);
        }
        let ap = op.apply(&self.amplitudes);
        Ok(ap.iter().zip(&self.amplitudes).map(|(a, p)| (a - z * p).norm_sqr()).sum::<f64>().sqrt())
    }

    pub fn to_record(&self) -> StateRecord {
        let (k, cutoff) = match &self.basis {
            Basis::Ladder(b) => (Some(b.k()), b.cutoff()),
            _ => (None, self.dim() - 1),
        };
        StateRecord {
            k,
            cutoff,
            re: self.amplitudes.iter().map(|c| c.re).collect(),
            im: self.amplitudes.iter().map(|c| c.im).collect(),
        }
    }
}

/// JSON record of a single-mode state. `k` is absent for plain Fock states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    pub cutoff: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl StateRecord {
    pub fn to_state(&self) -> Result<StateVector> {
        if self.re.len() != self.im.len() {
            return Err(Error::Dimension { expected: self.re.len(), got: self.im.len() });
        }
        let basis = match self.k {
            Some(k) => Basis::Ladder(LadderBasis::with_any_k(k, self.cutoff)?),
            None => Basis::fock(self.cutoff),
        };
        let amps = self.re.iter().zip(&self.im).map(|(&r, &i)| C64::new(r, i)).collect();
        StateVector::new(basis, amps)
    }
}

fn per_mode_tails(cutoffs: &[usize], amps: &[C64]) -> Vec<f64> {
    let dims: Vec<usize> = cutoffs.iter().map(|c| c + 1).collect();
    let mut tails = vec![0.0; dims.len()];
    for (idx, a) in amps.iter().enumerate() {
        let p = a.norm_sqr();
        let mut rem = idx;
        for m in (0..dims.len()).rev() {
            let level = rem % dims[m];
            rem /= dims[m];
            if level >= dims[m] - tail_len(dims[m]) {
                tails[m] += p;
            }
        }
    }
    tails
}

/// Two-mode pure state as an (M_a+1) x (M_b+1) amplitude matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeState {
    amplitudes: DMatrix<C64>,
}

impl TwoModeState {
    pub fn new(amplitudes: DMatrix<C64>) -> Result<Self> {
        if amplitudes.nrows() < 2 || amplitudes.ncols() < 2 {
            return Err(Error::InvalidCutoff(amplitudes.nrows().min(amplitudes.ncols()).saturating_sub(1)));
        }
        Ok(TwoModeState { amplitudes })
    }

    /// Product state |a>|b> of two single-mode Fock vectors.
    pub fn product(a: &StateVector, b: &StateVector) -> Result<Self> {
        let (na, nb) = (a.dim(), b.dim());
        Self::new(DMatrix::from_fn(na, nb, |i, j| a.amplitudes[i] * b.amplitudes[j]))
    }

    pub fn cutoffs(&self) -> (usize, usize) {
        (self.amplitudes.nrows() - 1, self.amplitudes.ncols() - 1)
    }

    pub fn amplitudes(&self) -> &DMatrix<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn tail_mass_a(&self) -> f64 {
        let n = self.amplitudes.nrows();
        (n - tail_len(n)..n).map(|i| self.amplitudes.row(i).iter().map(|c| c.norm_sqr()).sum::<f64>()).sum()
    }

    pub fn tail_mass_b(&self) -> f64 {
        let n = self.amplitudes.ncols();
        (n - tail_len(n)..n).map(|j| self.amplitudes.column(j).iter().map(|c| c.norm_sqr()).sum::<f64>()).sum()
    }

    /// Flattened vector on `Basis::Modes`, mode a slow.
    pub fn to_state_vector(&self) -> StateVector {
        let (ca, cb) = self.cutoffs();
        let mut v = Vec::with_capacity((ca + 1) * (cb + 1));
        for i in 0..=ca {
            for j in 0..=cb {
                v.push(self.amplitudes[(i, j)]);
            }
        }
        StateVector::new(Basis::Modes(vec![ca, cb]), v).expect("dimension matches by construction")
    }

    pub fn from_state_vector(s: &StateVector) -> Result<Self> {
        match s.basis() {
            Basis::Modes(c) if c.len() == 2 => {
                let (na, nb) = (c[0] + 1, c[1] + 1);
                Self::new(DMatrix::from_fn(na, nb, |i, j| s.amplitudes()[i * nb + j]))
            }
            _ => Err(Error::BasisMismatch),
        }
    }

    /// Projects mode a onto |n>; returns the normalized b-mode state and the
    /// probability of the outcome.
    pub fn project_a(&self, n: usize) -> Result<(StateVector, f64)> {
        let (ca, cb) = self.cutoffs();
        if n > ca {
            return Err(Error::Dimension { expected: ca + 1, got: n + 1 });
        }
        let row: Vec<C64> = self.amplitudes.row(n).iter().cloned().collect();
        let total = self.norm().powi(2);
        let p: f64 = row.iter().map(|c| c.norm_sqr()).sum();
        let prob = p / total;
        if !(prob >= 1e-14) {
            return Err(Error::ZeroProbability(prob));
        }
        let s = p.sqrt();
        let state = StateVector::new(Basis::fock(cb), row.into_iter().map(|c| c / s).collect())?;
        Ok((state, prob))
    }
}
