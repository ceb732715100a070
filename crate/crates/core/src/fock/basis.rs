use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncated lowest-weight basis |k, k+m>, m = 0..=cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderBasis {
    k: f64,
    cutoff: usize,
}

fn is_listed_k(k: f64) -> bool {
    const EPS: f64 = 1e-12;
    if (k - 0.25).abs() < EPS || (k - 0.75).abs() < EPS {
        return true;
    }
    let twice = 2.0 * k;
    twice >= 1.0 - EPS && (twice - twice.round()).abs() < EPS
}

impl LadderBasis {
    /// Accepts k in {1/4, 3/4, 1/2, 1, 3/2, ...}.
    pub fn new(k: f64, cutoff: usize) -> Result<Self> {
        if !(k > 0.0) || !is_listed_k(k) {
            return Err(Error::InvalidK(k));
        }
        Self::with_any_k(k, cutoff)
    }

    /// Accepts any k > 0.
    pub fn with_any_k(k: f64, cutoff: usize) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidK(k));
        }
        if cutoff < 1 {
            return Err(Error::InvalidCutoff(cutoff));
        }
        Ok(LadderBasis { k, cutoff })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn with_cutoff(&self, cutoff: usize) -> Result<Self> {
        Self::with_any_k(self.k, cutoff)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Bargmann index of the one-mode quadratic realization on this subspace.
    pub fn bargmann_k(self) -> f64 {
        match self {
            Parity::Even => 0.25,
            Parity::Odd => 0.75,
        }
    }

    pub fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Which orthonormal basis a vector or matrix is expressed in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Basis {
    Ladder(LadderBasis),
    /// Single-mode Fock states |0>..|cutoff>.
    Fock { cutoff: usize },
    /// Fock levels of one parity up to `cutoff` (|0>,|2>,.. or |1>,|3>,..).
    ParityFock { parity: Parity, cutoff: usize },
    /// Tensor product of Fock spaces, first mode slowest.
    Modes(Vec<usize>),
}

impl Basis {
    pub fn fock(cutoff: usize) -> Self {
        Basis::Fock { cutoff }
    }

    pub fn dim(&self) -> usize {
        match self {
            Basis::Ladder(b) => b.dim(),
            Basis::Fock { cutoff } => cutoff + 1,
            Basis::ParityFock { parity, cutoff } => match parity {
                Parity::Even => cutoff / 2 + 1,
                Parity::Odd => (cutoff + 1) / 2,
            },
            Basis::Modes(c) => c.iter().map(|m| m + 1).product(),
        }
    }

    /// Per-mode dimensions; single-mode bases report one entry.
    pub fn mode_dims(&self) -> Vec<usize> {
        match self {
            Basis::Modes(c) => c.iter().map(|m| m + 1).collect(),
            _ => vec![self.dim()],
        }
    }
}
