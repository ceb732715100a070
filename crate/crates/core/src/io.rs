//! JSON helpers shared by reports and configuration files.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major real matrix with an explicit dimension header.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl From<&DMatrix<f64>> for RealMatrix {
    fn from(m: &DMatrix<f64>) -> Self {
        let data = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)])).collect();
        RealMatrix { rows: m.nrows(), cols: m.ncols(), data }
    }
}

impl RealMatrix {
    pub fn to_dmatrix(&self) -> Result<DMatrix<f64>> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Dimension { expected: self.rows * self.cols, got: self.data.len() });
        }
        Ok(DMatrix::from_row_slice(self.rows, self.cols, &self.data))
    }
}

/// Complex matrix as nested rows of [re, im] pairs; dimensions are inferred.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexMatrix(pub Vec<Vec<C64>>);

impl ComplexMatrix {
    pub fn to_dmatrix(&self) -> Result<DMatrix<C64>> {
        let n = self.0.len();
        let m = self.0.first().map_or(0, |r| r.len());
        if n == 0 || self.0.iter().any(|r| r.len() != m) {
            return Err(Error::Invalid("ragged or empty matrix".into()));
        }
        Ok(DMatrix::from_fn(n, m, |i, j| self.0[i][j]))
    }
}

impl From<&DMatrix<C64>> for ComplexMatrix {
    fn from(m: &DMatrix<C64>) -> Self {
        ComplexMatrix((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect())
    }
}
