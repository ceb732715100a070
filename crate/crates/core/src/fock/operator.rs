use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::basis::Basis;
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-14;

/// Sparse complex matrix over a truncated basis, stored as sorted row lists.
///
/// Ladder-type operators have at most a few entries per row, so row lists are
/// both the banded representation and the fallback for products.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    basis: Basis,
    rows: Vec<Vec<(usize, C64)>>,
    hermitian: bool,
}

fn merge_rows(a: &[(usize, C64)], b: &[(usize, C64)], sb: C64) -> Vec<(usize, C64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, b[j].1 * sb));
            j += 1;
        } else {
            let v = a[i].1 + b[j].1 * sb;
            if v != C64::new(0.0, 0.0) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl OperatorMatrix {
    /// Builds from row lists; the Hermitian tag is computed, not trusted.
    pub fn from_rows(basis: Basis, mut rows: Vec<Vec<(usize, C64)>>) -> Result<Self> {
        let n = basis.dim();
        if rows.len() != n {
            return Err(Error::Dimension { expected: n, got: rows.len() });
        }
        for r in rows.iter_mut() {
            r.retain(|&(_, v)| v != C64::new(0.0, 0.0));
            r.sort_by_key(|&(j, _)| j);
            if r.windows(2).any(|w| w[0].0 == w[1].0) || r.last().map_or(false, |&(j, _)| j >= n) {
                return Err(Error::Invalid("bad column index in operator row".into()));
            }
        }
        let mut op = OperatorMatrix { basis, rows, hermitian: false };
        op.hermitian = op.max_asymmetry() <= HERMITIAN_TOL * op.max_abs().max(1.0);
        Ok(op)
    }

    pub fn from_dense(basis: Basis, m: &DMatrix<C64>) -> Result<Self> {
        let n = basis.dim();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::Dimension { expected: n, got: m.nrows() });
        }
        let rows = (0..n)
            .map(|i| (0..n).filter(|&j| m[(i, j)] != C64::new(0.0, 0.0)).map(|j| (j, m[(i, j)])).collect())
            .collect();
        Self::from_rows(basis, rows)
    }

    pub fn diagonal(basis: Basis, diag: &[f64]) -> Result<Self> {
        let rows = diag.iter().enumerate().map(|(i, &d)| vec![(i, C64::new(d, 0.0))]).collect();
        Self::from_rows(basis, rows)
    }

    pub fn identity(basis: Basis) -> Self {
        let n = basis.dim();
        Self::diagonal(basis, &vec![1.0; n]).expect("identity has matching size")
    }

    pub fn zeros(basis: Basis) -> Self {
        let n = basis.dim();
        OperatorMatrix { basis, rows: vec![Vec::new(); n], hermitian: true }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, C64)>] {
        &self.rows
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        match self.rows[i].binary_search_by_key(&j, |&(c, _)| c) {
            Ok(p) => self.rows[i][p].1,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.rows.iter().flatten().map(|&(_, v)| v.norm()).fold(0.0, f64::max)
    }

    /// max |A_ij - conj(A_ji)|
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r {
                worst = worst.max((v - self.entry(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Largest |i - j| over stored entries.
    pub fn bandwidth(&self) -> usize {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, _)| i.abs_diff(j)))
            .max()
            .unwrap_or(0)
    }

    /// Maximum absolute row sum, an upper bound on the spectral norm's
    /// companion used for step control.
    pub fn norm_inf(&self) -> f64 {
        self.rows.iter().map(|r| r.iter().map(|&(_, v)| v.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim(), "vector length does not match operator");
        self.rows.iter().map(|r| r.iter().map(|&(j, v)| v * x[j]).sum()).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim();
        let mut rows = vec![Vec::new(); n];
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r {
                rows[j].push((i, v.conj()));
            }
        }
        // rows were filled in increasing i, so they are already sorted
        OperatorMatrix { basis: self.basis.clone(), rows, hermitian: self.hermitian }
    }

    pub fn scale(&self, s: C64) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&(j, v)| (j, v * s)).filter(|&(_, v)| v != C64::new(0.0, 0.0)).collect())
            .collect();
        let mut out = OperatorMatrix { basis: self.basis.clone(), rows, hermitian: self.hermitian };
        if s.im != 0.0 {
            // i times an anti-Hermitian matrix is Hermitian
            out.hermitian = out.max_asymmetry() <= HERMITIAN_TOL * out.max_abs().max(1.0);
        }
        out
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    fn check_basis(&self, other: &Self) {
        assert!(self.basis == other.basis, "operators live on different bases");
    }

    /// self + s * other
    pub fn axpy(&self, s: C64, other: &Self) -> Self {
        self.check_basis(other);
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| merge_rows(a, b, s)).collect();
        let mut out = OperatorMatrix { basis: self.basis.clone(), rows, hermitian: false };
        out.hermitian = out.max_asymmetry() <= HERMITIAN_TOL * out.max_abs().max(1.0);
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        self.check_basis(other);
        let n = self.dim();
        let mut acc = vec![C64::new(0.0, 0.0); n];
        let mut touched: Vec<usize> = Vec::new();
        let mut rows = Vec::with_capacity(n);
        for r in &self.rows {
            for &(k, a) in r {
                for &(j, b) in &other.rows[k] {
                    if acc[j] == C64::new(0.0, 0.0) {
                        touched.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let row: Vec<(usize, C64)> =
                touched.iter().map(|&j| (j, acc[j])).filter(|&(_, v)| v != C64::new(0.0, 0.0)).collect();
            for &j in &touched {
                acc[j] = C64::new(0.0, 0.0);
            }
            touched.clear();
            rows.push(row);
        }
        let mut out = OperatorMatrix { basis: self.basis.clone(), rows, hermitian: false };
        out.hermitian = out.max_asymmetry() <= HERMITIAN_TOL * out.max_abs().max(1.0);
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).axpy(C64::new(-1.0, 0.0), &other.matmul(self))
    }

    /// Tensor product; the result lives on `Modes` with self as the slow index.
    pub fn kron(&self, other: &Self) -> Self {
        let mut cut = match &self.basis {
            Basis::Modes(c) => c.clone(),
            _ => vec![self.dim() - 1],
        };
        match &other.basis {
            Basis::Modes(c) => cut.extend(c),
            _ => cut.push(other.dim() - 1),
        }
        let nb = other.dim();
        let mut rows = Vec::with_capacity(self.dim() * nb);
        for ra in &self.rows {
            for rb in &other.rows {
                let mut row = Vec::with_capacity(ra.len() * rb.len());
                for &(ja, va) in ra {
                    for &(jb, vb) in rb {
                        row.push((ja * nb + jb, va * vb));
                    }
                }
                rows.push(row);
            }
        }
        let hermitian = self.hermitian && other.hermitian;
        OperatorMatrix { basis: Basis::Modes(cut), rows, hermitian }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// exp(s * self) applied to `x` by a scaled Taylor series.
    ///
    /// The step count keeps |s| * ||A||_inf per step at or below 1/2 so the
    /// series for each step converges to rounding level in a few dozen terms.
    pub fn exp_apply(&self, s: C64, x: &[C64]) -> Vec<C64> {
        let bound = s.norm() * self.norm_inf();
        let steps = ((2.0 * bound).ceil() as usize).max(1);
        let h = s / steps as f64;
        let mut y = x.to_vec();
        for _ in 0..steps {
            let mut term = y.clone();
            let mut sum = y.clone();
            for n in 1..200 {
                term = self.apply(&term);
                let f = h / n as f64;
                for t in term.iter_mut() {
                    *t *= f;
                }
                let mut tn = 0.0;
                for (a, t) in sum.iter_mut().zip(&term) {
                    *a += *t;
                    tn += t.norm_sqr();
                }
                let sn: f64 = sum.iter().map(|v| v.norm_sqr()).sum();
                if tn <= 1e-36 * sn.max(1e-300) {
                    break;
                }
            }
            y = sum;
        }
        y
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.axpy(C64::new(1.0, 0.0), rhs)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.axpy(C64::new(-1.0, 0.0), rhs)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.matmul(rhs)
    }
}

impl Mul<C64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: C64) -> OperatorMatrix {
        self.scale(rhs)
    }
}

/// Linear combination sum_i c_i A_i over a shared basis.
pub fn combination(terms: &[(C64, &OperatorMatrix)]) -> OperatorMatrix {
    let basis = terms.first().expect("at least one term").1.basis().clone();
    let mut acc = OperatorMatrix::zeros(basis);
    for &(c, op) in terms {
        acc = acc.axpy(c, op);
    }
    acc
}
