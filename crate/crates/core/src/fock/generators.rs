use num_complex::Complex64 as C64;

use super::basis::{Basis, LadderBasis, Parity};
use super::operator::OperatorMatrix;
use crate::error::{Error, Result};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// The su(1,1) generators in some realization.
#[derive(Clone, Debug)]
pub struct Su11Generators {
    pub k_plus: OperatorMatrix,
    pub k_minus: OperatorMatrix,
    pub k3: OperatorMatrix,
    pub k1: OperatorMatrix,
    pub k2: OperatorMatrix,
}

impl Su11Generators {
    fn from_ladder(k_plus: OperatorMatrix, k3: OperatorMatrix) -> Self {
        let k_minus = k_plus.adjoint();
        let k1 = (&k_plus + &k_minus).scale_re(0.5);
        // (K+ - K-)/(2i) = -i/2 (K+ - K-)
        let k2 = (&k_plus - &k_minus).scale(C64::new(0.0, -0.5));
        Su11Generators { k_plus, k_minus, k3, k1, k2 }
    }

    /// u K- + v K+ + w K3
    pub fn combination(&self, u: C64, v: C64, w: C64) -> OperatorMatrix {
        super::operator::combination(&[(u, &self.k_minus), (v, &self.k_plus), (w, &self.k3)])
    }

    /// Largest residual of the three commutation relations
    /// [K1,K2] = -iK3, [K2,K3] = iK1, [K3,K1] = iK2 over basis vectors
    /// with index below `upto`.
    pub fn commutator_residual(&self, upto: usize) -> f64 {
        let checks = [
            (self.k1.commutator(&self.k2), &self.k3, -I),
            (self.k2.commutator(&self.k3), &self.k1, I),
            (self.k3.commutator(&self.k1), &self.k2, I),
        ];
        let mut worst = 0.0f64;
        for (lhs, rhs, c) in checks.iter() {
            let diff = lhs.axpy(-c, rhs);
            for r in diff.rows() {
                for &(j, v) in r {
                    if j < upto {
                        worst = worst.max(v.norm());
                    }
                }
            }
        }
        worst
    }
}

/// Generators on |k, k+m>: K3 = k+m, <m+1|K+|m> = sqrt((m+1)(m+2k)).
pub fn build_su11_generators(basis: &LadderBasis) -> Su11Generators {
    let k = basis.k();
    let n = basis.dim();
    let b = Basis::Ladder(*basis);
    let rows = (0..n)
        .map(|i| {
            if i == 0 {
                Vec::new()
            } else {
                let m = (i - 1) as f64;
                vec![(i - 1, C64::new(((m + 1.0) * (m + 2.0 * k)).sqrt(), 0.0))]
            }
        })
        .collect();
    let k_plus = OperatorMatrix::from_rows(b.clone(), rows).expect("valid rows");
    let diag: Vec<f64> = (0..n).map(|m| k + m as f64).collect();
    let k3 = OperatorMatrix::diagonal(b, &diag).expect("valid diagonal");
    Su11Generators::from_ladder(k_plus, k3)
}

/// Single-mode boson operators on Fock levels 0..=cutoff.
#[derive(Clone, Debug)]
pub struct BosonOperators {
    pub a: OperatorMatrix,
    pub a_dag: OperatorMatrix,
    /// (a + a^dag)/sqrt 2
    pub q: OperatorMatrix,
    /// i(a^dag - a)/sqrt 2
    pub p: OperatorMatrix,
    pub n: OperatorMatrix,
}

pub fn build_boson_operators(cutoff: usize) -> Result<BosonOperators> {
    if cutoff < 1 {
        return Err(Error::InvalidCutoff(cutoff));
    }
    let b = Basis::fock(cutoff);
    let rows = (0..=cutoff)
        .map(|i| if i < cutoff { vec![(i + 1, C64::new(((i + 1) as f64).sqrt(), 0.0))] } else { Vec::new() })
        .collect();
    let a = OperatorMatrix::from_rows(b.clone(), rows)?;
    let a_dag = a.adjoint();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let q = (&a + &a_dag).scale_re(r);
    let p = (&a_dag - &a).scale(C64::new(0.0, r));
    let n = OperatorMatrix::diagonal(b, &(0..=cutoff).map(|i| i as f64).collect::<Vec<_>>())?;
    Ok(BosonOperators { a, a_dag, q, p, n })
}

fn quadratic_from_fock(ops: &BosonOperators) -> Su11Generators {
    let k_plus = (&ops.a_dag * &ops.a_dag).scale_re(0.5);
    let n = ops.n.dim();
    let k3 = OperatorMatrix::diagonal(
        ops.n.basis().clone(),
        &(0..n).map(|i| (i as f64 + 0.5) / 2.0).collect::<Vec<_>>(),
    )
    .expect("valid diagonal");
    Su11Generators::from_ladder(k_plus, k3)
}

/// K- = a^2/2, K+ = a^dag^2/2, K3 = (a^dag a + 1/2)/2 on the full Fock space.
///
/// Near the cutoff the truncated a^2 loses its partner terms, so identities
/// hold only away from the top two levels.
pub fn build_one_mode_quadratic_full(cutoff: usize) -> Result<Su11Generators> {
    Ok(quadratic_from_fock(&build_boson_operators(cutoff)?))
}

/// The quadratic realization restricted to one parity subspace of the Fock
/// levels 0..=cutoff. Index j of the result is Fock level 2j + parity.
pub fn build_one_mode_quadratic(cutoff: usize, parity: Parity) -> Result<Su11Generators> {
    if cutoff < 2 {
        return Err(Error::InvalidCutoff(cutoff));
    }
    if cutoff % 2 != 0 {
        return Err(Error::OddCutoff(cutoff));
    }
    let basis = Basis::ParityFock { parity, cutoff };
    let dim = basis.dim();
    let off = parity.offset();
    let level = |j: usize| (2 * j + off) as f64;
    // <n+2| a^dag^2 / 2 |n> = sqrt((n+1)(n+2))/2
    let rows = (0..dim)
        .map(|j| {
            if j == 0 {
                Vec::new()
            } else {
                let n = level(j - 1);
                vec![(j - 1, C64::new(((n + 1.0) * (n + 2.0)).sqrt() / 2.0, 0.0))]
            }
        })
        .collect();
    let k_plus = OperatorMatrix::from_rows(basis.clone(), rows)?;
    let diag: Vec<f64> = (0..dim).map(|j| (level(j) + 0.5) / 2.0).collect();
    let k3 = OperatorMatrix::diagonal(basis, &diag)?;
    Ok(Su11Generators::from_ladder(k_plus, k3))
}

/// K- = ab, K+ = a^dag b^dag, K3 = (n_a + n_b + 1)/2 on two Fock modes.
pub fn build_two_boson_realization(cutoff_a: usize, cutoff_b: usize) -> Result<Su11Generators> {
    let a = build_boson_operators(cutoff_a)?;
    let b = build_boson_operators(cutoff_b)?;
    let k_plus = a.a_dag.kron(&b.a_dag);
    let dim_b = cutoff_b + 1;
    let diag: Vec<f64> = (0..(cutoff_a + 1) * dim_b)
        .map(|idx| ((idx / dim_b) as f64 + (idx % dim_b) as f64 + 1.0) / 2.0)
        .collect();
    let k3 = OperatorMatrix::diagonal(Basis::Modes(vec![cutoff_a, cutoff_b]), &diag)?;
    Ok(Su11Generators::from_ladder(k_plus, k3))
}

/// Bargmann index of the two-boson realization on the sector n_a - n_b = d.
pub fn two_boson_sector_k(d: i64) -> f64 {
    (d.unsigned_abs() as f64 + 1.0) / 2.0
}

/// Lifts a single-mode operator into mode `which` (0 = a, 1 = b) of a
/// two-mode space.
pub fn embed_two_mode(op: &OperatorMatrix, which: usize, other_cutoff: usize) -> OperatorMatrix {
    let id = OperatorMatrix::identity(Basis::fock(other_cutoff));
    if which == 0 {
        op.kron(&id)
    } else {
        id.kron(op)
    }
}
