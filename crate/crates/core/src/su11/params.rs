use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::Parity;

/// Coefficients of the eigenvalue problem (u K- + v K+ + w K3)|psi> = z|psi>
/// in the representation with Bargmann index k.
///
/// JSON form: `{"z":[re,im],"u":[re,im],"v":[re,im],"w":[re,im],"k":0.25}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Su11Params {
    pub z: C64,
    pub u: C64,
    pub v: C64,
    #[serde(default)]
    pub w: C64,
    pub k: f64,
}

/// Quantities of the closed-form solution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// sqrt(w^2 - 4uv)
    pub l: C64,
    /// -(w + l)/(2u)
    pub c: C64,
    /// 2l/(w + l)
    pub zeta: C64,
    /// -|c|^2
    pub s: f64,
    /// k + z/l
    pub a: C64,
}

/// Which square root of the Killing invariant to use for l.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Principal,
    Flipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalizability {
    pub normalizable: bool,
    /// Distance of the governing root(s) from the unit circle in units of
    /// 2|u|: 2|u| - max(|w - l|, |w + l|) in the generic case, 2|u| - |w + l|
    /// on the surviving branch of a terminating series.
    pub margin: f64,
    /// The weaker test that only asks one of |w -+ l| < 2|u|.
    pub either_root: bool,
    /// Set when z is a discrete eigenvalue at which only the decaying root
    /// survives: a = k + z/l equals -n on that branch.
    pub terminating: Option<Terminating>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Terminating {
    pub flipped: bool,
    pub n: usize,
}

impl Su11Params {
    /// Validated constructor: rejects u = 0, k <= 0 and non-normalizable sets.
    pub fn new(z: C64, u: C64, v: C64, w: C64, k: f64) -> Result<Self> {
        let p = Su11Params { z, u, v, w, k };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err(Error::InvalidK(self.k));
        }
        if self.u.norm() == 0.0 {
            return Err(Error::ZeroU);
        }
        for x in [self.z, self.u, self.v, self.w] {
            if !(x.re.is_finite() && x.im.is_finite()) {
                return Err(Error::Invalid("non-finite parameter".into()));
            }
        }
        let n = is_normalizable(self);
        if !n.normalizable {
            return Err(Error::NotNormalizable { margin: n.margin });
        }
        Ok(())
    }

    /// Barut-Girardello coherent state: eigenstate of K-.
    pub fn bg_cs(z: C64, k: f64) -> Result<Self> {
        Self::new(z, C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), k)
    }

    /// Eigenstates of u K- + v K+ (intelligent for the pair K1, K2).
    pub fn k1k2_is(z: C64, u: C64, v: C64, k: f64) -> Result<Self> {
        Self::new(z, u, v, C64::new(0.0, 0.0), k)
    }

    /// w^2 - 4uv
    pub fn killing(&self) -> C64 {
        self.w * self.w - 4.0 * self.u * self.v
    }

    pub fn with_k(&self, k: f64) -> Self {
        Su11Params { k, ..*self }
    }
}

/// True when w^2 - 4uv vanishes to rounding.
pub fn is_degenerate(p: &Su11Params) -> bool {
    let scale = p.w.norm_sqr() + 4.0 * (p.u * p.v).norm();
    p.killing().norm() <= 1e-13 * scale
}

pub fn derive(p: &Su11Params) -> Result<DerivedParams> {
    derive_branch(p, Branch::Principal)
}

pub fn derive_branch(p: &Su11Params, branch: Branch) -> Result<DerivedParams> {
    if p.u.norm() == 0.0 {
        return Err(Error::ZeroU);
    }
    if is_degenerate(p) {
        return Err(Error::DegenerateKilling);
    }
    let mut l = p.killing().sqrt();
    if branch == Branch::Flipped {
        l = -l;
    }
    let wl = p.w + l;
    if wl.norm() <= 1e-12 * l.norm() {
        // c = 0 and zeta is infinite on this branch
        return Err(Error::Invalid("w + l vanishes on this branch".into()));
    }
    let c = -wl / (2.0 * p.u);
    Ok(DerivedParams { l, c, zeta: 2.0 * l / wl, s: -c.norm_sqr(), a: p.k + p.z / l })
}

/// Roots of u r^2 + w r + v = 0 govern the large-m behaviour of the
/// coefficients. For generic z both must lie inside the unit circle. When
/// a = k + z/l is a non-positive integer on a branch with |c| < 1 the series
/// only carries that branch's root, which is enough.
pub fn is_normalizable(p: &Su11Params) -> Normalizability {
    let l = p.killing().sqrt();
    let two_u = 2.0 * p.u.norm();
    let dm = (p.w - l).norm();
    let dp = (p.w + l).norm();
    let either_root = dm < two_u || dp < two_u;
    if two_u > dm.max(dp) {
        return Normalizability { normalizable: true, margin: two_u - dm.max(dp), either_root, terminating: None };
    }
    if !is_degenerate(p) && p.u.norm() > 0.0 {
        for (flipped, lb) in [(false, l), (true, -l)] {
            let m = two_u - (p.w + lb).norm();
            if !(m > 0.0) {
                continue;
            }
            let a = p.k + p.z / lb;
            let n = (-a.re).round();
            if n >= 0.0 && (a + n).norm() <= 1e-9 * (1.0 + n) {
                let terminating = Some(Terminating { flipped, n: n as usize });
                return Normalizability { normalizable: true, margin: m, either_root, terminating };
            }
        }
    }
    Normalizability { normalizable: false, margin: two_u - dm.max(dp), either_root, terminating: None }
}

/// Coefficients for S(zeta) applied to a parity eigenstate of a^2 with
/// eigenvalue 2z: with zeta = r e^{i theta},
/// S K- S^dag = cosh^2 r K- + sinh^2 r e^{2i theta} K+ - sinh 2r e^{i theta} K3,
/// so the squeezed state is an eigenstate of that combination with the same z.
pub fn squeezed_cat_params(z: C64, zeta: C64, parity: Parity) -> Result<Su11Params> {
    let r = zeta.norm();
    let e = if r == 0.0 { C64::new(1.0, 0.0) } else { zeta / r };
    let u = C64::new(r.cosh().powi(2), 0.0);
    let v = r.sinh().powi(2) * e * e;
    let w = -(2.0 * r).sinh() * e;
    Su11Params::new(z, u, v, w, parity.bargmann_k())
}
