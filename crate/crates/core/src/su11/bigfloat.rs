//! Minimal arbitrary-precision binary floating point, enough to sum
//! terminating hypergeometric series whose terms cancel heavily.

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_traits::{Float, ToPrimitive, Zero};

/// value = m * 2^e
#[derive(Clone, Debug)]
pub(crate) struct BigFloat {
    m: BigInt,
    e: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat { m: BigInt::zero(), e: 0 }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            return Self::zero();
        }
        let (mant, exp, sign) = x.integer_decode();
        let m = BigInt::from(mant) * BigInt::from(sign);
        BigFloat { m, e: exp as i64 }
    }

    pub fn from_i64(x: i64) -> Self {
        BigFloat { m: BigInt::from(x), e: 0 }
    }

    fn round(mut self, prec: u64) -> Self {
        let bits = self.m.bits();
        if bits > prec {
            let shift = bits - prec;
            self.m >>= shift;
            self.e += shift as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn add(&self, other: &Self, prec: u64) -> Self {
        if self.m.is_zero() {
            return other.clone().round(prec);
        }
        if other.m.is_zero() {
            return self.clone().round(prec);
        }
        let (hi, lo) = if self.e >= other.e { (self, other) } else { (other, self) };
        // if the smaller exponent operand is far below the precision of the
        // larger one, drop its excess low bits first
        let hi_top = hi.e + hi.m.bits() as i64;
        let floor = hi_top - prec as i64 - 8;
        let lo_m = if lo.e < floor {
            let cut = (floor - lo.e) as u64;
            (&lo.m >> cut, lo.e + cut as i64)
        } else {
            (lo.m.clone(), lo.e)
        };
        let base = lo_m.1.min(hi.e);
        let a = &hi.m << (hi.e - base) as u64;
        let b = lo_m.0 << (lo_m.1 - base) as u64;
        BigFloat { m: a + b, e: base }.round(prec)
    }

    pub fn sub(&self, other: &Self, prec: u64) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn neg(&self) -> Self {
        BigFloat { m: -&self.m, e: self.e }
    }

    pub fn mul(&self, other: &Self, prec: u64) -> Self {
        BigFloat { m: &self.m * &other.m, e: self.e + other.e }.round(prec)
    }

    pub fn div(&self, other: &Self, prec: u64) -> Self {
        assert!(!other.m.is_zero(), "division by zero");
        let shift = prec + other.m.bits() + 2;
        let m = (&self.m << shift) / &other.m;
        BigFloat { m, e: self.e - other.e - shift as i64 }.round(prec)
    }

    /// (mantissa in f64, binary exponent) with value = mant * 2^exp.
    pub fn to_parts(&self) -> (f64, i64) {
        if self.m.is_zero() {
            return (0.0, 0);
        }
        let bits = self.m.bits() as i64;
        let shift = bits - 60;
        let top = if shift >= 0 { &self.m >> shift as u64 } else { &self.m << (-shift) as u64 };
        (top.to_f64().expect("60-bit integer fits"), self.e + shift)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn one() -> Self {
        BigComplex { re: BigFloat::from_i64(1), im: BigFloat::zero() }
    }

    pub fn from_c64(z: C64) -> Self {
        BigComplex { re: BigFloat::from_f64(z.re), im: BigFloat::from_f64(z.im) }
    }

    pub fn add(&self, o: &Self, prec: u64) -> Self {
        BigComplex { re: self.re.add(&o.re, prec), im: self.im.add(&o.im, prec) }
    }

    pub fn add_real(&self, x: &BigFloat, prec: u64) -> Self {
        BigComplex { re: self.re.add(x, prec), im: self.im.clone() }
    }

    pub fn mul(&self, o: &Self, prec: u64) -> Self {
        let p = prec + 8;
        let re = self.re.mul(&o.re, p).sub(&self.im.mul(&o.im, p), prec);
        let im = self.re.mul(&o.im, p).add(&self.im.mul(&o.re, p), prec);
        BigComplex { re, im }
    }

    pub fn mul_real(&self, x: &BigFloat, prec: u64) -> Self {
        BigComplex { re: self.re.mul(x, prec), im: self.im.mul(x, prec) }
    }

    pub fn div_real(&self, x: &BigFloat, prec: u64) -> Self {
        BigComplex { re: self.re.div(x, prec), im: self.im.div(x, prec) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Natural log, computed from the rescaled f64 parts.
    pub fn ln(&self) -> C64 {
        let (mr, er) = self.re.to_parts();
        let (mi, ei) = self.im.to_parts();
        let e = if mr == 0.0 {
            ei
        } else if mi == 0.0 {
            er
        } else {
            er.max(ei)
        };
        let scale = |m: f64, x: i64| if m == 0.0 { 0.0 } else { m * 2f64.powi((x - e).max(-1100) as i32) };
        let z = C64::new(scale(mr, er), scale(mi, ei));
        let l = z.ln();
        C64::new(l.re + e as f64 * std::f64::consts::LN_2, l.im)
    }
}

/// Terminating 2F1(a, -m; b; x) summed in extended precision.
///
/// Returns ln of the value (None if it is exactly zero). `scale_log2` is the
/// log2 of the factor the result will be multiplied by; it sets how many
/// absolute bits are needed so the product is accurate relative to 1.
pub(crate) fn ln_terminating_2f1(a: C64, m: usize, b: f64, x: C64, scale_log2: f64) -> Option<C64> {
    // magnitude pass to size the working precision
    let mut lt = 0.0f64;
    let mut lmax = 0.0f64;
    let lx = x.norm().ln();
    for j in 0..m {
        let jf = j as f64;
        lt += lx + (a + jf).norm().ln() + (m as f64 - jf).ln() - (b + jf).ln() - (jf + 1.0).ln();
        if lt.is_finite() {
            lmax = lmax.max(lt);
        }
    }
    let log2_sum = lmax / std::f64::consts::LN_2 + ((m + 1) as f64).log2();
    // f64 summation errs by about 2^-53 (m+1) times the largest term; after
    // scaling that is below 2^-46 when this holds
    let excess = log2_sum + scale_log2 + ((m + 1) as f64).log2();
    // terms past ~e^700 overflow f64 even when the prefactor brings them back
    let fits = lmax < 650.0;
    if fits && excess <= 7.0 {
        return ln_terminating_2f1_f64(a, m, b, x);
    }
    // double-double carries about 104 bits
    if fits && excess <= 55.0 {
        return ln_terminating_2f1_dd(a, m, b, x);
    }
    let need = 64.0 + 16.0 + ((m + 1) as f64).log2() + (log2_sum + scale_log2).max(0.0);
    let prec = need.ceil() as u64;

    let xa = BigComplex::from_c64(x);
    let ab = BigComplex::from_c64(a);
    let bb = BigFloat::from_f64(b);
    let mut term = BigComplex::one();
    let mut sum = BigComplex::one();
    for j in 0..m {
        let jb = BigFloat::from_i64(j as i64);
        let aj = ab.add_real(&jb, prec);
        let num = term.mul(&aj, prec).mul(&xa, prec).mul_real(&BigFloat::from_i64(j as i64 - m as i64), prec);
        let den = bb.add(&jb, prec).mul(&BigFloat::from_i64(j as i64 + 1), prec);
        term = num.div_real(&den, prec);
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term, prec);
    }
    if sum.is_zero() {
        None
    } else {
        Some(sum.ln())
    }
}

fn ln_terminating_2f1_f64(a: C64, m: usize, b: f64, x: C64) -> Option<C64> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for j in 0..m {
        let jf = j as f64;
        term = term * (a + jf) * x * ((jf - m as f64) / ((b + jf) * (jf + 1.0)));
        if term == C64::new(0.0, 0.0) {
            break;
        }
        sum += term;
    }
    if sum == C64::new(0.0, 0.0) {
        None
    } else {
        Some(sum.ln())
    }
}

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = two_sum(s, e + t);
        let (hi, lo) = two_sum(s, e + f);
        Dd { hi, lo }
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let r = ((self.hi - p) - e + self.lo) / d;
        let (hi, lo) = two_sum(q1, r);
        Dd { hi, lo }
    }
}

#[derive(Clone, Copy, Debug)]
struct DdComplex {
    re: Dd,
    im: Dd,
}

impl DdComplex {
    fn from_c64(z: C64) -> Self {
        DdComplex { re: Dd::from(z.re), im: Dd::from(z.im) }
    }

    fn add(self, o: Self) -> Self {
        DdComplex { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    fn mul(self, o: Self) -> Self {
        DdComplex {
            re: self.re.mul(o.re).add(self.im.mul(o.im).neg()),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    fn scale(self, num: f64, den: f64) -> Self {
        DdComplex { re: self.re.mul(Dd::from(num)).div_f64(den), im: self.im.mul(Dd::from(num)).div_f64(den) }
    }

    fn is_zero(&self) -> bool {
        self.re.hi == 0.0 && self.im.hi == 0.0
    }

    fn ln(&self) -> C64 {
        C64::new(self.re.hi + self.re.lo, self.im.hi + self.im.lo).ln()
    }
}

fn ln_terminating_2f1_dd(a: C64, m: usize, b: f64, x: C64) -> Option<C64> {
    let xd = DdComplex::from_c64(x);
    let mut term = DdComplex { re: Dd::from(1.0), im: Dd::ZERO };
    let mut sum = term;
    for j in 0..m {
        let jf = j as f64;
        // a + j is exact in double-double
        let aj = DdComplex { re: Dd::from(a.re).add(Dd::from(jf)), im: Dd::from(a.im) };
        // (b + j)(j + 1) is exact for the half-integer b used here
        term = term.mul(aj).mul(xd).scale(jf - m as f64, (b + jf) * (jf + 1.0));
        if term.is_zero() {
            break;
        }
        sum = sum.add(term);
    }
    if sum.is_zero() {
        None
    } else {
        Some(sum.ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_parts() {
        let x = BigFloat::from_f64(-3.25);
        let (m, e) = x.to_parts();
        assert_eq!(m * 2f64.powi(e as i32), -3.25);
    }

    #[test]
    fn cancellation_is_resolved() {
        // (1 - x)^m with x = 3 summed as a binomial series: 2F1(b, -m; b; x)
        let m = 60;
        let l = ln_terminating_2f1(C64::new(1.5, 0.0), m, 1.5, C64::new(3.0, 0.0), 0.0).unwrap();
        let exact = (m as f64) * 2f64.ln();
        assert!((l.re - exact).abs() < 1e-13, "{} vs {}", l.re, exact);
        assert!((l.im.abs()).abs() < 1e-12);
    }

    #[test]
    fn double_double_matches_bigfloat() {
        // strong cancellation: (1 - x)^m via 2F1(b, -m; b; x) at x = 3
        let m = 30;
        let dd = ln_terminating_2f1_dd(C64::new(1.5, 0.0), m, 1.5, C64::new(3.0, 0.0)).unwrap();
        let exact = (m as f64) * 2f64.ln();
        assert!((dd.re - exact).abs() < 1e-12);
    }

    #[test]
    fn fast_path_agrees_with_extended_precision() {
        let (a, b, x) = (C64::new(0.3, -0.7), 0.5, C64::new(0.4, 0.2));
        for m in [0, 1, 5, 12] {
            let f = ln_terminating_2f1_f64(a, m, b, x).unwrap();
            // a huge scale forces the extended path
            let e = ln_terminating_2f1(a, m, b, x, 200.0).unwrap();
            assert!((f.exp() - e.exp()).norm() < 1e-13 * e.exp().norm().max(1.0), "m = {m}");
        }
    }

    #[test]
    fn absolute_accuracy_after_cancellation() {
        // (1 - x)^m at x = 0.999, m = 40 is 1e-120 while the terms reach 2^40;
        // the sum is only promised to absolute accuracy
        let m = 40;
        let l = ln_terminating_2f1(C64::new(2.0, 0.0), m, 2.0, C64::new(0.999, 0.0), 0.0);
        assert!(l.map_or(true, |l| l.re.exp() < 1e-18));
    }
}
