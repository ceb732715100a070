//! Figure sweeps: variance curves for the even squeezed states and photon
//! number distributions, evaluated row-parallel and collected in order.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::Parity;
use crate::moments::{cat_variances, photon_statistics, poisson_reference};
use crate::su11::{even_odd_state, squeezed_cat_params, BuildOptions};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    #[serde(default)]
    pub fixed: serde_json::Value,
    pub columns: Vec<String>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::Invalid(format!("sweep step must be positive, got {}", self.step)));
        }
        if !(self.start < self.stop) {
            return Err(Error::Invalid(format!("sweep start {} must be below stop {}", self.start, self.stop)));
        }
        let mut seen = HashSet::new();
        for c in &self.columns {
            if !seen.insert(c.as_str()) {
                return Err(Error::Invalid(format!("duplicate column {c}")));
            }
        }
        Ok(())
    }

    /// Grid points start + i step up to stop; computed from the index so
    /// the grid does not drift.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowError {
    pub index: usize,
    pub parameter: f64,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub errors: Vec<RowError>,
}

pub fn format_value(x: f64) -> String {
    format!("{x:.11e}")
}

impl FigureTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Header row then one line per row, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|&x| format_value(x)).collect();
            let _ = writeln!(s, "{}", line.join(","));
        }
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FigureSummary {
    pub crossings: BTreeMap<String, Vec<f64>>,
    /// Intervals where a column lies below its reference level.
    pub intervals: BTreeMap<String, Vec<(f64, f64)>>,
    pub joint: Vec<(f64, f64)>,
    pub mean_n: Option<f64>,
    pub mandel_q: Option<f64>,
    pub odd_mass: Option<f64>,
    pub cutoff: Option<usize>,
    pub failed_rows: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureRun {
    pub table: FigureTable,
    pub summary: FigureSummary,
}

/// Linearly interpolated points where ys crosses level.
pub fn crossings(xs: &[f64], ys: &[f64], level: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 1..xs.len().min(ys.len()) {
        let (a, b) = (ys[i - 1] - level, ys[i] - level);
        if a == 0.0 {
            if i == 1 || (ys[i - 2] - level) * b < 0.0 {
                out.push(xs[i - 1]);
            }
        } else if a * b < 0.0 {
            out.push(xs[i - 1] + (xs[i] - xs[i - 1]) * a / (a - b));
        }
    }
    out
}

/// Maximal intervals where ys < level, with interpolated interior ends and
/// grid ends at the boundary.
pub fn intervals_below(xs: &[f64], ys: &[f64], level: f64) -> Vec<(f64, f64)> {
    let n = xs.len().min(ys.len());
    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    for i in 0..n {
        let below = ys[i] < level;
        match (below, start) {
            (true, None) => {
                start = Some(if i == 0 { xs[0] } else { interp(xs, ys, i - 1, level) });
            }
            (false, Some(s)) => {
                out.push((s, interp(xs, ys, i - 1, level)));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, xs[n - 1]));
    }
    out
}

fn interp(xs: &[f64], ys: &[f64], i: usize, level: f64) -> f64 {
    let (a, b) = (ys[i] - level, ys[i + 1] - level);
    if a == b {
        return xs[i];
    }
    xs[i] + (xs[i + 1] - xs[i]) * a / (a - b)
}

pub fn intersect(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &(a0, a1) in a {
        for &(b0, b1) in b {
            let (lo, hi) = (a0.max(b0), a1.min(b1));
            if lo < hi {
                out.push((lo, hi));
            }
        }
    }
    out
}

fn sweep<F>(xs: &[f64], columns: &[&str], row: F) -> FigureTable
where
    F: Fn(f64) -> Result<Vec<f64>> + Sync,
{
    let results: Vec<Result<Vec<f64>>> = xs.par_iter().map(|&x| row(x)).collect();
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (i, (r, &x)) in results.into_iter().zip(xs).enumerate() {
        match r {
            Ok(mut v) => {
                v.insert(0, x);
                rows.push(v);
            }
            Err(e) => errors.push(RowError { index: i, parameter: x, message: e.to_string() }),
        }
    }
    FigureTable { columns: columns.iter().map(|s| s.to_string()).collect(), rows, errors }
}

/// Largest Fock cutoff a sweep row may double to. Rows near |v| = |u|
/// decay slowly, and every row costs only O(cutoff).
pub const FIGURE_MAX_CUTOFF: usize = 1 << 17;

/// Default build options for a sweep starting at `cutoff` Fock levels.
pub fn figure_options(cutoff: usize) -> BuildOptions {
    BuildOptions { cutoff, max_cutoff: cutoff.max(FIGURE_MAX_CUTOFF), ..BuildOptions::default() }
}

pub fn fig1a_spec(step: f64) -> SweepSpec {
    SweepSpec {
        parameter: "x".into(),
        start: 0.0,
        stop: 6.0,
        step,
        fixed: serde_json::json!({"z": 1.0, "parity": "even"}),
        columns: ["x", "var_p", "var_Ktilde2", "ref_p", "ref_K"].map(String::from).to_vec(),
    }
}

pub fn fig1b_spec(step: f64) -> SweepSpec {
    SweepSpec {
        parameter: "d".into(),
        start: 0.0,
        stop: 1.0,
        step,
        fixed: serde_json::json!({"zeta": FIG1B_ZETA, "parity": "even"}),
        columns: ["d", "two_var_q", "var_Ktilde1"].map(String::from).to_vec(),
    }
}

pub const FIG1B_ZETA: f64 = 0.31;

/// Even state with z = 1, u = sqrt(1+x^2), v = -x, w = 0.
pub fn fig1a(step: f64, opts: &BuildOptions) -> Result<FigureRun> {
    let spec = fig1a_spec(step);
    spec.validate()?;
    let cols: Vec<&str> = spec.columns.iter().map(|s| s.as_str()).collect();
    let table = sweep(&spec.points(), &cols, |x| {
        let one = C64::new(1.0, 0.0);
        let s = even_odd_state(one, C64::new((1.0 + x * x).sqrt(), 0.0), C64::new(-x, 0.0), C64::new(0.0, 0.0), Parity::Even, opts)?;
        let v = cat_variances(&s)?;
        Ok(vec![v.var_p, v.var_k2t, 0.5, 1.0])
    });
    let xs = table.column("x").unwrap_or_default();
    let vp = table.column("var_p").unwrap_or_default();
    let vk = table.column("var_Ktilde2").unwrap_or_default();
    let mut summary = FigureSummary { failed_rows: table.errors.len(), cutoff: Some(opts.cutoff), ..Default::default() };
    summary.crossings.insert("var_p".into(), crossings(&xs, &vp, 0.5));
    summary.crossings.insert("var_Ktilde2".into(), crossings(&xs, &vk, 1.0));
    let ip = intervals_below(&xs, &vp, 0.5);
    let ik = intervals_below(&xs, &vk, 1.0);
    summary.joint = intersect(&ip, &ik);
    summary.intervals.insert("var_p".into(), ip);
    summary.intervals.insert("var_Ktilde2".into(), ik);
    Ok(FigureRun { table, summary })
}

/// Squeezed even cat S(zeta)|z;+> with zeta = 0.31 and z = -d.
pub fn fig1b(step: f64, opts: &BuildOptions) -> Result<FigureRun> {
    let spec = fig1b_spec(step);
    spec.validate()?;
    let cols: Vec<&str> = spec.columns.iter().map(|s| s.as_str()).collect();
    let table = sweep(&spec.points(), &cols, |d| {
        let p = squeezed_cat_params(C64::new(-d, 0.0), C64::new(FIG1B_ZETA, 0.0), Parity::Even)?;
        let s = even_odd_state(p.z, p.u, p.v, p.w, Parity::Even, opts)?;
        let v = cat_variances(&s)?;
        Ok(vec![2.0 * v.var_q, v.var_k1t])
    });
    let xs = table.column("d").unwrap_or_default();
    let q = table.column("two_var_q").unwrap_or_default();
    let k = table.column("var_Ktilde1").unwrap_or_default();
    let mut summary = FigureSummary { failed_rows: table.errors.len(), cutoff: Some(opts.cutoff), ..Default::default() };
    summary.crossings.insert("two_var_q".into(), crossings(&xs, &q, 1.0));
    summary.crossings.insert("var_Ktilde1".into(), crossings(&xs, &k, 1.0));
    let iq = intervals_below(&xs, &q, 1.0);
    let ik = intervals_below(&xs, &k, 1.0);
    summary.joint = intersect(&iq, &ik);
    summary.intervals.insert("two_var_q".into(), iq);
    summary.intervals.insert("var_Ktilde1".into(), ik);
    Ok(FigureRun { table, summary })
}

/// Even state with w = 0 and the given (z, u, v).
pub fn photon_figure(z: C64, u: C64, v: C64, opts: &BuildOptions) -> Result<FigureRun> {
    let s = even_odd_state(z, u, v, C64::new(0.0, 0.0), Parity::Even, opts)?;
    let st = photon_statistics(&s)?;
    let reference = poisson_reference(st.mean, st.distribution.len());
    let rows = st.distribution.iter().zip(&reference).enumerate().map(|(n, (p, r))| vec![n as f64, *p, *r]).collect();
    let odd_mass = st.distribution.iter().skip(1).step_by(2).sum();
    let table = FigureTable { columns: ["n", "p", "poisson_ref"].map(String::from).to_vec(), rows, errors: vec![] };
    let summary = FigureSummary {
        mean_n: Some(st.mean),
        mandel_q: Some(st.mandel_q),
        odd_mass: Some(odd_mass),
        cutoff: Some(s.dim() - 1),
        ..Default::default()
    };
    Ok(FigureRun { table, summary })
}

pub fn fig2a(opts: &BuildOptions) -> Result<FigureRun> {
    photon_figure(C64::new(-0.5, -5.0), C64::new(1.25f64.sqrt(), 0.0), C64::new(-0.5, 0.0), opts)
}

pub fn fig2b(opts: &BuildOptions) -> Result<FigureRun> {
    photon_figure(C64::new(1.0, 0.0), C64::new(10f64.sqrt(), 0.0), C64::new(-3.0, 0.0), opts)
}
