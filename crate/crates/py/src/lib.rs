//! Python bindings: state construction, moments and figure runs.
//!
//! Complex parameters are Python `complex`; structured reports come back as
//! plain dicts, with complex entries as `[re, im]` pairs.

use num_complex::Complex64 as C64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use sqstates::canonical::{self, GaussianParams};
use sqstates::figures;
use sqstates::fock::{build_su11_generators, Basis, Parity, StateVector};
use sqstates::genscheme::{self, SchemeConfig};
use sqstates::moments;
use sqstates::su11::{self, BuildOptions, Su11Params};
use sqstates::verify::{self, Suite};

fn err(e: sqstates::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parity(s: &str) -> PyResult<Parity> {
    match s {
        "even" => Ok(Parity::Even),
        "odd" => Ok(Parity::Odd),
        _ => Err(PyValueError::new_err(format!("parity must be 'even' or 'odd', got {s:?}"))),
    }
}

fn opts(cutoff: usize) -> BuildOptions {
    BuildOptions { cutoff, ..BuildOptions::default() }
}

/// A normalized truncated state, in the Fock basis or an su(1,1) ladder basis.
#[pyclass(frozen)]
struct State {
    inner: StateVector,
    params: Option<Su11Params>,
}

#[pymethods]
impl State {
    #[new]
    fn new(amplitudes: Vec<C64>) -> PyResult<Self> {
        if amplitudes.is_empty() {
            return Err(PyValueError::new_err("need at least one amplitude"));
        }
        let basis = Basis::fock(amplitudes.len() - 1);
        Ok(State { inner: StateVector::normalized(basis, amplitudes).map_err(err)?, params: None })
    }

    #[getter]
    fn amplitudes(&self) -> Vec<C64> {
        self.inner.amplitudes().to_vec()
    }

    /// Bargmann index of a ladder state, None for Fock states.
    #[getter]
    fn k(&self) -> Option<f64> {
        match self.inner.basis() {
            Basis::Ladder(b) => Some(b.k()),
            _ => None,
        }
    }

    #[getter]
    fn cutoff(&self) -> usize {
        self.inner.dim() - 1
    }

    #[getter]
    fn tail_mass(&self) -> f64 {
        self.inner.tail_mass()
    }

    fn overlap(&self, other: &State) -> PyResult<f64> {
        self.inner.overlap(&other.inner).map_err(err)
    }

    /// ||(uK- + vK+ + wK3 - z) psi|| for a ladder state built by `construct`.
    fn eigen_residual(&self) -> PyResult<f64> {
        let (Some(p), Basis::Ladder(b)) = (self.params, self.inner.basis()) else {
            return Err(PyValueError::new_err("only states from construct() carry their parameters"));
        };
        let op = build_su11_generators(b).combination(p.u, p.v, p.w);
        self.inner.eigen_residual(&op, p.z).map_err(err)
    }

    /// Uncertainty report for (K1, K2, K3) of a ladder state.
    fn k_uncertainty<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let Basis::Ladder(b) = self.inner.basis() else {
            return Err(PyValueError::new_err("K uncertainty needs a ladder state"));
        };
        let g = build_su11_generators(b);
        let rep = moments::uncertainty_matrix(&self.inner, &[&g.k1, &g.k2, &g.k3]).map_err(err)?;
        to_py(py, &rep.to_json())
    }

    /// Mean, variance, Mandel Q and the distribution of a Fock state.
    fn photon_statistics<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &moments::photon_statistics(&self.inner).map_err(err)?)
    }

    /// q, p, K~1, K~2 variances of a Fock state.
    fn cat_variances<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &moments::cat_variances(&self.inner).map_err(err)?)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_record()).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __len__(&self) -> usize {
        self.inner.dim()
    }

    fn __repr__(&self) -> String {
        match self.k() {
            Some(k) => format!("State(ladder k={k}, cutoff={})", self.cutoff()),
            None => format!("State(fock, cutoff={})", self.cutoff()),
        }
    }
}

/// Eigenstate of uK- + vK+ + wK3 with eigenvalue z in the k ladder basis.
/// The cutoff doubles from `cutoff` until the state converges.
#[pyfunction]
#[pyo3(signature = (z, u, v, w, k, cutoff = 256))]
fn construct(py: Python<'_>, z: C64, u: C64, v: C64, w: C64, k: f64, cutoff: usize) -> PyResult<State> {
    let p = Su11Params::new(z, u, v, w, k).map_err(err)?;
    let s = py.detach(|| su11::construct(&p, &opts(cutoff))).map_err(err)?;
    Ok(State { inner: s.state, params: Some(p) })
}

/// The same eigenstate in the one-mode realization, as a Fock state of
/// definite parity (k = 1/4 even, 3/4 odd).
#[pyfunction]
#[pyo3(signature = (z, u, v, w, parity = "even", cutoff = 512))]
fn even_odd_state(py: Python<'_>, z: C64, u: C64, v: C64, w: C64, parity: &str, cutoff: usize) -> PyResult<State> {
    let par = self::parity(parity)?;
    let s = py.detach(|| su11::even_odd_state(z, u, v, w, par, &opts(cutoff))).map_err(err)?;
    Ok(State { inner: s, params: None })
}

#[pyfunction]
fn is_normalizable<'py>(py: Python<'py>, z: C64, u: C64, v: C64, w: C64, k: f64) -> PyResult<Bound<'py, PyAny>> {
    let p = Su11Params::new(z, u, v, w, k).map_err(err)?;
    to_py(py, &su11::is_normalizable(&p))
}

/// (z, u, v, w, k) of the squeezed even or odd cat state S(zeta)|z; parity>.
#[pyfunction]
#[pyo3(signature = (z, zeta, parity = "even"))]
fn squeezed_cat_params(z: C64, zeta: C64, parity: &str) -> PyResult<(C64, C64, C64, C64, f64)> {
    let p = su11::squeezed_cat_params(z, zeta, self::parity(parity)?).map_err(err)?;
    Ok((p.z, p.u, p.v, p.w, p.k))
}

/// Canonical operators (beta1, beta2, z) whose common eigenstate is the
/// Gaussian exp(-q.Mq + N.q).
#[pyfunction]
fn beta_from_m<'py>(py: Python<'py>, m: Vec<Vec<C64>>, n: Vec<C64>) -> PyResult<Bound<'py, PyAny>> {
    let dim = n.len();
    if m.len() != dim || m.iter().any(|r| r.len() != dim) {
        return Err(PyValueError::new_err("M must be square with the size of N"));
    }
    let mm = nalgebra::DMatrix::from_fn(dim, dim, |i, j| m[i][j]);
    let g = GaussianParams::new(mm, nalgebra::DVector::from_vec(n)).map_err(err)?;
    let b = canonical::beta_from_m(&g).map_err(err)?;
    to_py(py, &b.to_json())
}

#[pyfunction]
#[pyo3(signature = (chi, gamma1, n = 0))]
fn scheme_targets<'py>(py: Python<'py>, chi: C64, gamma1: C64, n: usize) -> PyResult<Bound<'py, PyAny>> {
    let cfg = SchemeConfig::new(chi, gamma1, n).map_err(err)?;
    to_py(py, &genscheme::scheme_targets(&cfg).map_err(err)?)
}

/// Runs one of fig1a, fig1b, fig2a, fig2b. Returns a dict with the table
/// columns, rows, per-row errors and the summary.
#[pyfunction]
#[pyo3(signature = (name, step = None, cutoff = 512))]
fn figure<'py>(py: Python<'py>, name: &str, step: Option<f64>, cutoff: usize) -> PyResult<Bound<'py, PyAny>> {
    let o = figures::figure_options(cutoff);
    let run = py
        .detach(|| match name {
            "fig1a" => Some(figures::fig1a(step.unwrap_or(0.05), &o)),
            "fig1b" => Some(figures::fig1b(step.unwrap_or(0.01), &o)),
            "fig2a" => Some(figures::fig2a(&o)),
            "fig2b" => Some(figures::fig2b(&o)),
            _ => None,
        })
        .ok_or_else(|| PyValueError::new_err(format!("unknown figure {name:?}")))?
        .map_err(err)?;
    to_py(py, &run)
}

/// Runs an invariant suite by name and returns its report.
#[pyfunction]
fn run_suite<'py>(py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyAny>> {
    let suite: Suite = name.parse().map_err(err)?;
    let rep = py.detach(|| verify::run_suite(suite));
    to_py(py, &rep)
}

#[pymodule]
fn sqstates_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<State>()?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(even_odd_state, m)?)?;
    m.add_function(wrap_pyfunction!(is_normalizable, m)?)?;
    m.add_function(wrap_pyfunction!(squeezed_cat_params, m)?)?;
    m.add_function(wrap_pyfunction!(beta_from_m, m)?)?;
    m.add_function(wrap_pyfunction!(scheme_targets, m)?)?;
    m.add_function(wrap_pyfunction!(figure, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
