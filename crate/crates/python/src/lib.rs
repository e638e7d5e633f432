//! Python bindings. Structured results come back as plain dicts.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyString;
use serde::Serialize;

use ::localchan as core;
use core::linalg::NormOrder;
use core::matrix::ComplexMatrix;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn norm_order(p: &Bound<'_, PyAny>) -> PyResult<NormOrder> {
    if let Ok(s) = p.cast::<PyString>() {
        return s.to_str()?.parse().map_err(err);
    }
    NormOrder::new(p.extract::<u32>()?).map_err(err)
}

fn matrix_from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(err)
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect()).collect()
}

#[pyclass(name = "DensityOperator", module = "localchan", frozen, from_py_object)]
#[derive(Clone)]
struct PyDensity(core::DensityOperator);

#[pymethods]
impl PyDensity {
    /// Validates Hermiticity, unit trace and positivity.
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Self(core::DensityOperator::new(matrix_from_rows(rows)?).map_err(err)?))
    }

    #[staticmethod]
    fn pure(psi: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self(core::DensityOperator::pure(&psi).map_err(err)?))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(self.0.matrix())
    }

    fn purity(&self) -> f64 {
        self.0.purity()
    }

    fn tensor(&self, other: &PyDensity) -> PyResult<Self> {
        Ok(Self(self.0.tensor(&other.0).map_err(err)?))
    }

    fn partial_trace(&self, dims: Vec<usize>, keep: Vec<usize>) -> PyResult<Self> {
        Ok(Self(self.0.partial_trace(&dims, &keep).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("DensityOperator(dim={})", self.0.dim())
    }
}

#[pyclass(name = "QuantumChannel", module = "localchan", frozen, from_py_object)]
#[derive(Clone)]
struct PyChannel(core::QuantumChannel);

#[pymethods]
impl PyChannel {
    /// Builds a channel from Kraus operators given as nested lists.
    #[new]
    fn new(kraus: Vec<Vec<Vec<Complex64>>>) -> PyResult<Self> {
        let ops = kraus.into_iter().map(matrix_from_rows).collect::<PyResult<Vec<_>>>()?;
        Ok(Self(core::QuantumChannel::new(ops).map_err(err)?))
    }

    #[staticmethod]
    fn identity(dim: usize) -> Self {
        Self(core::QuantumChannel::identity(dim))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn kraus(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.0.kraus().iter().map(matrix_to_rows).collect()
    }

    fn apply(&self, rho: &PyDensity) -> PyResult<PyDensity> {
        Ok(PyDensity(self.0.apply(&rho.0).map_err(err)?))
    }

    /// ε-certificate in the given norm order, as a dict.
    #[pyo3(signature = (p = None, restarts = 64, seed = 0x5eed))]
    fn epsilon(&self, py: Python<'_>, p: Option<&Bound<'_, PyAny>>, restarts: usize, seed: u64) -> PyResult<Py<PyAny>> {
        let p = p.map(norm_order).transpose()?.unwrap_or_default();
        let search = core::channels::EpsilonSearch { restarts, seed, ..Default::default() };
        let cert = core::channels::epsilon_of_channel_with(&self.0, p, &search).map_err(err)?;
        to_py(py, &cert)
    }

    fn __repr__(&self) -> String {
        format!("QuantumChannel(dim={}, kraus={})", self.0.dim(), self.0.kraus().len())
    }
}

#[pyfunction]
fn bell_state() -> PyDensity {
    PyDensity(core::states::bell_state())
}

#[pyfunction]
fn ghz_state(n: usize) -> PyResult<PyDensity> {
    Ok(PyDensity(core::states::ghz_state(n).map_err(err)?))
}

#[pyfunction]
fn werner_state(w: f64) -> PyResult<PyDensity> {
    Ok(PyDensity(core::states::werner_state(w).map_err(err)?))
}

#[pyfunction]
fn random_pure(d: usize, seed: u64) -> PyResult<PyDensity> {
    Ok(PyDensity(core::states::random_pure(d, seed).map_err(err)?))
}

#[pyfunction]
fn random_separable(d1: usize, d2: usize, terms: usize, seed: u64) -> PyResult<PyDensity> {
    Ok(PyDensity(core::states::random_separable(d1, d2, terms, seed).map_err(err)?))
}

#[pyfunction]
fn schmidt_coefficients(psi: Vec<Complex64>, d1: usize, d2: usize) -> PyResult<Vec<f64>> {
    Ok(core::states::schmidt_decompose(&psi, d1, d2).map_err(err)?.coefficients)
}

#[pyfunction]
fn depolarizing_contraction(d: usize, k: f64) -> PyResult<PyChannel> {
    Ok(PyChannel(core::channels::depolarizing_contraction(d, k).map_err(err)?))
}

#[pyfunction]
fn dephasing(k: f64) -> PyResult<PyChannel> {
    Ok(PyChannel(core::channels::dephasing(k).map_err(err)?))
}

#[pyfunction]
fn random_channel(d: usize, env_dim: usize, seed: u64) -> PyResult<PyChannel> {
    Ok(PyChannel(core::channels::random_channel(d, env_dim, seed).map_err(err)?))
}

#[pyfunction]
fn tensor_channels(channels: Vec<PyChannel>) -> PyResult<PyChannel> {
    let chs: Vec<_> = channels.into_iter().map(|c| c.0).collect();
    Ok(PyChannel(core::channels::tensor_channels(&chs).map_err(err)?))
}

/// Applies `channels[i]` to subsystem `i`.
#[pyfunction]
fn apply_product(channels: Vec<PyChannel>, rho: &PyDensity) -> PyResult<PyDensity> {
    let chs: Vec<_> = channels.into_iter().map(|c| c.0).collect();
    Ok(PyDensity(core::channels::apply_product(&chs, &rho.0).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (a, b, p = None))]
fn p_distance(a: &PyDensity, b: &PyDensity, p: Option<&Bound<'_, PyAny>>) -> PyResult<f64> {
    let p = p.map(norm_order).transpose()?.unwrap_or_default();
    core::metrics::p_distance(&a.0, &b.0, p).map_err(err)
}

#[pyfunction]
fn separable_bound_hs(d1: usize, d2: usize, epsilon: f64) -> PyResult<f64> {
    core::bounds::separable_bound_hs(d1, d2, epsilon).map_err(err)
}

#[pyfunction]
fn entangled_bound_hs(d: usize, epsilon: f64) -> PyResult<f64> {
    core::bounds::entangled_bound_hs(d, epsilon).map_err(err)
}

#[pyfunction]
fn separable_bound_generic(epsilon: f64) -> PyResult<f64> {
    core::bounds::separable_bound_generic(epsilon).map_err(err)
}

#[pyfunction]
fn multi_channel_bound(n: usize, d: usize, epsilon: f64) -> PyResult<f64> {
    core::bounds::multi_channel_bound(n, d, epsilon).map_err(err)
}

#[pyfunction]
fn saturation_first_order(d1: usize, d2: usize, p: &Bound<'_, PyAny>, epsilon: f64) -> PyResult<f64> {
    core::bounds::saturation_first_order(d1, d2, norm_order(p)?, epsilon).map_err(err)
}

#[pyfunction]
fn witness_value(rho: &PyDensity) -> PyResult<f64> {
    core::witness::witness_value(&rho.0).map_err(err)
}

#[pyfunction]
fn concurrence(rho: &PyDensity) -> PyResult<f64> {
    core::witness::concurrence(&rho.0).map_err(err)
}

#[pyfunction]
fn pauli_coefficients(py: Python<'_>, rho: &PyDensity) -> PyResult<Py<PyAny>> {
    to_py(py, &core::witness::pauli_coefficients(&rho.0).map_err(err)?)
}

#[pyfunction]
fn bell_example(py: Python<'_>, epsilon: f64) -> PyResult<Py<PyAny>> {
    to_py(py, &core::explorer::bell_example(epsilon).map_err(err)?)
}

#[pyfunction]
fn ghz_decay(py: Python<'_>, n: usize, epsilon: f64) -> PyResult<Py<PyAny>> {
    to_py(py, &core::explorer::ghz_decay(n, epsilon).map_err(err)?)
}

#[pyfunction]
fn saturation_experiment(py: Python<'_>, d1: usize, d2: usize, p: &Bound<'_, PyAny>, epsilon: f64) -> PyResult<Py<PyAny>> {
    to_py(py, &core::explorer::saturation_experiment(d1, d2, norm_order(p)?, epsilon).map_err(err)?)
}

/// Runs a separable (or, with `any_state=True`, unrestricted) sweep and
/// returns its summary.
#[pyfunction]
#[pyo3(signature = (trials = 1000, seed = 42, d1 = 2, d2 = 2, p = None, epsilon = 0.01, channel = "contraction", any_state = false))]
#[allow(clippy::too_many_arguments)]
fn sweep(
    py: Python<'_>,
    trials: usize,
    seed: u64,
    d1: usize,
    d2: usize,
    p: Option<&Bound<'_, PyAny>>,
    epsilon: f64,
    channel: &str,
    any_state: bool,
) -> PyResult<Py<PyAny>> {
    use core::explorer::{separable_sweep, summarize, universal_sweep, ChannelSpec, ExperimentConfig};
    let channel = match channel {
        "contraction" => ChannelSpec::Contraction,
        "dephasing" => ChannelSpec::Dephasing,
        "random" => ChannelSpec::Random { env_dim: 2 },
        other => return Err(PyValueError::new_err(format!("unknown channel kind {other:?}"))),
    };
    let p = p.map(norm_order).transpose()?.unwrap_or_default();
    let cfg = ExperimentConfig { trials, seed, d1, d2, p, epsilon, channel, ..ExperimentConfig::default() };
    let reports = py
        .detach(|| if any_state { universal_sweep(&cfg) } else { separable_sweep(&cfg) })
        .map_err(err)?;
    to_py(py, &summarize(&reports))
}

#[pymodule]
fn localchan(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensity>()?;
    m.add_class::<PyChannel>()?;
    m.add_function(wrap_pyfunction!(bell_state, m)?)?;
    m.add_function(wrap_pyfunction!(ghz_state, m)?)?;
    m.add_function(wrap_pyfunction!(werner_state, m)?)?;
    m.add_function(wrap_pyfunction!(random_pure, m)?)?;
    m.add_function(wrap_pyfunction!(random_separable, m)?)?;
    m.add_function(wrap_pyfunction!(schmidt_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(depolarizing_contraction, m)?)?;
    m.add_function(wrap_pyfunction!(dephasing, m)?)?;
    m.add_function(wrap_pyfunction!(random_channel, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_channels, m)?)?;
    m.add_function(wrap_pyfunction!(apply_product, m)?)?;
    m.add_function(wrap_pyfunction!(p_distance, m)?)?;
    m.add_function(wrap_pyfunction!(separable_bound_hs, m)?)?;
    m.add_function(wrap_pyfunction!(entangled_bound_hs, m)?)?;
    m.add_function(wrap_pyfunction!(separable_bound_generic, m)?)?;
    m.add_function(wrap_pyfunction!(multi_channel_bound, m)?)?;
    m.add_function(wrap_pyfunction!(saturation_first_order, m)?)?;
    m.add_function(wrap_pyfunction!(witness_value, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(pauli_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(bell_example, m)?)?;
    m.add_function(wrap_pyfunction!(ghz_decay, m)?)?;
    m.add_function(wrap_pyfunction!(saturation_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
