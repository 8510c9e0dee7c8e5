//! Python bindings. Matrices cross the boundary as nested lists of complex.

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dqc1::bipartite::{self, Bipartition};
use dqc1::circuits;
use dqc1::discord::{self, DiscordMethod};
use dqc1::linalg::{ComplexMatrix, SortedSpectrum};
use dqc1::report::{self, CircuitSource, Criterion, SweepConfig};
use dqc1::{search, spectrum, states};

fn err(e: dqc1::Error) -> PyErr {
    if e.is_numeric() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m[(r, c)]).collect()).collect()
}

fn from_rows(data: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    let n = data.len();
    if data.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    Ok(ComplexMatrix::from_fn(n, n, |r, c| data[r][c]))
}

fn cut(total: usize, text: &str) -> PyResult<Bipartition> {
    Bipartition::parse(total, text).map_err(err)
}

fn spec(values: Vec<f64>) -> PyResult<SortedSpectrum> {
    SortedSpectrum::from_unsorted(values).map_err(err)
}

#[pyclass(name = "Unitary", module = "pydqc1", frozen)]
struct PyUnitary(circuits::Unitary);

#[pymethods]
impl PyUnitary {
    #[new]
    fn new(data: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Self(circuits::Unitary::new(from_rows(data)?).map_err(err)?))
    }

    #[staticmethod]
    fn identity(qubits: usize) -> PyResult<Self> {
        Ok(Self(circuits::Unitary::identity(qubits).map_err(err)?))
    }

    /// Parses a circuit file's text for a register of `qubits` qubits.
    #[staticmethod]
    fn from_circuit(text: &str, qubits: usize) -> PyResult<Self> {
        Ok(Self(circuits::parse_circuit(text, qubits).map_err(err)?.unitary()))
    }

    #[staticmethod]
    fn haar(qubits: usize, seed: u64) -> PyResult<Self> {
        Ok(Self(circuits::haar_random_unitary(qubits, seed).map_err(err)?))
    }

    /// Hadamard on the clean qubit followed by controlled-`v`.
    #[staticmethod]
    fn cdqc1(v: &PyUnitary) -> PyResult<Self> {
        Ok(Self(circuits::cdqc1_unitary(&v.0).map_err(err)?))
    }

    #[getter]
    fn qubits(&self) -> usize {
        self.0.qubits()
    }

    fn normalized_trace(&self) -> Complex64 {
        self.0.normalized_trace()
    }

    /// Sampled estimate of `tr(V)/2^n`: `(estimate, std_error)`.
    #[pyo3(signature = (alpha=0.0, shots=100_000, seed=0))]
    fn trace_estimate(&self, alpha: f64, shots: u64, seed: u64) -> PyResult<(Complex64, Complex64)> {
        let est = circuits::normalized_trace_estimate(&self.0, alpha, shots, seed).map_err(err)?;
        Ok((est.estimate, est.std_error))
    }

    fn to_list(&self) -> Vec<Vec<Complex64>> {
        rows(self.0.matrix())
    }

    fn __repr__(&self) -> String {
        format!("Unitary(qubits={})", self.0.qubits())
    }
}

#[pyclass(name = "DensityMatrix", module = "pydqc1", frozen)]
struct PyDensityMatrix(states::DensityMatrix);

#[pymethods]
impl PyDensityMatrix {
    #[new]
    fn new(data: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Self(states::DensityMatrix::new(from_rows(data)?).map_err(err)?))
    }

    /// Clean qubit with polarization `1 - alpha` next to `n` maximally mixed qubits.
    #[staticmethod]
    fn dqc1(n: usize, alpha: f64) -> PyResult<Self> {
        Ok(Self(states::dqc1_state(n, alpha).map_err(err)?))
    }

    #[staticmethod]
    fn tau(n: usize) -> PyResult<Self> {
        Ok(Self(states::tau_state(n).map_err(err)?))
    }

    #[getter]
    fn qubits(&self) -> usize {
        self.0.qubits()
    }

    fn evolve(&self, u: &PyUnitary) -> PyResult<Self> {
        Ok(Self(self.0.evolve(u.0.matrix()).map_err(err)?))
    }

    fn depolarize(&self, alpha: f64) -> PyResult<Self> {
        Ok(Self(states::depolarize(&self.0, alpha).map_err(err)?))
    }

    /// Eigenvalues in non-increasing order.
    fn spectrum(&self) -> PyResult<Vec<f64>> {
        Ok(self.0.spectrum().map_err(err)?.values().to_vec())
    }

    fn purity(&self) -> f64 {
        self.0.purity()
    }

    /// Party-A qubits as a comma list, e.g. `"0"` or `"0,2"`.
    fn negativity(&self, party_a: &str) -> PyResult<f64> {
        bipartite::negativity(&self.0, &cut(self.0.qubits(), party_a)?).map_err(err)
    }

    /// `(ppt, min_eigenvalue)` of the partial transpose.
    fn is_ppt(&self, party_a: &str) -> PyResult<(bool, f64)> {
        let bp = cut(self.0.qubits(), party_a)?;
        let v = bipartite::is_ppt(&self.0, &bp, bipartite::default_tolerance(self.0.dim())).map_err(err)?;
        Ok((v.ppt, v.min_eigenvalue))
    }

    fn partial_transpose(&self, party_a: &str) -> PyResult<Vec<Vec<Complex64>>> {
        let bp = cut(self.0.qubits(), party_a)?;
        Ok(rows(&bipartite::partial_transpose(&self.0, &bp).map_err(err)?))
    }

    /// `(zero_discord, residual)` with party A measured.
    fn zero_discord(&self, party_a: &str) -> PyResult<(bool, f64)> {
        let bp = cut(self.0.qubits(), party_a)?;
        let v = discord::is_zero_discord(&self.0, &bp, discord::default_discord_tolerance(self.0.dim()))
            .map_err(err)?;
        Ok((v.zero_discord, v.residual))
    }

    fn to_list(&self) -> Vec<Vec<Complex64>> {
        rows(self.0.matrix())
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(qubits={})", self.0.qubits())
    }
}

#[pyfunction]
fn dqc1_spectrum(n: usize, alpha: f64) -> PyResult<Vec<f64>> {
    Ok(states::dqc1_spectrum(n, alpha).map_err(err)?.values().to_vec())
}

/// One-qubit-versus-rest spectrum condition: `(holds, margin)`.
#[pyfunction]
fn johnston(values: Vec<f64>) -> PyResult<(bool, f64)> {
    let v = spectrum::johnston_sfs(&spec(values)?).map_err(err)?;
    Ok((v.holds, v.margin))
}

/// Ordering test for cuts of `k` qubits out of `total`: `(holds, margin)`.
#[pyfunction]
fn hildebrand(py: Python<'_>, values: Vec<f64>, k: usize, total: usize) -> PyResult<(bool, f64)> {
    let s = spec(values)?;
    let v = py.detach(|| spectrum::hildebrand_ppt_from_spectrum(&s, k, total)).map_err(err)?;
    Ok((v.holds, v.margin))
}

#[pyfunction]
fn alpha_threshold(k: usize) -> PyResult<f64> {
    spectrum::dqc1_alpha_threshold(k).map_err(err)
}

/// `(n, k, alpha_threshold, necessary, sufficient)`.
type ThresholdTuple = (usize, usize, f64, f64, f64);

#[pyfunction]
fn thresholds(n_range: Vec<usize>) -> PyResult<Vec<ThresholdTuple>> {
    Ok(report::thresholds_table(&n_range)
        .map_err(err)?
        .into_iter()
        .map(|r| (r.n, r.k, r.alpha_threshold, r.necessary, r.sufficient))
        .collect())
}

/// Runs a sweep. `circuit` is circuit-file text, `"cdqc1"`, `"haar"` or `None` for the identity.
#[pyfunction]
#[pyo3(signature = (n_range, alpha_grid, criteria=None, cut_sizes=None, all_bipartitions=false, circuit=None, seed=0))]
#[allow(clippy::too_many_arguments)]
fn scan<'py>(
    py: Python<'py>,
    n_range: Vec<usize>,
    alpha_grid: Vec<f64>,
    criteria: Option<Vec<String>>,
    cut_sizes: Option<Vec<usize>>,
    all_bipartitions: bool,
    circuit: Option<String>,
    seed: u64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let mut config = SweepConfig::new(n_range, alpha_grid);
    if let Some(c) = criteria {
        config.criteria = c.iter().map(|s| s.parse::<Criterion>()).collect::<Result<_, _>>().map_err(err)?;
    }
    config.cut_sizes = cut_sizes.unwrap_or_default();
    config.all_bipartitions = all_bipartitions;
    config.seed = seed;
    let source = match circuit.as_deref() {
        None => CircuitSource::Identity,
        Some("cdqc1") => CircuitSource::Cdqc1Haar,
        Some("haar") => CircuitSource::Haar,
        Some(text) => CircuitSource::File(text.to_string()),
    };
    let records = py.detach(|| report::scan(&config, &source)).map_err(err)?;
    records
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("run_id", r.run_id)?;
            d.set_item("n", r.n)?;
            d.set_item("alpha", r.alpha)?;
            d.set_item("bipartition", r.bipartition)?;
            d.set_item("criterion", r.criterion.name())?;
            d.set_item("verdict", r.verdict)?;
            d.set_item("margin", r.margin)?;
            d.set_item("seed", r.seed)?;
            d.set_item("wall_time_ms", r.wall_time_ms)?;
            Ok(d)
        })
        .collect()
}

/// Randomized search for a unitary entangling the `(n, alpha)` input across `party_a`.
#[pyfunction]
#[pyo3(signature = (n, alpha, party_a="0", budget=2000, seed=0))]
fn search_entangling<'py>(
    py: Python<'py>,
    n: usize,
    alpha: f64,
    party_a: &str,
    budget: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let bp = cut(n + 1, party_a)?;
    let out = py
        .detach(|| search::search_entangling_unitary(n, alpha, &bp, budget, seed))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("found", out.found())?;
    d.set_item("negativity", out.negativity)?;
    d.set_item("min_pt_eigenvalue", out.min_pt_eigenvalue)?;
    d.set_item("evaluations", out.evaluations)?;
    d.set_item("unitary", PyUnitary(out.unitary))?;
    Ok(d)
}

/// Entangling rotation within trace distance `epsilon` of the identity.
#[pyfunction]
#[pyo3(signature = (n, epsilon, party_a="0"))]
fn boundary_orbit_demo<'py>(py: Python<'py>, n: usize, epsilon: f64, party_a: &str) -> PyResult<Bound<'py, PyDict>> {
    let demo = bipartite::boundary_orbit_demo(n, &cut(n + 1, party_a)?, epsilon).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("theta", demo.theta)?;
    d.set_item("targets", demo.targets.to_vec())?;
    d.set_item("negativity", demo.negativity)?;
    d.set_item("distance_from_identity", demo.distance_from_identity)?;
    d.set_item("unitary", PyUnitary(demo.unitary))?;
    Ok(d)
}

/// Whether zero discord holds at every mixing parameter in `alphas`.
#[pyfunction]
fn discord_stable(rho: &PyDensityMatrix, party_a: &str, alphas: Vec<f64>) -> PyResult<bool> {
    let bp = cut(rho.0.qubits(), party_a)?;
    discord::discord_depolarization_check(&rho.0, &bp, &alphas).map_err(err)
}

#[pyfunction]
fn discord_method(rho: &PyDensityMatrix, party_a: &str) -> PyResult<&'static str> {
    let bp = cut(rho.0.qubits(), party_a)?;
    let v = discord::is_zero_discord(&rho.0, &bp, discord::default_discord_tolerance(rho.0.dim())).map_err(err)?;
    Ok(match v.method {
        DiscordMethod::Eigenbasis => "eigenbasis",
        DiscordMethod::Commuting => "commuting",
    })
}

#[pymodule]
fn pydqc1(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyUnitary>()?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_function(wrap_pyfunction!(dqc1_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(johnston, m)?)?;
    m.add_function(wrap_pyfunction!(hildebrand, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(search_entangling, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_orbit_demo, m)?)?;
    m.add_function(wrap_pyfunction!(discord_stable, m)?)?;
    m.add_function(wrap_pyfunction!(discord_method, m)?)?;
    Ok(())
}
