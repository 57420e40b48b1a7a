//! Python bindings for the grover-sim engine.
//!
//! Exposes the register, the oracle, the transform kernels, the search
//! driver, and the two-amplitude model as a `pygrover` extension module.
//! Configuration and bounds problems raise `ValueError`; numerical
//! integrity problems raise `RuntimeError`.
//!
//! Usage from Python:
//!
//!     import pygrover
//!     oracle = pygrover.OracleSpec.from_targets(10, [123])
//!     report = pygrover.run(oracle, seed=1)
//!     assert report.success_probability >= 0.5

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use grover_sim::analysis;
use grover_sim::cli::{run_verification, CheckSelect, VerifyOptions};
use grover_sim::error::Error;
use grover_sim::grover::{self, DegeneracyOptions, GroverConfig, IterationPolicy};
use grover_sim::oracle::MatchMode;
use grover_sim::transforms;

fn to_py_err(e: Error) -> PyErr {
    if e.is_integrity() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

/// Complex amplitude register over 2^n basis states.
#[pyclass(name = "StateVector")]
struct PyStateVector {
    inner: grover_sim::StateVector,
}

#[pymethods]
impl PyStateVector {
    /// Uniform superposition: every amplitude 1/sqrt(N).
    #[staticmethod]
    fn uniform(qubits: usize) -> PyResult<Self> {
        grover_sim::StateVector::uniform(qubits)
            .map(|inner| PyStateVector { inner })
            .map_err(to_py_err)
    }

    /// Computational basis state e_index.
    #[staticmethod]
    fn basis(qubits: usize, index: usize) -> PyResult<Self> {
        grover_sim::StateVector::basis(qubits, index)
            .map(|inner| PyStateVector { inner })
            .map_err(to_py_err)
    }

    #[getter]
    fn qubit_count(&self) -> usize {
        self.inner.qubit_count()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// All amplitudes as Python complex numbers.
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    fn amplitude(&self, index: usize) -> PyResult<Complex64> {
        self.inner.amplitude(index).map_err(to_py_err)
    }

    /// Born-rule probability of measuring `index`.
    fn probability_of(&self, index: usize) -> PyResult<f64> {
        self.inner.probability_of(index).map_err(to_py_err)
    }

    fn norm_deviation(&self) -> f64 {
        self.inner.norm_deviation()
    }

    /// Samples a basis index; deterministic for a given seed.
    fn sample(&self, seed: u64) -> PyResult<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.inner.sample(&mut rng).map_err(to_py_err)
    }

    /// In-place Walsh-Hadamard transform.
    fn walsh_hadamard(&mut self) {
        transforms::walsh_hadamard(&mut self.inner);
    }

    /// Multiplies amplitude `i` by exp(1j * angles[i]) for each entry.
    fn selective_phase(&mut self, angles: std::collections::BTreeMap<usize, f64>) -> PyResult<()> {
        let spec = transforms::PhaseSpec::from_pairs(angles).map_err(to_py_err)?;
        transforms::selective_phase(&mut self.inner, &spec).map_err(to_py_err)
    }

    /// Negates the amplitude of every index the oracle marks.
    fn oracle_flip(&mut self, oracle: &PyOracleSpec) -> PyResult<()> {
        transforms::oracle_flip(&mut self.inner, &oracle.inner).map_err(to_py_err)
    }

    /// Inversion about the average amplitude (closed form).
    fn diffusion(&mut self) {
        transforms::diffusion(&mut self.inner);
    }

    /// Diffusion through the W*R*W factorization.
    fn diffusion_via_wrw(&mut self) {
        transforms::diffusion_via_wrw(&mut self.inner);
    }

    fn __repr__(&self) -> String {
        format!(
            "StateVector(qubits={}, states={})",
            self.inner.qubit_count(),
            self.inner.len()
        )
    }
}

/// The search condition: a set of marked basis indices.
#[pyclass(name = "OracleSpec")]
struct PyOracleSpec {
    inner: grover_sim::OracleSpec,
}

#[pymethods]
impl PyOracleSpec {
    #[staticmethod]
    fn from_targets(qubits: usize, targets: Vec<usize>) -> PyResult<Self> {
        grover_sim::OracleSpec::from_targets(qubits, targets)
            .map(|inner| PyOracleSpec { inner })
            .map_err(to_py_err)
    }

    /// Oracle over a record table loaded from a newline-delimited UTF-8
    /// file; marks every record equal to `query`.
    #[staticmethod]
    #[pyo3(signature = (path, query, case_insensitive = false))]
    fn from_table_file(path: std::path::PathBuf, query: &str, case_insensitive: bool) -> PyResult<Self> {
        let table = grover_sim::RecordTable::load(&path).map_err(to_py_err)?;
        let mode = if case_insensitive {
            MatchMode::AsciiCaseInsensitive
        } else {
            MatchMode::Exact
        };
        grover_sim::OracleSpec::from_table_with_mode(&table, query.as_bytes(), mode)
            .map(|inner| PyOracleSpec { inner })
            .map_err(to_py_err)
    }

    #[getter]
    fn qubit_count(&self) -> usize {
        self.inner.qubit_count()
    }

    #[getter]
    fn state_count(&self) -> usize {
        self.inner.state_count()
    }

    #[getter]
    fn targets(&self) -> Vec<usize> {
        self.inner.targets().iter().copied().collect()
    }

    /// True iff `index` satisfies the condition.
    fn evaluate(&self, index: usize) -> PyResult<bool> {
        self.inner.evaluate(index).map_err(to_py_err)
    }

    /// Probes a random permutation until a marked index appears; returns
    /// the number of condition evaluations.
    fn classical_linear_search(&self, seed: u64) -> PyResult<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.inner
            .classical_linear_search(&mut rng)
            .map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "OracleSpec(qubits={}, targets={})",
            self.inner.qubit_count(),
            self.inner.target_count()
        )
    }
}

/// Outcome of one search run.
#[pyclass(name = "RunReport")]
struct PyRunReport {
    #[pyo3(get)]
    sampled_index: usize,
    #[pyo3(get)]
    success: bool,
    #[pyo3(get)]
    iterations: usize,
    #[pyo3(get)]
    oracle_calls: usize,
    #[pyo3(get)]
    success_probability: f64,
    /// (m, marked amplitude, unmarked amplitude, marked probability) rows,
    /// when trajectory capture was requested.
    #[pyo3(get)]
    trajectory: Option<Vec<(usize, f64, f64, f64)>>,
    json: String,
}

#[pymethods]
impl PyRunReport {
    /// The report serialized exactly as the CLI emits it.
    fn to_json(&self) -> &str {
        &self.json
    }

    fn __repr__(&self) -> String {
        format!(
            "RunReport(sampled_index={}, success={}, iterations={}, success_probability={})",
            self.sampled_index, self.success, self.iterations, self.success_probability
        )
    }
}

impl PyRunReport {
    fn from_report(report: grover_sim::grover::RunReport) -> Self {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        PyRunReport {
            sampled_index: report.sampled_index,
            success: report.success,
            iterations: report.iterations,
            oracle_calls: report.oracle_calls,
            success_probability: report.success_probability,
            trajectory: report
                .trajectory
                .map(|points| points.iter().map(|p| (p.m, p.k, p.l, p.prob)).collect()),
            json,
        }
    }
}

/// The reduced two-amplitude description of the register.
#[pyclass(name = "TwoLevelState", skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyTwoLevelState {
    inner: analysis::TwoLevelState,
}

#[pymethods]
impl PyTwoLevelState {
    #[new]
    fn new(states: u64, targets: u64, marked: f64, unmarked: f64) -> PyResult<Self> {
        analysis::TwoLevelState::new(states, targets, marked, unmarked)
            .map(|inner| PyTwoLevelState { inner })
            .map_err(to_py_err)
    }

    #[staticmethod]
    fn uniform(states: u64, targets: u64) -> PyResult<Self> {
        analysis::TwoLevelState::uniform(states, targets)
            .map(|inner| PyTwoLevelState { inner })
            .map_err(to_py_err)
    }

    #[getter]
    fn states(&self) -> u64 {
        self.inner.states
    }

    #[getter]
    fn targets(&self) -> u64 {
        self.inner.targets
    }

    #[getter]
    fn marked(&self) -> f64 {
        self.inner.marked
    }

    #[getter]
    fn unmarked(&self) -> f64 {
        self.inner.unmarked
    }

    fn success_probability(&self) -> f64 {
        self.inner.success_probability()
    }

    fn __repr__(&self) -> String {
        format!(
            "TwoLevelState(states={}, targets={}, marked={}, unmarked={})",
            self.inner.states, self.inner.targets, self.inner.marked, self.inner.unmarked
        )
    }
}

/// One diffusion transform in the reduced space.
#[pyfunction]
fn diffusion_step(s: &PyTwoLevelState) -> PyTwoLevelState {
    PyTwoLevelState {
        inner: analysis::diffusion_step(s.inner),
    }
}

/// One full iteration (phase flip + diffusion) in the reduced space.
#[pyfunction]
fn grover_iteration_model(s: &PyTwoLevelState) -> PyTwoLevelState {
    PyTwoLevelState {
        inner: analysis::grover_iteration_model(s.inner),
    }
}

/// Schedule for a known target count: round(pi/4 sqrt(N/M)) with the
/// small-register carve-outs.
#[pyfunction]
fn optimal_iterations(states: u64, targets: u64) -> PyResult<usize> {
    grover::optimal_iterations(states, targets).map_err(to_py_err)
}

/// Runs the search. `iterations=None` selects the automatic schedule.
#[pyfunction]
#[pyo3(signature = (oracle, iterations = None, seed = 0, trajectory = false))]
fn run(
    oracle: &PyOracleSpec,
    iterations: Option<usize>,
    seed: u64,
    trajectory: bool,
) -> PyResult<PyRunReport> {
    let policy = match iterations {
        Some(m) => IterationPolicy::Fixed(m),
        None => IterationPolicy::Auto,
    };
    let config = GroverConfig::new(oracle.inner.clone(), policy, seed)
        .with_trajectory_capture(trajectory);
    grover::run(&config)
        .map(PyRunReport::from_report)
        .map_err(to_py_err)
}

/// Marked-state probability after every iteration count 0..=max_m.
#[pyfunction]
fn trajectory_scan(oracle: &PyOracleSpec, max_m: usize) -> PyResult<Vec<(usize, f64)>> {
    let config = GroverConfig::new(oracle.inner.clone(), IterationPolicy::Fixed(0), 0);
    grover::trajectory_scan(&config, max_m).map_err(to_py_err)
}

/// Searches without knowing the target count; returns a verified marked
/// index or None.
#[pyfunction]
#[pyo3(signature = (oracle, seed = 0, retries = 3))]
fn degeneracy_search(oracle: &PyOracleSpec, seed: u64, retries: usize) -> PyResult<Option<usize>> {
    let options = DegeneracyOptions::new(seed).with_retries(retries);
    grover::degeneracy_search(&oracle.inner, &options)
        .map(|outcome| outcome.found_index)
        .map_err(to_py_err)
}

/// Iterations until the single-target marked amplitude exceeds 1/sqrt(2).
#[pyfunction]
fn find_halfway_iteration(states: u64) -> PyResult<usize> {
    analysis::find_halfway_iteration(states).map_err(to_py_err)
}

/// Runs the verification suite and returns the JSON report string.
#[pyfunction]
#[pyo3(signature = (n_min = 2, n_max = 8, theorem = "all", seed = 0))]
fn verification_report(n_min: usize, n_max: usize, theorem: &str, seed: u64) -> PyResult<String> {
    let select = match theorem {
        "all" => CheckSelect::All,
        "1" => CheckSelect::Factorization,
        "2" => CheckSelect::TwoLevelExactness,
        "3" => CheckSelect::GrowthBound,
        "2.1" => CheckSelect::SignRecovery,
        "2.2" => CheckSelect::Conservation,
        "unitarity" => CheckSelect::Unitarity,
        other => {
            return Err(PyValueError::new_err(format!(
                "theorem must be 1, 2, 3, 2.1, 2.2, unitarity or all, got {other:?}"
            )))
        }
    };
    let opts = VerifyOptions {
        n_min,
        n_max,
        select,
        seed,
    };
    let results = run_verification(&opts).map_err(to_py_err)?;
    let all_passed = results.iter().all(|v| v.passed);
    let report = serde_json::json!({ "all_passed": all_passed, "results": results });
    Ok(serde_json::to_string_pretty(&report).expect("report serializes"))
}

#[pymodule]
fn pygrover(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStateVector>()?;
    m.add_class::<PyOracleSpec>()?;
    m.add_class::<PyRunReport>()?;
    m.add_class::<PyTwoLevelState>()?;
    m.add_function(wrap_pyfunction!(diffusion_step, m)?)?;
    m.add_function(wrap_pyfunction!(grover_iteration_model, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_iterations, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(trajectory_scan, m)?)?;
    m.add_function(wrap_pyfunction!(degeneracy_search, m)?)?;
    m.add_function(wrap_pyfunction!(find_halfway_iteration, m)?)?;
    m.add_function(wrap_pyfunction!(verification_report, m)?)?;
    m.add("DEFAULT_MAX_QUBITS", grover_sim::statevec::DEFAULT_MAX_QUBITS)?;
    Ok(())
}
