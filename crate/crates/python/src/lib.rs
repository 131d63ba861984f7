//! Python bindings for eurlab.
//!
//! Exposes the state families, measurement bases, Born-rule entropies, EUR
//! bounds, entanglement/steering criteria, tightness certification, and the
//! CSV scan driver. Build with `cargo build --release -p eurlab-python`; the
//! produced `libeurlab_py.so` imports as the `eurlab_py` module once renamed
//! to `eurlab_py.so` (see python/smoke_test.py).

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use eurlab::bounds;
use eurlab::cli;
use eurlab::criteria::{self, SteeringDirection};
use eurlab::entropy;
use eurlab::observables::{self, ObservableScenario};
use eurlab::states::{self, RandomStateKind, StateFamilySpec};

fn to_py_err(err: eurlab::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// Unit-norm state vector over a tensor product of subsystems.
#[pyclass(name = "PureState", from_py_object)]
#[derive(Clone)]
struct PyPureState {
    inner: states::PureState,
}

#[pymethods]
impl PyPureState {
    #[new]
    fn new(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self {
            inner: states::PureState::new(dims, amplitudes).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    fn to_density(&self) -> PyDensityMatrix {
        PyDensityMatrix {
            inner: self.inner.to_density(),
        }
    }

    fn __repr__(&self) -> String {
        format!("PureState(dims={:?})", self.inner.dims())
    }
}

/// Trace-one positive Hermitian operator over a tensor product.
#[pyclass(name = "DensityMatrix", from_py_object)]
#[derive(Clone)]
struct PyDensityMatrix {
    inner: states::DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    #[new]
    fn new(dims: Vec<usize>, entries: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let matrix = eurlab::linalg::ComplexMatrix::from_rows(&entries).map_err(to_py_err)?;
        Ok(Self {
            inner: states::DensityMatrix::new(dims, matrix).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        let m = self.inner.matrix();
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
            .collect()
    }

    fn partial_trace(&self, keep: Vec<usize>) -> PyResult<PyDensityMatrix> {
        Ok(PyDensityMatrix {
            inner: self.inner.partial_trace(&keep).map_err(to_py_err)?,
        })
    }

    fn von_neumann_entropy(&self) -> f64 {
        states::von_neumann_entropy(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dims={:?})", self.inner.dims())
    }
}

/// Orthonormal measurement basis (the eigenbasis of one observable).
#[pyclass(name = "MeasurementBasis", from_py_object)]
#[derive(Clone)]
struct PyMeasurementBasis {
    inner: observables::MeasurementBasis,
}

#[pymethods]
impl PyMeasurementBasis {
    #[new]
    fn new(vectors: Vec<Vec<Complex64>>, label: String) -> PyResult<Self> {
        Ok(Self {
            inner: observables::MeasurementBasis::new(vectors, label).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    fn vectors(&self) -> Vec<Vec<Complex64>> {
        self.inner.vectors().to_vec()
    }

    fn __repr__(&self) -> String {
        format!(
            "MeasurementBasis(dim={}, label={:?})",
            self.inner.dim(),
            self.inner.label()
        )
    }
}

/// Outcome of one criterion evaluation.
#[pyclass(name = "CriterionReport", from_py_object)]
#[derive(Clone)]
struct PyCriterionReport {
    inner: criteria::CriterionReport,
}

#[pymethods]
impl PyCriterionReport {
    #[getter]
    fn criterion(&self) -> &'static str {
        self.inner.criterion_id.as_str()
    }

    #[getter]
    fn lhs(&self) -> f64 {
        self.inner.lhs
    }

    #[getter]
    fn threshold(&self) -> f64 {
        self.inner.threshold
    }

    #[getter]
    fn margin(&self) -> f64 {
        self.inner.margin
    }

    #[getter]
    fn violated(&self) -> bool {
        self.inner.verdict == criteria::Verdict::Violated
    }

    #[getter]
    fn verdict(&self) -> &'static str {
        self.inner.verdict.as_str()
    }

    fn components(&self) -> Vec<(String, f64)> {
        self.inner
            .components
            .iter()
            .map(|c| (c.name.clone(), c.value))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "CriterionReport({}, lhs={:.9}, threshold={:.9}, {})",
            self.inner.criterion_id.as_str(),
            self.inner.lhs,
            self.inner.threshold,
            self.inner.verdict.as_str()
        )
    }
}

/// EUR lower bound with tightness flag and provenance.
#[pyclass(name = "BoundValue", from_py_object)]
#[derive(Clone)]
struct PyBoundValue {
    inner: bounds::BoundValue,
}

#[pymethods]
impl PyBoundValue {
    #[getter]
    fn value(&self) -> f64 {
        self.inner.value
    }

    #[getter]
    fn tight(&self) -> bool {
        self.inner.tight
    }

    #[getter]
    fn provenance(&self) -> &'static str {
        self.inner.provenance.as_str()
    }

    fn __repr__(&self) -> String {
        format!(
            "BoundValue({:.9}, tight={}, {})",
            self.inner.value, self.inner.tight, self.inner.provenance.as_str()
        )
    }
}

#[pyfunction]
fn bell_phi_plus() -> PyResult<PyPureState> {
    make(StateFamilySpec::BellPhiPlus)
}

#[pyfunction]
fn eps_family(eps: f64) -> PyResult<PyPureState> {
    make(StateFamilySpec::EpsFamily { eps })
}

#[pyfunction]
fn qudit_schmidt(lambdas: Vec<f64>) -> PyResult<PyPureState> {
    make(StateFamilySpec::QuditSchmidt { lambdas })
}

#[pyfunction]
fn ghz(lambda0: f64) -> PyResult<PyPureState> {
    make(StateFamilySpec::Ghz { lambda0 })
}

#[pyfunction]
fn w_state(lambda0: f64, lambda2: f64) -> PyResult<PyPureState> {
    make(StateFamilySpec::W { lambda0, lambda2 })
}

#[pyfunction]
#[pyo3(signature = (lambdas, phi=0.0))]
fn three_qubit_general(lambdas: [f64; 5], phi: f64) -> PyResult<PyPureState> {
    make(StateFamilySpec::ThreeQubitGeneral { lambdas, phi })
}

fn make(spec: StateFamilySpec) -> PyResult<PyPureState> {
    Ok(PyPureState {
        inner: states::make_state(&spec).map_err(to_py_err)?,
    })
}

/// Basis by token: Z, X, Y, comp, fourier, or mub:r.
#[pyfunction]
fn basis(dim: usize, token: &str) -> PyResult<PyMeasurementBasis> {
    Ok(PyMeasurementBasis {
        inner: cli::parse_basis_token(token, dim).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn mub_set(dim: usize, count: usize) -> PyResult<Vec<PyMeasurementBasis>> {
    Ok(observables::mub_set(dim, count)
        .map_err(to_py_err)?
        .into_iter()
        .map(|inner| PyMeasurementBasis { inner })
        .collect())
}

#[pyfunction]
fn max_overlap(b1: PyMeasurementBasis, b2: PyMeasurementBasis) -> PyResult<f64> {
    observables::max_overlap(&b1.inner, &b2.inner).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (b1, b2, tol=1e-10))]
fn is_mutually_unbiased(
    b1: PyMeasurementBasis,
    b2: PyMeasurementBasis,
    tol: f64,
) -> PyResult<bool> {
    observables::is_mutually_unbiased(&b1.inner, &b2.inner, tol).map_err(to_py_err)
}

fn borrow_bases(bases: &[PyMeasurementBasis]) -> Vec<&observables::MeasurementBasis> {
    bases.iter().map(|b| &b.inner).collect()
}

#[pyfunction]
fn born_distribution(state: PyDensityMatrix, bases: Vec<PyMeasurementBasis>) -> PyResult<Vec<f64>> {
    let refs = borrow_bases(&bases);
    Ok(entropy::born_distribution(&state.inner, &refs)
        .map_err(to_py_err)?
        .probabilities()
        .to_vec())
}

#[pyfunction]
fn shannon_entropy(probabilities: Vec<f64>) -> PyResult<f64> {
    let shape = vec![probabilities.len()];
    let p = entropy::ProbabilityDistribution::new(shape, probabilities).map_err(to_py_err)?;
    Ok(entropy::shannon_entropy(&p))
}

#[pyfunction]
fn joint_entropy(state: PyDensityMatrix, bases: Vec<PyMeasurementBasis>) -> PyResult<f64> {
    let refs = borrow_bases(&bases);
    entropy::joint_entropy(&state.inner, &refs).map_err(to_py_err)
}

#[pyfunction]
fn conditional_entropy(
    state: PyDensityMatrix,
    target_sites: Vec<usize>,
    given_sites: Vec<usize>,
    bases: Vec<PyMeasurementBasis>,
) -> PyResult<f64> {
    let refs = borrow_bases(&bases);
    entropy::conditional_entropy(&state.inner, &target_sites, &given_sites, &refs)
        .map_err(to_py_err)
}

#[pyfunction]
fn maassen_uffink(b1: PyMeasurementBasis, b2: PyMeasurementBasis) -> PyResult<PyBoundValue> {
    Ok(PyBoundValue {
        inner: bounds::maassen_uffink(&b1.inner, &b2.inner).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn multi_observable_bound(bases: Vec<PyMeasurementBasis>) -> PyResult<PyBoundValue> {
    let owned: Vec<observables::MeasurementBasis> =
        bases.into_iter().map(|b| b.inner).collect();
    Ok(PyBoundValue {
        inner: bounds::multi_observable_bound(&owned).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn scenario_bounds(bases: Vec<PyMeasurementBasis>) -> PyResult<(PyBoundValue, PyBoundValue)> {
    let owned: Vec<observables::MeasurementBasis> =
        bases.into_iter().map(|b| b.inner).collect();
    let sb = bounds::scenario_bounds(&owned).map_err(to_py_err)?;
    Ok((PyBoundValue { inner: sb.f1 }, PyBoundValue { inner: sb.f2 }))
}

fn uniform_scenario(
    state: &states::DensityMatrix,
    bases: Vec<PyMeasurementBasis>,
) -> PyResult<ObservableScenario> {
    let owned: Vec<observables::MeasurementBasis> =
        bases.into_iter().map(|b| b.inner).collect();
    ObservableScenario::uniform(state.dims().len(), owned).map_err(to_py_err)
}

/// Bipartite separability criterion (the same measurement list on each site).
#[pyfunction]
#[pyo3(signature = (state, bases, state_dependent=false))]
fn bipartite_criterion(
    state: PyDensityMatrix,
    bases: Vec<PyMeasurementBasis>,
    state_dependent: bool,
) -> PyResult<PyCriterionReport> {
    let scenario = uniform_scenario(&state.inner, bases)?;
    Ok(PyCriterionReport {
        inner: criteria::bipartite_criterion(&state.inner, &scenario, state_dependent)
            .map_err(to_py_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (state, bases, state_dependent=false))]
fn full_separability_criterion(
    state: PyDensityMatrix,
    bases: Vec<PyMeasurementBasis>,
    state_dependent: bool,
) -> PyResult<PyCriterionReport> {
    let scenario = uniform_scenario(&state.inner, bases)?;
    Ok(PyCriterionReport {
        inner: criteria::full_separability_criterion(&state.inner, &scenario, state_dependent)
            .map_err(to_py_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (state, bases, state_dependent=false))]
fn gme_criterion(
    state: PyDensityMatrix,
    bases: Vec<PyMeasurementBasis>,
    state_dependent: bool,
) -> PyResult<PyCriterionReport> {
    let scenario = uniform_scenario(&state.inner, bases)?;
    Ok(PyCriterionReport {
        inner: criteria::gme_criterion(&state.inner, &scenario, state_dependent)
            .map_err(to_py_err)?,
    })
}

/// Steering criterion; `direction` is "a_to_b" or "b_to_a".
#[pyfunction]
fn steering_criterion(
    state: PyDensityMatrix,
    bases: Vec<PyMeasurementBasis>,
    direction: &str,
) -> PyResult<PyCriterionReport> {
    let dir = match direction {
        "a_to_b" => SteeringDirection::AToB,
        "b_to_a" => SteeringDirection::BToA,
        _ => {
            return Err(PyValueError::new_err(format!(
                "unknown direction `{direction}` (expected a_to_b or b_to_a)"
            )))
        }
    };
    let scenario = uniform_scenario(&state.inner, bases)?;
    Ok(PyCriterionReport {
        inner: criteria::steering_criterion(&state.inner, &scenario, dir).map_err(to_py_err)?,
    })
}

/// Token-based evaluation matching the CLI (`prop1`.., `criterio1`..,
/// `multi_ent*`, `gen_ent*`, `qudit`, `steer_*`).
#[pyfunction]
#[pyo3(signature = (token, state, bases="Z,X,Y"))]
fn evaluate_criterion(
    token: &str,
    state: PyDensityMatrix,
    bases: &str,
) -> PyResult<PyCriterionReport> {
    let scenario = cli::scenario_from_tokens(state.inner.dims(), bases).ok();
    Ok(PyCriterionReport {
        inner: cli::evaluate_criterion_token(token, &state.inner, scenario.as_ref())
            .map_err(to_py_err)?,
    })
}

/// Minimizes the entropy sum over pure states of `sites` subsystems, every
/// site measuring `bases`. Returns (min_found, argmin, converged).
#[pyfunction]
#[pyo3(signature = (bases, sites=1, restarts=64, seed=0))]
fn certify_tightness(
    bases: Vec<PyMeasurementBasis>,
    sites: usize,
    restarts: usize,
    seed: u64,
) -> PyResult<(f64, PyPureState, bool)> {
    let owned: Vec<observables::MeasurementBasis> =
        bases.into_iter().map(|b| b.inner).collect();
    let per_site = vec![owned; sites.max(1)];
    let cert =
        bounds::certify_tightness(&per_site, 0.0, restarts, seed).map_err(to_py_err)?;
    Ok((
        cert.min_found,
        PyPureState { inner: cert.argmin },
        !cert.hit_iteration_cap,
    ))
}

#[pyfunction]
fn random_pure_state(dims: Vec<usize>, seed: u64) -> PyResult<PyDensityMatrix> {
    Ok(PyDensityMatrix {
        inner: states::random_state(&RandomStateKind::Pure { dims }, seed).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn random_separable(dims: Vec<usize>, terms: usize, seed: u64) -> PyResult<PyDensityMatrix> {
    Ok(PyDensityMatrix {
        inner: states::random_state(&RandomStateKind::Separable { dims, terms }, seed)
            .map_err(to_py_err)?,
    })
}

#[pyfunction]
fn random_biseparable_3qubit(terms: usize, seed: u64) -> PyResult<PyDensityMatrix> {
    Ok(PyDensityMatrix {
        inner: states::random_state(&RandomStateKind::Biseparable3Qubit { terms }, seed)
            .map_err(to_py_err)?,
    })
}

/// Runs a grid scan and writes the CSV file; returns a summary dict.
#[pyfunction]
#[pyo3(signature = (scan_id, out, steps=99, bases="Z,X,Y", criteria=None, seed=0))]
fn run_scan<'py>(
    py: Python<'py>,
    scan_id: &str,
    out: &str,
    steps: usize,
    bases: &str,
    criteria: Option<&str>,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let id = cli::ScanId::parse(scan_id).map_err(to_py_err)?;
    let config = cli::ScanConfig {
        scan_id: id,
        family: None,
        grid: Vec::new(),
        steps,
        bases: bases.to_string(),
        criteria: criteria
            .map(str::to_string)
            .unwrap_or_else(|| id.default_criteria().to_string()),
        output_path: out.into(),
        seed,
    };
    let summary = cli::run_scan(&config).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("rows", summary.rows)?;
    dict.set_item("feasible", summary.feasible)?;
    dict.set_item("infeasible", summary.infeasible)?;
    let violated = PyDict::new(py);
    for (token, count) in &summary.violated_counts {
        violated.set_item(token, count)?;
    }
    dict.set_item("violated", violated)?;
    Ok(dict)
}

/// Re-checks a scan CSV; returns (rows, criterion_groups) or raises.
#[pyfunction]
fn verify_csv(path: &str) -> PyResult<(usize, usize)> {
    cli::verify_csv(std::path::Path::new(path)).map_err(to_py_err)
}

#[pymodule]
fn eurlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPureState>()?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyMeasurementBasis>()?;
    m.add_class::<PyCriterionReport>()?;
    m.add_class::<PyBoundValue>()?;

    m.add_function(wrap_pyfunction!(bell_phi_plus, m)?)?;
    m.add_function(wrap_pyfunction!(eps_family, m)?)?;
    m.add_function(wrap_pyfunction!(qudit_schmidt, m)?)?;
    m.add_function(wrap_pyfunction!(ghz, m)?)?;
    m.add_function(wrap_pyfunction!(w_state, m)?)?;
    m.add_function(wrap_pyfunction!(three_qubit_general, m)?)?;
    m.add_function(wrap_pyfunction!(basis, m)?)?;
    m.add_function(wrap_pyfunction!(mub_set, m)?)?;
    m.add_function(wrap_pyfunction!(max_overlap, m)?)?;
    m.add_function(wrap_pyfunction!(is_mutually_unbiased, m)?)?;
    m.add_function(wrap_pyfunction!(born_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(shannon_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(joint_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(conditional_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(maassen_uffink, m)?)?;
    m.add_function(wrap_pyfunction!(multi_observable_bound, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(bipartite_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(full_separability_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(gme_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(steering_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(certify_tightness, m)?)?;
    m.add_function(wrap_pyfunction!(random_pure_state, m)?)?;
    m.add_function(wrap_pyfunction!(random_separable, m)?)?;
    m.add_function(wrap_pyfunction!(random_biseparable_3qubit, m)?)?;
    m.add_function(wrap_pyfunction!(run_scan, m)?)?;
    m.add_function(wrap_pyfunction!(verify_csv, m)?)?;
    Ok(())
}
