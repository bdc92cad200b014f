//! Python bindings for the `tomita` toolkit.
//!
//! Matrices cross the boundary as lists of rows of Python `complex`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use tomita::entanglement::{self, BellSettings, TwoQubitDensity, TwoQubitState};
use tomita::fock::FockCutoff;
use tomita::modular::{self, AlgebraBasis, ModularData};
use tomita::susy::{self, SupermultipletState};
use tomita::udw::{self, DetectorPairState, NumericState, PairCoefficients};
use tomita::{AntilinearOperator, ComplexMatrix, ComplexVector};

create_exception!(tomita, TomitaError, PyValueError, "Precondition or numerical failure in the toolkit.");

fn err(e: tomita::Error) -> PyErr {
    TomitaError::new_err(e.to_string())
}

type Rows = Vec<Vec<Complex64>>;

fn to_matrix(rows: &Rows) -> PyResult<ComplexMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("matrix rows have different lengths"));
    }
    Ok(ComplexMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

fn from_matrix(m: &ComplexMatrix) -> Rows {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn to_vector(v: &[Complex64]) -> ComplexVector {
    ComplexVector::from_column_slice(v)
}

fn from_vector(v: &ComplexVector) -> Vec<Complex64> {
    v.iter().copied().collect()
}

fn settings(s: (f64, f64, f64, f64)) -> BellSettings {
    BellSettings::new(s.0, s.1, s.2, s.3)
}

fn settings_tuple(s: BellSettings) -> (f64, f64, f64, f64) {
    let [a, b, ap, bp] = s.to_array();
    (a, b, ap, bp)
}

/// Finite-dimensional von Neumann algebra given by a linear basis.
#[pyclass(name = "Algebra", module = "tomita", frozen)]
struct PyAlgebra {
    inner: AlgebraBasis,
}

#[pymethods]
impl PyAlgebra {
    /// Smallest unital *-algebra containing the generators.
    #[staticmethod]
    fn generate(generators: Vec<Rows>, dim: usize) -> PyResult<Self> {
        let mats = generators.iter().map(to_matrix).collect::<PyResult<Vec<_>>>()?;
        Ok(Self { inner: modular::generate_algebra(&mats, dim).map_err(err)? })
    }

    /// `B(C²) ⊗ I` on two qubits.
    #[staticmethod]
    fn local_qubit() -> Self {
        Self { inner: modular::local_qubit_algebra() }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn elements(&self) -> Vec<Rows> {
        self.inner.elements().iter().map(from_matrix).collect()
    }

    fn commutant(&self) -> Self {
        Self { inner: modular::commutant(&self.inner) }
    }

    fn is_von_neumann(&self) -> bool {
        modular::is_von_neumann(&self.inner)
    }

    fn is_cyclic(&self, omega: Vec<Complex64>) -> PyResult<bool> {
        modular::is_cyclic(&self.inner, &to_vector(&omega)).map_err(err)
    }

    fn is_separating(&self, omega: Vec<Complex64>) -> PyResult<bool> {
        modular::is_separating(&self.inner, &to_vector(&omega)).map_err(err)
    }

    fn membership_residual(&self, m: Rows) -> PyResult<f64> {
        Ok(self.inner.membership_residual(&to_matrix(&m)?))
    }

    fn __repr__(&self) -> String {
        format!("Algebra(dim={}, len={})", self.inner.dim(), self.inner.len())
    }
}

/// Modular conjugation `J` and modular operator `Δ`.
#[pyclass(name = "ModularData", module = "tomita", frozen)]
struct PyModularData {
    inner: ModularData,
    basis: AlgebraBasis,
}

#[pymethods]
impl PyModularData {
    /// Matrix `M` of the antilinear `J v = M·conj(v)`.
    #[getter]
    fn j(&self) -> Rows {
        from_matrix(self.inner.j.matrix())
    }

    #[getter]
    fn delta(&self) -> Rows {
        from_matrix(&self.inner.delta)
    }

    /// Eigenvalues of `Δ`, descending.
    #[getter]
    fn delta_spectrum(&self) -> Vec<f64> {
        self.inner.delta_spectrum.eigenvalues.clone()
    }

    fn delta_power(&self, p: f64) -> Rows {
        from_matrix(&self.inner.delta_power(p))
    }

    /// `Δ^{it}`.
    fn modular_flow(&self, t: f64) -> Rows {
        from_matrix(&self.inner.modular_flow(t))
    }

    fn apply_j(&self, v: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        Ok(from_vector(&self.inner.j.apply(&to_vector(&v)).map_err(err)?))
    }

    /// Residual of every modular identity, keyed by name.
    fn verify(&self) -> BTreeMap<&'static str, f64> {
        modular::verify_modular_properties(&self.inner, &self.basis)
            .entries
            .into_iter()
            .map(|e| (e.name, e.residual))
            .collect()
    }
}

/// Tomita-Takesaki data of `algebra` at the cyclic separating vector `omega`.
#[pyfunction(name = "tomita")]
fn modular_data(algebra: &PyAlgebra, omega: Vec<Complex64>) -> PyResult<PyModularData> {
    let inner = modular::tomita(&algebra.inner, &to_vector(&omega)).map_err(err)?;
    Ok(PyModularData { inner, basis: algebra.inner.clone() })
}

#[pyfunction]
fn bell_psi_plus() -> Vec<Complex64> {
    from_vector(&modular::bell_psi_plus())
}

#[pyfunction]
fn bell_phi_plus() -> Vec<Complex64> {
    from_vector(&modular::bell_phi_plus())
}

/// `|⟨ψ, σʸ⊗σʸ ψ̄⟩|` for a normalized two-qubit state.
#[pyfunction]
fn concurrence_pure(amplitudes: Vec<Complex64>) -> PyResult<f64> {
    let psi = TwoQubitState::new(to_vector(&amplitudes)).map_err(err)?;
    Ok(entanglement::concurrence_pure(&psi).value())
}

#[pyfunction]
fn wootters_concurrence(rho: Rows) -> PyResult<f64> {
    let rho = TwoQubitDensity::new(to_matrix(&rho)?).map_err(err)?;
    Ok(entanglement::wootters_concurrence(&rho).map_err(err)?.value())
}

/// `|⟨ψ, Jψ⟩|` for the antilinear `J v = M·conj(v)`.
#[pyfunction]
fn modular_concurrence(psi: Vec<Complex64>, j: Rows) -> PyResult<f64> {
    let j = AntilinearOperator::new(to_matrix(&j)?).map_err(err)?;
    Ok(entanglement::modular_concurrence(&to_vector(&psi), &j).map_err(err)?.value())
}

/// `⟨B⟩` for settings `(α, β, α′, β′)`.
#[pyfunction]
fn chsh_expectation(rho: Rows, angles: (f64, f64, f64, f64)) -> PyResult<f64> {
    let rho = TwoQubitDensity::new(to_matrix(&rho)?).map_err(err)?;
    entanglement::chsh_expectation(&rho, &settings(angles)).map_err(err)
}

/// Best settings and value of `⟨B⟩` over coplanar observables.
#[pyfunction]
#[pyo3(signature = (rho, grid_steps = entanglement::DEFAULT_GRID_STEPS, refine_iters = entanglement::DEFAULT_REFINE_ITERS))]
fn maximize_chsh(rho: Rows, grid_steps: usize, refine_iters: usize) -> PyResult<((f64, f64, f64, f64), f64)> {
    let rho = TwoQubitDensity::new(to_matrix(&rho)?).map_err(err)?;
    let (s, value) = entanglement::maximize_chsh(&rho, grid_steps, refine_iters);
    Ok((settings_tuple(s), value))
}

/// `2√(1 + C²)`.
#[pyfunction]
fn max_violation_from_concurrence(c: f64) -> PyResult<f64> {
    let c = entanglement::ConcurrenceValue::new(c).map_err(err)?;
    Ok(entanglement::max_violation_from_concurrence(c))
}

/// Two truncated oscillators with a spin, carrying both supercharge families.
#[pyclass(name = "SusyModel", module = "tomita", frozen)]
struct PySusyModel {
    inner: susy::SusyModel,
}

#[pymethods]
impl PySusyModel {
    #[new]
    #[pyo3(signature = (n_max, hbar_omega = 1.0))]
    fn new(n_max: usize, hbar_omega: f64) -> PyResult<Self> {
        let cutoff = FockCutoff::new(n_max).map_err(err)?;
        Ok(Self { inner: susy::SusyModel::new(cutoff, hbar_omega).map_err(err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// `|⟨Φ, JΦ⟩|` for `Φ = α|k, l−1⟩⊗e_↑ + β|l−1, k⟩⊗e_↓`.
    fn concurrence(&self, k: usize, l: usize, alpha: Complex64, beta: Complex64) -> PyResult<f64> {
        let state = SupermultipletState { k, l, alpha, beta };
        Ok(susy::susy_concurrence(&self.inner, &state).map_err(err)?.value())
    }

    fn apply_j(&self, v: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        Ok(from_vector(&susy::j_susy_apply(&self.inner, &to_vector(&v)).map_err(err)?))
    }

    /// Intertwining residuals on the truncation-safe block, keyed by name.
    fn verify_intertwining(&self) -> PyResult<BTreeMap<&'static str, f64>> {
        let report = susy::verify_intertwining(&self.inner).map_err(err)?;
        Ok(report.entries.into_iter().map(|e| (e.name, e.residual)).collect())
    }
}

/// `ε·exp(−(t−t₀)²/(2σ_t²) − |x−x₀|²/(2σ_x²))`.
#[pyclass(name = "GaussianTestFunction", module = "tomita", frozen)]
struct PyGaussian {
    inner: udw::GaussianTestFunction,
}

#[pymethods]
impl PyGaussian {
    #[new]
    #[pyo3(signature = (amplitude, t0 = 0.0, x0 = (0.0, 0.0, 0.0), sigma_t = 1.0, sigma_x = 1.0))]
    fn new(amplitude: f64, t0: f64, x0: (f64, f64, f64), sigma_t: f64, sigma_x: f64) -> PyResult<Self> {
        let inner = udw::GaussianTestFunction::new(amplitude, t0, [x0.0, x0.1, x0.2], sigma_t, sigma_x).map_err(err)?;
        Ok(Self { inner })
    }

    fn __repr__(&self) -> String {
        let f = &self.inner;
        format!(
            "GaussianTestFunction(amplitude={}, t0={}, x0={:?}, sigma_t={}, sigma_x={})",
            f.amplitude, f.t0, f.x0, f.sigma_t, f.sigma_x
        )
    }
}

/// Wightman pairing `⟨f, g⟩` of a free scalar field.
#[pyfunction]
#[pyo3(signature = (f, g, mass = 1.0, spatial_dim = 3))]
fn inner_product(f: &PyGaussian, g: &PyGaussian, mass: f64, spatial_dim: usize) -> PyResult<Complex64> {
    let model = udw::FieldModel::new(mass, spatial_dim).map_err(err)?;
    udw::inner_product(&model, &f.inner, &g.inner).map_err(err)
}

/// `2r·e^{−2⟨h,h⟩}/(1+r²)`.
#[pyfunction]
fn udw_concurrence(r: f64, hh: f64) -> PyResult<f64> {
    Ok(udw::udw_concurrence(r, hh).map_err(err)?.value())
}

#[pyfunction]
fn chsh_udw(r: f64, hh: f64, angles: (f64, f64, f64, f64)) -> PyResult<f64> {
    udw::chsh_udw(r, hh, &settings(angles)).map_err(err)
}

/// Detector pair after the dephasing evolution on a two-mode Fock space.
#[pyclass(name = "DetectorState", module = "tomita", frozen)]
struct PyDetectorState {
    inner: NumericState,
}

impl PyDetectorState {
    fn state(&self) -> DetectorPairState {
        DetectorPairState::Numeric(self.inner.clone())
    }
}

#[pymethods]
impl PyDetectorState {
    /// `|⟨ψ, (J_AB⊗K_F)ψ⟩|`.
    fn concurrence(&self) -> PyResult<f64> {
        Ok(udw::state_concurrence(&self.state()).map_err(err)?.value())
    }

    /// Wootters concurrence of the reduced detector density.
    fn reduced_concurrence(&self) -> PyResult<f64> {
        Ok(udw::reduced_concurrence(&self.state(), &Default::default()).map_err(err)?.value())
    }

    fn reduced_density(&self) -> PyResult<Rows> {
        Ok(from_matrix(udw::reduced_detector_density(&self.state()).map_err(err)?.matrix()))
    }

    #[getter]
    fn hh(&self) -> f64 {
        self.inner.coefficients.hh()
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings.iter().map(ToString::to_string).collect()
    }
}

/// Numeric evolution with `⟨h, h⟩ = hh` split symmetrically over two modes.
#[pyfunction]
#[pyo3(signature = (r, hh, n_max = 16))]
fn evolve(r: f64, hh: f64, n_max: usize) -> PyResult<PyDetectorState> {
    let coefficients = PairCoefficients::abstract_pair(hh).map_err(err)?;
    let field = tomita::fock::ModeSystem::new(2, FockCutoff::new(n_max).map_err(err)?).map_err(err)?;
    Ok(PyDetectorState { inner: udw::evolve_numeric(r, coefficients, field).map_err(err)? })
}

/// Matrix of `J_AB` on two qubits.
#[pyfunction]
fn j_ab() -> Rows {
    from_matrix(udw::j_ab().matrix())
}

#[pymodule]
#[pyo3(name = "tomita")]
fn tomita_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TomitaError", m.py().get_type::<TomitaError>())?;
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyModularData>()?;
    m.add_class::<PySusyModel>()?;
    m.add_class::<PyGaussian>()?;
    m.add_class::<PyDetectorState>()?;
    m.add_function(wrap_pyfunction!(modular_data, m)?)?;
    m.add_function(wrap_pyfunction!(bell_psi_plus, m)?)?;
    m.add_function(wrap_pyfunction!(bell_phi_plus, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence_pure, m)?)?;
    m.add_function(wrap_pyfunction!(wootters_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(modular_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(chsh_expectation, m)?)?;
    m.add_function(wrap_pyfunction!(maximize_chsh, m)?)?;
    m.add_function(wrap_pyfunction!(max_violation_from_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(inner_product, m)?)?;
    m.add_function(wrap_pyfunction!(udw_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(chsh_udw, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(j_ab, m)?)?;
    Ok(())
}
