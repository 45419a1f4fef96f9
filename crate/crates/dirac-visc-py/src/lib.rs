//! Python bindings. Build with `maturin develop` (the `extension-module`
//! feature is enabled through pyproject.toml).

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use dirac_visc::kubo_dynamic::{self, Broadening};
use dirac_visc::model::{LandauSpectrum, SelfEnergyModel};
use dirac_visc::{kubo_static, scba, sweep, validate, vertex, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Spec { .. } | Error::UnknownPreset(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Material and disorder parameters.
#[pyclass(name = "ModelParams", from_py_object)]
#[derive(Clone)]
pub struct PyModelParams {
    inner: dirac_visc::ModelParams,
}

#[pymethods]
impl PyModelParams {
    #[new]
    #[pyo3(signature = (disorder_a=20.0, hbar_vf=0.6582, cutoff_ec=7.2, degeneracy=4, temperature=0.0, imaginary_only=false))]
    fn new(disorder_a: f64, hbar_vf: f64, cutoff_ec: f64, degeneracy: u32, temperature: f64, imaginary_only: bool) -> PyResult<Self> {
        let inner = dirac_visc::ModelParams {
            hbar_vf,
            cutoff_ec,
            disorder_a,
            degeneracy,
            temperature,
            self_energy: if imaginary_only { SelfEnergyModel::ImaginaryOnly } else { SelfEnergyModel::Full },
        };
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn disorder_a(&self) -> f64 {
        self.inner.disorder_a
    }

    #[getter]
    fn hbar_vf(&self) -> f64 {
        self.inner.hbar_vf
    }

    #[getter]
    fn cutoff_ec(&self) -> f64 {
        self.inner.cutoff_ec
    }

    fn __repr__(&self) -> String {
        format!(
            "ModelParams(disorder_a={}, hbar_vf={}, cutoff_ec={}, degeneracy={})",
            self.inner.disorder_a, self.inner.hbar_vf, self.inner.cutoff_ec, self.inner.degeneracy
        )
    }
}

fn spectrum(b: f64, p: &dirac_visc::ModelParams, scale: f64) -> PyResult<Option<LandauSpectrum>> {
    if b > 0.0 {
        Ok(Some(LandauSpectrum::new(b, p, scale).map_err(to_py)?))
    } else {
        Ok(None)
    }
}

/// Retarded self-energy Σ(E) in eV.
#[pyfunction]
#[pyo3(signature = (energy, params, b_field=0.0))]
fn solve_sigma(py: Python<'_>, energy: f64, params: &PyModelParams, b_field: f64) -> PyResult<num_complex_shim::C> {
    let p = params.inner;
    py.detach(|| {
        let s = match spectrum(b_field, &p, energy)? {
            Some(sp) => scba::solve_self_energy_landau(energy, &p, &sp),
            None => scba::solve_self_energy_b0(energy, &p),
        }
        .map_err(to_py)?;
        Ok(num_complex_shim::C(s.sigma.re, s.sigma.im))
    })
}

/// Static shear viscosity in ħ/nm².
#[pyfunction]
#[pyo3(signature = (energy, params, b_field=0.0))]
fn shear_static(py: Python<'_>, energy: f64, params: &PyModelParams, b_field: f64) -> PyResult<f64> {
    let p = params.inner;
    py.detach(|| {
        match spectrum(b_field, &p, energy)? {
            Some(sp) => kubo_static::shear_bfield_numeric(energy, &p, &sp),
            None => kubo_static::shear_b0_numeric(energy, &p),
        }
        .map(|v| v.value)
        .map_err(to_py)
    })
}

/// Static Hall viscosity in ħ/nm²; needs B > 0.
#[pyfunction]
fn hall_static(py: Python<'_>, energy: f64, params: &PyModelParams, b_field: f64) -> PyResult<f64> {
    let p = params.inner;
    py.detach(|| {
        let sp = spectrum(b_field, &p, energy)?.ok_or_else(|| PyValueError::new_err("Hall viscosity needs b_field > 0"))?;
        kubo_static::hall_static_numeric(energy, &p, &sp).map(|v| v.value).map_err(to_py)
    })
}

fn broadening(gamma: Option<f64>) -> Broadening {
    gamma.map_or(Broadening::SelfConsistent, Broadening::Constant)
}

/// Dynamic shear viscosity at frequency Ω (eV). `gamma` fixes a constant
/// level width in a field; otherwise Σ is solved self-consistently.
#[pyfunction]
#[pyo3(signature = (energy, omega, params, b_field=0.0, gamma=None))]
fn shear_dynamic(py: Python<'_>, energy: f64, omega: f64, params: &PyModelParams, b_field: f64, gamma: Option<f64>) -> PyResult<f64> {
    let p = params.inner;
    py.detach(|| match spectrum(b_field, &p, energy.abs() + omega.abs())? {
        Some(sp) => kubo_dynamic::shear_dynamic_bfield(energy, omega, &p, &sp, broadening(gamma)).map_err(to_py),
        None => kubo_dynamic::shear_dynamic_b0(energy, omega, &p).map_err(to_py),
    })
}

/// Dynamic Hall viscosity at frequency Ω > 0 (eV).
#[pyfunction]
#[pyo3(signature = (energy, omega, params, b_field, gamma=None))]
fn hall_dynamic(py: Python<'_>, energy: f64, omega: f64, params: &PyModelParams, b_field: f64, gamma: Option<f64>) -> PyResult<f64> {
    let p = params.inner;
    py.detach(|| {
        let sp = spectrum(b_field, &p, energy.abs() + omega.abs())?
            .ok_or_else(|| PyValueError::new_err("Hall viscosity needs b_field > 0"))?;
        kubo_dynamic::hall_dynamic(energy, omega, &p, &sp, broadening(gamma)).map_err(to_py)
    })
}

/// First-order vertex correction ratio (momentum basis at B = 0, Landau otherwise).
#[pyfunction]
#[pyo3(signature = (energy, params, b_field=0.0, nodes=64))]
fn vertex_ratio(energy: f64, params: &PyModelParams, b_field: f64, nodes: usize) -> PyResult<f64> {
    let p = params.inner;
    match spectrum(b_field, &p, energy)? {
        Some(sp) => vertex::vertex_correction_landau(energy, &p, &sp),
        None => vertex::vertex_correction_b0(energy, &p, nodes),
    }
    .map(|r| r.ratio)
    .map_err(to_py)
}

/// Runs a sweep from its JSON description and returns the CSV text.
#[pyfunction]
fn run_sweep_csv(py: Python<'_>, spec_json: &str) -> PyResult<String> {
    let spec = sweep::SweepSpec::from_json(spec_json).map_err(to_py)?;
    py.detach(|| sweep::run_sweep(&spec).map(|r| r.to_csv()).map_err(to_py))
}

/// JSON description of a figure preset.
#[pyfunction]
fn figure_preset(name: &str) -> PyResult<String> {
    sweep::figure_preset(name).map(|s| s.to_json()).map_err(to_py)
}

/// Oracle suite as (name, computed, expected, pass) tuples.
#[pyfunction]
fn oracle_suite(py: Python<'_>) -> Vec<(String, f64, f64, bool)> {
    py.detach(validate::oracle_suite).into_iter().map(|c| (c.name, c.computed, c.expected, c.pass)).collect()
}

/// Python `complex` conversion without pulling num-complex support into pyo3.
mod num_complex_shim {
    use pyo3::prelude::*;
    use pyo3::types::PyComplex;

    pub struct C(pub f64, pub f64);

    impl<'py> IntoPyObject<'py> for C {
        type Target = PyComplex;
        type Output = Bound<'py, PyComplex>;
        type Error = std::convert::Infallible;

        fn into_pyobject(self, py: Python<'py>) -> Result<Self::Output, Self::Error> {
            Ok(PyComplex::from_doubles(py, self.0, self.1))
        }
    }
}

#[pymodule]
pub fn dirac_visc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelParams>()?;
    m.add_function(wrap_pyfunction!(solve_sigma, m)?)?;
    m.add_function(wrap_pyfunction!(shear_static, m)?)?;
    m.add_function(wrap_pyfunction!(hall_static, m)?)?;
    m.add_function(wrap_pyfunction!(shear_dynamic, m)?)?;
    m.add_function(wrap_pyfunction!(hall_dynamic, m)?)?;
    m.add_function(wrap_pyfunction!(vertex_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep_csv, m)?)?;
    m.add_function(wrap_pyfunction!(figure_preset, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_suite, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
