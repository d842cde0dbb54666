use std::fs;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde_json::{json, Value};

use toric_dvr::arith::{format_rational, padic_val as val, parse_rational, QMatrix, Rational, ValuationConfig};
use toric_dvr::bundle::{check_morphism, ToricBundleData};
use toric_dvr::chern;
use toric_dvr::cli::{self, Cli, InputDocument};

create_exception!(toric_dvr_py, InputError, PyValueError, "Malformed input data.");
create_exception!(toric_dvr_py, ValidationError, PyException, "Mathematically invalid data.");

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    let json = PyModule::import(py, "json")?;
    Ok(json.call_method1("loads", (v.to_string(),))?.unbind())
}

fn rationals(xs: &[String]) -> PyResult<Vec<Rational>> {
    xs.iter()
        .map(|s| parse_rational(s).map_err(|e| InputError::new_err(e.to_string())))
        .collect()
}

fn math<E: std::fmt::Display>(e: E) -> PyErr {
    ValidationError::new_err(e.to_string())
}

/// A toric vector bundle over the p-adic DVR, built from the CLI's JSON document.
#[pyclass(name = "Bundle", frozen)]
struct PyBundle {
    inner: ToricBundleData,
}

#[pymethods]
impl PyBundle {
    #[new]
    fn new(document: &str) -> PyResult<Self> {
        let doc = InputDocument::parse(document).map_err(|e| InputError::new_err(e.to_string()))?;
        let inner = doc.to_bundle().map_err(|e| match e {
            cli::BuildError::Input(e) => InputError::new_err(e.to_string()),
            other => math(other),
        })?;
        Ok(PyBundle { inner })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| InputError::new_err(e.to_string()))?;
        Self::new(&text)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.fan().n()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.cfg().p()
    }

    #[getter]
    fn vertices(&self) -> Vec<Vec<i64>> {
        self.inner.fan().sigma1().vertices()
    }

    #[pyo3(signature = (seed = 0, sample_density = 8))]
    fn validate(&self, py: Python<'_>, seed: u64, sample_density: usize) -> PyResult<Py<PyAny>> {
        let (_, report) = cli::validation_report(&self.inner, seed, sample_density);
        to_py(py, &report)
    }

    /// `c_i` as `{"degree", "vertices": [{"vertex", "pieces": [...]}]}`.
    fn chern(&self, py: Python<'_>, i: usize) -> PyResult<Py<PyAny>> {
        let class = chern::chern_class(&self.inner, i).map_err(math)?;
        to_py(py, &cli::class_json(&class))
    }

    fn chern_total(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let class = chern::chern_total(&self.inner).map_err(math)?;
        to_py(py, &cli::class_json(&class))
    }

    fn chern_generic(&self, py: Python<'_>, i: usize) -> PyResult<Py<PyAny>> {
        let f = chern::chern_generic(&self.inner, i).map_err(math)?;
        to_py(py, &cli::fan_poly_json(&f))
    }

    /// `epsilon_i(Phi_nu(y))` with `y` given as `"num/den"` strings.
    fn epsilon_oracle(&self, vertex: Vec<i64>, i: usize, y: Vec<String>) -> PyResult<String> {
        let y = rationals(&y)?;
        let v = chern::epsilon_oracle(&self.inner, &vertex, i, &y).map_err(math)?;
        Ok(format_rational(&v))
    }

    /// `Phi(x)` as `{"level", "basis", "values"}`.
    fn eval_phi(&self, py: Python<'_>, x: Vec<String>) -> PyResult<Py<PyAny>> {
        let x = rationals(&x)?;
        let w = self.inner.eval_phi(&x).map_err(math)?;
        let basis: Vec<Vec<String>> = w
            .basis()
            .columns()
            .iter()
            .map(|c| c.iter().map(format_rational).collect())
            .collect();
        let values: Vec<String> = w.values().iter().map(format_rational).collect();
        to_py(
            py,
            &json!({"level": format_rational(w.level()), "basis": basis, "values": values}),
        )
    }

    /// Residue charts at a vertex: star cone rays, basis mod p, characters.
    fn restrict(&self, py: Python<'_>, vertex: Vec<i64>) -> PyResult<Py<PyAny>> {
        let res = self.inner.restrict_to_vertex(&vertex).map_err(math)?;
        let charts: Vec<Value> = res
            .charts
            .iter()
            .map(|c| {
                json!({
                    "star_cone": res.star.fan().cone(c.star_cone).rays(),
                    "basis": c.basis.columns(),
                    "u": c.u,
                })
            })
            .collect();
        to_py(py, &json!({"vertex": vertex, "exponents": res.lattice.exponents(), "charts": charts}))
    }

    /// Whether the matrix (rows of `"num/den"`) maps this bundle into `target`.
    fn check_morphism(
        &self,
        py: Python<'_>,
        target: &PyBundle,
        matrix: Vec<Vec<String>>,
    ) -> PyResult<Py<PyAny>> {
        let rows = matrix
            .iter()
            .map(|r| rationals(r))
            .collect::<PyResult<Vec<_>>>()?;
        let f = QMatrix::from_rows(rows);
        let report = check_morphism(&self.inner, &target.inner, &f)
            .map_err(|e| InputError::new_err(e.to_string()))?;
        to_py(py, &serde_json::to_value(report).expect("serializable"))
    }

    fn __repr__(&self) -> String {
        format!(
            "Bundle(rank={}, n={}, p={}, vertices={})",
            self.inner.rank(),
            self.inner.fan().n(),
            self.inner.cfg().p(),
            self.inner.fan().sigma1().vertices().len()
        )
    }
}

/// p-adic valuation of a rational given as `"num/den"`; `None` for zero.
#[pyfunction]
#[pyo3(signature = (q, p = 2))]
fn padic_val(q: &str, p: u64) -> PyResult<Option<i64>> {
    let cfg = ValuationConfig::new(p).map_err(|e| InputError::new_err(e.to_string()))?;
    let q = parse_rational(q).map_err(|e| InputError::new_err(e.to_string()))?;
    Ok(val(&q, cfg).into_finite())
}

/// Runs the command-line tool in-process; returns `(exit_code, document)`.
#[pyfunction]
fn run(py: Python<'_>, args: Vec<String>) -> PyResult<(i32, Py<PyAny>)> {
    let argv = std::iter::once("toric-dvr".to_string()).chain(args);
    let parsed = Cli::parse_args(argv).map_err(|e| InputError::new_err(e.to_string()))?;
    let response = cli::run(&parsed);
    Ok((response.code, to_py(py, &response.document)?))
}

#[pymodule]
fn toric_dvr_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBundle>()?;
    m.add_function(wrap_pyfunction!(padic_val, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("InputError", m.py().get_type::<InputError>())?;
    m.add("ValidationError", m.py().get_type::<ValidationError>())?;
    Ok(())
}
