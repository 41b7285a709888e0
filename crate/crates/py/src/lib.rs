//! Python bindings: weight-system enumeration, exact power series with
//! `fractions.Fraction` coefficients, per-model series, operators,
//! integrality reports and Mahler measures.

use mahler::inversion::integrality_report as report;
use mahler::mirror::{self, MirrorData, OperatorForm};
use mahler::weights;
use mahler::{Error, Rational, Series};
use num_bigint::BigInt;
use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Consistency(_) => PyRuntimeError::new_err(e.to_string()),
        Error::Convergence(_) => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.numer().clone(), r.denom().clone()))
}

fn fractions<'py>(py: Python<'py>, values: &[Rational]) -> PyResult<Bound<'py, PyList>> {
    let items = values.iter().map(|r| fraction(py, r)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

/// Accepts `int`, `fractions.Fraction` or anything with integer
/// `numerator`/`denominator`.
fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(n) = obj.extract::<BigInt>() {
        return Ok(Rational::from_integer(n));
    }
    if let (Ok(p), Ok(q)) = (obj.getattr("numerator"), obj.getattr("denominator")) {
        let (p, q): (BigInt, BigInt) = (p.extract()?, q.extract()?);
        if q == BigInt::from(0) {
            return Err(PyValueError::new_err("zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Ok(s) = obj.extract::<String>() {
        return mahler::rational::parse(&s).map_err(py_err);
    }
    Err(PyTypeError::new_err("expected int, Fraction or 'p/q' string"))
}

/// Truncated power series with exact rational coefficients.
#[pyclass(name = "PowerSeries", module = "pymahler", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyPowerSeries {
    inner: Series,
}

impl From<Series> for PyPowerSeries {
    fn from(inner: Series) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyPowerSeries {
    #[new]
    fn new(coeffs: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        if coeffs.is_empty() {
            return Err(PyValueError::new_err("need at least one coefficient"));
        }
        let values = coeffs.iter().map(to_rational).collect::<PyResult<Vec<_>>>()?;
        Ok(Series::new(values).into())
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn coeffs<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        fractions(py, self.inner.coeffs())
    }

    fn __getitem__<'py>(&self, py: Python<'py>, m: usize) -> PyResult<Bound<'py, PyAny>> {
        let c = self.inner.coeff(m).map_err(|e| pyo3::exceptions::PyIndexError::new_err(e.to_string()))?;
        fraction(py, c)
    }

    fn __len__(&self) -> usize {
        self.inner.order() + 1
    }

    fn __add__(&self, other: &Self) -> Self {
        (&self.inner + &other.inner).into()
    }

    fn __sub__(&self, other: &Self) -> Self {
        (&self.inner - &other.inner).into()
    }

    fn __mul__(&self, other: &Self) -> Self {
        self.inner.mul(&other.inner).into()
    }

    fn __neg__(&self) -> Self {
        (-&self.inner).into()
    }

    fn __truediv__(&self, other: &Self) -> PyResult<Self> {
        Ok(self.inner.div(&other.inner).map_err(py_err)?.into())
    }

    fn invert(&self) -> PyResult<Self> {
        Ok(self.inner.invert().map_err(py_err)?.into())
    }

    fn exp(&self) -> PyResult<Self> {
        Ok(self.inner.exp().map_err(py_err)?.into())
    }

    fn log(&self) -> PyResult<Self> {
        Ok(self.inner.log().map_err(py_err)?.into())
    }

    #[pyo3(name = "pow")]
    fn pow_rational(&self, e: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(self.inner.pow_rational(&to_rational(e)?).map_err(py_err)?.into())
    }

    fn theta(&self) -> Self {
        self.inner.theta().into()
    }

    fn compose(&self, inner: &Self) -> PyResult<Self> {
        Ok(self.inner.compose(&inner.inner).map_err(py_err)?.into())
    }

    fn revert(&self) -> PyResult<Self> {
        Ok(self.inner.revert().map_err(py_err)?.into())
    }

    fn truncate(&self, order: usize) -> Self {
        self.inner.truncate(order).into()
    }

    fn __repr__(&self) -> String {
        let terms: Vec<String> = self.inner.coeffs().iter().map(|c| c.to_string()).collect();
        format!("PowerSeries([{}])", terms.join(", "))
    }
}

/// A weighted Fermat-type model, from exponents or from degree and weights.
#[pyclass(name = "Model", module = "pymahler", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyModel {
    inner: weights::Model,
}

#[pymethods]
impl PyModel {
    #[new]
    fn new(k: Vec<u64>) -> PyResult<Self> {
        Ok(Self { inner: weights::Model::from_parts(&k).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_weights(degree: u64, weights: Vec<u64>) -> PyResult<Self> {
        Ok(Self {
            inner: weights::Model::from_weights(degree, weights).map_err(py_err)?,
        })
    }

    #[getter]
    fn degree(&self) -> u64 {
        self.inner.degree()
    }

    #[getter]
    fn weights(&self) -> Vec<u64> {
        self.inner.weights().to_vec()
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn is_diagonal(&self) -> bool {
        self.inner.is_diagonal()
    }

    /// One of `g0`, `h`, `f`, `Q`, `q`, `zq`, `zQ` modulo `z^(order+1)`.
    fn series(&self, which: &str, order: usize) -> PyResult<PyPowerSeries> {
        let md = MirrorData::new(&self.inner, order).map_err(py_err)?;
        let s = match which {
            "g0" => md.g0,
            "h" => md.h,
            "f" => md.f,
            "Q" => md.local_map,
            "q" => md.q,
            "zq" => md.z_of_q,
            "zQ" => md.z_of_local,
            other => return Err(PyValueError::new_err(format!("unknown series {other:?}"))),
        };
        Ok(s.truncate(order).into())
    }

    fn __repr__(&self) -> String {
        format!("Model({})", self.inner.name())
    }
}

/// All sorted k-vectors of length `n` with reciprocal sum one.
#[pyfunction]
fn enumerate(n: usize) -> PyResult<Vec<Vec<u64>>> {
    Ok(weights::enumerate(n)
        .map_err(py_err)?
        .into_iter()
        .map(|kv| kv.parts().to_vec())
        .collect())
}

/// `(simple, weighted)` counts, the second as a Fraction.
#[pyfunction]
fn counts(py: Python<'_>, n: usize) -> PyResult<(usize, Bound<'_, PyAny>)> {
    let c = weights::counts(n).map_err(py_err)?;
    Ok((c.simple, fraction(py, &c.weighted)?))
}

/// `{"C", "a", "b", "text"}` for form `reduced`, `local` or `unreduced`.
#[pyfunction]
#[pyo3(signature = (model, form = "reduced"))]
fn pf_operator<'py>(py: Python<'py>, model: &PyModel, form: &str) -> PyResult<Bound<'py, PyDict>> {
    let form = match form {
        "reduced" => OperatorForm::Reduced,
        "local" => OperatorForm::Local,
        "unreduced" => OperatorForm::Unreduced,
        other => return Err(PyValueError::new_err(format!("unknown form {other:?}"))),
    };
    let op = mirror::pf_operator(&model.inner, form);
    let d = PyDict::new(py);
    d.set_item("C", fraction(py, &op.constant)?)?;
    d.set_item("a", fractions(py, &op.a)?)?;
    d.set_item("b", fractions(py, &op.b)?)?;
    d.set_item("text", op.to_string())?;
    d.set_item("pf2", mirror::pf2_applicable(&model.inner))?;
    Ok(d)
}

/// The full report as a JSON string; values are exact decimal or `p/q` strings.
#[pyfunction]
fn integrality_report(py: Python<'_>, model: &PyModel, order: usize) -> PyResult<String> {
    let m = model.inner.clone();
    py.detach(move || report(&m, order).map(|r| r.to_json()))
        .map_err(py_err)
}

/// `{"m", "M", "tail_bound", "z"}` for real `psi`.
#[pyfunction]
#[pyo3(signature = (model, psi, order = 64))]
fn mahler_measure<'py>(
    py: Python<'py>,
    model: &PyModel,
    psi: f64,
    order: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let mm = mirror::mahler_measure(&model.inner, psi, order).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("m", mm.log_measure)?;
    d.set_item("M", mm.measure)?;
    d.set_item("tail_bound", mm.tail_bound)?;
    d.set_item("z", mm.z)?;
    Ok(d)
}

#[pymodule]
fn pymahler(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds every class and function to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPowerSeries>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(counts, m)?)?;
    m.add_function(wrap_pyfunction!(pf_operator, m)?)?;
    m.add_function(wrap_pyfunction!(integrality_report, m)?)?;
    m.add_function(wrap_pyfunction!(mahler_measure, m)?)?;
    Ok(())
}
