use std::collections::BTreeMap;

use acslab_core::acs::{nijenhuis, AlmostComplexStructure as CoreStructure, TypeSign};
use acslab_core::cohomology::{betti_numbers, CohomologySpace};
use acslab_core::error::Error;
use acslab_core::exterior::{ComplexKForm, KForm as CoreForm};
use acslab_core::invariant::{class_power_check, purity_report as core_purity_report};
use acslab_core::liealg::LieAlgebraSpec;
use acslab_core::linalg::RatMatrix;
use acslab_core::ranklab::{self, BumpProfile};
use acslab_core::scalar::parse_rational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn sign_of(sign: &str) -> PyResult<TypeSign> {
    match sign {
        "+" | "plus" => Ok(TypeSign::Plus),
        "-" | "minus" => Ok(TypeSign::Minus),
        other => Err(PyValueError::new_err(format!("sign must be '+' or '-', got {other:?}"))),
    }
}

/// Real exterior form with exact rational coefficients.
#[pyclass(name = "KForm", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyKForm {
    inner: CoreForm,
}

impl From<CoreForm> for PyKForm {
    fn from(inner: CoreForm) -> Self {
        PyKForm { inner }
    }
}

#[pymethods]
impl PyKForm {
    /// Parses text such as `"3/2*e12 - e34"` in dimension `dim`.
    #[new]
    fn new(dim: usize, text: &str) -> PyResult<Self> {
        CoreForm::parse(dim, text).map(Into::into).map_err(py_err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// `(indices, coefficient)` pairs with 1-based indices and the coefficient as text.
    fn terms(&self) -> Vec<(Vec<usize>, String)> {
        self.inner
            .terms()
            .map(|(idx, c)| (idx.indices().map(|i| i + 1).collect(), c.to_string()))
            .collect()
    }

    fn wedge(&self, other: &PyKForm) -> PyResult<PyKForm> {
        self.inner.wedge(&other.inner).map(Into::into).map_err(py_err)
    }

    fn power(&self, m: usize) -> PyKForm {
        self.inner.wedge_power(m).into()
    }

    fn __add__(&self, other: &PyKForm) -> PyResult<PyKForm> {
        self.check_shape(other)?;
        Ok((&self.inner + &other.inner).into())
    }

    fn __sub__(&self, other: &PyKForm) -> PyResult<PyKForm> {
        self.check_shape(other)?;
        Ok((&self.inner - &other.inner).into())
    }

    fn __neg__(&self) -> PyKForm {
        (-&self.inner).into()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("KForm({}, {:?})", self.inner.dim(), self.inner.to_string())
    }
}

impl PyKForm {
    fn check_shape(&self, other: &PyKForm) -> PyResult<()> {
        if (self.inner.dim(), self.inner.degree()) != (other.inner.dim(), other.inner.degree()) {
            return Err(PyValueError::new_err("forms differ in dimension or degree"));
        }
        Ok(())
    }
}

/// Nilpotent (or any) Lie algebra given by the differentials of its dual basis.
#[pyclass(name = "LieAlgebra", frozen)]
pub struct PyLieAlgebra {
    inner: LieAlgebraSpec,
}

#[pymethods]
impl PyLieAlgebra {
    /// Salamon notation, e.g. `"0,0,12,13,14,23"`.
    #[new]
    fn new(salamon: &str) -> PyResult<Self> {
        LieAlgebraSpec::from_salamon(salamon).map(|inner| PyLieAlgebra { inner }).map_err(py_err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn d(&self, form: &PyKForm) -> PyResult<PyKForm> {
        self.inner.d(&form.inner).map(Into::into).map_err(py_err)
    }

    fn betti_numbers(&self) -> Vec<usize> {
        betti_numbers(&self.inner)
    }

    /// Representatives of a basis of `H^k`.
    fn cohomology(&self, k: usize) -> PyResult<Vec<PyKForm>> {
        let space = CohomologySpace::compute(&self.inner, k).map_err(py_err)?;
        Ok(space.quotient_basis().iter().cloned().map(Into::into).collect())
    }

    /// True when `[a]^m` vanishes in cohomology; `a` must be closed.
    fn class_power_vanishes(&self, a: &PyKForm, m: usize) -> PyResult<bool> {
        class_power_check(&self.inner, &a.inner, m).map(|c| c.is_zero).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("LieAlgebra({:?})", self.inner.to_salamon())
    }
}

/// Linear almost complex structure `J` with `J² = −Id`, exact entries.
#[pyclass(name = "AlmostComplexStructure", frozen)]
pub struct PyStructure {
    inner: CoreStructure,
}

#[pymethods]
impl PyStructure {
    /// `J` from rows of rational entries given as strings or integers.
    #[new]
    fn new(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let parsed = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let text = x.str()?.to_string();
                        parse_rational(&text).ok_or_else(|| PyValueError::new_err(format!("bad entry {text:?}")))
                    })
                    .collect::<PyResult<Vec<_>>>()
            })
            .collect::<PyResult<Vec<_>>>()?;
        if parsed.iter().any(|r| r.len() != parsed.len()) {
            return Err(PyValueError::new_err("matrix must be square"));
        }
        CoreStructure::from_matrix(RatMatrix::from_rows(parsed)).map(|inner| PyStructure { inner }).map_err(py_err)
    }

    #[staticmethod]
    fn standard(dim: usize) -> PyResult<Self> {
        CoreStructure::standard(dim).map(|inner| PyStructure { inner }).map_err(py_err)
    }

    /// The `J` making each given complex 1-form, e.g. `"e1 + i*e2"`, of type (1,0).
    #[staticmethod]
    fn from_one_zero_forms(dim: usize, forms: Vec<String>) -> PyResult<Self> {
        let psis = forms.iter().map(|s| ComplexKForm::parse(dim, s)).collect::<Result<Vec<_>, _>>().map_err(py_err)?;
        CoreStructure::from_one_zero_forms(dim, &psis).map(|inner| PyStructure { inner }).map_err(py_err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn matrix(&self) -> Vec<Vec<String>> {
        self.inner.matrix().rows_vec().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
    }

    fn act(&self, form: &PyKForm) -> PyResult<PyKForm> {
        self.inner.act_on_form(&form.inner).map(Into::into).map_err(py_err)
    }

    /// Echelon basis of the invariant (`"+"`) or anti-invariant (`"-"`) 2-forms.
    fn type_space(&self, sign: &str) -> PyResult<Vec<PyKForm>> {
        Ok(self.inner.type_space(sign_of(sign)?).into_iter().map(Into::into).collect())
    }

    fn is_integrable(&self, algebra: &PyLieAlgebra) -> PyResult<bool> {
        nijenhuis(&algebra.inner, &self.inner).map(|n| n.is_zero()).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("AlmostComplexStructure({:?})", self.matrix())
    }
}

/// Dimensions of `H⁺`, `H⁻` and their sum and intersection inside `H²`.
#[pyfunction]
fn purity_report(algebra: &PyLieAlgebra, structure: &PyStructure) -> PyResult<BTreeMap<&'static str, String>> {
    let report = core_purity_report(&algebra.inner, &structure.inner).map_err(py_err)?;
    Ok(report.key_values().into_iter().collect())
}

/// Histogram of numerical ranks of the bump-supported 2-form on the 6-torus.
#[pyfunction]
#[pyo3(signature = (samples = 10_000, tol = 1e-8, rho = 0.25, seed = 0))]
fn rank_scan(samples: usize, tol: f64, rho: f64, seed: u64) -> PyResult<BTreeMap<usize, usize>> {
    let bump = BumpProfile::new(rho).map_err(py_err)?;
    ranklab::rank_scan(&bump, samples, tol, seed).map(|scan| scan.histogram).map_err(py_err)
}

#[pymodule]
fn acslab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyKForm>()?;
    m.add_class::<PyLieAlgebra>()?;
    m.add_class::<PyStructure>()?;
    m.add_function(wrap_pyfunction!(purity_report, m)?)?;
    m.add_function(wrap_pyfunction!(rank_scan, m)?)?;
    Ok(())
}
