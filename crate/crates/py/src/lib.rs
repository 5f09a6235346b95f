//! Python bindings: number fields and elements, heights, Pisot and
//! pseudo-Pisot tests, (P1)/(P2) classification, `∥α^n∥` scans and config
//! runs. Structured results come back as plain dicts.

use std::sync::Arc;

use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sunitlab_core::certify::{Decision, DEFAULT_MAX_BITS};
use sunitlab_core::classify::{self, check_p1_p2, partition_classes, pseudo_pisot_tuple};
use sunitlab_core::exact::{parse_rational, FieldElement, IntPolynomial, NumberFieldDesc};
use sunitlab_core::harness::selftest::run_selftest;
use sunitlab_core::harness::{self, Format, RunConfig, RunOptions};
use sunitlab_core::heights::{is_algebraic_integer, weil_height};
use sunitlab_core::Error;

fn err(e: Error) -> PyErr {
    match e {
        Error::DivisionByZero | Error::ZeroInput => PyZeroDivisionError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

/// A number field `Q[x]/(f)` with a chosen complex embedding.
#[pyclass(frozen, skip_from_py_object, module = "sunitlab")]
#[derive(Clone)]
struct Field {
    inner: Arc<NumberFieldDesc>,
}

#[pymethods]
impl Field {
    /// `poly` is the defining polynomial in `x`; `galois` lists images of
    /// the generator `t` (derived automatically for quadratic and
    /// cyclotomic fields when omitted).
    #[new]
    #[pyo3(signature = (poly, galois=None, embedding=None, label=None))]
    fn new(poly: &str, galois: Option<Vec<String>>, embedding: Option<usize>, label: Option<String>) -> PyResult<Self> {
        let f = IntPolynomial::parse(poly).map_err(err)?;
        let mut b = NumberFieldDesc::builder(f.clone());
        if let Some(e) = embedding {
            b = b.embedding(e);
        }
        if let Some(l) = label {
            b = b.label(l);
        }
        b = match galois {
            None => b.standard_galois(),
            Some(images) => {
                let bare = NumberFieldDesc::builder(f).build().map_err(err)?;
                let images = images
                    .iter()
                    .map(|s| FieldElement::parse(&bare, s).map(|x| x.coeffs().to_vec()))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(err)?;
                b.galois(images)
            }
        };
        Ok(Self { inner: b.build().map_err(err)? })
    }

    #[staticmethod]
    fn rationals() -> Self {
        Self { inner: NumberFieldDesc::rationals() }
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    #[getter]
    fn has_galois(&self) -> bool {
        self.inner.galois().is_some()
    }

    /// Parses an element written in `t`, e.g. `"1 + t"` or `"3/2"`.
    fn element(&self, s: &str) -> PyResult<Element> {
        Ok(Element(FieldElement::parse(&self.inner, s).map_err(err)?))
    }

    fn theta(&self) -> Element {
        Element(FieldElement::theta(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!("Field({:?})", self.inner.defining_poly().to_string())
    }
}

/// An exact element of a [`Field`].
#[pyclass(frozen, from_py_object, module = "sunitlab")]
#[derive(Clone)]
struct Element(FieldElement);

#[pymethods]
impl Element {
    fn __add__(&self, o: &Element) -> PyResult<Element> {
        Ok(Element(self.0.checked_add(&o.0).map_err(err)?))
    }

    fn __sub__(&self, o: &Element) -> PyResult<Element> {
        Ok(Element(self.0.checked_sub(&o.0).map_err(err)?))
    }

    fn __mul__(&self, o: &Element) -> PyResult<Element> {
        Ok(Element(self.0.checked_mul(&o.0).map_err(err)?))
    }

    fn __truediv__(&self, o: &Element) -> PyResult<Element> {
        Ok(Element(self.0.checked_div(&o.0).map_err(err)?))
    }

    fn __neg__(&self) -> Element {
        Element(self.0.scale(&parse_rational("-1").expect("literal")))
    }

    fn __pow__(&self, k: i64, _modulo: Option<Py<PyAny>>) -> PyResult<Element> {
        Ok(Element(self.0.pow(k).map_err(err)?))
    }

    fn __eq__(&self, o: &Element) -> bool {
        self.0 == o.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({:?})", self.0.to_string())
    }

    /// Power-basis coefficients as exact fraction strings.
    fn coeffs(&self) -> Vec<String> {
        self.0.coeffs().iter().map(|c| c.to_string()).collect()
    }

    fn minimal_polynomial(&self) -> String {
        self.0.minimal_polynomial().to_string()
    }

    fn is_algebraic_integer(&self) -> bool {
        is_algebraic_integer(&self.0)
    }

    fn is_root_of_unity(&self) -> PyResult<bool> {
        classify::is_root_of_unity(&self.0).map_err(err)
    }

    #[pyo3(signature = (max_bits=DEFAULT_MAX_BITS))]
    fn is_pisot(&self, max_bits: u32) -> PyResult<bool> {
        classify::is_pisot(&self.0, max_bits).map_err(err)
    }
}

fn tuple_of(xs: &[Element]) -> Vec<FieldElement> {
    xs.iter().map(|e| e.0.clone()).collect()
}

/// Absolute Weil height: `{"value", "exact", "minimal_polynomial"}`. `value`
/// is a float (the midpoint of a certified enclosure at `bits` bits) and
/// `exact` a fraction string when the height is rational.
#[pyfunction]
#[pyo3(signature = (x, bits=128))]
fn height<'py>(py: Python<'py>, x: &Element, bits: u32) -> PyResult<Bound<'py, PyDict>> {
    let h = weil_height(&x.0, bits).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("value", h.value.to_f64())?;
    d.set_item("enclosure", h.value.to_decimal())?;
    d.set_item("exact", h.exact.map(|r| r.to_string()))?;
    d.set_item("minimal_polynomial", h.source_poly.to_string())?;
    Ok(d)
}

/// Is `poly` the minimal polynomial of a Pisot number? `None` if the
/// precision cap was hit.
#[pyfunction]
#[pyo3(signature = (poly, max_bits=DEFAULT_MAX_BITS))]
fn is_pisot_poly(poly: &str, max_bits: u32) -> PyResult<Option<bool>> {
    let f = IntPolynomial::parse(poly).map_err(err)?;
    match classify::is_pisot_poly(&f, max_bits) {
        Ok(b) => Ok(Some(b)),
        Err(Error::Undecided(_)) => Ok(None),
        Err(e) => Err(err(e)),
    }
}

fn decision(d: Decision) -> Option<bool> {
    match d {
        Decision::True => Some(true),
        Decision::False => Some(false),
        Decision::Undecided => None,
    }
}

/// Pseudo-Pisot test: `{"verdict", "witness", "P", "sum"}`.
#[pyfunction]
#[pyo3(signature = (tuple, max_bits=DEFAULT_MAX_BITS))]
fn pseudo_pisot<'py>(py: Python<'py>, tuple: Vec<Element>, max_bits: u32) -> PyResult<Bound<'py, PyDict>> {
    let v = pseudo_pisot_tuple(&tuple_of(&tuple), max_bits).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("verdict", decision(v.verdict))?;
    d.set_item("witness", v.witness.to_string())?;
    d.set_item("P", v.p_set.into_iter().map(Element).collect::<Vec<_>>())?;
    d.set_item("sum", Element(v.sum))?;
    Ok(d)
}

/// (P1), (P2) and, when (P2) holds, the class partition.
#[pyfunction]
fn classify_tuple<'py>(py: Python<'py>, tuple: Vec<Element>) -> PyResult<Bound<'py, PyAny>> {
    let t = tuple_of(&tuple);
    let props = check_p1_p2(&t).map_err(err)?;
    let partition = if props.p2 { Some(partition_classes(&t).map_err(err)?) } else { None };
    let v = serde_json::json!({
        "P1": props.p1,
        "P2": props.p2,
        "p1_witness": props.p1_witness,
        "p2_witness": props.p2_witness,
        "partition": partition,
    });
    json_to_py(py, &v)
}

/// `∥(k/ℓ)^n∥` against `ℓ^{-εn}` for `1 ≤ n ≤ nmax`; rationals are given as
/// strings such as `"3/2"`.
#[pyfunction]
fn mahler_scan<'py>(py: Python<'py>, alpha: &str, epsilon: &str, nmax: u64) -> PyResult<Bound<'py, PyAny>> {
    let a = parse_rational(alpha).map_err(err)?;
    let e = parse_rational(epsilon).map_err(err)?;
    let s = harness::mahler_scan(&a, &e, nmax).map_err(err)?;
    json_to_py(py, &serde_json::to_value(&s).map_err(|e| PyValueError::new_err(e.to_string()))?)
}

/// Runs a TOML config (any mode) and returns the rendered report.
#[pyfunction]
#[pyo3(signature = (config, jobs=1, format="jsonl", max_bits=None))]
fn run_config(py: Python<'_>, config: &str, jobs: usize, format: &str, max_bits: Option<u32>) -> PyResult<String> {
    let cfg = RunConfig::parse(config).map_err(err)?;
    let format: Format = format.parse().map_err(err)?;
    let opts = RunOptions { jobs, max_bits, compare: None };
    let report = py.detach(|| harness::run(&cfg, &opts)).map_err(err)?;
    Ok(report.render(format))
}

/// Built-in invariant suites as `(name, passed, detail)` triples.
#[pyfunction]
fn selftest() -> Vec<(String, bool, String)> {
    run_selftest()
        .into_iter()
        .map(|r| (r.name.to_string(), r.passed, r.detail))
        .collect()
}

#[pymodule]
fn sunitlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Element>()?;
    m.add_function(wrap_pyfunction!(height, m)?)?;
    m.add_function(wrap_pyfunction!(is_pisot_poly, m)?)?;
    m.add_function(wrap_pyfunction!(pseudo_pisot, m)?)?;
    m.add_function(wrap_pyfunction!(classify_tuple, m)?)?;
    m.add_function(wrap_pyfunction!(mahler_scan, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
