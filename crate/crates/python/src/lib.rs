//! Python bindings. Series and polynomials cross the boundary as literals
//! (`"t^(1/2) + 2*t"`, coefficient lists low to high); reports as dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value as Json;

use tamekey::algebra::{adjoin_root, GroundField};
use tamekey::cli::report::sequence_json;
use tamekey::cli::{builtin_corpus, run_scenario as run, verify_suite as suite, Overrides, Scenario, Subcommand};
use tamekey::galois::AlgebraicElement;
use tamekey::keyseq::{homogeneous_approximation as homogeneous, key_sequence as keyseq, KeySeqOptions, PrecisionPolicy, Target};
use tamekey::newton::{puiseux_roots, RootMode, SeriesPoly};
use tamekey::parse::{parse_series, parse_upoly, Symbols};
use tamekey::puiseux::PuiseuxSeries;
use tamekey::values::Q64;

fn err(e: tamekey::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Json) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Json::Null => py.None().into_bound(py),
        Json::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Json::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (_, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Json::String(s) => s.into_pyobject(py)?.into_any(),
        Json::Array(a) => {
            let l = PyList::empty(py);
            for x in a {
                l.append(to_py(py, x)?)?;
            }
            l.into_any()
        }
        Json::Object(o) => {
            let d = PyDict::new(py);
            for (k, x) in o {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

/// A coefficient field `k`.
#[pyclass(name = "Field", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Field {
    k: GroundField,
}

#[pymethods]
impl Field {
    #[staticmethod]
    fn rationals() -> Field {
        Field { k: GroundField::rationals() }
    }

    #[staticmethod]
    fn prime(p: u64) -> PyResult<Field> {
        Ok(Field { k: GroundField::prime(p).map_err(err)? })
    }

    /// `F_p[s]/(modulus)`, e.g. `Field.finite(5, "s^2 - 2")`.
    #[staticmethod]
    #[pyo3(signature = (p, modulus, generator = "s"))]
    fn finite(p: u64, modulus: &str, generator: &str) -> PyResult<Field> {
        let fp = GroundField::prime(p).map_err(err)?;
        let m = parse_upoly(modulus, generator, &Symbols::for_field(&fp)).map_err(err)?;
        Ok(Field { k: adjoin_root(&fp, &m, generator).map_err(err)?.field })
    }

    #[staticmethod]
    fn cyclotomic(n: u64) -> Field {
        Field { k: GroundField::cyclotomic(n) }
    }

    /// Parses and normalizes a series literal.
    fn series(&self, literal: &str) -> PyResult<String> {
        Ok(self.parse(literal)?.to_literal())
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.k.describe())
    }
}

impl Field {
    fn parse(&self, literal: &str) -> PyResult<PuiseuxSeries> {
        parse_series(literal, &Symbols::for_field(&self.k)).map_err(err)
    }

    fn poly(&self, coeffs: Vec<String>) -> PyResult<SeriesPoly> {
        let cs = coeffs.iter().map(|c| self.parse(c)).collect::<PyResult<Vec<_>>>()?;
        Ok(SeriesPoly::new(&self.k, cs))
    }

    fn element(&self, a: &str) -> PyResult<AlgebraicElement> {
        AlgebraicElement::new(&self.k, &self.parse(a)?).map_err(err)
    }
}

/// Puiseux roots of `sum coeffs[i] X^i`, each known modulo `t^precision`.
#[pyfunction]
#[pyo3(signature = (field, coeffs, precision = 6))]
fn roots(field: &Field, coeffs: Vec<String>, precision: i64) -> PyResult<Vec<String>> {
    let f = field.poly(coeffs)?;
    let b = puiseux_roots(&f, Q64::from_integer(precision), RootMode::Auto).map_err(err)?;
    Ok(b.expanded().map_err(err)?.iter().map(|r| r.to_literal()).collect())
}

/// `v(f(x))` for the explicit series `x`.
#[pyfunction]
fn delta(field: &Field, coeffs: Vec<String>, x: &str) -> PyResult<String> {
    let f = field.poly(coeffs)?;
    let x = Target::explicit(field.parse(x)?);
    Ok(tamekey::keyseq::delta(&f, &x, &PrecisionPolicy::default()).map_err(err)?.to_string())
}

#[pyfunction]
fn kras(field: &Field, a: &str) -> PyResult<String> {
    Ok(field.element(a)?.kras().to_string())
}

/// `[K(a):K]`.
#[pyfunction]
fn degree(field: &Field, a: &str) -> PyResult<usize> {
    Ok(field.element(a)?.degree())
}

/// `(e, f)` of `K(a)/K`.
#[pyfunction]
fn ramification(field: &Field, a: &str) -> PyResult<(u64, usize)> {
    let inv = field.element(a)?.ramification_invariants().map_err(err)?;
    Ok((inv.e, inv.f))
}

/// Coefficients of the minimal polynomial of `a` over `K`, low to high.
#[pyfunction]
fn min_poly(field: &Field, a: &str) -> PyResult<Vec<String>> {
    Ok(field.element(a)?.min_poly().map_err(err)?.to_literals())
}

#[pyfunction]
fn homogeneous_approximation(field: &Field, b: &str) -> PyResult<String> {
    Ok(homogeneous(&field.parse(b)?, &field.k).map_err(err)?.a.to_literal())
}

/// The key sequence of an explicit series, as the `keyseq` report's
/// `sequence` block.
#[pyfunction]
#[pyo3(signature = (field, x, max_steps = 12))]
fn key_sequence<'py>(py: Python<'py>, field: &Field, x: &str, max_steps: usize) -> PyResult<Bound<'py, PyAny>> {
    let x = Target::explicit(field.parse(x)?);
    let opts = KeySeqOptions { max_steps, ..KeySeqOptions::default() };
    let seq = keyseq(&x, &field.k, &opts).map_err(err)?;
    to_py(py, &sequence_json(&seq))
}

/// Runs a CLI subcommand on a scenario file; the report without timing.
#[pyfunction]
#[pyo3(signature = (path, subcommand, seed = None, max_steps = None, precision = None))]
fn run_scenario<'py>(py: Python<'py>, path: &str, subcommand: &str, seed: Option<u64>, max_steps: Option<usize>, precision: Option<i64>) -> PyResult<Bound<'py, PyAny>> {
    let sub = Subcommand::parse(subcommand).map_err(err)?;
    let mut sc = Scenario::load(std::path::Path::new(path)).map_err(err)?;
    Overrides { seed, max_steps, precision }.apply(&mut sc).map_err(err)?;
    let report = match sub {
        Subcommand::VerifySuite => suite(&[sc], &Overrides::default()),
        sub => run(&sc, sub),
    }
    .map_err(err)?;
    to_py(py, &report.deterministic_json())
}

/// The verification suite over the built-in corpus.
#[pyfunction]
fn verify_suite(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    let corpus = builtin_corpus().map_err(err)?;
    let report = suite(&corpus, &Overrides::default()).map_err(err)?;
    to_py(py, &report.deterministic_json())
}

#[pymodule]
#[pyo3(name = "tamekey")]
fn tamekey_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_function(wrap_pyfunction!(roots, m)?)?;
    m.add_function(wrap_pyfunction!(delta, m)?)?;
    m.add_function(wrap_pyfunction!(kras, m)?)?;
    m.add_function(wrap_pyfunction!(degree, m)?)?;
    m.add_function(wrap_pyfunction!(ramification, m)?)?;
    m.add_function(wrap_pyfunction!(min_poly, m)?)?;
    m.add_function(wrap_pyfunction!(homogeneous_approximation, m)?)?;
    m.add_function(wrap_pyfunction!(key_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    Ok(())
}
