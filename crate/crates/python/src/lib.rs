//! Python bindings. Atoms are addressed by label, events are lists of
//! labels, functions are `{label: value}` dicts (missing labels are zero) and
//! every number crosses the boundary as a `fractions.Fraction`. Inputs may be
//! `int`, `Fraction` or strings such as `"3/4"`; floats are rejected.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyString};

use renyi::model::{emit_model, parse_model, ModelSpec};
use renyi::rational;
use renyi::{
    check_consistency, choose_dominating, close_under_union, disintegrate, kolmogorov_conditional, reconstruct,
    verify_factorization, Bunch, Carrier, ConditionalFamily, ConditionalState, Event, NonNegFunction, NuMode, Rational,
    RenyiState, SigmaFiniteMeasure, Statistic,
};

create_exception!(pyrenyi, RenyiError, PyValueError);

fn err(e: impl std::fmt::Display) -> PyErr {
    RenyiError::new_err(e.to_string())
}

fn number(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(s) = obj.cast::<PyString>() {
        let text = s.to_str()?;
        return rational::parse(text).ok_or_else(|| err(format!("not an exact number: {text:?}")));
    }
    obj.extract::<Rational>().map_err(|_| {
        err(format!(
            "expected int, Fraction or \"p/q\" string, got {}",
            obj.repr().map_or_else(|_| "?".into(), |r| r.to_string())
        ))
    })
}

fn labelled(carrier: &Carrier, values: &[Rational], py: Python<'_>) -> PyResult<Py<PyDict>> {
    let dict = PyDict::new(py);
    for (atom, v) in carrier.atoms().iter().zip(values) {
        dict.set_item(atom, v)?;
    }
    Ok(dict.unbind())
}

fn event(carrier: &Carrier, atoms: Vec<String>) -> PyResult<Event> {
    Event::from_atoms(carrier, atoms).map_err(err)
}

fn function(carrier: &Carrier, values: &Bound<'_, PyDict>) -> PyResult<NonNegFunction> {
    let mut table = vec![Rational::default(); carrier.len()];
    for (k, v) in values.iter() {
        let i = carrier.index_of(&k.extract::<String>()?).map_err(err)?;
        table[i] = number(&v)?;
    }
    NonNegFunction::new(carrier, table).map_err(err)
}

/// A nonnegative, not identically zero measure on a finite labelled carrier.
#[pyclass(name = "Measure", module = "pyrenyi", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMeasure(SigmaFiniteMeasure);

#[pymethods]
impl PyMeasure {
    /// `Measure({"a": 1, "b": Fraction(1, 2)})`; the dict order fixes the atom order.
    #[new]
    fn new(weights: &Bound<'_, PyDict>) -> PyResult<Self> {
        let mut atoms = Vec::new();
        let mut values = Vec::new();
        for (k, v) in weights.iter() {
            atoms.push(k.extract::<String>()?);
            values.push(number(&v)?);
        }
        let carrier = Carrier::new(atoms).map_err(err)?;
        SigmaFiniteMeasure::new(&carrier, values).map(PyMeasure).map_err(err)
    }

    #[staticmethod]
    fn counting(atoms: Vec<String>) -> PyResult<Self> {
        Ok(PyMeasure(SigmaFiniteMeasure::counting(
            &Carrier::new(atoms).map_err(err)?,
        )))
    }

    #[getter]
    fn atoms(&self) -> Vec<String> {
        self.0.carrier().atoms().to_vec()
    }

    fn weights(&self, py: Python<'_>) -> PyResult<Py<PyDict>> {
        labelled(self.0.carrier(), self.0.weights(), py)
    }

    fn total(&self) -> Rational {
        self.0.total()
    }

    fn mass(&self, event_atoms: Vec<String>) -> PyResult<Rational> {
        self.0.mass(&event(self.0.carrier(), event_atoms)?).map_err(err)
    }

    fn integrate(&self, f: &Bound<'_, PyDict>) -> PyResult<Rational> {
        self.0.integrate(&function(self.0.carrier(), f)?).map_err(err)
    }

    fn scale(&self, c: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.0.scale(&number(c)?).map(PyMeasure).map_err(err)
    }

    fn pushforward(&self, statistic: &PyStatistic) -> PyResult<Self> {
        self.0.pushforward(&statistic.0).map(PyMeasure).map_err(err)
    }

    fn __repr__(&self) -> String {
        let body: Vec<String> = self
            .0
            .carrier()
            .atoms()
            .iter()
            .zip(self.0.weights())
            .map(|(a, w)| format!("{a}: {}", rational::to_exact(w)))
            .collect();
        format!("Measure({{{}}})", body.join(", "))
    }
}

/// A map from the atoms of one carrier to the labels of another.
#[pyclass(name = "Statistic", module = "pyrenyi", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyStatistic(Statistic);

#[pymethods]
impl PyStatistic {
    /// `Statistic({"1": "odd", "2": "even"}, codomain=None)`; without a
    /// codomain the image labels are taken in order of first appearance.
    #[new]
    #[pyo3(signature = (mapping, codomain = None))]
    fn new(mapping: &Bound<'_, PyDict>, codomain: Option<Vec<String>>) -> PyResult<Self> {
        let mut atoms = Vec::new();
        let mut images = Vec::new();
        for (k, v) in mapping.iter() {
            atoms.push(k.extract::<String>()?);
            images.push(v.extract::<String>()?);
        }
        let labels = codomain.unwrap_or_else(|| {
            let mut seen: Vec<String> = Vec::new();
            for t in &images {
                if !seen.contains(t) {
                    seen.push(t.clone());
                }
            }
            seen
        });
        let domain = Carrier::new(atoms).map_err(err)?;
        let codomain = Carrier::new(labels).map_err(err)?;
        Statistic::new(&domain, &codomain, &images)
            .map(PyStatistic)
            .map_err(err)
    }

    #[getter]
    fn codomain(&self) -> Vec<String> {
        self.0.codomain().atoms().to_vec()
    }
}

/// The scale class of a measure; conditioning ignores the scale.
#[pyclass(name = "RenyiState", module = "pyrenyi", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyState(RenyiState);

#[pymethods]
impl PyState {
    #[new]
    fn new(measure: &PyMeasure) -> Self {
        PyState(RenyiState::new(measure.0.clone()))
    }

    fn representative(&self) -> PyMeasure {
        PyMeasure(self.0.representative().clone())
    }

    /// `P(A | B)` for a function `{label: value}` or an event (list of labels).
    #[pyo3(signature = (a, given = None))]
    fn condition(&self, a: &Bound<'_, PyAny>, given: Option<Vec<String>>) -> PyResult<Rational> {
        let carrier = self.0.carrier();
        let f = match a.cast::<PyDict>() {
            Ok(d) => function(carrier, d)?,
            Err(_) => event(carrier, a.extract()?)?.indicator(),
        };
        let b = match given {
            Some(atoms) => event(carrier, atoms)?,
            None => Event::full(carrier),
        };
        self.0.condition(&f, &b).map_err(err)
    }

    fn is_elementary(&self, b: Vec<String>) -> PyResult<bool> {
        Ok(self.0.is_elementary_condition(&event(self.0.carrier(), b)?))
    }

    /// All elementary conditions, as sorted lists of labels.
    #[pyo3(signature = (limit = 1 << 16))]
    fn maximal_bunch(&self, limit: u128) -> PyResult<Vec<Vec<String>>> {
        let bunch = self.0.maximal_bunch(limit).map_err(err)?;
        Ok(conditions(&bunch))
    }

    fn __repr__(&self) -> String {
        format!("RenyiState({})", PyMeasure(self.0.representative().clone()).__repr__())
    }
}

fn conditions(bunch: &Bunch) -> Vec<Vec<String>> {
    bunch
        .conditions()
        .iter()
        .map(|b| b.labels().into_iter().map(String::from).collect())
        .collect()
}

/// Conditional tables `F(· | B)` indexed by the members of a bunch.
#[pyclass(name = "ConditionalFamily", module = "pyrenyi", frozen)]
struct PyFamily(ConditionalFamily);

#[pymethods]
impl PyFamily {
    /// `ConditionalFamily(atoms, [(condition, {label: prob}), ...])`.
    #[new]
    fn new(atoms: Vec<String>, tables: Vec<(Vec<String>, Bound<'_, PyDict>)>) -> PyResult<Self> {
        let carrier = Carrier::new(atoms).map_err(err)?;
        let mut pairs = Vec::new();
        for (b, table) in tables {
            pairs.push((event(&carrier, b)?, function(&carrier, &table)?.values().to_vec()));
        }
        let bunch = Bunch::new(&carrier, pairs.iter().map(|(b, _)| b.clone()).collect()).map_err(err)?;
        ConditionalFamily::from_pairs(bunch, pairs).map(PyFamily).map_err(err)
    }

    /// Tables of `state` on the union-closure of `seeds` together with the whole carrier.
    #[staticmethod]
    fn generate(state: &PyState, seeds: Vec<Vec<String>>) -> PyResult<Self> {
        let carrier = state.0.carrier();
        let mut events = vec![Event::full(carrier)];
        for s in seeds {
            events.push(event(carrier, s)?);
        }
        let bunch = close_under_union(carrier, events).map_err(err)?;
        ConditionalFamily::generate(&state.0, &bunch).map(PyFamily).map_err(err)
    }

    fn conditions(&self) -> Vec<Vec<String>> {
        conditions(self.0.bunch())
    }

    fn table(&self, py: Python<'_>, condition: Vec<String>) -> PyResult<Py<PyDict>> {
        let carrier = self.0.bunch().carrier();
        let b = event(carrier, condition)?;
        let i = self
            .0
            .bunch()
            .position(&b)
            .ok_or_else(|| err(format!("{b} is not a condition of the family")))?;
        labelled(carrier, self.0.table(i), py)
    }

    /// `None` if consistent, otherwise `(atom, B, C, lhs, rhs)` for the first
    /// failing instance.
    #[allow(clippy::type_complexity)]
    fn check(&self) -> PyResult<Option<(String, Vec<String>, Vec<String>, Rational, Rational)>> {
        let report = check_consistency(&self.0).map_err(err)?;
        Ok(report.violation.map(|v| {
            let labels = |e: &Event| e.labels().into_iter().map(String::from).collect();
            (
                self.0.bunch().carrier().atom(v.atom).to_string(),
                labels(&v.b),
                labels(&v.c),
                v.lhs,
                v.rhs,
            )
        }))
    }

    fn reconstruct(&self) -> PyResult<PyState> {
        reconstruct(&self.0).map(PyState).map_err(err)
    }
}

/// Kernels `P^t` of a state disintegrated along a statistic.
#[pyclass(name = "ConditionalState", module = "pyrenyi", frozen)]
struct PyConditional(ConditionalState);

impl PyConditional {
    fn t(&self, label: &str) -> PyResult<usize> {
        self.0.statistic().codomain().index_of(label).map_err(err)
    }

    fn carrier(&self) -> &Carrier {
        self.0.base().carrier()
    }
}

#[pymethods]
impl PyConditional {
    fn nu(&self, py: Python<'_>) -> PyResult<Py<PyDict>> {
        let m = self.0.nu().measure();
        labelled(m.carrier(), m.weights(), py)
    }

    /// The kernel at `t` as a dict, or `None` where it is the zero measure.
    fn kernel(&self, py: Python<'_>, t: &str) -> PyResult<Option<Py<PyDict>>> {
        let t = self.t(t)?;
        self.0
            .kernel(t)
            .map(|k| labelled(k.carrier(), k.weights(), py))
            .transpose()
    }

    fn kernel_mass(&self, a: &Bound<'_, PyDict>, t: &str) -> PyResult<Rational> {
        self.0
            .kernel_mass(&function(self.carrier(), a)?, self.t(t)?)
            .map_err(err)
    }

    fn conditional_given(&self, a: &Bound<'_, PyDict>, given: Vec<String>, t: &str) -> PyResult<Rational> {
        let b = event(self.carrier(), given)?;
        self.0
            .conditional_given(&function(self.carrier(), a)?, &b, self.t(t)?)
            .map_err(err)
    }

    fn verify_factorization(&self, a: &Bound<'_, PyDict>, given: Vec<String>) -> PyResult<bool> {
        let b = event(self.carrier(), given)?;
        let report = verify_factorization(&self.0, &function(self.carrier(), a)?, &b).map_err(err)?;
        Ok(report.passed())
    }
}

/// `disintegrate(state, statistic, nu="counting" | "pushforward" | {label: weight})`.
#[pyfunction(name = "disintegrate")]
#[pyo3(signature = (state, statistic, nu = None))]
fn py_disintegrate(state: &PyState, statistic: &PyStatistic, nu: Option<&Bound<'_, PyAny>>) -> PyResult<PyConditional> {
    let mode = match nu {
        None => NuMode::Counting,
        Some(obj) => match obj.cast::<PyDict>() {
            Ok(weights) => {
                let codomain = statistic.0.codomain();
                let w = function(codomain, weights)?.values().to_vec();
                NuMode::Supplied(SigmaFiniteMeasure::new(codomain, w).map_err(err)?)
            }
            Err(_) => match obj.extract::<String>()?.as_str() {
                "counting" => NuMode::Counting,
                "pushforward" => NuMode::Pushforward,
                other => return Err(err(format!("unknown nu {other:?}"))),
            },
        },
    };
    let nu = choose_dominating(&state.0, &statistic.0, mode).map_err(err)?;
    disintegrate(&state.0, &statistic.0, &nu)
        .map(PyConditional)
        .map_err(err)
}

/// `E[A | T = t]` for a state whose representative is a probability.
#[pyfunction(name = "kolmogorov_conditional")]
fn py_kolmogorov(state: &PyState, a: &Bound<'_, PyDict>, statistic: &PyStatistic, t: &str) -> PyResult<Rational> {
    let t = statistic.0.codomain().index_of(t).map_err(err)?;
    kolmogorov_conditional(&state.0, &function(state.0.carrier(), a)?, &statistic.0, t).map_err(err)
}

/// A parsed model file.
#[pyclass(name = "Model", module = "pyrenyi", frozen)]
struct PyModel(ModelSpec);

#[pymethods]
impl PyModel {
    #[getter]
    fn atoms(&self) -> Vec<String> {
        self.0.carrier.atoms().to_vec()
    }

    fn state(&self) -> Option<PyState> {
        self.0.measure.clone().map(|m| PyState(RenyiState::new(m)))
    }

    fn statistic(&self) -> Option<PyStatistic> {
        self.0.statistic.clone().map(PyStatistic)
    }

    fn event(&self, name: &str) -> Option<Vec<String>> {
        self.0
            .event(name)
            .map(|e| e.labels().into_iter().map(String::from).collect())
    }

    fn function(&self, py: Python<'_>, name: &str) -> PyResult<Option<Py<PyDict>>> {
        self.0
            .function(name)
            .map(|f| labelled(&self.0.carrier, f.values(), py))
            .transpose()
    }

    fn family(&self) -> PyResult<Option<PyFamily>> {
        let Some(bunch) = self.0.bunch.clone() else {
            return Ok(None);
        };
        ConditionalFamily::from_pairs(bunch, self.0.tables.clone())
            .map(|f| Some(PyFamily(f)))
            .map_err(err)
    }

    fn emit(&self) -> String {
        emit_model(&self.0)
    }
}

#[pyfunction(name = "parse_model")]
fn py_parse_model(text: &str) -> PyResult<PyModel> {
    parse_model(text).map(PyModel).map_err(err)
}

#[pymodule]
fn pyrenyi(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("RenyiError", m.py().get_type::<RenyiError>())?;
    m.add_class::<PyMeasure>()?;
    m.add_class::<PyStatistic>()?;
    m.add_class::<PyState>()?;
    m.add_class::<PyFamily>()?;
    m.add_class::<PyConditional>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(py_disintegrate, m)?)?;
    m.add_function(wrap_pyfunction!(py_kolmogorov, m)?)?;
    m.add_function(wrap_pyfunction!(py_parse_model, m)?)?;
    Ok(())
}
