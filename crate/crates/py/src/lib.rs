//! Python module `wordmaplab`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use wordmaplab::charlab::{self, TableOptions};
use wordmaplab::ffpoly::{self, FamilyKind, Field, Poly};
use wordmaplab::genfun;
use wordmaplab::grouplab::{self, ConjClassData, FiniteGroup};
use wordmaplab::words;
use wordmaplab::{Budget, Error};

create_exception!(wordmaplab, InvariantError, PyRuntimeError, "A checked invariant failed.");
create_exception!(wordmaplab, BudgetError, PyRuntimeError, "An enumeration exceeds the configured budget.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Invariant(_)
        | Error::Tolerance(_)
        | Error::FourierPattern(_)
        | Error::TwistIntegrality(_)
        | Error::EigenSeparation { .. } => InvariantError::new_err(e.to_string()),
        Error::BudgetExceeded { .. } => BudgetError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn family(name: &str) -> PyResult<FamilyKind> {
    name.parse().map_err(to_py)
}

/// Turns any serializable report into plain Python data.
fn plain<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn fraction<'py>(py: Python<'py>, num: BigInt, den: BigInt) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((num, den))
}

fn budget() -> PyResult<Budget> {
    Budget::from_env().map_err(to_py)
}

/// `|𝓘𝓛ₙ(q)|`, `|𝓘𝒰ₙ(q)|` or `|𝓘𝒪ₙ(q)|`.
#[pyfunction]
fn count_irreducibles(kind: &str, n: usize, q: u64) -> PyResult<BigUint> {
    ffpoly::count_irreducibles(family(kind)?, n, q).map_err(to_py)
}

/// Coefficients of `∏ (1 - xⁿ)^{-eₙ}` up to `x^truncation`.
#[pyfunction]
fn euler_product(exponents: Vec<BigInt>, truncation: usize) -> PyResult<Vec<BigUint>> {
    Ok(genfun::euler_product(&exponents, truncation).map_err(to_py)?.coeffs().to_vec())
}

/// `rows[n][m]`: family members of degree `n` (`2n` for selfdual) with `m` blocks.
#[pyfunction]
fn factor_distribution(kind: &str, q: u64, truncation: usize) -> PyResult<Vec<Vec<BigUint>>> {
    let dist = genfun::family_factor_distribution(family(kind)?, q, truncation).map_err(to_py)?;
    Ok((0..=truncation).map(|n| dist.row(n).to_vec()).collect())
}

/// `(n, m, Fraction)` tails plus thresholds and empirical fits.
#[pyfunction]
#[pyo3(signature = (kind, q, n_max, m_max, ks = vec![1, 2, 3]))]
fn tail_table<'py>(
    py: Python<'py>,
    kind: &str,
    q: u64,
    n_max: usize,
    m_max: usize,
    ks: Vec<u32>,
) -> PyResult<Bound<'py, PyAny>> {
    let t = genfun::tail_table(family(kind)?, q, n_max, m_max, &ks).map_err(to_py)?;
    let out = plain(py, &t)?;
    let rows = t
        .rows
        .iter()
        .map(|r| Ok((r.n, r.m, fraction(py, r.num.clone().into(), r.den.clone().into())?)))
        .collect::<PyResult<Vec<_>>>()?;
    out.set_item("rows", rows)?;
    Ok(out)
}

/// Factors a polynomial over 𝔽_q given by coefficient codes, constant term
/// first. Returns `(unit, [(factor_codes, multiplicity), ...])`.
#[pyfunction]
fn factor(q: u64, coeffs: Vec<u32>) -> PyResult<(u32, Vec<(Vec<u32>, usize)>)> {
    let field = Field::of_order(q).map_err(to_py)?;
    if let Some(&c) = coeffs.iter().find(|&&c| u64::from(c) >= q) {
        return Err(PyValueError::new_err(format!("coefficient code {c} is not below q = {q}")));
    }
    let fm = ffpoly::factor(&Poly::from_codes(&field, &coeffs)).map_err(to_py)?;
    let factors = fm.factors.iter().map(|(p, m)| (p.coeffs().iter().map(|c| c.0).collect(), *m)).collect();
    Ok((fm.unit.0, factors))
}

/// Trace-prescribed solutions of `x₁x₂x₃ = e` in `SL₂(q)`.
#[pyfunction]
fn sl2_trace_transitivity<'py>(py: Python<'py>, q: u64, traces: [u32; 3]) -> PyResult<Bound<'py, PyAny>> {
    let r = grouplab::sl2_trace_transitivity(q, traces, &budget()?).map_err(to_py)?;
    plain(py, &r)
}

#[pyclass(name = "Word", frozen, eq, hash, str, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyWord(words::Word);

impl std::fmt::Display for PyWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[pymethods]
impl PyWord {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        words::parse(text).map(PyWord).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Word({:?})", self.0.to_string())
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn letters(&self) -> Vec<(u32, i64)> {
        self.0.letters().to_vec()
    }

    fn is_admissible(&self) -> bool {
        self.0.is_admissible()
    }

    fn inverse(&self) -> PyWord {
        PyWord(self.0.inverse())
    }

    fn __mul__(&self, other: &PyWord) -> PyWord {
        PyWord(self.0.concat(&other.0))
    }
}

#[pyclass(name = "Group", frozen)]
struct PyGroup {
    group: grouplab::Group,
    classes: ConjClassData,
}

fn word_arg(w: &Bound<'_, PyAny>) -> PyResult<words::Word> {
    if let Ok(w) = w.extract::<PyRef<'_, PyWord>>() {
        return Ok(w.0.clone());
    }
    words::parse(&w.extract::<String>()?).map_err(to_py)
}

#[pymethods]
impl PyGroup {
    /// `"A5"`, `"S6"`, `"C7"`, `"SL2(7)"`, `"GL2(3)"`, `"PSL2(11)"`, `"SL3(2)"`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        let budget = budget()?;
        let group = grouplab::Group::parse_with_budget(spec, &budget).map_err(to_py)?;
        let classes = grouplab::conjugacy_classes(&group, &budget).map_err(to_py)?;
        Ok(PyGroup { group, classes })
    }

    fn __repr__(&self) -> String {
        format!("Group({:?})", self.group.name())
    }

    #[getter]
    fn name(&self) -> String {
        self.group.name()
    }

    #[getter]
    fn order(&self) -> usize {
        self.group.order()
    }

    #[getter]
    fn class_sizes(&self) -> Vec<usize> {
        self.classes.sizes.clone()
    }

    #[getter]
    fn class_orders(&self) -> Vec<usize> {
        self.classes.rep_orders.clone()
    }

    /// Exact class masses as `Fraction`s; convolution for two-letter power words.
    fn word_distribution<'py>(&self, py: Python<'py>, word: &Bound<'py, PyAny>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let w = word_arg(word)?;
        let d = grouplab::word_distribution(&self.group, &self.classes, &w, &budget()?).map_err(to_py)?;
        (0..d.class_sizes.len())
            .map(|c| {
                let m = d.class_mass(c);
                fraction(py, m.numer().clone(), m.denom().clone())
            })
            .collect()
    }

    /// Exact `‖P_w - μ‖₁` as a `Fraction`.
    fn l1_to_uniform<'py>(&self, py: Python<'py>, word: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let w = word_arg(word)?;
        let d = grouplab::word_distribution(&self.group, &self.classes, &w, &budget()?).map_err(to_py)?;
        let l1 = d.l1_to_uniform();
        fraction(py, l1.numer().clone(), l1.denom().clone())
    }

    #[pyo3(signature = (word, samples, seed = ffpoly::DEFAULT_SEED))]
    fn monte_carlo<'py>(
        &self,
        py: Python<'py>,
        word: &Bound<'py, PyAny>,
        samples: u64,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let w = word_arg(word)?;
        let mc = grouplab::word_distribution_monte_carlo(&self.group, &self.classes, &w, samples, seed).map_err(to_py)?;
        plain(py, &mc)
    }

    /// Fiber size to number of elements, checked by two routes.
    fn fiber_histogram(&self, m: i64) -> PyResult<BTreeMap<usize, usize>> {
        Ok(grouplab::fiber_histogram(&self.group, &self.classes, m, &budget()?).map_err(to_py)?.counts)
    }

    fn count_unipotents(&self) -> PyResult<usize> {
        grouplab::count_unipotents(&self.group, &budget()?).map_err(to_py)
    }

    #[pyo3(signature = (seed = charlab::DEFAULT_TABLE_SEED))]
    fn character_table(&self, seed: u64) -> PyResult<PyCharacterTable> {
        let options = TableOptions { seed, ..TableOptions::default() };
        charlab::compute_table(&self.group, &self.classes, &options).map(PyCharacterTable).map_err(to_py)
    }

    /// Fourier report for an admissible word.
    fn admissible_fourier<'py>(
        &self,
        py: Python<'py>,
        table: &PyCharacterTable,
        word: &Bound<'py, PyAny>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let w = word_arg(word)?;
        let r = charlab::admissible_fourier(&self.group, &self.classes, &table.0, &w, &budget()?).map_err(to_py)?;
        plain(py, &r)
    }
}

#[pyclass(name = "CharacterTable", frozen)]
struct PyCharacterTable(charlab::CharacterTable);

#[pymethods]
impl PyCharacterTable {
    /// Parses and re-validates a table file.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        charlab::CharacterTable::from_json(text).map(PyCharacterTable).map_err(to_py)
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("CharacterTable({:?}, classes={})", self.0.group, self.0.class_count())
    }

    #[getter]
    fn group(&self) -> String {
        self.0.group.clone()
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order
    }

    #[getter]
    fn degrees(&self) -> Vec<u64> {
        self.0.degrees()
    }

    #[getter]
    fn class_sizes(&self) -> Vec<usize> {
        self.0.class_sizes.clone()
    }

    /// `characters[χ][C]`.
    #[getter]
    fn characters(&self) -> Vec<Vec<Complex64>> {
        self.0.characters.clone()
    }

    fn power_map(&self, m: i64) -> PyResult<Vec<usize>> {
        self.0.power_map(m).map_err(to_py)
    }

    fn zeta(&self, s: f64) -> PyResult<f64> {
        charlab::zeta(&self.0, s).map_err(to_py)
    }

    fn triple_probability(&self, c1: usize, c2: usize, m1: i64, m2: i64, g_class: usize) -> PyResult<f64> {
        let k = self.0.class_count();
        if c1 >= k || c2 >= k || g_class >= k {
            return Err(PyValueError::new_err(format!("class indices must be below {k}")));
        }
        Ok(charlab::triple_probability(&self.0, c1, c2, m1, m2, g_class).map_err(to_py)?.value)
    }

    /// Class masses of `x₁^{m₁} x₂^{m₂}` from the character formula.
    fn power_word_distribution(&self, m1: i64, m2: i64) -> PyResult<Vec<f64>> {
        charlab::power_word_distribution(&self.0, m1, m2).map_err(to_py)
    }

    fn is_simple(&self) -> bool {
        charlab::is_simple(&self.0)
    }

    fn generic_bound<'py>(&self, py: Python<'py>, epsilon: f64) -> PyResult<Bound<'py, PyAny>> {
        plain(py, &charlab::generic_bound_fraction(&self.0, epsilon).map_err(to_py)?)
    }
}

#[pymodule]
#[pyo3(name = "wordmaplab")]
fn wordmaplab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", wordmaplab::VERSION)?;
    m.add("InvariantError", m.py().get_type::<InvariantError>())?;
    m.add("BudgetError", m.py().get_type::<BudgetError>())?;
    m.add_class::<PyWord>()?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyCharacterTable>()?;
    m.add_function(wrap_pyfunction!(count_irreducibles, m)?)?;
    m.add_function(wrap_pyfunction!(euler_product, m)?)?;
    m.add_function(wrap_pyfunction!(factor_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(tail_table, m)?)?;
    m.add_function(wrap_pyfunction!(factor, m)?)?;
    m.add_function(wrap_pyfunction!(sl2_trace_transitivity, m)?)?;
    Ok(())
}
