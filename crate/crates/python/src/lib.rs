//! Python bindings: groups, towers, signatures and the classifier.
//!
//! Reports come back as plain Python dicts and lists, decoded from the same
//! JSON the command-line tool prints.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use ::profscope::classify::SpaceKind;
use ::profscope::cli::{run_text, Overrides};
use ::profscope::subspace::SpaceChain;
use ::profscope::{Budget, Error, FiniteGroup, OrdinalSignature, Tower};

create_exception!(profscope, ProfscopeError, PyException);
create_exception!(profscope, BudgetError, ProfscopeError);

fn err(e: Error) -> PyErr {
    if e.is_budget() {
        BudgetError::new_err(e.to_string())
    } else {
        ProfscopeError::new_err(e.to_string())
    }
}

fn space(name: &str) -> PyResult<SpaceKind> {
    match name {
        "S" => Ok(SpaceKind::S),
        "N" => Ok(SpaceKind::N),
        other => Err(ProfscopeError::new_err(format!("space must be \"S\" or \"N\", got {other:?}"))),
    }
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| ProfscopeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn budget(max_order: usize) -> Budget {
    Budget::for_levels(max_order)
}

/// Finite group given by its Cayley table; element 0 is the identity.
#[pyclass(name = "Group", module = "profscope", frozen, from_py_object)]
#[derive(Clone)]
struct PyGroup {
    inner: FiniteGroup,
}

#[pymethods]
impl PyGroup {
    #[staticmethod]
    fn cyclic(n: usize) -> PyResult<Self> {
        Ok(PyGroup {
            inner: ::profscope::make_cyclic(n).map_err(err)?,
        })
    }

    /// Dihedral group of order `2n`.
    #[staticmethod]
    fn dihedral(n: usize) -> PyResult<Self> {
        Ok(PyGroup {
            inner: ::profscope::make_dihedral(n, &Budget::default()).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (rows, label = String::new()))]
    fn from_table(rows: Vec<Vec<u32>>, label: String) -> PyResult<Self> {
        Ok(PyGroup {
            inner: FiniteGroup::from_rows(&rows, label, ::profscope::group::DEFAULT_SEED).map_err(err)?,
        })
    }

    fn direct_product(&self, other: &PyGroup) -> PyResult<Self> {
        Ok(PyGroup {
            inner: ::profscope::direct_product(&self.inner, &other.inner, &Budget::default()).map_err(err)?,
        })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    fn table(&self) -> Vec<Vec<u32>> {
        self.inner.rows()
    }

    fn is_abelian(&self) -> bool {
        self.inner.is_abelian()
    }

    fn subgroup_count(&self) -> PyResult<usize> {
        Ok(::profscope::all_subgroups(&self.inner, &Budget::default()).map_err(err)?.len())
    }

    fn frattini_order(&self) -> PyResult<usize> {
        Ok(::profscope::frattini(&self.inner, &Budget::default()).map_err(err)?.order())
    }

    fn psi_order(&self) -> PyResult<usize> {
        Ok(::profscope::psi(&self.inner, &Budget::default()).map_err(err)?.order())
    }

    fn __repr__(&self) -> String {
        format!("Group({:?}, order={})", self.inner.label(), self.inner.order())
    }
}

/// Inverse sequence of finite groups.
#[pyclass(name = "Tower", module = "profscope", frozen, from_py_object)]
#[derive(Clone)]
struct PyTower {
    inner: Tower,
}

#[pymethods]
impl PyTower {
    #[staticmethod]
    fn trivial() -> Self {
        PyTower { inner: Tower::trivial() }
    }

    #[staticmethod]
    fn padic(p: u64) -> PyResult<Self> {
        Ok(PyTower {
            inner: Tower::padic(p).map_err(err)?,
        })
    }

    #[staticmethod]
    fn product(a: &PyTower, b: &PyTower) -> Self {
        PyTower {
            inner: Tower::product(&a.inner, &b.inner),
        }
    }

    #[staticmethod]
    fn finite_times(f: &PyGroup, t: &PyTower) -> Self {
        PyTower {
            inner: Tower::finite_times(&f.inner, &t.inner),
        }
    }

    #[staticmethod]
    fn torsion(c: &PyGroup) -> PyResult<Self> {
        Ok(PyTower {
            inner: Tower::torsion(&c.inner).map_err(err)?,
        })
    }

    /// `maps[i]` sends level `i + 1` onto level `i`.
    #[staticmethod]
    fn custom(levels: Vec<PyGroup>, maps: Vec<Vec<u32>>) -> PyResult<Self> {
        let levels = levels.into_iter().map(|g| g.inner).collect();
        Ok(PyTower {
            inner: Tower::custom(levels, maps).map_err(err)?,
        })
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    fn is_certified(&self) -> bool {
        self.inner.certificates().is_some()
    }

    #[pyo3(signature = (n, budget = 4096))]
    fn level(&self, n: usize, budget: usize) -> PyResult<PyGroup> {
        let g = self.inner.level(n, &self::budget(budget)).map_err(err)?;
        Ok(PyGroup { inner: (*g).clone() })
    }

    #[pyo3(signature = (dmax, normal = false, budget = 4096))]
    fn growth_sequence(&self, dmax: usize, normal: bool, budget: usize) -> PyResult<Vec<usize>> {
        ::profscope::growth_sequence(&self.inner, dmax, normal, &self::budget(budget)).map_err(err)
    }

    /// Per-point isolation verdicts at depth `d` as a list of dicts.
    #[pyo3(signature = (d, window = 3, normal = false, budget = 4096))]
    fn isolation_verdicts<'py>(
        &self,
        py: Python<'py>,
        d: usize,
        window: usize,
        normal: bool,
        budget: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let b = self::budget(budget);
        let v = SpaceChain::new(&self.inner, normal, &b)
            .isolation_verdicts(d, window)
            .map_err(err)?;
        to_py(py, &v)
    }

    #[pyo3(signature = (space = "S", depth = 6, window = 3, budget = 4096))]
    fn classify<'py>(
        &self,
        py: Python<'py>,
        space: &str,
        depth: usize,
        window: usize,
        budget: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let b = self::budget(budget);
        let c = ::profscope::classify_space(&self.inner, self::space(space)?, depth, window, &b).map_err(err)?;
        to_py(py, &c)
    }

    #[pyo3(signature = (space = "S", depth = 6, window = 3, budget = 4096))]
    fn perfectness<'py>(
        &self,
        py: Python<'py>,
        space: &str,
        depth: usize,
        window: usize,
        budget: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let b = self::budget(budget);
        let p = ::profscope::perfectness(&self.inner, self::space(space)?, depth, window, &b).map_err(err)?;
        to_py(py, &p)
    }

    #[pyo3(signature = (depth, budget = 4096))]
    fn tcount_report<'py>(&self, py: Python<'py>, depth: usize, budget: usize) -> PyResult<Bound<'py, PyAny>> {
        let r = ::profscope::tcount_report(&self.inner, depth, &self::budget(budget)).map_err(err)?;
        to_py(py, &r)
    }

    fn __repr__(&self) -> String {
        format!("Tower({:?})", self.inner.label())
    }
}

/// Countable compact scattered space `ω^h·n+1`.
#[pyclass(name = "Signature", module = "profscope", frozen, from_py_object, eq, hash)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PySignature {
    inner: OrdinalSignature,
}

#[pymethods]
impl PySignature {
    #[new]
    fn new(height: u32, count: u64) -> PyResult<Self> {
        Ok(PySignature {
            inner: OrdinalSignature::new(height, count).map_err(err)?,
        })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PySignature {
            inner: text.parse().map_err(err)?,
        })
    }

    #[getter]
    fn height(&self) -> u32 {
        self.inner.exponent()
    }

    #[getter]
    fn count(&self) -> u64 {
        self.inner.coefficient()
    }

    fn product(&self, other: &PySignature) -> PyResult<Self> {
        Ok(PySignature {
            inner: self.inner.product(&other.inner).map_err(err)?,
        })
    }

    fn homeomorphic(&self, other: &PySignature) -> PyResult<bool> {
        self.inner.homeomorphic(&other.inner).map_err(err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Signature({:?})", self.inner.to_string())
    }
}

/// Run a JSON config as the command-line tool would; returns
/// `(exit_code, stdout, stderr)`.
#[pyfunction]
#[pyo3(signature = (config, command = None))]
fn run_config(config: &str, command: Option<&str>) -> PyResult<(i32, String, String)> {
    let mut overrides = Overrides::default();
    if let Some(c) = command {
        let parsed = serde_json::from_value(serde_json::Value::String(c.to_string()))
            .map_err(|_| ProfscopeError::new_err(format!("unknown command {c:?}")))?;
        overrides.command = Some(parsed);
    }
    let out = run_text(config, &overrides);
    Ok((out.code, out.stdout, out.stderr))
}

#[pymodule(name = "profscope")]
fn profscope_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyTower>()?;
    m.add_class::<PySignature>()?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add("ProfscopeError", m.py().get_type::<ProfscopeError>())?;
    m.add("BudgetError", m.py().get_type::<BudgetError>())?;
    m.add("__version__", ::profscope::cli::VERSION)?;
    Ok(())
}
