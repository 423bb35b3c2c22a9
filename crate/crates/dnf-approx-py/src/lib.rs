//! Python bindings: truth tables, DNFs, the constructions, and the
//! brute-force oracles, exposed as a small extension module.
//!
//! Build with `cargo build -p dnf-approx-py --release`, then import the
//! produced cdylib as `dnf_approx_py` (python/smoke_test.py shows the
//! copy-and-import dance).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dnf_approx::boolfn::{
    self, majority_table, parity_table, random_balanced_table, random_monotone_table,
    random_table,
};
use dnf_approx::dnf::{closeness, minterm_expansion, upset_term, ApproxReport};
use dnf_approx::monotone::level_decompose;
use dnf_approx::oracle;
use dnf_approx::parity::{block_error, parity_approx};
use dnf_approx::universal::{choose_d, universal_approx, DMode, UniversalParams};
use dnf_approx::{BitString, Dnf, Error, TruthTable as CoreTable};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn bits_from_index(n: u32, index: usize) -> PyResult<BitString> {
    BitString::from_index(n, index).map_err(err)
}

/// A complete truth table for f: {0,1}^n -> {0,1}.
#[pyclass(name = "TruthTable", skip_from_py_object)]
#[derive(Clone)]
struct PyTruthTable {
    inner: CoreTable,
}

#[pymethods]
impl PyTruthTable {
    /// Build from an explicit list of 2^n booleans (index order).
    #[new]
    fn new(n: u32, bits: Vec<bool>) -> PyResult<Self> {
        Ok(PyTruthTable {
            inner: CoreTable::from_bools(n, &bits).map_err(err)?,
        })
    }

    #[staticmethod]
    fn zeros(n: u32) -> PyResult<Self> {
        Ok(PyTruthTable {
            inner: CoreTable::zeros(n).map_err(err)?,
        })
    }

    #[staticmethod]
    fn ones(n: u32) -> PyResult<Self> {
        Ok(PyTruthTable {
            inner: CoreTable::ones(n).map_err(err)?,
        })
    }

    #[staticmethod]
    fn parity(n: u32) -> PyResult<Self> {
        Ok(PyTruthTable {
            inner: parity_table(n).map_err(err)?,
        })
    }

    #[staticmethod]
    fn majority(n: u32) -> PyResult<Self> {
        Ok(PyTruthTable {
            inner: majority_table(n).map_err(err)?,
        })
    }

    #[staticmethod]
    fn random(n: u32, density: f64, seed: u64) -> PyResult<Self> {
        Ok(PyTruthTable {
            inner: random_table(n, density, seed).map_err(err)?,
        })
    }

    #[staticmethod]
    fn random_balanced(n: u32, seed: u64) -> PyResult<Self> {
        Ok(PyTruthTable {
            inner: random_balanced_table(n, seed).map_err(err)?,
        })
    }

    #[staticmethod]
    fn random_monotone(n: u32, density: f64, seed: u64) -> PyResult<Self> {
        Ok(PyTruthTable {
            inner: random_monotone_table(n, density, seed).map_err(err)?,
        })
    }

    /// Parse the text file format (header `n=<int>`, then hex digits).
    #[staticmethod]
    fn from_file_text(text: &str) -> PyResult<Self> {
        Ok(PyTruthTable {
            inner: CoreTable::from_file_str(text).map_err(err)?,
        })
    }

    fn to_file_text(&self) -> String {
        self.inner.to_file_string()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// f at a table index.
    fn get(&self, index: usize) -> PyResult<bool> {
        if index >= self.inner.len() {
            return Err(PyValueError::new_err(format!("index {index} out of range")));
        }
        Ok(self.inner.get_index(index))
    }

    fn count_ones(&self) -> u64 {
        self.inner.count_ones()
    }

    fn is_monotone(&self) -> bool {
        self.inner.is_monotone()
    }

    /// Minimal 1-inputs (as table indices) of a monotone function.
    fn minterms(&self) -> PyResult<Vec<usize>> {
        Ok(self
            .inner
            .minterms()
            .map_err(err)?
            .into_iter()
            .map(|b| b.index())
            .collect())
    }

    /// Fraction of weight-k inputs mapped to 1.
    fn level_density(&self, k: u32) -> PyResult<f64> {
        self.inner.level_density(k).map_err(err)
    }

    fn closeness(&self, other: &PyTruthTable) -> PyResult<f64> {
        closeness(&self.inner, &other.inner).map_err(err)
    }

    /// Pointwise self <= other.
    fn le(&self, other: &PyTruthTable) -> PyResult<bool> {
        self.inner.le(&other.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "TruthTable(n={}, ones={})",
            self.inner.n(),
            self.inner.count_ones()
        )
    }
}

/// A DNF formula (ordered list of terms over {0,1,-} patterns).
#[pyclass(name = "Dnf", skip_from_py_object)]
#[derive(Clone)]
struct PyDnf {
    inner: Dnf,
}

#[pymethods]
impl PyDnf {
    /// Build from term patterns, each n characters over {0,1,-}.
    #[new]
    fn new(n: u32, patterns: Vec<String>) -> PyResult<Self> {
        let mut d = Dnf::new(n).map_err(err)?;
        for p in &patterns {
            d.push(dnf_approx::Term::from_pattern(p).map_err(err)?)
                .map_err(err)?;
        }
        Ok(PyDnf { inner: d })
    }

    #[staticmethod]
    fn from_file_text(text: &str) -> PyResult<Self> {
        Ok(PyDnf {
            inner: Dnf::from_file_str(text).map_err(err)?,
        })
    }

    fn to_file_text(&self) -> String {
        self.inner.to_file_string()
    }

    /// Exact baseline: one width-n term per 1-input of the table.
    #[staticmethod]
    fn minterm_expansion(table: &PyTruthTable) -> Self {
        PyDnf {
            inner: minterm_expansion(&table.inner),
        }
    }

    /// The positive term accepting everything above the given input.
    #[staticmethod]
    fn upset_of(n: u32, index: usize) -> PyResult<Self> {
        let y = bits_from_index(n, index)?;
        let mut d = Dnf::new(n).map_err(err)?;
        d.push(upset_term(&y)).map_err(err)?;
        Ok(PyDnf { inner: d })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn width(&self) -> u32 {
        self.inner.width()
    }

    fn patterns(&self) -> Vec<String> {
        self.inner.terms().iter().map(|t| t.pattern()).collect()
    }

    /// Evaluate at a table index.
    fn eval(&self, index: usize) -> PyResult<bool> {
        if index >= 1usize << self.inner.n() {
            return Err(PyValueError::new_err(format!("index {index} out of range")));
        }
        Ok(self.inner.eval_index(index))
    }

    /// Tabulate by sub-cube stamping.
    fn to_table(&self) -> PyResult<PyTruthTable> {
        Ok(PyTruthTable {
            inner: self.inner.to_table().map_err(err)?,
        })
    }

    /// Per-point oracle evaluation (independent implementation).
    fn slow_eval(&self, index: usize) -> PyResult<bool> {
        let x = bits_from_index(self.inner.n(), index)?;
        oracle::slow_eval(&self.inner, &x).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Dnf(n={}, size={}, width={})",
            self.inner.n(),
            self.inner.size(),
            self.inner.width()
        )
    }
}

fn report_dict<'py>(py: Python<'py>, report: &ApproxReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("construction", &report.construction)?;
    d.set_item("n", report.n)?;
    d.set_item("epsilon", report.epsilon)?;
    d.set_item("error", report.error)?;
    d.set_item("error_zero_side", report.error_zero_side)?;
    d.set_item("error_one_side", report.error_one_side)?;
    d.set_item("size", report.size)?;
    d.set_item("width", report.width)?;
    d.set_item("d", report.params.d)?;
    d.set_item("b", report.params.b)?;
    d.set_item("w", report.params.w)?;
    d.set_item("t", report.params.t)?;
    d.set_item("master_seed", report.master_seed)?;
    d.set_item("trial_seed", report.trial_seed)?;
    d.set_item("trial", report.trial)?;
    d.set_item("error_method", &report.error_method)?;
    d.set_item("notes", report.notes.clone())?;
    Ok(d)
}

/// Block-split parity approximator, measured exhaustively.
/// Returns (report dict, Dnf).
#[pyfunction]
fn parity_block_approx<'py>(
    py: Python<'py>,
    n: u32,
    b: u32,
) -> PyResult<(Bound<'py, PyDict>, PyDnf)> {
    let (report, dnf) = parity_approx(n, b).map_err(err)?;
    Ok((report_dict(py, &report)?, PyDnf { inner: dnf }))
}

/// Exact error of the b-block parity approximator: 1/2 - 2^-b.
#[pyfunction]
fn parity_block_error(b: u32) -> PyResult<f64> {
    block_error(b).map_err(err)
}

/// Sampled majority approximator: best of `trials` seeded draws.
#[pyfunction]
fn majority_approx<'py>(
    py: Python<'py>,
    n: u32,
    epsilon: f64,
    trials: u64,
    seed: u64,
) -> PyResult<(Bound<'py, PyDict>, PyDnf)> {
    let (report, dnf) =
        dnf_approx::majority::majority_approx(n, epsilon, trials, seed).map_err(err)?;
    Ok((report_dict(py, &report)?, PyDnf { inner: dnf }))
}

/// Exact acceptance probability of the sampled majority DNF at weight m.
#[pyfunction]
fn majority_accept_prob(n: u32, w: u32, term_count: u64, m: u32) -> f64 {
    dnf_approx::majority::accept_prob(n, w, term_count, m)
}

/// Two-stage universal approximator: best of `trials` seeded flip+cover
/// draws; d explicit or from the loglog rule.
#[pyfunction]
#[pyo3(signature = (table, epsilon, trials, seed, d=None))]
fn universal_approx_best<'py>(
    py: Python<'py>,
    table: &PyTruthTable,
    epsilon: f64,
    trials: u64,
    seed: u64,
    d: Option<u32>,
) -> PyResult<(Bound<'py, PyDict>, PyDnf)> {
    let d_mode = match d {
        Some(d) => DMode::Explicit(d),
        None => DMode::SimpleLogLog,
    };
    let params = UniversalParams {
        epsilon,
        d_mode,
        trials,
        master_seed: seed,
    };
    let (report, dnf) = universal_approx(&table.inner, &params).map_err(err)?;
    Ok((report_dict(py, &report)?, PyDnf { inner: dnf }))
}

/// Closed-form probability that a 1-input stays uncovered by stage two.
#[pyfunction]
fn universal_uncovered_prob(
    table: &PyTruthTable,
    index: usize,
    epsilon: f64,
    d: u32,
) -> PyResult<f64> {
    let x = bits_from_index(table.inner.n(), index)?;
    dnf_approx::universal::uncovered_prob(&table.inner, &x, epsilon, d).map_err(err)
}

/// Pick the sub-cube dimension: mode is "closed-form", "simple-loglog", or an
/// explicit integer passed as a string.
#[pyfunction]
fn universal_choose_d(n: u32, epsilon: f64, mode: &str) -> PyResult<u32> {
    let d_mode = match mode {
        "closed-form" => DMode::ClosedForm,
        "simple-loglog" => DMode::SimpleLogLog,
        other => DMode::Explicit(
            other
                .parse()
                .map_err(|_| PyValueError::new_err(format!("bad d mode {other:?}")))?,
        ),
    };
    choose_d(n, epsilon, d_mode).map_err(err)
}

/// Lower approximator for a monotone function (decompose + sample),
/// plus a JSON report of the decomposition and sampling statistics.
#[pyfunction]
fn monotone_approx<'py>(
    py: Python<'py>,
    table: &PyTruthTable,
    epsilon: f64,
    seed: u64,
) -> PyResult<(Bound<'py, PyDict>, PyDnf, String)> {
    let (report, dnf, full) =
        dnf_approx::monotone::monotone_approx(&table.inner, epsilon, seed).map_err(err)?;
    let json =
        serde_json::to_string_pretty(&full).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((report_dict(py, &report)?, PyDnf { inner: dnf }, json))
}

/// Stage-one decomposition summary as JSON (window, densities, slices).
#[pyfunction]
fn monotone_decompose_json(table: &PyTruthTable, epsilon: f64) -> PyResult<String> {
    let d = level_decompose(&table.inner, epsilon).map_err(err)?;
    serde_json::to_string_pretty(&d.summary()).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Exhaustive disagreement fraction via the slow per-point oracle.
#[pyfunction]
fn oracle_exact_error(dnf: &PyDnf, table: &PyTruthTable) -> PyResult<f64> {
    Ok(oracle::exact_error(&dnf.inner, &table.inner)
        .map_err(err)?
        .estimate)
}

/// Monte Carlo disagreement fraction; returns (estimate, half_width).
#[pyfunction]
fn oracle_mc_error(
    dnf: &PyDnf,
    table: &PyTruthTable,
    samples: u64,
    seed: u64,
) -> PyResult<(f64, f64)> {
    let t = table.inner.clone();
    let e =
        oracle::mc_error(&dnf.inner, move |x| t.get(x).unwrap(), samples, seed).map_err(err)?;
    Ok((e.estimate, e.half_width))
}

/// Provably minimum-size DNF for n <= 4.
#[pyfunction]
fn oracle_exact_min_dnf(table: &PyTruthTable) -> PyResult<PyDnf> {
    Ok(PyDnf {
        inner: oracle::exact_min_dnf(&table.inner).map_err(err)?,
    })
}

#[pymodule]
fn dnf_approx_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MAX_N", boolfn::MAX_N)?;
    m.add_class::<PyTruthTable>()?;
    m.add_class::<PyDnf>()?;
    m.add_function(wrap_pyfunction!(parity_block_approx, m)?)?;
    m.add_function(wrap_pyfunction!(parity_block_error, m)?)?;
    m.add_function(wrap_pyfunction!(majority_approx, m)?)?;
    m.add_function(wrap_pyfunction!(majority_accept_prob, m)?)?;
    m.add_function(wrap_pyfunction!(universal_approx_best, m)?)?;
    m.add_function(wrap_pyfunction!(universal_uncovered_prob, m)?)?;
    m.add_function(wrap_pyfunction!(universal_choose_d, m)?)?;
    m.add_function(wrap_pyfunction!(monotone_approx, m)?)?;
    m.add_function(wrap_pyfunction!(monotone_decompose_json, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_exact_error, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_mc_error, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_exact_min_dnf, m)?)?;
    Ok(())
}
