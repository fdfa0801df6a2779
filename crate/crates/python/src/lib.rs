//! Python bindings: the formula type, all three solve engines, the
//! generators, the oracle, and the subset-index helpers.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use bbsat_core::dimacs::{emit_dimacs, parse_dimacs, DimacsContents};
use bbsat_core::grouped::{solve_grouped, GroupedConfig};
use bbsat_core::model::{Assignment, VarSet};
use bbsat_core::oracle::{brute_force_solve, evaluate_circuit, evaluate_matching};
use bbsat_core::race::{solve_race, LoserState, RaceConfig};
use bbsat_core::random::{solve_random, RandomConfig};
use bbsat_core::subset_index;
use bbsat_core::transform::{
    expand, gen_extreme_ssat, gen_random_sat, prob_decay_table, simplify, ExpansionSpec,
    TransformError,
};
use bbsat_core::verdict::{Outcome, Verdict};

fn value_error(message: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(message.to_string())
}

/// A CNF formula over variables x0..x{n-1}.
#[pyclass(name = "Formula", skip_from_py_object)]
#[derive(Clone)]
struct PyFormula {
    inner: bbsat_core::model::Formula,
}

#[pymethods]
impl PyFormula {
    /// Parse DIMACS CNF text. Raises ValueError on syntax errors or when
    /// the text contains an empty clause (trivially unsatisfiable).
    #[staticmethod]
    fn from_dimacs(text: &str) -> PyResult<Self> {
        let doc = parse_dimacs(text).map_err(value_error)?;
        match doc.contents {
            DimacsContents::Formula(f) => Ok(PyFormula { inner: f }),
            DimacsContents::TriviallyUnsat { line } => Err(value_error(format!(
                "empty clause at line {line}: formula is trivially unsatisfiable"
            ))),
        }
    }

    /// Build from clause lists of signed 1-based literals,
    /// e.g. [[4, -3], [2, 1]].
    #[staticmethod]
    fn from_clauses(n: u32, clauses: Vec<Vec<i64>>) -> PyResult<Self> {
        let raw: Vec<Vec<(u32, bool)>> = clauses
            .iter()
            .map(|clause| {
                clause
                    .iter()
                    .map(|&lit| {
                        if lit == 0 {
                            Err(value_error("literal 0 is reserved"))
                        } else {
                            Ok(((lit.unsigned_abs() - 1) as u32, lit < 0))
                        }
                    })
                    .collect::<PyResult<Vec<_>>>()
            })
            .collect::<PyResult<Vec<_>>>()?;
        let inner =
            bbsat_core::model::Formula::from_raw_clauses(n, &raw).map_err(value_error)?;
        Ok(PyFormula { inner })
    }

    /// Seeded random CNF with clause widths in [width_min, width_max].
    #[staticmethod]
    #[pyo3(signature = (n, m, width_min=1, width_max=3, seed=0))]
    fn random(n: u32, m: usize, width_min: u32, width_max: u32, seed: u64) -> PyResult<Self> {
        let inner = gen_random_sat(n, m, width_min..=width_max, seed).map_err(value_error)?;
        Ok(PyFormula { inner })
    }

    /// Same-variable-set board whose solution set is exactly `solutions`.
    #[staticmethod]
    #[pyo3(signature = (n, solutions, seed=0, duplication=1))]
    fn extreme(n: u32, solutions: Vec<u64>, seed: u64, duplication: usize) -> PyResult<Self> {
        let inner = gen_extreme_ssat(n, &solutions, seed, duplication).map_err(value_error)?;
        Ok(PyFormula { inner })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn num_clauses(&self) -> usize {
        self.inner.num_clauses()
    }

    fn to_dimacs(&self) -> String {
        emit_dimacs(&self.inner)
    }

    /// Evaluate the formula at an assignment word (bit i = value of x_i).
    fn evaluate(&self, word: u64) -> bool {
        evaluate_circuit(&self.inner, &Assignment::from_word(self.inner.n(), word))
    }

    /// The bit-matching evaluation strategy; always equals `evaluate`.
    fn evaluate_matching(&self, word: u64) -> bool {
        evaluate_matching(&self.inner, &Assignment::from_word(self.inner.n(), word))
    }

    /// Exhaustive solve: all satisfying assignment words, sorted.
    fn brute_force(&self) -> PyResult<Vec<u64>> {
        Ok(brute_force_solve(&self.inner).map_err(value_error)?.words)
    }

    /// Solve with the chosen engine ("grouped", "random", or "race").
    #[pyo3(signature = (engine="race", seed=0, pair_budget=None, wmax=24, rmax=1_048_576, nmax=30))]
    fn solve(
        &self,
        engine: &str,
        seed: u64,
        pair_budget: Option<u64>,
        wmax: u32,
        rmax: usize,
        nmax: u32,
    ) -> PyResult<PyVerdict> {
        let grouped_config = GroupedConfig { max_group_width: wmax, max_relation_rows: rmax };
        let random_config = RandomConfig { seed, pair_budget, max_vars: nmax };
        match engine {
            "grouped" => Ok(PyVerdict::from_verdict(
                solve_grouped(&self.inner, &grouped_config),
                None,
            )),
            "random" => Ok(PyVerdict::from_verdict(
                solve_random(&self.inner, &random_config),
                None,
            )),
            "race" => {
                let config = RaceConfig { grouped: grouped_config, random: random_config };
                let result = solve_race(&self.inner, &config);
                let loser = Some(match &result.loser_state {
                    LoserState::Cancelled => "cancelled".to_string(),
                    LoserState::Finished(v) => format!("finished:{}", v.engine),
                    LoserState::NotStarted => "not-started".to_string(),
                });
                Ok(PyVerdict::from_verdict(result.verdict, loser))
            }
            other => Err(value_error(format!(
                "unknown engine `{other}` (expected grouped, random, or race)"
            ))),
        }
    }

    /// Widen every clause to the full variable range. Solution-preserving.
    fn expand_full_width(&self) -> PyResult<Self> {
        let inner = expand(&self.inner, &ExpansionSpec::full_width(self.inner.n()))
            .map_err(value_error)?;
        Ok(PyFormula { inner })
    }

    /// Factor complementary clause pairs to a fixed point. Returns None
    /// when simplification proves the formula unsatisfiable outright.
    fn simplify(&self) -> PyResult<Option<Self>> {
        match simplify(&self.inner) {
            Ok(inner) => Ok(Some(PyFormula { inner })),
            Err(TransformError::EmptyClauseProduced) => Ok(None),
            Err(other) => Err(value_error(other)),
        }
    }

    fn __repr__(&self) -> String {
        format!("Formula(n={}, clauses={})", self.inner.n(), self.inner.num_clauses())
    }
}

/// A solver verdict: status, witness, steps, engine, reason.
#[pyclass(name = "Verdict")]
struct PyVerdict {
    #[pyo3(get)]
    status: String,
    /// Satisfying assignment as an n-bit word, when status == "sat".
    #[pyo3(get)]
    witness: Option<u64>,
    #[pyo3(get)]
    steps: u64,
    #[pyo3(get)]
    engine: String,
    #[pyo3(get)]
    reason: Option<String>,
    /// For race verdicts: what happened to the losing lane.
    #[pyo3(get)]
    loser: Option<String>,
}

impl PyVerdict {
    fn from_verdict(v: Verdict, loser: Option<String>) -> Self {
        let status = match v.decisive() {
            Some(true) => "sat",
            Some(false) => "unsat",
            None => "indeterminate",
        };
        let reason = match &v.outcome {
            Outcome::Sat(_) => None,
            Outcome::Unsat(r) => Some(r.to_string()),
            Outcome::Indeterminate(r) => Some(r.to_string()),
        };
        PyVerdict {
            status: status.to_string(),
            witness: v.witness().map(|a| a.as_word()),
            steps: v.steps,
            engine: v.engine.as_str().to_string(),
            reason,
            loser,
        }
    }
}

#[pymethods]
impl PyVerdict {
    fn is_sat(&self) -> bool {
        self.status == "sat"
    }

    fn __repr__(&self) -> String {
        format!(
            "Verdict(status={}, engine={}, steps={}, witness={:?})",
            self.status, self.engine, self.steps, self.witness
        )
    }
}

/// Index of a variable subset under the cardinality-then-colex order.
#[pyfunction]
fn iv_rank(members: Vec<u32>, n: u32) -> PyResult<u64> {
    let set = VarSet::from_members(members.iter().copied());
    if !set.is_subset_of(&VarSet::full(n)) {
        return Err(value_error("subset members must lie in [0, n)"));
    }
    Ok(subset_index::iv_rank_fast(&set, n).0)
}

/// Inverse of `iv_rank`: members of the subset at `index`, ascending.
#[pyfunction]
fn iv_unrank(index: u64, n: u32) -> PyResult<Vec<u32>> {
    if n > 0 && index >= 1u64 << n {
        return Err(value_error("index out of range"));
    }
    Ok(subset_index::iv_unrank(subset_index::IvIndex(index), n)
        .members_ascending()
        .collect())
}

/// Selection-probability decay rows (f, p_inner, p_outer) as floats.
#[pyfunction]
fn prob_table(n: u32, f_max: u64) -> PyResult<Vec<(u64, f64, f64)>> {
    let rows = prob_decay_table(n, f_max).map_err(value_error)?;
    Ok(rows
        .iter()
        .map(|r| (r.f, r.p_inner_f64(), r.p_outer_f64()))
        .collect())
}

#[pymodule]
fn bbsat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyFormula>()?;
    m.add_class::<PyVerdict>()?;
    m.add_function(wrap_pyfunction!(iv_rank, m)?)?;
    m.add_function(wrap_pyfunction!(iv_unrank, m)?)?;
    m.add_function(wrap_pyfunction!(prob_table, m)?)?;
    Ok(())
}
