//! Ground truth: direct clause evaluation, the bit-matching evaluation
//! strategy, and exhaustive enumeration. Not competitive, just correct.

use thiserror::Error;

use crate::model::{complement, translate, Assignment, Formula};

/// Enumeration cap. 2^24 evaluations is the desk-scale limit.
pub const BRUTE_FORCE_MAX_VARS: u32 = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{n} variables exceeds the exhaustive-enumeration cap of {BRUTE_FORCE_MAX_VARS}")]
    TooLarge { n: u32 },
}

/// All satisfying assignments of a formula, as sorted n-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub n: u32,
    pub words: Vec<u64>,
}

impl SolutionSet {
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: u64) -> bool {
        self.words.binary_search(&word).is_ok()
    }

    /// Project every solution onto a variable subset, deduplicated.
    pub fn project(&self, vars: &crate::model::VarSet) -> Vec<u64> {
        let mut rows: Vec<u64> = self
            .words
            .iter()
            .map(|&w| Assignment::from_word(self.n, w).restrict(vars))
            .collect();
        rows.sort_unstable();
        rows.dedup();
        rows
    }
}

/// True iff every clause has at least one literal satisfied by `a`.
pub fn evaluate_circuit(f: &Formula, a: &Assignment) -> bool {
    debug_assert_eq!(a.n(), f.n());
    f.clauses()
        .iter()
        .all(|c| c.literals().iter().any(|l| a.value(l.var) != l.negated))
}

/// Equivalent strategy at the bit level: `a` satisfies the formula iff for
/// every clause, the restriction of `a` to the clause's variables differs
/// from the complement of the clause word.
pub fn evaluate_matching(f: &Formula, a: &Assignment) -> bool {
    debug_assert_eq!(a.n(), f.n());
    f.clauses().iter().all(|c| {
        let bc = translate(c);
        a.restrict(&bc.vars) != complement(bc.bits, bc.vars.width())
    })
}

/// Exhaustive solve by testing every word in [0, 2^n - 1].
pub fn brute_force_solve(f: &Formula) -> Result<SolutionSet, OracleError> {
    let n = f.n();
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(OracleError::TooLarge { n });
    }
    let words = (0..(1u64 << n))
        .filter(|&w| evaluate_circuit(f, &Assignment::from_word(n, w)))
        .collect();
    Ok(SolutionSet { n, words })
}
