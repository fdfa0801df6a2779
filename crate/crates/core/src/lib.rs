//! bbsat: a SAT toolkit built on binary clause words.
//!
//! Clauses translate to polarity words over their variable sets. Clauses
//! sharing a variable set feed one survivor table, where each clause word
//! eliminates the single candidate that falsifies it; a table with no
//! survivors proves unsatisfiability on its own. Group relations combine
//! through a cross/natural join into the global solution relation. A
//! second engine races the first: a seeded, without-replacement scan of
//! the half space that tests each candidate together with its bitwise
//! complement, covering all 2^n assignments in at most 2^(n-1) pairs.
//! A brute-force oracle backs everything for verification.

pub mod dimacs;
pub mod grouped;
pub mod join;
pub mod model;
pub mod oracle;
pub mod race;
pub mod random;
pub mod ssat;
pub mod subset_index;
pub mod testkit;
pub mod transform;
pub mod verdict;

pub use grouped::{clause_router, solve_grouped, GroupedConfig};
pub use model::{Assignment, BinaryClause, Clause, Formula, Literal, VarSet};
pub use oracle::{brute_force_solve, evaluate_circuit, evaluate_matching, SolutionSet};
pub use race::{solve_race, RaceConfig, RaceResult};
pub use random::{solve_random, LazyPermutation, RandomConfig};
pub use ssat::{IngestStatus, SsatGroup};
pub use subset_index::{iv_rank_fast, iv_rank_paper, iv_unrank, IvIndex};
pub use verdict::{Engine, Outcome, Verdict};
