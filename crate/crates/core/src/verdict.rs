//! Solver verdicts shared by every engine: a decisive answer with witness
//! or reason, or an indeterminate outcome tied to a resource cap.

use std::fmt;

use crate::model::{Assignment, VarSet};

/// Which algorithm produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Grouped,
    Random,
    Race,
    Oracle,
    Ingest,
}

impl Engine {
    pub fn as_str(&self) -> &'static str {
        match self {
            Engine::Grouped => "grouped",
            Engine::Random => "random",
            Engine::Race => "race",
            Engine::Oracle => "oracle",
            Engine::Ingest => "ingest",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnsatReason {
    /// Some variable set received all 2^w distinct clause words.
    BlockedGroup(VarSet),
    /// The fold of all group relations came out empty.
    EmptyTheta,
    /// Every complement pair of the search space was tested.
    ExhaustedSpace,
    /// An empty clause arrived at ingestion.
    EmptyClauseAtIngest,
}

impl fmt::Display for UnsatReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnsatReason::BlockedGroup(vars) => write!(f, "blocked group over {vars}"),
            UnsatReason::EmptyTheta => write!(f, "group solutions are incompatible"),
            UnsatReason::ExhaustedSpace => write!(f, "search space exhausted"),
            UnsatReason::EmptyClauseAtIngest => write!(f, "empty clause at ingestion"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndeterminateReason {
    GroupTooWide { width: u32, max: u32 },
    RelationTooLarge { max: usize },
    FormulaTooWide { vars: u32, max: u32 },
    BudgetExhausted { pairs: u64 },
    /// Both race lanes gave up.
    BothLanes(Box<IndeterminateReason>, Box<IndeterminateReason>),
}

impl fmt::Display for IndeterminateReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndeterminateReason::GroupTooWide { width, max } => {
                write!(f, "group width {width} exceeds cap {max}")
            }
            IndeterminateReason::RelationTooLarge { max } => {
                write!(f, "join exceeds {max} rows")
            }
            IndeterminateReason::FormulaTooWide { vars, max } => {
                write!(f, "{vars} variables exceeds random-search cap {max}")
            }
            IndeterminateReason::BudgetExhausted { pairs } => {
                write!(f, "pair budget of {pairs} exhausted")
            }
            IndeterminateReason::BothLanes(a, b) => {
                write!(f, "grouped: {a}; random: {b}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Sat(Assignment),
    Unsat(UnsatReason),
    Indeterminate(IndeterminateReason),
}

/// An engine's answer plus its instrumentation: how many unit steps the
/// engine consumed (clause reads for the grouped engine, candidate pairs
/// for the random one) and which engine produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub steps: u64,
    pub engine: Engine,
}

impl Verdict {
    /// Sat/Unsat as a bit, None when indeterminate.
    pub fn decisive(&self) -> Option<bool> {
        match &self.outcome {
            Outcome::Sat(_) => Some(true),
            Outcome::Unsat(_) => Some(false),
            Outcome::Indeterminate(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&Assignment> {
        match &self.outcome {
            Outcome::Sat(a) => Some(a),
            _ => None,
        }
    }
}

/// Poll point for cooperative cancellation; engines check it once per
/// iteration granule.
pub trait Cancellation: Sync {
    fn is_cancelled(&self) -> bool;
}

/// The no-op token used outside of races.
pub struct NeverCancelled;

impl Cancellation for NeverCancelled {
    fn is_cancelled(&self) -> bool {
        false
    }
}

impl Cancellation for std::sync::atomic::AtomicBool {
    fn is_cancelled(&self) -> bool {
        self.load(std::sync::atomic::Ordering::Relaxed)
    }
}

/// Result of a cancellable engine run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngineOutcome {
    Finished(Verdict),
    /// The engine observed cancellation after `steps` iteration granules.
    Cancelled { steps: u64 },
}

impl EngineOutcome {
    pub fn into_verdict(self) -> Option<Verdict> {
        match self {
            EngineOutcome::Finished(v) => Some(v),
            EngineOutcome::Cancelled { .. } => None,
        }
    }
}
