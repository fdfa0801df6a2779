//! The grouped solver: stream clauses once, route each to the survivor
//! table of its variable set, stop the moment any table blocks, then fold
//! the group relations into the global solution relation and read off a
//! witness.

use std::collections::HashMap;

use crate::join::{self, JoinError, SolutionRelation};
use crate::model::{translate, BinaryClause, Formula};
use crate::ssat::{GroupError, IngestStatus, SsatGroup, DEFAULT_MAX_GROUP_WIDTH};
use crate::subset_index::{iv_rank_fast_with, BinomialTable, IvIndex};
use crate::verdict::{
    Cancellation, Engine, EngineOutcome, IndeterminateReason, NeverCancelled, Outcome,
    UnsatReason, Verdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupedConfig {
    /// Widest variable set a group may cover (table is 2^w entries).
    pub max_group_width: u32,
    /// Row cap for materialized join results.
    pub max_relation_rows: usize,
}

impl Default for GroupedConfig {
    fn default() -> Self {
        GroupedConfig {
            max_group_width: DEFAULT_MAX_GROUP_WIDTH,
            max_relation_rows: join::DEFAULT_MAX_ROWS,
        }
    }
}

/// Per-group statistics reported alongside the verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStats {
    pub index: IvIndex,
    pub vars: crate::model::VarSet,
    pub clause_words: u64,
    pub survivors: u64,
}

/// Route every clause to its subset index and binary word, in clause order.
pub fn clause_router(f: &Formula) -> impl Iterator<Item = (IvIndex, BinaryClause)> + '_ {
    let table = BinomialTable::new(f.n());
    f.clauses().iter().map(move |c| {
        let bc = translate(c);
        (iv_rank_fast_with(&bc.vars, &table), bc)
    })
}

pub fn solve_grouped(f: &Formula, config: &GroupedConfig) -> Verdict {
    match solve_grouped_cancellable(f, config, &NeverCancelled) {
        EngineOutcome::Finished(v) => v,
        EngineOutcome::Cancelled { .. } => unreachable!("never-cancelled run was cancelled"),
    }
}

/// As [`solve_grouped`] but polling `cancel` once per clause ingestion.
pub fn solve_grouped_cancellable(
    f: &Formula,
    config: &GroupedConfig,
    cancel: &dyn Cancellation,
) -> EngineOutcome {
    let (outcome, _) = run_grouped(f, config, cancel);
    outcome
}

/// Full run, also reporting per-group statistics for diagnostics.
pub fn solve_grouped_with_stats(
    f: &Formula,
    config: &GroupedConfig,
) -> (Verdict, Vec<GroupStats>) {
    let (outcome, stats) = run_grouped(f, config, &NeverCancelled);
    match outcome {
        EngineOutcome::Finished(v) => (v, stats),
        EngineOutcome::Cancelled { .. } => unreachable!("never-cancelled run was cancelled"),
    }
}

fn run_grouped(
    f: &Formula,
    config: &GroupedConfig,
    cancel: &dyn Cancellation,
) -> (EngineOutcome, Vec<GroupStats>) {
    let mut groups: HashMap<IvIndex, SsatGroup> = HashMap::new();
    let mut clause_reads: u64 = 0;

    let finish = |outcome: Outcome, steps: u64| {
        EngineOutcome::Finished(Verdict { outcome, steps, engine: Engine::Grouped })
    };
    let collect_stats = |groups: &HashMap<IvIndex, SsatGroup>| {
        let mut stats: Vec<GroupStats> = groups
            .iter()
            .map(|(&index, g)| GroupStats {
                index,
                vars: *g.vars(),
                clause_words: g.removed_count(),
                survivors: g.survivor_count(),
            })
            .collect();
        stats.sort_by_key(|s| s.index);
        stats
    };

    for (index, bc) in clause_router(f) {
        if cancel.is_cancelled() {
            return (EngineOutcome::Cancelled { steps: clause_reads }, collect_stats(&groups));
        }
        clause_reads += 1;
        let group = match groups.entry(index) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => {
                match SsatGroup::new(bc.vars, config.max_group_width) {
                    Ok(g) => e.insert(g),
                    Err(GroupError::GroupTooWide { width, max }) => {
                        let reason = IndeterminateReason::GroupTooWide { width, max };
                        return (
                            finish(Outcome::Indeterminate(reason), clause_reads),
                            collect_stats(&groups),
                        );
                    }
                    Err(other) => unreachable!("fresh group construction failed: {other}"),
                }
            }
        };
        match group.ingest(&bc) {
            Ok(IngestStatus::Blocked) => {
                let vars = *group.vars();
                let stats = collect_stats(&groups);
                return (finish(Outcome::Unsat(UnsatReason::BlockedGroup(vars)), clause_reads), stats);
            }
            Ok(_) => {}
            Err(e) => unreachable!("router sent clause to wrong group: {e}"),
        }
    }

    let stats = collect_stats(&groups);

    // deterministic group order for the fold
    let mut relations: Vec<SolutionRelation> = Vec::with_capacity(groups.len());
    let mut ordered: Vec<(&IvIndex, &SsatGroup)> = groups.iter().collect();
    ordered.sort_by_key(|(ix, _)| **ix);
    for (_, g) in &ordered {
        relations.push(g.survivors().expect("unblocked group has survivors"));
    }

    // cheap incompatibility certificates between unique-solution groups
    let singletons: Vec<&SolutionRelation> =
        relations.iter().filter(|r| r.len() == 1).collect();
    for (i, a) in singletons.iter().enumerate() {
        for b in &singletons[i + 1..] {
            if let Ok(true) = join::pairwise_incompatible(a, b) {
                return (finish(Outcome::Unsat(UnsatReason::EmptyTheta), clause_reads), stats);
            }
        }
    }

    match join::fold_theta(&relations, config.max_relation_rows) {
        Ok(theta) => {
            if theta.is_empty() {
                (finish(Outcome::Unsat(UnsatReason::EmptyTheta), clause_reads), stats)
            } else {
                let witness = join::assemble_witness(theta.vars(), theta.rows()[0], f.n());
                debug_assert!(crate::oracle::evaluate_circuit(f, &witness));
                (finish(Outcome::Sat(witness), clause_reads), stats)
            }
        }
        Err(JoinError::RelationTooLarge { max }) => {
            let reason = IndeterminateReason::RelationTooLarge { max };
            (finish(Outcome::Indeterminate(reason), clause_reads), stats)
        }
        Err(JoinError::Inapplicable(msg)) => unreachable!("fold_theta: {msg}"),
    }
}
