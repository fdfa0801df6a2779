//! Run the grouped and random engines on the same formula in parallel.
//! The first decisive verdict wins and cancels the other lane; an
//! indeterminate lane never wins while the other can still decide.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::OnceLock;
use std::thread;
use std::time::{Duration, Instant};

use crate::grouped::{solve_grouped_cancellable, GroupedConfig};
use crate::model::Formula;
use crate::random::{solve_random_cancellable, RandomConfig};
use crate::verdict::{Engine, EngineOutcome, IndeterminateReason, Outcome, Verdict};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RaceConfig {
    pub grouped: GroupedConfig,
    pub random: RandomConfig,
}

/// What happened to the lane that did not produce the returned verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum LoserState {
    Cancelled,
    Finished(Verdict),
    NotStarted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RaceResult {
    pub verdict: Verdict,
    pub winner: Engine,
    pub loser_state: LoserState,
    pub wall_time: Duration,
}

pub fn solve_race(f: &Formula, config: &RaceConfig) -> RaceResult {
    let start = Instant::now();
    let cancel_grouped = AtomicBool::new(false);
    let cancel_random = AtomicBool::new(false);
    let first_decisive: OnceLock<Engine> = OnceLock::new();

    let (grouped_out, random_out) = thread::scope(|scope| {
        let grouped_handle = scope.spawn(|| {
            let out = solve_grouped_cancellable(f, &config.grouped, &cancel_grouped);
            if decisive(&out) && first_decisive.set(Engine::Grouped).is_ok() {
                cancel_random.store(true, Ordering::Relaxed);
            }
            out
        });
        let random_handle = scope.spawn(|| {
            let out = solve_random_cancellable(f, &config.random, &cancel_random);
            if decisive(&out) && first_decisive.set(Engine::Random).is_ok() {
                cancel_grouped.store(true, Ordering::Relaxed);
            }
            out
        });
        (
            grouped_handle.join().expect("grouped lane panicked"),
            random_handle.join().expect("random lane panicked"),
        )
    });

    let wall_time = start.elapsed();

    if let (EngineOutcome::Finished(g), EngineOutcome::Finished(r)) = (&grouped_out, &random_out) {
        if let (Some(gb), Some(rb)) = (g.decisive(), r.decisive()) {
            debug_assert_eq!(gb, rb, "race lanes disagree on the verdict bit");
        }
    }

    match first_decisive.get().copied() {
        Some(Engine::Grouped) => RaceResult {
            verdict: expect_finished(grouped_out),
            winner: Engine::Grouped,
            loser_state: loser_state_of(random_out),
            wall_time,
        },
        Some(Engine::Random) => RaceResult {
            verdict: expect_finished(random_out),
            winner: Engine::Random,
            loser_state: loser_state_of(grouped_out),
            wall_time,
        },
        _ => {
            // no decisive lane: both ran to completion indeterminate
            let g = expect_finished(grouped_out);
            let r = expect_finished(random_out);
            let reason = IndeterminateReason::BothLanes(
                Box::new(expect_indeterminate(&g)),
                Box::new(expect_indeterminate(&r)),
            );
            RaceResult {
                verdict: Verdict {
                    outcome: Outcome::Indeterminate(reason),
                    steps: g.steps + r.steps,
                    engine: Engine::Race,
                },
                winner: Engine::Race,
                loser_state: LoserState::Finished(r),
                wall_time,
            }
        }
    }
}

fn decisive(out: &EngineOutcome) -> bool {
    matches!(out, EngineOutcome::Finished(v) if v.decisive().is_some())
}

fn expect_finished(out: EngineOutcome) -> Verdict {
    match out {
        EngineOutcome::Finished(v) => v,
        EngineOutcome::Cancelled { .. } => {
            unreachable!("cancelled lane treated as finished")
        }
    }
}

fn expect_indeterminate(v: &Verdict) -> IndeterminateReason {
    match &v.outcome {
        Outcome::Indeterminate(r) => r.clone(),
        other => unreachable!("expected indeterminate outcome, got {other:?}"),
    }
}

fn loser_state_of(out: EngineOutcome) -> LoserState {
    match out {
        EngineOutcome::Cancelled { .. } => LoserState::Cancelled,
        EngineOutcome::Finished(v) => LoserState::Finished(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_solve, evaluate_circuit};
    use crate::testkit::{formula, phi1, phi3};
    use crate::verdict::{Cancellation, UnsatReason};

    #[test]
    fn sat_race_agrees_with_both_engines() {
        let f = phi1();
        let result = solve_race(&f, &RaceConfig::default());
        assert_eq!(result.verdict.decisive(), Some(true));
        assert!(evaluate_circuit(&f, result.verdict.witness().unwrap()));
        if let LoserState::Finished(v) = &result.loser_state {
            assert_eq!(v.decisive(), Some(true));
        }
    }

    #[test]
    fn unsat_race() {
        let result = solve_race(&phi3(), &RaceConfig::default());
        assert_eq!(result.verdict.decisive(), Some(false));
    }

    #[test]
    fn grouped_cap_falls_back_to_random() {
        // one clause wider than the group cap: the grouped lane is
        // indeterminate and the random lane decides
        let raw: Vec<(u32, bool)> = (0..26).map(|v| (v, false)).collect();
        let f = crate::model::Formula::from_raw_clauses(26, &[raw]).unwrap();
        let result = solve_race(&f, &RaceConfig::default());
        assert_eq!(result.winner, Engine::Random);
        assert_eq!(result.verdict.decisive(), Some(true));
        assert!(evaluate_circuit(&f, result.verdict.witness().unwrap()));
    }

    #[test]
    fn both_lanes_indeterminate() {
        let raw: Vec<(u32, bool)> = (0..26).map(|v| (v, false)).collect();
        let f = crate::model::Formula::from_raw_clauses(26, &[raw]).unwrap();
        let config = RaceConfig {
            random: RandomConfig { max_vars: 10, ..Default::default() },
            ..Default::default()
        };
        let result = solve_race(&f, &config);
        assert_eq!(result.verdict.decisive(), None);
        assert!(matches!(
            result.verdict.outcome,
            Outcome::Indeterminate(IndeterminateReason::BothLanes(_, _))
        ));
    }

    #[test]
    fn verdict_bit_deterministic_for_fixed_seeds() {
        for seed in 0..30u64 {
            let n = 2 + (seed % 7) as u32;
            let f = crate::transform::gen_random_sat(n, 12, 1..=3.min(n), seed).unwrap();
            let config = RaceConfig {
                random: RandomConfig::with_seed(seed),
                ..Default::default()
            };
            let first = solve_race(&f, &config).verdict.decisive();
            let second = solve_race(&f, &config).verdict.decisive();
            assert_eq!(first, second, "seed {seed}");
            let expected = !brute_force_solve(&f).unwrap().is_empty();
            assert_eq!(first, Some(expected), "seed {seed}");
        }
    }

    /// A token that reports cancellation only after `fire_after` polls,
    /// counting every poll: lets tests pin down observation latency.
    struct CountingToken {
        polls: std::sync::atomic::AtomicU64,
        fire_after: u64,
    }

    impl Cancellation for CountingToken {
        fn is_cancelled(&self) -> bool {
            let seen = self.polls.fetch_add(1, Ordering::Relaxed);
            seen >= self.fire_after
        }
    }

    #[test]
    fn random_lane_observes_cancellation_within_one_pair() {
        let f = crate::transform::gen_extreme_ssat(10, &[], 0, 1).unwrap();
        let token = CountingToken { polls: 0.into(), fire_after: 5 };
        let out = solve_random_cancellable(&f, &RandomConfig::default(), &token);
        match out {
            EngineOutcome::Cancelled { steps } => assert!(steps <= 5),
            other => panic!("expected cancellation, got {other:?}"),
        }
    }

    #[test]
    fn grouped_lane_observes_cancellation_within_one_ingest() {
        let f = crate::transform::gen_extreme_ssat(8, &[], 0, 4).unwrap();
        let token = CountingToken { polls: 0.into(), fire_after: 3 };
        let out = solve_grouped_cancellable(&f, &GroupedConfig::default(), &token);
        match out {
            EngineOutcome::Cancelled { steps } => assert!(steps <= 3),
            other => panic!("expected cancellation, got {other:?}"),
        }
    }

    #[test]
    fn trivially_unsat_pair_loses_to_someone() {
        let f = formula(1, &[&[(0, false)], &[(0, true)]]);
        let result = solve_race(&f, &RaceConfig::default());
        assert_eq!(
            result.verdict.decisive(),
            Some(false),
            "both lanes prove unsat"
        );
        assert!(matches!(
            result.verdict.outcome,
            Outcome::Unsat(UnsatReason::ExhaustedSpace | UnsatReason::BlockedGroup(_))
        ));
    }
}
