//! Randomized search over the half space [0, 2^(n-1) - 1] without
//! replacement: each candidate and its bitwise complement are tested as a
//! pair, so the pairs cover [0, 2^n - 1] exactly once and the whole space
//! is decided in at most 2^(n-1) steps.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{complement, Assignment, Formula};
use crate::oracle::evaluate_circuit;
use crate::verdict::{
    Cancellation, Engine, EngineOutcome, IndeterminateReason, NeverCancelled, Outcome,
    UnsatReason, Verdict,
};

/// Default variable cap: beyond this, 2^(n-1) evaluations is not desk scale.
pub const DEFAULT_MAX_SEARCH_VARS: u32 = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomConfig {
    pub seed: u64,
    /// Give up (indeterminate) after this many candidate pairs.
    pub pair_budget: Option<u64>,
    pub max_vars: u32,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig { seed: 0, pair_budget: None, max_vars: DEFAULT_MAX_SEARCH_VARS }
    }
}

impl RandomConfig {
    pub fn with_seed(seed: u64) -> Self {
        RandomConfig { seed, ..RandomConfig::default() }
    }
}

/// A uniform random permutation of [0, domain), emitted lazily: a sparse
/// inside-out shuffle keeps only the displaced entries, so memory grows
/// with the number of values consumed rather than with the domain.
#[derive(Debug, Clone)]
pub struct LazyPermutation {
    domain: u64,
    cursor: u64,
    displaced: HashMap<u64, u64>,
    rng: ChaCha8Rng,
}

impl LazyPermutation {
    pub fn new(domain: u64, seed: u64) -> Self {
        LazyPermutation {
            domain,
            cursor: 0,
            displaced: HashMap::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn emitted(&self) -> u64 {
        self.cursor
    }

    /// Next element of the permutation, or None once the domain is spent.
    pub fn next_candidate(&mut self) -> Option<u64> {
        if self.cursor >= self.domain {
            return None;
        }
        let i = self.cursor;
        // unbiased draw on [i, domain), identity swap allowed
        let j = self.rng.random_range(i..self.domain);
        let value_at_i = self.displaced.remove(&i).unwrap_or(i);
        let out = if j == i {
            value_at_i
        } else {
            self.displaced.insert(j, value_at_i).unwrap_or(j)
        };
        self.cursor += 1;
        Some(out)
    }
}

pub fn solve_random(f: &Formula, config: &RandomConfig) -> Verdict {
    match solve_random_cancellable(f, config, &NeverCancelled) {
        EngineOutcome::Finished(v) => v,
        EngineOutcome::Cancelled { .. } => unreachable!("never-cancelled run was cancelled"),
    }
}

/// As [`solve_random`] but polling `cancel` once per candidate pair.
pub fn solve_random_cancellable(
    f: &Formula,
    config: &RandomConfig,
    cancel: &dyn Cancellation,
) -> EngineOutcome {
    let n = f.n();
    let finish = |outcome: Outcome, steps: u64| {
        EngineOutcome::Finished(Verdict { outcome, steps, engine: Engine::Random })
    };
    if n > config.max_vars {
        let reason = IndeterminateReason::FormulaTooWide { vars: n, max: config.max_vars };
        return finish(Outcome::Indeterminate(reason), 0);
    }
    if n == 0 {
        // no variables: the empty assignment decides the (clause-free) formula
        let a = Assignment::from_word(0, 0);
        return if evaluate_circuit(f, &a) {
            finish(Outcome::Sat(a), 0)
        } else {
            finish(Outcome::Unsat(UnsatReason::ExhaustedSpace), 0)
        };
    }

    let mut permutation = LazyPermutation::new(1u64 << (n - 1), config.seed);
    let mut pairs: u64 = 0;
    loop {
        if cancel.is_cancelled() {
            return EngineOutcome::Cancelled { steps: pairs };
        }
        if let Some(budget) = config.pair_budget {
            if pairs >= budget && permutation.emitted() < permutation.domain {
                let reason = IndeterminateReason::BudgetExhausted { pairs };
                return finish(Outcome::Indeterminate(reason), pairs);
            }
        }
        let candidate = match permutation.next_candidate() {
            Some(c) => c,
            None => return finish(Outcome::Unsat(UnsatReason::ExhaustedSpace), pairs),
        };
        pairs += 1;
        // the candidate keeps the top bit 0; its complement covers the
        // other half of the space
        let low = Assignment::from_word(n, candidate);
        if evaluate_circuit(f, &low) {
            return finish(Outcome::Sat(low), pairs);
        }
        let high = Assignment::from_word(n, complement(candidate, n));
        if evaluate_circuit(f, &high) {
            return finish(Outcome::Sat(high), pairs);
        }
    }
}

/// Convenience entry matching the CLI surface.
pub fn solve_random_seeded(f: &Formula, seed: u64, pair_budget: Option<u64>) -> Verdict {
    solve_random(f, &RandomConfig { seed, pair_budget, ..RandomConfig::default() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::formula;

    #[test]
    fn singleton_domain() {
        let mut p = LazyPermutation::new(1, 42);
        assert_eq!(p.next_candidate(), Some(0));
        assert_eq!(p.next_candidate(), None);
    }

    #[test]
    fn emissions_form_a_permutation() {
        for seed in [0u64, 1, 7, 99] {
            let mut p = LazyPermutation::new(8, seed);
            let mut got: Vec<u64> = std::iter::from_fn(|| p.next_candidate()).collect();
            got.sort_unstable();
            assert_eq!(got, (0..8).collect::<Vec<_>>(), "seed {seed}");
        }
    }

    #[test]
    fn equal_seeds_emit_identical_sequences() {
        let mut a = LazyPermutation::new(64, 1234);
        let mut b = LazyPermutation::new(64, 1234);
        for _ in 0..64 {
            assert_eq!(a.next_candidate(), b.next_candidate());
        }
    }

    #[test]
    fn pairs_partition_the_space() {
        for n in 1..=12u32 {
            let mut p = LazyPermutation::new(1u64 << (n - 1), 7);
            let mut seen = vec![false; 1 << n];
            while let Some(v) = p.next_candidate() {
                for word in [v, complement(v, n)] {
                    assert!(!seen[word as usize], "n={n} word {word} repeated");
                    seen[word as usize] = true;
                }
            }
            assert!(seen.iter().all(|&s| s), "n={n} coverage gap");
        }
    }

    #[test]
    fn contradiction_unsat_in_one_pair() {
        let f = formula(1, &[&[(0, false)], &[(0, true)]]);
        let v = solve_random_seeded(&f, 3, None);
        assert_eq!(v.outcome, Outcome::Unsat(UnsatReason::ExhaustedSpace));
        assert_eq!(v.steps, 1);
    }

    #[test]
    fn empty_formula_first_candidate() {
        let f = formula(3, &[]);
        let v = solve_random_seeded(&f, 5, None);
        assert_eq!(v.decisive(), Some(true));
        assert_eq!(v.steps, 1);
    }

    #[test]
    fn worked_six_variable_instance() {
        // rows 000000, 000001, 111110, 011011; candidate 000000 is open
        // because 111111 is not a clause word
        let f = formula(
            6,
            &[
                &[(5, true), (4, true), (3, true), (2, true), (1, true), (0, true)],
                &[(5, true), (4, true), (3, true), (2, true), (1, true), (0, false)],
                &[(5, false), (4, false), (3, false), (2, false), (1, false), (0, true)],
                &[(5, true), (4, false), (3, false), (2, true), (1, false), (0, false)],
            ],
        );
        assert!(evaluate_circuit(&f, &Assignment::from_word(6, 0)));
        let v = solve_random_seeded(&f, 11, None);
        assert_eq!(v.decisive(), Some(true));
        assert!(evaluate_circuit(&f, v.witness().unwrap()));
    }

    #[test]
    fn step_bound_holds() {
        for seed in 0..20u64 {
            let f = crate::transform::gen_extreme_ssat(6, &[], seed, 1).unwrap();
            let v = solve_random_seeded(&f, seed, None);
            assert_eq!(v.outcome, Outcome::Unsat(UnsatReason::ExhaustedSpace));
            assert_eq!(v.steps, 1 << 5);
        }
    }

    #[test]
    fn budget_exhaustion_is_indeterminate() {
        let f = crate::transform::gen_extreme_ssat(8, &[], 1, 1).unwrap();
        let config = RandomConfig { seed: 1, pair_budget: Some(10), ..Default::default() };
        let v = solve_random(&f, &config);
        assert_eq!(
            v.outcome,
            Outcome::Indeterminate(IndeterminateReason::BudgetExhausted { pairs: 10 })
        );
        assert_eq!(v.steps, 10);
    }

    #[test]
    fn too_many_vars_is_indeterminate() {
        let f = formula(4, &[&[(0, false)]]);
        let config = RandomConfig { max_vars: 3, ..Default::default() };
        let v = solve_random(&f, &config);
        assert_eq!(
            v.outcome,
            Outcome::Indeterminate(IndeterminateReason::FormulaTooWide { vars: 4, max: 3 })
        );
    }

    #[test]
    fn first_emission_roughly_uniform() {
        // seeded smoke test: over 10k seeds, n=4, the first emission is
        // within 5% relative of uniform over the 8 half-space values
        let trials = 10_000u64;
        let mut counts = [0u64; 8];
        for seed in 0..trials {
            let mut p = LazyPermutation::new(8, seed);
            counts[p.next_candidate().unwrap() as usize] += 1;
        }
        let expected = trials as f64 / 8.0;
        for (value, &count) in counts.iter().enumerate() {
            let deviation = (count as f64 - expected).abs() / expected;
            assert!(deviation < 0.05, "value {value}: count {count}, deviation {deviation:.4}");
        }
    }
}
