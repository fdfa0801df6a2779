//! Rewrites connecting arbitrary CNF with same-variable-set boards, plus
//! instance generators and the selection-probability tables.
//!
//! Expansion applies (F) == (F|v) & (F|~v) until every clause covers the
//! target variable set; simplification is the inverse factorization,
//! folding clause pairs that differ in exactly one complementary literal.
//! Both preserve the solution set.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::join::{embed, DEFAULT_MAX_ROWS};
use crate::model::{
    translate, untranslate, BinaryClause, Clause, Formula, VarSet, MAX_VARS,
};

/// Variable cap for the extreme-board constructor (2^n clause words).
pub const EXTREME_MAX_VARS: u32 = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("clause {clause_index} would expand into {count} clauses (cap {max})")]
    ExpansionTooLarge { clause_index: usize, count: u64, max: usize },
    #[error("clause {clause_index} has variables outside the expansion target")]
    TargetDoesNotCover { clause_index: usize },
    #[error("simplification produced the empty clause: the formula is unsatisfiable")]
    EmptyClauseProduced,
    #[error("requested solutions contain the complementary pair {word} / {complement}")]
    BlockedPairRequested { word: u64, complement: u64 },
    #[error("{n} variables exceeds cap {max}")]
    TooManyVariables { n: u32, max: u32 },
    #[error("solution word {word} does not fit in {n} bits")]
    SolutionOutOfRange { word: u64, n: u32 },
    #[error("clause widths must lie within [1, n]")]
    InvalidWidthRange,
    #[error("f_max must stay below 2^(n-1) to keep denominators positive")]
    InvalidProbRange,
}

/// Target of an expansion: every clause is widened to exactly this set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionSpec {
    pub target_vars: VarSet,
    /// Cap on the 2^d clauses a single clause may expand into.
    pub max_expansion: usize,
}

impl ExpansionSpec {
    pub fn new(target_vars: VarSet) -> Self {
        ExpansionSpec { target_vars, max_expansion: DEFAULT_MAX_ROWS }
    }

    /// Expand to the full variable range of an n-variable formula.
    pub fn full_width(n: u32) -> Self {
        ExpansionSpec::new(VarSet::full(n))
    }
}

/// Replace every clause by the 2^d clauses over the target set (d missing
/// variables, both polarities each). Solution set is preserved.
pub fn expand(f: &Formula, spec: &ExpansionSpec) -> Result<Formula, TransformError> {
    let target = spec.target_vars;
    let mut clauses: Vec<Clause> = Vec::new();
    for (clause_index, clause) in f.clauses().iter().enumerate() {
        let bc = translate(clause);
        if !bc.vars.is_subset_of(&target) {
            return Err(TransformError::TargetDoesNotCover { clause_index });
        }
        let missing = VarSet::from_mask(target.mask() & !bc.vars.mask());
        let d = missing.width();
        let count = 1u64 << d;
        if count > spec.max_expansion as u64 {
            return Err(TransformError::ExpansionTooLarge {
                clause_index,
                count,
                max: spec.max_expansion,
            });
        }
        let base = embed(bc.bits, &bc.vars, &target);
        for pattern in 0..count {
            let bits = base | embed(pattern, &missing, &target);
            clauses.push(untranslate(&BinaryClause { vars: target, bits }));
        }
    }
    Ok(Formula::from_clauses(f.n(), clauses).expect("expansion stays in range"))
}

/// Strip bit `position` out of `word`, shifting the higher bits down.
fn drop_bit(word: u64, position: u32) -> u64 {
    let low = word & ((1u64 << position) - 1);
    let high = word >> (position + 1);
    low | (high << position)
}

/// Factor clause pairs that are identical except for one complementary
/// literal, repeatedly, to a fixed point. Buckets are keyed by variable
/// set and scanned in sorted (variable set, word) order, restarting after
/// each reduction. A pair that factors to nothing proves the formula
/// unsatisfiable and is surfaced as [`TransformError::EmptyClauseProduced`].
pub fn simplify(f: &Formula) -> Result<Formula, TransformError> {
    // word -> multiplicity per variable set
    let mut buckets: BTreeMap<VarSet, BTreeMap<u64, usize>> = BTreeMap::new();
    for clause in f.clauses() {
        let bc = translate(clause);
        *buckets.entry(bc.vars).or_default().entry(bc.bits).or_insert(0) += 1;
    }

    // first factorable pair of a bucket, if any: lowest word w1 with a
    // partner differing in exactly one (lowest) bit
    fn first_pair(words: &BTreeMap<u64, usize>, width: u32) -> Option<(u64, u32)> {
        words.keys().find_map(|&w1| {
            (0..width)
                .find(|&b| w1 & (1 << b) == 0 && words.contains_key(&(w1 | (1 << b))))
                .map(|b| (w1, b))
        })
    }

    // cache of each bucket's first pair, so a reduction only rescans the
    // buckets it touched
    let mut reducible: BTreeMap<VarSet, (u64, u32)> = BTreeMap::new();
    for (vars, words) in &buckets {
        if let Some(pair) = first_pair(words, vars.width()) {
            reducible.insert(*vars, pair);
        }
    }

    while let Some((&vars, &(w1, bit))) = reducible.iter().next() {
        let width = vars.width();
        let w2 = w1 | (1 << bit);
        {
            let words = buckets.get_mut(&vars).expect("reducible bucket exists");
            for w in [w1, w2] {
                match words.get_mut(&w) {
                    Some(count) if *count > 1 => *count -= 1,
                    Some(_) => {
                        words.remove(&w);
                    }
                    None => unreachable!("cached pair vanished"),
                }
            }
            if words.is_empty() {
                buckets.remove(&vars);
            }
        }

        if width == 1 {
            // factoring (v) & (~v): nothing remains
            return Err(TransformError::EmptyClauseProduced);
        }
        let dropped_var = vars
            .members_ascending()
            .nth(bit as usize)
            .expect("bit position maps to a member");
        let factor_vars = vars.remove(dropped_var);
        let factor_word = drop_bit(w1, bit);
        *buckets
            .entry(factor_vars)
            .or_default()
            .entry(factor_word)
            .or_insert(0) += 1;

        for touched in [vars, factor_vars] {
            match buckets.get(&touched) {
                Some(words) => match first_pair(words, touched.width()) {
                    Some(pair) => {
                        reducible.insert(touched, pair);
                    }
                    None => {
                        reducible.remove(&touched);
                    }
                },
                None => {
                    reducible.remove(&touched);
                }
            }
        }
    }

    let mut clauses = Vec::new();
    for (vars, words) in &buckets {
        for (&bits, &count) in words {
            for _ in 0..count {
                clauses.push(untranslate(&BinaryClause { vars: *vars, bits }));
            }
        }
    }
    let mut out = Formula::from_clauses(f.n(), clauses)
        .unwrap_or_else(|_| unreachable!("simplification stays in range"));
    out.set_stats(f.stats());
    Ok(out)
}

/// Build the board whose solution set is exactly `solutions`: clause words
/// are everything except the requested solutions and their complements,
/// plus the solution words themselves. Rows are replicated `duplication`
/// times and shuffled by `seed`.
pub fn gen_extreme_ssat(
    n: u32,
    solutions: &[u64],
    seed: u64,
    duplication: usize,
) -> Result<Formula, TransformError> {
    if n == 0 || n > EXTREME_MAX_VARS {
        return Err(TransformError::TooManyVariables { n, max: EXTREME_MAX_VARS });
    }
    let space = 1u64 << n;
    let mut excluded = std::collections::HashSet::with_capacity(solutions.len() * 2);
    for &s in solutions {
        if s >= space {
            return Err(TransformError::SolutionOutOfRange { word: s, n });
        }
        let comp = crate::model::complement(s, n);
        if solutions.contains(&comp) {
            return Err(TransformError::BlockedPairRequested { word: s.min(comp), complement: s.max(comp) });
        }
        excluded.insert(s);
        excluded.insert(comp);
    }

    let mut words: Vec<u64> = (0..space).filter(|w| !excluded.contains(w)).collect();
    let mut sorted_solutions = solutions.to_vec();
    sorted_solutions.sort_unstable();
    words.extend_from_slice(&sorted_solutions);

    let mut rows: Vec<u64> = Vec::with_capacity(words.len() * duplication.max(1));
    for _ in 0..duplication.max(1) {
        rows.extend_from_slice(&words);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rows.shuffle(&mut rng);

    let vars = VarSet::full(n);
    let clauses = rows
        .into_iter()
        .map(|bits| untranslate(&BinaryClause { vars, bits }))
        .collect();
    Ok(Formula::from_clauses(n, clauses).expect("board stays in range"))
}

/// Seeded random CNF: clause widths drawn uniformly from `widths`,
/// variables sampled without replacement per clause, polarities uniform.
pub fn gen_random_sat(
    n: u32,
    m: usize,
    widths: RangeInclusive<u32>,
    seed: u64,
) -> Result<Formula, TransformError> {
    if n > MAX_VARS {
        return Err(TransformError::TooManyVariables { n, max: MAX_VARS });
    }
    let (lo, hi) = (*widths.start(), *widths.end());
    if lo < 1 || hi > n || lo > hi {
        return Err(TransformError::InvalidWidthRange);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw: Vec<Vec<(u32, bool)>> = Vec::with_capacity(m);
    for _ in 0..m {
        let w = rng.random_range(lo..=hi) as usize;
        let vars = rand::seq::index::sample(&mut rng, n as usize, w);
        let clause = vars
            .iter()
            .map(|v| (v as u32, rng.random_bool(0.5)))
            .collect();
        raw.push(clause);
    }
    Ok(Formula::from_raw_clauses(n, &raw).expect("sampled clauses are in range"))
}

/// One row of the selection-probability table: after testing f candidates,
/// the chance that the next pick is the unique solution, for the
/// inner (clause-word) and outside (search-space) candidate sources.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbRow {
    pub f: u64,
    pub p_inner: BigRational,
    pub p_outer: BigRational,
}

impl ProbRow {
    pub fn p_inner_f64(&self) -> f64 {
        self.p_inner.to_f64().unwrap_or(0.0)
    }

    pub fn p_outer_f64(&self) -> f64 {
        self.p_outer.to_f64().unwrap_or(0.0)
    }
}

/// Exact table of 1/((2^n - 2f) * 2^n) and 1/((2^n - f) * 2^n) for
/// f = 0..=f_max.
pub fn prob_decay_table(n: u32, f_max: u64) -> Result<Vec<ProbRow>, TransformError> {
    if n == 0 || (n <= 63 && f_max >= 1u64 << (n - 1)) {
        return Err(TransformError::InvalidProbRange);
    }
    let space = BigInt::one() << n;
    let rows = (0..=f_max)
        .map(|f| {
            let f_big = BigInt::from(f);
            let inner_den = (&space - 2 * &f_big) * &space;
            let outer_den = (&space - &f_big) * &space;
            ProbRow {
                f,
                p_inner: BigRational::new(BigInt::one(), inner_den),
                p_outer: BigRational::new(BigInt::one(), outer_den),
            }
        })
        .collect();
    Ok(rows)
}

/// Render a positive rational in scientific notation with `sig` significant
/// digits; exact rationals can be far below the smallest subnormal float.
pub fn decimal_string(value: &BigRational, sig: usize) -> String {
    assert!(sig >= 1);
    if value.is_zero() {
        return "0".to_string();
    }
    debug_assert!(value > &BigRational::zero());
    let num = value.numer();
    let den = value.denom();
    let num_digits = num.to_string().len() as i64;
    let den_digits = den.to_string().len() as i64;

    // scale so the integer quotient carries at least sig+1 digits
    let shift = sig as i64 + 1 + den_digits - num_digits + 1;
    let scaled: BigInt = if shift >= 0 {
        (num * BigInt::from(10u32).pow(shift as u32)) / den
    } else {
        num / (den * BigInt::from(10u32).pow((-shift) as u32))
    };
    let mut digits = scaled.to_string();
    let mut exponent = digits.len() as i64 - 1 - shift;

    // round to sig digits
    if digits.len() > sig {
        let round_up = digits.as_bytes()[sig] >= b'5';
        digits.truncate(sig);
        if round_up {
            let mut bytes = digits.into_bytes();
            let mut i = bytes.len();
            loop {
                if i == 0 {
                    bytes.insert(0, b'1');
                    exponent += 1;
                    break;
                }
                i -= 1;
                if bytes[i] == b'9' {
                    bytes[i] = b'0';
                } else {
                    bytes[i] += 1;
                    break;
                }
            }
            bytes.truncate(sig);
            digits = String::from_utf8(bytes).expect("ascii digits");
        }
    }
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    if digits.len() == 1 {
        format!("{}e{}", digits, exponent)
    } else {
        format!("{}.{}e{}", &digits[..1], &digits[1..], exponent)
    }
}
