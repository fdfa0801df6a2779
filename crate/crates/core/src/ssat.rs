//! Per-variable-set survivor tables. Each group covers one variable set of
//! width w and starts with all 2^w candidate words present; ingesting a
//! clause removes the clause word's complement (the one assignment pattern
//! that falsifies it). A group with no survivors left is a blocked board:
//! the whole formula is unsatisfiable.

use thiserror::Error;

use crate::join::SolutionRelation;
use crate::model::{complement, BinaryClause, VarSet};

/// Default width cap: a group allocates a 2^w-entry table.
pub const DEFAULT_MAX_GROUP_WIDTH: u32 = 24;

const NONE: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group width {width} exceeds cap {max}")]
    GroupTooWide { width: u32, max: u32 },
    #[error("clause variable set {clause} does not match group {group}")]
    VarSetMismatch { group: VarSet, clause: VarSet },
    #[error("group is blocked: no surviving candidates")]
    BlockedGroup,
}

/// Result of ingesting one clause word into a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IngestStatus {
    /// A candidate was removed.
    Updated,
    /// The clause word had been seen before; no state change.
    Duplicate,
    /// The removal emptied the table. Terminal.
    Blocked,
}

/// Survivor table for one variable set: presence flags plus a doubly-linked
/// order over the surviving entries, so removal is O(1) and emission skips
/// removed entries without scanning.
#[derive(Debug, Clone)]
pub struct SsatGroup {
    vars: VarSet,
    present: Vec<bool>,
    prev: Vec<u32>,
    next: Vec<u32>,
    first: u32,
    last: u32,
    removed: u64,
}

impl SsatGroup {
    /// Fresh group: all 2^w entries present, linked in ascending order.
    pub fn new(vars: VarSet, max_width: u32) -> Result<Self, GroupError> {
        let w = vars.width();
        if w > max_width {
            return Err(GroupError::GroupTooWide { width: w, max: max_width });
        }
        let size = 1usize << w;
        let mut prev = vec![NONE; size];
        let mut next = vec![NONE; size];
        for i in 0..size {
            if i > 0 {
                prev[i] = (i - 1) as u32;
            }
            if i + 1 < size {
                next[i] = (i + 1) as u32;
            }
        }
        Ok(SsatGroup {
            vars,
            present: vec![true; size],
            prev,
            next,
            first: 0,
            last: (size - 1) as u32,
            removed: 0,
        })
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn width(&self) -> u32 {
        self.vars.width()
    }

    /// Number of candidates removed so far. Every distinct ingested clause
    /// word removes exactly one candidate, so this also counts distinct
    /// ingested words.
    pub fn removed_count(&self) -> u64 {
        self.removed
    }

    pub fn survivor_count(&self) -> u64 {
        (1u64 << self.width()) - self.removed
    }

    pub fn is_blocked(&self) -> bool {
        self.removed == 1u64 << self.width()
    }

    /// Remove the complement of the clause word, if still present.
    pub fn ingest(&mut self, bc: &BinaryClause) -> Result<IngestStatus, GroupError> {
        if bc.vars != self.vars {
            return Err(GroupError::VarSetMismatch { group: self.vars, clause: bc.vars });
        }
        if self.is_blocked() {
            return Ok(IngestStatus::Blocked);
        }
        let target = complement(bc.bits, self.width()) as usize;
        if !self.present[target] {
            return Ok(IngestStatus::Duplicate);
        }
        let (p, nx) = (self.prev[target], self.next[target]);
        if p != NONE {
            self.next[p as usize] = nx;
        } else {
            self.first = nx;
        }
        if nx != NONE {
            self.prev[nx as usize] = p;
        } else {
            self.last = p;
        }
        self.present[target] = false;
        self.prev[target] = NONE;
        self.next[target] = NONE;
        self.removed += 1;
        if self.is_blocked() {
            Ok(IngestStatus::Blocked)
        } else {
            Ok(IngestStatus::Updated)
        }
    }

    /// The group's exact solution relation: one row per surviving word,
    /// in linked order.
    pub fn survivors(&self) -> Result<SolutionRelation, GroupError> {
        if self.is_blocked() {
            return Err(GroupError::BlockedGroup);
        }
        let mut rows = Vec::with_capacity(self.survivor_count() as usize);
        let mut cur = self.first;
        while cur != NONE {
            rows.push(cur as u64);
            cur = self.next[cur as usize];
        }
        debug_assert_eq!(rows.len() as u64, self.survivor_count());
        Ok(SolutionRelation::new(self.vars, rows))
    }
}

/// Count-only decision for a same-variable-set board: fewer clauses than
/// candidate words guarantees a survivor; a full set of distinct words
/// guarantees none. Anything else needs the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountDecision {
    Sat,
    Unsat,
    Unknown,
}

pub fn decide_by_count(w: u32, m_total: u64, distinct_known: Option<u64>) -> CountDecision {
    let space = 1u64 << w;
    if m_total < space {
        CountDecision::Sat
    } else if distinct_known == Some(space) {
        CountDecision::Unsat
    } else {
        CountDecision::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{normalize_clause, translate, Normalized};
    use crate::oracle::brute_force_solve;

    fn word_clause(vars: VarSet, bits: u64) -> BinaryClause {
        BinaryClause { vars, bits }
    }

    fn translated(lits: &[(u32, bool)], n: u32) -> BinaryClause {
        match normalize_clause(lits, n).unwrap() {
            Normalized::Clause(c) => translate(&c),
            Normalized::Tautology => panic!("tautology in test input"),
        }
    }

    #[test]
    fn fresh_group_has_all_words() {
        let g = SsatGroup::new(VarSet::from_members([1, 0]), DEFAULT_MAX_GROUP_WIDTH).unwrap();
        assert_eq!(g.survivors().unwrap().rows(), &[0b00, 0b01, 0b10, 0b11]);
        assert_eq!(g.removed_count(), 0);

        let g1 = SsatGroup::new(VarSet::from_members([0]), DEFAULT_MAX_GROUP_WIDTH).unwrap();
        assert_eq!(g1.survivors().unwrap().rows(), &[0, 1]);
    }

    #[test]
    fn width_cap() {
        let wide = VarSet::from_members(0..25);
        assert_eq!(
            SsatGroup::new(wide, 24).unwrap_err(),
            GroupError::GroupTooWide { width: 25, max: 24 }
        );
    }

    #[test]
    fn unit_clause_removes_falsifier() {
        // ingest (x0): assignment 0 falsifies it
        let vars = VarSet::from_members([0]);
        let mut g = SsatGroup::new(vars, 24).unwrap();
        assert_eq!(g.ingest(&word_clause(vars, 1)).unwrap(), IngestStatus::Updated);
        assert_eq!(g.survivors().unwrap().rows(), &[1]);
    }

    #[test]
    fn worked_two_variable_group() {
        // (x3|~x2), (x3|x2), (~x3|x2) leave only x3=1, x2=1
        let vars = VarSet::from_members([3, 2]);
        let mut g = SsatGroup::new(vars, 24).unwrap();
        for lits in [
            [(3, false), (2, true)],
            [(3, false), (2, false)],
            [(3, true), (2, false)],
        ] {
            g.ingest(&translated(&lits, 4)).unwrap();
        }
        assert_eq!(g.survivors().unwrap().rows(), &[0b11]);
    }

    #[test]
    fn full_board_blocks_on_last_distinct_word() {
        let vars = VarSet::from_members([2, 1, 0]);
        let mut g = SsatGroup::new(vars, 24).unwrap();
        for bits in 0..7u64 {
            assert_eq!(g.ingest(&word_clause(vars, bits)).unwrap(), IngestStatus::Updated);
        }
        assert_eq!(g.ingest(&word_clause(vars, 7)).unwrap(), IngestStatus::Blocked);
        assert!(g.is_blocked());
        assert_eq!(g.survivors().unwrap_err(), GroupError::BlockedGroup);
        // terminal: repeated ingestion reports Blocked without state change
        assert_eq!(g.ingest(&word_clause(vars, 3)).unwrap(), IngestStatus::Blocked);
        assert_eq!(g.removed_count(), 8);
    }

    #[test]
    fn duplicates_are_idempotent() {
        let vars = VarSet::from_members([1, 0]);
        let mut g = SsatGroup::new(vars, 24).unwrap();
        assert_eq!(g.ingest(&word_clause(vars, 0b10)).unwrap(), IngestStatus::Updated);
        let survivors = g.survivors().unwrap();
        assert_eq!(g.ingest(&word_clause(vars, 0b10)).unwrap(), IngestStatus::Duplicate);
        assert_eq!(g.removed_count(), 1);
        assert_eq!(g.survivors().unwrap(), survivors);
    }

    #[test]
    fn varset_mismatch_is_rejected() {
        let mut g = SsatGroup::new(VarSet::from_members([1, 0]), 24).unwrap();
        let bc = word_clause(VarSet::from_members([2, 0]), 0b01);
        assert!(matches!(g.ingest(&bc), Err(GroupError::VarSetMismatch { .. })));
    }

    #[test]
    fn unique_solution_board() {
        // clause words [0,7] minus 4: survivor is 3 (= 011)
        let vars = VarSet::from_members([2, 1, 0]);
        let mut g = SsatGroup::new(vars, 24).unwrap();
        for bits in (0..8u64).filter(|&b| b != 4) {
            g.ingest(&word_clause(vars, bits)).unwrap();
        }
        assert_eq!(g.survivors().unwrap().rows(), &[0b011]);
    }

    #[test]
    fn six_survivors_of_width_three_pair() {
        // (x2|~x1|x0), (x2|x1|~x0)
        let vars = VarSet::from_members([2, 1, 0]);
        let mut g = SsatGroup::new(vars, 24).unwrap();
        g.ingest(&translated(&[(2, false), (1, true), (0, false)], 3)).unwrap();
        g.ingest(&translated(&[(2, false), (1, false), (0, true)], 3)).unwrap();
        assert_eq!(
            g.survivors().unwrap().rows(),
            &[0b000, 0b011, 0b100, 0b101, 0b110, 0b111]
        );
    }

    #[test]
    fn survivors_match_brute_force_exhaustively() {
        // every ingestion set over widths 1..=4, checked against the oracle
        for w in 1..=4u32 {
            let vars = VarSet::full(w);
            let space = 1u64 << w;
            for subset in 0u64..(1 << space) {
                let mut g = SsatGroup::new(vars, 24).unwrap();
                let words: Vec<u64> = (0..space).filter(|&b| subset & (1 << b) != 0).collect();
                for &bits in &words {
                    g.ingest(&word_clause(vars, bits)).unwrap();
                }
                let raw: Vec<Vec<(u32, bool)>> = words
                    .iter()
                    .map(|&word| {
                        (0..w).rev().map(|v| (v, word & (1 << v) == 0)).collect()
                    })
                    .collect();
                let f = crate::model::Formula::from_raw_clauses(w, &raw).unwrap();
                let expected = brute_force_solve(&f).unwrap().words;
                if g.is_blocked() {
                    assert!(expected.is_empty());
                    assert_eq!(g.removed_count(), space);
                } else {
                    assert_eq!(g.survivors().unwrap().rows(), expected.as_slice());
                }
            }
        }
    }

    #[test]
    fn count_decision() {
        assert_eq!(decide_by_count(3, 7, None), CountDecision::Sat);
        assert_eq!(decide_by_count(2, 17, Some(4)), CountDecision::Unsat);
        assert_eq!(decide_by_count(3, 64, None), CountDecision::Unknown);
    }
}
