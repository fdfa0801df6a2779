//! Canonical data types: variables, clauses, assignments, and the
//! clause-to-binary-word translation everything else consumes.
//!
//! A clause over a variable set translates to a polarity word: bit j is 1
//! when the literal on the (j+1)-th smallest variable is positive, 0 when
//! negated. An assignment word uses the same convention over the full
//! variable range, so an assignment falsifies a clause exactly when its
//! restriction to the clause's variables equals the complement of the
//! clause word.

use std::fmt;

use thiserror::Error;

/// Hard cap on variable count so sets, words and subset indices fit in u64.
pub const MAX_VARS: u32 = 62;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("clause is empty")]
    EmptyClause,
    #[error("variable x{var} out of range (formula has {n} variables)")]
    VarOutOfRange { var: u32, n: u32 },
    #[error("variable count {n} exceeds supported maximum {MAX_VARS}")]
    TooManyVariables { n: u32 },
}

/// A possibly-negated variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn positive(var: u32) -> Self {
        Literal { var, negated: false }
    }

    pub fn negative(var: u32) -> Self {
        Literal { var, negated: true }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

/// A set of variable indices, stored as a bitmask over `[0, MAX_VARS)`.
///
/// Iteration and bit positions follow one convention everywhere: the
/// members in descending order are v_{w-1} > ... > v_0, and bit position j
/// of any word over this set belongs to v_j (smallest member at bit 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VarSet {
    mask: u64,
}

impl VarSet {
    pub const EMPTY: VarSet = VarSet { mask: 0 };

    pub fn from_mask(mask: u64) -> Self {
        VarSet { mask }
    }

    pub fn from_members<I: IntoIterator<Item = u32>>(members: I) -> Self {
        let mut mask = 0u64;
        for v in members {
            debug_assert!(v < MAX_VARS);
            mask |= 1 << v;
        }
        VarSet { mask }
    }

    /// Full set {x_{n-1}, ..., x_0}.
    pub fn full(n: u32) -> Self {
        debug_assert!(n <= MAX_VARS);
        if n == 0 {
            VarSet::EMPTY
        } else {
            VarSet { mask: (u64::MAX >> (64 - n)) }
        }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn width(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, var: u32) -> bool {
        var < 64 && self.mask & (1 << var) != 0
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        VarSet { mask: self.mask | other.mask }
    }

    pub fn intersect(&self, other: &VarSet) -> VarSet {
        VarSet { mask: self.mask & other.mask }
    }

    pub fn is_subset_of(&self, other: &VarSet) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn remove(&self, var: u32) -> VarSet {
        VarSet { mask: self.mask & !(1 << var) }
    }

    /// Bit position of `var` in words over this set: the number of members
    /// smaller than `var`.
    pub fn bit_position(&self, var: u32) -> u32 {
        debug_assert!(self.contains(var));
        (self.mask & ((1 << var) - 1)).count_ones()
    }

    /// Members in ascending order (bit position order).
    pub fn members_ascending(&self) -> impl Iterator<Item = u32> + '_ {
        (0..64).filter(move |v| self.mask & (1 << v) != 0)
    }

    /// Members in descending order (the canonical presentation order).
    pub fn members_descending(&self) -> impl Iterator<Item = u32> + '_ {
        (0..64).rev().filter(move |v| self.mask & (1 << v) != 0)
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.members_descending().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "x{v}")?;
        }
        write!(f, "}}")
    }
}

/// A disjunctive clause: nonempty literal list, distinct variables,
/// descending variable order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn width(&self) -> u32 {
        self.literals.len() as u32
    }

    pub fn vars(&self) -> VarSet {
        VarSet::from_members(self.literals.iter().map(|l| l.var))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{lit}")?;
        }
        write!(f, ")")
    }
}

/// Outcome of clause normalization. A clause holding both x and ~x is a
/// tautology as a disjunction; the caller drops it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    Clause(Clause),
    Tautology,
}

/// Canonicalize a raw literal list: merge duplicate literals, detect
/// tautologies, sort descending by variable.
pub fn normalize_clause(raw: &[(u32, bool)], n: u32) -> Result<Normalized, ModelError> {
    if raw.is_empty() {
        return Err(ModelError::EmptyClause);
    }
    let mut positive = 0u64;
    let mut negative = 0u64;
    for &(var, negated) in raw {
        if var >= n {
            return Err(ModelError::VarOutOfRange { var, n });
        }
        if negated {
            negative |= 1 << var;
        } else {
            positive |= 1 << var;
        }
    }
    if positive & negative != 0 {
        return Ok(Normalized::Tautology);
    }
    let literals = (0..64)
        .rev()
        .filter_map(|v| {
            if positive & (1 << v) != 0 {
                Some(Literal::positive(v))
            } else if negative & (1 << v) != 0 {
                Some(Literal::negative(v))
            } else {
                None
            }
        })
        .collect();
    Ok(Normalized::Clause(Clause { literals }))
}

/// How many literals of `raw` collapse away under normalization
/// (duplicate copies of the same literal).
pub fn duplicate_literal_count(raw: &[(u32, bool)]) -> usize {
    let mut seen = std::collections::HashSet::new();
    raw.iter().filter(|lit| !seen.insert(**lit)).count()
}

/// A clause reduced to its variable set plus a polarity word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryClause {
    pub vars: VarSet,
    pub bits: u64,
}

/// Translate a normalized clause to its binary word: 1 for a positive
/// literal, 0 for a negated one, positions per the VarSet convention.
pub fn translate(clause: &Clause) -> BinaryClause {
    let vars = clause.vars();
    let mut bits = 0u64;
    for lit in clause.literals() {
        if !lit.negated {
            bits |= 1 << vars.bit_position(lit.var);
        }
    }
    BinaryClause { vars, bits }
}

/// Inverse of [`translate`]: recover the normalized clause.
pub fn untranslate(bc: &BinaryClause) -> Clause {
    let literals = bc
        .vars
        .members_descending()
        .map(|var| Literal {
            var,
            negated: bc.bits & (1 << bc.vars.bit_position(var)) == 0,
        })
        .collect();
    Clause { literals }
}

/// Bitwise complement within width `w`. Involution.
pub fn complement(bits: u64, w: u32) -> u64 {
    debug_assert!(w <= MAX_VARS);
    if w == 0 {
        0
    } else {
        !bits & (u64::MAX >> (64 - w))
    }
}

/// A total assignment over variables `[0, n)`, packed as an n-bit word
/// with bit i holding the value of x_i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    n: u32,
    bits: u64,
}

impl Assignment {
    pub fn from_word(n: u32, bits: u64) -> Self {
        debug_assert!(n <= MAX_VARS);
        debug_assert!(n == 0 || bits < (1u64 << n) || n == 64);
        Assignment { n, bits }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn as_word(&self) -> u64 {
        self.bits
    }

    pub fn value(&self, var: u32) -> bool {
        debug_assert!(var < self.n);
        self.bits & (1 << var) != 0
    }

    /// Restriction to a variable set, as a word over that set.
    pub fn restrict(&self, vars: &VarSet) -> u64 {
        let mut word = 0u64;
        for (j, v) in vars.members_ascending().enumerate() {
            if self.value(v) {
                word |= 1 << j;
            }
        }
        word
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in (0..self.n).rev() {
            write!(f, "{}", if self.value(v) { 1 } else { 0 })?;
        }
        Ok(())
    }
}

/// Counts accumulated while normalizing a formula's clauses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NormalizeStats {
    pub tautologies_dropped: usize,
    pub duplicate_literals_merged: usize,
}

/// A CNF instance: variable count plus an ordered clause sequence.
/// Duplicate clauses are allowed and preserved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    n: u32,
    clauses: Vec<Clause>,
    stats: NormalizeStats,
}

impl Formula {
    /// Build from raw literal lists, dropping tautologies with a count.
    /// An empty raw clause is rejected: it makes the formula trivially
    /// unsatisfiable and the caller must surface that before solving.
    pub fn from_raw_clauses(n: u32, raw: &[Vec<(u32, bool)>]) -> Result<Formula, ModelError> {
        if n > MAX_VARS {
            return Err(ModelError::TooManyVariables { n });
        }
        let mut stats = NormalizeStats::default();
        let mut clauses = Vec::with_capacity(raw.len());
        for r in raw {
            stats.duplicate_literals_merged += duplicate_literal_count(r);
            match normalize_clause(r, n)? {
                Normalized::Clause(c) => clauses.push(c),
                Normalized::Tautology => stats.tautologies_dropped += 1,
            }
        }
        Ok(Formula { n, clauses, stats })
    }

    /// Build from already-normalized clauses.
    pub fn from_clauses(n: u32, clauses: Vec<Clause>) -> Result<Formula, ModelError> {
        if n > MAX_VARS {
            return Err(ModelError::TooManyVariables { n });
        }
        debug_assert!(clauses.iter().all(|c| c.vars().is_subset_of(&VarSet::full(n))));
        Ok(Formula { n, clauses, stats: NormalizeStats::default() })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn stats(&self) -> NormalizeStats {
        self.stats
    }

    pub(crate) fn set_stats(&mut self, stats: NormalizeStats) {
        self.stats = stats;
    }

    /// Union of all clause variable sets.
    pub fn used_vars(&self) -> VarSet {
        self.clauses
            .iter()
            .fold(VarSet::EMPTY, |acc, c| acc.union(&c.vars()))
    }
}
