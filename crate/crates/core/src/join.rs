//! The cross-join operator over solution relations: cross product on
//! disjoint variable sets, natural join on shared ones, empty when the
//! shared variables cannot agree. Folding it over all group relations
//! yields the global solution relation.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::model::{Assignment, VarSet};

/// Default cap on materialized relation rows.
pub const DEFAULT_MAX_ROWS: usize = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JoinError {
    #[error("join result would exceed {max} rows")]
    RelationTooLarge { max: usize },
    #[error("incompatibility shortcut does not apply: {0}")]
    Inapplicable(&'static str),
}

/// A set of partial assignments over a named variable set. Rows are
/// distinct words under the shared bit convention, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionRelation {
    vars: VarSet,
    rows: Vec<u64>,
}

impl SolutionRelation {
    pub fn new(vars: VarSet, mut rows: Vec<u64>) -> Self {
        debug_assert!(rows.iter().all(|&r| vars.width() == 64 || r < (1u64 << vars.width())));
        rows.sort_unstable();
        rows.dedup();
        SolutionRelation { vars, rows }
    }

    /// Identity of the fold: no variables, one empty row.
    pub fn unit() -> Self {
        SolutionRelation { vars: VarSet::EMPTY, rows: vec![0] }
    }

    pub fn empty(vars: VarSet) -> Self {
        SolutionRelation { vars, rows: Vec::new() }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The single row of a unique-solution relation, if it has exactly one.
    pub fn unique_row(&self) -> Option<u64> {
        if self.rows.len() == 1 {
            Some(self.rows[0])
        } else {
            None
        }
    }
}

/// Re-position the bits of `row` (a word over `from`) into a word over
/// `into`. Variables of `into` not in `from` are left 0.
pub(crate) fn embed(row: u64, from: &VarSet, into: &VarSet) -> u64 {
    let mut out = 0u64;
    for (j, v) in from.members_ascending().enumerate() {
        if row & (1 << j) != 0 {
            out |= 1 << into.bit_position(v);
        }
    }
    out
}

/// Project a word over `from` onto the subset `onto`.
fn project(row: u64, from: &VarSet, onto: &VarSet) -> u64 {
    let mut out = 0u64;
    for (j, v) in onto.members_ascending().enumerate() {
        if row & (1 << from.bit_position(v)) != 0 {
            out |= 1 << j;
        }
    }
    out
}

/// The cross-join of two relations. Disjoint variable sets give the full
/// cross product; shared ones give the natural join, which is empty when
/// no rows agree on the intersection.
pub fn cross_join(
    a: &SolutionRelation,
    b: &SolutionRelation,
    max_rows: usize,
) -> Result<SolutionRelation, JoinError> {
    let shared = a.vars.intersect(&b.vars);
    let union = a.vars.union(&b.vars);
    let mut rows: Vec<u64>;
    if shared.is_empty() {
        let count = a.len().saturating_mul(b.len());
        if count > max_rows {
            return Err(JoinError::RelationTooLarge { max: max_rows });
        }
        rows = Vec::with_capacity(count);
        for &ra in &a.rows {
            let ea = embed(ra, &a.vars, &union);
            for &rb in &b.rows {
                rows.push(ea | embed(rb, &b.vars, &union));
            }
        }
    } else {
        let mut buckets: HashMap<u64, Vec<u64>> = HashMap::new();
        for &rb in &b.rows {
            buckets.entry(project(rb, &b.vars, &shared)).or_default().push(rb);
        }
        rows = Vec::new();
        for &ra in &a.rows {
            if let Some(matches) = buckets.get(&project(ra, &a.vars, &shared)) {
                let ea = embed(ra, &a.vars, &union);
                for &rb in matches {
                    if rows.len() == max_rows {
                        return Err(JoinError::RelationTooLarge { max: max_rows });
                    }
                    rows.push(ea | embed(rb, &b.vars, &union));
                }
            }
        }
    }
    rows.sort_unstable();
    rows.dedup();
    Ok(SolutionRelation { vars: union, rows })
}

/// Fold the cross-join over all relations. Relations are grouped by
/// connected components of the variable-sharing graph and joined smallest
/// first inside each component, so disjoint parts cannot inflate each
/// other's intermediates and an empty intermediate exits early.
pub fn fold_theta(
    relations: &[SolutionRelation],
    max_rows: usize,
) -> Result<SolutionRelation, JoinError> {
    if relations.is_empty() {
        return Ok(SolutionRelation::unit());
    }
    let all_vars = relations
        .iter()
        .fold(VarSet::EMPTY, |acc, r| acc.union(r.vars()));
    if relations.iter().any(|r| r.is_empty()) {
        return Ok(SolutionRelation::empty(all_vars));
    }

    // union-find over variable indices
    let mut parent: Vec<u32> = (0..64).collect();
    fn find(parent: &mut [u32], x: u32) -> u32 {
        let mut root = x;
        while parent[root as usize] != root {
            root = parent[root as usize];
        }
        let mut cur = x;
        while parent[cur as usize] != root {
            let up = parent[cur as usize];
            parent[cur as usize] = root;
            cur = up;
        }
        root
    }
    for rel in relations {
        let mut members = rel.vars().members_ascending();
        if let Some(first) = members.next() {
            let root = find(&mut parent, first);
            for v in members {
                let r = find(&mut parent, v);
                parent[r as usize] = root;
            }
        }
    }

    let mut components: BTreeMap<u32, Vec<&SolutionRelation>> = BTreeMap::new();
    let mut identities: Vec<&SolutionRelation> = Vec::new();
    for rel in relations {
        match rel.vars().members_ascending().next() {
            Some(v) => {
                let root = find(&mut parent, v);
                components.entry(root).or_default().push(rel);
            }
            // width-0, nonempty: the unit relation, an identity
            None => identities.push(rel),
        }
    }

    let mut partials: Vec<SolutionRelation> = Vec::with_capacity(components.len());
    for (_, mut rels) in components {
        rels.sort_by_key(|r| (r.len(), r.vars().mask()));
        let mut acc = rels[0].clone();
        for rel in &rels[1..] {
            acc = cross_join(&acc, rel, max_rows)?;
            if acc.is_empty() {
                return Ok(SolutionRelation::empty(all_vars));
            }
        }
        partials.push(acc);
    }

    partials.sort_by_key(|r| (r.len(), r.vars().mask()));
    let mut acc = SolutionRelation::unit();
    for p in &partials {
        acc = cross_join(&acc, p, max_rows)?;
    }
    let _ = identities; // identity relations contribute nothing
    Ok(acc)
}

/// The two-singleton incompatibility certificate: two unique-solution
/// relations over intersecting variable sets that disagree somewhere on
/// the intersection rule out any global solution.
pub fn pairwise_incompatible(
    a: &SolutionRelation,
    b: &SolutionRelation,
) -> Result<bool, JoinError> {
    let (ra, rb) = match (a.unique_row(), b.unique_row()) {
        (Some(ra), Some(rb)) => (ra, rb),
        _ => return Err(JoinError::Inapplicable("both relations must have exactly one row")),
    };
    let shared = a.vars().intersect(b.vars());
    if shared.is_empty() {
        return Err(JoinError::Inapplicable("variable sets are disjoint"));
    }
    Ok(project(ra, a.vars(), &shared) != project(rb, b.vars(), &shared))
}

/// Extend one relation row to a total assignment; variables outside the
/// relation default to 0.
pub fn assemble_witness(vars: &VarSet, row: u64, n: u32) -> Assignment {
    debug_assert!(vars.is_subset_of(&VarSet::full(n)));
    Assignment::from_word(n, embed(row, vars, &VarSet::full(n)))
}
