//! The IV bijection between subsets of {x_{n-1},...,x_0} and indices in
//! [0, 2^n - 1]: subsets are ordered by cardinality, then colexicographically
//! within equal cardinality. This keys the per-variable-set group registry.
//!
//! Two routes compute the same rank: an iterative successor walk over the
//! enumeration, and a closed form via the combinatorial number system.

use crate::model::{VarSet, MAX_VARS};

/// The unique index of a variable subset, in [0, 2^n - 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IvIndex(pub u64);

/// Pascal rows up to `n`, exact in u64 (valid through n = 62 since every
/// entry is below 2^62).
#[derive(Debug, Clone)]
pub struct BinomialTable {
    n: u32,
    rows: Vec<Vec<u64>>,
}

impl BinomialTable {
    pub fn new(n: u32) -> Self {
        assert!(n <= MAX_VARS, "binomial table capped at {MAX_VARS}");
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n as usize + 1);
        for i in 0..=n as usize {
            let mut row = vec![1u64; i + 1];
            for j in 1..i {
                row[j] = rows[i - 1][j - 1] + rows[i - 1][j];
            }
            rows.push(row);
        }
        BinomialTable { n, rows }
    }

    pub fn choose(&self, n: u32, k: u32) -> u64 {
        if k > n {
            0
        } else {
            self.rows[n as usize][k as usize]
        }
    }

    /// Index of the first subset of cardinality `k`: the number of strictly
    /// smaller subsets, sum of C(n, j) for j < k.
    pub fn base(&self, k: u32) -> u64 {
        (0..k).map(|j| self.choose(self.n, j)).sum()
    }
}

/// Successor of a strictly-descending digit tuple under increment-and-test:
/// digits (most significant last) count in base n, skipping every tuple
/// whose digits are not distinct and descending. Returns false when the
/// enumeration for this cardinality is exhausted.
fn next_descending_tuple(digits: &mut [u32], n: u32) -> bool {
    let k = digits.len();
    for j in 0..k {
        let limit = if j + 1 < k { digits[j + 1] } else { n };
        if digits[j] + 1 < limit {
            digits[j] += 1;
            for (i, d) in digits.iter_mut().enumerate().take(j) {
                *d = i as u32;
            }
            return true;
        }
    }
    false
}

/// Rank a subset by walking the enumeration from the lowest tuple of its
/// cardinality, counting successor steps until the tuple matches.
pub fn iv_rank_paper(s: &VarSet, n: u32) -> IvIndex {
    debug_assert!(s.is_subset_of(&VarSet::full(n)));
    let table = BinomialTable::new(n);
    let k = s.width();
    if k == 0 {
        return IvIndex(0);
    }
    let base = table.base(k);
    let target: Vec<u32> = s.members_ascending().collect();
    // lowest k-subset: digits (k-1, ..., 1, 0)
    let mut digits: Vec<u32> = (0..k).collect();
    let mut ix = 0u64;
    while digits != target {
        let advanced = next_descending_tuple(&mut digits, n);
        debug_assert!(advanced, "enumeration exhausted before reaching target");
        ix += 1;
    }
    IvIndex(base + ix)
}

/// Closed-form rank via the combinatorial number system: within its
/// cardinality class a subset with ascending members c_1 < ... < c_k sits
/// at colex rank sum of C(c_i, i).
pub fn iv_rank_fast(s: &VarSet, n: u32) -> IvIndex {
    let table = BinomialTable::new(n);
    iv_rank_fast_with(s, &table)
}

/// As [`iv_rank_fast`] with a caller-held table, for ranking many subsets.
pub fn iv_rank_fast_with(s: &VarSet, table: &BinomialTable) -> IvIndex {
    let k = s.width();
    let mut ix = table.base(k);
    for (i, c) in s.members_ascending().enumerate() {
        ix += table.choose(c, i as u32 + 1);
    }
    IvIndex(ix)
}

/// Inverse of the ranking: recover the subset at index `ix`.
pub fn iv_unrank(ix: IvIndex, n: u32) -> VarSet {
    let table = BinomialTable::new(n);
    // find the cardinality class containing ix
    let mut k = 0u32;
    while k < n && table.base(k + 1) <= ix.0 {
        k += 1;
    }
    let mut rank = ix.0 - table.base(k);
    let mut members = Vec::with_capacity(k as usize);
    for i in (1..=k).rev() {
        // largest c with C(c, i) <= rank
        let mut c = i - 1;
        while table.choose(c + 1, i) <= rank {
            c += 1;
        }
        rank -= table.choose(c, i);
        members.push(c);
    }
    debug_assert_eq!(rank, 0);
    VarSet::from_members(members)
}
