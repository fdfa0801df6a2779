//! Small well-known instances used across the test suites: builders plus
//! the worked four-variable examples and the unique-solution width-3 board.

use crate::model::Formula;

/// Build a formula from raw (var, negated) lists, panicking on bad input.
pub fn formula(n: u32, clauses: &[&[(u32, bool)]]) -> Formula {
    let raw: Vec<Vec<(u32, bool)>> = clauses.iter().map(|c| c.to_vec()).collect();
    Formula::from_raw_clauses(n, &raw).expect("valid test formula")
}

/// SAT(4,3): (x3|~x2|x0) & (x2|x1|x0) & (~x2|x1|x0) & (x3|~x0).
/// Satisfiable; 1011 and 1101 are among its solutions.
pub fn sat_4_3() -> Formula {
    formula(
        4,
        &[
            &[(3, false), (2, true), (0, false)],
            &[(2, false), (1, false), (0, false)],
            &[(2, true), (1, false), (0, false)],
            &[(3, false), (0, true)],
        ],
    )
}

/// Two groups over disjoint variable sets; solutions {1101, 1110}.
pub fn phi1() -> Formula {
    formula(
        4,
        &[
            &[(3, false), (2, true)],
            &[(3, false), (2, false)],
            &[(3, true), (2, false)],
            &[(1, true), (0, true)],
            &[(1, false), (0, false)],
        ],
    )
}

/// Two groups sharing x2 with compatible rows; solutions {0000, 0011}.
pub fn phi2() -> Formula {
    formula(
        4,
        &[
            &[(3, false), (2, true)],
            &[(3, true), (2, true)],
            &[(3, true), (2, false)],
            &[(2, false), (1, true), (0, false)],
            &[(2, false), (1, false), (0, true)],
        ],
    )
}

/// Two groups sharing x2 with no common value; unsatisfiable.
pub fn phi3() -> Formula {
    formula(
        4,
        &[
            &[(3, false), (2, true)],
            &[(3, true), (2, true)],
            &[(3, true), (2, false)],
            &[(2, false), (1, true), (0, true)],
            &[(2, false), (1, true), (0, false)],
            &[(2, false), (1, false), (0, true)],
            &[(2, false), (1, false), (0, false)],
        ],
    )
}

/// The width-3 board whose seven clause words are [0,7] minus 4; its unique
/// solution is 011.
pub fn ssat_3_7() -> Formula {
    let raw: Vec<Vec<(u32, bool)>> = (0..8u64)
        .filter(|&w| w != 0b100)
        .map(|w| (0..3).rev().map(|v| (v, w & (1 << v) == 0)).collect())
        .collect();
    Formula::from_raw_clauses(3, &raw).expect("valid board")
}

/// The width-3 blocked board: all eight clause words.
pub fn ssat_3_8() -> Formula {
    let raw: Vec<Vec<(u32, bool)>> = (0..8u64)
        .map(|w| (0..3).rev().map(|v| (v, w & (1 << v) == 0)).collect())
        .collect();
    Formula::from_raw_clauses(3, &raw).expect("valid board")
}
