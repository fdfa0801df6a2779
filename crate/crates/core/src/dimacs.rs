//! DIMACS CNF ingestion and emission, witness lines, and the result
//! renderings used by the command line. External text is 1-based signed
//! DIMACS; everything internal is 0-based. The bridge lives here and only
//! here.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{
    duplicate_literal_count, normalize_clause, Assignment, Clause, Formula, Literal, ModelError,
    NormalizeStats, Normalized, MAX_VARS,
};
use crate::race::RaceResult;
use crate::verdict::{Outcome, Verdict};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> DimacsError {
    DimacsError::Syntax { line, column, message: message.into() }
}

/// A parsed DIMACS document. The declared clause count is advisory: a
/// mismatch is recorded as a warning, not an error.
#[derive(Debug, Clone, PartialEq)]
pub struct DimacsDocument {
    pub declared_vars: u32,
    pub declared_clauses: usize,
    pub comment_lines: usize,
    pub warnings: Vec<String>,
    pub contents: DimacsContents,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DimacsContents {
    Formula(Formula),
    /// An empty clause appeared: the formula is unsatisfiable at ingestion.
    TriviallyUnsat { line: usize },
}

impl DimacsDocument {
    /// The formula, when ingestion did not already settle the verdict.
    pub fn formula(&self) -> Option<&Formula> {
        match &self.contents {
            DimacsContents::Formula(f) => Some(f),
            DimacsContents::TriviallyUnsat { .. } => None,
        }
    }
}

/// Parse DIMACS CNF text: `c` comments, one `p cnf <vars> <clauses>`
/// header, then 0-terminated signed-integer clauses (clauses may span
/// lines). Tautologies are dropped with a warning.
pub fn parse_dimacs(text: &str) -> Result<DimacsDocument, DimacsError> {
    let mut declared: Option<(u32, usize)> = None;
    let mut comment_lines = 0usize;
    let mut warnings = Vec::new();
    let mut raw_clauses: Vec<Vec<(u32, bool)>> = Vec::new();
    let mut current: Vec<(u32, bool)> = Vec::new();
    let mut empty_clause_line: Option<usize> = None;
    let mut stats = NormalizeStats::default();

    for (line_index, line) in text.lines().enumerate() {
        let line_no = line_index + 1;
        let trimmed = line.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('c') {
            comment_lines += 1;
            continue;
        }
        // SATLIB-style end marker: ignore everything after it
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if declared.is_some() {
                return Err(syntax(line_no, 1, "duplicate problem header"));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(syntax(line_no, 1, "expected `p cnf <vars> <clauses>`"));
            }
            let vars: u32 = fields[2]
                .parse()
                .map_err(|_| syntax(line_no, 1, format!("bad variable count `{}`", fields[2])))?;
            if vars > MAX_VARS {
                return Err(syntax(
                    line_no,
                    1,
                    format!("{vars} variables exceeds supported maximum {MAX_VARS}"),
                ));
            }
            let clauses: usize = fields[3]
                .parse()
                .map_err(|_| syntax(line_no, 1, format!("bad clause count `{}`", fields[3])))?;
            declared = Some((vars, clauses));
            continue;
        }

        let (n, _) = declared.ok_or_else(|| syntax(line_no, 1, "clause before `p cnf` header"))?;
        let mut column = 1 + (line.len() - trimmed.len());
        for token in trimmed.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| syntax(line_no, column, format!("bad literal `{token}`")))?;
            if value == 0 {
                if current.is_empty() {
                    empty_clause_line.get_or_insert(line_no);
                } else {
                    raw_clauses.push(std::mem::take(&mut current));
                }
            } else {
                let var = value.unsigned_abs() - 1;
                if var >= n as u64 {
                    return Err(syntax(
                        line_no,
                        column,
                        format!("literal `{token}` out of range for {n} variables"),
                    ));
                }
                current.push((var as u32, value < 0));
            }
            column += token.len() + 1;
        }
    }

    let (declared_vars, declared_clauses) =
        declared.ok_or_else(|| syntax(text.lines().count().max(1), 1, "missing `p cnf` header"))?;
    if !current.is_empty() {
        // final clause without terminating 0: accept with a warning
        warnings.push("last clause is not 0-terminated".to_string());
        raw_clauses.push(current);
    }

    let parsed_count = raw_clauses.len() + usize::from(empty_clause_line.is_some());
    if parsed_count != declared_clauses {
        warnings.push(format!(
            "header declares {declared_clauses} clauses, found {parsed_count}"
        ));
    }

    let contents = if let Some(line) = empty_clause_line {
        DimacsContents::TriviallyUnsat { line }
    } else {
        let mut clauses = Vec::with_capacity(raw_clauses.len());
        for raw in &raw_clauses {
            stats.duplicate_literals_merged += duplicate_literal_count(raw);
            match normalize_clause(raw, declared_vars) {
                Ok(Normalized::Clause(c)) => clauses.push(c),
                Ok(Normalized::Tautology) => stats.tautologies_dropped += 1,
                Err(ModelError::EmptyClause) => unreachable!("empty clauses handled above"),
                Err(e) => unreachable!("literal range checked during scan: {e}"),
            }
        }
        if stats.tautologies_dropped > 0 {
            warnings.push(format!("dropped {} tautological clause(s)", stats.tautologies_dropped));
        }
        let mut formula =
            Formula::from_clauses(declared_vars, clauses).expect("header range checked");
        formula.set_stats(stats);
        DimacsContents::Formula(formula)
    };

    Ok(DimacsDocument {
        declared_vars,
        declared_clauses,
        comment_lines,
        warnings,
        contents,
    })
}

/// Render a formula as DIMACS CNF.
pub fn emit_dimacs(f: &Formula) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", f.n(), f.num_clauses());
    for clause in f.clauses() {
        for lit in clause.literals() {
            let _ = write!(out, "{} ", external_literal(lit));
        }
        let _ = writeln!(out, "0");
    }
    out
}

fn external_literal(lit: &Literal) -> i64 {
    let var = (lit.var + 1) as i64;
    if lit.negated {
        -var
    } else {
        var
    }
}

/// Witness line: signed literals in descending variable order, 0-terminated.
pub fn witness_line(a: &Assignment) -> String {
    let mut out = String::from("v");
    for var in (0..a.n()).rev() {
        let ext = (var + 1) as i64;
        let _ = write!(out, " {}", if a.value(var) { ext } else { -ext });
    }
    out.push_str(" 0");
    out
}

/// Parse a witness back into an assignment; unmentioned variables default
/// to 0. Accepts an optional trailing 0 terminator.
pub fn parse_witness(text: &str, n: u32) -> Result<Assignment, DimacsError> {
    let mut word = 0u64;
    for token in text.split_whitespace() {
        if token == "v" {
            continue;
        }
        let value: i64 = token
            .parse()
            .map_err(|_| syntax(1, 1, format!("bad witness literal `{token}`")))?;
        if value == 0 {
            break;
        }
        let var = value.unsigned_abs() - 1;
        if var >= n as u64 {
            return Err(syntax(1, 1, format!("witness literal `{token}` out of range")));
        }
        if value > 0 {
            word |= 1 << var;
        }
    }
    Ok(Assignment::from_word(n, word))
}

/// Solver-competition exit code for an outcome: 10 sat, 20 unsat,
/// 30 unknown.
pub fn exit_code(v: &Verdict) -> i32 {
    match v.decisive() {
        Some(true) => 10,
        Some(false) => 20,
        None => 30,
    }
}

/// The `s`/`v` result block for a verdict.
pub fn emit_result(v: &Verdict) -> String {
    let mut out = String::new();
    match &v.outcome {
        Outcome::Sat(witness) => {
            let _ = writeln!(out, "s SATISFIABLE");
            let _ = writeln!(out, "{}", witness_line(witness));
        }
        Outcome::Unsat(_) => {
            let _ = writeln!(out, "s UNSATISFIABLE");
        }
        Outcome::Indeterminate(_) => {
            let _ = writeln!(out, "s UNKNOWN");
        }
    }
    out
}

/// One-line machine-readable rendering of a verdict.
pub fn emit_result_json(v: &Verdict) -> String {
    let status = match v.decisive() {
        Some(true) => "sat",
        Some(false) => "unsat",
        None => "unknown",
    };
    let reason = match &v.outcome {
        Outcome::Sat(_) => None,
        Outcome::Unsat(r) => Some(r.to_string()),
        Outcome::Indeterminate(r) => Some(r.to_string()),
    };
    let witness = v.witness().map(|a| {
        (0..a.n())
            .rev()
            .map(|var| {
                let ext = (var + 1) as i64;
                if a.value(var) {
                    ext
                } else {
                    -ext
                }
            })
            .collect::<Vec<i64>>()
    });
    serde_json::json!({
        "status": status,
        "engine": v.engine.as_str(),
        "steps": v.steps,
        "reason": reason,
        "witness": witness,
    })
    .to_string()
}

/// One-line machine-readable rendering of a race result.
pub fn emit_race_json(r: &RaceResult) -> String {
    let mut value: serde_json::Value =
        serde_json::from_str(&emit_result_json(&r.verdict)).expect("own json is valid");
    value["winner"] = serde_json::json!(r.winner.as_str());
    value["loser"] = serde_json::json!(match &r.loser_state {
        crate::race::LoserState::Cancelled => "cancelled".to_string(),
        crate::race::LoserState::Finished(v) => format!("finished:{}", match v.decisive() {
            Some(true) => "sat",
            Some(false) => "unsat",
            None => "unknown",
        }),
        crate::race::LoserState::NotStarted => "not-started".to_string(),
    });
    value["wall_time_us"] = serde_json::json!(r.wall_time.as_micros() as u64);
    value.to_string()
}

/// CSV table of the selection probabilities, columns `f,p_inner,p_outer`.
pub fn emit_prob_csv(rows: &[crate::transform::ProbRow]) -> String {
    let mut out = String::from("f,p_inner,p_outer\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            row.f,
            crate::transform::decimal_string(&row.p_inner, 20),
            crate::transform::decimal_string(&row.p_outer, 20),
        );
    }
    out
}

/// Canonical text of a clause for diagnostics.
pub fn clause_text(c: &Clause) -> String {
    c.literals()
        .iter()
        .map(|l| external_literal(l).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::VarSet;
    use crate::oracle::evaluate_circuit;
    use crate::testkit::phi1;
    use crate::verdict::{Engine, IndeterminateReason, UnsatReason};

    #[test]
    fn minimal_unsat_pair() {
        let doc = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap();
        let f = doc.formula().unwrap();
        assert_eq!(f.n(), 1);
        assert_eq!(f.num_clauses(), 2);
        assert_eq!(f.clauses()[0].literals(), &[Literal::positive(0)]);
        assert_eq!(f.clauses()[1].literals(), &[Literal::negative(0)]);
    }

    #[test]
    fn worked_example_encoding() {
        let doc = parse_dimacs("p cnf 4 5\n4 -3 0\n4 3 0\n-4 3 0\n-2 -1 0\n2 1 0\n").unwrap();
        assert_eq!(doc.formula().unwrap(), &phi1());
    }

    #[test]
    fn tautology_dropped_with_warning() {
        let doc = parse_dimacs("p cnf 2 1\n1 -1 0\n").unwrap();
        let f = doc.formula().unwrap();
        assert_eq!(f.num_clauses(), 0);
        assert_eq!(f.stats().tautologies_dropped, 1);
        assert!(doc.warnings.iter().any(|w| w.contains("tautological")));
    }

    #[test]
    fn empty_clause_is_trivially_unsat() {
        let doc = parse_dimacs("p cnf 2 2\n1 2 0\n0\n").unwrap();
        assert_eq!(doc.contents, DimacsContents::TriviallyUnsat { line: 3 });
    }

    #[test]
    fn clause_count_mismatch_warns() {
        let doc = parse_dimacs("p cnf 2 3\n1 0\n").unwrap();
        assert!(doc.warnings.iter().any(|w| w.contains("declares 3")));
    }

    #[test]
    fn satlib_end_marker_stops_parsing() {
        let doc = parse_dimacs("p cnf 2 1\n1 2 0\n%\n0\n").unwrap();
        assert_eq!(doc.formula().unwrap().num_clauses(), 1);
    }

    #[test]
    fn duplicate_literals_are_counted() {
        let doc = parse_dimacs("p cnf 2 1\n1 1 2 0\n").unwrap();
        let f = doc.formula().unwrap();
        assert_eq!(f.clauses()[0].width(), 2);
        assert_eq!(f.stats().duplicate_literals_merged, 1);
    }

    #[test]
    fn comments_and_multiline_clauses() {
        let doc = parse_dimacs("c a comment\np cnf 3 1\n1\n2 3 0\n").unwrap();
        assert_eq!(doc.comment_lines, 1);
        assert_eq!(doc.formula().unwrap().num_clauses(), 1);
    }

    #[test]
    fn syntax_errors_carry_location() {
        let err = parse_dimacs("p cnf 2 1\n1 x 0\n").unwrap_err();
        assert_eq!(err, syntax(2, 3, "bad literal `x`"));
        assert!(parse_dimacs("1 0\n").is_err());
        let range = parse_dimacs("p cnf 2 1\n3 0\n").unwrap_err();
        assert!(matches!(range, DimacsError::Syntax { line: 2, .. }));
    }

    #[test]
    fn roundtrip_is_stable() {
        let texts = [
            "p cnf 4 5\n4 -3 0\n4 3 0\n-4 3 0\n-2 -1 0\n2 1 0\n",
            "c x\np cnf 3 2\n1 -2 0\n-1 2 3 0\n",
        ];
        for text in texts {
            let first = parse_dimacs(text).unwrap();
            let emitted = emit_dimacs(first.formula().unwrap());
            let second = parse_dimacs(&emitted).unwrap();
            assert_eq!(first.formula(), second.formula());
        }
    }

    #[test]
    fn witness_rendering_and_verification() {
        let a = Assignment::from_word(4, 0b1101);
        assert_eq!(witness_line(&a), "v 4 3 -2 1 0");
        let back = parse_witness("4 3 -2 1 0", 4).unwrap();
        assert_eq!(back, a);
        assert!(evaluate_circuit(&phi1(), &back));
    }

    #[test]
    fn verdict_rendering() {
        let sat = Verdict {
            outcome: Outcome::Sat(Assignment::from_word(4, 0b1101)),
            steps: 5,
            engine: Engine::Grouped,
        };
        assert_eq!(emit_result(&sat), "s SATISFIABLE\nv 4 3 -2 1 0\n");
        assert_eq!(exit_code(&sat), 10);

        let unsat = Verdict {
            outcome: Outcome::Unsat(UnsatReason::BlockedGroup(VarSet::from_members([1, 0]))),
            steps: 4,
            engine: Engine::Grouped,
        };
        assert_eq!(emit_result(&unsat), "s UNSATISFIABLE\n");
        assert_eq!(exit_code(&unsat), 20);
        let json: serde_json::Value = serde_json::from_str(&emit_result_json(&unsat)).unwrap();
        assert_eq!(json["status"], "unsat");
        assert!(json["reason"].as_str().unwrap().contains("blocked"));

        let unknown = Verdict {
            outcome: Outcome::Indeterminate(IndeterminateReason::BudgetExhausted { pairs: 3 }),
            steps: 3,
            engine: Engine::Random,
        };
        assert_eq!(emit_result(&unknown), "s UNKNOWN\n");
        assert_eq!(exit_code(&unknown), 30);
    }

    #[test]
    fn prob_csv_shape() {
        let rows = crate::transform::prob_decay_table(6, 3).unwrap();
        let csv = emit_prob_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "f,p_inner,p_outer");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0,"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn emit_parse_roundtrip(seed in 0u64..5000, n in 1u32..=10, m in 0usize..=30) {
                let f = crate::transform::gen_random_sat(n, m, 1..=3.min(n), seed).unwrap();
                let doc = parse_dimacs(&emit_dimacs(&f)).unwrap();
                prop_assert_eq!(doc.formula().unwrap(), &f);
            }
        }
    }
}
