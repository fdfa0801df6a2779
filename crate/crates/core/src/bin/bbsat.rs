//! Command line for the toolkit: solve DIMACS files with any engine,
//! generate instances, check witnesses, and emit probability tables.
//! Solve exits 10 for sat, 20 for unsat, 30 for unknown.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bbsat_core::dimacs::{
    emit_dimacs, emit_prob_csv, emit_race_json, emit_result, emit_result_json, exit_code,
    parse_dimacs, parse_witness, witness_line, DimacsContents,
};
use bbsat_core::grouped::{solve_grouped_with_stats, GroupedConfig};
use bbsat_core::model::Formula;
use bbsat_core::oracle::brute_force_solve;
use bbsat_core::race::{solve_race, LoserState, RaceConfig};
use bbsat_core::random::{solve_random, RandomConfig};
use bbsat_core::transform::{gen_extreme_ssat, gen_random_sat, prob_decay_table};
use bbsat_core::verdict::{Engine, Outcome, UnsatReason, Verdict};

#[derive(Parser)]
#[command(name = "bbsat", version, about = "SAT toolkit built on binary clause words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a DIMACS CNF file.
    Solve(SolveArgs),
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Emit the selection-probability decay table as CSV.
    ProbTable(ProbTableArgs),
    /// Ground-truth utilities backed by exhaustive enumeration.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args)]
struct SolveArgs {
    /// DIMACS CNF input file.
    file: PathBuf,
    /// Engine: grouped, random, or race.
    #[arg(long, default_value = "race", env = "BBSAT_ENGINE")]
    engine: EngineChoice,
    /// Seed for the randomized engine.
    #[arg(long, default_value_t = 0, env = "BBSAT_SEED")]
    seed: u64,
    /// Give up the randomized engine after this many candidate pairs.
    #[arg(long, env = "BBSAT_PAIR_BUDGET")]
    pair_budget: Option<u64>,
    /// Widest variable set a survivor table may cover.
    #[arg(long, default_value_t = bbsat_core::ssat::DEFAULT_MAX_GROUP_WIDTH, env = "BBSAT_WMAX")]
    wmax: u32,
    /// Row cap for join results.
    #[arg(long, default_value_t = bbsat_core::join::DEFAULT_MAX_ROWS, env = "BBSAT_RMAX")]
    rmax: usize,
    /// Variable cap for the randomized engine.
    #[arg(long, default_value_t = bbsat_core::random::DEFAULT_MAX_SEARCH_VARS, env = "BBSAT_NMAX")]
    nmax: u32,
    /// Emit one machine-readable JSON line instead of the s/v block.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum EngineChoice {
    Grouped,
    Random,
    Race,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Same-variable-set board with an exact requested solution set.
    Extreme(GenExtremeArgs),
    /// Seeded random CNF.
    Random(GenRandomArgs),
}

#[derive(Args)]
struct GenExtremeArgs {
    /// Number of variables.
    #[arg(long)]
    n: u32,
    /// Comma-separated solution words (e.g. `3` or `0,1`); empty for a
    /// blocked board.
    #[arg(long, default_value = "")]
    solutions: String,
    /// Replicate every clause this many times.
    #[arg(long, default_value_t = 1)]
    dup: usize,
    #[arg(long, default_value_t = 0, env = "BBSAT_SEED")]
    seed: u64,
    /// Output file (stdout when omitted).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenRandomArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: usize,
    /// Clause width range `a..b` (inclusive).
    #[arg(long, default_value = "1..3")]
    widths: String,
    #[arg(long, default_value_t = 0, env = "BBSAT_SEED")]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ProbTableArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    fmax: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exhaustively solve a DIMACS CNF file.
    Solve { file: PathBuf },
    /// Verify a witness (signed literals, e.g. "4 3 -2 1 0").
    Check {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        witness: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Solve(args) => solve_command(args),
        Command::Gen(GenCommand::Extreme(args)) => {
            let solutions = parse_word_list(&args.solutions)?;
            let formula = gen_extreme_ssat(args.n, &solutions, args.seed, args.dup)
                .map_err(|e| e.to_string())?;
            write_output(args.output.as_deref(), &emit_dimacs(&formula))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen(GenCommand::Random(args)) => {
            let widths = parse_width_range(&args.widths)?;
            let formula =
                gen_random_sat(args.n, args.m, widths, args.seed).map_err(|e| e.to_string())?;
            write_output(args.output.as_deref(), &emit_dimacs(&formula))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ProbTable(args) => {
            let rows = prob_decay_table(args.n, args.fmax).map_err(|e| e.to_string())?;
            write_output(args.output.as_deref(), &emit_prob_csv(&rows))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle(OracleCommand::Solve { file }) => {
            let formula = load_formula(&file)?;
            match formula {
                Loaded::TriviallyUnsat => {
                    println!("s UNSATISFIABLE");
                    Ok(ExitCode::from(20))
                }
                Loaded::Formula(f) => {
                    let solutions = brute_force_solve(&f).map_err(|e| e.to_string())?;
                    if let Some(&first) = solutions.words.first() {
                        println!("c solutions {}", solutions.words.len());
                        println!("s SATISFIABLE");
                        println!(
                            "{}",
                            witness_line(&bbsat_core::model::Assignment::from_word(f.n(), first))
                        );
                        Ok(ExitCode::from(10))
                    } else {
                        println!("c solutions 0");
                        println!("s UNSATISFIABLE");
                        Ok(ExitCode::from(20))
                    }
                }
            }
        }
        Command::Oracle(OracleCommand::Check { file, witness }) => {
            let formula = load_formula(&file)?;
            match formula {
                Loaded::TriviallyUnsat => Err("formula contains an empty clause".to_string()),
                Loaded::Formula(f) => {
                    let assignment =
                        parse_witness(&witness, f.n()).map_err(|e| e.to_string())?;
                    if bbsat_core::oracle::evaluate_circuit(&f, &assignment) {
                        println!("c witness verified");
                        Ok(ExitCode::SUCCESS)
                    } else {
                        println!("c witness rejected");
                        Ok(ExitCode::from(1))
                    }
                }
            }
        }
    }
}

enum Loaded {
    Formula(Formula),
    TriviallyUnsat,
}

fn load_formula(path: &std::path::Path) -> Result<Loaded, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc = parse_dimacs(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    for warning in &doc.warnings {
        eprintln!("c warning: {warning}");
    }
    match doc.contents {
        DimacsContents::Formula(f) => Ok(Loaded::Formula(f)),
        DimacsContents::TriviallyUnsat { .. } => Ok(Loaded::TriviallyUnsat),
    }
}

fn solve_command(args: SolveArgs) -> Result<ExitCode, String> {
    let formula = match load_formula(&args.file)? {
        Loaded::Formula(f) => f,
        Loaded::TriviallyUnsat => {
            let verdict = Verdict {
                outcome: Outcome::Unsat(UnsatReason::EmptyClauseAtIngest),
                steps: 0,
                engine: Engine::Ingest,
            };
            return Ok(report_verdict(&verdict, args.json, None));
        }
    };

    let grouped_config =
        GroupedConfig { max_group_width: args.wmax, max_relation_rows: args.rmax };
    let random_config = RandomConfig {
        seed: args.seed,
        pair_budget: args.pair_budget,
        max_vars: args.nmax,
    };

    match args.engine {
        EngineChoice::Grouped => {
            let (verdict, stats) = solve_grouped_with_stats(&formula, &grouped_config);
            if !args.json {
                for s in &stats {
                    println!(
                        "c group iv={} vars={} words={} survivors={}",
                        s.index.0, s.vars, s.clause_words, s.survivors
                    );
                }
            }
            Ok(report_verdict(&verdict, args.json, None))
        }
        EngineChoice::Random => {
            let verdict = solve_random(&formula, &random_config);
            Ok(report_verdict(&verdict, args.json, None))
        }
        EngineChoice::Race => {
            let config = RaceConfig { grouped: grouped_config, random: random_config };
            let result = solve_race(&formula, &config);
            if args.json {
                println!("{}", emit_race_json(&result));
                return Ok(ExitCode::from(exit_code(&result.verdict) as u8));
            }
            println!("c winner {}", result.winner);
            match &result.loser_state {
                LoserState::Cancelled => println!("c loser cancelled"),
                LoserState::Finished(v) => println!("c loser finished {}", v.engine),
                LoserState::NotStarted => println!("c loser not-started"),
            }
            Ok(report_verdict(&result.verdict, false, Some(result.wall_time)))
        }
    }
}

fn report_verdict(
    verdict: &Verdict,
    json: bool,
    wall_time: Option<std::time::Duration>,
) -> ExitCode {
    if json {
        println!("{}", emit_result_json(verdict));
    } else {
        println!("c engine {}", verdict.engine);
        println!("c steps {}", verdict.steps);
        if let Some(t) = wall_time {
            println!("c wall-time-us {}", t.as_micros());
        }
        if let Outcome::Unsat(reason) = &verdict.outcome {
            println!("c reason {reason}");
        }
        if let Outcome::Indeterminate(reason) = &verdict.outcome {
            println!("c reason {reason}");
        }
        print!("{}", emit_result(verdict));
    }
    ExitCode::from(exit_code(verdict) as u8)
}

fn parse_word_list(text: &str) -> Result<Vec<u64>, String> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|tok| tok.trim().parse::<u64>().map_err(|_| format!("bad solution word `{tok}`")))
        .collect()
}

fn parse_width_range(text: &str) -> Result<std::ops::RangeInclusive<u32>, String> {
    let parts: Vec<&str> = text.split("..").collect();
    match parts.as_slice() {
        [single] => {
            let w = single.trim().parse::<u32>().map_err(|_| bad_widths(text))?;
            Ok(w..=w)
        }
        [lo, hi] => {
            let lo = lo.trim().parse::<u32>().map_err(|_| bad_widths(text))?;
            let hi = hi.trim().parse::<u32>().map_err(|_| bad_widths(text))?;
            Ok(lo..=hi)
        }
        _ => Err(bad_widths(text)),
    }
}

fn bad_widths(text: &str) -> String {
    format!("bad width range `{text}`: expected `a..b` or a single width")
}

fn write_output(path: Option<&std::path::Path>, contents: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, contents).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}
