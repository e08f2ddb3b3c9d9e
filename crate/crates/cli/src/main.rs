//! Command-line front end for the persuasion-game solvers.
//!
//! One binary, verb-style subcommands; see `persuasion --help`. Game and
//! outcome files use the JSON formats of `persuasion_core::io`, and machine
//! reports embed those same formats so outputs compose as inputs.
//!
//! Exit status: 0 on success, 1 when an analysis refuses its input (for
//! example a constructor given an outcome that fails incentive
//! compatibility, or an enumeration exceeding its budget), 2 on usage,
//! parse, or validation errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use persuasion_core::commitment::{
    decide_commitment_in_equilibrium, solve_commitment, DEFAULT_ENUMERATION_BUDGET,
};
use persuasion_core::equilibrium::{
    construct_recommendation_equilibrium, enumerate_equilibrium_outcomes, verify_equilibrium,
    EquilibriumError, VerificationReport,
};
use persuasion_core::game::{
    check_ic, check_obedience, outcome_payoffs, GameSpec, Outcome, Partition,
};
use persuasion_core::interval::{
    discretize_game, evaluate_interval_outcome, purify_interval_outcome, MeanThresholdGame,
};
use persuasion_core::io::{
    self, equilibrium_to_json, game_to_json, interval_outcome_to_json, outcome_to_json,
    partition_to_json, smm_to_json, ParsedGameFile,
};
use persuasion_core::rational::Rational;
use persuasion_core::smm::{construct_smm_equilibrium, verify_smm_equilibrium, SmmError};

#[derive(Parser)]
#[command(
    name = "persuasion",
    about = "Exact solvers and verifiers for persuasion games with verifiable messages",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the commitment (information design) problem of a finite game.
    Solve {
        /// Path to a finite game file.
        game: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check an outcome: incentive compatibility and obedience for finite
    /// games, exact moment evaluation for interval games.
    Check {
        game: PathBuf,
        /// Outcome file (finite or interval, matching the game).
        #[arg(long)]
        outcome: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Enumerate deterministic equilibrium outcomes, construct the
    /// recommendation equilibrium of a partition, or verify an equilibrium
    /// file.
    Equilibrium {
        game: PathBuf,
        /// Comma-separated 1-based action per state, e.g. `1,2`.
        #[arg(long, conflicts_with = "equilibrium")]
        partition: Option<String>,
        /// Equilibrium file to verify.
        #[arg(long)]
        equilibrium: Option<PathBuf>,
        /// Node budget for the enumeration search.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Construct and verify a stochastic-message-mapping equilibrium
    /// implementing an outcome.
    Smm {
        game: PathBuf,
        #[arg(long)]
        outcome: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Decide whether the commitment payoff is attainable in equilibrium.
    Gap {
        game: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Purify a mixed interval outcome into a deterministic one with the
    /// same per-action masses and first moments.
    Purify {
        game: PathBuf,
        #[arg(long)]
        outcome: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Discretize an interval game onto a uniform grid of states.
    Discretize {
        game: PathBuf,
        /// Number of grid cells.
        #[arg(long)]
        grid: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Failures mapped to exit statuses: usage/parse/validation problems exit
/// 2, analyses that refuse their input exit 1.
enum CliError {
    Usage(String),
    Refusal(String),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }

    fn refusal(e: impl std::fmt::Display) -> Self {
        CliError::Refusal(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            println!("{report}");
            ExitCode::SUCCESS
        }
        Err(CliError::Refusal(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_game(path: &Path) -> Result<ParsedGameFile, CliError> {
    io::parse_game_str(&read(path)?).map_err(CliError::usage)
}

fn load_finite(path: &Path) -> Result<GameSpec, CliError> {
    match load_game(path)? {
        ParsedGameFile::Finite(g) => Ok(g),
        ParsedGameFile::Interval(_) => Err(CliError::Usage(format!(
            "{} is an interval game; this command needs a finite game (try `discretize` first)",
            path.display()
        ))),
    }
}

fn load_interval(path: &Path) -> Result<MeanThresholdGame, CliError> {
    match load_game(path)? {
        ParsedGameFile::Interval(g) => Ok(g),
        ParsedGameFile::Finite(_) => Err(CliError::Usage(format!(
            "{} is a finite game; this command needs an interval game",
            path.display()
        ))),
    }
}

fn load_outcome(path: &Path, game: &GameSpec) -> Result<Outcome, CliError> {
    let outcome = io::parse_outcome_str(&read(path)?).map_err(CliError::usage)?;
    outcome.check_dims(game).map_err(CliError::usage)?;
    Ok(outcome)
}

fn emit(format: Format, machine: Value, text: String) -> String {
    match format {
        Format::Machine => serde_json::to_string_pretty(&machine).expect("valid JSON"),
        Format::Text => text,
    }
}

fn rationals(xs: &[Rational]) -> String {
    xs.iter().map(Rational::to_string).collect::<Vec<_>>().join(", ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn outcome_text(outcome: &Outcome) -> String {
    let mut s = String::new();
    for (j, row) in outcome.rows().iter().enumerate() {
        let _ = writeln!(s, "  action {}: {}", j + 1, rationals(row));
    }
    s
}

/// `[lo, hi)`, closing at the right end of the label space.
fn interval_str(lo: &Rational, hi: &Rational) -> String {
    if *hi == Rational::one() {
        format!("[{lo}, 1]")
    } else {
        format!("[{lo}, {hi})")
    }
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Solve { game, format } => {
            let g = load_finite(&game)?;
            let sol = solve_commitment(&g);
            let machine = json!({
                "commitment_payoff": sol.payoff.to_string(),
                "deterministic": sol.is_deterministic,
                "ic": sol.ic,
                "outcome": outcome_to_json(&sol.outcome),
            });
            let text = format!(
                "commitment payoff: {}\noptimal outcome (rows actions, columns states):\n{}deterministic: {}\nincentive-compatible: {}",
                sol.payoff,
                outcome_text(&sol.outcome),
                yes_no(sol.is_deterministic),
                yes_no(sol.ic),
            );
            Ok(emit(format, machine, text))
        }

        Command::Check { game, outcome, format } => match load_game(&game)? {
            ParsedGameFile::Finite(g) => {
                let o = load_outcome(&outcome, &g)?;
                let ic = check_ic(&g, &o);
                let ob = check_obedience(&g, &o);
                let (interim, ex_ante) = outcome_payoffs(&g, &o);
                let machine = json!({
                    "ex_ante": ex_ante.to_string(),
                    "interim": io::rational_array(&interim),
                    "ic": ic.passed,
                    "ic_slack": io::rational_array(&ic.per_state_ic_slack),
                    "obedient": ob.passed,
                    "obedience_slack": Value::Array(
                        ob.obedience_slack.iter().map(|r| io::rational_array(r)).collect()
                    ),
                });
                let mut slack_text = String::new();
                for (j, row) in ob.obedience_slack.iter().enumerate() {
                    let _ = writeln!(slack_text, "  action {} vs others: {}", j + 1, rationals(row));
                }
                let text = format!(
                    "ex-ante payoff: {ex_ante}\ninterim payoffs: {}\nincentive-compatible: {} (slacks: {})\nobedient: {}\nobedience slack:\n{slack_text}",
                    rationals(&interim),
                    yes_no(ic.passed),
                    rationals(&ic.per_state_ic_slack),
                    yes_no(ob.passed),
                );
                Ok(emit(format, machine, text))
            }
            ParsedGameFile::Interval(g) => {
                let o = io::parse_interval_outcome_str(&read(&outcome)?).map_err(CliError::usage)?;
                let eval = evaluate_interval_outcome(&g, &o).map_err(CliError::usage)?;
                Ok(emit(format, interval_eval_json(&g, &eval), interval_eval_text(&g, &eval)))
            }
        },

        Command::Equilibrium { game, partition, equilibrium, budget, format } => {
            let g = load_finite(&game)?;
            match (partition, equilibrium) {
                (Some(arg), None) => {
                    let p = parse_partition_flag(&arg, &g)?;
                    let e = construct_recommendation_equilibrium(&g, &p)
                        .map_err(construct_refusal)?;
                    let report = verify_equilibrium(&g, &e).map_err(CliError::refusal)?;
                    let (_, ex_ante) = outcome_payoffs(&g, &report.induced_outcome);
                    let machine = json!({
                        "equilibrium": equilibrium_to_json(&e),
                        "verified": report.is_equilibrium,
                        "induced_outcome": outcome_to_json(&report.induced_outcome),
                        "ex_ante": ex_ante.to_string(),
                    });
                    let text = format!(
                        "constructed recommendation equilibrium for partition {p}\nverified: {}\nex-ante payoff: {ex_ante}",
                        yes_no(report.is_equilibrium),
                    );
                    Ok(emit(format, machine, text))
                }
                (None, Some(path)) => {
                    let e = io::parse_equilibrium_str(&g, &read(&path)?).map_err(CliError::usage)?;
                    let report = verify_equilibrium(&g, &e).map_err(CliError::refusal)?;
                    let (_, ex_ante) = outcome_payoffs(&g, &report.induced_outcome);
                    Ok(emit(
                        format,
                        verification_json(&report, &ex_ante),
                        verification_text(&report, &ex_ante),
                    ))
                }
                (None, None) => {
                    let outcomes =
                        enumerate_equilibrium_outcomes(&g, budget).map_err(CliError::refusal)?;
                    let payoffs: Vec<Rational> = outcomes
                        .iter()
                        .map(|p| outcome_payoffs(&g, &p.to_outcome(g.action_count())).1)
                        .collect();
                    let machine = json!({
                        "count": outcomes.len(),
                        "outcomes": Value::Array(outcomes.iter().map(partition_to_json).collect()),
                        "payoffs": io::rational_array(&payoffs),
                    });
                    let mut text =
                        format!("deterministic equilibrium outcomes: {}\n", outcomes.len());
                    for (p, v) in outcomes.iter().zip(&payoffs) {
                        let _ = writeln!(text, "  {p}  payoff {v}");
                    }
                    Ok(emit(format, machine, text))
                }
                (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
            }
        }

        Command::Smm { game, outcome, format } => {
            let g = load_finite(&game)?;
            let o = load_outcome(&outcome, &g)?;
            let e = construct_smm_equilibrium(&g, &o).map_err(smm_refusal)?;
            let report = verify_smm_equilibrium(&g, &e).map_err(CliError::refusal)?;
            let (_, ex_ante) = outcome_payoffs(&g, &report.induced_outcome);
            let machine = json!({
                "equilibrium": smm_to_json(&e, &g),
                "verified": report.is_equilibrium,
                "induced_outcome": outcome_to_json(&report.induced_outcome),
                "ex_ante": ex_ante.to_string(),
            });
            let mut text = String::from("label partition:\n");
            for l in e.labels() {
                let _ = writeln!(
                    text,
                    "  {}  state {} -> action {}",
                    interval_str(&l.lo, &l.hi),
                    l.state + 1,
                    l.action.map(|a| a + 1).unwrap_or(0),
                );
            }
            for j in 0..g.action_count() {
                if let Some(q) = e.posterior(j) {
                    let _ = writeln!(
                        text,
                        "pooled message for action {}: mass {}, posterior {}",
                        j + 1,
                        e.pooled_mass(j),
                        rationals(q),
                    );
                }
            }
            let _ = write!(
                text,
                "verified: {}\nex-ante payoff: {ex_ante}",
                yes_no(report.is_equilibrium)
            );
            Ok(emit(format, machine, text))
        }

        Command::Gap { game, budget, format } => {
            let g = load_finite(&game)?;
            let verdict = decide_commitment_in_equilibrium(&g, budget).map_err(CliError::refusal)?;
            let machine = json!({
                "commitment_payoff": verdict.commitment_payoff.to_string(),
                "attainable": verdict.attainable,
                "gap": verdict.gap.to_string(),
                "witness": verdict.witness.as_ref().map(partition_to_json).unwrap_or(Value::Null),
            });
            let text = format!(
                "commitment payoff: {}\nattainable in equilibrium: {}\ngap: {}\nwitness: {}",
                verdict.commitment_payoff,
                yes_no(verdict.attainable),
                verdict.gap,
                verdict.witness.as_ref().map_or("none".to_string(), |p| p.to_string()),
            );
            Ok(emit(format, machine, text))
        }

        Command::Purify { game, outcome, format } => {
            let g = load_interval(&game)?;
            let o = io::parse_interval_outcome_str(&read(&outcome)?).map_err(CliError::usage)?;
            let pure = purify_interval_outcome(&g, &o).map_err(CliError::usage)?;
            let eval = evaluate_interval_outcome(&g, &pure).map_err(CliError::usage)?;
            let machine = json!({
                "outcome": interval_outcome_to_json(&pure),
                "evaluation": interval_eval_json(&g, &eval),
            });
            let mut text = String::from("purified outcome:\n");
            for p in pure.pieces() {
                let _ = writeln!(
                    text,
                    "  {}  action {}",
                    interval_str(&p.lo, &p.hi),
                    p.support().first().map(|a| a + 1).unwrap_or(0),
                );
            }
            let _ = write!(text, "{}", interval_eval_text(&g, &eval));
            Ok(emit(format, machine, text))
        }

        Command::Discretize { game, grid, format } => {
            let g = load_interval(&game)?;
            let d = discretize_game(&g, grid).map_err(CliError::usage)?;
            let machine = game_to_json(&d);
            let text = serde_json::to_string_pretty(&machine).expect("valid JSON");
            Ok(emit(format, machine, text))
        }
    }
}

fn parse_partition_flag(arg: &str, game: &GameSpec) -> Result<Partition, CliError> {
    let actions = arg
        .split(',')
        .map(|tok| {
            let a: usize = tok
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad action index `{tok}` in --partition")))?;
            if a == 0 {
                return Err(CliError::Usage("--partition uses 1-based action indices".into()));
            }
            Ok(a - 1)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Partition::new(actions, game).map_err(CliError::usage)
}

/// Constructor preconditions are analysis refusals; structural problems are
/// usage errors.
fn construct_refusal(e: EquilibriumError) -> CliError {
    match e {
        EquilibriumError::NotIc { .. }
        | EquilibriumError::NotObedient { .. }
        | EquilibriumError::TooManyStates { .. } => CliError::refusal(e),
        other => CliError::usage(other),
    }
}

fn smm_refusal(e: SmmError) -> CliError {
    match e {
        SmmError::NotObedient { .. } | SmmError::PerLabelIncentive { .. } => CliError::refusal(e),
        other => CliError::usage(other),
    }
}

fn verification_json(report: &VerificationReport, ex_ante: &Rational) -> Value {
    json!({
        "is_equilibrium": report.is_equilibrium,
        "sender_violations": Value::Array(
            report
                .sender_violations
                .iter()
                .map(|v| {
                    json!({
                        "state": v.state + 1,
                        "message": message_json(v.message),
                        "better_message": message_json(v.better_message),
                        "gain": v.gain.to_string(),
                    })
                })
                .collect()
        ),
        "receiver_violations": Value::Array(
            report
                .receiver_violations
                .iter()
                .map(|v| {
                    json!({
                        "message": message_json(v.message),
                        "action": v.action + 1,
                        "better_action": v.better_action + 1,
                        "gain": v.gain.to_string(),
                    })
                })
                .collect()
        ),
        "bayes_violations": Value::Array(
            report.bayes_violations.iter().map(|m| message_json(*m)).collect()
        ),
        "induced_outcome": outcome_to_json(&report.induced_outcome),
        "ex_ante": ex_ante.to_string(),
    })
}

fn message_json(m: persuasion_core::equilibrium::Message) -> Value {
    Value::Array(m.states().iter().map(|&t| json!(t + 1)).collect())
}

fn verification_text(report: &VerificationReport, ex_ante: &Rational) -> String {
    let mut text = format!("equilibrium: {}\n", yes_no(report.is_equilibrium));
    for v in &report.sender_violations {
        let _ = writeln!(
            text,
            "  sender deviates in state {}: {} beats {} by {}",
            v.state + 1,
            v.better_message,
            v.message,
            v.gain,
        );
    }
    for v in &report.receiver_violations {
        let _ = writeln!(
            text,
            "  receiver deviates after {}: action {} beats {} by {}",
            v.message,
            v.better_action + 1,
            v.action + 1,
            v.gain,
        );
    }
    for m in &report.bayes_violations {
        let _ = writeln!(text, "  beliefs after {m} are not the Bayes posterior");
    }
    let _ = write!(text, "induced ex-ante payoff: {ex_ante}");
    text
}

fn interval_eval_json(
    g: &MeanThresholdGame,
    eval: &persuasion_core::interval::IntervalEvaluation,
) -> Value {
    let means: Vec<Value> = (0..g.action_count())
        .map(|j| eval.moments.mean(j).map_or(Value::Null, |m| Value::String(m.to_string())))
        .collect();
    json!({
        "ex_ante": eval.ex_ante.to_string(),
        "obedient": eval.obedient,
        "ic": eval.ic,
        "mass": io::rational_array(&eval.moments.mass),
        "first_moment": io::rational_array(&eval.moments.first_moment),
        "means": Value::Array(means),
    })
}

fn interval_eval_text(
    g: &MeanThresholdGame,
    eval: &persuasion_core::interval::IntervalEvaluation,
) -> String {
    let mut text = String::new();
    for j in 0..g.action_count() {
        let mean =
            eval.moments.mean(j).map_or("-".to_string(), |m| m.to_string());
        let _ = writeln!(
            text,
            "action {}: mass {}, first moment {}, mean {}",
            j + 1,
            eval.moments.mass[j],
            eval.moments.first_moment[j],
            mean,
        );
    }
    let _ = write!(
        text,
        "obedient: {}\nincentive-compatible: {}\nex-ante payoff: {}",
        yes_no(eval.obedient),
        yes_no(eval.ic),
        eval.ex_ante,
    );
    text
}
