//! JSON file formats for games, outcomes, and equilibria.
//!
//! Every rational serializes as the string `"p/q"` (or `"p"` for integers).
//! Matrices are positional; explicit state and action indices (messages,
//! labels, partitions) are 1-based in files and reports, 0-based inside the
//! library.
//!
//! Finite game:
//! `{"states": 2, "prior": ["7/10","3/10"],
//!   "receiver_utility": [["1","0"],["0","1"]], "sender_payoff": ["0","1"]}`
//! where `receiver_utility[j-1][theta-1] = u(j, theta)`.
//!
//! Interval game: `{"cutoffs": ["0","1/3","2/3","1"], "sender_payoff": ["0","1","3"]}`.
//! The two are distinguished by the presence of `"cutoffs"` vs `"states"`.
//!
//! Outcome: `{"alpha": [["4/7","0"],["3/7","1"]]}` with `alpha[j-1][theta-1]`.
//! Interval outcome: `{"pieces": [{"lo":"0","hi":"1/6","weights":["1","0","0"]}, ...]}`.
//!
//! Equilibrium: the sender is a per-state list of `[message, probability]`
//! pairs, the receiver a list of `[message, action distribution]` covering
//! every nonempty message, beliefs analogous; messages are sorted 1-based
//! state lists.

use serde_json::{json, Map, Value};

use crate::equilibrium::{Equilibrium, EquilibriumError, Message};
use crate::game::{GameError, GameSpec, Outcome, Partition};
use crate::interval::{IntervalError, IntervalOutcome, MeanThresholdGame, Piece};
use crate::rational::{Rational, RationalError};
use crate::smm::SmmEquilibrium;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{path}`: expected {expected}")]
    Field { path: String, expected: &'static str },
    #[error("field `{path}`: {source}")]
    Number { path: String, source: RationalError },
    #[error("a game file needs either \"states\" (finite game) or \"cutoffs\" (interval game)")]
    UnknownGameKind,
    #[error("receiver strategy or beliefs: message {message} listed twice")]
    DuplicateMessage { message: Message },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
}

/// A parsed game file: finite or interval, auto-detected.
#[derive(Clone, Debug)]
pub enum ParsedGameFile {
    Finite(GameSpec),
    Interval(MeanThresholdGame),
}

fn field<'v>(v: &'v Value, key: &str, path: &str) -> Result<&'v Value, IoError> {
    v.get(key).ok_or(IoError::Field { path: format!("{path}.{key}"), expected: "present" })
}

fn as_array<'v>(v: &'v Value, path: &str) -> Result<&'v Vec<Value>, IoError> {
    v.as_array().ok_or(IoError::Field { path: path.to_string(), expected: "an array" })
}

fn as_usize(v: &Value, path: &str) -> Result<usize, IoError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or(IoError::Field { path: path.to_string(), expected: "a nonnegative integer" })
}

fn as_rational(v: &Value, path: &str) -> Result<Rational, IoError> {
    match v {
        Value::String(s) => {
            s.parse().map_err(|source| IoError::Number { path: path.to_string(), source })
        }
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("i64"))),
        _ => Err(IoError::Field { path: path.to_string(), expected: "a rational string \"p/q\"" }),
    }
}

fn rational_vec(v: &Value, path: &str) -> Result<Vec<Rational>, IoError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_rational(x, &format!("{path}[{i}]")))
        .collect()
}

fn rational_matrix(v: &Value, path: &str) -> Result<Vec<Vec<Rational>>, IoError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, row)| rational_vec(row, &format!("{path}[{i}]")))
        .collect()
}

pub fn rational_array(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

/// Parse a game file, detecting the finite vs interval format.
pub fn parse_game_str(s: &str) -> Result<ParsedGameFile, IoError> {
    let v: Value = serde_json::from_str(s)?;
    if v.get("cutoffs").is_some() {
        let cutoffs = rational_vec(field(&v, "cutoffs", "")?, ".cutoffs")?;
        let payoff = rational_vec(field(&v, "sender_payoff", "")?, ".sender_payoff")?;
        return Ok(ParsedGameFile::Interval(MeanThresholdGame::new(cutoffs, payoff)?));
    }
    if v.get("states").is_none() {
        return Err(IoError::UnknownGameKind);
    }
    let states = as_usize(field(&v, "states", "")?, ".states")?;
    let prior = rational_vec(field(&v, "prior", "")?, ".prior")?;
    if prior.len() != states {
        return Err(IoError::Field {
            path: ".prior".into(),
            expected: "one entry per state",
        });
    }
    let utility = rational_matrix(field(&v, "receiver_utility", "")?, ".receiver_utility")?;
    let payoff = rational_vec(field(&v, "sender_payoff", "")?, ".sender_payoff")?;
    Ok(ParsedGameFile::Finite(GameSpec::new(prior, utility, payoff)?))
}

pub fn game_to_json(game: &GameSpec) -> Value {
    json!({
        "states": game.state_count(),
        "prior": rational_array(game.prior()),
        "receiver_utility": Value::Array(
            game.utility_rows().iter().map(|row| rational_array(row)).collect()
        ),
        "sender_payoff": rational_array(game.payoffs()),
    })
}

pub fn interval_game_to_json(game: &MeanThresholdGame) -> Value {
    json!({
        "cutoffs": rational_array(game.cutoffs()),
        "sender_payoff": rational_array(game.payoffs()),
    })
}

pub fn parse_outcome_str(s: &str) -> Result<Outcome, IoError> {
    let v: Value = serde_json::from_str(s)?;
    let alpha = rational_matrix(field(&v, "alpha", "")?, ".alpha")?;
    Ok(Outcome::new(alpha)?)
}

pub fn outcome_to_json(outcome: &Outcome) -> Value {
    json!({
        "alpha": Value::Array(outcome.rows().iter().map(|row| rational_array(row)).collect()),
    })
}

pub fn parse_interval_outcome_str(s: &str) -> Result<IntervalOutcome, IoError> {
    let v: Value = serde_json::from_str(s)?;
    let pieces = as_array(field(&v, "pieces", "")?, ".pieces")?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let path = format!(".pieces[{i}]");
            Ok(Piece {
                lo: as_rational(field(p, "lo", &path)?, &format!("{path}.lo"))?,
                hi: as_rational(field(p, "hi", &path)?, &format!("{path}.hi"))?,
                weights: rational_vec(
                    field(p, "weights", &path)?,
                    &format!("{path}.weights"),
                )?,
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(IntervalOutcome::new(pieces)?)
}

pub fn interval_outcome_to_json(outcome: &IntervalOutcome) -> Value {
    json!({
        "pieces": Value::Array(
            outcome
                .pieces()
                .iter()
                .map(|p| {
                    json!({
                        "lo": p.lo.to_string(),
                        "hi": p.hi.to_string(),
                        "weights": rational_array(&p.weights),
                    })
                })
                .collect()
        ),
    })
}

/// A partition as a 1-based action list, e.g. `[1, 2]`.
pub fn partition_to_json(p: &Partition) -> Value {
    Value::Array(p.assignments().iter().map(|&a| json!(a + 1)).collect())
}

pub fn parse_partition_json(v: &Value, game: &GameSpec, path: &str) -> Result<Partition, IoError> {
    let actions = as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let a = as_usize(x, &format!("{path}[{i}]"))?;
            if a == 0 {
                return Err(IoError::Field {
                    path: format!("{path}[{i}]"),
                    expected: "a 1-based action index",
                });
            }
            Ok(a - 1)
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(Partition::new(actions, game)?)
}

fn message_to_json(m: Message) -> Value {
    Value::Array(m.states().iter().map(|&t| json!(t + 1)).collect())
}

fn parse_message(v: &Value, n: usize, path: &str) -> Result<Message, IoError> {
    let states = as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let s = as_usize(x, &format!("{path}[{i}]"))?;
            if s == 0 {
                return Err(IoError::Field {
                    path: format!("{path}[{i}]"),
                    expected: "a 1-based state index",
                });
            }
            Ok(s - 1)
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(Message::from_states(&states, n)?)
}

/// Parse an equilibrium file against a game. The receiver strategy and the
/// belief system must cover every nonempty message.
pub fn parse_equilibrium_str(game: &GameSpec, s: &str) -> Result<Equilibrium, IoError> {
    let v: Value = serde_json::from_str(s)?;
    let n = game.state_count();

    let sender = as_array(field(&v, "sender", "")?, ".sender")?
        .iter()
        .enumerate()
        .map(|(state, entries)| {
            let path = format!(".sender[{state}]");
            as_array(entries, &path)?
                .iter()
                .enumerate()
                .map(|(i, pair)| {
                    let path = format!("{path}[{i}]");
                    let pair = as_array(pair, &path)?;
                    if pair.len() != 2 {
                        return Err(IoError::Field {
                            path,
                            expected: "a [message, probability] pair",
                        });
                    }
                    let m = parse_message(&pair[0], n, &format!("{path}[0]"))?;
                    let p = as_rational(&pair[1], &format!("{path}[1]"))?;
                    Ok((m, p))
                })
                .collect::<Result<Vec<_>, IoError>>()
        })
        .collect::<Result<Vec<_>, IoError>>()?;

    let receiver = parse_message_table(&v, "receiver", n, game.action_count())?;
    let beliefs = parse_message_table(&v, "beliefs", n, n)?;
    Ok(Equilibrium::new(game, sender, receiver, beliefs)?)
}

fn parse_message_table(
    v: &Value,
    key: &str,
    n: usize,
    dist_len: usize,
) -> Result<Vec<Vec<Rational>>, IoError> {
    let lattice = (1usize << n) - 1;
    let mut table: Vec<Option<Vec<Rational>>> = vec![None; lattice];
    for (i, pair) in as_array(field(v, key, "")?, &format!(".{key}"))?.iter().enumerate() {
        let path = format!(".{key}[{i}]");
        let pair = as_array(pair, &path)?;
        if pair.len() != 2 {
            return Err(IoError::Field { path, expected: "a [message, distribution] pair" });
        }
        let m = parse_message(&pair[0], n, &format!("{path}[0]"))?;
        let dist = rational_vec(&pair[1], &format!("{path}[1]"))?;
        if dist.len() != dist_len {
            return Err(IoError::Field {
                path: format!("{path}[1]"),
                expected: "a full-length distribution",
            });
        }
        if table[m.index()].is_some() {
            return Err(IoError::DuplicateMessage { message: m });
        }
        table[m.index()] = Some(dist);
    }
    table
        .into_iter()
        .enumerate()
        .map(|(i, entry)| {
            entry.ok_or(IoError::Field {
                path: format!(
                    ".{key}: message {}",
                    Message::from_mask(i as u32 + 1).expect("nonzero")
                ),
                expected: "an entry for every nonempty message",
            })
        })
        .collect()
}

pub fn equilibrium_to_json(e: &Equilibrium) -> Value {
    let n = e.state_count();
    let sender: Vec<Value> = (0..n)
        .map(|t| {
            Value::Array(
                e.sender_support(t)
                    .iter()
                    .map(|(m, p)| json!([message_to_json(*m), p.to_string()]))
                    .collect(),
            )
        })
        .collect();
    let table = |f: &dyn Fn(Message) -> Value| -> Value {
        Value::Array(Message::lattice(n).map(|m| json!([message_to_json(m), f(m)])).collect())
    };
    json!({
        "sender": sender,
        "receiver": table(&|m| rational_array(e.receiver_response(m))),
        "beliefs": table(&|m| rational_array(e.belief(m))),
    })
}

/// Serialize a label-game equilibrium: the labeled intervals, the pooled
/// message of each action, and the posterior table.
pub fn smm_to_json(e: &SmmEquilibrium, game: &GameSpec) -> Value {
    let labels: Vec<Value> = e
        .labels()
        .iter()
        .map(|l| {
            json!({
                "lo": l.lo.to_string(),
                "hi": l.hi.to_string(),
                "state": l.state + 1,
                "action": l.action.map(|a| a + 1),
            })
        })
        .collect();
    let pooled: Vec<Value> = (0..game.action_count())
        .map(|j| {
            Value::Array(
                e.pooled_message(j)
                    .iter()
                    .map(|(lo, hi)| json!([lo.to_string(), hi.to_string()]))
                    .collect(),
            )
        })
        .collect();
    let posteriors: Vec<Value> = (0..game.action_count())
        .map(|j| e.posterior(j).map_or(Value::Null, rational_array))
        .collect();
    let mut map = Map::new();
    map.insert("labels".into(), Value::Array(labels));
    map.insert("pooled_messages".into(), Value::Array(pooled));
    map.insert("posteriors".into(), Value::Array(posteriors));
    Value::Object(map)
}
