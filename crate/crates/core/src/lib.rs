//! Exact-arithmetic analysis of sender-receiver persuasion games with
//! verifiable messages.
//!
//! A sender observes a state of the world and sends a verifiable message (a
//! set of states that must contain the truth); a receiver picks one of
//! finitely many actions. This crate computes what the sender can achieve
//! with commitment power (the information-design optimum), characterizes
//! which outcomes survive without commitment as perfect Bayesian equilibria,
//! and constructs equilibria that close the gap in a variant where the
//! message space is randomized through payoff-irrelevant labels.
//!
//! Everything runs on arbitrary-precision rationals: incentive and obedience
//! constraints are weak inequalities that floating point would misjudge at
//! boundaries, and the interesting examples sit exactly on those boundaries.
//!
//! Module map:
//! - [`rational`]: the exact scalar type and its `"p/q"` text form.
//! - [`simplex`]: an exact simplex LP solver with Bland's pivot rule.
//! - [`game`]: finite persuasion games, outcomes, incentive-compatibility and
//!   obedience checks.
//! - [`commitment`]: the commitment (information design) linear program,
//!   deterministic-commitment search, and binary-action specializations.
//! - [`equilibrium`]: construction and brute-force verification of perfect
//!   Bayesian equilibria over the full message lattice.
//! - [`smm`]: the stochastic-message-mapping game; purifies mixed outcomes
//!   into pure-strategy equilibria via label partitions of `[0,1]`.
//! - [`interval`]: games on the state space `[0,1]` with posterior-mean
//!   receiver preferences: exact evaluation, moment-preserving purification,
//!   and grid discretization.
//! - [`io`]: JSON file formats shared by the CLI and the test fixtures.

// Error enums carry exact rational slacks by value; their size is the point.
#![allow(clippy::result_large_err)]

pub mod commitment;
pub mod equilibrium;
pub mod game;
pub mod interval;
pub mod io;
pub mod rational;
mod search;
pub mod simplex;
pub mod smm;

pub use game::{GameSpec, Outcome, Partition};
pub use rational::Rational;
