//! The disclosure game with a stochastic message mapping: the sender also
//! observes a payoff-irrelevant label `x` drawn uniformly from a cell
//! `X^theta` of a partition of `[0,1]` with `lambda(X^theta) =
//! prior(theta)`, and messages are verifiable statements about the label.
//!
//! Randomizing the message space purifies mixed outcomes: to implement an
//! outcome `alpha`, cut each `X^theta` into sub-intervals `X^theta_j` with
//! length fractions `alpha(j|theta)` and pool `W_j = union of X^theta_j`
//! across states. The sender announces the pooled set containing his label,
//! the receiver plays `j` after `W_j` (obedience of `alpha` makes that a
//! best response to the induced posterior), and off path she is skeptical
//! exactly as in the base game. Both players end up in pure strategies.
//!
//! Every label in `X^theta_j` must prefer its on-path payoff `v(j)` to
//! revealing the label outright, which earns the complete-information floor
//! `v_lower(theta)`. So the construction needs `v(j) >= v_lower(theta)` for
//! *every* action in the outcome's support at `theta`, a per-label
//! sharpening of plain incentive compatibility (the two coincide for
//! deterministic outcomes and for binary actions). [`construct_smm_equilibrium`]
//! refuses outcomes that fail it, naming the offending state and action;
//! [`verify_smm_equilibrium`] checks the same finite reduction.

use crate::game::{check_obedience, GameError, GameSpec, Outcome};
use crate::rational::Rational;

/// A labeled sub-interval of `[0,1]`: labels in `[lo, hi)` belong to
/// `state`, and `action` records the pooled recommendation they carry (once
/// constructed). The final interval of a partition closes at 1; endpoint
/// conventions carry no measure and never affect the analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub state: usize,
    pub action: Option<usize>,
}

impl LabelInterval {
    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// A pure-strategy equilibrium of the label game, stored as the refined
/// label partition plus the pooled-message tables derived from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmmEquilibrium {
    n_states: usize,
    n_actions: usize,
    labels: Vec<LabelInterval>,
    /// Per action: the pooled message `W_j` as a sorted list of disjoint
    /// intervals (adjacent runs merged), possibly empty.
    pooled: Vec<Vec<(Rational, Rational)>>,
    /// Per action with positive pooled mass: the receiver's posterior over
    /// states after `W_j`.
    posteriors: Vec<Option<Vec<Rational>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SmmError {
    #[error("label intervals must tile [0,1]: interval {index} starts at {got}, expected {expected}")]
    Gap { index: usize, got: Rational, expected: Rational },
    #[error("label interval {index} is empty or reversed")]
    EmptyInterval { index: usize },
    #[error("label interval {index} names state {}, the game has {states}", .state + 1)]
    StateRange { index: usize, state: usize, states: usize },
    #[error("label interval {index} names action {}, the game has {actions}", .action + 1)]
    ActionRange { index: usize, action: usize, actions: usize },
    #[error("label interval {index} carries no action")]
    MissingAction { index: usize },
    #[error("state {} labels cover mass {got}, its prior is {expected}", .state + 1)]
    StateMass { state: usize, got: Rational, expected: Rational },
    #[error("state {} label [{lo}, {hi}) lies outside its prior cell", .state + 1)]
    StateCell { state: usize, lo: Rational, hi: Rational },
    #[error("posterior table must have one entry per action with pooled mass")]
    PosteriorShape,
    #[error("posterior after pooled message {} sums to {sum}, not 1, or has a negative entry", .action + 1)]
    PosteriorDistribution { action: usize, sum: Rational },
    #[error("outcome is not obedient: action {} against {} has slack {slack}", .action + 1, .against + 1)]
    NotObedient { action: usize, against: usize, slack: Rational },
    #[error(
        "state {} plays action {} with positive probability but its payoff {payoff} \
         is below the revelation floor {floor}; labels carrying that action would deviate",
        .state + 1, .action + 1
    )]
    PerLabelIncentive { state: usize, action: usize, payoff: Rational, floor: Rational },
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Cut `[0,1]` into consecutive state cells with lengths equal to the prior:
/// `X^theta = [t_{theta-1}, t_theta)` with `t` the cumulative prior.
pub fn build_label_partition(prior: &[Rational]) -> Vec<LabelInterval> {
    let mut out = Vec::with_capacity(prior.len());
    let mut cursor = Rational::zero();
    for (state, mass) in prior.iter().enumerate() {
        let hi = &cursor + mass;
        out.push(LabelInterval { lo: cursor, hi: hi.clone(), state, action: None });
        cursor = hi;
    }
    debug_assert_eq!(cursor, Rational::one());
    out
}

impl SmmEquilibrium {
    /// Validate a refined label partition against the game and derive the
    /// pooled messages and posteriors. Structural checks only; behavioral
    /// conditions belong to [`verify_smm_equilibrium`].
    pub fn from_labels(
        game: &GameSpec,
        labels: Vec<LabelInterval>,
    ) -> Result<Self, SmmError> {
        let n = game.state_count();
        let k = game.action_count();
        let cells = build_label_partition(game.prior());

        let mut cursor = Rational::zero();
        let mut state_mass = vec![Rational::zero(); n];
        for (index, label) in labels.iter().enumerate() {
            if label.lo != cursor {
                return Err(SmmError::Gap { index, got: label.lo.clone(), expected: cursor });
            }
            if label.hi <= label.lo {
                return Err(SmmError::EmptyInterval { index });
            }
            if label.state >= n {
                return Err(SmmError::StateRange { index, state: label.state, states: n });
            }
            match label.action {
                None => return Err(SmmError::MissingAction { index }),
                Some(a) if a >= k => {
                    return Err(SmmError::ActionRange { index, action: a, actions: k })
                }
                Some(_) => {}
            }
            let cell = &cells[label.state];
            if label.lo < cell.lo || label.hi > cell.hi {
                return Err(SmmError::StateCell {
                    state: label.state,
                    lo: label.lo.clone(),
                    hi: label.hi.clone(),
                });
            }
            state_mass[label.state] += label.length();
            cursor = label.hi.clone();
        }
        if cursor != Rational::one() {
            return Err(SmmError::Gap {
                index: labels.len(),
                got: Rational::one(),
                expected: cursor,
            });
        }
        for state in 0..n {
            if &state_mass[state] != game.prior_of(state) {
                return Err(SmmError::StateMass {
                    state,
                    got: state_mass[state].clone(),
                    expected: game.prior_of(state).clone(),
                });
            }
        }

        let (pooled, posteriors) = derive_tables(game, &labels);
        Ok(SmmEquilibrium { n_states: n, n_actions: k, labels, pooled, posteriors })
    }

    pub fn labels(&self) -> &[LabelInterval] {
        &self.labels
    }

    /// The pooled message `W_action` as sorted disjoint intervals.
    pub fn pooled_message(&self, action: usize) -> &[(Rational, Rational)] {
        &self.pooled[action]
    }

    pub fn pooled_mass(&self, action: usize) -> Rational {
        self.pooled[action].iter().map(|(lo, hi)| hi - lo).sum()
    }

    /// The stored posterior over states after `W_action`, if that pooled
    /// message has positive mass.
    pub fn posterior(&self, action: usize) -> Option<&[Rational]> {
        self.posteriors[action].as_deref()
    }

    /// Mass of labels of `state` pooled into `action`.
    pub fn label_mass(&self, state: usize, action: usize) -> Rational {
        self.labels
            .iter()
            .filter(|l| l.state == state && l.action == Some(action))
            .map(LabelInterval::length)
            .sum()
    }

    /// The outcome the label assignment induces:
    /// `alpha(j|theta) = lambda(X^theta_j) / prior(theta)`.
    pub fn induced_outcome(&self, game: &GameSpec) -> Outcome {
        let alpha: Vec<Vec<Rational>> = (0..self.n_actions)
            .map(|j| {
                (0..self.n_states)
                    .map(|t| self.label_mass(t, j) / game.prior_of(t))
                    .collect()
            })
            .collect();
        Outcome::new(alpha).expect("label masses per state sum to the prior")
    }
}

fn derive_tables(
    game: &GameSpec,
    labels: &[LabelInterval],
) -> (Vec<Vec<(Rational, Rational)>>, Vec<Option<Vec<Rational>>>) {
    let n = game.state_count();
    let k = game.action_count();
    let mut pooled: Vec<Vec<(Rational, Rational)>> = vec![Vec::new(); k];
    let mut mass = vec![vec![Rational::zero(); n]; k];
    for label in labels {
        let j = label.action.expect("validated");
        match pooled[j].last_mut() {
            Some((_, hi)) if *hi == label.lo => *hi = label.hi.clone(),
            _ => pooled[j].push((label.lo.clone(), label.hi.clone())),
        }
        mass[j][label.state] += label.length();
    }
    let posteriors = (0..k)
        .map(|j| {
            let total: Rational = mass[j].iter().sum();
            if total.is_positive() {
                Some(mass[j].iter().map(|m| m / &total).collect())
            } else {
                None
            }
        })
        .collect();
    (pooled, posteriors)
}

/// Implement an outcome as a pure-strategy equilibrium of the label game.
///
/// Each state cell is split in ascending action order (lowest action
/// leftmost) with lengths `prior(theta) * alpha(j|theta)`. Requires the
/// outcome to be obedient and to clear the per-label incentive condition
/// `v(j) >= v_lower(theta)` on its whole support; refuses otherwise,
/// reporting the failing slack.
pub fn construct_smm_equilibrium(
    game: &GameSpec,
    outcome: &Outcome,
) -> Result<SmmEquilibrium, SmmError> {
    outcome.check_dims(game)?;

    for state in 0..game.state_count() {
        let floor = game.v_lower(state);
        for action in outcome.support(state) {
            if *game.payoff(action) < floor {
                return Err(SmmError::PerLabelIncentive {
                    state,
                    action,
                    payoff: game.payoff(action).clone(),
                    floor,
                });
            }
        }
    }
    let ob = check_obedience(game, outcome);
    if !ob.passed {
        for (j, row) in ob.obedience_slack.iter().enumerate() {
            if let Some(j2) = row.iter().position(|s| s.is_negative()) {
                return Err(SmmError::NotObedient {
                    action: j,
                    against: j2,
                    slack: row[j2].clone(),
                });
            }
        }
        unreachable!("a failed check has a negative slack");
    }

    let mut labels = Vec::new();
    let mut cursor = Rational::zero();
    for state in 0..game.state_count() {
        for action in 0..game.action_count() {
            let weight = outcome.prob(action, state);
            if !weight.is_positive() {
                continue;
            }
            let hi = &cursor + &(game.prior_of(state) * weight);
            labels.push(LabelInterval {
                lo: cursor,
                hi: hi.clone(),
                state,
                action: Some(action),
            });
            cursor = hi;
        }
    }
    debug_assert_eq!(cursor, Rational::one());

    SmmEquilibrium::from_labels(game, labels)
}

/// One failed receiver-optimality check after a pooled message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmmReceiverViolation {
    /// The pooled message (indexed by its recommended action).
    pub action: usize,
    pub better_action: usize,
    pub gain: Rational,
}

/// A state/action pair whose labels would rather reveal themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmmSenderViolation {
    pub state: usize,
    pub action: usize,
    /// How much the revelation floor exceeds the on-path payoff.
    pub gain: Rational,
}

/// Result of [`verify_smm_equilibrium`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmmVerificationReport {
    pub is_equilibrium: bool,
    pub receiver_violations: Vec<SmmReceiverViolation>,
    pub sender_violations: Vec<SmmSenderViolation>,
    /// Pooled messages whose stored posterior is not the exact Bayes
    /// posterior of the label masses.
    pub posterior_violations: Vec<usize>,
    pub induced_outcome: Outcome,
}

/// Check the label-game equilibrium conditions, exactly, via their finite
/// reduction.
///
/// - Receiver: after each pooled message with positive mass, the
///   recommended action maximizes expected utility under the stored
///   posterior.
/// - Sender: payoffs depend on a label only through its interval, and the
///   best deviation from any label is full revelation, which earns the
///   state's floor; so it suffices that `v(j) >= v_lower(state)` whenever
///   state labels carry action `j`. Deviations to other pooled messages are
///   unavailable pointwise because the pooled messages partition the label
///   space.
/// - Posteriors: the stored tables equal the Bayes posteriors of the label
///   masses.
pub fn verify_smm_equilibrium(
    game: &GameSpec,
    e: &SmmEquilibrium,
) -> Result<SmmVerificationReport, SmmError> {
    if e.n_states != game.state_count() || e.n_actions != game.action_count() {
        return Err(GameError::OutcomeActionCount {
            got: e.n_actions,
            actions: game.action_count(),
        }
        .into());
    }
    let n = game.state_count();
    let k = game.action_count();

    let mut posterior_violations = Vec::new();
    let mut receiver_violations = Vec::new();
    for j in 0..k {
        let Some(stored) = e.posterior(j) else {
            continue;
        };
        check_posterior_shape(j, stored, n)?;
        let total: Rational = (0..n).map(|t| e.label_mass(t, j)).sum();
        let bayes: Vec<Rational> = (0..n).map(|t| e.label_mass(t, j) / &total).collect();
        if stored != bayes.as_slice() {
            posterior_violations.push(j);
        }
        let expected: Vec<Rational> = (0..k)
            .map(|j2| (0..n).map(|t| game.utility(j2, t) * &stored[t]).sum())
            .collect();
        let best = (0..k).max_by(|&a, &b| expected[a].cmp(&expected[b])).expect("k >= 2");
        if expected[j] < expected[best] {
            receiver_violations.push(SmmReceiverViolation {
                action: j,
                better_action: best,
                gain: &expected[best] - &expected[j],
            });
        }
    }

    let mut sender_violations = Vec::new();
    for state in 0..n {
        let floor = game.v_lower(state);
        for action in 0..k {
            if e.label_mass(state, action).is_positive() && *game.payoff(action) < floor {
                sender_violations.push(SmmSenderViolation {
                    state,
                    action,
                    gain: &floor - game.payoff(action),
                });
            }
        }
    }

    let induced_outcome = e.induced_outcome(game);
    Ok(SmmVerificationReport {
        is_equilibrium: receiver_violations.is_empty()
            && sender_violations.is_empty()
            && posterior_violations.is_empty(),
        receiver_violations,
        sender_violations,
        posterior_violations,
        induced_outcome,
    })
}

fn check_posterior_shape(action: usize, dist: &[Rational], n: usize) -> Result<(), SmmError> {
    if dist.len() != n {
        return Err(SmmError::PosteriorShape);
    }
    let mut sum = Rational::zero();
    for p in dist {
        if p.is_negative() {
            return Err(SmmError::PosteriorDistribution { action, sum: p.clone() });
        }
        sum += p;
    }
    if sum != Rational::one() {
        return Err(SmmError::PosteriorDistribution { action, sum });
    }
    Ok(())
}
