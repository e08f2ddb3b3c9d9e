//! Finite persuasion games and the two outcome tests that characterize
//! equilibrium outcomes.
//!
//! A game has `N >= 2` states with a full-support prior, `K >= 2` receiver
//! actions, a receiver utility `u(j, theta)` and a strictly increasing
//! sender payoff `v(j)` that depends on the action alone. An *outcome* maps
//! each state to a distribution over actions; the column `alpha[.][theta]`
//! is the probability of each action in state `theta`.
//!
//! Two properties matter everywhere downstream:
//!
//! - *Incentive compatibility* (of the sender): in each state the expected
//!   sender payoff is at least `v_lower(theta)`, what the sender would get by
//!   fully revealing the state to a receiver breaking ties against him.
//! - *Obedience* (of the receiver): each action, viewed as a pooled
//!   recommendation, maximizes the receiver's expected utility against the
//!   posterior over the states that recommend it.
//!
//! Both checks return exact slack data, not just booleans: the interesting
//! examples sit exactly on the boundary and tests assert those slacks are
//! exactly zero.
//!
//! Indices are 0-based throughout the library. File formats and display
//! strings are 1-based; the conversion happens at the I/O boundary.

use std::fmt;

use crate::rational::Rational;

/// A validated finite persuasion game. Immutable after construction; every
/// analysis takes the validated form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSpec {
    prior: Vec<Rational>,
    /// `utility[j][theta]`: receiver utility of action `j` in state `theta`.
    utility: Vec<Vec<Rational>>,
    /// `payoff[j]`: sender payoff of action `j`, strictly increasing in `j`.
    payoff: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("a game needs at least 2 states, got {0}")]
    TooFewStates(usize),
    #[error("a game needs at least 2 actions, got {0}")]
    TooFewActions(usize),
    #[error("receiver utility has {got} rows for {actions} actions")]
    UtilityRowCount { got: usize, actions: usize },
    #[error("prior sums to {sum}, not 1")]
    PriorMass { sum: Rational },
    #[error("state {} has prior probability {mass} (every state needs positive mass)", .state + 1)]
    PriorSupport { state: usize, mass: Rational },
    #[error("receiver utility row {} has {got} entries for {states} states", .row + 1)]
    UtilityRowLength { row: usize, got: usize, states: usize },
    #[error("sender payoff is not strictly increasing at actions {} and {}", .at + 1, .next + 1)]
    PayoffNotIncreasing { at: usize, next: usize },
    #[error("outcome has {got} action rows for {actions} actions")]
    OutcomeActionCount { got: usize, actions: usize },
    #[error("outcome row {row} has {got} entries, expected {states}")]
    OutcomeRowLength { row: usize, got: usize, states: usize },
    #[error("outcome column for state {} sums to {sum}, not 1", .state + 1)]
    OutcomeColumnMass { state: usize, sum: Rational },
    #[error("outcome entry for action {}, state {} is {value}, outside [0,1]", .action + 1, .state + 1)]
    OutcomeEntryRange { action: usize, state: usize, value: Rational },
    #[error("partition has {got} entries for {states} states")]
    PartitionLength { got: usize, states: usize },
    #[error("partition assigns action {} in state {}, but the game has {actions} actions", .action + 1, .state + 1)]
    PartitionActionRange { state: usize, action: usize, actions: usize },
}

impl GameSpec {
    /// Validate and construct a game: prior sums to one with full support,
    /// utility matrix is `K x N`, sender payoff strictly increasing.
    pub fn new(
        prior: Vec<Rational>,
        utility: Vec<Vec<Rational>>,
        payoff: Vec<Rational>,
    ) -> Result<Self, GameError> {
        let n = prior.len();
        let k = payoff.len();
        if n < 2 {
            return Err(GameError::TooFewStates(n));
        }
        if k < 2 {
            return Err(GameError::TooFewActions(k));
        }
        if utility.len() != k {
            return Err(GameError::UtilityRowCount { got: utility.len(), actions: k });
        }
        for (j, row) in utility.iter().enumerate() {
            if row.len() != n {
                return Err(GameError::UtilityRowLength { row: j, got: row.len(), states: n });
            }
        }
        let sum: Rational = prior.iter().sum();
        if sum != Rational::one() {
            return Err(GameError::PriorMass { sum });
        }
        for (theta, p) in prior.iter().enumerate() {
            if !p.is_positive() {
                return Err(GameError::PriorSupport { state: theta, mass: p.clone() });
            }
        }
        for j in 0..k - 1 {
            if payoff[j + 1] <= payoff[j] {
                return Err(GameError::PayoffNotIncreasing { at: j, next: j + 1 });
            }
        }
        Ok(GameSpec { prior, utility, payoff })
    }

    pub fn state_count(&self) -> usize {
        self.prior.len()
    }

    pub fn action_count(&self) -> usize {
        self.payoff.len()
    }

    pub fn prior(&self) -> &[Rational] {
        &self.prior
    }

    pub fn prior_of(&self, state: usize) -> &Rational {
        &self.prior[state]
    }

    /// Receiver utility `u(action, state)`.
    pub fn utility(&self, action: usize, state: usize) -> &Rational {
        &self.utility[action][state]
    }

    pub fn utility_rows(&self) -> &[Vec<Rational>] {
        &self.utility
    }

    /// Sender payoff `v(action)`.
    pub fn payoff(&self, action: usize) -> &Rational {
        &self.payoff[action]
    }

    pub fn payoffs(&self) -> &[Rational] {
        &self.payoff
    }

    /// Actions maximizing the receiver's utility in `state` under complete
    /// information (ties included, ascending order). Never empty.
    pub fn best_actions(&self, state: usize) -> Vec<usize> {
        let best = (0..self.action_count())
            .map(|j| &self.utility[j][state])
            .max()
            .expect("at least two actions")
            .clone();
        (0..self.action_count()).filter(|&j| self.utility[j][state] == best).collect()
    }

    /// The lowest action among [`best_actions`](Self::best_actions); since
    /// `v` is increasing this is the tie-break worst for the sender.
    pub fn lowest_best_action(&self, state: usize) -> usize {
        self.best_actions(state)[0]
    }

    /// The sender's complete-information floor `v_lower(state)`: his payoff
    /// when the state is fully revealed and the receiver breaks ties toward
    /// the lowest action.
    pub fn v_lower(&self, state: usize) -> Rational {
        self.payoff[self.lowest_best_action(state)].clone()
    }

    /// Whether `state` is in the complete-information action set of
    /// `action`, i.e. the action is a weak best response there.
    pub fn in_action_set(&self, action: usize, state: usize) -> bool {
        (0..self.action_count()).all(|j| self.utility[action][state] >= self.utility[j][state])
    }

    /// The deterministic outcome where every state is fully revealed and the
    /// receiver takes the lowest best response. Always incentive-compatible
    /// (with all slacks exactly zero) and obedient.
    pub fn full_revelation_partition(&self) -> Partition {
        Partition {
            assign: (0..self.state_count()).map(|t| self.lowest_best_action(t)).collect(),
        }
    }

    pub fn full_revelation_outcome(&self) -> Outcome {
        self.full_revelation_partition().to_outcome(self.action_count())
    }
}

/// A state-by-state distribution over receiver actions:
/// `alpha[action][state]`, each state column an exact probability vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    alpha: Vec<Vec<Rational>>,
}

impl Outcome {
    pub fn new(alpha: Vec<Vec<Rational>>) -> Result<Self, GameError> {
        let k = alpha.len();
        if k < 2 {
            return Err(GameError::TooFewActions(k));
        }
        let n = alpha[0].len();
        for (j, row) in alpha.iter().enumerate() {
            if row.len() != n {
                return Err(GameError::OutcomeRowLength { row: j, got: row.len(), states: n });
            }
        }
        for state in 0..n {
            let mut sum = Rational::zero();
            for (action, row) in alpha.iter().enumerate() {
                let x = &row[state];
                if x.is_negative() || *x > Rational::one() {
                    return Err(GameError::OutcomeEntryRange {
                        action,
                        state,
                        value: x.clone(),
                    });
                }
                sum += x;
            }
            if sum != Rational::one() {
                return Err(GameError::OutcomeColumnMass { state, sum });
            }
        }
        Ok(Outcome { alpha })
    }

    /// Check that the outcome's dimensions match a game.
    pub fn check_dims(&self, game: &GameSpec) -> Result<(), GameError> {
        if self.action_count() != game.action_count() {
            return Err(GameError::OutcomeActionCount {
                got: self.action_count(),
                actions: game.action_count(),
            });
        }
        if self.state_count() != game.state_count() {
            return Err(GameError::OutcomeRowLength {
                row: 0,
                got: self.state_count(),
                states: game.state_count(),
            });
        }
        Ok(())
    }

    pub fn action_count(&self) -> usize {
        self.alpha.len()
    }

    pub fn state_count(&self) -> usize {
        self.alpha[0].len()
    }

    /// `alpha(action | state)`.
    pub fn prob(&self, action: usize, state: usize) -> &Rational {
        &self.alpha[action][state]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.alpha
    }

    /// Actions taken with positive probability in `state`.
    pub fn support(&self, state: usize) -> Vec<usize> {
        (0..self.action_count()).filter(|&j| self.alpha[j][state].is_positive()).collect()
    }

    /// Whether every state takes some action with probability one.
    pub fn is_deterministic(&self) -> bool {
        (0..self.state_count()).all(|t| self.support(t).len() == 1)
    }

    /// The outcome partition, when deterministic.
    pub fn to_partition(&self) -> Option<Partition> {
        let mut assign = Vec::with_capacity(self.state_count());
        for state in 0..self.state_count() {
            let support = self.support(state);
            match support.as_slice() {
                [j] => assign.push(*j),
                _ => return None,
            }
        }
        Some(Partition { assign })
    }
}

/// A deterministic outcome: each state mapped to the single action taken
/// there with probability one. `W_j` is the set of states assigned `j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    assign: Vec<usize>,
}

impl Partition {
    pub fn new(assign: Vec<usize>, game: &GameSpec) -> Result<Self, GameError> {
        if assign.len() != game.state_count() {
            return Err(GameError::PartitionLength {
                got: assign.len(),
                states: game.state_count(),
            });
        }
        for (state, &action) in assign.iter().enumerate() {
            if action >= game.action_count() {
                return Err(GameError::PartitionActionRange {
                    state,
                    action,
                    actions: game.action_count(),
                });
            }
        }
        Ok(Partition { assign })
    }

    pub fn from_actions_unchecked(assign: Vec<usize>) -> Self {
        Partition { assign }
    }

    pub fn action_of(&self, state: usize) -> usize {
        self.assign[state]
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assign
    }

    pub fn state_count(&self) -> usize {
        self.assign.len()
    }

    /// States assigned to `action` (the cell `W_action`).
    pub fn cell(&self, action: usize) -> Vec<usize> {
        (0..self.assign.len()).filter(|&t| self.assign[t] == action).collect()
    }

    /// Embed as a point-mass outcome over `k` actions.
    pub fn to_outcome(&self, k: usize) -> Outcome {
        let mut alpha = vec![vec![Rational::zero(); self.assign.len()]; k];
        for (state, &action) in self.assign.iter().enumerate() {
            alpha[action][state] = Rational::one();
        }
        Outcome { alpha }
    }
}

impl fmt::Display for Partition {
    /// 1-based, e.g. `(1, 2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.assign.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", a + 1)?;
        }
        write!(f, ")")
    }
}

/// Exact slack data from an incentive-compatibility or obedience check.
/// `passed` holds iff every recorded slack is nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub passed: bool,
    /// Per state: `v_alpha(state) - v_lower(state)`. Filled by [`check_ic`].
    pub per_state_ic_slack: Vec<Rational>,
    /// `obedience_slack[j][j2]`: how much the receiver prefers following the
    /// recommendation `j` over deviating to `j2`, in prior-weighted utility
    /// units. Filled by [`check_obedience`].
    pub obedience_slack: Vec<Vec<Rational>>,
}

/// The sender's interim payoff per state and ex-ante payoff of an outcome.
pub fn outcome_payoffs(game: &GameSpec, outcome: &Outcome) -> (Vec<Rational>, Rational) {
    debug_assert!(outcome.check_dims(game).is_ok());
    let interim: Vec<Rational> = (0..game.state_count())
        .map(|state| {
            (0..game.action_count())
                .map(|j| game.payoff(j) * outcome.prob(j, state))
                .sum()
        })
        .collect();
    let ex_ante = interim.iter().zip(game.prior()).map(|(v, p)| v * p).sum();
    (interim, ex_ante)
}

/// Incentive compatibility: in every state the outcome pays the sender at
/// least his complete-information floor `v_lower`.
pub fn check_ic(game: &GameSpec, outcome: &Outcome) -> CheckReport {
    let (interim, _) = outcome_payoffs(game, outcome);
    let slack: Vec<Rational> = (0..game.state_count())
        .map(|state| &interim[state] - &game.v_lower(state))
        .collect();
    CheckReport {
        passed: slack.iter().all(|s| !s.is_negative()),
        per_state_ic_slack: slack,
        obedience_slack: Vec::new(),
    }
}

/// Obedience: for every pair of actions `(j, j2)`,
/// `sum_theta (u(j,theta) - u(j2,theta)) * alpha(j|theta) * prior(theta) >= 0`,
/// i.e. each recommended action is a best response to the posterior over the
/// states recommending it. Rows for never-recommended actions are vacuously
/// zero.
pub fn check_obedience(game: &GameSpec, outcome: &Outcome) -> CheckReport {
    debug_assert!(outcome.check_dims(game).is_ok());
    let k = game.action_count();
    let mut slack = vec![vec![Rational::zero(); k]; k];
    let mut passed = true;
    for j in 0..k {
        for j2 in 0..k {
            if j == j2 {
                continue;
            }
            let s: Rational = (0..game.state_count())
                .map(|t| {
                    (game.utility(j, t) - game.utility(j2, t))
                        * outcome.prob(j, t)
                        * game.prior_of(t)
                })
                .sum();
            if s.is_negative() {
                passed = false;
            }
            slack[j][j2] = s;
        }
    }
    CheckReport { passed, per_state_ic_slack: Vec::new(), obedience_slack: slack }
}

/// Whether an outcome passes both [`check_ic`] and [`check_obedience`].
pub fn is_ic_and_obedient(game: &GameSpec, outcome: &Outcome) -> bool {
    check_ic(game, outcome).passed && check_obedience(game, outcome).passed
}
