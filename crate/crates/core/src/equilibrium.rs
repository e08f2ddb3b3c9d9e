//! Perfect Bayesian equilibria of the disclosure game: construction from
//! deterministic outcomes and first-principles verification.
//!
//! A message is a nonempty set of states; a message is available to the
//! sender in state `theta` iff it contains `theta` (verifiability). The
//! receiver's strategy and belief system are total over the whole message
//! lattice, because sender optimality quantifies over every verifiable
//! message, on path or off.
//!
//! [`construct_recommendation_equilibrium`] implements the canonical
//! equilibrium for a deterministic incentive-compatible obedient outcome:
//! the sender reveals the partition cell of the realized state, the receiver
//! follows the recommendation, and after any unexpected message she is
//! *skeptical*, believing the state is one where the lowest compatible
//! action is a best response. That caps every deviation payoff at the
//! sender's complete-information floor, which incentive compatibility
//! already covers.
//!
//! [`verify_equilibrium`] takes any proposed equilibrium (including
//! externally supplied ones where the receiver mixes) and checks the
//! definition mechanically and exactly: sender optimality state by state
//! against all `2^(N-1)` available messages, receiver optimality after every
//! message, and Bayes consistency wherever the message has positive
//! probability. States are limited to `N <= 16` so the lattice stays
//! enumerable.

use std::fmt;

use crate::game::{
    check_ic, check_obedience, GameError, GameSpec, Outcome, Partition,
};
use crate::rational::Rational;
use crate::search::PartitionSearch;

pub use crate::search::BudgetExceeded;

/// Maximum state count for which the message lattice is enumerated.
pub const MAX_LATTICE_STATES: usize = 16;

/// A nonempty set of states, packed as a bitmask. State `t` is in the
/// message iff bit `t` is set.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Message(u32);

impl Message {
    pub fn from_mask(mask: u32) -> Result<Self, EquilibriumError> {
        if mask == 0 {
            return Err(EquilibriumError::EmptyMessage);
        }
        Ok(Message(mask))
    }

    pub fn from_states(states: &[usize], n: usize) -> Result<Self, EquilibriumError> {
        let mut mask = 0u32;
        for &s in states {
            if s >= n {
                return Err(EquilibriumError::StateOutOfRange { state: s, states: n });
            }
            mask |= 1 << s;
        }
        Self::from_mask(mask)
    }

    pub fn singleton(state: usize) -> Self {
        Message(1 << state)
    }

    /// The full lattice of nonempty messages over `n` states, ascending by
    /// mask value.
    pub fn lattice(n: usize) -> impl Iterator<Item = Message> {
        (1u32..(1u32 << n)).map(Message)
    }

    pub fn mask(&self) -> u32 {
        self.0
    }

    /// Dense index in `0..2^n - 1`.
    pub fn index(&self) -> usize {
        self.0 as usize - 1
    }

    pub fn contains(&self, state: usize) -> bool {
        self.0 & (1 << state) != 0
    }

    pub fn states(&self) -> Vec<usize> {
        (0..32).filter(|&t| self.contains(t)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }
}

impl fmt::Display for Message {
    /// 1-based set notation, e.g. `{1, 3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.states().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", s + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A strategy profile plus belief system for the disclosure game.
///
/// The receiver's strategy and the belief system cover all `2^N - 1`
/// messages. Structural requirements (distributions summing to one,
/// verifiability of the sender's support, beliefs supported inside their
/// message) are enforced at construction; the behavioral equilibrium
/// conditions are checked by [`verify_equilibrium`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equilibrium {
    n_states: usize,
    n_actions: usize,
    /// Per state: the sender's finite-support message distribution.
    sender: Vec<Vec<(Message, Rational)>>,
    /// Per message (dense by [`Message::index`]): distribution over actions.
    receiver: Vec<Vec<Rational>>,
    /// Per message (dense): the receiver's posterior over states.
    beliefs: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EquilibriumError {
    #[error("{states} states exceed the message-lattice limit of {MAX_LATTICE_STATES}")]
    TooManyStates { states: usize },
    #[error("messages must be nonempty")]
    EmptyMessage,
    #[error("state {} out of range for {states} states", .state + 1)]
    StateOutOfRange { state: usize, states: usize },
    #[error("sender strategy covers {got} states, the game has {states}")]
    SenderLength { got: usize, states: usize },
    #[error("sender support in state {} repeats message {message}", .state + 1)]
    DuplicateSupportMessage { state: usize, message: Message },
    #[error("message {message} in the support of state {} has probability {prob}; support probabilities must be positive", .state + 1)]
    SupportProbability { state: usize, message: Message, prob: Rational },
    #[error("sender probabilities in state {} sum to {sum}, not 1", .state + 1)]
    SupportMass { state: usize, sum: Rational },
    #[error("message {message} in the support of state {} does not contain that state", .state + 1)]
    Verifiability { state: usize, message: Message },
    #[error("{what} must cover all {expected} messages, got {got}")]
    Coverage { what: &'static str, expected: usize, got: usize },
    #[error("{what} after message {message} sums to {sum}, not 1, or has a negative entry")]
    BadDistribution { what: &'static str, message: Message, sum: Rational },
    #[error("belief after message {message} puts mass on state {} outside the message", .state + 1)]
    BeliefSupport { message: Message, state: usize },
    #[error("outcome is not incentive-compatible: state {} has slack {slack}", .state + 1)]
    NotIc { state: usize, slack: Rational },
    #[error("outcome is not obedient: action {} against {} has slack {slack}", .action + 1, .against + 1)]
    NotObedient { action: usize, against: usize, slack: Rational },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

impl Equilibrium {
    pub fn new(
        game: &GameSpec,
        sender: Vec<Vec<(Message, Rational)>>,
        receiver: Vec<Vec<Rational>>,
        beliefs: Vec<Vec<Rational>>,
    ) -> Result<Self, EquilibriumError> {
        let n = game.state_count();
        let k = game.action_count();
        if n > MAX_LATTICE_STATES {
            return Err(EquilibriumError::TooManyStates { states: n });
        }
        if sender.len() != n {
            return Err(EquilibriumError::SenderLength { got: sender.len(), states: n });
        }
        let lattice = (1usize << n) - 1;
        if receiver.len() != lattice {
            return Err(EquilibriumError::Coverage {
                what: "receiver strategy",
                expected: lattice,
                got: receiver.len(),
            });
        }
        if beliefs.len() != lattice {
            return Err(EquilibriumError::Coverage {
                what: "belief system",
                expected: lattice,
                got: beliefs.len(),
            });
        }

        for (state, support) in sender.iter().enumerate() {
            let mut sum = Rational::zero();
            for (i, (m, p)) in support.iter().enumerate() {
                if m.mask() >= 1 << n {
                    return Err(EquilibriumError::StateOutOfRange {
                        state: 32 - m.mask().leading_zeros() as usize - 1,
                        states: n,
                    });
                }
                if !p.is_positive() {
                    return Err(EquilibriumError::SupportProbability {
                        state,
                        message: *m,
                        prob: p.clone(),
                    });
                }
                if !m.contains(state) {
                    return Err(EquilibriumError::Verifiability { state, message: *m });
                }
                if support[..i].iter().any(|(m2, _)| m2 == m) {
                    return Err(EquilibriumError::DuplicateSupportMessage {
                        state,
                        message: *m,
                    });
                }
                sum += p;
            }
            if sum != Rational::one() {
                return Err(EquilibriumError::SupportMass { state, sum });
            }
        }

        for m in Message::lattice(n) {
            check_distribution("receiver strategy", m, &receiver[m.index()], k)?;
            check_distribution("belief", m, &beliefs[m.index()], n)?;
            for (state, q) in beliefs[m.index()].iter().enumerate() {
                if q.is_positive() && !m.contains(state) {
                    return Err(EquilibriumError::BeliefSupport { message: m, state });
                }
            }
        }

        Ok(Equilibrium { n_states: n, n_actions: k, sender, receiver, beliefs })
    }

    pub fn state_count(&self) -> usize {
        self.n_states
    }

    pub fn action_count(&self) -> usize {
        self.n_actions
    }

    pub fn sender_support(&self, state: usize) -> &[(Message, Rational)] {
        &self.sender[state]
    }

    pub fn receiver_response(&self, m: Message) -> &[Rational] {
        &self.receiver[m.index()]
    }

    pub fn belief(&self, m: Message) -> &[Rational] {
        &self.beliefs[m.index()]
    }

    /// The sender's expected payoff from sending `m`, given the receiver's
    /// response to it.
    pub fn message_payoff(&self, game: &GameSpec, m: Message) -> Rational {
        (0..self.n_actions).map(|j| game.payoff(j) * &self.receiver[m.index()][j]).sum()
    }

    /// The outcome this profile induces:
    /// `alpha(j|theta) = sum_m sigma(m|theta) tau(j|m)`.
    pub fn induced_outcome(&self) -> Outcome {
        let mut alpha = vec![vec![Rational::zero(); self.n_states]; self.n_actions];
        for (state, support) in self.sender.iter().enumerate() {
            for (m, p) in support {
                for (j, row) in alpha.iter_mut().enumerate() {
                    let tau = &self.receiver[m.index()][j];
                    if tau.is_positive() {
                        row[state] += p * tau;
                    }
                }
            }
        }
        Outcome::new(alpha).expect("induced columns are convex combinations of distributions")
    }
}

fn check_distribution(
    what: &'static str,
    m: Message,
    dist: &[Rational],
    expected_len: usize,
) -> Result<(), EquilibriumError> {
    let bad = |sum: Rational| EquilibriumError::BadDistribution { what, message: m, sum };
    if dist.len() != expected_len {
        return Err(EquilibriumError::Coverage { what, expected: expected_len, got: dist.len() });
    }
    let mut sum = Rational::zero();
    for p in dist {
        if p.is_negative() {
            return Err(bad(p.clone()));
        }
        sum += p;
    }
    if sum != Rational::one() {
        return Err(bad(sum));
    }
    Ok(())
}

/// The receiver's skeptical reaction to an arbitrary message: the lowest
/// action that is a complete-information best response somewhere inside the
/// message, together with those supporting states.
///
/// Playing that action is optimal against any belief on the support, and its
/// payoff to the sender is at most the floor `v_lower(theta)` of every state
/// in the message.
pub fn skeptical_response(game: &GameSpec, m: Message) -> (usize, Vec<usize>) {
    for action in 0..game.action_count() {
        let support: Vec<usize> =
            m.states().into_iter().filter(|&t| game.in_action_set(action, t)).collect();
        if !support.is_empty() {
            return (action, support);
        }
    }
    unreachable!("every state has a best response, so some action set meets the message");
}

/// Build the recommendation equilibrium of a deterministic
/// incentive-compatible obedient outcome.
///
/// On path the sender announces the partition cell containing the state and
/// the receiver follows the recommendation with probability one; beliefs are
/// the Bayes posteriors on the cell. Off path the receiver is skeptical:
/// uniform belief on the states of the message where the lowest compatible
/// action is a best response, and that action played with probability one.
///
/// Refuses (with the failing slack) outcomes that are not
/// incentive-compatible or not obedient.
pub fn construct_recommendation_equilibrium(
    game: &GameSpec,
    partition: &Partition,
) -> Result<Equilibrium, EquilibriumError> {
    let n = game.state_count();
    let k = game.action_count();
    if n > MAX_LATTICE_STATES {
        return Err(EquilibriumError::TooManyStates { states: n });
    }
    if partition.state_count() != n {
        return Err(GameError::PartitionLength { got: partition.state_count(), states: n }.into());
    }

    let outcome = partition.to_outcome(k);
    let ic = check_ic(game, &outcome);
    if !ic.passed {
        let state = ic.per_state_ic_slack.iter().position(|s| s.is_negative()).expect("failed");
        return Err(EquilibriumError::NotIc {
            state,
            slack: ic.per_state_ic_slack[state].clone(),
        });
    }
    let ob = check_obedience(game, &outcome);
    if !ob.passed {
        for (j, row) in ob.obedience_slack.iter().enumerate() {
            if let Some(j2) = row.iter().position(|s| s.is_negative()) {
                return Err(EquilibriumError::NotObedient {
                    action: j,
                    against: j2,
                    slack: row[j2].clone(),
                });
            }
        }
        unreachable!("a failed check has a negative slack");
    }

    // The on-path message of each action: its partition cell, when nonempty.
    let mut cell_mask = vec![0u32; k];
    for t in 0..n {
        cell_mask[partition.action_of(t)] |= 1 << t;
    }
    let cell_prior: Vec<Rational> = (0..k)
        .map(|j| partition.cell(j).iter().map(|&t| game.prior_of(t)).sum())
        .collect();

    let sender: Vec<Vec<(Message, Rational)>> = (0..n)
        .map(|t| {
            let m = Message::from_mask(cell_mask[partition.action_of(t)])
                .expect("a cell containing t is nonempty");
            vec![(m, Rational::one())]
        })
        .collect();

    let lattice = (1usize << n) - 1;
    let mut receiver = Vec::with_capacity(lattice);
    let mut beliefs = Vec::with_capacity(lattice);
    for m in Message::lattice(n) {
        let on_path = (0..k).find(|&j| cell_mask[j] == m.mask() && cell_mask[j] != 0);
        let (action, belief) = match on_path {
            Some(j) => {
                let belief: Vec<Rational> = (0..n)
                    .map(|t| {
                        if partition.action_of(t) == j && m.contains(t) {
                            game.prior_of(t) / &cell_prior[j]
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                (j, belief)
            }
            None => {
                let (action, support) = skeptical_response(game, m);
                let w = Rational::one() / Rational::from_integer(support.len() as i64);
                let mut belief = vec![Rational::zero(); n];
                for t in support {
                    belief[t] = w.clone();
                }
                (action, belief)
            }
        };
        let mut tau = vec![Rational::zero(); k];
        tau[action] = Rational::one();
        receiver.push(tau);
        beliefs.push(belief);
    }

    Equilibrium::new(game, sender, receiver, beliefs)
}

/// One recorded failure of the sender-optimality condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SenderViolation {
    pub state: usize,
    /// A support message that is not payoff-maximal for the sender.
    pub message: Message,
    /// A verifiable message that beats it.
    pub better_message: Message,
    pub gain: Rational,
}

/// One recorded failure of the receiver-optimality condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReceiverViolation {
    pub message: Message,
    /// A response action that is not utility-maximal under the belief.
    pub action: usize,
    pub better_action: usize,
    pub gain: Rational,
}

/// Outcome of [`verify_equilibrium`]: all violations of the equilibrium
/// conditions, and the outcome the profile induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub is_equilibrium: bool,
    pub sender_violations: Vec<SenderViolation>,
    pub receiver_violations: Vec<ReceiverViolation>,
    /// Messages with positive on-path probability whose stored belief is not
    /// the exact Bayes posterior.
    pub bayes_violations: Vec<Message>,
    pub induced_outcome: Outcome,
}

/// Check the equilibrium conditions from first principles, exactly.
///
/// - Sender optimality: in each state, every support message attains the
///   maximum sender payoff over *all* messages containing the state.
/// - Receiver optimality: after every message, every action played with
///   positive probability maximizes expected utility under the stored
///   belief.
/// - Bayes consistency: wherever the message has positive probability under
///   the sender's strategy and the prior, the stored belief equals the exact
///   posterior.
pub fn verify_equilibrium(
    game: &GameSpec,
    e: &Equilibrium,
) -> Result<VerificationReport, EquilibriumError> {
    let n = game.state_count();
    let k = game.action_count();
    if n > MAX_LATTICE_STATES {
        return Err(EquilibriumError::TooManyStates { states: n });
    }
    if e.state_count() != n || e.action_count() != k {
        return Err(EquilibriumError::Coverage {
            what: "equilibrium dimensions",
            expected: n,
            got: e.state_count(),
        });
    }

    // Sender payoff of every message, then per-state optimality.
    let payoff: Vec<Rational> =
        Message::lattice(n).map(|m| e.message_payoff(game, m)).collect();
    let mut sender_violations = Vec::new();
    for state in 0..n {
        let mut best: Option<(Message, &Rational)> = None;
        for m in Message::lattice(n) {
            if !m.contains(state) {
                continue;
            }
            let u = &payoff[m.index()];
            if best.is_none_or(|(_, b)| u > b) {
                best = Some((m, u));
            }
        }
        let (best_m, best_u) = best.expect("the singleton message is always available");
        for (m, _) in e.sender_support(state) {
            let u = &payoff[m.index()];
            if u < best_u {
                sender_violations.push(SenderViolation {
                    state,
                    message: *m,
                    better_message: best_m,
                    gain: best_u - u,
                });
            }
        }
    }

    // Receiver optimality after every message.
    let mut receiver_violations = Vec::new();
    for m in Message::lattice(n) {
        let belief = e.belief(m);
        let expected: Vec<Rational> = (0..k)
            .map(|j| (0..n).map(|t| game.utility(j, t) * &belief[t]).sum())
            .collect();
        let best_action =
            (0..k).max_by(|&a, &b| expected[a].cmp(&expected[b])).expect("k >= 2");
        for j in 0..k {
            if e.receiver_response(m)[j].is_positive() && expected[j] < expected[best_action] {
                receiver_violations.push(ReceiverViolation {
                    message: m,
                    action: j,
                    better_action: best_action,
                    gain: &expected[best_action] - &expected[j],
                });
            }
        }
    }

    // Bayes consistency on path.
    let mut bayes_violations = Vec::new();
    for m in Message::lattice(n) {
        let mut total = Rational::zero();
        let mut mass = vec![Rational::zero(); n];
        for state in 0..n {
            for (sm, p) in e.sender_support(state) {
                if *sm == m {
                    let w = game.prior_of(state) * p;
                    total += &w;
                    mass[state] = w;
                }
            }
        }
        if total.is_zero() {
            continue;
        }
        let posterior: Vec<Rational> = mass.iter().map(|w| w / &total).collect();
        if posterior != e.belief(m) {
            bayes_violations.push(m);
        }
    }

    let induced_outcome = e.induced_outcome();
    Ok(VerificationReport {
        is_equilibrium: sender_violations.is_empty()
            && receiver_violations.is_empty()
            && bayes_violations.is_empty(),
        sender_violations,
        receiver_violations,
        bayes_violations,
        induced_outcome,
    })
}

/// All deterministic equilibrium outcomes of the game: exactly the
/// incentive-compatible obedient partitions, in lexicographic order.
/// `budget` caps visited search nodes.
pub fn enumerate_equilibrium_outcomes(
    game: &GameSpec,
    budget: u64,
) -> Result<Vec<Partition>, BudgetExceeded> {
    PartitionSearch::new(game, budget).enumerate()
}

/// States where the induced outcome mixes but no message the sender uses
/// there has a mixed receiver response. Empty for every true equilibrium: a
/// nondegenerate action distribution at a state can only arise from the
/// receiver mixing after some support message.
pub fn mixing_diagnostic(e: &Equilibrium) -> Vec<usize> {
    let induced = e.induced_outcome();
    (0..e.state_count())
        .filter(|&state| {
            induced.support(state).len() > 1
                && e.sender_support(state).iter().all(|(m, _)| {
                    e.receiver_response(*m).iter().filter(|p| p.is_positive()).count() == 1
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures::{prosecutor, prosecutor_optimal};
    use crate::game::outcome_payoffs;
    use crate::rat;

    fn msg(states: &[usize], n: usize) -> Message {
        Message::from_states(states, n).unwrap()
    }

    #[test]
    fn message_basics() {
        let m = msg(&[0, 2], 3);
        assert!(m.contains(0) && !m.contains(1) && m.contains(2));
        assert_eq!(m.states(), vec![0, 2]);
        assert_eq!(m.to_string(), "{1, 3}");
        assert_eq!(Message::lattice(2).count(), 3);
        assert!(Message::from_states(&[], 2).is_err());
        assert!(Message::from_states(&[5], 2).is_err());
    }

    #[test]
    fn skeptical_response_examples() {
        let g = prosecutor();
        // The uninformative message meets the acquit set, so skepticism
        // means acquittal.
        let (action, support) = skeptical_response(&g, msg(&[0, 1], 2));
        assert_eq!(action, 0);
        assert_eq!(support, vec![0]);
        // A singleton message pins the state.
        let (action, support) = skeptical_response(&g, msg(&[1], 2));
        assert_eq!(action, 1);
        assert_eq!(support, vec![1]);
        // A message missing the acquit set forces the higher action.
        let g3 = GameSpec::new(
            vec![rat!(1, 3), rat!(1, 3), rat!(1, 3)],
            vec![
                vec![rat!(1), rat!(0), rat!(0)],
                vec![rat!(0), rat!(1), rat!(1)],
            ],
            vec![rat!(0), rat!(1)],
        )
        .unwrap();
        let (action, _) = skeptical_response(&g3, msg(&[1, 2], 3));
        assert_eq!(action, 1);
    }

    #[test]
    fn construct_on_the_revealing_partition() {
        let g = prosecutor();
        let p = Partition::new(vec![0, 1], &g).unwrap();
        let e = construct_recommendation_equilibrium(&g, &p).unwrap();
        // On-path messages are the two singletons.
        assert_eq!(e.sender_support(0), &[(msg(&[0], 2), rat!(1))]);
        assert_eq!(e.sender_support(1), &[(msg(&[1], 2), rat!(1))]);
        assert_eq!(e.receiver_response(msg(&[0], 2)), &[rat!(1), rat!(0)]);
        assert_eq!(e.receiver_response(msg(&[1], 2)), &[rat!(0), rat!(1)]);
        // The uninformative message is off path; skepticism acquits.
        assert_eq!(e.receiver_response(msg(&[0, 1], 2)), &[rat!(1), rat!(0)]);
        assert_eq!(e.belief(msg(&[0, 1], 2)), &[rat!(1), rat!(0)]);

        let report = verify_equilibrium(&g, &e).unwrap();
        assert!(report.is_equilibrium);
        assert_eq!(report.induced_outcome.to_partition().unwrap(), p);
    }

    #[test]
    fn construct_on_an_obedient_pooling_partition() {
        // The high action is dominant, so pooling is implementable with a
        // single on-path message covering the whole state space.
        let g = GameSpec::new(
            vec![rat!(1, 2), rat!(1, 2)],
            vec![vec![rat!(0), rat!(0)], vec![rat!(1), rat!(2)]],
            vec![rat!(0), rat!(1)],
        )
        .unwrap();
        let p = Partition::new(vec![1, 1], &g).unwrap();
        let e = construct_recommendation_equilibrium(&g, &p).unwrap();
        let all = msg(&[0, 1], 2);
        assert_eq!(e.sender_support(0), &[(all, rat!(1))]);
        assert_eq!(e.sender_support(1), &[(all, rat!(1))]);
        assert_eq!(e.belief(all), &[rat!(1, 2), rat!(1, 2)]);
        let report = verify_equilibrium(&g, &e).unwrap();
        assert!(report.is_equilibrium);
    }

    #[test]
    fn construct_refuses_non_ic_partitions() {
        let g = prosecutor();
        // Always acquitting fails incentive compatibility in the guilty
        // state by exactly the conviction payoff.
        let p = Partition::new(vec![0, 0], &g).unwrap();
        let err = construct_recommendation_equilibrium(&g, &p).unwrap_err();
        assert_eq!(err, EquilibriumError::NotIc { state: 1, slack: rat!(-1) });
    }

    #[test]
    fn construct_refuses_non_obedient_partitions() {
        let g = GameSpec::new(
            vec![rat!(9, 10), rat!(1, 10)],
            vec![vec![rat!(1), rat!(0)], vec![rat!(0), rat!(1)]],
            vec![rat!(0), rat!(1)],
        )
        .unwrap();
        // Pooling on conviction is incentive-compatible here but far from
        // obedient under a 9/10 innocent prior.
        let p = Partition::new(vec![1, 1], &g).unwrap();
        let err = construct_recommendation_equilibrium(&g, &p).unwrap_err();
        assert_eq!(
            err,
            EquilibriumError::NotObedient { action: 1, against: 0, slack: rat!(-4, 5) }
        );
    }

    #[test]
    fn pooling_on_conviction_fails_receiver_optimality() {
        let g = prosecutor();
        let n = 2;
        let all = msg(&[0, 1], n);
        let sender = vec![vec![(all, rat!(1))], vec![(all, rat!(1))]];
        let mut receiver = vec![vec![rat!(0), rat!(0)]; 3];
        let mut beliefs = vec![vec![rat!(0), rat!(0)]; 3];
        // After the pooled message the receiver convicts against her
        // posterior; the singletons get complete-information responses.
        receiver[all.index()] = vec![rat!(0), rat!(1)];
        beliefs[all.index()] = vec![rat!(7, 10), rat!(3, 10)];
        receiver[msg(&[0], n).index()] = vec![rat!(1), rat!(0)];
        beliefs[msg(&[0], n).index()] = vec![rat!(1), rat!(0)];
        receiver[msg(&[1], n).index()] = vec![rat!(0), rat!(1)];
        beliefs[msg(&[1], n).index()] = vec![rat!(0), rat!(1)];

        let e = Equilibrium::new(&g, sender, receiver, beliefs).unwrap();
        let report = verify_equilibrium(&g, &e).unwrap();
        assert!(!report.is_equilibrium);
        assert_eq!(
            report.receiver_violations,
            vec![ReceiverViolation {
                message: all,
                action: 1,
                better_action: 0,
                gain: rat!(2, 5),
            }]
        );
        assert!(report.sender_violations.is_empty());
        assert!(report.bayes_violations.is_empty());
    }

    #[test]
    fn mixed_outcome_with_pure_receiver_fails_sender_optimality() {
        // Realize the optimal commitment outcome with a pure receiver: the
        // innocent state mixes between a revealing message (acquit) and the
        // pooled message (convict), so the revealing message is dominated.
        let g = prosecutor();
        let n = 2;
        let all = msg(&[0, 1], n);
        let innocent = msg(&[0], n);
        let guilty = msg(&[1], n);
        let sender = vec![
            vec![(innocent, rat!(4, 7)), (all, rat!(3, 7))],
            vec![(all, rat!(1))],
        ];
        let mut receiver = vec![vec![rat!(0), rat!(0)]; 3];
        let mut beliefs = vec![vec![rat!(0), rat!(0)]; 3];
        receiver[innocent.index()] = vec![rat!(1), rat!(0)];
        beliefs[innocent.index()] = vec![rat!(1), rat!(0)];
        receiver[guilty.index()] = vec![rat!(0), rat!(1)];
        beliefs[guilty.index()] = vec![rat!(0), rat!(1)];
        // Bayes posterior after the pooled message is (1/2, 1/2):
        // 7/10 * 3/7 = 3/10 from the innocent state, 3/10 from the guilty.
        receiver[all.index()] = vec![rat!(0), rat!(1)];
        beliefs[all.index()] = vec![rat!(1, 2), rat!(1, 2)];

        let e = Equilibrium::new(&g, sender, receiver, beliefs).unwrap();
        let report = verify_equilibrium(&g, &e).unwrap();
        assert!(!report.is_equilibrium);
        assert_eq!(
            report.sender_violations,
            vec![SenderViolation {
                state: 0,
                message: innocent,
                better_message: all,
                gain: rat!(1),
            }]
        );
        assert!(report.receiver_violations.is_empty());
        assert!(report.bayes_violations.is_empty());
        // It still induces the optimal commitment outcome.
        assert_eq!(report.induced_outcome, prosecutor_optimal());
    }

    #[test]
    fn bayes_violation_is_reported() {
        let g = prosecutor();
        let p = Partition::new(vec![0, 1], &g).unwrap();
        let e = construct_recommendation_equilibrium(&g, &p).unwrap();
        // Tamper with the on-path singleton belief.
        let mut beliefs: Vec<Vec<Rational>> =
            Message::lattice(2).map(|m| e.belief(m).to_vec()).collect();
        beliefs[msg(&[0], 2).index()] = vec![rat!(1, 2), rat!(1, 2)];
        let tampered = Equilibrium::new(
            &g,
            (0..2).map(|t| e.sender_support(t).to_vec()).collect(),
            Message::lattice(2).map(|m| e.receiver_response(m).to_vec()).collect(),
            beliefs,
        );
        // Belief support outside the message is a structural error.
        assert!(matches!(tampered, Err(EquilibriumError::BeliefSupport { .. })));

        // A wrong belief inside the message is a Bayes violation.
        let mut beliefs2: Vec<Vec<Rational>> =
            Message::lattice(2).map(|m| e.belief(m).to_vec()).collect();
        beliefs2[msg(&[0, 1], 2).index()] = vec![rat!(1), rat!(0)];
        let e2 = Equilibrium::new(
            &g,
            vec![vec![(msg(&[0, 1], 2), rat!(1))], vec![(msg(&[0, 1], 2), rat!(1))]],
            Message::lattice(2).map(|m| e.receiver_response(m).to_vec()).collect(),
            beliefs2,
        )
        .unwrap();
        let report = verify_equilibrium(&g, &e2).unwrap();
        assert_eq!(report.bayes_violations, vec![msg(&[0, 1], 2)]);
    }

    #[test]
    fn enumerate_outcomes_of_the_prosecutor_game() {
        let g = prosecutor();
        let outcomes = enumerate_equilibrium_outcomes(&g, 10_000).unwrap();
        assert_eq!(outcomes.len(), 1);
        assert_eq!(outcomes[0].assignments(), &[0, 1]);
    }

    #[test]
    fn enumerate_under_universal_indifference() {
        // A constant receiver utility makes every partition obedient, and
        // the sender floor is the lowest action everywhere.
        let g = GameSpec::new(
            vec![rat!(1, 2), rat!(1, 2)],
            vec![vec![rat!(1), rat!(1)], vec![rat!(1), rat!(1)]],
            vec![rat!(0), rat!(1)],
        )
        .unwrap();
        let outcomes = enumerate_equilibrium_outcomes(&g, 10_000).unwrap();
        assert_eq!(outcomes.len(), 4);
    }

    #[test]
    fn enumerate_with_a_dominant_high_action() {
        // The high action is the receiver's unique best response everywhere,
        // so incentive compatibility pins the all-high partition.
        let g = GameSpec::new(
            vec![rat!(1, 2), rat!(1, 2)],
            vec![vec![rat!(0), rat!(0)], vec![rat!(1), rat!(2)]],
            vec![rat!(0), rat!(1)],
        )
        .unwrap();
        let outcomes = enumerate_equilibrium_outcomes(&g, 10_000).unwrap();
        assert_eq!(outcomes.len(), 1);
        assert_eq!(outcomes[0].assignments(), &[1, 1]);
    }

    #[test]
    fn receiver_mixing_supports_a_nondeterministic_equilibrium() {
        // Constant receiver utility: she can mix after the pooled message,
        // and the induced outcome mixes in every state.
        let g = GameSpec::new(
            vec![rat!(1, 2), rat!(1, 2)],
            vec![vec![rat!(1), rat!(1)], vec![rat!(1), rat!(1)]],
            vec![rat!(0), rat!(1)],
        )
        .unwrap();
        let all = msg(&[0, 1], 2);
        let sender = vec![vec![(all, rat!(1))], vec![(all, rat!(1))]];
        let mut receiver = vec![vec![rat!(1), rat!(0)]; 3];
        let mut beliefs = vec![vec![rat!(0), rat!(0)]; 3];
        receiver[all.index()] = vec![rat!(1, 2), rat!(1, 2)];
        beliefs[all.index()] = vec![rat!(1, 2), rat!(1, 2)];
        beliefs[msg(&[0], 2).index()] = vec![rat!(1), rat!(0)];
        beliefs[msg(&[1], 2).index()] = vec![rat!(0), rat!(1)];

        let e = Equilibrium::new(&g, sender, receiver, beliefs).unwrap();
        let report = verify_equilibrium(&g, &e).unwrap();
        assert!(report.is_equilibrium);
        assert!(!report.induced_outcome.is_deterministic());
        // The mixing is attributable to a mixed receiver response.
        assert!(mixing_diagnostic(&e).is_empty());
        // Soundness: the induced outcome is incentive-compatible and
        // obedient.
        assert!(check_ic(&g, &report.induced_outcome).passed);
        assert!(check_obedience(&g, &report.induced_outcome).passed);
        assert_eq!(outcome_payoffs(&g, &report.induced_outcome).1, rat!(1, 2));
    }

    #[test]
    fn constructed_deviation_payoffs_respect_the_floor() {
        // In the constructed equilibrium, every deviation payoff is at most
        // the floor of every state that could send it.
        let g = prosecutor();
        let p = Partition::new(vec![0, 1], &g).unwrap();
        let e = construct_recommendation_equilibrium(&g, &p).unwrap();
        for m in Message::lattice(2) {
            let payoff = e.message_payoff(&g, m);
            for t in m.states() {
                assert!(payoff <= g.v_lower(t) || e.sender_support(t).iter().any(|(sm, _)| *sm == m));
            }
        }
    }

    #[test]
    fn structural_validation_errors() {
        let g = prosecutor();
        let all = msg(&[0, 1], 2);
        // Verifiability: state 1 cannot claim the state-0 singleton.
        let bad = Equilibrium::new(
            &g,
            vec![vec![(msg(&[0], 2), rat!(1))], vec![(msg(&[0], 2), rat!(1))]],
            vec![vec![rat!(1), rat!(0)]; 3],
            vec![
                vec![rat!(1), rat!(0)],
                vec![rat!(0), rat!(1)],
                vec![rat!(1, 2), rat!(1, 2)],
            ],
        );
        assert!(matches!(bad, Err(EquilibriumError::Verifiability { state: 1, .. })));
        // Sender mass must be exactly one.
        let bad = Equilibrium::new(
            &g,
            vec![vec![(all, rat!(1, 2))], vec![(all, rat!(1))]],
            vec![vec![rat!(1), rat!(0)]; 3],
            vec![
                vec![rat!(1), rat!(0)],
                vec![rat!(0), rat!(1)],
                vec![rat!(1, 2), rat!(1, 2)],
            ],
        );
        assert!(matches!(bad, Err(EquilibriumError::SupportMass { state: 0, .. })));
    }
}
