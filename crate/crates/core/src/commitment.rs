//! The information-design side: what the sender achieves with commitment
//! power, and when that payoff survives without commitment.
//!
//! The commitment problem maximizes the sender's ex-ante payoff over all
//! obedient outcomes; it is a linear program, solved exactly. The commitment
//! payoff is attainable in equilibrium of the disclosure game if and only if
//! some commitment outcome is deterministic and incentive-compatible, so
//! [`decide_commitment_in_equilibrium`] searches for a deterministic
//! incentive-compatible obedient partition whose payoff exactly matches the
//! LP optimum, and reports the shortfall against the best deterministic
//! alternative when none exists.
//!
//! For binary receiver actions two specializations apply:
//! [`binary_ic_repair`] turns any obedient outcome that attains the optimum
//! into an incentive-compatible one with the same payoff, and
//! [`binary_cutoff_commitment`] rebuilds the optimum directly by pooling
//! states in decreasing order of the receiver's utility advantage
//! `delta(theta) = u(2,theta) - u(1,theta)`, with one mixed state at the
//! cutoff where the obedience constraint binds exactly.

use crate::game::{
    check_ic, check_obedience, outcome_payoffs, GameError, GameSpec, Outcome, Partition,
};
use crate::rational::Rational;
use crate::search::PartitionSearch;
use crate::simplex::{lp_solve, LinearProgram, LpResult, Sense};

pub use crate::search::{BudgetExceeded, DEFAULT_ENUMERATION_BUDGET};

/// The exact solution of the commitment problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommitmentSolution {
    /// The commitment payoff, the optimal value of the program.
    pub payoff: Rational,
    /// An optimal obedient outcome (a vertex of the feasible polytope).
    pub outcome: Outcome,
    pub is_deterministic: bool,
    /// Whether the optimal outcome is incentive-compatible for the sender.
    pub ic: bool,
}

/// Whether the commitment payoff is attainable in equilibrium, with the
/// witness partition when it is and the exact shortfall when it is not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquilibriumCommitmentVerdict {
    pub attainable: bool,
    /// A deterministic incentive-compatible obedient partition attaining the
    /// commitment payoff, present iff `attainable`.
    pub witness: Option<Partition>,
    /// Commitment payoff minus the best payoff over all deterministic
    /// incentive-compatible obedient outcomes; zero iff `attainable`.
    pub gap: Rational,
    pub commitment_payoff: Rational,
}

/// Binary-action summary: the receiver's utility advantage of the high
/// action per state, and whether it separates states (no two equal).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryGameView {
    pub delta: Vec<Rational>,
    pub ru_holds: bool,
}

/// Result of [`commitment_gap_bound_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapBound {
    pub gap: Rational,
    /// The largest prior probability of a single state.
    pub bound: Rational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CommitmentError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("this analysis needs exactly 2 actions, the game has {0}")]
    NotBinary(usize),
    #[error("states {} and {} have equal utility advantage {delta}; the regularity condition needs all values distinct", .a + 1, .b + 1)]
    RegularityViolated { a: usize, b: usize, delta: Rational },
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Build the commitment linear program.
///
/// Variables are `y[j][theta] = prior(theta) * psi(j|theta)`, laid out as
/// `j * N + theta`; the prior weighting keeps obedience rows at plain
/// utility differences and turns the per-state simplex constraints into
/// `sum_j y[j][theta] = prior(theta)`. Obedience rows come first (one per
/// ordered action pair), then the state equalities.
pub fn build_co_lp(game: &GameSpec) -> LinearProgram {
    let n = game.state_count();
    let k = game.action_count();
    let vars = n * k;
    let var = |j: usize, t: usize| j * n + t;

    let mut objective = vec![Rational::zero(); vars];
    for j in 0..k {
        for t in 0..n {
            objective[var(j, t)] = game.payoff(j).clone();
        }
    }

    let mut rows = Vec::with_capacity(k * (k - 1) + n);
    let mut senses = Vec::new();
    let mut rhs = Vec::new();
    for j in 0..k {
        for j2 in 0..k {
            if j == j2 {
                continue;
            }
            let mut row = vec![Rational::zero(); vars];
            for t in 0..n {
                row[var(j, t)] = game.utility(j, t) - game.utility(j2, t);
            }
            rows.push(row);
            senses.push(Sense::Ge);
            rhs.push(Rational::zero());
        }
    }
    for t in 0..n {
        let mut row = vec![Rational::zero(); vars];
        for j in 0..k {
            row[var(j, t)] = Rational::one();
        }
        rows.push(row);
        senses.push(Sense::Eq);
        rhs.push(game.prior_of(t).clone());
    }

    LinearProgram::new(objective, rows, senses, rhs).expect("CO program shape is consistent")
}

/// Solve the commitment problem exactly.
///
/// The program is always feasible (full revelation is obedient) and bounded
/// (the feasible set is a polytope), so an optimum always exists.
pub fn solve_commitment(game: &GameSpec) -> CommitmentSolution {
    let lp = build_co_lp(game);
    let LpResult::Optimal { value, solution } = lp_solve(&lp) else {
        unreachable!("the commitment program is feasible and bounded");
    };
    let n = game.state_count();
    let alpha: Vec<Vec<Rational>> = (0..game.action_count())
        .map(|j| (0..n).map(|t| &solution[j * n + t] / game.prior_of(t)).collect())
        .collect();
    let outcome = Outcome::new(alpha).expect("LP solution satisfies the simplex rows exactly");
    debug_assert!(check_obedience(game, &outcome).passed);
    debug_assert_eq!(outcome_payoffs(game, &outcome).1, value);
    let is_deterministic = outcome.is_deterministic();
    let ic = check_ic(game, &outcome).passed;
    CommitmentSolution { payoff: value, outcome, is_deterministic, ic }
}

/// Search for a deterministic commitment outcome that is also
/// incentive-compatible: an obedient partition with payoff exactly
/// `commitment_payoff` whose assigned actions clear the sender's
/// complete-information floor everywhere.
///
/// The search is lexicographic over assignment vectors and returns the first
/// hit; `budget` caps visited search nodes.
pub fn find_deterministic_commitment(
    game: &GameSpec,
    commitment_payoff: &Rational,
    budget: u64,
) -> Result<Option<Partition>, BudgetExceeded> {
    PartitionSearch::new(game, budget).find_exact(commitment_payoff)
}

/// Decide whether the commitment payoff is an equilibrium payoff of the
/// disclosure game, per the deterministic-and-incentive-compatible
/// criterion. When it is not, `gap` reports how far the best deterministic
/// incentive-compatible obedient outcome falls short.
pub fn decide_commitment_in_equilibrium(
    game: &GameSpec,
    budget: u64,
) -> Result<EquilibriumCommitmentVerdict, BudgetExceeded> {
    let solution = solve_commitment(game);
    let witness = find_deterministic_commitment(game, &solution.payoff, budget)?;
    if let Some(witness) = witness {
        debug_assert!(check_ic(game, &witness.to_outcome(game.action_count())).passed);
        return Ok(EquilibriumCommitmentVerdict {
            attainable: true,
            witness: Some(witness),
            gap: Rational::zero(),
            commitment_payoff: solution.payoff,
        });
    }
    let (best, _) = PartitionSearch::new(game, budget).maximize()?;
    Ok(EquilibriumCommitmentVerdict {
        attainable: false,
        witness: None,
        gap: &solution.payoff - &best,
        commitment_payoff: solution.payoff,
    })
}

/// The binary-action view: `delta(theta) = u(2,theta) - u(1,theta)` and the
/// regularity condition that no two states share a value.
pub fn binary_view(game: &GameSpec) -> Result<BinaryGameView, CommitmentError> {
    if game.action_count() != 2 {
        return Err(CommitmentError::NotBinary(game.action_count()));
    }
    let delta: Vec<Rational> =
        (0..game.state_count()).map(|t| game.utility(1, t) - game.utility(0, t)).collect();
    let ru_holds = delta_collision(&delta).is_none();
    Ok(BinaryGameView { delta, ru_holds })
}

fn delta_collision(delta: &[Rational]) -> Option<(usize, usize)> {
    for a in 0..delta.len() {
        for b in a + 1..delta.len() {
            if delta[a] == delta[b] {
                return Some((a, b));
            }
        }
    }
    None
}

fn require_regular(game: &GameSpec) -> Result<BinaryGameView, CommitmentError> {
    let view = binary_view(game)?;
    if let Some((a, b)) = delta_collision(&view.delta) {
        return Err(CommitmentError::RegularityViolated { a, b, delta: view.delta[a].clone() });
    }
    Ok(view)
}

/// Make a binary-action obedient outcome incentive-compatible without
/// losing payoff: take the high action with probability one wherever it is a
/// weak best response for the receiver.
///
/// Raising those entries weakly improves every obedience slack (the utility
/// advantage is nonnegative on that set) and weakly raises the sender's
/// payoff, so a commitment outcome stays a commitment outcome.
pub fn binary_ic_repair(game: &GameSpec, psi: &Outcome) -> Result<Outcome, CommitmentError> {
    if game.action_count() != 2 {
        return Err(CommitmentError::NotBinary(game.action_count()));
    }
    psi.check_dims(game)?;
    let mut rows = psi.rows().to_vec();
    for t in 0..game.state_count() {
        if game.in_action_set(1, t) {
            rows[0][t] = Rational::zero();
            rows[1][t] = Rational::one();
        }
    }
    Ok(Outcome::new(rows)?)
}

/// Solve the binary commitment problem directly by the cutoff construction.
///
/// States are ranked by `delta` descending; the high action is recommended
/// with probability one down the ranking while the pooled obedience slack
/// stays nonnegative, and the pivotal state gets the interior weight that
/// drives the slack to exactly zero (capped at one). Requires the
/// regularity condition so the ranking is strict. When the high action is a
/// best response everywhere this degenerates to full pooling.
pub fn binary_cutoff_commitment(game: &GameSpec) -> Result<CommitmentSolution, CommitmentError> {
    let view = require_regular(game)?;
    let n = game.state_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| view.delta[b].cmp(&view.delta[a]));

    let mut weight = vec![Rational::zero(); n];
    let mut slack = Rational::zero();
    for &t in &order {
        let step = &view.delta[t] * game.prior_of(t);
        if !view.delta[t].is_negative() {
            weight[t] = Rational::one();
            slack += step;
            continue;
        }
        // Interior weight solving slack + w * step = 0, capped at one.
        let w = (-&slack).checked_div(&step).expect("delta < 0").min(Rational::one());
        if w.is_positive() {
            slack += &w * &step;
            weight[t] = w.clone();
        }
        if w < Rational::one() {
            break;
        }
    }
    debug_assert!(!slack.is_negative());

    let rows =
        vec![weight.iter().map(|w| Rational::one() - w).collect::<Vec<_>>(), weight];
    let outcome = Outcome::new(rows)?;
    debug_assert!(check_obedience(game, &outcome).passed);
    let payoff = outcome_payoffs(game, &outcome).1;
    let is_deterministic = outcome.is_deterministic();
    let ic = check_ic(game, &outcome).passed;
    Ok(CommitmentSolution { payoff, outcome, is_deterministic, ic })
}

/// For binary games under the regularity condition, the equilibrium
/// shortfall is at most the largest single-state prior mass (exactly, when
/// sender payoffs are normalized to 0 and 1). Reports the gap, the bound,
/// and whether it holds.
pub fn commitment_gap_bound_check(
    game: &GameSpec,
    budget: u64,
) -> Result<GapBound, CommitmentError> {
    require_regular(game)?;
    let verdict = decide_commitment_in_equilibrium(game, budget)?;
    let bound = game.prior().iter().max().expect("at least two states").clone();
    let holds = verdict.gap <= bound;
    Ok(GapBound { gap: verdict.gap, bound, holds })
}
