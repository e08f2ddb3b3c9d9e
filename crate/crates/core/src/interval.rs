//! Games on the continuum state space `[0,1]` with a uniform prior and
//! posterior-mean receiver preferences, at desk scale.
//!
//! A [`MeanThresholdGame`] is given by cutoffs
//! `0 = c_0 <= c_1 <= ... <= c_K = 1`: action `j` is receiver-optimal
//! exactly when the posterior mean lies in `[c_{j-1}, c_j]` (thresholds
//! belong to both neighbors, so the sender's complete-information floor
//! takes the lower action at a threshold). Outcomes are piecewise constant
//! ([`IntervalOutcome`]), which makes every integral a closed form:
//! `int theta dtheta = (hi^2 - lo^2) / 2` per piece.
//!
//! Because obedience here depends only on each action's mass and first
//! moment, a mixed outcome can be *purified*: [`purify_interval_outcome`]
//! rebuilds it as a deterministic outcome preserving both exactly, by
//! nesting centered sub-intervals inside each piece. A sub-interval of
//! length `w * L` centered at the piece midpoint carries exactly the
//! fraction `w` of the piece's first moment, and symmetric pairs about the
//! midpoint do the same for the remaining actions.
//!
//! [`discretize_game`] bridges to the finite model: `n` cell midpoints with
//! a uniform prior and receiver utility equal to the negated squared
//! distance to each action's target-interval midpoint.

use crate::game::{GameError, GameSpec};
use crate::rational::Rational;

/// Receiver preferences over posterior means, plus sender payoffs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeanThresholdGame {
    /// `K + 1` nondecreasing cutoffs from exactly 0 to exactly 1.
    cutoffs: Vec<Rational>,
    /// Strictly increasing sender payoff per action.
    payoff: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("need at least 2 actions, got {0}")]
    TooFewActions(usize),
    #[error("{cutoffs} cutoffs do not match {actions} actions (need actions + 1)")]
    CutoffCount { cutoffs: usize, actions: usize },
    #[error("cutoffs must start at 0 and end at 1, got {first} .. {last}")]
    CutoffRange { first: Rational, last: Rational },
    #[error("cutoffs must be nondecreasing, got {at} then {next}")]
    CutoffOrder { at: Rational, next: Rational },
    #[error("sender payoff is not strictly increasing at actions {} and {}", .at + 1, .next + 1)]
    PayoffNotIncreasing { at: usize, next: usize },
    #[error("piece {piece} is empty or reversed: [{lo}, {hi})")]
    EmptyPiece { piece: usize, lo: Rational, hi: Rational },
    #[error("pieces must tile [0,1]: piece {piece} starts at {got}, expected {expected}")]
    Gap { piece: usize, got: Rational, expected: Rational },
    #[error("piece {piece} weights sum to {sum}, not 1, or contain a negative entry")]
    BadWeights { piece: usize, sum: Rational },
    #[error("piece {piece} has {got} weights, expected {expected}")]
    WeightCount { piece: usize, got: usize, expected: usize },
    #[error("an interval outcome needs at least one piece")]
    NoPieces,
    #[error("discretization needs at least 2 cells, got {0}")]
    GridTooSmall(usize),
    #[error(transparent)]
    Game(#[from] GameError),
}

impl MeanThresholdGame {
    pub fn new(cutoffs: Vec<Rational>, payoff: Vec<Rational>) -> Result<Self, IntervalError> {
        let k = payoff.len();
        if k < 2 {
            return Err(IntervalError::TooFewActions(k));
        }
        if cutoffs.len() != k + 1 {
            return Err(IntervalError::CutoffCount { cutoffs: cutoffs.len(), actions: k });
        }
        if cutoffs[0] != Rational::zero() || cutoffs[k] != Rational::one() {
            return Err(IntervalError::CutoffRange {
                first: cutoffs[0].clone(),
                last: cutoffs[k].clone(),
            });
        }
        for w in cutoffs.windows(2) {
            if w[1] < w[0] {
                return Err(IntervalError::CutoffOrder { at: w[0].clone(), next: w[1].clone() });
            }
        }
        for j in 0..k - 1 {
            if payoff[j + 1] <= payoff[j] {
                return Err(IntervalError::PayoffNotIncreasing { at: j, next: j + 1 });
            }
        }
        Ok(MeanThresholdGame { cutoffs, payoff })
    }

    pub fn action_count(&self) -> usize {
        self.payoff.len()
    }

    pub fn cutoffs(&self) -> &[Rational] {
        &self.cutoffs
    }

    pub fn payoffs(&self) -> &[Rational] {
        &self.payoff
    }

    pub fn payoff(&self, action: usize) -> &Rational {
        &self.payoff[action]
    }

    /// The lowest action optimal at state `theta` under complete
    /// information: `min { j : cutoffs[j+1] >= theta }`.
    pub fn lowest_best_action(&self, theta: &Rational) -> usize {
        (0..self.action_count())
            .find(|&j| self.cutoffs[j + 1] >= *theta)
            .expect("cutoffs end at 1 >= theta")
    }

    /// The sender's complete-information floor at `theta`.
    pub fn v_lower(&self, theta: &Rational) -> Rational {
        self.payoff[self.lowest_best_action(theta)].clone()
    }
}

/// One piece of a piecewise-constant outcome: on `[lo, hi)` the receiver
/// acts according to `weights`. The final piece is closed at 1; endpoint
/// conventions never affect masses, moments, or the incentive analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Rational,
    pub weights: Vec<Rational>,
}

impl Piece {
    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// `int_lo^hi theta dtheta`, exactly.
    pub fn first_moment(&self) -> Rational {
        (&self.hi * &self.hi - &self.lo * &self.lo) / Rational::from_integer(2)
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&j| self.weights[j].is_positive()).collect()
    }
}

/// A piecewise-constant outcome whose pieces tile `[0, 1]` in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalOutcome {
    pieces: Vec<Piece>,
}

impl IntervalOutcome {
    pub fn new(pieces: Vec<Piece>) -> Result<Self, IntervalError> {
        if pieces.is_empty() {
            return Err(IntervalError::NoPieces);
        }
        let k = pieces[0].weights.len();
        let mut cursor = Rational::zero();
        for (i, piece) in pieces.iter().enumerate() {
            if piece.lo != cursor {
                return Err(IntervalError::Gap {
                    piece: i,
                    got: piece.lo.clone(),
                    expected: cursor,
                });
            }
            if piece.hi <= piece.lo {
                return Err(IntervalError::EmptyPiece {
                    piece: i,
                    lo: piece.lo.clone(),
                    hi: piece.hi.clone(),
                });
            }
            if piece.weights.len() != k {
                return Err(IntervalError::WeightCount {
                    piece: i,
                    got: piece.weights.len(),
                    expected: k,
                });
            }
            let mut sum = Rational::zero();
            for w in &piece.weights {
                if w.is_negative() {
                    return Err(IntervalError::BadWeights { piece: i, sum: w.clone() });
                }
                sum += w;
            }
            if sum != Rational::one() {
                return Err(IntervalError::BadWeights { piece: i, sum });
            }
            cursor = piece.hi.clone();
        }
        if cursor != Rational::one() {
            return Err(IntervalError::Gap {
                piece: pieces.len(),
                got: Rational::one(),
                expected: cursor,
            });
        }
        Ok(IntervalOutcome { pieces })
    }

    /// A deterministic outcome from `(lo, hi, action)` triples.
    pub fn from_partition(
        cells: &[(Rational, Rational, usize)],
        k: usize,
    ) -> Result<Self, IntervalError> {
        let pieces = cells
            .iter()
            .map(|(lo, hi, action)| {
                let mut weights = vec![Rational::zero(); k];
                weights[*action] = Rational::one();
                Piece { lo: lo.clone(), hi: hi.clone(), weights }
            })
            .collect();
        Self::new(pieces)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn action_count(&self) -> usize {
        self.pieces[0].weights.len()
    }

    pub fn is_deterministic(&self) -> bool {
        self.pieces.iter().all(|p| p.support().len() == 1)
    }
}

/// Per-action mass and first moment of an outcome. Under the uniform prior
/// these determine every obedience constraint of a mean-threshold game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSummary {
    pub mass: Vec<Rational>,
    pub first_moment: Vec<Rational>,
}

impl MomentSummary {
    /// The pooled posterior mean of an action, when it has positive mass.
    pub fn mean(&self, action: usize) -> Option<Rational> {
        if self.mass[action].is_positive() {
            Some(&self.first_moment[action] / &self.mass[action])
        } else {
            None
        }
    }
}

/// Result of [`evaluate_interval_outcome`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalEvaluation {
    pub moments: MomentSummary,
    /// Every positive-mass pooled mean lies inside its action's cutoff
    /// interval.
    pub obedient: bool,
    /// Every action played with positive weight on a piece clears the
    /// sender's floor at every state of the piece.
    pub ic: bool,
    pub ex_ante: Rational,
}

/// Exact closed-form evaluation of a piecewise outcome: per-action masses
/// and moments, the obedience and incentive verdicts, and the sender's
/// ex-ante payoff.
pub fn evaluate_interval_outcome(
    game: &MeanThresholdGame,
    outcome: &IntervalOutcome,
) -> Result<IntervalEvaluation, IntervalError> {
    let k = game.action_count();
    if outcome.action_count() != k {
        return Err(IntervalError::WeightCount {
            piece: 0,
            got: outcome.action_count(),
            expected: k,
        });
    }

    let mut mass = vec![Rational::zero(); k];
    let mut first_moment = vec![Rational::zero(); k];
    let mut ic = true;
    for piece in outcome.pieces() {
        let len = piece.length();
        let moment = piece.first_moment();
        // The sender floor's supremum over the piece is attained just below
        // `hi` (and at `hi` itself for the closed final piece, with the same
        // value because thresholds take the lower action).
        let floor_sup = game
            .payoff((0..k).find(|&j| game.cutoffs[j + 1] >= piece.hi).expect("cutoffs end at 1"))
            .clone();
        for (j, w) in piece.weights.iter().enumerate() {
            if !w.is_positive() {
                continue;
            }
            mass[j] += w * &len;
            first_moment[j] += w * &moment;
            if *game.payoff(j) < floor_sup {
                ic = false;
            }
        }
    }

    let mut obedient = true;
    for j in 0..k {
        if mass[j].is_positive() {
            let mean = &first_moment[j] / &mass[j];
            if mean < game.cutoffs[j] || mean > game.cutoffs[j + 1] {
                obedient = false;
            }
        }
    }

    let ex_ante = (0..k).map(|j| game.payoff(j) * &mass[j]).sum();
    Ok(IntervalEvaluation {
        moments: MomentSummary { mass, first_moment },
        obedient,
        ic,
        ex_ante,
    })
}

/// Purify a mixed piecewise outcome into a deterministic one, preserving
/// every action's mass and first moment exactly.
///
/// Within each piece, actions are allocated from the midpoint outward in
/// descending action order: the innermost positive-weight action takes one
/// centered interval, each further action a symmetric pair flanking what is
/// already taken. Symmetry about the midpoint gives every allocation first
/// moment `length * midpoint`, hence exact proportionality. Deterministic
/// pieces come through unchanged.
///
/// Obedience and the ex-ante payoff are invariant under purification; the
/// incentive verdict is not, so callers re-run
/// [`evaluate_interval_outcome`] when they need it.
pub fn purify_interval_outcome(
    game: &MeanThresholdGame,
    outcome: &IntervalOutcome,
) -> Result<IntervalOutcome, IntervalError> {
    let k = game.action_count();
    if outcome.action_count() != k {
        return Err(IntervalError::WeightCount {
            piece: 0,
            got: outcome.action_count(),
            expected: k,
        });
    }
    let two = Rational::from_integer(2);
    let mut pieces: Vec<Piece> = Vec::new();
    for piece in outcome.pieces() {
        let len = piece.length();
        let center = piece.midpoint();
        let point_mass = |j: usize| {
            let mut w = vec![Rational::zero(); k];
            w[j] = Rational::one();
            w
        };
        // Inner edges of the two untaken flanks; they start together at the
        // center and move outward symmetrically.
        let mut left_edge = center.clone();
        let mut right_edge = center.clone();
        let mut innermost = true;
        for j in (0..k).rev() {
            if !piece.weights[j].is_positive() {
                continue;
            }
            let half = &piece.weights[j] * &len / &two;
            if innermost {
                pieces.push(Piece {
                    lo: &center - &half,
                    hi: &center + &half,
                    weights: point_mass(j),
                });
                innermost = false;
            } else {
                pieces.push(Piece {
                    lo: &left_edge - &half,
                    hi: left_edge.clone(),
                    weights: point_mass(j),
                });
                pieces.push(Piece {
                    lo: right_edge.clone(),
                    hi: &right_edge + &half,
                    weights: point_mass(j),
                });
            }
            left_edge -= &half;
            right_edge += &half;
        }
        debug_assert_eq!(left_edge, piece.lo);
        debug_assert_eq!(right_edge, piece.hi);
    }
    pieces.sort_by(|a, b| a.lo.cmp(&b.lo));
    IntervalOutcome::new(pieces)
}

/// Discretize a mean-threshold game onto `n` uniform cells: states at the
/// cell midpoints `(2i - 1) / (2n)`, prior `1/n` each, receiver utility
/// `-(theta - m_j)^2` with `m_j` the midpoint of the action's cutoff
/// interval, sender payoffs copied.
pub fn discretize_game(game: &MeanThresholdGame, n: usize) -> Result<GameSpec, IntervalError> {
    if n < 2 {
        return Err(IntervalError::GridTooSmall(n));
    }
    let k = game.action_count();
    let two = Rational::from_integer(2);
    let targets: Vec<Rational> =
        (0..k).map(|j| (&game.cutoffs[j] + &game.cutoffs[j + 1]) / &two).collect();
    let states: Vec<Rational> = (0..n)
        .map(|i| Rational::ratio(2 * i as i64 + 1, 2 * n as i64))
        .collect();
    let prior = vec![Rational::ratio(1, n as i64); n];
    let utility: Vec<Vec<Rational>> = (0..k)
        .map(|j| {
            states
                .iter()
                .map(|theta| {
                    let d = theta - &targets[j];
                    -(&d * &d)
                })
                .collect()
        })
        .collect();
    Ok(GameSpec::new(prior, utility, game.payoffs().to_vec())?)
}
