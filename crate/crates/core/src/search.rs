//! Depth-first search over deterministic outcomes (action partitions).
//!
//! Three queries share this engine: find the lexicographically first
//! incentive-compatible obedient partition with an exact target payoff, find
//! the best payoff among all incentive-compatible obedient partitions, and
//! list all of them. States are processed in order and actions tried in
//! ascending index order, so the first full assignment reached is the
//! lexicographically smallest one that survives pruning.
//!
//! Pruning is sound: a branch is cut only when no completion of the current
//! prefix can satisfy the query.
//!
//! - Incentive compatibility of a deterministic outcome is separable across
//!   states (`v(assigned action) >= v_lower(state)`), so each state has a
//!   fixed menu of admissible actions.
//! - Payoff box: the exact payoff of any completion lies between the current
//!   partial payoff plus the per-state minima and maxima of the remaining
//!   states.
//! - Obedience upper bound: the final slack of the pair `(j, j2)` equals the
//!   running partial slack plus contributions of states not yet assigned;
//!   for a state whose menu is exactly `{j}` that contribution is forced,
//!   otherwise it is at most `max(0, contribution)`. If even the upper bound
//!   is negative the prefix is hopeless.
//!
//! The node budget caps visited search nodes, not the nominal `K^N` space:
//! pruning typically visits a vanishing fraction of it.

use crate::game::{GameSpec, Partition};
use crate::rational::Rational;

/// Default cap on visited search nodes for partition searches.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("partition search exceeded its node budget of {budget}")]
pub struct BudgetExceeded {
    pub budget: u64,
}

pub(crate) struct PartitionSearch<'g> {
    game: &'g GameSpec,
    n: usize,
    k: usize,
    /// Admissible (incentive-compatible) actions per state, ascending.
    allowed: Vec<Vec<usize>>,
    /// `contrib[j][j2][t]`: what assigning state `t` to action `j` adds to
    /// the obedience slack of `j` against `j2`.
    contrib: Vec<Vec<Vec<Rational>>>,
    /// `slack_bound[j][j2][t]`: largest total contribution states `t..` can
    /// still add to the slack of `(j, j2)`.
    slack_bound: Vec<Vec<Vec<Rational>>>,
    /// `pay[t][j]`: prior-weighted sender payoff of assigning `t` to `j`.
    pay: Vec<Vec<Rational>>,
    min_pay_suffix: Vec<Rational>,
    max_pay_suffix: Vec<Rational>,
    budget: u64,
    visited: u64,
}

/// Mutable DFS state, kept separate so the borrow checker allows in-place
/// updates while the tables above stay shared.
struct Frame {
    assign: Vec<usize>,
    slack: Vec<Vec<Rational>>,
    partial_pay: Vec<Rational>,
}

impl<'g> PartitionSearch<'g> {
    pub(crate) fn new(game: &'g GameSpec, budget: u64) -> Self {
        let n = game.state_count();
        let k = game.action_count();

        let allowed: Vec<Vec<usize>> = (0..n)
            .map(|t| {
                let lo = game.lowest_best_action(t);
                (lo..k).collect()
            })
            .collect();

        let mut contrib = vec![vec![vec![Rational::zero(); n]; k]; k];
        for j in 0..k {
            for j2 in 0..k {
                if j == j2 {
                    continue;
                }
                for t in 0..n {
                    contrib[j][j2][t] =
                        (game.utility(j, t) - game.utility(j2, t)) * game.prior_of(t);
                }
            }
        }

        let mut slack_bound = vec![vec![vec![Rational::zero(); n + 1]; k]; k];
        for j in 0..k {
            for j2 in 0..k {
                if j == j2 {
                    continue;
                }
                for t in (0..n).rev() {
                    let c = &contrib[j][j2][t];
                    let step = if !allowed[t].contains(&j) {
                        Rational::zero()
                    } else if allowed[t].len() == 1 {
                        c.clone()
                    } else {
                        c.clone().max(Rational::zero())
                    };
                    slack_bound[j][j2][t] = &slack_bound[j][j2][t + 1] + step;
                }
            }
        }

        let pay: Vec<Vec<Rational>> =
            (0..n).map(|t| (0..k).map(|j| game.prior_of(t) * game.payoff(j)).collect()).collect();
        let mut min_pay_suffix = vec![Rational::zero(); n + 1];
        let mut max_pay_suffix = vec![Rational::zero(); n + 1];
        for t in (0..n).rev() {
            let lo = &pay[t][allowed[t][0]];
            let hi = &pay[t][*allowed[t].last().expect("menu nonempty")];
            min_pay_suffix[t] = &min_pay_suffix[t + 1] + lo;
            max_pay_suffix[t] = &max_pay_suffix[t + 1] + hi;
        }

        PartitionSearch {
            game,
            n,
            k,
            allowed,
            contrib,
            slack_bound,
            pay,
            min_pay_suffix,
            max_pay_suffix,
            budget,
            visited: 0,
        }
    }

    fn fresh_frame(&self) -> Frame {
        Frame {
            assign: Vec::with_capacity(self.n),
            slack: vec![vec![Rational::zero(); self.k]; self.k],
            partial_pay: vec![Rational::zero()],
        }
    }

    fn tick(&mut self) -> Result<(), BudgetExceeded> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(BudgetExceeded { budget: self.budget });
        }
        Ok(())
    }

    /// No completion of the prefix ending at depth `next` can repair some
    /// obedience pair.
    fn obedience_hopeless(&self, slack: &[Vec<Rational>], next: usize) -> bool {
        for j in 0..self.k {
            for j2 in 0..self.k {
                if j != j2 && &slack[j][j2] + &self.slack_bound[j][j2][next] < Rational::zero() {
                    return true;
                }
            }
        }
        false
    }

    fn apply(&self, frame: &mut Frame, t: usize, action: usize) {
        frame.assign.push(action);
        for j2 in 0..self.k {
            if j2 != action {
                frame.slack[action][j2] += &self.contrib[action][j2][t];
            }
        }
        let pay = frame.partial_pay.last().expect("nonempty") + &self.pay[t][action];
        frame.partial_pay.push(pay);
    }

    fn unapply(&self, frame: &mut Frame, t: usize, action: usize) {
        frame.assign.pop();
        for j2 in 0..self.k {
            if j2 != action {
                frame.slack[action][j2] -= &self.contrib[action][j2][t];
            }
        }
        frame.partial_pay.pop();
    }

    /// Lexicographically first incentive-compatible obedient partition whose
    /// prior-weighted payoff equals `target` exactly, if any.
    pub(crate) fn find_exact(
        &mut self,
        target: &Rational,
    ) -> Result<Option<Partition>, BudgetExceeded> {
        let mut frame = self.fresh_frame();
        self.dfs_exact(0, &mut frame, target)
    }

    fn dfs_exact(
        &mut self,
        t: usize,
        frame: &mut Frame,
        target: &Rational,
    ) -> Result<Option<Partition>, BudgetExceeded> {
        if t == self.n {
            // Pruning already enforced payoff == target and slack >= 0.
            return Ok(Some(Partition::from_actions_unchecked(frame.assign.clone())));
        }
        let actions = self.allowed[t].clone();
        for action in actions {
            self.tick()?;
            self.apply(frame, t, action);
            let pay = frame.partial_pay.last().expect("nonempty").clone();
            let lo = &pay + &self.min_pay_suffix[t + 1];
            let hi = &pay + &self.max_pay_suffix[t + 1];
            if *target >= lo && *target <= hi && !self.obedience_hopeless(&frame.slack, t + 1) {
                if let Some(found) = self.dfs_exact(t + 1, frame, target)? {
                    return Ok(Some(found));
                }
            }
            self.unapply(frame, t, action);
        }
        Ok(None)
    }

    /// Maximize the payoff over incentive-compatible obedient partitions.
    /// Always succeeds on a valid game: full revelation qualifies.
    pub(crate) fn maximize(&mut self) -> Result<(Rational, Partition), BudgetExceeded> {
        let full = self.game.full_revelation_partition();
        let full_pay: Rational = full
            .assignments()
            .iter()
            .enumerate()
            .map(|(t, &j)| self.pay[t][j].clone())
            .sum();
        let mut best = (full_pay, full);
        let mut frame = self.fresh_frame();
        self.dfs_max(0, &mut frame, &mut best)?;
        Ok(best)
    }

    fn dfs_max(
        &mut self,
        t: usize,
        frame: &mut Frame,
        best: &mut (Rational, Partition),
    ) -> Result<(), BudgetExceeded> {
        if t == self.n {
            let pay = frame.partial_pay.last().expect("nonempty");
            if *pay > best.0 {
                *best = (pay.clone(), Partition::from_actions_unchecked(frame.assign.clone()));
            }
            return Ok(());
        }
        // High actions first: good payoffs early tighten the bound sooner.
        let actions: Vec<usize> = self.allowed[t].iter().rev().copied().collect();
        for action in actions {
            self.tick()?;
            self.apply(frame, t, action);
            let pay = frame.partial_pay.last().expect("nonempty").clone();
            let can_improve = &pay + &self.max_pay_suffix[t + 1] > best.0;
            if can_improve && !self.obedience_hopeless(&frame.slack, t + 1) {
                self.dfs_max(t + 1, frame, best)?;
            }
            self.unapply(frame, t, action);
        }
        Ok(())
    }

    /// All incentive-compatible obedient partitions, in lexicographic order.
    pub(crate) fn enumerate(&mut self) -> Result<Vec<Partition>, BudgetExceeded> {
        let mut out = Vec::new();
        let mut frame = self.fresh_frame();
        self.dfs_enumerate(0, &mut frame, &mut out)?;
        Ok(out)
    }

    fn dfs_enumerate(
        &mut self,
        t: usize,
        frame: &mut Frame,
        out: &mut Vec<Partition>,
    ) -> Result<(), BudgetExceeded> {
        if t == self.n {
            out.push(Partition::from_actions_unchecked(frame.assign.clone()));
            return Ok(());
        }
        let actions = self.allowed[t].clone();
        for action in actions {
            self.tick()?;
            self.apply(frame, t, action);
            if !self.obedience_hopeless(&frame.slack, t + 1) {
                self.dfs_enumerate(t + 1, frame, out)?;
            }
            self.unapply(frame, t, action);
        }
        Ok(())
    }
}
