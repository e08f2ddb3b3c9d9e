//! An exact simplex solver for small dense linear programs.
//!
//! Problems are stated as: maximize `c . x` subject to per-row constraints
//! `a_i . x {<=, =, >=} b_i` and `x >= 0`. All arithmetic is rational, so an
//! optimal result satisfies every constraint exactly and the reported value
//! equals `c . x` recomputed from the solution, with no tolerance anywhere.
//!
//! The implementation is the classic two-phase dense tableau method with
//! Bland's entering/leaving rule (lowest eligible index), which cannot cycle
//! and makes every run reproducible. Speed is not a goal: the games this
//! crate analyzes produce at most a few hundred variables.

use std::fmt;

use crate::rational::Rational;

/// Constraint direction for one row of a [`LinearProgram`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

/// A linear program in inequality form over nonnegative variables.
///
/// Construction validates the shape: every row must have exactly
/// `variable_count` coefficients and there must be one right-hand side per
/// row.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    rows: Vec<Vec<Rational>>,
    senses: Vec<Sense>,
    rhs: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("objective has {objective} coefficients but the program has {variables} variables")]
    ObjectiveLength { objective: usize, variables: usize },
    #[error("constraint row {row} has {got} coefficients, expected {expected}")]
    RowLength { row: usize, got: usize, expected: usize },
    #[error("{rows} constraint rows but {rhs} right-hand sides")]
    RhsLength { rows: usize, rhs: usize },
    #[error("{rows} constraint rows but {senses} senses")]
    SenseLength { rows: usize, senses: usize },
    #[error("a linear program must have at least one variable")]
    NoVariables,
}

impl LinearProgram {
    pub fn new(
        objective: Vec<Rational>,
        rows: Vec<Vec<Rational>>,
        senses: Vec<Sense>,
        rhs: Vec<Rational>,
    ) -> Result<Self, LpError> {
        let n = objective.len();
        if n == 0 {
            return Err(LpError::NoVariables);
        }
        if rows.len() != rhs.len() {
            return Err(LpError::RhsLength { rows: rows.len(), rhs: rhs.len() });
        }
        if rows.len() != senses.len() {
            return Err(LpError::SenseLength { rows: rows.len(), senses: senses.len() });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(LpError::RowLength { row: i, got: row.len(), expected: n });
            }
        }
        Ok(LinearProgram { objective, rows, senses, rhs })
    }

    pub fn variable_count(&self) -> usize {
        self.objective.len()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }
}

/// Result of [`lp_solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    /// A basic optimal solution (a vertex of the feasible polytope) and the
    /// exact optimal value.
    Optimal { value: Rational, solution: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpResult {
    pub fn optimal(&self) -> Option<(&Rational, &[Rational])> {
        match self {
            LpResult::Optimal { value, solution } => Some((value, solution)),
            _ => None,
        }
    }
}

/// Dense simplex tableau: `rows x cols` constraint matrix in current basis
/// coordinates, with the right-hand side kept separately.
struct Tableau {
    cols: usize,
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    /// Pivot on (`row`, `col`): scale the pivot row to make the entry one,
    /// eliminate the column from all other rows, and update the basis.
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.a[row][col].recip().expect("pivot entry must be nonzero");
        for x in self.a[row].iter_mut() {
            *x *= &inv;
        }
        self.b[row] *= &inv;
        let (pivot_row, b_pivot) = (self.a[row].clone(), self.b[row].clone());
        for r in 0..self.a.len() {
            if r == row || self.a[r][col].is_zero() {
                continue;
            }
            let factor = self.a[r][col].clone();
            for (x, p) in self.a[r].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &(&factor * p);
                }
            }
            self.b[r] -= &(&factor * &b_pivot);
        }
        self.basis[row] = col;
    }

    /// Reduced costs `c_j - c_B . T_j` for a maximization objective `c`
    /// (zero-extended over tableau columns), plus the current objective value.
    fn reduced_costs(&self, c: &[Rational]) -> (Vec<Rational>, Rational) {
        let cost = |j: usize| c.get(j).cloned().unwrap_or_else(Rational::zero);
        let mut reduced: Vec<Rational> = (0..self.cols).map(cost).collect();
        let mut value = Rational::zero();
        for (r, &bj) in self.basis.iter().enumerate() {
            let cb = cost(bj);
            if cb.is_zero() {
                continue;
            }
            value += &cb * &self.b[r];
            for j in 0..self.cols {
                if !self.a[r][j].is_zero() {
                    reduced[j] -= &(&cb * &self.a[r][j]);
                }
            }
        }
        (reduced, value)
    }

    /// Run Bland-rule simplex iterations maximizing `c` until optimality or
    /// unboundedness. Returns `None` when unbounded.
    fn maximize(&mut self, c: &[Rational], frozen: &[bool]) -> Option<Rational> {
        loop {
            let (reduced, value) = self.reduced_costs(c);
            // Bland: enter the lowest-index improving column.
            let entering = (0..self.cols)
                .find(|&j| !frozen[j] && reduced[j].is_positive() && !self.basis.contains(&j));
            let Some(col) = entering else {
                return Some(value);
            };
            // Ratio test; ties broken by the lowest basic variable index.
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.a.len() {
                if !self.a[r][col].is_positive() {
                    continue;
                }
                let ratio = &self.b[r] / &self.a[r][col];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let (row, _) = leave?;
            self.pivot(row, col);
        }
    }
}

/// Solve a linear program exactly. See the module docs for the method.
pub fn lp_solve(lp: &LinearProgram) -> LpResult {
    let n = lp.variable_count();
    let m = lp.row_count();

    // Normalized rows: flip signs so every right-hand side is nonnegative,
    // and rewrite `>= 0` rows as `<= 0` so they get a slack instead of an
    // artificial variable.
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    let mut senses: Vec<Sense> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = lp.rows[i].clone();
        let mut b = lp.rhs[i].clone();
        let mut sense = lp.senses[i];
        if b.is_negative() || (b.is_zero() && sense == Sense::Ge) {
            for x in row.iter_mut() {
                *x = -&*x;
            }
            b = -b;
            sense = match sense {
                Sense::Le => Sense::Ge,
                Sense::Eq => Sense::Eq,
                Sense::Ge => Sense::Le,
            };
        }
        rows.push(row);
        rhs.push(b);
        senses.push(sense);
    }

    // Column layout: structural 0..n, then one slack/surplus per inequality
    // row, then one artificial per row that needs one (>= and = rows).
    let n_slack = senses.iter().filter(|s| **s != Sense::Eq).count();
    let n_art = senses.iter().filter(|s| **s != Sense::Le).count();
    let cols = n + n_slack + n_art;

    let mut a = vec![vec![Rational::zero(); cols]; m];
    let mut basis = vec![usize::MAX; m];
    let mut artificial_cols: Vec<usize> = Vec::with_capacity(n_art);
    let mut next_slack = n;
    let mut next_art = n + n_slack;
    for i in 0..m {
        a[i][..n].clone_from_slice(&rows[i]);
        match senses[i] {
            Sense::Le => {
                a[i][next_slack] = Rational::one();
                basis[i] = next_slack;
                next_slack += 1;
            }
            Sense::Ge => {
                a[i][next_slack] = -Rational::one();
                next_slack += 1;
                a[i][next_art] = Rational::one();
                basis[i] = next_art;
                artificial_cols.push(next_art);
                next_art += 1;
            }
            Sense::Eq => {
                a[i][next_art] = Rational::one();
                basis[i] = next_art;
                artificial_cols.push(next_art);
                next_art += 1;
            }
        }
    }

    let mut t = Tableau { cols, a, b: rhs, basis };
    let is_artificial = |j: usize| j >= n + n_slack;
    let frozen_none = vec![false; cols];

    // Phase 1: maximize minus the sum of artificials; feasible iff the
    // optimum is zero.
    if !artificial_cols.is_empty() {
        let mut phase1 = vec![Rational::zero(); cols];
        for &j in &artificial_cols {
            phase1[j] = -Rational::one();
        }
        let value = t
            .maximize(&phase1, &frozen_none)
            .expect("phase 1 objective is bounded above by zero");
        if !value.is_zero() {
            return LpResult::Infeasible;
        }
        // Drive any artificial still in the basis out of it; an all-zero row
        // is a redundant constraint and is dropped.
        let mut r = 0;
        while r < t.a.len() {
            if is_artificial(t.basis[r]) {
                debug_assert!(t.b[r].is_zero());
                match (0..n + n_slack).find(|&j| !t.a[r][j].is_zero()) {
                    Some(col) => t.pivot(r, col),
                    None => {
                        t.a.remove(r);
                        t.b.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // Phase 2: the real objective, with artificial columns frozen out.
    let mut frozen = vec![false; cols];
    for j in (n + n_slack)..cols {
        frozen[j] = true;
    }
    let Some(value) = t.maximize(&lp.objective, &frozen) else {
        return LpResult::Unbounded;
    };

    let mut solution = vec![Rational::zero(); n];
    for (r, &bj) in t.basis.iter().enumerate() {
        if bj < n {
            solution[bj] = t.b[r].clone();
        }
    }
    debug_assert_eq!(
        value,
        lp.objective.iter().zip(&solution).map(|(c, x)| c * x).sum::<Rational>()
    );
    LpResult::Optimal { value, solution }
}
