//! Exact rational linear programming: dense two-phase simplex with Bland's rule.
//!
//! All variables are nonnegative. Free variables are modelled by the caller as
//! a difference of two nonnegative ones.

use num_traits::{One, Signed, Zero};

use crate::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, relation: Relation, rhs: Rat) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, x: Vec<Rat> },
    Infeasible,
    Unbounded,
}

/// Maximize `objective · x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<Rat>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            constraints: Vec::new(),
            objective: vec![Rat::zero(); num_vars],
        }
    }

    pub fn add(&mut self, coeffs: Vec<Rat>, relation: Relation, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.constraints
            .push(Constraint::new(coeffs, relation, rhs));
    }

    pub fn maximize(mut self, objective: Vec<Rat>) -> Self {
        self.objective = objective;
        self
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).solve(&self.objective, self.num_vars)
    }

    /// A feasible point, ignoring the objective.
    pub fn feasible_point(&self) -> Option<Vec<Rat>> {
        let mut tab = Tableau::build(self);
        if !tab.phase_one() {
            return None;
        }
        Some(tab.solution(self.num_vars))
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    width: usize,
    artificial_start: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars;
        let slacks = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let artificials = lp
            .constraints
            .iter()
            .filter(|c| {
                let flipped = c.rhs.is_negative();
                !matches!(
                    (c.relation, flipped),
                    (Relation::Le, false) | (Relation::Ge, true)
                )
            })
            .count();
        let width = n + slacks + artificials;
        let artificial_start = n + slacks;
        let mut rows = Vec::with_capacity(lp.constraints.len());
        let mut basis = Vec::with_capacity(lp.constraints.len());
        let mut next_slack = n;
        let mut next_art = artificial_start;
        for c in &lp.constraints {
            let flip = c.rhs.is_negative();
            let s = if flip { -Rat::one() } else { Rat::one() };
            let mut row: Vec<Rat> = vec![Rat::zero(); width + 1];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[j] = a * &s;
            }
            row[width] = &c.rhs * &s;
            let relation = match (c.relation, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            match relation {
                Relation::Le => {
                    row[next_slack] = Rat::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -Rat::one();
                    next_slack += 1;
                    row[next_art] = Rat::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = Rat::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }
        Self {
            rows,
            basis,
            width,
            artificial_start,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in &mut self.rows[r] {
            *x *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · x` over columns `< limit`; `false` if unbounded.
    fn optimize(&mut self, cost: &[Rat], limit: usize) -> bool {
        let zero = Rat::zero();
        let c = |j: usize| cost.get(j).unwrap_or(&zero);
        loop {
            let entering = (0..limit).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = c(j).clone();
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if !row[j].is_zero() {
                        reduced -= c(b) * &row[j];
                    }
                }
                reduced.is_positive()
            });
            let Some(e) = entering else { return true };
            let mut leave: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[e].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, e);
        }
    }

    /// Drives the artificial variables to zero; `false` if infeasible.
    fn phase_one(&mut self) -> bool {
        if self.artificial_start == self.width {
            return true;
        }
        let mut cost = vec![Rat::zero(); self.width];
        for c in &mut cost[self.artificial_start..] {
            *c = -Rat::one();
        }
        self.optimize(&cost, self.width);
        let infeasible = self
            .rows
            .iter()
            .zip(&self.basis)
            .any(|(row, &b)| b >= self.artificial_start && !row[self.width].is_zero());
        if infeasible {
            return false;
        }
        // pivot remaining zero-level artificials out, dropping redundant rows
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.artificial_start {
                match (0..self.artificial_start).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        true
    }

    fn solution(&self, n: usize) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); n];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < n {
                x[b] = row[self.width].clone();
            }
        }
        x
    }

    fn solve(mut self, objective: &[Rat], n: usize) -> LpOutcome {
        if !self.phase_one() {
            return LpOutcome::Infeasible;
        }
        let limit = self.artificial_start;
        if !self.optimize(objective, limit) {
            return LpOutcome::Unbounded;
        }
        let x = self.solution(n);
        let value = objective
            .iter()
            .zip(&x)
            .fold(Rat::zero(), |acc, (c, v)| acc + c * v);
        LpOutcome::Optimal { value, x }
    }
}

/// Convex weights expressing `point` from `others`, if it lies in their hull.
pub fn convex_combination(point: &[Rat], others: &[&[Rat]]) -> Option<Vec<Rat>> {
    if others.is_empty() {
        return None;
    }
    let mut lp = LinearProgram::new(others.len());
    lp.add(vec![Rat::one(); others.len()], Relation::Eq, Rat::one());
    for (d, target) in point.iter().enumerate() {
        let coeffs = others.iter().map(|p| p[d].clone()).collect();
        lp.add(coeffs, Relation::Eq, target.clone());
    }
    lp.feasible_point()
}
