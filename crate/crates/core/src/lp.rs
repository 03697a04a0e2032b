//! Exact-rational two-phase simplex with Bland's anti-cycling rule.
//!
//! Problems are stated as `maximize c·x` subject to `≤`, `≥` and `=` rows.
//! Variables are nonnegative unless marked free; free variables are split
//! into a difference of two nonnegative parts internally.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint::new(coeffs, Relation::Le, rhs)
    }

    pub fn ge(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint::new(coeffs, Relation::Ge, rhs)
    }

    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint::new(coeffs, Relation::Eq, rhs)
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub free: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        x: Vec<Rational>,
    },
    /// `x` is feasible and `x + t·ray` stays feasible for all `t ≥ 0` while
    /// the objective grows without bound along `ray`.
    Unbounded {
        x: Vec<Rational>,
        ray: Vec<Rational>,
    },
    Infeasible,
}

impl LpOutcome {
    pub fn optimal_value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearProgram {
    /// Maximization over `n` nonnegative variables with no rows yet.
    pub fn maximize(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            constraints: Vec::new(),
            free: vec![false; n],
        }
    }

    pub fn minimize(objective: Vec<Rational>) -> Self {
        LinearProgram::maximize(objective.into_iter().map(|c| -c).collect())
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push(&mut self, c: Constraint) -> &mut Self {
        assert_eq!(c.coeffs.len(), self.num_vars(), "constraint width");
        self.constraints.push(c);
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter()
                .zip(&self.free)
                .all(|(v, &f)| f || !v.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied(x))
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

/// Column layout: structural parts, then slack/surplus, then artificials.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Column of the positive and (for free variables) negative part.
    var_cols: Vec<(usize, Option<usize>)>,
    n_struct: usize,
    n_cols: usize,
    first_artificial: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut var_cols = Vec::with_capacity(lp.num_vars());
        let mut next = 0;
        for &f in &lp.free {
            if f {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            } else {
                var_cols.push((next, None));
                next += 1;
            }
        }
        let n_struct = next;
        let m = lp.constraints.len();

        // Normalize so every right-hand side is nonnegative.
        let normalized: Vec<(Vec<Rational>, Relation, Rational)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|a| -a).collect(), rel, -&c.rhs)
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();

        let n_slack = normalized.iter().filter(|c| c.1 != Relation::Eq).count();
        let n_art = normalized.iter().filter(|c| c.1 != Relation::Le).count();
        let first_artificial = n_struct + n_slack;
        let n_cols = first_artificial + n_art;

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut slack, mut art) = (n_struct, first_artificial);
        for (coeffs, rel, b) in normalized {
            let mut row = vec![Rational::zero(); n_cols];
            for (v, a) in coeffs.into_iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (p, q) = var_cols[v];
                if let Some(q) = q {
                    row[q] = -&a;
                }
                row[p] = a;
            }
            match rel {
                Relation::Le => {
                    row[slack] = Rational::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                    row[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
            rhs.push(b);
        }
        Tableau {
            rows,
            rhs,
            basis,
            var_cols,
            n_struct,
            n_cols,
            first_artificial,
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        if self.first_artificial < self.n_cols {
            let mut phase1 = vec![Rational::zero(); self.n_cols];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = -Rational::one();
            }
            let limit = self.n_cols;
            match self.optimize(&phase1, limit) {
                Pivoted::Optimal => {}
                Pivoted::Unbounded(_) => unreachable!("phase one objective is bounded"),
            }
            if self.value(&phase1).is_negative() {
                return LpOutcome::Infeasible;
            }
            self.drive_out_artificials();
        }
        let mut cost = vec![Rational::zero(); self.n_cols];
        for (v, c) in lp.objective.iter().enumerate() {
            let (p, q) = self.var_cols[v];
            cost[p] = c.clone();
            if let Some(q) = q {
                cost[q] = -c;
            }
        }
        let limit = self.first_artificial;
        match self.optimize(&cost, limit) {
            Pivoted::Optimal => LpOutcome::Optimal {
                value: self.value(&cost),
                x: self.extract(&self.primal_columns()),
            },
            Pivoted::Unbounded(col) => {
                let mut dir = vec![Rational::zero(); self.n_cols];
                dir[col] = Rational::one();
                for (r, &b) in self.basis.iter().enumerate() {
                    dir[b] = -&self.rows[r][col];
                }
                LpOutcome::Unbounded {
                    x: self.extract(&self.primal_columns()),
                    ray: self.extract(&dir),
                }
            }
        }
    }

    fn primal_columns(&self) -> Vec<Rational> {
        let mut vals = vec![Rational::zero(); self.n_cols];
        for (r, &b) in self.basis.iter().enumerate() {
            vals[b] = self.rhs[r].clone();
        }
        vals
    }

    fn extract(&self, cols: &[Rational]) -> Vec<Rational> {
        self.var_cols
            .iter()
            .map(|&(p, q)| match q {
                Some(q) => &cols[p] - &cols[q],
                None => cols[p].clone(),
            })
            .collect()
    }

    fn value(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .zip(&self.rhs)
            .filter(|(&b, _)| !cost[b].is_zero())
            .map(|(&b, v)| &cost[b] * v)
            .sum()
    }

    /// Bland's rule: lowest-index improving column, lowest-index basic
    /// variable among ratio ties. Columns at or beyond `limit` never enter.
    fn optimize(&mut self, cost: &[Rational], limit: usize) -> Pivoted {
        loop {
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                if self.reduced_cost(cost, j).is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Pivoted::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, j),
                None => return Pivoted::Unbounded(j),
            }
        }
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut d = cost[j].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            let a = &self.rows[r][j];
            if !a.is_zero() && !cost[b].is_zero() {
                d -= &cost[b] * a;
            }
        }
        d
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let nz: Vec<usize> = (0..self.n_cols)
            .filter(|&k| !self.rows[r][k].is_zero())
            .collect();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let pivot_rhs = self.rhs[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for &k in &nz {
                row[k] -= &f * &pivot_row[k];
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        self.rows[r] = pivot_row;
        self.basis[r] = j;
    }

    /// Removes artificial variables still basic at level zero after phase
    /// one, dropping rows that turn out to be redundant.
    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] < self.first_artificial {
                r += 1;
                continue;
            }
            let col = (0..self.first_artificial)
                .find(|&k| !self.basis.contains(&k) && !self.rows[r][k].is_zero());
            match col {
                Some(k) => {
                    self.pivot(r, k);
                    r += 1;
                }
                None => {
                    self.rows.remove(r);
                    self.rhs.remove(r);
                    self.basis.remove(r);
                }
            }
        }
        let _ = self.n_struct;
    }
}

enum Pivoted {
    Optimal,
    Unbounded(usize),
}
