//! Dense two-phase primal simplex over exact rationals with Bland's rule.
//!
//! All variables are non-negative. Problems here have a few dozen rows, so a
//! full tableau is fine.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Maximize `objective · x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    /// Rows of `[coefficients..., rhs]`.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    total_cols: usize,
    artificial_start: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        let slack_count = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let artificial_start = n + slack_count;
        let total_cols = artificial_start + m;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = n;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![Rational::zero(); total_cols + 1];
            row[..n].clone_from_slice(&c.coeffs);
            row[total_cols] = c.rhs.clone();
            match c.relation {
                Relation::Le => {
                    row[slack] = Rational::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            if row[total_cols].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            // Every row gets an artificial variable; phase one drives them out.
            row[artificial_start + i] = Rational::one();
            basis.push(artificial_start + i);
            rows.push(row);
        }
        Tableau { rows, basis, total_cols, artificial_start }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced cost of column `j` for maximizing `cost · x`.
    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut z = Rational::zero();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if !cost[b].is_zero() && !row[j].is_zero() {
                z += &cost[b] * &row[j];
            }
        }
        &cost[j] - z
    }

    /// Maximizes `cost · x` over columns `< allowed`. Returns false when
    /// unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> bool {
        let rhs = self.total_cols;
        loop {
            // Bland: lowest-index improving column, lowest-index basic variable
            // among tied ratios.
            let Some(enter) = (0..allowed)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(cost, j).is_positive())
            else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[rhs] / &row[enter];
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
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let rhs = self.total_cols;
        let mut phase_one = vec![Rational::zero(); self.total_cols];
        for c in phase_one[self.artificial_start..].iter_mut() {
            *c = -Rational::one();
        }
        self.optimize(&phase_one, self.total_cols);
        let infeasibility: Rational = self
            .rows
            .iter()
            .zip(&self.basis)
            .filter(|(_, &b)| b >= self.artificial_start)
            .map(|(row, _)| row[rhs].clone())
            .sum();
        if !infeasibility.is_zero() {
            return LpOutcome::Infeasible;
        }
        // Pivot remaining (zero-valued) artificials out of the basis, or drop
        // their rows if they are redundant.
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
        let mut cost = vec![Rational::zero(); self.total_cols];
        cost[..lp.num_vars].clone_from_slice(&lp.objective);
        if !self.optimize(&cost, self.artificial_start) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); lp.num_vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < lp.num_vars {
                x[b] = row[rhs].clone();
            }
        }
        let value = x
            .iter()
            .zip(&lp.objective)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b);
        LpOutcome::Optimal { value, x }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let mut lp = LinearProgram::new(2);
        lp.objective = v(&[3, 5]);
        lp.add(v(&[1, 0]), Relation::Le, int(4));
        lp.add(v(&[0, 2]), Relation::Le, int(12));
        lp.add(v(&[3, 2]), Relation::Le, int(18));
        assert_eq!(lp.solve(), LpOutcome::Optimal { value: int(36), x: v(&[2, 6]) });
    }

    #[test]
    fn equality_and_ge_constraints() {
        // max x - y, x + y = 1, y >= 1/3
        let mut lp = LinearProgram::new(2);
        lp.objective = v(&[1, -1]);
        lp.add(v(&[1, 1]), Relation::Eq, int(1));
        lp.add(v(&[0, 1]), Relation::Ge, ratio(1, 3));
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal { value: ratio(1, 3), x: vec![ratio(2, 3), ratio(1, 3)] }
        );
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add(v(&[1]), Relation::Ge, int(2));
        lp.add(v(&[1]), Relation::Le, int(1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.objective = v(&[1, 0]);
        lp.add(v(&[1, -1]), Relation::Le, int(1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2);
        lp.objective = v(&[0, 1]);
        lp.add(v(&[1, 1]), Relation::Eq, int(2));
        lp.add(v(&[2, 2]), Relation::Eq, int(4));
        assert_eq!(lp.solve(), LpOutcome::Optimal { value: int(2), x: v(&[0, 2]) });
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance; Bland's rule must terminate.
        let mut lp = LinearProgram::new(4);
        lp.objective = vec![ratio(3, 4), int(-150), ratio(1, 50), int(-6)];
        lp.add(vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)], Relation::Le, int(0));
        lp.add(vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)], Relation::Le, int(0));
        lp.add(v(&[0, 0, 1, 0]), Relation::Le, int(1));
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, ratio(1, 20)),
            other => panic!("{other:?}"),
        }
    }

    proptest! {
        // Brute force over vertices of a 2-variable box polytope as oracle.
        #[test]
        fn two_var_matches_vertex_enumeration(c0 in -5i64..=5, c1 in -5i64..=5, a in 1i64..=5, b in 1i64..=5, s in 1i64..=8) {
            let mut lp = LinearProgram::new(2);
            lp.objective = v(&[c0, c1]);
            lp.add(v(&[1, 0]), Relation::Le, int(a));
            lp.add(v(&[0, 1]), Relation::Le, int(b));
            lp.add(v(&[1, 1]), Relation::Le, int(s));
            let mut best: Option<Rational> = None;
            for x in 0..=a {
                for y in 0..=b {
                    if x + y <= s {
                        let val = int(c0 * x + c1 * y);
                        if best.as_ref().map_or(true, |b| val > *b) {
                            best = Some(val);
                        }
                    }
                }
            }
            match lp.solve() {
                LpOutcome::Optimal { value, x } => {
                    prop_assert_eq!(Some(value), best);
                    prop_assert!(&x[0] + &x[1] <= int(s));
                }
                other => prop_assert!(false, "{:?}", other),
            }
        }
    }
}
