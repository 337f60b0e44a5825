//! Exact linear programming and worst-case (coarse) correlated equilibria.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::rational::Rational;
use crate::Error;

mod correlated;
mod simplex;

pub use correlated::{
    check_ce, check_cce, worst_ce, worst_ce_in_table, worst_cce, worst_cce_in_table, JointDistribution,
    LpEquilibrium, DEFAULT_LP_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub variable_count: usize,
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    /// `None` is unbounded below. Defaults to 0.
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearProgram {
    /// Non-negative variables and no constraints.
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            variable_count: n,
            sense,
            objective,
            constraints: Vec::new(),
            lower: vec![Some(Rational::zero()); n],
            upper: vec![None; n],
        }
    }

    pub fn add_constraint(&mut self, coefficients: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        self.constraints.push(Constraint { coefficients, relation, rhs });
        self
    }

    pub fn set_bounds(&mut self, variable: usize, lower: Option<Rational>, upper: Option<Rational>) -> &mut Self {
        self.lower[variable] = lower;
        self.upper[variable] = upper;
        self
    }

    fn validate(&self) -> Result<(), Error> {
        let n = self.variable_count;
        if self.objective.len() != n || self.lower.len() != n || self.upper.len() != n {
            return Err(Error::InvalidSpec(format!("objective and bounds must have {n} entries")));
        }
        if let Some(k) = self.constraints.iter().position(|c| c.coefficients.len() != n) {
            return Err(Error::InvalidSpec(format!("constraint {k} must have {n} coefficients")));
        }
        Ok(())
    }

    pub fn objective_value(&self, point: &[Rational]) -> Rational {
        self.objective.iter().zip(point).map(|(c, x)| c * x).sum()
    }

    /// Whether `point` satisfies every constraint and bound exactly.
    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        point.len() == self.variable_count
            && self.constraints.iter().all(|c| {
                let lhs: Rational = c.coefficients.iter().zip(point).map(|(a, x)| a * x).sum();
                c.relation.holds(&lhs, &c.rhs)
            })
            && point.iter().zip(&self.lower).all(|(x, l)| l.as_ref().map_or(true, |l| x >= l))
            && point.iter().zip(&self.upper).all(|(x, u)| u.as_ref().map_or(true, |u| x <= u))
    }
}

/// Exact two-phase simplex with Bland's rule. An optimal point is checked
/// by substitution before it is returned.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, Error> {
    lp.validate()?;
    let outcome = simplex::solve(lp);
    if let LpOutcome::Optimal { value, point } = &outcome {
        if !lp.is_feasible(point) || lp.objective_value(point) != *value {
            return Err(Error::InvalidSpec("simplex produced a point that fails verification".into()));
        }
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn single_variable() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![int(1)]);
        lp.add_constraint(vec![int(1)], Relation::Le, int(3));
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Optimal { value: int(3), point: vec![int(3)] });
    }

    #[test]
    fn simplex_corner() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![int(1), int(1)]);
        lp.add_constraint(vec![int(1), int(1)], Relation::Le, int(1));
        assert_eq!(solve(&lp).unwrap().value(), Some(&int(1)));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![int(1)]);
        lp.add_constraint(vec![int(1)], Relation::Ge, int(2));
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Unbounded);
        lp.add_constraint(vec![int(1)], Relation::Le, int(1));
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn free_and_bounded_variables() {
        // min x s.t. x >= -5 given as a constraint on a free variable
        let mut lp = LinearProgram::new(Sense::Minimize, vec![int(1)]);
        lp.set_bounds(0, None, None);
        lp.add_constraint(vec![int(1)], Relation::Ge, int(-5));
        assert_eq!(solve(&lp).unwrap().value(), Some(&int(-5)));

        let mut lp = LinearProgram::new(Sense::Maximize, vec![int(2), int(-1)]);
        lp.set_bounds(0, Some(ratio(1, 2)), Some(ratio(7, 3)));
        lp.set_bounds(1, None, Some(int(4)));
        lp.add_constraint(vec![int(1), int(1)], Relation::Eq, int(1));
        // y = 1 - x, objective 3x - 1 maximal at x = 7/3
        assert_eq!(
            solve(&lp).unwrap(),
            LpOutcome::Optimal { value: int(6), point: vec![ratio(7, 3), ratio(-4, 3)] }
        );

        let mut lp = LinearProgram::new(Sense::Maximize, vec![int(1)]);
        lp.set_bounds(0, Some(int(2)), Some(int(1)));
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn degenerate_redundant_rows() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![int(1), int(1)]);
        lp.add_constraint(vec![int(1), int(1)], Relation::Eq, int(1));
        lp.add_constraint(vec![int(2), int(2)], Relation::Eq, int(2));
        lp.add_constraint(vec![int(1), int(0)], Relation::Le, int(1));
        lp.add_constraint(vec![int(1), int(0)], Relation::Le, int(1));
        assert_eq!(solve(&lp).unwrap().value(), Some(&int(1)));
    }

    #[test]
    fn malformed_rows_are_rejected() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![int(1), int(1)]);
        lp.add_constraint(vec![int(1)], Relation::Le, int(1));
        assert!(solve(&lp).is_err());
    }

    /// Optimum by enumerating every basic solution of the bounded 2D/3D LP.
    fn vertex_oracle(lp: &LinearProgram) -> Option<Rational> {
        let n = lp.variable_count;
        let mut rows: Vec<(Vec<Rational>, Rational)> =
            lp.constraints.iter().map(|c| (c.coefficients.clone(), c.rhs.clone())).collect();
        for j in 0..n {
            let mut e = vec![int(0); n];
            e[j] = int(1);
            rows.push((e, int(0)));
        }
        let mut best: Option<Rational> = None;
        let m = rows.len();
        let mut pick = vec![0usize; n];
        fn rec(
            start: usize,
            depth: usize,
            pick: &mut Vec<usize>,
            m: usize,
            f: &mut dyn FnMut(&[usize]),
        ) {
            if depth == pick.len() {
                f(pick);
                return;
            }
            for k in start..m {
                pick[depth] = k;
                rec(k + 1, depth + 1, pick, m, f);
            }
        }
        rec(0, 0, &mut pick, m, &mut |chosen| {
            let a: Vec<Vec<Rational>> = chosen.iter().map(|&k| rows[k].0.clone()).collect();
            let b: Vec<Rational> = chosen.iter().map(|&k| rows[k].1.clone()).collect();
            if let Some(x) = gauss(a, b) {
                if lp.is_feasible(&x) {
                    let v = lp.objective_value(&x);
                    let better = match (&best, lp.sense) {
                        (None, _) => true,
                        (Some(b), Sense::Maximize) => v > *b,
                        (Some(b), Sense::Minimize) => v < *b,
                    };
                    if better {
                        best = Some(v);
                    }
                }
            }
        });
        best
    }

    fn gauss(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
        let n = b.len();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            b.swap(col, pivot);
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = &a[r][col] / &a[col][col];
                    for c in 0..n {
                        let d = &f * &a[col][c];
                        a[r][c] -= d;
                    }
                    let d = &f * &b[col];
                    b[r] -= d;
                }
            }
        }
        Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
    }

    proptest! {
        #[test]
        fn matches_vertex_enumeration(
            n in 2usize..4,
            rows in proptest::collection::vec((proptest::collection::vec(0i64..4, 3), 1i64..6), 1..5),
            obj in proptest::collection::vec(-3i64..4, 3),
            maximize in any::<bool>(),
        ) {
            let sense = if maximize { Sense::Maximize } else { Sense::Minimize };
            let mut lp = LinearProgram::new(sense, obj[..n].iter().map(|&c| int(c)).collect());
            for (coeffs, rhs) in &rows {
                lp.add_constraint(coeffs[..n].iter().map(|&c| int(c)).collect(), Relation::Le, int(*rhs));
            }
            // a box keeps every instance bounded
            lp.add_constraint(vec![int(1); n], Relation::Le, int(10));
            // duplicate a row to force degeneracy
            let first = lp.constraints[0].clone();
            lp.constraints.push(first);
            let expected = vertex_oracle(&lp);
            let got = solve(&lp).unwrap();
            prop_assert_eq!(got.value().cloned(), expected);
        }
    }
}
