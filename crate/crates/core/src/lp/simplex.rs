use alloc::vec;
use alloc::vec::Vec;

use super::{LinearProgram, LpOutcome, Relation, Sense};
use crate::rational::Rational;

/// `x_j = offset + sum coef * y_k` in terms of non-negative columns.
struct Substitution {
    offset: Rational,
    terms: Vec<(usize, Rational)>,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    /// Reduced costs; the last entry is minus the objective value.
    cost: Vec<Rational>,
    basis: Vec<usize>,
    /// Columns that may enter the basis.
    allowed: Vec<bool>,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                let d = &f * &pivot_row[j];
                row[j] -= d;
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for &j in &nz {
                let d = &f * &pivot_row[j];
                self.cost[j] -= d;
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule: lowest entering column, lowest leaving basic variable.
    fn run(&mut self) -> Step {
        let rhs = self.rhs();
        loop {
            let Some(c) = (0..rhs).find(|&j| self.allowed[j] && self.cost[j].is_negative()) else {
                return Step::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &leave {
                    None => true,
                    Some((k, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return Step::Unbounded,
            }
        }
    }

    fn set_cost(&mut self, c: &[Rational]) {
        let rhs = self.rhs();
        let mut cost: Vec<Rational> = c.to_vec();
        cost.push(Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            if c[b].is_zero() {
                continue;
            }
            for j in 0..=rhs {
                if !self.rows[i][j].is_zero() {
                    let d = &c[b] * &self.rows[i][j];
                    cost[j] -= d;
                }
            }
        }
        self.cost = cost;
    }
}

pub(super) fn solve(lp: &LinearProgram) -> LpOutcome {
    let zero = Rational::zero();
    let mut subs = Vec::with_capacity(lp.variable_count);
    let mut columns = 0usize;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for j in 0..lp.variable_count {
        match (&lp.lower[j], &lp.upper[j]) {
            (Some(l), upper) => {
                if let Some(u) = upper {
                    if u < l {
                        return LpOutcome::Infeasible;
                    }
                    bound_rows.push((columns, u - l));
                }
                subs.push(Substitution { offset: l.clone(), terms: vec![(columns, Rational::one())] });
                columns += 1;
            }
            (None, Some(u)) => {
                subs.push(Substitution { offset: u.clone(), terms: vec![(columns, -Rational::one())] });
                columns += 1;
            }
            (None, None) => {
                subs.push(Substitution {
                    offset: zero.clone(),
                    terms: vec![(columns, Rational::one()), (columns + 1, -Rational::one())],
                });
                columns += 2;
            }
        }
    }
    let structural = columns;

    // rows over structural columns with a non-negative right-hand side
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for c in &lp.constraints {
        let mut coeffs = vec![zero.clone(); structural];
        let mut rhs = c.rhs.clone();
        for (a, s) in c.coefficients.iter().zip(&subs) {
            if a.is_zero() {
                continue;
            }
            rhs -= a * &s.offset;
            for (k, coef) in &s.terms {
                coeffs[*k] += a * coef;
            }
        }
        rows.push((coeffs, c.relation, rhs));
    }
    for (k, bound) in bound_rows {
        let mut coeffs = vec![zero.clone(); structural];
        coeffs[k] = Rational::one();
        rows.push((coeffs, Relation::Le, bound));
    }
    for (coeffs, relation, rhs) in rows.iter_mut() {
        if rhs.is_negative() {
            for v in coeffs.iter_mut() {
                *v = -&*v;
            }
            *rhs = -&*rhs;
            *relation = match relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let artificials = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let width = structural + slacks + artificials;
    let mut tableau = Tableau {
        rows: Vec::with_capacity(rows.len()),
        cost: vec![zero.clone(); width + 1],
        basis: Vec::with_capacity(rows.len()),
        allowed: vec![true; width],
    };
    let mut next_slack = structural;
    let mut next_artificial = structural + slacks;
    for (coeffs, relation, rhs) in rows {
        let mut row = coeffs;
        row.resize(width + 1, zero.clone());
        row[width] = rhs;
        match relation {
            Relation::Le => {
                row[next_slack] = Rational::one();
                tableau.basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -Rational::one();
                next_slack += 1;
                row[next_artificial] = Rational::one();
                tableau.basis.push(next_artificial);
                next_artificial += 1;
            }
            Relation::Eq => {
                row[next_artificial] = Rational::one();
                tableau.basis.push(next_artificial);
                next_artificial += 1;
            }
        }
        tableau.rows.push(row);
    }
    let is_artificial = |j: usize| j >= structural + slacks && j < width;

    if artificials > 0 {
        let phase1: Vec<Rational> =
            (0..width).map(|j| if is_artificial(j) { Rational::one() } else { zero.clone() }).collect();
        tableau.set_cost(&phase1);
        tableau.run();
        if !tableau.cost[width].is_zero() {
            return LpOutcome::Infeasible;
        }
        // drive zero-valued artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < tableau.rows.len() {
            if is_artificial(tableau.basis[i]) {
                match (0..structural + slacks).find(|&j| !tableau.rows[i][j].is_zero()) {
                    Some(j) => {
                        tableau.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        tableau.rows.remove(i);
                        tableau.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        for j in structural + slacks..width {
            tableau.allowed[j] = false;
        }
    }

    // phase 2 minimizes; a maximization is negated
    let mut c = vec![zero.clone(); width];
    for (obj, s) in lp.objective.iter().zip(&subs) {
        for (k, coef) in &s.terms {
            let term = obj * coef;
            c[*k] += match lp.sense {
                Sense::Minimize => term,
                Sense::Maximize => -term,
            };
        }
    }
    tableau.set_cost(&c);
    if let Step::Unbounded = tableau.run() {
        return LpOutcome::Unbounded;
    }

    let mut y = vec![zero.clone(); width];
    for (i, &b) in tableau.basis.iter().enumerate() {
        y[b] = tableau.rows[i][width].clone();
    }
    let point: Vec<Rational> = subs
        .iter()
        .map(|s| s.terms.iter().fold(s.offset.clone(), |acc, (k, coef)| acc + coef * &y[*k]))
        .collect();
    let value = lp.objective_value(&point);
    LpOutcome::Optimal { value, point }
}
