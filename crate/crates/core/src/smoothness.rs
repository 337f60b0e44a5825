//! `(lambda, mu, alpha)`-smoothness certificates, the instance-level robust
//! price of anarchy, and probes of its convexity properties in `alpha`.
//!
//! For costs a certificate requires, for all profile pairs `(s, s*)`,
//!
//! ```text
//! sum_i C_i(s*_i, s_-i) + a_i (C_-i(s*_i, s_-i) - C_-i(s)) <= lambda C(s*) + mu C(s)
//! ```
//!
//! and for payoffs the reversed inequality against `lambda P(s*) - mu P(s)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::equilibria::table_optima;
use crate::game::{AltruismVector, Game, Orientation, StrategyProfile};
use crate::rational::{Extended, Rational};
use crate::table::{RangeRunner, Sequential, ValueTable};
use crate::Error;

/// Distance of the `mu` search guard from its open end: `v >= -1 + 1e-6`
/// for costs, `q <= 1 - 1e-6` for payoffs.
pub fn search_guard() -> Rational {
    Rational::new(1, 1_000_000)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairDomain {
    /// Every `(s, s*)` pair.
    AllPairs,
    /// `s*` restricted to optimal profiles.
    OptimumTargets,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmoothnessCertificate {
    pub lambda: Rational,
    pub mu: Rational,
    pub orientation: Orientation,
    pub pair_domain: PairDomain,
}

impl SmoothnessCertificate {
    pub fn new(lambda: Rational, mu: Rational, orientation: Orientation) -> Self {
        SmoothnessCertificate { lambda, mu, orientation, pair_domain: PairDomain::AllPairs }
    }

    /// `lambda / (1 - mu)` for costs, `(1 + mu) / lambda` for payoffs.
    pub fn bound(&self) -> Extended {
        let one = Rational::one();
        match self.orientation {
            Orientation::CostMin if self.mu < one => Extended::ratio(&self.lambda, &(one - &self.mu)),
            Orientation::PayoffMax if self.mu > -one.clone() && self.lambda.is_positive() => {
                Extended::ratio(&(one + &self.mu), &self.lambda)
            }
            _ => Extended::Infinity,
        }
    }

    /// Right-hand side for a pair with `C(s*) = target` and `C(s) = current`.
    fn rhs(&self, target: &Rational, current: &Rational) -> Rational {
        match self.orientation {
            Orientation::CostMin => &self.lambda * target + &self.mu * current,
            Orientation::PayoffMax => &self.lambda * target - &self.mu * current,
        }
    }

    fn admits(&self, lhs: &Rational, rhs: &Rational) -> bool {
        match self.orientation {
            Orientation::CostMin => lhs <= rhs,
            Orientation::PayoffMax => lhs >= rhs,
        }
    }
}

/// Smoothness left-hand side of one pair, evaluated from the definition.
pub fn smoothness_lhs(
    game: &Game,
    alpha: &AltruismVector,
    s: &StrategyProfile,
    s_star: &StrategyProfile,
) -> Result<Rational, Error> {
    game.check_alpha(alpha)?;
    game.check_profile(s)?;
    game.check_profile(s_star)?;
    let here = game.evaluate(s.choices());
    let mut total = Rational::zero();
    for i in 0..game.player_count() {
        let moved = game.evaluate(s.with_choice(i, s_star.choice(i)).choices());
        let residual_moved = &moved.social - &moved.direct[i];
        let residual_here = &here.social - &here.direct[i];
        total += &moved.direct[i] + &(alpha.get(i) * &(residual_moved - residual_here));
    }
    Ok(total)
}

/// Per-profile deviation terms for fast evaluation of every pair.
///
/// `dev[s][i][t] = V_i(t, s_-i) + a_i (R_i(t, s_-i) - R_i(s))` with
/// `R_i = V - V_i`, so that `lhs(s, s*) = sum_i dev[s][i][s*_i]`.
#[derive(Clone, Debug)]
pub struct SmoothnessData {
    orientation: Orientation,
    counts: Vec<usize>,
    offsets: Vec<usize>,
    width: usize,
    social: Vec<Rational>,
    dev: Vec<Rational>,
    targets: Vec<usize>,
    domain: PairDomain,
}

fn dev_block(table: &ValueTable, alpha: &AltruismVector, idx: usize) -> Vec<Rational> {
    let here = table.get(idx);
    let mut block = Vec::new();
    for (i, &count) in table.strategy_counts().iter().enumerate() {
        let residual_here = &here.social - &here.direct[i];
        for t in 0..count {
            let moved = table.get(table.deviation(idx, i, t));
            let residual = &moved.social - &moved.direct[i];
            block.push(&moved.direct[i] + &(alpha.get(i) * &(residual - &residual_here)));
        }
    }
    block
}

impl SmoothnessData {
    pub fn build(table: &ValueTable, alpha: &AltruismVector, domain: PairDomain, cap: u64) -> Result<Self, Error> {
        Self::build_with(table, alpha, domain, cap, &Sequential)
    }

    /// Fails when the number of pairs in the domain exceeds `cap`.
    pub fn build_with<R: RangeRunner>(
        table: &ValueTable,
        alpha: &AltruismVector,
        domain: PairDomain,
        cap: u64,
        runner: &R,
    ) -> Result<Self, Error> {
        if alpha.len() != table.player_count() {
            return Err(Error::AltruismLength { expected: table.player_count(), found: alpha.len() });
        }
        if let Some(idx) = (0..table.len()).find(|&idx| table.social(idx).is_negative()) {
            return Err(Error::InvalidSpec(format!("social value of profile {idx} is negative")));
        }
        let targets: Vec<usize> = match domain {
            PairDomain::AllPairs => (0..table.len()).collect(),
            PairDomain::OptimumTargets => table_optima(table),
        };
        let pairs = (table.len() as u64).checked_mul(targets.len() as u64);
        match pairs {
            Some(p) if p <= cap => {}
            other => return Err(Error::InstanceTooLarge { profiles: other, cap }),
        }
        let counts = table.strategy_counts().to_vec();
        let mut offsets = Vec::with_capacity(counts.len());
        let mut width = 0;
        for &k in &counts {
            offsets.push(width);
            width += k;
        }
        let dev = runner
            .run(table.len(), |range| range.flat_map(|idx| dev_block(table, alpha, idx)).collect::<Vec<_>>())
            .into_iter()
            .flatten()
            .collect();
        Ok(SmoothnessData {
            orientation: table.orientation(),
            social: (0..table.len()).map(|idx| table.social(idx).clone()).collect(),
            counts,
            offsets,
            width,
            dev,
            targets,
            domain,
        })
    }

    pub fn profile_count(&self) -> usize {
        self.social.len()
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn domain(&self) -> PairDomain {
        self.domain
    }

    pub fn pair_count(&self) -> u64 {
        self.social.len() as u64 * self.targets.len() as u64
    }

    pub fn lhs(&self, s: usize, s_star: usize) -> Rational {
        let block = &self.dev[s * self.width..(s + 1) * self.width];
        let mut rest = s_star;
        let mut total = Rational::zero();
        for i in (0..self.counts.len()).rev() {
            let t = rest % self.counts[i];
            rest /= self.counts[i];
            total += &block[self.offsets[i] + t];
        }
        total
    }

    /// First pair in `range` of `s` indices that violates `cert`.
    pub fn violation_in_range(&self, cert: &SmoothnessCertificate, range: Range<usize>) -> Option<PairViolation> {
        for s in range {
            for &t in &self.targets {
                let lhs = self.lhs(s, t);
                let rhs = cert.rhs(&self.social[t], &self.social[s]);
                if !cert.admits(&lhs, &rhs) {
                    return Some(PairViolation { s, s_star: t, lhs, rhs });
                }
            }
        }
        None
    }

    /// Constraint summary of the pairs whose `s` lies in `range`.
    pub fn constraints_in_range(&self, range: Range<usize>) -> ConstraintSet {
        let mut set = ConstraintSet::empty(self.orientation);
        for s in range {
            for &t in &self.targets {
                set.add(&self.social[t], &self.social[s], &self.lhs(s, t));
            }
        }
        set
    }

    /// Pairs in `range` whose constraint is tight at the solution.
    pub fn binding_in_range(&self, solution: &SearchPoint, range: Range<usize>) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for s in range {
            for &t in &self.targets {
                if solution.is_tight(&self.social[t], &self.social[s], &self.lhs(s, t)) {
                    out.push((s, t));
                }
            }
        }
        out
    }
}

/// A pair `(s, s*)`, by profile index, that violates a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairViolation {
    pub s: usize,
    pub s_star: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothCheck {
    pub violation: Option<PairViolation>,
    pub pairs_checked: u64,
}

impl SmoothCheck {
    pub fn is_smooth(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn is_smooth_in<R: RangeRunner>(data: &SmoothnessData, cert: &SmoothnessCertificate, runner: &R) -> SmoothCheck {
    let violation =
        runner.run(data.profile_count(), |range| data.violation_in_range(cert, range)).into_iter().flatten().next();
    SmoothCheck { violation, pairs_checked: data.pair_count() }
}

/// Checks the certificate on every pair of its domain.
pub fn is_smooth(game: &Game, alpha: &AltruismVector, cert: &SmoothnessCertificate) -> Result<SmoothCheck, Error> {
    game.check_alpha(alpha)?;
    if cert.orientation != game.orientation() {
        return Err(Error::OrientationMismatch(cert.orientation));
    }
    let table = ValueTable::build(game)?;
    let data = SmoothnessData::build(&table, alpha, cert.pair_domain, game.profile_cap())?;
    Ok(is_smooth_in(&data, cert, &Sequential))
}

/// The pair constraints after the projective substitution, reduced to an
/// upper envelope of lines in one variable plus an interval.
///
/// Costs use `u = lambda / (1 - mu)`, `v = mu / (1 - mu)`: each pair gives
/// `u A + v (B - L) >= L` with `A = C(s*)`, `B = C(s)`, `L = lhs`, and `u`
/// is minimized. Payoffs use `p = lambda / (1 + mu)`, `q = mu / (1 + mu)`:
/// each pair gives `p A + q (L - B) <= L` and `p` is maximized. Both are
/// stored as "minimize `max_k (m_k x + c_k)` over `x` in `[lo, hi]`".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSet {
    orientation: Orientation,
    /// slope -> largest intercept
    lines: BTreeMap<Rational, Rational>,
    lo: Option<Rational>,
    hi: Option<Rational>,
    infeasible: bool,
}

impl ConstraintSet {
    pub fn empty(orientation: Orientation) -> Self {
        let guard = search_guard();
        let mut lines = BTreeMap::new();
        let (lo, hi) = match orientation {
            Orientation::CostMin => {
                // u >= 0
                lines.insert(Rational::zero(), Rational::zero());
                (Some(guard - Rational::one()), None)
            }
            Orientation::PayoffMax => (None, Some(Rational::one() - guard)),
        };
        ConstraintSet { orientation, lines, lo, hi, infeasible: false }
    }

    fn add_line(&mut self, slope: Rational, intercept: Rational) {
        match self.lines.get_mut(&slope) {
            Some(c) if *c >= intercept => {}
            Some(c) => *c = intercept,
            None => {
                self.lines.insert(slope, intercept);
            }
        }
    }

    fn raise_lo(&mut self, x: Rational) {
        if self.lo.as_ref().map_or(true, |lo| x > *lo) {
            self.lo = Some(x);
        }
    }

    fn lower_hi(&mut self, x: Rational) {
        if self.hi.as_ref().map_or(true, |hi| x < *hi) {
            self.hi = Some(x);
        }
    }

    /// Adds the constraint of a pair with `C(s*) = a`, `C(s) = b`, `lhs = l`.
    pub fn add(&mut self, a: &Rational, b: &Rational, l: &Rational) {
        match self.orientation {
            Orientation::CostMin => {
                let d = b - l;
                if a.is_positive() {
                    self.add_line(-(&d / a), l / a);
                } else if d.is_positive() {
                    self.raise_lo(l / &d);
                } else if d.is_negative() {
                    self.lower_hi(l / &d);
                } else if l.is_positive() {
                    self.infeasible = true;
                }
            }
            Orientation::PayoffMax => {
                let e = l - b;
                if a.is_positive() {
                    self.add_line(&e / a, -(l / a));
                } else if e.is_positive() {
                    self.lower_hi(l / &e);
                } else if e.is_negative() {
                    self.raise_lo(l / &e);
                } else if l.is_negative() {
                    self.infeasible = true;
                }
            }
        }
    }

    pub fn merge(mut self, other: ConstraintSet) -> Self {
        for (m, c) in other.lines {
            self.add_line(m, c);
        }
        if let Some(lo) = other.lo {
            self.raise_lo(lo);
        }
        if let Some(hi) = other.hi {
            self.lower_hi(hi);
        }
        self.infeasible |= other.infeasible;
        self
    }

    fn envelope_at(&self, x: &Rational) -> Rational {
        self.lines.iter().map(|(m, c)| m * x + c).max().expect("non-empty line set")
    }

    /// Minimizer of the upper envelope on `[lo, hi]`, or `None` if unbounded.
    fn minimize(&self) -> Option<(Rational, Rational)> {
        if self.lines.is_empty() {
            return None;
        }
        let mut hull: Vec<(&Rational, &Rational)> = Vec::new();
        let cross = |l1: (&Rational, &Rational), l2: (&Rational, &Rational)| (l1.1 - l2.1) / (l2.0 - l1.0);
        for line in self.lines.iter() {
            while hull.len() >= 2 {
                let (l1, l2) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if cross(l1, line) <= cross(l1, l2) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(line);
        }
        // on a flat minimum prefer its right end, i.e. the largest mu
        let left_end = |j: usize| if j == 0 { self.lo.clone() } else { Some(cross(hull[j - 1], hull[j])) };
        let candidate = match hull.iter().position(|(m, _)| !m.is_negative()) {
            None => self.hi.clone()?,
            Some(j) if hull[j].0.is_positive() => left_end(j)?,
            Some(j) if j + 1 < hull.len() => cross(hull[j], hull[j + 1]),
            Some(j) => self.hi.clone().or_else(|| left_end(j)).unwrap_or_else(Rational::zero),
        };
        let mut x = candidate;
        if let Some(lo) = &self.lo {
            if x < *lo {
                x = lo.clone();
            }
        }
        if let Some(hi) = &self.hi {
            if x > *hi {
                x = hi.clone();
            }
        }
        let value = self.envelope_at(&x);
        Some((x, value))
    }
}

/// Optimal point of the substituted two-variable program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchPoint {
    pub orientation: Orientation,
    /// `u` (costs) or `p` (payoffs).
    pub scale: Rational,
    /// `v` (costs) or `q` (payoffs).
    pub shift: Rational,
}

impl SearchPoint {
    fn is_tight(&self, a: &Rational, b: &Rational, l: &Rational) -> bool {
        match self.orientation {
            Orientation::CostMin => &self.scale * a + &self.shift * &(b - l) == *l,
            Orientation::PayoffMax => &self.scale * a + &self.shift * &(l - b) == *l,
        }
    }

    fn certificate(&self, domain: PairDomain) -> SmoothnessCertificate {
        let one = Rational::one();
        let (lambda, mu) = match self.orientation {
            Orientation::CostMin => {
                let denom = &one + &self.shift;
                (&self.scale / &denom, &self.shift / &denom)
            }
            Orientation::PayoffMax => {
                let denom = &one - &self.shift;
                (&self.scale / &denom, &self.shift / &denom)
            }
        };
        SmoothnessCertificate { lambda, mu, orientation: self.orientation, pair_domain: domain }
    }
}

/// Outcome of solving a constraint set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solved {
    Finite { value: Rational, point: SearchPoint, guard_active: bool },
    Infinite,
}

pub fn solve_constraints(set: &ConstraintSet) -> Result<Solved, Error> {
    if set.infeasible {
        return Ok(Solved::Infinite);
    }
    if let (Some(lo), Some(hi)) = (&set.lo, &set.hi) {
        if lo > hi {
            return Ok(Solved::Infinite);
        }
    }
    let one = Rational::one();
    match set.orientation {
        Orientation::CostMin => {
            let (v, u) = set.minimize().expect("the u >= 0 line bounds the envelope");
            let guard_active = v == search_guard() - &one;
            Ok(Solved::Finite {
                value: u.clone(),
                point: SearchPoint { orientation: set.orientation, scale: u, shift: v },
                guard_active,
            })
        }
        Orientation::PayoffMax => {
            let (q, neg_p) = set.minimize().ok_or(Error::UndefinedRatio)?;
            let p = -neg_p;
            if !p.is_positive() {
                return Ok(Solved::Infinite);
            }
            let guard_active = q == &one - &search_guard();
            Ok(Solved::Finite {
                value: p.recip(),
                point: SearchPoint { orientation: set.orientation, scale: p, shift: q },
                guard_active,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RpoaResult {
    pub value: Extended,
    /// Certificate attaining `value`; absent when it is infinite.
    pub certificate: Option<SmoothnessCertificate>,
    /// `(s, s*)` profile indices whose constraints are tight.
    pub binding_pairs: Vec<(usize, usize)>,
    /// Whether the optimum sits on the `mu` search guard.
    pub guard_active: bool,
    pub pairs: u64,
}

/// Solves for the robust price of anarchy from precomputed pair data.
pub fn rpoa_from_data<R: RangeRunner>(data: &SmoothnessData, runner: &R) -> Result<RpoaResult, Error> {
    if data.orientation == Orientation::PayoffMax && data.targets.iter().all(|&t| data.social[t].is_zero()) {
        return Err(Error::UndefinedRatio);
    }
    let set = runner
        .run(data.profile_count(), |range| data.constraints_in_range(range))
        .into_iter()
        .reduce(ConstraintSet::merge)
        .unwrap_or_else(|| ConstraintSet::empty(data.orientation));
    match solve_constraints(&set)? {
        Solved::Infinite => Ok(RpoaResult {
            value: Extended::Infinity,
            certificate: None,
            binding_pairs: Vec::new(),
            guard_active: false,
            pairs: data.pair_count(),
        }),
        Solved::Finite { value, point, guard_active } => {
            let cert = point.certificate(data.domain);
            if !is_smooth_in(data, &cert, runner).is_smooth() || cert.bound() != Extended::Finite(value.clone()) {
                return Err(Error::InvalidSpec("derived smoothness certificate failed re-verification".into()));
            }
            let binding_pairs =
                runner.run(data.profile_count(), |range| data.binding_in_range(&point, range)).concat();
            Ok(RpoaResult {
                value: Extended::Finite(value),
                certificate: Some(cert),
                binding_pairs,
                guard_active,
                pairs: data.pair_count(),
            })
        }
    }
}

/// Best certificate over all pairs: minimal `lambda / (1 - mu)` (costs) or
/// `(1 + mu) / lambda` (payoffs), with `lambda >= 0`.
pub fn rpoa(game: &Game, alpha: &AltruismVector) -> Result<RpoaResult, Error> {
    rpoa_in_domain(game, alpha, PairDomain::AllPairs)
}

pub fn rpoa_in_domain(game: &Game, alpha: &AltruismVector, domain: PairDomain) -> Result<RpoaResult, Error> {
    game.check_alpha(alpha)?;
    let table = ValueTable::build(game)?;
    rpoa_in_table(&table, alpha, domain, game.profile_cap())
}

pub fn rpoa_in_table(table: &ValueTable, alpha: &AltruismVector, domain: PairDomain, cap: u64) -> Result<RpoaResult, Error> {
    let data = SmoothnessData::build(table, alpha, domain, cap)?;
    rpoa_from_data(&data, &Sequential)
}

/// Re-solves using only the listed pairs.
pub fn rpoa_of_pairs(data: &SmoothnessData, pairs: &[(usize, usize)]) -> Result<Extended, Error> {
    let mut set = ConstraintSet::empty(data.orientation);
    for &(s, t) in pairs {
        set.add(&data.social[t], &data.social[s], &data.lhs(s, t));
    }
    Ok(match solve_constraints(&set)? {
        Solved::Finite { value, .. } => Extended::Finite(value),
        Solved::Infinite => Extended::Infinity,
    })
}

/// `k / (points - 1)` for `k = 0..points`.
pub fn gamma_grid(points: usize) -> Vec<Rational> {
    let last = points.max(2) - 1;
    (0..=last).map(|k| Rational::from(k) / Rational::from(last)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexityViolation {
    pub first: usize,
    pub second: usize,
    pub gamma: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexityReport {
    /// Input triples that are not smooth themselves.
    pub endpoint_failures: Vec<usize>,
    pub violations: Vec<ConvexityViolation>,
    pub combinations_checked: usize,
}

/// For every pair of input triples `(lambda, mu, alpha)` and every `gamma`
/// on the grid, checks that the convex combination is again smooth.
pub fn convexity_probe(
    game: &Game,
    triples: &[(Rational, Rational, AltruismVector)],
    grid_points: usize,
) -> Result<ConvexityReport, Error> {
    let table = ValueTable::build(game)?;
    let cap = game.profile_cap();
    let smooth = |lambda: &Rational, mu: &Rational, alpha: &AltruismVector| -> Result<bool, Error> {
        game.check_alpha(alpha)?;
        let data = SmoothnessData::build(&table, alpha, PairDomain::AllPairs, cap)?;
        let cert = SmoothnessCertificate::new(lambda.clone(), mu.clone(), game.orientation());
        Ok(is_smooth_in(&data, &cert, &Sequential).is_smooth())
    };
    let mut report = ConvexityReport { endpoint_failures: Vec::new(), violations: Vec::new(), combinations_checked: 0 };
    for (k, (l, m, a)) in triples.iter().enumerate() {
        if !smooth(l, m, a)? {
            report.endpoint_failures.push(k);
        }
    }
    for first in 0..triples.len() {
        for second in first + 1..triples.len() {
            if report.endpoint_failures.contains(&first) || report.endpoint_failures.contains(&second) {
                continue;
            }
            let (l1, m1, a1) = &triples[first];
            let (l2, m2, a2) = &triples[second];
            for gamma in gamma_grid(grid_points) {
                let rest = Rational::one() - &gamma;
                let lambda = &gamma * l1 + &rest * l2;
                let mu = &gamma * m1 + &rest * m2;
                let alpha = a1.convex_combination(a2, &gamma)?;
                report.combinations_checked += 1;
                if !smooth(&lambda, &mu, &alpha)? {
                    report.violations.push(ConvexityViolation { first, second, gamma });
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiconvexityReport {
    /// `(gamma, rpoa(gamma * alpha1 + (1 - gamma) * alpha2))`
    pub points: Vec<(Rational, Extended)>,
    /// `max(rpoa(alpha1), rpoa(alpha2))`
    pub bound: Extended,
    pub violations: Vec<Rational>,
}

/// Checks `rpoa` along the segment between two altruism vectors against
/// the larger endpoint value.
pub fn quasiconvexity_probe(
    game: &Game,
    alpha1: &AltruismVector,
    alpha2: &AltruismVector,
    grid_points: usize,
) -> Result<QuasiconvexityReport, Error> {
    game.check_alpha(alpha1)?;
    game.check_alpha(alpha2)?;
    let table = ValueTable::build(game)?;
    let cap = game.profile_cap();
    let value = |alpha: &AltruismVector| rpoa_in_table(&table, alpha, PairDomain::AllPairs, cap).map(|r| r.value);
    let bound = value(alpha1)?.max(value(alpha2)?);
    let mut points = Vec::new();
    let mut violations = Vec::new();
    for gamma in gamma_grid(grid_points) {
        let v = value(&alpha1.convex_combination(alpha2, &gamma)?)?;
        if v > bound {
            violations.push(gamma.clone());
        }
        points.push((gamma, v));
    }
    Ok(QuasiconvexityReport { points, bound, violations })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerReport {
    pub corner_max: Extended,
    pub corner_argmax: AltruismVector,
    pub sample_max: Extended,
    pub sample_argmax: Option<AltruismVector>,
}

impl CornerReport {
    /// The overall maximum is attained at a 0-1 vector.
    pub fn holds(&self) -> bool {
        self.sample_max <= self.corner_max
    }
}

pub const MAX_CORNER_PLAYERS: usize = 16;

/// Compares `rpoa` on sampled altruism vectors with its maximum over all
/// 0-1 vectors.
pub fn corner_maximum_probe(game: &Game, samples: &[AltruismVector]) -> Result<CornerReport, Error> {
    let n = game.player_count();
    if n > MAX_CORNER_PLAYERS {
        return Err(Error::ParameterOutOfRange(format!("{n} players exceed the corner enumeration limit")));
    }
    let table = ValueTable::build(game)?;
    let cap = game.profile_cap();
    let value = |alpha: &AltruismVector| -> Result<Extended, Error> {
        game.check_alpha(alpha)?;
        Ok(rpoa_in_table(&table, alpha, PairDomain::AllPairs, cap)?.value)
    };
    let mut corner: Option<(Extended, AltruismVector)> = None;
    for mask in 0u32..1 << n {
        let alpha = AltruismVector::new(
            (0..n).map(|i| if mask >> i & 1 == 1 { Rational::one() } else { Rational::zero() }).collect(),
        )?;
        let v = value(&alpha)?;
        if corner.as_ref().map_or(true, |(best, _)| v > *best) {
            corner = Some((v, alpha));
        }
    }
    let (corner_max, corner_argmax) = corner.expect("at least one corner");
    let mut sample_max = Extended::Finite(Rational::zero());
    let mut sample_argmax = None;
    for alpha in samples {
        let v = value(alpha)?;
        if sample_argmax.is_none() || v > sample_max {
            sample_max = v;
            sample_argmax = Some(alpha.clone());
        }
    }
    Ok(CornerReport { corner_max, corner_argmax, sample_max, sample_argmax })
}

/// One evaluated point of a polynomial inequality grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
    pub params: Vec<Rational>,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GridReport {
    pub checked: usize,
    pub violations: Vec<GridPoint>,
    pub equalities: Vec<GridPoint>,
}

impl GridReport {
    fn record(&mut self, point: GridPoint) {
        self.checked += 1;
        if point.lhs > point.rhs {
            self.violations.push(point);
        } else if point.lhs == point.rhs {
            self.equalities.push(point);
        }
    }
}

fn quarter_grid() -> Vec<Rational> {
    (0..=4).map(|k| Rational::new(k, 4)).collect()
}

/// `((1 + ah) x + 1) y + al (1 - x) x <= ((5 + 2 ah + 2 al) / 3) y^2 + ((1 + ah - 2 al) / 3) x^2`
/// over `x, y` in `0..=max` and `ah >= al` on the quarter grid. Parameters
/// are reported as `[ah, al]`.
pub fn two_level_delay_grid(max: i64) -> GridReport {
    let mut report = GridReport::default();
    let one = Rational::one();
    let three = Rational::from(3i64);
    for hi in quarter_grid() {
        for lo in quarter_grid().into_iter().filter(|lo| *lo <= hi) {
            let cy = (Rational::from(5i64) + &hi * Rational::from(2i64) + &lo * Rational::from(2i64)) / &three;
            let cx = (&one + &hi - &lo * Rational::from(2i64)) / &three;
            for x in 0..=max {
                for y in 0..=max {
                    let (xr, yr) = (Rational::from(x), Rational::from(y));
                    let lhs = ((&one + &hi) * &xr + &one) * &yr + &lo * &(&one - &xr) * &xr;
                    let rhs = &cy * &yr * &yr + &cx * &xr * &xr;
                    report.record(GridPoint { x, y, params: vec![hi.clone(), lo.clone()], lhs, rhs });
                }
            }
        }
    }
    report
}

/// `((1 + a) x + 1) y + b a (1 - x) x <= (2 + a - g) y^2 + g x^2` over
/// `x, y` in `0..=max`, `a` on the quarter grid, `b` in `{0, 1/2, 1}` and
/// `g` in `{(1 + a - 2 b a) / 3, 1 + a}`. Parameters are `[a, b, g]`.
pub fn uniform_delay_grid(max: i64) -> GridReport {
    let mut report = GridReport::default();
    let one = Rational::one();
    for a in quarter_grid() {
        for b in [Rational::zero(), Rational::new(1, 2), Rational::one()] {
            let gammas = [(&one + &a - &b * &a * Rational::from(2i64)) / Rational::from(3i64), &one + &a];
            for g in gammas {
                for x in 0..=max {
                    for y in 0..=max {
                        let (xr, yr) = (Rational::from(x), Rational::from(y));
                        let lhs = ((&one + &a) * &xr + &one) * &yr + &b * &a * &(&one - &xr) * &xr;
                        let rhs = (Rational::from(2i64) + &a - &g) * &yr * &yr + &g * &xr * &xr;
                        report.record(GridPoint {
                            x,
                            y,
                            params: vec![a.clone(), b.clone(), g.clone()],
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
    }
    report
}
