//! Pure and mixed equilibria of altruistic extensions, optima, price of
//! anarchy / stability and best-response dynamics.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::families::{facility_loads, strategy_facilities, Family};
use crate::game::{perceived, AltruismVector, Game, Orientation, StrategyProfile};
use crate::lp::JointDistribution;
use crate::rational::{Extended, Rational};
use crate::table::{RangeRunner, Sequential, ValueTable};
use crate::Error;

/// Per-player probability vectors of a product distribution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedProfile(Vec<Vec<Rational>>);

impl MixedProfile {
    pub fn new(probabilities: Vec<Vec<Rational>>) -> Result<Self, Error> {
        for (player, p) in probabilities.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::EmptyStrategySet { player });
            }
            if p.iter().any(Rational::is_negative) {
                return Err(Error::InvalidDistribution(format!("player {player} has a negative probability")));
            }
            let total: Rational = p.iter().sum();
            if total != Rational::one() {
                return Err(Error::InvalidDistribution(format!("player {player}'s probabilities sum to {total}")));
            }
        }
        Ok(MixedProfile(probabilities))
    }

    /// Every player mixes uniformly over its strategies.
    pub fn uniform(strategy_counts: &[usize]) -> Self {
        MixedProfile(
            strategy_counts.iter().map(|&k| vec![Rational::one() / Rational::from(k.max(1)); k]).collect(),
        )
    }

    pub fn point_mass(strategy_counts: &[usize], profile: &StrategyProfile) -> Self {
        MixedProfile(
            strategy_counts
                .iter()
                .zip(profile.choices())
                .map(|(&k, &s)| (0..k).map(|t| if t == s { Rational::one() } else { Rational::zero() }).collect())
                .collect(),
        )
    }

    pub fn probabilities(&self) -> &[Vec<Rational>] {
        &self.0
    }

    pub fn player_count(&self) -> usize {
        self.0.len()
    }

    /// Strategies played with positive probability.
    pub fn support(&self, player: usize) -> Vec<usize> {
        self.0[player].iter().enumerate().filter(|(_, p)| p.is_positive()).map(|(k, _)| k).collect()
    }

    /// Number of pure profiles with positive probability.
    pub fn support_size(&self) -> Option<u64> {
        (0..self.0.len()).try_fold(1u64, |acc, i| acc.checked_mul(self.support(i).len() as u64))
    }

    fn check(&self, game: &Game) -> Result<(), Error> {
        let counts = game.strategy_counts();
        if self.0.len() != counts.len() {
            return Err(Error::ProfileLength { expected: counts.len(), found: self.0.len() });
        }
        if let Some(player) = (0..counts.len()).find(|&i| self.0[i].len() != counts[i]) {
            return Err(Error::InvalidDistribution(format!(
                "player {player} needs {} probabilities, got {}",
                counts[player],
                self.0[player].len()
            )));
        }
        Ok(())
    }

    /// Calls `f(choices, weight)` for every support profile in lexicographic order.
    fn for_each_support_profile<F: FnMut(&[usize], &Rational)>(&self, mut f: F) {
        let supports: Vec<Vec<usize>> = (0..self.0.len()).map(|i| self.support(i)).collect();
        let mut pos = vec![0usize; supports.len()];
        loop {
            let choices: Vec<usize> = pos.iter().zip(&supports).map(|(&p, s)| s[p]).collect();
            let weight: Rational = choices.iter().enumerate().fold(Rational::one(), |acc, (i, &s)| acc * &self.0[i][s]);
            f(&choices, &weight);
            let mut player = supports.len();
            loop {
                if player == 0 {
                    return;
                }
                player -= 1;
                pos[player] += 1;
                if pos[player] < supports[player].len() {
                    break;
                }
                pos[player] = 0;
            }
        }
    }
}

/// A unilateral move that strictly improves the mover's perceived value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deviation {
    pub player: usize,
    pub strategy: usize,
    /// Perceived value (or expected perceived value) before the move.
    pub current: Rational,
    pub deviation: Rational,
}

/// Outcome of an equilibrium check; `deviation` is the first profitable
/// move in (player, strategy) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeCheck {
    pub deviation: Option<Deviation>,
}

impl NeCheck {
    pub fn is_equilibrium(&self) -> bool {
        self.deviation.is_none()
    }
}

/// Pure Nash equilibrium of the altruistic extension: no player strictly
/// improves its perceived value by a unilateral move.
pub fn is_pure_ne(game: &Game, alpha: &AltruismVector, profile: &StrategyProfile) -> Result<NeCheck, Error> {
    game.check_alpha(alpha)?;
    game.check_profile(profile)?;
    let orientation = game.orientation();
    let here = game.evaluate(profile.choices());
    for (player, &count) in game.strategy_counts().iter().enumerate() {
        let a = alpha.get(player);
        let current = perceived(&here.direct[player], &here.social, a);
        for strategy in (0..count).filter(|&t| t != profile.choice(player)) {
            let moved = game.evaluate(profile.with_choice(player, strategy).choices());
            let value = perceived(&moved.direct[player], &moved.social, a);
            if orientation.improves(&value, &current) {
                return Ok(NeCheck { deviation: Some(Deviation { player, strategy, current, deviation: value }) });
            }
        }
    }
    Ok(NeCheck { deviation: None })
}

/// [`is_pure_ne`] against a materialized table.
pub fn table_deviation(table: &ValueTable, alpha: &AltruismVector, idx: usize) -> Option<Deviation> {
    let orientation = table.orientation();
    for (player, &count) in table.strategy_counts().iter().enumerate() {
        let current = table.perceived(alpha, player, idx);
        let own = table.choice(idx, player);
        for strategy in (0..count).filter(|&t| t != own) {
            let value = table.perceived(alpha, player, table.deviation(idx, player, strategy));
            if orientation.improves(&value, &current) {
                return Some(Deviation { player, strategy, current, deviation: value });
            }
        }
    }
    None
}

/// Indices in `range` that are pure equilibria.
pub fn pure_ne_in_range(table: &ValueTable, alpha: &AltruismVector, range: Range<usize>) -> Vec<usize> {
    range.filter(|&idx| table_deviation(table, alpha, idx).is_none()).collect()
}

pub fn pure_ne_indices<R: RangeRunner>(table: &ValueTable, alpha: &AltruismVector, runner: &R) -> Vec<usize> {
    runner.run(table.len(), |range| pure_ne_in_range(table, alpha, range)).into_iter().flatten().collect()
}

/// All pure equilibria in lexicographic order.
pub fn enumerate_pure_ne(game: &Game, alpha: &AltruismVector) -> Result<Vec<StrategyProfile>, Error> {
    game.check_alpha(alpha)?;
    let table = ValueTable::build(game)?;
    Ok(pure_ne_indices(&table, alpha, &Sequential).into_iter().map(|idx| game.profile_at(idx)).collect())
}

/// Lexicographically first optimum of the table.
pub fn table_optimum(table: &ValueTable) -> (usize, Rational) {
    let orientation = table.orientation();
    let mut best = 0;
    for idx in 1..table.len() {
        if orientation.improves(table.social(idx), table.social(best)) {
            best = idx;
        }
    }
    (best, table.social(best).clone())
}

/// Every optimal profile index, ascending.
pub fn table_optima(table: &ValueTable) -> Vec<usize> {
    let (_, value) = table_optimum(table);
    (0..table.len()).filter(|&idx| *table.social(idx) == value).collect()
}

/// Social optimum with lexicographic tie-breaking.
pub fn optimum(game: &Game) -> Result<(StrategyProfile, Rational), Error> {
    game.profiles()?;
    let orientation = game.orientation();
    let mut best: Option<(StrategyProfile, Rational)> = None;
    for profile in game.profiles()? {
        let value = game.evaluator().social_value(profile.choices());
        if best.as_ref().map_or(true, |(_, b)| orientation.improves(&value, b)) {
            best = Some((profile, value));
        }
    }
    Ok(best.expect("a game has at least one profile"))
}

/// Inefficiency of a profile value: `C(s)/C(s*)` or `P(s*)/P(s)`.
pub fn ratio_to_optimum(orientation: Orientation, value: &Rational, optimum: &Rational) -> Result<Extended, Error> {
    if optimum.is_zero() {
        return Err(Error::UndefinedRatio);
    }
    Ok(match orientation {
        Orientation::CostMin => Extended::ratio(value, optimum),
        Orientation::PayoffMax => Extended::ratio(optimum, value),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquilibriumReport {
    pub pure_ne: Vec<StrategyProfile>,
    /// Social value of each listed equilibrium.
    pub ne_values: Vec<Rational>,
    pub optimum_profile: StrategyProfile,
    pub optimum_value: Rational,
    /// `None` when there is no pure equilibrium.
    pub pure_poa: Option<Extended>,
    pub pure_pos: Option<Extended>,
}

impl EquilibriumReport {
    pub fn has_pure_ne(&self) -> bool {
        !self.pure_ne.is_empty()
    }

    /// Worst equilibrium social value.
    pub fn worst_ne_value(&self, orientation: Orientation) -> Option<&Rational> {
        match orientation {
            Orientation::CostMin => self.ne_values.iter().max(),
            Orientation::PayoffMax => self.ne_values.iter().min(),
        }
    }
}

/// Assembles the report from precomputed equilibrium indices.
pub fn equilibrium_report(game: &Game, table: &ValueTable, ne: &[usize]) -> Result<EquilibriumReport, Error> {
    let (opt_idx, optimum_value) = table_optimum(table);
    let orientation = table.orientation();
    let ne_values: Vec<Rational> = ne.iter().map(|&idx| table.social(idx).clone()).collect();
    let ratios = ne_values
        .iter()
        .map(|v| ratio_to_optimum(orientation, v, &optimum_value))
        .collect::<Result<Vec<_>, _>>()?;
    if ne.is_empty() && optimum_value.is_zero() {
        return Err(Error::UndefinedRatio);
    }
    Ok(EquilibriumReport {
        pure_ne: ne.iter().map(|&idx| game.profile_at(idx)).collect(),
        ne_values,
        optimum_profile: game.profile_at(opt_idx),
        optimum_value,
        pure_poa: ratios.iter().max().cloned(),
        pure_pos: ratios.iter().min().cloned(),
    })
}

/// Pure equilibria, optimum, pure price of anarchy and of stability.
pub fn pure_poa_pos(game: &Game, alpha: &AltruismVector) -> Result<EquilibriumReport, Error> {
    game.check_alpha(alpha)?;
    let table = ValueTable::build(game)?;
    let ne = pure_ne_indices(&table, alpha, &Sequential);
    equilibrium_report(game, &table, &ne)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BestResponseOutcome {
    /// Reached a pure equilibrium after `steps` moves.
    Equilibrium { profile: StrategyProfile, steps: usize },
    /// Revisited `profile`, first seen `period` moves earlier.
    Cycle { profile: StrategyProfile, steps: usize, period: usize },
    StepLimit { profile: StrategyProfile, steps: usize },
}

impl BestResponseOutcome {
    pub fn profile(&self) -> &StrategyProfile {
        match self {
            BestResponseOutcome::Equilibrium { profile, .. }
            | BestResponseOutcome::Cycle { profile, .. }
            | BestResponseOutcome::StepLimit { profile, .. } => profile,
        }
    }
}

/// Moves the lowest-index player that can improve to its best response
/// (lowest strategy index among ties) until no one can improve.
pub fn best_response_dynamics(
    game: &Game,
    alpha: &AltruismVector,
    start: &StrategyProfile,
    max_steps: usize,
) -> Result<BestResponseOutcome, Error> {
    game.check_alpha(alpha)?;
    game.check_profile(start)?;
    let orientation = game.orientation();
    let mut seen = BTreeMap::new();
    let mut profile = start.clone();
    let mut steps = 0;
    loop {
        if let Some(&first) = seen.get(&profile) {
            return Ok(BestResponseOutcome::Cycle { profile, steps, period: steps - first });
        }
        seen.insert(profile.clone(), steps);
        let mut moved = false;
        for player in 0..game.player_count() {
            let a = alpha.get(player);
            let values: Vec<Rational> = (0..game.strategy_counts()[player])
                .map(|t| {
                    let e = game.evaluate(profile.with_choice(player, t).choices());
                    perceived(&e.direct[player], &e.social, a)
                })
                .collect();
            let mut best = 0;
            for t in 1..values.len() {
                if orientation.improves(&values[t], &values[best]) {
                    best = t;
                }
            }
            if orientation.improves(&values[best], &values[profile.choice(player)]) {
                if steps == max_steps {
                    return Ok(BestResponseOutcome::StepLimit { profile, steps });
                }
                profile = profile.with_choice(player, best);
                steps += 1;
                moved = true;
                break;
            }
        }
        if !moved {
            return Ok(BestResponseOutcome::Equilibrium { profile, steps });
        }
    }
}

/// Checks the mixed profile against every pure deviation by exact expectation.
pub fn verify_mixed_ne(game: &Game, alpha: &AltruismVector, mixed: &MixedProfile) -> Result<NeCheck, Error> {
    game.check_alpha(alpha)?;
    mixed.check(game)?;
    let cap = game.profile_cap();
    match mixed.support_size() {
        Some(p) if p <= cap => {}
        other => return Err(Error::InstanceTooLarge { profiles: other, cap }),
    }
    let counts = game.strategy_counts();
    let mut current = vec![Rational::zero(); counts.len()];
    let mut deviations: Vec<Vec<Rational>> = counts.iter().map(|&k| vec![Rational::zero(); k]).collect();
    mixed.for_each_support_profile(|choices, weight| {
        let here = game.evaluate(choices);
        let mut moved_choices = choices.to_vec();
        for (player, &count) in counts.iter().enumerate() {
            let a = alpha.get(player);
            let value = perceived(&here.direct[player], &here.social, a);
            current[player] += weight * &value;
            for t in 0..count {
                let v = if t == choices[player] {
                    value.clone()
                } else {
                    moved_choices[player] = t;
                    let e = game.evaluate(&moved_choices);
                    perceived(&e.direct[player], &e.social, a)
                };
                deviations[player][t] += weight * &v;
            }
            moved_choices[player] = choices[player];
        }
    });
    let orientation = game.orientation();
    for (player, values) in deviations.into_iter().enumerate() {
        for (strategy, value) in values.into_iter().enumerate() {
            if orientation.improves(&value, &current[player]) {
                return Ok(NeCheck {
                    deviation: Some(Deviation { player, strategy, current: current[player].clone(), deviation: value }),
                });
            }
        }
    }
    Ok(NeCheck { deviation: None })
}

#[derive(Clone, Copy, Debug)]
pub enum Distribution<'a> {
    Mixed(&'a MixedProfile),
    Joint(&'a JointDistribution),
}

impl<'a> From<&'a MixedProfile> for Distribution<'a> {
    fn from(value: &'a MixedProfile) -> Self {
        Distribution::Mixed(value)
    }
}

impl<'a> From<&'a JointDistribution> for Distribution<'a> {
    fn from(value: &'a JointDistribution) -> Self {
        Distribution::Joint(value)
    }
}

/// Probability that each player's strategy contains each facility.
fn facility_marginals(mixed: &MixedProfile, sets: &[Vec<Vec<usize>>], facilities: usize) -> Vec<Vec<Rational>> {
    sets.iter()
        .zip(mixed.probabilities())
        .map(|(strategies, probs)| {
            let mut p = vec![Rational::zero(); facilities];
            for (strategy, q) in strategies.iter().zip(probs) {
                for &e in strategy {
                    p[e] += q;
                }
            }
            p
        })
        .collect()
}

/// Exact expected social value. Product distributions over cost-sharing
/// and linear congestion games use closed forms over facility marginals;
/// everything else is summed over the support.
pub fn expected_social_cost<'a>(game: &Game, distribution: impl Into<Distribution<'a>>) -> Result<Rational, Error> {
    match distribution.into() {
        Distribution::Joint(joint) => joint.expected_social_value(game),
        Distribution::Mixed(mixed) => {
            mixed.check(game)?;
            match game.family() {
                Some(Family::LinearCongestion(spec)) => {
                    let m = facility_marginals(mixed, &spec.strategy_sets, spec.delays.len());
                    // x_e is a sum of independent indicators
                    Ok(spec
                        .delays
                        .iter()
                        .enumerate()
                        .map(|(e, d)| {
                            let mean: Rational = m.iter().map(|p| &p[e]).sum();
                            let var: Rational = m.iter().map(|p| &p[e] * &(Rational::one() - &p[e])).sum();
                            let second = var + &mean * &mean;
                            &d.a * &second + &d.b * &mean
                        })
                        .sum())
                }
                Some(Family::CostSharing(spec)) => {
                    let m = facility_marginals(mixed, &spec.strategy_sets, spec.facility_costs.len());
                    Ok(spec
                        .facility_costs
                        .iter()
                        .enumerate()
                        .map(|(e, c)| {
                            let unused = m.iter().fold(Rational::one(), |acc, p| acc * (Rational::one() - &p[e]));
                            c * &(Rational::one() - unused)
                        })
                        .sum())
                }
                _ => expected_by_enumeration(game, mixed),
            }
        }
    }
}

pub(crate) fn expected_by_enumeration(game: &Game, mixed: &MixedProfile) -> Result<Rational, Error> {
    let cap = game.profile_cap();
    match mixed.support_size() {
        Some(p) if p <= cap => {}
        other => return Err(Error::InstanceTooLarge { profiles: other, cap }),
    }
    let mut total = Rational::zero();
    mixed.for_each_support_profile(|choices, w| total += w * &game.evaluator().social_value(choices));
    Ok(total)
}

/// For a singleton game and a pure equilibrium `ne`, the first optimum
/// `s*` with `x_e(ne) <= x_e(s*)` on every facility used by a fully
/// altruistic player in `ne`.
pub fn altruist_dominating_optimum(
    game: &Game,
    alpha: &AltruismVector,
    ne: &StrategyProfile,
) -> Result<Option<StrategyProfile>, Error> {
    game.check_alpha(alpha)?;
    game.check_profile(ne)?;
    let loads = facility_loads(game, ne.choices())
        .ok_or_else(|| Error::InvalidSpec("game has no facility structure".into()))?;
    let one = Rational::one();
    let mut altruist_edges: Vec<usize> = Vec::new();
    for player in (0..game.player_count()).filter(|&i| *alpha.get(i) == one) {
        altruist_edges.extend(strategy_facilities(game, player, ne.choice(player)).unwrap_or_default());
    }
    let table = ValueTable::build(game)?;
    for idx in table_optima(&table) {
        let star = facility_loads(game, &table.choices(idx)).expect("facility structure checked above");
        if altruist_edges.iter().all(|&e| loads[e] <= star[e]) {
            return Ok(Some(game.profile_at(idx)));
        }
    }
    Ok(None)
}
