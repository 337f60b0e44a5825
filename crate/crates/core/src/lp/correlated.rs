use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{solve, LinearProgram, LpOutcome, Relation, Sense};
use crate::game::{AltruismVector, Game, Orientation, StrategyProfile};
use crate::rational::Rational;
use crate::table::ValueTable;
use crate::Error;

/// Largest profile space the equilibrium LPs are built for by default.
pub const DEFAULT_LP_CAP: u64 = 5000;

/// A probability weight on every pure profile, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JointDistribution {
    strategy_counts: Vec<usize>,
    weights: Vec<Rational>,
}

impl JointDistribution {
    pub fn new(strategy_counts: Vec<usize>, weights: Vec<Rational>) -> Result<Self, Error> {
        let total_profiles = strategy_counts.iter().try_fold(1usize, |acc, &k| acc.checked_mul(k));
        if total_profiles != Some(weights.len()) {
            return Err(Error::InvalidDistribution(format!(
                "{} weights do not cover the profile space",
                weights.len()
            )));
        }
        if let Some(idx) = weights.iter().position(Rational::is_negative) {
            return Err(Error::InvalidDistribution(format!("weight {idx} is negative")));
        }
        let total: Rational = weights.iter().sum();
        if total != Rational::one() {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(JointDistribution { strategy_counts, weights })
    }

    pub fn point_mass(game: &Game, profile: &StrategyProfile) -> Result<Self, Error> {
        game.check_profile(profile)?;
        let total = game.ensure_within(game.profile_cap())? as usize;
        let mut weights = vec![Rational::zero(); total];
        weights[game.index_of(profile)] = Rational::one();
        Ok(JointDistribution { strategy_counts: game.strategy_counts().to_vec(), weights })
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.strategy_counts
    }

    /// `(profile index, weight)` for every profile with positive weight.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.weights.iter().enumerate().filter(|(_, w)| w.is_positive())
    }

    fn check(&self, game: &Game) -> Result<(), Error> {
        if self.strategy_counts != game.strategy_counts() {
            return Err(Error::InvalidDistribution("distribution belongs to a different profile space".into()));
        }
        Ok(())
    }

    pub fn expected_social_value(&self, game: &Game) -> Result<Rational, Error> {
        self.check(game)?;
        Ok(self.support().map(|(idx, w)| w * &game.social_value(&game.profile_at(idx)).expect("index in range")).sum())
    }
}

/// Extremal equilibrium value with the distribution attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpEquilibrium {
    pub value: Rational,
    pub witness: JointDistribution,
}

/// `sum_s sigma(s) * (V_i(s) - V_i(t, s_-i))` coefficients over profiles
/// with `s_i` in `signals` (all signals when `None`).
fn incentive_row(table: &ValueTable, alpha: &AltruismVector, player: usize, t: usize, signal: Option<usize>) -> Vec<Rational> {
    (0..table.len())
        .map(|idx| {
            let own = table.choice(idx, player);
            if own == t || signal.is_some_and(|r| r != own) {
                return Rational::zero();
            }
            table.perceived(alpha, player, idx) - table.perceived(alpha, player, table.deviation(idx, player, t))
        })
        .collect()
}

fn incentive_rows(table: &ValueTable, alpha: &AltruismVector, per_signal: bool) -> Vec<Vec<Rational>> {
    let mut rows = Vec::new();
    for (player, &count) in table.strategy_counts().iter().enumerate() {
        for t in 0..count {
            if per_signal {
                for r in (0..count).filter(|&r| r != t) {
                    rows.push(incentive_row(table, alpha, player, t, Some(r)));
                }
            } else {
                rows.push(incentive_row(table, alpha, player, t, None));
            }
        }
    }
    rows.retain(|row| row.iter().any(|v| !v.is_zero()));
    rows
}

/// Incentive constraints hold as `<= 0` for costs and `>= 0` for payoffs.
fn incentive_relation(orientation: Orientation) -> Relation {
    match orientation {
        Orientation::CostMin => Relation::Le,
        Orientation::PayoffMax => Relation::Ge,
    }
}

fn worst_in_table(table: &ValueTable, alpha: &AltruismVector, per_signal: bool) -> Result<LpEquilibrium, Error> {
    let orientation = table.orientation();
    let sense = match orientation {
        Orientation::CostMin => Sense::Maximize,
        Orientation::PayoffMax => Sense::Minimize,
    };
    let objective = (0..table.len()).map(|idx| table.social(idx).clone()).collect();
    let mut lp = LinearProgram::new(sense, objective);
    let relation = incentive_relation(orientation);
    for row in incentive_rows(table, alpha, per_signal) {
        lp.add_constraint(row, relation, Rational::zero());
    }
    lp.add_constraint(vec![Rational::one(); table.len()], Relation::Eq, Rational::one());
    match solve(&lp)? {
        LpOutcome::Optimal { value, point } => {
            let witness = JointDistribution::new(table.strategy_counts().to_vec(), point)?;
            Ok(LpEquilibrium { value, witness })
        }
        // pure equilibria of finite potential games and mixed equilibria in
        // general guarantee a non-empty polytope
        other => Err(Error::InvalidSpec(format!("equilibrium LP unexpectedly reported {other:?}"))),
    }
}

fn within_lp_cap(game: &Game, alpha: &AltruismVector, cap: u64) -> Result<ValueTable, Error> {
    game.check_alpha(alpha)?;
    game.ensure_within(cap.min(game.profile_cap()))?;
    ValueTable::build(game)
}

/// Worst coarse correlated equilibrium: maximal expected cost (minimal
/// expected welfare) subject to the perceived-value incentive constraints.
pub fn worst_cce(game: &Game, alpha: &AltruismVector, cap: u64) -> Result<LpEquilibrium, Error> {
    worst_cce_in_table(&within_lp_cap(game, alpha, cap)?, alpha)
}

pub fn worst_cce_in_table(table: &ValueTable, alpha: &AltruismVector) -> Result<LpEquilibrium, Error> {
    worst_in_table(table, alpha, false)
}

/// Worst correlated equilibrium, with one incentive constraint per signal.
pub fn worst_ce(game: &Game, alpha: &AltruismVector, cap: u64) -> Result<LpEquilibrium, Error> {
    worst_ce_in_table(&within_lp_cap(game, alpha, cap)?, alpha)
}

pub fn worst_ce_in_table(table: &ValueTable, alpha: &AltruismVector) -> Result<LpEquilibrium, Error> {
    worst_in_table(table, alpha, true)
}

fn satisfies(table: &ValueTable, alpha: &AltruismVector, dist: &JointDistribution, per_signal: bool) -> bool {
    let relation = incentive_relation(table.orientation());
    dist.weights.len() == table.len()
        && incentive_rows(table, alpha, per_signal).iter().all(|row| {
            let lhs: Rational = row.iter().zip(&dist.weights).map(|(a, w)| a * w).sum();
            relation.holds(&lhs, &Rational::zero())
        })
}

/// Whether `dist` is a coarse correlated equilibrium of the extension.
pub fn check_cce(table: &ValueTable, alpha: &AltruismVector, dist: &JointDistribution) -> bool {
    satisfies(table, alpha, dist, false)
}

/// Whether `dist` is a correlated equilibrium of the extension.
pub fn check_ce(table: &ValueTable, alpha: &AltruismVector, dist: &JointDistribution) -> bool {
    satisfies(table, alpha, dist, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{expected_social_cost, pure_poa_pos};
    use crate::families::{example_instance, ExampleName};
    use crate::rational::{int, ratio};

    #[test]
    fn congestion_lb_sandwich() {
        let f = example_instance(ExampleName::CongestionLb { alpha: int(0) }).unwrap();
        let cce = worst_cce(&f.game, &f.alpha, DEFAULT_LP_CAP).unwrap();
        let ce = worst_ce(&f.game, &f.alpha, DEFAULT_LP_CAP).unwrap();
        assert_eq!(cce.value, int(15));
        assert_eq!(ce.value, int(15));
        let table = ValueTable::build(&f.game).unwrap();
        assert!(check_cce(&table, &f.alpha, &cce.witness));
        assert!(check_ce(&table, &f.alpha, &ce.witness));
        assert_eq!(expected_social_cost(&f.game, &cce.witness).unwrap(), int(15));
    }

    #[test]
    fn inclusion_chain() {
        for alpha in [int(0), ratio(1, 2), int(1)] {
            let f = example_instance(ExampleName::SingletonTight2p { alpha }).unwrap();
            let report = pure_poa_pos(&f.game, &f.alpha).unwrap();
            let worst_pure = report.ne_values.iter().max().unwrap().clone();
            let ce = worst_ce(&f.game, &f.alpha, DEFAULT_LP_CAP).unwrap().value;
            let cce = worst_cce(&f.game, &f.alpha, DEFAULT_LP_CAP).unwrap().value;
            assert!(worst_pure <= ce && ce <= cce);
        }
    }

    #[test]
    fn payoff_orientation_minimizes_welfare() {
        let f = example_instance(ExampleName::ValidUtilityTight).unwrap();
        let cce = worst_cce(&f.game, &f.alpha, DEFAULT_LP_CAP).unwrap();
        assert_eq!(cce.value, int(1));
    }

    #[test]
    fn singleton_mixed_lower_bound() {
        let f = example_instance(ExampleName::SingletonMixed { m: 2 }).unwrap();
        assert!(worst_cce(&f.game, &f.alpha, DEFAULT_LP_CAP).unwrap().value >= int(3));
    }

    #[test]
    fn lp_cap_is_enforced() {
        let f = example_instance(ExampleName::SingletonMixed { m: 3 }).unwrap();
        assert!(matches!(worst_cce(&f.game, &f.alpha, 10), Err(Error::InstanceTooLarge { .. })));
    }

    #[test]
    fn joint_distribution_validation() {
        assert!(JointDistribution::new(vec![2], vec![ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(JointDistribution::new(vec![2], vec![int(1)]).is_err());
        assert!(JointDistribution::new(vec![2], vec![int(2), int(-1)]).is_err());
        assert!(JointDistribution::new(vec![2], vec![int(1), int(0)]).is_ok());
    }
}
