//! Game families: fair cost sharing, linear congestion (general and
//! symmetric singleton), singleton games with tabulated delays, and valid
//! utility games. Also exact potentials and the tight example instances.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::game::{AltruismVector, Game, StrategyProfile};
use crate::rational::Rational;
use crate::Error;

mod congestion;
mod cost_sharing;
mod fixtures;
mod utility;

pub use congestion::{
    build_linear_congestion, build_table_singleton, normalize_congestion, CongestionSpec, FacilityOrigin,
    LinearDelay, NormalizedCongestion, TableSingletonSpec,
};
pub use cost_sharing::{build_cost_sharing, CostSharingSpec};
pub use fixtures::{example_instance, ExampleName, Fixture};
pub use utility::{
    build_valid_utility, validate_submodular, validate_utility, SubmodularWitness, UtilitySpec, UtilityViolation,
};

/// The family data a game was built from.
#[derive(Clone, Debug)]
pub enum Family {
    CostSharing(Arc<CostSharingSpec>),
    LinearCongestion(Arc<CongestionSpec>),
    TableSingleton(Arc<TableSingletonSpec>),
    ValidUtility(Arc<UtilitySpec>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    CostSharing,
    LinearCongestion,
    /// Symmetric singleton linear congestion.
    Singleton,
    /// Symmetric singleton with tabulated delays.
    TableSingleton,
    ValidUtility,
}

impl Family {
    pub fn tag(&self) -> FamilyTag {
        match self {
            Family::CostSharing(_) => FamilyTag::CostSharing,
            Family::LinearCongestion(spec) if spec.singleton => FamilyTag::Singleton,
            Family::LinearCongestion(_) => FamilyTag::LinearCongestion,
            Family::TableSingleton(_) => FamilyTag::TableSingleton,
            Family::ValidUtility(_) => FamilyTag::ValidUtility,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PotentialKind {
    /// `sum_e sum_{k <= x_e} c_e / k`
    CostSharingHarmonic,
    /// `sum_e sum_{k <= x_e} d_e(k)`
    Rosenthal,
}

/// Exact potential `(1 - a) * Phi(s) + a * C(s)` for uniform altruism `a`.
pub fn potential(
    kind: PotentialKind,
    game: &Game,
    alpha: &AltruismVector,
    profile: &StrategyProfile,
) -> Result<Rational, Error> {
    game.check_alpha(alpha)?;
    game.check_profile(profile)?;
    let a = alpha.uniform_value().ok_or(Error::NonUniformAltruism)?;
    let choices = profile.choices();
    let base = match (kind, game.family()) {
        (PotentialKind::CostSharingHarmonic, Some(Family::CostSharing(spec))) => spec.harmonic_potential(choices),
        (PotentialKind::Rosenthal, Some(Family::LinearCongestion(spec))) => spec.rosenthal_potential(choices),
        (PotentialKind::Rosenthal, Some(Family::TableSingleton(spec))) => spec.rosenthal_potential(choices),
        _ => return Err(Error::PotentialMismatch { kind }),
    };
    let social = game.evaluate(choices).social;
    Ok((Rational::one() - a) * base + a * social)
}

/// Facility loads `x_e(s)` for subset strategies.
pub(crate) fn loads(facilities: usize, strategy_sets: &[Vec<Vec<usize>>], choices: &[usize]) -> Vec<usize> {
    let mut x = vec![0usize; facilities];
    for (player, &s) in choices.iter().enumerate() {
        for &e in &strategy_sets[player][s] {
            x[e] += 1;
        }
    }
    x
}

/// Facilities of player `i`'s strategy `k`, for facility-based families.
pub fn strategy_facilities(game: &Game, player: usize, strategy: usize) -> Option<Vec<usize>> {
    match game.family()? {
        Family::CostSharing(spec) => Some(spec.strategy_sets[player][strategy].clone()),
        Family::LinearCongestion(spec) => Some(spec.strategy_sets[player][strategy].clone()),
        Family::TableSingleton(_) => Some(vec![strategy]),
        Family::ValidUtility(_) => None,
    }
}

/// Facility loads `x_e(s)` for facility-based families.
pub fn facility_loads(game: &Game, choices: &[usize]) -> Option<Vec<usize>> {
    match game.family()? {
        Family::CostSharing(spec) => Some(loads(spec.facility_costs.len(), &spec.strategy_sets, choices)),
        Family::LinearCongestion(spec) => Some(loads(spec.delays.len(), &spec.strategy_sets, choices)),
        Family::TableSingleton(spec) => {
            let mut x = vec![0; spec.delays.len()];
            for &e in choices {
                x[e] += 1;
            }
            Some(x)
        }
        Family::ValidUtility(_) => None,
    }
}

/// Checks facility indices and normalizes each strategy to a sorted set.
pub(crate) fn normalize_strategy_sets(
    facilities: usize,
    strategy_sets: &mut [Vec<Vec<usize>>],
    allow_empty_strategy: bool,
) -> Result<(), Error> {
    if strategy_sets.is_empty() {
        return Err(Error::InvalidSpec("a game needs at least one player".into()));
    }
    for (player, set) in strategy_sets.iter_mut().enumerate() {
        if set.is_empty() {
            return Err(Error::EmptyStrategySet { player });
        }
        for (k, strategy) in set.iter_mut().enumerate() {
            strategy.sort_unstable();
            strategy.dedup();
            if strategy.is_empty() && !allow_empty_strategy {
                return Err(Error::InvalidSpec(format!("strategy {k} of player {player} uses no facility")));
            }
            if let Some(&e) = strategy.iter().find(|&&e| e >= facilities) {
                return Err(Error::InvalidSpec(format!(
                    "strategy {k} of player {player} names facility {e}, only {facilities} exist"
                )));
            }
        }
    }
    Ok(())
}

/// `H_n = 1 + 1/2 + ... + 1/n`
pub fn harmonic(n: usize) -> Rational {
    (1..=n).map(|k| Rational::one() / Rational::from(k)).sum()
}
