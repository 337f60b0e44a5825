use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{loads, normalize_strategy_sets, Family};
use crate::game::{Evaluation, Evaluator, Game, Orientation};
use crate::rational::Rational;
use crate::Error;

/// Fair cost sharing: each used facility's cost is split evenly among its users.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostSharingSpec {
    pub facility_costs: Vec<Rational>,
    /// `strategy_sets[i][k]` is the facility set of player `i`'s strategy `k`.
    pub strategy_sets: Vec<Vec<Vec<usize>>>,
}

impl CostSharingSpec {
    pub fn new(facility_costs: Vec<Rational>, strategy_sets: Vec<Vec<Vec<usize>>>) -> Self {
        CostSharingSpec { facility_costs, strategy_sets }
    }

    fn direct(&self, x: &[usize], player: usize, choices: &[usize]) -> Rational {
        self.strategy_sets[player][choices[player]]
            .iter()
            .map(|&e| &self.facility_costs[e] / &Rational::from(x[e]))
            .sum()
    }

    fn social_from_loads(&self, x: &[usize]) -> Rational {
        x.iter().zip(&self.facility_costs).filter(|(&load, _)| load > 0).map(|(_, c)| c).sum()
    }

    pub(crate) fn harmonic_potential(&self, choices: &[usize]) -> Rational {
        let x = loads(self.facility_costs.len(), &self.strategy_sets, choices);
        x.iter()
            .zip(&self.facility_costs)
            .map(|(&load, c)| (1..=load).map(|k| c / &Rational::from(k)).sum::<Rational>())
            .sum()
    }
}

impl Evaluator for CostSharingSpec {
    fn direct_value(&self, player: usize, profile: &[usize]) -> Rational {
        let x = loads(self.facility_costs.len(), &self.strategy_sets, profile);
        self.direct(&x, player, profile)
    }

    fn social_value(&self, profile: &[usize]) -> Rational {
        let x = loads(self.facility_costs.len(), &self.strategy_sets, profile);
        self.social_from_loads(&x)
    }

    fn evaluate(&self, profile: &[usize]) -> Evaluation {
        let x = loads(self.facility_costs.len(), &self.strategy_sets, profile);
        Evaluation {
            direct: (0..profile.len()).map(|i| self.direct(&x, i, profile)).collect(),
            social: self.social_from_loads(&x),
        }
    }
}

/// Builds the cost-minimization game `C_i(s) = sum_{e in s_i} c_e / x_e(s)`,
/// `C(s) = sum_{e used} c_e`.
pub fn build_cost_sharing(mut spec: CostSharingSpec) -> Result<Game, Error> {
    if let Some(e) = spec.facility_costs.iter().position(Rational::is_negative) {
        return Err(Error::InvalidSpec(format!("facility {e} has negative cost")));
    }
    normalize_strategy_sets(spec.facility_costs.len(), &mut spec.strategy_sets, false)?;
    let counts = spec.strategy_sets.iter().map(Vec::len).collect();
    let spec = Arc::new(spec);
    Ok(Game::from_evaluator(counts, Orientation::CostMin, spec.clone())?.with_family(Family::CostSharing(spec)))
}
