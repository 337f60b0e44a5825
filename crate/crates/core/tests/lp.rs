mod common;

use gamelab_core::equilibria::pure_poa_pos;
use gamelab_core::lp::{check_ce, check_cce, worst_ce, worst_cce, JointDistribution};
use gamelab_core::smoothness::rpoa;
use gamelab_core::{AltruismVector, Extended, Game, Orientation, Rational, ValueTable};
use proptest::prelude::*;

const CAP: u64 = 5000;

fn with_any(g: impl Strategy<Value = Game>) -> impl Strategy<Value = (Game, AltruismVector)> {
    g.prop_flat_map(|g| {
        let n = g.player_count();
        (Just(g), common::any_alpha(n))
    })
}

/// Oracle: coarse correlated incentive constraints summed from the
/// definition, without the value table.
fn is_cce(game: &Game, alpha: &AltruismVector, dist: &JointDistribution) -> bool {
    let profiles: Vec<_> = game.profiles().unwrap().collect();
    (0..game.player_count()).all(|i| {
        (0..game.strategy_counts()[i]).all(|t| {
            let gain: Rational = profiles
                .iter()
                .zip(dist.weights())
                .map(|(p, w)| {
                    let stay = game.perceived_value(alpha, i, p).unwrap();
                    let leave = game.perceived_value(alpha, i, &game.deviate(p, i, t).unwrap()).unwrap();
                    w * &(stay - leave)
                })
                .sum();
            match game.orientation() {
                Orientation::CostMin => !gain.is_positive(),
                Orientation::PayoffMax => !gain.is_negative(),
            }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inclusion_chain((game, alpha) in with_any(common::congestion(3, 3))) {
        let eq = pure_poa_pos(&game, &alpha).unwrap();
        let cce = worst_cce(&game, &alpha, CAP).unwrap();
        let ce = worst_ce(&game, &alpha, CAP).unwrap();
        if let Some(worst_ne) = eq.worst_ne_value(Orientation::CostMin) {
            prop_assert!(*worst_ne <= ce.value);
        }
        prop_assert!(ce.value <= cce.value);
    }

    #[test]
    fn witnesses_reverify((game, alpha) in with_any(common::cost_sharing(3, 3))) {
        let table = ValueTable::build(&game).unwrap();
        let cce = worst_cce(&game, &alpha, CAP).unwrap();
        let ce = worst_ce(&game, &alpha, CAP).unwrap();
        prop_assert!(check_cce(&table, &alpha, &cce.witness));
        prop_assert!(check_ce(&table, &alpha, &ce.witness));
        prop_assert!(is_cce(&game, &alpha, &cce.witness));
        prop_assert!(is_cce(&game, &alpha, &ce.witness));
        prop_assert_eq!(cce.witness.weights().iter().sum::<Rational>(), Rational::from(1i64));
        prop_assert_eq!(cce.witness.expected_social_value(&game).unwrap(), cce.value);
    }

    #[test]
    fn coarse_equilibria_respect_the_robust_bound((game, alpha) in with_any(common::congestion(3, 3))) {
        let r = rpoa(&game, &alpha).unwrap();
        let opt = pure_poa_pos(&game, &alpha).unwrap().optimum_value;
        let cce = worst_cce(&game, &alpha, CAP).unwrap();
        if let Extended::Finite(v) = r.value {
            prop_assert!(cce.value <= v * opt);
        }
    }

    #[test]
    fn payoff_coarse_equilibria_respect_the_robust_bound((game, alpha) in with_any(common::coverage_utility(3, 3))) {
        let opt = pure_poa_pos(&game, &alpha).unwrap().optimum_value;
        let cce = worst_cce(&game, &alpha, CAP).unwrap();
        prop_assert!(is_cce(&game, &alpha, &cce.witness));
        if let Ok(gamelab_core::smoothness::RpoaResult { value: Extended::Finite(v), .. }) = rpoa(&game, &alpha) {
            prop_assert!(cce.value * v >= opt);
        }
    }
}

#[test]
fn caps_are_enforced() {
    let f = gamelab_core::families::example_instance(gamelab_core::families::ExampleName::SingletonMixed { m: 4 }).unwrap();
    assert!(matches!(worst_cce(&f.game, &f.alpha, 10), Err(gamelab_core::Error::InstanceTooLarge { .. })));
}
