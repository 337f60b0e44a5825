mod common;

use gamelab_core::equilibria::{altruist_dominating_optimum, enumerate_pure_ne, is_pure_ne, pure_poa_pos};
use gamelab_core::families::{harmonic, potential, FamilyTag, PotentialKind};
use gamelab_core::rational::int;
use gamelab_core::{AltruismVector, Extended, Game, Rational, StrategyProfile};
use proptest::prelude::*;

fn paired(
    g: impl Strategy<Value = Game>,
    alpha: fn(usize) -> BoxedStrategy<AltruismVector>,
) -> impl Strategy<Value = (Game, AltruismVector)> {
    g.prop_flat_map(move |g| {
        let n = g.player_count();
        (Just(g), alpha(n))
    })
}

fn uniform(n: usize) -> BoxedStrategy<AltruismVector> {
    common::uniform_alpha(n).boxed()
}
fn any(n: usize) -> BoxedStrategy<AltruismVector> {
    common::any_alpha(n).boxed()
}
fn binary(n: usize) -> BoxedStrategy<AltruismVector> {
    common::binary_alpha(n).boxed()
}
fn altruists(n: usize) -> BoxedStrategy<AltruismVector> {
    Just(AltruismVector::uniform(n, int(1)).unwrap()).boxed()
}

/// Oracle: no player strictly lowers its perceived cost by deviating.
fn brute_force_ne(game: &Game, alpha: &AltruismVector, p: &StrategyProfile) -> bool {
    (0..game.player_count()).all(|i| {
        let own = game.perceived_value(alpha, i, p).unwrap();
        (0..game.strategy_counts()[i]).all(|t| game.perceived_value(alpha, i, &game.deviate(p, i, t).unwrap()).unwrap() >= own)
    })
}

fn finite(e: &Extended) -> Rational {
    e.finite().expect("finite ratio").clone()
}

fn minimizer(game: &Game, alpha: &AltruismVector, kind: PotentialKind) -> StrategyProfile {
    game.profiles().unwrap().min_by_key(|p| potential(kind, game, alpha, p).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enumeration_is_exhaustive((game, alpha) in paired(common::congestion(3, 3), any)) {
        let found = enumerate_pure_ne(&game, &alpha).unwrap();
        for p in game.profiles().unwrap() {
            let oracle = brute_force_ne(&game, &alpha, &p);
            prop_assert_eq!(found.contains(&p), oracle);
            prop_assert_eq!(is_pure_ne(&game, &alpha, &p).unwrap().is_equilibrium(), oracle);
        }
    }

    #[test]
    fn potential_minimizers_are_equilibria(
        (cs, a) in paired(common::cost_sharing(3, 4), uniform),
        (lc, b) in paired(common::congestion(3, 3), uniform),
    ) {
        prop_assert!(brute_force_ne(&cs, &a, &minimizer(&cs, &a, PotentialKind::CostSharingHarmonic)));
        prop_assert!(brute_force_ne(&lc, &b, &minimizer(&lc, &b, PotentialKind::Rosenthal)));
    }

    #[test]
    fn cost_sharing_stability_bound((game, alpha) in paired(common::cost_sharing(4, 4), uniform)) {
        let a = alpha.uniform_value().unwrap().clone();
        let report = pure_poa_pos(&game, &alpha).unwrap();
        let bound = (Rational::from(1i64) - &a) * harmonic(game.player_count()) + &a;
        prop_assert!(finite(report.pure_pos.as_ref().unwrap()) <= bound);
    }

    #[test]
    fn congestion_stability_bound((game, alpha) in paired(common::congestion(3, 3), uniform)) {
        let a = alpha.uniform_value().unwrap().clone();
        let report = pure_poa_pos(&game, &alpha).unwrap();
        let bound = Rational::from(2i64) / (Rational::from(1i64) + a);
        prop_assert!(finite(report.pure_pos.as_ref().unwrap()) <= bound);
    }

    #[test]
    fn uniform_singleton_anarchy_bound((game, alpha) in paired(common::singleton(5, 4), uniform)) {
        prop_assert_eq!(game.family().unwrap().tag(), FamilyTag::Singleton);
        let a = alpha.uniform_value().unwrap().clone();
        let report = pure_poa_pos(&game, &alpha).unwrap();
        let bound = Rational::from(4i64) / (Rational::from(3i64) + a);
        prop_assert!(finite(report.pure_poa.as_ref().unwrap()) <= bound);
    }

    #[test]
    fn binary_singleton_anarchy_bound((game, alpha) in paired(common::singleton(5, 4), binary)) {
        let f = alpha.altruist_fraction();
        let report = pure_poa_pos(&game, &alpha).unwrap();
        let bound = (Rational::from(4i64) - Rational::from(2i64) * &f) / (Rational::from(3i64) - f);
        prop_assert!(finite(report.pure_poa.as_ref().unwrap()) <= bound);
    }

    #[test]
    fn altruistic_semi_convex_singletons_are_efficient((game, alpha) in paired(common::semi_convex_singleton(4, 3), altruists)) {
        let report = pure_poa_pos(&game, &alpha).unwrap();
        prop_assert_eq!(report.pure_poa, Some(Extended::Finite(int(1))));
    }

    #[test]
    fn altruist_loads_are_dominated_by_an_optimum((game, alpha) in paired(common::semi_convex_singleton(4, 3), binary)) {
        for ne in enumerate_pure_ne(&game, &alpha).unwrap() {
            prop_assert!(altruist_dominating_optimum(&game, &alpha, &ne).unwrap().is_some());
        }
    }
}

#[test]
fn best_response_dynamics_reach_an_equilibrium() {
    use gamelab_core::equilibria::best_response_dynamics;
    let f = gamelab_core::families::example_instance(gamelab_core::families::ExampleName::CongestionLb { alpha: int(0) })
        .unwrap();
    let start = f.optimum.clone();
    let outcome = best_response_dynamics(&f.game, &f.alpha, &start, 100).unwrap();
    assert!(brute_force_ne(&f.game, &f.alpha, outcome.profile()));
}
