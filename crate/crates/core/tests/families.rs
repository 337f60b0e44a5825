mod common;

use gamelab_core::families::{
    build_linear_congestion, harmonic, normalize_congestion, potential, CongestionSpec, Family, LinearDelay,
    PotentialKind,
};
use gamelab_core::rational::{int, ratio};
use gamelab_core::{AltruismVector, Game, Rational};
use proptest::prelude::*;

fn with_uniform(g: impl Strategy<Value = Game>) -> impl Strategy<Value = (Game, AltruismVector)> {
    g.prop_flat_map(|g| {
        let n = g.player_count();
        (Just(g), common::uniform_alpha(n))
    })
}

/// Every unilateral deviation changes the potential by exactly the
/// deviator's perceived change.
fn assert_exact_potential(game: &Game, alpha: &AltruismVector, kind: PotentialKind) -> Result<(), TestCaseError> {
    for p in game.profiles().unwrap() {
        let phi = potential(kind, game, alpha, &p).unwrap();
        for i in 0..game.player_count() {
            let own = game.perceived_value(alpha, i, &p).unwrap();
            for t in 0..game.strategy_counts()[i] {
                let q = game.deviate(&p, i, t).unwrap();
                let delta_phi = potential(kind, game, alpha, &q).unwrap() - &phi;
                prop_assert_eq!(delta_phi, game.perceived_value(alpha, i, &q).unwrap() - &own);
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn cost_sharing_has_an_exact_potential((game, alpha) in with_uniform(common::cost_sharing(3, 4))) {
        assert_exact_potential(&game, &alpha, PotentialKind::CostSharingHarmonic)?;
    }

    #[test]
    fn congestion_has_an_exact_potential((game, alpha) in with_uniform(common::congestion(3, 3))) {
        assert_exact_potential(&game, &alpha, PotentialKind::Rosenthal)?;
    }

    #[test]
    fn tabulated_singletons_have_an_exact_potential((game, alpha) in with_uniform(common::semi_convex_singleton(3, 3))) {
        assert_exact_potential(&game, &alpha, PotentialKind::Rosenthal)?;
    }

    #[test]
    fn cost_sharing_potential_sandwich((game, alpha) in with_uniform(common::cost_sharing(4, 4))) {
        let a = alpha.uniform_value().unwrap().clone();
        let n = game.player_count();
        let upper = (Rational::from(1i64) - &a) * harmonic(n) + &a;
        for p in game.profiles().unwrap() {
            let c = game.social_value(&p).unwrap();
            let phi = potential(PotentialKind::CostSharingHarmonic, &game, &alpha, &p).unwrap();
            prop_assert!(c <= phi);
            prop_assert!(phi <= &upper * &c);
        }
    }

    #[test]
    fn unit_congestion_potential_sandwich((game, alpha) in with_uniform(common::unit_congestion(3, 4))) {
        let a = alpha.uniform_value().unwrap().clone();
        let lower = (Rational::from(1i64) + &a) / Rational::from(2i64);
        for p in game.profiles().unwrap() {
            let c = game.social_value(&p).unwrap();
            let phi = potential(PotentialKind::Rosenthal, &game, &alpha, &p).unwrap();
            prop_assert!(&lower * &c <= phi);
            prop_assert!(phi <= c);
        }
    }

    #[test]
    fn normalization_scales_every_cost(
        game in common::congestion(3, 3),
        den in 1i64..=3,
    ) {
        let Some(Family::LinearCongestion(spec)) = game.family() else { unreachable!() };
        // shrink the coefficients so that the common denominator is non-trivial
        let mut spec = (**spec).clone();
        for d in &mut spec.delays {
            *d = LinearDelay::new(d.a.clone() / int(den), d.b.clone() / int(den + 1));
        }
        let original = build_linear_congestion(spec.clone()).unwrap();
        let normalized = normalize_congestion(&spec).unwrap();
        prop_assert!(normalized.spec.delays.iter().all(|d| *d == LinearDelay::unit()));
        let unit = build_linear_congestion(normalized.spec.clone()).unwrap();
        for p in original.profiles().unwrap() {
            let q = gamelab_core::StrategyProfile::new(normalized.map_profile(p.choices()));
            for i in 0..original.player_count() {
                prop_assert_eq!(
                    unit.direct_value(i, &q).unwrap(),
                    &normalized.scale * &original.direct_value(i, &p).unwrap()
                );
            }
        }
    }

    #[test]
    fn generated_tables_are_semi_convex(game in common::semi_convex_singleton(4, 3)) {
        let Some(Family::TableSingleton(spec)) = game.family() else { unreachable!() };
        prop_assert!(spec.is_semi_convex());
    }
}

#[test]
fn harmonic_numbers() {
    assert_eq!(harmonic(1), int(1));
    assert_eq!(harmonic(4), ratio(25, 12));
}

#[test]
fn normalization_scale_is_the_common_denominator() {
    let spec = CongestionSpec::new(
        vec![LinearDelay::new(ratio(1, 2), ratio(1, 3)), LinearDelay::new(int(1), int(0))],
        vec![vec![vec![0], vec![1]], vec![vec![0], vec![1]]],
    );
    assert_eq!(normalize_congestion(&spec).unwrap().scale, int(6));
}
