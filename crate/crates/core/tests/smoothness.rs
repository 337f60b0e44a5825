mod common;

use gamelab_core::equilibria::pure_poa_pos;
use gamelab_core::lp::{solve, LinearProgram, LpOutcome, Relation, Sense};
use gamelab_core::smoothness::{
    is_smooth, rpoa, rpoa_in_domain, rpoa_of_pairs, search_guard, smoothness_lhs, PairDomain, SmoothnessCertificate,
    SmoothnessData,
};
use gamelab_core::rational::int;
use gamelab_core::{AltruismVector, Extended, Game, Orientation, Rational, ValueTable};
use proptest::prelude::*;

fn with_any(g: impl Strategy<Value = Game>) -> impl Strategy<Value = (Game, AltruismVector)> {
    g.prop_flat_map(|g| {
        let n = g.player_count();
        (Just(g), common::any_alpha(n))
    })
}

/// Oracle: the substituted two-variable program solved by the simplex
/// over every pair, with the smoothness sums taken from the definition.
fn rpoa_by_simplex(game: &Game, alpha: &AltruismVector) -> Extended {
    let profiles: Vec<_> = game.profiles().unwrap().collect();
    let one = Rational::from(1i64);
    let cost = game.orientation() == Orientation::CostMin;
    let mut lp = LinearProgram::new(if cost { Sense::Minimize } else { Sense::Maximize }, vec![one.clone(), int(0)]);
    if cost {
        lp.set_bounds(1, Some(search_guard() - &one), None);
    } else {
        lp.set_bounds(1, None, Some(&one - &search_guard()));
    }
    for s in &profiles {
        let b = game.social_value(s).unwrap();
        for t in &profiles {
            let a = game.social_value(t).unwrap();
            let l = smoothness_lhs(game, alpha, s, t).unwrap();
            if cost {
                lp.add_constraint(vec![a, &b - &l], Relation::Ge, l);
            } else {
                lp.add_constraint(vec![a, &l - &b], Relation::Le, l);
            }
        }
    }
    match solve(&lp).unwrap() {
        LpOutcome::Optimal { value, .. } if cost => Extended::Finite(value),
        LpOutcome::Optimal { value, .. } if value.is_positive() => Extended::Finite(value.recip()),
        LpOutcome::Optimal { .. } | LpOutcome::Infeasible => Extended::Infinity,
        LpOutcome::Unbounded => unreachable!("the value is bounded by the s = s* pairs"),
    }
}

fn ge(a: &Extended, b: &Extended) -> bool {
    match (a, b) {
        (Extended::Infinity, _) => true,
        (Extended::Finite(_), Extended::Infinity) => false,
        (Extended::Finite(x), Extended::Finite(y)) => x >= y,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn envelope_matches_the_simplex((game, alpha) in with_any(common::congestion(3, 3))) {
        prop_assert_eq!(rpoa(&game, &alpha).unwrap().value, rpoa_by_simplex(&game, &alpha));
    }

    #[test]
    fn envelope_matches_the_simplex_on_payoffs((game, alpha) in with_any(common::coverage_utility(3, 3))) {
        match rpoa(&game, &alpha) {
            Ok(r) => prop_assert_eq!(r.value, rpoa_by_simplex(&game, &alpha)),
            Err(gamelab_core::Error::UndefinedRatio) => {}
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        }
    }

    #[test]
    fn valid_utility_rpoa_is_at_most_two((game, alpha) in with_any(common::coverage_utility(3, 3))) {
        if let Ok(r) = rpoa(&game, &alpha) {
            prop_assert!(ge(&Extended::Finite(int(2)), &r.value));
            let cert = SmoothnessCertificate::new(int(1), int(1), Orientation::PayoffMax);
            prop_assert!(is_smooth(&game, &alpha, &cert).unwrap().is_smooth());
        }
    }

    #[test]
    fn certificates_verify_and_binding_pairs_reproduce_the_value((game, alpha) in with_any(common::cost_sharing(3, 3))) {
        let r = rpoa(&game, &alpha).unwrap();
        if let Some(cert) = &r.certificate {
            prop_assert!(is_smooth(&game, &alpha, cert).unwrap().is_smooth());
            prop_assert_eq!(cert.bound(), r.value.clone());
            let table = ValueTable::build(&game).unwrap();
            let data = SmoothnessData::build(&table, &alpha, PairDomain::AllPairs, game.profile_cap()).unwrap();
            prop_assert_eq!(rpoa_of_pairs(&data, &r.binding_pairs).unwrap(), r.value.clone());
        }
    }

    #[test]
    fn robust_bound_dominates_pure_anarchy((game, alpha) in with_any(common::congestion(3, 3))) {
        let r = rpoa(&game, &alpha).unwrap();
        let eq = pure_poa_pos(&game, &alpha).unwrap();
        if let Some(poa) = &eq.pure_poa {
            prop_assert!(ge(&r.value, poa));
        }
        let opt = rpoa_in_domain(&game, &alpha, PairDomain::OptimumTargets).unwrap();
        prop_assert!(ge(&r.value, &opt.value));
    }

    #[test]
    fn scaling_costs_changes_nothing((game, alpha) in with_any(common::congestion(2, 3)), k in 2i64..=5) {
        use gamelab_core::families::{build_linear_congestion, Family, LinearDelay};
        let Some(Family::LinearCongestion(spec)) = game.family() else { unreachable!() };
        let mut scaled = (**spec).clone();
        for d in &mut scaled.delays {
            *d = LinearDelay::new(&d.a * &int(k), &d.b * &int(k));
        }
        let scaled = build_linear_congestion(scaled).unwrap();
        let r = rpoa(&game, &alpha).unwrap();
        prop_assert_eq!(rpoa(&scaled, &alpha).unwrap().value, r.value.clone());
        if let Some(cert) = r.certificate {
            prop_assert!(is_smooth(&scaled, &alpha, &cert).unwrap().is_smooth());
        }
    }
}
