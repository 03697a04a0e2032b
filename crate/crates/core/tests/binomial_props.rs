use proptest::prelude::*;
use qsa_core::binomial::{
    brute_force_price, build_tree, flow_lp_price, homogeneous_choices, product_measure, superhedge_price,
    superhedge_values, support_of_product, BinomialTreeSpec, NodeBounds, Payoff,
};
use qsa_core::rational::{rat, Rational};
use qsa_core::support::verify_support;
use qsa_core::MeasureFamily;

/// Valid bounds from eighths: `0 < d ≤ D < 1 < U`, `0 < u ≤ U`, `0 < π ≤ Π < 1`.
fn bounds() -> impl Strategy<Value = NodeBounds> {
    (1i64..=14, 0i64..=8, 1i64..=6, 0i64..=6, 1i64..=6, 0i64..=6).prop_map(|(u, du, d, dd, p, dp)| {
        let d_hi = (d + dd).min(7);
        let p_hi = (p + dp).min(7);
        let big_u = (u + du).max(9);
        NodeBounds::new(rat(u, 8), rat(big_u, 8), rat(d, 8), rat(d_hi, 8), rat(p, 8), rat(p_hi, 8)).unwrap()
    })
}

fn leaf_payoff(values: &[i64], labels: &[String]) -> Payoff {
    Payoff::Explicit(labels.iter().zip(values.iter().cycle()).map(|(l, v)| (l.clone(), rat(*v, 4))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recursion_equals_oracles(b in bounds(), periods in 1usize..=2, g in 1usize..=2, strike in 1i64..=12) {
        let t = build_tree(&BinomialTreeSpec::homogeneous(periods, g, b))?;
        let payoff = Payoff::Call(rat(strike, 8));
        let dp = superhedge_price(&t, &payoff)?.value;
        prop_assert_eq!(brute_force_price(&t, &payoff)?, dp.clone());
        prop_assert_eq!(flow_lp_price(&t, &payoff)?, dp);
    }

    #[test]
    fn monotone_in_payoff_and_cash_invariant(
        b in bounds(),
        g in 1usize..=3,
        base in prop::collection::vec(-8i64..=8, 1..12),
        bump in prop::collection::vec(0i64..=4, 1..12),
        c in -8i64..=8,
    ) {
        let t = build_tree(&BinomialTreeSpec::homogeneous(2, g, b))?;
        let n = t.leaves().len();
        let v1: Vec<Rational> = (0..n).map(|i| rat(base[i % base.len()], 4)).collect();
        let v2: Vec<Rational> = v1.iter().enumerate().map(|(i, v)| v + rat(bump[i % bump.len()], 4)).collect();
        let p1 = superhedge_values(&t, v1.clone())?.value;
        let p2 = superhedge_values(&t, v2)?.value;
        prop_assert!(p1 <= p2);
        let shift = rat(c, 4);
        let shifted = superhedge_values(&t, v1.iter().map(|v| v + &shift).collect())?.value;
        prop_assert_eq!(shifted, p1 + shift);
        let labels = t.leaf_space().atoms().to_vec();
        let explicit = leaf_payoff(&base, &labels);
        prop_assert_eq!(
            superhedge_price(&t, &explicit)?.value,
            superhedge_values(&t, (0..n).map(|i| rat(base[i % base.len()], 4)).collect())?.value
        );
    }

    #[test]
    fn refinement_and_widening_never_lower_the_price(b in bounds(), periods in 1usize..=3, strike in 1i64..=12) {
        for payoff in [Payoff::Call(rat(strike, 8)), Payoff::Put(rat(strike, 8)), Payoff::Digital(rat(strike, 8))] {
            let prices: Vec<_> = (1..=3)
                .map(|g| superhedge_price(&build_tree(&BinomialTreeSpec::homogeneous(periods, g, b.clone())).unwrap(), &payoff).unwrap().value)
                .collect();
            prop_assert!(prices.windows(2).all(|w| w[0] <= w[1]));
        }
        let mut wide = b.clone();
        wide.big_u = &wide.big_u + rat(1, 4);
        wide.d = &wide.d / rat(2, 1);
        wide.pi = &wide.pi / rat(2, 1);
        for payoff in [Payoff::Call(rat(strike, 8)), Payoff::Put(rat(strike, 8))] {
            for g in 2..=3 {
                let narrow = superhedge_price(&build_tree(&BinomialTreeSpec::homogeneous(periods, g, b.clone()))?, &payoff)?.value;
                let widened = superhedge_price(&build_tree(&BinomialTreeSpec::homogeneous(periods, g, wide.clone()))?, &payoff)?.value;
                prop_assert!(narrow <= widened);
            }
        }
    }

    #[test]
    fn product_family_is_its_own_supported_alternative(b in bounds(), g in 1usize..=2) {
        let t = build_tree(&BinomialTreeSpec::homogeneous(2, g, b))?;
        let choices = homogeneous_choices(&t);
        let members = choices
            .iter()
            .enumerate()
            .map(|(k, c)| Ok((format!("Q{k}"), product_measure(&t, c)?)))
            .collect::<qsa_core::Result<Vec<_>>>()?;
        let fam = MeasureFamily::new(t.leaf_space().clone(), members)?;
        for (c, (_, q)) in choices.iter().zip(fam.members()) {
            let s = support_of_product(&t, c)?;
            prop_assert_eq!(q.mass(&s), rat(1, 1));
            prop_assert!(verify_support(&fam, q, &s)?.passed);
        }
    }
}
