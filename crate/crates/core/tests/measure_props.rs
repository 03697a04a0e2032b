mod common;

use common::{family, rng, rv};
use proptest::prelude::*;
use qsa_core::measure::{build_typical_paths_model, equivalent, qs_compare, Event, SignedMeasure};
use qsa_core::rational::rat;
use qsa_core::{Measure, MeasureFamily, QsOrdering};
use rand::Rng;

fn random_event(r: &mut impl Rng, n: usize) -> Event {
    Event::from_positions((0..n).filter(|_| r.gen_bool(0.5)))
}

proptest! {
    #[test]
    fn upper_probability_monotone_and_subadditive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = family(&mut r, 8, 5);
        let n = f.space().len();
        let a = random_event(&mut r, n);
        let b = random_event(&mut r, n);
        let ab = a.union(&b);
        prop_assert!(f.upper_prob(&a)? <= f.upper_prob(&ab)?);
        prop_assert!(f.upper_prob(&ab)? <= f.upper_prob(&a)? + f.upper_prob(&b)?);
    }

    #[test]
    fn qs_order_is_a_partial_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = family(&mut r, 6, 4);
        let x = rv(&mut r, &f, -1, 1, 2);
        let y = rv(&mut r, &f, -1, 1, 2);
        let z = rv(&mut r, &f, -1, 1, 2);
        prop_assert_eq!(qs_compare(&f, &x, &x)?, QsOrdering::Eq);
        if x.qs_le(&y, &f)? && y.qs_le(&z, &f)? {
            prop_assert!(x.qs_le(&z, &f)?);
        }
        if x.qs_le(&y, &f)? && y.qs_le(&x, &f)? {
            prop_assert!(x.qs_eq(&y, &f)?);
        }
        let flipped = match qs_compare(&f, &y, &x)? {
            QsOrdering::Leq => QsOrdering::Geq,
            QsOrdering::Geq => QsOrdering::Leq,
            o => o,
        };
        prop_assert_eq!(qs_compare(&f, &x, &y)?, flipped);
    }

    #[test]
    fn signed_lattice_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = family(&mut r, 6, 1);
        let s = f.space().clone();
        let mk = |r: &mut rand_chacha::ChaCha8Rng| {
            let d: Vec<_> = (0..s.len()).map(|_| rat(r.gen_range(-8..=8), 4)).collect();
            SignedMeasure::from_density(s.clone(), &d).unwrap()
        };
        let (a, b, c) = (mk(&mut r), mk(&mut r), mk(&mut r));
        prop_assert_eq!(a.meet(&b)?, b.meet(&a)?);
        prop_assert_eq!(a.join(&b)?, b.join(&a)?);
        prop_assert_eq!(a.meet(&b)?.meet(&c)?, a.meet(&b.meet(&c)?)?);
        prop_assert_eq!(a.join(&b)?.join(&c)?, a.join(&b.join(&c)?)?);
        prop_assert_eq!(a.join(&a.meet(&b)?)?, a.clone());
        prop_assert_eq!(a.meet(&a.join(&b)?)?, a.clone());
        prop_assert!(a.meet(&b)?.tv_norm() <= a.tv_norm() + b.tv_norm());
    }

    #[test]
    fn sum_measure_vanishes_exactly_on_polar_atoms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = family(&mut r, 8, 5);
        let sum = f.sum_measure();
        for i in 0..f.space().len() {
            let single = Event::from_positions([i]);
            prop_assert_eq!(num_traits::Zero::is_zero(sum.weight(i)), f.is_polar(&single)?);
        }
    }

    #[test]
    fn typical_paths_model_matches_measures_on_the_prediction_set(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = family(&mut r, 6, 1);
        let s = f.space().clone();
        let mut xi = Event::from_positions((0..s.len()).filter(|_| r.gen_bool(0.5)));
        if xi.is_empty() {
            xi = Event::from_positions([0]);
        }
        let typical = build_typical_paths_model(&s, &xi)?;
        let labels = s.labels_of(&xi);
        // Rational-weight probabilities concentrated on Ξ, always including
        // the uniform one so every point of Ξ is charged.
        let mut members = vec![("uniform".to_string(), Measure::uniform(s.clone(), &labels)?)];
        for k in 0..3 {
            let w: Vec<_> = (0..s.len())
                .map(|i| if xi.contains(i) { rat(r.gen_range(0..=4), 1) } else { rat(0, 1) })
                .collect();
            let m = Measure::new(s.clone(), w)?;
            if let Some(m) = m.normalized() {
                members.push((format!("m{k}"), m));
            }
        }
        let sampled = MeasureFamily::new(s.clone(), members)?;
        prop_assert!(equivalent(&sampled, &typical)?);
        prop_assert_eq!(sampled.polar_atoms(), typical.polar_atoms());
    }
}
