mod common;

use common::{family, rng, rv, scramble_polar};
use proptest::prelude::*;
use qsa_core::rational::{rat, Extended};
use qsa_core::risk::{acceptance_set, conjugate, rho, RiskMeasureSpec, Value};
use qsa_core::{Measure, MeasureFamily, QsRandomVariable};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn specs(r: &mut ChaCha8Rng, f: &MeasureFamily) -> Vec<RiskMeasureSpec> {
    let choices = [Extended::zero(), Extended::Finite(rat(1, 3)), Extended::Finite(rat(1, 2)), Extended::PosInfinity];
    let mut penalties: Vec<_> = f.names().map(|n| (n.to_string(), choices.choose(r).unwrap().clone())).collect();
    penalties[0].1 = Extended::Finite(rat(1, 4));
    let generators = (0..r.gen_range(1..=3)).map(|_| rv(r, f, -1, 1, 2)).collect();
    vec![
        RiskMeasureSpec::WorstCase,
        RiskMeasureSpec::ScenarioPenalty { penalties },
        RiskMeasureSpec::AcceptanceGenerated { generators },
        RiskMeasureSpec::Entropic { gamma: rat(r.gen_range(1..=6), 2), reference: "P0".into() },
    ]
}

fn le(a: &Value, b: &Value, tol: f64) -> bool {
    match (a.as_exact(), b.as_exact()) {
        (Some(x), Some(y)) => x <= y,
        _ => a.to_f64() <= b.to_f64() + tol,
    }
}

fn close(a: &Value, b: &Value) -> bool {
    match (a.as_exact(), b.as_exact()) {
        (Some(x), Some(y)) => x == y,
        _ => (a.to_f64() - b.to_f64()).abs() <= 1e-9,
    }
}

fn random_probability(r: &mut ChaCha8Rng, f: &MeasureFamily) -> Measure {
    let w: Vec<_> = (0..f.space().len())
        .map(|i| if f.is_polar_atom(i) { rat(0, 1) } else { rat(r.gen_range(0..=4), 1) })
        .collect();
    let mut w = w;
    if w.iter().all(num_traits::Zero::is_zero) {
        let i = f.charged_atoms().iter().next().unwrap();
        w[i] = rat(1, 1);
    }
    Measure::new(f.space().clone(), w).unwrap().normalized().unwrap()
}

proptest! {
    #[test]
    fn monotone_cash_additive_convex(seed in any::<u64>(), num in 0i64..=4, c in -8i64..=8) {
        let mut r = rng(seed);
        let f = family(&mut r, 6, 4);
        for spec in specs(&mut r, &f) {
            let x = rv(&mut r, &f, -2, 2, 4);
            let bump = rv(&mut r, &f, 0, 2, 4);
            let y = x.combine(&bump, |a, b| a + b)?;
            let rx = rho(&spec, &f, &x)?;
            let ry = rho(&spec, &f, &y)?;
            prop_assert!(le(&rx, &ry, 1e-9), "{} not monotone", spec.kind());

            let shift = rat(c, 4);
            let shifted = rho(&spec, &f, &x.shift(&shift))?;
            let expected = match &rx {
                Value::Exact(Extended::Finite(v)) => Value::exact(v + &shift),
                other => Value::Float(other.to_f64() + qsa_core::rational::to_f64(&shift)),
            };
            prop_assert!(close(&shifted, &expected), "{} not cash additive", spec.kind());

            let lambda = rat(num, 4);
            let z = rv(&mut r, &f, -2, 2, 4);
            let mix = x.combine(&z, |a, b| &lambda * a + (rat(1, 1) - &lambda) * b)?;
            let rz = rho(&spec, &f, &z)?;
            let rhs = match (rx.as_exact(), rz.as_exact()) {
                (Some(a), Some(b)) => Value::exact(&lambda * a + (rat(1, 1) - &lambda) * b),
                _ => {
                    let l = qsa_core::rational::to_f64(&lambda);
                    Value::Float(l * rx.to_f64() + (1.0 - l) * rz.to_f64())
                }
            };
            prop_assert!(le(&rho(&spec, &f, &mix)?, &rhs, 1e-9), "{} not convex", spec.kind());
        }
    }

    #[test]
    fn weak_duality(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = family(&mut r, 6, 4);
        for spec in specs(&mut r, &f) {
            let x = rv(&mut r, &f, -2, 2, 4);
            let q = random_probability(&mut r, &f);
            let rx = rho(&spec, &f, &x)?;
            let alpha = conjugate(&spec, &f, &q)?;
            if alpha.is_infinite() {
                continue;
            }
            let eq = q.integrate(&x)?;
            match (rx.as_exact(), alpha.as_exact()) {
                (Some(v), Some(a)) => prop_assert!(&eq - a <= *v, "{}", spec.kind()),
                _ => prop_assert!(qsa_core::rational::to_f64(&eq) - alpha.to_f64() <= rx.to_f64() + 1e-9),
            }
        }
    }

    #[test]
    fn polar_values_are_ignored(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = family(&mut r, 6, 3);
        for spec in specs(&mut r, &f) {
            let x = rv(&mut r, &f, -2, 2, 4);
            let y = scramble_polar(&mut r, &f, &x);
            prop_assert!(close(&rho(&spec, &f, &x)?, &rho(&spec, &f, &y)?));
        }
    }

    #[test]
    fn acceptance_set_recovers_the_risk(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = family(&mut r, 6, 4);
        for spec in specs(&mut r, &f).into_iter().filter(RiskMeasureSpec::is_exact) {
            let x: QsRandomVariable = rv(&mut r, &f, -2, 2, 4);
            let a = acceptance_set(&spec, &f)?;
            let v = rho(&spec, &f, &x)?;
            prop_assert_eq!(Some(&a.recover(&x)?), v.as_exact());
            prop_assert!(a.accepts(&x.shift(&-v.as_exact().unwrap())));
        }
    }
}
