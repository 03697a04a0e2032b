//! Order supports, disjoint supported alternatives, essential suprema and
//! aggregation of consistent assignments.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{same_space, Event, Measure, MeasureFamily, QsRandomVariable};
use crate::rational::Rational;

/// Atom set carrying a measure relative to a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderSupport {
    pub event: Event,
    pub measure_name: String,
}

/// Reason a candidate set fails to be a support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportViolation {
    /// The measure charges atoms outside the candidate.
    MassOutside { atoms: Event, mass: Rational },
    /// A null subset of the candidate is not polar.
    NonPolarNull { atoms: Event },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportCheck {
    pub passed: bool,
    pub witness: Option<SupportViolation>,
}

impl SupportCheck {
    fn ok() -> Self {
        SupportCheck {
            passed: true,
            witness: None,
        }
    }

    fn fail(v: SupportViolation) -> Self {
        SupportCheck {
            passed: false,
            witness: Some(v),
        }
    }
}

/// Largest space the exhaustive subset mode accepts.
pub const EXHAUSTIVE_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SupportMode {
    #[default]
    Atomwise,
    /// Checks the null-subset condition over every subset of the space.
    Exhaustive,
}

fn check_dominated(family: &MeasureFamily, mu: &Measure) -> Result<()> {
    same_space(family.space(), mu.space())?;
    match (0..mu.weights().len()).find(|&i| mu.weight(i).is_positive() && family.is_polar_atom(i)) {
        Some(i) => Err(Error::NotDominated {
            atom: family.space().label(i).to_string(),
        }),
        None => Ok(()),
    }
}

/// Canonical support of a dominated measure: its positivity set.
pub fn order_support(family: &MeasureFamily, mu: &Measure) -> Result<Event> {
    check_dominated(family, mu)?;
    Ok(mu.positivity_set().difference(&family.polar_atoms()))
}

pub fn verify_support(family: &MeasureFamily, mu: &Measure, s: &Event) -> Result<SupportCheck> {
    verify_support_with(family, mu, s, SupportMode::Atomwise)
}

pub fn verify_support_with(
    family: &MeasureFamily,
    mu: &Measure,
    s: &Event,
    mode: SupportMode,
) -> Result<SupportCheck> {
    same_space(family.space(), mu.space())?;
    let n = family.space().len();
    if let Some(i) = s.iter().find(|&i| i >= n) {
        return Err(Error::UnknownAtom(format!("#{i}")));
    }
    let outside = s.complement(n);
    let mass = mu.mass(&outside);
    if !mass.is_zero() {
        let atoms = outside.intersection(&mu.positivity_set());
        return Ok(SupportCheck::fail(SupportViolation::MassOutside {
            atoms,
            mass,
        }));
    }
    match mode {
        SupportMode::Atomwise => {
            let bad = s
                .iter()
                .find(|&i| mu.weight(i).is_zero() && !family.is_polar_atom(i));
            Ok(match bad {
                Some(i) => SupportCheck::fail(SupportViolation::NonPolarNull {
                    atoms: Event::from_positions([i]),
                }),
                None => SupportCheck::ok(),
            })
        }
        SupportMode::Exhaustive => {
            if n > EXHAUSTIVE_LIMIT {
                return Err(Error::InvalidSpace(format!(
                    "exhaustive mode needs at most {EXHAUSTIVE_LIMIT} atoms, got {n}"
                )));
            }
            let members: Vec<usize> = s.iter().collect();
            // Subsets of S in increasing mask order so the smallest witness is reported.
            for mask in 1u32..(1u32 << members.len()) {
                let sub = Event::from_positions(
                    members
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| mask >> b & 1 == 1)
                        .map(|(_, &i)| i),
                );
                if mu.mass(&sub).is_zero() && !family.is_polar(&sub)? {
                    return Ok(SupportCheck::fail(SupportViolation::NonPolarNull {
                        atoms: sub,
                    }));
                }
            }
            Ok(SupportCheck::ok())
        }
    }
}

/// Pairwise disjoint, supported family equivalent to its source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointAlternative {
    pub family: MeasureFamily,
    pub supports: Vec<OrderSupport>,
}

impl DisjointAlternative {
    pub fn support_of(&self, name: &str) -> Result<&Event> {
        self.supports
            .iter()
            .find(|s| s.measure_name == name)
            .map(|s| &s.event)
            .ok_or_else(|| Error::UnknownMember(name.to_string()))
    }

    pub fn covered(&self) -> Event {
        self.supports
            .iter()
            .fold(Event::empty(), |acc, s| acc.union(&s.event))
    }
}

/// Exhaustion in member order: each member restricted to atoms not yet
/// covered, dropped when that restriction vanishes, otherwise normalized.
pub fn disjoint_supported_alternative(family: &MeasureFamily) -> Result<DisjointAlternative> {
    let mut covered = Event::empty();
    let mut members = Vec::new();
    let mut supports = Vec::new();
    for (name, m) in family.members() {
        let fresh = m.positivity_set().difference(&covered);
        let Some(q) = m.restrict(&fresh).normalized() else {
            continue;
        };
        covered = covered.union(&fresh);
        supports.push(OrderSupport {
            event: fresh,
            measure_name: name.clone(),
        });
        members.push((name.clone(), q));
    }
    Ok(DisjointAlternative {
        family: MeasureFamily::new(family.space().clone(), members)?,
        supports,
    })
}

/// Least upper bound in the quasi-sure order; zero on polar atoms.
pub fn ess_sup(family: &MeasureFamily, xs: &[QsRandomVariable]) -> Result<QsRandomVariable> {
    let first = xs
        .first()
        .ok_or_else(|| Error::Parse("ess_sup needs at least one element".into()))?;
    let mut acc = first.canonical(family);
    same_space(family.space(), first.space())?;
    for x in &xs[1..] {
        acc = acc.combine(x, |a, b| a.max(b).clone())?;
    }
    Ok(acc.canonical(family))
}

/// Streaming variant: consumes `xs` lazily and fails as soon as an element
/// exceeds `bound` on a non-polar atom. At most `limit` elements are read.
pub fn ess_sup_bounded<I>(
    family: &MeasureFamily,
    xs: I,
    bound: &Rational,
    limit: usize,
) -> Result<QsRandomVariable>
where
    I: IntoIterator<Item = QsRandomVariable>,
{
    let charged = family.charged_atoms();
    let mut acc: Option<QsRandomVariable> = None;
    for (index, x) in xs.into_iter().take(limit).enumerate() {
        same_space(family.space(), x.space())?;
        if let Some(i) = charged.iter().find(|&i| x.value(i) > bound) {
            return Err(Error::Unbounded {
                index,
                atom: family.space().label(i).to_string(),
            });
        }
        acc = Some(match acc {
            None => x.canonical(family),
            Some(a) => a.combine(&x, |p, q| p.max(q).clone())?.canonical(family),
        });
    }
    acc.ok_or_else(|| Error::Parse("ess_sup needs at least one element".into()))
}

/// Checks that a nonnegative `x` is the supremum of its restrictions to the
/// supports of the alternative.
pub fn sup_restriction_identity(alt: &DisjointAlternative, x: &QsRandomVariable) -> Result<bool> {
    let family = &alt.family;
    same_space(family.space(), x.space())?;
    if let Some(i) = family
        .charged_atoms()
        .iter()
        .find(|&i| x.value(i).is_negative())
    {
        return Err(Error::NegativeInput {
            atom: family.space().label(i).to_string(),
        });
    }
    let pieces: Vec<_> = alt.supports.iter().map(|s| x.restrict(&s.event)).collect();
    let sup = ess_sup(family, &pieces)?;
    sup.qs_eq(x, family)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyViolation {
    pub pair: (String, String),
    pub atom: String,
}

/// Per-member random variables, keyed by member name.
pub type Assignment = BTreeMap<String, QsRandomVariable>;

/// Reports every atom charged by two members on which their variables differ.
pub fn check_consistency(
    family: &MeasureFamily,
    assignment: &Assignment,
) -> Result<Vec<ConsistencyViolation>> {
    let members = family.members();
    for (name, _) in members {
        let x = assignment
            .get(name)
            .ok_or_else(|| Error::IncompleteAssignment {
                member: name.clone(),
            })?;
        same_space(family.space(), x.space())?;
    }
    let mut out = Vec::new();
    for (i, (n1, m1)) in members.iter().enumerate() {
        for (n2, m2) in &members[i + 1..] {
            let (x1, x2) = (&assignment[n1], &assignment[n2]);
            for a in m1
                .positivity_set()
                .intersection(&m2.positivity_set())
                .iter()
            {
                if x1.value(a) != x2.value(a) {
                    out.push(ConsistencyViolation {
                        pair: (n1.clone(), n2.clone()),
                        atom: family.space().label(a).to_string(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Glues a consistent assignment into one random variable: on the support of
/// each member it takes that member's values, zero elsewhere.
pub fn aggregate(family: &MeasureFamily, assignment: &Assignment) -> Result<QsRandomVariable> {
    let violations = check_consistency(family, assignment)?;
    if !violations.is_empty() {
        return Err(Error::Inconsistent(violations));
    }
    let mut values = vec![Rational::zero(); family.space().len()];
    for (name, m) in family.members() {
        let x = &assignment[name];
        for a in m.positivity_set().iter() {
            values[a] = x.value(a).clone();
        }
    }
    QsRandomVariable::new(family.space().clone(), values)
}

/// `Q(X = X^Q) = 1` for every member.
pub fn is_coherent(family: &MeasureFamily, assignment: &Assignment, x: &QsRandomVariable) -> bool {
    family.members().iter().all(|(name, m)| {
        let xq = &assignment[name];
        let agree =
            Event::from_positions((0..x.values().len()).filter(|&i| x.value(i) == xq.value(i)));
        m.mass(&agree) == m.total()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{SampleSpace, SpaceRef};
    use crate::rational::{int, rat};

    fn abc() -> SpaceRef {
        SampleSpace::new(["a", "b", "c"]).unwrap()
    }

    fn diracs(s: &SpaceRef, atoms: &[&str]) -> MeasureFamily {
        let members = atoms
            .iter()
            .map(|a| (format!("d{a}"), Measure::dirac(s.clone(), a).unwrap()))
            .collect();
        MeasureFamily::new(s.clone(), members).unwrap()
    }

    fn rv(s: &SpaceRef, v: &[i64]) -> QsRandomVariable {
        QsRandomVariable::new(s.clone(), v.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn order_support_examples() {
        let s = abc();
        let f = diracs(&s, &["a", "b", "c"]);
        let mu = Measure::uniform(s.clone(), &["a", "b"]).unwrap();
        assert_eq!(
            order_support(&f, &mu).unwrap(),
            s.event(["a", "b"]).unwrap()
        );

        let f = diracs(&s, &["a", "b"]);
        assert_eq!(
            order_support(&f, &mu).unwrap(),
            s.event(["a", "b"]).unwrap()
        );

        let da = Measure::dirac(s.clone(), "a").unwrap();
        assert_eq!(order_support(&f, &da).unwrap(), s.event(["a"]).unwrap());
        assert!(
            verify_support(&f, &da, &s.event(["a", "c"]).unwrap())
                .unwrap()
                .passed
        );

        let dc = Measure::dirac(s.clone(), "c").unwrap();
        assert_eq!(
            order_support(&f, &dc).unwrap_err(),
            Error::NotDominated { atom: "c".into() }
        );
    }

    #[test]
    fn verify_support_examples() {
        let s = abc();
        let f = diracs(&s, &["a", "b"]);
        let da = Measure::dirac(s.clone(), "a").unwrap();
        assert!(
            verify_support(&f, &da, &s.event(["a"]).unwrap())
                .unwrap()
                .passed
        );

        let r = verify_support(&f, &da, &s.event(["a", "b"]).unwrap()).unwrap();
        assert_eq!(
            r.witness,
            Some(SupportViolation::NonPolarNull {
                atoms: s.event(["b"]).unwrap()
            })
        );

        let r = verify_support(&f, &da, &s.event(["b"]).unwrap()).unwrap();
        assert!(
            matches!(r.witness, Some(SupportViolation::MassOutside { ref mass, .. }) if *mass == int(1))
        );
    }

    #[test]
    fn exhaustive_mode_agrees_on_examples() {
        let s = abc();
        let f = diracs(&s, &["a", "b"]);
        let da = Measure::dirac(s.clone(), "a").unwrap();
        for cand in [vec!["a"], vec!["a", "b"], vec!["b"], vec!["a", "c"], vec![]] {
            let e = s.event(cand).unwrap();
            let fast = verify_support_with(&f, &da, &e, SupportMode::Atomwise).unwrap();
            let slow = verify_support_with(&f, &da, &e, SupportMode::Exhaustive).unwrap();
            assert_eq!(fast.passed, slow.passed);
        }
    }

    #[test]
    fn alternative_examples() {
        let s = abc();
        let f = MeasureFamily::new(
            s.clone(),
            vec![
                (
                    "q1".into(),
                    Measure::uniform(s.clone(), &["a", "b"]).unwrap(),
                ),
                (
                    "q2".into(),
                    Measure::uniform(s.clone(), &["b", "c"]).unwrap(),
                ),
            ],
        )
        .unwrap();
        let alt = disjoint_supported_alternative(&f).unwrap();
        assert_eq!(alt.family.member("q1").unwrap(), f.member("q1").unwrap());
        assert_eq!(
            alt.family.member("q2").unwrap(),
            &Measure::dirac(s.clone(), "c").unwrap()
        );
        assert_eq!(alt.support_of("q2").unwrap(), &s.event(["c"]).unwrap());

        let d = diracs(&s, &["a", "b"]);
        assert_eq!(disjoint_supported_alternative(&d).unwrap().family, d);

        let p = Measure::uniform(s.clone(), &["a", "c"]).unwrap();
        let dup =
            MeasureFamily::new(s.clone(), vec![("p".into(), p.clone()), ("p2".into(), p)]).unwrap();
        assert_eq!(
            disjoint_supported_alternative(&dup).unwrap().family.len(),
            1
        );
    }

    #[test]
    fn ess_sup_examples() {
        let s = abc();
        let all = diracs(&s, &["a", "b", "c"]);
        let ia = QsRandomVariable::indicator(s.clone(), &s.event(["a"]).unwrap());
        let ib = QsRandomVariable::indicator(s.clone(), &s.event(["b"]).unwrap());
        let iab = QsRandomVariable::indicator(s.clone(), &s.event(["a", "b"]).unwrap());
        assert_eq!(ess_sup(&all, &[ia, ib]).unwrap(), iab);

        let ab = diracs(&s, &["a", "b"]);
        let x = rv(&s, &[1, 5, 9]);
        assert!(ess_sup(&ab, &[x.clone()]).unwrap().qs_eq(&x, &ab).unwrap());
        assert_eq!(
            ess_sup(&ab, &[x, rv(&s, &[2, 4, 0])]).unwrap(),
            rv(&s, &[2, 5, 0])
        );
    }

    #[test]
    fn ess_sup_stream_bound() {
        let s = abc();
        let ab = diracs(&s, &["a", "b"]);
        let stream = (0..).map(|k| rv(&s, &[k, 0, 1000]));
        let err = ess_sup_bounded(&ab, stream, &int(10), 100).unwrap_err();
        assert_eq!(
            err,
            Error::Unbounded {
                index: 11,
                atom: "a".into()
            }
        );
        let ok =
            ess_sup_bounded(&ab, (0..5).map(|k| rv(&s, &[k, 0, 1000])), &int(10), 100).unwrap();
        assert_eq!(ok, rv(&s, &[4, 0, 0]));
    }

    #[test]
    fn sup_restriction_examples() {
        let s = abc();
        let f = MeasureFamily::new(
            s.clone(),
            vec![
                (
                    "q1".into(),
                    Measure::uniform(s.clone(), &["a", "b"]).unwrap(),
                ),
                (
                    "q2".into(),
                    Measure::uniform(s.clone(), &["b", "c"]).unwrap(),
                ),
            ],
        )
        .unwrap();
        let alt = disjoint_supported_alternative(&f).unwrap();
        assert!(sup_restriction_identity(&alt, &rv(&s, &[3, 1, 7])).unwrap());
        assert!(sup_restriction_identity(&alt, &QsRandomVariable::zero(s.clone())).unwrap());
        assert!(sup_restriction_identity(&alt, &rv(&s, &[1, 1, 1])).unwrap());
        assert_eq!(
            sup_restriction_identity(&alt, &rv(&s, &[1, -1, 1])).unwrap_err(),
            Error::NegativeInput { atom: "b".into() }
        );
    }

    #[test]
    fn consistency_examples() {
        let s = abc();
        let d = diracs(&s, &["a", "b"]);
        let asg: Assignment = [
            ("da".to_string(), rv(&s, &[5, 0, 0])),
            ("db".to_string(), rv(&s, &[9, 7, 3])),
        ]
        .into();
        assert!(check_consistency(&d, &asg).unwrap().is_empty());
        assert_eq!(aggregate(&d, &asg).unwrap(), rv(&s, &[5, 7, 0]));

        let f = MeasureFamily::new(
            s.clone(),
            vec![
                (
                    "q1".into(),
                    Measure::uniform(s.clone(), &["a", "b"]).unwrap(),
                ),
                (
                    "q2".into(),
                    Measure::uniform(s.clone(), &["b", "c"]).unwrap(),
                ),
            ],
        )
        .unwrap();
        let asg: Assignment = [
            ("q1".to_string(), rv(&s, &[0, 3, 0])),
            ("q2".to_string(), rv(&s, &[0, 4, 0])),
        ]
        .into();
        let v = check_consistency(&f, &asg).unwrap();
        assert_eq!(
            v,
            vec![ConsistencyViolation {
                pair: ("q1".into(), "q2".into()),
                atom: "b".into()
            }]
        );
        assert!(matches!(aggregate(&f, &asg), Err(Error::Inconsistent(_))));

        let missing: Assignment = [("q1".to_string(), rv(&s, &[0, 3, 0]))].into();
        assert_eq!(
            check_consistency(&f, &missing).unwrap_err(),
            Error::IncompleteAssignment {
                member: "q2".into()
            }
        );
    }

    #[test]
    fn aggregate_is_coherent() {
        let s = abc();
        let p = Measure::uniform(s.clone(), &["a", "b"]).unwrap();
        let single = MeasureFamily::new(s.clone(), vec![("p".into(), p)]).unwrap();
        let asg: Assignment = [("p".to_string(), rv(&s, &[2, 3, 4]))].into();
        let x = aggregate(&single, &asg).unwrap();
        assert_eq!(x, rv(&s, &[2, 3, 0]));
        assert!(is_coherent(&single, &asg, &x));
        let _ = rat(1, 2);
    }
}
