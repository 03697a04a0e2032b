//! The acceptance suite: ten criteria run against seeded random corpora and
//! fixed fixtures. Shared by the `acceptance` test target and `qsa selftest`.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binomial::{
    argmax_choice, build_tree, homogeneous_choices, is_degenerate, oracle_price, product_measure,
    superhedge_price, support_of_product, supports_equal_or_disjoint, BinomialTreeSpec, NodeBounds,
    Payoff,
};
use crate::bipolar::{
    bipolar_membership, check_bs_equivalence, Certificate, PolarGrid, SolidConvexSet,
    GRID_MAX_ATOMS,
};
use crate::classifier::{
    check_implications, classify, preset, reassert, Cardinality, Flag, FlagValue, ModelDescriptor,
    SymbolicDescriptor, Verdict, PRESETS, R8_ANNOTATION,
};
use crate::error::{Error, Result};
use crate::measure::{equivalent, Event, Measure, MeasureFamily, QsRandomVariable, SampleSpace};
use crate::rational::{format_rational, int, rat, to_f64, Extended, Rational};
use crate::risk::{
    dirac_grid, entropic_dual_objective, gibbs_measure, member_grid, rho, simplex_grid,
    verify_representation, RiskMeasureSpec,
};
use crate::support::{
    aggregate, check_consistency, disjoint_supported_alternative, is_coherent, order_support,
    sup_restriction_identity, verify_support_with, Assignment, SupportMode,
};

pub const SEED: u64 = 0x5eed_2024;
pub const CORPUS_SIZE: usize = 200;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub group: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {} ({}): {} in {:.2}s; {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.group,
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Options for a run. `presets` replaces the built-in preset descriptors
/// used by the classifier criterion.
#[derive(Debug, Clone, Default)]
pub struct Config {
    pub filter: Option<String>,
    pub presets: Option<BTreeMap<String, SymbolicDescriptor>>,
}

type Check = fn(&Config) -> Result<(bool, String)>;

struct Criterion {
    id: u8,
    group: &'static str,
    title: &'static str,
    limit: Option<Duration>,
    check: Check,
}

const CRITERIA: [Criterion; 10] = [
    Criterion {
        id: 1,
        group: "support",
        title: "order supports pass atomwise and exhaustive verification",
        limit: Some(Duration::from_secs(5)),
        check: support_correctness,
    },
    Criterion {
        id: 2,
        group: "alternative",
        title: "disjoint supported alternatives are disjoint and equivalent",
        limit: Some(Duration::from_secs(5)),
        check: disjoint_alternative,
    },
    Criterion {
        id: 3,
        group: "supremum",
        title: "nonnegative variables are the supremum of their restrictions",
        limit: None,
        check: supremum_identity,
    },
    Criterion {
        id: 4,
        group: "aggregation",
        title: "aggregation round trip and inconsistency witnesses",
        limit: None,
        check: aggregation_round_trip,
    },
    Criterion {
        id: 5,
        group: "binomial",
        title: "superhedging recursion equals the enumeration oracle",
        limit: Some(Duration::from_secs(30)),
        check: binomial_dp_equals_oracle,
    },
    Criterion {
        id: 6,
        group: "binomial",
        title: "product-measure supports carry full mass and are equal or disjoint",
        limit: None,
        check: binomial_supports,
    },
    Criterion {
        id: 7,
        group: "binomial",
        title: "superhedging price is monotone under widening and refinement",
        limit: None,
        check: binomial_monotonicity,
    },
    Criterion {
        id: 8,
        group: "bipolar",
        title: "direct and bipolar membership agree, grid cross-check",
        limit: Some(Duration::from_secs(30)),
        check: bipolar_equivalence,
    },
    Criterion {
        id: 9,
        group: "risk",
        title: "dual representations of risk measures",
        limit: None,
        check: risk_duality,
    },
    Criterion {
        id: 10,
        group: "classifier",
        title: "classification table, citations and implication consistency",
        limit: None,
        check: classifier_table,
    },
];

fn selected(c: &Criterion, filter: Option<&str>) -> bool {
    match filter {
        None => true,
        Some(f) => f
            .split(',')
            .map(str::trim)
            .any(|f| f == c.group || f == c.id.to_string()),
    }
}

pub fn groups() -> Vec<&'static str> {
    let mut g: Vec<_> = CRITERIA.iter().map(|c| c.group).collect();
    g.dedup();
    g
}

/// Runs the selected criteria in order; errors count as failures.
pub fn run(config: &Config) -> Vec<Outcome> {
    CRITERIA
        .iter()
        .filter(|c| selected(c, config.filter.as_deref()))
        .map(|c| {
            let start = Instant::now();
            let result = (c.check)(config);
            let elapsed = start.elapsed();
            let (mut passed, mut detail) = match result {
                Ok(r) => r,
                Err(e) => (false, format!("error {}: {e}", e.name())),
            };
            if let Some(limit) = c.limit {
                if elapsed > limit {
                    passed = false;
                    detail.push_str(&format!("; exceeded time limit {}s", limit.as_secs()));
                }
            }
            Outcome {
                id: c.id,
                group: c.group,
                title: c.title,
                passed,
                detail,
                elapsed,
            }
        })
        .collect()
}

// ---- random corpora ----

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

/// A probability measure with weights `k/den`, `den ≤ max_den`, on a random
/// nonempty subset of `atoms`.
fn random_measure(r: &mut ChaCha8Rng, n: usize, atoms: &[usize], max_den: i64) -> Vec<Rational> {
    let den = r.gen_range(1..=max_den);
    let size = r.gen_range(1..=atoms.len().min(den as usize));
    let chosen: Vec<usize> = atoms.choose_multiple(r, size).copied().collect();
    let mut counts = vec![0i64; n];
    for &a in &chosen {
        counts[a] += 1;
    }
    for _ in size as i64..den {
        counts[*chosen.choose(r).expect("nonempty")] += 1;
    }
    counts.into_iter().map(|c| rat(c, den)).collect()
}

pub fn random_family(
    r: &mut ChaCha8Rng,
    max_atoms: usize,
    max_members: usize,
    max_den: i64,
) -> MeasureFamily {
    let n = r.gen_range(1..=max_atoms);
    let space = SampleSpace::new((0..n).map(|i| format!("w{i}"))).expect("distinct labels");
    let all: Vec<usize> = (0..n).collect();
    let k = r.gen_range(1..=max_members);
    let members = (0..k)
        .map(|j| {
            let w = random_measure(r, n, &all, max_den);
            (
                format!("P{j}"),
                Measure::new(space.clone(), w).expect("probability"),
            )
        })
        .collect();
    MeasureFamily::new(space, members).expect("valid family")
}

pub fn corpus() -> Vec<MeasureFamily> {
    let mut r = rng(1);
    (0..CORPUS_SIZE)
        .map(|_| random_family(&mut r, 8, 5, 16))
        .collect()
}

fn random_rv(
    r: &mut ChaCha8Rng,
    f: &MeasureFamily,
    lo: i64,
    hi: i64,
    den: i64,
) -> QsRandomVariable {
    let values = (0..f.space().len())
        .map(|_| rat(r.gen_range(lo * den..=hi * den), den))
        .collect();
    QsRandomVariable::new(f.space().clone(), values).expect("matching length")
}

fn polar_atoms_direct(f: &MeasureFamily) -> Vec<bool> {
    (0..f.space().len())
        .map(|i| f.members().iter().all(|(_, m)| m.weight(i).is_zero()))
        .collect()
}

// ---- criteria 1-4 ----

fn support_correctness(_: &Config) -> Result<(bool, String)> {
    let mut r = rng(2);
    let mut checked = 0;
    for (mi, f) in corpus().iter().enumerate() {
        let polar = polar_atoms_direct(f);
        let charged: Vec<usize> = (0..polar.len()).filter(|&i| !polar[i]).collect();
        let mut measures: Vec<Measure> = f.members().iter().map(|(_, m)| m.clone()).collect();
        let w = random_measure(&mut r, f.space().len(), &charged, 16);
        measures.push(Measure::new(f.space().clone(), w)?);
        for mu in &measures {
            let s = order_support(f, mu)?;
            let expected = Event::from_positions(
                (0..polar.len()).filter(|&i| !polar[i] && !mu.weight(i).is_zero()),
            );
            if s != expected {
                return Ok((
                    false,
                    format!("model {mi}: support differs from the positivity set"),
                ));
            }
            for mode in [SupportMode::Atomwise, SupportMode::Exhaustive] {
                let c = verify_support_with(f, mu, &s, mode)?;
                if !c.passed {
                    return Ok((
                        false,
                        format!("model {mi}: {mode:?} verification failed: {:?}", c.witness),
                    ));
                }
            }
            checked += 1;
        }
    }
    Ok((
        true,
        format!("{checked} measures over {CORPUS_SIZE} models"),
    ))
}

fn disjoint_alternative(_: &Config) -> Result<(bool, String)> {
    for (mi, f) in corpus().iter().enumerate() {
        let alt = disjoint_supported_alternative(f)?;
        let members = alt.family.members();
        for (i, (_, a)) in members.iter().enumerate() {
            for (_, b) in &members[i + 1..] {
                if !a.meet(b)?.is_zero() {
                    return Ok((
                        false,
                        format!("model {mi}: members of the alternative overlap"),
                    ));
                }
            }
        }
        // Same polar atoms, checked atom by atom against the source weights.
        let src = polar_atoms_direct(f);
        let dst = polar_atoms_direct(&alt.family);
        if src != dst || !equivalent(f, &alt.family)? {
            return Ok((false, format!("model {mi}: alternative is not equivalent")));
        }
        for (name, q) in members {
            let s = alt.support_of(name)?;
            if !verify_support_with(&alt.family, q, s, SupportMode::Exhaustive)?.passed {
                return Ok((
                    false,
                    format!("model {mi}: `{name}` is not supported by its event"),
                ));
            }
        }
    }
    Ok((true, format!("{CORPUS_SIZE} models")))
}

fn supremum_identity(_: &Config) -> Result<(bool, String)> {
    let mut r = rng(3);
    let mut n = 0;
    for (mi, f) in corpus().iter().enumerate() {
        let alt = disjoint_supported_alternative(f)?;
        for k in 0..100 {
            let x = random_rv(&mut r, f, 0, 3, 4);
            if !sup_restriction_identity(&alt, &x)? {
                return Ok((false, format!("model {mi}, variable {k}")));
            }
            n += 1;
        }
    }
    Ok((true, format!("{n} variables")))
}

fn aggregation_round_trip(_: &Config) -> Result<(bool, String)> {
    let mut r = rng(4);
    let (mut trips, mut injected) = (0, 0);
    for (mi, f) in corpus().iter().enumerate() {
        let alt = disjoint_supported_alternative(f)?;
        let af = &alt.family;
        // Each member sees the global variable on its support and noise off it.
        let x = random_rv(&mut r, af, -2, 2, 4);
        let mut assignment = Assignment::new();
        for s in &alt.supports {
            let noise = random_rv(&mut r, af, -2, 2, 4);
            let xq = x.map(|i, v| {
                if s.event.contains(i) {
                    v.clone()
                } else {
                    noise.value(i).clone()
                }
            });
            assignment.insert(s.measure_name.clone(), xq);
        }
        let glued = aggregate(af, &assignment)?;
        if !is_coherent(af, &assignment, &glued) || !glued.qs_eq(&x, af)? {
            return Ok((
                false,
                format!("model {mi}: aggregate does not reproduce the members"),
            ));
        }
        trips += 1;

        // Overlap perturbation on the source family.
        let members = f.members();
        let overlap = (0..members.len())
            .flat_map(|i| (i + 1..members.len()).map(move |j| (i, j)))
            .find_map(|(i, j)| {
                let shared = members[i]
                    .1
                    .positivity_set()
                    .intersection(&members[j].1.positivity_set());
                let first = shared.iter().next();
                first.map(|a| (i, j, a))
            });
        let Some((i, j, atom)) = overlap else {
            continue;
        };
        let mut assignment: Assignment = members
            .iter()
            .map(|(n, _)| (n.clone(), x.clone()))
            .collect();
        let bumped = x.map(|k, v| {
            if k == atom {
                v + Rational::one()
            } else {
                v.clone()
            }
        });
        assignment.insert(members[j].0.clone(), bumped);
        let expected = (members[i].0.clone(), members[j].0.clone());
        let label = f.space().label(atom).to_string();
        let witnessed = check_consistency(f, &assignment)?
            .iter()
            .any(|v| v.pair == expected && v.atom == label);
        let detected =
            matches!(aggregate(f, &assignment), Err(Error::Inconsistent(vs)) if !vs.is_empty());
        if !(witnessed && detected) {
            return Ok((
                false,
                format!("model {mi}: perturbation at `{label}` not reported"),
            ));
        }
        injected += 1;
    }
    Ok((
        true,
        format!("{trips} round trips, {injected} injected inconsistencies detected"),
    ))
}

// ---- binomial criteria ----

fn nb(
    u: Rational,
    uu: Rational,
    d: Rational,
    dd: Rational,
    pi: Rational,
    pp: Rational,
) -> NodeBounds {
    NodeBounds::new(u, uu, d, dd, pi, pp).expect("fixture bounds are valid")
}

/// Five homogeneous bound sets; the first and last are point intervals.
pub fn fixture_bounds() -> Vec<NodeBounds> {
    vec![
        nb(int(2), int(2), rat(1, 2), rat(1, 2), rat(1, 3), rat(1, 3)),
        nb(
            rat(3, 2),
            int(2),
            rat(1, 2),
            rat(3, 4),
            rat(1, 4),
            rat(3, 4),
        ),
        nb(
            rat(5, 4),
            rat(3, 2),
            rat(2, 3),
            rat(4, 5),
            rat(1, 3),
            rat(1, 2),
        ),
        nb(
            rat(6, 5),
            int(2),
            rat(1, 3),
            rat(5, 6),
            rat(1, 5),
            rat(4, 5),
        ),
        nb(
            rat(3, 2),
            rat(3, 2),
            rat(2, 3),
            rat(2, 3),
            rat(2, 5),
            rat(2, 5),
        ),
    ]
}

fn fixture_payoffs() -> Vec<Payoff> {
    vec![
        Payoff::Call(int(1)),
        Payoff::Put(int(1)),
        Payoff::Digital(int(1)),
    ]
}

fn binomial_coefficient(n: usize, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| {
        acc * int((n - i) as i64) / int((i + 1) as i64)
    })
}

/// `Σ_k C(T,k) p^k (1−p)^(T−k) f(u^k d^(T−k))` with unit initial price.
pub fn classical_price(b: &NodeBounds, periods: usize, payoff: &Payoff) -> Rational {
    let f = |s: &Rational| match payoff {
        Payoff::Call(k) => (s - k).max(Rational::zero()),
        Payoff::Put(k) => (k - s).max(Rational::zero()),
        Payoff::Identity => s.clone(),
        Payoff::Digital(k) => {
            if s >= k {
                Rational::one()
            } else {
                Rational::zero()
            }
        }
        Payoff::Explicit(_) => panic!("classical price needs a price function"),
    };
    let pw = |x: &Rational, e: usize| (0..e).fold(Rational::one(), |acc, _| acc * x);
    let q = Rational::one() - &b.pi;
    (0..=periods)
        .map(|k| {
            binomial_coefficient(periods, k)
                * pw(&b.pi, k)
                * pw(&q, periods - k)
                * f(&(pw(&b.u, k) * pw(&b.d, periods - k)))
        })
        .sum()
}

fn binomial_dp_equals_oracle(_: &Config) -> Result<(bool, String)> {
    let mut compared = 0;
    let mut classical = 0;
    for (bi, b) in fixture_bounds().iter().enumerate() {
        for periods in 1..=3 {
            for g in 1..=3 {
                let tree = build_tree(&BinomialTreeSpec::homogeneous(periods, g, b.clone()))?;
                for payoff in fixture_payoffs() {
                    let dp = superhedge_price(&tree, &payoff)?.value;
                    let oracle = oracle_price(&tree, &payoff)?;
                    if dp != oracle {
                        return Ok((
                            false,
                            format!(
                                "bounds {bi}, T={periods}, G={g}, {payoff:?}: recursion {} vs oracle {}",
                                format_rational(&dp),
                                format_rational(&oracle)
                            ),
                        ));
                    }
                    compared += 1;
                    if is_degenerate(b) {
                        let c = classical_price(b, periods, &payoff);
                        if c != dp {
                            return Ok((
                                false,
                                format!(
                                    "bounds {bi}, T={periods}: classical {} vs {}",
                                    format_rational(&c),
                                    format_rational(&dp)
                                ),
                            ));
                        }
                        classical += 1;
                    }
                }
            }
        }
    }
    Ok((
        true,
        format!("{compared} prices equal, {classical} degenerate prices equal the classical sum"),
    ))
}

fn binomial_supports(_: &Config) -> Result<(bool, String)> {
    let (mut choices_seen, mut pairs) = (0usize, 0usize);
    let mut failures = Vec::new();
    for (bi, b) in fixture_bounds().iter().enumerate() {
        let tree = build_tree(&BinomialTreeSpec::homogeneous(2, 2, b.clone()))?;
        let mut choices = homogeneous_choices(&tree);
        for payoff in fixture_payoffs() {
            let c = argmax_choice(&tree, &superhedge_price(&tree, &payoff)?);
            if !choices.contains(&c) {
                choices.push(c);
            }
        }
        for c in &choices {
            let q = product_measure(&tree, c)?;
            let s = support_of_product(&tree, c)?;
            if q.mass(&s) != Rational::one() {
                return Ok((
                    false,
                    format!("bounds {bi}: Q(S(Q)) = {}", format_rational(&q.mass(&s))),
                ));
            }
        }
        choices_seen += choices.len();
        let mut violating = 0;
        let mut first = None;
        for i in 0..choices.len() {
            for j in i + 1..choices.len() {
                let pair = [choices[i].clone(), choices[j].clone()];
                let report = supports_equal_or_disjoint(&tree, &pair)?;
                pairs += 1;
                if let Some(w) = report.witness {
                    violating += 1;
                    first.get_or_insert((i, j, w));
                }
            }
        }
        if let Some((i, j, w)) = first {
            failures.push(format!(
                "bounds {bi}: {violating} violating pairs, e.g. choices {i} and {j} share leaf {} but differ at leaf {}",
                w.shared_leaf, w.separating_leaf
            ));
        }
        // The list form must agree with the pairwise scan.
        if supports_equal_or_disjoint(&tree, &choices)?.holds != (violating == 0) {
            return Ok((false, format!("bounds {bi}: list and pairwise checks disagree")));
        }
    }
    if pairs > 10_000 {
        return Ok((false, format!("{pairs} pairs exceed the budget")));
    }
    let summary =
        format!("{choices_seen} choices carry full mass on their supports, {pairs} pairs checked");
    if failures.is_empty() {
        Ok((true, summary))
    } else {
        Ok((
            false,
            format!(
                "{summary}; equal-or-disjoint fails: {}",
                failures.join("; ")
            ),
        ))
    }
}

/// Nested boxes `inner ⊂ middle ⊂ outer`.
pub fn ladder() -> [NodeBounds; 3] {
    [
        nb(
            rat(3, 2),
            rat(7, 4),
            rat(2, 3),
            rat(3, 4),
            rat(2, 5),
            rat(1, 2),
        ),
        nb(
            rat(5, 4),
            int(2),
            rat(1, 2),
            rat(4, 5),
            rat(1, 3),
            rat(3, 5),
        ),
        nb(
            rat(6, 5),
            rat(5, 2),
            rat(2, 5),
            rat(5, 6),
            rat(1, 4),
            rat(3, 4),
        ),
    ]
}

/// Widens one interval of `b` to the corresponding interval of `outer`.
fn widen_one(b: &NodeBounds, outer: &NodeBounds, which: usize) -> NodeBounds {
    let mut w = b.clone();
    match which {
        0 => (w.u, w.big_u) = (outer.u.clone(), outer.big_u.clone()),
        1 => (w.d, w.big_d) = (outer.d.clone(), outer.big_d.clone()),
        _ => (w.pi, w.big_pi) = (outer.pi.clone(), outer.big_pi.clone()),
    }
    w
}

fn price(b: &NodeBounds, periods: usize, g: usize, payoff: &Payoff) -> Result<Rational> {
    Ok(superhedge_price(
        &build_tree(&BinomialTreeSpec::homogeneous(periods, g, b.clone()))?,
        payoff,
    )?
    .value)
}

fn binomial_monotonicity(_: &Config) -> Result<(bool, String)> {
    let rungs = ladder();
    for w in rungs.windows(2) {
        assert!(w[1].contains(&w[0]), "ladder is nested");
    }
    let mut comparisons = 0;
    // Widening: convex payoffs, grids containing the interval endpoints.
    let convex = [Payoff::Call(int(1)), Payoff::Put(int(1)), Payoff::Identity];
    for periods in 1..=3 {
        for g in 2..=3 {
            for payoff in &convex {
                for w in rungs.windows(2) {
                    let base = price(&w[0], periods, g, payoff)?;
                    let mut wider = vec![w[1].clone()];
                    wider.extend((0..3).map(|k| widen_one(&w[0], &w[1], k)));
                    for b in &wider {
                        let p = price(b, periods, g, payoff)?;
                        if p < base {
                            return Ok((
                                false,
                                format!(
                                    "widening lowers the price: T={periods}, G={g}, {payoff:?}"
                                ),
                            ));
                        }
                        comparisons += 1;
                    }
                }
            }
        }
    }
    // Refinement: nested grids G = 1, 2, 3 for every payoff.
    let all = [
        Payoff::Call(int(1)),
        Payoff::Put(int(1)),
        Payoff::Identity,
        Payoff::Digital(int(1)),
    ];
    for b in &rungs {
        for periods in 1..=3 {
            for payoff in &all {
                let ps = (1..=3)
                    .map(|g| price(b, periods, g, payoff))
                    .collect::<Result<Vec<_>>>()?;
                if ps.windows(2).any(|w| w[1] < w[0]) {
                    return Ok((
                        false,
                        format!("refinement lowers the price: T={periods}, {payoff:?}"),
                    ));
                }
                comparisons += 2;
            }
        }
    }
    Ok((true, format!("{comparisons} monotone comparisons")))
}

// ---- bipolar ----

fn bipolar_equivalence(_: &Config) -> Result<(bool, String)> {
    let mut r = rng(8);
    let levels = [rat(0, 1), rat(1, 2), int(1), int(2)];
    let probe_levels = [rat(0, 1), rat(1, 4), rat(1, 2), int(1), rat(3, 2), int(2)];
    let (mut checked, mut grid_checked, mut grid_decided) = (0, 0, 0);
    for set in 0..50 {
        let f = random_family(&mut r, 5, 3, 8);
        let n = f.space().len();
        let k = r.gen_range(1..=4);
        let gens = (0..k)
            .map(|_| {
                let v = (0..n)
                    .map(|_| levels.choose(&mut r).expect("nonempty").clone())
                    .collect();
                QsRandomVariable::new(f.space().clone(), v)
            })
            .collect::<Result<Vec<_>>>()?;
        let c = SolidConvexSet::new(f.space().clone(), gens)?;
        let probes = (0..12)
            .map(|_| {
                let v = (0..n)
                    .map(|_| probe_levels.choose(&mut r).expect("nonempty").clone())
                    .collect();
                QsRandomVariable::new(f.space().clone(), v)
            })
            .collect::<Result<Vec<_>>>()?;
        let report = check_bs_equivalence(&f, &c, &probes)?;
        checked += report.checked;
        if let Some(d) = report.disagreements.first() {
            return Ok((
                false,
                format!(
                    "set {set}: probe {} in C = {}, in bipolar = {}",
                    d.probe, d.in_set, d.in_bipolar
                ),
            ));
        }
        if f.charged_atoms().len() > GRID_MAX_ATOMS || n > 3 {
            continue;
        }
        // Grid points lie in the polar, and rounding the LP optimizer down to
        // the grid loses at most Σ x_i / 8 of the pairing.
        let grid = PolarGrid::new(&f, &c, 8, 8)?;
        for x in &probes {
            let x = x.canonical(&f);
            let g = grid.max_pairing(&x);
            let m = bipolar_membership(&f, &c, &x)?;
            let slack: Rational = x.values().iter().sum::<Rational>() / int(8);
            let consistent = match &m.certificate {
                Certificate::Optimal { value, .. } => {
                    let decided = value <= &Rational::one() || value - &slack > Rational::one();
                    if decided {
                        grid_decided += 1;
                        if grid.member(&x) != m.member {
                            return Ok((
                                false,
                                format!("set {set}: grid and LP membership differ"),
                            ));
                        }
                    }
                    &g <= value && &(value - &slack) <= &g
                }
                Certificate::Ray { .. } => !grid.member(&x),
            };
            if !consistent {
                return Ok((
                    false,
                    format!(
                        "set {set}: grid value {} outside the LP bracket",
                        format_rational(&g)
                    ),
                ));
            }
            grid_checked += 1;
        }
    }
    Ok((true, format!("{checked} probes agree over 50 sets; {grid_checked} grid cross-checks ({grid_decided} decisive)")))
}

// ---- risk ----

struct EntropicFixture {
    reference: [Rational; 3],
    x: [Rational; 3],
    gamma: Rational,
}

fn entropic_fixtures() -> Vec<EntropicFixture> {
    vec![
        EntropicFixture {
            reference: [rat(1, 2), rat(1, 3), rat(1, 6)],
            x: [rat(1, 3), int(-1), rat(5, 2)],
            gamma: rat(3, 2),
        },
        EntropicFixture {
            reference: [rat(1, 4), rat(1, 4), rat(1, 2)],
            x: [int(1), int(0), int(-1)],
            gamma: int(1),
        },
        EntropicFixture {
            reference: [rat(1, 8), rat(5, 8), rat(1, 4)],
            x: [rat(-1, 2), rat(3, 4), rat(1, 4)],
            gamma: rat(1, 2),
        },
    ]
}

fn risk_duality(_: &Config) -> Result<(bool, String)> {
    let mut r = rng(9);
    let mut exact_checks = 0;
    for (mi, f) in corpus().iter().enumerate() {
        let probes: Vec<_> = (0..5).map(|_| random_rv(&mut r, f, -2, 2, 8)).collect();
        let polar = polar_atoms_direct(f);
        for x in &probes {
            let expected = (0..polar.len())
                .filter(|&i| !polar[i])
                .map(|i| x.value(i).clone())
                .max()
                .expect("charged atom");
            let got = rho(&RiskMeasureSpec::WorstCase, f, x)?;
            if got.as_exact() != Some(&expected) {
                return Ok((
                    false,
                    format!(
                        "model {mi}: worst case {:?} vs {}",
                        got,
                        format_rational(&expected)
                    ),
                ));
            }
        }
        let wc = verify_representation(&RiskMeasureSpec::WorstCase, f, &probes, &dirac_grid(f))?;
        if wc.max_gap_exact != Some(Some(Rational::zero())) {
            return Ok((
                false,
                format!("model {mi}: worst-case gap {:?}", wc.max_gap_exact),
            ));
        }
        let choices = [
            Extended::zero(),
            Extended::Finite(rat(1, 4)),
            Extended::Finite(rat(1, 2)),
            Extended::PosInfinity,
        ];
        let mut penalties: Vec<(String, Extended)> = f
            .names()
            .map(|n| {
                (
                    n.to_string(),
                    choices.choose(&mut r).expect("nonempty").clone(),
                )
            })
            .collect();
        penalties[0].1 = Extended::zero();
        let spec = RiskMeasureSpec::ScenarioPenalty { penalties };
        let sp = verify_representation(&spec, f, &probes, &member_grid(f))?;
        if sp.max_gap_exact != Some(Some(Rational::zero())) {
            return Ok((
                false,
                format!("model {mi}: scenario gap {:?}", sp.max_gap_exact),
            ));
        }
        exact_checks += 2;
    }
    let mut notes = Vec::new();
    for (k, e) in entropic_fixtures().iter().enumerate() {
        let space = SampleSpace::new(["a", "b", "c"])?;
        let p = Measure::new(space.clone(), e.reference.to_vec())?;
        let f = MeasureFamily::new(space.clone(), vec![("P".into(), p.clone())])?;
        let x = QsRandomVariable::new(space, e.x.to_vec())?;
        let spec = RiskMeasureSpec::Entropic {
            gamma: e.gamma.clone(),
            reference: "P".into(),
        };
        let coarse = verify_representation(&spec, &f, &[x.clone()], &simplex_grid(&f, 16))?.max_gap;
        let fine = verify_representation(&spec, &f, &[x.clone()], &simplex_grid(&f, 32))?.max_gap;
        let value = rho(&spec, &f, &x)?.to_f64();
        let gamma = to_f64(&e.gamma);
        let analytic = entropic_dual_objective(gamma, &p, &gibbs_measure(gamma, &p, &x), &x);
        let ok =
            coarse <= 1e-2 && fine < coarse && (value - analytic).abs() <= 1e-9 && fine >= -1e-12;
        if !ok {
            return Ok((
                false,
                format!(
                    "entropic fixture {k}: gaps {coarse:.3e} -> {fine:.3e}, analytic error {:.3e}",
                    (value - analytic).abs()
                ),
            ));
        }
        notes.push(format!("{coarse:.2e}->{fine:.2e}"));
    }
    Ok((
        true,
        format!(
            "{exact_checks} exact zero gaps; entropic gaps {}",
            notes.join(", ")
        ),
    ))
}

// ---- classifier ----

/// Expected verdicts in [`Flag::ALL`] order.
fn expected_row(name: &str) -> Option<[Verdict; 10]> {
    use Verdict::{No as N, Undecidable as U, Yes as Y};
    let disjoint_continuum = [N, N, Y, N, Y, N, Y, Y, N, Y];
    Some(match name {
        "dominated_singleton" => [Y; 10],
        "dirac_unit_interval" | "product_theta" | "innovation" | "typical_paths" => {
            disjoint_continuum
        }
        "volatility_band" => [N, N, Y, N, U, N, Y, U, N, U],
        "robust_binomial" => [N, N, Y, U, U, N, Y, U, U, U],
        _ => return None,
    })
}

fn citation_ok(v: &FlagValue) -> bool {
    match (v.value, v.rule) {
        (_, Some(rule)) => v.citation == rule.citation(),
        (Verdict::Undecidable, None) => !v.citation.is_empty(),
        _ => v.citation == FlagValue::asserted(v.value).citation,
    }
}

fn random_descriptor(r: &mut ChaCha8Rng) -> SymbolicDescriptor {
    let cardinality = match r.gen_range(0..3) {
        0 => Cardinality::Finite(r.gen_range(1..=6)),
        1 => Cardinality::CountablyInfinite,
        _ => Cardinality::Continuum,
    };
    let disjoint = r.gen_bool(0.5);
    let mut asserted = BTreeMap::new();
    for f in Flag::ALL {
        if r.gen_bool(0.03) {
            let v = if r.gen_bool(0.5) {
                Verdict::Yes
            } else {
                Verdict::No
            };
            asserted.insert(f, FlagValue::asserted(v));
        }
    }
    SymbolicDescriptor {
        cardinality,
        pairwise_disjoint_supports: disjoint,
        all_members_supported: disjoint || r.gen_bool(0.6),
        admits_perfect_disjoint_subfamily: r.gen_bool(0.3),
        product_structure: r.gen_bool(0.4),
        within_continuum: true,
        hahn_property: None,
        notes: String::new(),
        asserted,
    }
}

fn classifier_table(config: &Config) -> Result<(bool, String)> {
    let descriptors: Vec<(String, SymbolicDescriptor)> = match &config.presets {
        Some(map) => map.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        None => PRESETS
            .iter()
            .map(|n| Ok((n.to_string(), preset(n)?)))
            .collect::<Result<_>>()?,
    };
    for name in PRESETS {
        if !descriptors.iter().any(|(n, _)| n == name) {
            return Ok((false, format!("preset `{name}` missing")));
        }
    }
    for (name, d) in &descriptors {
        let report = classify(&ModelDescriptor::Symbolic(d.clone()))?;
        if let Some(row) = expected_row(name) {
            for (flag, want) in Flag::ALL.iter().zip(row) {
                if report.verdict(*flag) != want {
                    return Ok((
                        false,
                        format!(
                            "{name}: {} is {:?}, expected {want:?}",
                            flag.name(),
                            report.verdict(*flag)
                        ),
                    ));
                }
            }
        }
        if let Some((flag, _)) = report.flags.iter().find(|(_, v)| !citation_ok(v)) {
            return Ok((false, format!("{name}: {} lacks its citation", flag.name())));
        }
        if let Err(e) = check_implications(&report) {
            return Ok((false, format!("{name}: {e}")));
        }
    }
    let mut r = rng(10);
    let (mut reports, mut rejected, mut zfc) = (0, 0, 0);
    for k in 0..1000 {
        let d = random_descriptor(&mut r);
        let report = match classify(&ModelDescriptor::Symbolic(d.clone())) {
            Ok(rep) => rep,
            Err(Error::InconsistentFlags(_)) => {
                rejected += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if let Err(e) = check_implications(&report) {
            return Ok((false, format!("random descriptor {k}: {e}")));
        }
        if report.flags.values().any(|v| !citation_ok(v)) {
            return Ok((
                false,
                format!("random descriptor {k}: flag without citation"),
            ));
        }
        let again = classify(&ModelDescriptor::Symbolic(reassert(&d, &report)))?;
        if again.flags != report.flags {
            return Ok((
                false,
                format!("random descriptor {k}: reclassification changed the flags"),
            ));
        }
        if report.flags[&Flag::ClassS].annotation.as_deref() == Some(R8_ANNOTATION) {
            zfc += 1;
        }
        reports += 1;
    }
    Ok((
        true,
        format!(
            "{} presets match; 1000 random descriptors: {reports} consistent and idempotent ({zfc} with the set-theoretic annotation), {rejected} rejected as inconsistent",
            descriptors.len()
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn corpus_is_deterministic_and_in_range() {
        let a = corpus();
        let b = corpus();
        assert_eq!(a.len(), CORPUS_SIZE);
        assert_eq!(a, b);
        for f in &a {
            assert!(f.space().len() <= 8 && f.len() <= 5);
            for (_, m) in f.members() {
                assert!(m
                    .weights()
                    .iter()
                    .all(|w| !w.is_negative() && *w.denom() <= 16.into()));
            }
        }
    }

    #[test]
    fn classical_sum_matches_known_value() {
        let b = &fixture_bounds()[0];
        assert_eq!(classical_price(b, 2, &Payoff::Call(int(1))), rat(1, 3));
        assert_eq!(classical_price(b, 3, &Payoff::Identity), int(1));
    }

    #[test]
    fn filter_selects_groups_and_ids() {
        let picked: Vec<u8> = CRITERIA
            .iter()
            .filter(|c| selected(c, Some("binomial")))
            .map(|c| c.id)
            .collect();
        assert_eq!(picked, vec![5, 6, 7]);
        let picked: Vec<u8> = CRITERIA
            .iter()
            .filter(|c| selected(c, Some("1, risk")))
            .map(|c| c.id)
            .collect();
        assert_eq!(picked, vec![1, 9]);
        assert_eq!(groups().len(), 8);
    }
}
