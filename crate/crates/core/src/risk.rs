//! Convex monetary risk measures on finite models and their dual penalties.
//!
//! Three kinds are exact and polyhedral (`worst_case`, `scenario_penalty`,
//! `acceptance_generated`); their acceptance sets are finite systems of
//! inequalities and conjugates are solved as linear programs. The entropic
//! kind involves `exp`/`ln` and is evaluated in `f64`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{Constraint, LinearProgram, LpOutcome};
use crate::measure::qs_compare;
use crate::measure::{same_space, Measure, MeasureFamily, QsOrdering, QsRandomVariable};
use crate::rational::{to_f64, Extended, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum RiskMeasureSpec {
    /// Quasi-sure maximum of the loss.
    WorstCase,
    /// `(1/γ) ln E_ref[exp(γX)]` for a member `ref` of the family.
    Entropic { gamma: Rational, reference: String },
    /// `max_Q E_Q[X] − α(Q)` over members with finite penalty. Members
    /// absent from the list carry penalty `+∞`.
    ScenarioPenalty { penalties: Vec<(String, Extended)> },
    /// `inf{m : X − m ⪯ Z}` for some `Z` in the convex hull of the generators.
    AcceptanceGenerated { generators: Vec<QsRandomVariable> },
}

impl RiskMeasureSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            RiskMeasureSpec::WorstCase => "worst_case",
            RiskMeasureSpec::Entropic { .. } => "entropic",
            RiskMeasureSpec::ScenarioPenalty { .. } => "scenario_penalty",
            RiskMeasureSpec::AcceptanceGenerated { .. } => "acceptance_generated",
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, RiskMeasureSpec::Entropic { .. })
    }

    pub fn validate(&self, family: &MeasureFamily) -> Result<()> {
        match self {
            RiskMeasureSpec::WorstCase => Ok(()),
            RiskMeasureSpec::Entropic { gamma, reference } => {
                if !gamma.is_positive() {
                    return Err(Error::InvalidRiskSpec("gamma must be positive".into()));
                }
                family
                    .member(reference)
                    .map(|_| ())
                    .map_err(|_| Error::ReferenceMissing(reference.clone()))
            }
            RiskMeasureSpec::ScenarioPenalty { penalties } => {
                for (name, _) in penalties {
                    family.member(name)?;
                }
                if penalties.iter().all(|(_, a)| !a.is_finite()) {
                    return Err(Error::AllPenaltiesInfinite);
                }
                Ok(())
            }
            RiskMeasureSpec::AcceptanceGenerated { generators } => {
                if generators.is_empty() {
                    return Err(Error::EmptyGenerators);
                }
                generators
                    .iter()
                    .try_for_each(|g| same_space(family.space(), g.space()))
            }
        }
    }
}

/// A risk, penalty or gap value: exact for polyhedral kinds, `f64` for the
/// entropic kind (where `f64::INFINITY` encodes `+∞`).
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Extended),
    Float(f64),
}

impl Value {
    pub fn exact(r: Rational) -> Self {
        Value::Exact(Extended::Finite(r))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(e) => e.to_f64(),
            Value::Float(f) => *f,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(Extended::Finite(r)) => Some(r),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        match self {
            Value::Exact(e) => !e.is_finite(),
            Value::Float(f) => f.is_infinite(),
        }
    }
}

pub fn rho(spec: &RiskMeasureSpec, family: &MeasureFamily, x: &QsRandomVariable) -> Result<Value> {
    spec.validate(family)?;
    same_space(family.space(), x.space())?;
    match spec {
        RiskMeasureSpec::WorstCase => Ok(Value::exact(
            family
                .charged_atoms()
                .iter()
                .map(|i| x.value(i).clone())
                .max()
                .expect("a probability family charges some atom"),
        )),
        RiskMeasureSpec::Entropic { gamma, reference } => {
            let p = family.member(reference)?;
            Ok(Value::Float(entropic(to_f64(gamma), p, x)))
        }
        RiskMeasureSpec::ScenarioPenalty { penalties } => {
            let mut best: Option<Rational> = None;
            for (name, alpha) in penalties {
                let Extended::Finite(a) = alpha else { continue };
                let v = family.member(name)?.integrate(x)? - a;
                if best.as_ref().map_or(true, |b| v > *b) {
                    best = Some(v);
                }
            }
            best.map(Value::exact).ok_or(Error::AllPenaltiesInfinite)
        }
        RiskMeasureSpec::AcceptanceGenerated { .. } => {
            acceptance_set(spec, family)?.recover(x).map(Value::exact)
        }
    }
}

fn entropic(gamma: f64, p: &Measure, x: &QsRandomVariable) -> f64 {
    let terms: Vec<(f64, f64)> = p
        .weights()
        .iter()
        .zip(x.values())
        .filter(|(w, _)| w.is_positive())
        .map(|(w, v)| (to_f64(w), gamma * to_f64(v)))
        .collect();
    let top = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = terms.iter().map(|(w, e)| w * (e - top).exp()).sum();
    (top + s.ln()) / gamma
}

/// `{X : ρ(X) ≤ 0}` in a form that supports exact queries where possible.
#[derive(Debug, Clone, PartialEq)]
pub enum AcceptanceSet {
    /// `{X : ⟨row, X⟩ ≤ bound}` for each listed pair; rows are indexed by
    /// the charged atoms.
    HalfSpaces {
        charged: Vec<usize>,
        rows: Vec<(Vec<Rational>, Rational)>,
    },
    /// `{X : X ⪯ Σ λ_k Z_k, λ ≥ 0, Σ λ_k = 1}`.
    MonotoneHull {
        charged: Vec<usize>,
        generators: Vec<Vec<Rational>>,
    },
    /// Only membership queries through the risk functional itself.
    Oracle { gamma: f64, reference: Measure },
}

pub fn acceptance_set(spec: &RiskMeasureSpec, family: &MeasureFamily) -> Result<AcceptanceSet> {
    spec.validate(family)?;
    let charged: Vec<usize> = family.charged_atoms().iter().collect();
    let n = charged.len();
    Ok(match spec {
        RiskMeasureSpec::WorstCase => AcceptanceSet::HalfSpaces {
            rows: (0..n)
                .map(|k| {
                    let mut row = vec![Rational::zero(); n];
                    row[k] = Rational::one();
                    (row, Rational::zero())
                })
                .collect(),
            charged,
        },
        RiskMeasureSpec::ScenarioPenalty { penalties } => {
            let mut rows = Vec::new();
            for (name, alpha) in penalties {
                if let Extended::Finite(a) = alpha {
                    let q = family.member(name)?;
                    rows.push((
                        charged.iter().map(|&i| q.weight(i).clone()).collect(),
                        a.clone(),
                    ));
                }
            }
            AcceptanceSet::HalfSpaces { charged, rows }
        }
        RiskMeasureSpec::AcceptanceGenerated { generators } => AcceptanceSet::MonotoneHull {
            generators: generators
                .iter()
                .map(|g| charged.iter().map(|&i| g.value(i).clone()).collect())
                .collect(),
            charged,
        },
        RiskMeasureSpec::Entropic { gamma, reference } => AcceptanceSet::Oracle {
            gamma: to_f64(gamma),
            reference: family.member(reference)?.clone(),
        },
    })
}

impl AcceptanceSet {
    pub fn accepts(&self, x: &QsRandomVariable) -> bool {
        match self {
            AcceptanceSet::HalfSpaces { charged, rows } => rows.iter().all(|(row, b)| {
                let s: Rational = row.iter().zip(charged).map(|(a, &i)| a * x.value(i)).sum();
                s <= *b
            }),
            AcceptanceSet::MonotoneHull { .. } => {
                self.recover(x).map(|m| !m.is_positive()).unwrap_or(false)
            }
            AcceptanceSet::Oracle { gamma, reference } => entropic(*gamma, reference, x) <= 0.0,
        }
    }

    /// `inf{m : X − m·1 is accepted}`, by linear programming over the
    /// polyhedral description.
    pub fn recover(&self, x: &QsRandomVariable) -> Result<Rational> {
        match self {
            AcceptanceSet::HalfSpaces { charged, rows } => {
                // minimize m  s.t.  ⟨row, X⟩ − m·⟨row, 1⟩ ≤ bound
                let mut lp = LinearProgram::minimize(vec![Rational::one()]);
                lp.set_free(0);
                for (row, b) in rows {
                    let pairing: Rational =
                        row.iter().zip(charged).map(|(a, &i)| a * x.value(i)).sum();
                    let mass: Rational = row.iter().sum();
                    lp.push(Constraint::ge(vec![mass], pairing - b));
                }
                solve_min(&lp)
            }
            AcceptanceSet::MonotoneHull {
                charged,
                generators,
            } => {
                // minimize m  s.t.  m + Σ λ_k Z_k(a) ≥ X(a),  Σ λ_k = 1
                let k = generators.len();
                let mut obj = vec![Rational::zero(); k + 1];
                obj[0] = Rational::one();
                let mut lp = LinearProgram::minimize(obj);
                lp.set_free(0);
                let mut simplex = vec![Rational::one(); k + 1];
                simplex[0] = Rational::zero();
                lp.push(Constraint::eq(simplex, Rational::one()));
                for (pos, &i) in charged.iter().enumerate() {
                    let mut row = vec![Rational::one()];
                    row.extend(generators.iter().map(|g| g[pos].clone()));
                    lp.push(Constraint::ge(row, x.value(i).clone()));
                }
                solve_min(&lp)
            }
            AcceptanceSet::Oracle { .. } => Err(Error::InvalidRiskSpec(
                "entropic acceptance set has no exact description".into(),
            )),
        }
    }

    /// `sup{E_Q[X] : X accepted}` for a probability given on every atom.
    pub fn support_function(&self, q: &Measure) -> Result<Value> {
        match self {
            AcceptanceSet::HalfSpaces { charged, rows } => {
                let n = charged.len();
                let mut lp =
                    LinearProgram::maximize(charged.iter().map(|&i| q.weight(i).clone()).collect());
                for v in 0..n {
                    lp.set_free(v);
                }
                for (row, b) in rows {
                    lp.push(Constraint::le(row.clone(), b.clone()));
                }
                Ok(Value::Exact(solve_max(&lp)?))
            }
            AcceptanceSet::MonotoneHull {
                charged,
                generators,
            } => {
                let (n, k) = (charged.len(), generators.len());
                let mut obj: Vec<Rational> = charged.iter().map(|&i| q.weight(i).clone()).collect();
                obj.extend(std::iter::repeat(Rational::zero()).take(k));
                let mut lp = LinearProgram::maximize(obj);
                for v in 0..n {
                    lp.set_free(v);
                }
                let mut simplex = vec![Rational::zero(); n];
                simplex.extend(std::iter::repeat(Rational::one()).take(k));
                lp.push(Constraint::eq(simplex, Rational::one()));
                for pos in 0..n {
                    let mut row = vec![Rational::zero(); n + k];
                    row[pos] = Rational::one();
                    for (j, g) in generators.iter().enumerate() {
                        row[n + j] = -&g[pos];
                    }
                    lp.push(Constraint::le(row, Rational::zero()));
                }
                Ok(Value::Exact(solve_max(&lp)?))
            }
            AcceptanceSet::Oracle { gamma, reference } => {
                Ok(Value::Float(relative_entropy(q, reference) / gamma))
            }
        }
    }
}

fn solve_min(lp: &LinearProgram) -> Result<Rational> {
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => Ok(-value),
        LpOutcome::Infeasible => Err(Error::Infeasible),
        LpOutcome::Unbounded { .. } => {
            Err(Error::InvalidRiskSpec("risk is unbounded below".into()))
        }
    }
}

fn solve_max(lp: &LinearProgram) -> Result<Extended> {
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => Ok(Extended::Finite(value)),
        LpOutcome::Unbounded { .. } => Ok(Extended::PosInfinity),
        LpOutcome::Infeasible => Err(Error::Infeasible),
    }
}

/// `Σ q ln(q/p)` with `0 ln 0 = 0`; `+∞` if `q` charges a `p`-null atom.
pub fn relative_entropy(q: &Measure, p: &Measure) -> f64 {
    let mut s = 0.0;
    for (qw, pw) in q.weights().iter().zip(p.weights()) {
        if qw.is_zero() {
            continue;
        }
        if pw.is_zero() {
            return f64::INFINITY;
        }
        let (qf, pf) = (to_f64(qw), to_f64(pw));
        s += qf * (qf / pf).ln();
    }
    s
}

/// Dual penalty `α(Q) = sup{E_Q[X] : ρ(X) ≤ 0}`.
pub fn conjugate(spec: &RiskMeasureSpec, family: &MeasureFamily, q: &Measure) -> Result<Value> {
    same_space(family.space(), q.space())?;
    if !q.is_probability() {
        return Err(Error::InvalidMeasure {
            name: String::new(),
            reason: "dual point must be a probability".into(),
        });
    }
    if !family.dominates_measure(q)? {
        let i = (0..q.weights().len())
            .find(|&i| q.weight(i).is_positive() && family.is_polar_atom(i))
            .expect("some polar atom is charged");
        return Err(Error::NotDominated {
            atom: family.space().label(i).to_string(),
        });
    }
    acceptance_set(spec, family)?.support_function(q)
}

/// `q ∝ p·exp(γX)`, the maximizer of `E_Q[X] − H(Q|P)/γ`.
pub fn gibbs_measure(gamma: f64, reference: &Measure, x: &QsRandomVariable) -> Vec<f64> {
    let logs: Vec<Option<f64>> = reference
        .weights()
        .iter()
        .zip(x.values())
        .map(|(w, v)| w.is_positive().then(|| to_f64(w).ln() + gamma * to_f64(v)))
        .collect();
    let top = logs
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let un: Vec<f64> = logs
        .iter()
        .map(|l| l.map_or(0.0, |l| (l - top).exp()))
        .collect();
    let z: f64 = un.iter().sum();
    un.into_iter().map(|u| u / z).collect()
}

/// `E_q[X] − H(q|p)/γ` for a float-valued `q`.
pub fn entropic_dual_objective(
    gamma: f64,
    reference: &Measure,
    q: &[f64],
    x: &QsRandomVariable,
) -> f64 {
    let mut ev = 0.0;
    let mut kl = 0.0;
    for ((qi, pw), v) in q.iter().zip(reference.weights()).zip(x.values()) {
        if *qi == 0.0 {
            continue;
        }
        if pw.is_zero() {
            return f64::NEG_INFINITY;
        }
        ev += qi * to_f64(v);
        kl += qi * (qi / to_f64(pw)).ln();
    }
    ev - kl / gamma
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepresentationReport {
    /// `ρ(X) − max_Q (E_Q[X] − α(Q))` per probe, as `f64`.
    pub gaps: Vec<f64>,
    pub max_gap: f64,
    /// Exact maximum gap for polyhedral kinds; `None` means `+∞`.
    #[serde(skip)]
    pub max_gap_exact: Option<Option<Rational>>,
    pub weak_duality: bool,
    pub identification: &'static str,
}

pub const REPRESENTATION_IDENTIFICATION: &str = "finite atomic model: ca_c = sca_c is the whole \
dual, so the representations over ca_c, sca_c and the predual coincide";

pub fn verify_representation(
    spec: &RiskMeasureSpec,
    family: &MeasureFamily,
    probes: &[QsRandomVariable],
    dual_grid: &[Measure],
) -> Result<RepresentationReport> {
    let penalties = dual_grid
        .iter()
        .map(|q| conjugate(spec, family, q))
        .collect::<Result<Vec<_>>>()?;
    let mut gaps = Vec::with_capacity(probes.len());
    let mut exact_gaps: Vec<Option<Rational>> = Vec::new();
    for x in probes {
        let r = rho(spec, family, x)?;
        match &r {
            Value::Exact(Extended::Finite(r)) => {
                let mut best: Option<Rational> = None;
                for (q, a) in dual_grid.iter().zip(&penalties) {
                    if let Value::Exact(Extended::Finite(a)) = a {
                        let v = q.integrate(x)? - a;
                        if best.as_ref().map_or(true, |b| v > *b) {
                            best = Some(v);
                        }
                    }
                }
                let gap = best.map(|b| r - b);
                gaps.push(gap.as_ref().map_or(f64::INFINITY, to_f64));
                exact_gaps.push(gap);
            }
            _ => {
                let (gamma, reference) = match spec {
                    RiskMeasureSpec::Entropic { gamma, reference } => {
                        (to_f64(gamma), family.member(reference)?)
                    }
                    _ => unreachable!("only the entropic kind is inexact"),
                };
                let mut best = f64::NEG_INFINITY;
                for q in dual_grid {
                    let qf: Vec<f64> = q.weights().iter().map(to_f64).collect();
                    best = best.max(entropic_dual_objective(gamma, reference, &qf, x));
                }
                gaps.push(r.to_f64() - best);
            }
        }
    }
    let max_gap = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_gap_exact = spec.is_exact().then(|| {
        exact_gaps
            .iter()
            .try_fold(None::<Rational>, |acc, g| {
                g.as_ref()
                    .map(|g| Some(acc.map_or(g.clone(), |a| a.max(g.clone()))))
            })
            .flatten()
    });
    let weak_duality = match &max_gap_exact {
        Some(Some(_)) => exact_gaps.iter().flatten().all(|g| !g.is_negative()),
        Some(None) => true,
        None => gaps.iter().all(|g| *g >= -1e-9),
    };
    Ok(RepresentationReport {
        gaps,
        max_gap,
        max_gap_exact,
        weak_duality,
        identification: REPRESENTATION_IDENTIFICATION,
    })
}

/// Dirac masses on every charged atom.
pub fn dirac_grid(family: &MeasureFamily) -> Vec<Measure> {
    family
        .charged_atoms()
        .iter()
        .map(|i| {
            Measure::dirac(family.space().clone(), family.space().label(i)).expect("atom exists")
        })
        .collect()
}

pub fn member_grid(family: &MeasureFamily) -> Vec<Measure> {
    family.members().iter().map(|(_, m)| m.clone()).collect()
}

/// Probability vectors on the charged atoms with weights in `(1/den)·ℤ`.
pub fn simplex_grid(family: &MeasureFamily, den: u32) -> Vec<Measure> {
    let charged: Vec<usize> = family.charged_atoms().iter().collect();
    let n = charged.len();
    let mut out = Vec::new();
    let mut counts = vec![0u32; n];
    fn rec(k: usize, left: u32, counts: &mut Vec<u32>, emit: &mut dyn FnMut(&[u32])) {
        if k + 1 == counts.len() {
            counts[k] = left;
            emit(counts);
            return;
        }
        for c in 0..=left {
            counts[k] = c;
            rec(k + 1, left - c, counts, emit);
        }
    }
    let space = family.space().clone();
    rec(0, den, &mut counts, &mut |c| {
        let mut w = vec![Rational::zero(); space.len()];
        for (&i, &ci) in charged.iter().zip(c) {
            w[i] = Rational::new(ci.into(), den.into());
        }
        out.push(Measure::new(space.clone(), w).expect("nonnegative weights"));
    });
    out
}

/// Members, charged Diracs and the simplex grid with step `1/den`.
pub fn auto_dual_grid(family: &MeasureFamily, den: u32) -> Vec<Measure> {
    let mut grid = member_grid(family);
    for m in dirac_grid(family)
        .into_iter()
        .chain(simplex_grid(family, den))
    {
        if !grid.contains(&m) {
            grid.push(m);
        }
    }
    grid
}

/// Lower semicontinuity along a q.s.-monotone chain whose last element is
/// the limit: `ρ(last) ≤ ρ(Y)` for every element `Y` dominating `last`.
pub fn verify_fatou_monotone(
    spec: &RiskMeasureSpec,
    family: &MeasureFamily,
    chain: &[QsRandomVariable],
) -> Result<bool> {
    let Some(last) = chain.last() else {
        return Ok(true);
    };
    let mut direction = QsOrdering::Eq;
    for (k, w) in chain.windows(2).enumerate() {
        let step = qs_compare(family, &w[0], &w[1])?;
        match (direction, step) {
            (_, QsOrdering::Incomparable) => return Err(Error::NotMonotone { index: k + 1 }),
            (_, QsOrdering::Eq) => {}
            (QsOrdering::Eq, s) => direction = s,
            (d, s) if d != s => return Err(Error::NotMonotone { index: k + 1 }),
            _ => {}
        }
    }
    let limit = rho(spec, family, last)?;
    let tol = if spec.is_exact() { 0.0 } else { 1e-9 };
    for y in chain {
        if !last.qs_le(y, family)? {
            continue;
        }
        let v = rho(spec, family, y)?;
        let ok = match (limit.as_exact(), v.as_exact()) {
            (Some(a), Some(b)) => a <= b,
            _ => limit.to_f64() <= v.to_f64() + tol,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{SampleSpace, SpaceRef};
    use crate::rational::{int, rat};

    fn abc() -> SpaceRef {
        SampleSpace::new(["a", "b", "c"]).unwrap()
    }

    fn ab_family(s: &SpaceRef) -> MeasureFamily {
        MeasureFamily::new(
            s.clone(),
            vec![
                ("da".into(), Measure::dirac(s.clone(), "a").unwrap()),
                ("db".into(), Measure::dirac(s.clone(), "b").unwrap()),
            ],
        )
        .unwrap()
    }

    fn rv(s: &SpaceRef, v: &[i64]) -> QsRandomVariable {
        QsRandomVariable::new(s.clone(), v.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn worst_case_ignores_polar_atoms() {
        let s = abc();
        let f = ab_family(&s);
        let r = rho(&RiskMeasureSpec::WorstCase, &f, &rv(&s, &[3, 7, 100])).unwrap();
        assert_eq!(r.as_exact(), Some(&int(7)));
        let q = Measure::uniform(s.clone(), &["a", "b"]).unwrap();
        assert_eq!(
            conjugate(&RiskMeasureSpec::WorstCase, &f, &q).unwrap(),
            Value::exact(int(0))
        );
        let dc = Measure::dirac(s.clone(), "c").unwrap();
        assert_eq!(
            conjugate(&RiskMeasureSpec::WorstCase, &f, &dc)
                .unwrap_err()
                .name(),
            "NotDominated"
        );
    }

    #[test]
    fn zero_penalty_is_worst_expectation() {
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
        let spec = RiskMeasureSpec::ScenarioPenalty {
            penalties: vec![
                ("q1".into(), Extended::zero()),
                ("q2".into(), Extended::zero()),
            ],
        };
        let x = rv(&s, &[4, 0, 1]);
        assert_eq!(rho(&spec, &f, &x).unwrap().as_exact(), Some(&int(2)));
        let r = verify_representation(&spec, &f, &[x], &member_grid(&f)).unwrap();
        assert_eq!(r.max_gap_exact, Some(Some(int(0))));
    }

    #[test]
    fn cash_additivity_all_kinds() {
        let s = abc();
        let f = ab_family(&s);
        let x = rv(&s, &[1, -2, 5]);
        let five = int(5);
        let specs = [
            RiskMeasureSpec::WorstCase,
            RiskMeasureSpec::ScenarioPenalty {
                penalties: vec![
                    ("da".into(), Extended::Finite(rat(1, 2))),
                    ("db".into(), Extended::PosInfinity),
                ],
            },
            RiskMeasureSpec::AcceptanceGenerated {
                generators: vec![rv(&s, &[0, 0, 0]), rv(&s, &[1, -3, 0])],
            },
        ];
        for spec in &specs {
            let a = rho(spec, &f, &x).unwrap();
            let b = rho(spec, &f, &x.shift(&five)).unwrap();
            assert_eq!(
                b.as_exact().unwrap(),
                &(a.as_exact().unwrap() + &five),
                "{}",
                spec.kind()
            );
        }
        let ent = RiskMeasureSpec::Entropic {
            gamma: int(1),
            reference: "da".into(),
        };
        let a = rho(&ent, &f, &x).unwrap().to_f64();
        let b = rho(&ent, &f, &x.shift(&five)).unwrap().to_f64();
        assert!((b - a - 5.0).abs() < 1e-9);
    }

    #[test]
    fn entropic_conjugates() {
        let s = SampleSpace::new(["a", "b"]).unwrap();
        let p = Measure::uniform(s.clone(), &["a", "b"]).unwrap();
        let f = MeasureFamily::new(s.clone(), vec![("p".into(), p.clone())]).unwrap();
        let spec = RiskMeasureSpec::Entropic {
            gamma: int(1),
            reference: "p".into(),
        };
        assert_eq!(conjugate(&spec, &f, &p).unwrap().to_f64(), 0.0);
        let da = Measure::dirac(s.clone(), "a").unwrap();
        let v = conjugate(&spec, &f, &da).unwrap().to_f64();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn gibbs_attains_entropic_value() {
        let s = abc();
        let p = Measure::new(s.clone(), vec![rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap();
        let f = MeasureFamily::new(s.clone(), vec![("p".into(), p.clone())]).unwrap();
        let x = QsRandomVariable::new(s.clone(), vec![rat(1, 3), int(-1), rat(5, 2)]).unwrap();
        let spec = RiskMeasureSpec::Entropic {
            gamma: rat(3, 2),
            reference: "p".into(),
        };
        let r = rho(&spec, &f, &x).unwrap().to_f64();
        let q = gibbs_measure(1.5, &p, &x);
        assert!((entropic_dual_objective(1.5, &p, &q, &x) - r).abs() < 1e-12);

        let coarse = verify_representation(&spec, &f, &[x.clone()], &simplex_grid(&f, 16)).unwrap();
        let fine = verify_representation(&spec, &f, &[x], &simplex_grid(&f, 32)).unwrap();
        assert!(coarse.max_gap >= 0.0 && coarse.max_gap <= 1e-2);
        assert!(fine.max_gap < coarse.max_gap);
    }

    #[test]
    fn worst_case_dirac_grid_gap_is_zero() {
        let s = abc();
        let f = ab_family(&s);
        let probes = [rv(&s, &[3, 7, 100]), rv(&s, &[-1, -4, 0])];
        let r = verify_representation(&RiskMeasureSpec::WorstCase, &f, &probes, &dirac_grid(&f))
            .unwrap();
        assert_eq!(r.max_gap_exact, Some(Some(int(0))));
        assert!(r.weak_duality);
    }

    #[test]
    fn scenario_conjugate_is_convexified() {
        let s = SampleSpace::new(["a", "b"]).unwrap();
        let f = MeasureFamily::new(
            s.clone(),
            vec![
                ("da".into(), Measure::dirac(s.clone(), "a").unwrap()),
                ("db".into(), Measure::dirac(s.clone(), "b").unwrap()),
            ],
        )
        .unwrap();
        let spec = RiskMeasureSpec::ScenarioPenalty {
            penalties: vec![
                ("da".into(), Extended::Finite(int(1))),
                ("db".into(), Extended::Finite(int(3))),
            ],
        };
        let mid = Measure::uniform(s.clone(), &["a", "b"]).unwrap();
        assert_eq!(conjugate(&spec, &f, &mid).unwrap(), Value::exact(int(2)));
        let only_a = RiskMeasureSpec::ScenarioPenalty {
            penalties: vec![("da".into(), Extended::Finite(int(1)))],
        };
        assert_eq!(
            conjugate(&only_a, &f, &mid).unwrap(),
            Value::Exact(Extended::PosInfinity)
        );
    }

    #[test]
    fn acceptance_recovery_matches_rho() {
        let s = abc();
        let f = ab_family(&s);
        let spec = RiskMeasureSpec::ScenarioPenalty {
            penalties: vec![
                ("da".into(), Extended::Finite(int(2))),
                ("db".into(), Extended::Finite(int(-1))),
            ],
        };
        let x = rv(&s, &[5, 1, 0]);
        let a = acceptance_set(&spec, &f).unwrap();
        assert_eq!(
            &a.recover(&x).unwrap(),
            rho(&spec, &f, &x).unwrap().as_exact().unwrap()
        );
        assert!(a.accepts(&rv(&s, &[2, -1, 50])));
        assert!(!a.accepts(&rv(&s, &[3, -1, 0])));
    }

    #[test]
    fn spec_validation() {
        let s = abc();
        let f = ab_family(&s);
        let x = rv(&s, &[0, 0, 0]);
        let all_inf = RiskMeasureSpec::ScenarioPenalty {
            penalties: vec![("da".into(), Extended::PosInfinity)],
        };
        assert_eq!(
            rho(&all_inf, &f, &x).unwrap_err(),
            Error::AllPenaltiesInfinite
        );
        let missing = RiskMeasureSpec::Entropic {
            gamma: int(1),
            reference: "zz".into(),
        };
        assert_eq!(
            rho(&missing, &f, &x).unwrap_err(),
            Error::ReferenceMissing("zz".into())
        );
        let bad_gamma = RiskMeasureSpec::Entropic {
            gamma: int(0),
            reference: "da".into(),
        };
        assert_eq!(
            rho(&bad_gamma, &f, &x).unwrap_err().name(),
            "InvalidRiskSpec"
        );
    }

    #[test]
    fn fatou_examples() {
        let s = abc();
        let f = ab_family(&s);
        let x = rv(&s, &[1, 2, 0]);
        let chain: Vec<_> = (1..=8)
            .map(|n| x.shift(&rat(1, n)))
            .chain([x.clone()])
            .collect();
        assert!(verify_fatou_monotone(&RiskMeasureSpec::WorstCase, &f, &chain).unwrap());
        assert!(
            verify_fatou_monotone(&RiskMeasureSpec::WorstCase, &f, &[x.clone(), x.clone()])
                .unwrap()
        );
        let ia = QsRandomVariable::indicator(s.clone(), &s.event(["a"]).unwrap());
        let iab = QsRandomVariable::indicator(s.clone(), &s.event(["a", "b"]).unwrap());
        assert!(
            verify_fatou_monotone(&RiskMeasureSpec::WorstCase, &f, &[ia.clone(), iab.clone()])
                .unwrap()
        );
        let zig = [ia.clone(), iab, ia];
        assert_eq!(
            verify_fatou_monotone(&RiskMeasureSpec::WorstCase, &f, &zig).unwrap_err(),
            Error::NotMonotone { index: 2 }
        );
    }
}
