//! Finite atomic sample spaces, exact measures and quasi-sure random variables.
//!
//! Every sample space is a finite, ordered list of atom labels whose σ-algebra
//! is the power set. Measures carry one nonnegative rational weight per atom;
//! a [`MeasureFamily`] of probability measures induces the upper probability
//! `c(A) = max_P P(A)`, whose null events are the *polar* events. Random
//! variables are compared modulo polar atoms (the quasi-sure order).
//!
//! On an atomic space the setwise order on measures coincides with the
//! atomwise order of weights, so lattice operations are computed atomwise.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// Ordered list of distinct atom labels.
#[derive(Clone)]
pub struct SampleSpace {
    atoms: Vec<String>,
    index: HashMap<String, usize>,
}

pub type SpaceRef = Arc<SampleSpace>;

impl SampleSpace {
    pub fn new<S: Into<String>>(atoms: impl IntoIterator<Item = S>) -> Result<SpaceRef> {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(Error::InvalidSpace("no atoms".into()));
        }
        let mut index = HashMap::with_capacity(atoms.len());
        for (i, a) in atoms.iter().enumerate() {
            if index.insert(a.clone(), i).is_some() {
                return Err(Error::InvalidSpace(format!("duplicate atom `{a}`")));
            }
        }
        Ok(Arc::new(SampleSpace { atoms, index }))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn label(&self, i: usize) -> &str {
        &self.atoms[i]
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownAtom(label.to_string()))
    }

    /// Builds an event from atom labels.
    pub fn event<S: AsRef<str>>(&self, labels: impl IntoIterator<Item = S>) -> Result<Event> {
        labels
            .into_iter()
            .map(|l| self.position(l.as_ref()))
            .collect::<Result<BTreeSet<_>>>()
            .map(Event)
    }

    pub fn full_event(&self) -> Event {
        Event((0..self.len()).collect())
    }

    pub fn labels_of(&self, event: &Event) -> Vec<String> {
        event.iter().map(|i| self.atoms[i].clone()).collect()
    }
}

impl PartialEq for SampleSpace {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms
    }
}

impl Eq for SampleSpace {}

impl fmt::Debug for SampleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("SampleSpace").field(&self.atoms).finish()
    }
}

pub(crate) fn same_space(a: &SpaceRef, b: &SpaceRef) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// A set of atom positions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event(pub BTreeSet<usize>);

impl Event {
    pub fn empty() -> Self {
        Event(BTreeSet::new())
    }

    pub fn from_positions(it: impl IntoIterator<Item = usize>) -> Self {
        Event(it.into_iter().collect())
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &Event) -> Event {
        Event(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &Event) -> Event {
        Event(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &Event) -> Event {
        Event(self.0.difference(&other.0).copied().collect())
    }

    pub fn symmetric_difference(&self, other: &Event) -> Event {
        Event(self.0.symmetric_difference(&other.0).copied().collect())
    }

    pub fn complement(&self, n: usize) -> Event {
        Event((0..n).filter(|i| !self.0.contains(i)).collect())
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.0.is_subset(&other.0)
    }

    fn check(&self, space: &SampleSpace) -> Result<()> {
        match self.0.iter().find(|&&i| i >= space.len()) {
            Some(i) => Err(Error::UnknownAtom(format!("#{i}"))),
            None => Ok(()),
        }
    }
}

/// Nonnegative measure on a finite atomic space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    space: SpaceRef,
    weights: Vec<Rational>,
}

impl Measure {
    pub fn new(space: SpaceRef, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::InvalidMeasure {
                name: String::new(),
                reason: format!("{} weights for {} atoms", weights.len(), space.len()),
            });
        }
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::InvalidMeasure {
                name: String::new(),
                reason: format!("negative weight at `{}`", space.label(i)),
            });
        }
        Ok(Measure { space, weights })
    }

    /// Weights given for a subset of atoms; the rest are zero.
    pub fn from_pairs<S: AsRef<str>>(
        space: SpaceRef,
        pairs: impl IntoIterator<Item = (S, Rational)>,
    ) -> Result<Self> {
        let mut weights = vec![Rational::zero(); space.len()];
        for (label, w) in pairs {
            let i = space.position(label.as_ref())?;
            weights[i] = w;
        }
        Measure::new(space, weights)
    }

    pub fn zero(space: SpaceRef) -> Self {
        let n = space.len();
        Measure {
            space,
            weights: vec![Rational::zero(); n],
        }
    }

    pub fn dirac(space: SpaceRef, atom: &str) -> Result<Self> {
        let i = space.position(atom)?;
        let mut m = Measure::zero(space);
        m.weights[i] = Rational::one();
        Ok(m)
    }

    /// Uniform probability on the listed atoms.
    pub fn uniform<S: AsRef<str>>(space: SpaceRef, atoms: &[S]) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure {
                name: String::new(),
                reason: "uniform measure on an empty set".into(),
            });
        }
        let w = Rational::new(1.into(), (atoms.len() as i64).into());
        Measure::from_pairs(space, atoms.iter().map(|a| (a.as_ref(), w.clone())))
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    pub fn mass(&self, event: &Event) -> Rational {
        event.iter().map(|i| &self.weights[i]).sum()
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    pub fn is_probability(&self) -> bool {
        self.total().is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(Zero::is_zero)
    }

    /// Atoms with strictly positive weight.
    pub fn positivity_set(&self) -> Event {
        Event::from_positions(
            self.weights
                .iter()
                .enumerate()
                .filter(|(_, w)| w.is_positive())
                .map(|(i, _)| i),
        )
    }

    /// `µ(· ∩ event)`.
    pub fn restrict(&self, event: &Event) -> Measure {
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, w)| {
                if event.contains(i) {
                    w.clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Measure {
            space: self.space.clone(),
            weights,
        }
    }

    /// Rescales to total mass one; `None` for the zero measure.
    pub fn normalized(&self) -> Option<Measure> {
        let total = self.total();
        if total.is_zero() {
            return None;
        }
        Some(Measure {
            space: self.space.clone(),
            weights: self.weights.iter().map(|w| w / &total).collect(),
        })
    }

    pub fn scale(&self, factor: &Rational) -> Measure {
        Measure {
            space: self.space.clone(),
            weights: self.weights.iter().map(|w| w * factor).collect(),
        }
    }

    pub fn add(&self, other: &Measure) -> Result<Measure> {
        same_space(&self.space, &other.space)?;
        Ok(Measure {
            space: self.space.clone(),
            weights: self
                .weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `E_µ[X] = Σ µ(ω) X(ω)`.
    pub fn integrate(&self, x: &QsRandomVariable) -> Result<Rational> {
        same_space(&self.space, &x.space)?;
        Ok(self
            .weights
            .iter()
            .zip(&x.values)
            .filter(|(w, _)| !w.is_zero())
            .map(|(w, v)| w * v)
            .sum())
    }

    pub fn meet(&self, other: &Measure) -> Result<Measure> {
        measure_meet(self, other)
    }

    pub fn join(&self, other: &Measure) -> Result<Measure> {
        measure_join(self, other)
    }
}

/// Atomwise minimum (the lattice infimum on an atomic space).
pub fn measure_meet(mu: &Measure, nu: &Measure) -> Result<Measure> {
    same_space(&mu.space, &nu.space)?;
    Ok(Measure {
        space: mu.space.clone(),
        weights: mu
            .weights
            .iter()
            .zip(&nu.weights)
            .map(|(a, b)| a.min(b).clone())
            .collect(),
    })
}

/// Atomwise maximum.
pub fn measure_join(mu: &Measure, nu: &Measure) -> Result<Measure> {
    same_space(&mu.space, &nu.space)?;
    Ok(Measure {
        space: mu.space.clone(),
        weights: mu
            .weights
            .iter()
            .zip(&nu.weights)
            .map(|(a, b)| a.max(b).clone())
            .collect(),
    })
}

/// Signed measure stored as its Jordan decomposition `pos − neg`, with the
/// two parts never both positive on the same atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMeasure {
    pos: Measure,
    neg: Measure,
}

impl SignedMeasure {
    pub fn new(pos: Measure, neg: Measure) -> Result<Self> {
        same_space(&pos.space, &neg.space)?;
        for i in 0..pos.weights.len() {
            if pos.weights[i].is_positive() && neg.weights[i].is_positive() {
                return Err(Error::InvalidSignedPair(pos.space.label(i).to_string()));
            }
        }
        Ok(SignedMeasure { pos, neg })
    }

    /// Jordan decomposition of an atomwise signed density.
    pub fn from_density(space: SpaceRef, density: &[Rational]) -> Result<Self> {
        let pos = density
            .iter()
            .map(|d| d.max(&Rational::zero()).clone())
            .collect();
        let neg = density.iter().map(|d| (-d).max(Rational::zero())).collect();
        SignedMeasure::new(Measure::new(space.clone(), pos)?, Measure::new(space, neg)?)
    }

    pub fn positive_part(&self) -> &Measure {
        &self.pos
    }

    pub fn negative_part(&self) -> &Measure {
        &self.neg
    }

    pub fn density(&self) -> Vec<Rational> {
        self.pos
            .weights
            .iter()
            .zip(&self.neg.weights)
            .map(|(p, n)| p - n)
            .collect()
    }

    /// Total variation `|µ|(Ω)`.
    pub fn tv_norm(&self) -> Rational {
        self.pos.total() + self.neg.total()
    }

    pub fn meet(&self, other: &SignedMeasure) -> Result<SignedMeasure> {
        same_space(&self.pos.space, &other.pos.space)?;
        let d: Vec<Rational> = self
            .density()
            .into_iter()
            .zip(other.density())
            .map(|(a, b)| a.min(b))
            .collect();
        SignedMeasure::from_density(self.pos.space.clone(), &d)
    }

    pub fn join(&self, other: &SignedMeasure) -> Result<SignedMeasure> {
        same_space(&self.pos.space, &other.pos.space)?;
        let d: Vec<Rational> = self
            .density()
            .into_iter()
            .zip(other.density())
            .map(|(a, b)| a.max(b))
            .collect();
        SignedMeasure::from_density(self.pos.space.clone(), &d)
    }
}

pub fn tv_norm(mu: &SignedMeasure) -> Rational {
    mu.tv_norm()
}

/// Named, nonempty list of probability measures on one space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureFamily {
    space: SpaceRef,
    members: Vec<(String, Measure)>,
}

impl MeasureFamily {
    pub fn new(space: SpaceRef, members: Vec<(String, Measure)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let mut seen = HashSet::new();
        for (name, m) in &members {
            same_space(&space, &m.space)?;
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidMeasure {
                    name: name.clone(),
                    reason: "duplicate member name".into(),
                });
            }
            if !m.is_probability() {
                return Err(Error::InvalidMeasure {
                    name: name.clone(),
                    reason: format!("total mass {} is not 1", format_rational(&m.total())),
                });
            }
        }
        Ok(MeasureFamily { space, members })
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn members(&self) -> &[(String, Measure)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.members.iter().map(|(n, _)| n.as_str())
    }

    pub fn member(&self, name: &str) -> Result<&Measure> {
        self.members
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::UnknownMember(name.to_string()))
    }

    /// `c(A) = max_P P(A)`.
    pub fn upper_prob(&self, event: &Event) -> Result<Rational> {
        event.check(&self.space)?;
        Ok(self
            .members
            .iter()
            .map(|(_, m)| m.mass(event))
            .max()
            .unwrap_or_else(Rational::zero))
    }

    pub fn is_polar(&self, event: &Event) -> Result<bool> {
        event.check(&self.space)?;
        Ok(event.iter().all(|i| self.is_polar_atom(i)))
    }

    pub fn is_polar_atom(&self, i: usize) -> bool {
        self.members.iter().all(|(_, m)| m.weights[i].is_zero())
    }

    pub fn polar_atoms(&self) -> Event {
        Event::from_positions((0..self.space.len()).filter(|&i| self.is_polar_atom(i)))
    }

    /// Atoms charged by at least one member.
    pub fn charged_atoms(&self) -> Event {
        Event::from_positions((0..self.space.len()).filter(|&i| !self.is_polar_atom(i)))
    }

    /// Atomwise sum of the members; its null set is exactly the polar set.
    pub fn sum_measure(&self) -> Measure {
        let mut acc = Measure::zero(self.space.clone());
        for (_, m) in &self.members {
            for (a, w) in acc.weights.iter_mut().zip(&m.weights) {
                *a += w;
            }
        }
        acc
    }

    /// `true` when `mu` puts no mass on polar atoms.
    pub fn dominates_measure(&self, mu: &Measure) -> Result<bool> {
        same_space(&self.space, &mu.space)?;
        Ok(mu
            .weights
            .iter()
            .enumerate()
            .all(|(i, w)| w.is_zero() || !self.is_polar_atom(i)))
    }
}

pub fn upper_prob(family: &MeasureFamily, event: &Event) -> Result<Rational> {
    family.upper_prob(event)
}

pub fn is_polar(family: &MeasureFamily, event: &Event) -> Result<bool> {
    family.is_polar(event)
}

pub fn sum_measure(family: &MeasureFamily) -> Measure {
    family.sum_measure()
}

/// `S ≪ T`: every `T`-polar event is `S`-polar.
pub fn dominates(s: &MeasureFamily, t: &MeasureFamily) -> Result<bool> {
    same_space(&s.space, &t.space)?;
    Ok(s.charged_atoms().is_subset(&t.charged_atoms()))
}

/// Mutual domination: same polar events.
pub fn equivalent(s: &MeasureFamily, t: &MeasureFamily) -> Result<bool> {
    Ok(dominates(s, t)? && dominates(t, s)?)
}

/// Rational-valued random variable on a finite space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QsRandomVariable {
    space: SpaceRef,
    values: Vec<Rational>,
}

impl QsRandomVariable {
    pub fn new(space: SpaceRef, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::Parse(format!(
                "{} values for {} atoms",
                values.len(),
                space.len()
            )));
        }
        Ok(QsRandomVariable { space, values })
    }

    pub fn from_pairs<S: AsRef<str>>(
        space: SpaceRef,
        pairs: impl IntoIterator<Item = (S, Rational)>,
    ) -> Result<Self> {
        let mut values = vec![Rational::zero(); space.len()];
        for (label, v) in pairs {
            values[space.position(label.as_ref())?] = v;
        }
        Ok(QsRandomVariable { space, values })
    }

    pub fn constant(space: SpaceRef, c: Rational) -> Self {
        let n = space.len();
        QsRandomVariable {
            space,
            values: vec![c; n],
        }
    }

    pub fn zero(space: SpaceRef) -> Self {
        QsRandomVariable::constant(space, Rational::zero())
    }

    pub fn indicator(space: SpaceRef, event: &Event) -> Self {
        let values = (0..space.len())
            .map(|i| {
                if event.contains(i) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        QsRandomVariable { space, values }
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn map(&self, f: impl Fn(usize, &Rational) -> Rational) -> Self {
        QsRandomVariable {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| f(i, v))
                .collect(),
        }
    }

    pub fn shift(&self, c: &Rational) -> Self {
        self.map(|_, v| v + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|_, v| v * c)
    }

    pub fn combine(
        &self,
        other: &Self,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Self> {
        same_space(&self.space, &other.space)?;
        Ok(QsRandomVariable {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    /// Pointwise product with the indicator of `event`.
    pub fn restrict(&self, event: &Event) -> Self {
        self.map(|i, v| {
            if event.contains(i) {
                v.clone()
            } else {
                Rational::zero()
            }
        })
    }

    /// Canonical representative: zero on the polar atoms of `family`.
    pub fn canonical(&self, family: &MeasureFamily) -> Self {
        self.map(|i, v| {
            if family.is_polar_atom(i) {
                Rational::zero()
            } else {
                v.clone()
            }
        })
    }

    pub fn qs_eq(&self, other: &Self, family: &MeasureFamily) -> Result<bool> {
        Ok(qs_compare(family, self, other)? == QsOrdering::Eq)
    }

    /// `self ⪯ other` quasi-surely.
    pub fn qs_le(&self, other: &Self, family: &MeasureFamily) -> Result<bool> {
        Ok(matches!(
            qs_compare(family, self, other)?,
            QsOrdering::Leq | QsOrdering::Eq
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QsOrdering {
    /// `X ⪯ Y` and not `Y ⪯ X`.
    Leq,
    /// `Y ⪯ X` and not `X ⪯ Y`.
    Geq,
    Eq,
    Incomparable,
}

impl QsOrdering {
    pub fn as_str(self) -> &'static str {
        match self {
            QsOrdering::Leq => "leq",
            QsOrdering::Geq => "geq",
            QsOrdering::Eq => "eq",
            QsOrdering::Incomparable => "incomparable",
        }
    }
}

/// Classifies `(X, Y)` under the quasi-sure order of `family`.
pub fn qs_compare(
    family: &MeasureFamily,
    x: &QsRandomVariable,
    y: &QsRandomVariable,
) -> Result<QsOrdering> {
    same_space(&family.space, &x.space)?;
    same_space(&family.space, &y.space)?;
    let (mut le, mut ge) = (true, true);
    for i in family.charged_atoms().iter() {
        match x.values[i].cmp(&y.values[i]) {
            std::cmp::Ordering::Less => ge = false,
            std::cmp::Ordering::Greater => le = false,
            std::cmp::Ordering::Equal => {}
        }
    }
    Ok(match (le, ge) {
        (true, true) => QsOrdering::Eq,
        (true, false) => QsOrdering::Leq,
        (false, true) => QsOrdering::Geq,
        (false, false) => QsOrdering::Incomparable,
    })
}

/// Innovation model: known states `s_o` with full-support marginal `pi`,
/// newly explored states `s_n`; family `{π ⊗ δ_s : s ∈ s_n}` on `s_o × s_n`.
pub fn build_innovation_model(
    s_o: &SpaceRef,
    s_n: &SpaceRef,
    pi: &Measure,
) -> Result<(SpaceRef, MeasureFamily)> {
    same_space(s_o, &pi.space)?;
    if !pi.is_probability() {
        return Err(Error::InvalidMeasure {
            name: "pi".into(),
            reason: "first marginal must be a probability".into(),
        });
    }
    if let Some(i) = pi.weights.iter().position(Zero::is_zero) {
        return Err(Error::DegeneratePi(s_o.label(i).to_string()));
    }
    let labels = s_o
        .atoms()
        .iter()
        .flat_map(|x| s_n.atoms().iter().map(move |u| pair_label(x, u)));
    let space = SampleSpace::new(labels)?;
    let n = s_n.len();
    let members = (0..n)
        .map(|j| {
            let mut weights = vec![Rational::zero(); space.len()];
            for i in 0..s_o.len() {
                weights[i * n + j] = pi.weights[i].clone();
            }
            let m = Measure::new(space.clone(), weights)?;
            Ok((format!("pi x dirac({})", s_n.label(j)), m))
        })
        .collect::<Result<Vec<_>>>()?;
    let family = MeasureFamily::new(space.clone(), members)?;
    Ok((space, family))
}

/// Typical-paths model: Dirac masses on the prediction set `xi`.
pub fn build_typical_paths_model(space: &SpaceRef, xi: &Event) -> Result<MeasureFamily> {
    xi.check(space)?;
    if xi.is_empty() {
        return Err(Error::EmptyPredictionSet);
    }
    let members = xi
        .iter()
        .map(|i| {
            let label = space.label(i);
            Ok((
                format!("dirac({label})"),
                Measure::dirac(space.clone(), label)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    MeasureFamily::new(space.clone(), members)
}

/// Parameter-enlarged product model on `Ω × Θ` with members
/// `P^θ(B) = P({ω : (ω, θ) ∈ B})`.
pub fn build_product_model(base: &Measure, theta: &SpaceRef) -> Result<(SpaceRef, MeasureFamily)> {
    if !base.is_probability() {
        return Err(Error::InvalidMeasure {
            name: "base".into(),
            reason: "base measure must be a probability".into(),
        });
    }
    let omega = base.space.clone();
    let labels = omega
        .atoms()
        .iter()
        .flat_map(|w| theta.atoms().iter().map(move |t| pair_label(w, t)));
    let space = SampleSpace::new(labels)?;
    let k = theta.len();
    let members = (0..k)
        .map(|t| {
            let mut weights = vec![Rational::zero(); space.len()];
            for i in 0..omega.len() {
                weights[i * k + t] = base.weights[i].clone();
            }
            Ok((
                format!("theta={}", theta.label(t)),
                Measure::new(space.clone(), weights)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let family = MeasureFamily::new(space.clone(), members)?;
    Ok((space, family))
}

fn pair_label(a: &str, b: &str) -> String {
    format!("({a},{b})")
}
