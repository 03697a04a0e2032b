//! One-sided polars and bipolars of finitely generated solid convex sets in
//! the positive cone, decided by exact linear programming.
//!
//! A [`SolidConvexSet`] stands for every nonnegative `Y` that is dominated
//! quasi-surely by some convex combination of its generators. For `µ ≥ 0`
//! the pairing `⟨·, µ⟩` is maximized over that set at a generator, so the
//! polar is cut out by one inequality per generator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{Constraint, LinearProgram, LpOutcome};
use crate::measure::{same_space, Event, MeasureFamily, QsRandomVariable, SpaceRef};
use crate::rational::{format_rational, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolidConvexSet {
    space: SpaceRef,
    generators: Vec<QsRandomVariable>,
}

impl SolidConvexSet {
    pub fn new(space: SpaceRef, generators: Vec<QsRandomVariable>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        for g in &generators {
            same_space(&space, g.space())?;
        }
        Ok(SolidConvexSet { space, generators })
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn generators(&self) -> &[QsRandomVariable] {
        &self.generators
    }

    fn check_nonnegative(&self, family: &MeasureFamily) -> Result<()> {
        same_space(family.space(), &self.space)?;
        let charged = family.charged_atoms();
        for (k, g) in self.generators.iter().enumerate() {
            if let Some(i) = charged.iter().find(|&i| g.value(i).is_negative()) {
                return Err(Error::NegativeGenerator {
                    generator: k,
                    atom: self.space.label(i).to_string(),
                });
            }
        }
        Ok(())
    }

    /// Direct membership: `X ≥ 0` and `X ⪯ Σ λ_k g_k` for some convex weights.
    pub fn contains(&self, family: &MeasureFamily, x: &QsRandomVariable) -> Result<bool> {
        self.check_nonnegative(family)?;
        same_space(family.space(), x.space())?;
        let charged: Vec<usize> = family.charged_atoms().iter().collect();
        if charged.iter().any(|&i| x.value(i).is_negative()) {
            return Ok(false);
        }
        let k = self.generators.len();
        let mut lp = LinearProgram::maximize(vec![Rational::zero(); k]);
        lp.push(Constraint::eq(vec![Rational::one(); k], Rational::one()));
        for &i in &charged {
            let row = self.generators.iter().map(|g| g.value(i).clone()).collect();
            lp.push(Constraint::ge(row, x.value(i).clone()));
        }
        Ok(!matches!(lp.solve(), LpOutcome::Infeasible))
    }
}

/// `{µ ≥ 0 : µ = 0 on polar atoms, ⟨g, µ⟩ ≤ 1 for every generator g}`.
///
/// Coordinates are indexed by the charged (non-polar) atoms only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarPolyhedron {
    space: SpaceRef,
    charged: Vec<usize>,
    rows: Vec<Vec<Rational>>,
}

impl PolarPolyhedron {
    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn charged_atoms(&self) -> &[usize] {
        &self.charged
    }

    /// Left-hand sides of the `≤ 1` rows, restricted to charged atoms.
    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Membership of a measure given by its weights on every atom.
    pub fn contains(&self, mu: &[Rational]) -> bool {
        if mu.len() != self.space.len() || mu.iter().any(Signed::is_negative) {
            return false;
        }
        let off: Vec<usize> = (0..mu.len())
            .filter(|i| !self.charged.contains(i))
            .collect();
        if off.iter().any(|&i| !mu[i].is_zero()) {
            return false;
        }
        self.rows.iter().all(|row| {
            let s: Rational = row
                .iter()
                .zip(&self.charged)
                .map(|(a, &i)| a * &mu[i])
                .sum();
            s <= Rational::one()
        })
    }

    fn lp(&self, objective: Vec<Rational>) -> LinearProgram {
        let mut lp = LinearProgram::maximize(objective);
        for row in &self.rows {
            lp.push(Constraint::le(row.clone(), Rational::one()));
        }
        lp
    }

    /// `sup{⟨x, µ⟩ : µ in the polyhedron}` with `x` given on charged atoms.
    fn maximize(&self, x: &[Rational]) -> LpOutcome {
        self.lp(x.to_vec()).solve()
    }

    /// Inclusion of constraint sets: every row of `other` is implied here.
    pub fn is_subset_of(&self, other: &PolarPolyhedron) -> Result<bool> {
        same_space(&self.space, &other.space)?;
        if self.charged != other.charged {
            return Err(Error::SpaceMismatch);
        }
        for row in &other.rows {
            match self.maximize(row) {
                LpOutcome::Optimal { value, .. } if value <= Rational::one() => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    fn lift(&self, v: &[Rational]) -> Vec<Rational> {
        let mut full = vec![Rational::zero(); self.space.len()];
        for (val, &i) in v.iter().zip(&self.charged) {
            full[i] = val.clone();
        }
        full
    }
}

pub fn one_sided_polar(family: &MeasureFamily, c: &SolidConvexSet) -> Result<PolarPolyhedron> {
    c.check_nonnegative(family)?;
    let charged: Vec<usize> = family.charged_atoms().iter().collect();
    let rows = c
        .generators
        .iter()
        .map(|g| charged.iter().map(|&i| g.value(i).clone()).collect())
        .collect();
    Ok(PolarPolyhedron {
        space: family.space().clone(),
        charged,
        rows,
    })
}

/// Witness returned with a bipolar membership decision. Measures are given
/// by their weights on every atom of the space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Maximizer of `⟨X, µ⟩` over the polar together with the optimum.
    Optimal { mu: Vec<Rational>, value: Rational },
    /// The polar contains `mu + t·direction` for all `t ≥ 0` and
    /// `⟨X, direction⟩ > 0`.
    Ray {
        mu: Vec<Rational>,
        direction: Vec<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub certificate: Certificate,
}

pub fn bipolar_membership(
    family: &MeasureFamily,
    c: &SolidConvexSet,
    x: &QsRandomVariable,
) -> Result<Membership> {
    let polar = one_sided_polar(family, c)?;
    membership_in(&polar, x)
}

fn membership_in(polar: &PolarPolyhedron, x: &QsRandomVariable) -> Result<Membership> {
    same_space(&polar.space, x.space())?;
    if let Some(&i) = polar.charged.iter().find(|&&i| x.value(i).is_negative()) {
        return Err(Error::NegativeInput {
            atom: polar.space.label(i).to_string(),
        });
    }
    let obj: Vec<Rational> = polar.charged.iter().map(|&i| x.value(i).clone()).collect();
    Ok(match polar.maximize(&obj) {
        LpOutcome::Optimal { value, x: mu } => Membership {
            member: value <= Rational::one(),
            certificate: Certificate::Optimal {
                mu: polar.lift(&mu),
                value,
            },
        },
        LpOutcome::Unbounded { x: mu, ray } => Membership {
            member: false,
            certificate: Certificate::Ray {
                mu: polar.lift(&mu),
                direction: polar.lift(&ray),
            },
        },
        LpOutcome::Infeasible => unreachable!("the zero measure is always in the polar"),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BsDisagreement {
    pub probe: String,
    pub values: Vec<String>,
    pub in_set: bool,
    pub in_bipolar: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BsReport {
    pub checked: usize,
    pub disagreements: Vec<BsDisagreement>,
    pub identification: &'static str,
}

pub const BS_IDENTIFICATION: &str = "finite atomic model: every dominated measure is supported \
(sca_c = ca_c), so the bipolar identities over sca_c and ca_c coincide";

/// Relative perturbation applied to generators when probing the boundary.
pub fn boundary_epsilon() -> Rational {
    rat(1, 4)
}

/// Test points derived from the generators: each generator, its scalings by
/// `1 ± ε`, and its truncations to zero at each charged atom.
pub fn derived_probes(
    family: &MeasureFamily,
    c: &SolidConvexSet,
) -> Vec<(String, QsRandomVariable)> {
    let eps = boundary_epsilon();
    let up = Rational::one() + &eps;
    let down = Rational::one() - &eps;
    let charged = family.charged_atoms();
    let mut out = Vec::new();
    for (k, g) in c.generators.iter().enumerate() {
        out.push((format!("generator[{k}]"), g.clone()));
        out.push((format!("generator[{k}]*(1+eps)"), g.scale(&up)));
        out.push((format!("generator[{k}]*(1-eps)"), g.scale(&down)));
        for i in charged.iter() {
            let cut = Event::from_positions([i]).complement(g.values().len());
            out.push((
                format!("generator[{k}] truncated at {}", family.space().label(i)),
                g.restrict(&cut),
            ));
        }
    }
    out
}

/// Compares direct membership in `C` with bipolar membership on the derived
/// probes and on the caller's probes. Probes are canonicalized first, so
/// values on polar atoms are irrelevant.
pub fn check_bs_equivalence(
    family: &MeasureFamily,
    c: &SolidConvexSet,
    probes: &[QsRandomVariable],
) -> Result<BsReport> {
    let polar = one_sided_polar(family, c)?;
    let mut all = derived_probes(family, c);
    all.extend(
        probes
            .iter()
            .enumerate()
            .map(|(k, p)| (format!("probe[{k}]"), p.clone())),
    );
    let mut disagreements = Vec::new();
    for (label, x) in &all {
        let x = x.canonical(family);
        let in_set = c.contains(family, &x)?;
        let in_bipolar = membership_in(&polar, &x)?.member;
        if in_set != in_bipolar {
            disagreements.push(BsDisagreement {
                probe: label.clone(),
                values: x.values().iter().map(format_rational).collect(),
                in_set,
                in_bipolar,
            });
        }
    }
    Ok(BsReport {
        checked: all.len(),
        disagreements,
        identification: BS_IDENTIFICATION,
    })
}

/// Largest number of charged atoms the grid oracle accepts.
pub const GRID_MAX_ATOMS: usize = 3;

/// Polar points on the lattice `(1/step)·ℤ^n ∩ [0, radius]^n`, enumerated
/// once and reused for many probes. Everything is scaled to integers.
pub struct PolarGrid {
    charged: Vec<usize>,
    step: i128,
    points: Vec<Vec<i128>>,
}

impl PolarGrid {
    pub fn new(family: &MeasureFamily, c: &SolidConvexSet, step: u32, radius: u32) -> Result<Self> {
        c.check_nonnegative(family)?;
        let charged: Vec<usize> = family.charged_atoms().iter().collect();
        if charged.len() > GRID_MAX_ATOMS {
            return Err(Error::InvalidSpace(format!(
                "grid oracle handles at most {GRID_MAX_ATOMS} charged atoms"
            )));
        }
        let step = step as i128;
        let top = step * radius as i128;
        let den = common_denominator(
            c.generators
                .iter()
                .flat_map(|g| charged.iter().map(|&i| g.value(i))),
        );
        let rows: Vec<Vec<i128>> = c
            .generators
            .iter()
            .map(|g| charged.iter().map(|&i| scaled(g.value(i), &den)).collect())
            .collect();
        let bound = step * to_i128(&den);
        let n = charged.len();
        let mut points = Vec::new();
        let mut m = vec![0i128; n];
        loop {
            if rows
                .iter()
                .all(|r| r.iter().zip(&m).map(|(a, b)| a * b).sum::<i128>() <= bound)
            {
                points.push(m.clone());
            }
            // Odometer increment.
            let mut k = 0;
            while k < n && m[k] == top {
                m[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
            m[k] += 1;
        }
        Ok(PolarGrid {
            charged,
            step,
            points,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Maximum of `⟨X, µ⟩` over the grid points.
    pub fn max_pairing(&self, x: &QsRandomVariable) -> Rational {
        let den = common_denominator(self.charged.iter().map(|&i| x.value(i)));
        let xs: Vec<i128> = self
            .charged
            .iter()
            .map(|&i| scaled(x.value(i), &den))
            .collect();
        let best = self
            .points
            .iter()
            .map(|m| xs.iter().zip(m).map(|(a, b)| a * b).sum::<i128>())
            .max()
            .unwrap_or(0);
        Rational::new(BigInt::from(best), BigInt::from(self.step) * den)
    }

    pub fn member(&self, x: &QsRandomVariable) -> bool {
        self.max_pairing(x) <= Rational::one()
    }
}

fn common_denominator<'a>(vals: impl Iterator<Item = &'a Rational>) -> BigInt {
    vals.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn scaled(v: &Rational, den: &BigInt) -> i128 {
    to_i128(&(v.numer() * (den / v.denom())))
}

fn to_i128(v: &BigInt) -> i128 {
    v.to_i128().expect("grid values fit in 128 bits")
}
