//! Rule engine mapping model descriptors to structural verdicts.
//!
//! A descriptor is either an explicit finite family, for which every flag is
//! derived by computation, or a symbolic description of an infinite family
//! whose structural properties are asserted by the caller. Rules are applied
//! to a fixpoint; a rule that contradicts an already decided flag raises
//! [`Error::InconsistentFlags`].

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{equivalent, MeasureFamily};
use crate::support::{disjoint_supported_alternative, order_support, verify_support};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Undecidable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Undecidable => "undecidable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flag {
    #[serde(rename = "dominated")]
    Dominated,
    #[serde(rename = "super_dedekind")]
    SuperDedekind,
    #[serde(rename = "class_S")]
    ClassS,
    #[serde(rename = "sca_equals_ca")]
    ScaEqualsCa,
    #[serde(rename = "dedekind_complete")]
    DedekindComplete,
    #[serde(rename = "kreps_yan")]
    KrepsYan,
    #[serde(rename = "bipolar_BS")]
    BipolarBs,
    #[serde(rename = "aggregation_AG")]
    AggregationAg,
    #[serde(rename = "fatou_F1_iff_F2")]
    FatouF1IffF2,
    #[serde(rename = "L_infty_is_dual")]
    LInftyIsDual,
}

impl Flag {
    pub const ALL: [Flag; 10] = [
        Flag::Dominated,
        Flag::SuperDedekind,
        Flag::ClassS,
        Flag::ScaEqualsCa,
        Flag::DedekindComplete,
        Flag::KrepsYan,
        Flag::BipolarBs,
        Flag::AggregationAg,
        Flag::FatouF1IffF2,
        Flag::LInftyIsDual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flag::Dominated => "dominated",
            Flag::SuperDedekind => "super_dedekind",
            Flag::ClassS => "class_S",
            Flag::ScaEqualsCa => "sca_equals_ca",
            Flag::DedekindComplete => "dedekind_complete",
            Flag::KrepsYan => "kreps_yan",
            Flag::BipolarBs => "bipolar_BS",
            Flag::AggregationAg => "aggregation_AG",
            Flag::FatouF1IffF2 => "fatou_F1_iff_F2",
            Flag::LInftyIsDual => "L_infty_is_dual",
        }
    }

    pub fn parse(s: &str) -> Option<Flag> {
        Flag::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::R5 => "R5",
            Rule::R6 => "R6",
            Rule::R7 => "R7",
            Rule::R8 => "R8",
            Rule::R9 => "R9",
        }
    }

    pub fn parse(s: &str) -> Option<Rule> {
        RULES.iter().map(|r| r.0).find(|r| r.id() == s)
    }

    pub fn name(self) -> &'static str {
        self.entry().1
    }

    /// Statement of the result the rule applies.
    pub fn citation(self) -> &'static str {
        self.entry().2
    }

    fn entry(self) -> &'static (Rule, &'static str, &'static str) {
        RULES
            .iter()
            .find(|r| r.0 == self)
            .expect("every rule is listed")
    }
}

static RULES: [(Rule, &str, &str); 9] = [
    (
        Rule::R1,
        "dominating measure",
        "dominated <=> L-infinity super Dedekind complete <=> some linear functional on \
         L-infinity is strictly positive; every ca_c measure of a dominated family is supported",
    ),
    (Rule::R2, "Kreps-Yan", "Kreps-Yan property <=> dominated"),
    (
        Rule::R3,
        "supported alternative",
        "class (S) <=> an equivalent family of supported probability measures exists",
    ),
    (
        Rule::R4,
        "bipolar theorem",
        "class (S) <=> for every convex solid set the order-closed and bipolar (sca_c) forms agree",
    ),
    (
        Rule::R5,
        "perfectness and aggregation",
        "class (S) and Dedekind completeness <=> L-infinity = (sca_c)* <=> every consistent \
         family aggregates",
    ),
    (
        Rule::R6,
        "Fatou duality",
        "given Dedekind completeness: Fatou <=> ca_c dual representation for all convex risk \
         measures <=> (ca_c)* = L-infinity",
    ),
    (
        Rule::R7,
        "perfect disjoint subfamily",
        "a perfect set of supported measures with pairwise disjoint supports yields a measure in \
         ca_c outside sca_c",
    ),
    (
        Rule::R8,
        "set-theoretic limit",
        "no ZFC construction gives Dedekind complete L-infinity outside class (S); the converse \
         direction depends on Banach's measure problem",
    ),
    (
        Rule::R9,
        "product structure",
        "L-infinity lattice isomorphic to a product over a disjoint supported alternative is \
         Dedekind complete",
    ),
];

pub const R8_ANNOTATION: &str = "not refutable in ZFC given Dedekind completeness";
const ASSERTED_CITATION: &str = "caller assertion";
const UNDETERMINED_CITATION: &str = "not determined by the descriptor";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagValue {
    pub value: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<Rule>,
    pub citation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation: Option<String>,
}

impl FlagValue {
    fn by_rule(value: Verdict, rule: Rule) -> Self {
        FlagValue {
            value,
            rule: Some(rule),
            citation: rule.citation().to_string(),
            annotation: None,
        }
    }

    pub fn asserted(value: Verdict) -> Self {
        FlagValue {
            value,
            rule: None,
            citation: ASSERTED_CITATION.to_string(),
            annotation: None,
        }
    }

    fn undetermined() -> Self {
        FlagValue {
            value: Verdict::Undecidable,
            rule: None,
            citation: UNDETERMINED_CITATION.to_string(),
            annotation: None,
        }
    }

    /// Carries information; a rule-less undecidable value does not.
    fn is_informative(&self) -> bool {
        self.value != Verdict::Undecidable || self.rule.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cardinality {
    Finite(u64),
    CountablyInfinite,
    Continuum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicDescriptor {
    pub cardinality: Cardinality,
    pub pairwise_disjoint_supports: bool,
    pub all_members_supported: bool,
    pub admits_perfect_disjoint_subfamily: bool,
    pub product_structure: bool,
    #[serde(default = "default_true")]
    pub within_continuum: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hahn_property: Option<bool>,
    #[serde(default)]
    pub notes: String,
    /// Flags fixed in advance; rules must agree with them.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub asserted: BTreeMap<Flag, FlagValue>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelDescriptor {
    Explicit(MeasureFamily),
    Symbolic(SymbolicDescriptor),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub descriptor: DescriptorEcho,
    pub flags: BTreeMap<Flag, FlagValue>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

/// Inputs echoed into the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DescriptorEcho {
    Explicit { atoms: usize, members: usize },
    Symbolic(SymbolicDescriptor),
}

impl ClassificationReport {
    pub fn verdict(&self, flag: Flag) -> Verdict {
        self.flags[&flag].value
    }
}

struct State {
    flags: BTreeMap<Flag, FlagValue>,
}

impl State {
    fn get(&self, f: Flag) -> Option<Verdict> {
        self.flags.get(&f).map(|v| v.value)
    }

    /// Records a derived value. Returns whether anything changed.
    fn set(&mut self, f: Flag, value: FlagValue) -> Result<bool> {
        match self.flags.get(&f) {
            None => {
                self.flags.insert(f, value);
                Ok(true)
            }
            Some(old) if old.value == value.value => Ok(false),
            Some(old) => Err(Error::InconsistentFlags(format!(
                "{} is {} ({}) but {} gives {}",
                f.name(),
                old.value.as_str(),
                old.rule.map_or("asserted", Rule::id),
                value.rule.map_or("assertion", Rule::id),
                value.value.as_str(),
            ))),
        }
    }

    fn derive(&mut self, f: Flag, v: Verdict, rule: Rule) -> Result<bool> {
        self.set(f, FlagValue::by_rule(v, rule))
    }

    /// Three-valued conjunction of the inputs, only when determined.
    fn conjunction(&self, inputs: &[Flag]) -> Option<Verdict> {
        let vals: Vec<Option<Verdict>> = inputs.iter().map(|&f| self.get(f)).collect();
        if vals.contains(&Some(Verdict::No)) {
            Some(Verdict::No)
        } else if vals.iter().all(|v| *v == Some(Verdict::Yes)) {
            Some(Verdict::Yes)
        } else if vals.iter().all(Option::is_some) {
            Some(Verdict::Undecidable)
        } else {
            None
        }
    }

    fn propagate(&mut self) -> Result<()> {
        use Flag::*;
        use Verdict::{No, Yes};
        loop {
            let mut changed = false;
            // Dominated and super Dedekind completeness are equivalent.
            for (a, b) in [(Dominated, SuperDedekind), (SuperDedekind, Dominated)] {
                if let Some(v @ (Yes | No)) = self.get(a) {
                    changed |= self.derive(b, v, Rule::R1)?;
                }
            }
            for (a, b) in [(Dominated, KrepsYan), (KrepsYan, Dominated)] {
                if let Some(v @ (Yes | No)) = self.get(a) {
                    changed |= self.derive(b, v, Rule::R2)?;
                }
            }
            if self.get(Dominated) == Some(Yes) {
                changed |= self.derive(ScaEqualsCa, Yes, Rule::R1)?;
                changed |= self.derive(ClassS, Yes, Rule::R1)?;
                changed |= self.derive(DedekindComplete, Yes, Rule::R1)?;
            }
            if self.get(ScaEqualsCa) == Some(No) || self.get(ClassS) == Some(No) {
                changed |= self.derive(Dominated, No, Rule::R1)?;
            }
            for (a, b) in [(ClassS, BipolarBs), (BipolarBs, ClassS)] {
                if let Some(v @ (Yes | No)) = self.get(a) {
                    changed |= self.derive(b, v, Rule::R4)?;
                }
            }
            for target in [AggregationAg, LInftyIsDual] {
                if let Some(v) = self.conjunction(&[ClassS, DedekindComplete]) {
                    changed |= self.derive(target, v, Rule::R5)?;
                }
                if self.get(target) == Some(Yes) {
                    changed |= self.derive(ClassS, Yes, Rule::R5)?;
                    changed |= self.derive(DedekindComplete, Yes, Rule::R5)?;
                }
            }
            if let Some(v) = self.conjunction(&[ClassS, DedekindComplete, ScaEqualsCa]) {
                changed |= self.derive(FatouF1IffF2, v, Rule::R6)?;
            }
            if !changed {
                return Ok(());
            }
        }
    }
}

pub fn classify(descriptor: &ModelDescriptor) -> Result<ClassificationReport> {
    let mut st = State {
        flags: BTreeMap::new(),
    };
    let (echo, notes) = match descriptor {
        ModelDescriptor::Explicit(family) => {
            explicit_facts(&mut st, family)?;
            (
                DescriptorEcho::Explicit {
                    atoms: family.space().len(),
                    members: family.len(),
                },
                String::new(),
            )
        }
        ModelDescriptor::Symbolic(d) => {
            symbolic_facts(&mut st, d)?;
            (DescriptorEcho::Symbolic(d.clone()), d.notes.clone())
        }
    };
    st.propagate()?;
    if st.get(Flag::DedekindComplete) == Some(Verdict::Yes) && st.get(Flag::ClassS).is_none() {
        let mut v = FlagValue::by_rule(Verdict::Undecidable, Rule::R8);
        v.annotation = Some(R8_ANNOTATION.to_string());
        st.set(Flag::ClassS, v)?;
        st.propagate()?;
    }
    for f in Flag::ALL {
        st.flags.entry(f).or_insert_with(FlagValue::undetermined);
    }
    Ok(ClassificationReport {
        preset: None,
        descriptor: echo,
        flags: st.flags,
        notes,
    })
}

/// Finite families: a dominating measure is the sum of the members and
/// the exhaustion construction yields a supported alternative. Both are
/// computed rather than assumed.
fn explicit_facts(st: &mut State, family: &MeasureFamily) -> Result<()> {
    let sum = family.sum_measure();
    let dominated =
        (0..family.space().len()).all(|i| sum.weight(i).is_zero() == family.is_polar_atom(i));
    let verdict = |b: bool| if b { Verdict::Yes } else { Verdict::No };
    st.derive(Flag::Dominated, verdict(dominated), Rule::R1)?;
    let alt = disjoint_supported_alternative(family)?;
    let mut supported = equivalent(family, &alt.family)?;
    for (name, q) in alt.family.members() {
        let s = order_support(&alt.family, q)?;
        supported &= verify_support(&alt.family, q, &s)?.passed && alt.support_of(name)? == &s;
    }
    st.derive(Flag::ClassS, verdict(supported), Rule::R3)?;
    Ok(())
}

fn symbolic_facts(st: &mut State, d: &SymbolicDescriptor) -> Result<()> {
    if d.pairwise_disjoint_supports && !d.all_members_supported {
        return Err(Error::InconsistentFlags(
            "pairwise_disjoint_supports requires all_members_supported".into(),
        ));
    }
    let countable = matches!(
        d.cardinality,
        Cardinality::Finite(_) | Cardinality::CountablyInfinite
    );
    if d.admits_perfect_disjoint_subfamily && countable {
        return Err(Error::InconsistentFlags(
            "a perfect subfamily is uncountable but the family is countable".into(),
        ));
    }
    if d.admits_perfect_disjoint_subfamily && !d.all_members_supported {
        return Err(Error::InconsistentFlags(
            "a perfect disjoint subfamily of supported members needs all_members_supported".into(),
        ));
    }
    if matches!(d.cardinality, Cardinality::Finite(0)) {
        return Err(Error::EmptyFamily);
    }
    for (&f, v) in &d.asserted {
        if v.is_informative() {
            st.set(f, v.clone())?;
        }
    }
    if countable {
        st.derive(Flag::Dominated, Verdict::Yes, Rule::R1)?;
    }
    if d.cardinality == Cardinality::Continuum && d.pairwise_disjoint_supports {
        st.derive(Flag::Dominated, Verdict::No, Rule::R1)?;
    }
    if d.all_members_supported {
        st.derive(Flag::ClassS, Verdict::Yes, Rule::R3)?;
    }
    if d.admits_perfect_disjoint_subfamily {
        st.derive(Flag::ScaEqualsCa, Verdict::No, Rule::R7)?;
    }
    if d.product_structure {
        st.derive(Flag::DedekindComplete, Verdict::Yes, Rule::R9)?;
    }
    Ok(())
}

/// Checks the implications every report must satisfy.
pub fn check_implications(report: &ClassificationReport) -> std::result::Result<(), String> {
    use Flag::*;
    use Verdict::*;
    let v = |f| report.verdict(f);
    if v(Dominated) == Yes && v(SuperDedekind) != Yes {
        return Err("dominated without super Dedekind completeness".into());
    }
    if v(SuperDedekind) == Yes && v(ClassS) != Yes {
        return Err("super Dedekind complete without class (S)".into());
    }
    let decided = |x: Verdict| x != Undecidable;
    if decided(v(ClassS)) && decided(v(DedekindComplete)) {
        let both = v(ClassS) == Yes && v(DedekindComplete) == Yes;
        if (v(AggregationAg) == Yes) != both || !decided(v(AggregationAg)) {
            return Err("aggregation differs from class (S) and Dedekind completeness".into());
        }
    }
    if decided(v(Dominated)) && v(KrepsYan) != v(Dominated) {
        return Err("Kreps-Yan differs from domination".into());
    }
    for (f, fv) in &report.flags {
        if fv.value != Undecidable && fv.rule.is_none() && fv.citation != ASSERTED_CITATION {
            return Err(format!("{} is decided without a rule", f.name()));
        }
    }
    Ok(())
}

pub const PRESETS: [&str; 7] = [
    "dominated_singleton",
    "dirac_unit_interval",
    "volatility_band",
    "product_theta",
    "innovation",
    "typical_paths",
    "robust_binomial",
];

pub fn preset(name: &str) -> Result<SymbolicDescriptor> {
    let sym =
        |cardinality, disjoint, supported, perfect, product, notes: &str| SymbolicDescriptor {
            cardinality,
            pairwise_disjoint_supports: disjoint,
            all_members_supported: supported,
            admits_perfect_disjoint_subfamily: perfect,
            product_structure: product,
            within_continuum: true,
            hahn_property: None,
            notes: notes.to_string(),
            asserted: BTreeMap::new(),
        };
    use Cardinality::*;
    Ok(match name {
        "dominated_singleton" => sym(Finite(1), true, true, false, true, "a single probability measure"),
        "dirac_unit_interval" => sym(
            Continuum,
            true,
            true,
            true,
            true,
            "all Dirac measures on [0,1]; Lebesgue measure is dominated by the family but not supported",
        ),
        "volatility_band" => sym(
            Continuum,
            true,
            true,
            true,
            false,
            "constant-volatility Wiener measures for a volatility band; a non-atomic mixture over \
             the band is a ca_c functional that is not order (semi)continuous",
        ),
        "product_theta" => sym(
            Continuum,
            true,
            true,
            true,
            true,
            "parameter-enlarged product space with one slice per parameter value",
        ),
        "innovation" => sym(
            Continuum,
            true,
            true,
            true,
            true,
            "known-state marginal combined with Dirac masses on a continuum of new states",
        ),
        "typical_paths" => sym(
            Continuum,
            true,
            true,
            true,
            true,
            "Dirac masses on an uncountable prediction set",
        ),
        "robust_binomial" => {
            let mut d = sym(
                Continuum,
                false,
                true,
                false,
                false,
                "kernel-wise product measures of binomial laws form a supported alternative of \
                 the convexified family; nondegenerate multiplier boxes give uncountably many \
                 mutually singular laws",
            );
            d.asserted.insert(Flag::Dominated, FlagValue::by_rule(Verdict::No, Rule::R1));
            d
        }
        other => return Err(Error::UnknownPreset(other.to_string())),
    })
}

pub fn classify_preset(name: &str) -> Result<ClassificationReport> {
    let mut r = classify(&ModelDescriptor::Symbolic(preset(name)?))?;
    r.preset = Some(name.to_string());
    Ok(r)
}

/// Human-readable derivation: one line per flag with rule and citation.
pub fn explain(report: &ClassificationReport) -> String {
    let mut out = String::new();
    if let Some(p) = &report.preset {
        let _ = writeln!(out, "preset: {p}");
    }
    for (flag, v) in &report.flags {
        let _ = write!(out, "{:<18} {:<11}", flag.name(), v.value.as_str());
        match v.rule {
            Some(r) => {
                let _ = write!(out, " [{} {}] {}", r.id(), r.name(), v.citation);
            }
            None => {
                let _ = write!(out, " [-] {}", v.citation);
            }
        }
        if let Some(a) = &v.annotation {
            let _ = write!(out, " ({a})");
        }
        out.push('\n');
    }
    if !report.notes.is_empty() {
        let _ = writeln!(out, "notes: {}", report.notes);
    }
    out
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&explain(self))
    }
}

/// Feeds a report back as asserted flags on the same descriptor.
pub fn reassert(
    descriptor: &SymbolicDescriptor,
    report: &ClassificationReport,
) -> SymbolicDescriptor {
    let mut d = descriptor.clone();
    d.asserted = report.flags.clone();
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Measure, SampleSpace};
    use Verdict::*;

    #[test]
    fn dirac_unit_interval_table_row() {
        let r = classify_preset("dirac_unit_interval").unwrap();
        assert_eq!(r.verdict(Flag::ClassS), Yes);
        assert_eq!(r.verdict(Flag::Dominated), No);
        assert_eq!(r.verdict(Flag::ScaEqualsCa), No);
        assert_eq!(r.verdict(Flag::KrepsYan), No);
        assert_eq!(r.verdict(Flag::AggregationAg), Yes);
        assert_eq!(r.verdict(Flag::FatouF1IffF2), No);
    }

    #[test]
    fn dominated_singleton_all_yes() {
        let r = classify_preset("dominated_singleton").unwrap();
        for f in Flag::ALL {
            assert_eq!(r.verdict(f), Yes, "{}", f.name());
        }
        assert!(explain(&r).contains(Rule::R2.citation()));
    }

    #[test]
    fn volatility_band_row() {
        let r = classify_preset("volatility_band").unwrap();
        assert_eq!(r.verdict(Flag::ScaEqualsCa), No);
        assert_eq!(r.verdict(Flag::DedekindComplete), Undecidable);
        assert_eq!(r.verdict(Flag::FatouF1IffF2), No);
        assert!(r.notes.contains("not order (semi)continuous"));
    }

    #[test]
    fn robust_binomial_notes() {
        let r = classify_preset("robust_binomial").unwrap();
        assert!(explain(&r).contains("supported alternative"));
        assert_eq!(r.verdict(Flag::ClassS), Yes);
        assert_eq!(r.verdict(Flag::KrepsYan), No);
    }

    #[test]
    fn zfc_annotation() {
        let mut d = preset("volatility_band").unwrap();
        d.all_members_supported = false;
        d.pairwise_disjoint_supports = false;
        d.admits_perfect_disjoint_subfamily = false;
        d.product_structure = true;
        let r = classify(&ModelDescriptor::Symbolic(d)).unwrap();
        let cs = &r.flags[&Flag::ClassS];
        assert_eq!((cs.value, cs.rule), (Undecidable, Some(Rule::R8)));
        assert_eq!(cs.annotation.as_deref(), Some(R8_ANNOTATION));
        assert_eq!(r.verdict(Flag::AggregationAg), Undecidable);
    }

    #[test]
    fn inconsistent_inputs() {
        let mut d = preset("dirac_unit_interval").unwrap();
        d.all_members_supported = false;
        assert_eq!(
            classify(&ModelDescriptor::Symbolic(d)).unwrap_err().name(),
            "InconsistentFlags"
        );
        let mut d = preset("dominated_singleton").unwrap();
        d.asserted.insert(Flag::KrepsYan, FlagValue::asserted(No));
        assert_eq!(
            classify(&ModelDescriptor::Symbolic(d)).unwrap_err().name(),
            "InconsistentFlags"
        );
        assert_eq!(
            preset("nope").unwrap_err(),
            Error::UnknownPreset("nope".into())
        );
    }

    #[test]
    fn idempotent_on_presets() {
        for name in PRESETS {
            let d = preset(name).unwrap();
            let r = classify(&ModelDescriptor::Symbolic(d.clone())).unwrap();
            let again = classify(&ModelDescriptor::Symbolic(reassert(&d, &r))).unwrap();
            assert_eq!(again.flags, r.flags, "{name}");
            check_implications(&r).unwrap();
        }
    }

    #[test]
    fn explicit_family_all_yes() {
        let s = SampleSpace::new(["a", "b", "c"]).unwrap();
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
        let r = classify(&ModelDescriptor::Explicit(f)).unwrap();
        for fl in Flag::ALL {
            assert_eq!(r.verdict(fl), Yes, "{}", fl.name());
        }
    }
}
