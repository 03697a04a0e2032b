//! JSON encodings of models, random variables, tree and risk inputs, and reports.
//!
//! Rationals are always `"p/q"` strings in lowest terms with `q > 0`.
//! Objects keep insertion order, so every writer here is deterministic.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::binomial::{
    BinomialTree, BinomialTreeSpec, Bounds, NodeBounds, Payoff, Selection, SuperhedgeResult,
};
use crate::bipolar::{BsReport, Certificate, Membership, SolidConvexSet};
use crate::classifier::{ModelDescriptor, SymbolicDescriptor};
use crate::error::{Error, Result};
use crate::measure::{Event, Measure, MeasureFamily, QsRandomVariable, SampleSpace, SpaceRef};
use crate::rational::{format_rational, parse_rational, Extended, Rational};
use crate::risk::{RepresentationReport, RiskMeasureSpec, Value as RiskValue};
use crate::support::{Assignment, DisjointAlternative, SupportCheck, SupportViolation};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}

pub fn to_string(v: &Value, pretty: bool) -> String {
    let s = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    };
    s.expect("JSON values always serialize")
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| parse_err(format!("missing field `{key}`")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| parse_err(format!("{what} must be an object")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| parse_err(format!("{what} must be a string")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| parse_err(format!("{what} must be a non-negative integer")))
}

pub fn rational(v: &Value) -> Result<Rational> {
    parse_rational(as_str(v, "rational")?)
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn rationals_json(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(rational_json).collect())
}

fn extended_json(e: &Extended) -> Value {
    Value::String(e.to_string())
}

// ---- models ----

/// Reads a model. Atoms missing from a measure carry weight zero.
pub fn parse_model(v: &Value) -> Result<MeasureFamily> {
    let atoms = as_array(field(v, "atoms")?, "atoms")?
        .iter()
        .map(|a| as_str(a, "atom label").map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    let space = SampleSpace::new(atoms)?;
    let measures = as_object(field(v, "measures")?, "measures")?;
    let members = measures
        .iter()
        .map(|(name, m)| Ok((name.clone(), parse_measure(&space, m)?)))
        .collect::<Result<Vec<_>>>()?;
    MeasureFamily::new(space, members)
}

pub fn parse_measure(space: &SpaceRef, v: &Value) -> Result<Measure> {
    let obj = as_object(v, "measure")?;
    let pairs = obj
        .iter()
        .map(|(atom, w)| Ok((atom.as_str(), rational(w)?)))
        .collect::<Result<Vec<_>>>()?;
    Measure::from_pairs(space.clone(), pairs)
}

pub fn measure_json(m: &Measure) -> Value {
    let space = m.space();
    let obj: Map<String, Value> = (0..space.len())
        .map(|i| (space.label(i).to_string(), rational_json(m.weight(i))))
        .collect();
    Value::Object(obj)
}

pub fn model_json(family: &MeasureFamily) -> Value {
    let measures: Map<String, Value> = family
        .members()
        .iter()
        .map(|(n, m)| (n.clone(), measure_json(m)))
        .collect();
    json!({ "atoms": family.space().atoms(), "measures": measures })
}

pub fn model_from_str(text: &str) -> Result<MeasureFamily> {
    parse_model(&parse_json(text)?)
}

// ---- events and random variables ----

pub fn parse_event(space: &SpaceRef, v: &Value) -> Result<Event> {
    let labels = as_array(v, "event")?
        .iter()
        .map(|a| as_str(a, "atom label"))
        .collect::<Result<Vec<_>>>()?;
    space.event(labels)
}

pub fn event_json(space: &SpaceRef, e: &Event) -> Value {
    json!(space.labels_of(e))
}

/// Reads `{atom: "p/q"}`; unlisted atoms are zero.
pub fn parse_rv(space: &SpaceRef, v: &Value) -> Result<QsRandomVariable> {
    let obj = as_object(v, "random variable")?;
    let pairs = obj
        .iter()
        .map(|(atom, x)| Ok((atom.as_str(), rational(x)?)))
        .collect::<Result<Vec<_>>>()?;
    QsRandomVariable::from_pairs(space.clone(), pairs)
}

pub fn rv_json(x: &QsRandomVariable) -> Value {
    let space = x.space();
    let obj: Map<String, Value> = (0..space.len())
        .map(|i| (space.label(i).to_string(), rational_json(x.value(i))))
        .collect();
    Value::Object(obj)
}

/// A list of random variables: either an array or `{"probes": [...]}`.
pub fn parse_rv_list(space: &SpaceRef, v: &Value) -> Result<Vec<QsRandomVariable>> {
    let arr = match v.get("probes") {
        Some(p) => p,
        None => v,
    };
    as_array(arr, "random variable list")?
        .iter()
        .map(|x| parse_rv(space, x))
        .collect()
}

pub fn parse_assignment(space: &SpaceRef, v: &Value) -> Result<Assignment> {
    as_object(v, "assignment")?
        .iter()
        .map(|(name, x)| Ok((name.clone(), parse_rv(space, x)?)))
        .collect()
}

pub fn parse_generators(space: &SpaceRef, v: &Value) -> Result<SolidConvexSet> {
    let gens = as_array(field(v, "generators")?, "generators")?
        .iter()
        .map(|g| parse_rv(space, g))
        .collect::<Result<Vec<_>>>()?;
    SolidConvexSet::new(space.clone(), gens)
}

// ---- risk ----

pub fn parse_risk_spec(space: &SpaceRef, v: &Value) -> Result<RiskMeasureSpec> {
    let kind = as_str(field(v, "kind")?, "kind")?;
    Ok(match kind {
        "worst_case" => RiskMeasureSpec::WorstCase,
        "entropic" => RiskMeasureSpec::Entropic {
            gamma: rational(field(v, "gamma")?)?,
            reference: as_str(field(v, "reference")?, "reference")?.to_string(),
        },
        "scenario_penalty" => {
            let penalties = as_object(field(v, "penalties")?, "penalties")?
                .iter()
                .map(|(name, a)| Ok((name.clone(), Extended::parse(as_str(a, "penalty")?)?)))
                .collect::<Result<Vec<_>>>()?;
            RiskMeasureSpec::ScenarioPenalty { penalties }
        }
        "acceptance_generated" => RiskMeasureSpec::AcceptanceGenerated {
            generators: as_array(field(v, "generators")?, "generators")?
                .iter()
                .map(|g| parse_rv(space, g))
                .collect::<Result<Vec<_>>>()?,
        },
        other => return Err(parse_err(format!("unknown risk measure kind `{other}`"))),
    })
}

pub fn risk_spec_json(spec: &RiskMeasureSpec) -> Value {
    match spec {
        RiskMeasureSpec::WorstCase => json!({ "kind": "worst_case" }),
        RiskMeasureSpec::Entropic { gamma, reference } => {
            json!({ "kind": "entropic", "gamma": rational_json(gamma), "reference": reference })
        }
        RiskMeasureSpec::ScenarioPenalty { penalties } => {
            let p: Map<String, Value> = penalties
                .iter()
                .map(|(n, a)| (n.clone(), extended_json(a)))
                .collect();
            json!({ "kind": "scenario_penalty", "penalties": p })
        }
        RiskMeasureSpec::AcceptanceGenerated { generators } => json!({
            "kind": "acceptance_generated",
            "generators": generators.iter().map(rv_json).collect::<Vec<_>>(),
        }),
    }
}

pub fn risk_value_json(v: &RiskValue) -> Value {
    match v {
        RiskValue::Exact(e) => extended_json(e),
        RiskValue::Float(f) if f.is_infinite() && *f > 0.0 => json!("inf"),
        RiskValue::Float(f) if f.is_finite() => json!(f),
        RiskValue::Float(_) => Value::Null,
    }
}

pub fn representation_json(r: &RepresentationReport) -> Value {
    let gaps: Vec<Value> = r
        .gaps
        .iter()
        .map(|g| {
            if g.is_finite() {
                json!(g)
            } else {
                json!("inf")
            }
        })
        .collect();
    let mut obj = json!({
        "gaps": gaps,
        "max_gap": if r.max_gap.is_finite() { json!(r.max_gap) } else { json!("inf") },
        "weak_duality": r.weak_duality,
        "identification": r.identification,
    });
    if let Some(exact) = &r.max_gap_exact {
        obj["max_gap_exact"] = exact.as_ref().map_or(json!("inf"), rational_json);
    }
    obj
}

// ---- binomial ----

fn parse_node_bounds(v: &Value, node: &str) -> Result<NodeBounds> {
    let get = |k: &str| rational(field(v, k)?);
    let b = NodeBounds {
        u: get("u")?,
        big_u: get("U")?,
        d: get("d")?,
        big_d: get("D")?,
        pi: get("pi")?,
        big_pi: get("Pi")?,
    };
    b.validate(node)?;
    Ok(b)
}

pub fn node_bounds_json(b: &NodeBounds) -> Value {
    json!({
        "u": rational_json(&b.u),
        "U": rational_json(&b.big_u),
        "d": rational_json(&b.d),
        "D": rational_json(&b.big_d),
        "pi": rational_json(&b.pi),
        "Pi": rational_json(&b.big_pi),
    })
}

/// `bounds` is either one box (keys `u`, `U`, ...) or a map from node
/// label to box.
pub fn parse_tree_spec(v: &Value) -> Result<BinomialTreeSpec> {
    let periods = as_usize(field(v, "T")?, "T")?;
    let grid = as_usize(field(v, "grid")?, "grid")?;
    if grid == 0 {
        return Err(parse_err("grid must be at least 1"));
    }
    let b = field(v, "bounds")?;
    let bounds = if b.get("u").is_some_and(Value::is_string) {
        Bounds::Homogeneous(parse_node_bounds(b, crate::binomial::ROOT_LABEL)?)
    } else {
        Bounds::PerNode(
            as_object(b, "bounds")?
                .iter()
                .map(|(label, nb)| Ok((label.clone(), parse_node_bounds(nb, label)?)))
                .collect::<Result<BTreeMap<_, _>>>()?,
        )
    };
    Ok(BinomialTreeSpec {
        periods,
        grid,
        bounds,
    })
}

pub fn tree_spec_json(spec: &BinomialTreeSpec) -> Value {
    let bounds = match &spec.bounds {
        Bounds::Homogeneous(b) => node_bounds_json(b),
        Bounds::PerNode(map) => Value::Object(
            map.iter()
                .map(|(l, b)| (l.clone(), node_bounds_json(b)))
                .collect(),
        ),
    };
    json!({ "T": spec.periods, "grid": spec.grid, "bounds": bounds })
}

/// `call:K`, `put:K`, `digital:K` or `identity`.
pub fn parse_payoff(s: &str) -> Result<Payoff> {
    let (name, arg) = match s.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a)),
        None => (s.trim(), None),
    };
    let strike = || {
        arg.ok_or_else(|| parse_err(format!("payoff `{name}` needs a strike")))
            .and_then(parse_rational)
    };
    Ok(match name {
        "call" => Payoff::Call(strike()?),
        "put" => Payoff::Put(strike()?),
        "digital" => Payoff::Digital(strike()?),
        "identity" if arg.is_none() => Payoff::Identity,
        _ => return Err(parse_err(format!("unknown payoff `{s}`"))),
    })
}

/// Explicit payoff as `{leaf label: "p/q"}`.
pub fn parse_payoff_map(v: &Value) -> Result<Payoff> {
    Ok(Payoff::Explicit(
        as_object(v, "payoff")?
            .iter()
            .map(|(l, x)| Ok((l.clone(), rational(x)?)))
            .collect::<Result<_>>()?,
    ))
}

pub fn selection_json(s: &Selection) -> Value {
    json!({ "u": rational_json(&s.u), "d": rational_json(&s.d), "p": rational_json(&s.p) })
}

pub fn superhedge_json(tree: &BinomialTree, r: &SuperhedgeResult) -> Value {
    let nodes: Vec<Value> = tree
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let mut o = json!({
                "label": n.label,
                "time": n.time,
                "price": rational_json(&n.price),
                "value": rational_json(&r.node_values[i]),
            });
            if let Some(sel) = &r.argmax[i] {
                o["argmax"] = selection_json(sel);
            }
            o
        })
        .collect();
    json!({ "value": rational_json(&r.value), "nodes": nodes })
}

// ---- support and aggregation reports ----

pub fn support_check_json(space: &SpaceRef, c: &SupportCheck) -> Value {
    let witness = c.witness.as_ref().map(|w| match w {
        SupportViolation::MassOutside { atoms, mass } => json!({
            "kind": "mass_outside",
            "atoms": event_json(space, atoms),
            "mass": rational_json(mass),
        }),
        SupportViolation::NonPolarNull { atoms } => json!({
            "kind": "non_polar_null",
            "atoms": event_json(space, atoms),
        }),
    });
    json!({ "passed": c.passed, "witness": witness })
}

pub fn alternative_json(alt: &DisjointAlternative) -> Value {
    let space = alt.family.space();
    let supports: Map<String, Value> = alt
        .supports
        .iter()
        .map(|s| (s.measure_name.clone(), event_json(space, &s.event)))
        .collect();
    json!({ "model": model_json(&alt.family), "supports": supports })
}

// ---- bipolar ----

pub fn membership_json(m: &Membership) -> Value {
    let cert = match &m.certificate {
        Certificate::Optimal { mu, value } => json!({
            "kind": "optimal",
            "mu": rationals_json(mu),
            "value": rational_json(value),
        }),
        Certificate::Ray { mu, direction } => json!({
            "kind": "ray",
            "mu": rationals_json(mu),
            "direction": rationals_json(direction),
        }),
    };
    json!({ "member": m.member, "certificate": cert })
}

pub fn bs_report_json(r: &BsReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

// ---- classifier ----

/// Either `{"model": {...}}` for an explicit family or the symbolic fields.
pub fn parse_descriptor(v: &Value) -> Result<ModelDescriptor> {
    if let Some(m) = v.get("model") {
        return Ok(ModelDescriptor::Explicit(parse_model(m)?));
    }
    let d: SymbolicDescriptor =
        serde_json::from_value(v.clone()).map_err(|e| parse_err(format!("descriptor: {e}")))?;
    Ok(ModelDescriptor::Symbolic(d))
}

pub fn descriptor_json(d: &SymbolicDescriptor) -> Value {
    serde_json::to_value(d).expect("descriptor serializes")
}

pub fn error_json(e: &Error) -> Value {
    let mut obj = json!({ "error": e.name(), "message": e.to_string() });
    if let Error::Inconsistent(vs) = e {
        obj["violations"] = serde_json::to_value(vs).expect("violations serialize");
    }
    obj
}
