use thiserror::Error;

use crate::support::ConsistencyViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit reports. Variant names are part of the
/// machine-readable contract (see [`Error::name`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("atom `{0}` is not part of the sample space")]
    UnknownAtom(String),
    #[error("objects live on different sample spaces")]
    SpaceMismatch,
    #[error("invalid sample space: {0}")]
    InvalidSpace(String),
    #[error("invalid measure `{name}`: {reason}")]
    InvalidMeasure { name: String, reason: String },
    #[error("a measure family needs at least one member")]
    EmptyFamily,
    #[error("no member named `{0}`")]
    UnknownMember(String),
    #[error("signed pair overlaps at atom `{0}`")]
    InvalidSignedPair(String),
    #[error("first marginal has zero weight at `{0}`")]
    DegeneratePi(String),
    #[error("prediction set is empty")]
    EmptyPredictionSet,
    #[error("measure charges polar atom `{atom}`")]
    NotDominated { atom: String },
    #[error("element {index} exceeds the bound at atom `{atom}`")]
    Unbounded { index: usize, atom: String },
    #[error("negative value at non-polar atom `{atom}`")]
    NegativeInput { atom: String },
    #[error("assignment is missing member `{member}`")]
    IncompleteAssignment { member: String },
    #[error("assignment is inconsistent ({} violation(s))", .0.len())]
    Inconsistent(Vec<ConsistencyViolation>),
    #[error("generator {generator} is negative at atom `{atom}`")]
    NegativeGenerator { generator: usize, atom: String },
    #[error("a solid convex set needs at least one generator")]
    EmptyGenerators,
    #[error("every penalty is +inf")]
    AllPenaltiesInfinite,
    #[error("reference measure `{0}` is not a family member")]
    ReferenceMissing(String),
    #[error("invalid risk measure specification: {0}")]
    InvalidRiskSpec(String),
    #[error("chain is not q.s. monotone at position {index}")]
    NotMonotone { index: usize },
    #[error("tree would have {leaves} leaves, cap is {cap}")]
    SizeCapExceeded { leaves: u128, cap: u128 },
    #[error("bounds at node `{node}` violate {condition}")]
    InvalidBounds { node: String, condition: String },
    #[error("no bounds for node `{0}`")]
    MissingNodeBounds(String),
    #[error("invalid kernel choice at node `{node}`: {reason}")]
    InvalidChoice { node: String, reason: String },
    #[error("no payoff for leaf `{0}`")]
    MissingLeafPayoff(String),
    #[error("{count} kernel choices exceed the oracle cap {cap}")]
    OracleCapExceeded { count: u128, cap: u128 },
    #[error("inconsistent descriptor flags: {0}")]
    InconsistentFlags(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable identifier used in JSON reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::UnknownAtom(_) => "UnknownAtom",
            Error::SpaceMismatch => "SpaceMismatch",
            Error::InvalidSpace(_) => "InvalidSpace",
            Error::InvalidMeasure { .. } => "InvalidMeasure",
            Error::EmptyFamily => "EmptyFamily",
            Error::UnknownMember(_) => "UnknownMember",
            Error::InvalidSignedPair(_) => "InvalidSignedPair",
            Error::DegeneratePi(_) => "DegeneratePi",
            Error::EmptyPredictionSet => "EmptyPredictionSet",
            Error::NotDominated { .. } => "NotDominated",
            Error::Unbounded { .. } => "Unbounded",
            Error::NegativeInput { .. } => "NegativeInput",
            Error::IncompleteAssignment { .. } => "IncompleteAssignment",
            Error::Inconsistent(_) => "Inconsistent",
            Error::NegativeGenerator { .. } => "NegativeGenerator",
            Error::EmptyGenerators => "EmptyGenerators",
            Error::AllPenaltiesInfinite => "AllPenaltiesInfinite",
            Error::ReferenceMissing(_) => "ReferenceMissing",
            Error::InvalidRiskSpec(_) => "InvalidRiskSpec",
            Error::NotMonotone { .. } => "NotMonotone",
            Error::SizeCapExceeded { .. } => "SizeCapExceeded",
            Error::InvalidBounds { .. } => "InvalidBounds",
            Error::MissingNodeBounds(_) => "MissingNodeBounds",
            Error::InvalidChoice { .. } => "InvalidChoice",
            Error::MissingLeafPayoff(_) => "MissingLeafPayoff",
            Error::OracleCapExceeded { .. } => "OracleCapExceeded",
            Error::InconsistentFlags(_) => "InconsistentFlags",
            Error::UnknownPreset(_) => "UnknownPreset",
            Error::Infeasible => "Infeasible",
            Error::Parse(_) => "Parse",
        }
    }

    /// Schema and parse failures, as opposed to domain errors.
    pub fn is_schema(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}
