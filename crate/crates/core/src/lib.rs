//! Exact finite-model toolkit for quasi-sure analysis.
//!
//! The crate represents finite families of probability measures with exact
//! rational weights and computes the objects that appear when a model is not
//! dominated by a single reference measure: polar events, the quasi-sure
//! order, order supports, disjoint supported alternatives, essential suprema,
//! aggregators, bipolar sets, dual representations of risk measures and
//! robust binomial superhedging prices. A rule engine classifies model
//! descriptors by their structural properties.

pub mod acceptance;
pub mod binomial;
pub mod bipolar;
pub mod classifier;
pub mod error;
pub mod io;
pub mod lp;
pub mod measure;
pub mod rational;
pub mod risk;
pub mod support;

pub use error::{Error, Result};
pub use measure::{
    Event, Measure, MeasureFamily, QsOrdering, QsRandomVariable, SampleSpace, SignedMeasure,
    SpaceRef,
};
pub use rational::{format_rational, parse_rational, Extended, Rational};
