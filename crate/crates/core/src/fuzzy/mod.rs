//! Mamdani fuzzy inference.
//!
//! Inputs are fuzzified against each [`LinguisticVariable`], rules combine
//! clause degrees with `min`, consequents are clipped at the rule strength and
//! max-aggregated on the output grid, and the crisp result is the discrete
//! centroid of that curve.

mod engine;
mod membership;
mod rule;
mod variable;

use thiserror::Error;

pub use engine::{defuzzify_centroid, Engine, FiredRule, FuzzyOutcome, OutcomeFlag, SampledCurve, VariableDegrees};
pub use membership::MembershipFunction;
pub use rule::{Clause, Rule};
pub use variable::{LinguisticVariable, Term, UniverseAxis, MIN_GRID_INTERVALS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("invalid membership shape: {0}")]
    InvalidShape(String),
    #[error("invalid axis: {0}")]
    InvalidAxis(String),
    #[error("invalid variable: {0}")]
    InvalidVariable(String),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown term `{term}` for variable `{variable}`")]
    UnknownTerm { variable: String, term: String },
    #[error("no input supplied for variable `{0}`")]
    MissingInput(String),
    #[error("input for variable `{0}` is not finite")]
    NonFiniteInput(String),
}
