use alloc::string::String;

/// Failures of the decision procedures.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parameters outside the family's domain: {0}")]
    Domain(String),
    #[error("subspace does not generate the algebra")]
    NotGenerating,
    #[error("expected a one-dimensional q ∩ N(q), found dimension {0}")]
    DegenerateIntersection(usize),
    #[error("C^1_23 = {c1:e} is too close to zero to choose a case (C^2_23 = {c2:e})")]
    InconsistentCase { c1: f64, c2: f64 },
    #[error("local error estimate {estimate:e} at t = {t} exceeds the step-doubling bound")]
    StepTooLarge { t: f64, estimate: f64 },
    #[error("requested {requested} branch but the discriminant {b:e} selects {actual}")]
    Branch { requested: &'static str, actual: &'static str, b: f64 },
    #[error("structure constants do not match a catalog family")]
    UnknownFamily,
    #[error("invalid unit body: {0}")]
    InvalidBody(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;
