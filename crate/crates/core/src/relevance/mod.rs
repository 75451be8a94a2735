//! Relevance evaluation of interpretive hypotheses.

mod hypothesis;
mod kl;
mod priors;
mod select;

pub use hypothesis::{
    evaluate_all, evaluate_hypothesis, EvaluationError, EvaluationErrorKind, HypothesisReport,
    InterpretiveHypothesis, ReportRow,
};
pub use kl::kl_div;
pub use priors::{Priors, PriorsError};
pub use select::{
    select_interpretation, Elimination, EliminationReason, SelectionError, SelectionResult,
    KLD_EQUALITY_TOLERANCE,
};
