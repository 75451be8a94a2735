//! Probabilistic logic programs, their grounding and inference, and the
//! relevance-based selection of interpretive hypotheses.

pub mod bdd;
pub mod ground;
mod par;
pub mod relevance;
pub mod syntax;
pub mod wmc;

pub use ground::{ground_full, ground_relevant, herbrand_size, GroundAtom, GroundProgram, GroundingError};
pub use par::Parallelism;
pub use relevance::{
    evaluate_all, evaluate_hypothesis, kl_div, select_interpretation, HypothesisReport,
    InterpretiveHypothesis, Priors, SelectionResult,
};
pub use syntax::{desugar_annotated_bodies, parse_program, render_program, Program};
pub use wmc::{conditional, InferenceMode, InferenceOptions};
