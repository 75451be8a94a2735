use serde::{Serialize, Serializer};
use thiserror::Error;

use super::kl::kl_div;
use super::priors::Priors;
use crate::ground::{ground_full, ground_relevant, herbrand_size, GroundAtom, GroundProgram, GroundingError};
use crate::par;
use crate::syntax::{desugar_annotated_bodies, parse_program, ParseError, Program};
use crate::wmc::{conditional, InferenceError, InferenceOptions, Literal};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvaluationErrorKind {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Grounding(#[from] GroundingError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error("no prior for expectation query {0}")]
    MissingPrior(String),
    #[error("prior {value} for {atom} is outside [0,1]")]
    InvalidPrior { atom: String, value: f64 },
}

/// An evaluation failure annotated with the hypothesis label.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{label}: {kind}")]
pub struct EvaluationError {
    pub label: String,
    pub kind: EvaluationErrorKind,
}

impl EvaluationError {
    fn new(label: &str, kind: impl Into<EvaluationErrorKind>) -> Self {
        EvaluationError {
            label: label.to_string(),
            kind: kind.into(),
        }
    }
}

/// A program together with prior beliefs about its expectation queries.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpretiveHypothesis {
    pub label: String,
    pub program: Program,
    pub priors: Priors,
    pub expectation_queries: Vec<GroundAtom>,
    pub evidence: Vec<Literal>,
}

impl InterpretiveHypothesis {
    /// Takes queries and evidence from the program's directives.
    pub fn new(
        label: impl Into<String>,
        program: Program,
        priors: Priors,
    ) -> Result<Self, EvaluationError> {
        let queries = program
            .queries()
            .map(|q| GroundAtom::new(q.clone()).expect("directive atoms are ground"))
            .collect();
        Self::with_queries(label, program, priors, queries)
    }

    pub fn with_queries(
        label: impl Into<String>,
        program: Program,
        priors: Priors,
        expectation_queries: Vec<GroundAtom>,
    ) -> Result<Self, EvaluationError> {
        let label = label.into();
        let evidence = program
            .evidence()
            .map(|(a, pol)| (GroundAtom::new(a.clone()).expect("directive atoms are ground"), pol))
            .collect();
        for query in &expectation_queries {
            match priors.get(query) {
                None => {
                    return Err(EvaluationError::new(
                        &label,
                        EvaluationErrorKind::MissingPrior(query.to_string()),
                    ))
                }
                Some(value) if !(0.0..=1.0).contains(&value) => {
                    return Err(EvaluationError::new(
                        &label,
                        EvaluationErrorKind::InvalidPrior {
                            atom: query.to_string(),
                            value,
                        },
                    ))
                }
                Some(_) => {}
            }
        }
        Ok(InterpretiveHypothesis {
            label,
            program,
            priors,
            expectation_queries,
            evidence,
        })
    }

    pub fn from_source(
        label: impl Into<String>,
        source: &str,
        priors: Priors,
    ) -> Result<Self, EvaluationError> {
        let label = label.into();
        let mut program = parse_program(source).map_err(|e| EvaluationError::new(&label, e))?;
        program.source_name = label.clone();
        Self::new(label, program, priors)
    }

    /// Expectation queries followed by evidence atoms, without repeats.
    pub fn targets(&self) -> Vec<GroundAtom> {
        let mut out: Vec<GroundAtom> = Vec::new();
        for atom in self.expectation_queries.iter().chain(self.evidence.iter().map(|(a, _)| a)) {
            if !out.contains(atom) {
                out.push(atom.clone());
            }
        }
        out
    }

    /// The relevant ground program the posteriors are computed on.
    pub fn ground(&self) -> Result<GroundProgram, EvaluationError> {
        let program = desugar_annotated_bodies(&self.program);
        ground_relevant(&program, &self.targets()).map_err(|e| EvaluationError::new(&self.label, e))
    }
}

fn serialize_extended<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
    if value.is_finite() {
        s.serialize_f64(*value)
    } else if *value > 0.0 {
        s.serialize_str("inf")
    } else if *value < 0.0 {
        s.serialize_str("-inf")
    } else {
        s.serialize_str("nan")
    }
}

fn serialize_atom<S: Serializer>(atom: &GroundAtom, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(atom)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    #[serde(serialize_with = "serialize_atom")]
    pub query: GroundAtom,
    pub prior: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub posterior: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub kld: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub label: String,
    /// Sorted by rendered query atom.
    pub rows: Vec<ReportRow>,
    #[serde(serialize_with = "serialize_extended")]
    pub total_kld: f64,
    pub herbrand: usize,
    pub satisfied: bool,
}

impl HypothesisReport {
    /// Builds a report from rows, deriving the total and satisfaction flag.
    pub fn from_rows(label: impl Into<String>, mut rows: Vec<ReportRow>, herbrand: usize) -> Self {
        rows.sort_by_cached_key(|r| r.query.to_string());
        let total_kld = rows.iter().map(|r| r.kld).sum();
        let satisfied = rows.iter().all(|r| r.posterior.is_finite() && r.kld.is_finite());
        HypothesisReport {
            label: label.into(),
            rows,
            total_kld,
            herbrand,
            satisfied,
        }
    }
}

/// Posterior, per-query KL divergence from the prior, and Herbrand-base size
/// for one hypothesis.
pub fn evaluate_hypothesis(
    h: &InterpretiveHypothesis,
    options: &InferenceOptions,
) -> Result<HypothesisReport, EvaluationError> {
    let annotate = |kind: EvaluationErrorKind| EvaluationError::new(&h.label, kind);
    let program = desugar_annotated_bodies(&h.program);
    let targets = h.targets();
    let gp = ground_relevant(&program, &targets).map_err(|e| annotate(e.into()))?;
    let posteriors = conditional(&gp, &h.expectation_queries, &h.evidence, options)
        .map_err(|e| annotate(e.into()))?;
    let rows = posteriors
        .into_iter()
        .map(|r| {
            let prior = h.priors.get(&r.query).expect("validated on construction");
            ReportRow {
                kld: kl_div(prior, r.probability),
                query: r.query,
                prior,
                posterior: r.probability,
            }
        })
        .collect();
    let full = ground_full(&program, &targets).map_err(|e| annotate(e.into()))?;
    Ok(HypothesisReport::from_rows(h.label.clone(), rows, herbrand_size(&full)))
}

/// Evaluates independent hypotheses, possibly concurrently; results are in
/// input order.
pub fn evaluate_all(
    hypotheses: &[InterpretiveHypothesis],
    options: &InferenceOptions,
) -> Vec<Result<HypothesisReport, EvaluationError>> {
    par::map_slice(hypotheses, options.parallelism, |h| evaluate_hypothesis(h, options))
}
