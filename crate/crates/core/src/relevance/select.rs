//! Choosing among interpretive hypotheses:
//!
//! 1. drop hypotheses that leave some relevance expectation unsatisfied;
//! 2. among hypotheses with the same total KL divergence, keep the one with
//!    the smallest Herbrand base;
//! 3. accept the survivor with the highest total KL divergence.

use serde::Serialize;
use thiserror::Error;

use super::hypothesis::HypothesisReport;

/// Totals closer than this count as the same KL measure.
pub const KLD_EQUALITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EliminationReason {
    Unsatisfied,
    DominatedSameKldLargerBase,
    /// Same KL measure and same Herbrand size as a hypothesis whose label
    /// sorts first.
    LabelTiebreak,
    LowerKld,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Elimination {
    pub label: String,
    pub reason: EliminationReason,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionResult {
    pub winner: String,
    pub eliminated: Vec<Elimination>,
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelectionError {
    #[error("no hypotheses to select from")]
    Empty,
    #[error("no interpretation: every hypothesis leaves a relevance expectation unsatisfied")]
    NoInterpretation { eliminated: Vec<Elimination> },
}

fn fmt_kld(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.4}")
    } else {
        "inf".into()
    }
}

pub fn select_interpretation(reports: &[HypothesisReport]) -> Result<SelectionResult, SelectionError> {
    if reports.is_empty() {
        return Err(SelectionError::Empty);
    }
    let mut ordered: Vec<&HypothesisReport> = reports.iter().collect();
    ordered.sort_by(|a, b| {
        a.label
            .cmp(&b.label)
            .then(a.total_kld.total_cmp(&b.total_kld))
            .then(a.herbrand.cmp(&b.herbrand))
    });

    let mut eliminated = Vec::new();
    let mut trace = Vec::new();
    let mut eliminate = |label: &str, reason, why: String, trace: &mut Vec<String>| {
        eliminated.push(Elimination {
            label: label.to_string(),
            reason,
        });
        trace.push(why);
    };

    let mut survivors = Vec::new();
    for r in ordered {
        if r.satisfied {
            survivors.push(r);
        } else {
            eliminate(
                &r.label,
                EliminationReason::Unsatisfied,
                format!(
                    "step 1: {} eliminated, relevance expectations not satisfied (total KLD {})",
                    r.label,
                    fmt_kld(r.total_kld)
                ),
                &mut trace,
            );
        }
    }
    if survivors.is_empty() {
        return Err(SelectionError::NoInterpretation { eliminated });
    }

    // Group equal totals by chaining neighbours in KLD order.
    survivors.sort_by(|a, b| a.total_kld.total_cmp(&b.total_kld).then(a.label.cmp(&b.label)));
    let mut groups: Vec<Vec<&HypothesisReport>> = Vec::new();
    for r in survivors {
        match groups.last_mut() {
            Some(group)
                if (r.total_kld - group.last().unwrap().total_kld).abs() <= KLD_EQUALITY_TOLERANCE =>
            {
                group.push(r)
            }
            _ => groups.push(vec![r]),
        }
    }

    let mut representatives = Vec::new();
    for mut group in groups {
        group.sort_by(|a, b| a.herbrand.cmp(&b.herbrand).then(a.label.cmp(&b.label)));
        let keep = group[0];
        for other in &group[1..] {
            let (reason, why) = if other.herbrand > keep.herbrand {
                (
                    EliminationReason::DominatedSameKldLargerBase,
                    format!(
                        "step 2: {} eliminated, same KL measure as {} ({}) with a larger Herbrand base ({} > {})",
                        other.label,
                        keep.label,
                        fmt_kld(keep.total_kld),
                        other.herbrand,
                        keep.herbrand
                    ),
                )
            } else {
                (
                    EliminationReason::LabelTiebreak,
                    format!(
                        "step 2: {} eliminated, ties {} on KL measure and Herbrand base ({}); label order decides",
                        other.label, keep.label, keep.herbrand
                    ),
                )
            };
            eliminate(&other.label, reason, why, &mut trace);
        }
        representatives.push(keep);
    }

    let winner = *representatives
        .iter()
        .max_by(|a, b| a.total_kld.total_cmp(&b.total_kld).then(b.label.cmp(&a.label)))
        .expect("at least one survivor");
    let mut losers: Vec<&&HypothesisReport> =
        representatives.iter().filter(|r| !std::ptr::eq(**r, winner)).collect();
    losers.sort_by(|a, b| a.label.cmp(&b.label));
    for r in losers {
        eliminate(
            &r.label,
            EliminationReason::LowerKld,
            format!(
                "step 3: {} eliminated, lower KL measure ({} < {})",
                r.label,
                fmt_kld(r.total_kld),
                fmt_kld(winner.total_kld)
            ),
            &mut trace,
        );
    }
    trace.push(format!(
        "selected {} (total KLD {}, Herbrand base {})",
        winner.label,
        fmt_kld(winner.total_kld),
        winner.herbrand
    ));
    Ok(SelectionResult {
        winner: winner.label.clone(),
        eliminated,
        trace,
    })
}
