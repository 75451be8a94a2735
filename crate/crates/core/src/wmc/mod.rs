//! Exact probabilities under the distribution semantics.
//!
//! Probabilistic facts (label < 1) are independent choices; a world's true
//! atoms are the least model of the rules plus the chosen and certain facts.
//! Two routes compute the same weighted model count over the facts relevant
//! to a query: world enumeration with linear-time least-model propagation,
//! and compilation of every relevant atom to a BDD by monotone fixpoint
//! iteration. [`enumerate_oracle`] is a third, deliberately naive, reference.

mod compiled;
mod enumerate;
mod oracle;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::ground::{GroundAtom, GroundProgram};
use crate::par::{self, Parallelism};

pub use oracle::{enumerate_oracle, ORACLE_MAX_FACTS};

/// Default cap on enumerated worlds after relevance filtering.
pub const DEFAULT_MAX_WORLDS: u64 = 1 << 24;

/// `Auto` enumerates cones with at most this many probabilistic facts.
pub const AUTO_ENUMERATION_FACTS: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InferenceError {
    #[error("atom {0} does not occur in the ground program")]
    UnknownAtom(String),
    #[error("evidence {evidence} has probability zero")]
    InconsistentEvidence { evidence: String },
    #[error(
        "{facts} relevant probabilistic facts give 2^{facts} worlds, above the cap of {cap}; \
         use compiled mode or raise --max-worlds"
    )]
    WorldCapExceeded { facts: usize, cap: u64 },
    #[error("{facts} relevant probabilistic facts exceed the oracle limit of {limit}")]
    OracleTooLarge { facts: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InferenceMode {
    #[default]
    Auto,
    Enumerate,
    Compiled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InferenceOptions {
    pub mode: InferenceMode,
    pub max_worlds: u64,
    pub parallelism: Parallelism,
}

impl Default for InferenceOptions {
    fn default() -> Self {
        InferenceOptions {
            mode: InferenceMode::Auto,
            max_worlds: DEFAULT_MAX_WORLDS,
            parallelism: Parallelism::default(),
        }
    }
}

impl InferenceOptions {
    pub fn with_mode(mode: InferenceMode) -> Self {
        InferenceOptions {
            mode,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InferenceResult {
    pub query: GroundAtom,
    /// `P(query | evidence)`.
    pub probability: f64,
    pub evidence_probability: f64,
}

/// A ground atom with a required truth value.
pub type Literal = (GroundAtom, bool);

/// Integer-indexed view of a ground program.
pub(crate) struct Net {
    pub certain: Vec<bool>,
    /// atom -> index into `probs`
    pub choice: Vec<Option<usize>>,
    pub probs: Vec<f64>,
    pub prob_atom: Vec<usize>,
    pub rules: Vec<(usize, Vec<usize>)>,
    pub rules_by_head: Vec<Vec<usize>>,
}

/// The part of a [`Net`] that some set of roots depends on.
pub(crate) struct Cone {
    /// Atoms in discovery order from the roots.
    pub atoms: Vec<usize>,
    /// Probabilistic fact indices in discovery order.
    pub facts: Vec<usize>,
    pub rules: Vec<usize>,
}

impl Net {
    pub fn new(gp: &GroundProgram) -> Self {
        let n = gp.atoms.len();
        let mut certain = vec![false; n];
        let mut choice = vec![None; n];
        let mut probs = Vec::new();
        let mut prob_atom = Vec::new();
        for fact in &gp.facts {
            let id = gp.atom_id(&fact.atom).expect("fact atom is indexed");
            if fact.probability >= 1.0 {
                certain[id] = true;
            } else {
                choice[id] = Some(probs.len());
                probs.push(fact.probability);
                prob_atom.push(id);
            }
        }
        let mut rules_by_head = vec![Vec::new(); n];
        let rules = gp
            .rules
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let head = gp.atom_id(&r.head).expect("rule head is indexed");
                rules_by_head[head].push(i);
                let body = r.body.iter().map(|b| gp.atom_id(b).expect("body atom is indexed")).collect();
                (head, body)
            })
            .collect();
        Net {
            certain,
            choice,
            probs,
            prob_atom,
            rules,
            rules_by_head,
        }
    }

    pub fn cone(&self, roots: &[usize]) -> Cone {
        let mut seen = vec![false; self.certain.len()];
        let mut atoms = Vec::new();
        let mut facts = Vec::new();
        let mut rules = BTreeSet::new();
        let mut stack: Vec<usize> = roots.iter().rev().copied().collect();
        while let Some(atom) = stack.pop() {
            if std::mem::replace(&mut seen[atom], true) {
                continue;
            }
            atoms.push(atom);
            if let Some(f) = self.choice[atom] {
                facts.push(f);
            }
            for &r in &self.rules_by_head[atom] {
                rules.insert(r);
                stack.extend(self.rules[r].1.iter().rev().copied());
            }
        }
        Cone {
            atoms,
            facts,
            rules: rules.into_iter().collect(),
        }
    }
}

fn lookup(gp: &GroundProgram, atom: &GroundAtom) -> Result<usize, InferenceError> {
    gp.atom_id(atom)
        .ok_or_else(|| InferenceError::UnknownAtom(atom.to_string()))
}

fn render_literals(literals: &[Literal]) -> String {
    literals
        .iter()
        .map(|(a, pos)| if *pos { a.to_string() } else { format!("\\+{a}") })
        .collect::<Vec<_>>()
        .join(", ")
}

/// `P(numerator ∧ evidence)` and `P(evidence)` over the joint cone.
fn weigh(
    net: &Net,
    numerator: &[(usize, bool)],
    evidence: &[(usize, bool)],
    options: &InferenceOptions,
) -> Result<(f64, f64), InferenceError> {
    let roots: Vec<usize> = numerator.iter().chain(evidence).map(|&(a, _)| a).collect();
    let cone = net.cone(&roots);
    let enumerate = match options.mode {
        InferenceMode::Enumerate => true,
        InferenceMode::Compiled => false,
        InferenceMode::Auto => cone.facts.len() <= AUTO_ENUMERATION_FACTS,
    };
    if enumerate {
        let worlds = 1u64.checked_shl(cone.facts.len() as u32).unwrap_or(u64::MAX);
        if cone.facts.len() >= 64 || worlds > options.max_worlds {
            return Err(InferenceError::WorldCapExceeded {
                facts: cone.facts.len(),
                cap: options.max_worlds,
            });
        }
        Ok(enumerate::weigh(net, &cone, numerator, evidence, options.parallelism))
    } else {
        Ok(compiled::weigh(net, &cone, numerator, evidence))
    }
}

fn indexed(gp: &GroundProgram, literals: &[Literal]) -> Result<Vec<(usize, bool)>, InferenceError> {
    literals.iter().map(|(a, pol)| Ok((lookup(gp, a)?, *pol))).collect()
}

/// Probability that every literal holds.
pub fn joint_probability(
    gp: &GroundProgram,
    literals: &[Literal],
    options: &InferenceOptions,
) -> Result<f64, InferenceError> {
    let net = Net::new(gp);
    let lits = indexed(gp, literals)?;
    Ok(weigh(&net, &lits, &[], options)?.0)
}

pub fn marginal(
    gp: &GroundProgram,
    query: &GroundAtom,
    options: &InferenceOptions,
) -> Result<f64, InferenceError> {
    joint_probability(gp, &[(query.clone(), true)], options)
}

/// `P(q | evidence)` for each query, in query order.
pub fn conditional(
    gp: &GroundProgram,
    queries: &[GroundAtom],
    evidence: &[Literal],
    options: &InferenceOptions,
) -> Result<Vec<InferenceResult>, InferenceError> {
    let net = Net::new(gp);
    let ev = indexed(gp, evidence)?;
    let qs: Vec<usize> = queries.iter().map(|q| lookup(gp, q)).collect::<Result<_, _>>()?;
    let weights = par::map_slice(&qs, options.parallelism, |&q| weigh(&net, &[(q, true)], &ev, options));
    let mut out = Vec::with_capacity(queries.len());
    for (query, weight) in queries.iter().zip(weights) {
        let (joint, pe) = weight?;
        if pe <= 0.0 {
            return Err(InferenceError::InconsistentEvidence {
                evidence: blame(&net, evidence, &ev, options),
            });
        }
        out.push(InferenceResult {
            query: query.clone(),
            probability: (joint / pe).clamp(0.0, 1.0),
            evidence_probability: pe,
        });
    }
    if queries.is_empty() && !ev.is_empty() && weigh(&net, &[], &ev, options)?.1 <= 0.0 {
        return Err(InferenceError::InconsistentEvidence {
            evidence: blame(&net, evidence, &ev, options),
        });
    }
    Ok(out)
}

/// Names the first evidence literal that is impossible on its own, or the
/// whole conjunction when only the combination is.
fn blame(
    net: &Net,
    evidence: &[Literal],
    ev: &[(usize, bool)],
    options: &InferenceOptions,
) -> String {
    for (lit, idx) in evidence.iter().zip(ev) {
        if matches!(weigh(net, &[], std::slice::from_ref(idx), options), Ok((_, p)) if p <= 0.0) {
            return render_literals(std::slice::from_ref(lit));
        }
    }
    render_literals(evidence)
}
