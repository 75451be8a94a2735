//! Reference semantics: all worlds over the relevant probabilistic facts,
//! least model by naive forward chaining.

use std::collections::HashSet;

use super::{render_literals, InferenceError, Literal};
use crate::ground::{GroundAtom, GroundProgram};

pub const ORACLE_MAX_FACTS: usize = 24;

/// `P(query | evidence)` by brute force. Shares no code with the
/// enumeration and compiled routes beyond the ground program itself.
pub fn enumerate_oracle(
    gp: &GroundProgram,
    query: &GroundAtom,
    evidence: &[Literal],
) -> Result<f64, InferenceError> {
    let literals = evidence;
    for atom in std::iter::once(query).chain(evidence.iter().map(|(a, _)| a)) {
        if !gp.contains(atom) {
            return Err(InferenceError::UnknownAtom(atom.to_string()));
        }
    }

    // Relevant atoms: backward closure over rule heads.
    let mut relevant: HashSet<&GroundAtom> = HashSet::new();
    let mut frontier: Vec<&GroundAtom> = vec![query];
    frontier.extend(evidence.iter().map(|(a, _)| a));
    while let Some(atom) = frontier.pop() {
        if relevant.insert(atom) {
            for rule in gp.rules.iter().filter(|r| &r.head == atom) {
                frontier.extend(rule.body.iter());
            }
        }
    }
    let rules: Vec<_> = gp.rules.iter().filter(|r| relevant.contains(&r.head)).collect();
    let certain: Vec<&GroundAtom> = gp
        .facts
        .iter()
        .filter(|f| f.probability >= 1.0 && relevant.contains(&f.atom))
        .map(|f| &f.atom)
        .collect();
    let choices: Vec<(&GroundAtom, f64)> = gp
        .facts
        .iter()
        .filter(|f| f.probability < 1.0 && relevant.contains(&f.atom))
        .map(|f| (&f.atom, f.probability))
        .collect();
    if choices.len() > ORACLE_MAX_FACTS {
        return Err(InferenceError::OracleTooLarge {
            facts: choices.len(),
            limit: ORACLE_MAX_FACTS,
        });
    }

    let id = |a: &GroundAtom| gp.atom_id(a).expect("atom is indexed");
    let rules: Vec<(usize, Vec<usize>)> =
        rules.iter().map(|r| (id(&r.head), r.body.iter().map(id).collect())).collect();
    let certain: Vec<usize> = certain.into_iter().map(id).collect();
    let choices: Vec<(usize, f64)> = choices.into_iter().map(|(a, p)| (id(a), p)).collect();
    let query = id(query);
    let evidence: Vec<(usize, bool)> = evidence.iter().map(|(a, pol)| (id(a), *pol)).collect();

    let (mut joint, mut total) = (0.0, 0.0);
    let mut model = vec![false; gp.atoms.len()];
    for world in 0u64..(1u64 << choices.len()) {
        model.iter_mut().for_each(|m| *m = false);
        let mut weight = 1.0;
        for &atom in &certain {
            model[atom] = true;
        }
        for (i, &(atom, p)) in choices.iter().enumerate() {
            if world & (1 << i) != 0 {
                weight *= p;
                model[atom] = true;
            } else {
                weight *= 1.0 - p;
            }
        }
        loop {
            let mut grew = false;
            for (head, body) in &rules {
                if !model[*head] && body.iter().all(|&b| model[b]) {
                    model[*head] = true;
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        if evidence.iter().all(|&(a, pol)| model[a] == pol) {
            total += weight;
            if model[query] {
                joint += weight;
            }
        }
    }
    if total <= 0.0 {
        return Err(InferenceError::InconsistentEvidence {
            evidence: render_literals(literals),
        });
    }
    Ok(joint / total)
}
