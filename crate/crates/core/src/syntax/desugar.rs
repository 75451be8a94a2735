//! Rewrites annotated disjunctive bodies and labelled rules into plain
//! clauses guarded by fresh probabilistic facts.
//!
//! `h(X) :- 0.9::g1(X) ; 0.7::g2(X).` becomes
//!
//! ```text
//! h(X) :- g1(X), aux_h_0_0(X).
//! 0.9::aux_h_0_0(X).
//! h(X) :- g2(X), aux_h_0_1(X).
//! 0.7::aux_h_0_1(X).
//! ```
//!
//! The aux fact is parameterised by the head variables, so each ground
//! instance of the head gets its own independent choice. Unit-weight branches
//! get no aux fact.

use std::collections::BTreeSet;

use super::ast::{Atom, Body, BodyLiteral, Clause, Program, Term};

fn fresh_name(taken: &mut BTreeSet<String>, base: String) -> String {
    let mut name = base;
    while taken.contains(&name) {
        name.push('_');
    }
    taken.insert(name.clone());
    name
}

fn guarded(
    clause_idx: usize,
    branch: usize,
    head: &Atom,
    probability: f64,
    mut literals: Vec<BodyLiteral>,
    taken: &mut BTreeSet<String>,
    out: &mut Vec<Clause>,
) {
    if probability == 1.0 {
        out.push(Clause::rule(head.clone(), literals));
        return;
    }
    let name = fresh_name(taken, format!("aux_{}_{clause_idx}_{branch}", head.predicate));
    let args = head.variables().into_iter().map(Term::Variable).collect();
    let aux = Atom::new(name, args);
    literals.push(BodyLiteral::Positive(aux.clone()));
    out.push(Clause::rule(head.clone(), literals));
    out.push(Clause::fact(probability, aux));
}

pub fn desugar_annotated_bodies(program: &Program) -> Program {
    let mut taken: BTreeSet<String> = program.signatures().into_iter().map(|(p, _)| p).collect();
    let mut clauses = Vec::with_capacity(program.clauses.len());
    for (idx, clause) in program.clauses.iter().enumerate() {
        match &clause.body {
            Body::Annotated(alts) => {
                for (branch, alt) in alts.iter().enumerate() {
                    // A labelled head scales every branch.
                    let p = clause.probability * alt.probability;
                    guarded(idx, branch, &clause.head, p, alt.literals.clone(), &mut taken, &mut clauses);
                }
            }
            Body::Conjunction(lits) if !lits.is_empty() && clause.probability != 1.0 => {
                guarded(idx, 0, &clause.head, clause.probability, lits.clone(), &mut taken, &mut clauses);
            }
            Body::Conjunction(_) => clauses.push(clause.clone()),
        }
    }
    Program {
        clauses,
        directives: program.directives.clone(),
        source_name: program.source_name.clone(),
    }
}
