//! Compilation of the relevant ground program to a BDD.
//!
//! Each atom's formula is the least fixpoint of
//! `F(a) = fact(a) ∨ ⋁_{a :- b1..bk} F(b1) ∧ .. ∧ F(bk)`, starting from
//! `false`. Canonicity makes the convergence test a node-id comparison, and
//! starting from `false` gives least-model semantics on cyclic programs.

use super::{Cone, Net};
use crate::bdd::{Bdd, NodeId};

pub(super) fn weigh(
    net: &Net,
    cone: &Cone,
    numerator: &[(usize, bool)],
    evidence: &[(usize, bool)],
) -> (f64, f64) {
    let mut bdd = Bdd::new();
    let n = net.certain.len();
    let mut base = vec![NodeId::FALSE; n];
    let mut weights = Vec::with_capacity(cone.facts.len());
    for (v, &f) in cone.facts.iter().enumerate() {
        base[net.prob_atom[f]] = bdd.var(v as u32);
        weights.push(net.probs[f]);
    }
    for &a in &cone.atoms {
        if net.certain[a] {
            base[a] = NodeId::TRUE;
        }
    }

    let mut formula = base.clone();
    loop {
        let mut changed = false;
        for &a in cone.atoms.iter().rev() {
            let mut f = base[a];
            for &r in &net.rules_by_head[a] {
                let mut conj = NodeId::TRUE;
                for &b in &net.rules[r].1 {
                    conj = bdd.and(conj, formula[b]);
                    if conj == NodeId::FALSE {
                        break;
                    }
                }
                f = bdd.or(f, conj);
            }
            if f != formula[a] {
                formula[a] = f;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut conjoin = |lits: &[(usize, bool)], mut acc: NodeId| {
        for &(a, positive) in lits {
            let lit = if positive { formula[a] } else { bdd.not(formula[a]) };
            acc = bdd.and(acc, lit);
        }
        acc
    };
    let den = conjoin(evidence, NodeId::TRUE);
    let num = conjoin(numerator, den);
    (bdd.wmc(num, &weights), bdd.wmc(den, &weights))
}
