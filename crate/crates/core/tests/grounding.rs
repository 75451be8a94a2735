mod common;

use std::collections::BTreeSet;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relplp_core::ground::{ground_full, ground_relevant, herbrand_size, GroundAtom, GroundProgram};
use relplp_core::syntax::{desugar_annotated_bodies, parse_atom, parse_program, Program};

fn ga(text: &str) -> GroundAtom {
    GroundAtom::new(parse_atom(text).unwrap()).unwrap()
}

fn desugared(source: &str) -> Program {
    desugar_annotated_bodies(&parse_program(source).unwrap())
}

fn targets(program: &Program) -> Vec<GroundAtom> {
    program
        .queries()
        .chain(program.evidence().map(|(a, _)| a))
        .map(|a| GroundAtom::new(a.clone()).unwrap())
        .collect()
}

fn text_sets(gp: &GroundProgram) -> (BTreeSet<String>, BTreeSet<(String, Vec<String>)>) {
    let facts = gp.facts.iter().map(|f| f.atom.to_string()).collect();
    let rules = gp
        .rules
        .iter()
        .map(|r| (r.head.to_string(), r.body.iter().map(|a| a.to_string()).collect()))
        .collect();
    (facts, rules)
}

fn assert_matches_bottom_up(source: &str) {
    let program = desugared(source);
    let gp = ground_full(&program, &[]).unwrap();
    let (facts, rules) = text_sets(&gp);
    let (want_facts, want_rules) = bottom_up(&program);
    assert_eq!(facts, want_facts, "facts differ for\n{source}");
    assert_eq!(rules, want_rules, "rules differ for\n{source}");
}

#[test]
fn fixtures_match_bottom_up() {
    for source in [INT1, INT1_VERBATIM, INT2, INT3, INT4, INT5] {
        assert_matches_bottom_up(source);
    }
}

#[test]
fn random_programs_match_bottom_up() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..150 {
        let p = random_program(&mut rng, 12, 10);
        assert_matches_bottom_up(&p.source);
    }
}

#[test]
fn relevant_is_the_dependency_closure_of_full() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let p = random_program(&mut rng, 12, 10);
        let program = desugared(&p.source);
        let targets: Vec<GroundAtom> = p.queries.iter().map(|q| ga(q)).collect();
        let full = ground_full(&program, &targets).unwrap();
        let relevant = ground_relevant(&program, &targets).unwrap();

        let mut reached: BTreeSet<String> = BTreeSet::new();
        let mut stack: Vec<String> = targets.iter().map(|t| t.to_string()).collect();
        while let Some(atom) = stack.pop() {
            if reached.insert(atom.clone()) {
                for rule in full.rules.iter().filter(|r| r.head.to_string() == atom) {
                    stack.extend(rule.body.iter().map(|a| a.to_string()));
                }
            }
        }
        let (facts, rules) = text_sets(&relevant);
        let (full_facts, full_rules) = text_sets(&full);
        let want_facts: BTreeSet<String> = full_facts.into_iter().filter(|f| reached.contains(f)).collect();
        let want_rules: BTreeSet<_> = full_rules.into_iter().filter(|(h, _)| reached.contains(h)).collect();
        assert_eq!(facts, want_facts, "{}", p.source);
        assert_eq!(rules, want_rules, "{}", p.source);
        for (f, g) in relevant.facts.iter().zip(full.facts.iter().filter(|g| reached.contains(&g.atom.to_string()))) {
            assert_eq!(f, g);
        }
    }
}

#[test]
fn herbrand_ordering_on_fixtures() {
    let size = |source: &str| {
        let program = desugared(source);
        herbrand_size(&ground_full(&program, &targets(&program)).unwrap())
    };
    let (h1, h3, h4, h5) = (size(INT1), size(INT3), size(INT4), size(INT5));
    assert!(h4 > h1, "{h4} > {h1}");
    assert!(h3 > h1, "{h3} > {h1}");
    assert_eq!(h4, h5);
    let h2 = size(INT2);
    assert!(h2 < h1);
}

#[test]
fn grounding_is_deterministic() {
    let program = desugared(INT3);
    let t = targets(&program);
    let a = ground_relevant(&program, &t).unwrap().to_canonical_text();
    let b = ground_relevant(&program, &t).unwrap().to_canonical_text();
    assert_eq!(a, b);
}
