#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use relplp_core::syntax::{Atom, BodyLiteral, Program, Term};

pub const INT1: &str = include_str!("../../../../fixtures/paper/int1_reconciled.pl");
pub const INT1_VERBATIM: &str = include_str!("../../../../fixtures/paper/int1.pl");
pub const INT2: &str = include_str!("../../../../fixtures/paper/int2.pl");
pub const INT3: &str = include_str!("../../../../fixtures/paper/int3.pl");
pub const INT4: &str = include_str!("../../../../fixtures/paper/int4.pl");
pub const INT5: &str = include_str!("../../../../fixtures/paper/int5.pl");
pub const LISTING_C: &str = include_str!("../../../../fixtures/paper/listing_c.pl");
pub const LISTING_D: &str = include_str!("../../../../fixtures/paper/listing_d.pl");
pub const PRIORS: &str = include_str!("../../../../fixtures/paper/priors.tsv");
pub const PRIORS_INT5: &str = include_str!("../../../../fixtures/paper/priors_int5.tsv");

const CONSTANTS: [&str; 4] = ["a", "b", "c", "d"];
/// Derived predicates and their arities.
const DERIVED: [(&str, usize); 4] = [("r0", 1), ("r1", 2), ("r2", 1), ("r3", 2)];
const BASE: [(&str, usize); 2] = [("e", 2), ("u", 1)];

pub struct RandomProgram {
    pub source: String,
    pub queries: Vec<String>,
    pub evidence: Option<(String, bool)>,
}

fn weight(rng: &mut impl Rng) -> String {
    format!("{:.2}", rng.gen_range(0.05..0.95))
}

fn literal(rng: &mut impl Rng, vars: &[&str]) -> String {
    let pool: Vec<(&str, usize)> = BASE.iter().chain(DERIVED.iter()).copied().collect();
    let (name, arity) = *pool.choose(rng).unwrap();
    let args: Vec<String> = (0..arity)
        .map(|_| {
            if rng.gen_bool(0.15) {
                CONSTANTS.choose(rng).unwrap().to_string()
            } else {
                vars.choose(rng).unwrap().to_string()
            }
        })
        .collect();
    format!("{name}({})", args.join(","))
}

fn mentions(lits: &[String], var: &str) -> bool {
    lits.iter()
        .any(|l| l.split(['(', ')', ',']).any(|tok| tok == var))
}

/// A random range-restricted program over a small vocabulary, possibly
/// recursive, with labelled rules, annotated bodies and inequalities.
pub fn random_program(rng: &mut impl Rng, max_facts: usize, max_rules: usize) -> RandomProgram {
    let mut out = String::new();
    let n_facts = rng.gen_range(1..=max_facts);
    for _ in 0..n_facts {
        let (name, arity) = *BASE.choose(rng).unwrap();
        let args: Vec<&str> = (0..arity).map(|_| *CONSTANTS.choose(rng).unwrap()).collect();
        out.push_str(&format!("{}::{name}({}).\n", weight(rng), args.join(",")));
    }
    if rng.gen_bool(0.3) {
        out.push_str(&format!("u({}).\n", CONSTANTS.choose(rng).unwrap()));
    }
    let n_rules = rng.gen_range(1..=max_rules);
    for _ in 0..n_rules {
        let (head, arity) = *DERIVED.choose(rng).unwrap();
        let head_vars: Vec<&str> = ["X", "Y"][..arity].to_vec();
        let head_text = format!("{head}({})", head_vars.join(","));
        if rng.gen_bool(0.1) {
            // Each branch binds every head variable on its own.
            let branch = |rng: &mut dyn rand::RngCore| -> String {
                if arity == 1 {
                    if rng.gen_bool(0.5) {
                        "u(X)".into()
                    } else {
                        format!("e(X,{})", CONSTANTS.choose(rng).unwrap())
                    }
                } else if rng.gen_bool(0.5) {
                    "e(X,Y)".into()
                } else {
                    "r1(X,Y)".into()
                }
            };
            let n = rng.gen_range(1..=3);
            let branches: Vec<String> = (0..n)
                .map(|_| format!("{}::{}", weight(rng), branch(rng)))
                .collect();
            out.push_str(&format!("{head_text} :- {}.\n", branches.join("; ")));
            continue;
        }
        let vars = ["X", "Y", "Z"];
        let mut body: Vec<String> = (0..rng.gen_range(1..=3)).map(|_| literal(rng, &vars)).collect();
        for v in &head_vars {
            if !mentions(&body, v) {
                body.push(format!("u({v})"));
            }
        }
        if rng.gen_bool(0.2) {
            let bound: Vec<&str> = vars.iter().copied().filter(|v| mentions(&body, v)).collect();
            if bound.len() >= 2 {
                body.push(format!("{} \\= {}", bound[0], bound[1]));
            } else if let Some(v) = bound.first() {
                body.push(format!("{v} \\= {}", CONSTANTS.choose(rng).unwrap()));
            }
        }
        let label = if rng.gen_bool(0.2) { format!("{}::", weight(rng)) } else { String::new() };
        out.push_str(&format!("{label}{head_text} :- {}.\n", body.join(", ")));
    }
    let ground = |rng: &mut dyn rand::RngCore, pool: &[(&str, usize)]| -> String {
        let (name, arity) = *pool.choose(rng).unwrap();
        let args: Vec<&str> = (0..arity).map(|_| *CONSTANTS.choose(rng).unwrap()).collect();
        format!("{name}({})", args.join(","))
    };
    let queries: Vec<String> = (0..rng.gen_range(1..=3)).map(|_| ground(rng, &DERIVED)).collect();
    let evidence = if rng.gen_bool(0.5) {
        let pool: Vec<(&str, usize)> = BASE.iter().chain(DERIVED.iter()).copied().collect();
        Some((ground(rng, &pool), rng.gen_bool(0.7)))
    } else {
        None
    };
    RandomProgram {
        source: out,
        queries,
        evidence,
    }
}

type Bindings = HashMap<String, Term>;

fn substitute(term: &Term, b: &Bindings) -> Term {
    match term {
        Term::Variable(v) => b.get(v).cloned().unwrap_or_else(|| term.clone()),
        Term::Constant(_) => term.clone(),
        Term::Compound(f, args) => Term::Compound(f.clone(), args.iter().map(|a| substitute(a, b)).collect()),
    }
}

fn substitute_atom(atom: &Atom, b: &Bindings) -> Atom {
    Atom::new(atom.predicate.clone(), atom.args.iter().map(|t| substitute(t, b)).collect())
}

fn matches(pattern: &Term, ground: &Term, b: &mut Bindings) -> bool {
    match pattern {
        Term::Variable(v) => match b.get(v) {
            Some(bound) => bound == ground,
            None => {
                b.insert(v.clone(), ground.clone());
                true
            }
        },
        Term::Constant(c) => matches!(ground, Term::Constant(g) if g == c),
        Term::Compound(f, args) => match ground {
            Term::Compound(g, gargs) if g == f && gargs.len() == args.len() => {
                args.iter().zip(gargs).all(|(p, g)| matches(p, g, b))
            }
            _ => false,
        },
    }
}

fn instantiates(template: &Atom, ground: &Atom) -> bool {
    template.predicate == ground.predicate
        && template.arity() == ground.arity()
        && {
            let mut b = Bindings::new();
            template.args.iter().zip(&ground.args).all(|(p, g)| matches(p, g, &mut b))
        }
}

/// Ground instances of a desugared program by naive bottom-up evaluation:
/// `(facts, rules)` as rendered text, rules as `(head, body)`.
pub fn bottom_up(program: &Program) -> (BTreeSet<String>, BTreeSet<(String, Vec<String>)>) {
    let mut known: HashSet<Atom> = HashSet::new();
    let mut facts = BTreeSet::new();
    // Non-ground facts are instantiated when a body literal reaches them
    // with ground arguments.
    let mut templates: Vec<&Atom> = Vec::new();
    for clause in program.clauses.iter().filter(|c| c.is_fact()) {
        if clause.head.is_ground() {
            known.insert(clause.head.clone());
            facts.insert(clause.head.to_string());
        } else {
            templates.push(&clause.head);
        }
    }
    let mut rules = BTreeSet::new();
    loop {
        let before = (known.len(), rules.len());
        let snapshot: Vec<Atom> = known.iter().cloned().collect();
        for clause in program.clauses.iter().filter(|c| !c.is_fact()) {
            let lits = clause.literals().expect("desugared");
            let positives: Vec<&Atom> = lits
                .iter()
                .filter_map(|l| match l {
                    BodyLiteral::Positive(a) => Some(a),
                    _ => None,
                })
                .collect();
            let mut partial: Vec<Bindings> = vec![Bindings::new()];
            for pattern in &positives {
                let mut next = Vec::new();
                for b in &partial {
                    let instance = substitute_atom(pattern, b);
                    if instance.is_ground() && templates.iter().any(|t| instantiates(t, &instance)) {
                        next.push(b.clone());
                        continue;
                    }
                    for g in snapshot.iter().filter(|g| g.predicate == pattern.predicate && g.arity() == pattern.arity()) {
                        let mut b2 = b.clone();
                        if pattern.args.iter().zip(&g.args).all(|(p, t)| matches(p, t, &mut b2)) {
                            next.push(b2);
                        }
                    }
                }
                partial = next;
            }
            'instances: for mut b in partial {
                for lit in lits {
                    match lit {
                        BodyLiteral::Positive(_) => {}
                        BodyLiteral::Inequality(l, r) => {
                            let (l, r) = (substitute(l, &b), substitute(r, &b));
                            if !l.is_ground() || !r.is_ground() || l == r {
                                continue 'instances;
                            }
                        }
                        BodyLiteral::Equality(l, r) => {
                            let (l, r) = (substitute(l, &b), substitute(r, &b));
                            let ok = if r.is_ground() { matches(&l, &r, &mut b) } else { matches(&r, &l, &mut b) };
                            if !ok {
                                continue 'instances;
                            }
                        }
                    }
                }
                let head = substitute_atom(&clause.head, &b);
                if !head.is_ground() {
                    continue;
                }
                let body: Vec<Atom> = positives.iter().map(|p| substitute_atom(p, &b)).collect();
                for atom in &body {
                    if templates.iter().any(|t| instantiates(t, atom)) {
                        facts.insert(atom.to_string());
                        known.insert(atom.clone());
                    }
                }
                let body: Vec<String> = body.iter().map(|a| a.to_string()).collect();
                rules.insert((head.to_string(), body));
                known.insert(head);
            }
        }
        if (known.len(), rules.len()) == before {
            break;
        }
    }
    (facts, rules)
}
