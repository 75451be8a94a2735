//! Grounding by tabled goal-directed resolution.
//!
//! Every call pattern (a body atom with its current bindings, up to variable
//! renaming) owns a table of ground answers. Calls are re-evaluated against
//! the current tables until no table, fact or rule instance changes. This
//! terminates on cyclic graphs and function-free recursion because answers
//! only ever grow within a finite Herbrand universe.
//!
//! Builtins are evaluated as soon as their arguments are ground. An
//! inequality whose arguments never become ground is a grounding error.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Deref;

use thiserror::Error;

use crate::syntax::{format_probability, Atom, Body, BodyLiteral, Clause, Program, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundingError {
    #[error("clause `{clause}` leaves variable(s) {variables:?} unbound in its head")]
    UnboundVariable {
        clause: String,
        variables: Vec<String>,
    },
    #[error("clause `{clause}` compares non-ground terms with `\\=`")]
    NonGroundInequality { clause: String },
    #[error("clause `{clause}` must be desugared before grounding")]
    Undesugared { clause: String },
    #[error("`{0}` is not a ground atom")]
    NonGroundTarget(String),
}

/// An atom without variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom(Atom);

impl GroundAtom {
    pub fn new(atom: Atom) -> Option<Self> {
        atom.is_ground().then_some(GroundAtom(atom))
    }

    pub fn atom(&self) -> &Atom {
        &self.0
    }

    pub fn into_atom(self) -> Atom {
        self.0
    }
}

impl TryFrom<Atom> for GroundAtom {
    type Error = GroundingError;

    fn try_from(atom: Atom) -> Result<Self, Self::Error> {
        let text = atom.to_string();
        GroundAtom::new(atom).ok_or(GroundingError::NonGroundTarget(text))
    }
}

impl Deref for GroundAtom {
    type Target = Atom;

    fn deref(&self) -> &Atom {
        &self.0
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundFact {
    pub probability: f64,
    pub atom: GroundAtom,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundRule {
    pub head: GroundAtom,
    pub body: Vec<GroundAtom>,
}

impl fmt::Display for GroundRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        for (i, atom) in self.body.iter().enumerate() {
            f.write_str(if i == 0 { " :- " } else { ", " })?;
            write!(f, "{atom}")?;
        }
        f.write_str(".")
    }
}

/// Ground clauses after builtin elimination, plus the enumeration of every
/// ground atom they mention.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundProgram {
    /// One entry per atom; several source facts for the same atom are merged
    /// by noisy-or.
    pub facts: Vec<GroundFact>,
    pub rules: Vec<GroundRule>,
    /// Sorted by rendered text.
    pub atoms: Vec<GroundAtom>,
    pub targets: Vec<GroundAtom>,
    index: HashMap<GroundAtom, usize>,
}

impl GroundProgram {
    fn assemble(
        facts: BTreeMap<GroundAtom, f64>,
        rules: Vec<GroundRule>,
        targets: Vec<GroundAtom>,
    ) -> Self {
        let mut set: HashSet<&GroundAtom> = HashSet::new();
        set.extend(facts.keys());
        for rule in &rules {
            set.insert(&rule.head);
            set.extend(rule.body.iter());
        }
        set.extend(targets.iter());
        let mut keyed: Vec<(String, GroundAtom)> =
            set.into_iter().map(|a| (a.to_string(), a.clone())).collect();
        keyed.sort();
        let atoms: Vec<GroundAtom> = keyed.into_iter().map(|(_, a)| a).collect();
        let index = atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();

        let mut facts: Vec<GroundFact> = facts
            .into_iter()
            .map(|(atom, probability)| GroundFact { probability, atom })
            .collect();
        facts.sort_by_cached_key(|f| f.atom.to_string());
        let mut rules = rules;
        rules.sort_by_cached_key(|r| r.to_string());

        GroundProgram {
            facts,
            rules,
            atoms,
            targets,
            index,
        }
    }

    pub fn atom_id(&self, atom: &GroundAtom) -> Option<usize> {
        self.index.get(atom).copied()
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.index.contains_key(atom)
    }

    /// Canonical dump: facts, then rules, one per line, each block sorted.
    pub fn to_canonical_text(&self) -> String {
        let mut out = String::new();
        for fact in &self.facts {
            if fact.probability == 1.0 {
                out.push_str(&format!("{}.\n", fact.atom));
            } else {
                out.push_str(&format!("{}::{}.\n", format_probability(fact.probability), fact.atom));
            }
        }
        for rule in &self.rules {
            out.push_str(&format!("{rule}\n"));
        }
        out
    }
}

/// Number of distinct ground atoms in facts, rule heads, rule bodies and
/// targets.
pub fn herbrand_size(gp: &GroundProgram) -> usize {
    gp.atoms.len()
}

type Subst = HashMap<String, Term>;

fn resolve(term: &Term, subst: &Subst) -> Term {
    match term {
        Term::Variable(v) => match subst.get(v) {
            Some(bound) => resolve(bound, subst),
            None => term.clone(),
        },
        Term::Constant(_) => term.clone(),
        Term::Compound(f, args) => {
            Term::Compound(f.clone(), args.iter().map(|a| resolve(a, subst)).collect())
        }
    }
}

fn resolve_atom(atom: &Atom, subst: &Subst) -> Atom {
    Atom::new(atom.predicate.clone(), atom.args.iter().map(|a| resolve(a, subst)).collect())
}

fn occurs(var: &str, term: &Term, subst: &Subst) -> bool {
    match term {
        Term::Variable(v) if v == var => true,
        Term::Variable(v) => subst.get(v).is_some_and(|t| occurs(var, t, subst)),
        Term::Constant(_) => false,
        Term::Compound(_, args) => args.iter().any(|a| occurs(var, a, subst)),
    }
}

fn unify(a: &Term, b: &Term, subst: &mut Subst) -> bool {
    let a = walk(a, subst);
    let b = walk(b, subst);
    match (&a, &b) {
        (Term::Variable(x), Term::Variable(y)) if x == y => true,
        (Term::Variable(x), other) | (other, Term::Variable(x)) => {
            if occurs(x, other, subst) {
                return false;
            }
            subst.insert(x.clone(), other.clone());
            true
        }
        (Term::Constant(x), Term::Constant(y)) => x == y,
        (Term::Compound(f, xs), Term::Compound(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify(x, y, subst))
        }
        _ => false,
    }
}

fn walk(term: &Term, subst: &Subst) -> Term {
    let mut current = term.clone();
    while let Term::Variable(v) = &current {
        match subst.get(v) {
            Some(next) => current = next.clone(),
            None => break,
        }
    }
    current
}

fn unify_args(xs: &[Term], ys: &[Term], subst: &mut Subst) -> bool {
    xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify(x, y, subst))
}

/// Renames variables by first occurrence to `?0`, `?1`, ... so that variant
/// calls share a table. `?` cannot start a source variable.
fn variant_key(atom: &Atom) -> Atom {
    fn go(term: &Term, names: &mut Vec<String>) -> Term {
        match term {
            Term::Variable(v) => {
                let idx = match names.iter().position(|n| n == v) {
                    Some(i) => i,
                    None => {
                        names.push(v.clone());
                        names.len() - 1
                    }
                };
                Term::Variable(format!("?{idx}"))
            }
            Term::Constant(_) => term.clone(),
            Term::Compound(f, args) => {
                Term::Compound(f.clone(), args.iter().map(|a| go(a, names)).collect())
            }
        }
    }
    let mut names = Vec::new();
    Atom::new(atom.predicate.clone(), atom.args.iter().map(|a| go(a, &mut names)).collect())
}

#[derive(Default)]
struct Table {
    answers: Vec<GroundAtom>,
    seen: HashSet<GroundAtom>,
}

struct Engine<'p> {
    program: &'p Program,
    by_signature: HashMap<(String, usize), Vec<usize>>,
    keys: Vec<Atom>,
    tables: Vec<Table>,
    table_index: HashMap<Atom, usize>,
    rules: Vec<GroundRule>,
    rule_set: HashSet<GroundRule>,
    /// atom -> (clause index -> label)
    facts: BTreeMap<GroundAtom, BTreeMap<usize, f64>>,
    changed: bool,
}

impl<'p> Engine<'p> {
    fn new(program: &'p Program) -> Result<Self, GroundingError> {
        let mut by_signature: HashMap<(String, usize), Vec<usize>> = HashMap::new();
        for (idx, clause) in program.clauses.iter().enumerate() {
            let undesugared = matches!(clause.body, Body::Annotated(_))
                || (!clause.is_fact() && clause.probability != 1.0);
            if undesugared {
                return Err(GroundingError::Undesugared {
                    clause: clause.to_string(),
                });
            }
            by_signature.entry(clause.head.signature()).or_default().push(idx);
        }
        Ok(Engine {
            program,
            by_signature,
            keys: Vec::new(),
            tables: Vec::new(),
            table_index: HashMap::new(),
            rules: Vec::new(),
            rule_set: HashSet::new(),
            facts: BTreeMap::new(),
            changed: false,
        })
    }

    fn table_for(&mut self, call: &Atom) -> usize {
        let key = variant_key(call);
        if let Some(&id) = self.table_index.get(&key) {
            return id;
        }
        let id = self.tables.len();
        self.keys.push(key.clone());
        self.tables.push(Table::default());
        self.table_index.insert(key, id);
        self.changed = true;
        id
    }

    fn add_answer(&mut self, table: usize, answer: GroundAtom) {
        let t = &mut self.tables[table];
        if t.seen.insert(answer.clone()) {
            t.answers.push(answer);
            self.changed = true;
        }
    }

    fn run(&mut self) -> Result<(), GroundingError> {
        loop {
            self.changed = false;
            let mut i = 0;
            while i < self.tables.len() {
                self.evaluate(i)?;
                i += 1;
            }
            if !self.changed {
                return Ok(());
            }
        }
    }

    fn evaluate(&mut self, table: usize) -> Result<(), GroundingError> {
        let call = self.keys[table].clone();
        let Some(candidates) = self.by_signature.get(&call.signature()).cloned() else {
            return Ok(());
        };
        let program = self.program;
        for clause_idx in candidates {
            let clause = &program.clauses[clause_idx];
            let mut subst = Subst::new();
            if !unify_args(&call.args, &clause.head.args, &mut subst) {
                continue;
            }
            if clause.is_fact() {
                // A fact that stays non-ground under this call is skipped.
                if let Some(atom) = GroundAtom::new(resolve_atom(&clause.head, &subst)) {
                    let labels = self.facts.entry(atom.clone()).or_default();
                    if labels.insert(clause_idx, clause.probability).is_none() {
                        self.changed = true;
                    }
                    self.add_answer(table, atom);
                }
                continue;
            }
            let literals = clause.literals().unwrap_or(&[]);
            let mut body = Vec::with_capacity(literals.len());
            self.solve(clause, table, literals, 0, subst, Vec::new(), &mut body)?;
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn solve(
        &mut self,
        clause: &'p Clause,
        table: usize,
        literals: &'p [BodyLiteral],
        at: usize,
        subst: Subst,
        pending: Vec<(Term, Term)>,
        body: &mut Vec<GroundAtom>,
    ) -> Result<(), GroundingError> {
        // Discharge inequalities whose sides are now ground.
        let mut still_pending = Vec::with_capacity(pending.len());
        for (l, r) in pending {
            let (l, r) = (resolve(&l, &subst), resolve(&r, &subst));
            if l.is_ground() && r.is_ground() {
                if l == r {
                    return Ok(());
                }
            } else {
                still_pending.push((l, r));
            }
        }

        if at == literals.len() {
            if !still_pending.is_empty() {
                return Err(GroundingError::NonGroundInequality {
                    clause: clause.to_string(),
                });
            }
            let head = resolve_atom(&clause.head, &subst);
            let Some(head) = GroundAtom::new(head.clone()) else {
                return Err(GroundingError::UnboundVariable {
                    clause: clause.to_string(),
                    variables: head.variables(),
                });
            };
            let rule = GroundRule {
                head: head.clone(),
                body: body.clone(),
            };
            if self.rule_set.insert(rule.clone()) {
                self.rules.push(rule);
                self.changed = true;
            }
            self.add_answer(table, head);
            return Ok(());
        }

        match &literals[at] {
            BodyLiteral::Positive(atom) => {
                let goal = resolve_atom(atom, &subst);
                let sub = self.table_for(&goal);
                let answers = self.tables[sub].answers.clone();
                for answer in answers {
                    let mut next = subst.clone();
                    if unify_args(&goal.args, &answer.args, &mut next) {
                        body.push(answer);
                        self.solve(clause, table, literals, at + 1, next, still_pending.clone(), body)?;
                        body.pop();
                    }
                }
                Ok(())
            }
            BodyLiteral::Equality(l, r) => {
                let mut next = subst;
                if unify(l, r, &mut next) {
                    self.solve(clause, table, literals, at + 1, next, still_pending, body)?;
                }
                Ok(())
            }
            BodyLiteral::Inequality(l, r) => {
                still_pending.push((l.clone(), r.clone()));
                self.solve(clause, table, literals, at + 1, subst, still_pending, body)
            }
        }
    }

    fn merged_facts(&self, keep: impl Fn(&GroundAtom) -> bool) -> BTreeMap<GroundAtom, f64> {
        self.facts
            .iter()
            .filter(|(atom, _)| keep(atom))
            .map(|(atom, labels)| {
                let none: f64 = labels.values().map(|p| 1.0 - p).product();
                let p = if labels.values().any(|&p| p == 1.0) {
                    1.0
                } else if labels.len() == 1 {
                    *labels.values().next().unwrap()
                } else {
                    1.0 - none
                };
                (atom.clone(), p)
            })
            .collect()
    }
}

fn seed(engine: &mut Engine<'_>, targets: &[GroundAtom]) {
    for target in targets {
        engine.table_for(target.atom());
    }
}

/// The ground program relevant to `targets`: every ground clause on which
/// some target depends, reached by goal-directed resolution from the targets.
/// Targets without a derivation stay in the atom enumeration with no support.
pub fn ground_relevant(
    program: &Program,
    targets: &[GroundAtom],
) -> Result<GroundProgram, GroundingError> {
    let mut engine = Engine::new(program)?;
    seed(&mut engine, targets);
    engine.run()?;

    let mut by_head: HashMap<&GroundAtom, Vec<&GroundRule>> = HashMap::new();
    for rule in &engine.rules {
        by_head.entry(&rule.head).or_default().push(rule);
    }
    let mut reached: BTreeSet<&GroundAtom> = BTreeSet::new();
    let mut queue: VecDeque<&GroundAtom> = targets.iter().collect();
    let mut rules = Vec::new();
    while let Some(atom) = queue.pop_front() {
        if !reached.insert(atom) {
            continue;
        }
        for rule in by_head.get(atom).into_iter().flatten() {
            rules.push((*rule).clone());
            queue.extend(rule.body.iter());
        }
    }
    let facts = engine.merged_facts(|a| reached.contains(a));
    Ok(GroundProgram::assemble(facts, rules, dedup(targets)))
}

/// Every ground clause derivable from the program, independent of any goal,
/// with `targets` added to the atom enumeration. This is the program's
/// Herbrand base in the sense used for processing-effort comparison.
pub fn ground_full(
    program: &Program,
    targets: &[GroundAtom],
) -> Result<GroundProgram, GroundingError> {
    let mut engine = Engine::new(program)?;
    let signatures: BTreeSet<(String, usize)> =
        program.clauses.iter().map(|c| c.head.signature()).collect();
    for (predicate, arity) in signatures {
        let args = (0..arity).map(|i| Term::Variable(format!("A{i}"))).collect();
        engine.table_for(&Atom::new(predicate, args));
    }
    seed(&mut engine, targets);
    engine.run()?;
    let facts = engine.merged_facts(|_| true);
    let rules = std::mem::take(&mut engine.rules);
    Ok(GroundProgram::assemble(facts, rules, dedup(targets)))
}

fn dedup(targets: &[GroundAtom]) -> Vec<GroundAtom> {
    let mut seen = HashSet::new();
    targets.iter().filter(|t| seen.insert(*t)).cloned().collect()
}
