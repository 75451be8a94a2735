use std::collections::BTreeSet;

/// A logical term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// Lowercase identifier or decimal number, kept as its source text.
    Constant(String),
    /// Uppercase or underscore-initial identifier.
    Variable(String),
    /// `functor(arg, ...)` with at least one argument.
    Compound(String, Vec<Term>),
}

impl Term {
    pub fn constant(name: impl Into<String>) -> Self {
        Term::Constant(name.into())
    }

    pub fn variable(name: impl Into<String>) -> Self {
        Term::Variable(name.into())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Constant(_) => true,
            Term::Variable(_) => false,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Pushes the variables of this term in order of first occurrence.
    pub fn collect_variables(&self, out: &mut Vec<String>) {
        match self {
            Term::Constant(_) => {}
            Term::Variable(v) => {
                if !out.iter().any(|seen| seen == v) {
                    out.push(v.clone());
                }
            }
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_variables(out)),
        }
    }
}

/// `predicate(arg, ...)`; zero-argument atoms are propositions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn signature(&self) -> (String, usize) {
        (self.predicate.clone(), self.args.len())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn collect_variables(&self, out: &mut Vec<String>) {
        self.args.iter().for_each(|a| a.collect_variables(out));
    }

    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_variables(&mut out);
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BodyLiteral {
    Positive(Atom),
    /// `left \= right`: succeeds when the two ground terms differ.
    Inequality(Term, Term),
    /// `left = right`: unifies the two terms.
    Equality(Term, Term),
}

impl BodyLiteral {
    pub fn collect_variables(&self, out: &mut Vec<String>) {
        match self {
            BodyLiteral::Positive(atom) => atom.collect_variables(out),
            BodyLiteral::Inequality(l, r) | BodyLiteral::Equality(l, r) => {
                l.collect_variables(out);
                r.collect_variables(out);
            }
        }
    }
}

/// One `p::goal, ...` branch of an annotated disjunctive body.
#[derive(Debug, Clone, PartialEq)]
pub struct Alternative {
    pub probability: f64,
    pub literals: Vec<BodyLiteral>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Conjunction(Vec<BodyLiteral>),
    /// `h :- p1::g1 ; p2::g2 ; ...`, removed by desugaring.
    Annotated(Vec<Alternative>),
}

impl Body {
    pub fn is_empty(&self) -> bool {
        matches!(self, Body::Conjunction(lits) if lits.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub probability: f64,
    pub head: Atom,
    pub body: Body,
}

impl Clause {
    pub fn fact(probability: f64, head: Atom) -> Self {
        Clause {
            probability,
            head,
            body: Body::Conjunction(Vec::new()),
        }
    }

    pub fn rule(head: Atom, body: Vec<BodyLiteral>) -> Self {
        Clause {
            probability: 1.0,
            head,
            body: Body::Conjunction(body),
        }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    /// Plain conjunctive body literals, `None` for an annotated body.
    pub fn literals(&self) -> Option<&[BodyLiteral]> {
        match &self.body {
            Body::Conjunction(lits) => Some(lits),
            Body::Annotated(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    Query(Atom),
    Evidence(Atom, bool),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Program {
    pub clauses: Vec<Clause>,
    pub directives: Vec<Directive>,
    pub source_name: String,
}

impl Program {
    pub fn queries(&self) -> impl Iterator<Item = &Atom> {
        self.directives.iter().filter_map(|d| match d {
            Directive::Query(a) => Some(a),
            Directive::Evidence(..) => None,
        })
    }

    pub fn evidence(&self) -> impl Iterator<Item = (&Atom, bool)> {
        self.directives.iter().filter_map(|d| match d {
            Directive::Evidence(a, polarity) => Some((a, *polarity)),
            Directive::Query(_) => None,
        })
    }

    /// Every predicate/arity pair mentioned in clause heads or bodies.
    pub fn signatures(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        for clause in &self.clauses {
            out.insert(clause.head.signature());
            let mut add_lits = |lits: &[BodyLiteral]| {
                for lit in lits {
                    if let BodyLiteral::Positive(a) = lit {
                        out.insert(a.signature());
                    }
                }
            };
            match &clause.body {
                Body::Conjunction(lits) => add_lits(lits),
                Body::Annotated(alts) => alts.iter().for_each(|alt| add_lits(&alt.literals)),
            }
        }
        out
    }
}
