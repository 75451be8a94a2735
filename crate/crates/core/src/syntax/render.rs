//! Canonical text form. `parse_program(&render_program(p))` is structurally
//! equal to `p`.

use std::fmt::{self, Display, Formatter, Write};

use super::ast::{Alternative, Atom, Body, BodyLiteral, Clause, Directive, Program, Term};

fn write_args(f: &mut Formatter<'_>, args: &[Term]) -> fmt::Result {
    f.write_char('(')?;
    for (i, arg) in args.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{arg}")?;
    }
    f.write_char(')')
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Constant(name) | Term::Variable(name) => f.write_str(name),
            Term::Compound(functor, args) => {
                f.write_str(functor)?;
                write_args(f, args)
            }
        }
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if self.args.is_empty() {
            Ok(())
        } else {
            write_args(f, &self.args)
        }
    }
}

impl Display for BodyLiteral {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            BodyLiteral::Positive(atom) => write!(f, "{atom}"),
            BodyLiteral::Inequality(l, r) => write!(f, "{l} \\= {r}"),
            BodyLiteral::Equality(l, r) => write!(f, "{l} = {r}"),
        }
    }
}

fn write_conjunction(f: &mut Formatter<'_>, lits: &[BodyLiteral]) -> fmt::Result {
    for (i, lit) in lits.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{lit}")?;
    }
    Ok(())
}

impl Display for Alternative {
    // Always labelled, so a single-branch annotated body stays annotated.
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}::", format_probability(self.probability))?;
        write_conjunction(f, &self.literals)
    }
}

impl Display for Clause {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.probability != 1.0 {
            write!(f, "{}::", format_probability(self.probability))?;
        }
        write!(f, "{}", self.head)?;
        match &self.body {
            Body::Conjunction(lits) if lits.is_empty() => {}
            Body::Conjunction(lits) => {
                f.write_str(" :- ")?;
                write_conjunction(f, lits)?;
            }
            Body::Annotated(alts) => {
                f.write_str(" :- ")?;
                for (i, alt) in alts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{alt}")?;
                }
            }
        }
        f.write_char('.')
    }
}

impl Display for Directive {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Directive::Query(atom) => write!(f, "query({atom})."),
            Directive::Evidence(atom, true) => write!(f, "evidence({atom})."),
            Directive::Evidence(atom, false) => write!(f, "evidence({atom},false)."),
        }
    }
}

/// Shortest decimal that reads back to the same `f64`.
pub fn format_probability(p: f64) -> String {
    format!("{p}")
}

/// One clause per line in source order, then one directive per line.
pub fn render_program(program: &Program) -> String {
    let mut out = String::new();
    for clause in &program.clauses {
        let _ = writeln!(out, "{clause}");
    }
    for directive in &program.directives {
        let _ = writeln!(out, "{directive}");
    }
    out
}
