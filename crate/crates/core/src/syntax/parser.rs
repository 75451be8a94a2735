//! Hand-written lexer and recursive-descent parser for the PLP subset.

use std::fmt;

use thiserror::Error;

use super::ast::{Alternative, Atom, Body, BodyLiteral, Clause, Directive, Program, Term};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: probability {value} is outside [0,1]")]
    ProbabilityOutOfRange {
        line: usize,
        column: usize,
        value: f64,
    },
    #[error("{line}:{column}: directive atom {atom} is not ground")]
    NonGroundDirective {
        line: usize,
        column: usize,
        atom: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Number(String),
    LParen,
    RParen,
    Comma,
    Dot,
    DoubleColon,
    Neck,
    Semicolon,
    NotEq,
    Eq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) | Tok::Number(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::DoubleColon => f.write_str("`::`"),
            Tok::Neck => f.write_str("`:-`"),
            Tok::Semicolon => f.write_str("`;`"),
            Tok::NotEq => f.write_str("`\\=`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn lex(source: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = source.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                bump!();
            }
            let word: String = chars[start..i].iter().collect();
            let tok = if c.is_ascii_uppercase() || c == '_' {
                Tok::Var(word)
            } else {
                Tok::Ident(word)
            };
            out.push((tok, pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump!();
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                bump!();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    bump!();
                }
            }
            out.push((Tok::Number(chars[start..i].iter().collect()), pos));
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, width) = match (c, next) {
            (':', Some(':')) => (Tok::DoubleColon, 2),
            (':', Some('-')) => (Tok::Neck, 2),
            ('\\', Some('=')) => (Tok::NotEq, 2),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (',', _) => (Tok::Comma, 1),
            ('.', _) => (Tok::Dot, 1),
            (';', _) => (Tok::Semicolon, 1),
            ('=', _) => (Tok::Eq, 1),
            _ => return Err(syntax(pos, format!("unexpected character `{c}`"))),
        };
        for _ in 0..width {
            bump!();
        }
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    anon: usize,
}

impl Parser {
    fn new(source: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(source)?,
            at: 0,
            anon: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let tok = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        tok
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let (tok, pos) = self.next();
        if tok == want {
            Ok(())
        } else {
            Err(syntax(pos, format!("expected {want}, found {tok}")))
        }
    }

    /// `NUMBER ::` prefix, if present.
    fn label(&mut self) -> Result<Option<f64>, ParseError> {
        if !matches!((self.peek(), self.peek2()), (Tok::Number(_), Tok::DoubleColon)) {
            return Ok(None);
        }
        let (tok, pos) = self.next();
        self.next();
        let Tok::Number(text) = tok else { unreachable!() };
        let value: f64 = text
            .parse()
            .map_err(|_| syntax(pos, format!("invalid number `{text}`")))?;
        if !(0.0..=1.0).contains(&value) {
            return Err(ParseError::ProbabilityOutOfRange {
                line: pos.line,
                column: pos.column,
                value,
            });
        }
        Ok(Some(value))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let (tok, pos) = self.next();
        match tok {
            Tok::Var(name) if name == "_" => {
                self.anon += 1;
                Ok(Term::Variable(format!("_G{}", self.anon)))
            }
            Tok::Var(name) => Ok(Term::Variable(name)),
            Tok::Number(text) => Ok(Term::Constant(text)),
            Tok::Ident(name) => {
                if *self.peek() != Tok::LParen {
                    return Ok(Term::Constant(name));
                }
                self.next();
                let mut args = vec![self.term()?];
                while *self.peek() == Tok::Comma {
                    self.next();
                    args.push(self.term()?);
                }
                self.expect(Tok::RParen)?;
                Ok(Term::Compound(name, args))
            }
            other => Err(syntax(pos, format!("expected a term, found {other}"))),
        }
    }

    fn atom_from(term: Term, pos: Pos) -> Result<Atom, ParseError> {
        match term {
            Term::Constant(name) if name.starts_with(|c: char| c.is_ascii_lowercase()) => {
                Ok(Atom::new(name, Vec::new()))
            }
            Term::Compound(name, args) => Ok(Atom::new(name, args)),
            other => Err(syntax(pos, format!("`{other}` is not an atom"))),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let pos = self.pos();
        let term = self.term()?;
        Self::atom_from(term, pos)
    }

    fn literal(&mut self) -> Result<BodyLiteral, ParseError> {
        let pos = self.pos();
        let left = self.term()?;
        match self.peek() {
            Tok::NotEq => {
                self.next();
                Ok(BodyLiteral::Inequality(left, self.term()?))
            }
            Tok::Eq => {
                self.next();
                Ok(BodyLiteral::Equality(left, self.term()?))
            }
            _ => Ok(BodyLiteral::Positive(Self::atom_from(left, pos)?)),
        }
    }

    fn conjunction(&mut self) -> Result<Vec<BodyLiteral>, ParseError> {
        let mut lits = vec![self.literal()?];
        while *self.peek() == Tok::Comma {
            self.next();
            lits.push(self.literal()?);
        }
        Ok(lits)
    }

    fn body(&mut self) -> Result<Body, ParseError> {
        let mut alts = Vec::new();
        loop {
            let label = self.label()?;
            let literals = self.conjunction()?;
            alts.push((label, literals));
            if *self.peek() != Tok::Semicolon {
                break;
            }
            self.next();
        }
        if alts.len() == 1 && alts[0].0.is_none() {
            let (_, literals) = alts.pop().unwrap();
            return Ok(Body::Conjunction(literals));
        }
        Ok(Body::Annotated(
            alts.into_iter()
                .map(|(label, literals)| Alternative {
                    probability: label.unwrap_or(1.0),
                    literals,
                })
                .collect(),
        ))
    }

    fn directive(head: &Atom, pos: Pos) -> Result<Option<Directive>, ParseError> {
        let polarity = match (head.predicate.as_str(), head.args.len()) {
            ("query", 1) | ("evidence", 1) => true,
            ("evidence", 2) => match &head.args[1] {
                Term::Constant(c) if c == "true" => true,
                Term::Constant(c) if c == "false" => false,
                other => {
                    return Err(syntax(
                        pos,
                        format!("evidence polarity must be `true` or `false`, found `{other}`"),
                    ))
                }
            },
            _ => return Ok(None),
        };
        let atom = Self::atom_from(head.args[0].clone(), pos)?;
        if !atom.is_ground() {
            return Err(ParseError::NonGroundDirective {
                line: pos.line,
                column: pos.column,
                atom: atom.to_string(),
            });
        }
        Ok(Some(if head.predicate == "query" {
            Directive::Query(atom)
        } else {
            Directive::Evidence(atom, polarity)
        }))
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut program = Program::default();
        while *self.peek() != Tok::Eof {
            let pos = self.pos();
            self.anon = 0;
            let label = self.label()?;
            let head = self.atom()?;
            let body = if *self.peek() == Tok::Neck {
                self.next();
                self.body()?
            } else {
                Body::Conjunction(Vec::new())
            };
            self.expect(Tok::Dot)?;
            if label.is_none() && body.is_empty() {
                if let Some(directive) = Self::directive(&head, pos)? {
                    program.directives.push(directive);
                    continue;
                }
            }
            program.clauses.push(Clause {
                probability: label.unwrap_or(1.0),
                head,
                body,
            });
        }
        Ok(program)
    }
}

/// Parses a whole PLP source text.
pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    Parser::new(source)?.program()
}

/// Parses a single atom such as `wantsNotDrink(mary,coffee)`.
pub fn parse_atom(text: &str) -> Result<Atom, ParseError> {
    let mut parser = Parser::new(text)?;
    let atom = parser.atom()?;
    if *parser.peek() != Tok::Eof {
        let (tok, pos) = parser.next();
        return Err(syntax(pos, format!("unexpected {tok} after atom")));
    }
    Ok(atom)
}
