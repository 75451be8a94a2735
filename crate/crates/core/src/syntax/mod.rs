//! Abstract syntax, parser, canonical renderer and desugaring for the PLP
//! source format.

mod ast;
mod desugar;
mod parser;
mod render;

pub use ast::{Alternative, Atom, Body, BodyLiteral, Clause, Directive, Program, Term};
pub use desugar::desugar_annotated_bodies;
pub use parser::{parse_atom, parse_program, ParseError};
pub use render::{format_probability, render_program};
