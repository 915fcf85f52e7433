//! Textual `.fprop` format: parser and canonical serializer.
//!
//! ```text
//! model chain
//! values { v0 v1 }
//!
//! function F {
//!   out oF
//!   transfer oF.status = F.status
//! }
//!
//! function G {
//!   in iG
//!   out oG
//!   transfer oG.status =
//!     G.status = OK implies iG.status
//!     else G.status = Lost implies Lost
//!     else Err
//! }
//!
//! flow oF -> iG
//!
//! assert nominal {
//!   when others OK
//!   expect oG.status = OK
//! }
//! ```
//!
//! See `docs/grammar.md` in the repository for the full grammar.

mod lexer;
mod parser;
mod serialize;

use std::fmt;

use thiserror::Error;

pub use parser::is_keyword;
pub use serialize::serialize;

use crate::model::{
    build_model, Assertion, BuildError, Condition, Model, ModelDef, ScenarioConstraint,
    SemanticError, Violation,
};
use crate::SourceSpan;
use parser::Parser;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Lexical,
    Syntax,
    Semantic,
}

/// Error located in source text. The message is never empty.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub kind: ErrorKind,
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub(crate) fn new(kind: ErrorKind, span: SourceSpan, message: impl Into<String>, expected: Vec<String>) -> Self {
        let message = message.into();
        debug_assert!(!message.is_empty());
        ParseError {
            kind,
            span,
            message,
            expected,
        }
    }
}

impl From<SemanticError> for ParseError {
    fn from(e: SemanticError) -> Self {
        ParseError::new(ErrorKind::Semantic, e.span, e.message, Vec::new())
    }
}

/// Anything that can go wrong turning text into a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DslError {
    /// Lexical, syntax or semantic errors; never empty.
    Parse(Vec<ParseError>),
    /// The text parsed but the architecture breaks structural rules.
    Structure(Vec<Violation>),
}

impl DslError {
    pub fn parse_errors(&self) -> &[ParseError] {
        match self {
            DslError::Parse(e) => e,
            DslError::Structure(_) => &[],
        }
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DslError::Parse(errors) => {
                for (i, e) in errors.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            DslError::Structure(vs) => {
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for DslError {}

impl From<ParseError> for DslError {
    fn from(e: ParseError) -> Self {
        DslError::Parse(vec![e])
    }
}

impl From<SemanticError> for DslError {
    fn from(e: SemanticError) -> Self {
        DslError::Parse(vec![e.into()])
    }
}

impl From<BuildError> for DslError {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::Structure(v) => DslError::Structure(v),
            BuildError::Semantic(es) => DslError::Parse(es.into_iter().map(ParseError::from).collect()),
        }
    }
}

/// Parses model text into raw definitions without resolving names.
pub fn parse_defs(text: &str, file: &str) -> Result<ModelDef, ParseError> {
    let mut p = Parser::new(text, file)?;
    let def = p.model()?;
    p.finish(def)
}

/// Parses and builds a model. Spans name the file as `<input>`.
pub fn parse_model(text: &str) -> Result<Model, DslError> {
    parse_model_named(text, "<input>")
}

pub fn parse_model_named(text: &str, file: &str) -> Result<Model, DslError> {
    let def = parse_defs(text, file)?;
    Ok(build_model(&def)?)
}

/// Parses a standalone `assert name { ... }` block and binds it to `model`.
pub fn parse_assertion(text: &str, model: &Model) -> Result<Assertion, DslError> {
    let mut p = Parser::new(text, "<assertion>")?;
    let def = p.assertion()?;
    let def = p.finish(def)?;
    Ok(model.bind_assertion(&def)?)
}

/// Parses a `when`-style clause such as `GPS.status = Err and others OK`.
pub fn parse_constraint(text: &str, model: &Model) -> Result<ScenarioConstraint, DslError> {
    let mut p = Parser::new(text, "<constraint>")?;
    let parts = p.constraint()?;
    let parts = p.finish(parts)?;
    Ok(model.bind_constraint(&parts)?)
}

/// Parses an `expect`-style conjunction of port atoms.
pub fn parse_condition(text: &str, model: &Model) -> Result<Condition, DslError> {
    let mut p = Parser::new(text, "<condition>")?;
    let atoms = p.condition()?;
    let atoms = p.finish(atoms)?;
    Ok(model.bind_condition(&atoms)?)
}
