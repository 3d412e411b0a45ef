//! Subset-Turtle ontology files: parsing, serialization, import loading and
//! a small textual pattern syntax for ad-hoc queries.
//!
//! The subset covers `@prefix`, `@base`, `<IRI>`s, prefixed names, the `a`
//! keyword, `;` and `,` lists, string/integer/decimal/boolean literals,
//! `^^` datatypes, `@lang` tags and `#` comments. Blank-node property lists,
//! collections and long strings are not supported.

mod lexer;
mod loader;
mod parser;
mod pattern;
mod serializer;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::term::{Iri, Quad, Term};

pub(crate) use loader::ontology_files;
pub use loader::{load_with_imports, ImportCatalog, LoadError, LoadReport};
pub use pattern::parse_patterns;
pub use serializer::serialize;

/// A positioned diagnostic. Lines and columns are 1-based, columns count
/// characters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OntologyDocument {
    pub base: Option<String>,
    pub prefixes: BTreeMap<String, String>,
    /// Statements in document order, duplicates preserved.
    pub statements: Vec<Statement>,
}

impl OntologyDocument {
    /// The statements as quads in `graph`.
    pub fn quads(&self, graph: &Iri) -> Vec<Quad> {
        self.statements
            .iter()
            .map(|s| Quad {
                graph: graph.clone(),
                subject: s.subject.clone(),
                predicate: s.predicate.clone(),
                object: s.object.clone(),
            })
            .collect()
    }
}

pub fn parse_document(text: &str) -> Result<OntologyDocument, ParseError> {
    parser::parse(text)
}

/// Like [`parse_document`] but accepts raw bytes; invalid UTF-8 is reported
/// at the position of the first bad byte.
pub fn parse_document_bytes(bytes: &[u8]) -> Result<OntologyDocument, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_document(text),
        Err(e) => {
            let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).expect("valid prefix");
            let line = valid.matches('\n').count() + 1;
            let column = valid.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            Err(ParseError::new(line, column, "invalid UTF-8"))
        }
    }
}
