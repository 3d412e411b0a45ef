//! RDF-style terms and quads.
//!
//! Terms are totally ordered (IRIs before blank nodes before literals, then
//! field-wise lexicographic) so every query result in the pipeline can be
//! sorted into one reproducible order.

use std::fmt;

use thiserror::Error;

pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
pub const RDF_LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("IRI must not be empty")]
    EmptyIri,
    #[error("IRI <{0}> contains whitespace")]
    WhitespaceInIri(String),
    #[error("blank node id must not be empty")]
    EmptyBlank,
}

/// An absolute IRI. Non-empty, no whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, TermError> {
        let value = value.into();
        if value.is_empty() {
            return Err(TermError::EmptyIri);
        }
        if value.chars().any(char::is_whitespace) {
            return Err(TermError::WhitespaceInIri(value));
        }
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Extends this IRI with a suffix. Panics only if `suffix` contains whitespace.
    pub fn join(&self, suffix: &str) -> Iri {
        Iri::new(format!("{}{}", self.0, suffix)).expect("IRI suffix contains whitespace")
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankId(String);

impl BlankId {
    pub fn new(id: impl Into<String>) -> Result<Self, TermError> {
        let id = id.into();
        if id.is_empty() {
            return Err(TermError::EmptyBlank);
        }
        Ok(BlankId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// A literal always carries a datatype; plain strings are `xsd:string`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub lexical: String,
    pub datatype: Iri,
    pub language: Option<String>,
}

impl Literal {
    pub fn string(lexical: impl Into<String>) -> Self {
        Self::typed(lexical, XSD_STRING)
    }

    pub fn integer(value: i64) -> Self {
        Self::typed(value.to_string(), XSD_INTEGER)
    }

    pub fn boolean(value: bool) -> Self {
        Self::typed(value.to_string(), XSD_BOOLEAN)
    }

    pub fn typed(lexical: impl Into<String>, datatype: &str) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Iri::new(datatype).expect("datatype IRI constant is valid"),
            language: None,
        }
    }

    pub fn lang_string(lexical: impl Into<String>, tag: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Iri::new(RDF_LANG_STRING).expect("constant"),
            language: Some(tag.into()),
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.lexical.trim_start_matches('+').parse().ok()
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self.lexical.as_str() {
            "true" | "1" => Some(true),
            "false" | "0" => Some(false),
            _ => None,
        }
    }
}

/// Variant order matters: it is the documented total order
/// `Iri < Blank < Literal`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(BlankId),
    Literal(Literal),
}

impl Term {
    pub fn iri(value: &str) -> Term {
        Term::Iri(Iri::new(value).expect("invalid IRI literal in code"))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<&Iri> for Term {
    fn from(iri: &Iri) -> Self {
        Term::Iri(iri.clone())
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

impl From<BlankId> for Term {
    fn from(id: BlankId) -> Self {
        Term::Blank(id)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "{iri}"),
            Term::Blank(id) => write!(f, "_:{}", id.0),
            Term::Literal(lit) => {
                write!(f, "\"{}\"", escape_string(&lit.lexical))?;
                if let Some(lang) = &lit.language {
                    write!(f, "@{lang}")
                } else if lit.datatype.as_str() == XSD_STRING {
                    Ok(())
                } else {
                    write!(f, "^^{}", lit.datatype)
                }
            }
        }
    }
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

/// A statement in a named graph. Fields are loosely typed so malformed quads
/// can be represented and rejected by [`crate::store::QuadStore::insert`].
///
/// Field order gives the derived ordering: graph, subject, predicate, object.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quad {
    pub graph: Iri,
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("literal {0} cannot be a subject")]
    LiteralSubject(Term),
    #[error("predicate {0} is not an IRI")]
    NonIriPredicate(Term),
}

impl Quad {
    pub fn new(
        subject: impl Into<Term>,
        predicate: impl Into<Term>,
        object: impl Into<Term>,
        graph: &Iri,
    ) -> Self {
        Quad {
            graph: graph.clone(),
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        if self.subject.is_literal() {
            return Err(QuadError::LiteralSubject(self.subject.clone()));
        }
        if self.predicate.as_iri().is_none() {
            return Err(QuadError::NonIriPredicate(self.predicate.clone()));
        }
        Ok(())
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} .",
            self.subject, self.predicate, self.object, self.graph
        )
    }
}
