//! Textual basic graph patterns: `s p o [g]` terms separated by `.`.
//!
//! Terms use the subset-Turtle term syntax plus `?name` variables; the
//! standard `kb:`, `kg:`, `pla:`, `plr:`, `rdf:`, `rdfs:`, `owl:` and `xsd:`
//! prefixes are predeclared. A missing graph position means `default_graph`.

use super::lexer::Token;
use super::parser::{iri_term, object_term, unexpected, Namespaces, TokenStream};
use super::ParseError;
use crate::store::{Pattern, PatternTerm, Variable};
use crate::term::{Iri, Term};
use crate::vocab::{RDF_TYPE, STANDARD_PREFIXES};

pub fn parse_patterns(text: &str, default_graph: &Iri) -> Result<Vec<Pattern>, ParseError> {
    let mut stream = TokenStream::new(text)?;
    let ns = Namespaces {
        base: None,
        prefixes: STANDARD_PREFIXES
            .iter()
            .map(|(p, n)| (p.to_string(), n.to_string()))
            .collect(),
    };
    let mut patterns = Vec::new();
    while !stream.at_end() {
        let mut terms = Vec::with_capacity(4);
        while let Some(t) = stream.next() {
            if t.token == Token::Dot {
                break;
            }
            let term = match &t.token {
                Token::Variable(name) => PatternTerm::Var(
                    Variable::new(name.clone())
                        .ok_or_else(|| ParseError::new(t.line, t.column, "invalid variable"))?,
                ),
                Token::A if terms.len() == 1 => PatternTerm::Term(Term::iri(RDF_TYPE)),
                _ => {
                    let term = if terms.len() == 3 {
                        iri_term(&ns, &t)?.map(Term::Iri)
                    } else {
                        object_term(&ns, &mut stream, &t)?
                    };
                    PatternTerm::Term(term.ok_or_else(|| unexpected(&t, "pattern term"))?)
                }
            };
            if terms.len() == 4 {
                return Err(ParseError::new(
                    t.line,
                    t.column,
                    "a pattern has at most four terms",
                ));
            }
            terms.push(term);
        }
        if terms.len() < 3 {
            return Err(stream.eof_error("a pattern of three or four terms"));
        }
        if terms.len() == 3 {
            terms.push(PatternTerm::Term(Term::Iri(default_graph.clone())));
        }
        let mut it = terms.into_iter();
        let (s, p, o, g) = (
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        );
        patterns.push(Pattern::new(s, p, o, g));
    }
    if patterns.is_empty() {
        return Err(stream.eof_error("at least one pattern"));
    }
    Ok(patterns)
}
