use std::collections::BTreeMap;

use url::Url;

use super::lexer::{Lexer, Spanned, Token};
use super::{OntologyDocument, ParseError, Statement};
use crate::term::{BlankId, Iri, Literal, Term, XSD_BOOLEAN, XSD_DECIMAL, XSD_INTEGER};
use crate::vocab::RDF_TYPE;

/// Resolves IRI references and prefixed names against a prefix map and base.
#[derive(Debug, Clone, Default)]
pub(crate) struct Namespaces {
    pub base: Option<String>,
    pub prefixes: BTreeMap<String, String>,
}

fn has_scheme(s: &str) -> bool {
    let mut chars = s.chars();
    if !chars.next().is_some_and(|c| c.is_ascii_alphabetic()) {
        return false;
    }
    for c in chars {
        match c {
            ':' => return true,
            c if c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.') => {}
            _ => return false,
        }
    }
    false
}

impl Namespaces {
    pub fn resolve_iri(&self, raw: &str, at: &Spanned) -> Result<Iri, ParseError> {
        let err = |m: String| ParseError::new(at.line, at.column, m);
        let absolute = if has_scheme(raw) {
            raw.to_string()
        } else {
            let base = self
                .base
                .as_deref()
                .ok_or_else(|| err(format!("relative IRI <{raw}> with no @base")))?;
            Url::parse(base)
                .and_then(|b| b.join(raw))
                .map_err(|e| err(format!("cannot resolve <{raw}> against <{base}>: {e}")))?
                .to_string()
        };
        Iri::new(absolute).map_err(|e| err(e.to_string()))
    }

    pub fn expand(&self, prefix: &str, local: &str, at: &Spanned) -> Result<Iri, ParseError> {
        let ns = self.prefixes.get(prefix).ok_or_else(|| {
            ParseError::new(at.line, at.column, format!("undeclared prefix '{prefix}:'"))
        })?;
        Iri::new(format!("{ns}{local}"))
            .map_err(|e| ParseError::new(at.line, at.column, e.to_string()))
    }
}

pub(crate) struct TokenStream {
    tokens: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl TokenStream {
    pub fn new(text: &str) -> Result<Self, ParseError> {
        let tokens = Lexer::new(text).tokenize()?;
        let (mut line, mut column) = (1, 1);
        for c in text.chars() {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        Ok(TokenStream {
            tokens,
            pos: 0,
            end: (line, column),
        })
    }

    pub fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.pos)
    }

    pub fn next(&mut self) -> Option<Spanned> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub fn eof_error(&self, expected: &str) -> ParseError {
        ParseError::new(
            self.end.0,
            self.end.1,
            format!("unexpected end of input, expected {expected}"),
        )
    }

    pub fn expect_next(&mut self, expected: &str) -> Result<Spanned, ParseError> {
        self.next().ok_or_else(|| self.eof_error(expected))
    }

    pub fn expect(&mut self, want: &Token, expected: &str) -> Result<Spanned, ParseError> {
        let t = self.expect_next(expected)?;
        if &t.token == want {
            Ok(t)
        } else {
            Err(unexpected(&t, expected))
        }
    }
}

pub(crate) fn unexpected(t: &Spanned, expected: &str) -> ParseError {
    ParseError::new(
        t.line,
        t.column,
        format!("unexpected {}, expected {expected}", t.token),
    )
}

/// Parses an IRI-valued position: `<...>` or `prefix:local`.
pub(crate) fn iri_term(ns: &Namespaces, t: &Spanned) -> Result<Option<Iri>, ParseError> {
    Ok(match &t.token {
        Token::IriRef(raw) => Some(ns.resolve_iri(raw, t)?),
        Token::PrefixedName(p, l) => Some(ns.expand(p, l, t)?),
        _ => None,
    })
}

/// Parses an object-position term, including literals with optional
/// datatype or language tag.
pub(crate) fn object_term(
    ns: &Namespaces,
    stream: &mut TokenStream,
    t: &Spanned,
) -> Result<Option<Term>, ParseError> {
    if let Some(iri) = iri_term(ns, t)? {
        return Ok(Some(Term::Iri(iri)));
    }
    Ok(Some(match &t.token {
        Token::Blank(label) => Term::Blank(
            BlankId::new(label.clone())
                .map_err(|e| ParseError::new(t.line, t.column, e.to_string()))?,
        ),
        Token::Integer(n) => Term::Literal(Literal::typed(n.clone(), XSD_INTEGER)),
        Token::Decimal(n) => Term::Literal(Literal::typed(n.clone(), XSD_DECIMAL)),
        Token::True => Term::Literal(Literal::typed("true", XSD_BOOLEAN)),
        Token::False => Term::Literal(Literal::typed("false", XSD_BOOLEAN)),
        Token::Str(s) => match stream.peek().map(|n| &n.token) {
            Some(Token::DoubleCaret) => {
                stream.next();
                let dt = stream.expect_next("datatype IRI")?;
                let iri = iri_term(ns, &dt)?.ok_or_else(|| unexpected(&dt, "datatype IRI"))?;
                Term::Literal(Literal {
                    lexical: s.clone(),
                    datatype: iri,
                    language: None,
                })
            }
            Some(Token::LangTag(tag)) => {
                let tag = tag.clone();
                stream.next();
                Term::Literal(Literal::lang_string(s.clone(), tag))
            }
            _ => Term::Literal(Literal::string(s.clone())),
        },
        _ => return Ok(None),
    }))
}

pub(crate) fn parse(text: &str) -> Result<OntologyDocument, ParseError> {
    let mut stream = TokenStream::new(text)?;
    let mut ns = Namespaces::default();
    let mut statements = Vec::new();
    let rdf_type = Term::iri(RDF_TYPE);

    while let Some(t) = stream.next() {
        match &t.token {
            Token::PrefixDirective => {
                let label = stream.expect_next("prefix label")?;
                let Token::PrefixLabel(prefix) = &label.token else {
                    return Err(unexpected(&label, "prefix label such as 'ex:'"));
                };
                let iri_tok = stream.expect_next("namespace IRI")?;
                let Token::IriRef(raw) = &iri_tok.token else {
                    return Err(unexpected(&iri_tok, "namespace IRI"));
                };
                let iri = ns.resolve_iri(raw, &iri_tok)?;
                stream.expect(&Token::Dot, "'.'")?;
                ns.prefixes.insert(prefix.clone(), iri.as_str().to_string());
            }
            Token::BaseDirective => {
                let iri_tok = stream.expect_next("base IRI")?;
                let Token::IriRef(raw) = &iri_tok.token else {
                    return Err(unexpected(&iri_tok, "base IRI"));
                };
                let iri = ns.resolve_iri(raw, &iri_tok)?;
                stream.expect(&Token::Dot, "'.'")?;
                ns.base = Some(iri.as_str().to_string());
            }
            _ => {
                let subject = match iri_term(&ns, &t)? {
                    Some(iri) => Term::Iri(iri),
                    None => match &t.token {
                        Token::Blank(label) => Term::Blank(
                            BlankId::new(label.clone())
                                .map_err(|e| ParseError::new(t.line, t.column, e.to_string()))?,
                        ),
                        _ => return Err(unexpected(&t, "subject, '@prefix' or '@base'")),
                    },
                };
                parse_predicate_objects(&ns, &mut stream, &subject, &rdf_type, &mut statements)?;
            }
        }
    }

    Ok(OntologyDocument {
        base: ns.base,
        prefixes: ns.prefixes,
        statements,
    })
}

fn parse_predicate_objects(
    ns: &Namespaces,
    stream: &mut TokenStream,
    subject: &Term,
    rdf_type: &Term,
    out: &mut Vec<Statement>,
) -> Result<(), ParseError> {
    loop {
        let vt = stream.expect_next("predicate")?;
        let predicate = if vt.token == Token::A {
            rdf_type.clone()
        } else {
            Term::Iri(iri_term(ns, &vt)?.ok_or_else(|| unexpected(&vt, "predicate"))?)
        };
        loop {
            let ot = stream.expect_next("object")?;
            let object = object_term(ns, stream, &ot)?.ok_or_else(|| unexpected(&ot, "object"))?;
            out.push(Statement {
                subject: subject.clone(),
                predicate: predicate.clone(),
                object,
            });
            let sep = stream.expect_next("',', ';' or '.'")?;
            match sep.token {
                Token::Comma => continue,
                Token::Semicolon => {
                    // Trailing ';' before '.' is allowed.
                    while stream.peek().map(|t| &t.token) == Some(&Token::Semicolon) {
                        stream.next();
                    }
                    if stream.peek().map(|t| &t.token) == Some(&Token::Dot) {
                        stream.next();
                        return Ok(());
                    }
                    break;
                }
                Token::Dot => return Ok(()),
                _ => return Err(unexpected(&sep, "',', ';' or '.'")),
            }
        }
    }
}
