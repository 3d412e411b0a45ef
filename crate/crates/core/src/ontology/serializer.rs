use std::fmt::Write;

use crate::store::QuadStore;
use crate::term::{escape_string, Iri, Term, XSD_STRING};
use crate::vocab::{RDF_TYPE, STANDARD_PREFIXES};

fn is_safe_local(local: &str) -> bool {
    let mut chars = local.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn write_iri(out: &mut String, iri: &Iri) {
    for (prefix, ns) in STANDARD_PREFIXES {
        if let Some(local) = iri.as_str().strip_prefix(ns) {
            if is_safe_local(local) {
                let _ = write!(out, "{prefix}:{local}");
                return;
            }
        }
    }
    let _ = write!(out, "<{}>", iri.as_str());
}

fn write_term(out: &mut String, term: &Term) {
    match term {
        Term::Iri(iri) => write_iri(out, iri),
        Term::Blank(id) => {
            let _ = write!(out, "_:{}", id.as_str());
        }
        Term::Literal(lit) => {
            let _ = write!(out, "\"{}\"", escape_string(&lit.lexical));
            if let Some(lang) = &lit.language {
                let _ = write!(out, "@{lang}");
            } else if lit.datatype.as_str() != XSD_STRING {
                out.push_str("^^");
                write_iri(out, &lit.datatype);
            }
        }
    }
}

/// Serializes one graph as subset-Turtle: the standard prefix header, then
/// one block per subject, sorted, using `;` and `,` lists.
pub fn serialize(store: &QuadStore, graph: &Iri) -> String {
    let mut out = String::new();
    for (prefix, ns) in STANDARD_PREFIXES {
        let _ = writeln!(out, "@prefix {prefix}: <{ns}> .");
    }

    let mut quads = store.quads_in_graph(graph).peekable();
    let rdf_type = Term::iri(RDF_TYPE);
    while let Some(first) = quads.next() {
        out.push('\n');
        write_term(&mut out, &first.subject);
        let mut predicate = &first.predicate;
        out.push(' ');
        write_predicate(&mut out, predicate, &rdf_type);
        out.push(' ');
        write_term(&mut out, &first.object);
        while let Some(next) = quads.next_if(|q| q.subject == first.subject) {
            if &next.predicate == predicate {
                out.push_str(" ,\n        ");
            } else {
                predicate = &next.predicate;
                out.push_str(" ;\n    ");
                write_predicate(&mut out, predicate, &rdf_type);
                out.push(' ');
            }
            write_term(&mut out, &next.object);
        }
        out.push_str(" .\n");
    }
    out
}

fn write_predicate(out: &mut String, predicate: &Term, rdf_type: &Term) {
    if predicate == rdf_type {
        out.push('a');
    } else {
        write_term(out, predicate);
    }
}
