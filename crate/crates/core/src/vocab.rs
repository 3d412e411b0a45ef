//! IRIs of the shipped vocabulary.
//!
//! Four project namespaces:
//! - `kg:` classes and properties describing data, algorithms and code,
//! - `kb:` the individuals described by the shipped knowledge base,
//! - `pla:` the language-agnostic program representation,
//! - `plr:` the rendered, language-specific program representation.

use crate::term::{Iri, Term};

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD: &str = crate::term::XSD;

pub const KG: &str = "https://kgsynth.dev/ns/kg#";
pub const KB: &str = "https://kgsynth.dev/kb/";
pub const PLA: &str = "https://kgsynth.dev/ns/pla#";
pub const PLR: &str = "https://kgsynth.dev/ns/plr#";

/// Graph holding the loaded knowledge base.
pub const CORE_GRAPH: &str = "https://kgsynth.dev/graph/core";
/// Prefix for per-program named graphs (`<prefix><basename>-pla` / `-plr`).
pub const PROGRAM_GRAPH_BASE: &str = "https://kgsynth.dev/graph/program/";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const RDFS_SUBCLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
pub const OWL_ONTOLOGY: &str = "http://www.w3.org/2002/07/owl#Ontology";
pub const OWL_IMPORTS: &str = "http://www.w3.org/2002/07/owl#imports";

/// Prefixes used when serializing and when parsing textual query patterns.
pub const STANDARD_PREFIXES: &[(&str, &str)] = &[
    ("kb", KB),
    ("kg", KG),
    ("owl", OWL),
    ("pla", PLA),
    ("plr", PLR),
    ("rdf", RDF),
    ("rdfs", RDFS),
    ("xsd", XSD),
];

fn iri(ns: &str, local: &str) -> Iri {
    Iri::new(format!("{ns}{local}")).expect("vocabulary IRIs are valid")
}

pub fn kg(local: &str) -> Iri {
    iri(KG, local)
}

pub fn kb(local: &str) -> Iri {
    iri(KB, local)
}

pub fn pla(local: &str) -> Iri {
    iri(PLA, local)
}

pub fn plr(local: &str) -> Iri {
    iri(PLR, local)
}

pub fn rdf_type() -> Term {
    Term::iri(RDF_TYPE)
}

pub fn rdfs_label() -> Term {
    Term::iri(RDFS_LABEL)
}

pub fn core_graph() -> Iri {
    Iri::new(CORE_GRAPH).expect("constant")
}

/// `-pla` / `-plr` named graph for a program basename.
/// Bytes outside `[A-Za-z0-9_~-]` in the basename are percent-encoded.
pub fn program_graph(basename: &str, suffix: &str) -> Iri {
    let mut encoded = String::with_capacity(basename.len());
    for b in basename.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'_' | b'~' | b'-') {
            encoded.push(b as char);
        } else {
            encoded.push_str(&format!("%{b:02X}"));
        }
    }
    Iri::new(format!("{PROGRAM_GRAPH_BASE}{encoded}-{suffix}")).expect("encoded IRI")
}

/// Well-known individuals the reasoning code dispatches on.
pub mod sections {
    use super::kb;
    use crate::term::Iri;

    pub fn preamble() -> Iri {
        kb("Preamble")
    }
    pub fn input() -> Iri {
        kb("Input")
    }
    pub fn calculate() -> Iri {
        kb("Calculate")
    }
    pub fn output() -> Iri {
        kb("Output")
    }
    pub fn cleanup() -> Iri {
        kb("CleanUp")
    }
}

pub mod requirements {
    pub const READ_INPUT_DATA: &str = "read input data";
    pub const CALCULATE_QUANTITY: &str = "calculate quantity";
    pub const REPORT_RESULT: &str = "report result";
}
