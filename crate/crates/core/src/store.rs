//! In-memory quad store with named graphs and a basic-graph-pattern engine.
//!
//! Set semantics throughout: a quad is either present or not. Queries return
//! bindings sorted by the term order so downstream stages are reproducible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::term::{Iri, Quad, QuadError, Term};

/// Name of the reserved default graph.
pub const DEFAULT_GRAPH: &str = "urn:kgsynth:graph:default";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(String);

impl Variable {
    /// Variable names are identifiers: `[A-Za-z_][A-Za-z0-9_]*`.
    pub fn new(name: impl Into<String>) -> Option<Variable> {
        let name = name.into();
        let mut chars = name.chars();
        let first_ok = chars
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
        if first_ok && chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            Some(Variable(name))
        } else {
            None
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

/// One position of a pattern: a fixed term or a variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Term(Term),
    Var(Variable),
}

impl PatternTerm {
    /// Shorthand for a variable; panics on an invalid name.
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(Variable::new(name).expect("invalid variable name"))
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Term(t)
    }
}

impl From<&Term> for PatternTerm {
    fn from(t: &Term) -> Self {
        PatternTerm::Term(t.clone())
    }
}

impl From<Iri> for PatternTerm {
    fn from(iri: Iri) -> Self {
        PatternTerm::Term(Term::Iri(iri))
    }
}

impl From<&Iri> for PatternTerm {
    fn from(iri: &Iri) -> Self {
        PatternTerm::Term(Term::Iri(iri.clone()))
    }
}

impl From<Variable> for PatternTerm {
    fn from(v: Variable) -> Self {
        PatternTerm::Var(v)
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Term(t) => write!(f, "{t}"),
            PatternTerm::Var(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
    pub graph: PatternTerm,
}

impl Pattern {
    pub fn new(
        subject: impl Into<PatternTerm>,
        predicate: impl Into<PatternTerm>,
        object: impl Into<PatternTerm>,
        graph: impl Into<PatternTerm>,
    ) -> Self {
        Pattern {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
            graph: graph.into(),
        }
    }

    fn positions(&self) -> [&PatternTerm; 4] {
        [&self.subject, &self.predicate, &self.object, &self.graph]
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.positions()
            .into_iter()
            .filter_map(|p| match p {
                PatternTerm::Var(v) => Some(v.clone()),
                PatternTerm::Term(_) => None,
            })
            .collect()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.subject, self.predicate, self.object, self.graph
        )
    }
}

/// Variable-to-term mapping produced by a query.
///
/// Ordering compares `(name, term)` pairs in name order; since all results
/// of one query share the same key set, that is lexicographic order over the
/// bound terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BindingSet(BTreeMap<Variable, Term>);

impl BindingSet {
    pub fn new() -> Self {
        BindingSet(BTreeMap::new())
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.0
            .iter()
            .find(|(k, _)| k.as_str() == name)
            .map(|(_, v)| v)
    }

    /// Bound IRI for `name`, if the binding is an IRI.
    pub fn iri(&self, name: &str) -> Option<&Iri> {
        self.get(name).and_then(Term::as_iri)
    }

    /// Lexical form of a literal binding.
    pub fn lexical(&self, name: &str) -> Option<&str> {
        self.get(name)
            .and_then(Term::as_literal)
            .map(|l| l.lexical.as_str())
    }

    pub fn insert(&mut self, var: Variable, term: Term) {
        self.0.insert(var, term);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Term)> {
        self.0.iter()
    }

    fn lookup(&self, var: &Variable) -> Option<&Term> {
        self.0.get(var)
    }

    /// Binds `var` to `term` unless it is already bound to something else.
    fn unify(&mut self, var: &Variable, term: &Term) -> bool {
        match self.0.get(var) {
            Some(existing) => existing == term,
            None => {
                self.0.insert(var.clone(), term.clone());
                true
            }
        }
    }
}

type PairSet = BTreeSet<(Term, Term)>;

#[derive(Debug, Clone, Default)]
struct GraphIndex {
    by_subject: BTreeMap<Term, PairSet>,
    by_predicate: BTreeMap<Term, PairSet>,
    len: usize,
}

/// The dataset. Single writer; any number of readers once mutation stops.
#[derive(Debug, Clone, Default)]
pub struct QuadStore {
    quads: BTreeSet<Quad>,
    graphs: BTreeMap<Iri, GraphIndex>,
}

impl QuadStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `quad`; returns `true` iff it was not already present.
    pub fn insert(&mut self, quad: Quad) -> Result<bool, QuadError> {
        quad.validate()?;
        if self.quads.contains(&quad) {
            return Ok(false);
        }
        let index = self.graphs.entry(quad.graph.clone()).or_default();
        index
            .by_subject
            .entry(quad.subject.clone())
            .or_default()
            .insert((quad.predicate.clone(), quad.object.clone()));
        index
            .by_predicate
            .entry(quad.predicate.clone())
            .or_default()
            .insert((quad.subject.clone(), quad.object.clone()));
        index.len += 1;
        self.quads.insert(quad);
        Ok(true)
    }

    /// Inserts every quad, stopping at the first malformed one. Returns the
    /// number of newly inserted quads.
    pub fn extend<I: IntoIterator<Item = Quad>>(&mut self, quads: I) -> Result<usize, QuadError> {
        let mut added = 0;
        for q in quads {
            if self.insert(q)? {
                added += 1;
            }
        }
        Ok(added)
    }

    pub fn contains(&self, quad: &Quad) -> bool {
        self.quads.contains(quad)
    }

    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    /// Number of quads in `graph`; zero for an unknown graph.
    pub fn graph_size(&self, graph: &Iri) -> usize {
        self.graphs.get(graph).map_or(0, |g| g.len)
    }

    /// Names of all non-empty graphs, sorted.
    pub fn graph_names(&self) -> impl Iterator<Item = &Iri> {
        self.graphs.keys()
    }

    /// All quads, in `(graph, subject, predicate, object)` order.
    pub fn iter(&self) -> impl Iterator<Item = &Quad> {
        self.quads.iter()
    }

    /// Quads of one graph, in subject/predicate/object order.
    pub fn quads_in_graph<'a>(&'a self, graph: &'a Iri) -> impl Iterator<Item = &'a Quad> + 'a {
        self.quads.iter().filter(move |q| &q.graph == graph)
    }

    /// All bindings under which `pattern` matches some quad, sorted.
    pub fn match_pattern(&self, pattern: &Pattern) -> Vec<BindingSet> {
        let mut out = Vec::new();
        self.extend_matches(pattern, &BindingSet::new(), &mut out);
        out.sort();
        out
    }

    /// Natural join of all patterns on shared variable names, sorted.
    ///
    /// An empty pattern list yields no bindings.
    pub fn query_bgp(&self, patterns: &[Pattern]) -> Vec<BindingSet> {
        if patterns.is_empty() {
            return Vec::new();
        }
        let mut current = vec![BindingSet::new()];
        for pattern in order_for_join(patterns) {
            let mut next = Vec::new();
            for binding in &current {
                self.extend_matches(pattern, binding, &mut next);
            }
            if next.is_empty() {
                return next;
            }
            current = next;
        }
        current.sort();
        current
    }

    /// Pushes every extension of `seed` that makes `pattern` match a quad.
    fn extend_matches(&self, pattern: &Pattern, seed: &BindingSet, out: &mut Vec<BindingSet>) {
        let resolve = |p: &PatternTerm| -> Option<Term> {
            match p {
                PatternTerm::Term(t) => Some(t.clone()),
                PatternTerm::Var(v) => seed.lookup(v).cloned(),
            }
        };
        let graph = resolve(&pattern.graph);
        let subject = resolve(&pattern.subject);
        let predicate = resolve(&pattern.predicate);

        let graphs: Vec<(&Iri, &GraphIndex)> = match &graph {
            Some(Term::Iri(g)) => self.graphs.get_key_value(g).into_iter().collect(),
            Some(_) => return,
            None => self.graphs.iter().collect(),
        };

        for (graph_name, index) in graphs {
            let graph_term = Term::Iri(graph_name.clone());
            let mut try_quad = |s: &Term, p: &Term, o: &Term| {
                let mut b = seed.clone();
                let ok = [
                    (&pattern.subject, s),
                    (&pattern.predicate, p),
                    (&pattern.object, o),
                    (&pattern.graph, &graph_term),
                ]
                .into_iter()
                .all(|(pt, term)| match pt {
                    PatternTerm::Term(t) => t == term,
                    PatternTerm::Var(v) => b.unify(v, term),
                });
                if ok {
                    out.push(b);
                }
            };
            if let Some(s) = &subject {
                if let Some(pairs) = index.by_subject.get(s) {
                    for (p, o) in pairs {
                        try_quad(s, p, o);
                    }
                }
            } else if let Some(p) = &predicate {
                if let Some(pairs) = index.by_predicate.get(p) {
                    for (s, o) in pairs {
                        try_quad(s, p, o);
                    }
                }
            } else {
                for (s, pairs) in &index.by_subject {
                    for (p, o) in pairs {
                        try_quad(s, p, o);
                    }
                }
            }
        }
    }
}

/// Greedy join order: start with the most constrained pattern, then prefer
/// patterns sharing variables with what is already bound.
fn order_for_join(patterns: &[Pattern]) -> Vec<&Pattern> {
    let constants = |p: &Pattern| {
        p.positions()
            .iter()
            .filter(|t| matches!(t, PatternTerm::Term(_)))
            .count()
    };
    let mut remaining: Vec<&Pattern> = patterns.iter().collect();
    let mut ordered = Vec::with_capacity(patterns.len());
    let mut bound: BTreeSet<Variable> = BTreeSet::new();
    while !remaining.is_empty() {
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .max_by_key(|(i, p)| {
                let shared = p.variables().intersection(&bound).count();
                let connected = usize::from(shared > 0 || bound.is_empty());
                // Earlier patterns win ties.
                (connected, constants(p) + shared, usize::MAX - i)
            })
            .expect("non-empty");
        let chosen = remaining.remove(pos);
        bound.extend(chosen.variables());
        ordered.push(chosen);
    }
    ordered
}
