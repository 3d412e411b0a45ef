//! Knowledge-graph driven program synthesis.
//!
//! A problem statement is matched against an ontology-backed knowledge base
//! of data sources, algorithms and code structures. The resulting build plan
//! is composed into a language-agnostic program graph, rendered into concrete
//! Python statement forms in a second graph, and finally walked to emit
//! source text.

pub mod compose;
pub mod kb;
pub mod ontology;
pub mod pipeline;
pub mod render;
pub mod resolve;
pub mod statement;
pub mod store;
pub mod term;
pub mod vocab;

pub use pipeline::{synthesize, Stage, StageError, Synthesis};
pub use render::EmitStyle;
pub use statement::{parse_problem_statement, ProblemStatement};
pub use store::{BindingSet, Pattern, PatternTerm, QuadStore, Variable};
pub use term::{BlankId, Iri, Literal, Quad, Term};
