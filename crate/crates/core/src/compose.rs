//! Composing the language-agnostic program (PLA) from a build plan.
//!
//! Sections are filled in the structure's composition order, so the
//! Preamble, which only needs the set of libraries noted along the way, is
//! composed last. Every node and edge is written as a quad into a fresh
//! named graph; the returned [`PlaProgram`] mirrors that graph.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::kb::{
    is_identifier, CodeFunctionInfo, DataSourceInfo, KbError, KbView, LibraryInfo, NameComponent,
    NamingPattern, NamingPatternId,
};
use crate::resolve::{BuildPlan, ExitAction, ReportAction};
use crate::store::QuadStore;
use crate::term::{Iri, Literal, Quad, QuadError, Term};
use crate::vocab::{self, kb, pla, sections};

#[derive(Debug, Error)]
pub enum ComposeError {
    #[error("no naming pattern applies to {0}")]
    UnnamedVariable(String),
    #[error("{function} needs an argument with role <{role}> but none is available")]
    UnboundArgument { function: String, role: String },
    #[error("program structure has a section the composer does not know: {0}")]
    UnknownSection(Iri),
    #[error(transparent)]
    Kb(#[from] KbError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Argument {
    Variable(String),
    Literal(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbstractStatement {
    AssignLiteral {
        target: String,
        value: String,
        role: Iri,
    },
    AssignCall {
        target: String,
        function: CodeFunctionInfo,
        arguments: Vec<Argument>,
    },
    ReportValue {
        label: String,
        source: String,
        function: CodeFunctionInfo,
    },
    ProgramExit {
        status: i64,
        function: CodeFunctionInfo,
    },
    ImportDirective {
        library: LibraryInfo,
    },
}

impl AbstractStatement {
    pub fn class(&self) -> Iri {
        pla(match self {
            AbstractStatement::AssignLiteral { .. } => "AssignLiteral",
            AbstractStatement::AssignCall { .. } => "AssignCall",
            AbstractStatement::ReportValue { .. } => "ReportValue",
            AbstractStatement::ProgramExit { .. } => "ProgramExit",
            AbstractStatement::ImportDirective { .. } => "ImportDirective",
        })
    }

    /// The variable this statement defines, if any.
    pub fn defines(&self) -> Option<&str> {
        match self {
            AbstractStatement::AssignLiteral { target, .. }
            | AbstractStatement::AssignCall { target, .. } => Some(target),
            _ => None,
        }
    }

    /// Variables this statement reads.
    pub fn uses(&self) -> Vec<&str> {
        match self {
            AbstractStatement::AssignCall { arguments, .. } => arguments
                .iter()
                .filter_map(|a| match a {
                    Argument::Variable(v) => Some(v.as_str()),
                    Argument::Literal(_) => None,
                })
                .collect(),
            AbstractStatement::ReportValue { source, .. } => vec![source],
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaStatement {
    pub iri: Iri,
    /// Position within the section.
    pub order_index: u32,
    /// Global position in composition order.
    pub composition_seq: u32,
    pub statement: AbstractStatement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaSection {
    pub iri: Iri,
    pub section: Iri,
    pub name: String,
    pub emission_order: u32,
    pub composition_order: u32,
    pub statements: Vec<PlaStatement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaProgram {
    pub graph: Iri,
    pub program: Iri,
    /// In emission order.
    pub sections: Vec<PlaSection>,
    /// Libraries that need importing, sorted by official name.
    pub referenced_libraries: Vec<LibraryInfo>,
}

impl PlaProgram {
    pub fn statement_count(&self) -> usize {
        self.sections.iter().map(|s| s.statements.len()).sum()
    }

    pub fn section(&self, section: &Iri) -> Option<&PlaSection> {
        self.sections.iter().find(|s| &s.section == section)
    }
}

/// Hands out variable names, suffixing repeats with `_2`, `_3`, ...
#[derive(Debug, Default, Clone)]
pub struct NameRegistry {
    taken: BTreeSet<String>,
}

impl NameRegistry {
    pub fn claim(&mut self, base: &str) -> String {
        let mut name = base.to_string();
        let mut n = 1;
        while self.taken.contains(&name) {
            n += 1;
            name = format!("{base}_{n}");
        }
        self.taken.insert(name.clone());
        name
    }
}

/// The situation a new variable is named in.
#[derive(Debug, Clone, Copy)]
pub enum NamingContext<'a> {
    /// A literal holding a data source's filename.
    DataSourceFilename(&'a DataSourceInfo),
    /// The result of reading a data source from its filename variable.
    ReaderResult(&'a DataSourceInfo),
    /// The value returned by a function call.
    FunctionReturn(&'a CodeFunctionInfo),
}

impl NamingContext<'_> {
    fn pattern_id(&self) -> NamingPatternId {
        match self {
            NamingContext::DataSourceFilename(_) => NamingPatternId::LiteralIsDataSourceFilename,
            NamingContext::ReaderResult(_) => NamingPatternId::DataSourceFilenameArgToReader,
            NamingContext::FunctionReturn(_) => NamingPatternId::AssignFunctionReturn,
        }
    }

    fn describe(&self) -> String {
        match self {
            NamingContext::DataSourceFilename(ds) => format!("the filename of {}", ds.name),
            NamingContext::ReaderResult(ds) => format!("the data read from {}", ds.name),
            NamingContext::FunctionReturn(f) => format!("the result of {}", f.qualified_name()),
        }
    }
}

/// Derives a base variable name (before collision handling).
pub fn derive_variable_name(
    context: NamingContext<'_>,
    patterns: &[NamingPattern],
) -> Result<String, ComposeError> {
    let unnamed = || ComposeError::UnnamedVariable(context.describe());
    let pattern = patterns
        .iter()
        .find(|p| p.id == context.pattern_id())
        .ok_or_else(unnamed)?;
    let mut parts = Vec::with_capacity(pattern.components.len());
    for component in &pattern.components {
        let part = match (component, context) {
            (
                NameComponent::DataRoleOfSource,
                NamingContext::DataSourceFilename(ds) | NamingContext::ReaderResult(ds),
            ) => ds.role.as_ref().map(|r| r.name_token.clone()),
            (NameComponent::Token(t), _) => Some(t.clone()),
            (NameComponent::CallableName, NamingContext::FunctionReturn(f)) => {
                Some(f.callable_name.clone())
            }
            _ => None,
        };
        parts.push(part.ok_or_else(unnamed)?);
    }
    let name = parts.join(&pattern.joiner);
    if is_identifier(&name) {
        Ok(name)
    } else {
        Err(unnamed())
    }
}

struct Writer<'a> {
    store: &'a mut QuadStore,
    graph: Iri,
}

impl Writer<'_> {
    fn add(&mut self, s: &Iri, p: &str, o: impl Into<Term>) -> Result<(), ComposeError> {
        self.store
            .insert(Quad::new(s.clone(), pla(p), o, &self.graph))?;
        Ok(())
    }

    fn add_type(&mut self, s: &Iri, class: Iri) -> Result<(), ComposeError> {
        self.store
            .insert(Quad::new(s.clone(), vocab::rdf_type(), class, &self.graph))?;
        Ok(())
    }
}

struct Composer<'a, 'p> {
    plan: &'p BuildPlan,
    patterns: Vec<NamingPattern>,
    names: NameRegistry,
    /// Latest variable holding a value of each semantic role.
    by_role: BTreeMap<Iri, String>,
    results: Vec<String>,
    libraries: BTreeMap<Iri, LibraryInfo>,
    seq: u32,
    out: Writer<'a>,
    var_base: Iri,
}

impl Composer<'_, '_> {
    fn note_library(&mut self, f: &CodeFunctionInfo) {
        if !f.library.implicitly_available {
            self.libraries
                .insert(f.library.iri.clone(), f.library.clone());
        }
    }

    fn name(&mut self, context: NamingContext<'_>) -> Result<String, ComposeError> {
        let base = derive_variable_name(context, &self.patterns)?;
        Ok(self.names.claim(&base))
    }

    fn bind_arguments(&self, f: &CodeFunctionInfo) -> Result<Vec<Argument>, ComposeError> {
        f.arg_spec
            .iter()
            .map(|role| {
                self.by_role
                    .get(role)
                    .map(|v| Argument::Variable(v.clone()))
                    .ok_or_else(|| ComposeError::UnboundArgument {
                        function: f.qualified_name(),
                        role: role.as_str().to_string(),
                    })
            })
            .collect()
    }

    fn section_statements(
        &mut self,
        section: &Iri,
    ) -> Result<Vec<AbstractStatement>, ComposeError> {
        let plan = self.plan;
        let mut out = Vec::new();
        if *section == sections::input() {
            let ds = &plan.data_source;
            let filename = self.name(NamingContext::DataSourceFilename(ds))?;
            let role = kb("DataSourceFilenameRole");
            self.by_role.insert(role.clone(), filename.clone());
            out.push(AbstractStatement::AssignLiteral {
                target: filename,
                value: ds.name.clone(),
                role,
            });
            let reader = &plan.reader_function;
            let arguments = self.bind_arguments(reader)?;
            let data = self.name(NamingContext::ReaderResult(ds))?;
            self.by_role
                .insert(reader.return_role.clone(), data.clone());
            self.note_library(reader);
            out.push(AbstractStatement::AssignCall {
                target: data,
                function: reader.clone(),
                arguments,
            });
        } else if *section == sections::calculate() {
            for calc in &plan.calculations {
                let arguments = self.bind_arguments(&calc.function)?;
                let target = self.name(NamingContext::FunctionReturn(&calc.function))?;
                self.note_library(&calc.function);
                self.results.push(target.clone());
                out.push(AbstractStatement::AssignCall {
                    target,
                    function: calc.function.clone(),
                    arguments,
                });
            }
        } else if *section == sections::output() {
            if let Some(ReportAction::PrintValues { function }) = &plan.report_action {
                for result in &self.results {
                    out.push(AbstractStatement::ReportValue {
                        label: result.clone(),
                        source: result.clone(),
                        function: function.clone(),
                    });
                }
                if !self.results.is_empty() {
                    self.note_library(function);
                }
            }
        } else if *section == sections::cleanup() {
            let ExitAction::ExitStatus { function, status } = &plan.exit_action;
            self.note_library(function);
            out.push(AbstractStatement::ProgramExit {
                status: *status,
                function: function.clone(),
            });
        } else if *section == sections::preamble() {
            let mut libs: Vec<&LibraryInfo> = self.libraries.values().collect();
            libs.sort_by(|a, b| a.official_name.cmp(&b.official_name));
            out.extend(
                libs.into_iter()
                    .map(|l| AbstractStatement::ImportDirective { library: l.clone() }),
            );
        } else {
            return Err(ComposeError::UnknownSection(section.clone()));
        }
        Ok(out)
    }

    fn write_statement(
        &mut self,
        section_node: &Iri,
        index: u32,
        statement: &AbstractStatement,
    ) -> Result<PlaStatement, ComposeError> {
        self.seq += 1;
        let node = self.out.graph.join(&format!("#stmt_{}", self.seq));
        let out = &mut self.out;
        out.add_type(&node, statement.class())?;
        out.add(&node, "inSection", section_node.clone())?;
        out.add(&node, "orderIndex", Literal::integer(index.into()))?;
        out.add(&node, "compositionSeq", Literal::integer(self.seq.into()))?;
        let var = |name: &str| self.var_base.join(name);
        match statement {
            AbstractStatement::AssignLiteral {
                target,
                value,
                role,
            } => {
                let v = var(target);
                out.add(&node, "target", v.clone())?;
                out.add(&v, "name", Literal::string(target.clone()))?;
                out.add(&node, "literalValue", Literal::string(value.clone()))?;
                out.add(&node, "literalRole", role.clone())?;
            }
            AbstractStatement::AssignCall {
                target,
                function,
                arguments,
            } => {
                let v = var(target);
                out.add(&node, "target", v.clone())?;
                out.add(&v, "name", Literal::string(target.clone()))?;
                out.add(&node, "purpose", function.purpose.clone())?;
                out.add(&node, "function", function.iri.clone())?;
                for (i, arg) in arguments.iter().enumerate() {
                    let a = node.join(&format!("_arg{}", i + 1));
                    out.add(&node, "argument", a.clone())?;
                    out.add(&a, "argumentIndex", Literal::integer(i as i64 + 1))?;
                    match arg {
                        Argument::Variable(name) => out.add(&a, "argumentVariable", var(name))?,
                        Argument::Literal(text) => {
                            out.add(&a, "argumentLiteral", Literal::string(text.clone()))?
                        }
                    }
                }
            }
            AbstractStatement::ReportValue {
                label,
                source,
                function,
            } => {
                out.add(&node, "label", Literal::string(label.clone()))?;
                out.add(&node, "source", var(source))?;
                out.add(&node, "purpose", function.purpose.clone())?;
                out.add(&node, "function", function.iri.clone())?;
            }
            AbstractStatement::ProgramExit { status, function } => {
                out.add(&node, "status", Literal::integer(*status))?;
                out.add(&node, "purpose", function.purpose.clone())?;
                out.add(&node, "function", function.iri.clone())?;
            }
            AbstractStatement::ImportDirective { library } => {
                out.add(&node, "library", library.iri.clone())?;
            }
        }
        Ok(PlaStatement {
            iri: node,
            order_index: index,
            composition_seq: self.seq,
            statement: statement.clone(),
        })
    }
}

/// Composes the PLA for `plan` into the named graph
/// `program_graph(basename, "pla")`.
pub fn compose(plan: &BuildPlan, store: &mut QuadStore) -> Result<PlaProgram, ComposeError> {
    let patterns = KbView::new(store).naming_patterns()?;
    let graph = vocab::program_graph(&plan.program_basename, "pla");
    let program = graph.join("#program");
    let mut composer = Composer {
        plan,
        patterns,
        names: NameRegistry::default(),
        by_role: BTreeMap::new(),
        results: Vec::new(),
        libraries: BTreeMap::new(),
        seq: 0,
        out: Writer {
            store,
            graph: graph.clone(),
        },
        var_base: graph.join("#var_"),
    };

    composer.out.add_type(&program, pla("Program"))?;
    composer
        .out
        .add(&program, "structure", plan.structure.iri.clone())?;
    composer.out.add(
        &program,
        "basename",
        Literal::string(plan.program_basename.clone()),
    )?;

    let mut sections = Vec::new();
    for slot in plan.structure.composition_order() {
        let node = graph.join(&format!("#section_{}", slot.name));
        let w = &mut composer.out;
        w.add(&program, "hasSection", node.clone())?;
        w.add_type(&node, pla("Section"))?;
        w.add(&node, "sectionKind", slot.section.clone())?;
        w.add(
            &node,
            "compositionOrder",
            Literal::integer(slot.composition_order.into()),
        )?;
        w.add(
            &node,
            "emissionOrder",
            Literal::integer(slot.emission_order.into()),
        )?;

        let abstract_statements = composer.section_statements(&slot.section)?;
        let mut statements = Vec::with_capacity(abstract_statements.len());
        for (i, st) in abstract_statements.iter().enumerate() {
            statements.push(composer.write_statement(&node, i as u32 + 1, st)?);
        }
        sections.push(PlaSection {
            iri: node,
            section: slot.section.clone(),
            name: slot.name.clone(),
            emission_order: slot.emission_order,
            composition_order: slot.composition_order,
            statements,
        });
    }
    sections.sort_by_key(|s| s.emission_order);

    let mut referenced_libraries: Vec<LibraryInfo> = composer.libraries.into_values().collect();
    referenced_libraries.sort_by(|a, b| a.official_name.cmp(&b.official_name));
    Ok(PlaProgram {
        graph,
        program,
        sections,
        referenced_libraries,
    })
}
