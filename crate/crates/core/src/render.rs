//! Rendering the PLA into concrete statements (the PLR graph) and walking
//! that graph to emit source text.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::compose::{AbstractStatement, Argument, PlaProgram};
use crate::kb::{
    CodeFunctionInfo, ElementTemplate, KbError, KbView, LanguageInfo, LibraryInfo,
    StatementVariation,
};
use crate::store::QuadStore;
use crate::term::{Iri, Literal, Quad, QuadError, Term};
use crate::vocab::{self, plr};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("no statement variations for language family '{0}'")]
    UnsupportedLanguage(String),
    #[error("cannot map {kind} statement: {reason}")]
    UnmappableStatement { kind: String, reason: String },
    #[error("malformed rendered program graph: {0}")]
    Malformed(String),
    #[error(transparent)]
    Kb(#[from] KbError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatementForm {
    ImportPlain,
    ImportAliased,
    AssignExpr,
    CallStmt,
}

impl StatementForm {
    pub fn from_iri(iri: &Iri) -> Option<Self> {
        let local = iri.as_str().strip_prefix(vocab::PLR)?;
        Some(match local {
            "ImportPlain" => StatementForm::ImportPlain,
            "ImportAliased" => StatementForm::ImportAliased,
            "AssignExpr" => StatementForm::AssignExpr,
            "CallStmt" => StatementForm::CallStmt,
            _ => return None,
        })
    }
}

/// A statement in one concrete language: the variation chosen, its form and
/// its elements in element order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteStatement {
    pub variation: Iri,
    pub form: StatementForm,
    pub elements: Vec<String>,
}

impl ConcreteStatement {
    pub fn text(&self) -> String {
        self.elements.concat()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlrSection {
    pub section: Iri,
    pub name: String,
    pub emission_order: u32,
    pub statements: Vec<ConcreteStatement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlrProgram {
    pub graph: Iri,
    /// In emission order.
    pub sections: Vec<PlrSection>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EmitStyle {
    /// Put one empty line between non-empty sections.
    pub blank_lines_between_sections: bool,
}

struct Fill<'a> {
    kind: &'static str,
    library: Option<&'a LibraryInfo>,
    function: Option<&'a CodeFunctionInfo>,
}

fn condition_holds(condition: &Iri, fill: &Fill<'_>) -> Option<bool> {
    let local = condition.as_str().strip_prefix(vocab::PLR)?;
    let library = fill.library.or(fill.function.map(|f| &f.library));
    Some(match local {
        "LibraryHasAlias" => library?.alias.is_some(),
        "LibraryHasNoAlias" => library?.alias.is_none(),
        "QualifiedCallee" => !fill.function?.library.implicitly_available,
        "ImplicitCallee" => fill.function?.library.implicitly_available,
        _ => return None,
    })
}

fn choose_variation<'v>(
    variations: &'v [StatementVariation],
    class: &Iri,
    fill: &Fill<'_>,
) -> Result<&'v StatementVariation, RenderError> {
    let matching: Vec<&StatementVariation> = variations
        .iter()
        .filter(|v| &v.realizes == class)
        .filter(|v| match &v.condition {
            None => true,
            Some(c) => condition_holds(c, fill) == Some(true),
        })
        .collect();
    match matching.as_slice() {
        [one] => Ok(one),
        [] => Err(RenderError::UnmappableStatement {
            kind: fill.kind.to_string(),
            reason: "no statement variation applies".into(),
        }),
        many => Err(RenderError::UnmappableStatement {
            kind: fill.kind.to_string(),
            reason: format!(
                "{} statement variations apply: {}",
                many.len(),
                many.iter()
                    .map(|v| v.iri.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }),
    }
}

/// Escapes text for a single- or double-quoted literal.
fn quote_escape(text: &str, quote: &str) -> String {
    text.replace('\\', "\\\\")
        .replace(quote, &format!("\\{quote}"))
}

fn instantiate(
    variation: &StatementVariation,
    kind: &'static str,
    slot: impl Fn(&str) -> Option<String>,
) -> Result<ConcreteStatement, RenderError> {
    let form = StatementForm::from_iri(&variation.form).ok_or_else(|| {
        RenderError::UnmappableStatement {
            kind: kind.into(),
            reason: format!("unknown statement form {}", variation.form),
        }
    })?;
    let mut elements = Vec::with_capacity(variation.elements.len());
    for element in &variation.elements {
        elements.push(match element {
            ElementTemplate::Text(t) => t.clone(),
            ElementTemplate::Slot(s) => {
                let name = s.as_str().strip_prefix(vocab::PLR).unwrap_or(s.as_str());
                slot(name).ok_or_else(|| RenderError::UnmappableStatement {
                    kind: kind.into(),
                    reason: format!("slot {name} has no value"),
                })?
            }
        });
    }
    Ok(ConcreteStatement {
        variation: variation.iri.clone(),
        form,
        elements,
    })
}

fn import_statement(
    library: &LibraryInfo,
    variations: &[StatementVariation],
) -> Result<ConcreteStatement, RenderError> {
    let fill = Fill {
        kind: "ImportDirective",
        library: Some(library),
        function: None,
    };
    let variation = choose_variation(variations, &vocab::pla("ImportDirective"), &fill)?;
    instantiate(variation, fill.kind, |slot| match slot {
        "OfficialName" => Some(library.official_name.clone()),
        "Alias" => library.alias.clone(),
        _ => None,
    })
}

/// One import per library, ascending by official name (byte-wise), using
/// the aliased form when the library has an alias.
pub fn build_import_statements(
    libs: &[LibraryInfo],
    variations: &[StatementVariation],
) -> Result<Vec<ConcreteStatement>, RenderError> {
    let mut sorted: Vec<&LibraryInfo> = libs.iter().collect();
    sorted.sort_by(|a, b| a.official_name.as_bytes().cmp(b.official_name.as_bytes()));
    sorted.dedup_by(|a, b| a.official_name == b.official_name);
    sorted
        .into_iter()
        .map(|l| import_statement(l, variations))
        .collect()
}

fn render_statement(
    statement: &AbstractStatement,
    variations: &[StatementVariation],
    language: &LanguageInfo,
) -> Result<ConcreteStatement, RenderError> {
    let class = statement.class();
    match statement {
        AbstractStatement::ImportDirective { library } => import_statement(library, variations),
        AbstractStatement::AssignLiteral { target, value, .. } => {
            let fill = Fill {
                kind: "AssignLiteral",
                library: None,
                function: None,
            };
            let v = choose_variation(variations, &class, &fill)?;
            instantiate(v, fill.kind, |slot| match slot {
                "Target" => Some(target.clone()),
                "LiteralText" => Some(quote_escape(value, &language.string_quote)),
                _ => None,
            })
        }
        AbstractStatement::AssignCall {
            target,
            function,
            arguments,
        } => {
            let fill = Fill {
                kind: "AssignCall",
                library: None,
                function: Some(function),
            };
            let v = choose_variation(variations, &class, &fill)?;
            let args = arguments
                .iter()
                .map(|a| match a {
                    Argument::Variable(name) => name.clone(),
                    Argument::Literal(text) => format!(
                        "{q}{}{q}",
                        quote_escape(text, &language.string_quote),
                        q = language.string_quote
                    ),
                })
                .collect::<Vec<_>>()
                .join(&language.argument_separator);
            instantiate(v, fill.kind, |slot| match slot {
                "Target" => Some(target.clone()),
                "LibraryRef" => Some(function.library.reference_name().to_string()),
                "Callable" => Some(function.callable_name.clone()),
                "Arguments" => Some(args.clone()),
                _ => None,
            })
        }
        AbstractStatement::ReportValue {
            label,
            source,
            function,
        } => {
            let fill = Fill {
                kind: "ReportValue",
                library: None,
                function: Some(function),
            };
            let v = choose_variation(variations, &class, &fill)?;
            instantiate(v, fill.kind, |slot| match slot {
                "LibraryRef" => Some(function.library.reference_name().to_string()),
                "Callable" => Some(function.callable_name.clone()),
                "ReportLabel" => Some(quote_escape(label, &language.string_quote)),
                "ReportSource" => Some(source.clone()),
                _ => None,
            })
        }
        AbstractStatement::ProgramExit { status, function } => {
            let fill = Fill {
                kind: "ProgramExit",
                library: None,
                function: Some(function),
            };
            let v = choose_variation(variations, &class, &fill)?;
            instantiate(v, fill.kind, |slot| match slot {
                "LibraryRef" => Some(function.library.reference_name().to_string()),
                "Callable" => Some(function.callable_name.clone()),
                "ExitStatus" => Some(status.to_string()),
                _ => None,
            })
        }
    }
}

/// Maps every PLA statement to one concrete statement, writes the result
/// into the `-plr` named graph, and returns the program read back from it.
pub fn render(
    pla: &PlaProgram,
    language: &LanguageInfo,
    store: &mut QuadStore,
) -> Result<PlrProgram, RenderError> {
    let variations = KbView::new(store).statement_variations(&language.family)?;
    if variations.is_empty() {
        return Err(RenderError::UnsupportedLanguage(language.family.clone()));
    }
    let stem = pla
        .graph
        .as_str()
        .strip_suffix("-pla")
        .ok_or_else(|| RenderError::Malformed(format!("unexpected PLA graph {}", pla.graph)))?;
    let graph =
        Iri::new(format!("{stem}-plr")).map_err(|e| RenderError::Malformed(e.to_string()))?;
    let program = graph.join("#program");

    let mut quads = Vec::new();
    let mut add = |s: &Iri, p: Term, o: Term| quads.push(Quad::new(s.clone(), p, o, &graph));
    let p = |local: &str| Term::Iri(plr(local));
    add(&program, vocab::rdf_type(), p("Program"));
    add(&program, p("realizes"), Term::Iri(pla.program.clone()));
    add(&program, p("language"), Term::Iri(language.iri.clone()));

    for section in &pla.sections {
        let node = graph.join(&format!("#section_{}", section.name));
        add(&program, p("hasSection"), Term::Iri(node.clone()));
        add(&node, vocab::rdf_type(), p("Section"));
        add(&node, p("sectionKind"), Term::Iri(section.section.clone()));
        add(
            &node,
            p("sectionName"),
            Literal::string(section.name.clone()).into(),
        );
        add(
            &node,
            p("emissionOrder"),
            Literal::integer(section.emission_order.into()).into(),
        );

        let rendered: Vec<(Option<&Iri>, ConcreteStatement)> = if section
            .statements
            .iter()
            .all(|s| matches!(s.statement, AbstractStatement::ImportDirective { .. }))
            && !section.statements.is_empty()
        {
            let libs: Vec<LibraryInfo> = section
                .statements
                .iter()
                .filter_map(|s| match &s.statement {
                    AbstractStatement::ImportDirective { library } => Some(library.clone()),
                    _ => None,
                })
                .collect();
            build_import_statements(&libs, &variations)?
                .into_iter()
                .map(|c| (None, c))
                .collect()
        } else {
            section
                .statements
                .iter()
                .map(|s| {
                    Ok((
                        Some(&s.iri),
                        render_statement(&s.statement, &variations, language)?,
                    ))
                })
                .collect::<Result<_, RenderError>>()?
        };

        for (i, (source, statement)) in rendered.iter().enumerate() {
            let st = node.join(&format!("_stmt{}", i + 1));
            add(&st, vocab::rdf_type(), p("ConcreteStatement"));
            add(&st, p("inSection"), Term::Iri(node.clone()));
            add(&st, p("orderIndex"), Literal::integer(i as i64 + 1).into());
            add(&st, p("variation"), Term::Iri(statement.variation.clone()));
            add(&st, p("form"), Term::Iri(form_iri(statement.form)));
            if let Some(source) = source {
                add(&st, p("renders"), Term::Iri((*source).clone()));
            }
            for (j, text) in statement.elements.iter().enumerate() {
                let el = st.join(&format!("_el{}", j + 1));
                add(&st, p("hasElement"), Term::Iri(el.clone()));
                add(
                    &el,
                    p("elementOrder"),
                    Literal::integer(j as i64 + 1).into(),
                );
                add(&el, p("text"), Literal::string(text.clone()).into());
            }
        }
    }
    store.extend(quads)?;
    PlrProgram::load(store, &graph)
}

fn form_iri(form: StatementForm) -> Iri {
    plr(match form {
        StatementForm::ImportPlain => "ImportPlain",
        StatementForm::ImportAliased => "ImportAliased",
        StatementForm::AssignExpr => "AssignExpr",
        StatementForm::CallStmt => "CallStmt",
    })
}

impl PlrProgram {
    /// Reads a rendered program back out of its named graph.
    pub fn load(store: &QuadStore, graph: &Iri) -> Result<PlrProgram, RenderError> {
        let view = KbView::with_graph(store, graph);
        let bad = |what: &str| RenderError::Malformed(what.to_string());
        let int = |b: &crate::BindingSet, v: &str| {
            b.get(v)
                .and_then(Term::as_literal)
                .and_then(|l| l.as_i64())
                .ok_or_else(|| bad(v))
        };

        let mut sections = Vec::new();
        for b in view.select(
            "?prog a plr:Program . ?prog plr:hasSection ?sec . ?sec plr:sectionKind ?kind . \
             ?sec plr:sectionName ?name . ?sec plr:emissionOrder ?e",
        ) {
            let sec = b.iri("sec").ok_or_else(|| bad("section"))?.clone();
            let mut statements: Vec<(i64, ConcreteStatement)> = Vec::new();
            for s in view.select(&format!(
                "?st plr:inSection <{}> . ?st plr:orderIndex ?i . ?st plr:variation ?v . ?st plr:form ?f",
                sec.as_str()
            )) {
                let st = s.iri("st").ok_or_else(|| bad("statement"))?;
                let mut elements: Vec<(i64, String)> = view
                    .select(&format!(
                        "<{}> plr:hasElement ?el . ?el plr:elementOrder ?o . ?el plr:text ?t",
                        st.as_str()
                    ))
                    .iter()
                    .map(|e| Ok((int(e, "o")?, e.lexical("t").unwrap_or_default().to_string())))
                    .collect::<Result<_, RenderError>>()?;
                elements.sort();
                statements.push((
                    int(&s, "i")?,
                    ConcreteStatement {
                        variation: s.iri("v").ok_or_else(|| bad("variation"))?.clone(),
                        form: s
                            .iri("f")
                            .and_then(StatementForm::from_iri)
                            .ok_or_else(|| bad("form"))?,
                        elements: elements.into_iter().map(|(_, t)| t).collect(),
                    },
                ));
            }
            statements.sort_by_key(|(i, _)| *i);
            sections.push(PlrSection {
                section: b.iri("kind").ok_or_else(|| bad("section kind"))?.clone(),
                name: b.lexical("name").unwrap_or_default().to_string(),
                emission_order: u32::try_from(int(&b, "e")?).map_err(|_| bad("emission order"))?,
                statements: statements.into_iter().map(|(_, s)| s).collect(),
            });
        }
        sections.sort_by_key(|s| s.emission_order);
        Ok(PlrProgram {
            graph: graph.clone(),
            sections,
        })
    }

    pub fn statement_count(&self) -> usize {
        self.sections.iter().map(|s| s.statements.len()).sum()
    }
}

/// Source text: one statement per line, sections in emission order, LF
/// endings, one trailing newline (none for an empty program).
pub fn emit(plr: &PlrProgram, style: EmitStyle) -> String {
    let mut out = String::new();
    let mut first = true;
    for section in plr.sections.iter().filter(|s| !s.statements.is_empty()) {
        if style.blank_lines_between_sections && !first {
            out.push('\n');
        }
        first = false;
        for statement in &section.statements {
            out.push_str(&statement.text());
            out.push('\n');
        }
    }
    out
}

#[derive(Debug, Error)]
pub enum WriteError {
    #[error("{} already exists (use --force to overwrite)", .0.display())]
    Exists(PathBuf),
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// Writes `<out_dir>/<basename><extension>`.
pub fn write_source(
    text: &str,
    basename: &str,
    language: &LanguageInfo,
    out_dir: &Path,
    force: bool,
) -> Result<PathBuf, WriteError> {
    let path = out_dir.join(format!("{basename}{}", language.source_file_extension));
    let io_err = |source| WriteError::Io {
        path: path.clone(),
        source,
    };
    let mut file = if force {
        fs::File::create(&path).map_err(io_err)?
    } else {
        match fs::OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
        {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                return Err(WriteError::Exists(path))
            }
            Err(e) => return Err(io_err(e)),
        }
    };
    file.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(path)
}
