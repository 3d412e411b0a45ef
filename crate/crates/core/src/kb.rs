//! Typed read-views over the shipped knowledge base.
//!
//! The knowledge itself lives in the ontology files under `kb/`; this module
//! only knows how to ask for it. Every view is a handful of basic graph
//! pattern queries against the core graph.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::ontology::{
    self, load_with_imports, parse_patterns, ImportCatalog, LoadError, LoadReport,
};
use crate::store::{BindingSet, QuadStore};
use crate::term::{escape_string, Iri, Term};
use crate::vocab::{self, kb};

#[derive(Debug, Error)]
pub enum KbError {
    #[error("no ontology files found in {}", .0.display())]
    Empty(PathBuf),
    #[error("cannot read knowledge base directory {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("<{entity}> lacks a valid {property}")]
    Malformed { entity: String, property: String },
    #[error("knowledge base is incomplete:\n  {}", .0.join("\n  "))]
    Incomplete(Vec<String>),
}

fn malformed(entity: &Iri, property: &str) -> KbError {
    KbError::Malformed {
        entity: entity.as_str().to_string(),
        property: property.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueDatatype {
    pub iri: Iri,
    pub label: String,
    pub numeric: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataRole {
    pub iri: Iri,
    pub name_token: String,
}

/// Metadata describing where data lives and how to read it. Never the data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataSourceInfo {
    pub iri: Iri,
    pub name: String,
    pub container: Iri,
    pub format: Iri,
    pub encoding: Iri,
    pub value_datatype: ValueDatatype,
    pub header_rows: u64,
    pub data_rows: u64,
    pub values_per_row: u64,
    /// Quantity kinds of the values. Well-formed sources have exactly one.
    pub quantity_types: Vec<Iri>,
    pub location: String,
    pub role: Option<DataRole>,
}

impl DataSourceInfo {
    pub fn value_count(&self) -> u64 {
        self.data_rows.saturating_mul(self.values_per_row)
    }

    pub fn single_quantity_type(&self) -> Option<&Iri> {
        match self.quantity_types.as_slice() {
            [one] => Some(one),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgorithmInfo {
    pub iri: Iri,
    pub name: String,
    pub output_description_labels: BTreeSet<String>,
    pub min_input_count: u64,
    pub input_numeric: bool,
    pub inputs_same_quantity: bool,
    pub output_arity: u64,
    pub output_quantity: Iri,
    /// Big-O class label such as `O(n)`.
    pub time_complexity: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LibraryKind {
    ExternalPackage,
    StandardLibrary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LibraryInfo {
    pub iri: Iri,
    pub official_name: String,
    pub alias: Option<String>,
    pub kind: LibraryKind,
    /// Usable without an import (e.g. Python builtins).
    pub implicitly_available: bool,
}

impl LibraryInfo {
    /// How code refers to the library: its alias when it has one.
    pub fn reference_name(&self) -> &str {
        self.alias.as_deref().unwrap_or(&self.official_name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeFunctionInfo {
    pub iri: Iri,
    pub callable_name: String,
    pub library: LibraryInfo,
    pub language: Iri,
    pub purpose: Iri,
    /// Semantic role of each argument, in argument order.
    pub arg_spec: Vec<Iri>,
    pub return_role: Iri,
}

impl CodeFunctionInfo {
    /// `library.callable`, using the official library name.
    pub fn qualified_name(&self) -> String {
        format!("{}.{}", self.library.official_name, self.callable_name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionSlot {
    pub section: Iri,
    pub name: String,
    pub emission_order: u32,
    pub composition_order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramStructureInfo {
    pub iri: Iri,
    pub name: String,
    /// Sorted by emission order.
    pub sections: Vec<SectionSlot>,
    pub satisfied_requirements: BTreeSet<String>,
    pub exit_status: i64,
}

impl ProgramStructureInfo {
    pub fn emission_order(&self) -> Vec<&SectionSlot> {
        self.sections.iter().collect()
    }

    pub fn composition_order(&self) -> Vec<&SectionSlot> {
        let mut v: Vec<&SectionSlot> = self.sections.iter().collect();
        v.sort_by_key(|s| s.composition_order);
        v
    }

    /// Both orderings are permutations `1..=n` of the same section set.
    pub fn orderings_consistent(&self) -> bool {
        let n = self.sections.len() as u32;
        let emission: BTreeSet<u32> = self.sections.iter().map(|s| s.emission_order).collect();
        let composition: BTreeSet<u32> =
            self.sections.iter().map(|s| s.composition_order).collect();
        let sections: BTreeSet<&Iri> = self.sections.iter().map(|s| &s.section).collect();
        let expected: BTreeSet<u32> = (1..=n).collect();
        emission == expected && composition == expected && sections.len() == self.sections.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageInfo {
    pub iri: Iri,
    pub tag: String,
    pub family: String,
    pub source_file_extension: String,
    pub paradigm: Iri,
    pub argument_separator: String,
    pub string_quote: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NamingPatternId {
    LiteralIsDataSourceFilename,
    DataSourceFilenameArgToReader,
    AssignFunctionReturn,
}

impl NamingPatternId {
    pub fn as_str(self) -> &'static str {
        match self {
            NamingPatternId::LiteralIsDataSourceFilename => "literal-is-datasource-filename",
            NamingPatternId::DataSourceFilenameArgToReader => "datasource-filename-arg-to-reader",
            NamingPatternId::AssignFunctionReturn => "assign-function-return",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            NamingPatternId::LiteralIsDataSourceFilename,
            NamingPatternId::DataSourceFilenameArgToReader,
            NamingPatternId::AssignFunctionReturn,
        ]
        .into_iter()
        .find(|p| p.as_str() == s)
    }
}

/// Where one piece of a derived variable name comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NameComponent {
    /// The name token of the data source's role, e.g. `input_data`.
    DataRoleOfSource,
    /// A fixed token, e.g. `filename`.
    Token(String),
    /// The callable name of the function producing the value.
    CallableName,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamingPattern {
    pub iri: Iri,
    pub id: NamingPatternId,
    pub components: Vec<NameComponent>,
    pub joiner: String,
}

/// One element of a statement variation: literal text or a slot to fill.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementTemplate {
    Text(String),
    Slot(Iri),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatementVariation {
    pub iri: Iri,
    /// The abstract statement class this variation renders.
    pub realizes: Iri,
    pub form: Iri,
    pub condition: Option<Iri>,
    /// Elements in element order.
    pub elements: Vec<ElementTemplate>,
}

/// Loads every `*.ttl` in `kb_dir` (plus transitive imports through the
/// catalog) into the core graph and checks the result is complete.
pub fn load_kb(
    kb_dir: &Path,
    catalog: &Path,
    store: &mut QuadStore,
) -> Result<LoadReport, KbError> {
    let files = ontology::ontology_files(kb_dir).map_err(|source| KbError::Io {
        path: kb_dir.to_path_buf(),
        source,
    })?;
    if files.is_empty() {
        return Err(KbError::Empty(kb_dir.to_path_buf()));
    }
    let catalog = ImportCatalog::load(catalog)?;
    let report = load_with_imports(&files, &catalog, store, &vocab::core_graph())?;
    KbView::new(store).check_completeness()?;
    Ok(report)
}

/// Read access to the knowledge base in one graph.
#[derive(Debug, Clone, Copy)]
pub struct KbView<'a> {
    store: &'a QuadStore,
    graph: &'a Iri,
}

static CORE: std::sync::OnceLock<Iri> = std::sync::OnceLock::new();

fn quoted(s: &str) -> String {
    format!("\"{}\"", escape_string(s))
}

fn angle(iri: &Iri) -> String {
    format!("<{}>", iri.as_str())
}

impl<'a> KbView<'a> {
    /// A view of the core knowledge graph.
    pub fn new(store: &'a QuadStore) -> Self {
        KbView {
            store,
            graph: CORE.get_or_init(vocab::core_graph),
        }
    }

    pub fn with_graph(store: &'a QuadStore, graph: &'a Iri) -> Self {
        KbView { store, graph }
    }

    pub fn store(&self) -> &'a QuadStore {
        self.store
    }

    /// Runs a textual pattern query against this view's graph.
    pub fn select(&self, patterns: &str) -> Vec<BindingSet> {
        let parsed = parse_patterns(patterns, self.graph)
            .unwrap_or_else(|e| panic!("bad built-in query {patterns:?}: {e}"));
        self.store.query_bgp(&parsed)
    }

    fn objects(&self, subject: &Iri, property: &str) -> Vec<Term> {
        self.select(&format!("{} {property} ?o", angle(subject)))
            .into_iter()
            .filter_map(|b| b.get("o").cloned())
            .collect()
    }

    fn opt_string(&self, subject: &Iri, property: &str) -> Result<Option<String>, KbError> {
        match self.objects(subject, property).as_slice() {
            [] => Ok(None),
            [Term::Literal(l)] => Ok(Some(l.lexical.clone())),
            _ => Err(malformed(subject, property)),
        }
    }

    fn string(&self, subject: &Iri, property: &str) -> Result<String, KbError> {
        self.opt_string(subject, property)?
            .ok_or_else(|| malformed(subject, property))
    }

    fn integer(&self, subject: &Iri, property: &str) -> Result<i64, KbError> {
        match self.objects(subject, property).as_slice() {
            [Term::Literal(l)] => l.as_i64().ok_or_else(|| malformed(subject, property)),
            _ => Err(malformed(subject, property)),
        }
    }

    fn count(&self, subject: &Iri, property: &str) -> Result<u64, KbError> {
        u64::try_from(self.integer(subject, property)?).map_err(|_| malformed(subject, property))
    }

    fn flag(&self, subject: &Iri, property: &str, default: bool) -> Result<bool, KbError> {
        match self.objects(subject, property).as_slice() {
            [] => Ok(default),
            [Term::Literal(l)] => l.as_bool().ok_or_else(|| malformed(subject, property)),
            _ => Err(malformed(subject, property)),
        }
    }

    fn iri(&self, subject: &Iri, property: &str) -> Result<Iri, KbError> {
        match self.objects(subject, property).as_slice() {
            [Term::Iri(i)] => Ok(i.clone()),
            _ => Err(malformed(subject, property)),
        }
    }

    fn opt_iri(&self, subject: &Iri, property: &str) -> Result<Option<Iri>, KbError> {
        match self.objects(subject, property).as_slice() {
            [] => Ok(None),
            [Term::Iri(i)] => Ok(Some(i.clone())),
            _ => Err(malformed(subject, property)),
        }
    }

    fn iris(&self, subject: &Iri, property: &str) -> Vec<Iri> {
        self.objects(subject, property)
            .into_iter()
            .filter_map(|t| t.as_iri().cloned())
            .collect()
    }

    fn subjects(&self, patterns: &str, var: &str) -> Vec<Iri> {
        let mut out: Vec<Iri> = self
            .select(patterns)
            .iter()
            .filter_map(|b| b.iri(var).cloned())
            .collect();
        out.dedup();
        out
    }

    /// Data sources whose name is exactly `name`.
    pub fn view_data_source(&self, name: &str) -> Result<Vec<DataSourceInfo>, KbError> {
        self.subjects(
            &format!("?ds a kg:DataSource . ?ds kg:name {}", quoted(name)),
            "ds",
        )
        .iter()
        .map(|ds| self.data_source(ds))
        .collect()
    }

    pub fn data_sources(&self) -> Result<Vec<DataSourceInfo>, KbError> {
        self.subjects("?ds a kg:DataSource", "ds")
            .iter()
            .map(|ds| self.data_source(ds))
            .collect()
    }

    fn data_source(&self, ds: &Iri) -> Result<DataSourceInfo, KbError> {
        let datatype = self.iri(ds, "kg:valueDatatype")?;
        let role = match self.opt_iri(ds, "kg:dataRole")? {
            Some(r) => Some(DataRole {
                name_token: self.string(&r, "kg:variableNameToken")?,
                iri: r,
            }),
            None => None,
        };
        Ok(DataSourceInfo {
            iri: ds.clone(),
            name: self.string(ds, "kg:name")?,
            container: self.iri(ds, "kg:container")?,
            format: self.iri(ds, "kg:format")?,
            encoding: self.iri(ds, "kg:encoding")?,
            value_datatype: ValueDatatype {
                label: self
                    .opt_string(&datatype, "rdfs:label")?
                    .unwrap_or_default(),
                numeric: self.flag(&datatype, "kg:isNumeric", false)?,
                iri: datatype,
            },
            header_rows: self.count(ds, "kg:headerRows")?,
            data_rows: self.count(ds, "kg:dataRows")?,
            values_per_row: self.count(ds, "kg:valuesPerRow")?,
            quantity_types: self.iris(ds, "kg:quantityType"),
            location: self.string(ds, "kg:location")?,
            role,
        })
    }

    /// Algorithms carrying `label` among their output descriptions.
    pub fn view_algorithm_by_label(&self, label: &str) -> Result<Vec<AlgorithmInfo>, KbError> {
        self.subjects(
            &format!(
                "?alg a kg:Algorithm . ?alg kg:outputDescription {}",
                quoted(label)
            ),
            "alg",
        )
        .iter()
        .map(|a| self.algorithm(a))
        .collect()
    }

    pub fn algorithms(&self) -> Result<Vec<AlgorithmInfo>, KbError> {
        self.subjects("?alg a kg:Algorithm", "alg")
            .iter()
            .map(|a| self.algorithm(a))
            .collect()
    }

    fn algorithm(&self, alg: &Iri) -> Result<AlgorithmInfo, KbError> {
        let complexity = self.iri(alg, "kg:hasTimeComplexity")?;
        Ok(AlgorithmInfo {
            iri: alg.clone(),
            name: self.string(alg, "kg:name")?,
            output_description_labels: self
                .objects(alg, "kg:outputDescription")
                .into_iter()
                .filter_map(|t| t.as_literal().map(|l| l.lexical.clone()))
                .collect(),
            min_input_count: self.count(alg, "kg:minInputCount")?,
            input_numeric: self.flag(alg, "kg:requiresNumericInput", false)?,
            inputs_same_quantity: self.flag(alg, "kg:requiresSameQuantityInputs", false)?,
            output_arity: self.count(alg, "kg:outputArity")?,
            output_quantity: self.iri(alg, "kg:outputQuantity")?,
            time_complexity: self.string(&complexity, "rdfs:label")?,
        })
    }

    pub fn library(&self, lib: &Iri) -> Result<LibraryInfo, KbError> {
        let kind = self.iri(lib, "kg:libraryKind")?;
        let kind = if kind == kb("ExternalPackage") {
            LibraryKind::ExternalPackage
        } else if kind == kb("StandardLibrary") {
            LibraryKind::StandardLibrary
        } else {
            return Err(malformed(lib, "kg:libraryKind"));
        };
        if self
            .select(&format!("{} a kg:CodeLibrary", angle(lib)))
            .is_empty()
        {
            return Err(malformed(lib, "rdf:type kg:CodeLibrary"));
        }
        Ok(LibraryInfo {
            iri: lib.clone(),
            official_name: self.string(lib, "kg:officialName")?,
            alias: self.opt_string(lib, "kg:alias")?,
            kind,
            implicitly_available: self.flag(lib, "kg:implicitlyAvailable", false)?,
        })
    }

    pub fn libraries(&self) -> Result<Vec<LibraryInfo>, KbError> {
        self.subjects("?lib a kg:CodeLibrary", "lib")
            .iter()
            .map(|l| self.library(l))
            .collect()
    }

    /// Functions serving `purpose` in a language of `language_family`,
    /// optionally restricted to one library (by official name).
    pub fn view_code_function(
        &self,
        purpose: &Iri,
        language_family: &str,
        library_pref: Option<&str>,
    ) -> Result<Vec<CodeFunctionInfo>, KbError> {
        let mut out = Vec::new();
        for f in self.subjects(
            &format!(
                "?f a kg:CodeFunction . ?f kg:purpose {} . ?f kg:language ?lang . ?lang kg:family {}",
                angle(purpose),
                quoted(language_family)
            ),
            "f",
        ) {
            let info = self.code_function(&f)?;
            if library_pref.is_none_or(|pref| info.library.official_name == pref) {
                out.push(info);
            }
        }
        Ok(out)
    }

    pub fn code_functions(&self) -> Result<Vec<CodeFunctionInfo>, KbError> {
        self.subjects("?f a kg:CodeFunction", "f")
            .iter()
            .map(|f| self.code_function(f))
            .collect()
    }

    pub fn code_function(&self, f: &Iri) -> Result<CodeFunctionInfo, KbError> {
        let mut args: Vec<(i64, Iri)> = Vec::new();
        for b in self.select(&format!(
            "{} kg:argument ?arg . ?arg kg:argumentIndex ?idx . ?arg kg:role ?role",
            angle(f)
        )) {
            let idx = b
                .get("idx")
                .and_then(Term::as_literal)
                .and_then(|l| l.as_i64())
                .ok_or_else(|| malformed(f, "kg:argumentIndex"))?;
            let role = b
                .iri("role")
                .cloned()
                .ok_or_else(|| malformed(f, "kg:role"))?;
            args.push((idx, role));
        }
        args.sort();
        Ok(CodeFunctionInfo {
            iri: f.clone(),
            callable_name: self.string(f, "kg:callableName")?,
            library: self.library(&self.iri(f, "kg:library")?)?,
            language: self.iri(f, "kg:language")?,
            purpose: self.iri(f, "kg:purpose")?,
            arg_spec: args.into_iter().map(|(_, r)| r).collect(),
            return_role: self.iri(f, "kg:returnRole")?,
        })
    }

    /// Reading capabilities matching a source's format, datatype and container.
    pub fn reading_capabilities(&self, ds: &DataSourceInfo) -> Vec<Iri> {
        self.subjects(
            &format!(
                "?cap a kg:DataReadingCapability . ?cap kg:readsFormat {} . \
                 ?cap kg:readsDatatype {} . ?cap kg:readsContainer {}",
                angle(&ds.format),
                angle(&ds.value_datatype.iri),
                angle(&ds.container)
            ),
            "cap",
        )
    }

    /// Runtime action that realizes a program requirement, if any.
    pub fn requirement_action(&self, requirement_label: &str) -> Option<Iri> {
        self.select(&format!(
            "?req a kg:ProgramRequirement . ?req rdfs:label {} . ?req kg:realizedBy ?action",
            quoted(requirement_label)
        ))
        .first()
        .and_then(|b| b.iri("action").cloned())
    }

    pub fn requirement_labels(&self) -> BTreeSet<String> {
        self.select("?req a kg:ProgramRequirement . ?req rdfs:label ?l")
            .iter()
            .filter_map(|b| b.lexical("l").map(str::to_string))
            .collect()
    }

    pub fn program_structures(&self) -> Result<Vec<ProgramStructureInfo>, KbError> {
        self.subjects("?s rdfs:subClassOf kg:ProgramStructure", "s")
            .iter()
            .map(|s| self.program_structure(s))
            .collect()
    }

    pub fn program_structure(&self, s: &Iri) -> Result<ProgramStructureInfo, KbError> {
        let mut sections = Vec::new();
        for b in self.select(&format!(
            "{} kg:hasSectionSlot ?slot . ?slot kg:section ?sec . ?sec kg:name ?name . \
             ?slot kg:emissionOrder ?e . ?slot kg:compositionOrder ?c",
            angle(s)
        )) {
            let order = |v: &str| {
                b.get(v)
                    .and_then(Term::as_literal)
                    .and_then(|l| l.as_i64())
                    .and_then(|n| u32::try_from(n).ok())
                    .ok_or_else(|| malformed(s, "section slot order"))
            };
            sections.push(SectionSlot {
                section: b.iri("sec").cloned().expect("bound"),
                name: b.lexical("name").unwrap_or_default().to_string(),
                emission_order: order("e")?,
                composition_order: order("c")?,
            });
        }
        sections.sort_by_key(|s| (s.emission_order, s.composition_order));
        let satisfied_requirements = self
            .select(&format!(
                "{} kg:satisfiesRequirement ?req . ?req rdfs:label ?l",
                angle(s)
            ))
            .iter()
            .filter_map(|b| b.lexical("l").map(str::to_string))
            .collect();
        Ok(ProgramStructureInfo {
            iri: s.clone(),
            name: self.string(s, "kg:name")?,
            sections,
            satisfied_requirements,
            exit_status: self.integer(s, "kg:exitStatus").unwrap_or(0),
        })
    }

    pub fn languages(&self) -> Result<Vec<LanguageInfo>, KbError> {
        self.subjects("?l a kg:ProgrammingLanguage", "l")
            .iter()
            .map(|l| self.language(l))
            .collect()
    }

    pub fn language(&self, l: &Iri) -> Result<LanguageInfo, KbError> {
        Ok(LanguageInfo {
            iri: l.clone(),
            tag: self.string(l, "kg:tag")?,
            family: self.string(l, "kg:family")?,
            source_file_extension: self.string(l, "kg:sourceFileExtension")?,
            paradigm: self.iri(l, "kg:paradigm")?,
            argument_separator: self
                .opt_string(l, "plr:argumentSeparator")?
                .unwrap_or_else(|| ", ".to_string()),
            string_quote: self
                .opt_string(l, "plr:stringQuote")?
                .unwrap_or_else(|| "\"".to_string()),
        })
    }

    pub fn naming_patterns(&self) -> Result<Vec<NamingPattern>, KbError> {
        let mut out = Vec::new();
        for p in self.subjects("?p a kg:NamingPattern", "p") {
            let id_text = self.string(&p, "kg:patternId")?;
            let id =
                NamingPatternId::parse(&id_text).ok_or_else(|| malformed(&p, "kg:patternId"))?;
            let mut components: Vec<(i64, NameComponent)> = Vec::new();
            for b in self.select(&format!(
                "{} kg:nameComponent ?c . ?c kg:componentOrder ?o . ?c kg:componentSource ?src",
                angle(&p)
            )) {
                let order = b
                    .get("o")
                    .and_then(Term::as_literal)
                    .and_then(|l| l.as_i64())
                    .ok_or_else(|| malformed(&p, "kg:componentOrder"))?;
                let src = b.iri("src").cloned().expect("bound");
                let component = if src == kb("DataRoleOfSource") {
                    NameComponent::DataRoleOfSource
                } else if src == kb("CallableNameOfFunction") {
                    NameComponent::CallableName
                } else {
                    let from = self.iri(&src, "kg:tokenFrom")?;
                    NameComponent::Token(self.string(&from, "kg:variableNameToken")?)
                };
                components.push((order, component));
            }
            components.sort_by_key(|(o, _)| *o);
            out.push(NamingPattern {
                joiner: self
                    .opt_string(&p, "kg:componentJoiner")?
                    .unwrap_or_else(|| "_".into()),
                iri: p,
                id,
                components: components.into_iter().map(|(_, c)| c).collect(),
            });
        }
        Ok(out)
    }

    /// Statement variations for one language family.
    pub fn statement_variations(&self, family: &str) -> Result<Vec<StatementVariation>, KbError> {
        let mut out = Vec::new();
        for v in self.subjects(
            &format!(
                "?v a plr:StatementVariation . ?v plr:languageFamily {}",
                quoted(family)
            ),
            "v",
        ) {
            let mut elements: Vec<(i64, ElementTemplate)> = Vec::new();
            for b in self.select(&format!(
                "{} plr:element ?e . ?e plr:elementOrder ?o",
                angle(&v)
            )) {
                let e = b.iri("e").cloned().expect("bound");
                let order = b
                    .get("o")
                    .and_then(Term::as_literal)
                    .and_then(|l| l.as_i64())
                    .ok_or_else(|| malformed(&e, "plr:elementOrder"))?;
                let template = match (
                    self.opt_string(&e, "plr:text")?,
                    self.opt_iri(&e, "plr:slot")?,
                ) {
                    (Some(text), None) => ElementTemplate::Text(text),
                    (None, Some(slot)) => ElementTemplate::Slot(slot),
                    _ => return Err(malformed(&e, "exactly one of plr:text / plr:slot")),
                };
                elements.push((order, template));
            }
            elements.sort_by_key(|(o, _)| *o);
            out.push(StatementVariation {
                realizes: self.iri(&v, "plr:realizes")?,
                form: self.iri(&v, "plr:form")?,
                condition: self.opt_iri(&v, "plr:condition")?,
                elements: elements.into_iter().map(|(_, e)| e).collect(),
                iri: v,
            });
        }
        Ok(out)
    }

    /// Instance counts per pillar, for reporting.
    pub fn pillar_counts(&self) -> BTreeMap<&'static str, usize> {
        let count = |q: &str, v: &str| self.subjects(q, v).len();
        BTreeMap::from([
            ("data sources", count("?x a kg:DataSource", "x")),
            ("algorithms", count("?x a kg:Algorithm", "x")),
            ("code functions", count("?x a kg:CodeFunction", "x")),
            ("code libraries", count("?x a kg:CodeLibrary", "x")),
            (
                "programming languages",
                count("?x a kg:ProgrammingLanguage", "x"),
            ),
            (
                "program structures",
                count("?x rdfs:subClassOf kg:ProgramStructure", "x"),
            ),
            (
                "statement variations",
                count("?x a plr:StatementVariation", "x"),
            ),
            ("naming patterns", count("?x a kg:NamingPattern", "x")),
        ])
    }

    /// Structural checks run after loading. Collects every problem found.
    pub fn check_completeness(&self) -> Result<(), KbError> {
        let mut problems = Vec::new();

        match self.algorithms() {
            Ok(algs) => {
                for alg in algs {
                    if alg.min_input_count < 1 {
                        note(
                            &mut problems,
                            Err(malformed(&alg.iri, "kg:minInputCount (>= 1)")),
                        );
                    }
                    if alg.output_description_labels.is_empty() {
                        note(
                            &mut problems,
                            Err(malformed(&alg.iri, "kg:outputDescription")),
                        );
                    }
                    match self.view_code_function(&alg.iri, "Python", None) {
                        Ok(fs) if fs.is_empty() => problems.push(format!(
                            "algorithm {} has no Python implementation",
                            alg.name
                        )),
                        Ok(_) => {}
                        Err(e) => note(&mut problems, Err(e)),
                    }
                }
            }
            Err(e) => note(&mut problems, Err(e)),
        }
        // Also surfaces functions whose library is missing or malformed.
        note(&mut problems, self.code_functions().map(|_| ()));
        note(&mut problems, self.data_sources().map(|_| ()));
        note(&mut problems, self.languages().map(|_| ()));
        match self.program_structures() {
            Ok(structures) => {
                for s in structures {
                    if !s.orderings_consistent() {
                        problems.push(format!(
                            "program structure {} has inconsistent section orderings",
                            s.name
                        ));
                    }
                }
            }
            Err(e) => note(&mut problems, Err(e)),
        }
        match self.naming_patterns() {
            Ok(patterns) => {
                let ids: BTreeSet<_> = patterns.iter().map(|p| p.id).collect();
                if ids.len() != patterns.len() {
                    problems.push("naming pattern ids are not distinct".to_string());
                }
            }
            Err(e) => note(&mut problems, Err(e)),
        }
        for lib in self.libraries().unwrap_or_default() {
            if let Some(alias) = &lib.alias {
                if !is_identifier(alias) {
                    problems.push(format!("library alias '{alias}' is not an identifier"));
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(KbError::Incomplete(problems))
        }
    }
}

fn note(problems: &mut Vec<String>, r: Result<(), KbError>) {
    if let Err(e) = r {
        problems.push(e.to_string());
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
