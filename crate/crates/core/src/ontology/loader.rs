use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::ParseError;
use crate::store::QuadStore;
use crate::term::{BlankId, Iri, QuadError, Term};
use crate::vocab::{OWL_IMPORTS, OWL_ONTOLOGY, RDF_TYPE};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}:{error}", path.display())]
    Parse { path: PathBuf, error: ParseError },
    #[error("catalog {}:{line}: {message}", path.display())]
    Catalog {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("import <{iri}> (from {}) is not in the catalog", importer.display())]
    UnknownImport { iri: String, importer: PathBuf },
    #[error("{}: {source}", path.display())]
    Quad {
        path: PathBuf,
        #[source]
        source: QuadError,
    },
}

/// Maps ontology IRIs to local files.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ImportCatalog {
    entries: BTreeMap<Iri, PathBuf>,
}

impl ImportCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reads a catalog file: one `<iri>\tpath` mapping per line, paths
    /// relative to the catalog's directory. Blank lines and `#` comments are
    /// ignored.
    pub fn load(path: &Path) -> Result<Self, LoadError> {
        let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        let catalog = Self::parse(&text, dir, path)?;
        for (iri, file) in &catalog.entries {
            if !file.is_file() {
                return Err(LoadError::Catalog {
                    path: path.to_path_buf(),
                    line: catalog.line_of(iri, &text),
                    message: format!("<{}> maps to missing file {}", iri.as_str(), file.display()),
                });
            }
        }
        Ok(catalog)
    }

    fn line_of(&self, iri: &Iri, text: &str) -> usize {
        text.lines()
            .position(|l| l.contains(iri.as_str()))
            .map_or(0, |i| i + 1)
    }

    /// Parses catalog text without touching the file system.
    pub fn parse(text: &str, base_dir: &Path, origin: &Path) -> Result<Self, LoadError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| LoadError::Catalog {
                path: origin.to_path_buf(),
                line: i + 1,
                message,
            };
            let (iri, rel) = line
                .split_once('\t')
                .ok_or_else(|| err("expected '<iri>' TAB 'path'".into()))?;
            let iri = iri
                .trim()
                .strip_prefix('<')
                .and_then(|s| s.strip_suffix('>'))
                .ok_or_else(|| err("IRI must be written in angle brackets".into()))?;
            let iri = Iri::new(iri).map_err(|e| err(e.to_string()))?;
            let path = base_dir.join(rel.trim());
            if let Some(previous) = entries.insert(iri.clone(), path.clone()) {
                if previous != path {
                    return Err(err(format!("<{}> mapped to two paths", iri.as_str())));
                }
            }
        }
        Ok(ImportCatalog { entries })
    }

    pub fn insert(&mut self, iri: Iri, path: PathBuf) {
        self.entries.insert(iri, path);
    }

    pub fn get(&self, iri: &Iri) -> Option<&Path> {
        self.entries.get(iri).map(PathBuf::as_path)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Iri, &Path)> {
        self.entries.iter().map(|(i, p)| (i, p.as_path()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    /// Distinct documents loaded.
    pub files: usize,
    /// Quads newly inserted into the target graph.
    pub quads_inserted: usize,
    /// Ontology IRIs declared by the loaded documents, sorted.
    pub ontologies: Vec<Iri>,
}

/// Loads `entries` and, transitively, every `owl:imports` target through the
/// catalog. Each document is loaded once; cycles are harmless.
///
/// Blank node labels are scoped per document and renamed to ids derived from
/// the document's identity, so the result does not depend on load order.
pub fn load_with_imports(
    entries: &[PathBuf],
    catalog: &ImportCatalog,
    store: &mut QuadStore,
    graph: &Iri,
) -> Result<LoadReport, LoadError> {
    let rdf_type = Term::iri(RDF_TYPE);
    let owl_ontology = Term::iri(OWL_ONTOLOGY);
    let owl_imports = Term::iri(OWL_IMPORTS);

    let mut queue: VecDeque<(PathBuf, Option<Iri>)> =
        entries.iter().map(|p| (p.clone(), None)).collect();
    let mut seen_paths: BTreeSet<PathBuf> = BTreeSet::new();
    let mut seen_ontologies: BTreeSet<Iri> = BTreeSet::new();
    let mut report = LoadReport::default();

    while let Some((path, via_iri)) = queue.pop_front() {
        if via_iri
            .as_ref()
            .is_some_and(|i| seen_ontologies.contains(i))
        {
            continue;
        }
        let canonical = fs::canonicalize(&path).map_err(|source| LoadError::Io {
            path: path.clone(),
            source,
        })?;
        if !seen_paths.insert(canonical.clone()) {
            continue;
        }
        let bytes = fs::read(&path).map_err(|source| LoadError::Io {
            path: path.clone(),
            source,
        })?;
        let doc = super::parse_document_bytes(&bytes).map_err(|error| LoadError::Parse {
            path: path.clone(),
            error,
        })?;

        let declared: BTreeSet<Iri> = doc
            .statements
            .iter()
            .filter(|s| s.predicate == rdf_type && s.object == owl_ontology)
            .filter_map(|s| s.subject.as_iri().cloned())
            .collect();
        if !declared.is_empty() && declared.iter().all(|i| seen_ontologies.contains(i)) {
            continue;
        }
        seen_ontologies.extend(declared.iter().cloned());

        let scope = match declared.iter().next() {
            Some(iri) => iri.as_str().to_string(),
            None => canonical.to_string_lossy().into_owned(),
        };
        let scope = blank_scope(&scope);

        for s in &doc.statements {
            if s.predicate != owl_imports {
                continue;
            }
            let Some(target) = s.object.as_iri() else {
                continue;
            };
            if seen_ontologies.contains(target) {
                continue;
            }
            let file = catalog
                .get(target)
                .ok_or_else(|| LoadError::UnknownImport {
                    iri: target.as_str().to_string(),
                    importer: path.clone(),
                })?;
            queue.push_back((file.to_path_buf(), Some(target.clone())));
        }

        for mut quad in doc.quads(graph) {
            rename_blank(&mut quad.subject, &scope);
            rename_blank(&mut quad.object, &scope);
            if store.insert(quad).map_err(|source| LoadError::Quad {
                path: path.clone(),
                source,
            })? {
                report.quads_inserted += 1;
            }
        }
        report.files += 1;
    }
    report.ontologies = seen_ontologies.into_iter().collect();
    Ok(report)
}

fn blank_scope(key: &str) -> String {
    let digest = Sha256::digest(key.as_bytes());
    digest[..6].iter().map(|b| format!("{b:02x}")).collect()
}

fn rename_blank(term: &mut Term, scope: &str) {
    if let Term::Blank(id) = term {
        *term = Term::Blank(BlankId::new(format!("b{scope}_{}", id.as_str())).expect("non-empty"));
    }
}

/// Every `*.ttl` file directly inside `dir`, sorted by name.
pub(crate) fn ontology_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "ttl") && p.is_file())
        .collect();
    files.sort();
    Ok(files)
}
