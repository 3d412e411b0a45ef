//! Matching a problem statement against the knowledge base.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::kb::{
    AlgorithmInfo, CodeFunctionInfo, DataSourceInfo, KbError, KbView, LanguageInfo,
    ProgramStructureInfo,
};
use crate::statement::ProblemStatement;
use crate::store::QuadStore;
use crate::term::Iri;
use crate::vocab::kb;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Calculation {
    pub label: String,
    pub algorithm: AlgorithmInfo,
    pub function: CodeFunctionInfo,
}

/// How results are reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReportAction {
    PrintValues { function: CodeFunctionInfo },
}

/// How the program ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExitAction {
    ExitStatus {
        function: CodeFunctionInfo,
        status: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildPlan {
    pub data_source: DataSourceInfo,
    /// In requested order.
    pub calculations: Vec<Calculation>,
    pub reader_function: CodeFunctionInfo,
    /// Present when results were asked to be reported.
    pub report_action: Option<ReportAction>,
    pub exit_action: ExitAction,
    pub structure: ProgramStructureInfo,
    pub language: LanguageInfo,
    pub program_basename: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonNumericInput,
    MinInputCount { required: u64, available: u64 },
    MixedQuantities { kinds: usize },
}

impl Violation {
    /// Name of the algorithm constraint that failed.
    pub fn constraint(&self) -> &'static str {
        match self {
            Violation::NonNumericInput => "input_numeric",
            Violation::MinInputCount { .. } => "min_input_count",
            Violation::MixedQuantities { .. } => "inputs_same_quantity",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonNumericInput => {
                write!(f, "input_numeric (source values are not numeric)")
            }
            Violation::MinInputCount {
                required,
                available,
            } => write!(
                f,
                "min_input_count (needs {required} values, source has {available})"
            ),
            Violation::MixedQuantities { kinds } => write!(
                f,
                "inputs_same_quantity (source has {kinds} quantity types)"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error("no data source named '{0}'")]
    NoDataSource(String),
    #[error("only one data source per program is supported, got {0}")]
    MultipleDataSources(usize),
    #[error("no algorithm is labelled '{0}'")]
    NoAlgorithm(String),
    #[error("algorithm {algorithm} cannot use data source {data_source}: {}", join(.violations))]
    Incompatible {
        algorithm: String,
        data_source: String,
        violations: Vec<Violation>,
    },
    #[error("no program structure satisfies requirements [{}]", .0.join(", "))]
    NoStructure(Vec<String>),
    #[error("no programming language matches tag '{0}'")]
    NoLanguage(String),
    #[error("no {1} function implements <{0}>")]
    NoFunction(String, String),
    #[error("no {0} candidates to choose from")]
    NoCandidate(String),
    #[error("cannot choose a {kind} among: {}", .candidates.join(", "))]
    Ambiguous {
        kind: String,
        candidates: Vec<String>,
    },
    #[error(transparent)]
    Kb(#[from] KbError),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// All constraints of `alg` that `ds` violates. Empty means compatible.
pub fn check_compatibility(alg: &AlgorithmInfo, ds: &DataSourceInfo) -> Vec<Violation> {
    let mut out = Vec::new();
    if alg.input_numeric && !ds.value_datatype.numeric {
        out.push(Violation::NonNumericInput);
    }
    if ds.value_count() < alg.min_input_count {
        out.push(Violation::MinInputCount {
            required: alg.min_input_count,
            available: ds.value_count(),
        });
    }
    if alg.inputs_same_quantity && ds.quantity_types.len() != 1 {
        out.push(Violation::MixedQuantities {
            kinds: ds.quantity_types.len(),
        });
    }
    out
}

/// Rank of a big-O label; lower is cheaper. Unknown classes rank last.
pub fn complexity_rank(label: &str) -> u32 {
    let compact: String = label.chars().filter(|c| !c.is_whitespace()).collect();
    match compact.as_str() {
        "O(1)" => 0,
        "O(logn)" => 1,
        "O(n)" => 2,
        "O(nlogn)" => 3,
        "O(n²)" | "O(n^2)" | "O(n2)" => 4,
        _ => 5,
    }
}

/// Keeps the candidates with the lowest `rank`; a single survivor wins,
/// several are reported as ambiguous.
pub fn select_candidate<T>(
    kind: &str,
    candidates: Vec<T>,
    rank: impl Fn(&T) -> u32,
    describe: impl Fn(&T) -> String,
) -> Result<T, ResolveError> {
    let Some(best) = candidates.iter().map(&rank).min() else {
        return Err(ResolveError::NoCandidate(kind.to_string()));
    };
    let mut survivors: Vec<T> = candidates.into_iter().filter(|c| rank(c) == best).collect();
    if survivors.len() == 1 {
        Ok(survivors.pop().expect("one survivor"))
    } else {
        let mut names: Vec<String> = survivors.iter().map(describe).collect();
        names.sort();
        Err(ResolveError::Ambiguous {
            kind: kind.to_string(),
            candidates: names,
        })
    }
}

fn unranked<T>(_: &T) -> u32 {
    0
}

/// Does a KB language tag satisfy a requested tag? Equal, or a more
/// specific version of it (`Python-3.8` accepts `Python-3.8.10`).
pub fn language_tag_matches(requested: &str, candidate: &str) -> bool {
    match candidate.strip_prefix(requested) {
        Some("") => true,
        Some(rest) => rest.starts_with(['.', '-']),
        None => false,
    }
}

pub fn resolve(ps: &ProblemStatement, store: &QuadStore) -> Result<BuildPlan, ResolveError> {
    let view = KbView::new(store);

    let name = match ps.data_source_names.as_slice() {
        [one] => one,
        many => return Err(ResolveError::MultipleDataSources(many.len())),
    };
    let data_source =
        select_candidate("data source", view.view_data_source(name)?, unranked, |d| {
            d.iri.as_str().to_string()
        })
        .map_err(|e| match e {
            ResolveError::NoCandidate(_) => ResolveError::NoDataSource(name.clone()),
            e => e,
        })?;

    let mut algorithms = Vec::with_capacity(ps.requested_calculations.len());
    for label in &ps.requested_calculations {
        let found = view.view_algorithm_by_label(label)?;
        let Some(first) = found.first().cloned() else {
            return Err(ResolveError::NoAlgorithm(label.clone()));
        };
        let compatible: Vec<AlgorithmInfo> = found
            .into_iter()
            .filter(|a| check_compatibility(a, &data_source).is_empty())
            .collect();
        if compatible.is_empty() {
            return Err(ResolveError::Incompatible {
                violations: check_compatibility(&first, &data_source),
                algorithm: first.name,
                data_source: data_source.name.clone(),
            });
        }
        let alg = select_candidate(
            "algorithm",
            compatible,
            |a| complexity_rank(&a.time_complexity),
            |a| a.name.clone(),
        )?;
        algorithms.push((label.clone(), alg));
    }

    let wanted: BTreeSet<String> = ps.program_requirements.iter().cloned().collect();
    let structures: Vec<ProgramStructureInfo> = view
        .program_structures()?
        .into_iter()
        .filter(|s| s.satisfied_requirements.is_superset(&wanted))
        .collect();
    let structure = select_candidate("program structure", structures, unranked, |s| {
        s.name.clone()
    })
    .map_err(|e| match e {
        ResolveError::NoCandidate(_) => ResolveError::NoStructure(ps.program_requirements.clone()),
        e => e,
    })?;

    let requested = &ps.programming_language;
    let languages: Vec<LanguageInfo> = view
        .languages()?
        .into_iter()
        .filter(|l| language_tag_matches(requested, &l.tag))
        .collect();
    let longest = languages.iter().map(|l| l.tag.len()).max().unwrap_or(0) as u32;
    let language = select_candidate(
        "programming language",
        languages,
        |l| longest - l.tag.len() as u32,
        |l| l.tag.clone(),
    )
    .map_err(|e| match e {
        ResolveError::NoCandidate(_) => ResolveError::NoLanguage(requested.clone()),
        e => e,
    })?;

    let function_for = |purpose: &Iri| -> Result<CodeFunctionInfo, ResolveError> {
        let mut candidates = view.view_code_function(purpose, &language.family, None)?;
        let preferred: Vec<CodeFunctionInfo> = candidates
            .iter()
            .filter(|f| ps.library_preferences.contains(&f.library.official_name))
            .cloned()
            .collect();
        if !preferred.is_empty() {
            candidates = preferred;
        }
        select_candidate("code function", candidates, unranked, |f| {
            f.qualified_name()
        })
        .map_err(|e| match e {
            ResolveError::NoCandidate(_) => {
                ResolveError::NoFunction(purpose.as_str().to_string(), language.family.clone())
            }
            e => e,
        })
    };

    let mut readers = Vec::new();
    for capability in view.reading_capabilities(&data_source) {
        match function_for(&capability) {
            Ok(f) => readers.push(f),
            Err(ResolveError::NoFunction(..)) => {}
            Err(e) => return Err(e),
        }
    }
    let reader_function =
        select_candidate("reader function", readers, unranked, |f| f.qualified_name()).map_err(
            |e| match e {
                ResolveError::NoCandidate(_) => ResolveError::NoFunction(
                    format!("reading {}", data_source.name),
                    language.family.clone(),
                ),
                e => e,
            },
        )?;

    let calculations = algorithms
        .into_iter()
        .map(|(label, algorithm)| {
            Ok(Calculation {
                function: function_for(&algorithm.iri)?,
                label,
                algorithm,
            })
        })
        .collect::<Result<Vec<_>, ResolveError>>()?;

    let report_iri = kb("report_value");
    let report_action = if ps
        .program_requirements
        .iter()
        .any(|r| view.requirement_action(r).as_ref() == Some(&report_iri))
    {
        Some(ReportAction::PrintValues {
            function: function_for(&report_iri)?,
        })
    } else {
        None
    };
    let exit_action = ExitAction::ExitStatus {
        function: function_for(&kb("program_exit"))?,
        status: structure.exit_status,
    };

    Ok(BuildPlan {
        data_source,
        calculations,
        reader_function,
        report_action,
        exit_action,
        structure,
        language,
        program_basename: ps.program_basename.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::ValueDatatype;

    fn source(rows: u64, numeric: bool, kinds: usize) -> DataSourceInfo {
        DataSourceInfo {
            iri: kb("ds"),
            name: "ds".into(),
            container: kb("File"),
            format: kb("CSV"),
            encoding: kb("ASCII"),
            value_datatype: ValueDatatype {
                iri: kb("FloatingPoint"),
                label: String::new(),
                numeric,
            },
            header_rows: 0,
            data_rows: rows,
            values_per_row: 1,
            quantity_types: (0..kinds).map(|i| kb(&format!("Q{i}"))).collect(),
            location: "ds".into(),
            role: None,
        }
    }

    fn mean(complexity: &str) -> AlgorithmInfo {
        AlgorithmInfo {
            iri: kb("arithmetic_mean"),
            name: "arithmetic_mean".into(),
            output_description_labels: BTreeSet::from(["average value".to_string()]),
            min_input_count: 2,
            input_numeric: true,
            inputs_same_quantity: true,
            output_arity: 1,
            output_quantity: kb("SameAsInput"),
            time_complexity: complexity.into(),
        }
    }

    #[test]
    fn compatibility() {
        assert!(check_compatibility(&mean("O(n)"), &source(6, true, 1)).is_empty());
        let v = check_compatibility(&mean("O(n)"), &source(1, true, 1));
        assert_eq!(
            v,
            [Violation::MinInputCount {
                required: 2,
                available: 1
            }]
        );
        assert_eq!(v[0].constraint(), "min_input_count");
        let v = check_compatibility(&mean("O(n)"), &source(6, false, 2));
        assert_eq!(v.len(), 2);
        assert_eq!(v[0], Violation::NonNumericInput);
    }

    #[test]
    fn selection_by_complexity() {
        let one = select_candidate(
            "algorithm",
            vec![mean("O(n)")],
            |a| complexity_rank(&a.time_complexity),
            |a| a.name.clone(),
        )
        .unwrap();
        assert_eq!(one.time_complexity, "O(n)");
        let mut slow = mean("O(n log n)");
        slow.name = "slow".into();
        let fast = select_candidate(
            "algorithm",
            vec![slow, mean("O(n)")],
            |a| complexity_rank(&a.time_complexity),
            |a| a.name.clone(),
        )
        .unwrap();
        assert_eq!(fast.name, "arithmetic_mean");
        let tie = select_candidate(
            "algorithm",
            vec![mean("O(n)"), mean("O(n)")],
            |a| complexity_rank(&a.time_complexity),
            |a| a.name.clone(),
        );
        assert!(matches!(tie, Err(ResolveError::Ambiguous { .. })));
        assert!(matches!(
            select_candidate("x", Vec::<u8>::new(), unranked, |_| String::new()),
            Err(ResolveError::NoCandidate(_))
        ));
    }

    #[test]
    fn complexity_order() {
        let labels = ["O(1)", "O(log n)", "O(n)", "O(n log n)", "O(n²)", "O(2^n)"];
        let ranks: Vec<u32> = labels.iter().map(|l| complexity_rank(l)).collect();
        assert!(ranks.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn language_tags() {
        assert!(language_tag_matches("Python-3.8", "Python-3.8"));
        assert!(language_tag_matches("Python-3.8", "Python-3.8.10"));
        assert!(language_tag_matches("Python", "Python-3.8"));
        assert!(!language_tag_matches("Python-3.8", "Python-3.80"));
        assert!(!language_tag_matches("Python-3.8.10", "Python-3.8"));
        assert!(!language_tag_matches("python-3.8", "Python-3.8"));
    }
}
