use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use proptest::prelude::*;

use kgsynth::kb::{load_kb, KbView, LibraryInfo, LibraryKind, StatementVariation};
use kgsynth::ontology::{parse_document, parse_document_bytes, serialize};
use kgsynth::render::build_import_statements;
use kgsynth::statement::parse_problem_statement;
use kgsynth::vocab::{self, kb};
use kgsynth::{Iri, Literal, Pattern, PatternTerm, Quad, QuadStore, Term};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn shipped_kb() -> QuadStore {
    let dir = root().join("kb");
    let mut store = QuadStore::new();
    load_kb(&dir, &dir.join("catalog.tsv"), &mut store).unwrap();
    store
}

// ---- join oracle -------------------------------------------------------

fn node() -> impl Strategy<Value = Term> {
    prop_oneof![
        (0..5u8).prop_map(|i| Term::iri(&format!("http://ex/n{i}"))),
        (0..2u8).prop_map(|i| Term::Blank(kgsynth::BlankId::new(format!("b{i}")).unwrap())),
    ]
}

fn predicate() -> impl Strategy<Value = Term> {
    (0..3u8).prop_map(|i| Term::iri(&format!("http://ex/p{i}")))
}

fn object() -> impl Strategy<Value = Term> {
    prop_oneof![
        3 => node(),
        1 => (0..3i64).prop_map(|i| Term::Literal(Literal::integer(i))),
        1 => Just(Term::Literal(Literal::string("s"))),
    ]
}

fn graph() -> impl Strategy<Value = Iri> {
    (0..2u8).prop_map(|i| Iri::new(format!("http://ex/g{i}")).unwrap())
}

fn quad() -> impl Strategy<Value = Quad> {
    (node(), predicate(), object(), graph()).prop_map(|(s, p, o, g)| Quad::new(s, p, o, &g))
}

fn var() -> impl Strategy<Value = PatternTerm> {
    prop::sample::select(vec!["x", "y", "z"]).prop_map(PatternTerm::var)
}

fn slot(constant: BoxedStrategy<Term>) -> impl Strategy<Value = PatternTerm> {
    prop_oneof![var(), constant.prop_map(PatternTerm::Term)]
}

fn pattern() -> impl Strategy<Value = Pattern> {
    (
        slot(object().boxed()),
        slot(predicate().boxed()),
        slot(object().boxed()),
        prop_oneof![
            Just(PatternTerm::var("g")),
            graph().prop_map(|g| PatternTerm::Term(Term::Iri(g))),
        ],
    )
        .prop_map(|(s, p, o, g)| Pattern::new(s, p, o, g))
}

type Row = BTreeMap<String, Term>;

/// Plain nested loops over every quad for every pattern.
fn oracle(quads: &BTreeSet<Quad>, patterns: &[Pattern]) -> Vec<Row> {
    fn bind(row: &mut Row, pt: &PatternTerm, term: &Term) -> bool {
        match pt {
            PatternTerm::Term(t) => t == term,
            PatternTerm::Var(v) => match row.get(v.as_str()) {
                Some(bound) => bound == term,
                None => {
                    row.insert(v.as_str().to_string(), term.clone());
                    true
                }
            },
        }
    }
    let mut rows = vec![Row::new()];
    for p in patterns {
        let mut next = Vec::new();
        for row in &rows {
            for q in quads {
                let mut r = row.clone();
                let g = Term::Iri(q.graph.clone());
                if bind(&mut r, &p.subject, &q.subject)
                    && bind(&mut r, &p.predicate, &q.predicate)
                    && bind(&mut r, &p.object, &q.object)
                    && bind(&mut r, &p.graph, &g)
                {
                    next.push(r);
                }
            }
        }
        rows = next;
    }
    if patterns.is_empty() {
        rows.clear();
    }
    rows
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn query_bgp_equals_nested_loop_oracle(
        quads in prop::collection::vec(quad(), 0..=200),
        patterns in prop::collection::vec(pattern(), 1..=4),
    ) {
        let mut store = QuadStore::new();
        for q in &quads {
            store.insert(q.clone()).unwrap();
        }
        let set: BTreeSet<Quad> = quads.into_iter().collect();
        let got = store.query_bgp(&patterns);
        prop_assert!(got.windows(2).all(|w| w[0] <= w[1]), "results not sorted");

        let mut got_rows: Vec<Row> = got
            .iter()
            .map(|b| b.iter().map(|(k, v)| (k.as_str().to_string(), v.clone())).collect())
            .collect();
        let mut want = oracle(&set, &patterns);
        got_rows.sort();
        want.sort();
        prop_assert_eq!(got_rows, want);
    }

    #[test]
    fn single_pattern_query_equals_match_pattern(
        quads in prop::collection::vec(quad(), 0..=60),
        p in pattern(),
    ) {
        let mut store = QuadStore::new();
        store.extend(quads).unwrap();
        prop_assert_eq!(store.query_bgp(std::slice::from_ref(&p)), store.match_pattern(&p));
    }

    #[test]
    fn insertion_has_set_semantics(quads in prop::collection::vec(quad(), 0..=100)) {
        let mut store = QuadStore::new();
        let mut fresh = 0;
        for q in &quads {
            if store.insert(q.clone()).unwrap() {
                fresh += 1;
            }
        }
        for q in &quads {
            prop_assert!(!store.insert(q.clone()).unwrap());
            prop_assert!(store.contains(q));
        }
        let distinct: BTreeSet<&Quad> = quads.iter().collect();
        prop_assert_eq!(store.len(), distinct.len());
        prop_assert_eq!(fresh, distinct.len());
        let per_graph: usize = store.graph_names().map(|g| store.graph_size(g)).sum();
        prop_assert_eq!(per_graph, store.len());
    }

    #[test]
    fn serialized_graphs_reparse_to_the_same_quads(
        quads in prop::collection::vec(quad(), 0..=80),
    ) {
        let g = Iri::new("http://ex/g0").unwrap();
        let mut store = QuadStore::new();
        store.extend(quads.into_iter().map(|q| Quad { graph: g.clone(), ..q })).unwrap();
        let text = serialize(&store, &g);
        let back: BTreeSet<Quad> = parse_document(&text).unwrap().quads(&g).into_iter().collect();
        let orig: BTreeSet<Quad> = store.quads_in_graph(&g).cloned().collect();
        prop_assert_eq!(back, orig);
    }
}

// ---- parser robustness -------------------------------------------------

const TURTLE_ALPHABET: &[&str] = &[
    "@prefix",
    "@base",
    "kg:",
    "kb:x",
    "<http://a/b>",
    "<",
    ">",
    "_:b",
    "\"",
    "\"s\"",
    "'",
    "@en",
    "^^",
    "xsd:integer",
    "1",
    "-2.5",
    "true",
    "a",
    ".",
    ";",
    ",",
    " ",
    "\n",
    "#",
    "\\",
    "?",
    "é",
    "\u{0}",
    "\t",
    "owl:imports",
];

const STATEMENT_ALPHABET: &[&str] = &[
    "data_sources_names",
    "data_source_names",
    "requested_calculations",
    "program_requirements",
    "programming_language",
    "program_basename",
    "library_preferences",
    "x",
    "=",
    "[",
    "]",
    ",",
    "'",
    "'a'",
    "'my_input.txt'",
    "\\",
    "\\\n",
    "\n",
    " ",
    "#",
    "\\'",
    "é",
    "\u{0}",
    ".",
];

fn soup(alphabet: &'static [&'static str]) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(alphabet), 0..40).prop_map(|v| v.concat())
}

fn assert_positioned(line: usize, column: usize, text: &str) {
    assert!(line >= 1 && column >= 1);
    assert!(
        line <= text.split('\n').count() + 1,
        "line {line} beyond input"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn ontology_parser_is_total(text in prop_oneof![soup(TURTLE_ALPHABET), any::<String>()]) {
        if let Err(e) = parse_document(&text) {
            assert_positioned(e.line, e.column, &text);
        }
    }

    #[test]
    fn ontology_parser_is_total_on_bytes(bytes in prop::collection::vec(any::<u8>(), 0..64)) {
        let _ = parse_document_bytes(&bytes);
    }

    #[test]
    fn statement_parser_is_total(text in prop_oneof![soup(STATEMENT_ALPHABET), any::<String>()]) {
        match parse_problem_statement(&text) {
            Ok(ps) => prop_assert_eq!(parse_problem_statement(&ps.to_canonical()).unwrap(), ps),
            Err(e) => assert_positioned(e.line, e.column, &text),
        }
    }
}

fn statement_value() -> impl Strategy<Value = String> {
    "[ -~]{0,12}"
}

proptest! {
    #[test]
    fn canonical_statements_round_trip(
        sources in prop::collection::vec(statement_value(), 1..3),
        calcs in prop::collection::vec(statement_value(), 1..4),
        reqs in prop::collection::vec(statement_value(), 1..4),
        lang in statement_value(),
        base in "[A-Za-z_][A-Za-z0-9_-]{0,10}",
        prefs in prop::collection::vec(statement_value(), 0..3),
    ) {
        let ps = kgsynth::statement::ProblemStatement {
            data_source_names: sources,
            requested_calculations: calcs,
            program_requirements: reqs,
            programming_language: lang,
            program_basename: base,
            library_preferences: prefs,
        };
        prop_assert_eq!(parse_problem_statement(&ps.to_canonical()).unwrap(), ps);
    }
}

#[test]
fn mutated_kb_files_never_crash_the_parser() {
    let mut checked = 0;
    for entry in std::fs::read_dir(root().join("kb")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "ttl") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let bytes = text.as_bytes();
        for cut in (0..bytes.len()).step_by(7) {
            let _ = parse_document_bytes(&bytes[..cut]);
            let mut flipped = bytes.to_vec();
            flipped[cut] ^= 0x20;
            let _ = parse_document_bytes(&flipped);
            checked += 2;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn shipped_kb_round_trips_through_serialization() {
    let store = shipped_kb();
    let g = vocab::core_graph();
    let text = serialize(&store, &g);
    let back: BTreeSet<Quad> = parse_document(&text)
        .unwrap()
        .quads(&g)
        .into_iter()
        .collect();
    let orig: BTreeSet<Quad> = store.quads_in_graph(&g).cloned().collect();
    assert_eq!(back.len(), orig.len());
    assert_eq!(back, orig);
}

// ---- import ordering ---------------------------------------------------

fn python_variations() -> Vec<StatementVariation> {
    KbView::new(&shipped_kb())
        .statement_variations("Python")
        .unwrap()
}

fn library() -> impl Strategy<Value = LibraryInfo> {
    ("[a-z][a-z0-9_]{0,8}", prop::option::of("[a-z]{1,3}")).prop_map(|(name, alias)| LibraryInfo {
        iri: kb(&format!("lib_{name}")),
        official_name: name,
        alias,
        kind: LibraryKind::ExternalPackage,
        implicitly_available: false,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn import_lines_sorted_by_official_name(libs in prop::collection::vec(library(), 0..8)) {
        thread_local! {
            static VARIATIONS: Vec<StatementVariation> = python_variations();
        }
        let lines: Vec<String> = VARIATIONS
            .with(|v| build_import_statements(&libs, v))
            .unwrap()
            .iter()
            .map(|s| s.text())
            .collect();
        let mut expected: Vec<&LibraryInfo> = libs.iter().collect();
        expected.sort_by(|a, b| a.official_name.cmp(&b.official_name));
        expected.dedup_by(|a, b| a.official_name == b.official_name);
        prop_assert_eq!(lines.len(), expected.len());
        for (line, lib) in lines.iter().zip(&expected) {
            let want = match &lib.alias {
                Some(a) => format!("import {} as {a}", lib.official_name),
                None => format!("import {}", lib.official_name),
            };
            prop_assert_eq!(line, &want);
        }
    }
}

// ---- loading order -----------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn kb_load_is_independent_of_file_order(seed in any::<u64>()) {
        use kgsynth::ontology::{load_with_imports, ImportCatalog};
        let dir = root().join("kb");
        let catalog = ImportCatalog::load(&dir.join("catalog.tsv")).unwrap();
        let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|e| e == "ttl"))
            .collect();
        files.sort();
        let mut state = seed | 1;
        for i in (1..files.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            files.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let mut shuffled = QuadStore::new();
        load_with_imports(&files[..3], &catalog, &mut shuffled, &vocab::core_graph()).unwrap();
        load_with_imports(&files, &catalog, &mut shuffled, &vocab::core_graph()).unwrap();
        let reference = shipped_kb();
        let a: Vec<&Quad> = shuffled.iter().collect();
        let b: Vec<&Quad> = reference.iter().collect();
        prop_assert_eq!(a, b);
    }
}
