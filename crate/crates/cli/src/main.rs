//! `kgsynth`: synthesize programs from problem statements and inspect the
//! knowledge graph behind them.
//!
//! ```text
//! kgsynth --kb kb --out build synthesize fixtures/hello_analytic.aida
//! kgsynth kb-stats
//! kgsynth query '?alg a kg:Algorithm . ?alg kg:name ?name'
//! kgsynth dump-graph https://kgsynth.dev/graph/program/hello_analytic-pla \
//!     --with-program fixtures/hello_analytic.aida
//! ```
//!
//! Exit codes: 0 ok, 2 config, 3 KB load, 4 statement parse, 5 resolve,
//! 6 compose, 7 render, 8 write, 9 exec-check.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use kgsynth::kb::{load_kb, KbView};
use kgsynth::ontology::{parse_patterns, serialize, LoadReport};
use kgsynth::pipeline::exec_check;
use kgsynth::render::write_source;
use kgsynth::vocab;
use kgsynth::{parse_problem_statement, synthesize, EmitStyle, Iri, QuadStore, Stage, Synthesis};

#[derive(Parser)]
#[command(
    name = "kgsynth",
    version,
    about = "Knowledge-graph driven program synthesis"
)]
struct Cli {
    /// Knowledge base directory (every *.ttl in it is loaded).
    #[arg(long, env = "KGSYNTH_KB", default_value = "kb", global = true)]
    kb: PathBuf,

    /// Import catalog mapping ontology IRIs to files [default: <kb>/catalog.tsv].
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,

    /// Directory the synthesized source file is written to.
    #[arg(long, default_value = ".", global = true)]
    out: PathBuf,

    #[arg(long, value_enum, default_value_t = Style::Compact, global = true)]
    style: Style,

    /// Run the emitted program and report the values it prints.
    #[arg(long, global = true)]
    exec_check: bool,

    /// Interpreter used by --exec-check.
    #[arg(long, env = "KGSYNTH_PYTHON", default_value = "python3", global = true)]
    python: String,

    /// Directory holding the data files for --exec-check [default: the statement's directory].
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,

    /// Overwrite an existing output file.
    #[arg(long, global = true)]
    force: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Style {
    /// No blank lines between sections.
    Compact,
    /// One empty line between sections.
    BlankLines,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a program from a problem statement file.
    Synthesize { statement: PathBuf },
    /// Report what the knowledge base contains.
    KbStats,
    /// Print one named graph as Turtle.
    DumpGraph {
        iri: String,
        /// Synthesize this statement first (nothing is written).
        #[arg(long)]
        with_program: Option<PathBuf>,
    },
    /// Run a basic graph pattern query against the core graph.
    Query {
        patterns: String,
        /// Synthesize this statement first (nothing is written).
        #[arg(long)]
        with_program: Option<PathBuf>,
    },
}

struct Failure {
    stage: Stage,
    message: String,
}

const EXEC_CHECK_EXIT: u8 = 9;

fn fail(stage: Stage, message: impl ToString) -> Failure {
    Failure {
        stage,
        message: message.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Outcome::Stage(f)) => {
            eprintln!("error[{}]: {}", f.stage, f.message);
            ExitCode::from(f.stage.exit_code() as u8)
        }
        Err(Outcome::ExecCheck(message)) => {
            eprintln!("error[exec-check]: {message}");
            ExitCode::from(EXEC_CHECK_EXIT)
        }
    }
}

enum Outcome {
    Stage(Failure),
    ExecCheck(String),
}

impl From<Failure> for Outcome {
    fn from(f: Failure) -> Self {
        Outcome::Stage(f)
    }
}

struct Timings(Vec<(&'static str, Duration)>);

impl Timings {
    fn time<T>(&mut self, label: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.push((label, start.elapsed()));
        out
    }

    fn report(&self) {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(l, d)| format!("{l} {:.1} ms", d.as_secs_f64() * 1e3))
            .collect();
        eprintln!("timing: {}", parts.join(", "));
    }
}

fn run(cli: &Cli) -> Result<(), Outcome> {
    if !cli.kb.is_dir() {
        return Err(fail(
            Stage::Config,
            format!(
                "knowledge base directory {} does not exist",
                cli.kb.display()
            ),
        )
        .into());
    }
    let catalog = cli
        .catalog
        .clone()
        .unwrap_or_else(|| cli.kb.join("catalog.tsv"));
    if !catalog.is_file() {
        return Err(fail(
            Stage::Config,
            format!("catalog {} does not exist", catalog.display()),
        )
        .into());
    }
    for statement in [statement_path(&cli.command)].into_iter().flatten() {
        if !statement.is_file() {
            return Err(fail(
                Stage::Config,
                format!("problem statement {} does not exist", statement.display()),
            )
            .into());
        }
    }

    let mut timings = Timings(Vec::new());
    let mut store = QuadStore::new();
    let report = timings
        .time("kb-load", || load_kb(&cli.kb, &catalog, &mut store))
        .map_err(|e| fail(Stage::KbLoad, e))?;

    let result = match &cli.command {
        Command::Synthesize { statement } => {
            cmd_synthesize(cli, &mut store, statement, &mut timings)
        }
        Command::KbStats => {
            print!("{}", kb_stats(&store, &report));
            Ok(())
        }
        Command::DumpGraph { iri, with_program } => {
            if let Some(path) = with_program {
                build_program(cli, &mut store, path, &mut timings)?;
            }
            let iri = Iri::new(iri.trim_start_matches('<').trim_end_matches('>'))
                .map_err(|e| fail(Stage::Config, e))?;
            print!("{}", serialize(&store, &iri));
            Ok(())
        }
        Command::Query {
            patterns,
            with_program,
        } => {
            if let Some(path) = with_program {
                build_program(cli, &mut store, path, &mut timings)?;
            }
            let parsed = parse_patterns(patterns, &vocab::core_graph())
                .map_err(|e| fail(Stage::Config, format!("pattern {e}")))?;
            print!("{}", bindings_table(&store, &parsed));
            Ok(())
        }
    };
    timings.report();
    result
}

fn statement_path(command: &Command) -> Option<&PathBuf> {
    match command {
        Command::Synthesize { statement } => Some(statement),
        Command::DumpGraph { with_program, .. } | Command::Query { with_program, .. } => {
            with_program.as_ref()
        }
        Command::KbStats => None,
    }
}

fn build_program(
    cli: &Cli,
    store: &mut QuadStore,
    path: &Path,
    timings: &mut Timings,
) -> Result<Synthesis, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(Stage::Config, format!("{}: {e}", path.display())))?;
    let statement = parse_problem_statement(&text)
        .map_err(|e| fail(Stage::StatementParse, format!("{}:{e}", path.display())))?;
    let style = EmitStyle {
        blank_lines_between_sections: cli.style == Style::BlankLines,
    };
    timings
        .time("synthesis", || synthesize(store, &statement, style))
        .map_err(|e| fail(e.stage, e.source))
}

fn cmd_synthesize(
    cli: &Cli,
    store: &mut QuadStore,
    statement: &Path,
    timings: &mut Timings,
) -> Result<(), Outcome> {
    let out = build_program(cli, store, statement, timings)?;
    let path = write_source(
        &out.source,
        &out.plan.program_basename,
        &out.plan.language,
        &cli.out,
        cli.force,
    )
    .map_err(|e| fail(Stage::Write, e))?;
    print!("{}", summary(store, &out, &path));

    if cli.exec_check {
        let data_dir = cli
            .data_dir
            .clone()
            .or_else(|| statement.parent().map(Path::to_path_buf))
            .unwrap_or_default();
        let data = data_dir.join(&out.plan.data_source.location);
        let report = exec_check(&path, &[data], &cli.python)
            .map_err(|e| Outcome::ExecCheck(e.to_string()))?;
        for (label, value) in &report.values {
            println!("exec-check      {label} = {value}");
        }
    }
    Ok(())
}

fn summary(store: &QuadStore, out: &Synthesis, path: &Path) -> String {
    let plan = &out.plan;
    let mut s = String::new();
    let _ = writeln!(s, "program         {}", plan.program_basename);
    let _ = writeln!(
        s,
        "data source     {} ({} values)",
        plan.data_source.name,
        plan.data_source.value_count()
    );
    for c in &plan.calculations {
        let _ = writeln!(
            s,
            "calculation     {} -> {} via {}",
            c.label,
            c.algorithm.name,
            c.function.qualified_name()
        );
    }
    let _ = writeln!(
        s,
        "reader          {}",
        plan.reader_function.qualified_name()
    );
    let _ = writeln!(s, "structure       {}", plan.structure.name);
    let _ = writeln!(
        s,
        "language        {} ({})",
        plan.language.tag, plan.language.source_file_extension
    );
    let core = vocab::core_graph();
    for (label, graph) in [
        ("core", &core),
        ("pla", &out.pla.graph),
        ("plr", &out.plr.graph),
    ] {
        let _ = writeln!(
            s,
            "graph {label:<9} {} quads  {}",
            store.graph_size(graph),
            graph.as_str()
        );
    }
    let _ = writeln!(s, "statements      {}", out.plr.statement_count());
    let _ = writeln!(s, "wrote           {}", path.display());
    s
}

fn kb_stats(store: &QuadStore, report: &LoadReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "files loaded    {}", report.files);
    let _ = writeln!(s, "ontologies      {}", report.ontologies.len());
    for graph in store.graph_names() {
        let _ = writeln!(
            s,
            "graph           {} quads  {}",
            store.graph_size(graph),
            graph.as_str()
        );
    }
    for (pillar, count) in KbView::new(store).pillar_counts() {
        let _ = writeln!(s, "{pillar:<22}  {count}");
    }
    s
}

fn bindings_table(store: &QuadStore, patterns: &[kgsynth::Pattern]) -> String {
    let rows = store.query_bgp(patterns);
    let vars: Vec<String> = patterns
        .iter()
        .flat_map(|p| p.variables())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .map(|v| v.as_str().to_string())
        .collect();
    let mut s = String::new();
    let header: Vec<String> = vars.iter().map(|v| format!("?{v}")).collect();
    let _ = writeln!(s, "{}", header.join("\t"));
    for row in &rows {
        let cells: Vec<String> = vars
            .iter()
            .map(|v| row.get(v).map(ToString::to_string).unwrap_or_default())
            .collect();
        let _ = writeln!(s, "{}", cells.join("\t"));
    }
    let _ = writeln!(s, "({} rows)", rows.len());
    s
}
