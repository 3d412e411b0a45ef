//! The synthesis pipeline end to end, with each failure tagged by stage.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::path::{Path, PathBuf};
use std::process::Command;

use thiserror::Error;

use crate::compose::{compose, PlaProgram};
use crate::render::{emit, render, EmitStyle, PlrProgram};
use crate::resolve::{resolve, BuildPlan};
use crate::statement::ProblemStatement;
use crate::store::QuadStore;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Config,
    KbLoad,
    StatementParse,
    Resolve,
    Compose,
    Render,
    Write,
}

impl Stage {
    pub fn exit_code(self) -> i32 {
        match self {
            Stage::Config => 2,
            Stage::KbLoad => 3,
            Stage::StatementParse => 4,
            Stage::Resolve => 5,
            Stage::Compose => 6,
            Stage::Render => 7,
            Stage::Write => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stage::Config => "config",
            Stage::KbLoad => "kb-load",
            Stage::StatementParse => "statement",
            Stage::Resolve => "resolve",
            Stage::Compose => "compose",
            Stage::Render => "render",
            Stage::Write => "write",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
#[error("{stage}: {source}")]
pub struct StageError {
    pub stage: Stage,
    #[source]
    pub source: Box<dyn std::error::Error + Send + Sync>,
}

impl StageError {
    pub fn new(stage: Stage, source: impl Into<Box<dyn std::error::Error + Send + Sync>>) -> Self {
        StageError {
            stage,
            source: source.into(),
        }
    }
}

/// Everything produced for one problem statement.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub plan: BuildPlan,
    pub pla: PlaProgram,
    pub plr: PlrProgram,
    pub source: String,
}

impl Synthesis {
    pub fn file_name(&self) -> String {
        format!(
            "{}{}",
            self.plan.program_basename, self.plan.language.source_file_extension
        )
    }
}

/// Resolves, composes, renders and emits. The KB must already be loaded.
pub fn synthesize(
    store: &mut QuadStore,
    statement: &ProblemStatement,
    style: EmitStyle,
) -> Result<Synthesis, StageError> {
    let plan = resolve(statement, store).map_err(|e| StageError::new(Stage::Resolve, e))?;
    let pla = compose(&plan, store).map_err(|e| StageError::new(Stage::Compose, e))?;
    let plr = render(&pla, &plan.language, store).map_err(|e| StageError::new(Stage::Render, e))?;
    let source = emit(&plr, style);
    Ok(Synthesis {
        plan,
        pla,
        plr,
        source,
    })
}

#[derive(Debug, Error)]
pub enum ExecError {
    #[error("cannot prepare run directory: {0}")]
    Setup(#[source] io::Error),
    #[error("cannot start {interpreter}: {source}")]
    Spawn {
        interpreter: String,
        #[source]
        source: io::Error,
    },
    #[error("program exited with {status}: {stderr}")]
    Failed { status: String, stderr: String },
    #[error("unexpected output line {0:?}")]
    Output(String),
}

/// Printed `label = value` pairs from one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExecReport {
    pub values: BTreeMap<String, f64>,
    pub stdout: String,
}

/// Runs `program` with `interpreter` in a scratch directory holding a copy
/// of each data file, and parses its `label = value` output lines.
pub fn exec_check(
    program: &Path,
    data_files: &[PathBuf],
    interpreter: &str,
) -> Result<ExecReport, ExecError> {
    let dir = tempfile::tempdir().map_err(ExecError::Setup)?;
    let script = dir
        .path()
        .join(program.file_name().unwrap_or("program".as_ref()));
    std::fs::copy(program, &script).map_err(ExecError::Setup)?;
    for data in data_files {
        let name = data.file_name().unwrap_or(data.as_os_str());
        std::fs::copy(data, dir.path().join(name)).map_err(ExecError::Setup)?;
    }
    let output = Command::new(interpreter)
        .arg(&script)
        .current_dir(dir.path())
        .output()
        .map_err(|source| ExecError::Spawn {
            interpreter: interpreter.to_string(),
            source,
        })?;
    if !output.status.success() {
        return Err(ExecError::Failed {
            status: output.status.to_string(),
            stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
        });
    }
    let stdout = String::from_utf8_lossy(&output.stdout).into_owned();
    let mut values = BTreeMap::new();
    for line in stdout.lines().filter(|l| !l.trim().is_empty()) {
        let (label, value) = line
            .split_once('=')
            .ok_or_else(|| ExecError::Output(line.to_string()))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| ExecError::Output(line.to_string()))?;
        values.insert(label.trim().to_string(), value);
    }
    Ok(ExecReport { values, stdout })
}
