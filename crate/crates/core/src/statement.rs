//! Problem statements: `key = 'value'` and `key = ['a', 'b']` assignments.
//!
//! Whitespace and blank lines between tokens are insignificant and a
//! backslash at the end of a line joins it with the next.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemStatement {
    pub data_source_names: Vec<String>,
    pub requested_calculations: Vec<String>,
    pub program_requirements: Vec<String>,
    pub programming_language: String,
    pub program_basename: String,
    /// Optional official library names to prefer when several implement a
    /// purpose. Empty means no preference.
    pub library_preferences: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementErrorKind {
    MissingKey(String),
    UnknownKey(String),
    DuplicateKey(String),
    TypeMismatch { key: String, expected: ValueKind },
    InvalidValue { key: String, reason: String },
    Syntax(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    String,
    List,
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueKind::String => "a quoted string",
            ValueKind::List => "a list of quoted strings",
        })
    }
}

impl fmt::Display for StatementErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatementErrorKind::MissingKey(k) => write!(f, "missing key `{k}`"),
            StatementErrorKind::UnknownKey(k) => write!(f, "unknown key `{k}`"),
            StatementErrorKind::DuplicateKey(k) => write!(f, "key `{k}` given more than once"),
            StatementErrorKind::TypeMismatch { key, expected } => {
                write!(f, "`{key}` expects {expected}")
            }
            StatementErrorKind::InvalidValue { key, reason } => write!(f, "`{key}`: {reason}"),
            StatementErrorKind::Syntax(m) => f.write_str(m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct StatementError {
    pub line: usize,
    pub column: usize,
    pub kind: StatementErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    DataSources,
    Calculations,
    Requirements,
    Language,
    Basename,
    LibraryPreferences,
}

impl Field {
    const ALL: [Field; 6] = [
        Field::DataSources,
        Field::Calculations,
        Field::Requirements,
        Field::Language,
        Field::Basename,
        Field::LibraryPreferences,
    ];

    fn from_key(key: &str) -> Option<Field> {
        Some(match key {
            "data_sources_names" | "data_source_names" => Field::DataSources,
            "requested_calculations" => Field::Calculations,
            "program_requirements" => Field::Requirements,
            "programming_language" => Field::Language,
            "program_basename" => Field::Basename,
            "library_preferences" => Field::LibraryPreferences,
            _ => return None,
        })
    }

    fn canonical_key(self) -> &'static str {
        match self {
            Field::DataSources => "data_sources_names",
            Field::Calculations => "requested_calculations",
            Field::Requirements => "program_requirements",
            Field::Language => "programming_language",
            Field::Basename => "program_basename",
            Field::LibraryPreferences => "library_preferences",
        }
    }

    fn kind(self) -> ValueKind {
        match self {
            Field::Language | Field::Basename => ValueKind::String,
            _ => ValueKind::List,
        }
    }

    fn required(self) -> bool {
        self != Field::LibraryPreferences
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Equals,
    Open,
    Close,
    Comma,
    Str(String),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, kind: StatementErrorKind) -> StatementError {
    StatementError { line, column, kind }
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> StatementError {
    err(line, column, StatementErrorKind::Syntax(msg.into()))
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<(Vec<Spanned>, (usize, usize)), StatementError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            let (line, column) = (self.line, self.column);
            let tok = match c {
                c if c.is_whitespace() => {
                    self.bump();
                    continue;
                }
                '#' => {
                    while self.chars.peek().is_some_and(|&c| c != '\n') {
                        self.bump();
                    }
                    continue;
                }
                '\\' => {
                    self.bump();
                    while self
                        .chars
                        .peek()
                        .is_some_and(|&c| c == ' ' || c == '\t' || c == '\r')
                    {
                        self.bump();
                    }
                    if self.bump() != Some('\n') {
                        return Err(syntax(line, column, "`\\` must end a line"));
                    }
                    continue;
                }
                '=' => Tok::Equals,
                '[' => Tok::Open,
                ']' => Tok::Close,
                ',' => Tok::Comma,
                '\'' => {
                    self.bump();
                    Tok::Str(self.string(line, column)?)
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut ident = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            ident.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    out.push(Spanned {
                        tok: Tok::Ident(ident),
                        line,
                        column,
                    });
                    continue;
                }
                other => {
                    return Err(syntax(
                        line,
                        column,
                        format!("unexpected character {other:?}"),
                    ))
                }
            };
            if !matches!(tok, Tok::Str(_)) {
                self.bump();
            }
            out.push(Spanned { tok, line, column });
        }
        Ok((out, (self.line, self.column)))
    }

    fn string(&mut self, line: usize, column: usize) -> Result<String, StatementError> {
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err(syntax(line, column, "unterminated string")),
                Some('\'') => return Ok(s),
                Some('\\') => {
                    let (l, c) = (self.line, self.column - 1);
                    match self.bump() {
                        Some('\\') => s.push('\\'),
                        Some('\'') => s.push('\''),
                        Some('n') => s.push('\n'),
                        Some('t') => s.push('\t'),
                        _ => return Err(syntax(l, c, "invalid escape in string")),
                    }
                }
                Some(c) => s.push(c),
            }
        }
    }
}

enum Value {
    Str(String),
    List(Vec<String>),
}

/// Parses a problem statement. Every input yields a statement or a
/// positioned diagnostic.
pub fn parse_problem_statement(text: &str) -> Result<ProblemStatement, StatementError> {
    let lexer = Lexer {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let (tokens, (end_line, end_column)) = lexer.tokens()?;
    let mut it = tokens.into_iter().peekable();
    let mut values: [Option<Value>; 6] = Default::default();

    while let Some(key_tok) = it.next() {
        let (line, column) = (key_tok.line, key_tok.column);
        let Tok::Ident(key) = key_tok.tok else {
            return Err(syntax(line, column, "expected a key"));
        };
        let field = Field::from_key(&key)
            .ok_or_else(|| err(line, column, StatementErrorKind::UnknownKey(key.clone())))?;
        match it.next() {
            Some(Spanned {
                tok: Tok::Equals, ..
            }) => {}
            Some(t) => {
                return Err(syntax(
                    t.line,
                    t.column,
                    format!("expected `=` after `{key}`"),
                ))
            }
            None => {
                return Err(syntax(
                    end_line,
                    end_column,
                    format!("expected `=` after `{key}`"),
                ))
            }
        }
        let value_tok = it.next().ok_or_else(|| {
            syntax(
                end_line,
                end_column,
                format!("expected a value for `{key}`"),
            )
        })?;
        let value = match value_tok.tok {
            Tok::Str(s) => Value::Str(s),
            Tok::Open => {
                let mut items = Vec::new();
                loop {
                    match it.next() {
                        Some(Spanned {
                            tok: Tok::Str(s), ..
                        }) => items.push(s),
                        Some(Spanned {
                            tok: Tok::Close,
                            line,
                            column,
                        }) if items.is_empty() => {
                            return Err(err(
                                line,
                                column,
                                StatementErrorKind::InvalidValue {
                                    key: key.clone(),
                                    reason: "list must not be empty".into(),
                                },
                            ))
                        }
                        Some(t) => {
                            return Err(syntax(t.line, t.column, "expected a quoted string"))
                        }
                        None => return Err(syntax(end_line, end_column, "unterminated list")),
                    }
                    match it.next() {
                        Some(Spanned {
                            tok: Tok::Comma, ..
                        }) => {}
                        Some(Spanned {
                            tok: Tok::Close, ..
                        }) => break,
                        Some(t) => return Err(syntax(t.line, t.column, "expected `,` or `]`")),
                        None => return Err(syntax(end_line, end_column, "unterminated list")),
                    }
                }
                Value::List(items)
            }
            _ => {
                return Err(syntax(
                    value_tok.line,
                    value_tok.column,
                    format!("expected a value for `{key}`"),
                ))
            }
        };
        let actual = match value {
            Value::Str(_) => ValueKind::String,
            Value::List(_) => ValueKind::List,
        };
        if actual != field.kind() {
            return Err(err(
                value_tok.line,
                value_tok.column,
                StatementErrorKind::TypeMismatch {
                    key,
                    expected: field.kind(),
                },
            ));
        }
        let slot = &mut values[field as usize];
        if slot.is_some() {
            return Err(err(line, column, StatementErrorKind::DuplicateKey(key)));
        }
        if field == Field::Basename {
            if let Value::Str(s) = &value {
                if let Some(reason) = basename_problem(s) {
                    return Err(err(
                        value_tok.line,
                        value_tok.column,
                        StatementErrorKind::InvalidValue {
                            key,
                            reason: reason.into(),
                        },
                    ));
                }
            }
        }
        *slot = Some(value);
    }

    for field in Field::ALL {
        if field.required() && values[field as usize].is_none() {
            return Err(err(
                end_line,
                end_column,
                StatementErrorKind::MissingKey(field.canonical_key().into()),
            ));
        }
    }
    let mut take = |f: Field| values[f as usize].take();
    let list = |v: Option<Value>| match v {
        Some(Value::List(l)) => l,
        _ => Vec::new(),
    };
    let string = |v: Option<Value>| match v {
        Some(Value::Str(s)) => s,
        _ => String::new(),
    };
    Ok(ProblemStatement {
        data_source_names: list(take(Field::DataSources)),
        requested_calculations: list(take(Field::Calculations)),
        program_requirements: list(take(Field::Requirements)),
        programming_language: string(take(Field::Language)),
        program_basename: string(take(Field::Basename)),
        library_preferences: list(take(Field::LibraryPreferences)),
    })
}

fn basename_problem(s: &str) -> Option<&'static str> {
    if s.is_empty() {
        Some("basename must not be empty")
    } else if s.contains(['/', '\\']) {
        Some("basename must not contain path separators")
    } else if s.contains('.') {
        Some("basename must not contain dots")
    } else if s.chars().any(char::is_control) {
        Some("basename must not contain control characters")
    } else {
        None
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\'' => out.push_str("\\'"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('\'');
    out
}

impl ProblemStatement {
    /// One assignment per line, canonical key spelling, no continuations.
    pub fn to_canonical(&self) -> String {
        let list = |items: &[String]| {
            format!(
                "[{}]",
                items
                    .iter()
                    .map(|s| quote(s))
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        };
        let mut out = format!(
            "data_sources_names = {}\nrequested_calculations = {}\nprogram_requirements = {}\n\
             programming_language = {}\nprogram_basename = {}\n",
            list(&self.data_source_names),
            list(&self.requested_calculations),
            list(&self.program_requirements),
            quote(&self.programming_language),
            quote(&self.program_basename),
        );
        if !self.library_preferences.is_empty() {
            out.push_str(&format!(
                "library_preferences = {}\n",
                list(&self.library_preferences)
            ));
        }
        out
    }
}
