use std::fmt;

use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Token {
    PrefixDirective,
    BaseDirective,
    IriRef(String),
    /// `prefix:local`; the prefix may be empty.
    PrefixedName(String, String),
    /// Bare `prefix:` as it appears in `@prefix` directives.
    PrefixLabel(String),
    Blank(String),
    Str(String),
    LangTag(String),
    Integer(String),
    Decimal(String),
    True,
    False,
    A,
    Variable(String),
    Dot,
    Semicolon,
    Comma,
    DoubleCaret,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::PrefixDirective => write!(f, "'@prefix'"),
            Token::BaseDirective => write!(f, "'@base'"),
            Token::IriRef(s) => write!(f, "<{s}>"),
            Token::PrefixedName(p, l) => write!(f, "'{p}:{l}'"),
            Token::PrefixLabel(p) => write!(f, "'{p}:'"),
            Token::Blank(s) => write!(f, "'_:{s}'"),
            Token::Str(_) => write!(f, "string literal"),
            Token::LangTag(t) => write!(f, "'@{t}'"),
            Token::Integer(s) | Token::Decimal(s) => write!(f, "number {s}"),
            Token::True => write!(f, "'true'"),
            Token::False => write!(f, "'false'"),
            Token::A => write!(f, "'a'"),
            Token::Variable(v) => write!(f, "'?{v}'"),
            Token::Dot => write!(f, "'.'"),
            Token::Semicolon => write!(f, "';'"),
            Token::Comma => write!(f, "','"),
            Token::DoubleCaret => write!(f, "'^^'"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Spanned {
    pub token: Token,
    pub line: usize,
    pub column: usize,
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

pub(crate) struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    pub fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

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

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }

    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::new(line, column, message)
    }

    pub fn tokenize(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while let Some(t) = self.next_token()? {
            out.push(t);
        }
        Ok(out)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    /// Local-name characters; `.` is allowed only between name characters.
    fn take_local(&mut self) -> String {
        let mut s = String::new();
        loop {
            match self.peek() {
                Some(c) if is_name_char(c) => {
                    s.push(c);
                    self.bump();
                }
                Some('.') if !s.is_empty() && self.peek2().is_some_and(is_name_char) => {
                    s.push('.');
                    self.bump();
                }
                _ => break,
            }
        }
        s
    }

    fn next_token(&mut self) -> Result<Option<Spanned>, ParseError> {
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let token = match c {
            '.' if !self.peek2().is_some_and(|d| d.is_ascii_digit()) => {
                self.bump();
                Token::Dot
            }
            ';' => {
                self.bump();
                Token::Semicolon
            }
            ',' => {
                self.bump();
                Token::Comma
            }
            '^' => {
                self.bump();
                if self.bump() != Some('^') {
                    return Err(self.error(line, column, "expected '^^'"));
                }
                Token::DoubleCaret
            }
            '<' => {
                self.bump();
                let mut iri = String::new();
                loop {
                    match self.bump() {
                        Some('>') => break,
                        Some(c) if c.is_whitespace() || c == '<' || c == '"' => {
                            return Err(self.error(
                                line,
                                column,
                                format!("invalid character {c:?} in IRI"),
                            ))
                        }
                        Some(c) => iri.push(c),
                        None => return Err(self.error(line, column, "unterminated IRI")),
                    }
                }
                Token::IriRef(iri)
            }
            '"' => Token::Str(self.string(line, column)?),
            '@' => {
                self.bump();
                let word = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                match word.as_str() {
                    "prefix" => Token::PrefixDirective,
                    "base" => Token::BaseDirective,
                    "" => {
                        return Err(self.error(
                            line,
                            column,
                            "expected directive or language tag after '@'",
                        ))
                    }
                    _ => Token::LangTag(word),
                }
            }
            '?' => {
                self.bump();
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                if name.is_empty() {
                    return Err(self.error(line, column, "expected variable name after '?'"));
                }
                Token::Variable(name)
            }
            '_' if self.peek2() == Some(':') => {
                self.bump();
                self.bump();
                let label = self.take_local();
                if label.is_empty() {
                    return Err(self.error(line, column, "expected blank node label"));
                }
                Token::Blank(label)
            }
            '+' | '-' | '0'..='9' | '.' => self.number(line, column)?,
            ':' => {
                self.bump();
                let local = self.take_local();
                if local.is_empty() {
                    Token::PrefixLabel(String::new())
                } else {
                    Token::PrefixedName(String::new(), local)
                }
            }
            c if is_name_start(c) => {
                let word = self.take_while(is_name_char);
                if self.peek() == Some(':') {
                    self.bump();
                    let local = self.take_local();
                    if local.is_empty() {
                        Token::PrefixLabel(word)
                    } else {
                        Token::PrefixedName(word, local)
                    }
                } else {
                    match word.as_str() {
                        "a" => Token::A,
                        "true" => Token::True,
                        "false" => Token::False,
                        _ => {
                            return Err(self.error(
                                line,
                                column,
                                format!("unexpected bare word '{word}'"),
                            ))
                        }
                    }
                }
            }
            other => {
                return Err(self.error(line, column, format!("unexpected character {other:?}")))
            }
        };
        Ok(Some(Spanned {
            token,
            line,
            column,
        }))
    }

    fn string(&mut self, line: usize, column: usize) -> Result<String, ParseError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('"') => return Ok(s),
                Some('\\') => {
                    let esc = match self.bump() {
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('t') => '\t',
                        Some(other) => {
                            return Err(self.error(
                                self.line,
                                self.column.saturating_sub(1).max(1),
                                format!("unknown escape '\\{other}'"),
                            ))
                        }
                        None => return Err(self.error(line, column, "unterminated string")),
                    };
                    s.push(esc);
                }
                Some('\n') | Some('\r') => {
                    return Err(self.error(line, column, "newline in string literal"))
                }
                Some(c) => s.push(c),
                None => return Err(self.error(line, column, "unterminated string")),
            }
        }
    }

    fn number(&mut self, line: usize, column: usize) -> Result<Token, ParseError> {
        let mut s = String::new();
        if let Some(sign @ ('+' | '-')) = self.peek() {
            s.push(sign);
            self.bump();
        }
        s.push_str(&self.take_while(|c| c.is_ascii_digit()));
        let is_decimal =
            self.peek() == Some('.') && self.peek2().is_some_and(|d| d.is_ascii_digit());
        if is_decimal {
            self.bump();
            s.push('.');
            s.push_str(&self.take_while(|c| c.is_ascii_digit()));
        }
        if !s.chars().any(|c| c.is_ascii_digit()) {
            return Err(self.error(line, column, "malformed number"));
        }
        Ok(if is_decimal {
            Token::Decimal(s)
        } else {
            Token::Integer(s)
        })
    }
}
