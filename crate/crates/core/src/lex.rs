//! Shared lexer for the `.mtt` and `.mml` text formats.
//!
//! Line comments start with `--`. Identifiers are ASCII alphanumerics plus
//! `_` and `'`, starting with a letter.

use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LAngle,
    RAngle,
    Pipe,
    Comma,
    Dot,
    Semi,
    Colon,
    ColonEq,
    Eq,
    Arrow,  // ->
    DArrow, // =>
    Star,
    Plus,
    Backslash,
    At,
    Question,
    Tilde,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LAngle => write!(f, "`<`"),
            Tok::RAngle => write!(f, "`>`"),
            Tok::Pipe => write!(f, "`|`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::ColonEq => write!(f, "`:=`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::DArrow => write!(f, "`=>`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Backslash => write!(f, "`\\`"),
            Tok::At => write!(f, "`@`"),
            Tok::Question => write!(f, "`?`"),
            Tok::Tilde => write!(f, "`~`"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{span}: {message}")]
pub struct SyntaxError {
    pub message: String,
    pub span: Span,
}

impl SyntaxError {
    pub fn new(message: impl Into<String>, span: Span) -> Self {
        SyntaxError {
            message: message.into(),
            span,
        }
    }
}

pub fn lex(input: &str) -> Result<Vec<(Tok, Span)>, SyntaxError> {
    let mut out = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = input.chars().peekable();

    macro_rules! here {
        () => {
            Span { line, col }
        };
    }

    while let Some(&c) = chars.peek() {
        let span = here!();
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '-' => {
                chars.next();
                col += 1;
                match chars.peek() {
                    Some('-') => {
                        // line comment
                        for c in chars.by_ref() {
                            if c == '\n' {
                                line += 1;
                                col = 1;
                                break;
                            }
                        }
                    }
                    Some('>') => {
                        chars.next();
                        col += 1;
                        out.push((Tok::Arrow, span));
                    }
                    _ => return Err(SyntaxError::new("stray `-`", span)),
                }
            }
            '=' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    out.push((Tok::DArrow, span));
                } else {
                    out.push((Tok::Eq, span));
                }
            }
            ':' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    out.push((Tok::ColonEq, span));
                } else {
                    out.push((Tok::Colon, span));
                }
            }
            '"' => {
                chars.next();
                col += 1;
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => {
                            col += 1;
                            break;
                        }
                        Some('\n') | None => {
                            return Err(SyntaxError::new("unterminated string literal", span))
                        }
                        Some(c) => {
                            col += 1;
                            s.push(c);
                        }
                    }
                }
                out.push((Tok::Str(s), span));
            }
            c if c.is_ascii_digit() => {
                let mut n: u64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        n = n * 10 + v as u64;
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push((Tok::Int(n), span));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else if d == '-' {
                        // Hyphenated names like `s4-comonad`; `->` stays an arrow.
                        let mut ahead = chars.clone();
                        ahead.next();
                        match ahead.peek() {
                            Some(n) if n.is_ascii_alphanumeric() => {
                                s.push(d);
                                chars.next();
                                col += 1;
                            }
                            _ => break,
                        }
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), span));
            }
            _ => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '<' => Tok::LAngle,
                    '>' => Tok::RAngle,
                    '|' => Tok::Pipe,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    ';' => Tok::Semi,
                    '*' => Tok::Star,
                    '+' => Tok::Plus,
                    '\\' => Tok::Backslash,
                    '@' => Tok::At,
                    '?' => Tok::Question,
                    '~' => Tok::Tilde,
                    other => {
                        return Err(SyntaxError::new(
                            format!("unexpected character `{other}`"),
                            span,
                        ))
                    }
                };
                chars.next();
                col += 1;
                out.push((tok, span));
            }
        }
    }
    Ok(out)
}

/// A small cursor over the token stream, shared by both parsers.
pub struct Cursor {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<(Tok, Span)>) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    pub fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(t, _)| t)
    }

    pub fn span(&self) -> Span {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(_, s)| *s)
            .unwrap_or(Span { line: 1, col: 1 })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<(Tok, Span)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<Span, SyntaxError> {
        match self.next() {
            Some((t, s)) if t == *tok => Ok(s),
            Some((t, s)) => Err(SyntaxError::new(format!("expected {tok}, found {t}"), s)),
            None => Err(SyntaxError::new(
                format!("expected {tok}, found end of input"),
                self.span(),
            )),
        }
    }

    pub fn expect_ident(&mut self) -> Result<(String, Span), SyntaxError> {
        match self.next() {
            Some((Tok::Ident(s), sp)) => Ok((s, sp)),
            Some((t, s)) => Err(SyntaxError::new(format!("expected a name, found {t}"), s)),
            None => Err(SyntaxError::new(
                "expected a name, found end of input",
                self.span(),
            )),
        }
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}
