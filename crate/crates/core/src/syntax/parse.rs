//! Parser for proof modules (`.mml` files).
//!
//! A module is a sequence of declarations:
//!
//! ```text
//! import "theory.mtt"
//! postulate lem : p0 + ~p0 at cl
//! thm ax4 : <box|p0> -> <box.box|p0> at m :=
//!   \b : <box|p0>. let box{box} y = b in box{box.box} y[four]
//! ```
//!
//! Parsing is purely syntactic: modality words and 2-cell expressions are
//! kept as names with spans and resolved against a mode theory afterwards.

use crate::lex::{lex, Cursor, Span, SyntaxError, Tok};

use super::{InjIndex, ProjIndex};

/// A modality word as written: factors in composition order (`a . b` means
/// `a` after `b`), with identity factors `1` already dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct SWord {
    pub gens: Vec<(String, Span)>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SType {
    Atom(usize, Span),
    Top(Span),
    Bot(Span),
    Neg(Box<SType>, Span),
    Prod(Box<SType>, Box<SType>),
    Sum(Box<SType>, Box<SType>),
    Impl {
        tag: Option<SWord>,
        antecedent: Box<SType>,
        consequent: Box<SType>,
    },
    Modal {
        tag: SWord,
        body: Box<SType>,
    },
}

/// A 2-cell expression as written inside `[...]`.
#[derive(Clone, Debug, PartialEq)]
pub enum SCell {
    /// `?`: ask the checker to search for a witness.
    Hole(Span),
    /// Bare `id`: the identity cell on whatever boundary is required.
    IdInfer(Span),
    /// `id(word)`.
    IdPath(SWord, Span),
    Gen(String, Span),
    /// `a ; b`: first `a`, then `b`.
    VComp(Box<SCell>, Box<SCell>),
    /// `a * b`: `a` to the left of `b`.
    HComp(Box<SCell>, Box<SCell>),
}

impl SCell {
    pub fn span(&self) -> Span {
        match self {
            SCell::Hole(s) | SCell::IdInfer(s) | SCell::IdPath(_, s) | SCell::Gen(_, s) => *s,
            SCell::VComp(a, _) | SCell::HComp(a, _) => a.span(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum STerm {
    Var {
        name: String,
        cell: Option<SCell>,
        span: Span,
    },
    /// `name{A, B}`: a postulate applied to type arguments.
    Inst {
        name: String,
        args: Vec<SType>,
        span: Span,
    },
    Pair(Box<STerm>, Box<STerm>, Span),
    Proj {
        index: ProjIndex,
        pair: Box<STerm>,
        span: Span,
    },
    Lam {
        var: String,
        tag: Option<SWord>,
        dom: SType,
        body: Box<STerm>,
        span: Span,
    },
    App {
        fun: Box<STerm>,
        tag: Option<SWord>,
        arg: Box<STerm>,
    },
    Inj {
        index: InjIndex,
        body: Box<STerm>,
        span: Span,
    },
    Case {
        scrutinee: Box<STerm>,
        left_var: String,
        left: Box<STerm>,
        right_var: String,
        right: Box<STerm>,
        span: Span,
    },
    MkBox {
        tag: SWord,
        body: Box<STerm>,
        span: Span,
    },
    LetBox {
        outer: Option<SWord>,
        inner: SWord,
        var: String,
        bound: Box<STerm>,
        body: Box<STerm>,
        span: Span,
    },
}

impl STerm {
    pub fn span(&self) -> Span {
        match self {
            STerm::Var { span, .. }
            | STerm::Inst { span, .. }
            | STerm::Pair(_, _, span)
            | STerm::Proj { span, .. }
            | STerm::Lam { span, .. }
            | STerm::Inj { span, .. }
            | STerm::Case { span, .. }
            | STerm::MkBox { span, .. }
            | STerm::LetBox { span, .. } => *span,
            STerm::App { fun, .. } => fun.span(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SDecl {
    Postulate {
        name: String,
        ty: SType,
        mode: (String, Span),
        span: Span,
    },
    Thm {
        name: String,
        ty: SType,
        mode: (String, Span),
        term: STerm,
        span: Span,
    },
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SurfaceModule {
    pub imports: Vec<(String, Span)>,
    pub decls: Vec<SDecl>,
}

/// Names that cannot be used as variables or postulates.
const KEYWORDS: &[&str] = &[
    "import", "postulate", "thm", "at", "let", "box", "in", "case", "of", "fst", "snd", "inl",
    "inr", "top", "bot",
];

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

pub fn parse_mml(input: &str) -> Result<SurfaceModule, SyntaxError> {
    let mut cur = Cursor::new(lex(input)?);
    let mut module = SurfaceModule::default();
    while !cur.at_end() {
        let span = cur.span();
        let (kw, kw_span) = cur.expect_ident()?;
        match kw.as_str() {
            "import" => match cur.next() {
                Some((Tok::Str(path), sp)) => module.imports.push((path, sp)),
                Some((t, sp)) => {
                    return Err(SyntaxError::new(
                        format!("expected a quoted path after `import`, found {t}"),
                        sp,
                    ))
                }
                None => {
                    return Err(SyntaxError::new(
                        "expected a quoted path after `import`",
                        kw_span,
                    ))
                }
            },
            "postulate" => {
                let (name, nsp) = expect_name(&mut cur)?;
                cur.expect(&Tok::Colon)?;
                let ty = parse_type(&mut cur)?;
                expect_kw(&mut cur, "at")?;
                let mode = expect_name(&mut cur)?;
                module.decls.push(SDecl::Postulate {
                    name,
                    ty,
                    mode,
                    span,
                });
                let _ = nsp;
            }
            "thm" => {
                let (name, _) = expect_name(&mut cur)?;
                cur.expect(&Tok::Colon)?;
                let ty = parse_type(&mut cur)?;
                expect_kw(&mut cur, "at")?;
                let mode = expect_name(&mut cur)?;
                cur.expect(&Tok::ColonEq)?;
                let term = parse_term(&mut cur)?;
                module.decls.push(SDecl::Thm {
                    name,
                    ty,
                    mode,
                    term,
                    span,
                });
            }
            other => {
                return Err(SyntaxError::new(
                    format!("expected `import`, `postulate`, or `thm`, found `{other}`"),
                    kw_span,
                ))
            }
        }
    }
    Ok(module)
}

fn expect_kw(cur: &mut Cursor, kw: &str) -> Result<Span, SyntaxError> {
    match cur.next() {
        Some((Tok::Ident(s), sp)) if s == kw => Ok(sp),
        Some((t, sp)) => Err(SyntaxError::new(format!("expected `{kw}`, found {t}"), sp)),
        None => Err(SyntaxError::new(format!("expected `{kw}`"), cur.span())),
    }
}

fn expect_name(cur: &mut Cursor) -> Result<(String, Span), SyntaxError> {
    let (name, sp) = cur.expect_ident()?;
    if is_keyword(&name) {
        return Err(SyntaxError::new(
            format!("`{name}` is a keyword and cannot be used as a name"),
            sp,
        ));
    }
    Ok((name, sp))
}

/// Parse a modality word: factors in composition order separated by `.`,
/// where a factor is a generator name or the identity `1`.
pub fn parse_word(cur: &mut Cursor) -> Result<SWord, SyntaxError> {
    let span = cur.span();
    let mut gens = Vec::new();
    loop {
        match cur.next() {
            Some((Tok::Ident(s), sp)) => gens.push((s, sp)),
            Some((Tok::Int(1), _)) => {}
            Some((t, sp)) => {
                return Err(SyntaxError::new(
                    format!("expected a modality name or `1`, found {t}"),
                    sp,
                ))
            }
            None => {
                return Err(SyntaxError::new(
                    "expected a modality name or `1`",
                    cur.span(),
                ))
            }
        }
        if !cur.eat(&Tok::Dot) {
            break;
        }
    }
    Ok(SWord { gens, span })
}

// --- types ---------------------------------------------------------------

pub fn parse_type(cur: &mut Cursor) -> Result<SType, SyntaxError> {
    let lhs = parse_sum_type(cur)?;
    if cur.eat(&Tok::Arrow) {
        let tag = if cur.eat(&Tok::LBrace) {
            let w = parse_word(cur)?;
            cur.expect(&Tok::RBrace)?;
            Some(w)
        } else {
            None
        };
        let rhs = parse_type(cur)?;
        return Ok(SType::Impl {
            tag,
            antecedent: Box::new(lhs),
            consequent: Box::new(rhs),
        });
    }
    Ok(lhs)
}

fn parse_sum_type(cur: &mut Cursor) -> Result<SType, SyntaxError> {
    let mut acc = parse_prod_type(cur)?;
    while cur.eat(&Tok::Plus) {
        let rhs = parse_prod_type(cur)?;
        acc = SType::Sum(Box::new(acc), Box::new(rhs));
    }
    Ok(acc)
}

fn parse_prod_type(cur: &mut Cursor) -> Result<SType, SyntaxError> {
    let mut acc = parse_atom_type(cur)?;
    while cur.eat(&Tok::Star) {
        let rhs = parse_atom_type(cur)?;
        acc = SType::Prod(Box::new(acc), Box::new(rhs));
    }
    Ok(acc)
}

fn parse_atom_type(cur: &mut Cursor) -> Result<SType, SyntaxError> {
    let span = cur.span();
    match cur.next() {
        Some((Tok::Tilde, sp)) => Ok(SType::Neg(Box::new(parse_atom_type(cur)?), sp)),
        Some((Tok::LAngle, _)) => {
            let tag = parse_word(cur)?;
            cur.expect(&Tok::Pipe)?;
            let body = parse_type(cur)?;
            cur.expect(&Tok::RAngle)?;
            Ok(SType::Modal {
                tag,
                body: Box::new(body),
            })
        }
        Some((Tok::LParen, _)) => {
            let ty = parse_type(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(ty)
        }
        Some((Tok::Ident(s), sp)) => match s.as_str() {
            "top" => Ok(SType::Top(sp)),
            "bot" => Ok(SType::Bot(sp)),
            _ => match atom_index(&s) {
                Some(i) => Ok(SType::Atom(i, sp)),
                None => Err(SyntaxError::new(
                    format!("expected a type, found `{s}` (atoms are written p0, p1, ...)"),
                    sp,
                )),
            },
        },
        Some((t, sp)) => Err(SyntaxError::new(format!("expected a type, found {t}"), sp)),
        None => Err(SyntaxError::new("expected a type", span)),
    }
}

fn atom_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('p')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

// --- terms ---------------------------------------------------------------

pub fn parse_term(cur: &mut Cursor) -> Result<STerm, SyntaxError> {
    let span = cur.span();
    match cur.peek() {
        Some(Tok::Backslash) => {
            cur.next();
            let (var, _) = expect_name(cur)?;
            cur.expect(&Tok::Colon)?;
            let tag = if cur.eat(&Tok::LBrace) {
                let w = parse_word(cur)?;
                cur.expect(&Tok::RBrace)?;
                Some(w)
            } else {
                None
            };
            let dom = parse_type(cur)?;
            cur.expect(&Tok::Dot)?;
            let body = parse_term(cur)?;
            Ok(STerm::Lam {
                var,
                tag,
                dom,
                body: Box::new(body),
                span,
            })
        }
        Some(Tok::Ident(s)) if s == "let" => {
            cur.next();
            expect_kw(cur, "box")?;
            cur.expect(&Tok::LBrace)?;
            let first = parse_word(cur)?;
            let (outer, inner) = if cur.eat(&Tok::Semi) {
                let second = parse_word(cur)?;
                (Some(first), second)
            } else {
                (None, first)
            };
            cur.expect(&Tok::RBrace)?;
            let (var, _) = expect_name(cur)?;
            cur.expect(&Tok::Eq)?;
            let bound = parse_term(cur)?;
            expect_kw(cur, "in")?;
            let body = parse_term(cur)?;
            Ok(STerm::LetBox {
                outer,
                inner,
                var,
                bound: Box::new(bound),
                body: Box::new(body),
                span,
            })
        }
        Some(Tok::Ident(s)) if s == "case" => {
            cur.next();
            let scrutinee = parse_term(cur)?;
            expect_kw(cur, "of")?;
            cur.expect(&Tok::LBrace)?;
            let (left_var, _) = expect_name(cur)?;
            cur.expect(&Tok::Dot)?;
            let left = parse_term(cur)?;
            cur.expect(&Tok::Pipe)?;
            let (right_var, _) = expect_name(cur)?;
            cur.expect(&Tok::Dot)?;
            let right = parse_term(cur)?;
            cur.expect(&Tok::RBrace)?;
            Ok(STerm::Case {
                scrutinee: Box::new(scrutinee),
                left_var,
                left: Box::new(left),
                right_var,
                right: Box::new(right),
                span,
            })
        }
        _ => parse_app(cur),
    }
}

fn parse_app(cur: &mut Cursor) -> Result<STerm, SyntaxError> {
    let mut acc = parse_atom_term(cur)?;
    loop {
        if cur.eat(&Tok::At) {
            let tag = if cur.eat(&Tok::LBrace) {
                let w = parse_word(cur)?;
                cur.expect(&Tok::RBrace)?;
                Some(w)
            } else {
                None
            };
            let arg = parse_atom_term(cur)?;
            acc = STerm::App {
                fun: Box::new(acc),
                tag,
                arg: Box::new(arg),
            };
        } else if starts_atom(cur.peek()) {
            let arg = parse_atom_term(cur)?;
            acc = STerm::App {
                fun: Box::new(acc),
                tag: None,
                arg: Box::new(arg),
            };
        } else {
            return Ok(acc);
        }
    }
}

/// Tokens that can begin an application argument.  `let` and `case` are
/// excluded: they must be parenthesised in argument position.
fn starts_atom(tok: Option<&Tok>) -> bool {
    match tok {
        Some(Tok::LParen) => true,
        Some(Tok::Ident(s)) => !matches!(
            s.as_str(),
            "in" | "of" | "at" | "let" | "case" | "thm" | "postulate" | "import" | "top" | "bot"
        ),
        _ => false,
    }
}

fn parse_atom_term(cur: &mut Cursor) -> Result<STerm, SyntaxError> {
    let span = cur.span();
    match cur.next() {
        Some((Tok::LParen, _)) => {
            let first = parse_term(cur)?;
            if cur.eat(&Tok::Comma) {
                let second = parse_term(cur)?;
                cur.expect(&Tok::RParen)?;
                Ok(STerm::Pair(Box::new(first), Box::new(second), span))
            } else {
                cur.expect(&Tok::RParen)?;
                Ok(first)
            }
        }
        Some((Tok::Ident(s), sp)) => match s.as_str() {
            "fst" | "snd" => {
                let index = if s == "fst" {
                    ProjIndex::Fst
                } else {
                    ProjIndex::Snd
                };
                let pair = parse_atom_term(cur)?;
                Ok(STerm::Proj {
                    index,
                    pair: Box::new(pair),
                    span: sp,
                })
            }
            "inl" | "inr" => {
                let index = if s == "inl" {
                    InjIndex::Left
                } else {
                    InjIndex::Right
                };
                let body = parse_atom_term(cur)?;
                Ok(STerm::Inj {
                    index,
                    body: Box::new(body),
                    span: sp,
                })
            }
            "box" => {
                cur.expect(&Tok::LBrace)?;
                let tag = parse_word(cur)?;
                cur.expect(&Tok::RBrace)?;
                let body = parse_atom_term(cur)?;
                Ok(STerm::MkBox {
                    tag,
                    body: Box::new(body),
                    span: sp,
                })
            }
            _ if is_keyword(&s) => Err(SyntaxError::new(
                format!("unexpected keyword `{s}` in a term"),
                sp,
            )),
            _ => {
                if cur.eat(&Tok::LBracket) {
                    let cell = parse_cell_annotation(cur)?;
                    cur.expect(&Tok::RBracket)?;
                    Ok(STerm::Var {
                        name: s,
                        cell: Some(cell),
                        span: sp,
                    })
                } else if cur.peek() == Some(&Tok::LBrace) {
                    cur.next();
                    let mut args = Vec::new();
                    if cur.peek() != Some(&Tok::RBrace) {
                        loop {
                            args.push(parse_type(cur)?);
                            if !cur.eat(&Tok::Comma) {
                                break;
                            }
                        }
                    }
                    cur.expect(&Tok::RBrace)?;
                    Ok(STerm::Inst {
                        name: s,
                        args,
                        span: sp,
                    })
                } else {
                    Ok(STerm::Var {
                        name: s,
                        cell: None,
                        span: sp,
                    })
                }
            }
        },
        Some((t, sp)) => Err(SyntaxError::new(format!("expected a term, found {t}"), sp)),
        None => Err(SyntaxError::new("expected a term", span)),
    }
}

// --- 2-cell expressions --------------------------------------------------

/// The body of a `[...]` annotation.  `?` is only allowed on its own.
fn parse_cell_annotation(cur: &mut Cursor) -> Result<SCell, SyntaxError> {
    if let Some(Tok::Question) = cur.peek() {
        let (_, sp) = cur.next().unwrap();
        return Ok(SCell::Hole(sp));
    }
    parse_cell(cur)
}

fn parse_cell(cur: &mut Cursor) -> Result<SCell, SyntaxError> {
    let mut acc = parse_cell_hcomp(cur)?;
    while cur.eat(&Tok::Semi) {
        let next = parse_cell_hcomp(cur)?;
        acc = SCell::VComp(Box::new(acc), Box::new(next));
    }
    Ok(acc)
}

fn parse_cell_hcomp(cur: &mut Cursor) -> Result<SCell, SyntaxError> {
    let mut acc = parse_cell_atom(cur)?;
    while cur.eat(&Tok::Star) {
        let next = parse_cell_atom(cur)?;
        acc = SCell::HComp(Box::new(acc), Box::new(next));
    }
    Ok(acc)
}

fn parse_cell_atom(cur: &mut Cursor) -> Result<SCell, SyntaxError> {
    let span = cur.span();
    match cur.next() {
        Some((Tok::LParen, _)) => {
            let cell = parse_cell(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(cell)
        }
        Some((Tok::Ident(s), sp)) if s == "id" => {
            if cur.eat(&Tok::LParen) {
                let word = parse_word(cur)?;
                cur.expect(&Tok::RParen)?;
                Ok(SCell::IdPath(word, sp))
            } else {
                Ok(SCell::IdInfer(sp))
            }
        }
        Some((Tok::Ident(s), sp)) => Ok(SCell::Gen(s, sp)),
        Some((t, sp)) => Err(SyntaxError::new(
            format!("expected a 2-cell expression, found {t}"),
            sp,
        )),
        None => Err(SyntaxError::new("expected a 2-cell expression", span)),
    }
}
