//! Resolution of surface syntax against a mode theory.  Modality words are
//! reversed into application order and boundary-checked, the ambient mode is
//! threaded top-down, and 2-cell expressions are evaluated to cells.

use std::collections::BTreeSet;

use crate::lex::{Span, SyntaxError};
use crate::mode_theory::{Cell2, ModalityPath, ModeId, ModeTheory};

use super::parse::{SCell, SDecl, STerm, SType, SWord, SurfaceModule};
use super::{CellRef, Term, TypeExpr};

#[derive(Clone, Debug, PartialEq)]
pub struct PostulateDecl {
    pub name: String,
    pub scheme: TypeExpr,
    pub mode: ModeId,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThmDecl {
    pub name: String,
    pub ty: TypeExpr,
    pub mode: ModeId,
    pub term: Term,
    pub span: Span,
}

/// A resolved module: postulates and theorems in declaration order.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Module {
    pub postulates: Vec<PostulateDecl>,
    pub thms: Vec<ThmDecl>,
}

/// Resolve a word written in composition order into a path, requiring it to
/// land in `target` (identity words take their mode from `target`).
pub fn resolve_word(
    mt: &ModeTheory,
    word: &SWord,
    target: &ModeId,
) -> Result<ModalityPath, SyntaxError> {
    let names: Vec<String> = word.gens.iter().rev().map(|(n, _)| n.clone()).collect();
    let path = mt
        .path_from_word(&names, Some(target))
        .map_err(|e| SyntaxError::new(e.to_string(), word.span))?;
    if path.target() != target {
        return Err(SyntaxError::new(
            format!(
                "modality lands in mode `{}`, but mode `{}` is required here",
                path.target(),
                target
            ),
            word.span,
        ));
    }
    Ok(path)
}

fn resolve_opt_word(
    mt: &ModeTheory,
    word: &Option<SWord>,
    target: &ModeId,
) -> Result<ModalityPath, SyntaxError> {
    match word {
        Some(w) => resolve_word(mt, w, target),
        None => Ok(ModalityPath::identity(target)),
    }
}

pub fn resolve_type(mt: &ModeTheory, ty: &SType, mode: &ModeId) -> Result<TypeExpr, SyntaxError> {
    match ty {
        SType::Atom(i, _) => Ok(TypeExpr::Atom(*i)),
        SType::Top(_) => Ok(TypeExpr::Top),
        SType::Bot(_) => Ok(TypeExpr::Bot),
        SType::Neg(body, _) => Ok(TypeExpr::neg(mode, resolve_type(mt, body, mode)?)),
        SType::Prod(a, b) => Ok(TypeExpr::prod(
            resolve_type(mt, a, mode)?,
            resolve_type(mt, b, mode)?,
        )),
        SType::Sum(a, b) => Ok(TypeExpr::sum(
            resolve_type(mt, a, mode)?,
            resolve_type(mt, b, mode)?,
        )),
        SType::Impl {
            tag,
            antecedent,
            consequent,
        } => {
            let tag = resolve_opt_word(mt, tag, mode)?;
            let antecedent = resolve_type(mt, antecedent, tag.source())?;
            let consequent = resolve_type(mt, consequent, mode)?;
            Ok(TypeExpr::impl_(tag, antecedent, consequent))
        }
        SType::Modal { tag, body } => {
            let tag = resolve_word(mt, tag, mode)?;
            let body = resolve_type(mt, body, tag.source())?;
            Ok(TypeExpr::modal(tag, body))
        }
    }
}

/// Evaluate a 2-cell expression to a concrete cell.  Bare `id` is not
/// allowed inside a compound, because its boundary cannot be inferred there.
fn resolve_cell_expr(mt: &ModeTheory, cell: &SCell) -> Result<Cell2, SyntaxError> {
    match cell {
        SCell::Hole(sp) => Err(SyntaxError::new(
            "`?` cannot appear inside a compound 2-cell expression",
            *sp,
        )),
        SCell::IdInfer(sp) => Err(SyntaxError::new(
            "bare `id` cannot appear inside a compound 2-cell expression; write `id(word)`",
            *sp,
        )),
        SCell::IdPath(word, sp) => {
            let names: Vec<String> = word.gens.iter().rev().map(|(n, _)| n.clone()).collect();
            let path = mt
                .path_from_word(&names, None)
                .map_err(|e| SyntaxError::new(e.to_string(), *sp))?;
            Ok(mt.id_cell(&path))
        }
        SCell::Gen(name, sp) => mt
            .gen_cell(name)
            .map_err(|e| SyntaxError::new(e.to_string(), *sp)),
        SCell::VComp(first, then) => {
            let sp = first.span();
            let first = resolve_cell_expr(mt, first)?;
            let then = resolve_cell_expr(mt, then)?;
            mt.vcomp(then, first)
                .map_err(|e| SyntaxError::new(e.to_string(), sp))
        }
        SCell::HComp(left, right) => {
            let sp = left.span();
            let left = resolve_cell_expr(mt, left)?;
            let right = resolve_cell_expr(mt, right)?;
            mt.hcomp(left, right)
                .map_err(|e| SyntaxError::new(e.to_string(), sp))
        }
    }
}

fn resolve_cell_ref(mt: &ModeTheory, cell: &Option<SCell>) -> Result<CellRef, SyntaxError> {
    match cell {
        None | Some(SCell::IdInfer(_)) => Ok(CellRef::Id),
        Some(SCell::Hole(_)) => Ok(CellRef::Hole),
        Some(other) => Ok(CellRef::Cell(resolve_cell_expr(mt, other)?)),
    }
}

pub fn resolve_term(
    mt: &ModeTheory,
    postulates: &BTreeSet<String>,
    term: &STerm,
    mode: &ModeId,
) -> Result<Term, SyntaxError> {
    resolve_term_in(mt, postulates, &mut Vec::new(), term, mode)
}

fn resolve_term_in(
    mt: &ModeTheory,
    postulates: &BTreeSet<String>,
    bound: &mut Vec<String>,
    term: &STerm,
    mode: &ModeId,
) -> Result<Term, SyntaxError> {
    match term {
        STerm::Var { name, cell, span } => {
            let is_bound = bound.iter().any(|b| b == name);
            if !is_bound && postulates.contains(name) {
                if cell.is_some() {
                    return Err(SyntaxError::new(
                        format!("postulate `{name}` cannot carry a 2-cell annotation"),
                        *span,
                    ));
                }
                return Ok(Term::Postulate {
                    name: name.clone(),
                    args: Vec::new(),
                });
            }
            Ok(Term::Var {
                name: name.clone(),
                cell: resolve_cell_ref(mt, cell)?,
            })
        }
        STerm::Inst { name, args, span } => {
            if bound.iter().any(|b| b == name) {
                return Err(SyntaxError::new(
                    format!("`{name}` is a variable here and cannot take type arguments"),
                    *span,
                ));
            }
            if !postulates.contains(name) {
                return Err(SyntaxError::new(format!("unknown postulate `{name}`"), *span));
            }
            let args = args
                .iter()
                .map(|a| resolve_type(mt, a, mode))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Term::Postulate {
                name: name.clone(),
                args,
            })
        }
        STerm::Pair(a, b, _) => Ok(Term::Pair(
            Box::new(resolve_term_in(mt, postulates, bound, a, mode)?),
            Box::new(resolve_term_in(mt, postulates, bound, b, mode)?),
        )),
        STerm::Proj { index, pair, .. } => Ok(Term::Proj {
            index: *index,
            pair: Box::new(resolve_term_in(mt, postulates, bound, pair, mode)?),
        }),
        STerm::Lam {
            var,
            tag,
            dom,
            body,
            ..
        } => {
            let tag = resolve_opt_word(mt, tag, mode)?;
            let dom = resolve_type(mt, dom, tag.source())?;
            bound.push(var.clone());
            let body = resolve_term_in(mt, postulates, bound, body, mode);
            bound.pop();
            Ok(Term::lam(var, tag, dom, body?))
        }
        STerm::App { fun, tag, arg } => {
            let tag = resolve_opt_word(mt, tag, mode)?;
            let fun = resolve_term_in(mt, postulates, bound, fun, mode)?;
            let arg = resolve_term_in(mt, postulates, bound, arg, tag.source())?;
            Ok(Term::app(fun, tag, arg))
        }
        STerm::Inj { index, body, .. } => Ok(Term::Inj {
            index: *index,
            body: Box::new(resolve_term_in(mt, postulates, bound, body, mode)?),
        }),
        STerm::Case {
            scrutinee,
            left_var,
            left,
            right_var,
            right,
            ..
        } => {
            let scrutinee = resolve_term_in(mt, postulates, bound, scrutinee, mode)?;
            bound.push(left_var.clone());
            let left = resolve_term_in(mt, postulates, bound, left, mode);
            bound.pop();
            bound.push(right_var.clone());
            let right = resolve_term_in(mt, postulates, bound, right, mode);
            bound.pop();
            Ok(Term::Case {
                scrutinee: Box::new(scrutinee),
                left_var: left_var.clone(),
                left: Box::new(left?),
                right_var: right_var.clone(),
                right: Box::new(right?),
            })
        }
        STerm::MkBox { tag, body, .. } => {
            let tag = resolve_word(mt, tag, mode)?;
            let body = resolve_term_in(mt, postulates, bound, body, tag.source())?;
            Ok(Term::mkbox(tag, body))
        }
        STerm::LetBox {
            outer,
            inner,
            var,
            bound: major,
            body,
            ..
        } => {
            let outer = resolve_opt_word(mt, outer, mode)?;
            let inner = resolve_word(mt, inner, outer.source())?;
            let major = resolve_term_in(mt, postulates, bound, major, outer.source())?;
            bound.push(var.clone());
            let body = resolve_term_in(mt, postulates, bound, body, mode);
            bound.pop();
            Ok(Term::letbox(outer, inner, var, major, body?))
        }
    }
}

/// Resolve a whole module.  Declarations see the postulates that precede
/// them; names must be unique across postulates and theorems.
pub fn resolve_module(mt: &ModeTheory, module: &SurfaceModule) -> Result<Module, SyntaxError> {
    let mut out = Module::default();
    let mut names: BTreeSet<String> = BTreeSet::new();
    let mut postulate_names: BTreeSet<String> = BTreeSet::new();
    for decl in &module.decls {
        match decl {
            SDecl::Postulate {
                name,
                ty,
                mode: (mode, msp),
                span,
            } => {
                let mode = lookup_mode(mt, mode, *msp)?;
                if !names.insert(name.clone()) {
                    return Err(SyntaxError::new(format!("duplicate name `{name}`"), *span));
                }
                let scheme = resolve_type(mt, ty, &mode)?;
                postulate_names.insert(name.clone());
                out.postulates.push(PostulateDecl {
                    name: name.clone(),
                    scheme,
                    mode,
                    span: *span,
                });
            }
            SDecl::Thm {
                name,
                ty,
                mode: (mode, msp),
                term,
                span,
            } => {
                let mode = lookup_mode(mt, mode, *msp)?;
                if !names.insert(name.clone()) {
                    return Err(SyntaxError::new(format!("duplicate name `{name}`"), *span));
                }
                let ty = resolve_type(mt, ty, &mode)?;
                let term = resolve_term(mt, &postulate_names, term, &mode)?;
                out.thms.push(ThmDecl {
                    name: name.clone(),
                    ty,
                    mode,
                    term,
                    span: *span,
                });
            }
        }
    }
    Ok(out)
}

fn lookup_mode(mt: &ModeTheory, name: &str, span: Span) -> Result<ModeId, SyntaxError> {
    let mode = ModeId::new(name);
    if !mt.has_mode(&mode) {
        return Err(SyntaxError::new(format!("unknown mode `{name}`"), span));
    }
    Ok(mode)
}
