//! Bidirectional checking of proof terms.
//!
//! Inference handles every form except injections (which only check);
//! `check` switches on the expected type for the forms that need it and
//! falls back to inference plus semantic type equality.  Successful checks
//! produce a [`Derivation`] that records one node per rule instance; the
//! derivation can be replayed independently of the checker and erased to a
//! logic-level proof tree.

mod erase;
mod replay;

pub use erase::{erase, validate_proof_shape, EraseEntry, ProofTree};
pub use replay::replay;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::judgements::{wf_judgement, wf_type, WfError, WfOptions};
use crate::mode_theory::{
    Cell2, CellQueryResult, ModalityPath, ModeId, ModeTheory, ModeTheoryError, SearchBudget,
};
use crate::syntax::{
    locks_of, types_equal, CellRef, Context, InjIndex, ProjIndex, Term, TypeExpr,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("variable `{name}` has tag `{tag}` from mode `{tag_source}`, but is used at mode `{used_at}`")]
    VariableMode {
        name: String,
        tag: String,
        tag_source: String,
        used_at: String,
    },
    #[error("no 2-cell {from} => {to} (decisive: {decisive})")]
    CellMissing {
        from: String,
        to: String,
        /// True when the search provably exhausted the space.
        decisive: bool,
    },
    #[error("2-cell has boundary {found_from} => {found_to}, expected {expected_from} => {expected_to}")]
    CellBoundary {
        found_from: String,
        found_to: String,
        expected_from: String,
        expected_to: String,
    },
    #[error("expected type `{expected}`, found `{found}`")]
    TypeMismatch { expected: String, found: String },
    #[error("{subject} lives at mode `{expected}`, but is used at mode `{found}`")]
    ModeMismatch {
        subject: String,
        expected: String,
        found: String,
    },
    #[error("expected a function, found a term of type `{0}`")]
    NotAFunction(String),
    #[error("expected a pair, found a term of type `{0}`")]
    NotAProduct(String),
    #[error("expected a sum, found a term of type `{0}`")]
    NotASum(String),
    #[error("expected a modal type, found a term of type `{0}`")]
    NotAModal(String),
    #[error("cannot infer a type for {0}; add an annotation or check against a type")]
    CannotInfer(String),
    #[error("unknown postulate `{0}`")]
    UnknownPostulate(String),
    #[error("postulate `{name}` instantiates atoms up to p{needed}, but only {given} type arguments were given")]
    PostulateArity {
        name: String,
        needed: usize,
        given: usize,
    },
    #[error("excluded middle can only be postulated at a classical mode, not `{0}`")]
    NotClassical(String),
    #[error("duplicate postulate `{0}`")]
    DuplicatePostulate(String),
    #[error(transparent)]
    Wf(#[from] WfError),
    #[error(transparent)]
    ModeTheory(#[from] ModeTheoryError),
}

/// The rule instantiated at a derivation node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Var,
    Pair,
    Proj,
    Lam,
    App,
    Inj,
    Case,
    /// Modal introduction (`box`).
    Mod,
    /// Modal elimination (`let box`).
    Let,
    Postulate,
}

/// One node per rule instance; the full judgement is recorded at each node
/// so a derivation can be replayed without re-running inference.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Derivation {
    pub rule: Rule,
    pub context: Context,
    pub subject: Term,
    pub ty: TypeExpr,
    pub mode: ModeId,
    pub premises: Vec<Derivation>,
    /// The elaborated 2-cell, for `var` nodes.
    pub cell: Option<Cell2>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CheckOptions {
    pub budget: SearchBudget,
    pub wf: WfOptions,
}

/// A checker for one mode theory, carrying the postulates in scope.
pub struct Checker<'a> {
    mt: &'a ModeTheory,
    postulates: BTreeMap<String, (TypeExpr, ModeId)>,
    opts: CheckOptions,
}

/// Is `ty` an instance of excluded middle, `A + ~A`?
pub fn is_lem_scheme(mt: &ModeTheory, ty: &TypeExpr) -> bool {
    match ty {
        TypeExpr::Sum(a, b) => match b.as_ref() {
            TypeExpr::Impl {
                tag,
                antecedent,
                consequent,
            } => {
                tag.is_identity_word()
                    && **consequent == TypeExpr::Bot
                    && types_equal(mt, a, antecedent)
            }
            _ => false,
        },
        _ => false,
    }
}

impl<'a> Checker<'a> {
    pub fn new(mt: &'a ModeTheory, opts: CheckOptions) -> Self {
        Checker {
            mt,
            postulates: BTreeMap::new(),
            opts,
        }
    }

    pub fn mode_theory(&self) -> &ModeTheory {
        self.mt
    }

    pub fn options(&self) -> CheckOptions {
        self.opts
    }

    pub fn postulate(&self, name: &str) -> Option<&(TypeExpr, ModeId)> {
        self.postulates.get(name)
    }

    /// Declare a postulated scheme at a mode.  Excluded-middle schemes are
    /// only accepted at classical modes.
    pub fn declare_postulate(
        &mut self,
        name: &str,
        scheme: TypeExpr,
        mode: ModeId,
    ) -> Result<(), TypeError> {
        wf_type(self.mt, &scheme, &mode, self.opts.wf)?;
        if is_lem_scheme(self.mt, &scheme) && !self.mt.is_classical(&mode) {
            return Err(TypeError::NotClassical(mode.to_string()));
        }
        if self.postulates.contains_key(name) {
            return Err(TypeError::DuplicatePostulate(name.to_string()));
        }
        self.postulates
            .insert(name.to_string(), (scheme, mode));
        Ok(())
    }

    /// Check a closed theorem: the judgement must be well-formed and the
    /// term must check against the stated type.
    pub fn check_thm(
        &self,
        term: &Term,
        ty: &TypeExpr,
        mode: &ModeId,
    ) -> Result<Derivation, TypeError> {
        let ctx = Context::empty(mode.clone());
        wf_judgement(self.mt, &ctx, ty, self.opts.wf)?;
        self.check(&ctx, term, ty)
    }

    pub fn check(
        &self,
        ctx: &Context,
        term: &Term,
        ty: &TypeExpr,
    ) -> Result<Derivation, TypeError> {
        match (term, ty) {
            (Term::Inj { index, body }, TypeExpr::Sum(a, b)) => {
                let component = match index {
                    InjIndex::Left => a,
                    InjIndex::Right => b,
                };
                let premise = self.check(ctx, body, component)?;
                Ok(self.node(Rule::Inj, ctx, term, ty, vec![premise], None))
            }
            (Term::Inj { .. }, _) => Err(TypeError::NotASum(ty.to_string())),
            (Term::Pair(x, y), TypeExpr::Prod(a, b)) => {
                let px = self.check(ctx, x, a)?;
                let py = self.check(ctx, y, b)?;
                Ok(self.node(Rule::Pair, ctx, term, ty, vec![px, py], None))
            }
            (
                Term::Lam {
                    var,
                    tag,
                    dom,
                    body,
                },
                TypeExpr::Impl {
                    tag: ty_tag,
                    antecedent,
                    consequent,
                },
            ) => {
                self.require_tag_at(tag, &ctx.mode, "lambda binder")?;
                if !self.mt.hom_equal(tag, ty_tag) || !types_equal(self.mt, dom, antecedent) {
                    // Fall back on inference for a precise mismatch report.
                    return self.check_via_infer(ctx, term, ty);
                }
                let inner = ctx.bind(var, tag.clone(), dom.clone());
                let premise = self.check(&inner, body, consequent)?;
                Ok(self.node(Rule::Lam, ctx, term, ty, vec![premise], None))
            }
            (
                Term::Case {
                    scrutinee,
                    left_var,
                    left,
                    right_var,
                    right,
                },
                _,
            ) => {
                let (scrut_ty, pscrut) = self.infer(ctx, scrutinee)?;
                let (a, b) = match &scrut_ty {
                    TypeExpr::Sum(a, b) => (a.clone(), b.clone()),
                    other => return Err(TypeError::NotASum(other.to_string())),
                };
                let id = ModalityPath::identity(&ctx.mode);
                let pl = self.check(&ctx.bind(left_var, id.clone(), *a), left, ty)?;
                let pr = self.check(&ctx.bind(right_var, id, *b), right, ty)?;
                Ok(self.node(Rule::Case, ctx, term, ty, vec![pscrut, pl, pr], None))
            }
            (
                Term::MkBox { tag, body },
                TypeExpr::Modal {
                    tag: ty_tag,
                    body: body_ty,
                },
            ) if self.mt.hom_equal(tag, ty_tag) => {
                self.require_tag_at(tag, &ctx.mode, "box")?;
                let inner = ctx.lock(tag.clone());
                let premise = self.check(&inner, body, body_ty)?;
                Ok(self.node(Rule::Mod, ctx, term, ty, vec![premise], None))
            }
            (
                Term::LetBox {
                    outer,
                    inner,
                    var,
                    bound,
                    body,
                },
                _,
            ) => {
                let (pbound, elem_ty) = self.check_letbox_major(ctx, outer, inner, bound)?;
                let composite = self.mt.compose(outer, inner)?;
                let body_ctx = ctx.bind(var, composite, elem_ty);
                let pbody = self.check(&body_ctx, body, ty)?;
                Ok(self.node(Rule::Let, ctx, term, ty, vec![pbound, pbody], None))
            }
            _ => self.check_via_infer(ctx, term, ty),
        }
    }

    fn check_via_infer(
        &self,
        ctx: &Context,
        term: &Term,
        ty: &TypeExpr,
    ) -> Result<Derivation, TypeError> {
        let (found, derivation) = self.infer(ctx, term)?;
        if !types_equal(self.mt, &found, ty) {
            return Err(TypeError::TypeMismatch {
                expected: ty.to_string(),
                found: found.to_string(),
            });
        }
        Ok(derivation)
    }

    pub fn infer(&self, ctx: &Context, term: &Term) -> Result<(TypeExpr, Derivation), TypeError> {
        match term {
            Term::Var { name, cell } => self.infer_var(ctx, term, name, cell),
            Term::Pair(x, y) => {
                let (tx, px) = self.infer(ctx, x)?;
                let (ty_, py) = self.infer(ctx, y)?;
                let ty = TypeExpr::prod(tx, ty_);
                let node = self.node(Rule::Pair, ctx, term, &ty, vec![px, py], None);
                Ok((ty, node))
            }
            Term::Proj { index, pair } => {
                let (pty, premise) = self.infer(ctx, pair)?;
                let (a, b) = match pty {
                    TypeExpr::Prod(a, b) => (a, b),
                    other => return Err(TypeError::NotAProduct(other.to_string())),
                };
                let ty = match index {
                    ProjIndex::Fst => *a,
                    ProjIndex::Snd => *b,
                };
                let node = self.node(Rule::Proj, ctx, term, &ty, vec![premise], None);
                Ok((ty, node))
            }
            Term::Lam {
                var,
                tag,
                dom,
                body,
            } => {
                self.require_tag_at(tag, &ctx.mode, "lambda binder")?;
                wf_type(self.mt, dom, tag.source(), self.opts.wf)?;
                let inner = ctx.bind(var, tag.clone(), dom.clone());
                let (body_ty, premise) = self.infer(&inner, body)?;
                let ty = TypeExpr::impl_(tag.clone(), dom.clone(), body_ty);
                let node = self.node(Rule::Lam, ctx, term, &ty, vec![premise], None);
                Ok((ty, node))
            }
            Term::App { fun, tag, arg } => {
                self.require_tag_at(tag, &ctx.mode, "application")?;
                let (fun_ty, pfun) = self.infer(ctx, fun)?;
                let (fn_tag, antecedent, consequent) = match &fun_ty {
                    TypeExpr::Impl {
                        tag: t,
                        antecedent,
                        consequent,
                    } => (t, antecedent, consequent),
                    other => return Err(TypeError::NotAFunction(other.to_string())),
                };
                if !self.mt.hom_equal(tag, fn_tag) {
                    return Err(TypeError::TypeMismatch {
                        expected: format!("a function applicable along `{tag}`"),
                        found: fun_ty.to_string(),
                    });
                }
                let arg_ctx = ctx.lock(tag.clone());
                let parg = self.check(&arg_ctx, arg, antecedent)?;
                let ty = (**consequent).clone();
                let node = self.node(Rule::App, ctx, term, &ty, vec![pfun, parg], None);
                Ok((ty, node))
            }
            Term::Inj { .. } => Err(TypeError::CannotInfer("an injection".into())),
            Term::Case {
                scrutinee,
                left_var,
                left,
                right_var,
                right,
            } => {
                let (scrut_ty, pscrut) = self.infer(ctx, scrutinee)?;
                let (a, b) = match &scrut_ty {
                    TypeExpr::Sum(a, b) => (a.clone(), b.clone()),
                    other => return Err(TypeError::NotASum(other.to_string())),
                };
                let id = ModalityPath::identity(&ctx.mode);
                let (lty, pl) = self.infer(&ctx.bind(left_var, id.clone(), *a), left)?;
                let pr = self.check(&ctx.bind(right_var, id, *b), right, &lty)?;
                let node = self.node(Rule::Case, ctx, term, &lty, vec![pscrut, pl, pr], None);
                Ok((lty, node))
            }
            Term::MkBox { tag, body } => {
                self.require_tag_at(tag, &ctx.mode, "box")?;
                let inner = ctx.lock(tag.clone());
                let (body_ty, premise) = self.infer(&inner, body)?;
                let ty = TypeExpr::modal(tag.clone(), body_ty);
                let node = self.node(Rule::Mod, ctx, term, &ty, vec![premise], None);
                Ok((ty, node))
            }
            Term::LetBox {
                outer,
                inner,
                var,
                bound,
                body,
            } => {
                let (pbound, elem_ty) = self.check_letbox_major(ctx, outer, inner, bound)?;
                let composite = self.mt.compose(outer, inner)?;
                let body_ctx = ctx.bind(var, composite, elem_ty);
                let (ty, pbody) = self.infer(&body_ctx, body)?;
                let node = self.node(Rule::Let, ctx, term, &ty, vec![pbound, pbody], None);
                Ok((ty, node))
            }
            Term::Postulate { name, args } => {
                let (scheme, mode) = self
                    .postulates
                    .get(name)
                    .ok_or_else(|| TypeError::UnknownPostulate(name.clone()))?;
                if *mode != ctx.mode {
                    return Err(TypeError::ModeMismatch {
                        subject: format!("postulate `{name}`"),
                        expected: mode.to_string(),
                        found: ctx.mode.to_string(),
                    });
                }
                for arg in args {
                    wf_type(self.mt, arg, &ctx.mode, self.opts.wf)?;
                }
                if let Some(&max) = scheme.atoms().iter().max() {
                    if !args.is_empty() && args.len() <= max {
                        return Err(TypeError::PostulateArity {
                            name: name.clone(),
                            needed: max,
                            given: args.len(),
                        });
                    }
                }
                let ty = if args.is_empty() {
                    scheme.clone()
                } else {
                    scheme.instantiate(args)
                };
                let node = self.node(Rule::Postulate, ctx, term, &ty, Vec::new(), None);
                Ok((ty, node))
            }
        }
    }

    /// The variable rule: split the context at the binding, demand a 2-cell
    /// from the binding's tag to the locks to its right, and elaborate the
    /// annotation.
    fn infer_var(
        &self,
        ctx: &Context,
        term: &Term,
        name: &str,
        cell: &CellRef,
    ) -> Result<(TypeExpr, Derivation), TypeError> {
        let (idx, tag, ty) = ctx
            .lookup(name)
            .ok_or_else(|| TypeError::UnboundVariable(name.to_string()))?;
        let tag = tag.clone();
        let ty = ty.clone();
        let modes = ctx.modes_at();
        // Locks(Δ) for the suffix Δ to the right of the binding.
        let locks = locks_of(self.mt, &ctx.entries[idx + 1..], &modes[idx + 1])?;
        if tag.source() != &ctx.mode {
            return Err(TypeError::VariableMode {
                name: name.to_string(),
                tag: tag.to_string(),
                tag_source: tag.source().to_string(),
                used_at: ctx.mode.to_string(),
            });
        }
        let elaborated = match cell {
            CellRef::Id => {
                if !self.mt.hom_equal(&tag, &locks) {
                    return Err(TypeError::CellBoundary {
                        found_from: tag.to_string(),
                        found_to: tag.to_string(),
                        expected_from: tag.to_string(),
                        expected_to: locks.to_string(),
                    });
                }
                self.mt.id_cell(&tag)
            }
            CellRef::Hole => match self.mt.cell_exists(&tag, &locks, self.opts.budget)? {
                CellQueryResult::Found(cell) => cell,
                CellQueryResult::NotFound => {
                    return Err(TypeError::CellMissing {
                        from: tag.to_string(),
                        to: locks.to_string(),
                        decisive: true,
                    })
                }
                CellQueryResult::Unknown => {
                    return Err(TypeError::CellMissing {
                        from: tag.to_string(),
                        to: locks.to_string(),
                        decisive: false,
                    })
                }
            },
            CellRef::Cell(c) => {
                if !self.mt.hom_equal(&c.from, &tag) || !self.mt.hom_equal(&c.to, &locks) {
                    return Err(TypeError::CellBoundary {
                        found_from: c.from.to_string(),
                        found_to: c.to.to_string(),
                        expected_from: tag.to_string(),
                        expected_to: locks.to_string(),
                    });
                }
                c.clone()
            }
        };
        let node = self.node(Rule::Var, ctx, term, &ty, Vec::new(), Some(elaborated));
        Ok((ty, node))
    }

    /// Shared major-premise handling for `let box`: check the bound term in
    /// the `outer`-locked context and require a modal type along `inner`.
    fn check_letbox_major(
        &self,
        ctx: &Context,
        outer: &ModalityPath,
        inner: &ModalityPath,
        bound: &Term,
    ) -> Result<(Derivation, TypeExpr), TypeError> {
        self.require_tag_at(outer, &ctx.mode, "let box")?;
        let major_ctx = ctx.lock(outer.clone());
        let (major_ty, pbound) = self.infer(&major_ctx, bound)?;
        let (found_inner, elem_ty) = match &major_ty {
            TypeExpr::Modal { tag, body } => (tag, (**body).clone()),
            other => return Err(TypeError::NotAModal(other.to_string())),
        };
        if !self.mt.hom_equal(found_inner, inner) {
            return Err(TypeError::TypeMismatch {
                expected: format!("<{inner}|_>"),
                found: major_ty.to_string(),
            });
        }
        Ok((pbound, elem_ty))
    }

    fn require_tag_at(
        &self,
        tag: &ModalityPath,
        mode: &ModeId,
        subject: &str,
    ) -> Result<(), TypeError> {
        if tag.target() != mode {
            return Err(TypeError::ModeMismatch {
                subject: format!("{subject} tagged `{tag}`"),
                expected: tag.target().to_string(),
                found: mode.to_string(),
            });
        }
        Ok(())
    }

    fn node(
        &self,
        rule: Rule,
        ctx: &Context,
        subject: &Term,
        ty: &TypeExpr,
        premises: Vec<Derivation>,
        cell: Option<Cell2>,
    ) -> Derivation {
        Derivation {
            rule,
            context: ctx.clone(),
            subject: subject.clone(),
            ty: ty.clone(),
            mode: ctx.mode.clone(),
            premises,
            cell,
        }
    }
}

/// Rebuild the subject of a derivation with every variable's 2-cell made
/// explicit, so the term can be reduced without re-running cell search.
pub fn elaborated_term(d: &Derivation) -> Term {
    let p = |i: usize| Box::new(elaborated_term(&d.premises[i]));
    match (&d.rule, &d.subject) {
        (Rule::Var, Term::Var { name, .. }) => Term::Var {
            name: name.clone(),
            cell: match &d.cell {
                Some(c) => CellRef::Cell(c.clone()),
                None => CellRef::Id,
            },
        },
        (Rule::Pair, Term::Pair(..)) => Term::Pair(p(0), p(1)),
        (Rule::Proj, Term::Proj { index, .. }) => Term::Proj {
            index: *index,
            pair: p(0),
        },
        (Rule::Inj, Term::Inj { index, .. }) => Term::Inj {
            index: *index,
            body: p(0),
        },
        (Rule::Lam, Term::Lam { var, tag, dom, .. }) => Term::Lam {
            var: var.clone(),
            tag: tag.clone(),
            dom: dom.clone(),
            body: p(0),
        },
        (Rule::App, Term::App { tag, .. }) => Term::App {
            fun: p(0),
            tag: tag.clone(),
            arg: p(1),
        },
        (Rule::Mod, Term::MkBox { tag, .. }) => Term::MkBox {
            tag: tag.clone(),
            body: p(0),
        },
        (Rule::Let, Term::LetBox { outer, inner, var, .. }) => Term::LetBox {
            outer: outer.clone(),
            inner: inner.clone(),
            var: var.clone(),
            bound: p(0),
            body: p(1),
        },
        (
            Rule::Case,
            Term::Case {
                left_var, right_var, ..
            },
        ) => Term::Case {
            scrutinee: p(0),
            left_var: left_var.clone(),
            left: p(1),
            right_var: right_var.clone(),
            right: p(2),
        },
        _ => d.subject.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode_theory::builtin;
    use crate::syntax::parse::parse_mml;
    use crate::syntax::resolve::resolve_module;

    fn check_src(theory: &str, src: &str) -> Result<Derivation, TypeError> {
        let mt = builtin(theory).unwrap();
        let module = resolve_module(&mt, &parse_mml(src).unwrap()).unwrap();
        let mut checker = Checker::new(&mt, CheckOptions::default());
        for p in &module.postulates {
            checker.declare_postulate(&p.name, p.scheme.clone(), p.mode.clone())?;
        }
        let mut last = None;
        for t in &module.thms {
            last = Some(checker.check_thm(&t.term, &t.ty, &t.mode)?);
        }
        Ok(last.expect("no theorem in source"))
    }

    #[test]
    fn modal_intro_from_hypothesis() {
        // φ →_μ ⟨μ|φ⟩, as λx. box x with the binder tagged by μ.
        check_src(
            "k",
            "thm intro : p0 ->{box} <box|p0> at m := \\x :{box} p0. box{box} x",
        )
        .unwrap();
    }

    #[test]
    fn axiom_four_checks_in_k4() {
        check_src(
            "k4-free",
            "thm ax4 : <box|p0> -> <box.box|p0> at m := \
             \\b : <box|p0>. let box{1;box} y = b in box{box.box} y[four]",
        )
        .unwrap();
    }

    #[test]
    fn axiom_four_fails_in_plain_k() {
        let err = check_src(
            "k",
            "thm ax4 : <box|p0> -> <box.box|p0> at m := \
             \\b : <box|p0>. let box{1;box} y = b in box{box.box} y[?]",
        )
        .unwrap_err();
        assert_eq!(
            err,
            TypeError::CellMissing {
                from: "box".into(),
                to: "box.box".into(),
                decisive: true,
            }
        );
    }

    #[test]
    fn axiom_four_in_idempotent_s4_uses_the_word_equation() {
        // With box∘box = box the identity cell suffices.
        check_src(
            "s4-idem",
            "thm ax4 : <box|p0> -> <box.box|p0> at m := \
             \\b : <box|p0>. let box{1;box} y = b in box{box.box} y",
        )
        .unwrap();
    }

    #[test]
    fn counit_theorem_checks_in_s4() {
        check_src(
            "s4-comonad",
            "thm extract : <box|p0> -> p0 at m := \
             \\x : <box|p0>. let box{1;box} y = x in y[t]",
        )
        .unwrap();
    }

    #[test]
    fn lem_postulate_is_rejected_at_intuitionistic_mode() {
        let err = check_src(
            "int-cl",
            "postulate lem : p0 + ~p0 at int\n\
             thm t : p0 + ~p0 at int := lem",
        )
        .unwrap_err();
        assert_eq!(err, TypeError::NotClassical("int".into()));
    }

    #[test]
    fn lem_decides_the_boxed_proposition_at_cl() {
        check_src(
            "int-cl",
            "postulate lem : p0 + ~p0 at cl\n\
             thm dec : <IntProv|p0> + ~<IntProv|p0> at cl := lem{<IntProv|p0>}",
        )
        .unwrap();
    }

    #[test]
    fn postulate_is_mode_bound() {
        let err = check_src(
            "int-cl",
            "postulate ax : top at cl\n\
             thm t : top at int := ax",
        )
        .unwrap_err();
        assert!(matches!(err, TypeError::ModeMismatch { .. }));
    }

    #[test]
    fn derivation_serializes_and_round_trips() {
        let derivation = check_src(
            "k4-free",
            "thm ax4 : <box|p0> -> <box.box|p0> at m := \
             \\b : <box|p0>. let box{1;box} y = b in box{box.box} y[four]",
        )
        .unwrap();
        let json = serde_json::to_string(&derivation).unwrap();
        let back: Derivation = serde_json::from_str(&json).unwrap();
        assert_eq!(derivation, back);
    }
}
