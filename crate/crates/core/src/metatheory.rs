//! The admissible operations: lock weakening, substitution, variable
//! weakening and exchange, and the directed β-rules with a fueled
//! normalizer.
//!
//! Lock weakening and substitution only consult the *lock structure* of the
//! contexts involved, never the types, so they operate on telescopes: the
//! sequence of binder names and locks, with the judgement's mode at the
//! right end.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checker::{Checker, Derivation, TypeError};
use crate::mode_theory::{Cell2, ModalityPath, ModeId, ModeTheory, ModeTheoryError};
use crate::syntax::{CellRef, Context, ContextEntry, Term, TypeExpr};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetaError {
    #[error("a 2-cell hole must be elaborated by the checker before this operation")]
    UnresolvedHole,
    #[error("`{0}` is not bound in the telescope")]
    Unbound(String),
    #[error("position {0} is not an adjacent pair of variable bindings")]
    NotAdjacentBinds(usize),
    #[error(transparent)]
    ModeTheory(#[from] ModeTheoryError),
}

/// One entry of a telescope: a binder name with its tag, or a lock.
#[derive(Clone, Debug, PartialEq)]
pub enum TeleEntry {
    Bind { name: String, tag: ModalityPath },
    Lock(ModalityPath),
}

/// The part of a context the admissible operations need: names, tags, and
/// locks, with the mode at the right end.
#[derive(Clone, Debug, PartialEq)]
pub struct Telescope {
    pub entries: Vec<TeleEntry>,
    pub mode: ModeId,
}

impl Telescope {
    pub fn empty(mode: ModeId) -> Telescope {
        Telescope {
            entries: Vec::new(),
            mode,
        }
    }

    fn bind(&self, name: &str, tag: ModalityPath) -> Telescope {
        let mut out = self.clone();
        out.entries.push(TeleEntry::Bind {
            name: name.to_string(),
            tag,
        });
        out
    }

    fn lock(&self, tag: ModalityPath) -> Telescope {
        let mut out = self.clone();
        out.mode = tag.source().clone();
        out.entries.push(TeleEntry::Lock(tag));
        out
    }

    fn binds(&self, name: &str) -> bool {
        self.entries
            .iter()
            .any(|e| matches!(e, TeleEntry::Bind { name: n, .. } if n == name))
    }

    fn lookup(&self, name: &str) -> Option<(usize, &ModalityPath)> {
        self.entries.iter().enumerate().rev().find_map(|(i, e)| match e {
            TeleEntry::Bind { name: n, tag } if n == name => Some((i, tag)),
            _ => None,
        })
    }

    /// The mode to the left of each entry; index `len` is `self.mode`.
    fn modes_at(&self) -> Vec<ModeId> {
        let mut out = vec![self.mode.clone(); self.entries.len() + 1];
        for i in (0..self.entries.len()).rev() {
            out[i] = match &self.entries[i] {
                TeleEntry::Lock(tag) => tag.target().clone(),
                TeleEntry::Bind { .. } => out[i + 1].clone(),
            };
        }
        out
    }

    fn locks_of(
        &self,
        mt: &ModeTheory,
        from: usize,
    ) -> Result<ModalityPath, ModeTheoryError> {
        let start = self.modes_at()[from].clone();
        let mut acc = ModalityPath::identity(&start);
        for e in &self.entries[from..] {
            if let TeleEntry::Lock(tag) = e {
                acc = mt.compose(&acc, tag)?;
            }
        }
        Ok(acc)
    }

    fn locks(&self, mt: &ModeTheory) -> Result<ModalityPath, ModeTheoryError> {
        self.locks_of(mt, 0)
    }
}

impl From<&Context> for Telescope {
    fn from(ctx: &Context) -> Telescope {
        Telescope {
            entries: ctx
                .entries
                .iter()
                .map(|e| match e {
                    ContextEntry::Bind { name, tag, .. } => TeleEntry::Bind {
                        name: name.clone(),
                        tag: tag.clone(),
                    },
                    ContextEntry::Lock(tag) => TeleEntry::Lock(tag.clone()),
                })
                .collect(),
            mode: ctx.mode.clone(),
        }
    }
}

/// Lock weakening: given `M` typed in `Γ, lock(μ), Δ` and `α : μ ⇒ ν`,
/// produce the term typed in `Γ, lock(ν), Δ`.  Every use of a `Γ`-variable
/// has the whiskered `α` composed onto its 2-cell; everything else recurses,
/// extending `Δ`.
pub fn lock_weaken(
    mt: &ModeTheory,
    term: &Term,
    gamma: &Telescope,
    alpha: &Cell2,
    delta: &Telescope,
) -> Result<Term, MetaError> {
    match term {
        Term::Var { name, cell } => {
            if delta.binds(name) {
                return Ok(term.clone());
            }
            let (idx, tag) = match gamma.lookup(name) {
                Some(hit) => hit,
                None => return Ok(term.clone()), // free elsewhere; untouched
            };
            let gamma_after = gamma.locks_of(mt, idx + 1)?;
            let delta_locks = delta.locks(mt)?;
            let whisker = mt.simplify_cell(&mt.hcomp(
                mt.id_cell(&gamma_after),
                mt.hcomp(alpha.clone(), mt.id_cell(&delta_locks))?,
            )?);
            let old = match cell {
                CellRef::Cell(c) => c.clone(),
                CellRef::Id => mt.id_cell(tag),
                CellRef::Hole => return Ok(term.clone()), // re-elaborated on recheck
            };
            let new_cell = mt.simplify_cell(&mt.vcomp(whisker, old)?);
            Ok(Term::Var {
                name: name.clone(),
                cell: CellRef::Cell(new_cell),
            })
        }
        Term::Pair(a, b) => Ok(Term::Pair(
            Box::new(lock_weaken(mt, a, gamma, alpha, delta)?),
            Box::new(lock_weaken(mt, b, gamma, alpha, delta)?),
        )),
        Term::Proj { index, pair } => Ok(Term::Proj {
            index: *index,
            pair: Box::new(lock_weaken(mt, pair, gamma, alpha, delta)?),
        }),
        Term::Inj { index, body } => Ok(Term::Inj {
            index: *index,
            body: Box::new(lock_weaken(mt, body, gamma, alpha, delta)?),
        }),
        Term::Lam {
            var,
            tag,
            dom,
            body,
        } => Ok(Term::Lam {
            var: var.clone(),
            tag: tag.clone(),
            dom: dom.clone(),
            body: Box::new(lock_weaken(
                mt,
                body,
                gamma,
                alpha,
                &delta.bind(var, tag.clone()),
            )?),
        }),
        Term::App { fun, tag, arg } => Ok(Term::App {
            fun: Box::new(lock_weaken(mt, fun, gamma, alpha, delta)?),
            tag: tag.clone(),
            arg: Box::new(lock_weaken(mt, arg, gamma, alpha, &delta.lock(tag.clone()))?),
        }),
        Term::MkBox { tag, body } => Ok(Term::MkBox {
            tag: tag.clone(),
            body: Box::new(lock_weaken(mt, body, gamma, alpha, &delta.lock(tag.clone()))?),
        }),
        Term::LetBox {
            outer,
            inner,
            var,
            bound,
            body,
        } => {
            let composite = mt.compose(outer, inner)?;
            Ok(Term::LetBox {
                outer: outer.clone(),
                inner: inner.clone(),
                var: var.clone(),
                bound: Box::new(lock_weaken(
                    mt,
                    bound,
                    gamma,
                    alpha,
                    &delta.lock(outer.clone()),
                )?),
                body: Box::new(lock_weaken(mt, body, gamma, alpha, &delta.bind(var, composite))?),
            })
        }
        Term::Case {
            scrutinee,
            left_var,
            left,
            right_var,
            right,
        } => {
            let id = ModalityPath::identity(&delta.mode);
            Ok(Term::Case {
                scrutinee: Box::new(lock_weaken(mt, scrutinee, gamma, alpha, delta)?),
                left_var: left_var.clone(),
                left: Box::new(lock_weaken(
                    mt,
                    left,
                    gamma,
                    alpha,
                    &delta.bind(left_var, id.clone()),
                )?),
                right_var: right_var.clone(),
                right: Box::new(lock_weaken(
                    mt,
                    right,
                    gamma,
                    alpha,
                    &delta.bind(right_var, id),
                )?),
            })
        }
        Term::Postulate { .. } => Ok(term.clone()),
    }
}

/// Substitution `N[M/x]` under the (global) telescope `Γ`.  At each
/// occurrence `x[α]` the replacement is `M` lock-weakened along `α`; `x_tag`
/// is the tag of `x`'s binding, used to read a bare `x` as `x[id]`.
pub fn substitute(
    mt: &ModeTheory,
    n: &Term,
    x: &str,
    m: &Term,
    x_tag: &ModalityPath,
    gamma: &Telescope,
) -> Result<Term, MetaError> {
    match n {
        Term::Var { name, cell } if name == x => {
            let alpha = match cell {
                CellRef::Cell(c) => c.clone(),
                CellRef::Id => mt.id_cell(x_tag),
                CellRef::Hole => return Err(MetaError::UnresolvedHole),
            };
            let empty = Telescope::empty(alpha.from.source().clone());
            lock_weaken(mt, m, gamma, &alpha, &empty)
        }
        Term::Var { .. } | Term::Postulate { .. } => Ok(n.clone()),
        Term::Pair(a, b) => Ok(Term::Pair(
            Box::new(substitute(mt, a, x, m, x_tag, gamma)?),
            Box::new(substitute(mt, b, x, m, x_tag, gamma)?),
        )),
        Term::Proj { index, pair } => Ok(Term::Proj {
            index: *index,
            pair: Box::new(substitute(mt, pair, x, m, x_tag, gamma)?),
        }),
        Term::Inj { index, body } => Ok(Term::Inj {
            index: *index,
            body: Box::new(substitute(mt, body, x, m, x_tag, gamma)?),
        }),
        Term::Lam {
            var,
            tag,
            dom,
            body,
        } => {
            if var == x {
                return Ok(n.clone());
            }
            let (var, body) = avoid_capture(var, body, m);
            Ok(Term::Lam {
                var: var.clone(),
                tag: tag.clone(),
                dom: dom.clone(),
                body: Box::new(substitute(mt, &body, x, m, x_tag, gamma)?),
            })
        }
        Term::App { fun, tag, arg } => Ok(Term::App {
            fun: Box::new(substitute(mt, fun, x, m, x_tag, gamma)?),
            tag: tag.clone(),
            arg: Box::new(substitute(mt, arg, x, m, x_tag, gamma)?),
        }),
        Term::MkBox { tag, body } => Ok(Term::MkBox {
            tag: tag.clone(),
            body: Box::new(substitute(mt, body, x, m, x_tag, gamma)?),
        }),
        Term::LetBox {
            outer,
            inner,
            var,
            bound,
            body,
        } => {
            let new_bound = substitute(mt, bound, x, m, x_tag, gamma)?;
            if var == x {
                return Ok(Term::LetBox {
                    outer: outer.clone(),
                    inner: inner.clone(),
                    var: var.clone(),
                    bound: Box::new(new_bound),
                    body: body.clone(),
                });
            }
            let (var, body) = avoid_capture(var, body, m);
            Ok(Term::LetBox {
                outer: outer.clone(),
                inner: inner.clone(),
                var: var.clone(),
                bound: Box::new(new_bound),
                body: Box::new(substitute(mt, &body, x, m, x_tag, gamma)?),
            })
        }
        Term::Case {
            scrutinee,
            left_var,
            left,
            right_var,
            right,
        } => {
            let scrutinee = Box::new(substitute(mt, scrutinee, x, m, x_tag, gamma)?);
            let (left_var, left) = if left_var == x {
                (left_var.clone(), (**left).clone())
            } else {
                let (v, b) = avoid_capture(left_var, left, m);
                (v, substitute(mt, &b, x, m, x_tag, gamma)?)
            };
            let (right_var, right) = if right_var == x {
                (right_var.clone(), (**right).clone())
            } else {
                let (v, b) = avoid_capture(right_var, right, m);
                (v, substitute(mt, &b, x, m, x_tag, gamma)?)
            };
            Ok(Term::Case {
                scrutinee,
                left_var,
                left: Box::new(left),
                right_var,
                right: Box::new(right),
            })
        }
    }
}

/// Rename `var` in `body` when it would capture a free variable of `incoming`.
fn avoid_capture(var: &str, body: &Term, incoming: &Term) -> (String, Term) {
    if !incoming.free_vars().contains(var) {
        return (var.to_string(), body.clone());
    }
    let taken: std::collections::BTreeSet<String> = incoming
        .free_vars()
        .into_iter()
        .chain(body.free_vars())
        .collect();
    let mut fresh = format!("{var}'");
    while taken.contains(&fresh) {
        fresh.push('\'');
    }
    (fresh.clone(), rename_free(body, var, &fresh))
}

/// Rename free occurrences of `from` to `to`.
fn rename_free(term: &Term, from: &str, to: &str) -> Term {
    match term {
        Term::Var { name, cell } if name == from => Term::Var {
            name: to.to_string(),
            cell: cell.clone(),
        },
        Term::Var { .. } | Term::Postulate { .. } => term.clone(),
        Term::Pair(a, b) => Term::Pair(
            Box::new(rename_free(a, from, to)),
            Box::new(rename_free(b, from, to)),
        ),
        Term::Proj { index, pair } => Term::Proj {
            index: *index,
            pair: Box::new(rename_free(pair, from, to)),
        },
        Term::Inj { index, body } => Term::Inj {
            index: *index,
            body: Box::new(rename_free(body, from, to)),
        },
        Term::Lam {
            var,
            tag,
            dom,
            body,
        } => Term::Lam {
            var: var.clone(),
            tag: tag.clone(),
            dom: dom.clone(),
            body: if var == from {
                body.clone()
            } else {
                Box::new(rename_free(body, from, to))
            },
        },
        Term::App { fun, tag, arg } => Term::App {
            fun: Box::new(rename_free(fun, from, to)),
            tag: tag.clone(),
            arg: Box::new(rename_free(arg, from, to)),
        },
        Term::MkBox { tag, body } => Term::MkBox {
            tag: tag.clone(),
            body: Box::new(rename_free(body, from, to)),
        },
        Term::LetBox {
            outer,
            inner,
            var,
            bound,
            body,
        } => Term::LetBox {
            outer: outer.clone(),
            inner: inner.clone(),
            var: var.clone(),
            bound: Box::new(rename_free(bound, from, to)),
            body: if var == from {
                body.clone()
            } else {
                Box::new(rename_free(body, from, to))
            },
        },
        Term::Case {
            scrutinee,
            left_var,
            left,
            right_var,
            right,
        } => Term::Case {
            scrutinee: Box::new(rename_free(scrutinee, from, to)),
            left_var: left_var.clone(),
            left: if left_var == from {
                left.clone()
            } else {
                Box::new(rename_free(left, from, to))
            },
            right_var: right_var.clone(),
            right: if right_var == from {
                right.clone()
            } else {
                Box::new(rename_free(right, from, to))
            },
        },
    }
}

/// Which β-rule fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaRule {
    /// `(λx. M) N  ⇝  M[N/x]`
    AppLam,
    /// `let box x = box M in N  ⇝  N[M/x]`
    LetBox,
}

/// One reduction step, with the redex's position as a path of child indices
/// from the root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub path: Vec<usize>,
    pub rule: BetaRule,
    pub before: String,
    pub after: String,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
    pub fuel_used: usize,
    /// False when the fuel ran out before a normal form was reached.
    pub normalized: bool,
}

/// Contract the leftmost-outermost β-redex, threading the ambient telescope.
/// With `weak` set, redexes under `λ` and `box` are left alone.
pub fn beta_step(
    mt: &ModeTheory,
    ctx: &Telescope,
    term: &Term,
    weak: bool,
) -> Result<Option<(Term, Vec<usize>, BetaRule)>, MetaError> {
    // Try the root first (outermost).
    match term {
        Term::App { fun, tag, arg } => {
            if let Term::Lam {
                var,
                tag: lam_tag,
                body,
                ..
            } = fun.as_ref()
            {
                if mt.hom_equal(tag, lam_tag) {
                    let result = substitute(mt, body, var, arg, lam_tag, ctx)?;
                    return Ok(Some((result, Vec::new(), BetaRule::AppLam)));
                }
            }
        }
        Term::LetBox {
            outer,
            inner,
            var,
            bound,
            body,
        } => {
            if let Term::MkBox { tag, body: m } = bound.as_ref() {
                if mt.hom_equal(tag, inner) {
                    let composite = mt.compose(outer, inner)?;
                    let result = substitute(mt, body, var, m, &composite, ctx)?;
                    return Ok(Some((result, Vec::new(), BetaRule::LetBox)));
                }
            }
        }
        _ => {}
    }
    // Otherwise recurse left to right, extending the telescope the same way
    // checking does.
    let at = |i: usize, hit: Option<(Term, Vec<usize>, BetaRule)>| {
        hit.map(|(t, mut path, rule)| {
            path.insert(0, i);
            (t, path, rule)
        })
    };
    macro_rules! descend {
        ($i:expr, $sub:expr, $ctx:expr, $rebuild:expr) => {
            if let Some((new_sub, path, rule)) = beta_step(mt, $ctx, $sub, weak)? {
                let rebuilt = $rebuild(new_sub);
                return Ok(at($i, Some((rebuilt, path, rule))));
            }
        };
    }
    match term {
        Term::Var { .. } | Term::Postulate { .. } => Ok(None),
        Term::Pair(a, b) => {
            descend!(0, a, ctx, |t| Term::Pair(Box::new(t), b.clone()));
            descend!(1, b, ctx, |t| Term::Pair(a.clone(), Box::new(t)));
            Ok(None)
        }
        Term::Proj { index, pair } => {
            let index = *index;
            descend!(0, pair, ctx, |t| Term::Proj {
                index,
                pair: Box::new(t)
            });
            Ok(None)
        }
        Term::Inj { index, body } => {
            let index = *index;
            descend!(0, body, ctx, |t| Term::Inj {
                index,
                body: Box::new(t)
            });
            Ok(None)
        }
        Term::Lam {
            var,
            tag,
            dom,
            body,
        } => {
            if weak {
                return Ok(None);
            }
            let inner = ctx.bind(var, tag.clone());
            descend!(0, body, &inner, |t| Term::Lam {
                var: var.clone(),
                tag: tag.clone(),
                dom: dom.clone(),
                body: Box::new(t)
            });
            Ok(None)
        }
        Term::App { fun, tag, arg } => {
            descend!(0, fun, ctx, |t| Term::App {
                fun: Box::new(t),
                tag: tag.clone(),
                arg: arg.clone()
            });
            let arg_ctx = ctx.lock(tag.clone());
            descend!(1, arg, &arg_ctx, |t| Term::App {
                fun: fun.clone(),
                tag: tag.clone(),
                arg: Box::new(t)
            });
            Ok(None)
        }
        Term::MkBox { tag, body } => {
            if weak {
                return Ok(None);
            }
            let inner = ctx.lock(tag.clone());
            descend!(0, body, &inner, |t| Term::MkBox {
                tag: tag.clone(),
                body: Box::new(t)
            });
            Ok(None)
        }
        Term::LetBox {
            outer,
            inner,
            var,
            bound,
            body,
        } => {
            let bound_ctx = ctx.lock(outer.clone());
            descend!(0, bound, &bound_ctx, |t| Term::LetBox {
                outer: outer.clone(),
                inner: inner.clone(),
                var: var.clone(),
                bound: Box::new(t),
                body: body.clone()
            });
            let composite = mt.compose(outer, inner)?;
            let body_ctx = ctx.bind(var, composite);
            descend!(1, body, &body_ctx, |t| Term::LetBox {
                outer: outer.clone(),
                inner: inner.clone(),
                var: var.clone(),
                bound: bound.clone(),
                body: Box::new(t)
            });
            Ok(None)
        }
        Term::Case {
            scrutinee,
            left_var,
            left,
            right_var,
            right,
        } => {
            descend!(0, scrutinee, ctx, |t| Term::Case {
                scrutinee: Box::new(t),
                left_var: left_var.clone(),
                left: left.clone(),
                right_var: right_var.clone(),
                right: right.clone()
            });
            let lctx = ctx.bind(left_var, ModalityPath::identity(&ctx.mode));
            descend!(1, left, &lctx, |t| Term::Case {
                scrutinee: scrutinee.clone(),
                left_var: left_var.clone(),
                left: Box::new(t),
                right_var: right_var.clone(),
                right: right.clone()
            });
            let rctx = ctx.bind(right_var, ModalityPath::identity(&ctx.mode));
            descend!(2, right, &rctx, |t| Term::Case {
                scrutinee: scrutinee.clone(),
                left_var: left_var.clone(),
                left: left.clone(),
                right_var: right_var.clone(),
                right: Box::new(t)
            });
            Ok(None)
        }
    }
}

/// Reduce to (weak) normal form with at most `fuel` steps, recording a trace.
pub fn normalize(
    mt: &ModeTheory,
    mode: &ModeId,
    term: &Term,
    fuel: usize,
    weak: bool,
) -> Result<(Term, ReductionTrace), MetaError> {
    let ctx = Telescope::empty(mode.clone());
    let mut current = term.clone();
    let mut trace = ReductionTrace::default();
    for _ in 0..fuel {
        match beta_step(mt, &ctx, &current, weak)? {
            None => {
                trace.normalized = true;
                return Ok((current, trace));
            }
            Some((next, path, rule)) => {
                trace.steps.push(TraceStep {
                    path,
                    rule,
                    before: current.to_string(),
                    after: next.to_string(),
                });
                trace.fuel_used += 1;
                current = next;
            }
        }
    }
    trace.normalized = beta_step(mt, &ctx, &current, weak)?.is_none();
    Ok((current, trace))
}

/// A variable binding to weaken a judgement by.  This is the only shape the
/// weakening API accepts: there is deliberately no way to insert a lock.
#[derive(Clone, Debug, PartialEq)]
pub struct VarBind {
    pub name: String,
    pub tag: ModalityPath,
    pub ty: TypeExpr,
}

/// Weakening: insert a variable binding at position `at` and re-check the
/// term at the same type.
pub fn weaken(
    checker: &Checker<'_>,
    ctx: &Context,
    at: usize,
    bind: VarBind,
    term: &Term,
    ty: &TypeExpr,
) -> Result<Derivation, TypeError> {
    let mut entries = ctx.entries.clone();
    let at = at.min(entries.len());
    entries.insert(
        at,
        ContextEntry::Bind {
            name: bind.name,
            tag: bind.tag,
            ty: bind.ty,
        },
    );
    let new_ctx = Context {
        entries,
        mode: ctx.mode.clone(),
    };
    crate::judgements::wf_context(checker.mode_theory(), &new_ctx, checker.options().wf)?;
    checker.check(&new_ctx, term, ty)
}

/// Exchange: swap the adjacent variable bindings at positions `at`, `at+1`
/// and re-check.  Locks cannot be moved.
pub fn exchange(
    checker: &Checker<'_>,
    ctx: &Context,
    at: usize,
    term: &Term,
    ty: &TypeExpr,
) -> Result<Derivation, TypeError> {
    let mut entries = ctx.entries.clone();
    let ok = at + 1 < entries.len()
        && matches!(entries[at], ContextEntry::Bind { .. })
        && matches!(entries[at + 1], ContextEntry::Bind { .. });
    if !ok {
        return Err(TypeError::ModeTheory(ModeTheoryError::IllComposed(format!(
            "positions {at} and {} are not adjacent variable bindings",
            at + 1
        ))));
    }
    entries.swap(at, at + 1);
    let new_ctx = Context {
        entries,
        mode: ctx.mode.clone(),
    };
    crate::judgements::wf_context(checker.mode_theory(), &new_ctx, checker.options().wf)?;
    checker.check(&new_ctx, term, ty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{CheckOptions, Checker};
    use crate::mode_theory::builtin;
    use crate::syntax::parse::parse_mml;
    use crate::syntax::resolve::resolve_module;
    use crate::syntax::alpha_eq;

    fn thm(theory: &str, src: &str) -> (crate::mode_theory::ModeTheory, Term, TypeExpr, ModeId) {
        let mt = builtin(theory).unwrap();
        let module = resolve_module(&mt, &parse_mml(src).unwrap()).unwrap();
        let t = module.thms.into_iter().next().unwrap();
        (mt, t.term, t.ty, t.mode)
    }

    #[test]
    fn beta_reduces_an_identity_application() {
        let (mt, term, ty, mode) = thm(
            "k",
            "thm t : p0 -> p0 at m := (\\f : p0 -> p0. f) (\\x : p0. x)",
        );
        let checker = Checker::new(&mt, CheckOptions::default());
        checker.check_thm(&term, &ty, &mode).unwrap();
        let (normal, trace) = normalize(&mt, &mode, &term, 16, false).unwrap();
        assert!(trace.normalized);
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].rule, BetaRule::AppLam);
        checker.check_thm(&normal, &ty, &mode).unwrap();
    }

    #[test]
    fn letbox_beta_rewrites_the_cell() {
        // Reducing (λb. let box y = b in box y[four]) (box x) substitutes the
        // boxed variable and the result still checks at the same type.
        let (mt, term, ty, mode) = thm(
            "k4-free",
            "thm t : <box|p0> -> (<box|p0> -> <box.box|p0>) at m := \
             \\z : <box|p0>. \\b : <box|p0>. let box{1;box} y = b in box{box.box} y[four]",
        );
        let checker = Checker::new(&mt, CheckOptions::default());
        checker.check_thm(&term, &ty, &mode).unwrap();
        let (normal, trace) = normalize(&mt, &mode, &term, 16, false).unwrap();
        assert!(trace.normalized);
        checker.check_thm(&normal, &ty, &mode).unwrap();
    }

    #[test]
    fn substitution_avoids_capture() {
        let mt = builtin("k").unwrap();
        let m = ModeId::new("m");
        let id = ModalityPath::identity(&m);
        // (λy. x y)[y/x] must rename the binder, not capture.
        let n = Term::lam(
            "y",
            id.clone(),
            TypeExpr::Atom(0),
            Term::app(Term::var("x"), id.clone(), Term::var("y")),
        );
        let gamma = Telescope::empty(m.clone()).bind("y", id.clone());
        let out = substitute(&mt, &n, "x", &Term::var("y"), &id, &gamma).unwrap();
        let expected = Term::lam(
            "y'",
            id.clone(),
            TypeExpr::Atom(0),
            Term::app(
                Term::var_cell("y", CellRef::Cell(mt.id_cell(&id))),
                id.clone(),
                Term::var("y'"),
            ),
        );
        assert!(alpha_eq(&out, &expected), "got {out}");
    }

    #[test]
    fn weaken_and_exchange_recheck() {
        let (mt, term, ty, mode) = thm("k", "thm t : p0 -> p0 at m := \\x : p0. x");
        let checker = Checker::new(&mt, CheckOptions::default());
        checker.check_thm(&term, &ty, &mode).unwrap();
        let ctx = Context::empty(mode.clone());
        let id = ModalityPath::identity(&mode);
        let bind = |n: &str, a: usize| VarBind {
            name: n.into(),
            tag: id.clone(),
            ty: TypeExpr::Atom(a),
        };
        let w1 = weaken(&checker, &ctx, 0, bind("u", 1), &term, &ty).unwrap();
        let two = weaken(&checker, &w1.context, 1, bind("v", 2), &term, &ty).unwrap();
        exchange(&checker, &two.context, 0, &term, &ty).unwrap();
        assert!(exchange(&checker, &two.context, 1, &term, &ty).is_err());
    }

    #[test]
    fn lock_weaken_composes_the_cell_on_gamma_variables() {
        // In s4-comonad, x :{box} p0 used under lock(box) with the identity
        // cell; weakening the lock along t : box ⇒ 1 gives x[1_1 ∘ ... ] with
        // boundary box ⇒ 1, so the result checks in a lock-free context.
        let mt = builtin("s4-comonad").unwrap();
        let m = ModeId::new("m");
        let boxp = mt.generator_path("box").unwrap();
        let gamma = Telescope::empty(m.clone()).bind("x", boxp.clone());
        let t_cell = mt.gen_cell("t").unwrap();
        let term = Term::var("x");
        let out = lock_weaken(&mt, &term, &gamma, &t_cell, &Telescope::empty(m.clone())).unwrap();
        match out {
            Term::Var { cell: CellRef::Cell(c), .. } => {
                assert!(mt.hom_equal(&c.from, &boxp));
                assert!(c.to.is_identity_word());
            }
            other => panic!("unexpected result {other:?}"),
        }
    }
}
