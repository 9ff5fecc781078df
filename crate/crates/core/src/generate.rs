//! Seeded random generation of well-formed contexts and well-typed terms,
//! used by the property suites.  Everything generated is validated against
//! the checker before being handed out, so a successful call really does
//! return a well-typed artifact.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::checker::{CheckOptions, Checker};
use crate::mode_theory::{ModalityPath, ModeId, ModeTheory};
use crate::syntax::{Context, InjIndex, ProjIndex, Term, TypeExpr};

pub struct Generator<'a> {
    mt: &'a ModeTheory,
    rng: ChaCha8Rng,
    fresh: usize,
}

/// Number of AST nodes in a term.
pub fn term_size(term: &Term) -> usize {
    1 + match term {
        Term::Var { .. } | Term::Postulate { .. } => 0,
        Term::Pair(a, b) => term_size(a) + term_size(b),
        Term::Proj { pair, .. } => term_size(pair),
        Term::Inj { body, .. } => term_size(body),
        Term::Lam { body, .. } => term_size(body),
        Term::App { fun, arg, .. } => term_size(fun) + term_size(arg),
        Term::MkBox { body, .. } => term_size(body),
        Term::LetBox { bound, body, .. } => term_size(bound) + term_size(body),
        Term::Case {
            scrutinee,
            left,
            right,
            ..
        } => term_size(scrutinee) + term_size(left) + term_size(right),
    }
}

impl<'a> Generator<'a> {
    pub fn new(mt: &'a ModeTheory, seed: u64) -> Generator<'a> {
        Generator {
            mt,
            rng: ChaCha8Rng::seed_from_u64(seed),
            fresh: 0,
        }
    }

    fn fresh_name(&mut self) -> String {
        self.fresh += 1;
        format!("v{}", self.fresh)
    }

    /// A random mode of the theory.
    pub fn mode(&mut self) -> ModeId {
        self.mt.modes().choose(&mut self.rng).unwrap().clone()
    }

    /// A random modality path with the given target mode: a short composite
    /// of generators, possibly the identity.
    pub fn path_into(&mut self, target: &ModeId, max_len: usize) -> ModalityPath {
        let mut acc = ModalityPath::identity(target);
        for _ in 0..max_len {
            if self.rng.gen_bool(0.5) {
                break;
            }
            let candidates: Vec<_> = self
                .mt
                .generators()
                .iter()
                .filter(|g| g.target == *acc.source())
                .collect();
            let Some(g) = candidates.choose(&mut self.rng) else {
                break;
            };
            let step = self.mt.generator_path(&g.name).unwrap();
            // The new generator is applied first, before what we have.
            acc = self.mt.compose(&acc, &step).unwrap();
        }
        acc
    }

    /// A random small type, well-formed at `mode`.
    pub fn ty(&mut self, mode: &ModeId, depth: usize) -> TypeExpr {
        if depth == 0 {
            return TypeExpr::Atom(self.rng.gen_range(0..3));
        }
        match self.rng.gen_range(0..6) {
            0 => TypeExpr::Atom(self.rng.gen_range(0..3)),
            1 => TypeExpr::prod(self.ty(mode, depth - 1), self.ty(mode, depth - 1)),
            2 => TypeExpr::sum(self.ty(mode, depth - 1), self.ty(mode, depth - 1)),
            3 => {
                let tag = self.path_into(mode, 1);
                let dom = self.ty(tag.source(), depth - 1);
                let cod = self.ty(mode, depth - 1);
                TypeExpr::impl_(tag, dom, cod)
            }
            _ => {
                let tag = self.path_into(mode, 2);
                if tag.is_identity_word() {
                    TypeExpr::Atom(self.rng.gen_range(0..3))
                } else {
                    let body = self.ty(tag.source(), depth - 1);
                    TypeExpr::modal(tag, body)
                }
            }
        }
    }

    /// A random well-formed context ending at `mode`, extending `base`.
    pub fn context_from(&mut self, base: &Context, max_entries: usize) -> Context {
        let mut ctx = base.clone();
        let n = self.rng.gen_range(0..=max_entries);
        for _ in 0..n {
            if self.rng.gen_bool(0.3) {
                let tag = self.path_into(&ctx.mode.clone(), 2);
                ctx = ctx.lock(tag);
            } else {
                let tag = self.path_into(&ctx.mode.clone(), 1);
                let ty = self.ty(&tag.source().clone(), 2);
                let name = self.fresh_name();
                ctx = ctx.bind(&name, tag, ty);
            }
        }
        ctx
    }

    pub fn context(&mut self, mode: &ModeId, max_entries: usize) -> Context {
        let base = Context::empty(mode.clone());
        self.context_from(&base, max_entries)
    }

    /// A random well-typed term in `ctx`, of at most `max_size` AST nodes.
    /// The result is validated with the checker before being returned.
    pub fn typed_term(&mut self, ctx: &Context, max_size: usize) -> (Term, TypeExpr) {
        let checker = Checker::new(self.mt, CheckOptions::default());
        if max_size >= 4 {
            for _ in 0..8 {
                let candidate = self.candidate(ctx, max_size, 3);
                if let Some((term, ty)) = candidate {
                    if term_size(&term) <= max_size && checker.check(ctx, &term, &ty).is_ok() {
                        return (term, ty);
                    }
                }
            }
        }
        // Fallback: the identity function on an atom always checks.
        let name = self.fresh_name();
        let id = ModalityPath::identity(&ctx.mode);
        let ty = TypeExpr::impl_(id.clone(), TypeExpr::Atom(0), TypeExpr::Atom(0));
        let term = Term::lam(&name, id, TypeExpr::Atom(0), Term::var(&name));
        debug_assert!(checker.check(ctx, &term, &ty).is_ok());
        (term, ty)
    }

    /// Build a candidate term bottom-up from a pool of known-typed pieces.
    fn candidate(&mut self, ctx: &Context, max_size: usize, grow: usize) -> Option<(Term, TypeExpr)> {
        let checker = Checker::new(self.mt, CheckOptions::default());
        let mut pool: Vec<(Term, TypeExpr)> = Vec::new();

        // Usable variables (the checker decides whether a 2-cell exists).
        for name in ctx.bound_names() {
            let v = Term::var(name);
            if let Ok((ty, _)) = checker.infer(ctx, &v) {
                pool.push((v, ty));
            }
        }
        // A couple of closed seeds.
        for _ in 0..2 {
            let name = self.fresh_name();
            let a = self.ty(&ctx.mode, 1);
            let id = ModalityPath::identity(&ctx.mode);
            pool.push((
                Term::lam(&name, id.clone(), a.clone(), Term::var(&name)),
                TypeExpr::impl_(id, a.clone(), a),
            ));
        }

        for _ in 0..grow {
            let pick = |g: &mut Generator, pool: &Vec<(Term, TypeExpr)>| {
                pool.choose(&mut g.rng).cloned()
            };
            let next: Option<(Term, TypeExpr)> = match self.rng.gen_range(0..8) {
                0 => {
                    // Pair two pieces.
                    let a = pick(self, &pool)?;
                    let b = pick(self, &pool)?;
                    Some((
                        Term::Pair(Box::new(a.0), Box::new(b.0)),
                        TypeExpr::prod(a.1, b.1),
                    ))
                }
                1 => {
                    // Inject into a sum with a fresh other side.
                    let a = pick(self, &pool)?;
                    let other = self.ty(&ctx.mode, 1);
                    if self.rng.gen_bool(0.5) {
                        Some((
                            Term::Inj {
                                index: InjIndex::Left,
                                body: Box::new(a.0),
                            },
                            TypeExpr::sum(a.1, other),
                        ))
                    } else {
                        Some((
                            Term::Inj {
                                index: InjIndex::Right,
                                body: Box::new(a.0),
                            },
                            TypeExpr::sum(other, a.1),
                        ))
                    }
                }
                2 => {
                    // Constant function.
                    let a = pick(self, &pool)?;
                    let dom = self.ty(&ctx.mode, 1);
                    let name = self.fresh_name();
                    let id = ModalityPath::identity(&ctx.mode);
                    Some((
                        Term::lam(&name, id.clone(), dom.clone(), a.0),
                        TypeExpr::impl_(id, dom, a.1),
                    ))
                }
                3 => {
                    // A β-redex: apply a constant function to another piece.
                    let a = pick(self, &pool)?;
                    let b = pick(self, &pool)?;
                    let name = self.fresh_name();
                    let id = ModalityPath::identity(&ctx.mode);
                    Some((
                        Term::app(
                            Term::lam(&name, id.clone(), b.1.clone(), a.0),
                            id,
                            b.0,
                        ),
                        a.1,
                    ))
                }
                4 => {
                    // Box a term generated under the lock.
                    let tag = self.path_into(&ctx.mode.clone(), 2);
                    if tag.is_identity_word() || max_size < 6 {
                        None
                    } else {
                        let locked = ctx.lock(tag.clone());
                        let (body, body_ty) = self.typed_term(&locked, max_size / 2);
                        Some((
                            Term::mkbox(tag.clone(), body),
                            TypeExpr::modal(tag, body_ty),
                        ))
                    }
                }
                5 => {
                    // Unbox a modal piece; the body re-boxes the variable.
                    let modal = pool
                        .iter()
                        .filter(|(_, t)| matches!(t, TypeExpr::Modal { .. }))
                        .cloned()
                        .collect::<Vec<_>>();
                    let (m, mty) = modal.choose(&mut self.rng).cloned()?;
                    let TypeExpr::Modal { tag, body: inner_ty } = mty else {
                        return None;
                    };
                    let name = self.fresh_name();
                    let outer = ModalityPath::identity(&ctx.mode);
                    Some((
                        Term::letbox(
                            outer,
                            tag.clone(),
                            &name,
                            m,
                            Term::mkbox(tag.clone(), Term::var(&name)),
                        ),
                        TypeExpr::modal(tag, *inner_ty),
                    ))
                }
                6 => {
                    // Case on a sum piece with a constant result.
                    let sums = pool
                        .iter()
                        .filter(|(_, t)| matches!(t, TypeExpr::Sum(..)))
                        .cloned()
                        .collect::<Vec<_>>();
                    let (s, _) = sums.choose(&mut self.rng).cloned()?;
                    let r = pick(self, &pool)?;
                    let l_name = self.fresh_name();
                    let r_name = self.fresh_name();
                    Some((
                        Term::Case {
                            scrutinee: Box::new(s),
                            left_var: l_name,
                            left: Box::new(r.0.clone()),
                            right_var: r_name,
                            right: Box::new(r.0),
                        },
                        r.1,
                    ))
                }
                _ => {
                    // Project from a product piece.
                    let prods = pool
                        .iter()
                        .filter(|(_, t)| matches!(t, TypeExpr::Prod(..)))
                        .cloned()
                        .collect::<Vec<_>>();
                    let (p, pty) = prods.choose(&mut self.rng).cloned()?;
                    let TypeExpr::Prod(a, b) = pty else { return None };
                    if self.rng.gen_bool(0.5) {
                        Some((
                            Term::Proj {
                                index: ProjIndex::Fst,
                                pair: Box::new(p),
                            },
                            *a,
                        ))
                    } else {
                        Some((
                            Term::Proj {
                                index: ProjIndex::Snd,
                                pair: Box::new(p),
                            },
                            *b,
                        ))
                    }
                }
            };
            if let Some(entry) = next {
                if term_size(&entry.0) <= max_size {
                    pool.push(entry);
                }
            }
        }
        pool.into_iter().max_by_key(|(t, _)| term_size(t))
    }
}
