use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::mode_theory::{Cell2, ModalityPath, ModeId, ModeTheory, ModeTheoryError};

/// A type (proposition) at some mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeExpr {
    /// Atomic proposition `p0`, `p1`, ...
    Atom(usize),
    Top,
    Bot,
    Prod(Box<TypeExpr>, Box<TypeExpr>),
    Sum(Box<TypeExpr>, Box<TypeExpr>),
    /// Modal implication `A ->{mu} B`.  The plain arrow is the identity tag.
    Impl {
        tag: ModalityPath,
        antecedent: Box<TypeExpr>,
        consequent: Box<TypeExpr>,
    },
    /// `<mu|A>`.
    Modal {
        tag: ModalityPath,
        body: Box<TypeExpr>,
    },
}

impl TypeExpr {
    pub fn prod(a: TypeExpr, b: TypeExpr) -> TypeExpr {
        TypeExpr::Prod(Box::new(a), Box::new(b))
    }

    pub fn sum(a: TypeExpr, b: TypeExpr) -> TypeExpr {
        TypeExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn impl_(tag: ModalityPath, a: TypeExpr, b: TypeExpr) -> TypeExpr {
        TypeExpr::Impl {
            tag,
            antecedent: Box::new(a),
            consequent: Box::new(b),
        }
    }

    pub fn modal(tag: ModalityPath, a: TypeExpr) -> TypeExpr {
        TypeExpr::Modal {
            tag,
            body: Box::new(a),
        }
    }

    /// Negation `~A` is sugar for `A -> bot` with the identity tag at `mode`.
    pub fn neg(mode: &ModeId, a: TypeExpr) -> TypeExpr {
        TypeExpr::impl_(ModalityPath::identity(mode), a, TypeExpr::Bot)
    }

    /// Atoms occurring in the type, for postulate-scheme instantiation.
    pub fn atoms(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<usize>) {
        match self {
            TypeExpr::Atom(i) => {
                out.insert(*i);
            }
            TypeExpr::Top | TypeExpr::Bot => {}
            TypeExpr::Prod(a, b) | TypeExpr::Sum(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            TypeExpr::Impl {
                antecedent,
                consequent,
                ..
            } => {
                antecedent.collect_atoms(out);
                consequent.collect_atoms(out);
            }
            TypeExpr::Modal { body, .. } => body.collect_atoms(out),
        }
    }

    /// Replace each `Atom(i)` by `args[i]`.  Atoms without a corresponding
    /// argument are left in place.
    pub fn instantiate(&self, args: &[TypeExpr]) -> TypeExpr {
        match self {
            TypeExpr::Atom(i) => args.get(*i).cloned().unwrap_or_else(|| self.clone()),
            TypeExpr::Top | TypeExpr::Bot => self.clone(),
            TypeExpr::Prod(a, b) => TypeExpr::prod(a.instantiate(args), b.instantiate(args)),
            TypeExpr::Sum(a, b) => TypeExpr::sum(a.instantiate(args), b.instantiate(args)),
            TypeExpr::Impl {
                tag,
                antecedent,
                consequent,
            } => TypeExpr::impl_(
                tag.clone(),
                antecedent.instantiate(args),
                consequent.instantiate(args),
            ),
            TypeExpr::Modal { tag, body } => {
                TypeExpr::modal(tag.clone(), body.instantiate(args))
            }
        }
    }
}

/// Semantic type equality: structural, with modality tags compared in the
/// hom-set (modulo the theory's word equations) rather than syntactically.
pub fn types_equal(mt: &ModeTheory, a: &TypeExpr, b: &TypeExpr) -> bool {
    match (a, b) {
        (TypeExpr::Atom(i), TypeExpr::Atom(j)) => i == j,
        (TypeExpr::Top, TypeExpr::Top) | (TypeExpr::Bot, TypeExpr::Bot) => true,
        (TypeExpr::Prod(a1, a2), TypeExpr::Prod(b1, b2))
        | (TypeExpr::Sum(a1, a2), TypeExpr::Sum(b1, b2)) => {
            types_equal(mt, a1, b1) && types_equal(mt, a2, b2)
        }
        (
            TypeExpr::Impl {
                tag: t1,
                antecedent: a1,
                consequent: c1,
            },
            TypeExpr::Impl {
                tag: t2,
                antecedent: a2,
                consequent: c2,
            },
        ) => mt.hom_equal(t1, t2) && types_equal(mt, a1, a2) && types_equal(mt, c1, c2),
        (
            TypeExpr::Modal { tag: t1, body: b1 },
            TypeExpr::Modal { tag: t2, body: b2 },
        ) => mt.hom_equal(t1, t2) && types_equal(mt, b1, b2),
        _ => false,
    }
}

/// One entry of a context, read left to right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContextEntry {
    Bind {
        name: String,
        tag: ModalityPath,
        ty: TypeExpr,
    },
    Lock(ModalityPath),
}

/// A context together with the mode its judgement lives at (the mode to the
/// right of the last entry).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Context {
    pub entries: Vec<ContextEntry>,
    pub mode: ModeId,
}

impl Context {
    pub fn empty(mode: ModeId) -> Context {
        Context {
            entries: Vec::new(),
            mode,
        }
    }

    /// Extend with `name :{tag} ty`.  A binding does not change the mode.
    pub fn bind(&self, name: &str, tag: ModalityPath, ty: TypeExpr) -> Context {
        let mut out = self.clone();
        out.entries.push(ContextEntry::Bind {
            name: name.to_string(),
            tag,
            ty,
        });
        out
    }

    /// Extend with a lock for `tag : n -> m`; moves the judgement from `m`
    /// to `n`.
    pub fn lock(&self, tag: ModalityPath) -> Context {
        let mut out = self.clone();
        out.mode = tag.source().clone();
        out.entries.push(ContextEntry::Lock(tag));
        out
    }

    /// The mode immediately to the left of entry `idx` (so `modes_at()[0]`
    /// is the mode the whole context starts at, and the last element equals
    /// `self.mode`).  Computed from the lock boundaries right to left.
    pub fn modes_at(&self) -> Vec<ModeId> {
        let mut out = vec![self.mode.clone(); self.entries.len() + 1];
        for i in (0..self.entries.len()).rev() {
            out[i] = match &self.entries[i] {
                ContextEntry::Lock(tag) => tag.target().clone(),
                ContextEntry::Bind { .. } => out[i + 1].clone(),
            };
        }
        out
    }

    /// Locate the unique binding named `name`; returns its index, tag, and
    /// type.
    pub fn lookup(&self, name: &str) -> Option<(usize, &ModalityPath, &TypeExpr)> {
        self.entries.iter().enumerate().rev().find_map(|(i, e)| match e {
            ContextEntry::Bind {
                name: n, tag, ty, ..
            } if n == name => Some((i, tag, ty)),
            _ => None,
        })
    }

    pub fn bound_names(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter_map(|e| match e {
                ContextEntry::Bind { name, .. } => Some(name.as_str()),
                ContextEntry::Lock(_) => None,
            })
            .collect()
    }
}

/// The composite of every lock in `entries`, as a modality ending at
/// `start_mode` (the mode to the left of the first entry).  For a context
/// suffix `Δ` this is `Locks(Δ)`.
pub fn locks_of(
    mt: &ModeTheory,
    entries: &[ContextEntry],
    start_mode: &ModeId,
) -> Result<ModalityPath, ModeTheoryError> {
    let mut acc = ModalityPath::identity(start_mode);
    for entry in entries {
        if let ContextEntry::Lock(tag) = entry {
            acc = mt.compose(&acc, tag)?;
        }
    }
    Ok(acc)
}

/// Fuse adjacent locks and drop identity locks, using the context equations
/// `Γ,lock(μ),lock(ν) = Γ,lock(μ∘ν)` and `Γ,lock(1) = Γ`.  Tags and types
/// are left untouched.
pub fn normalize_context(mt: &ModeTheory, ctx: &Context) -> Result<Context, ModeTheoryError> {
    let mut entries: Vec<ContextEntry> = Vec::with_capacity(ctx.entries.len());
    for entry in &ctx.entries {
        match entry {
            ContextEntry::Bind { .. } => entries.push(entry.clone()),
            ContextEntry::Lock(tag) => {
                let tag = mt.normalize_path(tag);
                if let Some(ContextEntry::Lock(prev)) = entries.last() {
                    let fused = mt.compose(prev, &tag)?;
                    entries.pop();
                    if !fused.is_identity_word() {
                        entries.push(ContextEntry::Lock(fused));
                    }
                } else if !tag.is_identity_word() {
                    entries.push(ContextEntry::Lock(tag));
                }
            }
        }
    }
    Ok(Context {
        entries,
        mode: ctx.mode.clone(),
    })
}

/// The 2-cell annotation on a variable occurrence.  `Id` and `Hole` are
/// elaboration sugar: `Id` means the identity 2-cell on whatever boundary
/// the variable rule demands, and `Hole` asks the checker to search for a
/// witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[allow(clippy::large_enum_variant)]
pub enum CellRef {
    Id,
    Hole,
    Cell(Cell2),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProjIndex {
    Fst,
    Snd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InjIndex {
    Left,
    Right,
}

/// Proof terms, one constructor per rule of the term assignment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Term {
    Var {
        name: String,
        cell: CellRef,
    },
    Pair(Box<Term>, Box<Term>),
    Proj {
        index: ProjIndex,
        pair: Box<Term>,
    },
    Lam {
        var: String,
        tag: ModalityPath,
        dom: TypeExpr,
        body: Box<Term>,
    },
    App {
        fun: Box<Term>,
        tag: ModalityPath,
        arg: Box<Term>,
    },
    Inj {
        index: InjIndex,
        body: Box<Term>,
    },
    Case {
        scrutinee: Box<Term>,
        left_var: String,
        left: Box<Term>,
        right_var: String,
        right: Box<Term>,
    },
    MkBox {
        tag: ModalityPath,
        body: Box<Term>,
    },
    LetBox {
        outer: ModalityPath,
        inner: ModalityPath,
        var: String,
        bound: Box<Term>,
        body: Box<Term>,
    },
    /// A use of a postulated scheme, with the types substituted for its
    /// atoms.
    Postulate {
        name: String,
        args: Vec<TypeExpr>,
    },
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var {
            name: name.to_string(),
            cell: CellRef::Id,
        }
    }

    pub fn var_cell(name: &str, cell: CellRef) -> Term {
        Term::Var {
            name: name.to_string(),
            cell,
        }
    }

    pub fn lam(var: &str, tag: ModalityPath, dom: TypeExpr, body: Term) -> Term {
        Term::Lam {
            var: var.to_string(),
            tag,
            dom,
            body: Box::new(body),
        }
    }

    pub fn app(fun: Term, tag: ModalityPath, arg: Term) -> Term {
        Term::App {
            fun: Box::new(fun),
            tag,
            arg: Box::new(arg),
        }
    }

    pub fn mkbox(tag: ModalityPath, body: Term) -> Term {
        Term::MkBox {
            tag,
            body: Box::new(body),
        }
    }

    pub fn letbox(
        outer: ModalityPath,
        inner: ModalityPath,
        var: &str,
        bound: Term,
        body: Term,
    ) -> Term {
        Term::LetBox {
            outer,
            inner,
            var: var.to_string(),
            bound: Box::new(bound),
            body: Box::new(body),
        }
    }

    /// Free variable names.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var { name, .. } => {
                if !bound.iter().any(|b| b == name) {
                    out.insert(name.clone());
                }
            }
            Term::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Proj { pair, .. } => pair.collect_free(bound, out),
            Term::Lam { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Term::App { fun, arg, .. } => {
                fun.collect_free(bound, out);
                arg.collect_free(bound, out);
            }
            Term::Inj { body, .. } => body.collect_free(bound, out),
            Term::Case {
                scrutinee,
                left_var,
                left,
                right_var,
                right,
            } => {
                scrutinee.collect_free(bound, out);
                bound.push(left_var.clone());
                left.collect_free(bound, out);
                bound.pop();
                bound.push(right_var.clone());
                right.collect_free(bound, out);
                bound.pop();
            }
            Term::MkBox { body, .. } => body.collect_free(bound, out),
            Term::LetBox {
                var, bound: b, body, ..
            } => {
                b.collect_free(bound, out);
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Term::Postulate { .. } => {}
        }
    }
}

/// α-equivalence: binder names are irrelevant, everything else (including
/// tags and 2-cell annotations) is compared structurally.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    alpha_eq_in(&mut Vec::new(), a, b)
}

fn alpha_eq_in(env: &mut Vec<(String, String)>, a: &Term, b: &Term) -> bool {
    match (a, b) {
        (
            Term::Var { name: x, cell: c1 },
            Term::Var { name: y, cell: c2 },
        ) => {
            if c1 != c2 {
                return false;
            }
            // The innermost binding of either name decides.
            for (bx, by) in env.iter().rev() {
                if bx == x || by == y {
                    return bx == x && by == y;
                }
            }
            x == y
        }
        (Term::Pair(a1, a2), Term::Pair(b1, b2)) => {
            alpha_eq_in(env, a1, b1) && alpha_eq_in(env, a2, b2)
        }
        (
            Term::Proj { index: i1, pair: p1 },
            Term::Proj { index: i2, pair: p2 },
        ) => i1 == i2 && alpha_eq_in(env, p1, p2),
        (
            Term::Lam {
                var: x,
                tag: t1,
                dom: d1,
                body: m1,
            },
            Term::Lam {
                var: y,
                tag: t2,
                dom: d2,
                body: m2,
            },
        ) => {
            if t1 != t2 || d1 != d2 {
                return false;
            }
            env.push((x.clone(), y.clone()));
            let r = alpha_eq_in(env, m1, m2);
            env.pop();
            r
        }
        (
            Term::App {
                fun: f1,
                tag: t1,
                arg: a1,
            },
            Term::App {
                fun: f2,
                tag: t2,
                arg: a2,
            },
        ) => t1 == t2 && alpha_eq_in(env, f1, f2) && alpha_eq_in(env, a1, a2),
        (
            Term::Inj { index: i1, body: m1 },
            Term::Inj { index: i2, body: m2 },
        ) => i1 == i2 && alpha_eq_in(env, m1, m2),
        (
            Term::Case {
                scrutinee: s1,
                left_var: lx,
                left: l1,
                right_var: rx,
                right: r1,
            },
            Term::Case {
                scrutinee: s2,
                left_var: ly,
                left: l2,
                right_var: ry,
                right: r2,
            },
        ) => {
            if !alpha_eq_in(env, s1, s2) {
                return false;
            }
            env.push((lx.clone(), ly.clone()));
            let l = alpha_eq_in(env, l1, l2);
            env.pop();
            if !l {
                return false;
            }
            env.push((rx.clone(), ry.clone()));
            let r = alpha_eq_in(env, r1, r2);
            env.pop();
            r
        }
        (
            Term::MkBox { tag: t1, body: m1 },
            Term::MkBox { tag: t2, body: m2 },
        ) => t1 == t2 && alpha_eq_in(env, m1, m2),
        (
            Term::LetBox {
                outer: o1,
                inner: i1,
                var: x,
                bound: b1,
                body: m1,
            },
            Term::LetBox {
                outer: o2,
                inner: i2,
                var: y,
                bound: b2,
                body: m2,
            },
        ) => {
            if o1 != o2 || i1 != i2 || !alpha_eq_in(env, b1, b2) {
                return false;
            }
            env.push((x.clone(), y.clone()));
            let r = alpha_eq_in(env, m1, m2);
            env.pop();
            r
        }
        (
            Term::Postulate { name: n1, args: a1 },
            Term::Postulate { name: n2, args: a2 },
        ) => n1 == n2 && a1 == a2,
        _ => false,
    }
}
