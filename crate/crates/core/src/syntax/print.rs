//! Pretty-printing of types, terms, contexts, and declarations, in the same
//! concrete syntax the parser accepts, so that printing and re-parsing a
//! resolved declaration is the identity.

use std::fmt;

use super::resolve::{Module, PostulateDecl, ThmDecl};
use super::{CellRef, Context, ContextEntry, InjIndex, ProjIndex, Term, TypeExpr};

// Precedence levels, loosest first.
const TY_ARROW: u8 = 0;
const TY_SUM: u8 = 1;
const TY_PROD: u8 = 2;
const TY_ATOM: u8 = 3;

fn fmt_type(f: &mut fmt::Formatter<'_>, ty: &TypeExpr, prec: u8) -> fmt::Result {
    match ty {
        TypeExpr::Atom(i) => write!(f, "p{i}"),
        TypeExpr::Top => f.write_str("top"),
        TypeExpr::Bot => f.write_str("bot"),
        TypeExpr::Impl {
            tag,
            antecedent,
            consequent,
        } if tag.is_identity_word() && **consequent == TypeExpr::Bot => {
            f.write_str("~")?;
            fmt_type(f, antecedent, TY_ATOM)
        }
        TypeExpr::Impl {
            tag,
            antecedent,
            consequent,
        } => paren(f, prec > TY_ARROW, |f| {
            fmt_type(f, antecedent, TY_SUM)?;
            if tag.is_identity_word() {
                f.write_str(" -> ")?;
            } else {
                write!(f, " ->{{{tag}}} ")?;
            }
            fmt_type(f, consequent, TY_ARROW)
        }),
        TypeExpr::Sum(a, b) => paren(f, prec > TY_SUM, |f| {
            fmt_type(f, a, TY_SUM)?;
            f.write_str(" + ")?;
            fmt_type(f, b, TY_PROD)
        }),
        TypeExpr::Prod(a, b) => paren(f, prec > TY_PROD, |f| {
            fmt_type(f, a, TY_PROD)?;
            f.write_str(" * ")?;
            fmt_type(f, b, TY_ATOM)
        }),
        TypeExpr::Modal { tag, body } => {
            write!(f, "<{tag}|")?;
            fmt_type(f, body, TY_ARROW)?;
            f.write_str(">")
        }
    }
}

fn paren(
    f: &mut fmt::Formatter<'_>,
    needed: bool,
    inner: impl FnOnce(&mut fmt::Formatter<'_>) -> fmt::Result,
) -> fmt::Result {
    if needed {
        f.write_str("(")?;
        inner(f)?;
        f.write_str(")")
    } else {
        inner(f)
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_type(f, self, TY_ARROW)
    }
}

const TM_LOW: u8 = 0;
const TM_APP: u8 = 1;
const TM_ATOM: u8 = 2;

fn fmt_term(f: &mut fmt::Formatter<'_>, term: &Term, prec: u8) -> fmt::Result {
    match term {
        Term::Var { name, cell } => match cell {
            CellRef::Id => f.write_str(name),
            CellRef::Hole => write!(f, "{name}[?]"),
            CellRef::Cell(c) => write!(f, "{name}[{c}]"),
        },
        Term::Postulate { name, args } => {
            if args.is_empty() {
                f.write_str(name)
            } else {
                write!(f, "{name}{{")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    fmt_type(f, a, TY_ARROW)?;
                }
                f.write_str("}")
            }
        }
        Term::Pair(a, b) => {
            f.write_str("(")?;
            fmt_term(f, a, TM_LOW)?;
            f.write_str(", ")?;
            fmt_term(f, b, TM_LOW)?;
            f.write_str(")")
        }
        Term::Proj { index, pair } => paren(f, prec > TM_APP, |f| {
            f.write_str(match index {
                ProjIndex::Fst => "fst ",
                ProjIndex::Snd => "snd ",
            })?;
            fmt_term(f, pair, TM_ATOM)
        }),
        Term::Inj { index, body } => paren(f, prec > TM_APP, |f| {
            f.write_str(match index {
                InjIndex::Left => "inl ",
                InjIndex::Right => "inr ",
            })?;
            fmt_term(f, body, TM_ATOM)
        }),
        Term::Lam {
            var,
            tag,
            dom,
            body,
        } => paren(f, prec > TM_LOW, |f| {
            if tag.is_identity_word() {
                write!(f, "\\{var} : ")?;
            } else {
                write!(f, "\\{var} :{{{tag}}} ")?;
            }
            fmt_type(f, dom, TY_ARROW)?;
            f.write_str(". ")?;
            fmt_term(f, body, TM_LOW)
        }),
        Term::App { fun, tag, arg } => paren(f, prec > TM_APP, |f| {
            fmt_term(f, fun, TM_APP)?;
            if tag.is_identity_word() {
                f.write_str(" ")?;
            } else {
                write!(f, " @{{{tag}}} ")?;
            }
            fmt_term(f, arg, TM_ATOM)
        }),
        Term::Case {
            scrutinee,
            left_var,
            left,
            right_var,
            right,
        } => paren(f, prec > TM_LOW, |f| {
            f.write_str("case ")?;
            fmt_term(f, scrutinee, TM_LOW)?;
            write!(f, " of {{ {left_var}. ")?;
            fmt_term(f, left, TM_LOW)?;
            write!(f, " | {right_var}. ")?;
            fmt_term(f, right, TM_LOW)?;
            f.write_str(" }")
        }),
        Term::MkBox { tag, body } => {
            write!(f, "box{{{tag}}} ")?;
            fmt_term(f, body, TM_ATOM)
        }
        Term::LetBox {
            outer,
            inner,
            var,
            bound,
            body,
        } => paren(f, prec > TM_LOW, |f| {
            write!(f, "let box{{{outer};{inner}}} {var} = ")?;
            fmt_term(f, bound, TM_LOW)?;
            f.write_str(" in ")?;
            fmt_term(f, body, TM_LOW)
        }),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(f, self, TM_LOW)
    }
}

impl fmt::Display for ContextEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContextEntry::Bind { name, tag, ty } => {
                if tag.is_identity_word() {
                    write!(f, "{name} : {ty}")
                } else {
                    write!(f, "{name} :{{{tag}}} {ty}")
                }
            }
            ContextEntry::Lock(tag) => write!(f, "lock({tag})"),
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            f.write_str("·")?;
        } else {
            for (i, e) in self.entries.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, " @ {}", self.mode)
    }
}

pub fn print_postulate(decl: &PostulateDecl) -> String {
    format!(
        "postulate {} : {} at {}",
        decl.name, decl.scheme, decl.mode
    )
}

pub fn print_thm(decl: &ThmDecl) -> String {
    format!(
        "thm {} : {} at {} :=\n  {}",
        decl.name, decl.ty, decl.mode, decl.term
    )
}

/// Print a module in parseable form, postulates first so every theorem sees
/// the schemes it uses.
pub fn print_module(module: &Module) -> String {
    let mut out = String::new();
    for p in &module.postulates {
        out.push_str(&print_postulate(p));
        out.push('\n');
    }
    for t in &module.thms {
        out.push_str(&print_thm(t));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode_theory::builtin;
    use crate::syntax::parse::parse_mml;
    use crate::syntax::resolve::resolve_module;

    fn round_trip(theory: &str, src: &str) {
        let mt = builtin(theory).unwrap();
        let module = resolve_module(&mt, &parse_mml(src).unwrap()).unwrap();
        let printed = print_module(&module);
        let reparsed = resolve_module(&mt, &parse_mml(&printed).unwrap())
            .unwrap_or_else(|e| panic!("reparse of {printed:?} failed: {e}"));
        assert_eq!(module, reparsed, "printed form: {printed}");
    }

    #[test]
    fn round_trips_axiom_four() {
        round_trip(
            "k4-free",
            "thm ax4 : <box|p0> -> <box.box|p0> at m := \
             \\b : <box|p0>. let box{1;box} y = b in box{box.box} y[four]",
        );
    }

    #[test]
    fn round_trips_sums_products_and_negation() {
        round_trip(
            "k",
            "thm t : (p0 + ~p1) * (p1 -> p0 + p2) -> p0 * p1 at m := \
             \\x : (p0 + ~p1) * (p1 -> p0 + p2). \
             case fst x of { a. (a, snd x) | b. (fst x, b) }",
        );
    }

    #[test]
    fn round_trips_postulates_and_cells() {
        round_trip(
            "int-cl",
            "postulate lem : p0 + ~p0 at cl\n\
             thm dec : <IntProv|p0> + ~<IntProv|p0> at cl := lem{<IntProv|p0>}",
        );
        round_trip(
            "s4-comonad",
            "thm extract : <box|p0> -> p0 at m := \
             \\x : <box|p0>. let box{1;box} y = x in y[t]",
        );
    }

    #[test]
    fn negation_prints_as_tilde() {
        let mt = builtin("k").unwrap();
        let module = resolve_module(
            &mt,
            &parse_mml("thm t : ~p0 -> ~p0 at m := \\x : ~p0. x").unwrap(),
        )
        .unwrap();
        let printed = print_thm(&module.thms[0]);
        assert!(printed.contains("~p0"), "{printed}");
    }
}
