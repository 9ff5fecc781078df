//! Independent replay of serialized derivations.
//!
//! `replay` re-validates every node of a [`Derivation`] against the local
//! shape of its rule — premise counts, context extensions, type components,
//! and 2-cell boundaries — without calling the checker's inference, so a
//! round-tripped derivation is accepted exactly when it is locally correct.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::mode_theory::{ModeId, ModeTheory};
use crate::syntax::{locks_of, types_equal, Context, InjIndex, ProjIndex, Term, TypeExpr};

use super::{Derivation, Rule};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("replay failed at a {rule:?} node: {message}")]
pub struct ReplayError {
    pub rule: Rule,
    pub message: String,
}

fn fail<T>(rule: Rule, message: impl Into<String>) -> Result<T, ReplayError> {
    Err(ReplayError {
        rule,
        message: message.into(),
    })
}

type Postulates = BTreeMap<String, (TypeExpr, ModeId)>;

pub fn replay(
    mt: &ModeTheory,
    postulates: &Postulates,
    d: &Derivation,
) -> Result<(), ReplayError> {
    let rule = d.rule;
    if d.mode != d.context.mode {
        return fail(rule, "recorded mode differs from the context's mode");
    }
    for p in &d.premises {
        replay(mt, postulates, p)?;
    }
    let premise = |i: usize| -> &Derivation { &d.premises[i] };
    let arity = |n: usize| -> Result<(), ReplayError> {
        if d.premises.len() == n {
            Ok(())
        } else {
            fail(rule, format!("expected {n} premises, found {}", d.premises.len()))
        }
    };
    let same_type = |a: &TypeExpr, b: &TypeExpr| types_equal(mt, a, b);
    match (&d.subject, rule) {
        (Term::Var { name, cell }, Rule::Var) => {
            arity(0)?;
            let (idx, tag, ty) = match d.context.lookup(name) {
                Some(hit) => hit,
                None => return fail(rule, format!("`{name}` is not bound in the context")),
            };
            if !same_type(ty, &d.ty) {
                return fail(rule, "recorded type differs from the binding's type");
            }
            if tag.source() != &d.mode {
                return fail(rule, "binding tag does not start at the recorded mode");
            }
            let modes = d.context.modes_at();
            let locks = locks_of(mt, &d.context.entries[idx + 1..], &modes[idx + 1])
                .map_err(|e| ReplayError {
                    rule,
                    message: e.to_string(),
                })?;
            let c = match (&d.cell, cell) {
                (Some(c), _) => c,
                (None, _) => return fail(rule, "variable node is missing its 2-cell"),
            };
            if !mt.hom_equal(&c.from, tag) || !mt.hom_equal(&c.to, &locks) {
                return fail(
                    rule,
                    format!(
                        "2-cell boundary {} => {} does not match {} => {}",
                        c.from, c.to, tag, locks
                    ),
                );
            }
            Ok(())
        }
        (Term::Pair(a, b), Rule::Pair) => {
            arity(2)?;
            check_premise_context(rule, premise(0), &d.context)?;
            check_premise_context(rule, premise(1), &d.context)?;
            check_premise_subject(rule, premise(0), a)?;
            check_premise_subject(rule, premise(1), b)?;
            match &d.ty {
                TypeExpr::Prod(x, y)
                    if same_type(x, &premise(0).ty) && same_type(y, &premise(1).ty) =>
                {
                    Ok(())
                }
                _ => fail(rule, "type is not the product of the premise types"),
            }
        }
        (Term::Proj { index, pair }, Rule::Proj) => {
            arity(1)?;
            check_premise_context(rule, premise(0), &d.context)?;
            check_premise_subject(rule, premise(0), pair)?;
            match &premise(0).ty {
                TypeExpr::Prod(a, b) => {
                    let component = match index {
                        ProjIndex::Fst => a,
                        ProjIndex::Snd => b,
                    };
                    if same_type(component, &d.ty) {
                        Ok(())
                    } else {
                        fail(rule, "type is not the projected component")
                    }
                }
                _ => fail(rule, "premise type is not a product"),
            }
        }
        (
            Term::Lam {
                var,
                tag,
                dom,
                body,
            },
            Rule::Lam,
        ) => {
            arity(1)?;
            let expected = d.context.bind(var, tag.clone(), dom.clone());
            check_premise_context(rule, premise(0), &expected)?;
            check_premise_subject(rule, premise(0), body)?;
            match &d.ty {
                TypeExpr::Impl {
                    tag: ty_tag,
                    antecedent,
                    consequent,
                } if mt.hom_equal(tag, ty_tag)
                    && same_type(antecedent, dom)
                    && same_type(consequent, &premise(0).ty) =>
                {
                    Ok(())
                }
                _ => fail(rule, "type is not the matching implication"),
            }
        }
        (Term::App { fun, tag, arg }, Rule::App) => {
            arity(2)?;
            check_premise_context(rule, premise(0), &d.context)?;
            check_premise_subject(rule, premise(0), fun)?;
            check_premise_context(rule, premise(1), &d.context.lock(tag.clone()))?;
            check_premise_subject(rule, premise(1), arg)?;
            match &premise(0).ty {
                TypeExpr::Impl {
                    tag: fn_tag,
                    antecedent,
                    consequent,
                } if mt.hom_equal(fn_tag, tag)
                    && same_type(antecedent, &premise(1).ty)
                    && same_type(consequent, &d.ty) =>
                {
                    Ok(())
                }
                _ => fail(rule, "function premise does not match the application"),
            }
        }
        (Term::Inj { index, body }, Rule::Inj) => {
            arity(1)?;
            check_premise_context(rule, premise(0), &d.context)?;
            check_premise_subject(rule, premise(0), body)?;
            match &d.ty {
                TypeExpr::Sum(a, b) => {
                    let component = match index {
                        InjIndex::Left => a,
                        InjIndex::Right => b,
                    };
                    if same_type(component, &premise(0).ty) {
                        Ok(())
                    } else {
                        fail(rule, "premise type is not the injected component")
                    }
                }
                _ => fail(rule, "type is not a sum"),
            }
        }
        (
            Term::Case {
                scrutinee,
                left_var,
                left,
                right_var,
                right,
            },
            Rule::Case,
        ) => {
            arity(3)?;
            check_premise_context(rule, premise(0), &d.context)?;
            check_premise_subject(rule, premise(0), scrutinee)?;
            let (a, b) = match &premise(0).ty {
                TypeExpr::Sum(a, b) => (a, b),
                _ => return fail(rule, "scrutinee type is not a sum"),
            };
            let id = crate::mode_theory::ModalityPath::identity(&d.mode);
            check_premise_context(rule, premise(1), &d.context.bind(left_var, id.clone(), (**a).clone()))?;
            check_premise_subject(rule, premise(1), left)?;
            check_premise_context(rule, premise(2), &d.context.bind(right_var, id, (**b).clone()))?;
            check_premise_subject(rule, premise(2), right)?;
            if same_type(&premise(1).ty, &d.ty) && same_type(&premise(2).ty, &d.ty) {
                Ok(())
            } else {
                fail(rule, "arm types differ from the recorded type")
            }
        }
        (Term::MkBox { tag, body }, Rule::Mod) => {
            arity(1)?;
            check_premise_context(rule, premise(0), &d.context.lock(tag.clone()))?;
            check_premise_subject(rule, premise(0), body)?;
            match &d.ty {
                TypeExpr::Modal { tag: ty_tag, body } if mt.hom_equal(tag, ty_tag)
                    && same_type(body, &premise(0).ty) =>
                {
                    Ok(())
                }
                _ => fail(rule, "type is not the matching modal type"),
            }
        }
        (
            Term::LetBox {
                outer,
                inner,
                var,
                bound,
                body,
            },
            Rule::Let,
        ) => {
            arity(2)?;
            check_premise_context(rule, premise(0), &d.context.lock(outer.clone()))?;
            check_premise_subject(rule, premise(0), bound)?;
            let elem = match &premise(0).ty {
                TypeExpr::Modal { tag, body } if mt.hom_equal(tag, inner) => body,
                _ => return fail(rule, "major premise is not a modal type along the inner tag"),
            };
            let composite = mt.compose(outer, inner).map_err(|e| ReplayError {
                rule,
                message: e.to_string(),
            })?;
            check_premise_context(
                rule,
                premise(1),
                &d.context.bind(var, composite, (**elem).clone()),
            )?;
            check_premise_subject(rule, premise(1), body)?;
            if same_type(&premise(1).ty, &d.ty) {
                Ok(())
            } else {
                fail(rule, "body type differs from the recorded type")
            }
        }
        (Term::Postulate { name, args }, Rule::Postulate) => {
            arity(0)?;
            let (scheme, mode) = match postulates.get(name) {
                Some(hit) => hit,
                None => return fail(rule, format!("unknown postulate `{name}`")),
            };
            if *mode != d.mode {
                return fail(rule, "postulate used at the wrong mode");
            }
            let expected = if args.is_empty() {
                scheme.clone()
            } else {
                scheme.instantiate(args)
            };
            if same_type(&expected, &d.ty) {
                Ok(())
            } else {
                fail(rule, "type is not the instantiated scheme")
            }
        }
        (_, rule) => fail(rule, "subject does not match the recorded rule"),
    }
}

fn check_premise_context(
    rule: Rule,
    premise: &Derivation,
    expected: &Context,
) -> Result<(), ReplayError> {
    if &premise.context == expected {
        Ok(())
    } else {
        fail(rule, "premise context is not the expected extension")
    }
}

fn check_premise_subject(
    rule: Rule,
    premise: &Derivation,
    expected: &Term,
) -> Result<(), ReplayError> {
    if &premise.subject == expected {
        Ok(())
    } else {
        fail(rule, "premise subject is not the corresponding subterm")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{CheckOptions, Checker};
    use crate::mode_theory::builtin;
    use crate::syntax::parse::parse_mml;
    use crate::syntax::resolve::resolve_module;

    fn derivation_of(theory: &str, src: &str) -> (crate::mode_theory::ModeTheory, Postulates, Derivation) {
        let mt = builtin(theory).unwrap();
        let module = resolve_module(&mt, &parse_mml(src).unwrap()).unwrap();
        let mut checker = Checker::new(&mt, CheckOptions::default());
        let mut table = Postulates::new();
        for p in &module.postulates {
            checker
                .declare_postulate(&p.name, p.scheme.clone(), p.mode.clone())
                .unwrap();
            table.insert(p.name.clone(), (p.scheme.clone(), p.mode.clone()));
        }
        let t = module.thms.last().unwrap();
        let d = checker.check_thm(&t.term, &t.ty, &t.mode).unwrap();
        (mt, table, d)
    }

    #[test]
    fn replays_a_checked_derivation_after_json_round_trip() {
        let (mt, table, d) = derivation_of(
            "k4-free",
            "thm ax4 : <box|p0> -> <box.box|p0> at m := \
             \\b : <box|p0>. let box{1;box} y = b in box{box.box} y[four]",
        );
        let json = serde_json::to_string(&d).unwrap();
        let back: Derivation = serde_json::from_str(&json).unwrap();
        replay(&mt, &table, &back).unwrap();
    }

    #[test]
    fn rejects_a_tampered_derivation() {
        let (mt, table, mut d) = derivation_of(
            "k",
            "thm intro : p0 ->{box} <box|p0> at m := \\x :{box} p0. box{box} x",
        );
        d.ty = TypeExpr::Top;
        assert!(replay(&mt, &table, &d).is_err());
    }

    #[test]
    fn replays_postulate_nodes() {
        let (mt, table, d) = derivation_of(
            "int-cl",
            "postulate lem : p0 + ~p0 at cl\n\
             thm dec : <IntProv|p0> + ~<IntProv|p0> at cl := lem{<IntProv|p0>}",
        );
        replay(&mt, &table, &d).unwrap();
    }
}
