//! Erasure of term-level derivations to logic-level proof trees.
//!
//! Erasure drops variable names and subjects but keeps everything the logic
//! sees: hypothesis tags and formulas, locks, the rule at each node, and the
//! 2-cells justifying hypothesis uses.  `validate_proof_shape` re-checks an
//! erased tree against the sequent rules alone.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mode_theory::{Cell2, ModalityPath, ModeId, ModeTheory, ModeTheoryError};
use crate::syntax::{types_equal, ContextEntry, Term, TypeExpr};

use super::{Derivation, Rule};

/// A context entry with its name erased.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum EraseEntry {
    Hyp { tag: ModalityPath, formula: TypeExpr },
    Lock(ModalityPath),
}

/// A derivation with names and subjects erased: one node per rule instance
/// of the sequent calculus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofTree {
    pub rule: Rule,
    pub hypotheses: Vec<EraseEntry>,
    pub formula: TypeExpr,
    pub mode: ModeId,
    pub premises: Vec<ProofTree>,
    /// For hypothesis nodes: which hypothesis is used, and the justifying
    /// 2-cell.
    pub hyp_index: Option<usize>,
    pub cell: Option<Cell2>,
}

pub fn erase(d: &Derivation) -> ProofTree {
    let hypotheses = d
        .context
        .entries
        .iter()
        .map(|e| match e {
            ContextEntry::Bind { tag, ty, .. } => EraseEntry::Hyp {
                tag: tag.clone(),
                formula: ty.clone(),
            },
            ContextEntry::Lock(tag) => EraseEntry::Lock(tag.clone()),
        })
        .collect();
    let hyp_index = match (&d.rule, &d.subject) {
        (Rule::Var, Term::Var { name, .. }) => d.context.lookup(name).map(|(i, _, _)| i),
        _ => None,
    };
    ProofTree {
        rule: d.rule,
        hypotheses,
        formula: d.ty.clone(),
        mode: d.mode.clone(),
        premises: d.premises.iter().map(erase).collect(),
        hyp_index,
        cell: d.cell.clone(),
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("proof-shape violation at a {rule:?} node: {message}")]
pub struct ShapeError {
    pub rule: Rule,
    pub message: String,
}

fn fail<T>(rule: Rule, message: impl Into<String>) -> Result<T, ShapeError> {
    Err(ShapeError {
        rule,
        message: message.into(),
    })
}

/// The mode to the left of each hypothesis entry, walking the locks from the
/// node's mode (rightmost) leftwards; index `len` is the node's own mode.
fn modes_at(entries: &[EraseEntry], mode: &ModeId) -> Vec<ModeId> {
    let mut out = vec![mode.clone(); entries.len() + 1];
    for i in (0..entries.len()).rev() {
        out[i] = match &entries[i] {
            EraseEntry::Lock(tag) => tag.target().clone(),
            EraseEntry::Hyp { .. } => out[i + 1].clone(),
        };
    }
    out
}

fn locks_of(
    mt: &ModeTheory,
    entries: &[EraseEntry],
    start_mode: &ModeId,
) -> Result<ModalityPath, ModeTheoryError> {
    let mut acc = ModalityPath::identity(start_mode);
    for e in entries {
        if let EraseEntry::Lock(tag) = e {
            acc = mt.compose(&acc, tag)?;
        }
    }
    Ok(acc)
}

fn extended(base: &[EraseEntry], entry: EraseEntry) -> Vec<EraseEntry> {
    let mut out = base.to_vec();
    out.push(entry);
    out
}

/// Validate an erased tree against the sequent rules: premise counts,
/// hypothesis extensions, formula components, lock discipline, and 2-cell
/// boundaries.  Postulate nodes are accepted as axiom leaves.
pub fn validate_proof_shape(mt: &ModeTheory, tree: &ProofTree) -> Result<(), ShapeError> {
    let rule = tree.rule;
    for p in &tree.premises {
        validate_proof_shape(mt, p)?;
    }
    let arity = |n: usize| -> Result<(), ShapeError> {
        if tree.premises.len() == n {
            Ok(())
        } else {
            fail(
                rule,
                format!("expected {n} premises, found {}", tree.premises.len()),
            )
        }
    };
    let premise = |i: usize| -> &ProofTree { &tree.premises[i] };
    let same_hyps = |p: &ProofTree, expected: &[EraseEntry]| -> bool {
        p.hypotheses == expected && p.mode == tree.mode
    };
    match rule {
        Rule::Var => {
            arity(0)?;
            let idx = match tree.hyp_index {
                Some(i) if i < tree.hypotheses.len() => i,
                _ => return fail(rule, "hypothesis node without a valid hypothesis index"),
            };
            let (tag, formula) = match &tree.hypotheses[idx] {
                EraseEntry::Hyp { tag, formula } => (tag, formula),
                EraseEntry::Lock(_) => return fail(rule, "hypothesis index points at a lock"),
            };
            if !types_equal(mt, formula, &tree.formula) {
                return fail(rule, "conclusion is not the hypothesis formula");
            }
            if tag.source() != &tree.mode {
                return fail(rule, "hypothesis tag does not start at the node's mode");
            }
            let modes = modes_at(&tree.hypotheses, &tree.mode);
            let locks = locks_of(mt, &tree.hypotheses[idx + 1..], &modes[idx + 1])
                .map_err(|e| ShapeError {
                    rule,
                    message: e.to_string(),
                })?;
            match &tree.cell {
                Some(c) if mt.hom_equal(&c.from, tag) && mt.hom_equal(&c.to, &locks) => Ok(()),
                Some(c) => fail(
                    rule,
                    format!("2-cell boundary {} => {} does not fit", c.from, c.to),
                ),
                None => fail(rule, "hypothesis node is missing its 2-cell"),
            }
        }
        Rule::Pair => {
            arity(2)?;
            match &tree.formula {
                TypeExpr::Prod(a, b)
                    if types_equal(mt, a, &premise(0).formula)
                        && types_equal(mt, b, &premise(1).formula)
                        && same_hyps(premise(0), &tree.hypotheses)
                        && same_hyps(premise(1), &tree.hypotheses) =>
                {
                    Ok(())
                }
                _ => fail(rule, "conclusion is not the conjunction of the premises"),
            }
        }
        Rule::Proj => {
            arity(1)?;
            if !same_hyps(premise(0), &tree.hypotheses) {
                return fail(rule, "premise hypotheses differ");
            }
            match &premise(0).formula {
                TypeExpr::Prod(a, b)
                    if types_equal(mt, a, &tree.formula) || types_equal(mt, b, &tree.formula) =>
                {
                    Ok(())
                }
                _ => fail(rule, "premise is not a conjunction containing the conclusion"),
            }
        }
        Rule::Lam => {
            arity(1)?;
            match &tree.formula {
                TypeExpr::Impl {
                    tag,
                    antecedent,
                    consequent,
                } => {
                    let expected = extended(
                        &tree.hypotheses,
                        EraseEntry::Hyp {
                            tag: tag.clone(),
                            formula: (**antecedent).clone(),
                        },
                    );
                    if same_hyps(premise(0), &expected)
                        && types_equal(mt, consequent, &premise(0).formula)
                    {
                        Ok(())
                    } else {
                        fail(rule, "premise does not extend the hypotheses by the antecedent")
                    }
                }
                _ => fail(rule, "conclusion is not an implication"),
            }
        }
        Rule::App => {
            arity(2)?;
            if !same_hyps(premise(0), &tree.hypotheses) {
                return fail(rule, "major premise hypotheses differ");
            }
            match &premise(0).formula {
                TypeExpr::Impl {
                    tag,
                    antecedent,
                    consequent,
                } => {
                    let arg = premise(1);
                    let expected = extended(&tree.hypotheses, EraseEntry::Lock(tag.clone()));
                    if arg.hypotheses != expected || &arg.mode != tag.source() {
                        return fail(rule, "minor premise is not checked under the tag's lock");
                    }
                    if types_equal(mt, antecedent, &arg.formula)
                        && types_equal(mt, consequent, &tree.formula)
                    {
                        Ok(())
                    } else {
                        fail(rule, "formulas do not match the implication")
                    }
                }
                _ => fail(rule, "major premise is not an implication"),
            }
        }
        Rule::Inj => {
            arity(1)?;
            if !same_hyps(premise(0), &tree.hypotheses) {
                return fail(rule, "premise hypotheses differ");
            }
            match &tree.formula {
                TypeExpr::Sum(a, b)
                    if types_equal(mt, a, &premise(0).formula)
                        || types_equal(mt, b, &premise(0).formula) =>
                {
                    Ok(())
                }
                _ => fail(rule, "conclusion is not a disjunction containing the premise"),
            }
        }
        Rule::Case => {
            arity(3)?;
            if !same_hyps(premise(0), &tree.hypotheses) {
                return fail(rule, "scrutinee hypotheses differ");
            }
            let (a, b) = match &premise(0).formula {
                TypeExpr::Sum(a, b) => (a, b),
                _ => return fail(rule, "scrutinee is not a disjunction"),
            };
            let id = ModalityPath::identity(&tree.mode);
            for (arm, component) in [(premise(1), a), (premise(2), b)] {
                let expected = extended(
                    &tree.hypotheses,
                    EraseEntry::Hyp {
                        tag: id.clone(),
                        formula: (**component).clone(),
                    },
                );
                if !same_hyps(arm, &expected) || !types_equal(mt, &arm.formula, &tree.formula) {
                    return fail(rule, "case arm does not assume its disjunct");
                }
            }
            Ok(())
        }
        Rule::Mod => {
            arity(1)?;
            match &tree.formula {
                TypeExpr::Modal { tag, body } => {
                    let expected = extended(&tree.hypotheses, EraseEntry::Lock(tag.clone()));
                    if premise(0).hypotheses == expected
                        && &premise(0).mode == tag.source()
                        && types_equal(mt, body, &premise(0).formula)
                    {
                        Ok(())
                    } else {
                        fail(rule, "premise is not checked under the modality's lock")
                    }
                }
                _ => fail(rule, "conclusion is not a modal formula"),
            }
        }
        Rule::Let => {
            arity(2)?;
            // Major premise under some lock μ proving ⟨ν|A⟩; minor premise
            // assumes A tagged μ∘ν.
            let major = premise(0);
            let outer = match major.hypotheses.last() {
                Some(EraseEntry::Lock(tag))
                    if major.hypotheses[..major.hypotheses.len() - 1] == tree.hypotheses[..]
                        && &major.mode == tag.source()
                        && tag.target() == &tree.mode =>
                {
                    tag.clone()
                }
                _ => return fail(rule, "major premise is not checked under a lock"),
            };
            let (inner, elem) = match &major.formula {
                TypeExpr::Modal { tag, body } => (tag.clone(), (**body).clone()),
                _ => return fail(rule, "major premise is not a modal formula"),
            };
            let composite = mt.compose(&outer, &inner).map_err(|e| ShapeError {
                rule,
                message: e.to_string(),
            })?;
            let expected = extended(
                &tree.hypotheses,
                EraseEntry::Hyp {
                    tag: composite,
                    formula: elem,
                },
            );
            if same_hyps(premise(1), &expected)
                && types_equal(mt, &premise(1).formula, &tree.formula)
            {
                Ok(())
            } else {
                fail(rule, "minor premise does not assume the unboxed formula")
            }
        }
        Rule::Postulate => arity(0),
    }
}
