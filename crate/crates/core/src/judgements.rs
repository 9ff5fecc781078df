//! Mode-indexed well-formedness of types and contexts.
//!
//! A type lives at a mode; each modal connective moves its body to the
//! source mode of its tag, so well-formedness checks every tag's target
//! against the ambient mode.  Atoms are mode-polymorphic by default; with
//! `strict_atoms` each atom must be used at a single mode throughout a
//! judgement.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::mode_theory::{ModeId, ModeTheory};
use crate::syntax::{Context, ContextEntry, TypeExpr};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WfOptions {
    /// Require each atomic proposition to be used at one mode only.
    pub strict_atoms: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WfError {
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    #[error("modality `{tag}` : {from_mode} -> {to_mode} cannot be used at mode `{mode}`")]
    ModalityBoundary {
        tag: String,
        from_mode: String,
        to_mode: String,
        mode: String,
    },
    #[error("atom p{atom} is used at mode `{second}` but was already used at mode `{first}`")]
    AtomMode {
        atom: usize,
        first: String,
        second: String,
    },
    #[error("duplicate variable `{0}` in context")]
    DuplicateVariable(String),
}

/// Tracks which mode each atom has been used at within one judgement.
#[derive(Clone, Debug, Default)]
pub struct AtomModes(BTreeMap<usize, ModeId>);

impl AtomModes {
    fn record(&mut self, atom: usize, mode: &ModeId, opts: WfOptions) -> Result<(), WfError> {
        if !opts.strict_atoms {
            return Ok(());
        }
        match self.0.get(&atom) {
            None => {
                self.0.insert(atom, mode.clone());
                Ok(())
            }
            Some(first) if first == mode => Ok(()),
            Some(first) => Err(WfError::AtomMode {
                atom,
                first: first.to_string(),
                second: mode.to_string(),
            }),
        }
    }
}

pub fn wf_type(
    mt: &ModeTheory,
    ty: &TypeExpr,
    mode: &ModeId,
    opts: WfOptions,
) -> Result<(), WfError> {
    let mut atoms = AtomModes::default();
    wf_type_at(mt, ty, mode, opts, &mut atoms)
}

pub fn wf_type_at(
    mt: &ModeTheory,
    ty: &TypeExpr,
    mode: &ModeId,
    opts: WfOptions,
    atoms: &mut AtomModes,
) -> Result<(), WfError> {
    if !mt.has_mode(mode) {
        return Err(WfError::UnknownMode(mode.to_string()));
    }
    match ty {
        TypeExpr::Atom(i) => atoms.record(*i, mode, opts),
        TypeExpr::Top | TypeExpr::Bot => Ok(()),
        TypeExpr::Prod(a, b) | TypeExpr::Sum(a, b) => {
            wf_type_at(mt, a, mode, opts, atoms)?;
            wf_type_at(mt, b, mode, opts, atoms)
        }
        TypeExpr::Impl {
            tag,
            antecedent,
            consequent,
        } => {
            check_tag(tag, mode)?;
            wf_type_at(mt, antecedent, tag.source(), opts, atoms)?;
            wf_type_at(mt, consequent, mode, opts, atoms)
        }
        TypeExpr::Modal { tag, body } => {
            check_tag(tag, mode)?;
            wf_type_at(mt, body, tag.source(), opts, atoms)
        }
    }
}

fn check_tag(tag: &crate::mode_theory::ModalityPath, mode: &ModeId) -> Result<(), WfError> {
    if tag.target() != mode {
        return Err(WfError::ModalityBoundary {
            tag: tag.to_string(),
            from_mode: tag.source().to_string(),
            to_mode: tag.target().to_string(),
            mode: mode.to_string(),
        });
    }
    Ok(())
}

pub fn wf_context(mt: &ModeTheory, ctx: &Context, opts: WfOptions) -> Result<(), WfError> {
    let mut atoms = AtomModes::default();
    wf_context_with(mt, ctx, opts, &mut atoms)
}

pub fn wf_context_with(
    mt: &ModeTheory,
    ctx: &Context,
    opts: WfOptions,
    atoms: &mut AtomModes,
) -> Result<(), WfError> {
    if !mt.has_mode(&ctx.mode) {
        return Err(WfError::UnknownMode(ctx.mode.to_string()));
    }
    let modes = ctx.modes_at();
    let mut seen = std::collections::BTreeSet::new();
    for (i, entry) in ctx.entries.iter().enumerate() {
        let here = &modes[i];
        if !mt.has_mode(here) {
            return Err(WfError::UnknownMode(here.to_string()));
        }
        match entry {
            ContextEntry::Bind { name, tag, ty } => {
                if !seen.insert(name.clone()) {
                    return Err(WfError::DuplicateVariable(name.clone()));
                }
                check_tag(tag, here)?;
                wf_type_at(mt, ty, tag.source(), opts, atoms)?;
            }
            ContextEntry::Lock(tag) => {
                check_tag(tag, here)?;
                // The mode to the right of the lock must be the tag's source.
                if tag.source() != &modes[i + 1] {
                    return Err(WfError::ModalityBoundary {
                        tag: tag.to_string(),
                        from_mode: tag.source().to_string(),
                        to_mode: tag.target().to_string(),
                        mode: modes[i + 1].to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Well-formedness of a whole judgement `Γ ⊢ _ : A`: the context and the
/// subject type, sharing one atom-mode table.
pub fn wf_judgement(
    mt: &ModeTheory,
    ctx: &Context,
    ty: &TypeExpr,
    opts: WfOptions,
) -> Result<(), WfError> {
    let mut atoms = AtomModes::default();
    wf_context_with(mt, ctx, opts, &mut atoms)?;
    wf_type_at(mt, ty, &ctx.mode, opts, &mut atoms)
}
