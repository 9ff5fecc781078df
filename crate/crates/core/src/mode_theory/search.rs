//! Breadth-first 2-cell search for free (and rewriting-normalised)
//! presentations.
//!
//! Every generating cell `θ ⇒ ξ` may rewrite any boundary-compatible subword
//! of the current modality word; the untouched prefix and suffix become
//! identity whiskers of the step's witness. `NotFound` is only reported when
//! the reachable set was exhausted without hitting a budget cap.

use super::{Cell2, CellQueryResult, ModalityPath, ModeTheory, SearchBudget};
use std::collections::{BTreeSet, VecDeque};

pub(crate) fn breadth_first(
    mt: &ModeTheory,
    from: &ModalityPath,
    to: &ModalityPath,
    budget: SearchBudget,
) -> CellQueryResult {
    let start = mt.normalize_path(from);
    let goal = mt.normalize_path(to);

    let mut visited: BTreeSet<Vec<String>> = BTreeSet::new();
    visited.insert(start.word().to_vec());
    // Queue entries carry the witness from `from` to the current word.
    let mut queue: VecDeque<(ModalityPath, Cell2, usize)> = VecDeque::new();
    queue.push_back((start.clone(), mt.id_cell(&start), 0));
    let mut truncated = false;

    while let Some((word, witness, depth)) = queue.pop_front() {
        if depth >= budget.max_depth {
            truncated = true;
            continue;
        }
        for gen in mt.cell_generators() {
            let pat = gen.from.word();
            let positions = word.len().saturating_sub(pat.len());
            for pos in 0..=positions {
                if pat.len() + pos > word.len() || word.word()[pos..pos + pat.len()] != pat[..] {
                    continue;
                }
                // Boundary sanity: for an empty pattern, the insertion point
                // must sit at the pattern's mode.
                if pat.is_empty() && !insertion_mode_matches(mt, &word, pos, &gen.from) {
                    continue;
                }
                let step = match step_cell(mt, &word, pos, pat.len(), gen.name.as_str()) {
                    Some(s) => s,
                    None => continue,
                };
                let (_, next_path) = step.boundary();
                let next_path = mt.normalize_path(next_path);
                if next_path.len() > budget.max_word_len {
                    truncated = true;
                    continue;
                }
                if !visited.insert(next_path.word().to_vec()) {
                    continue;
                }
                let combined = match mt.vcomp(step, witness.clone()) {
                    Ok(c) => mt.simplify_cell(&c),
                    Err(_) => continue,
                };
                if mt.hom_equal(&next_path, &goal) {
                    return CellQueryResult::Found(combined);
                }
                queue.push_back((next_path, combined, depth + 1));
            }
        }
    }

    if truncated {
        CellQueryResult::Unknown
    } else {
        CellQueryResult::NotFound
    }
}

/// Mode at position `pos` within `path`'s word (counting from the source end).
fn mode_at(mt: &ModeTheory, path: &ModalityPath, pos: usize) -> Option<super::ModeId> {
    if pos == 0 {
        return Some(path.source().clone());
    }
    let gen = mt.generator(&path.word()[pos - 1])?;
    Some(gen.target.clone())
}

fn insertion_mode_matches(
    mt: &ModeTheory,
    path: &ModalityPath,
    pos: usize,
    pattern: &ModalityPath,
) -> bool {
    mode_at(mt, path, pos)
        .map(|m| m == *pattern.source())
        .unwrap_or(false)
}

/// The one-step witness rewriting `word[pos..pos+len]` by cell `gen`:
/// `id_suffix ∗ (gen ∗ id_prefix)`.
fn step_cell(
    mt: &ModeTheory,
    word: &ModalityPath,
    pos: usize,
    len: usize,
    gen: &str,
) -> Option<Cell2> {
    let cell = mt.gen_cell(gen).ok()?;
    let prefix_source = word.source().clone();
    let prefix_target = mode_at(mt, word, pos)?;
    let suffix_source = mode_at(mt, word, pos + len)?;
    let prefix = ModalityPath {
        source: prefix_source,
        target: prefix_target,
        word: word.word()[..pos].to_vec(),
    };
    let suffix = ModalityPath {
        source: suffix_source,
        target: word.target().clone(),
        word: word.word()[pos + len..].to_vec(),
    };
    let inner = mt.hcomp(cell, mt.id_cell(&prefix)).ok()?;
    let whole = mt.hcomp(mt.id_cell(&suffix), inner).ok()?;
    Some(mt.simplify_cell(&whole))
}

impl ModalityPath {
    pub(crate) fn raw(source: super::ModeId, target: super::ModeId, word: Vec<String>) -> Self {
        ModalityPath {
            source,
            target,
            word,
        }
    }
}
