//! Word rewriting for modality equations.
//!
//! Equations are oriented into shortlex-decreasing rules at load time. We
//! check local confluence on critical pairs and refuse ambiguous
//! presentations, so normal-form comparison decides the word problem for
//! every presentation accepted without the unsafe flag.

use super::{ModeTheory, ModeTheoryError};
use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

/// Three-valued verdict of a word-equality query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomVerdict {
    Equal,
    NotEqual,
    /// Bounded search gave out before deciding (unsafe presentations only).
    Unknown,
}

#[derive(Clone, Debug)]
pub(crate) struct Rewriter {
    /// Shortlex-decreasing rules, lhs -> rhs.
    rules: Vec<(Vec<String>, Vec<String>)>,
}

fn shortlex(a: &[String], b: &[String]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl Rewriter {
    /// Orient the presentation's equations. Returns `None` when there are no
    /// equations, or when orientation/confluence fails and `keep_unsafe` is
    /// set (word equality then falls back to bidirectional search).
    pub(crate) fn orient(
        mt: &ModeTheory,
        keep_unsafe: bool,
    ) -> Result<Option<Rewriter>, ModeTheoryError> {
        if mt.equations.is_empty() {
            return Ok(None);
        }
        let mut rules = Vec::new();
        for (lhs, rhs) in &mt.equations {
            let (l, r) = match shortlex(lhs, rhs) {
                Ordering::Greater => (lhs.clone(), rhs.clone()),
                Ordering::Less => (rhs.clone(), lhs.clone()),
                Ordering::Equal => continue, // trivial equation
            };
            if l.is_empty() {
                if keep_unsafe {
                    return Ok(None);
                }
                return Err(ModeTheoryError::BadRule(format!("{lhs:?} = {rhs:?}")));
            }
            rules.push((l, r));
        }
        if rules.is_empty() {
            return Ok(None);
        }
        let rw = Rewriter { rules };
        match rw.offending_critical_pair() {
            None => Ok(Some(rw)),
            Some(word) => {
                if keep_unsafe {
                    Ok(None)
                } else {
                    Err(ModeTheoryError::NotConfluent(word.join(".")))
                }
            }
        }
    }

    /// Leftmost, first-rule rewriting to normal form. Terminates because
    /// every rule is shortlex-decreasing.
    pub(crate) fn normalize(&self, word: &[String]) -> Vec<String> {
        let mut w = word.to_vec();
        'outer: loop {
            for pos in 0..=w.len() {
                for (lhs, rhs) in &self.rules {
                    if pos + lhs.len() <= w.len() && w[pos..pos + lhs.len()] == lhs[..] {
                        let mut next = w[..pos].to_vec();
                        next.extend(rhs.iter().cloned());
                        next.extend(w[pos + lhs.len()..].iter().cloned());
                        w = next;
                        continue 'outer;
                    }
                }
            }
            return w;
        }
    }

    /// Returns a superposition word whose two reducts do not join, if any.
    fn offending_critical_pair(&self) -> Option<Vec<String>> {
        for (i, (l1, r1)) in self.rules.iter().enumerate() {
            for (j, (l2, r2)) in self.rules.iter().enumerate() {
                // Proper overlaps: a nonempty suffix of l1 is a prefix of l2.
                for o in 1..l1.len() {
                    let k = l1.len() - o;
                    if k >= l2.len() {
                        continue;
                    }
                    if l1[o..] == l2[..k] {
                        let mut word = l1.clone();
                        word.extend(l2[k..].iter().cloned());
                        let mut red1 = r1.clone();
                        red1.extend(l2[k..].iter().cloned());
                        let mut red2 = l1[..o].to_vec();
                        red2.extend(r2.iter().cloned());
                        if self.normalize(&red1) != self.normalize(&red2) {
                            return Some(word);
                        }
                    }
                }
                // Containment: l2 occurs inside l1.
                if l2.len() <= l1.len() {
                    for p in 0..=(l1.len() - l2.len()) {
                        if i == j && p == 0 && l1.len() == l2.len() {
                            continue; // a rule trivially overlaps itself
                        }
                        if l1[p..p + l2.len()] == l2[..] {
                            let red1 = r1.clone();
                            let mut red2 = l1[..p].to_vec();
                            red2.extend(r2.iter().cloned());
                            red2.extend(l1[p + l2.len()..].iter().cloned());
                            if self.normalize(&red1) != self.normalize(&red2) {
                                return Some(l1.clone());
                            }
                        }
                    }
                }
            }
        }
        None
    }
}

const BIDI_DEPTH: usize = 4;
const BIDI_WORD_CAP: usize = 12;
const BIDI_NODE_CAP: usize = 4096;

/// Bounded bidirectional search for unsafe presentations: apply every
/// equation in both directions to both sides and look for a meet.
pub(crate) fn bidirectional_equal(
    equations: &[(Vec<String>, Vec<String>)],
    a: &[String],
    b: &[String],
) -> HomVerdict {
    if a == b {
        return HomVerdict::Equal;
    }
    let mut seen_a: BTreeSet<Vec<String>> = BTreeSet::new();
    let mut seen_b: BTreeSet<Vec<String>> = BTreeSet::new();
    let mut queue: VecDeque<(Vec<String>, bool, usize)> = VecDeque::new();
    seen_a.insert(a.to_vec());
    seen_b.insert(b.to_vec());
    queue.push_back((a.to_vec(), true, 0));
    queue.push_back((b.to_vec(), false, 0));
    let mut truncated = false;
    let mut nodes = 0usize;
    while let Some((w, from_a, depth)) = queue.pop_front() {
        if depth >= BIDI_DEPTH {
            truncated = true;
            continue;
        }
        for (lhs, rhs) in equations {
            for (pat, rep) in [(lhs, rhs), (rhs, lhs)] {
                if (pat.is_empty() && rep.is_empty()) || pat.len() > w.len() {
                    continue;
                }
                for pos in 0..=w.len() - pat.len() {
                    if w[pos..pos + pat.len()] != pat[..] {
                        continue;
                    }
                    let mut next = w[..pos].to_vec();
                    next.extend(rep.iter().cloned());
                    next.extend(w[pos + pat.len()..].iter().cloned());
                    if next.len() > BIDI_WORD_CAP {
                        truncated = true;
                        continue;
                    }
                    let (ours, theirs) = if from_a {
                        (&mut seen_a, &seen_b)
                    } else {
                        (&mut seen_b, &seen_a)
                    };
                    if theirs.contains(&next) {
                        return HomVerdict::Equal;
                    }
                    if ours.insert(next.clone()) {
                        nodes += 1;
                        if nodes > BIDI_NODE_CAP {
                            return HomVerdict::Unknown;
                        }
                        queue.push_back((next, from_a, depth + 1));
                    }
                }
            }
        }
    }
    if truncated {
        HomVerdict::Unknown
    } else {
        HomVerdict::NotEqual
    }
}
