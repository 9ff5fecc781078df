//! Exact oracle for the walking-comonad mode theory.
//!
//! A 2-cell `□^n ⇒ □^m` is represented by a monotone map `[m] → [n]`,
//! vertical composition is function composition, and horizontal composition
//! is ordinal-sum pasting. Equality of maps decides the cell equations, which
//! is how the coherence laws of S4 become checkable.

use super::{Cell2, CellExpr, CellQueryResult, ModalityPath, ModeTheory, ModeTheoryError};
use serde::{Deserialize, Serialize};
use std::fmt;

/// An order-preserving function `[dom] → [cod]` where `[k] = {0, …, k-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneMap {
    pub dom: usize,
    pub cod: usize,
    pub map: Vec<usize>,
}

impl MonotoneMap {
    pub fn identity(n: usize) -> Self {
        MonotoneMap {
            dom: n,
            cod: n,
            map: (0..n).collect(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.map.len() == self.dom
            && self.map.iter().all(|&v| v < self.cod)
            && self.map.windows(2).all(|w| w[0] <= w[1])
    }

    /// `self ∘ other` as functions: apply `other`, then `self`.
    pub fn after(&self, other: &MonotoneMap) -> MonotoneMap {
        debug_assert_eq!(other.cod, self.dom);
        MonotoneMap {
            dom: other.dom,
            cod: self.cod,
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    /// Ordinal sum: `low` acts on the first block, `high` shifted above it.
    pub fn ordinal_sum(low: &MonotoneMap, high: &MonotoneMap) -> MonotoneMap {
        let mut map = low.map.clone();
        map.extend(high.map.iter().map(|&i| i + low.cod));
        MonotoneMap {
            dom: low.dom + high.dom,
            cod: low.cod + high.cod,
            map,
        }
    }
}

impl fmt::Display for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] -> [{}]: (", self.dom, self.cod)?;
        for (i, v) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}↦{v}")?;
        }
        write!(f, ")")
    }
}

/// Evaluate a cell of the walking comonad to its monotone map. A cell
/// `□^n ⇒ □^m` yields a map `[m] → [n]`.
#[allow(clippy::only_used_in_recursion)]
pub(crate) fn eval(mt: &ModeTheory, cell: &Cell2) -> Result<MonotoneMap, ModeTheoryError> {
    match &cell.expr {
        CellExpr::Gen(name) => match name.as_str() {
            // four : □ ⇒ □², the comultiplication: [2] → [1].
            "four" => Ok(MonotoneMap {
                dom: 2,
                cod: 1,
                map: vec![0, 0],
            }),
            // t : □ ⇒ 1, the counit: [0] → [1].
            "t" => Ok(MonotoneMap {
                dom: 0,
                cod: 1,
                map: vec![],
            }),
            other => Err(ModeTheoryError::UnknownCell(other.to_string())),
        },
        CellExpr::Id(p) => Ok(MonotoneMap::identity(p.len())),
        CellExpr::VComp(later, earlier) => {
            let e = eval(mt, earlier)?;
            let l = eval(mt, later)?;
            // earlier : μ ⇒ ν is a map [|ν|] → [|μ|]; later : ν ⇒ ξ is
            // [|ξ|] → [|ν|]. The composite μ ⇒ ξ applies later's map first.
            if l.cod != e.dom {
                return Err(ModeTheoryError::IllComposed(
                    "vertical composite of mismatched comonad cells".into(),
                ));
            }
            Ok(e.after(&l))
        }
        CellExpr::HComp(left, right) => {
            // Boundary words concatenate `right` (inner) below `left`.
            let l = eval(mt, left)?;
            let r = eval(mt, right)?;
            Ok(MonotoneMap::ordinal_sum(&r, &l))
        }
    }
}

/// Exact existence: a monotone map `[m] → [n]` exists iff `m = 0` or `n > 0`.
pub(crate) fn cell_exists(
    mt: &ModeTheory,
    from: &ModalityPath,
    to: &ModalityPath,
) -> CellQueryResult {
    let n = from.len();
    let m = to.len();
    if m == 0 || n > 0 {
        CellQueryResult::Found(canonical_witness(mt, from, to))
    } else {
        CellQueryResult::NotFound
    }
}

/// A canonical pasting `□^n ⇒ □^m`: contract to a single box with counits,
/// then duplicate with comultiplications (or finish with one more counit for
/// `m = 0`).
fn canonical_witness(mt: &ModeTheory, from: &ModalityPath, to: &ModalityPath) -> Cell2 {
    let n = from.len();
    let m = to.len();
    if n == m {
        return mt.id_cell(from);
    }
    let mode = from.source().clone();
    let boxes = |k: usize| {
        ModalityPath::raw(
            mode.clone(),
            mode.clone(),
            vec!["box".to_string(); k],
        )
    };
    let mut witness = mt.id_cell(from);
    let mut k = n;
    // Contract down to max(m, 1).
    while k > m.max(1) {
        let step = mt
            .hcomp(mt.id_cell(&boxes(k - 1)), mt.gen_cell("t").unwrap())
            .unwrap();
        witness = mt.simplify_cell(&mt.vcomp(step, witness).unwrap());
        k -= 1;
    }
    if m == 0 && k == 1 {
        witness = mt
            .simplify_cell(&mt.vcomp(mt.gen_cell("t").unwrap(), witness).unwrap());
        k = 0;
    }
    // Duplicate up to m.
    while k < m {
        let step = mt
            .hcomp(mt.id_cell(&boxes(k - 1)), mt.gen_cell("four").unwrap())
            .unwrap();
        witness = mt.simplify_cell(&mt.vcomp(step, witness).unwrap());
        k += 1;
    }
    witness
}

#[cfg(test)]
mod tests {
    use super::super::{builtin, SearchBudget};
    use super::*;

    fn boxes(mt: &ModeTheory, k: usize) -> ModalityPath {
        mt.path_from_word(
            &vec!["box".to_string(); k],
            Some(&super::super::ModeId::new("m")),
        )
        .unwrap()
    }

    #[test]
    fn counit_whiskers_compose_to_identity() {
        let mt = builtin("s4-comonad").unwrap();
        let four = mt.gen_cell("four").unwrap();
        let t = mt.gen_cell("t").unwrap();
        let id_box = mt.id_cell(&boxes(&mt, 1));

        let left = mt
            .vcomp(mt.hcomp(t.clone(), id_box.clone()).unwrap(), four.clone())
            .unwrap();
        let right = mt
            .vcomp(mt.hcomp(id_box.clone(), t).unwrap(), four)
            .unwrap();
        let e1 = eval(&mt, &left).unwrap();
        let e2 = eval(&mt, &right).unwrap();
        let id = MonotoneMap::identity(1);
        assert_eq!(e1, id);
        assert_eq!(e2, id);
    }

    #[test]
    fn comultiplication_is_coassociative() {
        let mt = builtin("s4-comonad").unwrap();
        let four = || mt.gen_cell("four").unwrap();
        let id_box = mt.id_cell(&boxes(&mt, 1));
        let a = mt
            .vcomp(mt.hcomp(four(), id_box.clone()).unwrap(), four())
            .unwrap();
        let b = mt.vcomp(mt.hcomp(id_box, four()).unwrap(), four()).unwrap();
        assert_eq!(eval(&mt, &a).unwrap(), eval(&mt, &b).unwrap());
        assert_eq!(eval(&mt, &a).unwrap().dom, 3);
        assert_eq!(eval(&mt, &a).unwrap().cod, 1);
    }

    #[test]
    fn existence_matches_monotone_map_formula() {
        let mt = builtin("s4-comonad").unwrap();
        // □ ⇒ □² exists; □⁰ ⇒ □ does not.
        assert!(mt
            .cell_exists(&boxes(&mt, 1), &boxes(&mt, 2), SearchBudget::default())
            .unwrap()
            .is_found());
        assert_eq!(
            mt.cell_exists(&boxes(&mt, 0), &boxes(&mt, 1), SearchBudget::default())
                .unwrap(),
            CellQueryResult::NotFound
        );
    }

    #[test]
    fn canonical_witnesses_have_the_right_boundary_and_map() {
        let mt = builtin("s4-comonad").unwrap();
        for n in 0..5usize {
            for m in 0..5usize {
                let r = mt
                    .cell_exists(&boxes(&mt, n), &boxes(&mt, m), SearchBudget::default())
                    .unwrap();
                if m == 0 || n > 0 {
                    let cell = match r {
                        CellQueryResult::Found(c) => c,
                        other => panic!("({n},{m}) expected Found, got {other:?}"),
                    };
                    let (f, t) = mt.cell_boundary(&cell).unwrap();
                    assert_eq!(f.len(), n);
                    assert_eq!(t.len(), m);
                    let map = eval(&mt, &cell).unwrap();
                    assert_eq!(map.dom, m);
                    assert_eq!(map.cod, n);
                    assert!(map.is_valid());
                } else {
                    assert_eq!(r, CellQueryResult::NotFound);
                }
            }
        }
    }
}
