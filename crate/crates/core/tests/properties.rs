//! Property suites for the mode-theory engine and the syntax layer.

use modal_core::generate::Generator;
use modal_core::mode_theory::{
    builtin, BuildOptions, CellQueryResult, ModalityPath, ModeTheory, Presentation, SearchBudget,
};
use modal_core::syntax::{locks_of, Context};
use proptest::prelude::*;

/// A two-mode theory with several generators, to exercise composition off
/// the single-mode beaten path.
fn two_mode_theory() -> ModeTheory {
    Presentation::new()
        .mode("a")
        .mode("b")
        .modality("f", "a", "b")
        .modality("g", "b", "a")
        .modality("h", "a", "a")
        .equation(&["h", "h"], &["h"])
        .build(BuildOptions::default())
        .unwrap()
}

fn theories() -> Vec<ModeTheory> {
    let mut out: Vec<ModeTheory> = ["k", "k4-free", "t-free", "s4-comonad", "s4-idem", "int-cl"]
        .iter()
        .map(|n| builtin(n).unwrap())
        .collect();
    out.push(two_mode_theory());
    out
}

proptest! {
    #[test]
    fn compose_is_associative(seed in any::<u64>()) {
        for mt in theories() {
            let mut gen = Generator::new(&mt, seed);
            let target = gen.mode();
            let a = gen.path_into(&target, 3);
            let b = gen.path_into(&a.source().clone(), 3);
            let c = gen.path_into(&b.source().clone(), 3);
            let left = mt.compose(&mt.compose(&a, &b).unwrap(), &c).unwrap();
            let right = mt.compose(&a, &mt.compose(&b, &c).unwrap()).unwrap();
            prop_assert!(mt.hom_equal(&left, &right));
        }
    }

    #[test]
    fn identity_is_a_unit_for_compose(seed in any::<u64>()) {
        for mt in theories() {
            let mut gen = Generator::new(&mt, seed);
            let target = gen.mode();
            let p = gen.path_into(&target, 4);
            let lid = ModalityPath::identity(p.target());
            let rid = ModalityPath::identity(p.source());
            prop_assert!(mt.hom_equal(&mt.compose(&lid, &p).unwrap(), &p));
            prop_assert!(mt.hom_equal(&mt.compose(&p, &rid).unwrap(), &p));
        }
    }

    #[test]
    fn hom_equal_is_an_equivalence(seed in any::<u64>()) {
        for mt in theories() {
            let mut gen = Generator::new(&mt, seed);
            let target = gen.mode();
            let a = gen.path_into(&target, 4);
            let b = gen.path_into(&target, 4);
            let c = gen.path_into(&target, 4);
            prop_assert!(mt.hom_equal(&a, &a));
            prop_assert_eq!(mt.hom_equal(&a, &b), mt.hom_equal(&b, &a));
            if mt.hom_equal(&a, &b) && mt.hom_equal(&b, &c) {
                prop_assert!(mt.hom_equal(&a, &c));
            }
        }
    }

    #[test]
    fn cell_search_is_deterministic_and_witnesses_are_parallel(seed in any::<u64>()) {
        let budget = SearchBudget::default();
        for mt in theories() {
            let mut gen = Generator::new(&mt, seed);
            let target = gen.mode();
            let from = gen.path_into(&target, 3);
            let to = gen.path_into(&target, 3);
            if from.source() != to.source() {
                continue;
            }
            let first = mt.cell_exists(&from, &to, budget).unwrap();
            let second = mt.cell_exists(&from, &to, budget).unwrap();
            prop_assert_eq!(&first, &second);
            if let CellQueryResult::Found(cell) = first {
                prop_assert!(mt.hom_equal(&cell.from, &from));
                prop_assert!(mt.hom_equal(&cell.to, &to));
            }
        }
    }

    #[test]
    fn locks_distribute_over_context_concatenation(seed in any::<u64>()) {
        for mt in theories() {
            let mut gen = Generator::new(&mt, seed);
            let mode = gen.mode();
            let gamma = gen.context(&mode, 4);
            let both = gen.context_from(&gamma, 4);
            let delta_entries = &both.entries[gamma.entries.len()..];

            let whole = locks_of(&mt, &both.entries, &both.modes_at()[0]).unwrap();
            let gamma_locks = locks_of(&mt, &gamma.entries, &gamma.modes_at()[0]).unwrap();
            let delta_locks = locks_of(&mt, delta_entries, &gamma.mode).unwrap();
            let composed = mt.compose(&gamma_locks, &delta_locks).unwrap();
            prop_assert!(mt.hom_equal(&whole, &composed));
        }
    }
}

#[test]
fn interchange_holds_in_the_comonad_oracle() {
    let mt = builtin("s4-comonad").unwrap();
    let b = mt.generator_path("box").unwrap();
    let bb = mt.compose(&b, &b).unwrap();
    let four = mt.gen_cell("four").unwrap();
    let t = mt.gen_cell("t").unwrap();

    // A small closed set of cells to draw interchange squares from.
    let mut cells = vec![
        four.clone(),
        t.clone(),
        mt.id_cell(&ModalityPath::identity(b.target())),
        mt.id_cell(&b),
        mt.id_cell(&bb),
        mt.hcomp(four.clone(), mt.id_cell(&b)).unwrap(),
        mt.hcomp(mt.id_cell(&b), four.clone()).unwrap(),
        mt.hcomp(t.clone(), mt.id_cell(&b)).unwrap(),
        mt.hcomp(mt.id_cell(&b), t.clone()).unwrap(),
    ];
    cells.push(mt.vcomp(cells[5].clone(), four.clone()).unwrap());

    let mut squares = 0;
    for a in &cells {
        for b2 in &cells {
            if !mt.hom_equal(&a.to, &b2.from) {
                continue;
            }
            for c in &cells {
                for d in &cells {
                    if !mt.hom_equal(&c.to, &d.from) {
                        continue;
                    }
                    // (b∘a) ∗ (d∘c) versus (b∗d) ∘ (a∗c)
                    let lhs = mt
                        .hcomp(
                            mt.vcomp(b2.clone(), a.clone()).unwrap(),
                            mt.vcomp(d.clone(), c.clone()).unwrap(),
                        )
                        .unwrap();
                    let rhs = mt
                        .vcomp(
                            mt.hcomp(b2.clone(), d.clone()).unwrap(),
                            mt.hcomp(a.clone(), c.clone()).unwrap(),
                        )
                        .unwrap();
                    assert_eq!(
                        mt.comonad_map(&lhs).unwrap(),
                        mt.comonad_map(&rhs).unwrap()
                    );
                    squares += 1;
                }
            }
        }
    }
    assert!(squares > 100, "only {squares} interchange squares sampled");
}

#[test]
fn free_theory_hom_sets_are_box_powers() {
    // In the free single-generator theory every endo-path is some power of
    // the generator, and distinct powers are distinct.
    let mt = builtin("k").unwrap();
    let b = mt.generator_path("box").unwrap();
    let mut powers = vec![ModalityPath::identity(b.target())];
    for _ in 0..5 {
        let next = mt.compose(powers.last().unwrap(), &b).unwrap();
        powers.push(next);
    }
    for (i, p) in powers.iter().enumerate() {
        for (j, q) in powers.iter().enumerate() {
            assert_eq!(mt.hom_equal(p, q), i == j);
        }
    }
}

#[test]
fn generated_contexts_normalize_stably() {
    use modal_core::syntax::normalize_context;
    for mt in theories() {
        let mut gen = Generator::new(&mt, 3);
        for _ in 0..50 {
            let mode = gen.mode();
            let ctx = gen.context(&mode, 6);
            let once = normalize_context(&mt, &ctx).unwrap();
            let twice = normalize_context(&mt, &once).unwrap();
            assert_eq!(once, twice);
            // Normalization preserves the total lock composite.
            let before = locks_of(&mt, &ctx.entries, &ctx.modes_at()[0]).unwrap();
            let after = locks_of(&mt, &once.entries, &once.modes_at()[0]).unwrap();
            assert!(mt.hom_equal(&before, &after));
        }
    }
}

#[test]
fn unsafe_rewriting_falls_back_to_bounded_search() {
    // h.k = h and k.h = k orient to a non-confluent system (the overlap
    // h.k.h rewrites to both h.h and h); with the escape hatch the theory
    // still answers easy equalities instead of refusing to build.
    let pres = Presentation::new()
        .mode("m")
        .modality("h", "m", "m")
        .modality("k", "m", "m")
        .equation(&["h", "k"], &["h"])
        .equation(&["k", "h"], &["k"]);
    assert!(pres.clone().build(BuildOptions::default()).is_err());
    let mt = pres
        .build(BuildOptions {
            unsafe_rewriting: true,
        })
        .unwrap();
    assert!(!mt.rewriting_is_safe());
    let h = mt.generator_path("h").unwrap();
    assert!(mt.hom_equal(&h, &h));
}

#[test]
fn empty_context_is_well_formed_everywhere() {
    for mt in theories() {
        for mode in mt.modes() {
            let ctx = Context::empty(mode.clone());
            modal_core::judgements::wf_context(&mt, &ctx, Default::default()).unwrap();
        }
    }
}
