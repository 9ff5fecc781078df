//! The acceptance gate: one test per criterion, each printing a PASS/FAIL
//! line (visible with `--nocapture`; a FAIL also fails the test).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use modal_core::checker::{elaborated_term, replay, CheckOptions, Checker, TypeError};
use modal_core::generate::{term_size, Generator};
use modal_core::judgements::WfOptions;
use modal_core::metatheory::{beta_step, exchange, lock_weaken, substitute, Telescope};
use modal_core::mode_theory::{builtin, CellQueryResult, ModalityPath, SearchBudget};
use modal_core::module::{load_program, LoadOptions};
use modal_core::syntax::locks_of;
use modal_core::syntax::parse::parse_mml;
use modal_core::syntax::print::print_module;
use modal_core::syntax::resolve::resolve_module;
use modal_core::syntax::{Context, ContextEntry, Term};

const THEORIES: &[&str] = &[
    "k",
    "k4-free",
    "t-free",
    "s4-comonad",
    "s4-idem",
    "int-cl",
    "epistemic",
    "doxastic",
];

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn verdict(criterion: &str, ok: bool) {
    println!(
        "acceptance: {criterion}: {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "{criterion} failed");
}

#[test]
fn criterion_1_paper_proof_corpus() {
    let started = Instant::now();
    let positive = [
        ("k.mml", vec!["intro", "k_impl", "k_conj_fwd", "k_conj_bwd", "conj_elim"]),
        ("k4.mml", vec!["ax4"]),
        ("s4-idem.mml", vec!["ax4"]),
        ("s4.mml", vec!["extract", "introspect", "introspect_inferred"]),
        ("int-cl.mml", vec!["lem", "decide"]),
    ];
    let mut ok = true;
    for (file, decls) in &positive {
        let prog = load_program(&corpus(file), LoadOptions::default()).unwrap();
        for name in decls {
            let found = prog
                .decls
                .iter()
                .find(|d| d.name == *name)
                .is_some_and(|d| d.outcome.is_ok());
            if !found {
                eprintln!("{file}: {name} did not check");
                ok = false;
            }
        }
    }
    // The LEM postulate is rejected at the intuitionistic mode.
    let at_int = load_program(&corpus("negative/lem-at-int.mml"), LoadOptions::default()).unwrap();
    ok &= at_int.decls.iter().any(|d| {
        d.name == "lem" && matches!(d.outcome, Err(TypeError::NotClassical(_)))
    });
    let elapsed = started.elapsed();
    ok &= elapsed.as_secs_f64() < 1.0;
    if elapsed.as_secs_f64() >= 1.0 {
        eprintln!("corpus took {elapsed:?}, budget is 1 s");
    }
    verdict("criterion 1 (paper-proof corpus checks in under 1 s)", ok);
}

#[test]
fn criterion_2_negative_corpus() {
    let mut ok = true;

    // (a) axiom 4 is rejected in the free theory with a decisive NotFound.
    let bad = load_program(&corpus("negative/bad-cell.mml"), LoadOptions::default()).unwrap();
    ok &= bad.decls.iter().any(|d| {
        matches!(
            d.outcome,
            Err(TypeError::CellMissing { decisive: true, .. })
        )
    });

    // (b) <IntProv|p0> -> p0 is ill-formed at cl under strict atom modes.
    let strict = LoadOptions {
        check: CheckOptions {
            wf: WfOptions { strict_atoms: true },
            ..CheckOptions::default()
        },
        unsafe_rewriting: false,
    };
    let illformed = load_program(&corpus("negative/ill-formed.mml"), strict).unwrap();
    ok &= illformed
        .decls
        .iter()
        .any(|d| matches!(d.outcome, Err(TypeError::Wf(_))));

    // (c) Weakening cannot insert a lock: the API takes a VarBind (name,
    // tag, type) only, and exchange refuses to move a lock.  The shape is a
    // compile-time guarantee; the runtime half is checked here.
    let mt = builtin("k").unwrap();
    let checker = Checker::new(&mt, CheckOptions::default());
    let b = mt.generator_path("box").unwrap();
    let ctx = Context::empty(b.target().clone())
        .bind("x", ModalityPath::identity(b.target()), modal_core::syntax::TypeExpr::Atom(0))
        .lock(b.clone());
    let id_inner = ModalityPath::identity(&ctx.mode);
    let term = Term::lam(
        "z",
        id_inner.clone(),
        modal_core::syntax::TypeExpr::Atom(1),
        Term::var("z"),
    );
    let ty = modal_core::syntax::TypeExpr::impl_(
        id_inner,
        modal_core::syntax::TypeExpr::Atom(1),
        modal_core::syntax::TypeExpr::Atom(1),
    );
    ok &= exchange(&checker, &ctx, 0, &term, &ty).is_err();

    verdict("criterion 2 (negative corpus and lock-free weakening API)", ok);
}

#[test]
fn criterion_3_walking_comonad_coherence() {
    let mt = builtin("s4-comonad").unwrap();
    let b = mt.generator_path("box").unwrap();
    let four = mt.gen_cell("four").unwrap();
    let t = mt.gen_cell("t").unwrap();
    let id_b = mt.id_cell(&b);

    // (T ∗ 1_□) ∘ 4, (1_□ ∗ T) ∘ 4, and 1_□ all evaluate to the same map.
    let left = mt
        .vcomp(mt.hcomp(t.clone(), id_b.clone()).unwrap(), four.clone())
        .unwrap();
    let right = mt
        .vcomp(mt.hcomp(id_b.clone(), t.clone()).unwrap(), four.clone())
        .unwrap();
    let m_left = mt.comonad_map(&left).unwrap();
    let m_right = mt.comonad_map(&right).unwrap();
    let m_id = mt.comonad_map(&id_b).unwrap();
    let mut ok = m_left == m_id && m_right == m_id;

    // (4 ∗ 1_□) ∘ 4 = (1_□ ∗ 4) ∘ 4 as maps [3] → [1].
    let assoc_l = mt
        .vcomp(mt.hcomp(four.clone(), id_b.clone()).unwrap(), four.clone())
        .unwrap();
    let assoc_r = mt
        .vcomp(mt.hcomp(id_b.clone(), four.clone()).unwrap(), four.clone())
        .unwrap();
    let m_l = mt.comonad_map(&assoc_l).unwrap();
    let m_r = mt.comonad_map(&assoc_r).unwrap();
    ok &= m_l == m_r && m_l.dom == 3 && m_l.cod == 1;

    verdict("criterion 3 (walking-comonad coherence, exact)", ok);
}

/// All monotone maps from the ordinal [dom] to [cod].
fn monotone_maps(dom: usize, cod: usize) -> Vec<Vec<usize>> {
    fn go(remaining: usize, cod: usize, min: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        for v in min..cod {
            acc.push(v);
            go(remaining - 1, cod, v, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if dom == 0 {
        out.push(Vec::new());
    } else {
        go(dom, cod, 0, &mut Vec::new(), &mut out);
    }
    out
}

#[test]
fn criterion_4_cell_search_matches_brute_force() {
    let mt = builtin("s4-comonad").unwrap();
    let b = mt.generator_path("box").unwrap();
    let power = |k: usize| {
        let mut acc = ModalityPath::identity(b.target());
        for _ in 0..k {
            acc = mt.compose(&acc, &b).unwrap();
        }
        acc
    };
    let budget = SearchBudget::default();
    let mut ok = true;
    let mut cases = 0;
    for n in 0..=5usize {
        for m in 0..=5usize {
            // A cell □^n ⇒ □^m corresponds to a monotone map [m] → [n].
            let expected = !monotone_maps(m, n).is_empty();
            let got = mt.cell_exists(&power(n), &power(m), budget).unwrap();
            let found = matches!(got, CellQueryResult::Found(_));
            let agrees = match got {
                CellQueryResult::Found(_) => expected,
                CellQueryResult::NotFound => !expected,
                CellQueryResult::Unknown => false,
            };
            // Cross-check the closed form from the ordinal description.
            let closed_form = n > 0 || m == 0;
            if !agrees || expected != closed_form {
                eprintln!("n={n} m={m}: expected {expected}, found={found}");
                ok = false;
            }
            cases += 1;
        }
    }
    ok &= cases == 36;
    verdict("criterion 4 (cell search matches brute-force enumeration, 36 cases)", ok);
}

#[test]
fn criterion_5_locks_homomorphism() {
    let mut ok = true;
    for theory in THEORIES {
        let mt = builtin(theory).unwrap();
        let mut gen = Generator::new(&mt, 0xC5);
        for _ in 0..1000 {
            let mode = gen.mode();
            let gamma = gen.context(&mode, 4);
            let both = gen.context_from(&gamma, 4);
            let delta_entries = &both.entries[gamma.entries.len()..];
            let whole = locks_of(&mt, &both.entries, &both.modes_at()[0]).unwrap();
            let g = locks_of(&mt, &gamma.entries, &gamma.modes_at()[0]).unwrap();
            let d = locks_of(&mt, delta_entries, &gamma.mode).unwrap();
            let composed = mt.compose(&g, &d).unwrap();
            if !mt.hom_equal(&whole, &composed) {
                eprintln!("{theory}: locks({both}) != locks(Γ)∘locks(Δ)");
                ok = false;
            }
        }
    }
    verdict("criterion 5 (locks are a homomorphism, 1000 pairs per theory)", ok);
}

#[test]
fn criterion_6_metatheorem_property_suite() {
    let started = Instant::now();
    let mut ok = true;
    for theory in THEORIES {
        let mt = builtin(theory).unwrap();
        let checker = Checker::new(&mt, CheckOptions::default());
        let mut gen = Generator::new(&mt, 0xC6);
        let cells: Vec<_> = mt
            .cell_generators()
            .iter()
            .map(|c| mt.gen_cell(&c.name).unwrap())
            .collect();
        for round in 0..500usize {
            let mode = gen.mode();
            let ctx = gen.context(&mode, 3);
            let (term, ty) = gen.typed_term(&ctx, 12);
            if term_size(&term) > 12 || checker.check(&ctx, &term, &ty).is_err() {
                eprintln!("{theory}: generator produced a bad term");
                ok = false;
                continue;
            }

            // Theorem lockwk: weaken a lock along a generating cell (or the
            // identity cell in free theories) and re-check.
            let alpha = if cells.is_empty() {
                mt.id_cell(&gen.path_into(&mode, 2))
            } else {
                cells[round % cells.len()].clone()
            };
            let base = gen.context(alpha.from.target(), 2);
            let premise = base.lock(alpha.from.clone());
            let (m, a) = gen.typed_term(&premise, 10);
            let weakened = lock_weaken(
                &mt,
                &m,
                &Telescope::from(&base),
                &alpha,
                &Telescope::empty(premise.mode.clone()),
            );
            let conclusion = base.lock(alpha.to.clone());
            match weakened {
                Ok(out) => {
                    if checker.check(&conclusion, &out, &a).is_err() {
                        eprintln!("{theory}: lock_weaken output failed to re-check");
                        ok = false;
                    }
                }
                Err(e) => {
                    eprintln!("{theory}: lock_weaken failed: {e}");
                    ok = false;
                }
            }

            // Theorem cut: substitute a term for a variable and re-check.
            let id = ModalityPath::identity(&ctx.mode);
            let cut_m = if checker.infer(&ctx, &term).is_ok() {
                term.clone()
            } else {
                // Checking-only terms get an identity-redex annotation so
                // they stay typeable in inference positions.
                Term::app(
                    Term::lam("ann", id.clone(), ty.clone(), Term::var("ann")),
                    id.clone(),
                    term.clone(),
                )
            };
            let inner = ctx.bind("cutvar", id.clone(), ty.clone());
            let (n, b_ty) = gen.typed_term(&inner, 10);
            match substitute(&mt, &n, "cutvar", &cut_m, &id, &Telescope::from(&ctx)) {
                Ok(out) => {
                    if checker.check(&ctx, &out, &b_ty).is_err() {
                        eprintln!("{theory}: cut output failed to re-check");
                        ok = false;
                    }
                }
                Err(e) => {
                    eprintln!("{theory}: substitute failed: {e}");
                    ok = false;
                }
            }

            // Theorem structf: adjacent Bind exchange preserves checkability.
            for i in 0..ctx.entries.len().saturating_sub(1) {
                let both_binds = matches!(ctx.entries[i], ContextEntry::Bind { .. })
                    && matches!(ctx.entries[i + 1], ContextEntry::Bind { .. });
                if both_binds && exchange(&checker, &ctx, i, &term, &ty).is_err() {
                    eprintln!("{theory}: exchange at {i} failed to re-check");
                    ok = false;
                }
            }

            // Subject reduction: every β-step preserves the checked type.
            if let Ok(derivation) = checker.check(&ctx, &term, &ty) {
                let mut current = elaborated_term(&derivation);
                let tele = Telescope::from(&ctx);
                for _ in 0..16 {
                    match beta_step(&mt, &tele, &current, false) {
                        Ok(None) => break,
                        Ok(Some((next, _, _))) => {
                            if checker.check(&ctx, &next, &ty).is_err() {
                                eprintln!("{theory}: subject reduction failed on {next}");
                                ok = false;
                                break;
                            }
                            current = next;
                        }
                        Err(e) => {
                            eprintln!("{theory}: beta_step failed: {e}");
                            ok = false;
                            break;
                        }
                    }
                }
            }
        }
    }
    let elapsed = started.elapsed();
    if elapsed.as_secs() >= 60 {
        eprintln!("metatheorem suite took {elapsed:?}, budget is 60 s");
        ok = false;
    }
    verdict(
        "criterion 6 (metatheorems over 500 generated terms per theory, under 60 s)",
        ok,
    );
}

#[test]
fn criterion_7_round_trips() {
    let mut ok = true;
    let files = [
        "k.mml",
        "k4.mml",
        "s4.mml",
        "s4-idem.mml",
        "int-cl.mml",
        "eval.mml",
    ];
    for file in &files {
        let prog = load_program(&corpus(file), LoadOptions::default()).unwrap();
        // parse ∘ print is the identity on the resolved module.
        let printed = print_module(&prog.module);
        match parse_mml(&printed).and_then(|s| resolve_module(&prog.theory, &s)) {
            Ok(reparsed) => {
                // Compare the declarations themselves; source positions
                // necessarily change across a re-print.
                let strip = |m: &modal_core::syntax::resolve::Module| {
                    (
                        m.postulates
                            .iter()
                            .map(|p| (p.name.clone(), p.scheme.clone(), p.mode.clone()))
                            .collect::<Vec<_>>(),
                        m.thms
                            .iter()
                            .map(|t| (t.name.clone(), t.ty.clone(), t.mode.clone(), t.term.clone()))
                            .collect::<Vec<_>>(),
                    )
                };
                if strip(&reparsed) != strip(&prog.module) {
                    eprintln!("{file}: print/parse round trip changed the module");
                    ok = false;
                }
            }
            Err(e) => {
                eprintln!("{file}: printed module failed to re-parse: {e}");
                ok = false;
            }
        }
        // Every emitted derivation replays after a JSON round trip.
        let postulates: BTreeMap<_, _> = prog
            .module
            .postulates
            .iter()
            .map(|p| (p.name.clone(), (p.scheme.clone(), p.mode.clone())))
            .collect();
        for decl in &prog.decls {
            if let Ok(Some(derivation)) = &decl.outcome {
                let json = serde_json::to_string(derivation).unwrap();
                let back: modal_core::checker::Derivation = serde_json::from_str(&json).unwrap();
                if back != *derivation || replay(&prog.theory, &postulates, &back).is_err() {
                    eprintln!("{file}: derivation for {} failed replay", decl.name);
                    ok = false;
                }
            }
        }
    }
    verdict("criterion 7 (print/parse and JSON-replay round trips)", ok);
}
