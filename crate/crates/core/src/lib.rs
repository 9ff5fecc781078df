//! A proof checker and evaluator for a multimode, multimodal intuitionistic
//! logic parameterised by a mode theory (a presented strict 2-category).
//!
//! The crate is organised around the pipeline a checked module goes through:
//!
//! * [`mode_theory`] — modes, modality words, 2-cells, word rewriting, and
//!   2-cell search over a presentation.
//! * [`syntax`] — types, contexts, proof terms, the `.mml` parser and printer,
//!   the `Locks(-)` function and context normalisation.
//! * [`judgements`] — mode-indexed well-formedness of types and contexts.
//! * [`checker`] — syntax-directed checking of proof terms, producing
//!   replayable derivations and their logic-level erasures.
//! * [`metatheory`] — the admissible operations (weakening, exchange, lock
//!   weakening, substitution) and the β-operational semantics.
//! * [`generate`] — seeded generation of well-formed contexts and well-typed
//!   terms, used by the property suites.

pub mod checker;
pub mod generate;
pub mod judgements;
pub mod lex;
pub mod metatheory;
pub mod mode_theory;
pub mod module;
pub mod syntax;
