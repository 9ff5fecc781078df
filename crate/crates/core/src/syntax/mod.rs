//! Abstract syntax, concrete parser, and printer for types, contexts, and
//! proof terms, plus the `Locks(-)` function and context normalisation.

mod ast;
pub mod parse;
pub mod print;
pub mod resolve;

pub use ast::*;
