//! Embedding of second-order predicate logic into illative logic: the
//! translation of terms and formulas, the hypothesis context built from the
//! free variables and the signature, inhabitation witnesses for every type,
//! and a compiler turning natural-deduction derivations into checkable `I0`
//! derivations.

pub mod compile;
pub mod env;

pub use compile::{compile_proof, CompileError};
pub use env::{a_type, translate_term, TranslationEnv, SENTINEL_PREFIX};
