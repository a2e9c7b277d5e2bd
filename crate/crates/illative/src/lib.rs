//! Illative combinatory logic: derivations in the systems `I0`, `Iω` and
//! `Iω^c`, a checker with exact hypothesis sets and budgeted equality side
//! conditions, elaboration of derived implication rules, weakening and cut,
//! and a bounded proof search.

pub mod check;
pub mod deriv;
pub mod elaborate;
pub mod random;
pub mod search;

pub use check::{check_illative, check_illative_with, dn_axiom, CheckConfig, CheckOutcome, RuleError};
pub use deriv::{FileError, IParams, IRule, IllativeDerivation, IllativeFile, IllativeJson, System};
pub use elaborate::{
    cut, elaborate_derived, elaborate_pe, elaborate_ph, elaborate_pi, subst_derivation, weaken, weaken_to, DerivedRule,
    ElabError,
};
pub use search::{search_proof, term_model_eval, term_model_eval_in, SearchConfig};
