//! Second-order predicate logic: simple types, typed terms and formulas,
//! capture-avoiding substitution, and a checker for natural-deduction
//! derivations (with an optional classical double-negation axiom).
//!
//! Two grammar modes are supported: the restricted fragment, where function
//! arguments have base type and quantifiers range over base types and `o`,
//! and the full higher-order grammar.

pub mod corpus;
pub mod deriv;
pub mod error;
pub mod expr;
pub mod parse;
pub mod types;

pub use deriv::{
    check_derivation_mode, check_pred2_derivation, double_neg, DerivationFile, DerivationJson, Pred2Derivation,
    Pred2Params, Pred2Rule,
};
pub use error::{Pred2Error, RuleError};
pub use expr::{alpha_eq, formula_subst, Expr, Formula};
pub use parse::{parse_expr, parse_formula, parse_type, typecheck};
pub use types::{Mode, Signature, SignatureJson, SimpleType};
