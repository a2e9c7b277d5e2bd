//! Finite Kripke models for second-order predicate logic: term evaluation,
//! forcing by the implication and quantifier clauses, validation of the
//! model conditions, full models over small posets, and a deterministic
//! bounded countermodel search.

pub mod corpus;
pub mod enumerate;
pub mod forcing;
pub mod model;

pub use enumerate::{enumerate_countermodel, full_model, interpretations, posets, Bounds, Countermodel, SearchError};
pub use forcing::{
    eval_formula_element, eval_term, forces, forcing_set, show_valuation, validate_model, valuations, EvalError,
    Violation,
};
pub use model::{Elem, KripkeModel, ModelError, ModelJson, State, StateSet, Valuation};
