//! Untyped λ-terms over an extensible constant signature.
//!
//! Terms are stored namelessly (de Bruijn indices for bound variables, names
//! for free variables) with binder display names retained for printing, so
//! α-equivalence is structural equality. The crate provides capture-avoiding
//! substitution, budgeted leftmost-outermost βη-reduction, n-ary contexts
//! and the abbreviation layer (`I`, `S`, `K`, `H`, `⊃`, `F`, `⊥`) which is
//! expanded at parse time.

pub mod context;
pub mod parse;
pub mod print;
pub mod reduce;
pub mod sugar;
pub mod term;
pub mod verdict;

pub use context::{fill_context, Context, ContextError, FillMode};
pub use parse::{expand_abbrev, parse, parse_term, ParseEnv, ParseError};
pub use print::{print, print_raw, Printer};
pub use reduce::{beta_eta_equal, beta_eta_normalize, BudgetExhausted, ReductionBudget};
pub use term::{alpha_eq, Const, Kind, Term};
pub use verdict::Verdict;

/// Generate a name with prefix `base` not in `avoid`.
pub fn fresh_name(base: &str, avoid: &dyn Fn(&str) -> bool) -> String {
    if !avoid(base) {
        return base.to_string();
    }
    (0..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !avoid(n))
        .expect("infinitely many candidate names")
}
