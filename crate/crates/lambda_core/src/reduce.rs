//! Budgeted βη-reduction.

use thiserror::Error;

use crate::term::{Kind, Term};
use crate::verdict::Verdict;

/// Default cap on intermediate term size during normalisation.
pub const DEFAULT_SIZE_CAP: usize = 200_000;

/// Limits on a normalisation run. Strategy is always leftmost-outermost.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionBudget {
    /// Maximum number of reduction steps.
    pub max_steps: usize,
    /// Maximum term size; exceeding it counts as exhausting the budget.
    pub size_cap: usize,
}

impl ReductionBudget {
    /// A budget of `max_steps` steps with the default size cap.
    ///
    /// # Panics
    /// Panics if `max_steps == 0`.
    pub fn new(max_steps: usize) -> ReductionBudget {
        assert!(max_steps > 0, "reduction budget must be positive");
        ReductionBudget { max_steps, size_cap: DEFAULT_SIZE_CAP }
    }
}

impl Default for ReductionBudget {
    fn default() -> Self {
        ReductionBudget::new(500)
    }
}

/// The budget ran out before a normal form was reached.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("reduction budget exhausted after {steps} steps")]
pub struct BudgetExhausted {
    /// Steps taken.
    pub steps: usize,
}

/// η-contract `λ.f 0` to `f` if index 0 is not used in `f`.
pub fn eta_contract(t: &Term) -> Option<Term> {
    let (_, b) = t.as_lam()?;
    let (f, a) = b.as_app()?;
    if matches!(a.kind(), Kind::BVar(0)) && !f.uses_index(0) {
        Some(f.shift_down(0))
    } else {
        None
    }
}

/// β-contract a root redex `(λ.b) a`.
pub fn beta_contract(t: &Term) -> Option<Term> {
    let (f, a) = t.as_app()?;
    let (_, b) = f.as_lam()?;
    Some(b.instantiate(a))
}

/// One leftmost-outermost β/η step, or `None` if `t` is normal.
pub fn step(t: &Term) -> Option<Term> {
    if let Some(r) = beta_contract(t) {
        return Some(r);
    }
    if let Some(r) = eta_contract(t) {
        return Some(r);
    }
    match t.kind() {
        Kind::App(f, a) => {
            if let Some(f2) = step(f) {
                return Some(Term::app(f2, a.clone()));
            }
            step(a).map(|a2| Term::app(f.clone(), a2))
        }
        Kind::Lam(n, b) => step(b).map(|b2| Term::lam_raw(n, b2)),
        _ => None,
    }
}

/// Whether `t` contains no β or η redex.
pub fn is_normal(t: &Term) -> bool {
    step(t).is_none()
}

/// All one-step β/η reducts at every position (with duplicates removed).
pub fn one_step_reducts(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    if let Some(r) = beta_contract(t) {
        out.push(r);
    }
    if let Some(r) = eta_contract(t) {
        out.push(r);
    }
    match t.kind() {
        Kind::App(f, a) => {
            for f2 in one_step_reducts(f) {
                out.push(Term::app(f2, a.clone()));
            }
            for a2 in one_step_reducts(a) {
                out.push(Term::app(f.clone(), a2));
            }
        }
        Kind::Lam(n, b) => {
            for b2 in one_step_reducts(b) {
                out.push(Term::lam_raw(n, b2));
            }
        }
        _ => {}
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|t| seen.insert(t.clone()));
    out
}

/// Reduce `t` to βη-normal form within the budget.
pub fn beta_eta_normalize(t: &Term, b: &ReductionBudget) -> Result<Term, BudgetExhausted> {
    let mut cur = t.clone();
    for steps in 0..=b.max_steps {
        if cur.size() > b.size_cap {
            return Err(BudgetExhausted { steps });
        }
        match step(&cur) {
            None => return Ok(cur),
            Some(next) => {
                if steps == b.max_steps {
                    return Err(BudgetExhausted { steps });
                }
                cur = next;
            }
        }
    }
    Err(BudgetExhausted { steps: b.max_steps })
}

/// Reduce at most `max_steps` steps, returning the last term and whether it
/// is normal.
pub fn reduce_upto(t: &Term, max_steps: usize, size_cap: usize) -> (Term, bool) {
    let mut cur = t.clone();
    for _ in 0..max_steps {
        if cur.size() > size_cap {
            return (cur, false);
        }
        match step(&cur) {
            None => return (cur, true),
            Some(n) => cur = n,
        }
    }
    let normal = is_normal(&cur);
    (cur, normal)
}

/// Decide `t₁ =_βη t₂` within the budget (applied to each side separately).
pub fn beta_eta_equal(t1: &Term, t2: &Term, b: &ReductionBudget) -> Verdict {
    if t1 == t2 {
        return Verdict::True;
    }
    match (beta_eta_normalize(t1, b), beta_eta_normalize(t2, b)) {
        (Ok(n1), Ok(n2)) => Verdict::from(n1 == n2),
        _ => Verdict::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn basic_examples() {
        let b = ReductionBudget::new(100);
        assert_eq!(beta_eta_normalize(&p("(\\x. x) c"), &b).unwrap(), p("c"));
        assert_eq!(beta_eta_normalize(&p("S K K x"), &b).unwrap(), p("x"));
        let omega = p("(\\x. x x) (\\x. x x)");
        assert!(beta_eta_normalize(&omega, &b).is_err());
        assert_eq!(beta_eta_equal(&p("\\x. f x"), &p("f"), &b), Verdict::True);
        assert_eq!(beta_eta_equal(&p("K"), &p("S"), &b), Verdict::False);
        assert_eq!(beta_eta_equal(&omega, &p("I"), &b), Verdict::Unknown);
    }

    #[test]
    fn eta_only_when_unused() {
        assert!(eta_contract(&p("\\x. x x")).is_none());
        assert_eq!(eta_contract(&p("\\x. f x")), Some(p("f")));
    }
}
