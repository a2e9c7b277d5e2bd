//! n-ary contexts: terms containing box constants `□₁ … □ₙ`.

use thiserror::Error;

use crate::term::{Const, Kind, Term};

/// Errors raised by [`fill_context`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    /// A free variable of a fill would become bound by an enclosing binder.
    #[error("free variable '{var}' of fill {index} would be captured")]
    CaptureViolation {
        /// Box index (1-based).
        index: u32,
        /// The variable that would be captured.
        var: String,
    },
    /// The number of fills does not match the context's boxes.
    #[error("context has {expected} boxes but {given} fills were supplied")]
    Arity {
        /// Largest box index in the context.
        expected: usize,
        /// Number of fills supplied.
        given: usize,
    },
}

/// How free variables of fills interact with binders of the context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FillMode {
    /// Reject fills whose free variables share a name with an enclosing binder.
    #[default]
    Reject,
    /// Let free variables become bound by the innermost binder of that name.
    Capture,
}

/// A term over the signature extended with boxes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Context {
    /// The underlying term.
    pub term: Term,
}

impl Context {
    /// Wrap a term as a context.
    pub fn new(term: Term) -> Context {
        Context { term }
    }

    /// The number of boxes (largest box index).
    pub fn arity(&self) -> usize {
        self.term
            .constants()
            .into_iter()
            .filter_map(|c| match c {
                Const::Box(i) => Some(i as usize),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Replace every `□ᵢ` by `fills[i-1]`.
pub fn fill_context(c: &Context, fills: &[Term], mode: FillMode) -> Result<Term, ContextError> {
    let arity = c.arity();
    if arity != fills.len() {
        return Err(ContextError::Arity { expected: arity, given: fills.len() });
    }
    let mut binders = Vec::new();
    fill(&c.term, fills, mode, &mut binders)
}

fn fill(t: &Term, fills: &[Term], mode: FillMode, binders: &mut Vec<String>) -> Result<Term, ContextError> {
    match t.kind() {
        Kind::Const(Const::Box(i)) => {
            let f = &fills[*i as usize - 1];
            let depth = binders.len() as u32;
            let mut out = f.shift_up(depth, 0);
            for v in f.free_vars() {
                // innermost binder with this display name
                if let Some(pos) = binders.iter().rposition(|b| **b == *v) {
                    if mode == FillMode::Reject {
                        return Err(ContextError::CaptureViolation { index: *i, var: v.to_string() });
                    }
                    let idx = (binders.len() - 1 - pos) as u32;
                    out = out.subst(&v, &Term::bvar(idx));
                }
            }
            Ok(out)
        }
        Kind::App(f, a) => Ok(Term::app(fill(f, fills, mode, binders)?, fill(a, fills, mode, binders)?)),
        Kind::Lam(n, b) => {
            binders.push(n.to_string());
            let r = fill(b, fills, mode, binders);
            binders.pop();
            Ok(Term::lam_raw(n, r?))
        }
        _ => Ok(t.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    #[test]
    fn examples() {
        let c = Context::new(parse("\\x. ?1").unwrap());
        let y = Term::var("y");
        let x = Term::var("x");
        assert_eq!(fill_context(&c, &[y.clone()], FillMode::Reject).unwrap(), Term::lam("x", &y));
        assert!(matches!(
            fill_context(&c, &[x.clone()], FillMode::Reject),
            Err(ContextError::CaptureViolation { .. })
        ));
        assert_eq!(fill_context(&c, &[x], FillMode::Capture).unwrap(), parse("\\x. x").unwrap());
    }

    #[test]
    fn innermost_binder_wins() {
        let c = Context::new(parse("\\x. \\x. ?1").unwrap());
        let r = fill_context(&c, &[Term::var("x")], FillMode::Capture).unwrap();
        assert_eq!(r, Term::lam_raw("x", Term::lam_raw("x", Term::bvar(0))));
    }
}
