//! Term evaluation, forcing and model validation.

use std::fmt;
use std::sync::Arc;

use pred2::{Expr, SimpleType};
use thiserror::Error;

use crate::model::{Elem, KripkeModel, State, StateSet, Valuation};

/// Evaluation failures (only possible on models that fail validation or on
/// valuations that are not total).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    /// A free variable without a value.
    #[error("variable '{0}' has no value")]
    Unassigned(String),
    /// A constant without an interpretation.
    #[error("constant '{0}' is not interpreted")]
    Uninterpreted(String),
    /// The application table has no entry.
    #[error("application {0} · {1} is undefined")]
    MissingApp(String, String),
    /// A quantifier ranges over a type without a domain.
    #[error("no domain for type {0}")]
    NoDomain(String),
    /// A formula used where a term element is required and no element of
    /// `D_o` realises its forcing set.
    #[error("no element of D_o realises the value of '{0}'")]
    Unrealized(String),
}

/// `⟦q⟧_u`: evaluate a term. Formulas with connectives in argument
/// positions are evaluated through [`eval_formula_element`].
pub fn eval_term(m: &KripkeModel, u: &Valuation, q: &Expr) -> Result<Elem, EvalError> {
    match q {
        Expr::Var(x, _) => u.get(x).copied().ok_or_else(|| EvalError::Unassigned(x.to_string())),
        Expr::Const(c, _) => m.interp.get(&**c).copied().ok_or_else(|| EvalError::Uninterpreted(c.to_string())),
        Expr::App(f, a) => {
            let fe = eval_term(m, u, f)?;
            let ae = eval_term(m, u, a)?;
            m.app
                .get(&(fe, ae))
                .copied()
                .ok_or_else(|| EvalError::MissingApp(m.elems[fe].name.clone(), m.elems[ae].name.clone()))
        }
        Expr::Imp(..) | Expr::Forall(..) => {
            eval_formula_element(m, u, q)?.ok_or_else(|| EvalError::Unrealized(q.to_string()))
        }
    }
}

/// The set of states forcing `φ` under `u` (computed by the clauses for
/// `⊃` and `∀`, and by `ς` for atomic formulas).
pub fn forcing_set(m: &KripkeModel, u: &Valuation, phi: &Expr) -> Result<StateSet, EvalError> {
    let box_of = |target: StateSet| -> StateSet {
        (0..m.n_states()).filter(|&s| m.up(s) & !target == 0).fold(0, |acc, s| acc | (1 << s))
    };
    match phi {
        Expr::Imp(a, b) => {
            let fa = forcing_set(m, u, a)?;
            let fb = forcing_set(m, u, b)?;
            Ok(box_of((!fa | fb) & m.all_states()))
        }
        Expr::Forall(x, t, body) => {
            let dom = m.domains.get(t).ok_or_else(|| EvalError::NoDomain(t.to_string()))?;
            let mut all = m.all_states();
            let mut u2 = u.clone();
            for &d in dom {
                u2.insert(x.clone(), d);
                all &= forcing_set(m, &u2, body)?;
            }
            Ok(box_of(all))
        }
        _ => Ok(m.sigma_of(eval_term(m, u, phi)?)),
    }
}

/// `s, u ⊩ φ`.
pub fn forces(m: &KripkeModel, s: State, u: &Valuation, phi: &Expr) -> Result<bool, EvalError> {
    Ok(forcing_set(m, u, phi)? & (1 << s) != 0)
}

/// The element of `D_o` denoted by a formula: for atomic formulas the
/// evaluated element, otherwise the first element of `D_o` whose `ς` is
/// the formula's forcing set (`None` if no element realises it).
pub fn eval_formula_element(m: &KripkeModel, u: &Valuation, phi: &Expr) -> Result<Option<Elem>, EvalError> {
    match phi {
        Expr::Imp(..) | Expr::Forall(..) => {
            let set = forcing_set(m, u, phi)?;
            Ok(m.domain(&SimpleType::O).iter().copied().find(|&d| m.sigma_of(d) == set))
        }
        _ => eval_term(m, u, phi).map(Some),
    }
}

/// All total valuations of the given typed variables, in lexicographic order.
pub fn valuations(m: &KripkeModel, vars: &[(Arc<str>, SimpleType)]) -> Vec<Valuation> {
    let mut out = vec![Valuation::new()];
    for (x, t) in vars {
        let dom = m.domain(t);
        let mut next = Vec::with_capacity(out.len() * dom.len());
        for u in &out {
            for &d in dom {
                let mut u2 = u.clone();
                u2.insert(x.clone(), d);
                next.push(u2);
            }
        }
        out = next;
    }
    out
}

/// A violated model condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The model has no states.
    NoStates,
    /// `≤` is not reflexive at a state.
    NotReflexive(String),
    /// `≤` is not antisymmetric on a pair.
    NotAntisymmetric(String, String),
    /// `≤` is not transitive on a triple.
    NotTransitive(String, String, String),
    /// A domain is empty.
    EmptyDomain(String),
    /// `D_o` is missing.
    NoPropositionDomain,
    /// Application undefined or landing in the wrong domain.
    BadApp {
        /// Function element.
        f: String,
        /// Argument element.
        a: String,
        /// Problem.
        reason: String,
    },
    /// A constant is uninterpreted or interpreted outside its domain.
    BadInterp(String),
    /// `ς(d)` is not upward-closed.
    UpwardClosure {
        /// Element.
        elem: String,
        /// A state in `ς(d)`.
        low: String,
        /// A larger state outside `ς(d)`.
        high: String,
    },
    /// `ς` is undefined on an element of `D_o`.
    NoSigma(String),
    /// `∀p.p` is forced at a state.
    FalsumForced(String),
    /// A formula of the validation alphabet has a value not realised in `D_o`.
    Unrealized {
        /// Formula.
        formula: String,
        /// Valuation (as `x=d` pairs).
        valuation: String,
    },
    /// Evaluation failed.
    Eval(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoStates => write!(f, "model has no states"),
            Violation::NotReflexive(s) => write!(f, "order not reflexive at {s}"),
            Violation::NotAntisymmetric(a, b) => write!(f, "order not antisymmetric on {a}, {b}"),
            Violation::NotTransitive(a, b, c) => write!(f, "order not transitive on {a} <= {b} <= {c}"),
            Violation::EmptyDomain(t) => write!(f, "domain of {t} is empty"),
            Violation::NoPropositionDomain => write!(f, "domain of o is missing"),
            Violation::BadApp { f: g, a, reason } => write!(f, "application {g} . {a}: {reason}"),
            Violation::BadInterp(c) => write!(f, "bad interpretation of constant {c}"),
            Violation::UpwardClosure { elem, low, high } => {
                write!(f, "sigma({elem}) not upward-closed: contains {low} but not {high}")
            }
            Violation::NoSigma(d) => write!(f, "sigma undefined on {d}"),
            Violation::FalsumForced(s) => write!(f, "forall p. p is forced at {s}"),
            Violation::Unrealized { formula, valuation } => {
                write!(f, "value of '{formula}' under [{valuation}] is not an element of D_o")
            }
            Violation::Eval(e) => write!(f, "evaluation failed: {e}"),
        }
    }
}

/// Check the pre-model conditions, upward closure of `ς`, that `∀p.p` is
/// forced nowhere, and that every formula of `alphabet` (under every
/// valuation of its free variables) has its forcing set realised by an
/// element of `D_o`.
pub fn validate_model(m: &KripkeModel, alphabet: &[Expr]) -> Result<(), Vec<Violation>> {
    let mut v = Vec::new();
    let n = m.n_states();
    if n == 0 {
        v.push(Violation::NoStates);
    }
    let sname = |s: usize| m.states[s].clone();
    for a in 0..n {
        if !m.le[a][a] {
            v.push(Violation::NotReflexive(sname(a)));
        }
        for b in 0..n {
            if a < b && m.le[a][b] && m.le[b][a] {
                v.push(Violation::NotAntisymmetric(sname(a), sname(b)));
            }
            for c in 0..n {
                if m.le[a][b] && m.le[b][c] && !m.le[a][c] {
                    v.push(Violation::NotTransitive(sname(a), sname(b), sname(c)));
                }
            }
        }
    }
    if !m.domains.contains_key(&SimpleType::O) {
        v.push(Violation::NoPropositionDomain);
    }
    let mut needed: Vec<SimpleType> = m.domains.keys().cloned().collect();
    needed.extend(m.sig.consts.values().cloned());
    needed.extend(m.sig.base_types.iter().map(|b| SimpleType::base(b)));
    needed.sort();
    needed.dedup();
    for t in &needed {
        if m.domain(t).is_empty() {
            v.push(Violation::EmptyDomain(t.to_string()));
        }
    }
    for (t, fs) in &m.domains {
        let Some((t1, t2)) = t.as_arrow() else { continue };
        for &f in fs {
            for &a in m.domain(t1) {
                match m.app.get(&(f, a)) {
                    None => v.push(Violation::BadApp {
                        f: m.elems[f].name.clone(),
                        a: m.elems[a].name.clone(),
                        reason: "undefined".into(),
                    }),
                    Some(&r) if &m.elems[r].ty != t2 => v.push(Violation::BadApp {
                        f: m.elems[f].name.clone(),
                        a: m.elems[a].name.clone(),
                        reason: format!("result not in domain of {t2}"),
                    }),
                    _ => {}
                }
            }
        }
    }
    for (c, t) in &m.sig.consts {
        match m.interp.get(c) {
            Some(&e) if &m.elems[e].ty == t => {}
            _ => v.push(Violation::BadInterp(c.clone())),
        }
    }
    for &d in m.domain(&SimpleType::O) {
        match m.sigma.get(&d) {
            None => v.push(Violation::NoSigma(m.elems[d].name.clone())),
            Some(&x) => {
                'outer: for s in 0..n {
                    if x & (1 << s) == 0 {
                        continue;
                    }
                    for t in 0..n {
                        if m.le[s][t] && x & (1 << t) == 0 {
                            v.push(Violation::UpwardClosure {
                                elem: m.elems[d].name.clone(),
                                low: sname(s),
                                high: sname(t),
                            });
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    if !v.is_empty() {
        return Err(v);
    }
    match forcing_set(m, &Valuation::new(), &Expr::bot()) {
        Ok(x) => {
            for s in 0..n {
                if x & (1 << s) != 0 {
                    v.push(Violation::FalsumForced(sname(s)));
                }
            }
        }
        Err(e) => v.push(Violation::Eval(e.to_string())),
    }
    for phi in alphabet {
        let fv: Vec<_> = phi.free_vars().into_iter().collect();
        for u in valuations(m, &fv) {
            match eval_formula_element(m, &u, phi) {
                Ok(Some(_)) => {}
                Ok(None) => v.push(Violation::Unrealized { formula: phi.to_string(), valuation: show_valuation(m, &u) }),
                Err(e) => v.push(Violation::Eval(e.to_string())),
            }
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// Render a valuation as `x=d, …`.
pub fn show_valuation(m: &KripkeModel, u: &Valuation) -> String {
    u.iter().map(|(x, &d)| format!("{x}={}", m.elems[d].name)).collect::<Vec<_>>().join(", ")
}
