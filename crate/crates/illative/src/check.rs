//! The derivation checker.
//!
//! Every node is matched against its rule schema with exact hypothesis sets.
//! Equality side conditions are decided by budgeted βη-normalisation; an
//! exhausted budget makes the whole derivation *undecided* rather than
//! rejected.

use std::collections::BTreeSet;
use std::sync::Arc;

use lambda_core::reduce::beta_eta_equal;
use lambda_core::sugar::{self, f_shapes, l_shape, xi_shape};
use lambda_core::{print, Const, Kind, ReductionBudget, Term, Verdict};
use thiserror::Error;

use crate::deriv::{IRule, IllativeDerivation, System};

/// A node violates its rule.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    /// The node does not match the rule schema.
    #[error("{node}: {reason}")]
    Mismatch {
        /// Path of the node (`root`, `root.0`, ...).
        node: String,
        /// What went wrong.
        reason: String,
    },
    /// The eigenvariable is not fresh.
    #[error("{node}: eigenvariable '{var}' is not fresh")]
    FreshnessViolation {
        /// Path of the node.
        node: String,
        /// The offending variable.
        var: String,
    },
    /// The rule does not belong to the chosen system.
    #[error("{node}: rule {rule} is not available in system {system}")]
    SystemViolation {
        /// Path of the node.
        node: String,
        /// The rule.
        rule: IRule,
        /// The system.
        system: &'static str,
    },
}

impl RuleError {
    /// Path of the offending node.
    pub fn node(&self) -> &str {
        match self {
            RuleError::Mismatch { node, .. }
            | RuleError::FreshnessViolation { node, .. }
            | RuleError::SystemViolation { node, .. } => node,
        }
    }
}

/// Result of a check that found no rule violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    /// Every node checks.
    Ok,
    /// Some equality side conditions could not be decided within budget;
    /// the paths of those nodes are listed.
    Undecided(Vec<String>),
}

impl CheckOutcome {
    /// `true` for [`CheckOutcome::Ok`].
    pub fn is_ok(&self) -> bool {
        matches!(self, CheckOutcome::Ok)
    }
}

/// Checker configuration.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    /// The target system.
    pub system: System,
    /// Default budget for equality side conditions.
    pub budget: ReductionBudget,
    /// Base types admitted by `AxLA`; `None` admits every base type.
    pub bases: Option<BTreeSet<String>>,
}

impl CheckConfig {
    /// Configuration admitting every base type.
    pub fn new(system: System, budget: ReductionBudget) -> CheckConfig {
        CheckConfig { system, budget, bases: None }
    }
}

/// Check a derivation in `system`, using `b` for equality side conditions
/// (an `Eq` node's own budget is used when larger).
pub fn check_illative(d: &IllativeDerivation, system: System, b: &ReductionBudget) -> Result<CheckOutcome, RuleError> {
    check_illative_with(d, &CheckConfig::new(system, *b))
}

/// Check with an explicit configuration.
pub fn check_illative_with(d: &IllativeDerivation, cfg: &CheckConfig) -> Result<CheckOutcome, RuleError> {
    let mut undecided = Vec::new();
    check_node(d, "root".to_string(), cfg, &mut undecided)?;
    if undecided.is_empty() {
        Ok(CheckOutcome::Ok)
    } else {
        Ok(CheckOutcome::Undecided(undecided))
    }
}

/// The double-negation axiom `Ξ H (λx.((x ⊃ ⊥) ⊃ ⊥) ⊃ x)`.
pub fn dn_axiom() -> Term {
    let x = Term::var("x");
    let body = sugar::imp(&sugar::imp(&sugar::imp(&x, &sugar::bot()), &sugar::bot()), &x);
    sugar::xi(&sugar::h_term(), &Term::lam("x", &body))
}

/// `L H`.
pub fn l_h() -> Term {
    sugar::l(&sugar::h_term())
}

/// Recognise `H t` both in applied form `L(λ_.t)` and as `H` applied to `t`.
pub fn h_arg(t: &Term) -> Option<Term> {
    if let Some((f, a)) = t.as_app() {
        if *f == sugar::h_term() {
            return Some(a.clone());
        }
    }
    sugar::h_shape(t)
}

/// Recognise `F t₁ t₂` in applied form or as `F` applied to two arguments.
pub fn f_args(t: &Term) -> Vec<(Term, Term)> {
    let mut out = f_shapes(t);
    if let Some((g, t2)) = t.as_app() {
        if let Some((f, t1)) = g.as_app() {
            if *f == sugar::f_term() {
                out.push((t1.clone(), t2.clone()));
            }
        }
    }
    out
}

fn mismatch(node: &str, reason: impl Into<String>) -> RuleError {
    RuleError::Mismatch { node: node.to_string(), reason: reason.into() }
}

fn premises<'a>(d: &'a IllativeDerivation, n: usize, node: &str) -> Result<&'a [IllativeDerivation], RuleError> {
    if d.premises.len() != n {
        return Err(mismatch(node, format!("{} expects {n} premise(s), found {}", d.rule, d.premises.len())));
    }
    Ok(&d.premises)
}

fn same_hyps(p: &IllativeDerivation, hyps: &BTreeSet<Term>, node: &str, i: usize) -> Result<(), RuleError> {
    if &p.hyps != hyps {
        return Err(mismatch(node, format!("premise {i} has a different hypothesis set")));
    }
    Ok(())
}

fn hyps_fvs(hyps: &BTreeSet<Term>) -> BTreeSet<Arc<str>> {
    hyps.iter().flat_map(|h| h.free_vars()).collect()
}

/// The eigenvariable: recorded, or read off the discharged hypothesis.
fn eigenvar(d: &IllativeDerivation, t1: &Term, node: &str) -> Result<Arc<str>, RuleError> {
    if let Some(x) = &d.params.x {
        return Ok(x.clone());
    }
    let added: Vec<&Term> = d.premises[0].hyps.difference(&d.hyps).collect();
    if let [h] = added.as_slice() {
        if let Some((f, a)) = h.as_app() {
            if f == t1 {
                if let Some(x) = a.as_fvar() {
                    return Ok(x.clone());
                }
            }
        }
    }
    Err(mismatch(node, "eigenvariable not recorded and not inferable"))
}

/// Shared premise checks of `XiI`, `XiH` and `FL`: premise 0 is
/// `Γ, t₁ x ⊢ want0(x)`, premise 1 is `Γ ⊢ L t₁`, `x ∉ FV(Γ, t₁, t₂)`.
fn check_binder_rule(
    d: &IllativeDerivation,
    t1: &Term,
    t2: &Term,
    want0: &dyn Fn(&Term) -> Term,
    node: &str,
) -> Result<(), RuleError> {
    let x = eigenvar(d, t1, node)?;
    let mut fv = hyps_fvs(&d.hyps);
    fv.extend(t1.free_vars());
    fv.extend(t2.free_vars());
    if fv.contains(&x) {
        return Err(RuleError::FreshnessViolation { node: node.to_string(), var: x.to_string() });
    }
    let xv = Term::var(&x);
    let p = &d.premises;
    let mut h0 = d.hyps.clone();
    h0.insert(Term::app(t1.clone(), xv.clone()));
    if p[0].hyps != h0 {
        return Err(mismatch(node, "premise 0 must extend the hypotheses by exactly t1 x"));
    }
    let w = want0(&xv);
    if p[0].concl != w {
        return Err(mismatch(node, format!("premise 0 must conclude {}, found {}", print(&w), print(&p[0].concl))));
    }
    same_hyps(&p[1], &d.hyps, node, 1)?;
    if p[1].concl != sugar::l(t1) {
        return Err(mismatch(node, format!("premise 1 must conclude L ({})", print(t1))));
    }
    Ok(())
}

fn check_node(
    d: &IllativeDerivation,
    node: String,
    cfg: &CheckConfig,
    undecided: &mut Vec<String>,
) -> Result<(), RuleError> {
    let n = node.as_str();
    let budget = ReductionBudget {
        max_steps: d.params.budget.unwrap_or(0).max(cfg.budget.max_steps),
        size_cap: cfg.budget.size_cap,
    };
    match d.rule {
        IRule::Ax => {
            premises(d, 0, n)?;
            if !d.hyps.contains(&d.concl) {
                return Err(mismatch(n, "conclusion is not a hypothesis"));
            }
        }
        IRule::AxLH => {
            premises(d, 0, n)?;
            if d.concl != l_h() {
                return Err(mismatch(n, "conclusion must be L H"));
            }
        }
        IRule::AxLA => {
            premises(d, 0, n)?;
            let base = match l_shape(&d.concl).as_ref().map(|a| a.kind()) {
                Some(Kind::Const(Const::A(b))) => b.clone(),
                _ => return Err(mismatch(n, "conclusion must be L A@b")),
            };
            if let Some(p) = &d.params.base {
                if p != &base {
                    return Err(mismatch(n, format!("recorded base {p} differs from {base}")));
                }
            }
            if let Some(bs) = &cfg.bases {
                if !bs.contains(&*base) {
                    return Err(mismatch(n, format!("'{base}' is not a base type")));
                }
            }
        }
        IRule::DN => {
            premises(d, 0, n)?;
            if cfg.system != System::Iwc {
                return Err(RuleError::SystemViolation { node: node.clone(), rule: d.rule, system: cfg.system.name() });
            }
            if d.concl != dn_axiom() {
                return Err(mismatch(n, "conclusion is not the double-negation axiom"));
            }
        }
        IRule::Eq => {
            let p = premises(d, 1, n)?;
            same_hyps(&p[0], &d.hyps, n, 0)?;
            match beta_eta_equal(&p[0].concl, &d.concl, &budget) {
                Verdict::True => {}
                Verdict::False => {
                    return Err(mismatch(
                        n,
                        format!("{} and {} are not βη-equal", print(&p[0].concl), print(&d.concl)),
                    ))
                }
                Verdict::Unknown => undecided.push(node.clone()),
            }
        }
        IRule::Hi => {
            let p = premises(d, 1, n)?;
            same_hyps(&p[0], &d.hyps, n, 0)?;
            if h_arg(&d.concl).as_ref() != Some(&p[0].concl) {
                return Err(mismatch(n, "conclusion must be H applied to the premise"));
            }
        }
        IRule::XiE => {
            let p = premises(d, 2, n)?;
            same_hyps(&p[0], &d.hyps, n, 0)?;
            same_hyps(&p[1], &d.hyps, n, 1)?;
            let (a, t2) = xi_shape(&p[0].concl).ok_or_else(|| mismatch(n, "premise 0 must be Ξ t1 t2"))?;
            let t1 = d.params.t1.clone().unwrap_or_else(|| a.clone());
            if a != t1 {
                return Err(mismatch(n, "premise 0 does not quantify over the recorded t1"));
            }
            let (f, arg) = p[1].concl.as_app().ok_or_else(|| mismatch(n, "premise 1 must be t1 t3"))?;
            if *f != t1 {
                return Err(mismatch(n, "premise 1 must apply the recorded t1"));
            }
            let t3 = d.params.t3.clone().unwrap_or_else(|| arg.clone());
            if *arg != t3 {
                return Err(mismatch(n, "premise 1 does not apply t1 to the recorded t3"));
            }
            let want = Term::app(t2, t3);
            if d.concl != want {
                match beta_eta_equal(&want, &d.concl, &budget) {
                    Verdict::True => {}
                    Verdict::False => return Err(mismatch(n, format!("conclusion must be {}", print(&want)))),
                    Verdict::Unknown => undecided.push(node.clone()),
                }
            }
        }
        IRule::XiI => {
            premises(d, 2, n)?;
            let (t1, t2) = xi_shape(&d.concl).ok_or_else(|| mismatch(n, "conclusion must be Ξ t1 t2"))?;
            check_binder_rule(d, &t1, &t2, &|x| Term::app(t2.clone(), x.clone()), n)?;
        }
        IRule::XiH => {
            premises(d, 2, n)?;
            let inner = h_arg(&d.concl).ok_or_else(|| mismatch(n, "conclusion must be H (Ξ t1 t2)"))?;
            let (t1, t2) = xi_shape(&inner).ok_or_else(|| mismatch(n, "conclusion must be H (Ξ t1 t2)"))?;
            let p0 = &d.premises[0].concl;
            // H (t2 x) is accepted in either presentation
            let accept = |x: &Term| {
                let tx = Term::app(t2.clone(), x.clone());
                if h_arg(p0).as_ref() == Some(&tx) {
                    p0.clone()
                } else {
                    sugar::h(&tx)
                }
            };
            check_binder_rule(d, &t1, &t2, &accept, n)?;
        }
        IRule::FL => {
            premises(d, 2, n)?;
            if cfg.system == System::I0 {
                return Err(RuleError::SystemViolation { node: node.clone(), rule: d.rule, system: cfg.system.name() });
            }
            let g = l_shape(&d.concl).ok_or_else(|| mismatch(n, "conclusion must be L (F t1 t2)"))?;
            let mut cands = f_args(&g);
            if let (Some(t1), Some(t2)) = (&d.params.t1, &d.params.t2) {
                cands.retain(|(a, b)| a == t1 && b == t2);
            }
            if cands.is_empty() {
                return Err(mismatch(n, "conclusion must be L (F t1 t2) for the recorded t1, t2"));
            }
            let mut first_err = None;
            for (t1, t2) in &cands {
                match check_binder_rule(d, t1, t2, &|_| sugar::l(t2), n) {
                    Ok(()) => {
                        first_err = None;
                        break;
                    }
                    Err(e) => {
                        first_err.get_or_insert(e);
                    }
                }
            }
            if let Some(e) = first_err {
                return Err(e);
            }
        }
    }
    for (i, p) in d.premises.iter().enumerate() {
        check_node(p, format!("{node}.{i}"), cfg, undecided)?;
    }
    Ok(())
}
