//! Structural operations on derivations (substitution, weakening, cut) and
//! the elaboration of the derived rules for implication into primitive
//! rules.

use std::collections::BTreeSet;
use std::sync::Arc;

use lambda_core::sugar::{self, imp_shape, xi_shape};
use lambda_core::{fresh_name, print, Term};
use thiserror::Error;

use crate::check::h_arg;
use crate::deriv::{IParams, IRule, IllativeDerivation};

/// A derived rule could not be applied to the given premises.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot apply {rule}: {reason}")]
pub struct ElabError {
    /// The derived rule.
    pub rule: &'static str,
    /// Why.
    pub reason: String,
}

/// Derived rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivedRule {
    /// `Γ,t₁ ⊢ t₂` and `Γ ⊢ H t₁` give `Γ ⊢ t₁ ⊃ t₂`.
    Pi,
    /// `Γ ⊢ t₁ ⊃ t₂` and `Γ ⊢ t₁` give `Γ ⊢ t₂`.
    Pe,
    /// `Γ,t₁ ⊢ H t₂` and `Γ ⊢ H t₁` give `Γ ⊢ H (t₁ ⊃ t₂)`.
    PH,
    /// `Γ ⊢ t` gives `Γ,t' ⊢ t` for the carried `t'`.
    Weak(Term),
}

impl DerivedRule {
    fn name(&self) -> &'static str {
        match self {
            DerivedRule::Pi => "Pi",
            DerivedRule::Pe => "Pe",
            DerivedRule::PH => "PH",
            DerivedRule::Weak(_) => "Weak",
        }
    }
}

/// The eigenvariable of a binder node (`XiI`, `XiH`, `FL`): recorded, or
/// read off the single hypothesis discharged into premise 0.
pub fn eigenvariable(d: &IllativeDerivation) -> Option<Arc<str>> {
    if !matches!(d.rule, IRule::XiI | IRule::XiH | IRule::FL) {
        return None;
    }
    if let Some(x) = &d.params.x {
        return Some(x.clone());
    }
    let p0 = d.premises.first()?;
    let added: Vec<&Term> = p0.hyps.difference(&d.hyps).collect();
    match added.as_slice() {
        [h] => h.as_app().and_then(|(_, a)| a.as_fvar().cloned()),
        _ => None,
    }
}

fn fresh_avoiding(base: &str, avoid: &BTreeSet<Arc<str>>) -> Arc<str> {
    Arc::from(fresh_name(base, &|n: &str| avoid.contains(n)).as_str())
}

fn map_terms(p: &IParams, f: &dyn Fn(&Term) -> Term) -> IParams {
    IParams {
        x: p.x.clone(),
        t1: p.t1.as_ref().map(f),
        t2: p.t2.as_ref().map(f),
        t3: p.t3.as_ref().map(f),
        base: p.base.clone(),
        budget: p.budget,
    }
}

/// Substitute `s` for the free variable `x` throughout a derivation,
/// renaming eigenvariables that occur free in `s`.
pub fn subst_derivation(d: &IllativeDerivation, x: &str, s: &Term) -> IllativeDerivation {
    let mut d = d.clone();
    if let Some(y) = eigenvariable(&d) {
        if &*y == x {
            // x is bound by this node and not free in its judgment
            return d;
        }
        let sfv = s.free_vars();
        if sfv.contains(&y) {
            let mut avoid = d.all_names();
            avoid.extend(sfv);
            avoid.insert(Arc::from(x));
            let y2 = fresh_avoiding(&y, &avoid);
            d.premises[0] = subst_derivation(&d.premises[0], &y, &Term::var(&y2));
            d.params.x = Some(y2);
        } else if d.params.x.is_none() {
            d.params.x = Some(y);
        }
    }
    let f = |t: &Term| t.subst(x, s);
    IllativeDerivation {
        rule: d.rule,
        hyps: d.hyps.iter().map(f).collect(),
        concl: f(&d.concl),
        params: map_terms(&d.params, &f),
        premises: d.premises.iter().map(|p| subst_derivation(p, x, s)).collect(),
    }
}

/// Add `extra` to the hypotheses of every node, renaming eigenvariables
/// that occur free in `extra`.
pub fn weaken(d: &IllativeDerivation, extra: &BTreeSet<Term>) -> IllativeDerivation {
    if extra.is_empty() {
        return d.clone();
    }
    let efv: BTreeSet<Arc<str>> = extra.iter().flat_map(|t| t.free_vars()).collect();
    weaken_go(d, extra, &efv)
}

fn weaken_go(d: &IllativeDerivation, extra: &BTreeSet<Term>, efv: &BTreeSet<Arc<str>>) -> IllativeDerivation {
    let mut d = d.clone();
    if let Some(y) = eigenvariable(&d) {
        if efv.contains(&y) {
            let mut avoid = d.all_names();
            avoid.extend(efv.iter().cloned());
            let y2 = fresh_avoiding(&y, &avoid);
            d.premises[0] = subst_derivation(&d.premises[0], &y, &Term::var(&y2));
            d.params.x = Some(y2);
        } else if d.params.x.is_none() {
            d.params.x = Some(y);
        }
    }
    d.hyps.extend(extra.iter().cloned());
    d.premises = d.premises.iter().map(|p| weaken_go(p, extra, efv)).collect();
    d
}

/// Weaken to exactly `hyps` (which must contain `d.hyps`).
pub fn weaken_to(d: &IllativeDerivation, hyps: &BTreeSet<Term>) -> IllativeDerivation {
    let extra: BTreeSet<Term> = hyps.difference(&d.hyps).cloned().collect();
    weaken(d, &extra)
}

/// Cut: from `d : Γ, a ⊢ φ` and `e : Δ ⊢ a` with `Δ ⊆ Γ`, build `Γ ⊢ φ` by
/// replacing every axiom leaf on `a` with a weakened copy of `e`.
pub fn cut(d: &IllativeDerivation, a: &Term, e: &IllativeDerivation) -> IllativeDerivation {
    if !d.hyps.contains(a) {
        return d.clone();
    }
    let mut hyps = d.hyps.clone();
    hyps.remove(a);
    if d.rule == IRule::Ax && &d.concl == a {
        return weaken_to(e, &hyps);
    }
    let mut out = d.clone();
    if let Some(y) = eigenvariable(d) {
        out.params.x = Some(y);
    }
    out.hyps = hyps;
    out.premises = d.premises.iter().map(|p| cut(p, a, e)).collect();
    out
}

/// Make the premises share one hypothesis set: `Γ` is the union of the
/// premises' sets (minus the discharged formula for the first premise).
fn common_context(
    first: &IllativeDerivation,
    discharged: Option<&Term>,
    second: &IllativeDerivation,
) -> BTreeSet<Term> {
    let mut g = second.hyps.clone();
    for h in &first.hyps {
        if Some(h) != discharged {
            g.insert(h.clone());
        }
    }
    g
}

/// From `d1 : Γ, t₁ ⊢ φ` build `Γ, (K t₁) x ⊢ φ` (by cut against
/// `Γ, (K t₁) x ⊢ t₁`).
fn rebind_hyp(d1: &IllativeDerivation, gamma: &BTreeSet<Term>, t1: &Term, x: &str) -> IllativeDerivation {
    let kx = Term::app(sugar::k(t1), Term::var(x));
    let mut gx = gamma.clone();
    gx.insert(kx.clone());
    let mut full = gx.clone();
    full.insert(t1.clone());
    let d1w = weaken_to(d1, &full);
    if gamma.contains(t1) {
        return d1w;
    }
    let e = IllativeDerivation::eq(IllativeDerivation::ax(gx, kx), t1.clone());
    cut(&d1w, t1, &e)
}

fn fresh_eigen(ds: &[&IllativeDerivation], ts: &[&Term]) -> Arc<str> {
    let mut avoid = BTreeSet::new();
    for d in ds {
        avoid.extend(d.all_names());
    }
    for t in ts {
        avoid.extend(t.free_vars());
    }
    fresh_avoiding("_x", &avoid)
}

/// `Γ, t₁ ⊢ t₂` and `Γ ⊢ H t₁` give `Γ ⊢ t₁ ⊃ t₂` (one `XiI` plus `Eq` steps).
pub fn elaborate_pi(d1: &IllativeDerivation, d2: &IllativeDerivation) -> Result<IllativeDerivation, ElabError> {
    let err = |r: &str| ElabError { rule: "Pi", reason: r.to_string() };
    let t1 = h_arg(&d2.concl).ok_or_else(|| err("second premise must conclude H t1"))?;
    let t2 = d1.concl.clone();
    let gamma = common_context(d1, Some(&t1), d2);
    let x = fresh_eigen(&[d1, d2], &[&t1, &t2]);
    let xv = Term::var(&x);
    let p0 = IllativeDerivation::eq_to(rebind_hyp(d1, &gamma, &t1, &x), Term::app(sugar::k(&t2), xv));
    let p1 = IllativeDerivation::eq_to(weaken_to(d2, &gamma), sugar::l(&sugar::k(&t1)));
    Ok(IllativeDerivation::new(IRule::XiI, gamma, sugar::imp(&t1, &t2), vec![p0, p1])
        .with_params(IParams { x: Some(x), ..IParams::default() }))
}

/// `Γ ⊢ t₁ ⊃ t₂` and `Γ ⊢ t₁` give `Γ ⊢ t₂` (one `XiE` plus `Eq` steps).
pub fn elaborate_pe(d1: &IllativeDerivation, d2: &IllativeDerivation) -> Result<IllativeDerivation, ElabError> {
    let err = |r: String| ElabError { rule: "Pe", reason: r };
    let (t1, t2) = imp_shape(&d1.concl).ok_or_else(|| err("first premise must conclude t1 ⊃ t2".into()))?;
    if d2.concl != t1 {
        return Err(err(format!("second premise must conclude {}", print(&t1))));
    }
    let (a, b) = xi_shape(&d1.concl).expect("implication is a restricted quantification");
    let gamma = common_context(d1, None, d2);
    let t3 = sugar::i_term();
    let major = weaken_to(d1, &gamma);
    let minor = IllativeDerivation::eq(weaken_to(d2, &gamma), Term::app(a.clone(), t3.clone()));
    let xe = IllativeDerivation::new(IRule::XiE, gamma, Term::app(b, t3.clone()), vec![major, minor])
        .with_params(IParams { t1: Some(a), t3: Some(t3), ..IParams::default() });
    Ok(IllativeDerivation::eq(xe, t2))
}

/// `Γ, t₁ ⊢ H t₂` and `Γ ⊢ H t₁` give `Γ ⊢ H (t₁ ⊃ t₂)` (one `XiH` plus `Eq`
/// steps).
pub fn elaborate_ph(d1: &IllativeDerivation, d2: &IllativeDerivation) -> Result<IllativeDerivation, ElabError> {
    let err = |r: &str| ElabError { rule: "PH", reason: r.to_string() };
    let t1 = h_arg(&d2.concl).ok_or_else(|| err("second premise must conclude H t1"))?;
    let t2 = h_arg(&d1.concl).ok_or_else(|| err("first premise must conclude H t2"))?;
    let gamma = common_context(d1, Some(&t1), d2);
    let x = fresh_eigen(&[d1, d2], &[&t1, &t2]);
    let xv = Term::var(&x);
    let p0 = IllativeDerivation::eq_to(rebind_hyp(d1, &gamma, &t1, &x), sugar::h(&Term::app(sugar::k(&t2), xv)));
    let p1 = IllativeDerivation::eq_to(weaken_to(d2, &gamma), sugar::l(&sugar::k(&t1)));
    Ok(IllativeDerivation::new(IRule::XiH, gamma, sugar::h(&sugar::imp(&t1, &t2)), vec![p0, p1])
        .with_params(IParams { x: Some(x), ..IParams::default() }))
}

/// Elaborate a derived rule into primitive rules.
pub fn elaborate_derived(rule: &DerivedRule, inputs: &[IllativeDerivation]) -> Result<IllativeDerivation, ElabError> {
    let arity = if matches!(rule, DerivedRule::Weak(_)) { 1 } else { 2 };
    if inputs.len() != arity {
        return Err(ElabError { rule: rule.name(), reason: format!("expects {arity} premise(s), got {}", inputs.len()) });
    }
    match rule {
        DerivedRule::Pi => elaborate_pi(&inputs[0], &inputs[1]),
        DerivedRule::Pe => elaborate_pe(&inputs[0], &inputs[1]),
        DerivedRule::PH => elaborate_ph(&inputs[0], &inputs[1]),
        DerivedRule::Weak(t) => Ok(weaken(&inputs[0], &BTreeSet::from([t.clone()]))),
    }
}
