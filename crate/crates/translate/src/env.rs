//! The type predicates `A_τ`, the structural translation of terms and
//! formulas, and the hypothesis context `Γ(Δ, φ)`.

use std::collections::BTreeSet;
use std::sync::Arc;

use lambda_core::sugar;
use lambda_core::Term;
use pred2::{Expr, Signature, SimpleType};

/// Translation environment over a second-order signature.
///
/// Constants of the signature become user constants of the same name, base
/// type `b` becomes the type constant `A@b`, `o` becomes `H`, and an arrow
/// type `τ₁ → τ₂` becomes `F A_τ₁ A_τ₂`.
#[derive(Clone, Debug)]
pub struct TranslationEnv {
    sig: Signature,
}

/// Prefix of the per-base-type sentinel variables. The formula parser
/// rejects names starting with `_`, so sentinels never clash with the
/// variables of a parsed formula.
pub const SENTINEL_PREFIX: &str = "_y_";

impl TranslationEnv {
    /// An environment for `sig`.
    pub fn new(sig: Signature) -> TranslationEnv {
        TranslationEnv { sig }
    }

    /// The underlying signature.
    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// The type predicate `A_τ`.
    pub fn a_type(&self, t: &SimpleType) -> Term {
        a_type(t)
    }

    /// `A_τ t`.
    pub fn typed(&self, ty: &SimpleType, t: Term) -> Term {
        Term::app(a_type(ty), t)
    }

    /// The sentinel variable of base type `b`.
    pub fn sentinel(&self, b: &str) -> Arc<str> {
        Arc::from(format!("{SENTINEL_PREFIX}{b}").as_str())
    }

    /// `⟦q⟧` for a term or formula.
    pub fn translate(&self, q: &Expr) -> Term {
        translate_term(q)
    }

    /// `Γ(Δ, φ)`: `A_τ x` for every free variable of `Δ ∪ {φ}`, `A_τ c` for
    /// every declared constant, `L A_b` and `A_b y_b` for every base type.
    pub fn build_gamma(&self, delta: &[Expr], phi: &Expr) -> BTreeSet<Term> {
        let mut g = BTreeSet::new();
        for (x, ty) in free_vars_all(delta, phi) {
            g.insert(self.typed(&ty, Term::var(&x)));
        }
        for (c, ty) in &self.sig.consts {
            g.insert(self.typed(ty, Term::user(c)));
        }
        for b in &self.sig.base_types {
            g.insert(sugar::l(&Term::a(b)));
            g.insert(Term::app(Term::a(b), Term::var(&self.sentinel(b))));
        }
        g
    }

    /// `⟦Δ⟧ ∪ Γ(Δ, φ)`: the hypothesis set of a compiled derivation of
    /// `Δ ⊢ φ`.
    pub fn context(&self, delta: &[Expr], phi: &Expr) -> BTreeSet<Term> {
        let mut g = self.build_gamma(delta, phi);
        g.extend(delta.iter().map(translate_term));
        g
    }
}

/// The type predicate `A_τ`.
pub fn a_type(t: &SimpleType) -> Term {
    match t {
        SimpleType::O => sugar::h_term(),
        SimpleType::Base(b) => Term::a(b),
        SimpleType::Arrow(a, b) => sugar::f(&a_type(a), &a_type(b)),
    }
}

/// The structural translation: variables and constants to themselves,
/// application to application, `⊃` to the implication sugar and `∀x:τ.φ`
/// to `Ξ A_τ (λx.⟦φ⟧)`.
pub fn translate_term(q: &Expr) -> Term {
    match q {
        Expr::Var(x, _) => Term::var(x),
        Expr::Const(c, _) => Term::user(c),
        Expr::App(f, a) => Term::app(translate_term(f), translate_term(a)),
        Expr::Imp(a, b) => sugar::imp(&translate_term(a), &translate_term(b)),
        Expr::Forall(x, t, body) => sugar::xi(&a_type(t), &Term::lam(x, &translate_term(body))),
    }
}

/// Typed free variables of `Δ ∪ {φ}`.
pub fn free_vars_all(delta: &[Expr], phi: &Expr) -> BTreeSet<(Arc<str>, SimpleType)> {
    let mut out = phi.free_vars();
    for d in delta {
        out.extend(d.free_vars());
    }
    out
}
