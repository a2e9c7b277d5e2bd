//! Inhabitation witnesses, the propositionhood lemma, the typing lemma and
//! the proof compiler from second-order natural deduction into `I0`.

use std::collections::BTreeSet;
use std::sync::Arc;

use illative::{cut, elaborate_pe, elaborate_ph, elaborate_pi, subst_derivation, weaken_to, ElabError};
use illative::{IParams, IRule, IllativeDerivation};
use lambda_core::sugar;
use lambda_core::{fresh_name, print, Term};
use pred2::expr::subst;
use pred2::{Expr, Pred2Derivation, Pred2Rule, SimpleType};

use crate::env::{free_vars_all, TranslationEnv};

/// Reasons a derivation cannot be compiled.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    /// The propositionhood derivation for a subformula could not be closed.
    #[error("cannot derive H of subformula {subformula}: {reason}")]
    HLemma {
        /// The offending subformula.
        subformula: String,
        /// Why.
        reason: String,
    },
    /// A quantifier ranges over a type whose typehood is not derivable.
    #[error("quantification over unsupported type {0}")]
    UnsupportedType(String),
    /// The input derivation does not have the expected shape.
    #[error("malformed {rule} node: {reason}")]
    Malformed {
        /// Rule of the offending node.
        rule: &'static str,
        /// Why.
        reason: String,
    },
    /// A derived-rule elaboration failed.
    #[error(transparent)]
    Elab(#[from] ElabError),
}

fn malformed(rule: &'static str, reason: impl Into<String>) -> CompileError {
    CompileError::Malformed { rule, reason: reason.into() }
}

/// Weaken `d` to `hyps`, which must contain its hypotheses.
fn extend_to(d: &IllativeDerivation, hyps: &BTreeSet<Term>, rule: &'static str) -> Result<IllativeDerivation, CompileError> {
    if let Some(h) = d.hyps.difference(hyps).next() {
        return Err(malformed(rule, format!("premise uses hypothesis {} outside the context", print(h))));
    }
    Ok(weaken_to(d, hyps))
}

fn names_of(hyps: &BTreeSet<Term>) -> BTreeSet<Arc<str>> {
    hyps.iter().flat_map(|h| h.free_vars()).collect()
}

impl TranslationEnv {
    /// The hypotheses needed to inhabit `τ`: `L A_b` and `A_b y_b` for every
    /// base type `b` occurring in `τ`.
    pub fn inhabit_hyps(&self, ty: &SimpleType) -> BTreeSet<Term> {
        let mut bs = BTreeSet::new();
        ty.bases(&mut bs);
        let mut g = BTreeSet::new();
        for b in bs {
            g.insert(sugar::l(&Term::a(&b)));
            g.insert(Term::app(Term::a(&b), Term::var(&self.sentinel(&b))));
        }
        g
    }

    /// A witness `t` with a derivation of `A_τ t` from [`Self::inhabit_hyps`]:
    /// the sentinel for a base type, `L H` for `o`, and `K t₂` for `b → τ₂`.
    pub fn inhabit_minimal(&self, ty: &SimpleType) -> (Term, IllativeDerivation) {
        let hyps = self.inhabit_hyps(ty);
        match ty {
            SimpleType::Base(b) => {
                let y = Term::var(&self.sentinel(b));
                let d = IllativeDerivation::ax(hyps, self.typed(ty, y.clone()));
                (y, d)
            }
            SimpleType::O => {
                let t = illative::check::l_h();
                let ax = IllativeDerivation::new(IRule::AxLH, hyps.clone(), t.clone(), vec![]);
                let d = IllativeDerivation::new(IRule::Hi, hyps, self.typed(ty, t.clone()), vec![ax]);
                (t, d)
            }
            SimpleType::Arrow(a, b) => {
                let (t2, e2) = self.inhabit_minimal(b);
                let t = sugar::k(&t2);
                let avoid = names_of(&hyps);
                let z = fresh_name("_z", &|n: &str| avoid.contains(n));
                let zv = Term::var(&z);
                let body = Term::lam(&z, &self.typed(b, Term::app(t.clone(), zv.clone())));
                let concl = sugar::xi(&self.a_type(a), &body);
                let mut hz = hyps.clone();
                hz.insert(self.typed(a, zv.clone()));
                let p0 = IllativeDerivation::eq(weaken_to(&e2, &hz), Term::app(body, zv));
                let p1 = IllativeDerivation::ax(hyps.clone(), sugar::l(&self.a_type(a)));
                let xi = IllativeDerivation::new(IRule::XiI, hyps, concl, vec![p0, p1])
                    .with_params(IParams { x: Some(Arc::from(z.as_str())), ..IParams::default() });
                let d = IllativeDerivation::eq(xi, self.typed(ty, t.clone()));
                (t, d)
            }
        }
    }

    /// A witness `t` with a derivation of `Γ(Δ) ⊢ A_τ t`. Every base type of
    /// `τ` must be declared in the signature.
    pub fn inhabit(&self, ty: &SimpleType, delta: &[Expr]) -> Result<(Term, IllativeDerivation), CompileError> {
        let g = self.build_gamma(delta, &Expr::bot());
        let (t, d) = self.inhabit_minimal(ty);
        if d.hyps.difference(&g).next().is_some() {
            return Err(CompileError::UnsupportedType(ty.to_string()));
        }
        Ok((t, weaken_to(&d, &g)))
    }

    /// `L A_τ` from `hyps`, for `τ` a declared base type or `o`.
    fn type_hood(&self, hyps: &BTreeSet<Term>, ty: &SimpleType) -> Result<IllativeDerivation, CompileError> {
        match ty {
            SimpleType::O => Ok(IllativeDerivation::new(IRule::AxLH, hyps.clone(), illative::check::l_h(), vec![])),
            SimpleType::Base(_) => {
                let la = sugar::l(&self.a_type(ty));
                if !hyps.contains(&la) {
                    return Err(CompileError::UnsupportedType(ty.to_string()));
                }
                Ok(IllativeDerivation::ax(hyps.clone(), la))
            }
            SimpleType::Arrow(..) => Err(CompileError::UnsupportedType(ty.to_string())),
        }
    }

    /// The typing lemma: `hyps ⊢ A_τ ⟦q⟧` where `τ` is the type of `q`.
    pub fn typing(&self, hyps: &BTreeSet<Term>, q: &Expr) -> Result<IllativeDerivation, CompileError> {
        let ty = q.ty();
        let tq = self.translate(q);
        let want = self.typed(&ty, tq.clone());
        match q {
            Expr::Var(..) | Expr::Const(..) => {
                if hyps.contains(&want) {
                    Ok(IllativeDerivation::ax(hyps.clone(), want))
                } else {
                    Err(CompileError::HLemma {
                        subformula: q.to_string(),
                        reason: format!("{} is not in the context", print(&want)),
                    })
                }
            }
            Expr::App(q1, q2) => {
                let d1 = self.typing(hyps, q1)?;
                let (dom, cod) = match q1.ty() {
                    SimpleType::Arrow(a, b) => ((*a).clone(), (*b).clone()),
                    other => return Err(malformed("typing", format!("applied term has type {other}"))),
                };
                let t1 = self.translate(q1);
                let mut avoid = names_of(hyps);
                avoid.extend(t1.free_vars());
                let z = fresh_name("_z", &|n: &str| avoid.contains(n));
                let body = Term::lam(&z, &self.typed(&cod, Term::app(t1, Term::var(&z))));
                let a_dom = self.a_type(&dom);
                let major = IllativeDerivation::eq(d1, sugar::xi(&a_dom, &body));
                let minor = self.typing(hyps, q2)?;
                let t3 = self.translate(q2);
                let xe = IllativeDerivation::new(IRule::XiE, hyps.clone(), Term::app(body, t3.clone()), vec![major, minor])
                    .with_params(IParams { t1: Some(a_dom), t3: Some(t3), ..IParams::default() });
                Ok(IllativeDerivation::eq(xe, want))
            }
            Expr::Imp(..) | Expr::Forall(..) => {
                let d = self.h_lemma(hyps, q)?;
                Ok(IllativeDerivation::eq_to(d, want))
            }
        }
    }

    /// The propositionhood lemma: `hyps ⊢ H ⟦φ⟧`, by induction on `φ` using
    /// the typing lemma for atoms, `PH` for implications and `XiH` for
    /// quantifiers. `hyps` must declare the free variables of `φ`.
    pub fn h_lemma(&self, hyps: &BTreeSet<Term>, phi: &Expr) -> Result<IllativeDerivation, CompileError> {
        let t = self.translate(phi);
        match phi {
            Expr::Imp(a, b) => {
                let t1 = self.translate(a);
                let mut h1 = hyps.clone();
                h1.insert(t1);
                let d1 = self.h_lemma(&h1, b)?;
                let d2 = self.h_lemma(hyps, a)?;
                Ok(elaborate_ph(&d1, &d2)?)
            }
            Expr::Forall(x, ty, body) => {
                let (a_ty, t2) = sugar::xi_shape(&t).expect("translated quantifier");
                let mut avoid = names_of(hyps);
                phi.all_names(&mut avoid);
                let z = pred2::expr::fresh_name(x, &avoid);
                let zv = Term::var(&z);
                let mut hz = hyps.clone();
                hz.insert(Term::app(a_ty.clone(), zv.clone()));
                let inner = subst(body, x, &Expr::var(&z, ty.clone()));
                let d0 = self.h_lemma(&hz, &inner)?;
                let p0 = IllativeDerivation::eq_to(d0, sugar::h(&Term::app(t2, zv)));
                let p1 = self.type_hood(hyps, ty).map_err(|e| CompileError::HLemma {
                    subformula: phi.to_string(),
                    reason: e.to_string(),
                })?;
                Ok(IllativeDerivation::new(IRule::XiH, hyps.clone(), sugar::h(&t), vec![p0, p1])
                    .with_params(IParams { x: Some(Arc::from(z.as_str())), ..IParams::default() }))
            }
            _ => {
                let d = self.typing(hyps, phi)?;
                Ok(IllativeDerivation::eq_to(d, sugar::h(&t)))
            }
        }
    }

    /// Compile a (non-classical) derivation of `Δ ⊢ φ` into an `I0`
    /// derivation of `⟦Δ⟧, Γ(Δ, φ) ⊢ ⟦φ⟧`.
    pub fn compile_proof(&self, d: &Pred2Derivation) -> Result<IllativeDerivation, CompileError> {
        let ctx = self.context(&d.hyps, &d.concl);
        match d.rule {
            Pred2Rule::Axiom => {
                let t = self.translate(&d.concl);
                if !ctx.contains(&t) {
                    return Err(malformed("Axiom", "conclusion is not a hypothesis"));
                }
                Ok(IllativeDerivation::ax(ctx, t))
            }
            Pred2Rule::DoubleNeg => Err(malformed("DoubleNeg", "classical axioms have no intuitionistic translation")),
            Pred2Rule::ImpI => {
                let [p] = d.premises.as_slice() else { return Err(malformed("ImpI", "expects one premise")) };
                let (phi1, _) = d.concl.as_imp().ok_or_else(|| malformed("ImpI", "conclusion is not an implication"))?;
                let mut h1 = ctx.clone();
                h1.insert(self.translate(phi1));
                let d1 = extend_to(&self.compile_proof(p)?, &h1, "ImpI")?;
                let d2 = self.h_lemma(&ctx, phi1)?;
                Ok(elaborate_pi(&d1, &d2)?)
            }
            Pred2Rule::ImpE => {
                let [major, minor] = d.premises.as_slice() else {
                    return Err(malformed("ImpE", "expects two premises"));
                };
                let cmaj = self.compile_proof(major)?;
                let cmin = self.compile_proof(minor)?;
                let mut star = ctx.clone();
                star.extend(cmaj.hyps.iter().cloned());
                star.extend(cmin.hyps.iter().cloned());
                let r = elaborate_pe(&extend_to(&cmaj, &star, "ImpE")?, &extend_to(&cmin, &star, "ImpE")?)?;
                let r = IllativeDerivation::eq_to(r, self.translate(&d.concl));
                let mut all = Vec::new();
                for p in [major, minor] {
                    all.extend(p.hyps.iter().cloned());
                    all.push(p.concl.clone());
                }
                self.repair(r, &all, d, ctx)
            }
            Pred2Rule::ForallI => {
                let [p] = d.premises.as_slice() else { return Err(malformed("ForallI", "expects one premise")) };
                let (binder, ty, _) =
                    d.concl.as_forall().ok_or_else(|| malformed("ForallI", "conclusion is not a quantifier"))?;
                let x = d.params.var.clone().unwrap_or_else(|| binder.to_string());
                let t = self.translate(&d.concl);
                let (a_ty, t2) = sugar::xi_shape(&t).expect("translated quantifier");
                let xv = Term::var(&x);
                let mut hx = ctx.clone();
                hx.insert(Term::app(a_ty, xv.clone()));
                let d0 = extend_to(&self.compile_proof(p)?, &hx, "ForallI")?;
                let p0 = IllativeDerivation::eq_to(d0, Term::app(t2, xv));
                let p1 = self.type_hood(&ctx, ty)?;
                Ok(IllativeDerivation::new(IRule::XiI, ctx, t, vec![p0, p1])
                    .with_params(IParams { x: Some(Arc::from(x.as_str())), ..IParams::default() }))
            }
            Pred2Rule::ForallE => {
                let [p] = d.premises.as_slice() else { return Err(malformed("ForallE", "expects one premise")) };
                let q = d.params.term.as_ref().ok_or_else(|| malformed("ForallE", "missing instantiating term"))?;
                let cp = self.compile_proof(p)?;
                let mut star = ctx.clone();
                star.extend(cp.hyps.iter().cloned());
                for (v, ty) in q.free_vars() {
                    star.insert(self.typed(&ty, Term::var(&v)));
                }
                let major = extend_to(&cp, &star, "ForallE")?;
                let (a_ty, t2) = sugar::xi_shape(&major.concl)
                    .ok_or_else(|| malformed("ForallE", "premise is not a quantifier"))?;
                let minor = self.typing(&star, q)?;
                let t3 = self.translate(q);
                let xe = IllativeDerivation::new(IRule::XiE, star, Term::app(t2, t3.clone()), vec![major, minor])
                    .with_params(IParams { t1: Some(a_ty), t3: Some(t3), ..IParams::default() });
                let r = IllativeDerivation::eq_to(xe, self.translate(&d.concl));
                let mut all: Vec<Expr> = p.hyps.clone();
                all.push(p.concl.clone());
                all.push(q.clone());
                self.repair(r, &all, d, ctx)
            }
        }
    }

    /// Remove the typing hypotheses `A_τ v` of variables that occur in the
    /// premises but not in the conclusion's judgment: substitute an
    /// inhabitant for `v`, then cut the inhabitant's typing hypothesis.
    fn repair(
        &self,
        mut r: IllativeDerivation,
        involved: &[Expr],
        d: &Pred2Derivation,
        target: BTreeSet<Term>,
    ) -> Result<IllativeDerivation, CompileError> {
        let keep = free_vars_all(&d.hyps, &d.concl);
        let mut extra = BTreeSet::new();
        for e in involved {
            extra.extend(e.free_vars().into_iter().filter(|v| !keep.contains(v)));
        }
        for (v, ty) in extra {
            let (w, e) = self.inhabit_minimal(&ty);
            if e.hyps.difference(&target).next().is_some() {
                return Err(CompileError::UnsupportedType(ty.to_string()));
            }
            r = subst_derivation(&r, &v, &w);
            let a = self.typed(&ty, w);
            if !target.contains(&a) {
                r = cut(&r, &a, &e);
            }
        }
        if r.hyps != target {
            let stray: Vec<String> = r.hyps.symmetric_difference(&target).map(print).collect();
            return Err(malformed(d.rule.name(), format!("context repair left {}", stray.join(", "))));
        }
        Ok(r)
    }
}

/// Compile with a fresh environment over `sig`.
pub fn compile_proof(sig: &pred2::Signature, d: &Pred2Derivation) -> Result<IllativeDerivation, CompileError> {
    TranslationEnv::new(sig.clone()).compile_proof(d)
}
