//! Typed terms and formulas with named binders.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::Pred2Error;
use crate::types::SimpleType;

/// A typed term; formulas are expressions of type `o`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    /// Variable with its type.
    Var(Arc<str>, SimpleType),
    /// Constant with its type.
    Const(Arc<str>, SimpleType),
    /// Application.
    App(Arc<Expr>, Arc<Expr>),
    /// Implication `φ ⊃ ψ`.
    Imp(Arc<Expr>, Arc<Expr>),
    /// Universal quantification `∀x:τ. φ`.
    Forall(Arc<str>, SimpleType, Arc<Expr>),
}

/// Formulas are expressions of type `o`.
pub type Formula = Expr;

impl Expr {
    /// Variable.
    pub fn var(n: &str, t: SimpleType) -> Expr {
        Expr::Var(n.into(), t)
    }
    /// Constant.
    pub fn cnst(n: &str, t: SimpleType) -> Expr {
        Expr::Const(n.into(), t)
    }
    /// Application (unchecked).
    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Arc::new(f), Arc::new(a))
    }
    /// Implication.
    pub fn imp(a: Expr, b: Expr) -> Expr {
        Expr::Imp(Arc::new(a), Arc::new(b))
    }
    /// Universal quantifier.
    pub fn forall(x: &str, t: SimpleType, body: Expr) -> Expr {
        Expr::Forall(x.into(), t, Arc::new(body))
    }

    /// `⊥ = ∀p:o.p`.
    pub fn bot() -> Expr {
        Expr::forall("p", SimpleType::O, Expr::var("p", SimpleType::O))
    }

    /// `¬φ = φ ⊃ ⊥`.
    pub fn not(a: Expr) -> Expr {
        Expr::imp(a, Expr::bot())
    }

    /// `φ ∧ ψ = ∀p:o.(φ ⊃ ψ ⊃ p) ⊃ p` with `p` fresh.
    pub fn and(a: Expr, b: Expr) -> Expr {
        let p = fresh_for("p", &[&a, &b]);
        let pv = Expr::var(&p, SimpleType::O);
        Expr::forall(&p, SimpleType::O, Expr::imp(Expr::imp(a, Expr::imp(b, pv.clone())), pv))
    }

    /// `φ ∨ ψ = ∀p:o.(φ ⊃ p) ⊃ (ψ ⊃ p) ⊃ p` with `p` fresh.
    pub fn or(a: Expr, b: Expr) -> Expr {
        let p = fresh_for("p", &[&a, &b]);
        let pv = Expr::var(&p, SimpleType::O);
        Expr::forall(
            &p,
            SimpleType::O,
            Expr::imp(Expr::imp(a, pv.clone()), Expr::imp(Expr::imp(b, pv.clone()), pv)),
        )
    }

    /// `∃x:τ.φ = ∀p:o.(∀x:τ.φ ⊃ p) ⊃ p` with `p` fresh.
    pub fn exists(x: &str, t: SimpleType, body: Expr) -> Expr {
        let p = fresh_for("p", &[&body, &Expr::var(x, t.clone())]);
        let pv = Expr::var(&p, SimpleType::O);
        Expr::forall(&p, SimpleType::O, Expr::imp(Expr::forall(x, t, Expr::imp(body, pv.clone())), pv))
    }

    /// The type of the expression (assuming it is well-typed).
    pub fn ty(&self) -> SimpleType {
        match self {
            Expr::Var(_, t) | Expr::Const(_, t) => t.clone(),
            Expr::App(f, _) => match f.ty() {
                SimpleType::Arrow(_, r) => (*r).clone(),
                other => other,
            },
            Expr::Imp(..) | Expr::Forall(..) => SimpleType::O,
        }
    }

    /// Free variables with their types.
    pub fn free_vars(&self) -> BTreeSet<(Arc<str>, SimpleType)> {
        let mut out = BTreeSet::new();
        self.collect_fv(&mut Vec::new(), &mut out);
        out
    }

    /// Names of free variables.
    pub fn free_names(&self) -> BTreeSet<Arc<str>> {
        self.free_vars().into_iter().map(|(n, _)| n).collect()
    }

    fn collect_fv(&self, bound: &mut Vec<Arc<str>>, out: &mut BTreeSet<(Arc<str>, SimpleType)>) {
        match self {
            Expr::Var(n, t) => {
                if !bound.contains(n) {
                    out.insert((n.clone(), t.clone()));
                }
            }
            Expr::Const(..) => {}
            Expr::App(a, b) | Expr::Imp(a, b) => {
                a.collect_fv(bound, out);
                b.collect_fv(bound, out);
            }
            Expr::Forall(x, _, b) => {
                bound.push(x.clone());
                b.collect_fv(bound, out);
                bound.pop();
            }
        }
    }

    /// Whether variable `x` occurs free.
    pub fn has_free(&self, x: &str) -> bool {
        match self {
            Expr::Var(n, _) => &**n == x,
            Expr::Const(..) => false,
            Expr::App(a, b) | Expr::Imp(a, b) => a.has_free(x) || b.has_free(x),
            Expr::Forall(y, _, b) => &**y != x && b.has_free(x),
        }
    }

    /// All variable names occurring (free or bound).
    pub fn all_names(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Expr::Var(n, _) => {
                out.insert(n.clone());
            }
            Expr::Const(..) => {}
            Expr::App(a, b) | Expr::Imp(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Expr::Forall(x, _, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
        }
    }

    /// Constants occurring, with types.
    pub fn constants(&self, out: &mut BTreeSet<(Arc<str>, SimpleType)>) {
        match self {
            Expr::Const(n, t) => {
                out.insert((n.clone(), t.clone()));
            }
            Expr::Var(..) => {}
            Expr::App(a, b) | Expr::Imp(a, b) => {
                a.constants(out);
                b.constants(out);
            }
            Expr::Forall(_, _, b) => b.constants(out),
        }
    }

    /// Connective depth: number of nested `⊃`/`∀` nodes.
    pub fn depth(&self) -> usize {
        match self {
            Expr::Var(..) | Expr::Const(..) | Expr::App(..) => 0,
            Expr::Imp(a, b) => 1 + a.depth().max(b.depth()),
            Expr::Forall(_, _, b) => 1 + b.depth(),
        }
    }

    /// Whether this contains connectives (i.e. is not a plain term).
    pub fn has_connectives(&self) -> bool {
        match self {
            Expr::Var(..) | Expr::Const(..) => false,
            Expr::App(a, b) => a.has_connectives() || b.has_connectives(),
            Expr::Imp(..) | Expr::Forall(..) => true,
        }
    }

    /// Implication parts.
    pub fn as_imp(&self) -> Option<(&Expr, &Expr)> {
        match self {
            Expr::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Quantifier parts.
    pub fn as_forall(&self) -> Option<(&Arc<str>, &SimpleType, &Expr)> {
        match self {
            Expr::Forall(x, t, b) => Some((x, t, b)),
            _ => None,
        }
    }

    /// Whether this is (α-equivalent to) `⊥ = ∀p:o.p`.
    pub fn is_bot(&self) -> bool {
        matches!(self, Expr::Forall(x, SimpleType::O, b) if matches!(&**b, Expr::Var(y, _) if y == x))
    }
}

/// A name based on `base` that occurs in none of `es`.
pub fn fresh_for(base: &str, es: &[&Expr]) -> String {
    let mut names = BTreeSet::new();
    for e in es {
        e.all_names(&mut names);
    }
    fresh_name(base, &names)
}

/// Append primes to `base` until it avoids `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Arc<str>>) -> String {
    let mut n = base.to_string();
    while avoid.contains(n.as_str()) {
        n.push('\'');
    }
    n
}

/// α-equivalence of expressions.
pub fn alpha_eq(a: &Expr, b: &Expr) -> bool {
    fn go(a: &Expr, b: &Expr, env: &mut Vec<(Arc<str>, Arc<str>)>) -> bool {
        match (a, b) {
            (Expr::Var(x, t1), Expr::Var(y, t2)) => {
                let ix = env.iter().rposition(|(l, _)| l == x);
                let iy = env.iter().rposition(|(_, r)| r == y);
                match (ix, iy) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y && t1 == t2,
                    _ => false,
                }
            }
            (Expr::Const(x, t1), Expr::Const(y, t2)) => x == y && t1 == t2,
            (Expr::App(f1, a1), Expr::App(f2, a2)) | (Expr::Imp(f1, a1), Expr::Imp(f2, a2)) => {
                go(f1, f2, env) && go(a1, a2, env)
            }
            (Expr::Forall(x, t1, b1), Expr::Forall(y, t2, b2)) => {
                if t1 != t2 {
                    return false;
                }
                env.push((x.clone(), y.clone()));
                let r = go(b1, b2, env);
                env.pop();
                r
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

/// Whether `xs` contains an expression α-equivalent to `e`.
pub fn alpha_contains(xs: &[Expr], e: &Expr) -> bool {
    xs.iter().any(|x| alpha_eq(x, e))
}

/// Deduplicate up to α, keeping first occurrences.
pub fn alpha_dedup(xs: &[Expr]) -> Vec<Expr> {
    let mut out: Vec<Expr> = Vec::new();
    for x in xs {
        if !alpha_contains(&out, x) {
            out.push(x.clone());
        }
    }
    out
}

/// Set equality up to α.
pub fn alpha_set_eq(a: &[Expr], b: &[Expr]) -> bool {
    a.iter().all(|x| alpha_contains(b, x)) && b.iter().all(|x| alpha_contains(a, x))
}

/// Capture-avoiding substitution `φ[x/q]`; errors if `q` has the wrong type.
pub fn formula_subst(phi: &Expr, x: &str, x_ty: &SimpleType, q: &Expr) -> Result<Expr, Pred2Error> {
    if &q.ty() != x_ty {
        return Err(Pred2Error::Type {
            term: q.to_string(),
            expected: x_ty.to_string(),
            actual: q.ty().to_string(),
        });
    }
    Ok(subst(phi, x, q))
}

/// Capture-avoiding substitution without the type check.
pub fn subst(phi: &Expr, x: &str, q: &Expr) -> Expr {
    if !phi.has_free(x) {
        return phi.clone();
    }
    match phi {
        Expr::Var(n, _) if &**n == x => q.clone(),
        Expr::Var(..) | Expr::Const(..) => phi.clone(),
        Expr::App(a, b) => Expr::app(subst(a, x, q), subst(b, x, q)),
        Expr::Imp(a, b) => Expr::imp(subst(a, x, q), subst(b, x, q)),
        Expr::Forall(y, t, body) => {
            let qfv = q.free_names();
            if qfv.contains(y) {
                let mut avoid = qfv;
                body.all_names(&mut avoid);
                avoid.insert(x.into());
                let y2 = fresh_name(y, &avoid);
                let renamed = subst(body, y, &Expr::var(&y2, t.clone()));
                Expr::forall(&y2, t.clone(), subst(&renamed, x, q))
            } else {
                Expr::forall(y, t.clone(), subst(body, x, q))
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(e: &Expr, lvl: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            // lvl 0: top, 1: left of arrow, 2: application argument
            match e {
                Expr::Var(n, _) | Expr::Const(n, _) => f.write_str(n),
                _ if e.is_bot() => f.write_str("bot"),
                Expr::App(a, b) => {
                    if lvl >= 2 {
                        f.write_str("(")?;
                    }
                    go(a, 1, f)?;
                    f.write_str(" ")?;
                    go(b, 2, f)?;
                    if lvl >= 2 {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
                Expr::Imp(a, b) => {
                    if lvl >= 1 {
                        f.write_str("(")?;
                    }
                    go(a, 1, f)?;
                    f.write_str(" -> ")?;
                    go(b, 0, f)?;
                    if lvl >= 1 {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
                Expr::Forall(x, t, b) => {
                    if lvl >= 1 {
                        f.write_str("(")?;
                    }
                    write!(f, "forall {x}:{t}. ")?;
                    go(b, 0, f)?;
                    if lvl >= 1 {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> SimpleType {
        SimpleType::base("b")
    }

    #[test]
    fn subst_examples() {
        let p = Expr::cnst("P", SimpleType::arrow(b(), SimpleType::O));
        let q = Expr::cnst("Q", SimpleType::arrow(b(), SimpleType::arrow(b(), SimpleType::O)));
        let x = Expr::var("x", b());
        let y = Expr::var("y", b());
        let c = Expr::cnst("c", b());
        let px = Expr::app(p.clone(), x.clone());
        assert_eq!(subst(&px, "x", &c), Expr::app(p.clone(), c.clone()));
        let all = Expr::forall("x", b(), px);
        assert_eq!(subst(&all, "x", &c), all);
        let qxy = Expr::forall("y", b(), Expr::app(Expr::app(q.clone(), x), y.clone()));
        let r = subst(&qxy, "x", &y);
        let expected = Expr::forall("y'", b(), Expr::app(Expr::app(q, y), Expr::var("y'", b())));
        assert_eq!(r, expected);
    }

    #[test]
    fn alpha() {
        let a = Expr::forall("x", b(), Expr::var("x", b()));
        let a2 = Expr::forall("z", b(), Expr::var("z", b()));
        assert!(alpha_eq(&a, &a2));
        assert!(!alpha_eq(&a, &Expr::forall("z", b(), Expr::var("x", b()))));
        assert!(Expr::bot().is_bot());
    }
}
