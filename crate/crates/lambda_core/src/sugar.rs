//! The abbreviation layer: `I`, `S`, `K`, `H`, `⊃`, `F`, `⊥` and the
//! applied forms `K t`, `H t`, `F t₁ t₂`, together with the matching shape
//! recognisers used by the printer, the checker and the stage evaluators.
//!
//! All constructors expect locally closed arguments; the recognisers work on
//! arbitrary subterms.

use crate::term::{Const, Kind, Term};

/// `I = λx.x`.
pub fn i_term() -> Term {
    Term::lam_raw("x", Term::bvar(0))
}

/// `K = λxy.x`.
pub fn k_term() -> Term {
    Term::lam_raw("x", Term::lam_raw("y", Term::bvar(1)))
}

/// `S = λxyz.xz(yz)`.
pub fn s_term() -> Term {
    let body = Term::app(
        Term::app(Term::bvar(2), Term::bvar(0)),
        Term::app(Term::bvar(1), Term::bvar(0)),
    );
    Term::lam_raw("x", Term::lam_raw("y", Term::lam_raw("z", body)))
}

/// `H = λx.L(Kx)`, with `K x` in its applied form `λy.x`.
pub fn h_term() -> Term {
    Term::lam_raw("x", Term::app(Term::l(), Term::lam_raw("y", Term::bvar(1))))
}

/// `⊃ = λxy.Ξ(Kx)(Ky)`.
pub fn imp_term() -> Term {
    let body = Term::apps(
        Term::xi(),
        [Term::lam_raw("z", Term::bvar(2)), Term::lam_raw("z", Term::bvar(1))],
    );
    Term::lam_raw("x", Term::lam_raw("y", body))
}

/// `F = λxyf.Ξx(λz.y(fz))`.
pub fn f_term() -> Term {
    let inner = Term::lam_raw(
        "z",
        Term::app(Term::bvar(2), Term::app(Term::bvar(1), Term::bvar(0))),
    );
    let body = Term::apps(Term::xi(), [Term::bvar(2), inner]);
    Term::lam_raw("x", Term::lam_raw("y", Term::lam_raw("f", body)))
}

/// `⊥ = Ξ H I`.
pub fn bot() -> Term {
    Term::apps(Term::xi(), [h_term(), i_term()])
}

/// Applied `K t ↦ λx.t` with `x` fresh.
pub fn k(t: &Term) -> Term {
    Term::lam_raw("_", t.shift_up(1, 0))
}

/// Applied `H t ↦ L(λx.t)`.
pub fn h(t: &Term) -> Term {
    Term::app(Term::l(), k(t))
}

/// `t₁ ⊃ t₂ ↦ Ξ (K t₁) (K t₂)`.
pub fn imp(t1: &Term, t2: &Term) -> Term {
    Term::apps(Term::xi(), [k(t1), k(t2)])
}

/// `Ξ t₁ t₂`.
pub fn xi(t1: &Term, t2: &Term) -> Term {
    Term::apps(Term::xi(), [t1.clone(), t2.clone()])
}

/// `L t`.
pub fn l(t: &Term) -> Term {
    Term::app(Term::l(), t.clone())
}

/// Applied `F t₁ t₂`: `λf.Ξ t₁ (λx.t₂(f x))`, or the fused variant
/// `λf.Ξ t₁ (λx.q₂[z/(f x)])` when `t₂ ≡ λz.q₂`.
pub fn f(t1: &Term, t2: &Term) -> Term {
    let fx = Term::app(Term::bvar(1), Term::bvar(0));
    let inner_body = match t2.as_lam() {
        Some((_, q2)) if t2.is_locally_closed() => q2.instantiate(&fx),
        _ => Term::app(t2.shift_up(2, 0), fx),
    };
    let body = Term::apps(Term::xi(), [t1.shift_up(1, 0), Term::lam_raw("x", inner_body)]);
    Term::lam_raw("f", body)
}

/// Recognise `K t`, i.e. `λw.t` with `w` not occurring in `t`.
pub fn k_shape(t: &Term) -> Option<Term> {
    match t.kind() {
        Kind::Lam(_, b) if !b.uses_index(0) => Some(b.shift_down(0)),
        _ => None,
    }
}

/// Recognise `H t`, i.e. `L(λw.t)` with `w` not occurring in `t`.
pub fn h_shape(t: &Term) -> Option<Term> {
    let (f, a) = t.as_app()?;
    if !f.is_const(&Const::L) {
        return None;
    }
    k_shape(a)
}

/// Recognise `Ξ t₁ t₂`.
pub fn xi_shape(t: &Term) -> Option<(Term, Term)> {
    let (f, t2) = t.as_app()?;
    let (x, t1) = f.as_app()?;
    if !x.is_const(&Const::Xi) {
        return None;
    }
    Some((t1.clone(), t2.clone()))
}

/// Recognise `L t`.
pub fn l_shape(t: &Term) -> Option<Term> {
    let (f, a) = t.as_app()?;
    if f.is_const(&Const::L) {
        Some(a.clone())
    } else {
        None
    }
}

/// Recognise `t₁ ⊃ t₂`.
pub fn imp_shape(t: &Term) -> Option<(Term, Term)> {
    let (a, b) = xi_shape(t)?;
    Some((k_shape(&a)?, k_shape(&b)?))
}

/// All decompositions `(t₁, t₂)` such that `f(t₁, t₂) == t`.
pub fn f_shapes(t: &Term) -> Vec<(Term, Term)> {
    let mut out = Vec::new();
    let Some((_, body)) = t.as_lam() else {
        return out;
    };
    let Some((t1_raw, rest)) = xi_shape(body) else {
        return out;
    };
    if t1_raw.uses_index(0) {
        return out;
    }
    let Some((_, b)) = rest.as_lam() else {
        return out;
    };
    let t1 = t1_raw.shift_down(0);
    // (a) B = T₂ (f x) with T₂ independent of f, x.
    if let Some((t2_raw, arg)) = b.as_app() {
        let is_fx = matches!(arg.as_app(), Some((g, x))
            if matches!(g.kind(), Kind::BVar(1)) && matches!(x.kind(), Kind::BVar(0)));
        if is_fx && !t2_raw.uses_index(0) && !t2_raw.uses_index(1) {
            let t2 = t2_raw.shift_down(0).shift_down(0);
            if t2.as_lam().is_none() || !t2.is_locally_closed() {
                out.push((t1.clone(), t2));
            }
        }
    }
    // (b) every use of f and x is the application f x.
    if let Some(q2) = fuse(b, 0) {
        let t2 = Term::lam_raw("z", q2);
        if !out.iter().any(|(_, u)| *u == t2) {
            out.push((t1.clone(), t2));
        }
    }
    out.retain(|(a, c)| f(a, c) == *t);
    out
}

fn fuse(t: &Term, d: u32) -> Option<Term> {
    if t.loose_bound() <= d {
        return Some(t.clone());
    }
    match t.kind() {
        Kind::App(g, x)
            if matches!(g.kind(), Kind::BVar(i) if *i == d + 1)
                && matches!(x.kind(), Kind::BVar(j) if *j == d) =>
        {
            Some(Term::bvar(d))
        }
        Kind::BVar(i) => {
            if *i < d {
                Some(t.clone())
            } else if *i == d || *i == d + 1 {
                None
            } else {
                Some(Term::bvar(i - 1))
            }
        }
        Kind::App(g, x) => Some(Term::app(fuse(g, d)?, fuse(x, d)?)),
        Kind::Lam(n, b) => Some(Term::lam_raw(n, fuse(b, d + 1)?)),
        _ => Some(t.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_is_l_of_k() {
        let t = Term::user("c");
        assert_eq!(h(&t), l(&k(&t)));
        assert_eq!(h_shape(&h(&t)), Some(t));
    }

    #[test]
    fn imp_roundtrip() {
        let a = Term::var("a");
        let b = Term::var("b");
        assert_eq!(imp_shape(&imp(&a, &b)), Some((a, b)));
    }

    #[test]
    fn f_fused_and_plain() {
        let a = Term::a("b");
        let plain = f(&a, &Term::var("g"));
        assert!(f_shapes(&plain).contains(&(a.clone(), Term::var("g"))));
        let fused = f(&a, &h_term());
        let shapes = f_shapes(&fused);
        assert!(shapes.contains(&(a.clone(), h_term())), "{shapes:?}");
    }
}
