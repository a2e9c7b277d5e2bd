//! Generators for exhaustive checks: a small signature (one base type, one
//! unary predicate, one constant), every full model over it with at most two
//! states and two base elements, and every formula up to a connective depth.

use std::collections::BTreeMap;

use pred2::{alpha_eq, Expr, Signature, SimpleType};

use crate::enumerate::{full_model, interpretations, posets};
use crate::model::KripkeModel;

/// The base type.
pub fn b() -> SimpleType {
    SimpleType::base("b")
}

/// `b -> o`.
pub fn pred_ty() -> SimpleType {
    SimpleType::arrow(b(), SimpleType::O)
}

/// Signature with `P : b -> o`, `c : b`, variables `x, y : b`, `p : o`.
pub fn small_signature() -> Signature {
    Signature::default()
        .with_base("b")
        .with_const("P", pred_ty())
        .with_const("c", b())
        .with_var("x", b())
        .with_var("y", b())
        .with_var("p", SimpleType::O)
}

/// Every model over [`small_signature`] with `1..=max_states` states (posets
/// up to isomorphism), `1..=max_dom` elements of `b`, all upward-closed sets
/// in `D_o`, all functions in `D_{b→o}`, and every interpretation of `P`, `c`.
pub fn small_models(max_states: usize, max_dom: usize) -> Vec<KripkeModel> {
    let sig = small_signature();
    let mut out = Vec::new();
    for n in 1..=max_states {
        for le in posets(n) {
            for k in 1..=max_dom {
                let sizes = BTreeMap::from([("b".to_string(), k)]);
                let skel = full_model(&le, &sizes, &[pred_ty()], 1 << 16).expect("small function spaces");
                for interp in interpretations(&skel, &sig.consts) {
                    let mut m = skel.clone();
                    for (c, e) in interp {
                        m.set_const(&c, e);
                    }
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Atomic formulas `P c`, `P x`, `P y`, `p`.
pub fn atoms() -> Vec<Expr> {
    let p = Expr::cnst("P", pred_ty());
    vec![
        Expr::app(p.clone(), Expr::cnst("c", b())),
        Expr::app(p.clone(), Expr::var("x", b())),
        Expr::app(p, Expr::var("y", b())),
        Expr::var("p", SimpleType::O),
    ]
}

/// All formulas of connective depth `<= depth` built from [`atoms`] with
/// `⊃` and `∀x:b`, `∀y:b`, `∀p:o`, deduplicated up to α, in generation order.
pub fn formulas(depth: usize) -> Vec<Expr> {
    let mut layers: Vec<Vec<Expr>> = vec![atoms()];
    let mut all = atoms();
    for _ in 0..depth {
        let prev = all.clone();
        let mut new = Vec::new();
        for a in &prev {
            for c in &prev {
                new.push(Expr::imp(a.clone(), c.clone()));
            }
        }
        for a in &prev {
            new.push(Expr::forall("x", b(), a.clone()));
            new.push(Expr::forall("y", b(), a.clone()));
            new.push(Expr::forall("p", SimpleType::O, a.clone()));
        }
        for f in new {
            if !all.iter().any(|g| alpha_eq(g, &f)) {
                all.push(f);
            }
        }
        layers.push(all.clone());
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(small_models(2, 2).len(), 67);
        assert_eq!(formulas(0).len(), 4);
        let f1 = formulas(1);
        assert!(f1.len() > 4 && f1.iter().all(|f| f.depth() <= 1));
        let f2 = formulas(2);
        assert!(f2.iter().all(|f| f.depth() <= 2));
    }
}
