//! Sampled forcing invariants over the small-model family: upward closure,
//! falsum never forced, and the clause for implication.

use std::sync::Arc;

use kripke_fin::corpus::{formulas, small_models};
use kripke_fin::{forces, forcing_set, valuations, KripkeModel};
use pred2::{Expr, SimpleType};
use proptest::prelude::*;

fn vars(fs: &[&Expr]) -> Vec<(Arc<str>, SimpleType)> {
    let mut v: Vec<_> = fs.iter().flat_map(|f| f.free_vars()).collect();
    v.sort();
    v.dedup();
    v
}

fn models() -> Vec<KripkeModel> {
    small_models(2, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn forcing_is_upward_closed_and_consistent(mi in any::<usize>(), fi in any::<usize>(), wi in any::<usize>()) {
        let ms = models();
        let m = &ms[mi % ms.len()];
        let fs = formulas(2);
        let phi = &fs[fi % fs.len()];
        let ws = valuations(m, &vars(&[phi]));
        let w = &ws[wi % ws.len()];
        let set = forcing_set(m, w, phi).unwrap();
        prop_assert!(m.is_upward_closed(set));
        prop_assert_eq!(forcing_set(m, w, &Expr::bot()).unwrap(), 0);
        for s in 0..m.n_states() {
            prop_assert_eq!(forces(m, s, w, phi).unwrap(), set & (1 << s) != 0);
        }
    }

    #[test]
    fn implication_clause(mi in any::<usize>(), a in any::<usize>(), c in any::<usize>(), wi in any::<usize>()) {
        let ms = models();
        let m = &ms[mi % ms.len()];
        let fs = formulas(1);
        let (pa, pc) = (&fs[a % fs.len()], &fs[c % fs.len()]);
        let ws = valuations(m, &vars(&[pa, pc]));
        let w = &ws[wi % ws.len()];
        let imp = forcing_set(m, w, &Expr::imp(pa.clone(), pc.clone())).unwrap();
        let (sa, sc) = (forcing_set(m, w, pa).unwrap(), forcing_set(m, w, pc).unwrap());
        for s in 0..m.n_states() {
            let expected = (0..m.n_states()).filter(|&t| m.le[s][t]).all(|t| sa & (1 << t) == 0 || sc & (1 << t) != 0);
            prop_assert_eq!(imp & (1 << s) != 0, expected);
        }
    }
}
