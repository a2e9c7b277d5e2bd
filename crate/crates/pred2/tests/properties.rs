//! Generated-formula properties: printing round trips, substitution and
//! α-equivalence laws, and derivation-file round trips.

use std::collections::BTreeSet;
use std::sync::Arc;

use pred2::corpus::{corpus, corpus_signature};
use pred2::expr::subst;
use pred2::{alpha_eq, check_pred2_derivation, parse_formula, DerivationFile, Expr, Mode, SimpleType};
use proptest::prelude::*;

fn b() -> SimpleType {
    SimpleType::base("b")
}

fn bo() -> SimpleType {
    SimpleType::arrow(b(), SimpleType::O)
}

fn bterm() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::var("x", b())),
        Just(Expr::var("y", b())),
        Just(Expr::cnst("c", b())),
        Just(Expr::app(Expr::cnst("f", SimpleType::arrow(b(), b())), Expr::var("y", b()))),
    ]
}

fn atom() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::var("p", SimpleType::O)),
        Just(Expr::var("q", SimpleType::O)),
        bterm().prop_map(|t| Expr::app(Expr::cnst("P", bo()), t)),
        (bterm(), bterm())
            .prop_map(|(s, t)| Expr::app(Expr::app(Expr::cnst("R", SimpleType::arrow(b(), bo())), s), t)),
    ]
}

fn formula() -> impl Strategy<Value = Expr> {
    atom().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, c)| Expr::imp(a, c)),
            (prop_oneof![Just("x"), Just("y")], inner.clone()).prop_map(|(x, a)| Expr::forall(x, b(), a)),
            (prop_oneof![Just("p"), Just("q")], inner).prop_map(|(x, a)| Expr::forall(x, SimpleType::O, a)),
        ]
    })
}

fn names(e: &Expr) -> BTreeSet<Arc<str>> {
    e.free_vars().into_iter().map(|(x, _)| x).collect()
}

/// Rename every bound variable to a fresh name, independently of the
/// library's substitution.
fn rename_bound(e: &Expr, counter: &mut usize, env: &[(Arc<str>, Arc<str>)]) -> Expr {
    match e {
        Expr::Var(x, t) => {
            let y = env.iter().rev().find(|(a, _)| a == x).map(|(_, b)| b.clone()).unwrap_or_else(|| x.clone());
            Expr::Var(y, t.clone())
        }
        Expr::Const(..) => e.clone(),
        Expr::App(f, a) => Expr::app(rename_bound(f, counter, env), rename_bound(a, counter, env)),
        Expr::Imp(a, c) => Expr::imp(rename_bound(a, counter, env), rename_bound(c, counter, env)),
        Expr::Forall(x, t, body) => {
            *counter += 1;
            let y: Arc<str> = Arc::from(format!("v{counter}").as_str());
            let mut env2 = env.to_vec();
            env2.push((x.clone(), y.clone()));
            Expr::Forall(y, t.clone(), Arc::new(rename_bound(body, counter, &env2)))
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_round_trips(phi in formula()) {
        let again = parse_formula(&phi.to_string(), &corpus_signature(), Mode::Pred2_0).unwrap();
        prop_assert!(alpha_eq(&phi, &again), "{phi} vs {again}");
    }

    #[test]
    fn bound_renaming_is_alpha_equivalent(phi in formula()) {
        let renamed = rename_bound(&phi, &mut 0, &[]);
        prop_assert!(alpha_eq(&phi, &renamed));
        prop_assert_eq!(names(&phi), names(&renamed));
    }

    #[test]
    fn substitution_free_variables(phi in formula(), q in bterm()) {
        let r = subst(&phi, "x", &q);
        let mut allowed = names(&phi);
        allowed.remove("x");
        if phi.has_free("x") {
            allowed.extend(names(&q));
        }
        prop_assert!(names(&r).is_subset(&allowed), "{phi} [x/{q}] = {r}");
        prop_assert_eq!(r.ty(), SimpleType::O);
    }

    #[test]
    fn substituting_a_variable_for_itself_is_identity(phi in formula()) {
        prop_assert!(alpha_eq(&subst(&phi, "x", &Expr::var("x", b())), &phi));
    }

    #[test]
    fn substitution_of_absent_variable_is_identity(phi in formula(), q in bterm()) {
        let bound_x = Expr::forall("x", b(), phi.clone());
        prop_assert_eq!(subst(&bound_x, "x", &q), bound_x);
    }

    #[test]
    fn weakening_preserves_validity(i in 0usize..40, extra in proptest::collection::vec(formula(), 0..3)) {
        let sig = corpus_signature();
        let all = corpus();
        let (_, d) = &all[i % all.len()];
        // closed hypotheses cannot clash with eigenvariables
        let closed: Vec<Expr> = extra
            .iter()
            .map(|e| e.free_vars().into_iter().fold(e.clone(), |acc, (x, t)| Expr::forall(&x, t, acc)))
            .collect();
        let w = d.weaken(&closed);
        prop_assert!(check_pred2_derivation(&w, &sig, false).is_ok());
    }
}

#[test]
fn derivation_files_round_trip() {
    let sig = corpus_signature();
    for (name, d) in corpus() {
        let (sig2, d2) = DerivationFile::load(&DerivationFile::store(&sig, &d)).unwrap();
        assert_eq!(sig2, sig, "{name}");
        assert_eq!(d2, d, "{name}");
    }
}
