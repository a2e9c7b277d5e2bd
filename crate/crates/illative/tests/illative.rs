//! Checker examples, derived-rule elaboration, structural operations and
//! bounded search.

use std::collections::BTreeSet;

use illative::check::l_h;
use illative::random::{random_context, random_derivation, random_instance};
use illative::{
    check_illative, check_illative_with, cut, dn_axiom, elaborate_derived, elaborate_pe, elaborate_pi, search_proof,
    subst_derivation, term_model_eval, weaken, CheckConfig, CheckOutcome, DerivedRule, IParams, IRule,
    IllativeDerivation, IllativeFile, RuleError, SearchConfig, System,
};
use lambda_core::sugar;
use lambda_core::{parse, ReductionBudget, Term, Verdict};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn b() -> ReductionBudget {
    ReductionBudget::default()
}

fn set(ts: &[Term]) -> BTreeSet<Term> {
    ts.iter().cloned().collect()
}

fn ok(d: &IllativeDerivation, s: System) {
    assert_eq!(check_illative(d, s, &b()), Ok(CheckOutcome::Ok), "{d:#?}");
}

#[test]
fn axiom_l_h() {
    let d = IllativeDerivation::new(IRule::AxLH, BTreeSet::new(), l_h(), vec![]);
    ok(&d, System::I0);
    assert_eq!(l_h(), parse("L H").unwrap());
}

#[test]
fn axiom_needs_hypothesis() {
    let c = Term::user("c");
    ok(&IllativeDerivation::ax(set(&[c.clone()]), c.clone()), System::I0);
    let bad = IllativeDerivation::ax(BTreeSet::new(), c);
    assert!(matches!(check_illative(&bad, System::I0, &b()), Err(RuleError::Mismatch { .. })));
}

#[test]
fn axiom_base_types() {
    let d = IllativeDerivation::new(IRule::AxLA, BTreeSet::new(), sugar::l(&Term::a("nat")), vec![]);
    ok(&d, System::I0);
    let cfg = CheckConfig { bases: Some(BTreeSet::from(["b".to_string()])), ..CheckConfig::new(System::I0, b()) };
    assert!(check_illative_with(&d, &cfg).is_err());
}

#[test]
fn eq_rewrites_redex() {
    let c = Term::user("c");
    let redex = Term::app(sugar::i_term(), c.clone());
    let d = IllativeDerivation::eq(IllativeDerivation::ax(set(&[redex.clone()]), redex.clone()), c.clone());
    ok(&d, System::I0);
    let wrong = IllativeDerivation::eq(IllativeDerivation::ax(set(&[redex.clone()]), redex), Term::user("e"));
    assert!(check_illative(&wrong, System::I0, &b()).is_err());
}

#[test]
fn eq_undecided_on_divergence() {
    let omega = parse(r"(\x. x x) (\x. x x)").unwrap();
    let d = IllativeDerivation::eq(IllativeDerivation::ax(set(&[omega.clone()]), omega.clone()), Term::user("c"));
    assert_eq!(check_illative(&d, System::I0, &b()), Ok(CheckOutcome::Undecided(vec!["root".into()])));
}

/// `⊢ Ξ H H`-style introduction: `{H x} ⊢ H x`, `⊢ L H`.
fn xi_h_h(x: &str) -> IllativeDerivation {
    let h = sugar::h_term();
    let hx = Term::app(h.clone(), Term::var("x"));
    let p0 = IllativeDerivation::ax(set(&[hx.clone()]), hx);
    let p1 = IllativeDerivation::new(IRule::AxLH, BTreeSet::new(), l_h(), vec![]);
    IllativeDerivation::new(IRule::XiI, BTreeSet::new(), sugar::xi(&h, &h), vec![p0, p1])
        .with_params(IParams { x: Some(x.into()), ..IParams::default() })
}

#[test]
fn xi_introduction() {
    ok(&xi_h_h("x"), System::I0);
}

#[test]
fn xi_introduction_freshness() {
    // the eigenvariable occurs in t2
    let h = sugar::h_term();
    let t2 = Term::app(Term::user("P"), Term::var("x"));
    let t2x = Term::app(t2.clone(), Term::var("x"));
    let hx = Term::app(h.clone(), Term::var("x"));
    let p0 = IllativeDerivation::ax(set(&[hx.clone(), t2x.clone()]), t2x);
    let p1 = IllativeDerivation::new(IRule::AxLH, BTreeSet::new(), l_h(), vec![]);
    let d = IllativeDerivation::new(IRule::XiI, BTreeSet::new(), sugar::xi(&h, &t2), vec![p0, p1])
        .with_params(IParams { x: Some("x".into()), ..IParams::default() });
    assert!(matches!(
        check_illative(&d, System::I0, &b()),
        Err(RuleError::FreshnessViolation { var, .. }) if var == "x"
    ));
}

#[test]
fn xi_elimination() {
    // from Ξ H H and H c derive H c
    let h = sugar::h_term();
    let c = Term::user("c");
    let hc = Term::app(h.clone(), c.clone());
    let g = set(&[hc.clone()]);
    let major = weaken(&xi_h_h("x"), &g);
    let minor = IllativeDerivation::ax(g.clone(), hc.clone());
    let d = IllativeDerivation::new(IRule::XiE, g.clone(), hc.clone(), vec![major.clone(), minor.clone()])
        .with_params(IParams { t1: Some(h.clone()), t3: Some(c.clone()), ..IParams::default() });
    ok(&d, System::I0);
    // a wrong recorded instance is rejected
    let bad = IllativeDerivation::new(IRule::XiE, g, hc, vec![major, minor])
        .with_params(IParams { t1: Some(h), t3: Some(Term::user("e")), ..IParams::default() });
    assert!(check_illative(&bad, System::I0, &b()).is_err());
}

#[test]
fn hi_and_xi_h() {
    let c = Term::user("c");
    let g = set(&[c.clone()]);
    let d = IllativeDerivation::new(IRule::Hi, g.clone(), sugar::h(&c), vec![IllativeDerivation::ax(g, c.clone())]);
    ok(&d, System::I0);
    // ⊢ H (Ξ H H): {H x} ⊢ H (H x) by Hi, ⊢ L H
    let h = sugar::h_term();
    let hx = Term::app(h.clone(), Term::var("x"));
    let gx = set(&[hx.clone()]);
    let p0 = IllativeDerivation::new(IRule::Hi, gx.clone(), sugar::h(&hx), vec![IllativeDerivation::ax(gx, hx)]);
    let p1 = IllativeDerivation::new(IRule::AxLH, BTreeSet::new(), l_h(), vec![]);
    let d = IllativeDerivation::new(IRule::XiH, BTreeSet::new(), sugar::h(&sugar::xi(&h, &h)), vec![p0, p1]);
    ok(&d, System::I0);
}

#[test]
fn function_types_only_outside_i0() {
    let h = sugar::h_term();
    let hx = Term::app(h.clone(), Term::var("x"));
    let p0 = IllativeDerivation::new(IRule::AxLH, set(&[hx]), l_h(), vec![]);
    let p1 = IllativeDerivation::new(IRule::AxLH, BTreeSet::new(), l_h(), vec![]);
    let d = IllativeDerivation::new(IRule::FL, BTreeSet::new(), sugar::l(&sugar::f(&h, &h)), vec![p0, p1])
        .with_params(IParams { x: Some("x".into()), ..IParams::default() });
    ok(&d, System::Iw);
    assert!(matches!(check_illative(&d, System::I0, &b()), Err(RuleError::SystemViolation { .. })));
}

#[test]
fn double_negation_only_classical() {
    let d = IllativeDerivation::new(IRule::DN, BTreeSet::new(), dn_axiom(), vec![]);
    ok(&d, System::Iwc);
    assert!(check_illative(&d, System::Iw, &b()).is_err());
    assert_eq!(dn_axiom(), parse(r"Xi H (\x. ((x => bot) => bot) => x)").unwrap());
}

#[test]
fn pi_example() {
    // {H p}, p ⊢ p  and  {H p} ⊢ H p  give  {H p} ⊢ p ⊃ p
    let p = Term::user("p");
    let g = set(&[sugar::h(&p)]);
    let mut gp = g.clone();
    gp.insert(p.clone());
    let d1 = IllativeDerivation::ax(gp, p.clone());
    let d2 = IllativeDerivation::ax(g.clone(), sugar::h(&p));
    let d = elaborate_derived(&DerivedRule::Pi, &[d1, d2]).unwrap();
    assert_eq!(d.concl, sugar::imp(&p, &p));
    assert_eq!(d.hyps, g);
    ok(&d, System::I0);
}

#[test]
fn weak_example() {
    let c = Term::user("c");
    let d = IllativeDerivation::ax(set(&[c.clone()]), c.clone());
    let w = elaborate_derived(&DerivedRule::Weak(Term::user("e")), &[d]).unwrap();
    assert_eq!(w.hyps, set(&[c, Term::user("e")]));
    ok(&w, System::I0);
}

#[test]
fn pe_after_pi_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let g = random_context(&mut rng);
        let minor = random_derivation(&g, 2, &mut rng);
        let t1 = minor.concl.clone();
        let dh = IllativeDerivation::new(IRule::Hi, g.clone(), sugar::h(&t1), vec![minor.clone()]);
        let mut g1 = g.clone();
        g1.insert(t1);
        let body = random_derivation(&g1, 2, &mut rng);
        let imp = elaborate_pi(&body, &dh).unwrap();
        let d = elaborate_pe(&imp, &minor).unwrap();
        assert_eq!(d.concl, body.concl);
        assert_eq!(d.hyps, g);
        ok(&d, System::I0);
    }
}

#[test]
fn elaborations_check_on_random_premises() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let (rule, premises) = random_instance(&mut rng);
        for p in &premises {
            ok(p, System::I0);
        }
        let d = elaborate_derived(&rule, &premises).unwrap();
        for s in [System::I0, System::Iw, System::Iwc] {
            ok(&d, s);
        }
    }
}

#[test]
fn substitution_preserves_validity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let g = random_context(&mut rng);
        let d = random_derivation(&g, 3, &mut rng);
        // substituting a term mentioning the generator's eigenvariable names
        let s = Term::app(Term::user("p"), Term::var("_x"));
        let d2 = subst_derivation(&d, "u", &s);
        ok(&d2, System::I0);
        assert_eq!(d2.concl, d.concl.subst("u", &s));
    }
}

#[test]
fn cut_removes_hypothesis() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let g = random_context(&mut rng);
        let e = random_derivation(&g, 2, &mut rng);
        let a = e.concl.clone();
        if g.contains(&a) {
            continue;
        }
        let mut ga = g.clone();
        ga.insert(a.clone());
        let d = random_derivation(&ga, 3, &mut rng);
        let c = cut(&d, &a, &e);
        assert_eq!(c.hyps, g);
        assert_eq!(c.concl, d.concl);
        ok(&c, System::I0);
    }
}

#[test]
fn budget_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let (rule, premises) = random_instance(&mut rng);
        let d = elaborate_derived(&rule, &premises).unwrap();
        let small = check_illative(&d, System::I0, &ReductionBudget::new(40));
        if small == Ok(CheckOutcome::Ok) {
            for n in [80, 500, 5000] {
                assert_eq!(check_illative(&d, System::I0, &ReductionBudget::new(n)), Ok(CheckOutcome::Ok));
            }
        }
    }
}

#[test]
fn json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..30 {
        let (rule, premises) = random_instance(&mut rng);
        let d = elaborate_derived(&rule, &premises).unwrap();
        let s = IllativeFile::store(&d, &["b".to_string()]);
        let (d2, bases) = IllativeFile::load(&s).unwrap();
        assert_eq!(d2, d);
        assert!(bases.contains("b"));
    }
}

#[test]
fn search_examples() {
    let t = Term::user("t");
    assert_eq!(term_model_eval(&set(&[t.clone()]), &t, &b(), 1), Verdict::True);
    assert_eq!(term_model_eval(&BTreeSet::new(), &l_h(), &b(), 1), Verdict::True);
    assert_eq!(term_model_eval(&BTreeSet::new(), &sugar::bot(), &b(), 4), Verdict::Unknown);
}

#[test]
fn search_finds_checkable_proofs() {
    let p = Term::user("p");
    let q = Term::user("q");
    let g = set(&[sugar::h(&p), sugar::h(&q), q.clone()]);
    let goal = sugar::imp(&p, &q);
    let d = search_proof(&g, &goal, &SearchConfig::new(System::I0, 4)).expect("p ⊃ q from q");
    ok(&d, System::I0);
    // modus ponens through a hypothesis
    let g2 = set(&[sugar::imp(&p, &q), p.clone(), sugar::h(&p)]);
    let d2 = search_proof(&g2, &q, &SearchConfig::new(System::I0, 4)).expect("q by elimination");
    ok(&d2, System::I0);
}

#[test]
fn search_never_proves_falsum() {
    for depth in 1..=6 {
        assert!(search_proof(&BTreeSet::new(), &sugar::bot(), &SearchConfig::new(System::Iw, depth)).is_none());
    }
}

#[test]
fn curry_paradox_is_not_derivable() {
    // Υ = Y (λy. y ⊃ X) satisfies Υ = Υ ⊃ X
    let x = Term::user("X");
    let y = parse(r"\f. (\x. f (x x)) (\x. f (x x))").unwrap();
    let body = Term::lam("y", &sugar::imp(&Term::var("y"), &x));
    let upsilon = Term::app(y, body);
    for depth in 1..=5 {
        let cfg = SearchConfig::new(System::Iw, depth);
        assert!(search_proof(&BTreeSet::new(), &x, &cfg).is_none());
        assert!(search_proof(&BTreeSet::new(), &upsilon, &cfg).is_none());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_derivations_check(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_context(&mut rng);
        let d = random_derivation(&g, 3, &mut rng);
        prop_assert_eq!(check_illative(&d, System::I0, &b()), Ok(CheckOutcome::Ok));
    }

    #[test]
    fn elaboration_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (rule, premises) = random_instance(&mut rng);
        let d = elaborate_derived(&rule, &premises).unwrap();
        prop_assert_eq!(check_illative(&d, System::I0, &b()), Ok(CheckOutcome::Ok));
    }
}
