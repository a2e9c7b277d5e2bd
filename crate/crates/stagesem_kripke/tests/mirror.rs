use std::collections::BTreeMap;

use kripke_fin::corpus::{formulas, pred_ty, small_models};
use kripke_fin::{full_model, KripkeModel, Valuation};
use lambda_core::{sugar, Term, Verdict};
use pred2::{Expr, SimpleType};
use stagesem_kripke::props;
use stagesem_kripke::stage::mentions_external;
use stagesem_kripke::*;

fn chain2() -> Vec<Vec<bool>> {
    vec![vec![true, true], vec![false, true]]
}

/// Two-state chain s0 ≤ s1, one element `b_0`, `P b_0` true only at s1.
fn late_p() -> KripkeModel {
    let sizes = BTreeMap::from([("b".to_string(), 1)]);
    let mut m = full_model(&chain2(), &sizes, &[pred_ty()], 1 << 10).unwrap();
    let c = m.elem("b_0").unwrap();
    let late = m.elem("o_01").unwrap();
    let p = m.domain(&pred_ty()).iter().copied().find(|&f| m.app[&(f, c)] == late).unwrap();
    m.set_const("P", p);
    m.set_const("c", c);
    m.sig = kripke_fin::corpus::small_signature();
    m
}

fn cache(m: KripkeModel, mode: XiMode) -> MirrorCache {
    MirrorCache::new(MirrorSystem::build(m).unwrap(), MirrorConfig { mode, ..MirrorConfig::default() })
}

fn p_c() -> Expr {
    Expr::app(Expr::cnst("P", pred_ty()), Expr::cnst("c", SimpleType::base("b")))
}

fn falsum() -> Expr {
    Expr::forall("p", SimpleType::O, Expr::var("p", SimpleType::O))
}

#[test]
fn rules_mirror_function_tables() {
    let m = late_p();
    let sys = MirrorSystem::build(m.clone()).unwrap();
    assert_eq!(sys.rules().len(), m.app.len());
    assert!(sys.critical_pairs().is_empty());
    for (l, r) in sys.rules() {
        assert!(!mentions_external(&l) && !mentions_external(&r));
        let (f, a) = l.as_app().unwrap();
        assert_eq!(m.app[&(sys.delta(f).unwrap(), sys.delta(a).unwrap())], sys.delta(&r).unwrap());
    }
    let p = sys.plus("P").unwrap();
    let c = sys.plus("c").unwrap();
    assert_eq!(sys.table_contract(&Term::app(p, c.clone())), Some(sys.constant(m.elem("o_01").unwrap())));
    assert_eq!(sys.normalize(&Term::app(sugar::i_term(), c.clone()), 10, 100), Some(c));
}

#[test]
fn base_cases() {
    let mut c = cache(late_p(), XiMode::PerState);
    let sys = c.system().clone();
    let late = sys.constant(sys.model().elem("o_01").unwrap());
    assert_eq!(c.succ_s(&late, Truth::Top, 0, 0).unwrap(), Verdict::False);
    assert_eq!(c.succ_s(&late, Truth::Top, 0, 1).unwrap(), Verdict::True);
    assert_eq!(c.succ_s(&late, Truth::Bot, 0, 0).unwrap(), Verdict::True);
    let d = sys.plus("c").unwrap();
    assert_eq!(c.succ_s(&Term::app(Term::a("b"), d.clone()), Truth::Top, 0, 0).unwrap(), Verdict::True);
    assert_eq!(c.succ_s(&sugar::l(&Term::a("b")), Truth::Top, 0, 0).unwrap(), Verdict::True);
    assert_eq!(c.succ_s(&sugar::h(&late), Truth::Top, 0, 0).unwrap(), Verdict::True);
    // Ξ A_b (λx. H x-ish): every element satisfies A_b at every later state
    let t = sugar::xi(&Term::a("b"), &Term::a("b"));
    assert_eq!(c.succ_s(&t, Truth::Top, 1, 0).unwrap(), Verdict::True);
    assert!(c.succ_s(&Term::var("x"), Truth::Top, 0, 0).is_err());
}

#[test]
fn sim_rules() {
    let mut c = cache(late_p(), XiMode::PerState);
    assert_eq!(c.sim_s(&Term::a("b"), 0, 0).unwrap(), MirrorSim::Typed(MirrorType::Base("b".into())));
    assert_eq!(c.sim_s(&sugar::h_term(), 0, 0).unwrap(), MirrorSim::Typed(MirrorType::O));
    let top = c.truth(Truth::Top);
    assert_eq!(c.sim_s(&sugar::k(&top), 1, 0).unwrap(), MirrorSim::Typed(MirrorType::Omega));
    let bot = c.truth(Truth::Bot);
    assert_eq!(c.sim_s(&sugar::k(&bot), 1, 0).unwrap(), MirrorSim::Typed(MirrorType::Epsilon));
    // no function-type rule in the mirror relations
    assert_eq!(c.sim_s(&sugar::f(&Term::a("b"), &Term::a("b")), 3, 0).unwrap(), MirrorSim::Untyped);
}

#[test]
fn atomic_forcing_follows_the_table() {
    let m = late_p();
    let mut c = cache(m.clone(), XiMode::PerState);
    let w = Valuation::from([("x".into(), m.elem("b_0").unwrap())]);
    let px = Expr::app(Expr::cnst("P", pred_ty()), Expr::var("x", SimpleType::base("b")));
    assert_eq!(mirror_forces(&mut c, 0, &w, &px).unwrap(), Verdict::False);
    assert_eq!(mirror_forces(&mut c, 1, &w, &px).unwrap(), Verdict::True);
}

#[test]
fn negation_of_a_late_atom() {
    // ¬P c is not forced at s0 although P c fails there: P c holds at s1.
    let phi = Expr::imp(p_c(), falsum());
    let m = late_p();
    assert!(!kripke_fin::forces(&m, 0, &Valuation::new(), &phi).unwrap());
    let mut c = cache(m.clone(), XiMode::PerState);
    assert_eq!(mirror_forces(&mut c, 0, &Valuation::new(), &phi).unwrap(), Verdict::False);
    // the literal reading fixes the range type at s0 (ε) and so makes the
    // implication vacuously true there
    let mut lit = cache(m, XiMode::Literal);
    assert_eq!(mirror_forces(&mut lit, 0, &Valuation::new(), &phi).unwrap(), Verdict::True);
}

#[test]
fn non_theorem_p_implies_q() {
    // a model forcing p but not q: both sides reject p ⊃ q
    let m = small_models(1, 1).into_iter().next().unwrap();
    let p = Expr::var("p", SimpleType::O);
    let q = p_c();
    let phi = Expr::imp(p, q);
    let t = m.elem("o_1").unwrap();
    let w = Valuation::from([("p".into(), t)]);
    let pc_true = kripke_fin::forces(&m, 0, &w, &p_c()).unwrap();
    let expected = kripke_fin::forces(&m, 0, &w, &phi).unwrap();
    assert_eq!(expected, pc_true);
    let mut c = cache(m, XiMode::PerState);
    assert_eq!(mirror_forces(&mut c, 0, &w, &phi).unwrap().is_true(), expected);
}

#[test]
fn equivalence_on_depth_one() {
    let fs = formulas(1);
    for m in small_models(2, 2) {
        let rep = forcing_equiv_suite(&m, &fs, &MirrorConfig::default()).unwrap();
        assert!(rep.all_equal(), "{:?}", (rep.disagreements.first(), rep.unknown.first()));
    }
}

#[test]
fn path_and_exhaustive_agree() {
    let fs = formulas(1);
    let m = late_p();
    let mut a = cache(m.clone(), XiMode::PerState);
    let mut b = MirrorCache::new(MirrorSystem::build(m.clone()).unwrap(), MirrorConfig { strategy: Strategy::Exhaustive, ..MirrorConfig::default() });
    for phi in &fs {
        let vars: Vec<_> = phi.free_vars().into_iter().collect();
        for w in kripke_fin::valuations(&m, &vars) {
            for s in 0..2 {
                let x = mirror_forces(&mut a, s, &w, phi).unwrap();
                let y = mirror_forces(&mut b, s, &w, phi).unwrap();
                assert!(!(x.is_definite() && y.is_definite()) || x == y, "{phi}");
                assert!(y != Verdict::Unknown || x.is_definite());
            }
        }
    }
}

#[test]
fn properties_over_the_cache() {
    let fs = formulas(1);
    let m = late_p();
    let mut c = cache(m.clone(), XiMode::PerState);
    forcing_equiv_with(&mut c, &fs).unwrap();
    let sys = c.system().clone();
    let mut samples: Vec<Term> = fs.iter().take(12).map(|f| mirror_instance(&sys, &Valuation::from([("x".into(), 0), ("y".into(), 0), ("p".into(), sys.model().elem("o_01").unwrap())]), f)).collect();
    samples.push(Term::a("b"));
    samples.push(sugar::h_term());
    samples.push(sugar::k(&c.truth(Truth::Top)));
    let rep = props::run_suite(&mut c, &samples);
    assert!(rep.ok(), "{:?}", rep.violations);
    assert!(rep.checked["upward-closure"] > 0);
    assert!(rep.checked["h-dichotomy"] > 0);
}

#[test]
fn extensionality_with_external_constants() {
    let mut c = cache(late_p(), XiMode::PerState);
    let p = c.system().plus("P").unwrap();
    let eta = Term::lam_raw("y", Term::app(p.clone(), Term::bvar(0)));
    assert_eq!(props::extensionality_probe(&mut c, &p, &eta), Verdict::True);
    let i = sugar::i_term();
    let ii = Term::app(i.clone(), i.clone());
    assert_eq!(props::extensionality_probe(&mut c, &i, &ii), Verdict::True);
}

#[test]
fn missing_truth_values_are_reported() {
    let mut m = KripkeModel::new(vec!["s".into()], vec![vec![true]]);
    m.add_elem("only", SimpleType::O).unwrap();
    m.sigma.insert(0, 1);
    assert!(matches!(MirrorSystem::build(m), Err(MirrorError::MissingTruthValue(_))));
}
