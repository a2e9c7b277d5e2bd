use std::collections::BTreeSet;

use illative::{check_illative, CheckOutcome, IRule, IllativeDerivation, System};
use lambda_core::{beta_eta_equal, sugar, ReductionBudget, Term, Verdict};
use pred2::corpus::{corpus, corpus_signature};
use pred2::expr::alpha_eq;
use pred2::{parse_formula, Expr, Mode, Pred2Derivation, Signature, SimpleType};
use proptest::prelude::*;
use translate::{a_type, translate_term, TranslationEnv};

fn b() -> SimpleType {
    SimpleType::base("b")
}

fn bo() -> SimpleType {
    SimpleType::arrow(b(), SimpleType::O)
}

fn env() -> TranslationEnv {
    TranslationEnv::new(corpus_signature())
}

fn f(s: &str) -> Expr {
    parse_formula(s, &corpus_signature(), Mode::Pred2_0).unwrap()
}

fn checks_i0(d: &IllativeDerivation) {
    match check_illative(d, System::I0, &ReductionBudget::new(500)) {
        Ok(CheckOutcome::Ok) => {}
        other => panic!("derivation of {} does not check: {other:?}", lambda_core::print(&d.concl)),
    }
}

#[test]
fn translation_of_implication_is_implication_of_translations() {
    let phi = f("P x");
    let psi = f("forall y:b. Q y");
    let t = translate_term(&Expr::imp(phi.clone(), psi.clone()));
    assert_eq!(t, sugar::imp(&translate_term(&phi), &translate_term(&psi)));
}

#[test]
fn translation_of_quantifier() {
    let t = translate_term(&f("forall x:b. P x"));
    let body = Term::app(Term::user("P"), Term::var("x"));
    assert_eq!(t, sugar::xi(&Term::a("b"), &Term::lam("x", &body)));
}

#[test]
fn translation_of_variable_is_itself() {
    assert_eq!(translate_term(&Expr::var("x", b())), Term::var("x"));
    assert_eq!(translate_term(&Expr::cnst("c", b())), Term::user("c"));
}

#[test]
fn type_predicates() {
    assert_eq!(a_type(&SimpleType::O), sugar::h_term());
    assert_eq!(a_type(&b()), Term::a("b"));
    assert_eq!(a_type(&bo()), sugar::f(&Term::a("b"), &sugar::h_term()));
}

#[test]
fn bottom_translates_to_the_illative_bottom() {
    let bot = translate_term(&Expr::bot());
    let v = beta_eta_equal(&bot, &sugar::bot(), &ReductionBudget::new(100));
    assert_eq!(v, Verdict::True);
}

#[test]
fn gamma_example() {
    let sig = Signature::default().with_base("b").with_const("c", b()).with_const("P", bo());
    let e = TranslationEnv::new(sig);
    let px = Expr::app(Expr::cnst("P", bo()), Expr::var("x", b()));
    let g = e.build_gamma(&[px.clone()], &px);
    let y = e.sentinel("b");
    let want: BTreeSet<Term> = [
        Term::app(Term::a("b"), Term::var("x")),
        Term::app(Term::a("b"), Term::user("c")),
        Term::app(sugar::f(&Term::a("b"), &sugar::h_term()), Term::user("P")),
        sugar::l(&Term::a("b")),
        Term::app(Term::a("b"), Term::var(&y)),
    ]
    .into_iter()
    .collect();
    assert_eq!(g, want);
}

#[test]
fn gamma_of_closed_input_has_only_signature_entries() {
    let e = env();
    let g = e.build_gamma(&[], &f("forall x:b. P x"));
    let sig = corpus_signature();
    assert_eq!(g.len(), sig.consts.len() + 2 * sig.base_types.len());
    assert!(g.iter().all(|h| h.free_vars().iter().all(|v| v.starts_with(translate::SENTINEL_PREFIX))));
}

#[test]
fn sentinels_are_not_formula_variables() {
    let e = env();
    let y = e.sentinel("b");
    assert!(parse_formula(&format!("P {y}"), &corpus_signature(), Mode::Pred2_0).is_err());
}

#[test]
fn inhabit_base_is_sentinel_axiom() {
    let e = env();
    let (t, d) = e.inhabit(&b(), &[]).unwrap();
    assert_eq!(t, Term::var(&e.sentinel("b")));
    assert_eq!(d.rule, IRule::Ax);
    checks_i0(&d);
}

#[test]
fn inhabit_o_is_l_h() {
    let e = env();
    let (t, d) = e.inhabit(&SimpleType::O, &[f("P x")]).unwrap();
    assert_eq!(t, sugar::l(&sugar::h_term()));
    assert_eq!(d.concl, Term::app(sugar::h_term(), t.clone()));
    assert_eq!(d.hyps, e.build_gamma(&[f("P x")], &Expr::bot()));
    checks_i0(&d);
}

#[test]
fn inhabit_predicate_type_is_constant_function() {
    let e = env();
    let (t, d) = e.inhabit(&bo(), &[]).unwrap();
    assert_eq!(t, sugar::k(&sugar::l(&sugar::h_term())));
    assert!(d.rules_used().contains(&IRule::XiI));
    checks_i0(&d);
}

/// Independent enumeration of the restricted types over base `b` with at
/// most `n` arrows: `o | b | b → τ`.
fn pred2_0_types(n: usize) -> Vec<SimpleType> {
    let mut out = vec![SimpleType::O, b()];
    if n > 0 {
        for t in pred2_0_types(n - 1) {
            out.push(SimpleType::arrow(b(), t));
        }
    }
    let mut seen = BTreeSet::new();
    out.retain(|t| seen.insert(t.clone()));
    out
}

#[test]
fn inhabit_all_small_types() {
    let e = env();
    let tys = pred2_0_types(4);
    assert_eq!(tys.len(), 10);
    for ty in tys {
        let (t, d) = e.inhabit(&ty, &[]).unwrap();
        assert_eq!(d.concl, Term::app(a_type(&ty), t), "type {ty}");
        checks_i0(&d);
    }
}

#[test]
fn compile_axiom() {
    let d = Pred2Derivation::axiom(vec![f("P x")], f("P x"));
    let c = env().compile_proof(&d).unwrap();
    assert_eq!(c.rule, IRule::Ax);
    checks_i0(&c);
}

#[test]
fn compile_identity() {
    let d = Pred2Derivation::imp_i(f("p"), Pred2Derivation::axiom(vec![f("p")], f("p")));
    let c = env().compile_proof(&d).unwrap();
    assert_eq!(c.concl, translate_term(&f("p -> p")));
    assert!(c.hyps.is_subset(&env().build_gamma(&[], &f("p -> p"))));
    checks_i0(&c);
}

#[test]
fn compile_instantiation_uses_constant_typing() {
    let h = f("forall x:b. P x");
    let inst = Pred2Derivation::forall_e(Pred2Derivation::axiom(vec![h.clone()], h.clone()), Expr::cnst("c", b()))
        .unwrap();
    let d = Pred2Derivation::imp_i(h, inst);
    let c = env().compile_proof(&d).unwrap();
    let mut found = false;
    c.visit(&mut |n| {
        if n.rule == IRule::XiE && n.params.t1 == Some(Term::a("b")) {
            found |= n.premises[1].concl == Term::app(Term::a("b"), Term::user("c"));
        }
    });
    assert!(found, "expected a XiE step with mediator A@b applied to c");
    checks_i0(&c);
}

#[test]
fn compiled_corpus_checks_in_i0() {
    let e = env();
    for (name, d) in corpus() {
        if d.rules_used().contains(&pred2::Pred2Rule::DoubleNeg) {
            continue;
        }
        let c = e.compile_proof(&d).unwrap_or_else(|err| panic!("{name}: {err}"));
        assert_eq!(c.hyps, e.context(&d.hyps, &d.concl), "{name}");
        assert_eq!(c.concl, translate_term(&d.concl), "{name}");
        match check_illative(&c, System::I0, &ReductionBudget::new(500)) {
            Ok(CheckOutcome::Ok) => {}
            other => panic!("{name}: {other:?}"),
        }
    }
}

#[test]
fn repair_removes_minor_premise_variables() {
    let e = env();
    let (_, d) = corpus().into_iter().find(|(n, _)| n.starts_with("mp_repair")).unwrap();
    let c = e.compile_proof(&d).unwrap();
    let fvs: BTreeSet<_> = d.hyps.iter().chain([&d.concl]).flat_map(|h| h.free_names()).collect();
    for h in &c.hyps {
        for v in h.free_vars() {
            assert!(fvs.contains(&v) || v.starts_with(translate::SENTINEL_PREFIX), "stray variable {v}");
        }
    }
    checks_i0(&c);
}

#[test]
fn classical_axiom_is_rejected() {
    let phi = f("p");
    let d = Pred2Derivation::new(
        pred2::Pred2Rule::DoubleNeg,
        vec![],
        pred2::double_neg(&phi),
        Default::default(),
        vec![],
    );
    assert!(env().compile_proof(&d).is_err());
}

// ---- generated formulas over the corpus signature ----

fn atom() -> impl Strategy<Value = Expr> {
    let bterm = prop_oneof![
        Just(Expr::var("x", b())),
        Just(Expr::var("y", b())),
        Just(Expr::cnst("c", b())),
        Just(Expr::app(Expr::cnst("f", SimpleType::arrow(b(), b())), Expr::var("x", b()))),
    ];
    prop_oneof![
        Just(Expr::var("p", SimpleType::O)),
        Just(Expr::var("q", SimpleType::O)),
        bterm.clone().prop_map(|t| Expr::app(Expr::cnst("P", bo()), t)),
        (bterm.clone(), bterm).prop_map(|(s, t)| Expr::app(
            Expr::app(Expr::cnst("R", SimpleType::arrow(b(), bo())), s),
            t
        )),
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

/// Independent α-equivalence: compare after renaming every binder to a
/// de Bruijn-style canonical name determined by its depth.
fn canonical(e: &Expr, depth: usize, env: &[(String, String)]) -> String {
    match e {
        Expr::Var(x, _) => env
            .iter()
            .rev()
            .find(|(n, _)| n.as_str() == &**x)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| format!("free:{x}")),
        Expr::Const(c, _) => format!("const:{c}"),
        Expr::App(a, c) => format!("({} {})", canonical(a, depth, env), canonical(c, depth, env)),
        Expr::Imp(a, c) => format!("({} => {})", canonical(a, depth, env), canonical(c, depth, env)),
        Expr::Forall(x, t, body) => {
            let mut env2 = env.to_vec();
            env2.push((x.to_string(), format!("#{depth}")));
            format!("(all #{depth}:{t}. {})", canonical(body, depth + 1, &env2))
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn h_lemma_holds_for_generated_formulas(phi in formula(), delta in proptest::collection::vec(formula(), 0..3)) {
        let e = env();
        let ctx = e.context(&delta, &phi);
        let d = e.h_lemma(&ctx, &phi).unwrap();
        prop_assert_eq!(&d.hyps, &ctx);
        prop_assert_eq!(lambda_core::sugar::h_shape(&d.concl), Some(translate_term(&phi)));
        let r = check_illative(&d, System::I0, &ReductionBudget::new(500));
        prop_assert!(matches!(r, Ok(CheckOutcome::Ok)), "{:?}", r);
    }

    #[test]
    fn translation_is_injective_on_alpha_classes(a in formula(), c in formula()) {
        let same_class = canonical(&a, 0, &[]) == canonical(&c, 0, &[]);
        prop_assert_eq!(same_class, translate_term(&a) == translate_term(&c));
        prop_assert_eq!(same_class, alpha_eq(&a, &c));
    }

    #[test]
    fn gamma_grows_with_hypotheses(d1 in proptest::collection::vec(formula(), 0..3),
                                   d2 in proptest::collection::vec(formula(), 0..3),
                                   phi in formula()) {
        let e = env();
        let small = e.build_gamma(&d1, &phi);
        let mut both = d1.clone();
        both.extend(d2);
        let big = e.build_gamma(&both, &phi);
        prop_assert!(small.is_subset(&big));
    }

    #[test]
    fn gamma_size_is_linear(delta in proptest::collection::vec(formula(), 0..4), phi in formula()) {
        let e = env();
        let g = e.build_gamma(&delta, &phi);
        let mut fv = phi.free_vars();
        for d in &delta {
            fv.extend(d.free_vars());
        }
        let sig = corpus_signature();
        prop_assert_eq!(g.len(), fv.len() + sig.consts.len() + 2 * sig.base_types.len());
    }
}
