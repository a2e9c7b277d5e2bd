use lambda_core::{parse, sugar, Term, Verdict};
use stagesem_omega::props::{self, Join};
use stagesem_omega::{build_universe, CanonUniverse, FullModel, SimVerdict, StageCache, StageConfig, TypePlus, UniverseSpec};

fn ty(s: &str) -> TypePlus {
    TypePlus::parse(s).unwrap()
}

fn one_elem(rank: usize) -> CanonUniverse {
    build_universe(FullModel::single_base("b", 1), rank, 1 << 16).unwrap()
}

fn cache(rank: usize, stages: usize) -> StageCache {
    StageCache::new(one_elem(rank), StageConfig { stage_bound: stages, ..StageConfig::default() })
}

#[test]
fn materialised_counts_for_rank_two() {
    let u = one_elem(2);
    let m = u.materialized();
    assert_eq!(m[&ty("b")], 1);
    assert_eq!(m[&ty("b->b")], 1);
    assert_eq!(m[&ty("b->o")], 2);
    assert_eq!(m[&ty("o")], 2);
    assert_eq!(m[&ty("o->o")], 4);
    assert_eq!(m[&TypePlus::Epsilon], 0);
    assert_eq!(u.count(&ty("!w->b")).unwrap(), 1);
}

#[test]
fn epsilon_is_empty_and_omega_sources_are_lambdas() {
    let u = one_elem(2);
    assert!(u.elements(&TypePlus::Epsilon).unwrap().is_empty());
    let es = u.elements(&ty("!w->b")).unwrap();
    assert_eq!(es.len(), 1);
    let (_, body) = es[0].as_lam().expect("lambda");
    assert_eq!(body, &u.element(&ty("b"), 0));
    assert_eq!(u.canonical_type(&es[0]), Some(ty("!w->b")));
}

#[test]
fn function_counts_are_exponential() {
    let u = build_universe(FullModel::single_base("b", 2), 3, 1 << 16).unwrap();
    assert_eq!(u.count(&ty("b->b")).unwrap(), 4);
    assert_eq!(u.count(&ty("[b->b]->b")).unwrap(), 16);
    assert_eq!(u.count(&ty("[b->o]->o")).unwrap(), 16);
    let tiny = CanonUniverse::new(FullModel::single_base("b", 3), 100).unwrap();
    assert!(tiny.count(&ty("[b->b]->b")).is_err());
}

#[test]
fn tables_apply_by_index() {
    let u = build_universe(FullModel::single_base("b", 2), 2, 1 << 16).unwrap();
    let bs = u.elements(&ty("b")).unwrap();
    for f in u.elements(&ty("b->b")).unwrap() {
        let i = u.index_of(&ty("b->b"), &f).unwrap();
        // entries in radix order: entry for argument 0 is the high digit
        let expect = [(i / 2) as usize, (i % 2) as usize];
        for (k, c) in bs.iter().enumerate() {
            assert_eq!(u.apply(&f, c).unwrap(), bs[expect[k]]);
        }
    }
}

#[test]
fn identity_table_step() {
    let mut c = cache(2, 4);
    let u = c.universe().clone();
    let id = u.element(&ty("b->b"), 0);
    let d = u.element(&ty("b"), 0);
    let t = Term::app(id.clone(), d.clone());
    assert!(c.reduce_step(&t, 1).0.contains(&d));
    assert!(!c.reduce_step(&t, 0).0.contains(&d));
    // β at every stage
    let beta = Term::app(sugar::i_term(), d.clone());
    assert!(c.reduce_step(&beta, 0).0.contains(&d));
    // an argument not certified of type b yields no table step
    let odd = Term::app(id, sugar::i_term());
    assert!(c.reduce_step(&odd, 1).0.is_empty());
}

#[test]
fn worked_example() {
    let mut c = cache(3, 8);
    let u = c.universe().clone();
    let id = u.element(&ty("b->b"), 0);
    let lam_id = u.element(&ty("!w->[b->b]"), 0);
    let rho = u.element(&ty("[[!w->[b->b]]->b]->b"), 0);
    assert_eq!(c.query_succ(&parse("\\x. x").unwrap(), &id, 1).unwrap(), Verdict::True);
    assert_eq!(c.query_succ(&parse("\\y x. x").unwrap(), &lam_id, 2).unwrap(), Verdict::True);
    assert_eq!(c.query_succ(&parse("\\z. z (\\y x. x)").unwrap(), &rho, 4).unwrap(), Verdict::True);
    // not earlier than the stated stages
    assert_eq!(c.query_succ(&parse("\\x. x").unwrap(), &id, 0).unwrap(), Verdict::False);
}

#[test]
fn leadsto_examples() {
    let mut c = cache(2, 6);
    let top = CanonUniverse::top();
    let bot = CanonUniverse::bot();
    assert_eq!(c.query_leadsto(&sugar::l(&Term::a("b")), &top, 0).unwrap(), Verdict::True);
    let u = build_universe(FullModel::single_base("b", 2), 2, 1 << 16).unwrap();
    let mut c2 = StageCache::new(u.clone(), StageConfig::default());
    let d0 = u.element(&ty("b"), 0);
    let d1 = u.element(&ty("b"), 1);
    let t = Term::app(sugar::i_term(), d0.clone());
    assert_eq!(c2.query_leadsto(&t, &d1, 0).unwrap(), Verdict::False);
    assert_eq!(c2.query_leadsto(&t, &d0, 0).unwrap(), Verdict::True);
    assert_eq!(c.query_leadsto(&sugar::h(&top), &top, 0).unwrap(), Verdict::True);
    assert_eq!(c.query_leadsto(&sugar::h(&bot), &top, 0).unwrap(), Verdict::True);
}

#[test]
fn queries_reject_non_canonical_targets() {
    let mut c = cache(2, 4);
    assert!(c.query_succ(&sugar::i_term(), &sugar::i_term(), 1).is_err());
    assert!(c.query_succ(&sugar::i_term(), &CanonUniverse::top(), 9).is_err());
}

#[test]
fn sim_examples() {
    let mut c = cache(2, 6);
    assert_eq!(c.query_sim(&Term::a("b"), 0).unwrap(), SimVerdict::Typed(ty("b")));
    assert_eq!(c.query_sim(&sugar::h_term(), 0).unwrap(), SimVerdict::Typed(TypePlus::O));
    assert_eq!(c.query_sim(&sugar::k(&sugar::l(&Term::a("b"))), 1).unwrap(), SimVerdict::Typed(TypePlus::Omega));
    let bb = sugar::f(&Term::a("b"), &Term::a("b"));
    assert_eq!(c.query_sim(&bb, 1).unwrap(), SimVerdict::Typed(ty("b->b")));
    assert_eq!(c.query_sim(&sugar::i_term(), 3).unwrap(), SimVerdict::Untyped);
}

#[test]
fn certified_truths() {
    let mut c = cache(2, 6);
    assert_eq!(c.certify_true(&sugar::l(&sugar::h_term())), Verdict::True);
    let d = c.universe().element(&ty("b"), 0);
    assert_eq!(c.certify_true(&Term::app(Term::a("b"), d)), Verdict::True);
    // ∀x:b. x = x style: Ξ A_b (λx. H ⊤)
    let t = sugar::xi(&Term::a("b"), &sugar::k(&sugar::h(&CanonUniverse::top())));
    assert_eq!(c.certify_true(&t), Verdict::True);
    // Ξ A_b (K ⊥) is false, with the canonical element as counterexample
    let f = sugar::xi(&Term::a("b"), &sugar::k(&CanonUniverse::bot()));
    assert_eq!(c.certify_true(&f), Verdict::False);
    assert_eq!(c.query_leadsto(&f, &CanonUniverse::bot(), 6).unwrap(), Verdict::True);
    assert!(c.saturated(&f));
}

fn curry_upsilon(x: &Term) -> Term {
    // Y (λu. u ⊃ X) with Y = λg.(λv.g(v v))(λv.g(v v))
    let imp_x = Term::lam("u", &sugar::imp(&Term::var("u"), x));
    let half = Term::lam("v", &Term::app(imp_x.clone(), Term::app(Term::var("v"), Term::var("v"))));
    Term::app(half.clone(), half)
}

#[test]
fn xi_h_i_and_curry_are_never_certified() {
    let mut c = cache(2, 8);
    c = StageCache::new(c.universe().clone(), StageConfig { step_budget: 1000, ..c.config().clone() });
    let xhi = sugar::xi(&sugar::h_term(), &sugar::i_term());
    assert!(!c.certify_true(&xhi).is_true());
    let x = Term::var("X");
    assert!(!c.certify_true(&curry_upsilon(&x)).is_true());
    let report = props::run_suite(&mut c, &[xhi, curry_upsilon(&x)]);
    assert!(report.ok(), "{:?}", report.violations);
}

#[test]
fn suite_over_random_terms_finds_no_violation() {
    use rand::SeedableRng;
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let mut c = cache(2, 4);
    let u = c.universe().clone();
    let samples: Vec<Term> = (0..60).map(|_| stagesem_omega::gen::random_term(&mut rng, &u, 3)).collect();
    for t in &samples {
        c.certify_true(t);
        c.query_leadsto(t, &CanonUniverse::bot(), 4).unwrap();
        c.query_sim(t, 4).unwrap();
    }
    let report = props::run_suite(&mut c, &samples[..20]);
    assert!(report.ok(), "{:?}", report.violations);
    assert!(report.checked.values().sum::<usize>() > 0);
}

#[test]
fn peaks_join() {
    let mut c = cache(2, 4);
    let u = c.universe().clone();
    let id = u.element(&ty("b->b"), 0);
    let d = u.element(&ty("b"), 0);
    // (λx.x) (id d): β at the root vs. a table step inside
    let t = Term::app(sugar::i_term(), Term::app(id.clone(), d.clone()));
    let (rs, complete) = c.reduce_step(&t, 2);
    assert!(complete);
    assert!(rs.contains(&Term::app(id.clone(), d.clone())));
    assert!(rs.contains(&Term::app(sugar::i_term(), d.clone())));
    // the table rule needs `≻`, not mere reducibility, of the argument
    let (rs, _) = c.reduce_step(&Term::app(id, Term::app(sugar::i_term(), d.clone())), 2);
    assert!(!rs.contains(&d));
    for a in &rs {
        for b in &rs {
            assert!(matches!(props::check_peak(&mut c, a, 2, b, 2, 800), Join::Joined(_)));
        }
    }
}

#[test]
fn extensionality_probe_on_eta_pair() {
    let mut c = cache(2, 2);
    let f = Term::var("f");
    let eta = Term::lam("y", &Term::app(f.clone(), Term::var("y")));
    assert_eq!(props::extensionality_probe(&mut c, &f, &eta, 0, 100), Verdict::True);
}

#[test]
fn spec_file_round_trip() {
    let s = r#"{"base_domains": {"b": ["d1","d2"]}, "rank_bound": 2, "stage_bound": 5, "step_budget": 50, "extra_witnesses": ["\\x. x"]}"#;
    let spec = UniverseSpec::from_json(s).unwrap();
    let c = spec.build().unwrap();
    assert_eq!(c.config().stage_bound, 5);
    assert_eq!(c.config().extra_witnesses.len(), 1);
    assert_eq!(c.universe().count(&ty("b->b")).unwrap(), 4);
    let back: UniverseSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
    assert_eq!(back, spec);
    assert!(UniverseSpec::from_json(r#"{"base_domains": {"b": []}}"#).unwrap().build().is_err());
}
