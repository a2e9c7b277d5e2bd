//! Acceptance run: ten end-to-end criteria, one PASS/FAIL line each.
//!
//! This target has its own `main` (no libtest harness) so the summary is
//! always printed; the process exits nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;
use std::time::Instant;

use illative::random::random_instance;
use illative::{check_illative, elaborate_derived, search_proof, CheckOutcome, SearchConfig, System};
use kripke_fin::corpus::{b, formulas, small_models};
use kripke_fin::{eval_formula_element, eval_term, forcing_set, valuations};
use lambda_core::{parse, sugar, ReductionBudget, Term, Verdict};
use pred2::corpus::{corpus, corpus_signature};
use pred2::expr::subst;
use pred2::{Expr, Pred2Derivation, Pred2Rule, SimpleType};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stagesem_kripke::props as mprops;
use stagesem_kripke::{forcing_equiv_with, EquivReport, MirrorCache, MirrorConfig, MirrorSystem};
use stagesem_omega::gen::{random_peak, random_typed_term};
use stagesem_omega::props::{self as oprops, Join, PropReport};
use stagesem_omega::{build_universe, CanonUniverse, FullModel, StageCache, StageConfig, TypePlus};
use translate::{a_type, TranslationEnv};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Property-check tallies collected from the caches of criteria 3–6.
#[derive(Default)]
struct Tally {
    checked: usize,
    undecided: usize,
    violations: Vec<String>,
}

impl Tally {
    fn omega(&mut self, r: &PropReport) {
        self.checked += r.checked.values().sum::<usize>();
        self.undecided += r.undecided.values().sum::<usize>();
        self.violations.extend(r.violations.iter().map(|v| format!("{}: {}", v.property, v.detail)));
    }

    fn mirror(&mut self, r: &mprops::MirrorPropReport) {
        self.checked += r.checked.values().sum::<usize>();
        self.undecided += r.undecided.values().sum::<usize>();
        self.violations.extend(r.violations.iter().map(|(p, w)| format!("{p}: {w}")));
    }

    /// Stage-monotonicity (upward closure along stages) and the
    /// H-dichotomy over a canonical-universe cache.
    fn omega_cache(&mut self, c: &mut StageCache) {
        self.omega(&oprops::check_h_dichotomy(c));
        self.omega(&oprops::check_monotonicity(c));
    }

    /// Upward closure along states and stages, and the H-dichotomy, over a
    /// mirror cache.
    fn mirror_cache(&mut self, c: &mut MirrorCache) {
        self.mirror(&mprops::check_upward_closure(c));
        self.mirror(&mprops::check_h_dichotomy(c));
    }
}

fn one_elem(rank: usize, stages: usize, budget: usize) -> StageCache {
    let u = build_universe(FullModel::single_base("b", 1), rank, 1 << 16).expect("universe");
    StageCache::new(u, StageConfig { stage_bound: stages, step_budget: budget, ..StageConfig::default() })
}

fn ty(s: &str) -> TypePlus {
    TypePlus::parse(s).expect("type")
}

// ---------------------------------------------------------------- 1

fn derived_rule_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let budget = ReductionBudget::default();
    let mut failures = Vec::new();
    let mut rules = BTreeSet::new();
    for i in 0..200 {
        let (rule, premises) = random_instance(&mut rng);
        rules.insert(format!("{rule:?}").split('(').next().unwrap_or_default().to_string());
        if premises.iter().any(|p| check_illative(p, System::I0, &budget) != Ok(CheckOutcome::Ok)) {
            failures.push(format!("#{i}: premise does not check"));
            continue;
        }
        match elaborate_derived(&rule, &premises) {
            Ok(d) => {
                for s in [System::I0, System::Iw, System::Iwc] {
                    if check_illative(&d, s, &budget) != Ok(CheckOutcome::Ok) {
                        failures.push(format!("#{i}: {rule:?} fails in {}", s.name()));
                    }
                }
            }
            Err(e) => failures.push(format!("#{i}: {rule:?}: {e}")),
        }
    }
    outcome(failures.is_empty(), format!("200 instances over rules {rules:?}; failures {:?}", failures.first()))
}

// ---------------------------------------------------------------- 2

fn nested_forall(e: &Expr) -> bool {
    match e {
        Expr::Forall(_, _, body) => contains_forall(body) || nested_forall(body),
        Expr::Imp(a, c) => nested_forall(a) || nested_forall(c),
        Expr::App(f, a) => nested_forall(f) || nested_forall(a),
        _ => false,
    }
}

fn contains_forall(e: &Expr) -> bool {
    match e {
        Expr::Forall(..) => true,
        Expr::Imp(a, c) => contains_forall(a) || contains_forall(c),
        Expr::App(f, a) => contains_forall(f) || contains_forall(a),
        _ => false,
    }
}

fn names(e: &Expr) -> BTreeSet<Arc<str>> {
    e.free_vars().into_iter().map(|(x, _)| x).collect()
}

/// Some modus ponens whose minor premise has a free variable that occurs
/// neither in the hypotheses nor in the conclusion.
fn has_witness_mp(d: &Pred2Derivation) -> bool {
    if d.rule == Pred2Rule::ImpE {
        let mut visible = names(&d.concl);
        for h in &d.hyps {
            visible.extend(names(h));
        }
        if names(&d.premises[1].concl).iter().any(|x| !visible.contains(x)) {
            return true;
        }
    }
    d.premises.iter().any(has_witness_mp)
}

fn any_node(d: &Pred2Derivation, f: &impl Fn(&Pred2Derivation) -> bool) -> bool {
    f(d) || d.premises.iter().any(|p| any_node(p, f))
}

fn compiler_soundness() -> Outcome {
    let sig = corpus_signature();
    let entries: Vec<_> = corpus().into_iter().filter(|(_, d)| !d.rules_used().contains(&Pred2Rule::DoubleNeg)).collect();
    let rules: Vec<Pred2Rule> = entries.iter().flat_map(|(_, d)| d.rules_used()).collect();
    let all_rules =
        [Pred2Rule::Axiom, Pred2Rule::ImpI, Pred2Rule::ImpE, Pred2Rule::ForallI, Pred2Rule::ForallE].into_iter().all(|r| rules.contains(&r));
    let nested = entries.iter().any(|(_, d)| any_node(d, &|n| nested_forall(&n.concl)));
    let witness = entries.iter().any(|(_, d)| has_witness_mp(d));
    let budget = ReductionBudget::new(500);
    let mut failures = Vec::new();
    let mut undecided = 0;
    for (name, d) in &entries {
        if let Err(e) = pred2::check_pred2_derivation(d, &sig, false) {
            failures.push(format!("{name}: source does not check: {e}"));
            continue;
        }
        match translate::compile_proof(&sig, d) {
            Ok(c) => match check_illative(&c, System::I0, &budget) {
                Ok(CheckOutcome::Ok) => {}
                Ok(CheckOutcome::Undecided(n)) => undecided += n.len(),
                Err(e) => failures.push(format!("{name}: {e}")),
            },
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let pass = entries.len() >= 30 && all_rules && nested && witness && failures.is_empty() && undecided == 0;
    outcome(
        pass,
        format!(
            "{} derivations, all five rules {all_rules}, nested forall {nested}, witness case {witness}, \
             {undecided} undecided, failures {:?}",
            entries.len(),
            failures.first()
        ),
    )
}

// ---------------------------------------------------------------- 3

fn forcing_equivalence(tally: &mut Tally) -> Outcome {
    let fs = formulas(2);
    let models = small_models(2, 2);
    let mut total = EquivReport::default();
    for m in &models {
        let sys = match MirrorSystem::build(m.clone()) {
            Ok(s) => s,
            Err(e) => return outcome(false, format!("mirror system: {e}")),
        };
        let mut cache = MirrorCache::new(sys, MirrorConfig::default());
        match forcing_equiv_with(&mut cache, &fs) {
            Ok(r) => total.merge(r),
            Err(e) => return outcome(false, format!("mirror forcing: {e}")),
        }
        tally.mirror_cache(&mut cache);
        tally.mirror(&mprops::check_disjointness(&cache));
    }
    let detail = format!(
        "{} models x {} formulas: {} instances, {} agreed, {} disagreements, {} unknown",
        models.len(),
        fs.len(),
        total.checked,
        total.agreed,
        total.disagreements.len(),
        total.unknown.len()
    );
    outcome(total.all_equal() && total.unknown.is_empty() && total.checked > 0, detail)
}

// ---------------------------------------------------------------- 4

fn worked_example(tally: &mut Tally) -> Outcome {
    let mut c = one_elem(3, 8, StageConfig::default().step_budget);
    let u = c.universe().clone();
    let id = u.element(&ty("b->b"), 0);
    let lam_id = u.element(&ty("!w->[b->b]"), 0);
    let rho = u.element(&ty("[[!w->[b->b]]->b]->b"), 0);
    let queries = [(r"\x. x", id, 1), (r"\y x. x", lam_id, 2), (r"\z. z (\y x. x)", rho, 4)];
    let mut got = Vec::new();
    for (src, target, n) in queries {
        let t = parse(src).expect("term");
        got.push(c.query_succ(&t, &target, n).unwrap_or(Verdict::Unknown));
    }
    tally.omega_cache(&mut c);
    outcome(got.iter().all(|v| *v == Verdict::True), format!("verdicts {got:?}"))
}

// ---------------------------------------------------------------- 5

fn determinism(tally: &mut Tally) -> Outcome {
    let u = build_universe(FullModel::single_base("b", 2), 2, 1 << 16).expect("universe");
    let mut c = StageCache::new(u.clone(), StageConfig { stage_bound: 6, ..StageConfig::default() });
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let types: Vec<TypePlus> = ["o", "b", "b->b", "b->o", "o->o"].into_iter().map(ty).collect();
    for _ in 0..1000 {
        let tau = types.choose(&mut rng).expect("types").clone();
        let t = random_typed_term(&mut rng, &u, &tau, 3);
        for rho in u.elements(&tau).expect("finite type") {
            c.leadsto(&t, &rho, 6);
        }
        if tau != TypePlus::O {
            c.leadsto(&t, &CanonUniverse::top(), 6);
            c.leadsto(&t, &CanonUniverse::bot(), 6);
        }
    }
    // oracle: group the cached True verdicts by (term, canonical type)
    let mut groups: HashMap<(Term, TypePlus), HashSet<Term>> = HashMap::new();
    let mut trues = 0;
    for ((t, rho, _), v) in c.leadsto_entries() {
        if v.is_true() {
            trues += 1;
            if let Some(tau) = u.canonical_type(rho) {
                groups.entry((t.clone(), tau)).or_default().insert(rho.clone());
            }
        }
    }
    let clashes = groups.values().filter(|s| s.len() > 1).count();
    let report = oprops::check_determinism(&c);
    tally.omega_cache(&mut c);
    outcome(
        clashes == 0 && report.ok() && trues >= 1000,
        format!(
            "{trues} true verdicts over {} (term, type) groups; {clashes} clashes; suite violations {}",
            groups.len(),
            report.violations.len()
        ),
    )
}

// ---------------------------------------------------------------- 6

fn curry_upsilon(x: &Term) -> Term {
    let imp_x = Term::lam("u", &sugar::imp(&Term::var("u"), x));
    let half = Term::lam("v", &Term::app(imp_x, Term::app(Term::var("v"), Term::var("v"))));
    Term::app(half.clone(), half)
}

fn consistency(tally: &mut Tally) -> Outcome {
    let mut c = one_elem(2, 8, 1000);
    let xhi = sugar::xi(&sugar::h_term(), &sugar::i_term());
    let v_xhi = c.certify_true(&xhi);
    let v_curry_const = c.certify_true(&curry_upsilon(&Term::user("X")));
    let v_curry_var = c.certify_true(&curry_upsilon(&Term::var("X")));
    tally.omega_cache(&mut c);
    let mut proofs = Vec::new();
    for s in [System::I0, System::Iw, System::Iwc] {
        if search_proof(&BTreeSet::new(), &xhi, &SearchConfig::new(s, 6)).is_some() {
            proofs.push(s.name());
        }
    }
    let pass = !v_xhi.is_true() && !v_curry_const.is_true() && !v_curry_var.is_true() && proofs.is_empty();
    outcome(
        pass,
        format!("Xi H I: {v_xhi}; Curry (constant): {v_curry_const}; Curry (variable): {v_curry_var}; proofs found in {proofs:?}"),
    )
}

// ---------------------------------------------------------------- 7

fn peaks() -> Outcome {
    let mut c = one_elem(2, 6, StageConfig::default().step_budget);
    let limit = 4 * c.config().step_budget;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let (mut joined, mut failed, mut tries) = (0, Vec::new(), 0);
    while joined + failed.len() < 500 && tries < 200_000 {
        tries += 1;
        if let Some(p) = random_peak(&mut rng, &mut c, 3) {
            match oprops::check_peak(&mut c, &p.left, p.left_stage, &p.right, p.right_stage, limit) {
                Join::Joined(_) => joined += 1,
                other => failed.push(format!("{p:?}: {other:?}")),
            }
        }
    }
    outcome(joined == 500 && failed.is_empty(), format!("{joined} peaks joined ({tries} draws); failures {:?}", failed.first()))
}

// ---------------------------------------------------------------- 8

fn substitution_lemmas() -> Outcome {
    let vars: Vec<(Arc<str>, SimpleType)> = vec![(Arc::from("p"), SimpleType::O), (Arc::from("x"), b()), (Arc::from("y"), b())];
    let fs = formulas(2);
    let base_terms = [Expr::cnst("c", b()), Expr::var("x", b()), Expr::var("y", b())];
    let prop_terms = formulas(1);
    let (mut checked, mut bad) = (0usize, Vec::new());
    for m in small_models(2, 2) {
        for u in valuations(&m, &vars) {
            for q in &base_terms {
                for t in &base_terms {
                    let mut u2 = u.clone();
                    u2.insert(Arc::from("x"), eval_term(&m, &u, t).expect("term"));
                    checked += 1;
                    if eval_term(&m, &u, &subst(q, "x", t)).ok() != eval_term(&m, &u2, q).ok() {
                        bad.push(format!("{q}[x/{t}]"));
                    }
                }
            }
            for phi in &fs {
                for t in &base_terms {
                    let mut u2 = u.clone();
                    u2.insert(Arc::from("x"), eval_term(&m, &u, t).expect("term"));
                    checked += 1;
                    if forcing_set(&m, &u, &subst(phi, "x", t)).ok() != forcing_set(&m, &u2, phi).ok() {
                        bad.push(format!("{phi}[x/{t}]"));
                    }
                }
                for t in &prop_terms {
                    let Ok(Some(d)) = eval_formula_element(&m, &u, t) else {
                        bad.push(format!("{t} has no element in D_o"));
                        continue;
                    };
                    let mut u2 = u.clone();
                    u2.insert(Arc::from("p"), d);
                    checked += 1;
                    if forcing_set(&m, &u, &subst(phi, "p", t)).ok() != forcing_set(&m, &u2, phi).ok() {
                        bad.push(format!("{phi}[p/{t}]"));
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} triples, {} disagreements {:?}", bad.len(), bad.first()))
}

// ---------------------------------------------------------------- 9

fn dichotomy_and_closure(tally: &Tally) -> Outcome {
    outcome(
        tally.violations.is_empty() && tally.checked > 0,
        format!(
            "{} checks over the caches of criteria 3-6, {} undecided, {} violations {:?}",
            tally.checked,
            tally.undecided,
            tally.violations.len(),
            tally.violations.first()
        ),
    )
}

// --------------------------------------------------------------- 10

/// The types over `b` whose arrows all have a base-type argument, with at
/// most `n` arrows.
fn restricted_types(n: usize) -> Vec<SimpleType> {
    let mut out = vec![SimpleType::O, b()];
    let mut frontier = out.clone();
    for _ in 0..n {
        frontier = frontier.into_iter().map(|t| SimpleType::arrow(b(), t)).collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

fn inhabitation() -> Outcome {
    let env = TranslationEnv::new(corpus_signature());
    let tys = restricted_types(4);
    let mut bad = Vec::new();
    for t in &tys {
        match env.inhabit(t, &[]) {
            Ok((w, d)) => {
                let ok = d.concl == Term::app(a_type(t), w)
                    && check_illative(&d, System::I0, &ReductionBudget::new(500)) == Ok(CheckOutcome::Ok);
                if !ok {
                    bad.push(t.to_string());
                }
            }
            Err(e) => bad.push(format!("{t}: {e}")),
        }
    }
    outcome(bad.is_empty(), format!("{} types; failures {bad:?}", tys.len()))
}

fn main() {
    let mut tally = Tally::default();
    let mut results: BTreeMap<usize, (&str, Outcome, f64)> = BTreeMap::new();
    let mut run = |n: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t0 = Instant::now();
        let o = f();
        let secs = t0.elapsed().as_secs_f64();
        println!("criterion {n:>2} {}: {name} ({secs:.1}s) - {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.insert(n, (name, o, secs));
    };
    run(1, "derived-rule round trip", &mut derived_rule_round_trip);
    run(2, "proof-compiler soundness", &mut compiler_soundness);
    run(3, "forcing equivalence", &mut || forcing_equivalence(&mut tally));
    run(4, "worked example", &mut || worked_example(&mut tally));
    run(5, "determinism of leads-to", &mut || determinism(&mut tally));
    run(6, "consistency smoke tests", &mut || consistency(&mut tally));
    run(7, "commutation joinability", &mut peaks);
    run(8, "substitution lemmas", &mut substitution_lemmas);
    run(9, "H-dichotomy and upward closure", &mut || dichotomy_and_closure(&tally));
    run(10, "inhabitation", &mut inhabitation);
    let failed: Vec<usize> = results.iter().filter(|(_, (_, o, _))| !o.pass).map(|(n, _)| *n).collect();
    println!("acceptance: {} of {} criteria pass", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        eprintln!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
