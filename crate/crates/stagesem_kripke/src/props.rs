//! Property checks over a mirror cache. A property is violated only on
//! definite verdicts; Unknown instances are counted separately.

use std::collections::{BTreeMap, HashMap, HashSet};

use lambda_core::{print, sugar, Term, Verdict};
use serde::Serialize;

use crate::stage::{fresh_external, MirrorCache, MirrorSim, Truth};

/// Outcome of a property run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct MirrorPropReport {
    /// Instances examined per property.
    pub checked: BTreeMap<String, usize>,
    /// Undecided instances per property.
    pub undecided: BTreeMap<String, usize>,
    /// Definite violations, `(property, witness)`.
    pub violations: Vec<(String, String)>,
}

impl MirrorPropReport {
    fn record(&mut self, p: &str, v: Verdict, witness: impl FnOnce() -> String) {
        *self.checked.entry(p.into()).or_default() += 1;
        match v {
            Verdict::False => self.violations.push((p.into(), witness())),
            Verdict::Unknown => *self.undecided.entry(p.into()).or_default() += 1,
            Verdict::True => {}
        }
    }

    /// Whether no violation was found.
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Merge another report.
    pub fn merge(&mut self, o: MirrorPropReport) {
        for (k, v) in o.checked {
            *self.checked.entry(k).or_default() += v;
        }
        for (k, v) in o.undecided {
            *self.undecided.entry(k).or_default() += v;
        }
        self.violations.extend(o.violations);
    }
}

fn sorted_true(cache: &MirrorCache, leads: bool) -> Vec<(Term, Truth, usize, usize)> {
    let it: Vec<_> = if leads { cache.leadsto_entries().collect() } else { cache.succ_entries().collect() };
    let mut v: Vec<_> = it.into_iter().filter(|(_, v)| v.is_true()).map(|(k, _)| k.clone()).collect();
    v.sort();
    v
}

/// `t ≻ₙˢ ⊤` and `t ⇝ₙˢ ⊤` are preserved at every later state.
pub fn check_upward_closure(cache: &mut MirrorCache) -> MirrorPropReport {
    let mut r = MirrorPropReport::default();
    for leads in [false, true] {
        for (t, rho, n, s) in sorted_true(cache, leads) {
            if rho != Truth::Top {
                continue;
            }
            let later: Vec<usize> = (0..cache.system().model().n_states()).filter(|&s2| s2 != s && cache.system().model().le[s][s2]).collect();
            for s2 in later {
                let v = if leads { cache.leadsto_s(&t, Truth::Top, n, s2) } else { cache.succ_s(&t, Truth::Top, n, s2) };
                let v = v.unwrap_or(Verdict::Unknown);
                r.record("upward-closure", v, || format!("{} holds at state {s} but not at {s2} (stage {n})", print(&t)));
            }
        }
    }
    r
}

/// No term is related to both `⊤` and `⊥` at one state, and no term gets
/// two types.
pub fn check_disjointness(cache: &MirrorCache) -> MirrorPropReport {
    let mut r = MirrorPropReport::default();
    for leads in [false, true] {
        let mut seen: HashMap<(Term, usize), HashSet<Truth>> = HashMap::new();
        for (t, rho, _, s) in sorted_true(cache, leads) {
            seen.entry((t, s)).or_default().insert(rho);
        }
        let mut keys: Vec<_> = seen.into_iter().collect();
        keys.sort_by(|a, b| a.0.cmp(&b.0));
        for ((t, s), rhos) in keys {
            let v = Verdict::from(rhos.len() < 2);
            r.record("top-bot-disjointness", v, || format!("{} is both true and false at state {s}", print(&t)));
        }
    }
    for (t, n, s, tys) in cache.conflicts() {
        r.record("type-uniqueness", Verdict::False, || format!("{} has types {tys:?} at stage {n}, state {s}", print(t)));
    }
    r
}

/// If `H t ⇝ₙˢ ⊤` then `t ⇝ₙˢ ⊤` or `t ⇝ₙ₊₁ˢ ⊥` (clamped to the bound).
pub fn check_h_dichotomy(cache: &mut MirrorCache) -> MirrorPropReport {
    let mut r = MirrorPropReport::default();
    let bound = cache.config().stage_bound;
    for (ht, rho, n, s) in sorted_true(cache, true) {
        if rho != Truth::Top {
            continue;
        }
        let Some(t) = sugar::h_shape(&ht) else { continue };
        let a = cache.leadsto_s(&t, Truth::Top, n, s).unwrap_or(Verdict::Unknown);
        let b = cache.leadsto_s(&t, Truth::Bot, (n + 1).min(bound), s).unwrap_or(Verdict::Unknown);
        r.record("h-dichotomy", a.or(b), || format!("H ({}) holds at state {s} but it is neither true nor false", print(&t)));
    }
    r
}

/// Sampled instances of the illative-model conditions at the stage bound,
/// for every state, with closed `samples` as the terms `t`, `t₁`, `t₂`.
pub fn check_model_conditions(cache: &mut MirrorCache, samples: &[Term]) -> MirrorPropReport {
    let mut r = MirrorPropReport::default();
    let n = cache.config().stage_bound;
    let states = cache.system().model().n_states();
    let le = cache.system().model().le.clone();
    let truth = |c: &mut MirrorCache, t: &Term, s: usize| c.leadsto_s(t, Truth::Top, n, s).unwrap_or(Verdict::Unknown);
    for s in 0..states {
        r.record("model-8", truth(cache, &sugar::l(&sugar::h_term()), s), || "L H is not true".into());
        for b in cache.system().base_types() {
            r.record("model-9", truth(cache, &sugar::l(&Term::a(&b)), s), || format!("L A_{b} is not true"));
        }
        for t in samples {
            if truth(cache, t, s).is_true() {
                // (2) upward closure, (7) H
                for s2 in (0..states).filter(|&s2| le[s][s2]) {
                    let v = truth(cache, t, s2);
                    r.record("model-2", v, || format!("{} true at {s} but not at {s2}", print(t)));
                }
                let v = truth(cache, &sugar::h(t), s);
                r.record("model-7", v, || format!("{} true but H of it is not", print(t)));
            }
            // (1) invariance under R-conversion: every one-step reduct agrees
            let v0 = truth(cache, t, s);
            if v0.is_definite() {
                for u in cache.system().reducts(t) {
                    let v = truth(cache, &u, s);
                    let agree = if v.is_definite() { Verdict::from(v == v0) } else { Verdict::Unknown };
                    r.record("model-1", agree, || format!("{} and its reduct {} disagree at {s}", print(t), print(&u)));
                }
            }
            // (5) Ξ t₁ t₂ true and t₁ t₃ true ⇒ t₂ t₃ true, t₃ over samples
            if let Some((t1, t2)) = sugar::xi_shape(t) {
                if truth(cache, t, s).is_true() {
                    for t3 in samples.iter().cloned().chain(std::iter::once(fresh_external(t))) {
                        if truth(cache, &Term::app(t1.clone(), t3.clone()), s).is_true() {
                            let v = truth(cache, &Term::app(t2.clone(), t3.clone()), s);
                            r.record("model-5", v, || format!("{} true, range holds of {} but body does not", print(t), print(&t3)));
                        }
                    }
                }
            }
        }
        // (4), (6): ranges with a type at every later state
        for t1 in samples {
            if !truth(cache, &sugar::l(t1), s).is_true() {
                continue;
            }
            for t2 in samples {
                let mut p4 = Verdict::True;
                let mut p6 = Verdict::True;
                for s2 in (0..states).filter(|&s2| le[s][s2]) {
                    let zs = match cache.sim_s(t1, n, s2).unwrap_or(MirrorSim::Unknown) {
                        MirrorSim::Typed(ty) => cache.system().canonical(&ty).unwrap_or_else(|| vec![fresh_external(&Term::app(t1.clone(), t2.clone()))]),
                        _ => {
                            p4 = p4.and(Verdict::Unknown);
                            p6 = p6.and(Verdict::Unknown);
                            continue;
                        }
                    };
                    for z in zs {
                        let range = truth(cache, &Term::app(t1.clone(), z.clone()), s2);
                        let body = Term::app(t2.clone(), z);
                        p4 = p4.and(range.not().or(truth(cache, &body, s2)));
                        p6 = p6.and(range.not().or(truth(cache, &sugar::h(&body), s2)));
                    }
                }
                if p4.is_true() {
                    let c = sugar::xi(t1, t2);
                    let v = truth(cache, &c, s);
                    r.record("model-4", v, || format!("premises hold at {s} but {} is not true", print(&c)));
                }
                if p6.is_true() {
                    let c = sugar::h(&sugar::xi(t1, t2));
                    let v = truth(cache, &c, s);
                    r.record("model-6", v, || format!("premises hold at {s} but {} is not true", print(&c)));
                }
            }
        }
    }
    r
}

/// If `t₁ ν` and `t₂ ν` have the same `R`-normal form for a fresh external
/// constant `ν`, then so do `λx.t₁ x` and `λx.t₂ x`, i.e. `t₁ =_R t₂` up
/// to η.
pub fn extensionality_probe(cache: &mut MirrorCache, t1: &Term, t2: &Term) -> Verdict {
    let nu = fresh_external(&Term::app(t1.clone(), t2.clone()));
    let a = cache.normal_form(&Term::app(t1.clone(), nu.clone()));
    let b = cache.normal_form(&Term::app(t2.clone(), nu.clone()));
    match (a, b) {
        (Some(a), Some(b)) if a == b => {
            let x = Term::bvar(0);
            let e1 = Term::lam_raw("x", Term::app(t1.shift_up(1, 0), x.clone()));
            let e2 = Term::lam_raw("x", Term::app(t2.shift_up(1, 0), x));
            match (cache.normal_form(&e1), cache.normal_form(&e2)) {
                (Some(p), Some(q)) => Verdict::from(p == q),
                _ => Verdict::Unknown,
            }
        }
        (Some(_), Some(_)) => Verdict::True,
        _ => Verdict::Unknown,
    }
}

/// Context stability: if `t ≻ˢ ρ₁` and `C[ρ₁] ⇝ˢ ρ₂` then `C[t] ⇝ˢ ρ₂`,
/// for the contexts `H □`, `□ ⊃ ⊤`, `⊤ ⊃ □`, `(λx.x) □` and `K □ ν`.
pub fn check_context_stability(cache: &mut MirrorCache) -> MirrorPropReport {
    let mut r = MirrorPropReport::default();
    let n = cache.config().stage_bound;
    let top = cache.truth(Truth::Top);
    let contexts: Vec<Box<dyn Fn(&Term) -> Term>> = vec![
        Box::new(|x| sugar::h(x)),
        Box::new({
            let top = top.clone();
            move |x| sugar::imp(x, &top)
        }),
        Box::new({
            let top = top.clone();
            move |x| sugar::imp(&top, x)
        }),
        Box::new(|x| Term::app(sugar::i_term(), x.clone())),
        Box::new(|x| Term::app(sugar::k(x), fresh_external(x))),
    ];
    let entries = sorted_true(cache, false);
    for (t, rho1, k, s) in entries.into_iter().filter(|e| e.2 == n) {
        let r1 = cache.truth(rho1);
        for c in &contexts {
            for rho2 in [Truth::Top, Truth::Bot] {
                if cache.leadsto_s(&c(&r1), rho2, k, s).unwrap_or(Verdict::Unknown).is_true() {
                    let v = cache.leadsto_s(&c(&t), rho2, n, s).unwrap_or(Verdict::Unknown);
                    r.record("context-stability", v, || format!("context fails for {} at state {s}", print(&t)));
                }
            }
        }
    }
    r
}

/// Run the cache-level properties and the sampled model conditions.
pub fn run_suite(cache: &mut MirrorCache, samples: &[Term]) -> MirrorPropReport {
    let mut r = check_model_conditions(cache, samples);
    r.merge(check_upward_closure(cache));
    r.merge(check_h_dichotomy(cache));
    r.merge(check_context_stability(cache));
    r.merge(check_disjointness(cache));
    r
}
