//! Property suite over the stage cache.
//!
//! Every check is Unknown-tolerant: a property counts as violated only on
//! definite True/False witnesses.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use lambda_core::{print, sugar, Term, Verdict};
use serde::Serialize;

use crate::stage::{fresh_var, StageCache};
use crate::types::TypePlus;
use crate::universe::CanonUniverse;

/// A definite counterexample to a property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Property name.
    pub property: String,
    /// Human-readable witness.
    pub detail: String,
}

/// Outcome of a property run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PropReport {
    /// Instances examined per property.
    pub checked: BTreeMap<String, usize>,
    /// Instances left undecided per property.
    pub undecided: BTreeMap<String, usize>,
    /// Definite violations.
    pub violations: Vec<Violation>,
}

impl PropReport {
    fn tick(&mut self, p: &str) {
        *self.checked.entry(p.to_string()).or_default() += 1;
    }

    fn undecided(&mut self, p: &str) {
        *self.undecided.entry(p.to_string()).or_default() += 1;
    }

    fn violate(&mut self, p: &str, detail: String) {
        self.violations.push(Violation { property: p.to_string(), detail });
    }

    /// Whether no violation was found.
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Merge another report into this one.
    pub fn merge(&mut self, other: PropReport) {
        for (k, v) in other.checked {
            *self.checked.entry(k).or_default() += v;
        }
        for (k, v) in other.undecided {
            *self.undecided.entry(k).or_default() += v;
        }
        self.violations.extend(other.violations);
    }
}

fn true_entries(cache: &StageCache, leads: bool) -> Vec<(Term, Term, usize)> {
    let mut v: Vec<(Term, Term, usize)> = if leads {
        cache.leadsto_entries().filter(|(_, v)| v.is_true()).map(|(k, _)| k.clone()).collect()
    } else {
        cache.succ_entries().filter(|(_, v)| v.is_true()).map(|(k, _)| k.clone()).collect()
    };
    v.sort();
    v
}

/// True at stage `n` implies not False at stage `n + 1`.
pub fn check_monotonicity(cache: &mut StageCache) -> PropReport {
    let mut r = PropReport::default();
    let bound = cache.config().stage_bound;
    for leads in [false, true] {
        for (t, rho, n) in true_entries(cache, leads) {
            if n >= bound {
                continue;
            }
            r.tick("monotonicity");
            let v = if leads { cache.leadsto(&t, &rho, n + 1) } else { cache.succ(&t, &rho, n + 1) };
            match v {
                Verdict::False => r.violate(
                    "monotonicity",
                    format!("{} relates {} to {} at stage {n} but not at {}", if leads { "⇝" } else { "≻" }, print(&t), print(&rho), n + 1),
                ),
                Verdict::Unknown => r.undecided("monotonicity"),
                Verdict::True => {}
            }
        }
    }
    r
}

/// No term reaches two distinct canonical terms of one type (this includes
/// ⊤/⊥ disjointness), and no term receives two types.
pub fn check_determinism(cache: &StageCache) -> PropReport {
    let mut r = PropReport::default();
    for leads in [false, true] {
        let name = if leads { "determinism" } else { "succ-determinism" };
        let mut groups: HashMap<(Term, TypePlus), HashSet<Term>> = HashMap::new();
        for (t, rho, _) in true_entries(cache, leads) {
            if let Some(ty) = cache.universe().canonical_type(&rho) {
                groups.entry((t, ty)).or_default().insert(rho);
            }
        }
        let mut keys: Vec<_> = groups.into_iter().collect();
        keys.sort_by(|a, b| a.0.cmp(&b.0));
        for ((t, ty), rhos) in keys {
            r.tick(name);
            if rhos.len() > 1 {
                let mut names: Vec<String> = rhos.iter().map(print).collect();
                names.sort();
                let p = if ty == TypePlus::O { "top-bot-disjointness" } else { name };
                r.violate(p, format!("{} relates to {} at type {ty}", print(&t), names.join(", ")));
            }
        }
    }
    r.tick("type-uniqueness");
    for c in cache.conflicts() {
        let tys: Vec<String> = c.types.iter().map(|t| t.to_string()).collect();
        r.violate("type-uniqueness", format!("{} has types {} at stage {}", print(&c.term), tys.join(", "), c.stage));
    }
    r
}

/// If `H t ⇝ₙ ⊤` then `t ⇝ₙ ⊤` or `t ⇝ₙ₊₁ ⊥`.
pub fn check_h_dichotomy(cache: &mut StageCache) -> PropReport {
    let mut r = PropReport::default();
    let top = CanonUniverse::top();
    let bot = CanonUniverse::bot();
    let bound = cache.config().stage_bound;
    for (ht, rho, n) in true_entries(cache, true) {
        if rho != top {
            continue;
        }
        let Some(t) = sugar::h_shape(&ht) else { continue };
        r.tick("h-dichotomy");
        let a = cache.leadsto(&t, &top, n);
        let b = cache.leadsto(&t, &bot, (n + 1).min(bound));
        match a.or(b) {
            Verdict::False => r.violate("h-dichotomy", format!("H ({}) is true at stage {n} but {} is neither true nor false", print(&t), print(&t))),
            Verdict::Unknown => r.undecided("h-dichotomy"),
            Verdict::True => {}
        }
    }
    r
}

/// Sampled instances of the one-state classical model conditions, with
/// `Z` ranging over `samples`, the model truth being `⇝ ⊤` at the bound.
pub fn check_model_conditions(cache: &mut StageCache, samples: &[Term]) -> PropReport {
    let mut r = PropReport::default();
    let top = CanonUniverse::top();
    let n = cache.config().stage_bound;
    let truth = |c: &mut StageCache, t: &Term| c.leadsto(t, &top, n);
    // (6), (7)
    r.tick("model-6");
    if truth(cache, &sugar::l(&sugar::h_term())).is_false() {
        r.violate("model-6", "L H is not true".into());
    }
    let bases: Vec<String> = cache.universe().bases().cloned().collect();
    for b in bases {
        r.tick("model-7");
        if truth(cache, &sugar::l(&Term::a(&b))).is_false() {
            r.violate("model-7", format!("L A_{b} is not true"));
        }
    }
    for x in samples {
        // (5) X ∈ 𝒯 ⇒ H X ∈ 𝒯
        if truth(cache, x).is_true() {
            r.tick("model-5");
            match truth(cache, &sugar::h(x)) {
                Verdict::False => r.violate("model-5", format!("{} is true but H of it is not", print(x))),
                Verdict::Unknown => r.undecided("model-5"),
                Verdict::True => {}
            }
        }
        // (2) Ξ X Y ∈ 𝒯 and X Z ∈ 𝒯 ⇒ Y Z ∈ 𝒯
        if let Some((a, b)) = sugar::xi_shape(x) {
            if truth(cache, x).is_true() {
                for z in samples.iter().chain(std::iter::once(&fresh_var("_z", x))) {
                    if truth(cache, &Term::app(a.clone(), z.clone())).is_true() {
                        r.tick("model-2");
                        match truth(cache, &Term::app(b.clone(), z.clone())) {
                            Verdict::False => r.violate("model-2", format!("{} is true, its range holds of {} but its body does not", print(x), print(z))),
                            Verdict::Unknown => r.undecided("model-2"),
                            Verdict::True => {}
                        }
                    }
                }
            }
        }
    }
    // (1), (3), (4): for typed ranges the quantification over Z is over the
    // canonical terms of the type.
    for x in samples {
        let crate::stage::SimVerdict::Typed(ty) = cache.sim(x, n) else { continue };
        if truth(cache, &sugar::l(x)).is_false() {
            continue;
        }
        let zs = match &ty {
            TypePlus::Omega => vec![fresh_var("_z", x)],
            TypePlus::Epsilon => vec![],
            t => match cache.universe().elements(t) {
                Ok(v) => v,
                Err(_) => continue,
            },
        };
        for y in samples {
            let mut prem1 = Verdict::True;
            let mut prem3 = Verdict::True;
            let mut inhabited = Verdict::False;
            for z in &zs {
                let xz = truth(cache, &Term::app(x.clone(), z.clone()));
                inhabited = inhabited.or(xz);
                let yz = Term::app(y.clone(), z.clone());
                prem1 = prem1.and(xz.not().or(truth(cache, &yz)));
                prem3 = prem3.and(xz.not().or(truth(cache, &sugar::h(&yz))));
            }
            if ty == TypePlus::Omega {
                inhabited = inhabited.or(Verdict::Unknown);
            }
            let cases = [
                ("model-1", prem1, sugar::xi(x, y)),
                ("model-3", prem3, sugar::h(&sugar::xi(x, y))),
                ("model-4", truth(cache, &sugar::l(y)).or(inhabited.not()), sugar::l(&sugar::f(x, y))),
            ];
            for (p, prem, concl) in cases {
                if prem.is_true() {
                    r.tick(p);
                    match truth(cache, &concl) {
                        Verdict::False => r.violate(p, format!("premises hold but {} is not true", print(&concl))),
                        Verdict::Unknown => r.undecided(p),
                        Verdict::True => {}
                    }
                }
            }
        }
    }
    r
}

/// Outcome of a join search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Join {
    /// A common reduct.
    Joined(Term),
    /// Both reachable sets are complete and disjoint.
    Disjoint,
    /// The budget ran out.
    Unresolved,
}

/// Search for a common reduct of `t1` (reducing at stage `n1`) and `t2`
/// (reducing at stage `n2`), exploring at most `limit` terms on each side.
pub fn join(cache: &mut StageCache, t1: &Term, n1: usize, t2: &Term, n2: usize, limit: usize) -> Join {
    if t1 == t2 {
        return Join::Joined(t1.clone());
    }
    let cap = cache.config().size_cap;
    let mut seen = [HashSet::from([t1.clone()]), HashSet::from([t2.clone()])];
    let mut queues = [VecDeque::from([t1.clone()]), VecDeque::from([t2.clone()])];
    let stages = [n1, n2];
    let mut complete = true;
    loop {
        let mut progressed = false;
        for side in 0..2 {
            let Some(u) = queues[side].pop_front() else { continue };
            progressed = true;
            let (rs, c) = cache.reduce_step(&u, stages[side]);
            complete &= c;
            for v in rs {
                if seen[side].contains(&v) {
                    continue;
                }
                if v.size() > cap || seen[side].len() >= limit {
                    complete = false;
                    continue;
                }
                if seen[1 - side].contains(&v) {
                    return Join::Joined(v);
                }
                seen[side].insert(v.clone());
                queues[side].push_back(v);
            }
        }
        if !progressed {
            break;
        }
    }
    if complete {
        Join::Disjoint
    } else {
        Join::Unresolved
    }
}

/// A peak `t₁ ← t → t₂` with steps at stages `n₁`, `n₂` joins: `t₁` reduces
/// at stage `n₂` and `t₂` at stage `n₁` to a common term.
pub fn check_peak(cache: &mut StageCache, t1: &Term, n1: usize, t2: &Term, n2: usize, limit: usize) -> Join {
    join(cache, t1, n2, t2, n1, limit)
}

/// If `t₁ x` and `t₂ x` join for a fresh `x`, so do `λx.t₁ x` and `λx.t₂ x`.
pub fn extensionality_probe(cache: &mut StageCache, t1: &Term, t2: &Term, n: usize, limit: usize) -> Verdict {
    let x = fresh_var("_x", &Term::app(t1.clone(), t2.clone()));
    let name = x.as_fvar().expect("variable").to_string();
    let a1 = Term::app(t1.clone(), x.clone());
    let a2 = Term::app(t2.clone(), x.clone());
    match join(cache, &a1, n, &a2, n, limit) {
        Join::Joined(_) => match join(cache, &Term::lam(&name, &a1), n, &Term::lam(&name, &a2), n, limit) {
            Join::Joined(_) => Verdict::True,
            Join::Disjoint => Verdict::False,
            Join::Unresolved => Verdict::Unknown,
        },
        _ => Verdict::True,
    }
}

/// Run every cache-level property.
pub fn run_suite(cache: &mut StageCache, samples: &[Term]) -> PropReport {
    let mut r = check_monotonicity(cache);
    r.merge(check_model_conditions(cache, samples));
    r.merge(check_h_dichotomy(cache));
    r.merge(check_determinism(cache));
    r
}
