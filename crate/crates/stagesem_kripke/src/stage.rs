//! Per-state stage relations `≻ₙˢ`, `~ₙˢ` and `⇝ₙˢ` over the mirror system,
//! as memoised three-valued queries on closed terms.

use std::collections::{HashMap, HashSet, VecDeque};

use kripke_fin::State;
use lambda_core::sugar::{self, h_shape, k_shape, l_shape, xi_shape};
use lambda_core::{Const, Term, Verdict};

use crate::system::{MirrorError, MirrorSystem, MirrorType};

/// The two truth constants a term can be related to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Truth {
    /// `⊤`.
    Top,
    /// `⊥`.
    Bot,
}

/// Reading of the restricted-quantifier clauses (Ξ true, H-of-Ξ true, Ξ
/// false).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XiMode {
    /// The range type is determined separately at every later state.
    PerState,
    /// The range type is determined once, at the current state.
    Literal,
}

/// How `⇝` explores reductions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Normal-order reduction to `R`-normal form, then `≻` at the normal
    /// form (relying on confluence of `R`).
    Path,
    /// Breadth-first search of all reducts.
    Exhaustive,
}

/// Bounds and switches of the mirror engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorConfig {
    /// Largest stage.
    pub stage_bound: usize,
    /// Reduction steps (Path) or distinct terms (Exhaustive) per query.
    pub step_budget: usize,
    /// Terms larger than this are not explored.
    pub size_cap: usize,
    /// Work units per top-level query.
    pub work_limit: usize,
    /// Ξ clause reading.
    pub mode: XiMode,
    /// Reduction strategy.
    pub strategy: Strategy,
}

impl Default for MirrorConfig {
    fn default() -> Self {
        MirrorConfig {
            stage_bound: 8,
            step_budget: 500,
            size_cap: 2000,
            work_limit: 200_000,
            mode: XiMode::PerState,
            strategy: Strategy::Path,
        }
    }
}

/// Outcome of a typing query.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MirrorSim {
    /// `t ~ₙˢ τ`.
    Typed(MirrorType),
    /// No rule applies.
    Untyped,
    /// Undecided within the budgets.
    Unknown,
}

type Key = (Term, Truth, usize, State);

/// Memo tables of the per-state relations (the reduction cache is shared by
/// all states since `R` does not depend on the state).
#[derive(Debug)]
pub struct MirrorCache {
    sys: MirrorSystem,
    cfg: MirrorConfig,
    succ: HashMap<Key, Verdict>,
    leads: HashMap<Key, Verdict>,
    sim: HashMap<(Term, usize, State), MirrorSim>,
    nf: HashMap<Term, Option<Term>>,
    conflicts: Vec<(Term, usize, State, Vec<MirrorType>)>,
    fuel: usize,
}

/// The least external constant `$nu_k` not occurring in `t`.
pub fn fresh_external(t: &Term) -> Term {
    (0..)
        .map(|k| Term::ext(&format!("nu_{k}")))
        .find(|c| !t.has_const(c.as_const().expect("constant")))
        .expect("unbounded supply")
}

impl MirrorCache {
    /// An empty cache.
    pub fn new(sys: MirrorSystem, cfg: MirrorConfig) -> MirrorCache {
        MirrorCache {
            sys,
            cfg,
            succ: HashMap::new(),
            leads: HashMap::new(),
            sim: HashMap::new(),
            nf: HashMap::new(),
            conflicts: Vec::new(),
            fuel: 0,
        }
    }

    /// The mirror system.
    pub fn system(&self) -> &MirrorSystem {
        &self.sys
    }

    /// The configuration.
    pub fn config(&self) -> &MirrorConfig {
        &self.cfg
    }

    /// The truth constant.
    pub fn truth(&self, r: Truth) -> Term {
        match r {
            Truth::Top => self.sys.top(),
            Truth::Bot => self.sys.bot(),
        }
    }

    /// Cached `≻` entries.
    pub fn succ_entries(&self) -> impl Iterator<Item = (&Key, &Verdict)> {
        self.succ.iter()
    }

    /// Cached `⇝` entries.
    pub fn leadsto_entries(&self) -> impl Iterator<Item = (&Key, &Verdict)> {
        self.leads.iter()
    }

    /// Terms that received two types at one stage and state.
    pub fn conflicts(&self) -> &[(Term, usize, State, Vec<MirrorType>)] {
        &self.conflicts
    }

    fn validate(&self, t: &Term, n: usize, s: State) -> Result<(), MirrorError> {
        if !t.free_vars().is_empty() || !t.is_locally_closed() {
            return Err(MirrorError::NotClosed(lambda_core::print(t)));
        }
        if s >= self.sys.model().n_states() {
            return Err(MirrorError::NoState(s));
        }
        if n > self.cfg.stage_bound {
            return Err(MirrorError::Stage(n, self.cfg.stage_bound));
        }
        Ok(())
    }

    fn refuel(&mut self) {
        self.fuel = self.cfg.work_limit;
    }

    fn burn(&mut self) -> bool {
        if self.fuel == 0 {
            return false;
        }
        self.fuel -= 1;
        true
    }

    /// `t ≻ₙˢ ρ` for a closed term.
    pub fn succ_s(&mut self, t: &Term, r: Truth, n: usize, s: State) -> Result<Verdict, MirrorError> {
        self.validate(t, n, s)?;
        self.refuel();
        Ok(self.succ_at(t, r, n, s))
    }

    /// `t ⇝ₙˢ ρ` for a closed term.
    pub fn leadsto_s(&mut self, t: &Term, r: Truth, n: usize, s: State) -> Result<Verdict, MirrorError> {
        self.validate(t, n, s)?;
        self.refuel();
        Ok(self.leadsto_at(t, r, n, s))
    }

    /// `t ~ₙˢ τ` for a closed term.
    pub fn sim_s(&mut self, t: &Term, n: usize, s: State) -> Result<MirrorSim, MirrorError> {
        self.validate(t, n, s)?;
        self.refuel();
        Ok(self.sim_at(t, n, s))
    }

    /// `t ⇝ˢ ⊤` at the stage bound.
    pub fn certify(&mut self, t: &Term, s: State) -> Result<Verdict, MirrorError> {
        let n = self.cfg.stage_bound;
        self.leadsto_s(t, Truth::Top, n, s)
    }

    /// The `R`-normal form, if reached within the budgets.
    pub fn normal_form(&mut self, t: &Term) -> Option<Term> {
        if let Some(r) = self.nf.get(t) {
            return r.clone();
        }
        let r = self.sys.normalize(t, self.cfg.step_budget, self.cfg.size_cap);
        self.nf.insert(t.clone(), r.clone());
        r
    }

    pub(crate) fn leadsto_at(&mut self, t: &Term, r: Truth, n: usize, s: State) -> Verdict {
        let key = (t.clone(), r, n, s);
        if let Some(v) = self.leads.get(&key) {
            return *v;
        }
        if !self.burn() {
            return Verdict::Unknown;
        }
        let v = match self.cfg.strategy {
            Strategy::Path => match self.normal_form(t) {
                Some(nf) => self.succ_at(&nf, r, n, s),
                None => self.search(t, r, n, s),
            },
            Strategy::Exhaustive => self.search(t, r, n, s),
        };
        if v.is_definite() {
            self.leads.insert(key, v);
        }
        v
    }

    fn search(&mut self, t: &Term, r: Truth, n: usize, s: State) -> Verdict {
        let mut seen = HashSet::from([t.clone()]);
        let mut queue = VecDeque::from([t.clone()]);
        let mut complete = true;
        let mut unknown = false;
        while let Some(u) = queue.pop_front() {
            if !self.burn() {
                return Verdict::Unknown;
            }
            match self.succ_at(&u, r, n, s) {
                Verdict::True => return Verdict::True,
                Verdict::Unknown => unknown = true,
                Verdict::False => {}
            }
            for v in self.sys.reducts(&u) {
                if seen.contains(&v) {
                    continue;
                }
                if v.size() > self.cfg.size_cap || seen.len() >= self.cfg.step_budget {
                    complete = false;
                    continue;
                }
                seen.insert(v.clone());
                queue.push_back(v);
            }
        }
        if complete && !unknown {
            Verdict::False
        } else {
            Verdict::Unknown
        }
    }

    fn later(&self, s: State) -> Vec<State> {
        let m = self.sys.model();
        (0..m.n_states()).filter(|&s2| m.le[s][s2]).collect()
    }

    /// `∀t₃ ∈ 𝕋_τ. f(t₃)`, with a fresh external constant for `ω`.
    fn forall_in(&mut self, ty: &MirrorType, avoid: &Term, f: &mut dyn FnMut(&mut Self, &Term) -> Verdict) -> Verdict {
        let xs = self.sys.canonical(ty).unwrap_or_else(|| vec![fresh_external(avoid)]);
        let mut acc = Verdict::True;
        for x in xs {
            acc = acc.and(f(self, &x));
            if acc.is_false() {
                break;
            }
        }
        acc
    }

    /// `∃t₃ ∈ 𝕋_τ. f(t₃)`; a failed generic test for `ω` is inconclusive.
    fn exists_in(&mut self, ty: &MirrorType, avoid: &Term, f: &mut dyn FnMut(&mut Self, &Term) -> Verdict) -> Verdict {
        let (xs, open) = match self.sys.canonical(ty) {
            Some(xs) => (xs, false),
            None => (vec![fresh_external(avoid)], true),
        };
        let mut acc = Verdict::False;
        for x in xs {
            acc = acc.or(f(self, &x));
            if acc.is_true() {
                return acc;
            }
        }
        if open {
            Verdict::Unknown
        } else {
            acc
        }
    }

    /// `Ξ t₁ t₂`-style clause: `∀s' ≥ s. ∀t₃ ∈ 𝕋_τ. body(t₃, s')` with `τ`
    /// the type of `t₁` (at `s` or at each `s'` depending on the mode).
    fn xi_forall(&mut self, t1: &Term, t2: &Term, n: usize, s: State, body: &dyn Fn(&Term) -> (Term, Truth)) -> Verdict {
        let mut acc = Verdict::True;
        let fixed = match self.cfg.mode {
            XiMode::Literal => Some(self.sim_at(t1, n, s)),
            XiMode::PerState => None,
        };
        for s2 in self.later(s) {
            let sim = fixed.clone().unwrap_or_else(|| self.sim_at(t1, n, s2));
            let v = match sim {
                MirrorSim::Typed(ty) => self.forall_in(&ty, t2, &mut |c, x| {
                    let (q, r) = body(x);
                    c.leadsto_at(&q, r, n - 1, s2)
                }),
                MirrorSim::Untyped => Verdict::False,
                MirrorSim::Unknown => Verdict::Unknown,
            };
            acc = acc.and(v);
            if acc.is_false() {
                break;
            }
        }
        acc
    }

    pub(crate) fn succ_at(&mut self, t: &Term, r: Truth, n: usize, s: State) -> Verdict {
        let key = (t.clone(), r, n, s);
        if let Some(v) = self.succ.get(&key) {
            return *v;
        }
        if !self.burn() {
            return Verdict::Unknown;
        }
        let v = match r {
            Truth::Top => self.succ_top(t, n, s),
            Truth::Bot => self.succ_bot(t, n, s),
        };
        if v.is_definite() {
            self.succ.insert(key, v);
        }
        v
    }

    fn is_d_o(&self, t: &Term) -> bool {
        self.sys.type_of(t) == Some(&pred2::SimpleType::O)
    }

    fn succ_top(&mut self, t: &Term, n: usize, s: State) -> Verdict {
        if let Some(b) = self.sys.holds(t, s) {
            return Verdict::from(b);
        }
        if let Some(u) = l_shape(t) {
            if self.sys.base_pred(&u).is_some() || u == sugar::h_term() {
                return Verdict::True;
            }
        }
        if let Some((f, c)) = t.as_app() {
            if let Some(b) = self.sys.base_pred(f) {
                if self.sys.type_of(c) == Some(&pred2::SimpleType::Base(b)) {
                    return Verdict::True;
                }
            }
        }
        let h = h_shape(t);
        if let Some(u) = &h {
            if self.is_d_o(u) {
                return Verdict::True;
            }
        }
        if n == 0 {
            return Verdict::False;
        }
        let mut acc = Verdict::False;
        if let Some((t1, t2)) = xi_shape(t) {
            let t2c = t2.clone();
            acc = acc.or(self.xi_forall(&t1, &t2, n, s, &move |x| (Term::app(t2c.clone(), x.clone()), Truth::Top)));
            if acc.is_true() {
                return acc;
            }
        }
        if let Some(u) = &h {
            if let Some((t1, t2)) = xi_shape(u) {
                let t2c = t2.clone();
                acc = acc.or(self.xi_forall(&t1, &t2, n, s, &move |x| (sugar::h(&Term::app(t2c.clone(), x.clone())), Truth::Top)));
                if acc.is_true() {
                    return acc;
                }
            }
            acc = acc.or(self.leadsto_at(u, Truth::Top, n - 1, s));
        }
        acc
    }

    fn succ_bot(&mut self, t: &Term, n: usize, s: State) -> Verdict {
        if let Some(b) = self.sys.holds(t, s) {
            return Verdict::from(!b);
        }
        if n == 0 {
            return Verdict::False;
        }
        let Some((t1, t2)) = xi_shape(t) else { return Verdict::False };
        let prop = self.succ_at(&sugar::h(t), Truth::Top, n - 1, s);
        if prop.is_false() {
            return prop;
        }
        let fixed = match self.cfg.mode {
            XiMode::Literal => Some(self.sim_at(&t1, n, s)),
            XiMode::PerState => None,
        };
        let mut acc = Verdict::False;
        for s2 in self.later(s) {
            let sim = fixed.clone().unwrap_or_else(|| self.sim_at(&t1, n, s2));
            let v = match sim {
                MirrorSim::Typed(ty) => {
                    let t2c = t2.clone();
                    self.exists_in(&ty, &t2, &mut |c, x| c.leadsto_at(&Term::app(t2c.clone(), x.clone()), Truth::Bot, n - 1, s2))
                }
                MirrorSim::Untyped => Verdict::False,
                MirrorSim::Unknown => Verdict::Unknown,
            };
            acc = acc.or(v);
            if acc.is_true() {
                break;
            }
        }
        prop.and(acc)
    }

    pub(crate) fn sim_at(&mut self, t: &Term, n: usize, s: State) -> MirrorSim {
        let key = (t.clone(), n, s);
        if let Some(v) = self.sim.get(&key) {
            return v.clone();
        }
        let mut found = Vec::new();
        let mut unknown = false;
        if let Some(b) = self.sys.base_pred(t) {
            found.push(MirrorType::Base(b));
        }
        if *t == sugar::h_term() {
            found.push(MirrorType::O);
        }
        if n > 0 {
            if let Some(u) = k_shape(t) {
                for (r, ty) in [(Truth::Top, MirrorType::Omega), (Truth::Bot, MirrorType::Epsilon)] {
                    match self.leadsto_at(&u, r, n - 1, s) {
                        Verdict::True => found.push(ty),
                        Verdict::Unknown => unknown = true,
                        Verdict::False => {}
                    }
                }
            }
        }
        found.sort();
        found.dedup();
        if found.len() > 1 {
            self.conflicts.push((t.clone(), n, s, found.clone()));
        }
        let v = match found.into_iter().next() {
            Some(ty) => MirrorSim::Typed(ty),
            None if unknown => MirrorSim::Unknown,
            None => MirrorSim::Untyped,
        };
        if v != MirrorSim::Unknown {
            self.sim.insert(key, v.clone());
        }
        v
    }
}

/// Whether a term mentions an external constant.
pub fn mentions_external(t: &Term) -> bool {
    let mut found = false;
    t.walk(&mut |u: &Term| {
        if matches!(u.as_const(), Some(Const::Ext(_))) {
            found = true;
        }
    });
    found
}
