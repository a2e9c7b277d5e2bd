//! Stage relations: reduction with table rules, typing `~ₙ`, canonical
//! representation `≻ₙ` and `⇝ₙ`, as memoised three-valued queries.
//!
//! Relations at stage `< n` are read at stage `n − 1` (they are monotone in
//! the stage). Universal quantification over canonical terms of a finite
//! type is exhaustive; over `ω` it uses a fresh variable as generic element
//! (plus optional extra witness terms).

use std::collections::{HashMap, HashSet, VecDeque};

use lambda_core::reduce::one_step_reducts;
use lambda_core::sugar::{self, f_shapes, h_shape, k_shape, l_shape, xi_shape};
use lambda_core::{Const, Kind, Term, Verdict};

use crate::error::StageError;
use crate::types::TypePlus;
use crate::universe::CanonUniverse;

/// Bounds of the stage engine.
#[derive(Clone, Debug, PartialEq)]
pub struct StageConfig {
    /// Largest stage `N_max`.
    pub stage_bound: usize,
    /// Maximum number of distinct terms explored per reachability query.
    pub step_budget: usize,
    /// Terms larger than this are not explored.
    pub size_cap: usize,
    /// Extra closed terms used alongside the generic element for `ω`.
    pub extra_witnesses: Vec<Term>,
    /// Work units (reduction expansions and clause evaluations) available
    /// to one top-level query; exhaustion yields Unknown.
    pub work_limit: usize,
}

impl Default for StageConfig {
    fn default() -> Self {
        StageConfig { stage_bound: 8, step_budget: 200, size_cap: 400, extra_witnesses: Vec::new(), work_limit: 100_000 }
    }
}

/// Outcome of a typing query.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SimVerdict {
    /// `t ~ₙ τ`.
    Typed(TypePlus),
    /// No typing rule applies.
    Untyped,
    /// Not decided within the budgets.
    Unknown,
}

/// A term that received two different types at one stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimConflict {
    /// The term.
    pub term: Term,
    /// The stage.
    pub stage: usize,
    /// The distinct types derived.
    pub types: Vec<TypePlus>,
}

/// Memo tables of the stage relations over a canonical universe.
#[derive(Debug)]
pub struct StageCache {
    uni: CanonUniverse,
    cfg: StageConfig,
    succ: HashMap<(Term, Term, usize), Verdict>,
    sim: HashMap<(Term, usize), SimVerdict>,
    leads: HashMap<(Term, Term, usize), Verdict>,
    steps: HashMap<(Term, usize), (Vec<Term>, bool)>,
    conflicts: Vec<SimConflict>,
    fuel: usize,
}

/// A variable named `{prefix}{k}` for the least `k` not free in `avoid`.
pub fn fresh_var(prefix: &str, avoid: &Term) -> Term {
    let fv = avoid.free_vars();
    (0..)
        .map(|k| format!("{prefix}{k}"))
        .find(|n| !fv.contains(n.as_str()))
        .map(|n| Term::var(&n))
        .expect("unbounded supply")
}

/// Replace loose bound indices by fresh free variables (innermost first).
fn open_loose(a: &Term) -> Term {
    let k = a.loose_bound();
    let mut r = a.clone();
    let fv = a.free_vars();
    let mut j = 0;
    for _ in 0..k {
        let name = loop {
            let n = format!("_l{j}");
            j += 1;
            if !fv.contains(n.as_str()) {
                break n;
            }
        };
        r = r.instantiate(&Term::var(&name));
    }
    r
}

impl StageCache {
    /// An empty cache.
    pub fn new(uni: CanonUniverse, cfg: StageConfig) -> StageCache {
        StageCache {
            uni,
            cfg,
            succ: HashMap::new(),
            sim: HashMap::new(),
            leads: HashMap::new(),
            steps: HashMap::new(),
            conflicts: Vec::new(),
            fuel: 0,
        }
    }

    /// The universe.
    pub fn universe(&self) -> &CanonUniverse {
        &self.uni
    }

    /// The configuration.
    pub fn config(&self) -> &StageConfig {
        &self.cfg
    }

    /// Terms that received two distinct types.
    pub fn conflicts(&self) -> &[SimConflict] {
        &self.conflicts
    }

    /// Cached `≻` entries `(t, ρ, n) ↦ verdict`.
    pub fn succ_entries(&self) -> impl Iterator<Item = (&(Term, Term, usize), &Verdict)> {
        self.succ.iter()
    }

    /// Cached `⇝` entries `(t, ρ, n) ↦ verdict`.
    pub fn leadsto_entries(&self) -> impl Iterator<Item = (&(Term, Term, usize), &Verdict)> {
        self.leads.iter()
    }

    /// Cached `~` entries `(t, n) ↦ verdict`.
    pub fn sim_entries(&self) -> impl Iterator<Item = (&(Term, usize), &SimVerdict)> {
        self.sim.iter()
    }

    fn check_query(&self, rho: &Term, n: usize) -> Result<(), StageError> {
        if n > self.cfg.stage_bound {
            return Err(StageError::Config(format!("stage {n} exceeds the bound {}", self.cfg.stage_bound)));
        }
        match self.uni.canonical_type(rho) {
            Some(TypePlus::Omega) | None => Err(StageError::NotCanonical(lambda_core::print(rho))),
            Some(_) => Ok(()),
        }
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

    /// `t ≻ₙ ρ` without validation of `ρ` (a fresh top-level query).
    pub fn succ(&mut self, t: &Term, rho: &Term, n: usize) -> Verdict {
        self.refuel();
        self.succ_at(t, rho, n.min(self.cfg.stage_bound))
    }

    /// `t ⇝ₙ ρ` without validation of `ρ` (a fresh top-level query).
    pub fn leadsto(&mut self, t: &Term, rho: &Term, n: usize) -> Verdict {
        self.refuel();
        self.leadsto_at(t, rho, n.min(self.cfg.stage_bound))
    }

    /// `t ~ₙ τ` (a fresh top-level query).
    pub fn sim(&mut self, t: &Term, n: usize) -> SimVerdict {
        self.refuel();
        self.sim_at(t, n.min(self.cfg.stage_bound))
    }

    /// `t ≻ₙ ρ`.
    pub fn query_succ(&mut self, t: &Term, rho: &Term, n: usize) -> Result<Verdict, StageError> {
        self.check_query(rho, n)?;
        Ok(self.succ(t, rho, n))
    }

    /// `t ⇝ₙ ρ`.
    pub fn query_leadsto(&mut self, t: &Term, rho: &Term, n: usize) -> Result<Verdict, StageError> {
        self.check_query(rho, n)?;
        Ok(self.leadsto(t, rho, n))
    }

    /// `t ~ₙ τ`: the type, if any.
    pub fn query_sim(&mut self, t: &Term, n: usize) -> Result<SimVerdict, StageError> {
        if n > self.cfg.stage_bound {
            return Err(StageError::Config(format!("stage {n} exceeds the bound {}", self.cfg.stage_bound)));
        }
        Ok(self.sim(t, n))
    }

    /// Model-level truth: `t ⇝ ⊤` at the stage bound.
    pub fn certify_true(&mut self, t: &Term) -> Verdict {
        let n = self.cfg.stage_bound;
        self.leadsto(t, &CanonUniverse::top(), n)
    }

    /// Whether the truth verdict of `t` is unchanged between the last two
    /// stages (the tracked fragment has reached its fixpoint for `t`).
    pub fn saturated(&mut self, t: &Term) -> bool {
        let n = self.cfg.stage_bound;
        if n == 0 {
            return false;
        }
        let top = CanonUniverse::top();
        let bot = CanonUniverse::bot();
        self.leadsto(t, &top, n) == self.leadsto(t, &top, n - 1) && self.leadsto(t, &bot, n) == self.leadsto(t, &bot, n - 1)
    }

    /// One-step reducts at stage `n`: β, η, and (for `n ≥ 1`) the table
    /// rules `c t → 𝓕(c)(ρ₁)` whenever `t ≻ₙ₋₁ ρ₁`. The flag is false if some
    /// table-rule side condition was undecided.
    pub fn reduce_step(&mut self, t: &Term, n: usize) -> (Vec<Term>, bool) {
        self.refuel();
        self.reduce_step_at(t, n.min(self.cfg.stage_bound))
    }

    pub(crate) fn reduce_step_at(&mut self, t: &Term, n: usize) -> (Vec<Term>, bool) {
        let key = (t.clone(), n);
        if let Some(r) = self.steps.get(&key) {
            return r.clone();
        }
        let mut out = one_step_reducts(t);
        let mut complete = true;
        if n >= 1 {
            out.extend(self.table_reducts(t, n, &mut complete));
        }
        let mut seen = HashSet::new();
        out.retain(|r| seen.insert(r.clone()));
        if complete {
            self.steps.insert(key, (out.clone(), complete));
        }
        (out, complete)
    }

    fn table_reducts(&mut self, t: &Term, n: usize, complete: &mut bool) -> Vec<Term> {
        let mut out = Vec::new();
        match t.kind() {
            Kind::App(f, a) => {
                if let Some((dom, _)) = self.uni.table_signature(f) {
                    if dom != TypePlus::Omega {
                        match self.uni.elements(&dom) {
                            Ok(rhos) => {
                                let arg = open_loose(a);
                                for r1 in rhos {
                                    match self.succ_at(&arg, &r1, n - 1) {
                                        Verdict::True => {
                                            out.push(self.uni.apply(f, &r1).expect("table entry"));
                                        }
                                        Verdict::Unknown => *complete = false,
                                        Verdict::False => {}
                                    }
                                }
                            }
                            Err(_) => *complete = false,
                        }
                    }
                }
                for f2 in self.table_reducts(f, n, complete) {
                    out.push(Term::app(f2, a.clone()));
                }
                for a2 in self.table_reducts(a, n, complete) {
                    out.push(Term::app(f.clone(), a2));
                }
            }
            Kind::Lam(name, b) => {
                for b2 in self.table_reducts(b, n, complete) {
                    out.push(Term::lam_raw(name, b2));
                }
            }
            _ => {}
        }
        out
    }

    /// Terms reachable from `t` at stage `n` (at most `limit`), and whether
    /// the set is complete.
    pub fn reach(&mut self, t: &Term, n: usize, limit: usize) -> (HashSet<Term>, bool) {
        self.refuel();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(t.clone());
        queue.push_back(t.clone());
        let mut complete = true;
        while let Some(u) = queue.pop_front() {
            let (rs, c) = self.reduce_step_at(&u, n);
            complete &= c;
            for r in rs {
                if seen.contains(&r) {
                    continue;
                }
                if r.size() > self.cfg.size_cap || seen.len() >= limit {
                    complete = false;
                    continue;
                }
                seen.insert(r.clone());
                queue.push_back(r);
            }
        }
        (seen, complete)
    }

    pub(crate) fn leadsto_at(&mut self, t: &Term, rho: &Term, n: usize) -> Verdict {
        let key = (t.clone(), rho.clone(), n);
        if let Some(v) = self.leads.get(&key) {
            return *v;
        }
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(t.clone());
        queue.push_back(t.clone());
        let mut complete = true;
        let mut unknown = false;
        let mut result = None;
        while let Some(u) = queue.pop_front() {
            if !self.burn() {
                complete = false;
                break;
            }
            match self.succ_at(&u, rho, n) {
                Verdict::True => {
                    result = Some(Verdict::True);
                    break;
                }
                Verdict::Unknown => unknown = true,
                Verdict::False => {}
            }
            let (rs, c) = self.reduce_step_at(&u, n);
            complete &= c;
            for r in rs {
                if seen.contains(&r) {
                    continue;
                }
                if r.size() > self.cfg.size_cap || seen.len() >= self.cfg.step_budget {
                    complete = false;
                    continue;
                }
                seen.insert(r.clone());
                queue.push_back(r);
            }
        }
        let v = result.unwrap_or(if complete && !unknown { Verdict::False } else { Verdict::Unknown });
        if v.is_definite() {
            self.leads.insert(key, v);
        }
        v
    }

    /// `∀x ∈ 𝕋_τ. f(x)` with the generic element for `ω`.
    fn forall_over(&mut self, ty: &TypePlus, avoid: &Term, f: &mut dyn FnMut(&mut Self, &Term) -> Verdict) -> Verdict {
        let xs = match ty {
            TypePlus::Epsilon => return Verdict::True,
            TypePlus::Omega => {
                let mut xs = vec![fresh_var("_g", avoid)];
                xs.extend(self.cfg.extra_witnesses.iter().cloned());
                xs
            }
            _ => match self.uni.elements(ty) {
                Ok(xs) => xs,
                Err(_) => return Verdict::Unknown,
            },
        };
        let mut acc = Verdict::True;
        for x in xs {
            acc = acc.and(f(self, &x));
            if acc == Verdict::False {
                break;
            }
        }
        acc
    }

    /// `∃x ∈ 𝕋_τ. f(x)`; over `ω` a failed search is inconclusive.
    fn exists_over(&mut self, ty: &TypePlus, avoid: &Term, f: &mut dyn FnMut(&mut Self, &Term) -> Verdict) -> Verdict {
        let (xs, open) = match ty {
            TypePlus::Epsilon => return Verdict::False,
            TypePlus::Omega => {
                let mut xs = vec![fresh_var("_g", avoid)];
                xs.extend(self.cfg.extra_witnesses.iter().cloned());
                (xs, true)
            }
            _ => match self.uni.elements(ty) {
                Ok(xs) => (xs, false),
                Err(_) => return Verdict::Unknown,
            },
        };
        let mut acc = Verdict::False;
        for x in xs {
            acc = acc.or(f(self, &x));
            if acc == Verdict::True {
                return acc;
            }
        }
        if open {
            Verdict::Unknown
        } else {
            acc
        }
    }

    pub(crate) fn succ_at(&mut self, t: &Term, rho: &Term, n: usize) -> Verdict {
        if t == rho {
            return Verdict::True;
        }
        let key = (t.clone(), rho.clone(), n);
        if let Some(v) = self.succ.get(&key) {
            return *v;
        }
        if !self.burn() {
            return Verdict::Unknown;
        }
        let v = match self.uni.canonical_type(rho) {
            Some(TypePlus::Arrow(dom, _)) => {
                if n == 0 {
                    Verdict::False
                } else {
                    let (tt, r) = (t.clone(), rho.clone());
                    self.forall_over(&dom, t, &mut |s, t1| {
                        let target = s.uni.apply(&r, t1).expect("canonical argument");
                        s.leadsto_at(&Term::app(tt.clone(), t1.clone()), &target, n - 1)
                    })
                }
            }
            Some(TypePlus::O) if *rho == CanonUniverse::top() => self.succ_top(t, n),
            Some(TypePlus::O) => self.succ_bot(t, n),
            _ => Verdict::False,
        };
        if v.is_definite() {
            self.succ.insert(key, v);
        }
        v
    }

    fn is_base_pred(&self, t: &Term) -> Option<TypePlus> {
        match t.kind() {
            Kind::Const(Const::A(b)) if self.uni.model().base_domains.contains_key(&**b) => Some(TypePlus::Base(b.clone())),
            _ => None,
        }
    }

    fn succ_top(&mut self, t: &Term, n: usize) -> Verdict {
        let top = CanonUniverse::top();
        let bot = CanonUniverse::bot();
        if let Some(u) = l_shape(t) {
            if self.is_base_pred(&u).is_some() || u == sugar::h_term() {
                return Verdict::True;
            }
        }
        if let Some((f, c)) = t.as_app() {
            if let Some(b) = self.is_base_pred(f) {
                if self.uni.canonical_type(c) == Some(b) {
                    return Verdict::True;
                }
            }
        }
        let h = h_shape(t);
        if let Some(u) = &h {
            if *u == top || *u == bot {
                return Verdict::True;
            }
        }
        if n == 0 {
            return Verdict::False;
        }
        let mut acc = Verdict::False;
        // (Ξ_i^⊤)
        if let Some((t1, t2)) = xi_shape(t) {
            acc = acc.or(self.typed_forall(&t1, &t2, n, &mut |s, x| {
                s.leadsto_at(&Term::app(t2.clone(), x.clone()), &top, n - 1)
            }));
            if acc.is_true() {
                return acc;
            }
        }
        // (Ξ_H^⊤)
        if let Some(u) = &h {
            if let Some((t1, t2)) = xi_shape(u) {
                acc = acc.or(self.typed_forall(&t1, &t2, n, &mut |s, x| {
                    s.leadsto_at(&sugar::h(&Term::app(t2.clone(), x.clone())), &top, n - 1)
                }));
                if acc.is_true() {
                    return acc;
                }
            }
        }
        // (F_L^⊤)
        if let Some(u) = l_shape(t) {
            for (t1, t2) in f_shapes(&u) {
                let v = match self.sim_at(&t1, n) {
                    SimVerdict::Typed(TypePlus::Epsilon) => Verdict::True,
                    SimVerdict::Typed(_) => self.leadsto_at(&sugar::l(&t2), &top, n - 1),
                    SimVerdict::Untyped => Verdict::False,
                    SimVerdict::Unknown => Verdict::Unknown,
                };
                acc = acc.or(v);
                if acc.is_true() {
                    return acc;
                }
            }
        }
        // (H_i^⊤)
        if let Some(u) = &h {
            acc = acc.or(self.leadsto_at(u, &top, n - 1));
        }
        acc
    }

    /// `∃τ. t₁ ~ₙ τ ∧ ∀x ∈ 𝕋_τ. f(x)`; the type is unique when it exists.
    fn typed_forall(&mut self, t1: &Term, t2: &Term, n: usize, f: &mut dyn FnMut(&mut Self, &Term) -> Verdict) -> Verdict {
        match self.sim_at(t1, n) {
            SimVerdict::Typed(ty) => self.forall_over(&ty, t2, f),
            SimVerdict::Untyped => Verdict::False,
            SimVerdict::Unknown => Verdict::Unknown,
        }
    }

    fn succ_bot(&mut self, t: &Term, n: usize) -> Verdict {
        if n == 0 {
            return Verdict::False;
        }
        let Some((t1, t2)) = xi_shape(t) else { return Verdict::False };
        let top = CanonUniverse::top();
        let bot = CanonUniverse::bot();
        let prop = self.succ_at(&sugar::h(t), &top, n - 1);
        if prop.is_false() {
            return prop;
        }
        let witness = match self.sim_at(&t1, n) {
            SimVerdict::Typed(ty) => self.exists_over(&ty, &t2, &mut |s, x| {
                s.leadsto_at(&Term::app(t2.clone(), x.clone()), &bot, n - 1)
            }),
            SimVerdict::Untyped => Verdict::False,
            SimVerdict::Unknown => Verdict::Unknown,
        };
        prop.and(witness)
    }

    pub(crate) fn sim_at(&mut self, t: &Term, n: usize) -> SimVerdict {
        let key = (t.clone(), n);
        if let Some(v) = self.sim.get(&key) {
            return v.clone();
        }
        let mut found: Vec<TypePlus> = Vec::new();
        let mut unknown = false;
        if let Some(b) = self.is_base_pred(t) {
            found.push(b);
        }
        if *t == sugar::h_term() {
            found.push(TypePlus::O);
        }
        if n > 0 {
            if let Some(u) = k_shape(t) {
                for (rho, ty) in [(CanonUniverse::top(), TypePlus::Omega), (CanonUniverse::bot(), TypePlus::Epsilon)] {
                    match self.leadsto_at(&u, &rho, n - 1) {
                        Verdict::True => found.push(ty),
                        Verdict::Unknown => unknown = true,
                        Verdict::False => {}
                    }
                }
            }
            for (t1, t2) in f_shapes(t) {
                match self.sim_at(&t1, n - 1) {
                    SimVerdict::Typed(TypePlus::Epsilon) => found.push(TypePlus::Omega),
                    SimVerdict::Typed(a) => match self.sim_at(&t2, n - 1) {
                        SimVerdict::Typed(b) => found.push(TypePlus::arrow(a, b)),
                        SimVerdict::Unknown => unknown = true,
                        SimVerdict::Untyped => {}
                    },
                    SimVerdict::Unknown => unknown = true,
                    SimVerdict::Untyped => {}
                }
            }
        }
        found.sort();
        found.dedup();
        if found.len() > 1 {
            self.conflicts.push(SimConflict { term: t.clone(), stage: n, types: found.clone() });
        }
        let v = match found.into_iter().next() {
            Some(ty) => SimVerdict::Typed(ty),
            None if unknown => SimVerdict::Unknown,
            None => SimVerdict::Untyped,
        };
        if v != SimVerdict::Unknown {
            self.sim.insert(key, v.clone());
        }
        v
    }
}
