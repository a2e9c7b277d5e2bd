//! The mirror signature and its fixed rewrite system: β, η and one rule
//! `c c₁ → c₂` per entry of a function table of the predicate-logic model.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use kripke_fin::{Elem, KripkeModel, State};
use lambda_core::reduce::{beta_contract, eta_contract, one_step_reducts};
use lambda_core::{Const, Kind, Term};
use pred2::SimpleType;
use thiserror::Error;

/// Errors of the mirror construction and its queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MirrorError {
    /// `D_o` lacks an element forced everywhere or nowhere.
    #[error("D_o has no element whose truth set is {0}")]
    MissingTruthValue(&'static str),
    /// A query term has free variables.
    #[error("term is not closed: {0}")]
    NotClosed(String),
    /// A state index out of range.
    #[error("no state {0}")]
    NoState(usize),
    /// The stage exceeds the configured bound.
    #[error("stage {0} exceeds the bound {1}")]
    Stage(usize, usize),
    /// Evaluating the object-level side failed.
    #[error("{0}")]
    Eval(#[from] kripke_fin::EvalError),
}

/// Types of the mirror stage relations: base types, `o`, `ω` and `ε`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MirrorType {
    /// Propositions.
    O,
    /// A base type.
    Base(Arc<str>),
    /// Arbitrary objects.
    Omega,
    /// The empty type.
    Epsilon,
}

impl std::fmt::Display for MirrorType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MirrorType::O => write!(f, "o"),
            MirrorType::Base(b) => write!(f, "{b}"),
            MirrorType::Omega => write!(f, "ω"),
            MirrorType::Epsilon => write!(f, "ε"),
        }
    }
}

/// The mirror signature `Σ⁺` and rewrite system `R` of a finite model.
#[derive(Clone, Debug)]
pub struct MirrorSystem {
    model: KripkeModel,
    rules: HashMap<(Elem, Elem), Elem>,
    by_name: HashMap<Arc<str>, Elem>,
    top: Elem,
    bot: Elem,
}

impl MirrorSystem {
    /// Build the signature and rules from the model's function tables.
    pub fn build(model: KripkeModel) -> Result<MirrorSystem, MirrorError> {
        let all = model.all_states();
        let d_o = model.domain(&SimpleType::O).to_vec();
        let top = *d_o.iter().find(|&&e| model.sigma_of(e) == all).ok_or(MirrorError::MissingTruthValue("all states"))?;
        let bot = *d_o.iter().find(|&&e| model.sigma_of(e) == 0).ok_or(MirrorError::MissingTruthValue("empty"))?;
        let by_name = model.elems.iter().enumerate().map(|(i, e)| (Arc::from(e.name.as_str()), i)).collect();
        let rules = model.app.clone();
        Ok(MirrorSystem { model, rules, by_name, top, bot })
    }

    /// The underlying model.
    pub fn model(&self) -> &KripkeModel {
        &self.model
    }

    /// The canonical constant of an element.
    pub fn constant(&self, e: Elem) -> Term {
        Term::canon(&self.model.elems[e].name)
    }

    /// `δ`: the element a canonical constant stands for.
    pub fn delta(&self, t: &Term) -> Option<Elem> {
        match t.as_const()? {
            Const::Canon(n) => self.by_name.get(n).copied(),
            _ => None,
        }
    }

    /// `c⁺` for an object-language constant.
    pub fn plus(&self, c: &str) -> Option<Term> {
        self.model.interp.get(c).map(|&e| self.constant(e))
    }

    /// The constant `⊤` (`ς = S`).
    pub fn top(&self) -> Term {
        self.constant(self.top)
    }

    /// The constant `⊥` (`ς = ∅`).
    pub fn bot(&self) -> Term {
        self.constant(self.bot)
    }

    /// Base types of the model.
    pub fn base_types(&self) -> Vec<Arc<str>> {
        self.model
            .domains
            .keys()
            .filter_map(|t| match t {
                SimpleType::Base(b) => Some(b.clone()),
                _ => None,
            })
            .collect()
    }

    /// Whether `t` is `A_b` for a base type of the model.
    pub fn base_pred(&self, t: &Term) -> Option<Arc<str>> {
        match t.kind() {
            Kind::Const(Const::A(b)) if self.model.domains.contains_key(&SimpleType::Base(b.clone())) => Some(b.clone()),
            _ => None,
        }
    }

    /// The element type of a canonical constant.
    pub fn type_of(&self, t: &Term) -> Option<&SimpleType> {
        self.delta(t).map(|e| &self.model.elems[e].ty)
    }

    /// `s ∈ ς(c)` for `c ∈ D_o`; `None` if `t` is not such a constant.
    pub fn holds(&self, t: &Term, s: State) -> Option<bool> {
        let e = self.delta(t)?;
        (self.model.elems[e].ty == SimpleType::O).then(|| self.model.sigma_of(e) & (1 << s) != 0)
    }

    /// Canonical terms of a finite type (`None` for `ω`).
    pub fn canonical(&self, ty: &MirrorType) -> Option<Vec<Term>> {
        let st = match ty {
            MirrorType::O => SimpleType::O,
            MirrorType::Base(b) => SimpleType::Base(b.clone()),
            MirrorType::Epsilon => return Some(Vec::new()),
            MirrorType::Omega => return None,
        };
        Some(self.model.domain(&st).iter().map(|&e| self.constant(e)).collect())
    }

    /// All rules `c c₁ → c₂`, sorted.
    pub fn rules(&self) -> Vec<(Term, Term)> {
        let mut v: Vec<(Term, Term)> = self
            .rules
            .iter()
            .map(|(&(f, a), &r)| (Term::app(self.constant(f), self.constant(a)), self.constant(r)))
            .collect();
        v.sort_by_cached_key(|(l, _)| lambda_core::print(l));
        v
    }

    /// Overlapping rule pairs that do not join. Left-hand sides are
    /// applications of two constants, so they overlap neither β/η redexes nor
    /// each other except when equal; equal left-hand sides must agree.
    pub fn critical_pairs(&self) -> Vec<(Term, Term, Term)> {
        let mut by_lhs: BTreeMap<String, Vec<(Term, Term)>> = BTreeMap::new();
        for (l, r) in self.rules() {
            by_lhs.entry(lambda_core::print(&l)).or_default().push((l, r));
        }
        let mut out = Vec::new();
        for rs in by_lhs.values() {
            for w in rs.windows(2) {
                if w[0].1 != w[1].1 {
                    out.push((w[0].0.clone(), w[0].1.clone(), w[1].1.clone()));
                }
            }
        }
        for (l, _) in self.rules() {
            let (f, a) = l.as_app().expect("application");
            if f.as_lam().is_some() || a.as_lam().is_some() {
                out.push((l.clone(), l.clone(), l.clone()));
            }
        }
        out
    }

    /// Contract a table redex at the root.
    pub fn table_contract(&self, t: &Term) -> Option<Term> {
        let (f, a) = t.as_app()?;
        let r = self.rules.get(&(self.delta(f)?, self.delta(a)?))?;
        Some(self.constant(*r))
    }

    /// All one-step `R`-reducts.
    pub fn reducts(&self, t: &Term) -> Vec<Term> {
        let mut out = one_step_reducts(t);
        self.table_reducts(t, &mut out);
        let mut seen = std::collections::HashSet::new();
        out.retain(|r| seen.insert(r.clone()));
        out
    }

    fn table_reducts(&self, t: &Term, out: &mut Vec<Term>) {
        if let Some(r) = self.table_contract(t) {
            out.push(r);
        }
        match t.kind() {
            Kind::App(f, a) => {
                let mut fs = Vec::new();
                self.table_reducts(f, &mut fs);
                out.extend(fs.into_iter().map(|f2| Term::app(f2, a.clone())));
                let mut as_ = Vec::new();
                self.table_reducts(a, &mut as_);
                out.extend(as_.into_iter().map(|a2| Term::app(f.clone(), a2)));
            }
            Kind::Lam(n, b) => {
                let mut bs = Vec::new();
                self.table_reducts(b, &mut bs);
                out.extend(bs.into_iter().map(|b2| Term::lam_raw(n, b2)));
            }
            _ => {}
        }
    }

    /// `R`-normal form by normal-order reduction, or `None` if more than
    /// `steps` contractions or a term larger than `size_cap` would be needed.
    pub fn normalize(&self, t: &Term, steps: usize, size_cap: usize) -> Option<Term> {
        let mut fuel = steps;
        self.nf(t, &mut fuel, size_cap)
    }

    fn nf(&self, t: &Term, fuel: &mut usize, cap: usize) -> Option<Term> {
        let w = self.whnf(t, fuel, cap)?;
        match w.kind() {
            Kind::Lam(n, b) => {
                let b2 = self.nf(b, fuel, cap)?;
                let l = Term::lam_raw(n, b2);
                Some(eta_contract(&l).unwrap_or(l))
            }
            Kind::App(..) => {
                let (head, args) = w.spine();
                let mut acc = head;
                for a in args {
                    let a2 = self.nf(&a, fuel, cap)?;
                    acc = Term::app(acc, a2);
                    if let Some(r) = self.table_contract(&acc) {
                        *fuel = fuel.checked_sub(1)?;
                        acc = r;
                    }
                }
                // a table step may have produced a head that is now applied
                // to further arguments only as a constant: no new β redex
                Some(acc)
            }
            _ => Some(w),
        }
    }

    fn whnf(&self, t: &Term, fuel: &mut usize, cap: usize) -> Option<Term> {
        let mut cur = t.clone();
        loop {
            if cur.size() > cap {
                return None;
            }
            let Kind::App(f, a) = cur.kind() else { return Some(cur) };
            let (f, a) = (f.clone(), a.clone());
            let f2 = self.whnf(&f, fuel, cap)?;
            if f2.as_lam().is_some() {
                *fuel = fuel.checked_sub(1)?;
                cur = beta_contract(&Term::app(f2, a)).expect("β redex");
                continue;
            }
            if self.delta(&f2).is_some() {
                let a2 = self.nf(&a, fuel, cap)?;
                let app = Term::app(f2, a2);
                if let Some(r) = self.table_contract(&app) {
                    *fuel = fuel.checked_sub(1)?;
                    cur = r;
                    continue;
                }
                return Some(app);
            }
            return Some(Term::app(f2, a));
        }
    }
}
