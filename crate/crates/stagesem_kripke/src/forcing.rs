//! Forcing of translated formulas in the mirror model, and the comparison
//! with forcing in the predicate-logic model.

use std::sync::Arc;

use kripke_fin::{forces, valuations, KripkeModel, State, Valuation};
use lambda_core::{Const, Kind, Term, Verdict};
use pred2::Expr;
use serde::Serialize;
use translate::env::translate_term;

use crate::stage::{MirrorCache, MirrorConfig};
use crate::system::{MirrorError, MirrorSystem};

/// Replace user constants by their mirror constants `c⁺`.
fn plus_constants(sys: &MirrorSystem, t: &Term) -> Term {
    match t.kind() {
        Kind::Const(Const::User(c)) => sys.plus(c).unwrap_or_else(|| t.clone()),
        Kind::App(f, a) => Term::app(plus_constants(sys, f), plus_constants(sys, a)),
        Kind::Lam(n, b) => Term::lam_raw(n, plus_constants(sys, b)),
        _ => t.clone(),
    }
}

/// The closed instance `⟦φ⟧` under the mirrored valuation `w̃`.
pub fn mirror_instance(sys: &MirrorSystem, w: &Valuation, phi: &Expr) -> Term {
    let mut t = plus_constants(sys, &translate_term(phi));
    for (x, &e) in w {
        t = t.subst(x, &sys.constant(e));
    }
    t
}

/// Whether `⟦φ⟧` under `w̃` reaches `⊤` at state `s` and the stage bound.
pub fn mirror_forces(cache: &mut MirrorCache, s: State, w: &Valuation, phi: &Expr) -> Result<Verdict, MirrorError> {
    let t = mirror_instance(cache.system(), w, phi);
    cache.certify(&t, s)
}

/// One compared instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Instance {
    /// The formula.
    pub formula: String,
    /// The state.
    pub state: String,
    /// The valuation, `x=element` pairs.
    pub valuation: String,
    /// Forcing in the predicate-logic model.
    pub expected: bool,
    /// Mirror verdict, as text.
    pub mirror: String,
}

/// Result of a forcing-equivalence run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct EquivReport {
    /// Instances compared.
    pub checked: usize,
    /// Instances with equal verdicts.
    pub agreed: usize,
    /// Definite disagreements.
    pub disagreements: Vec<Instance>,
    /// Undecided mirror verdicts (with the stage bound and budget used).
    pub unknown: Vec<Instance>,
    /// Stage bound used.
    pub stage_bound: usize,
    /// Step budget used.
    pub step_budget: usize,
}

impl EquivReport {
    /// No disagreement and no Unknown.
    pub fn all_equal(&self) -> bool {
        self.disagreements.is_empty() && self.unknown.is_empty()
    }

    /// Merge another report.
    pub fn merge(&mut self, o: EquivReport) {
        self.checked += o.checked;
        self.agreed += o.agreed;
        self.disagreements.extend(o.disagreements);
        self.unknown.extend(o.unknown);
        self.stage_bound = o.stage_bound;
        self.step_budget = o.step_budget;
    }
}

/// Compare forcing with mirror certification for every state, every formula
/// and every valuation of its free variables.
pub fn forcing_equiv_suite(model: &KripkeModel, formulas: &[Expr], cfg: &MirrorConfig) -> Result<EquivReport, MirrorError> {
    let sys = MirrorSystem::build(model.clone())?;
    let mut cache = MirrorCache::new(sys, cfg.clone());
    forcing_equiv_with(&mut cache, formulas)
}

/// As [`forcing_equiv_suite`], reusing a cache.
pub fn forcing_equiv_with(cache: &mut MirrorCache, formulas: &[Expr]) -> Result<EquivReport, MirrorError> {
    let model = cache.system().model().clone();
    let mut rep = EquivReport { stage_bound: cache.config().stage_bound, step_budget: cache.config().step_budget, ..Default::default() };
    for phi in formulas {
        let vars: Vec<(Arc<str>, pred2::SimpleType)> = phi.free_vars().into_iter().collect();
        for w in valuations(&model, &vars) {
            for s in 0..model.n_states() {
                let expected = forces(&model, s, &w, phi)?;
                let v = mirror_forces(cache, s, &w, phi)?;
                rep.checked += 1;
                let inst = || Instance {
                    formula: phi.to_string(),
                    state: model.states[s].clone(),
                    valuation: kripke_fin::show_valuation(&model, &w),
                    expected,
                    mirror: format!("{v:?}"),
                };
                match v {
                    Verdict::Unknown => rep.unknown.push(inst()),
                    _ if v.is_true() == expected => rep.agreed += 1,
                    _ => rep.disagreements.push(inst()),
                }
            }
        }
    }
    Ok(rep)
}
