//! Bounded backward proof search (iterative deepening) and the
//! term-model evaluator built on it.
//!
//! The search is incomplete by design: `XiE` mediators are drawn only from
//! restricted quantifications occurring in the hypotheses and instances only
//! from subterms of the hypotheses and the goal.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use lambda_core::reduce::{beta_eta_equal, reduce_upto};
use lambda_core::sugar::{self, l_shape, xi_shape};
use lambda_core::{fresh_name, Const, Kind, ReductionBudget, Term, Verdict};

use crate::check::{dn_axiom, f_args, h_arg, l_h};
use crate::deriv::{IParams, IRule, IllativeDerivation, System};

/// Search configuration.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Target system.
    pub system: System,
    /// Budget for normalising goals and hypotheses.
    pub budget: ReductionBudget,
    /// Maximum derivation height.
    pub depth: usize,
}

impl SearchConfig {
    /// Configuration with the default budget.
    pub fn new(system: System, depth: usize) -> SearchConfig {
        SearchConfig { system, budget: ReductionBudget::default(), depth }
    }
}

struct Searcher<'a> {
    cfg: &'a SearchConfig,
    failed: HashSet<(Vec<Term>, Term, usize)>,
    nodes: usize,
}

const NODE_LIMIT: usize = 200_000;

fn normal_form(t: &Term, b: &ReductionBudget) -> Option<Term> {
    let (nf, normal) = reduce_upto(t, b.max_steps, b.size_cap);
    normal.then_some(nf)
}

fn subterms(ts: &[&Term]) -> Vec<Term> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in ts {
        t.walk(&mut |s| {
            if s.is_locally_closed() && seen.insert(s.clone()) {
                out.push(s.clone());
            }
        });
    }
    out
}

impl Searcher<'_> {
    fn fresh(&self, hyps: &BTreeSet<Term>, ts: &[&Term]) -> Arc<str> {
        let mut avoid: BTreeSet<Arc<str>> = hyps.iter().flat_map(|h| h.free_vars()).collect();
        for t in ts {
            avoid.extend(t.free_vars());
        }
        Arc::from(fresh_name("_x", &|n: &str| avoid.contains(n)).as_str())
    }

    fn prove(&mut self, hyps: &BTreeSet<Term>, goal: &Term, depth: usize) -> Option<IllativeDerivation> {
        if depth == 0 || self.nodes > NODE_LIMIT {
            return None;
        }
        let key = (hyps.iter().cloned().collect::<Vec<_>>(), goal.clone(), depth);
        if self.failed.contains(&key) {
            return None;
        }
        self.nodes += 1;
        let r = self.prove_uncached(hyps, goal, depth);
        if r.is_none() {
            self.failed.insert(key);
        }
        r
    }

    fn prove_uncached(&mut self, hyps: &BTreeSet<Term>, goal: &Term, depth: usize) -> Option<IllativeDerivation> {
        let b = self.cfg.budget;
        let node = |rule, premises| IllativeDerivation::new(rule, hyps.clone(), goal.clone(), premises);
        if hyps.contains(goal) {
            return Some(node(IRule::Ax, vec![]));
        }
        if *goal == l_h() {
            return Some(node(IRule::AxLH, vec![]));
        }
        if let Some(a) = l_shape(goal) {
            if let Kind::Const(Const::A(base)) = a.kind() {
                return Some(node(IRule::AxLA, vec![]).with_params(IParams {
                    base: Some(base.clone()),
                    ..IParams::default()
                }));
            }
        }
        if self.cfg.system == System::Iwc && *goal == dn_axiom() {
            return Some(node(IRule::DN, vec![]));
        }
        let nf = normal_form(goal, &b);
        // a hypothesis βη-equal to the goal
        if depth >= 2 {
            if let Some(nf) = &nf {
                for h in hyps {
                    if normal_form(h, &b).as_ref() == Some(nf) {
                        let ax = IllativeDerivation::ax(hyps.clone(), h.clone());
                        return Some(IllativeDerivation::eq(ax, goal.clone()));
                    }
                }
            }
        }
        if let Some(d) = self.structural(hyps, goal, depth) {
            return Some(d);
        }
        if let Some(nf) = nf.filter(|n| n != goal) {
            if let Some(d) = self.prove(hyps, &nf, depth - 1) {
                return Some(IllativeDerivation::eq(d, goal.clone()));
            }
        }
        None
    }

    fn structural(&mut self, hyps: &BTreeSet<Term>, goal: &Term, depth: usize) -> Option<IllativeDerivation> {
        let node = |rule, premises| IllativeDerivation::new(rule, hyps.clone(), goal.clone(), premises);
        let with_x = |d: IllativeDerivation, x: Arc<str>| d.with_params(IParams { x: Some(x), ..IParams::default() });
        if let Some((t1, t2)) = xi_shape(goal) {
            let x = self.fresh(hyps, &[goal]);
            let mut hx = hyps.clone();
            hx.insert(Term::app(t1.clone(), Term::var(&x)));
            if let Some(p1) = self.prove(hyps, &sugar::l(&t1), depth - 1) {
                if let Some(p0) = self.prove(&hx, &Term::app(t2, Term::var(&x)), depth - 1) {
                    return Some(with_x(node(IRule::XiI, vec![p0, p1]), x));
                }
            }
        }
        if let Some(inner) = h_arg(goal) {
            if let Some((t1, t2)) = xi_shape(&inner) {
                let x = self.fresh(hyps, &[goal]);
                let mut hx = hyps.clone();
                hx.insert(Term::app(t1.clone(), Term::var(&x)));
                if let Some(p1) = self.prove(hyps, &sugar::l(&t1), depth - 1) {
                    let g0 = sugar::h(&Term::app(t2, Term::var(&x)));
                    if let Some(p0) = self.prove(&hx, &g0, depth - 1) {
                        return Some(with_x(node(IRule::XiH, vec![p0, p1]), x));
                    }
                }
            }
            if let Some(p) = self.prove(hyps, &inner, depth - 1) {
                return Some(node(IRule::Hi, vec![p]));
            }
        }
        if self.cfg.system != System::I0 {
            if let Some(g) = l_shape(goal) {
                for (t1, t2) in f_args(&g) {
                    let x = self.fresh(hyps, &[goal]);
                    let mut hx = hyps.clone();
                    hx.insert(Term::app(t1.clone(), Term::var(&x)));
                    if let Some(p1) = self.prove(hyps, &sugar::l(&t1), depth - 1) {
                        if let Some(p0) = self.prove(&hx, &sugar::l(&t2), depth - 1) {
                            return Some(node(IRule::FL, vec![p0, p1]).with_params(IParams {
                                x: Some(x),
                                t1: Some(t1),
                                t2: Some(t2),
                                ..IParams::default()
                            }));
                        }
                    }
                }
            }
        }
        self.xi_elim(hyps, goal, depth)
    }

    fn xi_elim(&mut self, hyps: &BTreeSet<Term>, goal: &Term, depth: usize) -> Option<IllativeDerivation> {
        let b = self.cfg.budget;
        let mut pool: Vec<&Term> = hyps.iter().collect();
        pool.push(goal);
        let subs = subterms(&pool);
        let hyp_subs = subterms(&hyps.iter().collect::<Vec<_>>());
        let mediators: Vec<(Term, Term)> = hyp_subs.iter().filter_map(xi_shape).collect();
        for (t1, t2) in mediators {
            for t3 in &subs {
                let inst = Term::app(t2.clone(), t3.clone());
                let concl_ok = inst == *goal || beta_eta_equal(&inst, goal, &b) == Verdict::True;
                if !concl_ok {
                    continue;
                }
                let major_goal = sugar::xi(&t1, &t2);
                let Some(major) = self.prove(hyps, &major_goal, depth - 1) else { continue };
                let Some(minor) = self.prove(hyps, &Term::app(t1.clone(), t3.clone()), depth - 1) else { continue };
                return Some(
                    IllativeDerivation::new(IRule::XiE, hyps.clone(), goal.clone(), vec![major, minor]).with_params(
                        IParams { t1: Some(t1.clone()), t3: Some(t3.clone()), budget: Some(b.max_steps), ..IParams::default() },
                    ),
                );
            }
        }
        None
    }
}

/// Search for a derivation of `hyps ⊢ goal` of height at most `cfg.depth`,
/// by iterative deepening; the first derivation found (in a fixed rule
/// order) is returned.
pub fn search_proof(hyps: &BTreeSet<Term>, goal: &Term, cfg: &SearchConfig) -> Option<IllativeDerivation> {
    let mut s = Searcher { cfg, failed: HashSet::new(), nodes: 0 };
    (1..=cfg.depth).find_map(|d| s.prove(hyps, goal, d))
}

/// `True` if `Γ ⊢ t` is found in the full intuitionistic system within the
/// given height, `Unknown` otherwise (never `False`).
pub fn term_model_eval(hyps: &BTreeSet<Term>, t: &Term, b: &ReductionBudget, depth: usize) -> Verdict {
    term_model_eval_in(System::Iw, hyps, t, b, depth)
}

/// [`term_model_eval`] in a chosen system.
pub fn term_model_eval_in(system: System, hyps: &BTreeSet<Term>, t: &Term, b: &ReductionBudget, depth: usize) -> Verdict {
    let cfg = SearchConfig { system, budget: *b, depth };
    match search_proof(hyps, t, &cfg) {
        Some(_) => Verdict::True,
        None => Verdict::Unknown,
    }
}
