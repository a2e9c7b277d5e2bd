//! Random generation of checkable derivations, used to exercise the derived
//! rules on varied premises.
//!
//! Every derivation produced here passes the checker in `I0` (hence in all
//! three systems).

use std::collections::BTreeSet;

use lambda_core::sugar;
use lambda_core::Term;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::check::{h_arg, l_h};
use crate::deriv::{IParams, IRule, IllativeDerivation};
use crate::elaborate::{elaborate_ph, elaborate_pi, DerivedRule};

/// Atomic propositions used by the generator.
pub fn atoms() -> Vec<Term> {
    vec![Term::user("p"), Term::user("q"), Term::user("r"), Term::var("u"), Term::var("v")]
}

/// A random hypothesis set: some atoms declared propositions (`H a`), some
/// asserted, and occasionally an implication between asserted atoms.
pub fn random_context(rng: &mut impl Rng) -> BTreeSet<Term> {
    let mut g = BTreeSet::new();
    let atoms = atoms();
    for a in &atoms {
        if rng.gen_bool(0.6) {
            g.insert(sugar::h(a));
        }
        if rng.gen_bool(0.3) {
            g.insert(a.clone());
        }
    }
    if rng.gen_bool(0.3) {
        let a = atoms.choose(rng).expect("nonempty").clone();
        let b = atoms.choose(rng).expect("nonempty").clone();
        g.insert(sugar::imp(&a, &b));
    }
    g
}

/// A random derivation with hypotheses exactly `hyps`.
pub fn random_derivation(hyps: &BTreeSet<Term>, depth: usize, rng: &mut impl Rng) -> IllativeDerivation {
    let choice = if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..7) };
    match choice {
        0 if !hyps.is_empty() => {
            let hs: Vec<&Term> = hyps.iter().collect();
            IllativeDerivation::ax(hyps.clone(), (*hs.choose(rng).expect("nonempty")).clone())
        }
        0 | 1 => IllativeDerivation::new(IRule::AxLH, hyps.clone(), l_h(), vec![]),
        2 => IllativeDerivation::new(IRule::AxLA, hyps.clone(), sugar::l(&Term::a("b")), vec![]).with_params(
            IParams { base: Some("b".into()), ..IParams::default() },
        ),
        3 => {
            let d = random_derivation(hyps, depth - 1, rng);
            let c = sugar::h(&d.concl);
            IllativeDerivation::new(IRule::Hi, hyps.clone(), c, vec![d])
        }
        4 => {
            let d = random_derivation(hyps, depth - 1, rng);
            let expanded = if rng.gen_bool(0.5) {
                Term::app(sugar::i_term(), d.concl.clone())
            } else {
                Term::app(sugar::k(&d.concl), l_h())
            };
            IllativeDerivation::eq(d, expanded)
        }
        5 => {
            let (t1, dh) = random_proposition(hyps, depth - 1, rng);
            let mut h1 = hyps.clone();
            h1.insert(t1);
            let d1 = random_derivation(&h1, depth - 1, rng);
            elaborate_pi(&d1, &dh).expect("well-shaped premises")
        }
        _ => {
            let (t1, dh) = random_proposition(hyps, depth - 1, rng);
            let mut h1 = hyps.clone();
            h1.insert(t1);
            let (_, d2) = random_proposition(&h1, depth - 1, rng);
            elaborate_ph(&d2, &dh).expect("well-shaped premises")
        }
    }
}

/// A random proposition `t` with a derivation of `Γ ⊢ H t`.
pub fn random_proposition(hyps: &BTreeSet<Term>, depth: usize, rng: &mut impl Rng) -> (Term, IllativeDerivation) {
    let declared: Vec<Term> = hyps.iter().filter_map(h_arg).collect();
    let choice = if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..4) };
    match choice {
        0 if !declared.is_empty() => {
            let t = declared.choose(rng).expect("nonempty").clone();
            (t.clone(), IllativeDerivation::ax(hyps.clone(), sugar::h(&t)))
        }
        0 | 1 => {
            let d = random_derivation(hyps, depth.min(1), rng);
            let t = d.concl.clone();
            (t.clone(), IllativeDerivation::new(IRule::Hi, hyps.clone(), sugar::h(&t), vec![d]))
        }
        2 => {
            let d = random_derivation(hyps, depth - 1, rng);
            let t = d.concl.clone();
            (t.clone(), IllativeDerivation::new(IRule::Hi, hyps.clone(), sugar::h(&t), vec![d]))
        }
        _ => {
            let (t1, d1) = random_proposition(hyps, depth - 1, rng);
            let mut h1 = hyps.clone();
            h1.insert(t1.clone());
            let (t2, d2) = random_proposition(&h1, depth - 1, rng);
            let d = elaborate_ph(&d2, &d1).expect("well-shaped premises");
            (sugar::imp(&t1, &t2), d)
        }
    }
}

/// Random premises for a derived rule; the returned rule carries the extra
/// hypothesis for `Weak`. Some extra hypotheses mention the generator's
/// eigenvariable names to exercise renaming.
pub fn random_instance(rng: &mut impl Rng) -> (DerivedRule, Vec<IllativeDerivation>) {
    let hyps = random_context(rng);
    let depth = rng.gen_range(1..=3);
    match rng.gen_range(0..4) {
        0 => {
            let (t1, dh) = random_proposition(&hyps, depth, rng);
            let mut h1 = hyps.clone();
            h1.insert(t1);
            (DerivedRule::Pi, vec![random_derivation(&h1, depth, rng), dh])
        }
        1 => {
            let minor = random_derivation(&hyps, depth, rng);
            let t1 = minor.concl.clone();
            let dh = IllativeDerivation::new(IRule::Hi, hyps.clone(), sugar::h(&t1), vec![minor.clone()]);
            let mut h1 = hyps.clone();
            h1.insert(t1);
            let body = random_derivation(&h1, depth, rng);
            let major = elaborate_pi(&body, &dh).expect("well-shaped premises");
            (DerivedRule::Pe, vec![major, minor])
        }
        2 => {
            let (t1, d1) = random_proposition(&hyps, depth, rng);
            let mut h1 = hyps.clone();
            h1.insert(t1);
            let (_, d2) = random_proposition(&h1, depth, rng);
            (DerivedRule::PH, vec![d2, d1])
        }
        _ => {
            let d = random_derivation(&hyps, depth, rng);
            let extra = match rng.gen_range(0..3) {
                0 => Term::var("_x"),
                1 => sugar::h(&Term::var("_x0")),
                _ => atoms().choose(rng).expect("nonempty").clone(),
            };
            (DerivedRule::Weak(extra), vec![d])
        }
    }
}
