//! Random terms over the illative signature and a canonical universe.

use lambda_core::{sugar, Term};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::types::TypePlus;
use crate::stage::StageCache;
use crate::universe::CanonUniverse;

/// Closed atoms: logical constants, combinators and small canonical terms.
pub fn atoms(uni: &CanonUniverse) -> Vec<Term> {
    let mut out = vec![
        Term::xi(),
        Term::l(),
        sugar::h_term(),
        sugar::k_term(),
        sugar::i_term(),
        CanonUniverse::top(),
        CanonUniverse::bot(),
    ];
    let bases: Vec<String> = uni.bases().cloned().collect();
    for b in &bases {
        out.push(Term::a(b));
        let bt = TypePlus::base(b);
        for ty in [bt.clone(), TypePlus::arrow(bt.clone(), bt.clone()), TypePlus::arrow(bt, TypePlus::O)] {
            if let Ok(es) = uni.elements(&ty) {
                out.extend(es.into_iter().take(4));
            }
        }
    }
    if let Ok(es) = uni.elements(&TypePlus::arrow(TypePlus::O, TypePlus::O)) {
        out.extend(es);
    }
    out
}

/// A random closed term of template depth at most `depth`.
pub fn random_term<R: Rng>(rng: &mut R, uni: &CanonUniverse, depth: usize) -> Term {
    let atoms = atoms(uni);
    gen(rng, &atoms, depth, 0)
}

/// A random closed term built to denote an element of the simple type
/// `ty`: canonical terms combined with applications of canonical tables,
/// β-redexes, `K`-redexes with junk arguments, λ-abstractions and
/// propositions.  Supported types are `o`, base types, and arrows between
/// them; others yield a canonical term (or `⊤` when none exists).
pub fn random_typed_term<R: Rng>(rng: &mut R, uni: &CanonUniverse, ty: &TypePlus, depth: usize) -> Term {
    let bases: Vec<TypePlus> = uni.bases().map(|b| TypePlus::base(b)).collect();
    let mut vars = Vec::new();
    typed(rng, uni, &bases, ty, depth, &mut vars)
}

fn first_order(ty: &TypePlus) -> bool {
    matches!(ty, TypePlus::O | TypePlus::Base(_))
}

fn canonical_leaf<R: Rng>(rng: &mut R, uni: &CanonUniverse, ty: &TypePlus) -> Term {
    match uni.count(ty) {
        Ok(n) if n > 0 => uni.element(ty, rng.gen_range(0..n)),
        _ => CanonUniverse::top(),
    }
}

fn typed<R: Rng>(
    rng: &mut R,
    uni: &CanonUniverse,
    bases: &[TypePlus],
    ty: &TypePlus,
    depth: usize,
    vars: &mut Vec<(String, TypePlus)>,
) -> Term {
    let small = |rng: &mut R| -> TypePlus {
        if rng.gen_bool(0.5) {
            TypePlus::O
        } else {
            bases.choose(rng).expect("a base type").clone()
        }
    };
    if depth == 0 || rng.gen_ratio(1, 4) {
        let bound: Vec<&String> = vars.iter().filter(|(_, t)| t == ty).map(|(x, _)| x).collect();
        if !bound.is_empty() && rng.gen_bool(0.5) {
            return Term::var(bound.choose(rng).expect("non-empty"));
        }
        return canonical_leaf(rng, uni, ty);
    }
    let d = depth - 1;
    match rng.gen_range(0..5) {
        0 if first_order(ty) => {
            let a = small(rng);
            let f = typed(rng, uni, bases, &TypePlus::arrow(a.clone(), ty.clone()), d, vars);
            Term::app(f, typed(rng, uni, bases, &a, d, vars))
        }
        1 => Term::app(sugar::i_term(), typed(rng, uni, bases, ty, d, vars)),
        2 => {
            let junk = random_term(rng, uni, 1);
            Term::app(sugar::k(&typed(rng, uni, bases, ty, d, vars)), junk)
        }
        3 => match ty.as_arrow() {
            Some((a, c)) => {
                let x = format!("v{}", vars.len());
                vars.push((x.clone(), a.clone()));
                let body = typed(rng, uni, bases, c, d, vars);
                vars.pop();
                Term::lam(&x, &body)
            }
            None if *ty == TypePlus::O => {
                let b = bases.choose(rng).expect("a base type");
                let TypePlus::Base(name) = b else { unreachable!() };
                match rng.gen_range(0..4) {
                    0 => sugar::imp(&typed(rng, uni, bases, ty, d, vars), &typed(rng, uni, bases, ty, d, vars)),
                    1 => sugar::xi(&Term::a(name), &typed(rng, uni, bases, &TypePlus::arrow(b.clone(), TypePlus::O), d, vars)),
                    2 => sugar::l(&Term::a(name)),
                    _ => sugar::h(&typed(rng, uni, bases, ty, d, vars)),
                }
            }
            None => canonical_leaf(rng, uni, ty),
        },
        _ => {
            let a = small(rng);
            let x = format!("v{}", vars.len());
            vars.push((x.clone(), a.clone()));
            let body = typed(rng, uni, bases, ty, d, vars);
            vars.pop();
            Term::app(Term::lam(&x, &body), typed(rng, uni, bases, &a, d, vars))
        }
    }
}

/// A random peak `t₁ ←ₙ₁ t →ₙ₂ t₂` with `t₁ ≠ t₂`: a random term with two
/// distinct one-step reducts (β, η or table steps) at random stages.
/// Returns `None` when the sampled term has fewer than two reducts.
pub fn random_peak<R: Rng>(rng: &mut R, cache: &mut StageCache, depth: usize) -> Option<Peak> {
    let uni = cache.universe().clone();
    let bound = cache.config().stage_bound;
    let t = random_term(rng, &uni, depth);
    let n1 = rng.gen_range(0..=bound);
    let n2 = rng.gen_range(0..=bound);
    let (r1, _) = cache.reduce_step(&t, n1);
    let (r2, _) = cache.reduce_step(&t, n2);
    let a = r1.choose(rng)?.clone();
    let others: Vec<&Term> = r2.iter().filter(|r| **r != a).collect();
    let b = (*others.choose(rng)?).clone();
    Some(Peak { source: t, left: a, left_stage: n1, right: b, right_stage: n2 })
}

/// Two one-step reducts of one term.
#[derive(Clone, Debug)]
pub struct Peak {
    /// The common source.
    pub source: Term,
    /// Reduct by a step at `left_stage`.
    pub left: Term,
    /// Stage of the left step.
    pub left_stage: usize,
    /// Reduct by a step at `right_stage`.
    pub right: Term,
    /// Stage of the right step.
    pub right_stage: usize,
}

fn gen<R: Rng>(rng: &mut R, atoms: &[Term], depth: usize, binders: u32) -> Term {
    let leaf = depth == 0 || rng.gen_ratio(1, 4);
    if leaf {
        if binders > 0 && rng.gen_ratio(1, 3) {
            return Term::bvar(rng.gen_range(0..binders));
        }
        return atoms.choose(rng).expect("non-empty atoms").clone();
    }
    let d = depth - 1;
    match rng.gen_range(0..7) {
        0 => sugar::xi(&gen(rng, atoms, d, binders), &gen(rng, atoms, d, binders)),
        1 => sugar::l(&gen(rng, atoms, d, binders)),
        2 => sugar::h(&gen(rng, atoms, d, binders)),
        3 => sugar::k(&gen(rng, atoms, d, binders)),
        4 => {
            let (a, b) = (gen(rng, atoms, d, 0), gen(rng, atoms, d, 0));
            sugar::f(&a, &b)
        }
        5 => Term::app(gen(rng, atoms, d, binders), gen(rng, atoms, d, binders)),
        _ => Term::lam_raw("x", gen(rng, atoms, d, binders + 1)),
    }
}
