//! Full models over small posets and bounded countermodel search.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use pred2::{Expr, Signature, SimpleType};
use thiserror::Error;

use crate::forcing::{forcing_set, validate_model, valuations, EvalError};
use crate::model::{Elem, KripkeModel, State, Valuation};

/// All partial orders on `n` states up to isomorphism, as `le` matrices, in
/// a fixed order (by canonical code).
pub fn posets(n: usize) -> Vec<Vec<Vec<bool>>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << pairs.len()) {
        let mut le = vec![vec![false; n]; n];
        for (i, a) in le.iter_mut().enumerate() {
            a[i] = true;
        }
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if bits & (1 << k) != 0 {
                le[a][b] = true;
            }
        }
        if !is_partial_order(&le) {
            continue;
        }
        let code = perms.iter().map(|p| encode(&le, p)).min().unwrap_or(0);
        if seen.insert(code) {
            out.push((code, le));
        }
    }
    out.sort_by_key(|(c, _)| *c);
    out.into_iter().map(|(_, le)| le).collect()
}

fn encode(le: &[Vec<bool>], perm: &[usize]) -> u64 {
    let n = le.len();
    let mut code = 0u64;
    for a in 0..n {
        for b in 0..n {
            code = (code << 1) | le[perm[a]][perm[b]] as u64;
        }
    }
    code
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn is_partial_order(le: &[Vec<bool>]) -> bool {
    let n = le.len();
    (0..n).all(|a| le[a][a])
        && (0..n).all(|a| (0..n).all(|b| a == b || !(le[a][b] && le[b][a])))
        && (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(le[a][b] && le[b][c]) || le[a][c])))
}

/// Element-name tag for a type (`b -> o` ↦ `b>o`, parentheses ↦ brackets).
pub fn type_tag(t: &SimpleType) -> String {
    match t {
        SimpleType::O => "o".into(),
        SimpleType::Base(b) => b.to_string(),
        SimpleType::Arrow(a, b) => {
            let l = if a.as_arrow().is_some() { format!("[{}]", type_tag(a)) } else { type_tag(a) };
            format!("{l}>{}", type_tag(b))
        }
    }
}

/// Errors of model construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    /// A function space exceeds the configured cap.
    #[error("function space for {ty} has {size} elements (cap {cap})")]
    TooLarge {
        /// Type.
        ty: String,
        /// Size it would have.
        size: u128,
        /// Cap.
        cap: usize,
    },
}

/// Build a model with the given order, base domains of the given sizes,
/// `D_o` = all upward-closed sets and full function spaces for every arrow
/// type in `types` (and their subtypes). No constants are interpreted.
pub fn full_model(
    le: &[Vec<bool>],
    base_sizes: &BTreeMap<String, usize>,
    types: &[SimpleType],
    cap: usize,
) -> Result<KripkeModel, BuildError> {
    let n = le.len();
    let states = (0..n).map(|i| format!("s{i}")).collect();
    let mut m = KripkeModel::new(states, le.to_vec());
    for (b, &k) in base_sizes {
        for i in 0..k {
            m.add_elem(&format!("{b}_{i}"), SimpleType::base(b)).expect("fresh names");
        }
    }
    for mask in 0u64..(1u64 << n) {
        if m.is_upward_closed(mask) {
            let bits: String = (0..n).map(|s| if mask & (1 << s) != 0 { '1' } else { '0' }).collect();
            let e = m.add_elem(&format!("o_{bits}"), SimpleType::O).expect("fresh names");
            m.sigma.insert(e, mask);
        }
    }
    let mut all = BTreeSet::new();
    for t in types {
        collect_subtypes(t, &mut all);
    }
    // build smaller types first so codomains exist
    let mut arrows: Vec<SimpleType> = all.into_iter().filter(|t| t.as_arrow().is_some()).collect();
    arrows.sort_by_key(|t| t.arrows());
    for t in arrows {
        add_function_space(&mut m, &t, cap)?;
    }
    Ok(m)
}

fn collect_subtypes(t: &SimpleType, out: &mut BTreeSet<SimpleType>) {
    out.insert(t.clone());
    if let Some((a, b)) = t.as_arrow() {
        collect_subtypes(a, out);
        collect_subtypes(b, out);
    }
}

fn add_function_space(m: &mut KripkeModel, t: &SimpleType, cap: usize) -> Result<(), BuildError> {
    if m.domains.contains_key(t) {
        return Ok(());
    }
    let (t1, t2) = t.as_arrow().expect("arrow type");
    if t2.as_arrow().is_some() {
        add_function_space(m, t2, cap)?;
    }
    if t1.as_arrow().is_some() {
        add_function_space(m, t1, cap)?;
    }
    let dom: Vec<Elem> = m.domain(t1).to_vec();
    let cod: Vec<Elem> = m.domain(t2).to_vec();
    let size = (cod.len() as u128).checked_pow(dom.len() as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(BuildError::TooLarge { ty: t.to_string(), size, cap });
    }
    let tag = type_tag(t);
    let mut idx = vec![0usize; dom.len()];
    loop {
        let name = format!("{tag}:{}", idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("_"));
        let f = m.add_elem(&name, t.clone()).expect("fresh names");
        for (k, &a) in dom.iter().enumerate() {
            m.app.insert((f, a), cod[idx[k]]);
        }
        // odometer, most significant digit first
        let mut k = dom.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < cod.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// All interpretations of the given constants over the model's domains, in
/// lexicographic order.
pub fn interpretations(m: &KripkeModel, consts: &BTreeMap<String, SimpleType>) -> Vec<BTreeMap<String, Elem>> {
    let mut out = vec![BTreeMap::new()];
    for (c, t) in consts {
        let mut next = Vec::new();
        for i in &out {
            for &d in m.domain(t) {
                let mut j = i.clone();
                j.insert(c.clone(), d);
                next.push(j);
            }
        }
        out = next;
    }
    out
}

/// Search bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Maximum number of states.
    pub max_states: usize,
    /// Maximum size of each base domain.
    pub max_dom: usize,
    /// Maximum size of any function space.
    pub max_function_space: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_states: 3, max_dom: 2, max_function_space: 4096 }
    }
}

/// A countermodel to `Δ ⊢ φ`.
#[derive(Clone, Debug)]
pub struct Countermodel {
    /// The model (constants interpreted).
    pub model: KripkeModel,
    /// A state forcing Δ but not φ.
    pub state: State,
    /// The valuation.
    pub valuation: Valuation,
}

/// Outcome of a failed search.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    /// No countermodel within bounds.
    #[error("no countermodel within bounds")]
    NotFoundWithinBounds,
    /// A model could not be evaluated.
    #[error("evaluation error: {0}")]
    Eval(#[from] EvalError),
}

/// Types that need domains for evaluating the given formulas.
fn needed_types(sig: &Signature, fs: &[Expr]) -> Vec<SimpleType> {
    fn go(e: &Expr, out: &mut BTreeSet<SimpleType>) {
        match e {
            Expr::Var(_, t) | Expr::Const(_, t) => {
                out.insert(t.clone());
            }
            Expr::App(a, b) | Expr::Imp(a, b) => {
                go(a, out);
                go(b, out);
            }
            Expr::Forall(_, t, b) => {
                out.insert(t.clone());
                go(b, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    for f in fs {
        go(f, &mut out);
    }
    out.extend(sig.consts.values().cloned());
    out.into_iter().collect()
}

/// Search for a model, state and valuation forcing all of `hyps` but not
/// `goal`. Models range over posets up to isomorphism with at most
/// `max_states` states, base domains of size `1..=max_dom`, full `D_o` and
/// full function spaces; search order is deterministic.
pub fn enumerate_countermodel(sig: &Signature, hyps: &[Expr], goal: &Expr, bounds: &Bounds) -> Result<Countermodel, SearchError> {
    let mut all_fs: Vec<Expr> = hyps.to_vec();
    all_fs.push(goal.clone());
    let types = needed_types(sig, &all_fs);
    let mut bases = BTreeSet::new();
    for t in &types {
        let mut bs = BTreeSet::new();
        t.bases(&mut bs);
        bases.extend(bs.into_iter().map(|b| b.to_string()));
    }
    bases.extend(sig.base_types.iter().cloned());
    let bases: Vec<String> = bases.into_iter().collect();
    let mut consts = BTreeMap::new();
    for f in &all_fs {
        let mut cs = BTreeSet::new();
        f.constants(&mut cs);
        for (c, t) in cs {
            consts.insert(c.to_string(), t);
        }
    }
    let mut fv: BTreeSet<(Arc<str>, SimpleType)> = BTreeSet::new();
    for f in &all_fs {
        fv.extend(f.free_vars());
    }
    let fv: Vec<_> = fv.into_iter().collect();
    for n in 1..=bounds.max_states {
        for le in posets(n) {
            for sizes in size_vectors(bases.len(), bounds.max_dom) {
                let base_sizes: BTreeMap<String, usize> = bases.iter().cloned().zip(sizes).collect();
                let Ok(skeleton) = full_model(&le, &base_sizes, &types, bounds.max_function_space) else {
                    continue;
                };
                for interp in interpretations(&skeleton, &consts) {
                    let mut m = skeleton.clone();
                    for (c, e) in &interp {
                        m.set_const(c, *e);
                    }
                    for u in valuations(&m, &fv) {
                        let mut hold = m.all_states();
                        for h in hyps {
                            hold &= forcing_set(&m, &u, h)?;
                        }
                        let bad = hold & !forcing_set(&m, &u, goal)?;
                        if bad != 0 {
                            let state = bad.trailing_zeros() as usize;
                            debug_assert!(validate_model(&m, &all_fs).is_ok());
                            return Ok(Countermodel { model: m, state, valuation: u });
                        }
                    }
                }
            }
        }
    }
    Err(SearchError::NotFoundWithinBounds)
}

fn size_vectors(k: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|v| (1..=max).map(move |s| [v.clone(), vec![s]].concat())).collect();
    }
    out
}
