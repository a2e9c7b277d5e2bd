//! Finite full models and their canonical terms.
//!
//! Canonical constants are named after their type and function table:
//! `#b:d` for the element `d` of base type `b`, `#top`/`#bot` for the two
//! truth values, and `#[τ₁->τ₂]:e₀_e₁_…` for the function whose value on the
//! `i`-th canonical term of `τ₁` is the `eᵢ`-th canonical term of `τ₂`.
//! Canonical terms of `ω → τ` are `λx.ρ` for `ρ` canonical of type `τ`.

use std::collections::BTreeMap;

use lambda_core::{Const, Kind, Term};
use serde::{Deserialize, Serialize};

use crate::error::StageError;
use crate::types::TypePlus;

/// A finite full model: finite base domains; every function space is the
/// set of all functions and `D_o = {⊤, ⊥}`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FullModel {
    /// Elements of each base type, in enumeration order.
    pub base_domains: BTreeMap<String, Vec<String>>,
}

impl FullModel {
    /// One base type `b` with elements `d0, d1, …`.
    pub fn single_base(b: &str, size: usize) -> FullModel {
        let mut base_domains = BTreeMap::new();
        base_domains.insert(b.to_string(), (0..size).map(|i| format!("d{i}")).collect());
        FullModel { base_domains }
    }

    /// Check that domains are non-empty and names are well-formed.
    pub fn validate(&self) -> Result<(), StageError> {
        let ok = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        for (b, ds) in &self.base_domains {
            if !ok(b) || b == "o" {
                return Err(StageError::Config(format!("bad base type name '{b}'")));
            }
            if ds.is_empty() {
                return Err(StageError::Config(format!("base domain '{b}' is empty")));
            }
            let mut seen = std::collections::BTreeSet::new();
            for d in ds {
                if !ok(d) || !seen.insert(d) {
                    return Err(StageError::Config(format!("bad or duplicate element '{d}' of '{b}'")));
                }
            }
        }
        Ok(())
    }
}

/// Canonical terms over a full model, enumerated lazily by index.
#[derive(Clone, Debug)]
pub struct CanonUniverse {
    model: FullModel,
    cap: u64,
    materialized: BTreeMap<TypePlus, u64>,
}

/// Default bound on the size of a single set of canonical terms.
pub const DEFAULT_CAP: u64 = 1 << 16;

impl CanonUniverse {
    /// A universe without eager materialisation.
    pub fn new(model: FullModel, cap: u64) -> Result<CanonUniverse, StageError> {
        model.validate()?;
        Ok(CanonUniverse { model, cap, materialized: BTreeMap::new() })
    }

    /// The underlying model.
    pub fn model(&self) -> &FullModel {
        &self.model
    }

    /// Declared base types.
    pub fn bases(&self) -> impl Iterator<Item = &String> {
        self.model.base_domains.keys()
    }

    /// Types materialised by [`build_universe`] with their sizes.
    pub fn materialized(&self) -> &BTreeMap<TypePlus, u64> {
        &self.materialized
    }

    /// `⊤`.
    pub fn top() -> Term {
        Term::canon("top")
    }

    /// `⊥`.
    pub fn bot() -> Term {
        Term::canon("bot")
    }

    /// Number of canonical terms of `τ` (`ω` has no finite enumeration).
    pub fn count(&self, ty: &TypePlus) -> Result<u64, StageError> {
        match ty {
            TypePlus::O => Ok(2),
            TypePlus::Epsilon => Ok(0),
            TypePlus::Base(b) => self
                .model
                .base_domains
                .get(&**b)
                .map(|d| d.len() as u64)
                .ok_or_else(|| StageError::Config(format!("unknown base type '{b}'"))),
            TypePlus::Omega => Err(StageError::Config("ω has no finite set of canonical terms".into())),
            TypePlus::Arrow(a, b) => {
                if **a == TypePlus::Omega {
                    return self.count(b);
                }
                let m = self.count(a)?;
                let k = self.count(b)?;
                let explode = || StageError::SizeExplosion { ty: ty.to_string(), count: format!("{k}^{m}"), cap: self.cap };
                let m32 = u32::try_from(m).map_err(|_| explode())?;
                match k.checked_pow(m32) {
                    Some(n) if n <= self.cap => Ok(n),
                    _ => Err(explode()),
                }
            }
        }
    }

    /// The `i`-th canonical term of `τ` (`i < count(τ)`).
    pub fn element(&self, ty: &TypePlus, i: u64) -> Term {
        match ty {
            TypePlus::O => {
                if i == 0 {
                    Self::top()
                } else {
                    Self::bot()
                }
            }
            TypePlus::Base(b) => Term::canon(&format!("{b}:{}", self.model.base_domains[&**b][i as usize])),
            TypePlus::Arrow(a, b) if **a == TypePlus::Omega => Term::lam_raw("_", self.element(b, i)),
            TypePlus::Arrow(a, b) => {
                let m = self.count(a).expect("domain size") as usize;
                let k = self.count(b).expect("codomain size");
                let mut entries = vec![0u64; m];
                let mut r = i;
                for e in entries.iter_mut().rev() {
                    *e = r % k;
                    r /= k;
                }
                let table: Vec<String> = entries.iter().map(|e| e.to_string()).collect();
                Term::canon(&format!("[{}]:{}", ty.compact(), table.join("_")))
            }
            TypePlus::Omega | TypePlus::Epsilon => panic!("no canonical terms of type {ty}"),
        }
    }

    /// All canonical terms of `τ`.
    pub fn elements(&self, ty: &TypePlus) -> Result<Vec<Term>, StageError> {
        let n = self.count(ty)?;
        Ok((0..n).map(|i| self.element(ty, i)).collect())
    }

    /// Type and function table of a canonical constant name.
    fn parse_const(&self, name: &str) -> Option<(TypePlus, Vec<u64>)> {
        match name {
            "top" => return Some((TypePlus::O, vec![0])),
            "bot" => return Some((TypePlus::O, vec![1])),
            _ => {}
        }
        if let Some(rest) = name.strip_prefix('[') {
            let close = matching_bracket(rest)?;
            let ty = TypePlus::parse(&rest[..close]).ok()?;
            let (a, b) = ty.as_arrow()?;
            if *a == TypePlus::Omega {
                return None;
            }
            let table = rest[close + 1..].strip_prefix(':')?;
            let entries: Vec<u64> = table.split('_').map(|e| e.parse().ok()).collect::<Option<_>>()?;
            let m = self.count(a).ok()?;
            let k = self.count(b).ok()?;
            self.count(&ty).ok()?;
            if entries.len() as u64 != m || entries.iter().any(|e| *e >= k) {
                return None;
            }
            return Some((ty, entries));
        }
        let (b, d) = name.split_once(':')?;
        let pos = self.model.base_domains.get(b)?.iter().position(|x| x == d)?;
        Some((TypePlus::base(b), vec![pos as u64]))
    }

    /// The type of a canonical constant.
    pub fn const_type(&self, name: &str) -> Option<TypePlus> {
        self.parse_const(name).map(|(t, _)| t)
    }

    /// The canonical type of `ρ`, if `ρ` is a canonical term.
    pub fn canonical_type(&self, rho: &Term) -> Option<TypePlus> {
        match rho.kind() {
            Kind::Const(Const::Canon(n)) => self.const_type(n),
            Kind::Lam(_, body) => {
                let inner = self.canonical_type(body)?;
                match TypePlus::arrow(TypePlus::Omega, inner) {
                    t @ TypePlus::Arrow(..) => Some(t),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// Position of the canonical term `ρ` in the enumeration of `τ`.
    pub fn index_of(&self, ty: &TypePlus, rho: &Term) -> Option<u64> {
        if self.canonical_type(rho).as_ref() != Some(ty) {
            return None;
        }
        match (ty, rho.kind()) {
            (TypePlus::Arrow(a, b), Kind::Lam(_, body)) if **a == TypePlus::Omega => self.index_of(b, body),
            (TypePlus::Arrow(_, b), Kind::Const(Const::Canon(n))) => {
                let (_, entries) = self.parse_const(n)?;
                let k = self.count(b).ok()?;
                Some(entries.iter().fold(0u64, |acc, e| acc * k + e))
            }
            (_, Kind::Const(Const::Canon(n))) => self.parse_const(n).map(|(_, e)| e[0]),
            _ => None,
        }
    }

    /// `𝓕(ρ)(arg)`: the table of a function constant applied to a
    /// canonical argument of its domain, or the body of `λx.ρ'`.
    pub fn apply(&self, rho: &Term, arg: &Term) -> Option<Term> {
        let ty = self.canonical_type(rho)?;
        let (a, b) = ty.as_arrow()?;
        if *a == TypePlus::Omega {
            let (_, body) = rho.as_lam()?;
            return Some(body.clone());
        }
        let name = match rho.as_const()? {
            Const::Canon(n) => n.clone(),
            _ => return None,
        };
        let (_, entries) = self.parse_const(&name)?;
        let i = self.index_of(a, arg)?;
        Some(self.element(b, entries[i as usize]))
    }

    /// Canonical function constants `c` with domain `τ₁ ≠ ω` (the heads of
    /// table rules): their domain and codomain.
    pub fn table_signature(&self, c: &Term) -> Option<(TypePlus, TypePlus)> {
        match c.as_const()? {
            Const::Canon(n) => {
                let ty = self.const_type(n)?;
                let (a, b) = ty.as_arrow()?;
                Some((a.clone(), b.clone()))
            }
            _ => None,
        }
    }
}

fn matching_bracket(s: &str) -> Option<usize> {
    let mut depth = 1usize;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Types with at most `rank_bound − 1` arrows and rank at most
/// `rank_bound`, over `o`, the base types, and `ω` in domain positions.
pub fn types_up_to(model: &FullModel, rank_bound: usize) -> Vec<TypePlus> {
    let mut atoms = vec![TypePlus::O];
    atoms.extend(model.base_domains.keys().map(|b| TypePlus::base(b)));
    let max_arrows = rank_bound.saturating_sub(1);
    // by_arrows[k] = types with exactly k arrows
    let mut by_arrows: Vec<Vec<TypePlus>> = vec![atoms.clone()];
    for k in 1..=max_arrows {
        let mut level = Vec::new();
        for i in 0..k {
            let j = k - 1 - i;
            let mut doms = by_arrows[i].clone();
            if i == 0 {
                doms.push(TypePlus::Omega);
            }
            for d in &doms {
                for c in &by_arrows[j] {
                    level.push(TypePlus::arrow(d.clone(), c.clone()));
                }
            }
        }
        by_arrows.push(level);
    }
    let mut out: Vec<TypePlus> = by_arrows.into_iter().flatten().filter(|t| t.rank() <= rank_bound).collect();
    out.sort();
    out.dedup();
    out
}

/// Materialise the sizes of all canonical-term sets of types up to
/// `rank_bound` (see [`types_up_to`]); other types are enumerated on demand.
pub fn build_universe(fm: FullModel, rank_bound: usize, cap: u64) -> Result<CanonUniverse, StageError> {
    if rank_bound == 0 {
        return Err(StageError::Config("rank_bound must be at least 1".into()));
    }
    let mut u = CanonUniverse::new(fm, cap)?;
    let mut m = BTreeMap::new();
    for t in types_up_to(&u.model, rank_bound) {
        m.insert(t.clone(), u.count(&t)?);
    }
    m.insert(TypePlus::Epsilon, 0);
    u.materialized = m;
    Ok(u)
}
