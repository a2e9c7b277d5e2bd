//! Nameless term representation.
//!
//! Bound variables are de Bruijn indices; binders keep a display name that
//! is ignored by equality, hashing and ordering, so α-equivalent terms are
//! `==`. Free variables are named. Every node caches its hash, its size and
//! the number of loose bound indices so that closed subterms can be skipped
//! by shifting and substitution.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// A constant of the term signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Const {
    /// The restricted quantifier Ξ.
    Xi,
    /// The type-hood predicate L.
    L,
    /// The base-type predicate `A_τ` for a base type τ.
    A(Arc<str>),
    /// A user-declared constant.
    User(Arc<str>),
    /// A canonical constant denoting a semantic element (name without `#`).
    Canon(Arc<str>),
    /// An external constant that never occurs in any reduction rule
    /// (name without `$`).
    Ext(Arc<str>),
    /// The i-th hole of a context (1-based).
    Box(u32),
}

impl Const {
    /// The surface spelling of the constant.
    pub fn spelling(&self) -> String {
        match self {
            Const::Xi => "Xi".into(),
            Const::L => "L".into(),
            Const::A(t) => format!("A@{t}"),
            Const::User(n) => n.to_string(),
            Const::Canon(n) => format!("#{n}"),
            Const::Ext(n) => format!("${n}"),
            Const::Box(i) => format!("?{i}"),
        }
    }
}

/// Structural view of a term node.
#[derive(Clone, Debug)]
pub enum Kind {
    /// Bound variable (de Bruijn index, 0 = innermost binder).
    BVar(u32),
    /// Free variable.
    FVar(Arc<str>),
    /// Constant.
    Const(Const),
    /// Application.
    App(Term, Term),
    /// Abstraction with a display name for its binder.
    Lam(Arc<str>, Term),
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    hash: u64,
    size: u32,
    /// One more than the largest loose de Bruijn index (0 if none).
    loose: u32,
}

/// An immutable, cheaply clonable λ-term.
#[derive(Clone)]
pub struct Term(Arc<Node>);

fn mix(tag: u8, parts: &[u64]) -> u64 {
    let mut h = DefaultHasher::new();
    tag.hash(&mut h);
    parts.hash(&mut h);
    h.finish()
}

fn hash_str(s: &str) -> u64 {
    let mut h = DefaultHasher::new();
    s.hash(&mut h);
    h.finish()
}

impl Term {
    fn mk(kind: Kind) -> Term {
        let (hash, size, loose) = match &kind {
            Kind::BVar(i) => (mix(0, &[*i as u64]), 1, i + 1),
            Kind::FVar(n) => (mix(1, &[hash_str(n)]), 1, 0),
            Kind::Const(c) => {
                let mut h = DefaultHasher::new();
                c.hash(&mut h);
                (mix(2, &[h.finish()]), 1, 0)
            }
            Kind::App(a, b) => (
                mix(3, &[a.0.hash, b.0.hash]),
                a.0.size.saturating_add(b.0.size).saturating_add(1),
                a.0.loose.max(b.0.loose),
            ),
            Kind::Lam(_, b) => (
                mix(4, &[b.0.hash]),
                b.0.size.saturating_add(1),
                b.0.loose.saturating_sub(1),
            ),
        };
        Term(Arc::new(Node { kind, hash, size, loose }))
    }

    /// Bound variable with de Bruijn index `i`.
    pub fn bvar(i: u32) -> Term {
        Term::mk(Kind::BVar(i))
    }
    /// Free variable.
    pub fn var(name: &str) -> Term {
        Term::mk(Kind::FVar(name.into()))
    }
    /// Constant.
    pub fn cnst(c: Const) -> Term {
        Term::mk(Kind::Const(c))
    }
    /// The constant Ξ.
    pub fn xi() -> Term {
        Term::cnst(Const::Xi)
    }
    /// The constant L.
    pub fn l() -> Term {
        Term::cnst(Const::L)
    }
    /// The base-type predicate `A_τ`.
    pub fn a(base: &str) -> Term {
        Term::cnst(Const::A(base.into()))
    }
    /// A user constant.
    pub fn user(name: &str) -> Term {
        Term::cnst(Const::User(name.into()))
    }
    /// A canonical constant.
    pub fn canon(name: &str) -> Term {
        Term::cnst(Const::Canon(name.into()))
    }
    /// An external constant.
    pub fn ext(name: &str) -> Term {
        Term::cnst(Const::Ext(name.into()))
    }
    /// Box constant `□_i`.
    pub fn hole(i: u32) -> Term {
        Term::cnst(Const::Box(i))
    }
    /// Application `f a`.
    pub fn app(f: Term, a: Term) -> Term {
        Term::mk(Kind::App(f, a))
    }
    /// Iterated application `f a1 ... an`.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }
    /// Raw abstraction over a body already in nameless form (index 0 is the
    /// new binder).
    pub fn lam_raw(name: &str, body: Term) -> Term {
        Term::mk(Kind::Lam(name.into(), body))
    }
    /// Named abstraction `λname. body`: free occurrences of `name` in `body`
    /// become bound.
    pub fn lam(name: &str, body: &Term) -> Term {
        Term::lam_raw(name, body.abstract_var(name, 0))
    }

    /// The node kind.
    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }
    /// Number of nodes.
    pub fn size(&self) -> usize {
        self.0.size as usize
    }
    /// Whether the term has no loose de Bruijn indices.
    pub fn is_locally_closed(&self) -> bool {
        self.0.loose == 0
    }
    /// One more than the largest loose index (0 for locally closed terms).
    pub fn loose_bound(&self) -> u32 {
        self.0.loose
    }
    /// Whether two handles share the same allocation.
    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Application parts, if this is an application.
    pub fn as_app(&self) -> Option<(&Term, &Term)> {
        match self.kind() {
            Kind::App(f, a) => Some((f, a)),
            _ => None,
        }
    }
    /// Abstraction parts, if this is an abstraction.
    pub fn as_lam(&self) -> Option<(&Arc<str>, &Term)> {
        match self.kind() {
            Kind::Lam(n, b) => Some((n, b)),
            _ => None,
        }
    }
    /// The constant, if this is a constant.
    pub fn as_const(&self) -> Option<&Const> {
        match self.kind() {
            Kind::Const(c) => Some(c),
            _ => None,
        }
    }
    /// The free-variable name, if this is a free variable.
    pub fn as_fvar(&self) -> Option<&Arc<str>> {
        match self.kind() {
            Kind::FVar(n) => Some(n),
            _ => None,
        }
    }
    /// Whether this is exactly the given constant.
    pub fn is_const(&self, c: &Const) -> bool {
        self.as_const() == Some(c)
    }
    /// Head and argument spine: `f a1 ... an ↦ (f, [a1..an])`.
    pub fn spine(&self) -> (Term, Vec<Term>) {
        let mut args = Vec::new();
        let mut cur = self.clone();
        while let Some((f, a)) = cur.as_app() {
            args.push(a.clone());
            let next = f.clone();
            cur = next;
        }
        args.reverse();
        (cur, args)
    }

    /// Replace free variable `name` by bound index `depth` (relative to the
    /// current depth).
    pub(crate) fn abstract_var(&self, name: &str, depth: u32) -> Term {
        if !self.has_free(name) {
            return self.clone();
        }
        match self.kind() {
            Kind::FVar(n) if &**n == name => Term::bvar(depth),
            Kind::App(f, a) => Term::app(f.abstract_var(name, depth), a.abstract_var(name, depth)),
            Kind::Lam(n, b) => Term::lam_raw(n, b.abstract_var(name, depth + 1)),
            _ => self.clone(),
        }
    }

    /// Whether free variable `name` occurs.
    pub fn has_free(&self, name: &str) -> bool {
        match self.kind() {
            Kind::FVar(n) => &**n == name,
            Kind::App(f, a) => f.has_free(name) || a.has_free(name),
            Kind::Lam(_, b) => b.has_free(name),
            _ => false,
        }
    }

    /// Whether constant `c` occurs.
    pub fn has_const(&self, c: &Const) -> bool {
        match self.kind() {
            Kind::Const(d) => d == c,
            Kind::App(f, a) => f.has_const(c) || a.has_const(c),
            Kind::Lam(_, b) => b.has_const(c),
            _ => false,
        }
    }

    /// Set of free variables.
    pub fn free_vars(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_fv(&mut out);
        out
    }

    fn collect_fv(&self, out: &mut BTreeSet<Arc<str>>) {
        match self.kind() {
            Kind::FVar(n) => {
                out.insert(n.clone());
            }
            Kind::App(f, a) => {
                f.collect_fv(out);
                a.collect_fv(out);
            }
            Kind::Lam(_, b) => b.collect_fv(out),
            _ => {}
        }
    }

    /// Whether the term has no free variables and no loose indices.
    pub fn is_closed(&self) -> bool {
        self.is_locally_closed() && self.free_vars().is_empty()
    }

    /// Set of constants occurring in the term.
    pub fn constants(&self) -> BTreeSet<Const> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| {
            if let Kind::Const(c) = t.kind() {
                out.insert(c.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self.kind() {
            Kind::App(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Kind::Lam(_, b) => b.walk(f),
            _ => {}
        }
    }

    /// Whether bound index `i` (relative to this node) occurs loosely.
    pub fn uses_index(&self, i: u32) -> bool {
        if self.0.loose <= i {
            return false;
        }
        match self.kind() {
            Kind::BVar(j) => *j == i,
            Kind::App(f, a) => f.uses_index(i) || a.uses_index(i),
            Kind::Lam(_, b) => b.uses_index(i + 1),
            _ => false,
        }
    }

    /// Add `d` to every loose index `>= cutoff`.
    pub fn shift_up(&self, d: u32, cutoff: u32) -> Term {
        if d == 0 || self.0.loose <= cutoff {
            return self.clone();
        }
        match self.kind() {
            Kind::BVar(i) => Term::bvar(i + d),
            Kind::App(f, a) => Term::app(f.shift_up(d, cutoff), a.shift_up(d, cutoff)),
            Kind::Lam(n, b) => Term::lam_raw(n, b.shift_up(d, cutoff + 1)),
            _ => self.clone(),
        }
    }

    /// Subtract one from every loose index `> cutoff`; index `cutoff` must
    /// not occur.
    pub fn shift_down(&self, cutoff: u32) -> Term {
        if self.0.loose <= cutoff {
            return self.clone();
        }
        match self.kind() {
            Kind::BVar(i) => {
                debug_assert!(*i != cutoff, "shift_down over a used index");
                Term::bvar(i - 1)
            }
            Kind::App(f, a) => Term::app(f.shift_down(cutoff), a.shift_down(cutoff)),
            Kind::Lam(n, b) => Term::lam_raw(n, b.shift_down(cutoff + 1)),
            _ => self.clone(),
        }
    }

    /// `self[depth := arg]` for a body under one binder: index `depth` is
    /// replaced by `arg` (shifted appropriately) and larger loose indices
    /// are decremented. Used for β-reduction with `depth = 0`.
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.inst_at(arg, 0)
    }

    fn inst_at(&self, arg: &Term, depth: u32) -> Term {
        if self.0.loose <= depth {
            return self.clone();
        }
        match self.kind() {
            Kind::BVar(i) => {
                if *i == depth {
                    arg.shift_up(depth, 0)
                } else {
                    Term::bvar(i - 1)
                }
            }
            Kind::App(f, a) => Term::app(f.inst_at(arg, depth), a.inst_at(arg, depth)),
            Kind::Lam(n, b) => Term::lam_raw(n, b.inst_at(arg, depth + 1)),
            _ => self.clone(),
        }
    }

    /// Open the body of an abstraction with a free variable.
    pub fn open_with(&self, name: &str) -> Term {
        self.instantiate(&Term::var(name))
    }

    /// Capture-avoiding substitution of `s` for the free variable `x`.
    ///
    /// Because binders are nameless, capture cannot happen: loose indices of
    /// `s` (if any) are shifted under binders.
    pub fn subst(&self, x: &str, s: &Term) -> Term {
        self.subst_at(x, s, 0)
    }

    fn subst_at(&self, x: &str, s: &Term, depth: u32) -> Term {
        if !self.has_free(x) {
            return self.clone();
        }
        match self.kind() {
            Kind::FVar(n) if &**n == x => s.shift_up(depth, 0),
            Kind::App(f, a) => Term::app(f.subst_at(x, s, depth), a.subst_at(x, s, depth)),
            Kind::Lam(n, b) => Term::lam_raw(n, b.subst_at(x, s, depth + 1)),
            _ => self.clone(),
        }
    }

    /// Replace every occurrence of constant `c` by `s` (locally closed).
    pub fn replace_const(&self, c: &Const, s: &Term) -> Term {
        if !self.has_const(c) {
            return self.clone();
        }
        match self.kind() {
            Kind::Const(d) if d == c => s.clone(),
            Kind::App(f, a) => Term::app(f.replace_const(c, s), a.replace_const(c, s)),
            Kind::Lam(n, b) => Term::lam_raw(n, b.replace_const(c, s)),
            _ => self.clone(),
        }
    }

    /// Bottom-up map over all subterms (including the root).
    pub fn map_bottom_up(&self, f: &mut impl FnMut(Term) -> Term) -> Term {
        let rebuilt = match self.kind() {
            Kind::App(a, b) => Term::app(a.map_bottom_up(f), b.map_bottom_up(f)),
            Kind::Lam(n, b) => Term::lam_raw(n, b.map_bottom_up(f)),
            _ => self.clone(),
        };
        f(rebuilt)
    }

    /// All subterms that are locally closed (deduplicated, pre-order).
    pub fn closed_subterms(&self) -> Vec<Term> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if t.is_locally_closed() && seen.insert(t.clone()) {
                out.push(t.clone());
            }
        });
        out
    }
}

/// α-equivalence. Terms are nameless, so this is structural equality.
pub fn alpha_eq(t1: &Term, t2: &Term) -> bool {
    t1 == t2
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.hash != other.0.hash || self.0.size != other.0.size {
            return false;
        }
        match (self.kind(), other.kind()) {
            (Kind::BVar(i), Kind::BVar(j)) => i == j,
            (Kind::FVar(a), Kind::FVar(b)) => a == b,
            (Kind::Const(a), Kind::Const(b)) => a == b,
            (Kind::App(f1, a1), Kind::App(f2, a2)) => f1 == f2 && a1 == a2,
            (Kind::Lam(_, b1), Kind::Lam(_, b2)) => b1 == b2,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Term) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        fn tag(k: &Kind) -> u8 {
            match k {
                Kind::BVar(_) => 0,
                Kind::FVar(_) => 1,
                Kind::Const(_) => 2,
                Kind::App(..) => 3,
                Kind::Lam(..) => 4,
            }
        }
        match (self.kind(), other.kind()) {
            (Kind::BVar(i), Kind::BVar(j)) => i.cmp(j),
            (Kind::FVar(a), Kind::FVar(b)) => a.cmp(b),
            (Kind::Const(a), Kind::Const(b)) => a.cmp(b),
            (Kind::App(f1, a1), Kind::App(f2, a2)) => f1.cmp(f2).then_with(|| a1.cmp(a2)),
            (Kind::Lam(_, b1), Kind::Lam(_, b2)) => b1.cmp(b2),
            (a, b) => tag(a).cmp(&tag(b)),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Term) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::print::print_raw(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::print::print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lam_binds_named_variable() {
        let t = Term::lam("x", &Term::app(Term::var("x"), Term::var("y")));
        assert_eq!(t.free_vars().len(), 1);
        assert!(t.is_locally_closed());
    }

    #[test]
    fn names_do_not_matter() {
        let a = Term::lam("x", &Term::var("x"));
        let b = Term::lam("y", &Term::var("y"));
        assert_eq!(a, b);
        assert!(alpha_eq(&a, &b));
    }

    #[test]
    fn instantiate_shifts() {
        // (λ. λ. 1) applied: body λ.1 with arg y gives λ.y
        let body = Term::lam_raw("z", Term::bvar(1));
        let r = body.instantiate(&Term::var("y"));
        assert_eq!(r, Term::lam("z", &Term::var("y")));
    }
}
