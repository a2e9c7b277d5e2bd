//! Finite Kripke (pre-)models and their JSON form.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use pred2::{Signature, SimpleType};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a state.
pub type State = usize;
/// Index of a domain element.
pub type Elem = usize;
/// A set of states as a bitmask (at most 64 states).
pub type StateSet = u64;

/// Maximum number of states supported by the bitmask representation.
pub const MAX_STATES: usize = 64;

/// Structural problems found while loading a model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    /// Malformed JSON.
    #[error("json error: {0}")]
    Json(String),
    /// A name that does not denote a state or element.
    #[error("unknown {kind} '{name}'")]
    Unknown {
        /// What kind of name.
        kind: &'static str,
        /// The name.
        name: String,
    },
    /// The same element name is used twice.
    #[error("duplicate element name '{0}'")]
    Duplicate(String),
    /// Malformed type or signature.
    #[error("{0}")]
    Type(String),
    /// Too many states for the bitmask representation.
    #[error("at most {MAX_STATES} states are supported")]
    TooManyStates,
}

/// One domain element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemInfo {
    /// Unique name.
    pub name: String,
    /// Its type.
    pub ty: SimpleType,
}

/// A finite Kripke pre-model `⟨S, ≤, {D_τ}, ·, I, ς⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct KripkeModel {
    /// State names.
    pub states: Vec<String>,
    /// `le[s][t]` iff `s ≤ t`.
    pub le: Vec<Vec<bool>>,
    /// All elements.
    pub elems: Vec<ElemInfo>,
    /// Elements per type, in declaration order.
    pub domains: BTreeMap<SimpleType, Vec<Elem>>,
    /// Application table.
    pub app: HashMap<(Elem, Elem), Elem>,
    /// Interpretation of constants.
    pub interp: BTreeMap<String, Elem>,
    /// `ς` on elements of `D_o`.
    pub sigma: HashMap<Elem, StateSet>,
    /// Base types and constants of the object language.
    pub sig: Signature,
    by_name: HashMap<String, Elem>,
}

/// JSON form of a model.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ModelJson {
    /// State names.
    pub states: Vec<String>,
    /// Pairs `[s, s']` with `s ≤ s'`.
    #[serde(default)]
    pub le: Vec<(String, String)>,
    /// Type text → element names.
    pub domains: BTreeMap<String, Vec<String>>,
    /// Function element → argument → result.
    #[serde(default)]
    pub app: BTreeMap<String, BTreeMap<String, String>>,
    /// Constant → element.
    #[serde(default)]
    pub interp: BTreeMap<String, String>,
    /// Element of `D_o` → states.
    #[serde(default)]
    pub sigma: BTreeMap<String, Vec<String>>,
    /// Optional constant types (inferred from `interp` otherwise).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub consts: BTreeMap<String, String>,
}

impl KripkeModel {
    /// Empty model over the given states with the given order (reflexive
    /// pairs must be included by the caller).
    pub fn new(states: Vec<String>, le: Vec<Vec<bool>>) -> KripkeModel {
        KripkeModel {
            states,
            le,
            elems: Vec::new(),
            domains: BTreeMap::new(),
            app: HashMap::new(),
            interp: BTreeMap::new(),
            sigma: HashMap::new(),
            sig: Signature::default(),
            by_name: HashMap::new(),
        }
    }

    /// Add an element of type `ty`; returns its index.
    pub fn add_elem(&mut self, name: &str, ty: SimpleType) -> Result<Elem, ModelError> {
        if self.by_name.contains_key(name) {
            return Err(ModelError::Duplicate(name.to_string()));
        }
        let mut bs = BTreeSet::new();
        ty.bases(&mut bs);
        for b in bs {
            self.sig.base_types.insert(b.to_string());
        }
        let id = self.elems.len();
        self.elems.push(ElemInfo { name: name.to_string(), ty: ty.clone() });
        self.domains.entry(ty).or_default().push(id);
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    /// Interpret constant `c` (its type is the element's type).
    pub fn set_const(&mut self, c: &str, e: Elem) {
        self.interp.insert(c.to_string(), e);
        self.sig.consts.insert(c.to_string(), self.elems[e].ty.clone());
    }

    /// Element by name.
    pub fn elem(&self, name: &str) -> Option<Elem> {
        self.by_name.get(name).copied()
    }

    /// State by name.
    pub fn state(&self, name: &str) -> Option<State> {
        self.states.iter().position(|s| s == name)
    }

    /// Number of states.
    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    /// Mask of all states.
    pub fn all_states(&self) -> StateSet {
        if self.states.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.states.len()) - 1
        }
    }

    /// Mask of states `≥ s`.
    pub fn up(&self, s: State) -> StateSet {
        (0..self.n_states()).filter(|&t| self.le[s][t]).fold(0, |m, t| m | (1 << t))
    }

    /// Domain of a type (empty slice if absent).
    pub fn domain(&self, t: &SimpleType) -> &[Elem] {
        self.domains.get(t).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// `ς(d)` (empty if unset).
    pub fn sigma_of(&self, d: Elem) -> StateSet {
        self.sigma.get(&d).copied().unwrap_or(0)
    }

    /// Whether a state set is upward-closed.
    pub fn is_upward_closed(&self, x: StateSet) -> bool {
        (0..self.n_states()).all(|s| x & (1 << s) == 0 || self.up(s) & !x == 0)
    }

    /// Load from JSON data.
    pub fn from_json(j: &ModelJson) -> Result<KripkeModel, ModelError> {
        if j.states.len() > MAX_STATES {
            return Err(ModelError::TooManyStates);
        }
        let n = j.states.len();
        let mut m = KripkeModel::new(j.states.clone(), vec![vec![false; n]; n]);
        for (a, b) in &j.le {
            let sa = m.state(a).ok_or_else(|| ModelError::Unknown { kind: "state", name: a.clone() })?;
            let sb = m.state(b).ok_or_else(|| ModelError::Unknown { kind: "state", name: b.clone() })?;
            m.le[sa][sb] = true;
        }
        for (ty, names) in &j.domains {
            let t = SimpleType::parse(ty).map_err(|e| ModelError::Type(e.to_string()))?;
            m.domains.entry(t.clone()).or_default();
            for name in names {
                m.add_elem(name, t.clone())?;
            }
        }
        let lookup = |m: &KripkeModel, name: &str| {
            m.elem(name).ok_or_else(|| ModelError::Unknown { kind: "element", name: name.to_string() })
        };
        for (f, table) in &j.app {
            let fe = lookup(&m, f)?;
            for (a, r) in table {
                let ae = lookup(&m, a)?;
                let re = lookup(&m, r)?;
                m.app.insert((fe, ae), re);
            }
        }
        for (c, e) in &j.interp {
            let ee = lookup(&m, e)?;
            m.set_const(c, ee);
        }
        for (c, t) in &j.consts {
            let t = SimpleType::parse(t).map_err(|e| ModelError::Type(e.to_string()))?;
            m.sig.consts.insert(c.clone(), t);
        }
        for (d, ss) in &j.sigma {
            let de = lookup(&m, d)?;
            let mut mask = 0;
            for s in ss {
                let si = m.state(s).ok_or_else(|| ModelError::Unknown { kind: "state", name: s.clone() })?;
                mask |= 1 << si;
            }
            m.sigma.insert(de, mask);
        }
        m.sig.validate().map_err(|e| ModelError::Type(e.to_string()))?;
        Ok(m)
    }

    /// Parse model JSON text.
    pub fn from_json_str(s: &str) -> Result<KripkeModel, ModelError> {
        let j: ModelJson = serde_json::from_str(s).map_err(|e| ModelError::Json(e.to_string()))?;
        KripkeModel::from_json(&j)
    }

    /// JSON form (deterministic ordering).
    pub fn to_json(&self) -> ModelJson {
        let mut j = ModelJson { states: self.states.clone(), ..Default::default() };
        for s in 0..self.n_states() {
            for t in 0..self.n_states() {
                if self.le[s][t] {
                    j.le.push((self.states[s].clone(), self.states[t].clone()));
                }
            }
        }
        for (t, es) in &self.domains {
            j.domains.insert(t.to_string(), es.iter().map(|&e| self.elems[e].name.clone()).collect());
        }
        for (&(f, a), &r) in &self.app {
            j.app
                .entry(self.elems[f].name.clone())
                .or_default()
                .insert(self.elems[a].name.clone(), self.elems[r].name.clone());
        }
        for (c, &e) in &self.interp {
            j.interp.insert(c.clone(), self.elems[e].name.clone());
        }
        for (c, t) in &self.sig.consts {
            if !self.interp.contains_key(c) {
                j.consts.insert(c.clone(), t.to_string());
            }
        }
        for (&d, &mask) in &self.sigma {
            let ss = (0..self.n_states()).filter(|s| mask & (1 << s) != 0).map(|s| self.states[s].clone()).collect();
            j.sigma.insert(self.elems[d].name.clone(), ss);
        }
        j
    }

    /// Serialise to pretty JSON.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("models serialise")
    }

    /// Names of the elements of a state set.
    pub fn state_names(&self, x: StateSet) -> Vec<String> {
        (0..self.n_states()).filter(|s| x & (1 << s) != 0).map(|s| self.states[s].clone()).collect()
    }
}

/// A valuation: variable name → element.
pub type Valuation = BTreeMap<Arc<str>, Elem>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip() {
        let src = r#"{
            "states": ["s0", "s1"],
            "le": [["s0","s0"],["s0","s1"],["s1","s1"]],
            "domains": {"b": ["d"], "o": ["t","m","f"], "b -> o": ["P1"]},
            "app": {"P1": {"d": "m"}},
            "interp": {"P": "P1", "c": "d"},
            "sigma": {"t": ["s0","s1"], "m": ["s1"], "f": []}
        }"#;
        let m = KripkeModel::from_json_str(src).unwrap();
        assert_eq!(m.sig.consts.len(), 2);
        let again = KripkeModel::from_json_str(&m.to_json_string()).unwrap();
        assert_eq!(again, m);
        assert!(m.is_upward_closed(0b10));
        assert!(!m.is_upward_closed(0b01));
    }
}
