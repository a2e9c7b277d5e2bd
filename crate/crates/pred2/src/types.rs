//! Simple types `o | B | τ → τ` and signatures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Pred2Error;

/// A simple type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    /// Propositions.
    O,
    /// A declared base type.
    Base(Arc<str>),
    /// Function type.
    Arrow(Arc<SimpleType>, Arc<SimpleType>),
}

impl SimpleType {
    /// Base type `name`.
    pub fn base(name: &str) -> SimpleType {
        SimpleType::Base(name.into())
    }

    /// `a → b`.
    pub fn arrow(a: SimpleType, b: SimpleType) -> SimpleType {
        SimpleType::Arrow(Arc::new(a), Arc::new(b))
    }

    /// Whether this is a base type.
    pub fn is_base(&self) -> bool {
        matches!(self, SimpleType::Base(_))
    }

    /// Split an arrow type.
    pub fn as_arrow(&self) -> Option<(&SimpleType, &SimpleType)> {
        match self {
            SimpleType::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Whether the type belongs to the restricted grammar `o | B | B → T`.
    pub fn is_pred2_0(&self) -> bool {
        match self {
            SimpleType::O | SimpleType::Base(_) => true,
            SimpleType::Arrow(a, b) => a.is_base() && b.is_pred2_0(),
        }
    }

    /// Number of arrows.
    pub fn arrows(&self) -> usize {
        match self {
            SimpleType::Arrow(a, b) => 1 + a.arrows() + b.arrows(),
            _ => 0,
        }
    }

    /// Rank: 1 for atomic types, `max(rank a + 1, rank b)` for `a → b`.
    pub fn rank(&self) -> usize {
        match self {
            SimpleType::Arrow(a, b) => (a.rank() + 1).max(b.rank()),
            _ => 1,
        }
    }

    /// Base types mentioned.
    pub fn bases(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            SimpleType::Base(b) => {
                out.insert(b.clone());
            }
            SimpleType::Arrow(a, b) => {
                a.bases(out);
                b.bases(out);
            }
            SimpleType::O => {}
        }
    }

    /// Parse type text such as `b -> (b -> o)`.
    pub fn parse(src: &str) -> Result<SimpleType, Pred2Error> {
        crate::parse::parse_type(src)
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::O => f.write_str("o"),
            SimpleType::Base(b) => f.write_str(b),
            SimpleType::Arrow(a, b) => {
                if a.as_arrow().is_some() {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
        }
    }
}

/// Whether the logic is the restricted second-order fragment or full
/// higher-order logic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Mode {
    /// Restricted grammar: arguments of base type, quantifiers over `B ∪ {o}`.
    #[default]
    Pred2_0,
    /// Full higher-order grammar.
    PredOmega,
}

/// A signature: base types, typed constants and typed variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    /// Declared base types.
    pub base_types: BTreeSet<String>,
    /// Constants with their types.
    pub consts: BTreeMap<String, SimpleType>,
    /// Variables with their types.
    pub vars: BTreeMap<String, SimpleType>,
}

/// JSON form of a signature.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SignatureJson {
    /// Base type names.
    #[serde(default)]
    pub base_types: Vec<String>,
    /// Constant name → type text.
    #[serde(default)]
    pub consts: BTreeMap<String, String>,
    /// Variable name → type text.
    #[serde(default)]
    pub vars: BTreeMap<String, String>,
}

impl Signature {
    /// Build and validate a signature from JSON data.
    pub fn from_json(j: &SignatureJson) -> Result<Signature, Pred2Error> {
        let mut sig = Signature { base_types: j.base_types.iter().cloned().collect(), ..Default::default() };
        for (n, t) in &j.consts {
            sig.consts.insert(n.clone(), SimpleType::parse(t)?);
        }
        for (n, t) in &j.vars {
            sig.vars.insert(n.clone(), SimpleType::parse(t)?);
        }
        sig.validate()?;
        Ok(sig)
    }

    /// Parse a signature from JSON text.
    pub fn from_json_str(s: &str) -> Result<Signature, Pred2Error> {
        let j: SignatureJson = serde_json::from_str(s).map_err(|e| Pred2Error::Json(e.to_string()))?;
        Signature::from_json(&j)
    }

    /// The JSON form.
    pub fn to_json(&self) -> SignatureJson {
        SignatureJson {
            base_types: self.base_types.iter().cloned().collect(),
            consts: self.consts.iter().map(|(n, t)| (n.clone(), t.to_string())).collect(),
            vars: self.vars.iter().map(|(n, t)| (n.clone(), t.to_string())).collect(),
        }
    }

    /// Check names and that all types use declared base types.
    pub fn validate(&self) -> Result<(), Pred2Error> {
        for (n, t) in self.consts.iter().chain(self.vars.iter()) {
            if !is_valid_name(n) {
                return Err(Pred2Error::Signature(format!("invalid name '{n}'")));
            }
            let mut bs = BTreeSet::new();
            t.bases(&mut bs);
            for b in bs {
                if !self.base_types.contains(&*b) {
                    return Err(Pred2Error::Signature(format!("'{n}' uses undeclared base type '{b}'")));
                }
            }
        }
        for b in &self.base_types {
            if b == "o" || !is_valid_name(b) {
                return Err(Pred2Error::Signature(format!("invalid base type name '{b}'")));
            }
        }
        if let Some(n) = self.consts.keys().find(|n| self.vars.contains_key(*n)) {
            return Err(Pred2Error::Signature(format!("'{n}' declared both as constant and variable")));
        }
        Ok(())
    }

    /// Declare a base type.
    pub fn with_base(mut self, b: &str) -> Self {
        self.base_types.insert(b.to_string());
        self
    }

    /// Declare a constant.
    pub fn with_const(mut self, n: &str, t: SimpleType) -> Self {
        self.consts.insert(n.to_string(), t);
        self
    }

    /// Declare a variable.
    pub fn with_var(mut self, n: &str, t: SimpleType) -> Self {
        self.vars.insert(n.to_string(), t);
        self
    }
}

/// Reserved words of the formula syntax.
pub const RESERVED: [&str; 6] = ["forall", "exists", "bot", "o", "Xi", "L"];

/// Whether `n` is a user-facing identifier (not reserved, not starting with `_`).
pub fn is_valid_name(n: &str) -> bool {
    let mut cs = n.chars();
    match cs.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && !RESERVED.contains(&n)
        && !lambda_reserved(n)
}

fn lambda_reserved(n: &str) -> bool {
    ["H", "K", "S", "I", "F"].contains(&n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_grammar() {
        let b = SimpleType::base("b");
        let bo = SimpleType::arrow(b.clone(), SimpleType::O);
        assert_eq!(bo.rank(), 2);
        assert!(bo.is_pred2_0());
        let hi = SimpleType::arrow(bo.clone(), SimpleType::O);
        assert!(!hi.is_pred2_0());
        assert_eq!(hi.rank(), 3);
        assert_eq!(hi.to_string(), "(b -> o) -> o");
        assert_eq!(SimpleType::parse("(b -> o) -> o").unwrap(), hi);
    }
}
