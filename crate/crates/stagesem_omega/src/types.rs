//! Extended types: the simple types plus `ω` (all objects) and `ε` (the
//! empty type), normalised so that `τ → ε = ε` (τ ≠ ε), `ε → τ = ω` and
//! `τ → ω = ω`.

use std::fmt;
use std::sync::Arc;

use crate::error::StageError;

/// An extended type in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypePlus {
    /// Propositions.
    O,
    /// A base type.
    Base(Arc<str>),
    /// Function type (never with `ε` on either side or `ω` as codomain).
    Arrow(Arc<TypePlus>, Arc<TypePlus>),
    /// The type of all objects.
    Omega,
    /// The empty type.
    Epsilon,
}

impl TypePlus {
    /// Base type `name`.
    pub fn base(name: &str) -> TypePlus {
        TypePlus::Base(name.into())
    }

    /// `a → b`, normalised.
    pub fn arrow(a: TypePlus, b: TypePlus) -> TypePlus {
        match (&a, &b) {
            (TypePlus::Epsilon, _) => TypePlus::Omega,
            (_, TypePlus::Epsilon) => TypePlus::Epsilon,
            (_, TypePlus::Omega) => TypePlus::Omega,
            _ => TypePlus::Arrow(Arc::new(a), Arc::new(b)),
        }
    }

    /// Split an arrow.
    pub fn as_arrow(&self) -> Option<(&TypePlus, &TypePlus)> {
        match self {
            TypePlus::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// 1 for atomic types, `max(rank a + 1, rank b)` for `a → b`.
    pub fn rank(&self) -> usize {
        match self {
            TypePlus::Arrow(a, b) => (a.rank() + 1).max(b.rank()),
            _ => 1,
        }
    }

    /// Number of arrows.
    pub fn arrows(&self) -> usize {
        match self {
            TypePlus::Arrow(a, b) => 1 + a.arrows() + b.arrows(),
            _ => 0,
        }
    }

    /// Whether the type mentions neither `ω` nor `ε` (a type of the
    /// underlying higher-order logic).
    pub fn is_simple(&self) -> bool {
        match self {
            TypePlus::O | TypePlus::Base(_) => true,
            TypePlus::Arrow(a, b) => a.is_simple() && b.is_simple(),
            TypePlus::Omega | TypePlus::Epsilon => false,
        }
    }

    /// Parse `o`, a base name, `!w`, `!e`, or `a -> b` (right associative),
    /// grouping with `(…)` or `[…]`.
    pub fn parse(src: &str) -> Result<TypePlus, StageError> {
        let toks = lex(src)?;
        let mut pos = 0;
        let t = parse_arrow(&toks, &mut pos, src)?;
        if pos != toks.len() {
            return Err(StageError::Parse(format!("trailing input in type '{src}'")));
        }
        Ok(t)
    }

    /// Compact spelling used inside canonical constant names (`[`/`]` for
    /// grouping, no spaces).
    pub fn compact(&self) -> String {
        match self {
            TypePlus::O => "o".into(),
            TypePlus::Base(b) => b.to_string(),
            TypePlus::Omega => "!w".into(),
            TypePlus::Epsilon => "!e".into(),
            TypePlus::Arrow(a, b) => {
                if a.as_arrow().is_some() {
                    format!("[{}]->{}", a.compact(), b.compact())
                } else {
                    format!("{}->{}", a.compact(), b.compact())
                }
            }
        }
    }
}

impl fmt::Display for TypePlus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypePlus::O => f.write_str("o"),
            TypePlus::Base(b) => f.write_str(b),
            TypePlus::Omega => f.write_str("ω"),
            TypePlus::Epsilon => f.write_str("ε"),
            TypePlus::Arrow(a, b) => {
                if a.as_arrow().is_some() {
                    write!(f, "({a}) → {b}")
                } else {
                    write!(f, "{a} → {b}")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Arrow,
    Open,
    Close,
}

fn lex(src: &str) -> Result<Vec<Tok>, StageError> {
    let cs: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' || c == '[' {
            out.push(Tok::Open);
            i += 1;
        } else if c == ')' || c == ']' {
            out.push(Tok::Close);
            i += 1;
        } else if c == '-' && cs.get(i + 1) == Some(&'>') {
            out.push(Tok::Arrow);
            i += 2;
        } else if c == '→' {
            out.push(Tok::Arrow);
            i += 1;
        } else if c == 'ω' {
            out.push(Tok::Name("!w".into()));
            i += 1;
        } else if c == 'ε' {
            out.push(Tok::Name("!e".into()));
            i += 1;
        } else if c.is_alphanumeric() || c == '_' || c == '!' {
            let start = i;
            i += 1;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Name(cs[start..i].iter().collect()));
        } else {
            return Err(StageError::Parse(format!("unexpected '{c}' in type '{src}'")));
        }
    }
    Ok(out)
}

fn parse_arrow(toks: &[Tok], pos: &mut usize, src: &str) -> Result<TypePlus, StageError> {
    let a = parse_atom(toks, pos, src)?;
    if toks.get(*pos) == Some(&Tok::Arrow) {
        *pos += 1;
        let b = parse_arrow(toks, pos, src)?;
        return Ok(TypePlus::arrow(a, b));
    }
    Ok(a)
}

fn parse_atom(toks: &[Tok], pos: &mut usize, src: &str) -> Result<TypePlus, StageError> {
    match toks.get(*pos) {
        Some(Tok::Open) => {
            *pos += 1;
            let t = parse_arrow(toks, pos, src)?;
            if toks.get(*pos) != Some(&Tok::Close) {
                return Err(StageError::Parse(format!("unbalanced brackets in type '{src}'")));
            }
            *pos += 1;
            Ok(t)
        }
        Some(Tok::Name(n)) => {
            *pos += 1;
            Ok(match n.as_str() {
                "o" => TypePlus::O,
                "!w" => TypePlus::Omega,
                "!e" => TypePlus::Epsilon,
                _ => TypePlus::base(n),
            })
        }
        _ => Err(StageError::Parse(format!("expected a type in '{src}'"))),
    }
}
