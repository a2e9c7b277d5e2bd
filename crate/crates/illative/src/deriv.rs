//! Illative derivation trees, their rule vocabulary and the JSON file format.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use lambda_core::{parse_term, Const, ParseEnv, Printer, Term};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The three illative systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum System {
    /// Without the function-type rule `F_L`.
    I0,
    /// The full intuitionistic system.
    Iw,
    /// The full system plus the double-negation axiom.
    Iwc,
}

impl System {
    /// Parse `i0`, `iw`, `iwc` (case-insensitive).
    pub fn from_name(s: &str) -> Option<System> {
        match s.to_ascii_lowercase().as_str() {
            "i0" => Some(System::I0),
            "iw" => Some(System::Iw),
            "iwc" => Some(System::Iwc),
            _ => None,
        }
    }

    /// Lower-case name.
    pub fn name(self) -> &'static str {
        match self {
            System::I0 => "i0",
            System::Iw => "iw",
            System::Iwc => "iwc",
        }
    }
}

/// Primitive rules and axioms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IRule {
    /// `Γ, t ⊢ t`.
    Ax,
    /// `Γ ⊢ L H`.
    AxLH,
    /// `Γ ⊢ L A_τ` for a base type τ.
    AxLA,
    /// Replace the goal by a βη-equal term.
    Eq,
    /// From `Γ ⊢ t` infer `Γ ⊢ H t`.
    Hi,
    /// Restricted-quantifier elimination.
    XiE,
    /// Restricted-quantifier introduction.
    XiI,
    /// Propositionhood of a restricted quantification.
    XiH,
    /// Typehood of a function type (absent from `I0`).
    FL,
    /// Double-negation axiom (only in `Iwc`).
    DN,
}

impl IRule {
    /// All rules.
    pub const ALL: [IRule; 10] = [
        IRule::Ax,
        IRule::AxLH,
        IRule::AxLA,
        IRule::Eq,
        IRule::Hi,
        IRule::XiE,
        IRule::XiI,
        IRule::XiH,
        IRule::FL,
        IRule::DN,
    ];

    /// Rule name as used in files.
    pub fn name(self) -> &'static str {
        match self {
            IRule::Ax => "Ax",
            IRule::AxLH => "AxLH",
            IRule::AxLA => "AxLA",
            IRule::Eq => "Eq",
            IRule::Hi => "Hi",
            IRule::XiE => "XiE",
            IRule::XiI => "XiI",
            IRule::XiH => "XiH",
            IRule::FL => "FL",
            IRule::DN => "DN",
        }
    }

    /// Inverse of [`IRule::name`].
    pub fn from_name(s: &str) -> Option<IRule> {
        IRule::ALL.into_iter().find(|r| r.name() == s)
    }
}

impl fmt::Display for IRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-rule parameters. Unused fields stay `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IParams {
    /// Eigenvariable of `XiI`, `XiH`, `FL`.
    pub x: Option<Arc<str>>,
    /// Mediating range `t₁` of `XiE`; range of `FL`.
    pub t1: Option<Term>,
    /// Codomain `t₂` of `FL`.
    pub t2: Option<Term>,
    /// Instance `t₃` of `XiE`.
    pub t3: Option<Term>,
    /// Base type of `AxLA`.
    pub base: Option<Arc<str>>,
    /// Step budget of an `Eq` node (or of the βη fallback of `XiE`).
    pub budget: Option<usize>,
}

/// A derivation node `Γ ⊢ t` with its rule, parameters and premises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IllativeDerivation {
    /// Rule applied at this node.
    pub rule: IRule,
    /// The hypothesis set Γ.
    pub hyps: BTreeSet<Term>,
    /// The conclusion.
    pub concl: Term,
    /// Rule parameters.
    pub params: IParams,
    /// Premises in rule order.
    pub premises: Vec<IllativeDerivation>,
}

impl IllativeDerivation {
    /// A node with default parameters.
    pub fn new(rule: IRule, hyps: BTreeSet<Term>, concl: Term, premises: Vec<IllativeDerivation>) -> Self {
        IllativeDerivation { rule, hyps, concl, params: IParams::default(), premises }
    }

    /// Builder: set parameters.
    pub fn with_params(mut self, params: IParams) -> Self {
        self.params = params;
        self
    }

    /// `Γ ⊢ t` by `Ax` (the caller ensures `t ∈ Γ`).
    pub fn ax(hyps: BTreeSet<Term>, t: Term) -> Self {
        IllativeDerivation::new(IRule::Ax, hyps, t, vec![])
    }

    /// `Γ ⊢ t₂` by `Eq` from `d : Γ ⊢ t₁`.
    pub fn eq(d: IllativeDerivation, t2: Term) -> Self {
        IllativeDerivation::new(IRule::Eq, d.hyps.clone(), t2, vec![d])
    }

    /// `Eq` only if the target differs syntactically.
    pub fn eq_to(d: IllativeDerivation, t2: Term) -> Self {
        if d.concl == t2 {
            d
        } else {
            IllativeDerivation::eq(d, t2)
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }

    /// Height of the tree.
    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(|p| p.depth()).max().unwrap_or(0)
    }

    /// Rules occurring in the tree.
    pub fn rules_used(&self) -> BTreeSet<IRule> {
        let mut out = BTreeSet::new();
        self.visit(&mut |d| {
            out.insert(d.rule);
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&IllativeDerivation)) {
        f(self);
        for p in &self.premises {
            p.visit(f);
        }
    }

    /// Free variables of the hypotheses and conclusion of this node.
    pub fn judgment_fvs(&self) -> BTreeSet<Arc<str>> {
        let mut out = self.concl.free_vars();
        for h in &self.hyps {
            out.extend(h.free_vars());
        }
        out
    }

    /// Names of user constants occurring in the tree.
    pub fn user_consts(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |d| {
            let ts = d.hyps.iter().chain([&d.concl]).chain([&d.params.t1, &d.params.t2, &d.params.t3].into_iter().flatten());
            for t in ts {
                for c in t.constants() {
                    if let Const::User(n) = c {
                        out.insert(n.to_string());
                    }
                }
            }
        });
        out
    }

    /// Every free-variable name occurring anywhere in the tree (judgments and
    /// parameters), including eigenvariables.
    pub fn all_names(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.visit(&mut |d| {
            out.extend(d.judgment_fvs());
            for t in [&d.params.t1, &d.params.t2, &d.params.t3].into_iter().flatten() {
                out.extend(t.free_vars());
            }
            if let Some(x) = &d.params.x {
                out.insert(x.clone());
            }
        });
        out
    }
}

/// Errors reading or writing derivation files.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FileError {
    /// Malformed JSON.
    #[error("json: {0}")]
    Json(String),
    /// Unknown rule name.
    #[error("unknown rule '{0}'")]
    UnknownRule(String),
    /// A term failed to parse.
    #[error("term '{src}': {msg}")]
    Term {
        /// The offending text.
        src: String,
        /// Parser message.
        msg: String,
    },
}

/// JSON node.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IllativeJson {
    /// Rule name.
    pub rule: String,
    /// Hypotheses.
    #[serde(default)]
    pub hyps: Vec<String>,
    /// Conclusion.
    pub concl: String,
    /// Parameters (`x`, `t1`, `t2`, `t3`, `base`, `budget`).
    #[serde(default, skip_serializing_if = "ParamsJson::is_empty")]
    pub params: ParamsJson,
    /// Premises.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<IllativeJson>,
}

/// JSON parameters.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ParamsJson {
    /// Eigenvariable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    /// `t₁`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1: Option<String>,
    /// `t₂`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t2: Option<String>,
    /// `t₃`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t3: Option<String>,
    /// Base type.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    /// Step budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

impl ParamsJson {
    fn is_empty(&self) -> bool {
        self.x.is_none()
            && self.t1.is_none()
            && self.t2.is_none()
            && self.t3.is_none()
            && self.base.is_none()
            && self.budget.is_none()
    }
}

/// A derivation file: declared user constants, base types and the tree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IllativeFile {
    /// Names parsed as user constants.
    #[serde(default)]
    pub consts: Vec<String>,
    /// Base types admitted by `AxLA` (all admitted when empty).
    #[serde(default)]
    pub bases: Vec<String>,
    /// The derivation.
    pub derivation: IllativeJson,
}

fn pt(src: &str, env: &ParseEnv) -> Result<Term, FileError> {
    parse_term(src, env).map_err(|e| FileError::Term { src: src.to_string(), msg: e.to_string() })
}

impl IllativeJson {
    /// Convert to a derivation.
    pub fn to_derivation(&self, env: &ParseEnv) -> Result<IllativeDerivation, FileError> {
        let rule = IRule::from_name(&self.rule).ok_or_else(|| FileError::UnknownRule(self.rule.clone()))?;
        let hyps = self.hyps.iter().map(|h| pt(h, env)).collect::<Result<BTreeSet<_>, _>>()?;
        let concl = pt(&self.concl, env)?;
        let opt = |s: &Option<String>| s.as_deref().map(|s| pt(s, env)).transpose();
        let params = IParams {
            x: self.params.x.as_deref().map(Arc::from),
            t1: opt(&self.params.t1)?,
            t2: opt(&self.params.t2)?,
            t3: opt(&self.params.t3)?,
            base: self.params.base.as_deref().map(Arc::from),
            budget: self.params.budget,
        };
        let premises = self.premises.iter().map(|p| p.to_derivation(env)).collect::<Result<Vec<_>, _>>()?;
        Ok(IllativeDerivation { rule, hyps, concl, params, premises })
    }

    /// Convert from a derivation, printing terms with the given printer.
    pub fn from_derivation(d: &IllativeDerivation, pr: &Printer) -> IllativeJson {
        let p = |t: &Option<Term>| t.as_ref().map(|t| pr.print(t));
        IllativeJson {
            rule: d.rule.name().to_string(),
            hyps: d.hyps.iter().map(|h| pr.print(h)).collect(),
            concl: pr.print(&d.concl),
            params: ParamsJson {
                x: d.params.x.as_deref().map(str::to_string),
                t1: p(&d.params.t1),
                t2: p(&d.params.t2),
                t3: p(&d.params.t3),
                base: d.params.base.as_deref().map(str::to_string),
                budget: d.params.budget,
            },
            premises: d.premises.iter().map(|q| IllativeJson::from_derivation(q, pr)).collect(),
        }
    }
}

impl IllativeFile {
    /// Parse a file; returns the derivation and the admitted base types.
    pub fn load(src: &str) -> Result<(IllativeDerivation, BTreeSet<String>), FileError> {
        let f: IllativeFile = serde_json::from_str(src).map_err(|e| FileError::Json(e.to_string()))?;
        let env = ParseEnv::with_consts(f.consts.iter().cloned());
        let d = f.derivation.to_derivation(&env)?;
        Ok((d, f.bases.into_iter().collect()))
    }

    /// Serialise a derivation; user constants are collected from its terms.
    pub fn store(d: &IllativeDerivation, bases: &[String]) -> String {
        let consts = d.user_consts();
        let pr = Printer { sugar: true, avoid: consts.iter().cloned().collect() };
        let f = IllativeFile {
            consts: consts.into_iter().collect(),
            bases: bases.to_vec(),
            derivation: IllativeJson::from_derivation(d, &pr),
        };
        serde_json::to_string_pretty(&f).expect("serialisable")
    }
}
