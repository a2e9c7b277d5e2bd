//! Natural-deduction derivations and their checker.

use serde::{Deserialize, Serialize};

use crate::error::{Pred2Error, RuleError};
use crate::expr::{alpha_contains, alpha_dedup, alpha_eq, alpha_set_eq, subst, Expr};
use crate::parse::{parse_expr, parse_formula, typecheck};
use crate::types::{Mode, Signature, SimpleType};

/// Rule labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pred2Rule {
    /// `Δ, φ ⊢ φ`.
    Axiom,
    /// `⊃`-introduction.
    ImpI,
    /// `⊃`-elimination (modus ponens).
    ImpE,
    /// `∀`-introduction.
    ForallI,
    /// `∀`-elimination.
    ForallE,
    /// Classical axiom `((φ ⊃ ⊥) ⊃ ⊥) ⊃ φ`.
    DoubleNeg,
}

impl Pred2Rule {
    /// Parse a rule name (case-insensitive, `_`/`-` ignored).
    pub fn from_name(s: &str) -> Option<Pred2Rule> {
        let k: String = s.chars().filter(|c| *c != '_' && *c != '-').collect::<String>().to_lowercase();
        Some(match k.as_str() {
            "axiom" | "ax" => Pred2Rule::Axiom,
            "impi" => Pred2Rule::ImpI,
            "impe" => Pred2Rule::ImpE,
            "foralli" => Pred2Rule::ForallI,
            "foralle" => Pred2Rule::ForallE,
            "doubleneg" | "dn" => Pred2Rule::DoubleNeg,
            _ => return None,
        })
    }

    /// Canonical name.
    pub fn name(self) -> &'static str {
        match self {
            Pred2Rule::Axiom => "Axiom",
            Pred2Rule::ImpI => "ImpI",
            Pred2Rule::ImpE => "ImpE",
            Pred2Rule::ForallI => "ForallI",
            Pred2Rule::ForallE => "ForallE",
            Pred2Rule::DoubleNeg => "DoubleNeg",
        }
    }
}

/// Rule parameters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Pred2Params {
    /// Eigenvariable of `∀i` (defaults to the conclusion's binder name).
    pub var: Option<String>,
    /// Instantiating term of `∀e`.
    pub term: Option<Expr>,
}

/// A derivation tree; each node stores its full sequent.
#[derive(Clone, Debug, PartialEq)]
pub struct Pred2Derivation {
    /// Rule applied at this node.
    pub rule: Pred2Rule,
    /// Hypotheses Δ (a finite set, kept duplicate-free up to α).
    pub hyps: Vec<Expr>,
    /// Conclusion φ.
    pub concl: Expr,
    /// Rule parameters.
    pub params: Pred2Params,
    /// Premises, in rule order.
    pub premises: Vec<Pred2Derivation>,
}

impl Pred2Derivation {
    /// Build a node (hypotheses are deduplicated up to α).
    pub fn new(rule: Pred2Rule, hyps: Vec<Expr>, concl: Expr, params: Pred2Params, premises: Vec<Pred2Derivation>) -> Self {
        Pred2Derivation { rule, hyps: alpha_dedup(&hyps), concl, params, premises }
    }

    /// Axiom node.
    pub fn axiom(hyps: Vec<Expr>, concl: Expr) -> Self {
        Self::new(Pred2Rule::Axiom, hyps, concl, Pred2Params::default(), vec![])
    }

    /// `⊃i` from a premise `Δ, φ ⊢ ψ`, discharging `φ`.
    pub fn imp_i(phi: Expr, premise: Pred2Derivation) -> Self {
        let hyps: Vec<Expr> = premise.hyps.iter().filter(|h| !alpha_eq(h, &phi)).cloned().collect();
        let concl = Expr::imp(phi, premise.concl.clone());
        Self::new(Pred2Rule::ImpI, hyps, concl, Pred2Params::default(), vec![premise])
    }

    /// `⊃e` from `Δ ⊢ φ ⊃ ψ` and `Δ ⊢ φ`.
    pub fn imp_e(major: Pred2Derivation, minor: Pred2Derivation) -> Option<Self> {
        let (_, psi) = major.concl.as_imp()?;
        let psi = psi.clone();
        Some(Self::new(Pred2Rule::ImpE, major.hyps.clone(), psi, Pred2Params::default(), vec![major, minor]))
    }

    /// `∀i` generalising the variable `x : τ`.
    pub fn forall_i(x: &str, t: SimpleType, premise: Pred2Derivation) -> Self {
        let concl = Expr::forall(x, t, premise.concl.clone());
        let params = Pred2Params { var: Some(x.to_string()), term: None };
        Self::new(Pred2Rule::ForallI, premise.hyps.clone(), concl, params, vec![premise])
    }

    /// `∀e` instantiating with `q`.
    pub fn forall_e(premise: Pred2Derivation, q: Expr) -> Option<Self> {
        let (x, _, body) = premise.concl.as_forall()?;
        let concl = subst(body, x, &q);
        let params = Pred2Params { var: None, term: Some(q) };
        Some(Self::new(Pred2Rule::ForallE, premise.hyps.clone(), concl, params, vec![premise]))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }

    /// Rules used anywhere in the tree.
    pub fn rules_used(&self) -> Vec<Pred2Rule> {
        let mut out = vec![self.rule];
        for p in &self.premises {
            for r in p.rules_used() {
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
        out
    }

    /// Relabel every node's hypotheses to `Δ ∪ extra`.
    pub fn weaken(&self, extra: &[Expr]) -> Self {
        let mut hyps = self.hyps.clone();
        hyps.extend(extra.iter().cloned());
        Pred2Derivation {
            rule: self.rule,
            hyps: alpha_dedup(&hyps),
            concl: self.concl.clone(),
            params: self.params.clone(),
            premises: self.premises.iter().map(|p| p.weaken(extra)).collect(),
        }
    }
}

/// The classical axiom instance for `φ`.
pub fn double_neg(phi: &Expr) -> Expr {
    Expr::imp(Expr::not(Expr::not(phi.clone())), phi.clone())
}

fn mismatch(node: &str, reason: impl Into<String>) -> RuleError {
    RuleError::Mismatch { node: node.to_string(), reason: reason.into() }
}

/// Check every node of a derivation. `classical` enables the double-negation axiom.
pub fn check_pred2_derivation(d: &Pred2Derivation, sig: &Signature, classical: bool) -> Result<(), RuleError> {
    check_node(d, sig, Mode::Pred2_0, classical, "root")
}

/// Like [`check_pred2_derivation`] with an explicit grammar mode.
pub fn check_derivation_mode(d: &Pred2Derivation, sig: &Signature, mode: Mode, classical: bool) -> Result<(), RuleError> {
    check_node(d, sig, mode, classical, "root")
}

fn check_node(d: &Pred2Derivation, sig: &Signature, mode: Mode, classical: bool, path: &str) -> Result<(), RuleError> {
    for f in d.hyps.iter().chain(std::iter::once(&d.concl)) {
        match typecheck(f, sig, mode) {
            Ok(SimpleType::O) => {}
            Ok(t) => {
                return Err(RuleError::Type {
                    node: path.into(),
                    error: Pred2Error::Type { term: f.to_string(), expected: "o".into(), actual: t.to_string() },
                })
            }
            Err(e) => return Err(RuleError::Type { node: path.into(), error: e }),
        }
    }
    let arity = match d.rule {
        Pred2Rule::Axiom | Pred2Rule::DoubleNeg => 0,
        Pred2Rule::ImpI | Pred2Rule::ForallI | Pred2Rule::ForallE => 1,
        Pred2Rule::ImpE => 2,
    };
    if d.premises.len() != arity {
        return Err(mismatch(path, format!("{} expects {arity} premises, found {}", d.rule.name(), d.premises.len())));
    }
    for (i, p) in d.premises.iter().enumerate() {
        check_node(p, sig, mode, classical, &format!("{path}.{i}"))?;
    }
    let same_hyps = |p: &Pred2Derivation| -> Result<(), RuleError> {
        if alpha_set_eq(&p.hyps, &d.hyps) {
            Ok(())
        } else {
            Err(mismatch(path, "premise hypotheses differ from the conclusion's"))
        }
    };
    match d.rule {
        Pred2Rule::Axiom => {
            if !alpha_contains(&d.hyps, &d.concl) {
                return Err(mismatch(path, "conclusion is not among the hypotheses"));
            }
        }
        Pred2Rule::DoubleNeg => {
            if !classical {
                return Err(mismatch(path, "double negation is only available classically"));
            }
            let Some((lhs, phi)) = d.concl.as_imp() else {
                return Err(mismatch(path, "conclusion is not an implication"));
            };
            if !alpha_eq(&d.concl, &double_neg(phi)) || !alpha_eq(lhs, &Expr::not(Expr::not(phi.clone()))) {
                return Err(mismatch(path, "conclusion is not of the form ((φ ⊃ ⊥) ⊃ ⊥) ⊃ φ"));
            }
        }
        Pred2Rule::ImpI => {
            let p = &d.premises[0];
            let Some((phi, psi)) = d.concl.as_imp() else {
                return Err(mismatch(path, "conclusion is not an implication"));
            };
            if !alpha_eq(psi, &p.concl) {
                return Err(mismatch(path, "premise conclusion differs from the consequent"));
            }
            let mut expected = d.hyps.clone();
            expected.push(phi.clone());
            if !alpha_set_eq(&p.hyps, &expected) {
                return Err(mismatch(path, "premise hypotheses must be the conclusion's plus the antecedent"));
            }
        }
        Pred2Rule::ImpE => {
            let (major, minor) = (&d.premises[0], &d.premises[1]);
            same_hyps(major)?;
            same_hyps(minor)?;
            let Some((phi, psi)) = major.concl.as_imp() else {
                return Err(mismatch(path, "major premise is not an implication"));
            };
            if !alpha_eq(phi, &minor.concl) {
                return Err(mismatch(path, "minor premise does not prove the antecedent"));
            }
            if !alpha_eq(psi, &d.concl) {
                return Err(mismatch(path, "conclusion is not the consequent"));
            }
        }
        Pred2Rule::ForallI => {
            let p = &d.premises[0];
            same_hyps(p)?;
            let Some((bx, bt, _)) = d.concl.as_forall() else {
                return Err(mismatch(path, "conclusion is not a universal formula"));
            };
            let x = d.params.var.clone().unwrap_or_else(|| bx.to_string());
            if !alpha_eq(&d.concl, &Expr::forall(&x, bt.clone(), p.concl.clone())) {
                return Err(mismatch(path, format!("conclusion is not the generalisation of the premise over '{x}'")));
            }
            if d.hyps.iter().any(|h| h.has_free(&x)) {
                return Err(RuleError::FreshnessViolation { node: path.into(), var: x });
            }
            if p.concl.free_vars().iter().any(|(n, t)| **n == *x && t != bt) {
                return Err(mismatch(path, format!("eigenvariable '{x}' used at a different type")));
            }
        }
        Pred2Rule::ForallE => {
            let p = &d.premises[0];
            same_hyps(p)?;
            let Some((x, t, body)) = p.concl.as_forall() else {
                return Err(mismatch(path, "premise is not a universal formula"));
            };
            let Some(q) = &d.params.term else {
                return Err(mismatch(path, "missing instantiation term"));
            };
            match typecheck(q, sig, mode) {
                Ok(qt) if &qt == t => {}
                Ok(qt) => return Err(mismatch(path, format!("instantiation term has type {qt}, expected {t}"))),
                Err(e) => return Err(RuleError::Type { node: path.into(), error: e }),
            }
            if !alpha_eq(&d.concl, &subst(body, x, q)) {
                return Err(mismatch(path, "conclusion is not the instance of the premise"));
            }
        }
    }
    Ok(())
}

/// JSON form of a derivation node.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DerivationJson {
    /// Rule name.
    pub rule: String,
    /// Hypotheses (formula text).
    #[serde(default)]
    pub hyps: Vec<String>,
    /// Conclusion (formula text).
    pub concl: String,
    /// Parameters: `var` for ∀i, `term` for ∀e.
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub params: serde_json::Map<String, serde_json::Value>,
    /// Premises.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<DerivationJson>,
}

/// A self-contained derivation file: signature plus derivation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DerivationFile {
    /// Signature.
    pub signature: crate::types::SignatureJson,
    /// Root of the derivation.
    pub derivation: DerivationJson,
}

impl DerivationJson {
    /// Convert to a typed derivation.
    pub fn to_derivation(&self, sig: &Signature, mode: Mode) -> Result<Pred2Derivation, Pred2Error> {
        let rule = Pred2Rule::from_name(&self.rule)
            .ok_or_else(|| Pred2Error::Json(format!("unknown rule '{}'", self.rule)))?;
        let hyps = self.hyps.iter().map(|h| parse_formula(h, sig, mode)).collect::<Result<Vec<_>, _>>()?;
        let concl = parse_formula(&self.concl, sig, mode)?;
        let mut params = Pred2Params::default();
        if let Some(v) = self.params.get("var") {
            params.var = Some(v.as_str().ok_or_else(|| Pred2Error::Json("'var' must be a string".into()))?.to_string());
        }
        if let Some(v) = self.params.get("term") {
            let s = v.as_str().ok_or_else(|| Pred2Error::Json("'term' must be a string".into()))?;
            params.term = Some(parse_expr(s, sig, mode)?);
        }
        let premises = self.premises.iter().map(|p| p.to_derivation(sig, mode)).collect::<Result<Vec<_>, _>>()?;
        Ok(Pred2Derivation::new(rule, hyps, concl, params, premises))
    }

    /// Convert from a typed derivation.
    pub fn from_derivation(d: &Pred2Derivation) -> DerivationJson {
        let mut params = serde_json::Map::new();
        if let Some(v) = &d.params.var {
            params.insert("var".into(), v.clone().into());
        }
        if let Some(t) = &d.params.term {
            params.insert("term".into(), t.to_string().into());
        }
        DerivationJson {
            rule: d.rule.name().into(),
            hyps: d.hyps.iter().map(|h| h.to_string()).collect(),
            concl: d.concl.to_string(),
            params,
            premises: d.premises.iter().map(DerivationJson::from_derivation).collect(),
        }
    }
}

impl DerivationFile {
    /// Parse file contents into a signature and derivation.
    pub fn load(s: &str) -> Result<(Signature, Pred2Derivation), Pred2Error> {
        let f: DerivationFile = serde_json::from_str(s).map_err(|e| Pred2Error::Json(e.to_string()))?;
        let sig = Signature::from_json(&f.signature)?;
        let d = f.derivation.to_derivation(&sig, Mode::Pred2_0)?;
        Ok((sig, d))
    }

    /// Serialise a signature and derivation.
    pub fn store(sig: &Signature, d: &Pred2Derivation) -> String {
        let f = DerivationFile { signature: sig.to_json(), derivation: DerivationJson::from_derivation(d) };
        serde_json::to_string_pretty(&f).expect("derivations serialise")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        let b = SimpleType::base("b");
        Signature::default()
            .with_base("b")
            .with_const("P", SimpleType::arrow(b.clone(), SimpleType::O))
            .with_const("c", b.clone())
            .with_var("x", b)
            .with_var("p", SimpleType::O)
    }

    fn f(s: &str) -> Expr {
        parse_formula(s, &sig(), Mode::Pred2_0).unwrap()
    }

    #[test]
    fn axiom_and_imp_roundtrip() {
        let s = sig();
        let ax = Pred2Derivation::axiom(vec![f("p")], f("p"));
        assert!(check_pred2_derivation(&ax, &s, false).is_ok());
        let d = Pred2Derivation::imp_i(f("p"), ax);
        assert!(d.hyps.is_empty());
        assert!(check_pred2_derivation(&d, &s, false).is_ok());
    }

    #[test]
    fn freshness_violation() {
        let s = sig();
        let ax = Pred2Derivation::axiom(vec![f("P x")], f("P x"));
        let d = Pred2Derivation::forall_i("x", SimpleType::base("b"), ax);
        assert!(matches!(check_pred2_derivation(&d, &s, false), Err(RuleError::FreshnessViolation { .. })));
    }

    #[test]
    fn double_neg_only_classical() {
        let s = sig();
        let d = Pred2Derivation::new(Pred2Rule::DoubleNeg, vec![], double_neg(&f("p")), Pred2Params::default(), vec![]);
        assert!(check_pred2_derivation(&d, &s, false).is_err());
        assert!(check_pred2_derivation(&d, &s, true).is_ok());
    }

    #[test]
    fn json_roundtrip() {
        let s = sig();
        let ax = Pred2Derivation::axiom(vec![f("forall x:b. P x")], f("forall x:b. P x"));
        let e = Pred2Derivation::forall_e(ax, Expr::cnst("c", SimpleType::base("b"))).unwrap();
        let d = Pred2Derivation::imp_i(f("forall x:b. P x"), e);
        assert!(check_pred2_derivation(&d, &s, false).is_ok());
        let text = DerivationFile::store(&s, &d);
        let (s2, d2) = DerivationFile::load(&text).unwrap();
        assert_eq!(s2, s);
        assert!(check_pred2_derivation(&d2, &s2, false).is_ok());
        assert_eq!(DerivationFile::store(&s2, &d2), text);
    }
}
