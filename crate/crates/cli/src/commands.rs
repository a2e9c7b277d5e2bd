//! Subcommand implementations.  Every command prints a JSON document on
//! standard output (or to `--output`) and reports a [`Status`]; input
//! problems and rule errors are [`Failure`]s.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use illative::{check_illative_with, search_proof, CheckConfig, CheckOutcome, IllativeFile, SearchConfig, System};
use kripke_fin::{enumerate_countermodel, forces, forcing_set, validate_model, Bounds, KripkeModel, SearchError, Valuation};
use lambda_core::{parse_term, print, ParseEnv, ReductionBudget, Term, Verdict};
use pred2::{check_pred2_derivation, parse_formula, DerivationFile, Expr, Mode, Signature, SignatureJson};
use serde::Deserialize;
use serde_json::{json, Value};
use stagesem_kripke::{forcing_equiv_suite, mirror_forces, MirrorCache, MirrorConfig, MirrorSystem};
use stagesem_omega::{gen, props, SimVerdict, StageCache, UniverseSpec};
use thiserror::Error;
use translate::TranslationEnv;

use crate::{MirrorArgs, UniverseArgs};

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Success.
    Ok,
    /// A definite property violation was found.
    Violation,
    /// Only undecided outcomes within the budgets.
    Undecided,
}

impl Status {
    /// Process exit code.
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Undecided => 2,
        }
    }
}

/// A command that could not produce a result.
#[derive(Debug, Error)]
pub enum Failure {
    /// Bad arguments or unreadable input.
    #[error("{0}")]
    Usage(String),
    /// The input violates a rule.
    #[error("{0}")]
    Rule(String),
}

impl Failure {
    /// Process exit code.
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 3,
            Failure::Rule(_) => 1,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(v: &Value, output: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialise");
    emit_text(&text, output)
}

fn emit_text(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn term(src: &str, consts: &[String]) -> Result<Term, Failure> {
    parse_term(src, &ParseEnv::with_consts(consts.iter().cloned())).map_err(|e| usage(format!("term '{src}': {e}")))
}

fn verdict_status(v: Verdict) -> Status {
    if v.is_definite() {
        Status::Ok
    } else {
        Status::Undecided
    }
}

// ---------------------------------------------------------------- pred2

pub fn pred2_check(file: &Path, classical: bool) -> Result<Status, Failure> {
    let (sig, d) = DerivationFile::load(&read(file)?).map_err(usage)?;
    check_pred2_derivation(&d, &sig, classical).map_err(|e| Failure::Rule(e.to_string()))?;
    let rules: Vec<&str> = d.rules_used().into_iter().map(|r| r.name()).collect();
    emit(&json!({"status": "ok", "conclusion": d.concl.to_string(), "size": d.size(), "rules": rules}), None)?;
    Ok(Status::Ok)
}

// --------------------------------------------------------------- kripke

fn load_model(file: &Path) -> Result<KripkeModel, Failure> {
    KripkeModel::from_json_str(&read(file)?).map_err(usage)
}

/// Parse `name=element` assignments; returns the valuation and the model's
/// signature extended with the assigned variables.
fn assignments(m: &KripkeModel, vars: &[String]) -> Result<(Valuation, Signature), Failure> {
    let mut sig = m.sig.clone();
    let mut w = Valuation::new();
    for a in vars {
        let (name, elem) = a.split_once('=').ok_or_else(|| usage(format!("expected name=element, got '{a}'")))?;
        let e = m.elem(elem.trim()).ok_or_else(|| usage(format!("unknown element '{elem}'")))?;
        sig.vars.insert(name.trim().to_string(), m.elems[e].ty.clone());
        w.insert(Arc::from(name.trim()), e);
    }
    Ok((w, sig))
}

fn model_formula(m: &KripkeModel, formula: &str, vars: &[String]) -> Result<(Expr, Valuation), Failure> {
    let (w, sig) = assignments(m, vars)?;
    let phi = parse_formula(formula, &sig, Mode::PredOmega).map_err(|e| usage(format!("formula '{formula}': {e}")))?;
    for (x, _) in phi.free_vars() {
        if !w.contains_key(&x) {
            return Err(usage(format!("free variable '{x}' has no --var assignment")));
        }
    }
    Ok((phi, w))
}

pub fn kripke_check_model(file: &Path, formulas: &[String]) -> Result<Status, Failure> {
    let m = load_model(file)?;
    let alphabet = formulas
        .iter()
        .map(|f| parse_formula(f, &m.sig, Mode::PredOmega).map_err(|e| usage(format!("formula '{f}': {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    match validate_model(&m, &alphabet) {
        Ok(()) => {
            emit(&json!({"status": "ok", "states": m.states}), None)?;
            Ok(Status::Ok)
        }
        Err(vs) => {
            let list: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
            emit(&json!({"status": "invalid", "violations": list}), None)?;
            Ok(Status::Violation)
        }
    }
}

pub fn kripke_force(file: &Path, state: &str, formula: &str, vars: &[String]) -> Result<Status, Failure> {
    let m = load_model(file)?;
    let s = m.state(state).ok_or_else(|| usage(format!("unknown state '{state}'")))?;
    let (phi, w) = model_formula(&m, formula, vars)?;
    let forced = forces(&m, s, &w, &phi).map_err(usage)?;
    let set = forcing_set(&m, &w, &phi).map_err(usage)?;
    emit(&json!({"formula": phi.to_string(), "state": state, "forced": forced, "forcing_set": m.state_names(set)}), None)?;
    Ok(Status::Ok)
}

/// A sequent `Δ ⊢ φ` over a signature.
#[derive(Deserialize)]
struct SequentFile {
    signature: SignatureJson,
    #[serde(default)]
    hyps: Vec<String>,
    #[serde(alias = "goal")]
    formula: String,
}

fn load_sequent(file: &Path) -> Result<(Signature, Vec<Expr>, Expr), Failure> {
    let f: SequentFile = serde_json::from_str(&read(file)?).map_err(usage)?;
    let sig = Signature::from_json(&f.signature).map_err(usage)?;
    let p = |s: &str| parse_formula(s, &sig, Mode::Pred2_0).map_err(|e| usage(format!("formula '{s}': {e}")));
    let hyps = f.hyps.iter().map(|h| p(h)).collect::<Result<Vec<_>, _>>()?;
    let phi = p(&f.formula)?;
    Ok((sig, hyps, phi))
}

pub fn kripke_countermodel(file: &Path, max_states: usize, max_dom: usize) -> Result<Status, Failure> {
    if max_states == 0 || max_dom == 0 {
        return Err(usage("bounds must be positive"));
    }
    let (sig, hyps, goal) = load_sequent(file)?;
    let bounds = Bounds { max_states, max_dom, ..Bounds::default() };
    match enumerate_countermodel(&sig, &hyps, &goal, &bounds) {
        Ok(cm) => {
            let model: Value = serde_json::from_str(&cm.model.to_json_string()).expect("model JSON");
            let valuation: BTreeMap<String, String> =
                cm.valuation.iter().map(|(x, &e)| (x.to_string(), cm.model.elems[e].name.clone())).collect();
            emit(&json!({"found": true, "state": cm.model.states[cm.state], "valuation": valuation, "model": model}), None)?;
            Ok(Status::Ok)
        }
        Err(SearchError::NotFoundWithinBounds) => {
            emit(&json!({"found": false, "max_states": max_states, "max_dom": max_dom}), None)?;
            eprintln!("illatra: no countermodel within bounds");
            Ok(Status::Undecided)
        }
        Err(e) => Err(usage(e)),
    }
}

// ------------------------------------------------------------- illative

fn system(name: &str) -> Result<System, Failure> {
    System::from_name(name).ok_or_else(|| usage(format!("unknown system '{name}' (expected i0, iw or iwc)")))
}

pub fn illative_check(sys: &str, file: &Path, budget: usize) -> Result<Status, Failure> {
    let system = system(sys)?;
    if budget == 0 {
        return Err(usage("budget must be positive"));
    }
    let (d, bases) = IllativeFile::load(&read(file)?).map_err(usage)?;
    let cfg = CheckConfig {
        system,
        budget: ReductionBudget::new(budget),
        bases: if bases.is_empty() { None } else { Some(bases) },
    };
    match check_illative_with(&d, &cfg).map_err(|e| Failure::Rule(e.to_string()))? {
        CheckOutcome::Ok => {
            emit(&json!({"status": "ok", "system": system.name(), "conclusion": print(&d.concl)}), None)?;
            Ok(Status::Ok)
        }
        CheckOutcome::Undecided(nodes) => {
            emit(&json!({"status": "undecided", "system": system.name(), "undecided": nodes}), None)?;
            Ok(Status::Undecided)
        }
    }
}

pub fn illative_search(
    sys: &str,
    depth: usize,
    hyps: &[String],
    consts: &[String],
    goal: &str,
    output: Option<&Path>,
) -> Result<Status, Failure> {
    let system = system(sys)?;
    let hs = hyps.iter().map(|h| term(h, consts)).collect::<Result<_, _>>()?;
    let g = term(goal, consts)?;
    match search_proof(&hs, &g, &SearchConfig::new(system, depth)) {
        Some(d) => {
            emit_text(&IllativeFile::store(&d, &[]), output)?;
            Ok(Status::Ok)
        }
        None => {
            eprintln!("illatra: no proof of height at most {depth} found");
            Ok(Status::Undecided)
        }
    }
}

// ------------------------------------------------------------ translate

pub fn translate_formula(file: &Path) -> Result<Status, Failure> {
    let (sig, hyps, phi) = load_sequent(file)?;
    let env = TranslationEnv::new(sig);
    let hs: Vec<String> = hyps.iter().map(|h| print(&env.translate(h))).collect();
    emit(&json!({"formula": phi.to_string(), "translation": print(&env.translate(&phi)), "hyps": hs}), None)?;
    Ok(Status::Ok)
}

pub fn translate_gamma(file: &Path) -> Result<Status, Failure> {
    let (sig, hyps, phi) = load_sequent(file)?;
    let env = TranslationEnv::new(sig);
    let gamma: Vec<String> = env.build_gamma(&hyps, &phi).iter().map(print).collect();
    emit(&json!({"gamma": gamma}), None)?;
    Ok(Status::Ok)
}

pub fn translate_compile(file: &Path, output: Option<&Path>) -> Result<Status, Failure> {
    let (sig, d) = DerivationFile::load(&read(file)?).map_err(usage)?;
    check_pred2_derivation(&d, &sig, false).map_err(|e| Failure::Rule(e.to_string()))?;
    let c = translate::compile_proof(&sig, &d).map_err(|e| Failure::Rule(e.to_string()))?;
    let bases: Vec<String> = sig.base_types.iter().cloned().collect();
    emit_text(&IllativeFile::store(&c, &bases), output)?;
    Ok(Status::Ok)
}

// ------------------------------------------------------------- stagesem

fn positive(name: &str, v: Option<usize>) -> Result<Option<usize>, Failure> {
    match v {
        Some(0) => Err(usage(format!("{name} must be positive"))),
        v => Ok(v),
    }
}

fn universe_spec(args: &UniverseArgs) -> Result<UniverseSpec, Failure> {
    let mut spec = match &args.spec {
        Some(p) => UniverseSpec::from_json(&read(p)?).map_err(usage)?,
        None => UniverseSpec::from_json(r#"{"base_domains": {"b": ["d"]}}"#).expect("default spec"),
    };
    if let Some(n) = positive("stage bound", args.stage_bound)? {
        spec.stage_bound = n;
    }
    if let Some(n) = positive("step budget", args.step_budget)? {
        spec.step_budget = n;
    }
    Ok(spec)
}

fn stage_cache(args: &UniverseArgs) -> Result<StageCache, Failure> {
    universe_spec(args)?.build().map_err(usage)
}

pub fn stagesem_build(spec: &Path) -> Result<Status, Failure> {
    let args = UniverseArgs { spec: Some(spec.to_path_buf()), ..UniverseArgs::default() };
    let c = stage_cache(&args)?;
    let counts: BTreeMap<String, u64> = c.universe().materialized().iter().map(|(t, n)| (t.to_string(), *n)).collect();
    let cfg = c.config();
    emit(
        &json!({
            "types": counts,
            "stage_bound": cfg.stage_bound,
            "step_budget": cfg.step_budget,
            "extra_witnesses": cfg.extra_witnesses.iter().map(print).collect::<Vec<_>>(),
        }),
        None,
    )?;
    Ok(Status::Ok)
}

/// One relation query.
pub enum Query {
    /// `t ≻ₙ ρ`.
    Succ(String, String),
    /// `t ⇝ₙ ρ`.
    Leadsto(String, String),
    /// `t ~ₙ τ`.
    Sim(String),
}

pub fn stagesem_query(args: &UniverseArgs, q: Query, stage: Option<usize>, consts: &[String]) -> Result<Status, Failure> {
    let mut c = stage_cache(args)?;
    let n = stage.unwrap_or(c.config().stage_bound);
    let (rel, v) = match q {
        Query::Succ(t, r) => {
            let v = c.query_succ(&term(&t, consts)?, &term(&r, consts)?, n).map_err(usage)?;
            ("succ", v)
        }
        Query::Leadsto(t, r) => {
            let v = c.query_leadsto(&term(&t, consts)?, &term(&r, consts)?, n).map_err(usage)?;
            ("leadsto", v)
        }
        Query::Sim(t) => {
            let s = c.query_sim(&term(&t, consts)?, n).map_err(usage)?;
            let (text, st) = match s {
                SimVerdict::Typed(ty) => (ty.to_string(), Status::Ok),
                SimVerdict::Untyped => ("untyped".to_string(), Status::Ok),
                SimVerdict::Unknown => ("Unknown".to_string(), Status::Undecided),
            };
            emit(&json!({"relation": "sim", "stage": n, "type": text}), None)?;
            return Ok(st);
        }
    };
    emit(&json!({"relation": rel, "stage": n, "verdict": v.to_string()}), None)?;
    Ok(verdict_status(v))
}

pub fn stagesem_certify(args: &UniverseArgs, t: &str, consts: &[String]) -> Result<Status, Failure> {
    let mut c = stage_cache(args)?;
    let tm = term(t, consts)?;
    let v = c.certify_true(&tm);
    let cfg = c.config();
    emit(
        &json!({
            "term": print(&tm),
            "verdict": v.to_string(),
            "stage_bound": cfg.stage_bound,
            "step_budget": cfg.step_budget,
        }),
        None,
    )?;
    Ok(match v {
        Verdict::True => Status::Ok,
        Verdict::False => {
            eprintln!("illatra: {} is not true at any stage up to {}", print(&tm), cfg.stage_bound);
            Status::Violation
        }
        Verdict::Unknown => Status::Undecided,
    })
}

fn props_status(checked: usize, undecided: usize, violations: usize) -> Status {
    if violations > 0 {
        Status::Violation
    } else if checked > 0 && checked == undecided {
        Status::Undecided
    } else {
        Status::Ok
    }
}

pub fn stagesem_props(args: &UniverseArgs, samples: usize, seed: u64, depth: usize) -> Result<Status, Failure> {
    use rand::SeedableRng;
    let mut c = stage_cache(args)?;
    let u = c.universe().clone();
    let n = c.config().stage_bound;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let ts: Vec<Term> = (0..samples).map(|_| gen::random_term(&mut rng, &u, depth)).collect();
    for t in &ts {
        c.certify_true(t);
        c.leadsto(t, &stagesem_omega::CanonUniverse::bot(), n);
        c.sim(t, n);
    }
    let report = props::run_suite(&mut c, &ts);
    let checked: usize = report.checked.values().sum();
    let undecided: usize = report.undecided.values().sum();
    emit(&serde_json::to_value(&report).expect("report serialises"), None)?;
    Ok(props_status(checked, undecided, report.violations.len()))
}

// --------------------------------------------------------------- mirror

fn mirror_config(b: &MirrorArgs) -> Result<MirrorConfig, Failure> {
    let mut cfg = MirrorConfig::default();
    if let Some(n) = positive("stage bound", b.stage_bound)? {
        cfg.stage_bound = n;
    }
    if let Some(n) = positive("step budget", b.step_budget)? {
        cfg.step_budget = n;
    }
    Ok(cfg)
}

pub fn mirror_build(model: &Path) -> Result<Status, Failure> {
    let m = load_model(model)?;
    let sys = MirrorSystem::build(m).map_err(usage)?;
    let rules: Vec<String> = sys.rules().iter().map(|(l, r)| format!("{} -> {}", print(l), print(r))).collect();
    let bases: Vec<String> = sys.base_types().iter().map(|b| b.to_string()).collect();
    let overlaps = sys.critical_pairs().len();
    emit(&json!({"states": sys.model().states, "base_types": bases, "rules": rules, "critical_pairs": overlaps}), None)?;
    Ok(if overlaps == 0 { Status::Ok } else { Status::Violation })
}

pub fn mirror_force(model: &Path, state: &str, formula: &str, vars: &[String], b: &MirrorArgs) -> Result<Status, Failure> {
    let m = load_model(model)?;
    let s = m.state(state).ok_or_else(|| usage(format!("unknown state '{state}'")))?;
    let (phi, w) = model_formula(&m, formula, vars)?;
    let sys = MirrorSystem::build(m).map_err(usage)?;
    let mut cache = MirrorCache::new(sys, mirror_config(b)?);
    let v = mirror_forces(&mut cache, s, &w, &phi).map_err(usage)?;
    emit(&json!({"formula": phi.to_string(), "state": state, "verdict": v.to_string()}), None)?;
    Ok(verdict_status(v))
}

const REPORT_LIMIT: usize = 20;

pub fn mirror_equiv(model: &Path, depth: usize, b: &MirrorArgs) -> Result<Status, Failure> {
    let m = load_model(model)?;
    for c in ["P", "c"] {
        if !m.interp.contains_key(c) {
            return Err(usage(format!("the formula family needs constant '{c}' to be interpreted")));
        }
    }
    let fs = kripke_fin::corpus::formulas(depth);
    let mut rep = forcing_equiv_suite(&m, &fs, &mirror_config(b)?).map_err(usage)?;
    let status = if !rep.disagreements.is_empty() {
        Status::Violation
    } else if !rep.unknown.is_empty() {
        Status::Undecided
    } else {
        Status::Ok
    };
    let (nd, nu) = (rep.disagreements.len(), rep.unknown.len());
    rep.disagreements.truncate(REPORT_LIMIT);
    rep.unknown.truncate(REPORT_LIMIT);
    let mut v = serde_json::to_value(&rep).expect("report serialises");
    v["disagreement_count"] = json!(nd);
    v["unknown_count"] = json!(nu);
    emit(&v, None)?;
    Ok(status)
}
