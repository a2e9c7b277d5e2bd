//! `illatra`: command-line workbench for second-order propositional
//! translation into illative combinatory logic and its stage semantics.
//!
//! Exit codes: 0 success, 1 rule error or definite property violation,
//! 2 undecided within budgets, 3 usage or parse error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Failure, Status};

#[derive(Parser, Debug)]
#[command(name = "illatra", version, about = "Illative combinatory logic workbench")]
struct Cli {
    /// Print diagnostics on the error stream.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Second-order propositional derivations.
    #[command(subcommand)]
    Pred2(Pred2Cmd),
    /// Finite Kripke models.
    #[command(subcommand)]
    Kripke(KripkeCmd),
    /// Illative derivations.
    #[command(subcommand)]
    Illative(IllativeCmd),
    /// Translation of formulas and proofs.
    #[command(subcommand)]
    Translate(TranslateCmd),
    /// Stage semantics over a canonical-term universe.
    #[command(subcommand)]
    Stagesem(StagesemCmd),
    /// Stage semantics mirroring a Kripke model.
    #[command(subcommand)]
    Mirror(MirrorCmd),
}

#[derive(Subcommand, Debug)]
enum Pred2Cmd {
    /// Check a derivation file (signature plus derivation).
    Check {
        /// Derivation JSON.
        file: PathBuf,
        /// Admit the double-negation rule.
        #[arg(long)]
        classical: bool,
    },
}

#[derive(Subcommand, Debug)]
enum KripkeCmd {
    /// Validate a model file.
    CheckModel {
        /// Model JSON.
        file: PathBuf,
        /// Formulas whose forcing sets must be realised in `D_o`.
        #[arg(long = "formula")]
        formulas: Vec<String>,
    },
    /// Decide forcing of a formula at a state.
    Force {
        /// Model JSON.
        file: PathBuf,
        /// State name.
        #[arg(long)]
        state: String,
        /// Formula text.
        #[arg(long)]
        formula: String,
        /// Variable assignments `name=element`.
        #[arg(long = "var")]
        vars: Vec<String>,
    },
    /// Search for a countermodel to a sequent file
    /// (`{"signature", "hyps", "goal"}`).
    Countermodel {
        /// Sequent JSON.
        file: PathBuf,
        /// Largest number of states.
        #[arg(long, default_value_t = 3)]
        max_states: usize,
        /// Largest base domain.
        #[arg(long, default_value_t = 2)]
        max_dom: usize,
    },
}

#[derive(Subcommand, Debug)]
enum IllativeCmd {
    /// Check a derivation file.
    Check {
        /// System: i0, iw or iwc.
        #[arg(long)]
        system: String,
        /// Derivation JSON.
        file: PathBuf,
        /// Reduction budget for equality side conditions.
        #[arg(long, default_value_t = 500)]
        budget: usize,
    },
    /// Bounded proof search.
    Search {
        /// System: i0, iw or iwc.
        #[arg(long, default_value = "iw")]
        system: String,
        /// Maximum derivation height.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Hypotheses (term text).
        #[arg(long = "hyp")]
        hyps: Vec<String>,
        /// Names to parse as user constants.
        #[arg(long = "const")]
        consts: Vec<String>,
        /// Goal (term text).
        goal: String,
        /// Write the derivation here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum TranslateCmd {
    /// Translate a formula (`{"signature", "hyps", "formula"}`).
    Formula {
        /// Formula JSON.
        file: PathBuf,
    },
    /// The typing context of a sequent (`{"signature", "hyps", "formula"}`).
    Gamma {
        /// Sequent JSON.
        file: PathBuf,
    },
    /// Compile a derivation file into an illative derivation.
    Compile {
        /// Derivation JSON (signature plus derivation).
        file: PathBuf,
        /// Write the derivation here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Universe selection and budget overrides.
#[derive(Args, Debug, Clone, Default)]
pub struct UniverseArgs {
    /// Universe spec JSON (default: one base type `b` with one element).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Override the stage bound.
    #[arg(long)]
    pub stage_bound: Option<usize>,
    /// Override the per-query step budget.
    #[arg(long)]
    pub step_budget: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum StagesemCmd {
    /// Build the universe and summarise it.
    Build {
        /// Universe spec JSON.
        spec: PathBuf,
    },
    /// Query one relation.
    Query {
        #[command(flatten)]
        uni: UniverseArgs,
        /// `t ≻ₙ ρ`: a term and a canonical term.
        #[arg(long, num_args = 2, value_names = ["T", "RHO"], conflicts_with_all = ["leadsto", "sim"])]
        succ: Option<Vec<String>>,
        /// `t ⇝ₙ ρ`: a term and a canonical term.
        #[arg(long, num_args = 2, value_names = ["T", "RHO"], conflicts_with = "sim")]
        leadsto: Option<Vec<String>>,
        /// `t ~ₙ τ`: a term.
        #[arg(long, value_name = "T")]
        sim: Option<String>,
        /// Stage (default: the stage bound).
        #[arg(long)]
        stage: Option<usize>,
        /// Names to parse as user constants.
        #[arg(long = "const")]
        consts: Vec<String>,
    },
    /// Try to certify a term as true at the stage bound.
    Certify {
        #[command(flatten)]
        uni: UniverseArgs,
        /// Term text.
        term: String,
        /// Names to parse as user constants.
        #[arg(long = "const")]
        consts: Vec<String>,
    },
    /// Run the invariant suite over seeded random terms.
    Props {
        #[command(flatten)]
        uni: UniverseArgs,
        /// Number of random terms.
        #[arg(long, default_value_t = 40)]
        samples: usize,
        /// Random seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Depth of random terms.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

/// Mirror budget overrides.
#[derive(Args, Debug, Clone, Default)]
pub struct MirrorArgs {
    /// Override the stage bound.
    #[arg(long)]
    pub stage_bound: Option<usize>,
    /// Override the per-query step budget.
    #[arg(long)]
    pub step_budget: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum MirrorCmd {
    /// Build the mirror rewriting system of a model and summarise it.
    Build {
        /// Model JSON.
        model: PathBuf,
    },
    /// Decide forcing through the mirror semantics.
    Force {
        /// Model JSON.
        model: PathBuf,
        /// State name.
        #[arg(long)]
        state: String,
        /// Formula text.
        #[arg(long)]
        formula: String,
        /// Variable assignments `name=element`.
        #[arg(long = "var")]
        vars: Vec<String>,
        #[command(flatten)]
        budgets: MirrorArgs,
    },
    /// Compare Kripke forcing with the mirror semantics on every formula
    /// up to a connective depth.
    Equiv {
        /// Model JSON.
        model: PathBuf,
        /// Connective depth.
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[command(flatten)]
        budgets: MirrorArgs,
    },
}

fn dispatch(cmd: Command) -> Result<Status, Failure> {
    use commands as c;
    match cmd {
        Command::Pred2(Pred2Cmd::Check { file, classical }) => c::pred2_check(&file, classical),
        Command::Kripke(KripkeCmd::CheckModel { file, formulas }) => c::kripke_check_model(&file, &formulas),
        Command::Kripke(KripkeCmd::Force { file, state, formula, vars }) => {
            c::kripke_force(&file, &state, &formula, &vars)
        }
        Command::Kripke(KripkeCmd::Countermodel { file, max_states, max_dom }) => {
            c::kripke_countermodel(&file, max_states, max_dom)
        }
        Command::Illative(IllativeCmd::Check { system, file, budget }) => c::illative_check(&system, &file, budget),
        Command::Illative(IllativeCmd::Search { system, depth, hyps, consts, goal, output }) => {
            c::illative_search(&system, depth, &hyps, &consts, &goal, output.as_deref())
        }
        Command::Translate(TranslateCmd::Formula { file }) => c::translate_formula(&file),
        Command::Translate(TranslateCmd::Gamma { file }) => c::translate_gamma(&file),
        Command::Translate(TranslateCmd::Compile { file, output }) => c::translate_compile(&file, output.as_deref()),
        Command::Stagesem(StagesemCmd::Build { spec }) => c::stagesem_build(&spec),
        Command::Stagesem(StagesemCmd::Query { uni, succ, leadsto, sim, stage, consts }) => {
            let q = match (succ, leadsto, sim) {
                (Some(v), None, None) => c::Query::Succ(v[0].clone(), v[1].clone()),
                (None, Some(v), None) => c::Query::Leadsto(v[0].clone(), v[1].clone()),
                (None, None, Some(t)) => c::Query::Sim(t),
                _ => return Err(Failure::Usage("give exactly one of --succ, --leadsto, --sim".into())),
            };
            c::stagesem_query(&uni, q, stage, &consts)
        }
        Command::Stagesem(StagesemCmd::Certify { uni, term, consts }) => c::stagesem_certify(&uni, &term, &consts),
        Command::Stagesem(StagesemCmd::Props { uni, samples, seed, depth }) => {
            c::stagesem_props(&uni, samples, seed, depth)
        }
        Command::Mirror(MirrorCmd::Build { model }) => c::mirror_build(&model),
        Command::Mirror(MirrorCmd::Force { model, state, formula, vars, budgets }) => {
            c::mirror_force(&model, &state, &formula, &vars, &budgets)
        }
        Command::Mirror(MirrorCmd::Equiv { model, depth, budgets }) => c::mirror_equiv(&model, depth, &budgets),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let verbose = cli.verbose;
    match dispatch(cli.command) {
        Ok(status) => {
            if verbose {
                eprintln!("illatra: {status:?}");
            }
            ExitCode::from(status.code())
        }
        Err(f) => {
            eprintln!("illatra: {f}");
            ExitCode::from(f.code())
        }
    }
}
