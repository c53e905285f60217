//! `cestrat`: apply, unify, compile and check context-embedding strategies
//! from the command line.
//!
//! Every input flag takes either a path to a file or the literal text. Parse
//! errors and invalid inputs exit with status 2 and a diagnostic on stderr.

use std::fmt::Display;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use cestrat::oracle::{run_suite, GenConfig, Suite};
use cestrat::strategy::{self, unfold, validate, UnfoldMap};
use cestrat::syntax::absorb_strategy;
use cestrat::unify::TraceStep;
use cestrat::{
    eval_with, parse_strategy, parse_term, psi_with, EngineOptions, MergeMode, MuBound, Outcome, PosCe, Session,
    Signature, Strategy, Term,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "cestrat", version, about = "Context-embedding strategies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a strategy to a term and print the result, or FAIL.
    Apply {
        #[arg(long)]
        term: String,
        #[arg(long)]
        strategy: String,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Bound::DepthPlusOne)]
        mu_bound: Bound,
    },
    /// Print the unification of two strategies.
    Unify(Pair),
    /// Print the combination of two strategies.
    Combine(Pair),
    /// Compile a strategy against a term into a position-based strategy.
    Psi {
        #[arg(long)]
        term: String,
        #[arg(long)]
        strategy: String,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Bound::DepthPlusOne)]
        mu_bound: Bound,
    },
    /// Report whether a strategy is closed, monotone, linear and well-founded.
    Check {
        #[arg(long)]
        strategy: String,
        #[command(flatten)]
        common: Common,
    },
    /// Replace every fixed point by a finite iterate.
    Unfold {
        #[arg(long)]
        strategy: String,
        /// Iterate every fixed point this many times.
        #[arg(long, conflicts_with = "map", required_unless_present = "map")]
        n: Option<usize>,
        /// Per-variable counts such as `X=3,Y=2`.
        #[arg(long)]
        map: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a seeded oracle suite and print its JSON report.
    Verify {
        #[arg(long, default_value = "homomorphism")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest depth of the generated strategies.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Largest depth of the generated terms.
        #[arg(long, default_value_t = 3)]
        term_depth: usize,
        #[arg(long, value_enum, default_value_t = Merge::Nest)]
        merge: Merge,
        #[arg(long, value_enum, default_value_t = Bound::DepthPlusOne)]
        mu_bound: Bound,
        /// File of `name/arity` lines; the generators use `{a, b, f/1, g/2}` otherwise.
        #[arg(long)]
        signature: Option<String>,
        /// Include the elapsed time in the report, which makes it non-reproducible.
        #[arg(long)]
        wall_time: bool,
    },
}

#[derive(Args)]
struct Common {
    /// File of `name/arity` lines. Without it the signature is inferred from the inputs.
    #[arg(long)]
    signature: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct Pair {
    #[arg(long)]
    left: String,
    #[arg(long)]
    right: String,
    #[arg(long, value_enum, default_value_t = Merge::Nest)]
    merge: Merge,
    /// Print one JSON line per reduction step on stderr.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Merge {
    Nest,
    #[value(name = "leftproject")]
    LeftProject,
}

impl From<Merge> for MergeMode {
    fn from(m: Merge) -> Self {
        match m {
            Merge::Nest => MergeMode::Nest,
            Merge::LeftProject => MergeMode::LeftProject,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Bound {
    DepthPlusOne,
    Depth,
}

impl From<Bound> for MuBound {
    fn from(b: Bound) -> Self {
        match b {
            Bound::DepthPlusOne => MuBound::DepthPlusOne,
            Bound::Depth => MuBound::Depth,
        }
    }
}

/// An invocation rejected for bad usage or input; it exits with status 2.
struct Failure(String);

impl Failure {
    fn usage(message: impl Display) -> Self {
        Failure(message.to_string())
    }
}

type CliResult = Result<ExitCode, Failure>;

/// An input flag's text: the file contents when the argument names a file.
struct Source {
    label: String,
    text: String,
}

fn read_source(flag: &str, arg: &str) -> Result<Source, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{arg}: {e}")))?;
        Ok(Source {
            label: arg.to_string(),
            text,
        })
    } else {
        Ok(Source {
            label: format!("--{flag}"),
            text: arg.to_string(),
        })
    }
}

fn load<T, E: Display>(flag: &str, arg: &str, parse: impl FnOnce(&str) -> Result<T, E>) -> Result<T, Failure> {
    let src = read_source(flag, arg)?;
    parse(src.text.trim()).map_err(|e| Failure::usage(format!("{}:{e}", src.label)))
}

fn load_term(arg: &str) -> Result<Term, Failure> {
    load("term", arg, parse_term)
}

fn load_strategy(flag: &str, arg: &str) -> Result<Strategy, Failure> {
    load(flag, arg, parse_strategy)
}

/// Collects the symbols of the inputs and checks them against the declared
/// signature, when there is one.
struct Symbols {
    declared: Option<Signature>,
    seen: Signature,
}

impl Symbols {
    fn new(file: Option<&str>) -> Result<Self, Failure> {
        let declared = file
            .map(|f| {
                let text = fs::read_to_string(f).map_err(|e| Failure::usage(format!("{f}: {e}")))?;
                Signature::parse(&text).map_err(|e| Failure::usage(format!("{f}: {e}")))
            })
            .transpose()?;
        Ok(Symbols {
            declared,
            seen: Signature::new(),
        })
    }

    fn term(&mut self, t: &Term) -> Result<(), Failure> {
        self.seen.absorb_term(t).map_err(Failure::usage)
    }

    fn strategy(&mut self, s: &Strategy) -> Result<(), Failure> {
        absorb_strategy(&mut self.seen, s).map_err(Failure::usage)
    }

    /// The declared signature after checking every symbol seen so far, or the
    /// inferred one.
    fn finish(self) -> Result<Signature, Failure> {
        let Some(mut declared) = self.declared else {
            return Ok(self.seen);
        };
        for (name, _) in self.seen.symbols() {
            if !declared.contains(name) {
                return Err(Failure::usage(format!("symbol `{name}` is not declared in the signature")));
            }
        }
        declared.absorb(&self.seen).map_err(Failure::usage)?;
        Ok(declared)
    }
}

fn outcome_text(o: &Outcome) -> String {
    match o {
        Some(t) => t.to_string(),
        None => "FAIL".into(),
    }
}

fn pos_json(e: &PosCe) -> serde_json::Value {
    match e {
        PosCe::Fail => json!("fail"),
        PosCe::List(es) => es
            .iter()
            .map(|(p, c)| json!({"position": p.to_string(), "context": c.to_string()}))
            .collect(),
    }
}

fn strategy_json(s: &Strategy) -> serde_json::Value {
    serde_json::from_str(&strategy::to_json(s)).expect("the syntax tree serializes to JSON")
}

fn apply(term: &str, strat: &str, common: &Common, bound: Bound) -> CliResult {
    let t = load_term(term)?;
    let s = load_strategy("strategy", strat)?;
    let mut symbols = Symbols::new(common.signature.as_deref())?;
    symbols.term(&t)?;
    symbols.strategy(&s)?;
    symbols.finish()?;
    let out = eval_with(&s, &t, bound.into()).map_err(Failure::usage)?;
    if common.json {
        println!("{}", json!({"term": t.to_string(), "result": out.as_ref().map(Term::to_string)}));
    } else {
        println!("{}", outcome_text(&out));
    }
    Ok(if out.is_some() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn pair(p: &Pair, combine: bool) -> CliResult {
    let left = load_strategy("left", &p.left)?;
    let right = load_strategy("right", &p.right)?;
    let mut symbols = Symbols::new(p.common.signature.as_deref())?;
    symbols.strategy(&left)?;
    symbols.strategy(&right)?;
    let sig = symbols.finish()?;
    let mut options = if p.common.signature.is_some() {
        EngineOptions::for_signature(&sig)
    } else {
        EngineOptions::default()
    };
    options.merge_mode = p.merge.into();
    options.trace = p.trace;
    let mut session = Session::new(options);
    let result = if combine {
        session.combine(&left, &right)
    } else {
        session.unify(&left, &right)
    }
    .map_err(Failure::usage)?;
    if p.trace {
        let trace: Vec<TraceStep> = session.take_trace();
        for step in trace {
            eprintln!("{}", serde_json::to_string(&step).expect("trace steps serialize"));
        }
    }
    if p.common.json {
        println!(
            "{}",
            json!({
                "strategy": result.to_string(),
                "ast": strategy_json(&result),
                "engine": session.stats(),
            })
        );
    } else {
        println!("{result}");
    }
    Ok(ExitCode::SUCCESS)
}

fn psi_cmd(term: &str, strat: &str, common: &Common, bound: Bound) -> CliResult {
    let t = load_term(term)?;
    let s = load_strategy("strategy", strat)?;
    let mut symbols = Symbols::new(common.signature.as_deref())?;
    symbols.term(&t)?;
    symbols.strategy(&s)?;
    symbols.finish()?;
    let e = psi_with(&s, &t, bound.into()).map_err(Failure::usage)?;
    if common.json {
        println!("{}", json!({"term": t.to_string(), "pos_ce": pos_json(&e)}));
    } else {
        println!("{e}");
    }
    Ok(ExitCode::SUCCESS)
}

fn check(strat: &str, common: &Common) -> CliResult {
    let s = load_strategy("strategy", strat)?;
    let mut symbols = Symbols::new(common.signature.as_deref())?;
    symbols.strategy(&s)?;
    symbols.finish()?;
    let v = validate(&s);
    if common.json {
        println!("{}", serde_json::to_string(&v).expect("validation serializes"));
    } else {
        for (name, ok) in [
            ("closed", v.closed),
            ("monotone", v.monotone),
            ("linear", v.linear),
            ("well-founded", v.well_founded),
        ] {
            println!("{name}: {}", if ok { "yes" } else { "no" });
        }
        for d in &v.diagnostics {
            println!("  {d}");
        }
    }
    Ok(if v.ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn unfold_cmd(strat: &str, n: Option<usize>, map: Option<&str>, common: &Common) -> CliResult {
    let s = load_strategy("strategy", strat)?;
    let mut symbols = Symbols::new(common.signature.as_deref())?;
    symbols.strategy(&s)?;
    symbols.finish()?;
    let map = match (n, map) {
        (Some(n), _) => UnfoldMap::uniform(&s, n),
        (None, Some(m)) => m.parse().map_err(|e| Failure::usage(format!("--map: {e}")))?,
        (None, None) => return Err(Failure::usage("one of --n or --map is required")),
    };
    let out = unfold(&s, &map).map_err(Failure::usage)?;
    if common.json {
        println!("{}", json!({"strategy": out.to_string(), "ast": strategy_json(&out)}));
    } else {
        println!("{out}");
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn verify(
    suite: &str,
    cases: usize,
    seed: u64,
    depth: usize,
    term_depth: usize,
    merge: Merge,
    bound: Bound,
    signature: Option<&str>,
    wall_time: bool,
) -> CliResult {
    let suite: Suite = suite.parse().map_err(|e| Failure::usage(format!("--suite: {e}")))?;
    let signature = match signature {
        Some(f) => {
            let text = fs::read_to_string(f).map_err(|e| Failure::usage(format!("{f}: {e}")))?;
            Signature::parse(&text).map_err(|e| Failure::usage(format!("{f}: {e}")))?
        }
        None => Signature::small(),
    };
    if signature.constants().is_empty() {
        return Err(Failure::usage("the signature declares no constant, so it has no ground terms"));
    }
    let cfg = GenConfig {
        signature,
        max_term_depth: term_depth,
        max_strategy_depth: depth,
        seed,
        cases,
        merge_mode: merge.into(),
        mu_bound: bound.into(),
        ..GenConfig::default()
    };
    let start = std::time::Instant::now();
    let mut report = run_suite(suite, &cfg);
    if wall_time {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    println!("{}", report.to_json());
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Apply {
            term,
            strategy,
            common,
            mu_bound,
        } => apply(&term, &strategy, &common, mu_bound),
        Command::Unify(p) => pair(&p, false),
        Command::Combine(p) => pair(&p, true),
        Command::Psi {
            term,
            strategy,
            common,
            mu_bound,
        } => psi_cmd(&term, &strategy, &common, mu_bound),
        Command::Check { strategy, common } => check(&strategy, &common),
        Command::Unfold {
            strategy,
            n,
            map,
            common,
        } => unfold_cmd(&strategy, n, map.as_deref(), &common),
        Command::Verify {
            suite,
            cases,
            seed,
            depth,
            term_depth,
            merge,
            mu_bound,
            signature,
            wall_time,
        } => verify(
            &suite,
            cases,
            seed,
            depth,
            term_depth,
            merge,
            mu_bound,
            signature.as_deref(),
            wall_time,
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("cestrat: {}", f.0);
            ExitCode::from(2)
        }
    }
}
