//! `rzm`: compile, run and inspect programs of the realizability machine.

use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use rzm::compile::{abstract_eliminate_with, ref_run, EliminationOptions, LambdaTerm};
use rzm::extract::{extract_witness, ExtractResult};
use rzm::forcing::{
    check_closure_laws, chi_transformers, verify_star_law, BaseTerms, ConditionSystem, PropStructure, StarLaw,
};
use rzm::machine::{exec_tree, run_linear, run_traced, trace_line, LinearOutcome, Observable, OracleConfig};
use rzm::syntax::{parse_lambda, Process, Stack, Term, DEFAULT_ORACLE};

const DEMOS: [(&str, &str, &str); 4] = [
    ("fork_majority", include_str!("../examples/fork_majority.lc"), "extract"),
    ("theta_double", include_str!("../examples/theta_double.lc"), "extract"),
    ("numeral_iter", include_str!("../examples/numeral_iter.lc"), "extract"),
    ("cc_restore", include_str!("../examples/cc_restore.lc"), "extract"),
];

#[derive(Parser)]
#[command(name = "rzm", version, about = "Realizability machine: compile, run, extract, force")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Clone)]
struct Opts {
    /// Step budget.
    #[arg(long, global = true)]
    fuel: Option<u64>,
    /// `none`, `check:N` or `collect`.
    #[arg(long, global = true, default_value = "none")]
    oracle: String,
    #[arg(long, global = true, value_enum, default_value_t = MachineKind::Combinator)]
    machine: MachineKind,
    /// `trivial`, `cohen` or `poset:<file>`.
    #[arg(long, global = true, default_value = "cohen")]
    system: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Disable the η-rule of abstraction elimination.
    #[arg(long, global = true)]
    no_eta: bool,
    /// Initial stack, comma separated, top first. Empty means `π0`.
    #[arg(long, global = true, default_value = "")]
    stack: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MachineKind {
    Combinator,
    Reference,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Eliminate the abstractions of a λ-term.
    Compile { input: String },
    /// Run a process until it accepts, sticks, forks or runs out of fuel.
    Run { input: String },
    /// Print every step of a linear run.
    Trace { input: String },
    /// Print the execution tree.
    Tree { input: String },
    /// Extract the witness computed by `θ ⋆ δ·π0`.
    Extract { input: String },
    /// Checks of the forcing layer.
    Forcing {
        #[command(subcommand)]
        cmd: ForcingCmd,
    },
    /// Run a bundled demo program, or list them.
    Demo { name: Option<String> },
}

#[derive(Subcommand)]
enum ForcingCmd {
    /// Sample the closure laws of the extension's pole.
    Laws {
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Verify the lifted reductions of the star combinators.
    Star {
        /// One of Cstar, Kstar, Wstar, kstar, ccstar; all if omitted.
        #[arg(long)]
        law: Option<String>,
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Build the transformer pair of a propositional structure.
    Chi {
        structure: String,
        /// Base pair for `O_∈` as two comma separated terms.
        #[arg(long)]
        base_in: Option<String>,
        /// Base pair for `O_⊂` as two comma separated terms.
        #[arg(long)]
        base_sub: Option<String>,
    },
}

/// Failure with a specific exit status.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Exit(2, msg.into()))
}

const DEFAULT_FUEL: u64 = 100_000;
const DEFAULT_FORCING_FUEL: u64 = 1000;

impl Opts {
    fn fuel(&self) -> u64 {
        self.fuel.unwrap_or(DEFAULT_FUEL)
    }

    fn elimination(&self) -> EliminationOptions {
        EliminationOptions { eta: !self.no_eta }
    }

    fn oracle_config(&self) -> Result<OracleConfig> {
        match self.oracle.as_str() {
            "none" => Ok(OracleConfig::none()),
            "collect" => Ok(OracleConfig::collector()),
            other => match other.strip_prefix("check:").map(str::parse::<u64>) {
                Some(Ok(n)) => Ok(OracleConfig::checker(n)),
                _ => Err(usage(format!("bad --oracle `{other}`; expected none, check:N or collect"))),
            },
        }
    }

    fn compile(&self, src: &str) -> Result<Term> {
        let lt = parse_input(src)?;
        abstract_eliminate_with(&lt, self.elimination()).map_err(|e| usage(e.to_string()))
    }

    fn stack(&self) -> Result<Stack> {
        let mut items = Vec::new();
        for part in self.stack.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            items.push(self.compile(part).with_context(|| format!("in --stack item `{part}`"))?);
        }
        Ok(Stack::from_items(items))
    }

    fn process(&self, input: &str) -> Result<Process> {
        Ok(Process::new(self.compile(&load(input)?)?, self.stack()?))
    }
}

/// Inline text, or the contents of `@path` without `#` comment lines.
fn load(input: &str) -> Result<String> {
    let Some(path) = input.strip_prefix('@') else {
        return Ok(input.to_string());
    };
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read `{path}`: {e}")))?;
    Ok(strip_comments(&text))
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

fn parse_input(src: &str) -> Result<LambdaTerm> {
    parse_lambda(src.trim()).map_err(|e| usage(e.to_string()))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn outcome_json(out: &LinearOutcome) -> serde_json::Value {
    match out {
        LinearOutcome::Accept { kind, steps } => json!({"outcome": "accept", "accept": kind, "steps": steps}),
        LinearOutcome::Stuck { reason, steps, process } => {
            json!({"outcome": "stuck", "reason": reason, "steps": steps, "process": process.to_string()})
        }
        LinearOutcome::Fuel { steps, process } => {
            json!({"outcome": "fuel", "steps": steps, "process": process.to_string()})
        }
        LinearOutcome::Fork { steps, process } => {
            json!({"outcome": "fork", "steps": steps, "process": process.to_string()})
        }
    }
}

fn observable_text(o: &Observable) -> String {
    match o {
        Observable::Accept(k) => format!("accept({k})"),
        Observable::Stuck => "stuck".to_string(),
        Observable::Fuel => "fuel".to_string(),
        Observable::Fork(c) => {
            let parts: Vec<String> = c.iter().map(observable_text).collect();
            format!("fork[{}]", parts.join(", "))
        }
    }
}

fn cmd_compile(opts: &Opts, input: &str) -> Result<u8> {
    let t = opts.compile(&load(input)?)?;
    match opts.format {
        Format::Text => println!("{t}"),
        Format::Json => print_json(&json!({"format": 1, "term": t.to_string()})),
    }
    Ok(0)
}

fn cmd_run(opts: &Opts, input: &str) -> Result<u8> {
    let cfg = opts.oracle_config()?;
    if opts.machine == MachineKind::Reference {
        let lt = parse_input(&load(input)?)?;
        if !lt.is_closed() {
            return Err(usage(format!("`{lt}` is not closed")));
        }
        let out = ref_run(&lt, &opts.stack()?, opts.fuel(), &cfg);
        match opts.format {
            Format::Text => {
                println!("{}", observable_text(&out.observable));
                for (name, payload) in &out.events {
                    println!("event {name} {payload}");
                }
            }
            Format::Json => {
                let events: Vec<_> = out.events.iter().map(|(n, v)| json!({"oracle": n, "payload": v})).collect();
                print_json(&json!({
                    "format": 1,
                    "machine": "reference",
                    "observable": observable_text(&out.observable),
                    "events": events,
                }));
            }
        }
        return Ok(if matches!(out.observable, Observable::Stuck) { 3 } else { 0 });
    }
    let out = run_linear(opts.process(input)?, opts.fuel(), &cfg);
    match opts.format {
        Format::Text => println!("{out}"),
        Format::Json => {
            let mut v = outcome_json(&out);
            v["format"] = json!(1);
            print_json(&v);
        }
    }
    Ok(match out {
        LinearOutcome::Stuck { steps: 0, .. } => 3,
        _ => 0,
    })
}

fn cmd_trace(opts: &Opts, input: &str) -> Result<u8> {
    if opts.machine == MachineKind::Reference {
        return Err(usage("trace runs on the combinator machine only"));
    }
    let cfg = opts.oracle_config()?;
    let mut lines = Vec::new();
    let mut steps = Vec::new();
    let out = run_traced(opts.process(input)?, opts.fuel(), &cfg, |n, rule, p| match opts.format {
        Format::Text => lines.push(trace_line(n, rule, p)),
        Format::Json => steps.push(json!({"n": n, "rule": rule, "state": p.to_string()})),
    });
    match opts.format {
        Format::Text => {
            for l in lines {
                println!("{l}");
            }
            eprintln!("{out}");
        }
        Format::Json => print_json(&json!({"format": 1, "steps": steps, "end": outcome_json(&out)})),
    }
    Ok(0)
}

fn cmd_tree(opts: &Opts, input: &str) -> Result<u8> {
    if opts.machine == MachineKind::Reference {
        return Err(usage("tree runs on the combinator machine only"));
    }
    let cfg = opts.oracle_config()?;
    let tree = exec_tree(opts.process(input)?, opts.fuel(), &cfg);
    match opts.format {
        Format::Text => print!("{tree}"),
        Format::Json => println!("{{\"format\":1,\"tree\":{}}}", tree.to_json()),
    }
    Ok(0)
}

fn cmd_extract(opts: &Opts, input: &str) -> Result<u8> {
    let theta = opts.compile(&load(input)?)?;
    let report = extract_witness(&theta, opts.fuel(), DEFAULT_ORACLE);
    match opts.format {
        Format::Text => print!("{report}"),
        Format::Json => println!("{}", report.to_json()),
    }
    Ok(match report.result {
        ExtractResult::Value { .. } => 0,
        ExtractResult::Ambiguous { .. } => 4,
        ExtractResult::Fail { .. } => 5,
    })
}

fn base_pair(opts: &Opts, spec: &Option<String>, default: (Term, Term)) -> Result<(Term, Term)> {
    let Some(spec) = spec else { return Ok(default) };
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let [q, qp] = parts[..] else {
        return Err(usage(format!("base pair `{spec}` needs two comma separated terms")));
    };
    Ok((opts.compile(q)?, opts.compile(qp)?))
}

fn cmd_forcing(opts: &Opts, cmd: &ForcingCmd) -> Result<u8> {
    match cmd {
        ForcingCmd::Laws { trials } => {
            let cs = ConditionSystem::from_name(&opts.system).map_err(|e| usage(e.to_string()))?;
            let report = check_closure_laws(&cs, *trials, opts.fuel.unwrap_or(DEFAULT_FORCING_FUEL), opts.seed);
            match opts.format {
                Format::Text => println!("{report}"),
                Format::Json => println!("{}", report.to_json()),
            }
            Ok(if report.violations() == 0 { 0 } else { 1 })
        }
        ForcingCmd::Star { law, trials } => {
            let laws = match law {
                None => StarLaw::ALL.to_vec(),
                Some(name) => vec![StarLaw::from_name(name).ok_or_else(|| usage(format!("unknown law `{name}`")))?],
            };
            let reports: Vec<_> = laws.into_iter().map(|l| verify_star_law(l, *trials, opts.seed)).collect();
            match opts.format {
                Format::Text => {
                    for r in &reports {
                        println!("{}: {}/{} reductions match (max {} steps)", r.law, r.matched, r.cases, r.max_steps);
                        for f in &r.failures {
                            println!("  {f}");
                        }
                    }
                }
                Format::Json => print_json(&json!({"format": 1, "laws": reports})),
            }
            Ok(if reports.iter().all(|r| r.failures.is_empty()) { 0 } else { 1 })
        }
        ForcingCmd::Chi { structure, base_in, base_sub } => {
            let ps = PropStructure::parse(&load(structure)?).map_err(|e| usage(e.to_string()))?;
            let d = BaseTerms::default();
            let base = BaseTerms { on_in: base_pair(opts, base_in, d.on_in)?, on_sub: base_pair(opts, base_sub, d.on_sub)? };
            let (chi, chi_p) = chi_transformers(&ps, &base);
            match opts.format {
                Format::Text => {
                    println!("structure: {ps}");
                    println!("chi:  {chi}");
                    println!("chi': {chi_p}");
                }
                Format::Json => print_json(&json!({
                    "format": 1,
                    "structure": ps.to_string(),
                    "depth": ps.depth(),
                    "chi": chi.to_string(),
                    "chi_prime": chi_p.to_string(),
                })),
            }
            Ok(0)
        }
    }
}

fn cmd_demo(opts: &Opts, name: &Option<String>) -> Result<u8> {
    let Some(name) = name else {
        let mut out = String::new();
        for (n, src, cmd) in DEMOS {
            let first = src.lines().find(|l| l.starts_with('#')).unwrap_or("").trim_start_matches('#').trim();
            let _ = writeln!(out, "{n:<14} {cmd:<8} {first}");
        }
        print!("{out}");
        return Ok(0);
    };
    let (_, src, _) = DEMOS
        .iter()
        .find(|(n, _, _)| n == name)
        .ok_or_else(|| usage(format!("unknown demo `{name}`")))?;
    let program = strip_comments(src);
    if opts.format == Format::Text {
        println!("program: {}", program.trim());
    }
    cmd_extract(opts, &program)
}

fn dispatch(cli: &Cli) -> Result<u8> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Compile { input } => cmd_compile(opts, input),
        Command::Run { input } => cmd_run(opts, input),
        Command::Trace { input } => cmd_trace(opts, input),
        Command::Tree { input } => cmd_tree(opts, input),
        Command::Extract { input } => cmd_extract(opts, input),
        Command::Forcing { cmd } => cmd_forcing(opts, cmd),
        Command::Demo { name } => cmd_demo(opts, name),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // a closed pipe (`rzm tree ... | head`) is not an error worth a backtrace
    let default_hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(move |info| {
        let msg = info.payload().downcast_ref::<String>().map(String::as_str).unwrap_or("");
        if msg.contains("Broken pipe") {
            std::process::exit(141);
        }
        default_hook(info);
    }));
    // terms are trees, and printing or parsing deep ones recurses
    let worker = std::thread::Builder::new().stack_size(512 << 20).spawn(move || dispatch(&cli));
    let result = match worker {
        Ok(handle) => handle.join().unwrap_or_else(|_| Err(anyhow!("internal error"))),
        Err(e) => Err(anyhow!("cannot start worker thread: {e}")),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("rzm: {e:#}");
            let code = e.downcast_ref::<Exit>().map_or(2, |x| x.0);
            ExitCode::from(code)
        }
    }
}
