//! `sdepth`: compute Stanley depths, compare them with closed forms, and dump
//! characteristic posets.
//!
//! Exit codes: 0 success, 1 a computed value disagrees with its closed form,
//! 2 bad usage or input, 3 a size or time budget was exceeded.

mod instance;

use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use sdepth_core::{validate_certificate, BoundVector, CharPoset, Error, Mode, MonomialIdeal, Solver, SolverConfig};
use serde::Serialize;

use instance::{cited_depth_bound, default_mode, family_ideal, formula, FamilyArg, Instance, InstanceArgs};

#[derive(Debug, Parser)]
#[command(
    name = "sdepth",
    version,
    about = "Exact Stanley depth of monomial ideals and their quotients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the Stanley depth of one instance and print a JSON report
    Compute(ComputeArgs),
    /// Compare solver and closed form over a grid; prints CSV
    Verify(VerifyArgs),
    /// Print the characteristic poset of an instance
    DumpPoset(InstanceArgs),
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Worker threads for the search; 1 keeps certificates reproducible
    #[arg(long, default_value_t = 1)]
    threads: usize,

    /// Time budget per instance, in milliseconds
    #[arg(long, value_name = "MS")]
    time_budget_ms: Option<u64>,

    /// Report wall times as 0 so output is byte-stable
    #[arg(long)]
    no_timing: bool,
}

impl SearchArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            threads: self.threads.max(1),
            deadline: self.time_budget_ms.map(|ms| Instant::now() + Duration::from_millis(ms)),
            ..SolverConfig::default()
        }
    }

    fn millis(&self, elapsed: Duration) -> u64 {
        if self.no_timing {
            0
        } else {
            elapsed.as_millis() as u64
        }
    }
}

#[derive(Debug, Args)]
struct ComputeArgs {
    #[command(flatten)]
    instance: InstanceArgs,

    #[command(flatten)]
    search: SearchArgs,

    /// Write the partition certificate as JSON to this path
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Print a human-readable table instead of JSON
    #[arg(long)]
    pretty: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Ideal family to check
    #[arg(long)]
    family: FamilyArg,

    /// Range of n, as `a..b` (inclusive) or a single value
    #[arg(long, value_parser = parse_range)]
    n: RangeInclusive<usize>,

    /// Range of t, as `a..b` (inclusive) or a single value
    #[arg(long, value_parser = parse_range, default_value = "1")]
    t: RangeInclusive<usize>,

    #[command(flatten)]
    search: SearchArgs,
}

fn parse_range(text: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected `a..b` or a single integer, got {text:?}");
    match text.split_once("..") {
        Some((a, b)) => {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(format!("empty range {text:?}"));
            }
            Ok(a..=b)
        }
        None => {
            let a: usize = text.trim().parse().map_err(|_| bad())?;
            Ok(a..=a)
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_resource() { 3 } else { 2 };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Serialize)]
struct RunReport {
    instance: Instance,
    computed_sdepth: usize,
    formula_sdepth: Option<u32>,
    #[serde(rename = "match")]
    matches: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cited_depth_bound: Option<u32>,
    certificate_valid: bool,
    wall_time_ms: u64,
    node_count: u64,
    threads: usize,
}

fn compute(args: &ComputeArgs) -> Result<ExitCode, CliError> {
    let instance = args.instance.resolve()?;
    let poset = instance.poset()?;
    let start = Instant::now();
    let solution = Solver::new(&poset, args.search.config()).sdepth()?;
    let elapsed = start.elapsed();
    let valid = validate_certificate(&poset, &solution.certificate).is_valid();
    let (formula_sdepth, cited) = match instance.family {
        Some(family) => (
            formula(family, instance.n, instance.t, instance.mode())?,
            cited_depth_bound(family, instance.n, instance.t, instance.mode())?,
        ),
        None => (None, None),
    };
    if let Some(path) = &args.out {
        fs::write(path, solution.certificate.to_json() + "\n")
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let report = RunReport {
        computed_sdepth: solution.sdepth,
        formula_sdepth,
        matches: formula_sdepth.map(|f| f as usize == solution.sdepth),
        cited_depth_bound: cited,
        certificate_valid: valid,
        wall_time_ms: args.search.millis(elapsed),
        node_count: solution.nodes,
        threads: args.search.threads.max(1),
        instance,
    };
    if args.pretty {
        print!("{}", pretty(&report));
    } else {
        println!("{}", serde_json::to_string(&report).expect("reports serialize"));
    }
    Ok(ExitCode::SUCCESS)
}

fn pretty(r: &RunReport) -> String {
    let i = &r.instance;
    let source = match (&i.family, &i.file) {
        (Some(f), _) => serde_json::to_value(f)
            .expect("families serialize")
            .as_str()
            .unwrap_or_default()
            .to_string(),
        (None, Some(file)) => file.clone(),
        (None, None) => String::new(),
    };
    let opt = |v: Option<u32>| v.map_or("-".to_string(), |v| v.to_string());
    let g: Vec<String> = i.g.iter().map(u32::to_string).collect();
    let mut out = String::new();
    out += &format!("{:<18}{source}\n", "instance");
    out += &format!("{:<18}{}\n", "n", i.n);
    out += &format!("{:<18}{}\n", "t", opt(i.t));
    out += &format!("{:<18}{}\n", "g", g.join(","));
    out += &format!("{:<18}{}\n", "mode", i.mode);
    out += &format!("{:<18}{}\n", "computed sdepth", r.computed_sdepth);
    out += &format!("{:<18}{}\n", "formula sdepth", opt(r.formula_sdepth));
    out += &format!(
        "{:<18}{}\n",
        "match",
        r.matches.map_or("-".to_string(), |m| m.to_string())
    );
    if let Some(bound) = r.cited_depth_bound {
        out += &format!("{:<18}{bound} (cited depth bound)\n", "depth >=");
    }
    out += &format!(
        "{:<18}{}\n",
        "certificate",
        if r.certificate_valid { "valid" } else { "INVALID" }
    );
    out += &format!("{:<18}{}\n", "wall time (ms)", r.wall_time_ms);
    out += &format!("{:<18}{}\n", "nodes", r.node_count);
    out += &format!("{:<18}{}\n", "threads", r.threads);
    out
}

fn verify(args: &VerifyArgs) -> Result<ExitCode, CliError> {
    let ts: Vec<u32> = match args.family {
        FamilyArg::Path if args.t != (1..=1) => {
            return Err(CliError::usage(
                "--family path checks t = 1 only; use path-power for other t",
            ))
        }
        FamilyArg::Maximal if args.t != (1..=1) => {
            return Err(CliError::usage("--t does not apply to the maximal family"))
        }
        FamilyArg::PathPower => args.t.clone().map(|t| t as u32).collect(),
        _ => vec![1],
    };
    let mode = default_mode(Some(args.family));
    let volume_limit = instance::volume_limit()?;
    let mut mismatch = false;
    println!("n,t,formula,solver,match,ms,nodes");
    for n in args.n.clone() {
        for &t in &ts {
            let t_arg = (args.family != FamilyArg::Maximal).then_some(t);
            let expected = formula(args.family, n, t_arg, mode)?.expect("family formulas apply in their default mode");
            let (ideal, _) = family_ideal(args.family, n, t_arg)?;
            let start = Instant::now();
            let (outcome, nodes) = verify_row(&ideal, mode, volume_limit, &args.search);
            let ms = args.search.millis(start.elapsed());
            match outcome {
                Ok((valid, computed)) => {
                    let ok = valid && computed == expected as usize;
                    mismatch |= !ok;
                    println!("{n},{t},{expected},{computed},{ok},{ms},{nodes}");
                }
                Err(e) if e.is_resource() => println!("{n},{t},{expected},skipped,skipped,{ms},{nodes}"),
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(if mismatch { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

/// Solves one grid instance; returns (certificate valid, value) and the nodes spent.
fn verify_row(
    ideal: &MonomialIdeal,
    mode: Mode,
    volume_limit: u64,
    search: &SearchArgs,
) -> (Result<(bool, usize), Error>, u64) {
    let poset = match BoundVector::default_for(ideal).and_then(|g| CharPoset::build(ideal, &g, mode, volume_limit)) {
        Ok(poset) => poset,
        Err(e) => return (Err(e), 0),
    };
    let solver = Solver::new(&poset, search.config());
    let outcome = solver
        .sdepth()
        .map(|s| (validate_certificate(&poset, &s.certificate).is_valid(), s.sdepth));
    (outcome, solver.nodes())
}

fn dump_poset(args: &InstanceArgs) -> Result<ExitCode, CliError> {
    let instance = args.resolve()?;
    print!("{}", instance.poset()?.dump());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(args) => compute(args),
        Command::Verify(args) => verify(args),
        Command::DumpPoset(args) => dump_poset(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
