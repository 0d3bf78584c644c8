//! `tamekey <subcommand> --scenario <path> [--seed N] [--max-steps N] [--precision N] [--json-out <path>]`
//!
//! Exit codes: 0 success, 2 assertion failure, 1 input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use tamekey::cli::{builtin_corpus, run_scenario, verify_suite, Overrides, Report, Scenario, Subcommand};

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Command {
    Roots,
    Delta,
    Kras,
    Keyseq,
    Keypolys,
    Icf,
    Classify,
    VerifySuite,
}

impl Command {
    fn subcommand(self) -> Subcommand {
        match self {
            Command::Roots => Subcommand::Roots,
            Command::Delta => Subcommand::Delta,
            Command::Kras => Subcommand::Kras,
            Command::Keyseq => Subcommand::Keyseq,
            Command::Keypolys => Subcommand::Keypolys,
            Command::Icf => Subcommand::Icf,
            Command::Classify => Subcommand::Classify,
            Command::VerifySuite => Subcommand::VerifySuite,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "tamekey", about = "Key polynomials over k((t)) with exact Puiseux arithmetic")]
struct Args {
    command: Command,
    /// Scenario file. For verify_suite: a scenario file or a directory of
    /// them; the built-in corpus when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_steps: Option<usize>,
    #[arg(long)]
    precision: Option<i64>,
    /// Also write the report here.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

fn load_corpus(path: Option<&PathBuf>) -> tamekey::Result<Vec<Scenario>> {
    let Some(path) = path else { return builtin_corpus() };
    if !path.is_dir() {
        return Ok(vec![Scenario::load(path)?]);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(path)
        .map_err(|e| tamekey::Error::Scenario(format!("cannot read {}: {e}", path.display())))?
        .filter_map(|d| d.ok().map(|d| d.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(tamekey::Error::Scenario(format!("no .toml scenarios in {}", path.display())));
    }
    files
        .iter()
        .map(|f| Scenario::load(f).map_err(|e| tamekey::Error::Scenario(format!("{}: {e}", f.display()))))
        .collect()
}

fn run(args: &Args) -> tamekey::Result<Report> {
    let overrides = Overrides { seed: args.seed, max_steps: args.max_steps, precision: args.precision };
    match args.command.subcommand() {
        Subcommand::VerifySuite => verify_suite(&load_corpus(args.scenario.as_ref())?, &overrides),
        sub => {
            let path = args.scenario.as_ref().ok_or_else(|| tamekey::Error::Scenario("--scenario is required".into()))?;
            let mut sc = Scenario::load(path)?;
            overrides.apply(&mut sc)?;
            run_scenario(&sc, sub)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let report = match run(&args) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("tamekey: {e}");
            return ExitCode::from(1);
        }
    };
    let text = report.render();
    print!("{text}");
    if let Some(out) = &args.json_out {
        if let Err(e) = std::fs::write(out, &text) {
            eprintln!("tamekey: cannot write {}: {e}", out.display());
            return ExitCode::from(1);
        }
    }
    for a in report.failures() {
        eprintln!("FAIL {}: {}", a.id, a.witness.as_deref().unwrap_or(""));
    }
    if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
