//! Command-line front end: run scenario files, generate random scenarios,
//! and run the acceptance suite.
//!
//! Exit status is 0 when every enabled check passes, 1 on a verification
//! failure and 2 on unreadable or invalid input.

pub mod generate;
pub mod report;
pub mod run;
pub mod scenario;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use generate::{generate_instance, Bounds};
pub use report::{Report, Status, Verdict};
pub use run::{run_scenario, RunOptions, DEFAULT_BUDGET};
pub use scenario::{InputError, Scenario};

use crate::suite::{run_suite, SuiteConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "rigidform", version, about = "Finite models of Tate cohomology and rigid inner form constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Seed for randomized checks and generation.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Largest group enumerated by brute-force checks.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Stop at the first failing operation or criterion.
    #[arg(long, global = true)]
    fail_fast: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario file, or a bundled scenario with `--bundled`.
    Run {
        /// Scenario in TOML.
        path: Option<PathBuf>,
        /// Name of a scenario shipped with the binary, e.g. `c2-sign-torus`.
        #[arg(long, conflicts_with = "path")]
        bundled: Option<String>,
        /// Include per-operation timings (the report is then no longer reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Print a random scenario.
    Generate {
        #[arg(long, default_value_t = Bounds::default().max_order)]
        max_order: usize,
        #[arg(long, default_value_t = Bounds::default().max_rank)]
        max_rank: usize,
        #[arg(long, default_value_t = Bounds::default().max_places)]
        max_places: usize,
        #[arg(long, default_value_t = Bounds::default().max_modulus)]
        max_modulus: u64,
        /// Emit a place system that violates condition (4).
        #[arg(long)]
        negative_control: bool,
    },
    /// Run the acceptance suite.
    Suite,
}

#[derive(Serialize)]
struct SuiteReport {
    seed: String,
    budget: String,
    passed: bool,
    criteria: Vec<CriterionLine>,
}

#[derive(Serialize)]
struct CriterionLine {
    id: u8,
    title: String,
    status: Status,
    instances: String,
    required: String,
    detail: String,
}

fn emit(text: &str, path: Option<&PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), i32> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| {
            let _ = writeln!(err, "error: cannot write {}: {e}", p.display());
            EXIT_INPUT
        }),
        None => {
            let _ = write!(out, "{text}");
            Ok(())
        }
    }
}

fn input_error(err: &mut dyn Write, e: impl std::fmt::Display) -> i32 {
    let _ = writeln!(err, "error: {e}");
    EXIT_INPUT
}

/// Parse `args` (including the program name) and run; returns the exit status.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let c = &cli.common;
    match cli.command {
        Command::Run { path, bundled, timing } => {
            let scenario = match (path, bundled) {
                (Some(p), None) => {
                    let text = match std::fs::read_to_string(&p) {
                        Ok(t) => t,
                        Err(e) => return input_error(err, format!("cannot read {}: {e}", p.display())),
                    };
                    match Scenario::parse(&text) {
                        Ok(s) => s,
                        Err(e) => return input_error(err, format!("{}: {e}", p.display())),
                    }
                }
                (None, Some(name)) => match scenario::bundled(&name) {
                    Some(s) => s,
                    None => return input_error(err, format!("no bundled scenario named '{name}'")),
                },
                _ => return input_error(err, "give a scenario path or --bundled <name>"),
            };
            let opts = RunOptions { seed: c.seed, budget: c.budget, fail_fast: c.fail_fast, timing };
            let report = match run_scenario(&scenario, &opts) {
                Ok(r) => r,
                Err(e) => return input_error(err, e),
            };
            if let Err(code) = emit(&report.to_toml(), c.report.as_ref(), out, err) {
                return code;
            }
            if c.report.is_some() {
                let verdict = if report.passed { "pass" } else { "fail" };
                let _ = writeln!(out, "{}: {verdict} ({} operations)", report.scenario, report.results.len());
            }
            if report.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Command::Generate { max_order, max_rank, max_places, max_modulus, negative_control } => {
            let bounds = Bounds { max_order, max_rank, max_places, max_modulus, negative_control };
            match generate_instance(c.seed, &bounds) {
                Ok(s) => emit(&s.to_toml(), c.report.as_ref(), out, err).err().unwrap_or(EXIT_PASS),
                Err(e) => input_error(err, e),
            }
        }
        Command::Suite => {
            let cfg = SuiteConfig { seed: c.seed, budget: c.budget.unwrap_or(DEFAULT_BUDGET), fail_fast: c.fail_fast };
            let results = run_suite(&cfg);
            for r in &results {
                let _ = writeln!(out, "{r}");
            }
            let passed = results.len() == crate::suite::CRITERIA.len() && results.iter().all(|r| r.passed);
            if let Some(path) = &c.report {
                let report = SuiteReport {
                    seed: cfg.seed.to_string(),
                    budget: cfg.budget.to_string(),
                    passed,
                    criteria: results
                        .iter()
                        .map(|r| CriterionLine {
                            id: r.id,
                            title: r.title.clone(),
                            status: if r.passed { Status::Pass } else { Status::Fail },
                            instances: r.instances.to_string(),
                            required: r.required.to_string(),
                            detail: r.detail.clone(),
                        })
                        .collect(),
                };
                let text = toml::to_string(&report).expect("suite reports serialize");
                if let Err(code) = emit(&text, Some(path), out, err) {
                    return code;
                }
            }
            if passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
    }
}
