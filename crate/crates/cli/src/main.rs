mod config;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cherednik::expr::{parse_element, parse_function, parse_operator};
use cherednik::padic::element_gauge;
use config::RunConfig;
use report::{Recorder, Report};
use suites::describe;

/// Verification suites for rational and twisted Cherednik algebras.
#[derive(Parser)]
#[command(name = "cherednik", version)]
struct Cli {
    /// Run configuration (TOML with flat dotted keys).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the seed from the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Operator expression fed to the pbw suite as a negative test.
    #[arg(long, global = true)]
    inject: Option<String>,
    /// Record wall-clock time per check (makes reports nondeterministic).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List reflections with their eigenvalues and conjugacy classes.
    Reflections,
    /// Run one verification suite.
    Verify { suite: Suite },
    /// Apply an operator to a function.
    Apply { operator: String, function: String },
    /// Gauge valuation of an element at a lattice level.
    Norm {
        element: String,
        #[arg(long)]
        level: Option<u32>,
    },
    /// Reflections plus every suite.
    ReportAll,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Pbw,
    Commute,
    Presentation,
    Tdo,
    Norms,
    Tower,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Pbw => "pbw",
            Suite::Commute => "commute",
            Suite::Presentation => "presentation",
            Suite::Tdo => "tdo",
            Suite::Norms => "norms",
            Suite::Tower => "tower",
        }
    }
}

const ALL_SUITES: [Suite; 6] = [
    Suite::Commute,
    Suite::Pbw,
    Suite::Presentation,
    Suite::Tdo,
    Suite::Norms,
    Suite::Tower,
];

fn run_suite(rec: &mut Recorder, cfg: &RunConfig, suite: Suite, seed: u64, inject: Option<&str>) {
    if let Suite::Tdo = suite {
        suites::tdo(rec, cfg, seed);
        return;
    }
    let alg = match cfg.algebra() {
        Ok(a) => a,
        Err(e) => {
            let err = match e.downcast_ref::<cherednik::Error>() {
                Some(lib) => anyhow!(describe(lib)),
                None => e,
            };
            let name = format!("{}.setup", suite.name());
            rec.check(&name, "the configured algebra exists", || Err(err));
            return;
        }
    };
    match suite {
        Suite::Pbw => suites::pbw(rec, &alg, cfg, seed, inject),
        Suite::Commute => suites::commute(rec, &alg, cfg),
        Suite::Presentation => suites::presentation(rec, &alg, cfg, seed),
        Suite::Norms => suites::norms(rec, &alg, cfg, seed),
        Suite::Tower => suites::tower(rec, &alg, cfg, seed),
        Suite::Tdo => unreachable!(),
    }
}

fn emit(report: &Report, out: Option<&PathBuf>) -> Result<()> {
    let json = report.to_json();
    match out {
        Some(path) => std::fs::write(path, json).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let path = cli.config.as_ref().ok_or_else(|| anyhow!("--config <path> is required"))?;
    let cfg = RunConfig::load(path)?;
    let seed = cli.seed.unwrap_or(cfg.seed);
    let out = cli.out.as_ref().or(cfg.output.as_ref());
    let group_name = cfg.group()?.name().to_string();
    let inject = cli.inject.as_deref();

    let report = match cli.command {
        Command::Apply { operator, function } => {
            let alg = cfg.algebra()?;
            let op = parse_operator(&operator, &alg).map_err(|e| anyhow!("operator: {e}"))?;
            let f = parse_function(&function, &alg).map_err(|e| anyhow!("function: {e}"))?;
            let result = alg.skew().apply_to_function(&op, &f).map_err(|e| anyhow!(describe(&e)))?;
            println!("{result}");
            return Ok(true);
        }
        Command::Norm { element, level } => {
            let alg = cfg.algebra()?;
            let field = cfg.field()?;
            let a = parse_element(&element, &alg).map_err(|e| anyhow!(describe(&e)))?;
            let n = level.unwrap_or(cfg.level.0);
            let g = element_gauge(&field, &a, n).map_err(|e| anyhow!(describe(&e)))?;
            println!("{g}");
            return Ok(true);
        }
        Command::Reflections => {
            let mut rec = Recorder::new(cli.timings);
            let data = suites::reflections(&mut rec, &cfg)?;
            rec.finish("reflections", seed, &group_name, Some(data))
        }
        Command::Verify { suite } => {
            let mut rec = Recorder::new(cli.timings);
            run_suite(&mut rec, &cfg, suite, seed, inject);
            rec.finish(&format!("verify {}", suite.name()), seed, &group_name, None)
        }
        Command::ReportAll => {
            let mut rec = Recorder::new(cli.timings);
            let data = suites::reflections(&mut rec, &cfg)?;
            for suite in ALL_SUITES {
                if matches!(suite, Suite::Norms | Suite::Tower) && cfg.prime.is_none() {
                    let name = format!("{}.field", suite.name());
                    rec.check(&name, "p-adic field specification", || {
                        Ok(report::Outcome::Skip("field.prime not configured".into()))
                    });
                    continue;
                }
                run_suite(&mut rec, &cfg, suite, seed, inject);
            }
            rec.finish("report-all", seed, &group_name, Some(data))
        }
    };
    emit(&report, out)?;
    if !report.passed {
        for e in report.entries.iter().filter(|e| {
            matches!(e.status, report::Status::Fail | report::Status::Error)
        }) {
            eprintln!("{}: {:?}: {}", e.name, e.status, e.witness.as_deref().unwrap_or(""));
        }
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
