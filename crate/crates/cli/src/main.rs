//! `seqprod`: compute sequential products and run the verification suite from the shell.

mod demo;
mod load;
mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use seqprod::io::{to_json, to_json_pretty, ObservableDoc, OperatorDoc};
use seqprod::{
    conditioned_observable, explore_conjecture1, is_repeatable, measured_observable, registry, run_suite,
    seq_product_effects, seq_product_observables, FiniteObservable, Matrix, Tolerance, TrialConfig,
};

#[derive(Parser)]
#[command(
    name = "seqprod",
    version,
    about = "Sequential products of quantum operations and instruments"
)]
struct Cli {
    /// Numerical tolerance for every comparison.
    #[arg(long, global = true, env = "SEQPROD_EPS")]
    eps: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a construction on JSON inputs.
    #[command(subcommand)]
    Compute(Compute),
    /// Test a property of a JSON input; exits 1 when it does not hold.
    #[command(subcommand)]
    Check(Check),
    /// Run the randomized identity suite.
    Verify(VerifyArgs),
    /// Exploratory searches with no pass/fail verdict.
    #[command(subcommand)]
    Explore(Explore),
    /// Print a qubit walkthrough.
    Demo {
        #[arg(value_enum)]
        which: DemoKind,
    },
}

#[derive(Args)]
struct Emit {
    /// Print the canonical JSON document instead of the readable form.
    #[arg(long)]
    json: bool,
    /// Also write the JSON document to this file.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Compute {
    /// J*(b), the sequential product of Ĵ then b.
    SeqEffect {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        effect: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
    /// A[I]B, the observable with effects I_x*(B_y).
    SeqObs {
        #[arg(long)]
        instrument: PathBuf,
        #[arg(long)]
        observable: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
    /// (B|I), the observable with effects Ī*(B_y).
    ConditionedObs {
        #[arg(long)]
        instrument: PathBuf,
        #[arg(long)]
        observable: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
    /// Î, the observable measured by an instrument.
    Measured {
        #[arg(long)]
        instrument: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
    /// J*(a) for an arbitrary operator a.
    Dual {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
}

#[derive(Subcommand)]
enum Check {
    /// Whether I_x*(Î_x) = Î_x for every outcome, cross-checked on the off-diagonal terms.
    Repeatable {
        #[arg(long)]
        instrument: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Whether the operation preserves trace.
    Channel {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated ids or family prefixes, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    theorems: Vec<String>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Write the JSON report to this file.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Print the JSON report instead of one line per check.
    #[arg(long)]
    json: bool,
    /// List the registered ids and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Subcommand)]
enum Explore {
    /// Search for commutation witnesses of a with b + c given witnesses for (a, b) and (a, c).
    Conjecture1 {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 200)]
        samples: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoKind {
    Luders,
    Holevo,
}

fn emit<T: Serialize>(doc: &T, readable: String, e: &Emit) -> Result<()> {
    if let Some(path) = &e.output {
        write(path, &to_json(doc))?;
    }
    if e.json {
        println!("{}", to_json(doc));
    } else {
        print!("{readable}");
    }
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, format!("{text}\n")).with_context(|| format!("cannot write {}", path.display()))
}

fn emit_observable(a: &FiniteObservable, e: &Emit) -> Result<()> {
    emit(&ObservableDoc::from_observable(a), render::observable(a), e)
}

fn compute(c: &Compute, tol: Tolerance) -> Result<bool> {
    match c {
        Compute::SeqEffect { op, effect, emit: e } => {
            let j = load::operation(op, tol)?;
            let b = load::effect(effect, tol)?;
            let out = seq_product_effects(&j, &b)?;
            emit(&OperatorDoc::from_effect(&out), render::matrix(out.matrix(), 0), e)?;
        }
        Compute::SeqObs {
            instrument,
            observable,
            emit: e,
        } => {
            let i = load::instrument(instrument, tol)?;
            let b = load::observable(observable, tol)?;
            emit_observable(&seq_product_observables(&i, &b)?, e)?;
        }
        Compute::ConditionedObs {
            instrument,
            observable,
            emit: e,
        } => {
            let i = load::instrument(instrument, tol)?;
            let b = load::observable(observable, tol)?;
            emit_observable(&conditioned_observable(&b, &i)?, e)?;
        }
        Compute::Measured { instrument, emit: e } => {
            let i = load::instrument(instrument, tol)?;
            emit_observable(&measured_observable(&i), e)?;
        }
        Compute::Dual { op, matrix, emit: e } => {
            let j = load::operation(op, tol)?;
            let a = load::matrix(matrix)?;
            let out: Matrix = j.apply_dual(&a)?;
            emit(&out, render::matrix(&out, 0), e)?;
        }
    }
    Ok(true)
}

fn check(c: &Check, tol: Tolerance) -> Result<bool> {
    match c {
        Check::Repeatable { instrument, json } => {
            let i = load::instrument(instrument, tol)?;
            let rc = is_repeatable(&i, tol);
            if *json {
                println!(
                    "{}",
                    to_json_pretty(&json!({ "repeatable": rc.repeatable(), "agree": rc.agree(), "check": rc }))
                );
            } else {
                let form = |holds: bool| if holds { "holds" } else { "fails" };
                println!("repeatable: {}", rc.repeatable());
                println!(
                    "fixed-point form I_x*(Î_x) = Î_x: {} (residual {})",
                    form(rc.fixed_point_holds),
                    render::num(rc.fixed_point_residual)
                );
                println!(
                    "cross-term form I_x*(Î_y) = 0 for x ≠ y: {} (residual {})",
                    form(rc.cross_terms_vanish),
                    render::num(rc.cross_term_residual)
                );
                println!("forms agree: {}", rc.agree());
            }
            Ok(rc.repeatable())
        }
        Check::Channel { op, json } => {
            let j = load::operation(op, tol)?;
            let defect = j.measured_effect().matrix().max_abs_diff(&Matrix::identity(j.dim()));
            let channel = j.is_channel(tol);
            if *json {
                println!(
                    "{}",
                    to_json_pretty(&json!({ "channel": channel, "trace_defect": defect }))
                );
            } else {
                println!("channel: {channel}");
                println!("max |J*(I) - I|: {}", render::num(defect));
            }
            Ok(channel)
        }
    }
}

fn verify(v: &VerifyArgs, eps: f64) -> Result<bool> {
    if v.list {
        for c in registry() {
            println!("{:<8} {}", c.id, c.description);
        }
        return Ok(true);
    }
    let cfg = TrialConfig {
        dim: v.dim,
        trials: v.trials,
        seed: v.seed,
        eps,
        theorem_ids: v.theorems.clone(),
    };
    let report = run_suite(&cfg)?;
    if let Some(path) = &v.output {
        write(path, &report.to_json())?;
    }
    if v.json {
        println!("{}", report.to_json());
    } else {
        println!(
            "dim {}, {} trials, seed {}, eps {}",
            cfg.dim,
            cfg.trials,
            cfg.seed,
            render::num(cfg.eps)
        );
        for r in &report.results {
            let status = if r.pass { "PASS" } else { "FAIL" };
            print!("{status} {:<8} max residual {:<18}", r.id, render::num(r.max_residual));
            if r.pass {
                println!(" {}", r.description);
            } else {
                println!(" worst trial {} (seed {})", r.worst_trial, r.trial_seed);
            }
        }
        let s = &report.summary;
        println!("{} of {} checks passed", s.passed, s.checks);
    }
    Ok(report.all_pass())
}

fn run(cli: Cli) -> Result<bool> {
    let eps = cli.eps.unwrap_or(Tolerance::DEFAULT_EPS);
    let tol = Tolerance::new(eps)?;
    match &cli.command {
        Command::Compute(c) => compute(c, tol),
        Command::Check(c) => check(c, tol),
        Command::Verify(v) => verify(v, eps),
        Command::Explore(Explore::Conjecture1 {
            dim,
            samples,
            seed,
            json,
        }) => {
            let report = explore_conjecture1(&TrialConfig::new(*dim, *samples, *seed).with_eps(eps))?;
            if *json {
                println!("{}", to_json_pretty(&report));
            } else {
                println!("dim {}, {} samples, seed {}", report.dim, report.samples, report.seed);
                for f in &report.families {
                    println!(
                        "{:<8} hypothesis witnessed {:>5}, conclusion witnessed {:>5}",
                        f.family, f.hypothesis_witnessed, f.conclusion_witnessed
                    );
                }
                println!("{}", report.note);
            }
            Ok(true)
        }
        Command::Demo { which } => {
            let text = match which {
                DemoKind::Luders => demo::luders_walkthrough(tol)?,
                DemoKind::Holevo => demo::holevo_walkthrough(tol)?,
            };
            print!("{text}");
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            match e.chain().find_map(|c| c.downcast_ref::<seqprod::Error>()) {
                Some(inner) => eprintln!("error: invariant `{}` violated: {e:#}", inner.invariant()),
                None => eprintln!("error: {e:#}"),
            }
            ExitCode::from(2)
        }
    }
}
