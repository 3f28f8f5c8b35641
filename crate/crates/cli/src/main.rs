use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use droppush_core::harness::output::{format_float, render, write_alpha, write_file, write_moments, write_summary};
use droppush_core::harness::verify::{run_suite, REPORT_HEADER};
use droppush_core::harness::{
    parse_n_list, run_experiment_with, run_sweep, Execution, ExperimentConfig, ExperimentResult, Settings, Suite,
    VerifyOptions,
};
use droppush_core::ring::CostMode;
use droppush_core::theory::{borel_pmf, cost_moment, phi, phi_integral, predator_law, xi_moment, Exact, PredatorVariant};
use droppush_core::{Error, Result};

#[derive(Parser)]
#[command(name = "droppush", version, about = "Parking drops on a ring: simulation, theory and verification")]
struct Cli {
    /// `key = value` file with the same keys as the flags; flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker threads for replications; 0 runs sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run replicated trajectories and write the per-replication summary.
    Simulate(SimulateArgs),
    /// Evaluate closed forms.
    Theory {
        #[command(subcommand)]
        what: Theory,
    },
    /// Run verification suites; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Rescaled cost moments across several ring sizes.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    reps: Option<String>,
    /// exact-walk or expected-cost
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Drops per trajectory (default n - 1).
    #[arg(long)]
    m: Option<String>,
    /// `a:b:step` or a comma list.
    #[arg(long)]
    alpha_grid: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Alpha table destination (default: stdout when a grid is given).
    #[arg(long)]
    alpha_out: Option<String>,
    /// Moments table destination.
    #[arg(long)]
    moments_out: Option<String>,
}

#[derive(Subcommand)]
enum Theory {
    /// Concentration curve of C_{n, alpha n} / n.
    Phi {
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Moments of the limit law, orders 1..=K.
    XiMoments {
        #[arg(long)]
        k: Option<String>,
    },
    /// Law of the predator size in the last merge on m sites.
    PredatorLaw {
        #[arg(long)]
        m: Option<String>,
    },
    /// Borel(a) probability of k.
    Borel {
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        k: Option<String>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, a comma list, or `all`.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    max_n: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    n_list: Option<String>,
    #[arg(long)]
    reps: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Default expected-cost.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

fn settings(config: &Option<PathBuf>, flags: &[(&str, &Option<String>)]) -> Result<Settings> {
    let mut settings = match config {
        Some(path) => Settings::load(path)?,
        None => Settings::new(),
    };
    for (key, value) in flags {
        if let Some(v) = value {
            settings.set(key, v.as_str());
        }
    }
    Ok(settings)
}

fn execution(threads: Option<usize>, settings: &Settings) -> Result<Execution> {
    let threads = match threads {
        Some(t) => Some(t),
        None => settings.parsed::<usize>("threads")?,
    };
    Ok(match threads {
        Some(0) => Execution::Sequential,
        Some(t) => Execution::Parallel { threads: Some(t) },
        None => Execution::default(),
    })
}

fn print_aggregates(result: &ExperimentResult) -> Result<()> {
    let mut out = io::stdout().lock();
    for (statistic, est) in result.aggregates()? {
        writeln!(
            out,
            "{} = {} (se {})",
            statistic.name(),
            format_float(est.estimate),
            format_float(est.se)
        )?;
    }
    Ok(())
}

fn simulate(cli: &Cli, args: &SimulateArgs) -> Result<ExitCode> {
    let settings = settings(
        &cli.config,
        &[
            ("n", &args.n),
            ("reps", &args.reps),
            ("mode", &args.mode),
            ("seed", &args.seed),
            ("m", &args.m),
            ("alpha-grid", &args.alpha_grid),
            ("out", &args.out),
            ("alpha-out", &args.alpha_out),
            ("moments-out", &args.moments_out),
        ],
    )?;
    let config = ExperimentConfig::from_settings(&settings)?;
    let out = config
        .out
        .clone()
        .ok_or_else(|| Error::Config("missing required key `out`".into()))?;
    let result = run_experiment_with(&config, execution(cli.threads, &settings)?)?;
    write_file(&out, |w| write_summary(w, &result.replications))?;
    if !config.alpha_grid.is_empty() {
        let rows = result.alpha_rows()?;
        match &config.alpha_out {
            Some(path) => write_file(path, |w| write_alpha(w, &rows))?,
            None => print!("{}", render(|w| write_alpha(w, &rows))?),
        }
    }
    if let Some(path) = &config.moments_out {
        write_file(path, |w| write_moments(w, &result.moment_rows(&[1, 2, 3])?))?;
    }
    print_aggregates(&result)?;
    Ok(ExitCode::SUCCESS)
}

fn theory(cli: &Cli, what: &Theory) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    match what {
        Theory::Phi { alpha } => {
            let s = settings(&cli.config, &[("alpha", alpha)])?;
            let alpha: f64 = s.require("alpha")?;
            let closed = phi(alpha)?;
            let integral = phi_integral(alpha, 0, 1e-12)?;
            writeln!(out, "alpha,phi,integral,error_bound")?;
            writeln!(
                out,
                "{},{},{},{}",
                format_float(alpha),
                format_float(closed),
                format_float(integral.value),
                format_float(integral.error_bound())
            )?;
        }
        Theory::XiMoments { k } => {
            let s = settings(&cli.config, &[("k", k)])?;
            let k: usize = s.require("k")?;
            if k == 0 {
                return Err(Error::Config("k must be at least 1".into()));
            }
            writeln!(out, "k,E_xi_k,E_scaled_cost_k,exact,digits")?;
            for order in 1..=k {
                let xi = xi_moment(order);
                let cost = cost_moment(order);
                let exact = match &xi.exact {
                    Exact::Surd(surd) => surd.to_string(),
                    Exact::Rational(r) => r.to_string(),
                };
                writeln!(
                    out,
                    "{order},{},{},{exact},{}",
                    format_float(xi.approx),
                    format_float(cost.approx),
                    xi.digits
                )?;
            }
        }
        Theory::PredatorLaw { m } => {
            let s = settings(&cli.config, &[("m", m)])?;
            let m: u64 = s.require("m")?;
            if m < 2 {
                return Err(Error::Config(format!("m must be at least 2, got {m}")));
            }
            writeln!(out, "m,k,probability,exact")?;
            for k in 1..m {
                let p = predator_law(m, k, PredatorVariant::Proof)?;
                writeln!(out, "{m},{k},{},{p}", format_float(droppush_core::exact::to_f64(&p)))?;
            }
        }
        Theory::Borel { a, k } => {
            let s = settings(&cli.config, &[("a", a), ("k", k)])?;
            let a: f64 = s.require("a")?;
            let k: u64 = s.require("k")?;
            writeln!(out, "a,k,probability")?;
            writeln!(out, "{},{k},{}", format_float(a), format_float(borel_pmf(a, k)?))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Result<ExitCode> {
    let s = settings(
        &cli.config,
        &[("suite", &args.suite), ("max-n", &args.max_n), ("seed", &args.seed)],
    )?;
    let spec: String = s.require("suite")?;
    let suites: Vec<Suite> = if spec == "all" {
        Suite::ALL.to_vec()
    } else {
        spec.split(',').map(|name| name.trim().parse()).collect::<Result<_>>()?
    };
    let mut options = VerifyOptions {
        execution: execution(cli.threads, &s)?,
        ..VerifyOptions::default()
    };
    if let Some(max_n) = s.parsed("max-n")? {
        options.max_n = max_n;
    }
    if let Some(seed) = s.parsed("seed")? {
        options.seed = seed;
    }
    let mut out = io::stdout().lock();
    let mut all_passed = true;
    for (i, suite) in suites.into_iter().enumerate() {
        let report = run_suite(suite, &options)?;
        if i == 0 {
            writeln!(out, "{REPORT_HEADER}")?;
        }
        all_passed &= report.passed();
        out.write_all(report.to_csv().as_bytes())?;
        out.flush()?;
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn sweep(cli: &Cli, args: &SweepArgs) -> Result<ExitCode> {
    let s = settings(
        &cli.config,
        &[
            ("n-list", &args.n_list),
            ("reps", &args.reps),
            ("seed", &args.seed),
            ("mode", &args.mode),
            ("out", &args.out),
        ],
    )?;
    let n_list = parse_n_list(&s.require::<String>("n-list")?)?;
    let reps: usize = s.require("reps")?;
    if reps < 2 {
        return Err(Error::Config("reps must be at least 2 for moment estimates".into()));
    }
    let seed: u64 = s.require("seed")?;
    let mode: CostMode = s.parsed("mode")?.unwrap_or(CostMode::ExpectedCost);
    let out = PathBuf::from(s.require::<String>("out")?);
    let results = run_sweep(&n_list, reps, mode, seed, execution(cli.threads, &s)?)?;
    let mut rows = Vec::new();
    for result in &results {
        rows.extend(result.moment_rows(&[1, 2, 3])?);
    }
    write_file(&out, |w| write_moments(w, &rows))?;
    print!("{}", render(|w| write_moments(w, &rows))?);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Simulate(args) => simulate(&cli, args),
        Command::Theory { what } => theory(&cli, what),
        Command::Verify(args) => verify(&cli, args),
        Command::Sweep(args) => sweep(&cli, args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("droppush: {err}");
            ExitCode::from(2)
        }
    }
}
