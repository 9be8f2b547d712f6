use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use asqg::gronwall::{run_problem_trials, run_soundness_campaign, GronwallProblem, GronwallReport};
use asqg::harness::{run_campaign, run_sweep, CaseId, InequalityCase};
use asqg::io::{parse_config, parse_gronwall_config, write_run_output};
use asqg::solver::{check_admissibility, verify_dissipation_relation, InitialCondition, Simulation};

#[derive(Parser)]
#[command(name = "asqg", version, about = "Anisotropic SQG solver and verification harnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation and write its diagnostics stream.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Diagnostics output; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the seed of random initial data.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the final state here.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Evaluate one inequality on random fields and report ratio statistics.
    VerifyInequalities {
        #[arg(long)]
        case: CaseId,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [64, 128])]
        resolutions: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Case parameter override, `name=value`; repeatable.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        /// Draw fresh parameters for every sample instead.
        #[arg(long, conflicts_with = "params")]
        sweep: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build Gronwall certificates and check them against ODE trajectories.
    VerifyGronwall {
        #[arg(long, conflicts_with_all = ["config", "random"])]
        preset: Option<String>,
        #[arg(long, conflicts_with = "random")]
        config: Option<PathBuf>,
        /// One random problem per trial.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check whether (alpha, beta) lies in the global-regularity region.
    Admissible {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
    },
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("`{s}` is not name=value"))?;
    let v = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.to_string(), v))
}

type CliResult = Result<ExitCode, Box<dyn std::error::Error>>;

fn output(path: Option<&Path>) -> std::io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn write_json<T: serde::Serialize>(path: Option<&Path>, value: &T) -> Result<(), Box<dyn std::error::Error>> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn simulate(config: &Path, out: Option<&Path>, seed: Option<u64>, checkpoint: Option<&Path>) -> CliResult {
    let text = std::fs::read_to_string(config)?;
    let mut config = parse_config(&text)?;
    if let (Some(s), InitialCondition::Random { seed, .. }) = (seed, &mut config.initial_condition) {
        *seed = s;
    }
    let sim = Simulation::new(config)?;
    let theta0_l2 = sim.state().theta.l2_norm();
    let run = sim.run()?;
    write_run_output(&mut output(out)?, &run)?;
    if let Some(path) = checkpoint {
        let c = &run.header.config;
        asqg::io::Checkpoint::from_field(&run.final_state.theta, run.final_state.t, c.alpha, c.beta, c.mu, c.nu)?
            .save(path)?;
    }

    let mut ok = true;
    if let Some(b) = &run.blow_up {
        eprintln!("blow-up at t = {}: {}", b.t, b.what);
        ok = false;
    }
    let c = &run.header.config;
    let bad = run
        .records
        .iter()
        .filter(|r| !r.is_finite() || !verify_dissipation_relation(r, theta0_l2, c.alpha, c.beta))
        .count();
    if bad > 0 {
        eprintln!("{bad} records fail the finiteness or dissipation-gradient checks");
        ok = false;
    }
    eprintln!("{} records, label {}", run.records.len(), run.header.label);
    Ok(status(ok))
}

fn verify_inequalities(
    case: CaseId,
    samples: usize,
    resolutions: &[usize],
    seed: u64,
    params: Vec<(String, f64)>,
    sweep: bool,
    out: Option<&Path>,
) -> CliResult {
    let report = if sweep {
        run_sweep(case, samples, resolutions, seed)?
    } else {
        let mut c = InequalityCase::representative(case);
        for (k, v) in params {
            c.params.insert(k, v);
        }
        run_campaign(&c, samples, resolutions, seed)?
    };
    write_json(out, &report)?;
    eprintln!(
        "{case}: max ratio {:.6e}, {} violations ({} hard), stability {:?}",
        report.stats.max,
        report.violations.len(),
        report.hard_violations(),
        report.resolution_stability
    );
    Ok(status(report.passed()))
}

fn summarize(report: &GronwallReport) {
    let checked = report.trials.iter().filter(|t| t.verdict.as_ref().is_some_and(|v| v.hypotheses_ok)).count();
    let failed = report.trials.iter().filter(|t| !t.sound()).count();
    eprintln!(
        "{} trajectories, {checked} satisfy the hypotheses, {failed} unsound or uncertified, min margin {:.3e}",
        report.trials.len(),
        report.min_margin()
    );
    for t in report.trials.iter().filter(|t| !t.sound()) {
        eprintln!("  trial {} ({:?}): {:?}", t.trial, t.mode, t.error.as_ref().or(t.verdict.as_ref().and_then(|v| v.failure.as_ref())));
    }
}

fn verify_gronwall(preset: Option<&str>, config: Option<&Path>, random: bool, trials: usize, seed: u64, out: Option<&Path>) -> CliResult {
    let report = if random {
        run_soundness_campaign(trials, seed)
    } else {
        let problem = match (preset, config) {
            (Some(name), _) => GronwallProblem::preset(name)?,
            (None, Some(path)) => parse_gronwall_config(&std::fs::read_to_string(path)?)?,
            (None, None) => return Err("one of --preset, --config or --random is required".into()),
        };
        run_problem_trials(&problem, trials, seed)
    };
    write_json(out, &report)?;
    summarize(&report);
    Ok(status(report.passed()))
}

fn admissible(alpha: f64, beta: f64) -> CliResult {
    let a = check_admissibility(alpha, beta)?;
    println!("{}", serde_json::to_string(&a)?);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { config, out, seed, checkpoint } => simulate(&config, out.as_deref(), seed, checkpoint.as_deref()),
        Command::VerifyInequalities { case, samples, resolutions, seed, params, sweep, out } => {
            verify_inequalities(case, samples, &resolutions, seed, params, sweep, out.as_deref())
        }
        Command::VerifyGronwall { preset, config, random, trials, seed, out } => {
            verify_gronwall(preset.as_deref(), config.as_deref(), random, trials, seed, out.as_deref())
        }
        Command::Admissible { alpha, beta } => admissible(alpha, beta),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
