use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use aprxlik_core::ising::{Boundary, IsingParams, LatticeSpec, LogZ, ZMethod};
use clap::{Args, Parser, Subcommand};

use crate::{run_experiment, selftest, Experiment, ExperimentConfig, HarnessError, Result};

pub const THREADS_ENV: &str = "APRXLIK_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "aprxlik",
    version,
    about = "Approximate-likelihood inference experiments"
)]
pub struct Cli {
    /// JSON experiment config; unset fields take their defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed, overriding the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for CSV outputs.
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,
    /// Worker threads, overriding APRXLIK_THREADS.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two-level replicate study: twolevel_summary.csv.
    TwolevelFigure,
    /// Inverse decay rate over beta: ising_bbeta.csv.
    IsingBbeta,
    /// Score-error contour over (m, k) with proxy stability.
    IsingContour,
    /// Trapezium remainder decay fits.
    IsingTrapezium,
    /// Print log Z for one lattice.
    Logz(LogzArgs),
    /// Run the oracle-equivalence suite.
    Selftest,
}

#[derive(Debug, Args)]
pub struct LogzArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    /// `free` or `periodic`.
    #[arg(long, default_value = "free")]
    pub boundary: String,
    /// `brute`, `transfer`, `kaufman`, `rda:<k>` or `proxy:<K>`.
    #[arg(long, default_value = "transfer")]
    pub method: String,
}

fn experiment_of(cmd: &Command) -> Option<Experiment> {
    match cmd {
        Command::TwolevelFigure => Some(Experiment::TwolevelFigure),
        Command::IsingBbeta => Some(Experiment::IsingBbeta),
        Command::IsingContour => Some(Experiment::IsingContour),
        Command::IsingTrapezium => Some(Experiment::IsingTrapezium),
        Command::Logz(_) | Command::Selftest => None,
    }
}

fn thread_count(cli: &Cli) -> Result<Option<usize>> {
    let n = match cli.threads {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
                HarnessError::Config(format!("{THREADS_ENV}={v} is not a thread count"))
            })?),
            Err(_) => None,
        },
    };
    if n == Some(0) {
        return Err(HarnessError::Config("thread count must be positive".into()));
    }
    Ok(n)
}

/// Resolve the config for an experiment subcommand.
pub fn resolve_config(cli: &Cli, experiment: Experiment) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let cfg = ExperimentConfig::load(path)?;
            if cfg.experiment != experiment {
                return Err(HarnessError::Config(format!(
                    "config {} is for `{}`, not `{}`",
                    path.display(),
                    cfg.experiment.name(),
                    experiment.name()
                )));
            }
            cfg
        }
        None => ExperimentConfig::for_experiment(experiment),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn logz(args: &LogzArgs, out: &mut impl Write) -> Result<()> {
    let cfg_err = |e: aprxlik_core::Error| HarnessError::Config(e.to_string());
    let boundary: Boundary = args.boundary.parse().map_err(cfg_err)?;
    let method: ZMethod = args.method.parse().map_err(cfg_err)?;
    let lattice = LatticeSpec::new(args.rows, args.cols, boundary).map_err(cfg_err)?;
    let v = LogZ::new(lattice, method)?.eval(IsingParams::new(args.alpha, args.beta))?;
    let _ = writeln!(out, "{v}");
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut (impl Write + Send)) -> Result<()> {
    if let Some(exp) = experiment_of(&cli.command) {
        let cfg = resolve_config(cli, exp)?;
        let outputs = run_experiment(&cfg, &cli.out_dir)?;
        for f in outputs.files {
            let _ = writeln!(out, "wrote {}", f.display());
        }
        return Ok(());
    }
    match &cli.command {
        Command::Logz(args) => logz(args, out),
        Command::Selftest => {
            if selftest::run(out) {
                Ok(())
            } else {
                Err(HarnessError::Numerical("selftest failed".into()))
            }
        }
        _ => unreachable!("experiment commands handled above"),
    }
}

/// Parse `argv`, run the command and return the process exit code.
pub fn run<I, T>(argv: I, out: &mut (impl Write + Send), err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = thread_count(&cli).and_then(|n| match n {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| HarnessError::Config(format!("cannot build thread pool: {e}")))?
            .install(|| dispatch(&cli, out)),
        None => dispatch(&cli, out),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
