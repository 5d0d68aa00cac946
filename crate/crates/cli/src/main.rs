use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use submod_cli::commands::certify::{self, CertifySettings};
use submod_cli::commands::denoise::{self, DenoiseSettings};
use submod_cli::commands::minimize::{self, MinimizeSettings};
use submod_cli::commands::sweep::{self, SweepSettings};
use submod_cli::commands::SolverKind;
use submod_cli::config::FileConfig;
use submod_cli::error::{CliError, CliResult};

const EXIT_HELP: &str = "EXIT CODES:
  0   success (certified gap at or below the tolerance)
  2   finished without certifying the requested gap (iteration or evaluation budget)
  64  usage or configuration error (no outputs written)
  65  input data shape error
  70  oracle or solver failure
  74  i/o error

Settings resolve as: command-line flag, then --config file (key = value
lines), then the SUBMOD_OUT environment variable for the output directory,
then built-in defaults.";

#[derive(Parser)]
#[command(
    name = "submod",
    version,
    about = "Submodular minimization on products of ordered sets by convex relaxation",
    after_help = EXIT_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Flat key = value config file; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (SUBMOD_OUT supplies the default).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for every random choice in the run.
    #[arg(long)]
    seed: Option<u64>,
    /// Iteration cap per solver.
    #[arg(long)]
    iters: Option<usize>,
    /// Certified-gap tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct InstanceArgs {
    /// Example name: modular, figure1, coupling, meanfield, lovasz-ext,
    /// multilinear-ext.
    #[arg(long)]
    example: Option<String>,
    /// Number of variables (where the example is sized by n).
    #[arg(long)]
    n: Option<usize>,
    /// Grid points per variable.
    #[arg(long)]
    k: Option<usize>,
    /// Coupling or cut weight for examples that take one.
    #[arg(long)]
    weight: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize a registry example with certified duality gaps.
    Minimize {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        instance: InstanceArgs,
        /// Solvers to run (comma separated).
        #[arg(long, value_delimiter = ',')]
        solver: Vec<SolverKind>,
    },
    /// One-dimensional signal denoising experiment.
    Denoise {
        #[command(flatten)]
        common: CommonArgs,
        /// Signal length.
        #[arg(long)]
        n: Option<usize>,
        /// Grid points per variable.
        #[arg(long)]
        k: Option<usize>,
        /// Sparsity exponent of the |x|^alpha prior.
        #[arg(long)]
        alpha: Option<f64>,
        /// Sparsity weight.
        #[arg(long)]
        lambda: Option<f64>,
        /// Smoothness weight.
        #[arg(long)]
        mu: Option<f64>,
        /// Noise standard deviation.
        #[arg(long)]
        sigma: Option<f64>,
        /// Solvers to run (comma separated); default runs all three.
        #[arg(long, value_delimiter = ',')]
        solver: Vec<SolverKind>,
    },
    /// Certify a primal/dual pair loaded from files.
    Certify {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        instance: InstanceArgs,
        /// Primal rho file (block,index,value).
        #[arg(long)]
        rho: PathBuf,
        /// Dual w file (block,index,value).
        #[arg(long)]
        w: PathBuf,
    },
    /// Parametric threshold sweep of regularized minimizations.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        instance: InstanceArgs,
        /// Inner minimization method; exhaustive enumeration when omitted.
        #[arg(long)]
        solver: Option<SolverKind>,
        #[arg(long, allow_negative_numbers = true)]
        tmin: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        tmax: Option<f64>,
        #[arg(long)]
        tcount: Option<usize>,
    },
}

fn load_config(common: &CommonArgs) -> CliResult<FileConfig> {
    match &common.config {
        Some(path) => FileConfig::load(path),
        None => Ok(FileConfig::default()),
    }
}

fn resolve_out(flag: Option<PathBuf>, cfg: &FileConfig) -> PathBuf {
    flag.or_else(|| cfg.raw("out").map(PathBuf::from))
        .or_else(|| std::env::var_os("SUBMOD_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("runs"))
}

fn resolve_solvers(
    flag: &[SolverKind],
    cfg: &FileConfig,
    default: Vec<SolverKind>,
) -> CliResult<Vec<SolverKind>> {
    if !flag.is_empty() {
        return Ok(flag.to_vec());
    }
    match cfg.raw("solver") {
        Some(text) => text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<SolverKind>()
                    .map_err(CliError::Usage)
            })
            .collect(),
        None => Ok(default),
    }
}

fn dispatch(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Minimize {
            common,
            instance,
            solver,
        } => {
            let cfg = load_config(&common)?;
            let settings = MinimizeSettings {
                example: cfg
                    .pick(instance.example, "example", "figure1".to_string())?,
                n: cfg.pick(instance.n, "n", 2)?,
                k: cfg.pick(instance.k, "k", 21)?,
                weight: cfg.pick(instance.weight, "weight", 1.0)?,
                solvers: resolve_solvers(&solver, &cfg, vec![SolverKind::Subgrad])?,
                iters: cfg.pick(common.iters, "iters", 1000)?,
                tol: cfg.pick(common.tol, "tol", 1e-6)?,
                seed: cfg.pick(common.seed, "seed", 0)?,
                out: resolve_out(common.out, &cfg),
            };
            minimize::run(&settings)
        }
        Command::Denoise {
            common,
            n,
            k,
            alpha,
            lambda,
            mu,
            sigma,
            solver,
        } => {
            let cfg = load_config(&common)?;
            let defaults = DenoiseSettings::default();
            let settings = DenoiseSettings {
                n: cfg.pick(n, "n", defaults.n)?,
                k: cfg.pick(k, "k", defaults.k)?,
                alpha: cfg.pick(alpha, "alpha", defaults.alpha)?,
                lambda: cfg.pick(lambda, "lambda", defaults.lambda)?,
                mu: cfg.pick(mu, "mu", defaults.mu)?,
                sigma: cfg.pick(sigma, "sigma", defaults.sigma)?,
                solvers: resolve_solvers(&solver, &cfg, defaults.solvers.clone())?,
                iters: cfg.pick(common.iters, "iters", defaults.iters)?,
                tol: cfg.pick(common.tol, "tol", defaults.tol)?,
                seed: cfg.pick(common.seed, "seed", defaults.seed)?,
                out: resolve_out(common.out, &cfg),
            };
            denoise::run(&settings).map(|outcome| outcome.exit)
        }
        Command::Certify {
            common,
            instance,
            rho,
            w,
        } => {
            let cfg = load_config(&common)?;
            let settings = CertifySettings {
                example: cfg
                    .pick(instance.example, "example", "figure1".to_string())?,
                n: cfg.pick(instance.n, "n", 2)?,
                k: cfg.pick(instance.k, "k", 21)?,
                weight: cfg.pick(instance.weight, "weight", 1.0)?,
                rho_path: rho,
                w_path: w,
                tol: cfg.pick(common.tol, "tol", 1e-6)?,
                out: resolve_out(common.out, &cfg),
            };
            certify::run(&settings)
        }
        Command::Sweep {
            common,
            instance,
            solver,
            tmin,
            tmax,
            tcount,
        } => {
            let cfg = load_config(&common)?;
            let settings = SweepSettings {
                example: cfg
                    .pick(instance.example, "example", "figure1".to_string())?,
                n: cfg.pick(instance.n, "n", 2)?,
                k: cfg.pick(instance.k, "k", 21)?,
                weight: cfg.pick(instance.weight, "weight", 1.0)?,
                solver: cfg.pick_opt(solver, "solver")?,
                iters: cfg.pick(common.iters, "iters", 1000)?,
                tol: cfg.pick(common.tol, "tol", 1e-6)?,
                seed: cfg.pick(common.seed, "seed", 0)?,
                t_min: cfg.pick(tmin, "tmin", -2.0)?,
                t_max: cfg.pick(tmax, "tmax", 2.0)?,
                t_count: cfg.pick(tcount, "tcount", 41)?,
                out: resolve_out(common.out, &cfg),
            };
            sweep::run(&settings)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = err.print();
                    return ExitCode::SUCCESS;
                }
                // Flag errors are configuration errors.
                _ => 64,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("submod: {err}");
            err.exit_code()
        }
    }
}
