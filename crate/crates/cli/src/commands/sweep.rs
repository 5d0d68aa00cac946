//! `submod sweep`: solve the modular-penalized family over a threshold grid
//! and emit the per-threshold solutions plus the reconstructed extension
//! argument.

use std::path::PathBuf;
use std::process::ExitCode;

use submod_core::bruteforce::AuditBudget;
use submod_core::solvers::{
    parametric_sweep, FwVariant, SeparableQuadratic, SfmMethod, SolverConfig,
};

use crate::commands::{build_instance, SolverKind};
use crate::csvio;
use crate::error::{CliError, CliResult};
use crate::report::Report;

#[derive(Debug, Clone)]
pub struct SweepSettings {
    pub example: String,
    pub n: usize,
    pub k: usize,
    pub weight: f64,
    /// Inner minimization method; exhaustive enumeration when absent.
    pub solver: Option<SolverKind>,
    pub iters: usize,
    pub tol: f64,
    pub seed: u64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_count: usize,
    pub out: PathBuf,
}

pub fn run(settings: &SweepSettings) -> CliResult<ExitCode> {
    if settings.t_count < 2 || settings.t_min >= settings.t_max {
        return Err(CliError::Usage(
            "need tmin < tmax and at least two grid points".into(),
        ));
    }
    let (oracle, domain) = build_instance(
        &settings.example,
        settings.n,
        settings.k,
        settings.weight,
    )?;
    let sep = SeparableQuadratic::unit(&domain);
    let method = match settings.solver {
        None => SfmMethod::Exhaustive(AuditBudget::default()),
        Some(kind) => {
            let config = SolverConfig {
                max_iter: settings.iters,
                tolerance: settings.tol,
                seed: settings.seed,
                fw_variant: match kind {
                    SolverKind::Pfw => FwVariant::Pairwise,
                    _ => FwVariant::Classic,
                },
                ..Default::default()
            };
            match kind {
                SolverKind::Subgrad => SfmMethod::Subgradient(config),
                SolverKind::Fw | SolverKind::Pfw => SfmMethod::FrankWolfe(config),
            }
        }
    };
    let step = (settings.t_max - settings.t_min) / (settings.t_count - 1) as f64;
    let t_grid: Vec<f64> = (0..settings.t_count)
        .map(|i| settings.t_min + step * i as f64)
        .collect();
    let outcome = parametric_sweep(&oracle, &domain, &sep, &t_grid, &method)?;

    csvio::write_sweep(&settings.out.join("sweep.csv"), &t_grid, &outcome.points)?;
    csvio::write_blocks(&settings.out.join("rho.csv"), outcome.rho.blocks())?;

    let mut report = Report::new("sweep");
    report.push("example", &settings.example);
    report.push("n", domain.num_blocks());
    report.push("k", settings.k);
    report.push("tmin", settings.t_min);
    report.push("tmax", settings.t_max);
    report.push("tcount", settings.t_count);
    report.push(
        "method",
        settings.solver.map_or("exhaustive", SolverKind::name),
    );
    report.push_env();
    report.write(&settings.out.join("report.txt"))?;
    Ok(ExitCode::SUCCESS)
}
