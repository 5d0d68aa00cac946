//! Command implementations. Each takes a fully resolved settings struct;
//! flag/config merging lives in the binary entry point.

pub mod certify;
pub mod denoise;
pub mod minimize;
pub mod sweep;

use std::path::Path;

use submod_core::domain::{ProductDomain, ValueOracle};
use submod_core::examples::{make_example, ExampleParams};
use submod_core::solvers::{
    minimize_frankwolfe, minimize_subgradient, FwVariant, MinimizeResult, SolveStatus,
    SolverConfig,
};

use crate::csvio;
use crate::error::{CliError, CliResult};
use crate::report::Report;

/// Solver selector exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SolverKind {
    /// Projected subgradient with Polyak steps.
    Subgrad,
    /// Frank-Wolfe with the fixed step schedule.
    Fw,
    /// Pairwise Frank-Wolfe.
    Pfw,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Subgrad => "subgrad",
            SolverKind::Fw => "fw",
            SolverKind::Pfw => "pfw",
        }
    }
}

impl std::str::FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "subgrad" => Ok(SolverKind::Subgrad),
            "fw" => Ok(SolverKind::Fw),
            "pfw" => Ok(SolverKind::Pfw),
            other => Err(format!("unknown solver `{other}`")),
        }
    }
}

pub fn run_solver(
    kind: SolverKind,
    oracle: &ValueOracle,
    domain: &ProductDomain,
    iters: usize,
    tol: f64,
    seed: u64,
) -> CliResult<MinimizeResult> {
    let config = SolverConfig {
        max_iter: iters,
        tolerance: tol,
        seed,
        fw_variant: match kind {
            SolverKind::Pfw => FwVariant::Pairwise,
            _ => FwVariant::Classic,
        },
        ..Default::default()
    };
    let result = match kind {
        SolverKind::Subgrad => minimize_subgradient(oracle, domain, &config)?,
        SolverKind::Fw | SolverKind::Pfw => minimize_frankwolfe(oracle, domain, &config)?,
    };
    Ok(result)
}

/// Build a registry instance for the `minimize`, `certify` and `sweep`
/// commands (the denoise objective has its own command carrying the signal).
pub fn build_instance(
    example: &str,
    n: usize,
    k: usize,
    weight: f64,
) -> CliResult<(ValueOracle, ProductDomain)> {
    if example == "denoise" {
        return Err(CliError::Usage(
            "use the `denoise` subcommand for the denoising objective".into(),
        ));
    }
    let params = ExampleParams {
        n,
        k,
        weight,
        ..Default::default()
    };
    Ok(make_example(example, &params)?)
}

/// Write the per-solver artifact set: `gaps.csv`, `rho.csv`, `w.csv`,
/// `solution.csv`.
pub fn emit_solver_artifacts(
    dir: &Path,
    oracle: &ValueOracle,
    domain: &ProductDomain,
    result: &MinimizeResult,
) -> CliResult<()> {
    csvio::write_gaps(&dir.join("gaps.csv"), &result.log)?;
    csvio::write_blocks(&dir.join("rho.csv"), csvio::rho_blocks(&result.rho))?;
    csvio::write_blocks(&dir.join("w.csv"), result.dual.blocks())?;
    let fresh = oracle.eval(&result.point);
    csvio::write_solution(&dir.join("solution.csv"), &result.point, domain, fresh)?;
    Ok(())
}

/// Append the standard per-solver report block.
pub fn report_solver(report: &mut Report, kind: SolverKind, result: &MinimizeResult) {
    let name = kind.name();
    let last = result.log.last();
    report.push(
        format!("solver.{name}.converged"),
        result.status == SolveStatus::Converged,
    );
    report.push(format!("solver.{name}.iterations"), result.log.len());
    report.push(format!("solver.{name}.primal"), result.value);
    if let Some(rec) = last {
        report.push(format!("solver.{name}.dual"), rec.dual_best);
        report.push(format!("solver.{name}.gap"), rec.gap);
        report.push(format!("solver.{name}.evals"), rec.evals);
    }
    report.push(
        format!("solver.{name}.certified"),
        result.dual.is_certified(),
    );
}

/// Wall-clock entries are grouped under `timing.` so determinism checks can
/// exclude them wholesale.
pub fn report_timing(report: &mut Report, kind: SolverKind, result: &MinimizeResult) {
    if let Some(rec) = result.log.last() {
        report.push(format!("timing.{}.ms", kind.name()), rec.ms);
    }
}
