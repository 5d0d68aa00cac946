//! `submod certify`: load a primal/dual pair from `block,index,value` files
//! and print the resulting certificate.

use std::path::PathBuf;
use std::process::ExitCode;

use submod_core::extension::Rho;
use submod_core::polyhedra::{certify_gap, DualPoint};

use crate::commands::build_instance;
use crate::csvio::read_blocks;
use crate::error::{CliError, CliResult};
use crate::report::Report;

#[derive(Debug, Clone)]
pub struct CertifySettings {
    pub example: String,
    pub n: usize,
    pub k: usize,
    pub weight: f64,
    pub rho_path: PathBuf,
    pub w_path: PathBuf,
    pub tol: f64,
    pub out: PathBuf,
}

pub fn run(settings: &CertifySettings) -> CliResult<ExitCode> {
    let (oracle, domain) = build_instance(
        &settings.example,
        settings.n,
        settings.k,
        settings.weight,
    )?;
    let entry_lens: Vec<usize> = domain.block_sizes().iter().map(|&ki| ki - 1).collect();
    let rho_blocks = read_blocks(&settings.rho_path, &entry_lens)?;
    let w_blocks = read_blocks(&settings.w_path, &entry_lens)?;
    let rho = Rho::new(rho_blocks);
    // A dual vector loaded from disk carries no provenance; the gap is
    // reported but flagged as unverifiable.
    let w = DualPoint::raw(w_blocks);
    let gap_report = certify_gap(&oracle, &domain, &rho, &w).map_err(|err| match err {
        submod_core::Error::NotMonotone { block, index, .. } => CliError::DataShape(format!(
            "rho block {block} not nonincreasing at index {index}"
        )),
        other => CliError::from(other),
    })?;

    let mut report = Report::new("certify");
    report.push("example", &settings.example);
    report.push("rho", settings.rho_path.display());
    report.push("w", settings.w_path.display());
    report.push("primal", gap_report.primal_best);
    report.push("dual", gap_report.dual_value);
    report.push("gap", gap_report.gap);
    report.push("evals", gap_report.evals);
    report.push("certified", gap_report.certified);
    if !gap_report.certified {
        report.push(
            "warning.provenance",
            "w carries no greedy provenance; the dual value is not a certificate",
        );
    }
    report.push_env();
    report.push("timing.certify.ms", gap_report.wallclock_ms);
    report.write(&settings.out.join("report.txt"))?;
    print!("{}", report.render());

    Ok(if gap_report.gap <= settings.tol {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
