//! Fixed-column CSV emission and parsing for run artifacts. Floats are
//! written in shortest round-trip form; every write is temp-then-rename.

use std::path::Path;

use submod_core::domain::{Point, ProductDomain};
use submod_core::extension::Rho;
use submod_core::solvers::IterateLog;

use crate::error::{CliError, CliResult};

/// Write-temp-then-rename so readers never observe partial files.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// `gaps.csv`: `iter,primal,dual,gap,evals,ms`.
pub fn write_gaps(path: &Path, log: &IterateLog) -> CliResult<()> {
    let mut out = String::from("iter,primal,dual,gap,evals,ms\n");
    for rec in log.records() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            rec.iter, rec.primal_best, rec.dual_best, rec.gap, rec.evals, rec.ms
        ));
    }
    write_atomic(path, out.as_bytes())
}

/// `rho.csv` (and dual vectors): `block,index,value` with 1-based entry
/// indices within each block.
pub fn write_blocks(path: &Path, blocks: &[Vec<f64>]) -> CliResult<()> {
    let mut out = String::from("block,index,value\n");
    for (b, block) in blocks.iter().enumerate() {
        for (j, v) in block.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", b, j + 1, v));
        }
    }
    write_atomic(path, out.as_bytes())
}

/// Parse a `block,index,value` file into blocks shaped like `expect`
/// (lengths `k_i - 1`).
pub fn read_blocks(path: &Path, expect: &[usize]) -> CliResult<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)?;
    let mut blocks: Vec<Vec<Option<f64>>> = expect.iter().map(|&m| vec![None; m]).collect();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line == "block,index,value") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(CliError::DataShape(format!(
                "{}:{}: expected 3 fields",
                path.display(),
                lineno + 1
            )));
        }
        let parse = |s: &str| -> CliResult<f64> {
            s.trim()
                .parse()
                .map_err(|_| CliError::DataShape(format!("cannot parse `{s}`")))
        };
        let b = parse(fields[0])? as usize;
        let j = parse(fields[1])? as usize;
        let v = parse(fields[2])?;
        if b >= blocks.len() || j == 0 || j > blocks[b].len() {
            return Err(CliError::DataShape(format!(
                "{}:{}: entry ({b},{j}) outside the domain shape",
                path.display(),
                lineno + 1
            )));
        }
        blocks[b][j - 1] = Some(v);
    }
    blocks
        .into_iter()
        .enumerate()
        .map(|(b, block)| {
            block
                .into_iter()
                .enumerate()
                .map(|(j, v)| {
                    v.ok_or_else(|| {
                        CliError::DataShape(format!("missing entry (block {b}, index {})", j + 1))
                    })
                })
                .collect()
        })
        .collect()
}

/// `solution.csv`: `index,coordinate,value` rows, one per variable; the
/// `value` column repeats the objective at the solution so it can be checked
/// against a fresh oracle evaluation.
pub fn write_solution(
    path: &Path,
    point: &Point,
    _domain: &ProductDomain,
    objective: f64,
) -> CliResult<()> {
    let mut out = String::from("index,coordinate,value\n");
    for (i, &xi) in point.coords().iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", i, xi, objective));
    }
    write_atomic(path, out.as_bytes())
}

/// `signal.csv`: `index,noisy,denoised`.
pub fn write_signal(path: &Path, noisy: &[f64], denoised: &[f64]) -> CliResult<()> {
    let mut out = String::from("index,noisy,denoised\n");
    for (i, (a, b)) in noisy.iter().zip(denoised).enumerate() {
        out.push_str(&format!("{},{},{}\n", i, a, b));
    }
    write_atomic(path, out.as_bytes())
}

/// `sweep.csv`: `t,x0,..,x{n-1}`.
pub fn write_sweep(path: &Path, t_grid: &[f64], points: &[Point]) -> CliResult<()> {
    let n = points.first().map_or(0, Point::len);
    let mut out = String::from("t");
    for i in 0..n {
        out.push_str(&format!(",x{i}"));
    }
    out.push('\n');
    for (t, p) in t_grid.iter().zip(points) {
        out.push_str(&t.to_string());
        for &xi in p.coords() {
            out.push_str(&format!(",{xi}"));
        }
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

pub fn rho_blocks(rho: &Rho) -> &[Vec<f64>] {
    rho.blocks()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_round_trip() {
        let dir = std::env::temp_dir().join(format!("submod-csv-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("rho.csv");
        let blocks = vec![vec![0.9, 0.4], vec![0.7]];
        write_blocks(&path, &blocks).unwrap();
        let back = read_blocks(&path, &[2, 1]).unwrap();
        assert_eq!(blocks, back);
        assert!(read_blocks(&path, &[1, 1]).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
