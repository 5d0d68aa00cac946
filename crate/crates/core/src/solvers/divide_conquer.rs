//! Exact divide-and-conquer for the separable regularized problem, and the
//! parametric family of modular-penalized minimizations it decomposes into.

use crate::bruteforce::{exhaustive_min, AuditBudget};
use crate::domain::{restrict, Point, ProductDomain, ValueOracle};
use crate::error::{Error, Result};
use crate::extension::Rho;
use crate::solvers::{
    minimize_frankwolfe, minimize_subgradient, modular_penalized_oracle, Separable, SolverConfig,
};

/// Relative tolerance of the divide-and-conquer stop test.
const STOP_TOL: f64 = 1e-9;

/// Which routine solves the inner modular-penalized minimizations.
#[derive(Debug, Clone)]
pub enum SfmMethod {
    Exhaustive(AuditBudget),
    Subgradient(SolverConfig),
    FrankWolfe(SolverConfig),
}

impl SfmMethod {
    pub fn solve(&self, oracle: &ValueOracle, domain: &ProductDomain) -> Result<(Point, f64)> {
        match self {
            SfmMethod::Exhaustive(budget) => {
                let (p, v, _) = exhaustive_min(oracle, domain, *budget)?;
                Ok((p, v))
            }
            SfmMethod::Subgradient(config) => {
                let res = minimize_subgradient(oracle, domain, config)?;
                Ok((res.point, res.value))
            }
            SfmMethod::FrankWolfe(config) => {
                let res = minimize_frankwolfe(oracle, domain, config)?;
                Ok((res.point, res.value))
            }
        }
    }
}

/// Result of the divide-and-conquer recursion.
#[derive(Debug, Clone)]
pub struct DncOutcome {
    /// The exact solution of the separable problem; entry `(i, x_i)` holds
    /// the optimal threshold of the region that fixed it.
    pub rho: Rho,
    /// Stop tests that fell within ten times the equality tolerance.
    pub near_threshold: usize,
    /// Inner minimization calls issued.
    pub sfm_calls: usize,
}

/// Minimize `h(rho) + sum a(rho)` over products of nonincreasing vectors by
/// the recursive threshold-splitting procedure. Requires strictly convex,
/// differentiable separable terms; the scalar stage is solved by guarded
/// Newton (exact in one step for quadratics).
pub fn divide_and_conquer(
    oracle: &ValueOracle,
    domain: &ProductDomain,
    sep: &(impl Separable + ?Sized),
    sfm: &SfmMethod,
) -> Result<DncOutcome> {
    let n = domain.num_blocks();
    let mut rho_blocks: Vec<Vec<f64>> = domain
        .block_sizes()
        .iter()
        .map(|&ki| vec![f64::NAN; ki - 1])
        .collect();
    let mut state = Recursion {
        oracle,
        domain,
        sep,
        sfm,
        rho: &mut rho_blocks,
        near_threshold: 0,
        sfm_calls: 0,
        depth_cap: domain.num_entries().max(1),
    };
    let lo = vec![0usize; n];
    let up: Vec<usize> = domain.block_sizes().iter().map(|&ki| ki - 1).collect();
    state.split(&lo, &up, 0)?;
    let (near_threshold, sfm_calls) = (state.near_threshold, state.sfm_calls);

    // Assemble and repair sub-tolerance monotonicity noise.
    for (bi, block) in rho_blocks.iter_mut().enumerate() {
        for j in 1..block.len() {
            let violation = block[j] - block[j - 1];
            if violation > STOP_TOL {
                return Err(Error::NotMonotone {
                    block: bi,
                    index: j,
                    violation,
                });
            }
            if violation > 0.0 {
                block[j] = block[j - 1];
            }
        }
    }
    debug_assert!(rho_blocks.iter().flatten().all(|v| v.is_finite()));
    Ok(DncOutcome {
        rho: Rho::new(rho_blocks),
        near_threshold,
        sfm_calls,
    })
}

struct Recursion<'a, S: Separable + ?Sized> {
    oracle: &'a ValueOracle,
    domain: &'a ProductDomain,
    sep: &'a S,
    sfm: &'a SfmMethod,
    rho: &'a mut Vec<Vec<f64>>,
    near_threshold: usize,
    sfm_calls: usize,
    depth_cap: usize,
}

impl<S: Separable + ?Sized> Recursion<'_, S> {
    /// Solve the region `[lo, up]`, writing thresholds for every entry
    /// `(i, x_i)` with `lo_i < x_i <= up_i`.
    fn split(&mut self, lo: &[usize], up: &[usize], depth: usize) -> Result<()> {
        if depth > self.depth_cap {
            return Err(Error::RecursionDepth(self.depth_cap));
        }
        let n = self.domain.num_blocks();
        // Region entries as (block, global level) pairs.
        let entries: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (lo[i] + 1..=up[i]).map(move |x| (i, x)))
            .collect();
        if entries.is_empty() {
            return Ok(());
        }

        let h_lo = self.oracle.eval(&Point::new(lo.to_vec()));
        let h_up = self.oracle.eval(&Point::new(up.to_vec()));

        // Scalar stage: minimize (H(up) - H(lo)) t + sum of region terms.
        let t_star = self.scalar_solve(&entries, h_up - h_lo)?;

        // SFM stage on the sub-box with the cumulative modular penalty
        // -sum_{levels <= x} w, where w(i,x) = -a'(t*).
        let (sub_oracle, sub_domain) = restrict(
            self.oracle,
            self.domain,
            &Point::new(lo.to_vec()),
            &Point::new(up.to_vec()),
        )?;
        let tables: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut t = Vec::with_capacity(up[i] - lo[i] + 1);
                t.push(0.0);
                let mut acc = 0.0;
                for x in lo[i] + 1..=up[i] {
                    // -w(i, x) = a'(t*)
                    acc += self.sep.a_prime(i, x - 1, t_star);
                    t.push(acc);
                }
                t
            })
            .collect();
        let penalized = modular_penalized_oracle(&sub_oracle, &sub_domain, tables);
        self.sfm_calls += 1;
        let (y_local, min_val) = self.sfm.solve(&penalized, &sub_domain)?;

        let stop_tol = STOP_TOL * (1.0 + h_lo.abs());
        let slack = h_lo - min_val;
        if slack.abs() <= 10.0 * stop_tol && slack > stop_tol {
            self.near_threshold += 1;
        }
        let at_corner = y_local.coords().iter().all(|&v| v == 0)
            || (0..n).all(|i| y_local[i] == up[i] - lo[i]);
        if slack <= stop_tol || at_corner {
            for &(i, x) in &entries {
                self.rho[i][x - 1] = t_star;
            }
            return Ok(());
        }

        let y: Vec<usize> = (0..n).map(|i| lo[i] + y_local[i]).collect();
        self.split(lo, &y, depth + 1)?;
        self.split(&y, up, depth + 1)
    }

    /// Guarded Newton on the strictly convex scalar stage.
    fn scalar_solve(&self, entries: &[(usize, usize)], delta_h: f64) -> Result<f64> {
        let phi_prime = |t: f64| -> f64 {
            delta_h
                + entries
                    .iter()
                    .map(|&(i, x)| self.sep.a_prime(i, x - 1, t))
                    .sum::<f64>()
        };
        let phi_second = |t: f64| -> f64 {
            entries
                .iter()
                .map(|&(i, x)| self.sep.a_second(i, x - 1, t))
                .sum()
        };
        let mut t = 0.0;
        for _ in 0..200 {
            let d1 = phi_prime(t);
            if d1.abs() <= 1e-14 * (1.0 + delta_h.abs()) {
                return Ok(t);
            }
            let d2 = phi_second(t);
            if !(d2 > 0.0) {
                return Err(Error::InvalidParameter(
                    "separable terms are not strictly convex".into(),
                ));
            }
            let next = t - d1 / d2;
            if (next - t).abs() <= 1e-15 * (1.0 + t.abs()) {
                return Ok(next);
            }
            t = next;
        }
        Ok(t)
    }
}

/// Solutions of the modular-penalized family over a grid of thresholds,
/// plus the reconstructed extension argument.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub points: Vec<Point>,
    pub rho: Rho,
}

/// Solve `min H(x) + sum_i sum_{y<=x_i} a'(t)` for each `t` in a strictly
/// increasing grid, check that the solutions are componentwise nonincreasing
/// in `t`, and reconstruct `rho_i(x_i) = sup { t : x_i^t >= x_i }` (clamped
/// to the grid span).
pub fn parametric_sweep(
    oracle: &ValueOracle,
    domain: &ProductDomain,
    sep: &(impl Separable + ?Sized),
    t_grid: &[f64],
    sfm: &SfmMethod,
) -> Result<SweepOutcome> {
    if t_grid.len() < 2 || t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "t grid must be strictly increasing with at least two points".into(),
        ));
    }
    let n = domain.num_blocks();
    let mut points: Vec<Point> = Vec::with_capacity(t_grid.len());
    for (idx, &t) in t_grid.iter().enumerate() {
        let tables: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let ki = domain.block_sizes()[i];
                let mut tab = Vec::with_capacity(ki);
                tab.push(0.0);
                let mut acc = 0.0;
                for x in 1..ki {
                    acc += sep.a_prime(i, x - 1, t);
                    tab.push(acc);
                }
                tab
            })
            .collect();
        let penalized = modular_penalized_oracle(oracle, domain, tables);
        let (point, _) = sfm.solve(&penalized, domain)?;
        if let Some(prev) = points.last() {
            if !point.le(prev) {
                return Err(Error::SweepNotMonotone(idx));
            }
        }
        points.push(point);
    }
    let rho = Rho::new(
        (0..n)
            .map(|i| {
                (1..domain.block_sizes()[i])
                    .map(|x| {
                        points
                            .iter()
                            .zip(t_grid)
                            .filter(|(p, _)| p[i] >= x)
                            .map(|(_, &t)| t)
                            .fold(t_grid[0], f64::max)
                    })
                    .collect()
            })
            .collect(),
    );
    Ok(SweepOutcome { points, rho })
}
