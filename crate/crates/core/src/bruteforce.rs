//! Independent ground-truth oracles: exhaustive minimization, breakpoint-
//! exact extension integration and convexity probes. These deliberately do
//! not share code with the greedy path they are used to verify.

use crate::domain::{Point, ProductDomain, ValueOracle};
use crate::error::{Error, Result};
use crate::extension::{theta, Rho};

/// Enumeration caps for the audit oracles.
#[derive(Debug, Clone, Copy)]
pub struct AuditBudget {
    pub max_points: u64,
    pub max_evals: u64,
}

impl AuditBudget {
    pub fn new(max_points: u64, max_evals: u64) -> Self {
        assert!(max_points > 0 && max_evals > 0);
        Self {
            max_points,
            max_evals,
        }
    }
}

impl Default for AuditBudget {
    fn default() -> Self {
        Self {
            max_points: 20_000_000,
            max_evals: 20_000_000,
        }
    }
}

/// Global minimum by full enumeration: lexicographically smallest argmin,
/// minimal value, and the number of points attaining it. Issues exactly one
/// evaluation per grid point.
pub fn exhaustive_min(
    oracle: &ValueOracle,
    domain: &ProductDomain,
    budget: AuditBudget,
) -> Result<(Point, f64, u64)> {
    let total = domain.num_points().ok_or(Error::BudgetExceeded {
        needed: u64::MAX,
        cap: budget.max_points,
    })?;
    if total > budget.max_points || total > budget.max_evals {
        return Err(Error::BudgetExceeded {
            needed: total,
            cap: budget.max_points.min(budget.max_evals),
        });
    }
    let mut best: Option<(Point, f64)> = None;
    let mut ties = 0u64;
    for x in domain.iter_points() {
        let v = oracle.eval(&x);
        match &best {
            None => {
                best = Some((x, v));
                ties = 1;
            }
            Some((_, bv)) => {
                if v < *bv {
                    best = Some((x, v));
                    ties = 1;
                } else if v == *bv {
                    ties += 1;
                }
            }
        }
    }
    let (point, value) = best.expect("domain nonempty");
    Ok((point, value, ties))
}

/// Extension value by breakpoint-exact integration of `H(theta(rho, .))`:
/// sorts the distinct thresholds, evaluates once per open interval at its
/// midpoint, and adds the two endpoint terms. No telescoping, no ordering;
/// independent of the greedy implementation.
pub fn extension_by_breakpoint_integration(
    oracle: &ValueOracle,
    domain: &ProductDomain,
    rho: &Rho,
) -> Result<f64> {
    if !rho.matches(domain) {
        return Err(Error::ShapeMismatch("rho does not match domain".into()));
    }
    rho.check_nonincreasing()?;
    let mut thresholds: Vec<f64> = rho.blocks().iter().flatten().cloned().collect();
    thresholds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    thresholds.dedup();
    let h_top = oracle.eval(&domain.top());
    let h0 = oracle.eval(&domain.origin());
    if thresholds.is_empty() {
        return Ok(h0);
    }
    let lo = thresholds[0];
    let hi = *thresholds.last().unwrap();
    let mut acc = lo * h_top + (1.0 - hi) * h0;
    for pair in thresholds.windows(2) {
        let mid = 0.5 * (pair[0] + pair[1]);
        acc += (pair[1] - pair[0]) * oracle.eval(&theta(rho, mid));
    }
    Ok(acc)
}

/// Witness of a failed midpoint-convexity check.
#[derive(Debug, Clone)]
pub struct ConvexityWitness {
    pub rho_a: Rho,
    pub rho_b: Rho,
    pub midpoint_value: f64,
    pub average_value: f64,
}

/// Sample random feasible pairs and check midpoint convexity of the given
/// extension evaluator; returns the first violation if any.
pub fn convexity_probe(
    mut extension: impl FnMut(&Rho) -> Result<f64>,
    domain: &ProductDomain,
    segments: usize,
    seed: u64,
) -> Result<Option<ConvexityWitness>> {
    for s in 0..segments {
        let a = Rho::random_feasible(domain, seed.wrapping_add(2 * s as u64));
        let b = Rho::random_feasible(domain, seed.wrapping_add(2 * s as u64 + 1));
        let mid = Rho::new(
            a.blocks()
                .iter()
                .zip(b.blocks())
                .map(|(x, y)| x.iter().zip(y).map(|(u, v)| 0.5 * (u + v)).collect())
                .collect(),
        );
        let va = extension(&a)?;
        let vb = extension(&b)?;
        let vm = extension(&mid)?;
        if vm > 0.5 * va + 0.5 * vb + 1e-9 {
            return Ok(Some(ConvexityWitness {
                rho_a: a,
                rho_b: b,
                midpoint_value: vm,
                average_value: 0.5 * va + 0.5 * vb,
            }));
        }
    }
    Ok(None)
}
