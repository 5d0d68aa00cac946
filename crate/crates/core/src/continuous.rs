//! Discretization of Lipschitz submodular functions on boxes and the
//! accuracy planner pairing grid resolution with subgradient iterations.

use crate::domain::{Point, ProductDomain, ValueOracle};
use crate::error::{Error, Result};
use crate::examples::uniform_grid;

/// A box `prod_i [lo_i, hi_i]` with a global Lipschitz constant in the
/// sup-norm sense.
#[derive(Debug, Clone)]
pub struct BoxSpec {
    intervals: Vec<(f64, f64)>,
    lipschitz_global: f64,
}

impl BoxSpec {
    pub fn new(intervals: Vec<(f64, f64)>, lipschitz_global: f64) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidDomain("empty box".into()));
        }
        if intervals.iter().any(|&(lo, hi)| lo >= hi) {
            return Err(Error::InvalidDomain("degenerate interval".into()));
        }
        if lipschitz_global < 0.0 {
            return Err(Error::InvalidParameter("Lipschitz constant must be >= 0".into()));
        }
        Ok(Self {
            intervals,
            lipschitz_global,
        })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn lipschitz_global(&self) -> f64 {
        self.lipschitz_global
    }

    /// Common edge length (the largest interval).
    pub fn edge(&self) -> f64 {
        self.intervals
            .iter()
            .map(|&(lo, hi)| hi - lo)
            .fold(0.0, f64::max)
    }
}

/// Sample `f` on a uniform grid of the box. Per-coordinate Lipschitz bounds
/// are `G * (hi_i - lo_i) / (k_i - 1)`. A small probe (corners and center)
/// guards against non-finite samples at construction; solvers re-check every
/// evaluation they consume.
pub fn discretize(
    f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    spec: &BoxSpec,
    k: &[usize],
) -> Result<(ValueOracle, ProductDomain)> {
    if k.len() != spec.intervals.len() {
        return Err(Error::ShapeMismatch("grid size count vs box".into()));
    }
    if k.iter().any(|&ki| ki < 2) {
        return Err(Error::InvalidParameter("k_i must be >= 2".into()));
    }
    let grids: Vec<Vec<f64>> = spec
        .intervals
        .iter()
        .zip(k)
        .map(|(&(lo, hi), &ki)| uniform_grid(lo, hi, ki))
        .collect();
    let n = k.len();
    let center: Vec<f64> = spec.intervals.iter().map(|&(lo, hi)| 0.5 * (lo + hi)).collect();
    if !f(&center).is_finite() {
        return Err(Error::NonFiniteValue(vec![]));
    }
    for mask in 0..(1u64 << n.min(16)) {
        let corner: Vec<f64> = spec
            .intervals
            .iter()
            .enumerate()
            .map(|(i, &(lo, hi))| if mask >> i & 1 == 1 { hi } else { lo })
            .collect();
        if !f(&corner).is_finite() {
            return Err(Error::NonFiniteValue(vec![]));
        }
    }
    let domain = ProductDomain::new(k.to_vec())?.with_grid(grids.clone())?;
    let bounds: Vec<f64> = spec
        .intervals
        .iter()
        .zip(k)
        .map(|(&(lo, hi), &ki)| spec.lipschitz_global * (hi - lo) / (ki - 1) as f64)
        .collect();
    let oracle = ValueOracle::new(bounds, move |x: &Point| {
        let coords: Vec<f64> = x.coords().iter().enumerate().map(|(i, &j)| grids[i][j]).collect();
        f(&coords)
    });
    Ok((oracle, domain))
}

/// Planned discretization and iteration budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccuracyPlan {
    /// Grid points per variable.
    pub k: usize,
    /// Subgradient iterations.
    pub t: usize,
    /// Projected oracle evaluations, `t * (n * k)`.
    pub evals: u64,
}

/// Split a target accuracy `eps` between discretization error `GB/k` and
/// optimization error `GBn/sqrt(t)`: `k = ceil(2GB/eps)`,
/// `t = ceil((2GBn/eps)^2)`.
pub fn plan_accuracy(g: f64, b: f64, n: usize, eps: f64) -> AccuracyPlan {
    assert!(eps > 0.0, "eps must be positive");
    let k = (2.0 * g * b / eps).ceil().max(2.0) as usize;
    let t = (2.0 * g * b * n as f64 / eps).powi(2).ceil().max(1.0) as usize;
    AccuracyPlan {
        k,
        t,
        evals: t as u64 * (n as u64 * k as u64),
    }
}

/// Sup-norm Lipschitz estimate by maximizing summed per-coordinate finite
/// differences over a dense audit grid.
pub fn estimate_lipschitz(f: impl Fn(&[f64]) -> f64, spec: &BoxSpec, audit_k: usize) -> f64 {
    let n = spec.intervals.len();
    let grids: Vec<Vec<f64>> = spec
        .intervals
        .iter()
        .map(|&(lo, hi)| uniform_grid(lo, hi, audit_k))
        .collect();
    let steps: Vec<f64> = spec
        .intervals
        .iter()
        .map(|&(lo, hi)| (hi - lo) / (audit_k - 1) as f64)
        .collect();
    let domain = ProductDomain::new(vec![audit_k; n]).expect("audit grid");
    let mut worst = 0.0f64;
    for x in domain.iter_points() {
        let coords: Vec<f64> = (0..n).map(|i| grids[i][x[i]]).collect();
        let base = f(&coords);
        let mut grad_l1 = 0.0;
        for i in 0..n {
            if x[i] + 1 < audit_k {
                let mut up = coords.clone();
                up[i] = grids[i][x[i] + 1];
                grad_l1 += (f(&up) - base).abs() / steps[i];
            }
        }
        worst = worst.max(grad_l1);
    }
    worst
}
