//! Solvers: projected subgradient on the extension argument, Frank-Wolfe
//! variants on the base polytope for the regularized dual, an exact
//! divide-and-conquer routine for separable problems, parametric
//! thresholding, and the ring-family reduction to set-functions.

mod divide_conquer;
mod frank_wolfe;
mod ring_family;
mod subgradient;

pub use divide_conquer::{divide_and_conquer, parametric_sweep, DncOutcome, SfmMethod, SweepOutcome};
pub use frank_wolfe::{minimize_frankwolfe, prox_quadratic, ProxResult};
pub use ring_family::{ring_family_reduce, RingDecode};
pub use subgradient::minimize_subgradient;

use crate::domain::{Point, ProductDomain, ValueOracle};
use crate::error::{Error, Result};
use crate::extension::Rho;
use crate::polyhedra::DualPoint;

/// Step-size rule for the projected subgradient method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// `(h(rho) - D) / ||w||^2` with `D` the best dual value so far; falls
    /// back to the decaying rule on iterations where the numerator is
    /// nonpositive.
    Polyak,
    Fixed(f64),
    /// `c / sqrt(t)`.
    Decaying(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FwVariant {
    Classic,
    LineSearch,
    Pairwise,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub max_iter: usize,
    /// Termination threshold on the certified gap.
    pub tolerance: f64,
    pub step_rule: StepRule,
    /// Per-entry step scaling `1 / (k_i * B_i)` for the subgradient method.
    pub precondition: bool,
    pub fw_variant: FwVariant,
    pub seed: u64,
    /// Cap on oracle evaluations consumed by the run.
    pub eval_budget: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iter: 1000,
            tolerance: 1e-6,
            step_rule: StepRule::Polyak,
            precondition: false,
            fw_variant: FwVariant::Classic,
            seed: 0,
            eval_budget: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        if let Some(0) = self.eval_budget {
            return Err(Error::InvalidParameter("eval_budget must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    IterationCap,
    BudgetExhausted,
}

/// One logged iteration.
#[derive(Debug, Clone, Copy)]
pub struct IterateRecord {
    pub iter: usize,
    pub primal_best: f64,
    pub dual_best: f64,
    pub gap: f64,
    pub evals: u64,
    pub ms: u64,
}

/// Per-iteration convergence log. Primal bests are nonincreasing, dual bests
/// nondecreasing, gaps nonincreasing.
#[derive(Debug, Clone, Default)]
pub struct IterateLog {
    records: Vec<IterateRecord>,
}

impl IterateLog {
    pub fn push(&mut self, record: IterateRecord) {
        debug_assert!(self
            .records
            .last()
            .map_or(true, |prev| record.primal_best <= prev.primal_best
                && record.dual_best >= prev.dual_best
                && record.gap <= prev.gap));
        self.records.push(record);
    }

    pub fn records(&self) -> &[IterateRecord] {
        &self.records
    }

    pub fn last(&self) -> Option<&IterateRecord> {
        self.records.last()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Output of a full minimization run.
#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub point: Point,
    pub value: f64,
    pub log: IterateLog,
    pub rho: Rho,
    pub dual: DualPoint,
    pub status: SolveStatus,
}

/// Per-entry strictly convex separable terms used by the divide-and-conquer
/// recursion; entry `(i, j)` regularizes `rho_i(j+1)`.
pub trait Separable {
    fn a(&self, i: usize, j: usize, t: f64) -> f64;
    fn a_prime(&self, i: usize, j: usize, t: f64) -> f64;
    fn a_second(&self, i: usize, j: usize, t: f64) -> f64;
}

/// Quadratic terms `a_{i,j}(t) = 0.5 * c_i(j) * (t - z_i(j))^2` with
/// strictly positive curvatures.
#[derive(Debug, Clone)]
pub struct SeparableQuadratic {
    targets: Vec<Vec<f64>>,
    curvatures: Vec<Vec<f64>>,
}

impl SeparableQuadratic {
    pub fn new(targets: Vec<Vec<f64>>, curvatures: Vec<Vec<f64>>) -> Result<Self> {
        if targets.len() != curvatures.len()
            || targets
                .iter()
                .zip(&curvatures)
                .any(|(t, c)| t.len() != c.len())
        {
            return Err(Error::ShapeMismatch("targets vs curvatures".into()));
        }
        if curvatures.iter().flatten().any(|&c| c <= 0.0) {
            return Err(Error::InvalidParameter("curvatures must be positive".into()));
        }
        Ok(Self {
            targets,
            curvatures,
        })
    }

    /// `0.5 * ||rho||^2` terms: zero targets, unit curvatures.
    pub fn unit(domain: &ProductDomain) -> Self {
        let shape: Vec<Vec<f64>> = domain
            .block_sizes()
            .iter()
            .map(|&ki| vec![0.0; ki - 1])
            .collect();
        let ones = shape.iter().map(|b| vec![1.0; b.len()]).collect();
        Self {
            targets: shape,
            curvatures: ones,
        }
    }

    pub fn targets(&self) -> &[Vec<f64>] {
        &self.targets
    }

    pub fn curvatures(&self) -> &[Vec<f64>] {
        &self.curvatures
    }

    pub fn matches(&self, domain: &ProductDomain) -> bool {
        self.targets.len() == domain.num_blocks()
            && self
                .targets
                .iter()
                .zip(domain.block_sizes())
                .all(|(t, &ki)| t.len() == ki - 1)
    }

    /// Value of the separable part at `rho`.
    pub fn value(&self, rho: &Rho) -> f64 {
        rho.blocks()
            .iter()
            .zip(&self.targets)
            .zip(&self.curvatures)
            .map(|((b, z), c)| {
                b.iter()
                    .zip(z)
                    .zip(c)
                    .map(|((&v, &zi), &ci)| 0.5 * ci * (v - zi).powi(2))
                    .sum::<f64>()
            })
            .sum()
    }
}

impl Separable for SeparableQuadratic {
    fn a(&self, i: usize, j: usize, t: f64) -> f64 {
        0.5 * self.curvatures[i][j] * (t - self.targets[i][j]).powi(2)
    }

    fn a_prime(&self, i: usize, j: usize, t: f64) -> f64 {
        self.curvatures[i][j] * (t - self.targets[i][j])
    }

    fn a_second(&self, i: usize, j: usize, _t: f64) -> f64 {
        self.curvatures[i][j]
    }
}

/// Oracle for `H(x) + sum_i m_i(x_i)` given per-block additive tables
/// (`tables[i][x_i]`, with `tables[i][0]` the anchor at level zero).
/// Lipschitz bounds grow by the largest table step per block.
pub(crate) fn modular_penalized_oracle(
    oracle: &ValueOracle,
    domain: &ProductDomain,
    tables: Vec<Vec<f64>>,
) -> ValueOracle {
    debug_assert_eq!(tables.len(), domain.num_blocks());
    let bounds: Vec<f64> = oracle
        .lipschitz()
        .iter()
        .zip(&tables)
        .map(|(&b, t)| {
            let step = t
                .windows(2)
                .map(|w| (w[1] - w[0]).abs())
                .fold(0.0, f64::max);
            b + step
        })
        .collect();
    let inner = oracle.clone();
    ValueOracle::new(bounds, move |x: &Point| {
        inner.eval(x)
            + x.coords()
                .iter()
                .zip(&tables)
                .map(|(&xi, t)| t[xi])
                .sum::<f64>()
    })
}
