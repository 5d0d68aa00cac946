//! Dual vectors, the two polyhedra attached to a submodular grid function,
//! duality-gap certification and exhaustive membership checks.
//!
//! `W(H)` is cut out by cumulative-sum inequalities against `H`; the base
//! polytope `B(H)` is the convex hull of greedy outputs and membership in it
//! is certified constructively, by carrying the convex combination of
//! orderings that produced a vector.

use std::sync::Arc;

use crate::domain::{Point, ProductDomain, ValueOracle};
use crate::error::{Error, Result};
use crate::extension::{greedy, round_best, vertex_of_ordering, Ordering, Rho};

pub const POLYHEDRAL_TOL: f64 = 1e-9;
pub const IDENTITY_TOL: f64 = 1e-12;

/// How a dual vector was produced.
#[derive(Debug, Clone)]
pub enum Provenance {
    /// No certificate; the vector may lie outside `B(H)`.
    Raw,
    /// Convex combination of greedy outputs, one weight per ordering.
    Mix(Vec<(f64, Arc<Ordering>)>),
}

impl Provenance {
    pub fn is_certified(&self) -> bool {
        matches!(self, Provenance::Mix(_))
    }
}

/// A candidate dual vector `w` with one block of length `k_i - 1` per
/// variable.
#[derive(Debug, Clone)]
pub struct DualPoint {
    blocks: Vec<Vec<f64>>,
    provenance: Provenance,
}

impl DualPoint {
    pub fn raw(blocks: Vec<Vec<f64>>) -> Self {
        Self {
            blocks,
            provenance: Provenance::Raw,
        }
    }

    pub fn certified(blocks: Vec<Vec<f64>>, mix: Vec<(f64, Arc<Ordering>)>) -> Self {
        Self {
            blocks,
            provenance: Provenance::Mix(mix),
        }
    }

    /// The greedy output at `rho` as a certified point of `B(H)`.
    pub fn from_greedy(oracle: &ValueOracle, domain: &ProductDomain, rho: &Rho, seed: u64) -> Result<Self> {
        let out = greedy(oracle, domain, rho, seed)?;
        Ok(Self::certified(out.w, vec![(1.0, out.ordering)]))
    }

    pub fn blocks(&self) -> &[Vec<f64>] {
        &self.blocks
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_certified(&self) -> bool {
        self.provenance.is_certified()
    }

    pub fn matches(&self, domain: &ProductDomain) -> bool {
        self.blocks.len() == domain.num_blocks()
            && self
                .blocks
                .iter()
                .zip(domain.block_sizes())
                .all(|(b, &ki)| b.len() == ki - 1)
    }

    /// Cumulative sums `v_i(x_i) = sum_{y<=x_i} w_i(y)` per block, with the
    /// empty sum at `x_i = 0` included as leading zero.
    pub fn cumulative(&self) -> Vec<Vec<f64>> {
        self.blocks
            .iter()
            .map(|b| {
                let mut v = Vec::with_capacity(b.len() + 1);
                v.push(0.0);
                let mut acc = 0.0;
                for &w in b {
                    acc += w;
                    v.push(acc);
                }
                v
            })
            .collect()
    }

    pub fn dot_rho(&self, rho: &Rho) -> f64 {
        rho.dot(&self.blocks)
    }

    /// Re-derive the blocks from the provenance orderings; `None` for raw
    /// vectors. Costs `r + 1` oracle evaluations per ordering.
    pub fn recompute_from_provenance(
        &self,
        oracle: &ValueOracle,
        domain: &ProductDomain,
    ) -> Option<Vec<Vec<f64>>> {
        let Provenance::Mix(mix) = &self.provenance else {
            return None;
        };
        let mut acc: Vec<Vec<f64>> = domain
            .block_sizes()
            .iter()
            .map(|&ki| vec![0.0; ki - 1])
            .collect();
        for (weight, ordering) in mix {
            let vertex = vertex_of_ordering(oracle, domain, ordering);
            for (a, v) in acc.iter_mut().zip(vertex) {
                for (ai, vi) in a.iter_mut().zip(v) {
                    *ai += weight * vi;
                }
            }
        }
        Some(acc)
    }
}

/// Dual objective over `W(H)`: `sum_i sum_{x_i} min(w_i(x_i), 0)`.
pub fn dual_value_w_polyhedron(w: &DualPoint) -> f64 {
    w.blocks()
        .iter()
        .flatten()
        .map(|&v| v.min(0.0))
        .sum()
}

/// Dual objective over `B(H)`: `sum_i min_{x_i} sum_{y<=x_i} w_i(y)` with
/// the empty sum counted as zero.
pub fn dual_value_b_polytope(w: &DualPoint) -> f64 {
    w.cumulative()
        .iter()
        .map(|v| v.iter().cloned().fold(f64::INFINITY, f64::min))
        .sum()
}

/// A primal/dual certificate.
#[derive(Debug, Clone)]
pub struct GapReport {
    /// Minimum of `H` over the rounded greedy chain.
    pub primal_best: f64,
    /// `H(0) + dual_value_b_polytope(w)`; a lower bound on `min H` whenever
    /// `w` is provenance-certified.
    pub dual_value: f64,
    pub gap: f64,
    pub evals: u64,
    pub wallclock_ms: u64,
    /// False when `w` carried no provenance, in which case the dual value is
    /// not a certificate.
    pub certified: bool,
}

impl GapReport {
    /// Fixed-column CSV row: `primal,dual,gap,evals,ms`.
    pub fn csv_row(&self) -> String {
        format!(
            "{:.17e},{:.17e},{:.17e},{},{}",
            self.primal_best, self.dual_value, self.gap, self.evals, self.wallclock_ms
        )
    }
}

/// Certified duality gap for the pair `(rho, w)`.
pub fn certify_gap(
    oracle: &ValueOracle,
    domain: &ProductDomain,
    rho: &Rho,
    w: &DualPoint,
) -> Result<GapReport> {
    if !w.matches(domain) {
        return Err(Error::ShapeMismatch("dual point does not match domain".into()));
    }
    let start = std::time::Instant::now();
    let evals_before = oracle.eval_count();
    let (_, primal_best) = round_best(oracle, domain, rho)?;
    let h0 = oracle.eval(&domain.origin());
    let dual_value = h0 + dual_value_b_polytope(w);
    Ok(GapReport {
        primal_best,
        dual_value,
        gap: primal_best - dual_value,
        evals: oracle.eval_count() - evals_before,
        wallclock_ms: start.elapsed().as_millis() as u64,
        certified: w.is_certified(),
    })
}

/// Result of the exhaustive `W(H)` membership check.
#[derive(Debug, Clone)]
pub struct MembershipReport {
    pub member: bool,
    /// Largest `lhs - rhs` over the inequality family.
    pub worst_violation: f64,
    /// Lexicographically smallest point attaining the worst violation.
    pub witness: Point,
    /// Signed error of the top-sum equality.
    pub top_gap: f64,
}

/// Exhaustively verify `sum_i sum_{y<=x_i} w_i(y) <= H(x) - H(0) + tol` for
/// every grid point, plus the top equality.
pub fn check_w_membership(
    oracle: &ValueOracle,
    domain: &ProductDomain,
    w: &DualPoint,
    max_evals: u64,
) -> Result<MembershipReport> {
    if !w.matches(domain) {
        return Err(Error::ShapeMismatch("dual point does not match domain".into()));
    }
    let total = domain.num_points().ok_or(Error::BudgetExceeded {
        needed: u64::MAX,
        cap: max_evals,
    })?;
    if total > max_evals {
        return Err(Error::BudgetExceeded {
            needed: total,
            cap: max_evals,
        });
    }
    let cum = w.cumulative();
    let h0 = oracle.eval(&domain.origin());
    let mut worst = f64::NEG_INFINITY;
    let mut witness = domain.origin();
    for x in domain.iter_points() {
        let lhs: f64 = (0..domain.num_blocks()).map(|i| cum[i][x[i]]).sum();
        let violation = lhs - (oracle.eval(&x) - h0);
        if violation > worst {
            worst = violation;
            witness = x;
        }
    }
    let top = domain.top();
    let top_lhs: f64 = (0..domain.num_blocks()).map(|i| cum[i][top[i]]).sum();
    let top_gap = top_lhs - (oracle.eval(&top) - h0);
    Ok(MembershipReport {
        member: worst <= POLYHEDRAL_TOL && top_gap.abs() <= POLYHEDRAL_TOL,
        worst_violation: worst,
        witness,
        top_gap,
    })
}

/// Membership in the cone `K`: all proper cumulative sums nonpositive and
/// every block total zero.
pub fn check_k_cone(w: &DualPoint) -> bool {
    w.cumulative().iter().all(|v| {
        let m = v.len() - 1;
        v[1..m].iter().all(|&s| s <= POLYHEDRAL_TOL) && v[m].abs() <= POLYHEDRAL_TOL
    })
}
