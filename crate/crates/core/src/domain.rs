//! Product domains, the function-oracle contract and restrictions.
//!
//! A problem instance is a pair `(ValueOracle, ProductDomain)`: the domain
//! fixes the block sizes `k_i` (and optionally real grid coordinates per
//! variable), the oracle evaluates `H` at integer grid points and carries
//! per-coordinate Lipschitz bounds together with an evaluation counter.

use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// A product of finite ordered sets `{0,..,k_1-1} x .. x {0,..,k_n-1}`.
#[derive(Debug, Clone)]
pub struct ProductDomain {
    k: Vec<usize>,
    grid: Option<Vec<Vec<f64>>>,
}

impl ProductDomain {
    /// Domain with the given block sizes; every `k_i` must be at least 2.
    pub fn new(k: Vec<usize>) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::InvalidDomain("no blocks".into()));
        }
        if let Some(&bad) = k.iter().find(|&&ki| ki < 2) {
            return Err(Error::InvalidDomain(format!("block size {bad} < 2")));
        }
        Ok(Self { k, grid: None })
    }

    /// Attach real grid coordinates (one strictly increasing vector of
    /// length `k_i` per block).
    pub fn with_grid(mut self, grid: Vec<Vec<f64>>) -> Result<Self> {
        if grid.len() != self.k.len() {
            return Err(Error::InvalidDomain("grid block count mismatch".into()));
        }
        for (i, g) in grid.iter().enumerate() {
            if g.len() != self.k[i] {
                return Err(Error::InvalidDomain(format!("grid length mismatch in block {i}")));
            }
            if g.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidDomain(format!(
                    "grid coordinates not strictly increasing in block {i}"
                )));
            }
        }
        self.grid = Some(grid);
        Ok(self)
    }

    /// Sub-box constructor used by restriction; unit blocks are allowed here
    /// (they carry no extension entries and every algorithm treats them as
    /// fixed coordinates).
    pub(crate) fn sub_box(k: Vec<usize>, grid: Option<Vec<Vec<f64>>>) -> Self {
        debug_assert!(k.iter().all(|&ki| ki >= 1));
        Self { k, grid }
    }

    pub fn num_blocks(&self) -> usize {
        self.k.len()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.k
    }

    pub fn grid(&self) -> Option<&[Vec<f64>]> {
        self.grid.as_deref()
    }

    /// Number of extension entries `r = sum_i (k_i - 1)`.
    pub fn num_entries(&self) -> usize {
        self.k.iter().map(|&ki| ki - 1).sum()
    }

    /// Total number of grid points; `None` on overflow.
    pub fn num_points(&self) -> Option<u64> {
        self.k
            .iter()
            .try_fold(1u64, |acc, &ki| acc.checked_mul(ki as u64))
    }

    pub fn contains(&self, x: &Point) -> bool {
        x.coords().len() == self.k.len()
            && x.coords().iter().zip(&self.k).all(|(&xi, &ki)| xi < ki)
    }

    pub fn origin(&self) -> Point {
        Point::new(vec![0; self.k.len()])
    }

    pub fn top(&self) -> Point {
        Point::new(self.k.iter().map(|&ki| ki - 1).collect())
    }

    /// Real coordinate of grid index `xi` in block `i` (the index itself
    /// when no grid is attached).
    pub fn coordinate(&self, i: usize, xi: usize) -> f64 {
        match &self.grid {
            Some(g) => g[i][xi],
            None => xi as f64,
        }
    }

    /// Iterate over every point of the domain in lexicographic order.
    pub fn iter_points(&self) -> PointIter<'_> {
        PointIter {
            k: &self.k,
            next: Some(vec![0; self.k.len()]),
        }
    }
}

pub struct PointIter<'a> {
    k: &'a [usize],
    next: Option<Vec<usize>>,
}

impl Iterator for PointIter<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        // Lexicographic order: last coordinate varies fastest.
        let mut i = self.k.len();
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            i -= 1;
            if succ[i] + 1 < self.k[i] {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(Point::new(cur))
    }
}

/// A grid point `x` with `x_i` in `{0,..,k_i-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<usize>);

impl Point {
    pub fn new(coords: Vec<usize>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Point) -> bool {
        self.0.iter().zip(other.coords()).all(|(&a, &b)| a <= b)
    }
}

impl std::ops::Index<usize> for Point {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

type EvalFn = dyn Fn(&Point) -> f64 + Send + Sync;

/// A pure evaluation oracle for `H` with per-coordinate Lipschitz bounds
/// `B_i` (a bound on `|H(x+e_i)-H(x)|` over unit steps) and a shared
/// evaluation counter.
///
/// Oracles are pure: repeated evaluation of the same point returns bitwise
/// identical values, and concurrent evaluation is permitted. Restrictions
/// share the counter of the oracle they were derived from, so the counter
/// tallies every underlying evaluation of `H` regardless of which handle
/// issued it.
#[derive(Clone)]
pub struct ValueOracle {
    eval_fn: Arc<EvalFn>,
    lipschitz: Vec<f64>,
    evals: Arc<AtomicU64>,
}

impl ValueOracle {
    pub fn new(lipschitz: Vec<f64>, eval_fn: impl Fn(&Point) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval_fn: Arc::new(eval_fn),
            lipschitz,
            evals: Arc::new(AtomicU64::new(0)),
        }
    }

    /// Oracle backed by a dense value table in lexicographic point order.
    pub fn from_table(domain: &ProductDomain, table: Vec<f64>) -> Result<Self> {
        let n = domain
            .num_points()
            .ok_or_else(|| Error::InvalidDomain("domain too large for a table".into()))?;
        if table.len() as u64 != n {
            return Err(Error::ShapeMismatch(format!(
                "table has {} entries, domain has {n} points",
                table.len()
            )));
        }
        let k = domain.block_sizes().to_vec();
        let oracle = Self::new(vec![0.0; k.len()], move |x: &Point| {
            let mut idx = 0usize;
            for (i, &ki) in k.iter().enumerate() {
                idx = idx * ki + x[i];
            }
            table[idx]
        });
        Ok(oracle.with_exhaustive_lipschitz(domain))
    }

    pub fn eval(&self, x: &Point) -> f64 {
        self.evals.fetch_add(1, AtomicOrdering::Relaxed);
        (self.eval_fn)(x)
    }

    pub fn eval_count(&self) -> u64 {
        self.evals.load(AtomicOrdering::Relaxed)
    }

    pub fn lipschitz(&self) -> &[f64] {
        &self.lipschitz
    }

    pub fn set_lipschitz(&mut self, bounds: Vec<f64>) {
        self.lipschitz = bounds;
    }

    /// Replace the Lipschitz bounds by exhaustive unit-step maxima. The scan
    /// bypasses the evaluation counter (it is construction-time audit work,
    /// not algorithmic querying).
    pub fn with_exhaustive_lipschitz(mut self, domain: &ProductDomain) -> Self {
        let n = domain.num_blocks();
        let mut bounds = vec![0.0f64; n];
        for x in domain.iter_points() {
            let hx = (self.eval_fn)(&x);
            for i in 0..n {
                if x[i] + 1 < domain.block_sizes()[i] {
                    let mut up = x.coords().to_vec();
                    up[i] += 1;
                    let diff = ((self.eval_fn)(&Point::new(up)) - hx).abs();
                    if diff > bounds[i] {
                        bounds[i] = diff;
                    }
                }
            }
        }
        self.lipschitz = bounds;
        self
    }
}

impl std::fmt::Debug for ValueOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ValueOracle")
            .field("lipschitz", &self.lipschitz)
            .field("evals", &self.eval_count())
            .finish()
    }
}

/// Restriction of `oracle` to the sub-box `prod_i {lower_i,..,upper_i}`.
///
/// The returned oracle evaluates `H` at offset points, inherits the
/// Lipschitz bounds and shares the evaluation counter. Blocks may become
/// unit-sized; such coordinates are simply pinned.
pub fn restrict(
    oracle: &ValueOracle,
    domain: &ProductDomain,
    lower: &Point,
    upper: &Point,
) -> Result<(ValueOracle, ProductDomain)> {
    if lower.len() != domain.num_blocks() || upper.len() != domain.num_blocks() {
        return Err(Error::ShapeMismatch("restriction corner length".into()));
    }
    for i in 0..domain.num_blocks() {
        if upper[i] >= domain.block_sizes()[i] {
            return Err(Error::OutOfRange {
                index: i,
                value: upper[i],
                size: domain.block_sizes()[i],
            });
        }
        if lower[i] > upper[i] {
            return Err(Error::InvalidDomain(format!(
                "restriction corner order violated in block {i}"
            )));
        }
    }
    let k: Vec<usize> = (0..domain.num_blocks())
        .map(|i| upper[i] - lower[i] + 1)
        .collect();
    let grid = domain.grid().map(|g| {
        (0..domain.num_blocks())
            .map(|i| g[i][lower[i]..=upper[i]].to_vec())
            .collect()
    });
    let sub = ProductDomain::sub_box(k, grid);
    let offset = lower.coords().to_vec();
    let inner = oracle.eval_fn.clone();
    let restricted = ValueOracle {
        eval_fn: Arc::new(move |x: &Point| {
            let shifted: Vec<usize> = x.coords().iter().zip(&offset).map(|(&a, &b)| a + b).collect();
            inner(&Point::new(shifted))
        }),
        lipschitz: oracle.lipschitz.clone(),
        evals: oracle.evals.clone(),
    };
    Ok((restricted, sub))
}

/// A set-function on subsets of `{0,..,n-1}`, encoded as 0/1 vectors.
#[derive(Clone)]
pub struct SetFunction {
    n: usize,
    eval_fn: Arc<dyn Fn(&[bool]) -> f64 + Send + Sync>,
}

impl SetFunction {
    pub fn new(n: usize, eval_fn: impl Fn(&[bool]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            n,
            eval_fn: Arc::new(eval_fn),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn eval(&self, members: &[bool]) -> f64 {
        debug_assert_eq!(members.len(), self.n);
        (self.eval_fn)(members)
    }

    /// View as a grid oracle on `{0,1}^n`.
    pub fn to_oracle(&self) -> (ValueOracle, ProductDomain) {
        let domain = ProductDomain::new(vec![2; self.n]).expect("n >= 1");
        let f = self.clone();
        let oracle = ValueOracle::new(vec![0.0; self.n], move |x: &Point| {
            let bits: Vec<bool> = x.coords().iter().map(|&v| v == 1).collect();
            f.eval(&bits)
        })
        .with_exhaustive_lipschitz(&domain);
        (oracle, domain)
    }

    /// `g(A) = |A|`.
    pub fn cardinality(n: usize) -> Self {
        Self::new(n, |m| m.iter().filter(|&&b| b).count() as f64)
    }

    /// `g(A) = min(|A|, 1)`.
    pub fn coverage(n: usize) -> Self {
        Self::new(n, |m| if m.iter().any(|&b| b) { 1.0 } else { 0.0 })
    }

    /// Cut function of the chain graph `0-1-..-(n-1)` with uniform weight.
    pub fn chain_cut(n: usize, weight: f64) -> Self {
        Self::new(n, move |m| {
            m.windows(2).filter(|w| w[0] != w[1]).count() as f64 * weight
        })
    }
}

impl std::fmt::Debug for SetFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SetFunction").field("n", &self.n).finish()
    }
}

/// Outcome of the exhaustive submodularity check.
#[derive(Debug, Clone)]
pub enum SubmodularityCheck {
    Holds,
    /// First violation found: base point `x` and coordinate pair `(i, j)`
    /// with `H(x+e_i) + H(x+e_j) < H(x) + H(x+e_i+e_j) - tol`.
    Violated { x: Point, i: usize, j: usize },
}

impl SubmodularityCheck {
    pub fn holds(&self) -> bool {
        matches!(self, SubmodularityCheck::Holds)
    }
}

pub const SUBMODULARITY_TOL: f64 = 1e-9;

/// Exhaustive check of the unit-increment submodularity inequalities
/// `H(x+e_i) + H(x+e_j) >= H(x) + H(x+e_i+e_j) - tol` over every point and
/// coordinate pair. The full value table is materialized first, so the cost
/// in oracle evaluations is exactly the number of grid points; that predicted
/// count is checked against `max_evals` up front.
pub fn is_submodular_bruteforce(
    oracle: &ValueOracle,
    domain: &ProductDomain,
    tol: f64,
    max_evals: u64,
) -> Result<SubmodularityCheck> {
    let total = domain
        .num_points()
        .ok_or(Error::BudgetExceeded {
            needed: u64::MAX,
            cap: max_evals,
        })?;
    if total > max_evals {
        return Err(Error::BudgetExceeded {
            needed: total,
            cap: max_evals,
        });
    }
    let n = domain.num_blocks();
    let k = domain.block_sizes();
    // Row-major table, lexicographic order (last coordinate fastest).
    let mut table = Vec::with_capacity(total as usize);
    for x in domain.iter_points() {
        table.push(oracle.eval(&x));
    }
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * k[i + 1];
    }
    for (flat, x) in domain.iter_points().enumerate() {
        for i in 0..n {
            if x[i] + 1 >= k[i] {
                continue;
            }
            for j in (i + 1)..n {
                if x[j] + 1 >= k[j] {
                    continue;
                }
                let base = table[flat];
                let up_i = table[flat + strides[i]];
                let up_j = table[flat + strides[j]];
                let up_ij = table[flat + strides[i] + strides[j]];
                if up_i + up_j < base + up_ij - tol {
                    return Ok(SubmodularityCheck::Violated { x, i, j });
                }
            }
        }
    }
    Ok(SubmodularityCheck::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modular2() -> (ValueOracle, ProductDomain) {
        let domain = ProductDomain::new(vec![2, 2]).unwrap();
        let oracle = ValueOracle::new(vec![1.0, 1.0], |x: &Point| (x[0] + x[1]) as f64);
        (oracle, domain)
    }

    fn product2() -> (ValueOracle, ProductDomain) {
        let domain = ProductDomain::new(vec![2, 2]).unwrap();
        let oracle = ValueOracle::new(vec![1.0, 1.0], |x: &Point| (x[0] * x[1]) as f64);
        (oracle, domain)
    }

    #[test]
    fn modular_is_submodular() {
        let (oracle, domain) = modular2();
        assert!(is_submodular_bruteforce(&oracle, &domain, 1e-9, 1_000)
            .unwrap()
            .holds());
    }

    #[test]
    fn product_violates_with_witness() {
        let (oracle, domain) = product2();
        match is_submodular_bruteforce(&oracle, &domain, 1e-9, 1_000).unwrap() {
            SubmodularityCheck::Violated { x, i, j } => {
                assert_eq!(x.coords(), &[0, 0]);
                assert_eq!((i, j), (0, 1));
            }
            SubmodularityCheck::Holds => panic!("x1*x2 reported submodular"),
        }
    }

    #[test]
    fn budget_error() {
        let (oracle, domain) = modular2();
        match is_submodular_bruteforce(&oracle, &domain, 1e-9, 3) {
            Err(Error::BudgetExceeded { needed: 4, cap: 3 }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn restrict_offsets_evaluation() {
        let (oracle, domain) = modular2();
        let (sub, sub_dom) = restrict(
            &oracle,
            &domain,
            &Point::new(vec![1, 0]),
            &Point::new(vec![1, 1]),
        )
        .unwrap();
        assert_eq!(sub_dom.block_sizes(), &[1, 2]);
        // eval(0,1) on the sub-box equals H(1,1).
        assert_eq!(sub.eval(&Point::new(vec![0, 1])), 2.0);
    }

    #[test]
    fn restrict_composes() {
        let domain = ProductDomain::new(vec![5, 5]).unwrap();
        let oracle = ValueOracle::new(vec![0.0; 2], |x: &Point| (10 * x[0] + x[1]) as f64);
        let (a, da) = restrict(&oracle, &domain, &Point::new(vec![1, 1]), &Point::new(vec![4, 4])).unwrap();
        let (b, _db) = restrict(&a, &da, &Point::new(vec![2, 0]), &Point::new(vec![3, 3])).unwrap();
        let (c, _dc) = restrict(&oracle, &domain, &Point::new(vec![3, 1]), &Point::new(vec![4, 4])).unwrap();
        for p in [[0usize, 0], [1, 2], [0, 3]] {
            let pt = Point::new(p.to_vec());
            assert_eq!(b.eval(&pt), c.eval(&pt));
        }
    }

    #[test]
    fn restrict_range_error() {
        let (oracle, domain) = modular2();
        assert!(restrict(
            &oracle,
            &domain,
            &Point::new(vec![0, 0]),
            &Point::new(vec![2, 1])
        )
        .is_err());
    }

    #[test]
    fn counter_counts_every_call_through_any_handle() {
        let (oracle, domain) = modular2();
        let before = oracle.eval_count();
        oracle.eval(&Point::new(vec![0, 0]));
        let (sub, _) = restrict(
            &oracle,
            &domain,
            &Point::new(vec![0, 0]),
            &Point::new(vec![1, 1]),
        )
        .unwrap();
        sub.eval(&Point::new(vec![1, 1]));
        assert_eq!(oracle.eval_count() - before, 2);
    }

    #[test]
    fn deterministic_repeated_evaluations() {
        let domain = ProductDomain::new(vec![4, 4, 4]).unwrap();
        let oracle = ValueOracle::new(
            vec![0.0; 3],
            |x: &Point| ((x[0] as f64) * 0.37 + (x[1] as f64).sqrt() - (x[2] as f64) * 1.1).exp(),
        );
        for x in domain.iter_points().take(10) {
            let v0 = oracle.eval(&x);
            for _ in 0..100 {
                assert_eq!(v0.to_bits(), oracle.eval(&x).to_bits());
            }
        }
    }

    #[test]
    fn lexicographic_iteration() {
        let domain = ProductDomain::new(vec![2, 3]).unwrap();
        let pts: Vec<Vec<usize>> = domain.iter_points().map(|p| p.coords().to_vec()).collect();
        assert_eq!(
            pts,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![1, 2]
            ]
        );
    }

    #[test]
    fn table_oracle_and_lipschitz() {
        let domain = ProductDomain::new(vec![2, 2]).unwrap();
        let oracle = ValueOracle::from_table(&domain, vec![0.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(oracle.eval(&Point::new(vec![0, 1])), 1.0);
        assert_eq!(oracle.eval(&Point::new(vec![1, 1])), 1.0);
        assert_eq!(oracle.lipschitz(), &[1.0, 1.0]);
    }
}
