//! The convex extension of `H` to products of nonincreasing vectors, its
//! evaluation and subgradients via the greedy algorithm, the threshold map
//! and rounding back to grid points.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::{Point, ProductDomain, ValueOracle};
use crate::error::{Error, Result};

/// Tolerance below which a within-block monotonicity violation is treated as
/// a tie rather than an error.
pub const MONOTONE_TOL: f64 = 1e-12;

/// The extension argument: one real vector of length `k_i - 1` per block.
///
/// Feasible form (post-projection) has each block nonincreasing with entries
/// in `[0,1]`; raw arguments are unconstrained but every evaluation path
/// rejects blocks that are not nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Rho {
    blocks: Vec<Vec<f64>>,
}

impl Rho {
    pub fn new(blocks: Vec<Vec<f64>>) -> Self {
        Self { blocks }
    }

    /// All entries equal to `value` on the shape of `domain`.
    pub fn constant(domain: &ProductDomain, value: f64) -> Self {
        Self {
            blocks: domain
                .block_sizes()
                .iter()
                .map(|&ki| vec![value; ki - 1])
                .collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<f64>] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_entries(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn matches(&self, domain: &ProductDomain) -> bool {
        self.blocks.len() == domain.num_blocks()
            && self
                .blocks
                .iter()
                .zip(domain.block_sizes())
                .all(|(b, &ki)| b.len() == ki - 1)
    }

    /// First within-block monotonicity violation above `MONOTONE_TOL`.
    pub fn check_nonincreasing(&self) -> Result<()> {
        for (bi, block) in self.blocks.iter().enumerate() {
            for j in 1..block.len() {
                let violation = block[j] - block[j - 1];
                if violation > MONOTONE_TOL {
                    return Err(Error::NotMonotone {
                        block: bi,
                        index: j,
                        violation,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_feasible_form(&self) -> bool {
        self.check_nonincreasing().is_ok()
            && self
                .blocks
                .iter()
                .flatten()
                .all(|&v| (-MONOTONE_TOL..=1.0 + MONOTONE_TOL).contains(&v))
    }

    /// Seeded random feasible-form argument (per block: sorted uniforms).
    pub fn random_feasible(domain: &ProductDomain, seed: u64) -> Self {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let blocks = domain
            .block_sizes()
            .iter()
            .map(|&ki| {
                let mut b: Vec<f64> = (0..ki - 1).map(|_| rng.gen::<f64>()).collect();
                b.sort_by(|a, b| b.partial_cmp(a).unwrap());
                b
            })
            .collect();
        Self { blocks }
    }

    /// Blockwise dot product with a vector of the same shape.
    pub fn dot(&self, other: &[Vec<f64>]) -> f64 {
        self.blocks
            .iter()
            .zip(other)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
            .sum()
    }
}

/// A joint ordering of all `r` extension entries: pairs `(block, level)`
/// with `level` 1-based, listed by nonincreasing threshold value.
#[derive(Debug, Clone, PartialEq)]
pub struct Ordering {
    pairs: Vec<(u32, u32)>,
    thresholds: Vec<f64>,
}

impl Ordering {
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Threshold map: the grid point selected by level `t`.
///
/// Component `i` is the number of entries of block `i` strictly above `t`,
/// which realizes the documented tie rule (exact breakpoints resolve to the
/// lower coordinate).
pub fn theta(rho: &Rho, t: f64) -> Point {
    Point::new(
        rho.blocks()
            .iter()
            .map(|block| block.iter().filter(|&&v| v > t).count())
            .collect(),
    )
}

/// A total order of all entries, nonincreasing in value, respecting the
/// within-block index order; ties across blocks are broken by the seeded
/// generator.
pub fn compatible_ordering(rho: &Rho, seed: u64) -> Result<Ordering> {
    rho.check_nonincreasing()?;
    let mut items: Vec<(f64, u32, u32)> = Vec::with_capacity(rho.num_entries());
    for (bi, block) in rho.blocks().iter().enumerate() {
        let mut prev = f64::INFINITY;
        for (j, &v) in block.iter().enumerate() {
            // Entries above the previous one by at most MONOTONE_TOL are
            // clamped so the ordering stays valid.
            let v = v.min(prev);
            prev = v;
            items.push((v, bi as u32, (j + 1) as u32));
        }
    }
    items.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.2.cmp(&b.2)));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut start = 0;
    while start < items.len() {
        let mut end = start + 1;
        while end < items.len() && items[end].0 == items[start].0 {
            end += 1;
        }
        if end - start > 1 {
            let group = &mut items[start..end];
            group.shuffle(&mut rng);
            // Within the tie group restore increasing level order per block:
            // shuffle decides the interleaving of blocks, the levels of each
            // block are reassigned in ascending order at its slots.
            let mut by_block: Vec<(u32, Vec<u32>)> = Vec::new();
            for &(_, b, j) in group.iter() {
                match by_block.iter_mut().find(|(bb, _)| *bb == b) {
                    Some((_, js)) => js.push(j),
                    None => by_block.push((b, vec![j])),
                }
            }
            for (_, js) in by_block.iter_mut() {
                js.sort_unstable();
            }
            for item in group.iter_mut() {
                let (_, js) = by_block.iter_mut().find(|(bb, _)| *bb == item.1).unwrap();
                item.2 = js.remove(0);
            }
        }
        start = end;
    }

    Ok(Ordering {
        pairs: items.iter().map(|&(_, b, j)| (b, j)).collect(),
        thresholds: items.iter().map(|&(t, _, _)| t).collect(),
    })
}

/// Output of one greedy evaluation.
#[derive(Debug, Clone)]
pub struct GreedyOutput {
    /// Subgradient blocks, `w_i(j) = H[y(s)] - H[y(s-1)]` for the step that
    /// increments block `i` to level `j`.
    pub w: Vec<Vec<f64>>,
    /// Extension value.
    pub value: f64,
    /// Chain point with minimal `H`.
    pub best_point: Point,
    pub best_value: f64,
    /// Visited points `y(0),..,y(r)`.
    pub chain: Vec<Point>,
    /// Values `H[y(0)],..,H[y(r)]`.
    pub chain_values: Vec<f64>,
    /// The ordering used (tie-breaks included), sufficient to recompute `w`.
    pub ordering: Arc<Ordering>,
}

/// Walk the increment chain of an ordering and evaluate `H` along it. This
/// is the value-recomputation backbone shared by `greedy` and provenance
/// checks; it issues exactly `r + 1` oracle evaluations.
pub fn chain_of_ordering(
    oracle: &ValueOracle,
    domain: &ProductDomain,
    ordering: &Ordering,
) -> (Vec<Point>, Vec<f64>) {
    let mut points = Vec::with_capacity(ordering.len() + 1);
    let mut values = Vec::with_capacity(ordering.len() + 1);
    let mut cur = vec![0usize; domain.num_blocks()];
    points.push(Point::new(cur.clone()));
    values.push(oracle.eval(&points[0]));
    for &(b, _) in ordering.pairs() {
        cur[b as usize] += 1;
        let p = Point::new(cur.clone());
        values.push(oracle.eval(&p));
        points.push(p);
    }
    (points, values)
}

/// Subgradient blocks of an ordering, recomputed from its chain.
pub fn vertex_of_ordering(
    oracle: &ValueOracle,
    domain: &ProductDomain,
    ordering: &Ordering,
) -> Vec<Vec<f64>> {
    let (_, values) = chain_of_ordering(oracle, domain, ordering);
    let mut w: Vec<Vec<f64>> = domain
        .block_sizes()
        .iter()
        .map(|&ki| vec![0.0; ki - 1])
        .collect();
    for (s, &(b, j)) in ordering.pairs().iter().enumerate() {
        w[b as usize][(j - 1) as usize] = values[s + 1] - values[s];
    }
    w
}

/// Greedy evaluation of the extension at `rho`, with subgradient, chain and
/// rounded best point. Rejects arguments whose blocks are not nonincreasing.
pub fn greedy(oracle: &ValueOracle, domain: &ProductDomain, rho: &Rho, seed: u64) -> Result<GreedyOutput> {
    if !rho.matches(domain) {
        return Err(Error::ShapeMismatch("rho does not match domain".into()));
    }
    let ordering = compatible_ordering(rho, seed)?;
    let (chain, chain_values) = chain_of_ordering(oracle, domain, &ordering);
    for (p, v) in chain.iter().zip(&chain_values) {
        if !v.is_finite() {
            return Err(Error::NonFiniteValue(p.coords().to_vec()));
        }
    }
    let mut w: Vec<Vec<f64>> = domain
        .block_sizes()
        .iter()
        .map(|&ki| vec![0.0; ki - 1])
        .collect();
    let mut value = chain_values[0];
    for (s, &(b, j)) in ordering.pairs().iter().enumerate() {
        let delta = chain_values[s + 1] - chain_values[s];
        w[b as usize][(j - 1) as usize] = delta;
        value += ordering.thresholds()[s] * delta;
    }
    let (best_idx, &best_value) = chain_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .expect("chain nonempty");
    Ok(GreedyOutput {
        w,
        value,
        best_point: chain[best_idx].clone(),
        best_value,
        chain,
        chain_values,
        ordering: Arc::new(ordering),
    })
}

/// Extension value only.
pub fn evaluate_extension(oracle: &ValueOracle, domain: &ProductDomain, rho: &Rho) -> Result<f64> {
    greedy(oracle, domain, rho, 0).map(|out| out.value)
}

/// Best grid point over the greedy chain of `rho` (endpoints included).
pub fn round_best(oracle: &ValueOracle, domain: &ProductDomain, rho: &Rho) -> Result<(Point, f64)> {
    greedy(oracle, domain, rho, 0).map(|out| (out.best_point, out.best_value))
}
