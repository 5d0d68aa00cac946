//! Pool-adjacent-violators solver for Euclidean projection onto
//! nonincreasing sequences, with box clamping for the feasible set of the
//! subgradient method.

use crate::extension::Rho;

/// A weighted least-squares isotonic instance.
#[derive(Debug, Clone)]
pub struct IsotonicProblem {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
}

impl IsotonicProblem {
    pub fn new(values: Vec<f64>) -> Self {
        let weights = vec![1.0; values.len()];
        Self { values, weights }
    }

    pub fn weighted(values: Vec<f64>, weights: Vec<f64>) -> Self {
        assert_eq!(values.len(), weights.len());
        assert!(weights.iter().all(|&w| w > 0.0), "weights must be positive");
        Self { values, weights }
    }
}

/// Group boundaries of a pooled fit: `groups[g] = (start, end_exclusive)`.
pub type PoolPattern = Vec<(usize, usize)>;

/// Weighted least-squares nonincreasing fit, stack-based, O(m).
///
/// Returns the fitted vector and the pooled-group pattern. Pooled values are
/// computed once per group and assigned to every index of the group, so the
/// output is nonincreasing under exact comparison.
pub fn pava_nonincreasing_with_pattern(p: &IsotonicProblem) -> (Vec<f64>, PoolPattern) {
    let m = p.values.len();
    // Stack of (mean, weight, count).
    let mut means: Vec<f64> = Vec::with_capacity(m);
    let mut weights: Vec<f64> = Vec::with_capacity(m);
    let mut counts: Vec<usize> = Vec::with_capacity(m);
    for i in 0..m {
        let mut mean = p.values[i];
        let mut weight = p.weights[i];
        let mut count = 1usize;
        while let Some(&last) = means.last() {
            if last >= mean {
                break;
            }
            let lw = weights.pop().unwrap();
            let lc = counts.pop().unwrap();
            means.pop();
            mean = (last * lw + mean * weight) / (lw + weight);
            weight += lw;
            count += lc;
        }
        means.push(mean);
        weights.push(weight);
        counts.push(count);
    }
    let mut out = Vec::with_capacity(m);
    let mut pattern = Vec::with_capacity(means.len());
    let mut start = 0usize;
    for (g, &mean) in means.iter().enumerate() {
        let end = start + counts[g];
        out.resize(end, mean);
        pattern.push((start, end));
        start = end;
    }
    (out, pattern)
}

/// Weighted least-squares nonincreasing fit.
pub fn pava_nonincreasing(p: &IsotonicProblem) -> Vec<f64> {
    pava_nonincreasing_with_pattern(p).0
}

/// Euclidean projection of a raw extension argument onto the feasible set
/// (blockwise nonincreasing with entries in `[0,1]`): blockwise PAVA then
/// clamp. Clamping a monotone vector keeps it monotone, and the composition
/// satisfies the projection variational inequality for the intersection.
pub fn project_feasible(raw: &Rho) -> Rho {
    Rho::new(
        raw.blocks()
            .iter()
            .map(|block| {
                let fit = pava_nonincreasing(&IsotonicProblem::new(block.clone()));
                fit.into_iter().map(|v| v.clamp(0.0, 1.0)).collect()
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Brute-force projection onto the nonincreasing cone by enumerating all
    /// consecutive pooling patterns; used to freeze expected vectors.
    fn bruteforce_cone(values: &[f64], weights: &[f64]) -> Vec<f64> {
        let m = values.len();
        assert!(m <= 12);
        let mut best: Option<(f64, Vec<f64>)> = None;
        for mask in 0..(1u32 << (m - 1)) {
            // Bit i set = cut between i and i+1.
            let mut candidate = vec![0.0; m];
            let mut start = 0usize;
            let mut means = Vec::new();
            for i in 0..m {
                if i + 1 == m || mask >> i & 1 == 1 {
                    let (mut num, mut den) = (0.0, 0.0);
                    for j in start..=i {
                        num += weights[j] * values[j];
                        den += weights[j];
                    }
                    let mean = num / den;
                    means.push(mean);
                    for j in start..=i {
                        candidate[j] = mean;
                    }
                    start = i + 1;
                }
            }
            if means.windows(2).any(|w| w[0] < w[1] - 1e-12) {
                continue;
            }
            let cost: f64 = (0..m)
                .map(|j| weights[j] * (candidate[j] - values[j]).powi(2))
                .sum();
            if best.as_ref().map_or(true, |(c, _)| cost < *c) {
                best = Some((cost, candidate));
            }
        }
        best.unwrap().1
    }

    /// Brute-force projection onto {nonincreasing} ∩ [0,1]^m: clamped pooled
    /// means over every consecutive pattern, feasibility-filtered.
    fn bruteforce_box(values: &[f64]) -> Vec<f64> {
        let m = values.len();
        let mut best: Option<(f64, Vec<f64>)> = None;
        for mask in 0..(1u32 << (m - 1)) {
            let mut candidate = vec![0.0; m];
            let mut start = 0usize;
            let mut means = Vec::new();
            for i in 0..m {
                if i + 1 == m || mask >> i & 1 == 1 {
                    let mean: f64 = values[start..=i].iter().sum::<f64>() / (i + 1 - start) as f64;
                    let v = mean.clamp(0.0, 1.0);
                    means.push(v);
                    for j in start..=i {
                        candidate[j] = v;
                    }
                    start = i + 1;
                }
            }
            if means.windows(2).any(|w| w[0] < w[1] - 1e-12) {
                continue;
            }
            let cost: f64 = (0..m).map(|j| (candidate[j] - values[j]).powi(2)).sum();
            if best.as_ref().map_or(true, |(c, _)| cost < *c) {
                best = Some((cost, candidate));
            }
        }
        best.unwrap().1
    }

    #[test]
    fn symmetric_pool() {
        let fit = pava_nonincreasing(&IsotonicProblem::new(vec![0.2, 0.8]));
        assert_eq!(fit, vec![0.5, 0.5]);
    }

    #[test]
    fn already_feasible_identity() {
        let fit = pava_nonincreasing(&IsotonicProblem::new(vec![3.0, 2.0, 1.0]));
        assert_eq!(fit, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn weighted_pool_matches_bruteforce() {
        let values = vec![1.0, 3.0, 2.0];
        let weights = vec![1.0, 1.0, 2.0];
        let expect = bruteforce_cone(&values, &weights);
        let fit = pava_nonincreasing(&IsotonicProblem::weighted(values, weights));
        for (a, b) in fit.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12, "{fit:?} vs {expect:?}");
        }
        // Frozen from the brute-force oracle.
        assert_eq!(fit, vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn project_feasible_examples() {
        let p = project_feasible(&Rho::new(vec![vec![1.4, -0.2]]));
        assert_eq!(p.blocks()[0], vec![1.0, 0.0]);
        let p = project_feasible(&Rho::new(vec![vec![0.2, 0.8]]));
        assert_eq!(p.blocks()[0], vec![0.5, 0.5]);
    }

    #[test]
    fn project_matches_bruteforce_on_random_blocks() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..500 {
            let m = rng.gen_range(1..=6);
            let block: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..2.0)).collect();
            let got = project_feasible(&Rho::new(vec![block.clone()]));
            let expect = bruteforce_box(&block);
            for (a, b) in got.blocks()[0].iter().zip(&expect) {
                assert!((a - b).abs() < 1e-9, "{block:?}: {got:?} vs {expect:?}");
            }
        }
    }

    #[test]
    fn cone_matches_bruteforce_weighted_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let m = rng.gen_range(1..=6);
            let values: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let weights: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..3.0)).collect();
            let expect = bruteforce_cone(&values, &weights);
            let fit = pava_nonincreasing(&IsotonicProblem::weighted(values.clone(), weights));
            for (a, b) in fit.iter().zip(&expect) {
                assert!((a - b).abs() < 1e-9, "{values:?}: {fit:?} vs {expect:?}");
            }
        }
    }

    #[test]
    fn projection_variational_inequality() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let m = rng.gen_range(2..=6);
            let a: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.5..2.5)).collect();
            let proj = project_feasible(&Rho::new(vec![a.clone()]));
            let p = &proj.blocks()[0];
            // Random feasible z: sorted uniforms.
            let mut z: Vec<f64> = (0..m).map(|_| rng.gen::<f64>()).collect();
            z.sort_by(|x, y| y.partial_cmp(x).unwrap());
            let inner: f64 = (0..m).map(|j| (a[j] - p[j]) * (z[j] - p[j])).sum();
            assert!(inner <= 1e-9);
        }
    }

    proptest! {
        #[test]
        fn pava_output_nonincreasing_exact(values in proptest::collection::vec(-10.0f64..10.0, 1..40)) {
            let fit = pava_nonincreasing(&IsotonicProblem::new(values));
            prop_assert!(fit.windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn projection_idempotent_and_nonexpansive(
            a in proptest::collection::vec(-2.0f64..3.0, 1..20),
            b in proptest::collection::vec(-2.0f64..3.0, 1..20),
        ) {
            let m = a.len().min(b.len());
            let (a, b) = (&a[..m], &b[..m]);
            let pa = project_feasible(&Rho::new(vec![a.to_vec()]));
            let pb = project_feasible(&Rho::new(vec![b.to_vec()]));
            let ppa = project_feasible(&pa);
            prop_assert_eq!(pa.blocks(), ppa.blocks());
            let d_in: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
            let d_out: f64 = pa.blocks()[0]
                .iter()
                .zip(&pb.blocks()[0])
                .map(|(x, y)| (x - y).powi(2))
                .sum::<f64>()
                .sqrt();
            prop_assert!(d_out <= d_in + 1e-12);
        }
    }
}
