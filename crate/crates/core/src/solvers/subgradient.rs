//! Projected subgradient descent on the extension argument with Polyak
//! steps, running-average dual certificates and optional diagonal
//! preconditioning.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{ProductDomain, ValueOracle};
use crate::error::Result;
use crate::extension::{greedy, Ordering, Rho};
use crate::isotonic::project_feasible;
use crate::polyhedra::{dual_value_b_polytope, DualPoint};
use crate::solvers::{
    IterateLog, IterateRecord, MinimizeResult, SolveStatus, SolverConfig, StepRule,
};

/// Minimize `H` by projected subgradient descent on the extension argument.
///
/// Each iteration queries the greedy algorithm for the value and a
/// subgradient, updates the uniform average of all greedy outputs seen so
/// far as the certified dual candidate, steps and projects back onto the
/// feasible set. Terminates on certified gap, iteration cap, or evaluation
/// budget; the best rounded chain point encountered is returned.
pub fn minimize_subgradient(
    oracle: &ValueOracle,
    domain: &ProductDomain,
    config: &SolverConfig,
) -> Result<MinimizeResult> {
    config.validate()?;
    let start = Instant::now();
    let evals_start = oracle.eval_count();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let h0 = oracle.eval(&domain.origin());
    let mut rho = project_feasible(&Rho::constant(domain, 0.5));

    // Per-block step scaling.
    let scales: Vec<f64> = if config.precondition {
        domain
            .block_sizes()
            .iter()
            .zip(oracle.lipschitz())
            .map(|(&ki, &bi)| if bi > 0.0 { 1.0 / (ki as f64 * bi) } else { 1.0 })
            .collect()
    } else {
        vec![1.0; domain.num_blocks()]
    };

    // Decaying fallback constant: feasible-set radius over subgradient bound.
    let sum_k: f64 = domain.block_sizes().iter().map(|&ki| ki as f64).sum();
    let grad_bound: f64 = domain
        .block_sizes()
        .iter()
        .zip(oracle.lipschitz())
        .map(|(&ki, &bi)| ki as f64 * bi * bi)
        .sum();
    let decay_scale = if grad_bound > 0.0 {
        (sum_k / grad_bound).sqrt()
    } else {
        1.0
    };

    let fresh = || -> Vec<Vec<f64>> {
        domain
            .block_sizes()
            .iter()
            .map(|&ki| vec![0.0; ki - 1])
            .collect()
    };
    // Dual candidates, all certified convex combinations of greedy outputs:
    // the uniform average of everything seen so far, a tail average that
    // restarts at powers of two (early vertices otherwise keep 1/t weight
    // and freeze the certificate), and the current vertex itself.
    let mut avg_blocks = fresh();
    let mut tail_blocks = fresh();
    let mut tail_start = 0usize;
    let mut orderings: Vec<Arc<Ordering>> = Vec::new();

    #[derive(Clone, Copy)]
    enum BestDualKind {
        Full(usize),
        Tail(usize, usize),
        Single(usize),
    }
    let mut best_kind = BestDualKind::Full(0);
    let mut best_dual_blocks = fresh();

    let mut log = IterateLog::default();
    let mut best_primal = f64::INFINITY;
    let mut best_point = domain.origin();
    let mut best_dual = f64::NEG_INFINITY;
    let mut status = SolveStatus::IterationCap;

    for iter in 1..=config.max_iter {
        if let Some(budget) = config.eval_budget {
            if oracle.eval_count() - evals_start >= budget {
                status = SolveStatus::BudgetExhausted;
                break;
            }
        }
        let out = greedy(oracle, domain, &rho, rng.gen())?;
        if out.best_value < best_primal {
            best_primal = out.best_value;
            best_point = out.best_point.clone();
        }

        // Running uniform averages, exact weights.
        let t = iter as f64;
        for (acc, w) in avg_blocks.iter_mut().zip(&out.w) {
            for (a, &wi) in acc.iter_mut().zip(w) {
                *a += (wi - *a) / t;
            }
        }
        if iter.is_power_of_two() {
            tail_blocks = fresh();
            tail_start = iter - 1;
        }
        let tail_len = (iter - tail_start) as f64;
        for (acc, w) in tail_blocks.iter_mut().zip(&out.w) {
            for (a, &wi) in acc.iter_mut().zip(w) {
                *a += (wi - *a) / tail_len;
            }
        }
        orderings.push(out.ordering.clone());

        let candidates = [
            (&avg_blocks, BestDualKind::Full(iter)),
            (
                &tail_blocks,
                BestDualKind::Tail(tail_start, iter - tail_start),
            ),
            (&out.w, BestDualKind::Single(iter - 1)),
        ];
        for (blocks, kind) in candidates {
            let dual = h0 + dual_value_b_polytope(&DualPoint::raw(blocks.clone()));
            if dual > best_dual {
                best_dual = dual;
                best_kind = kind;
                best_dual_blocks = blocks.clone();
            }
        }

        let gap = best_primal - best_dual;
        log.push(IterateRecord {
            iter,
            primal_best: best_primal,
            dual_best: best_dual,
            gap,
            evals: oracle.eval_count() - evals_start,
            ms: start.elapsed().as_millis() as u64,
        });
        if gap <= config.tolerance {
            status = SolveStatus::Converged;
            break;
        }

        let scaled_norm_sq: f64 = out
            .w
            .iter()
            .enumerate()
            .map(|(i, w)| scales[i] * w.iter().map(|v| v * v).sum::<f64>())
            .sum();
        let gamma = match config.step_rule {
            StepRule::Fixed(g) => g,
            StepRule::Decaying(c) => c / t.sqrt(),
            StepRule::Polyak => {
                let numerator = out.value - best_dual;
                if numerator > 0.0 && scaled_norm_sq > f64::MIN_POSITIVE {
                    numerator / scaled_norm_sq
                } else {
                    decay_scale / t.sqrt()
                }
            }
        };
        let mut stepped = rho.clone();
        for (i, block) in stepped.blocks_mut().iter_mut().enumerate() {
            for (v, &wi) in block.iter_mut().zip(&out.w[i]) {
                *v -= gamma * scales[i] * wi;
            }
        }
        rho = project_feasible(&stepped);
    }

    // Materialize the candidate that achieved the best dual value, with the
    // blocks snapshotted when it won and the matching ordering weights.
    let dual = if orderings.is_empty() {
        DualPoint::raw(best_dual_blocks)
    } else {
        let range = match best_kind {
            BestDualKind::Full(count) => 0..count,
            BestDualKind::Tail(start, len) => start..start + len,
            BestDualKind::Single(idx) => idx..idx + 1,
        };
        let weight = 1.0 / range.len() as f64;
        let mix: Vec<(f64, Arc<Ordering>)> = orderings[range]
            .iter()
            .map(|o| (weight, o.clone()))
            .collect();
        DualPoint::certified(best_dual_blocks, mix)
    };
    Ok(MinimizeResult {
        point: best_point,
        value: best_primal,
        log,
        rho,
        dual,
        status,
    })
}
