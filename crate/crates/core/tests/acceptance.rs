//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured figures (run with `--nocapture` to see them).

use std::time::Instant;

use submod_core::bruteforce::{
    convexity_probe, exhaustive_min, extension_by_breakpoint_integration, AuditBudget,
};
use submod_core::continuous::{discretize, estimate_lipschitz, plan_accuracy, BoxSpec};
use submod_core::domain::{is_submodular_bruteforce, Point, ProductDomain, ValueOracle};
use submod_core::examples::{
    figure1_value, lovasz_extension_oracle, make_example, multilinear_extension_oracle,
    random_submodular, ExampleParams,
};
use submod_core::extension::{evaluate_extension, greedy, Rho};
use submod_core::polyhedra::check_w_membership;
use submod_core::solvers::{
    divide_and_conquer, minimize_frankwolfe, minimize_subgradient, parametric_sweep,
    prox_quadratic, ring_family_reduce, FwVariant, Separable, SeparableQuadratic, SfmMethod,
    SolveStatus, SolverConfig,
};
use submod_core::SetFunction;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random desk-scale submodular instances with n <= 4 and k_i <= 6.
fn small_suite(count: usize, base_seed: u64) -> Vec<(ValueOracle, ProductDomain)> {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(2..=4usize);
            let ks: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=6usize)).collect();
            random_submodular(&ks, base_seed.wrapping_mul(1000).wrapping_add(i as u64))
        })
        .collect()
}

/// The criterion-4 suite: the two-variable landscape on a 51x51 grid plus
/// ten random instances with at most 10^4 grid points.
fn desk_suite() -> Vec<(ValueOracle, ProductDomain)> {
    let mut out = Vec::new();
    let params = ExampleParams {
        k: 51,
        ..Default::default()
    };
    out.push(make_example("figure1", &params).unwrap());
    let shapes: [&[usize]; 10] = [
        &[21, 21, 22],
        &[10, 10, 10, 10],
        &[100, 100],
        &[50, 14, 14],
        &[9, 9, 9, 9],
        &[97, 103],
        &[25, 20, 20],
        &[6, 6, 6, 6, 6],
        &[40, 35, 7],
        &[13, 11, 12, 5],
    ];
    for (i, ks) in shapes.iter().enumerate() {
        out.push(random_submodular(ks, 4242 + i as u64));
    }
    out
}

fn sum_k(domain: &ProductDomain) -> f64 {
    domain.block_sizes().iter().map(|&k| k as f64).sum()
}

fn sum_k_b_sq(oracle: &ValueOracle, domain: &ProductDomain) -> f64 {
    domain
        .block_sizes()
        .iter()
        .zip(oracle.lipschitz())
        .map(|(&k, &b)| k as f64 * b * b)
        .sum()
}

#[test]
fn criterion_01_greedy_integral_equivalence() {
    let start = Instant::now();
    let suite = small_suite(20, 101);
    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    for (idx, (oracle, domain)) in suite.iter().enumerate() {
        assert!(
            is_submodular_bruteforce(oracle, domain, 1e-9, 1_000_000)
                .unwrap()
                .holds(),
            "instance {idx} not submodular"
        );
        for s in 0..50 {
            let rho = Rho::random_feasible(domain, (idx * 50 + s) as u64);
            let g = evaluate_extension(oracle, domain, &rho).unwrap();
            let b = extension_by_breakpoint_integration(oracle, domain, &rho).unwrap();
            worst = worst.max((g - b).abs());
            checked += 1;
        }
    }
    assert_eq!(checked, 1000);
    assert!(worst <= 1e-12, "worst deviation {worst:.3e}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 10.0, "took {elapsed:?}");
    println!(
        "criterion 1 greedy-integral equivalence: PASS (1000 arguments, worst {:.2e}, {:?})",
        worst, elapsed
    );
}

#[test]
fn criterion_02_polyhedral_soundness() {
    let suite = small_suite(20, 202);
    let mut worst_violation = f64::NEG_INFINITY;
    let mut worst_top: f64 = 0.0;
    let mut worst_tightness: f64 = 0.0;
    for (idx, (oracle, domain)) in suite.iter().enumerate() {
        let h0 = oracle.eval(&domain.origin());
        for s in 0..200 {
            let seed = (idx * 200 + s) as u64;
            let rho = Rho::random_feasible(domain, seed);
            let out = greedy(oracle, domain, &rho, seed).unwrap();
            let w = submod_core::DualPoint::certified(
                out.w.clone(),
                vec![(1.0, out.ordering.clone())],
            );
            let report = check_w_membership(oracle, domain, &w, 1_000_000).unwrap();
            assert!(report.member, "instance {idx} seed {s}: {report:?}");
            worst_violation = worst_violation.max(report.worst_violation);
            worst_top = worst_top.max(report.top_gap.abs());
            let tight = (out.value - h0 - rho.dot(&out.w)).abs();
            assert!(tight <= 1e-12, "tightness {tight:.3e}");
            worst_tightness = worst_tightness.max(tight);
        }
    }
    println!(
        "criterion 2 polyhedral soundness: PASS (4000 vertices, worst violation {:.2e}, top gap {:.2e}, tightness {:.2e})",
        worst_violation, worst_top, worst_tightness
    );
}

#[test]
fn criterion_03_convexity_iff_submodularity() {
    let mut cases: Vec<(&str, ValueOracle, ProductDomain)> = Vec::new();
    let modular = make_example(
        "modular",
        &ExampleParams {
            n: 3,
            k: 4,
            coefficients: vec![1.0, -0.5, 2.0],
            ..Default::default()
        },
    )
    .unwrap();
    cases.push(("modular", modular.0, modular.1));
    let fig = make_example("figure1", &ExampleParams::default()).unwrap();
    cases.push(("figure1", fig.0, fig.1));
    let coupling = make_example(
        "coupling",
        &ExampleParams {
            n: 2,
            k: 5,
            ..Default::default()
        },
    )
    .unwrap();
    cases.push(("coupling", coupling.0, coupling.1));
    let denoise = make_example(
        "denoise",
        &ExampleParams {
            k: 6,
            z: vec![0.3, -0.6, 0.9, 0.1],
            ..Default::default()
        },
    )
    .unwrap();
    cases.push(("denoise", denoise.0, denoise.1));
    let meanfield = make_example(
        "meanfield",
        &ExampleParams {
            n: 3,
            k: 5,
            weight: 0.7,
            coefficients: vec![0.4, -0.2, 0.6],
            ..Default::default()
        },
    )
    .unwrap();
    cases.push(("meanfield", meanfield.0, meanfield.1));
    let lov = lovasz_extension_oracle(&SetFunction::coverage(2), 6).unwrap();
    cases.push(("lovasz-ext", lov.0, lov.1));
    let mul = multilinear_extension_oracle(&SetFunction::coverage(2), 6).unwrap();
    cases.push(("multilinear-ext", mul.0, mul.1));

    for (name, oracle, domain) in &cases {
        let witness = convexity_probe(
            |rho| evaluate_extension(oracle, domain, rho),
            domain,
            500,
            7,
        )
        .unwrap();
        assert!(witness.is_none(), "{name}: unexpected violation {witness:?}");
    }

    let domain = ProductDomain::new(vec![2, 2]).unwrap();
    let oracle = ValueOracle::new(vec![1.0, 1.0], |x: &Point| (x[0] * x[1]) as f64);
    let witness = convexity_probe(
        |rho| evaluate_extension(&oracle, &domain, rho),
        &domain,
        500,
        7,
    )
    .unwrap()
    .expect("x1*x2 must fail the probe");
    assert!(witness.midpoint_value > witness.average_value + 1e-9);
    println!(
        "criterion 3 convexity iff submodularity: PASS (7 examples convex over 500 segments, x1*x2 violation {:.3e})",
        witness.midpoint_value - witness.average_value
    );
}

#[test]
fn criterion_04_exact_minimization_at_desk_scale() {
    let start = Instant::now();
    let suite = desk_suite();
    for (idx, (oracle, domain)) in suite.iter().enumerate() {
        let (_, opt, _) = exhaustive_min(oracle, domain, AuditBudget::default()).unwrap();
        let sub = minimize_subgradient(
            oracle,
            domain,
            &SolverConfig {
                max_iter: 5000,
                tolerance: 1e-6,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(sub.status, SolveStatus::Converged, "instance {idx} subgradient");
        assert!(
            (sub.value - opt).abs() <= 1e-9,
            "instance {idx} subgradient value {} vs {}",
            sub.value,
            opt
        );
        assert!(sub.log.last().unwrap().gap <= 1e-6);
        let fw = minimize_frankwolfe(
            oracle,
            domain,
            &SolverConfig {
                max_iter: 5000,
                tolerance: 1e-6,
                fw_variant: FwVariant::Pairwise,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(fw.status, SolveStatus::Converged, "instance {idx} frank-wolfe");
        assert!(
            (fw.value - opt).abs() <= 1e-9,
            "instance {idx} frank-wolfe value {} vs {}",
            fw.value,
            opt
        );
        assert!(fw.log.last().unwrap().gap <= 1e-6);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 60.0, "took {elapsed:?}");
    println!(
        "criterion 4 exact minimization at desk scale: PASS (11 instances, both solvers, {:?})",
        elapsed
    );
}

#[test]
fn criterion_05_rate_envelopes() {
    let mut suite = small_suite(10, 505);
    suite.push(make_example("figure1", &ExampleParams::default()).unwrap());
    let mut worst_sub_ratio: f64 = 0.0;
    let mut worst_fw_ratio: f64 = 0.0;
    for (idx, (oracle, domain)) in suite.iter().enumerate() {
        let (_, opt, _) = exhaustive_min(oracle, domain, AuditBudget::default()).unwrap();
        let envelope_scale = (sum_k(domain) * sum_k_b_sq(oracle, domain)).sqrt();
        let sub = minimize_subgradient(
            oracle,
            domain,
            &SolverConfig {
                max_iter: 2000,
                tolerance: 0.0,
                ..Default::default()
            },
        )
        .unwrap();
        for rec in sub.log.records() {
            let bound = 1.05 * envelope_scale / (rec.iter as f64).sqrt();
            let err = rec.primal_best - opt;
            assert!(
                err <= bound,
                "instance {idx} iter {}: error {err:.3e} above envelope {bound:.3e}",
                rec.iter
            );
            if bound > 0.0 {
                worst_sub_ratio = worst_sub_ratio.max(err / bound);
            }
        }

        // Classic Frank-Wolfe dual suboptimality against the exact optimum
        // of the regularized dual, obtained by divide-and-conquer.
        let sep = SeparableQuadratic::unit(domain);
        let dnc = divide_and_conquer(
            oracle,
            domain,
            &sep,
            &SfmMethod::Exhaustive(AuditBudget::default()),
        )
        .unwrap();
        let dual_opt =
            evaluate_extension(oracle, domain, &dnc.rho).unwrap() + sep.value(&dnc.rho);
        let fw = prox_quadratic(
            oracle,
            domain,
            &sep,
            &SolverConfig {
                max_iter: 2000,
                tolerance: 0.0,
                fw_variant: FwVariant::Classic,
                ..Default::default()
            },
        )
        .unwrap();
        let fw_scale = 2.0 * sum_k_b_sq(oracle, domain);
        for rec in fw.log.records() {
            let bound = 1.05 * fw_scale / rec.iter as f64;
            let subopt = dual_opt - rec.dual_best;
            assert!(
                subopt <= bound,
                "instance {idx} iter {}: dual suboptimality {subopt:.3e} above {bound:.3e}",
                rec.iter
            );
            if bound > 0.0 {
                worst_fw_ratio = worst_fw_ratio.max(subopt / bound);
            }
        }
    }
    println!(
        "criterion 5 rate envelopes: PASS (subgradient ratio {:.3}, classic FW ratio {:.3})",
        worst_sub_ratio, worst_fw_ratio
    );
}

#[test]
fn criterion_06_separable_optimization_theorems() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst_agreement: f64 = 0.0;
    for trial in 0..10 {
        let ks = [3usize, 4, 3];
        let (oracle, domain) = random_submodular(&ks, 6000 + trial);
        let targets: Vec<Vec<f64>> = domain
            .block_sizes()
            .iter()
            .map(|&ki| (0..ki - 1).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let curvatures: Vec<Vec<f64>> = domain
            .block_sizes()
            .iter()
            .map(|&ki| (0..ki - 1).map(|_| rng.gen_range(0.5..2.0)).collect())
            .collect();
        let sep = SeparableQuadratic::new(targets, curvatures).unwrap();
        let exhaustive = SfmMethod::Exhaustive(AuditBudget::default());
        let dnc = divide_and_conquer(&oracle, &domain, &sep, &exhaustive).unwrap();
        let prox = prox_quadratic(
            &oracle,
            &domain,
            &sep,
            &SolverConfig {
                max_iter: 50_000,
                tolerance: 1e-14,
                fw_variant: FwVariant::Pairwise,
                ..Default::default()
            },
        )
        .unwrap();
        for (a, b) in dnc
            .rho
            .blocks()
            .iter()
            .flatten()
            .zip(prox.rho.blocks().iter().flatten())
        {
            let diff = (a - b).abs();
            assert!(diff <= 1e-6, "trial {trial}: D&C vs prox {diff:.3e}");
            worst_agreement = worst_agreement.max(diff);
        }

        // Breakpoints of the exact solution.
        let mut breakpoints: Vec<f64> = dnc.rho.blocks().iter().flatten().cloned().collect();
        breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breakpoints.dedup();
        let lo = breakpoints[0] - 0.25;
        let hi = breakpoints.last().unwrap() + 0.25;

        // (c): thresholding between consecutive breakpoints solves the
        // corresponding modular-penalized instance exactly.
        let mut probes = vec![lo, hi];
        probes.extend(breakpoints.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        for &t in &probes {
            let x = submod_core::extension::theta(&dnc.rho, t);
            let value_at = |p: &Point| -> f64 {
                let mut acc = oracle.eval(p);
                for i in 0..domain.num_blocks() {
                    for lvl in 1..=p[i] {
                        acc += sep.a_prime(i, lvl - 1, t);
                    }
                }
                acc
            };
            let mut best = f64::INFINITY;
            for p in domain.iter_points() {
                best = best.min(value_at(&p));
            }
            let got = value_at(&x);
            assert!(
                (got - best).abs() <= 1e-9,
                "trial {trial} t={t}: thresholded value {got} vs exhaustive {best}"
            );
        }

        // (a) + (d): the sweep is monotone by construction (it errors
        // otherwise) and reconstructs the solution to grid resolution.
        let steps = 120usize;
        let spacing = (hi - lo) / steps as f64;
        let t_grid: Vec<f64> = (0..=steps).map(|i| lo + spacing * i as f64).collect();
        let sweep = parametric_sweep(&oracle, &domain, &sep, &t_grid, &exhaustive).unwrap();
        for (a, b) in dnc
            .rho
            .blocks()
            .iter()
            .flatten()
            .zip(sweep.rho.blocks().iter().flatten())
        {
            assert!(
                (a - b).abs() <= spacing + 1e-9,
                "trial {trial}: reconstruction {b} vs exact {a} (spacing {spacing})"
            );
        }
    }
    println!(
        "criterion 6 separable optimization theorems: PASS (10 instances, worst prox agreement {:.2e})",
        worst_agreement
    );
}

#[test]
fn criterion_07_rounding_bound() {
    let suite = desk_suite();
    let mut worst_ratio: f64 = 0.0;
    for (idx, (oracle, domain)) in suite.iter().enumerate() {
        let (_, opt, _) = exhaustive_min(oracle, domain, AuditBudget::default()).unwrap();
        let sep = SeparableQuadratic::unit(domain);
        let dnc = divide_and_conquer(
            oracle,
            domain,
            &sep,
            &SfmMethod::Exhaustive(AuditBudget::default()),
        )
        .unwrap();
        let prox_opt =
            evaluate_extension(oracle, domain, &dnc.rho).unwrap() + sep.value(&dnc.rho);
        let fw = minimize_frankwolfe(
            oracle,
            domain,
            &SolverConfig {
                max_iter: 5000,
                tolerance: 1e-6,
                fw_variant: FwVariant::Pairwise,
                ..Default::default()
            },
        )
        .unwrap();
        // Threshold the final primal candidate over its whole chain.
        let rounded = greedy(oracle, domain, &fw.rho, 0).unwrap().best_value;
        let prox_val =
            evaluate_extension(oracle, domain, &fw.rho).unwrap() + sep.value(&fw.rho);
        let eps = (prox_val - prox_opt).max(0.0);
        let bound = 2.0 * (eps * sum_k(domain)).sqrt() + 1e-9;
        let subopt = rounded - opt;
        assert!(
            subopt <= bound,
            "instance {idx}: rounding suboptimality {subopt:.3e} above bound {bound:.3e}"
        );
        if bound > 0.0 {
            worst_ratio = worst_ratio.max(subopt / bound);
        }
    }
    println!(
        "criterion 7 rounding bound: PASS (11 instances, worst ratio {:.3})",
        worst_ratio
    );
}

#[test]
fn criterion_08_ring_family_cross_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for trial in 0..10 {
        let n = rng.gen_range(2..=3usize);
        let ks: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=4usize)).collect();
        let (oracle, domain) = random_submodular(&ks, 8000 + trial);
        let bvec: Vec<f64> = oracle
            .lipschitz()
            .iter()
            .map(|&b| (b + 0.25).max(0.5))
            .collect();
        let (ext, decode) = ring_family_reduce(&oracle, &domain, &bvec).unwrap();
        let (ext_oracle, ext_domain) = ext.to_oracle();
        let (zmin, zval, _) =
            exhaustive_min(&ext_oracle, &ext_domain, AuditBudget::default()).unwrap();
        let bits: Vec<bool> = zmin.coords().iter().map(|&v| v == 1).collect();
        let decoded = decode.decode(&bits);
        let (_, hmin, _) = exhaustive_min(&oracle, &domain, AuditBudget::default()).unwrap();
        assert!(
            (zval - hmin).abs() <= 1e-12,
            "trial {trial}: reduced min {zval} vs {hmin}"
        );
        assert!(
            (oracle.eval(&decoded) - hmin).abs() <= 1e-12,
            "trial {trial}: decoded point not optimal"
        );
        assert!(
            is_submodular_bruteforce(&ext_oracle, &ext_domain, 1e-9, 1_000_000)
                .unwrap()
                .holds(),
            "trial {trial}: reduced function not submodular"
        );
    }
    println!("criterion 8 ring-family cross-check: PASS (10 instances)");
}

#[test]
fn criterion_09_discretization_planner() {
    let spec = BoxSpec::new(vec![(-1.0, 1.0), (-1.0, 1.0)], 0.0).unwrap();
    let g = estimate_lipschitz(|c| figure1_value(c[0], c[1]), &spec, 201);
    let b = spec.edge();
    let spec = BoxSpec::new(vec![(-1.0, 1.0), (-1.0, 1.0)], g).unwrap();
    for eps in [0.5, 0.2] {
        let plan = plan_accuracy(g, b, 2, eps);
        let (oracle, domain) =
            discretize(|c| figure1_value(c[0], c[1]), &spec, &[plan.k, plan.k]).unwrap();
        let res = minimize_subgradient(
            &oracle,
            &domain,
            &SolverConfig {
                max_iter: plan.t,
                tolerance: 1e-9,
                ..Default::default()
            },
        )
        .unwrap();
        let fine_k = 10 * plan.k;
        let (fine_oracle, fine_domain) =
            discretize(|c| figure1_value(c[0], c[1]), &spec, &[fine_k, fine_k]).unwrap();
        let budget = AuditBudget::new((fine_k * fine_k) as u64 + 1, (fine_k * fine_k) as u64 + 1);
        let (_, fine_min, _) = exhaustive_min(&fine_oracle, &fine_domain, budget).unwrap();
        let err = res.value - fine_min;
        assert!(
            err <= eps,
            "eps {eps}: planned (k={}, t={}) achieved error {err:.4} > {eps}",
            plan.k,
            plan.t
        );
        println!(
            "criterion 9 planner at eps={eps}: measured G={g:.3}, k={}, t={}, error {err:.4}",
            plan.k, plan.t
        );
    }
    println!("criterion 9 discretization planner: PASS");
}
