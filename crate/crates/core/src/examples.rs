//! A registry of example objectives: modular functions, the two-variable
//! level-set landscape with several local minima, convex-difference
//! couplings, the one-dimensional denoising objective, the mean-field
//! objective, and grid oracles for the two classical set-function
//! extensions.

use crate::domain::{Point, ProductDomain, SetFunction, ValueOracle};
use crate::error::{Error, Result};

/// Parameters accepted by [`make_example`]; unused fields are ignored by
/// each example.
#[derive(Debug, Clone)]
pub struct ExampleParams {
    /// Number of variables.
    pub n: usize,
    /// Grid size per variable (uniform).
    pub k: usize,
    /// Per-variable coefficients (modular weights, coupling tilts,
    /// mean-field unary fields).
    pub coefficients: Vec<f64>,
    /// Observed signal for `denoise`.
    pub z: Vec<f64>,
    pub lambda: f64,
    pub mu: f64,
    pub alpha: f64,
    /// Coupling / cut weight.
    pub weight: f64,
    /// Set function for the extension oracles and the mean-field objective.
    pub set_function: SetFunctionKind,
    /// Evaluation cap for construction-time Lipschitz scans.
    pub lipschitz_scan_cap: u64,
}

impl Default for ExampleParams {
    fn default() -> Self {
        Self {
            n: 2,
            k: 21,
            coefficients: Vec::new(),
            z: Vec::new(),
            lambda: 0.25,
            mu: 2.0,
            alpha: 0.125,
            weight: 1.0,
            set_function: SetFunctionKind::Coverage,
            lipschitz_scan_cap: 4_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetFunctionKind {
    Cardinality,
    Coverage,
    ChainCut,
}

impl SetFunctionKind {
    pub fn build(self, n: usize, weight: f64) -> SetFunction {
        match self {
            SetFunctionKind::Cardinality => SetFunction::cardinality(n),
            SetFunctionKind::Coverage => SetFunction::coverage(n),
            SetFunctionKind::ChainCut => SetFunction::chain_cut(n, weight),
        }
    }
}

/// Uniform grid of `k` coordinates on `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    (0..k)
        .map(|j| lo + j as f64 * (hi - lo) / (k - 1) as f64)
        .collect()
}

/// `|x|^alpha` with the removable value 0 at the origin.
pub fn power_abs(x: f64, alpha: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.abs().powf(alpha)
    }
}

/// The two-variable landscape of the level-set figure: a coupling spring
/// plus four Gaussian wells, submodular with several local minima.
pub fn figure1_value(x1: f64, x2: f64) -> f64 {
    7.0 / 20.0 * (x1 - x2) * (x1 - x2)
        - (-4.0 * (x1 - 2.0 / 3.0).powi(2)).exp()
        - 3.0 / 5.0 * (-4.0 * (x1 + 2.0 / 3.0).powi(2)).exp()
        - (-4.0 * (x2 - 2.0 / 3.0).powi(2)).exp()
        - (-4.0 * (x2 + 2.0 / 3.0).powi(2)).exp()
}

fn grid_oracle(
    grids: Vec<Vec<f64>>,
    f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
) -> (ValueOracle, ProductDomain) {
    let k: Vec<usize> = grids.iter().map(Vec::len).collect();
    let domain = ProductDomain::new(k)
        .and_then(|d| d.with_grid(grids.clone()))
        .expect("valid grid");
    let oracle = ValueOracle::new(vec![0.0; grids.len()], move |x: &Point| {
        let coords: Vec<f64> = x.coords().iter().enumerate().map(|(i, &j)| grids[i][j]).collect();
        f(&coords)
    });
    (oracle, domain)
}

fn finish_lipschitz(
    mut oracle: ValueOracle,
    domain: &ProductDomain,
    cap: u64,
) -> Result<(ValueOracle, ProductDomain)> {
    let points = domain.num_points().unwrap_or(u64::MAX);
    if points.saturating_mul(domain.num_blocks() as u64) <= cap {
        oracle = oracle.with_exhaustive_lipschitz(domain);
        Ok((oracle, domain.clone()))
    } else {
        Err(Error::InvalidParameter(
            "grid too large for the exhaustive Lipschitz scan; supply bounds".into(),
        ))
    }
}

/// Build a named example instance.
pub fn make_example(name: &str, params: &ExampleParams) -> Result<(ValueOracle, ProductDomain)> {
    match name {
        "modular" => modular(params),
        "figure1" => figure1(params),
        "coupling" => coupling(params),
        "denoise" => denoise(params),
        "meanfield" => meanfield(params),
        "lovasz-ext" => {
            let g = params.set_function.build(params.n, params.weight);
            lovasz_extension_oracle(&g, params.k)
        }
        "multilinear-ext" => {
            let g = params.set_function.build(params.n, params.weight);
            multilinear_extension_oracle(&g, params.k)
        }
        other => Err(Error::UnknownExample(other.into())),
    }
}

fn modular(params: &ExampleParams) -> Result<(ValueOracle, ProductDomain)> {
    let n = params.n;
    if n == 0 {
        return Err(Error::InvalidParameter("modular: n must be positive".into()));
    }
    let c: Vec<f64> = if params.coefficients.is_empty() {
        vec![1.0; n]
    } else if params.coefficients.len() == n {
        params.coefficients.clone()
    } else {
        return Err(Error::InvalidParameter("modular: coefficient count".into()));
    };
    let domain = ProductDomain::new(vec![params.k; n])?;
    let lipschitz = c.iter().map(|ci| ci.abs()).collect();
    let cc = c.clone();
    let oracle = ValueOracle::new(lipschitz, move |x: &Point| {
        x.coords().iter().zip(&cc).map(|(&xi, ci)| xi as f64 * ci).sum()
    });
    Ok((oracle, domain))
}

fn figure1(params: &ExampleParams) -> Result<(ValueOracle, ProductDomain)> {
    if params.k < 2 {
        return Err(Error::InvalidParameter("figure1: k must be >= 2".into()));
    }
    let grid = uniform_grid(-1.0, 1.0, params.k);
    let (oracle, domain) = grid_oracle(vec![grid.clone(), grid], |c| figure1_value(c[0], c[1]));
    finish_lipschitz(oracle, &domain, params.lipschitz_scan_cap)
}

fn coupling(params: &ExampleParams) -> Result<(ValueOracle, ProductDomain)> {
    let n = params.n;
    if n < 2 {
        return Err(Error::InvalidParameter("coupling: n must be >= 2".into()));
    }
    let tilt: Vec<f64> = if params.coefficients.is_empty() {
        vec![0.0; n]
    } else if params.coefficients.len() == n {
        params.coefficients.clone()
    } else {
        return Err(Error::InvalidParameter("coupling: coefficient count".into()));
    };
    let weight = params.weight;
    if weight < 0.0 {
        return Err(Error::InvalidParameter("coupling: weight must be >= 0".into()));
    }
    let grids: Vec<Vec<f64>> = (0..n).map(|_| uniform_grid(0.0, 1.0, params.k)).collect();
    let (oracle, domain) = grid_oracle(grids, move |c| {
        let pairs: f64 = c.windows(2).map(|w| weight * (w[0] - w[1]).powi(2)).sum();
        let linear: f64 = c.iter().zip(&tilt).map(|(ci, ti)| ci * ti).sum();
        pairs + linear
    });
    finish_lipschitz(oracle, &domain, params.lipschitz_scan_cap)
}

fn denoise(params: &ExampleParams) -> Result<(ValueOracle, ProductDomain)> {
    let z = params.z.clone();
    if z.is_empty() {
        return Err(Error::InvalidParameter("denoise: signal z required".into()));
    }
    let (lambda, mu, alpha) = (params.lambda, params.mu, params.alpha);
    if lambda < 0.0 || mu < 0.0 || alpha <= 0.0 {
        return Err(Error::InvalidParameter(
            "denoise: need lambda >= 0, mu >= 0, alpha > 0".into(),
        ));
    }
    let n = z.len();
    let grid = uniform_grid(-1.0, 1.0, params.k);
    let zc = z.clone();
    let (oracle, domain) = grid_oracle(vec![grid.clone(); n], move |c| {
        let fidelity: f64 = c.iter().zip(&zc).map(|(ci, zi)| 0.5 * (ci - zi).powi(2)).sum();
        let sparsity: f64 = c.iter().map(|&ci| lambda * power_abs(ci, alpha)).sum();
        let smooth: f64 = c.windows(2).map(|w| mu * (w[0] - w[1]).powi(2)).sum();
        fidelity + sparsity + smooth
    });
    // The objective is a chain of local terms, so the unit-step bound per
    // coordinate only involves its two neighbors; scan those exactly.
    let mut bounds = vec![0.0f64; n];
    let k = params.k;
    let term = |i: usize, v: f64| 0.5 * (v - z[i]).powi(2) + lambda * power_abs(v, alpha);
    for i in 0..n {
        let mut worst = 0.0f64;
        for j in 0..k - 1 {
            let (v, vn) = (grid[j], grid[j + 1]);
            let own = term(i, vn) - term(i, v);
            for a in 0..k {
                let left = if i > 0 {
                    mu * ((grid[a] - vn).powi(2) - (grid[a] - v).powi(2))
                } else {
                    0.0
                };
                for b in 0..k {
                    let right = if i + 1 < n {
                        mu * ((vn - grid[b]).powi(2) - (v - grid[b]).powi(2))
                    } else {
                        0.0
                    };
                    worst = worst.max((own + left + right).abs());
                    if i + 1 >= n {
                        break;
                    }
                }
                if i == 0 {
                    break;
                }
            }
        }
        bounds[i] = worst;
    }
    let mut oracle = oracle;
    oracle.set_lipschitz(bounds);
    Ok((oracle, domain))
}

fn meanfield(params: &ExampleParams) -> Result<(ValueOracle, ProductDomain)> {
    let n = params.n;
    if n == 0 || n > 20 {
        return Err(Error::InvalidParameter("meanfield: need 1 <= n <= 20".into()));
    }
    let field: Vec<f64> = if params.coefficients.is_empty() {
        vec![0.0; n]
    } else if params.coefficients.len() == n {
        params.coefficients.clone()
    } else {
        return Err(Error::InvalidParameter("meanfield: coefficient count".into()));
    };
    let cut = SetFunction::chain_cut(n, params.weight);
    let coupled = SetFunction::new(n, move |m| {
        cut.eval(m)
            + m.iter()
                .zip(&field)
                .map(|(&b, f)| if b { *f } else { 0.0 })
                .sum::<f64>()
    });
    let grids: Vec<Vec<f64>> = (0..n).map(|_| uniform_grid(0.0, 1.0, params.k)).collect();
    let (oracle, domain) = grid_oracle(grids, move |c| {
        let entropy: f64 = c.iter().map(|&p| xlogx(p) + xlogx(1.0 - p)).sum();
        entropy + multilinear_value(&coupled, c)
    });
    finish_lipschitz(oracle, &domain, params.lipschitz_scan_cap)
}

/// `x log x` with the convention `0 log 0 = 0`.
fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Exact multilinear extension value by summation over all `2^n` subsets
/// with independent Bernoulli marginals.
pub fn multilinear_value(g: &SetFunction, probs: &[f64]) -> f64 {
    let n = g.ground_size();
    debug_assert_eq!(probs.len(), n);
    let mut acc = 0.0;
    let mut members = vec![false; n];
    for mask in 0u64..(1 << n) {
        let mut weight = 1.0;
        for (i, m) in members.iter_mut().enumerate() {
            *m = mask >> i & 1 == 1;
            weight *= if *m { probs[i] } else { 1.0 - probs[i] };
        }
        if weight != 0.0 {
            acc += weight * g.eval(&members);
        }
    }
    acc
}

/// Choquet-integral value of a set-function at a point of `[0,1]^n`.
pub fn lovasz_value(g: &SetFunction, u: &[f64]) -> f64 {
    let n = g.ground_size();
    debug_assert_eq!(u.len(), n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| u[b].partial_cmp(&u[a]).unwrap());
    let mut members = vec![false; n];
    // Integral of g({i : u_i >= t}) over t in [0,1].
    let mut acc = (1.0 - u[order[0]]) * g.eval(&members);
    for j in 0..n {
        members[order[j]] = true;
        let next = if j + 1 < n { u[order[j + 1]] } else { 0.0 };
        acc += (u[order[j]] - next) * g.eval(&members);
    }
    acc
}

/// Grid oracle on `[0,1]^n` evaluating the Choquet integral of `g`.
pub fn lovasz_extension_oracle(g: &SetFunction, k: usize) -> Result<(ValueOracle, ProductDomain)> {
    if k < 2 {
        return Err(Error::InvalidParameter("grid size must be >= 2".into()));
    }
    let n = g.ground_size();
    let grids: Vec<Vec<f64>> = (0..n).map(|_| uniform_grid(0.0, 1.0, k)).collect();
    let gg = g.clone();
    let (oracle, domain) = grid_oracle(grids, move |c| lovasz_value(&gg, c));
    finish_lipschitz(oracle, &domain, 4_000_000)
}

/// Grid oracle on `[0,1]^n` evaluating the multilinear extension of `g` by
/// exact summation; `n` must stay small enough for the `2^n` sum.
pub fn multilinear_extension_oracle(
    g: &SetFunction,
    k: usize,
) -> Result<(ValueOracle, ProductDomain)> {
    if k < 2 {
        return Err(Error::InvalidParameter("grid size must be >= 2".into()));
    }
    let n = g.ground_size();
    if n > 20 {
        return Err(Error::BudgetExceeded {
            needed: 1u64 << n,
            cap: 1 << 20,
        });
    }
    let grids: Vec<Vec<f64>> = (0..n).map(|_| uniform_grid(0.0, 1.0, k)).collect();
    let gg = g.clone();
    let (oracle, domain) = grid_oracle(grids, move |c| multilinear_value(&gg, c));
    finish_lipschitz(oracle, &domain, 4_000_000)
}

/// Seeded random submodular instance assembled from the closed families:
/// convex couplings on normalized coordinates, a concave function of a
/// nonnegative combination, and arbitrary per-variable tables.
pub fn random_submodular(ks: &[usize], seed: u64) -> (ValueOracle, ProductDomain) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = ks.len();
    let domain = ProductDomain::new(ks.to_vec()).expect("valid sizes");
    let couplings: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, rng.gen_range(0.0..2.0)))
        .collect();
    let tables: Vec<Vec<f64>> = ks
        .iter()
        .map(|&ki| (0..ki).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let concave_weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let concave_scale: f64 = rng.gen_range(0.0..2.0);
    let scale: Vec<f64> = ks.iter().map(|&ki| 1.0 / (ki - 1).max(1) as f64).collect();
    let mut table = Vec::with_capacity(domain.num_points().unwrap() as usize);
    for x in domain.iter_points() {
        let u: Vec<f64> = x
            .coords()
            .iter()
            .zip(&scale)
            .map(|(&xi, s)| xi as f64 * s)
            .collect();
        let mut v = 0.0;
        for &(i, j, a) in &couplings {
            v += a * (u[i] - u[j]).powi(2);
        }
        for (i, t) in tables.iter().enumerate() {
            v += t[x[i]];
        }
        let s: f64 = u.iter().zip(&concave_weights).map(|(ui, wi)| ui * wi).sum();
        v += concave_scale * (s + 0.1).sqrt();
        table.push(v);
    }
    let oracle = ValueOracle::from_table(&domain, table).expect("table sized to domain");
    (oracle, domain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruteforce::{exhaustive_min, AuditBudget};
    use crate::domain::is_submodular_bruteforce;

    #[test]
    fn figure1_caption_value_at_origin() {
        let e = (-16.0f64 / 9.0).exp();
        let expect = -2.0 * e - 3.0 / 5.0 * e - e;
        assert!((figure1_value(0.0, 0.0) - expect).abs() < 1e-15);
        // The 21x21 grid has an odd point count so (0,0) is a grid point.
        let (oracle, domain) = make_example("figure1", &ExampleParams::default()).unwrap();
        let mid = Point::new(vec![10, 10]);
        assert!((oracle.eval(&mid) - expect).abs() < 1e-15);
        assert!((domain.coordinate(0, 10)).abs() < 1e-15);
    }

    #[test]
    fn figure1_grid_is_submodular() {
        let (oracle, domain) = make_example("figure1", &ExampleParams::default()).unwrap();
        assert!(is_submodular_bruteforce(&oracle, &domain, 1e-9, 10_000_000)
            .unwrap()
            .holds());
    }

    #[test]
    fn restricted_figure1_still_submodular() {
        let (oracle, domain) = make_example("figure1", &ExampleParams::default()).unwrap();
        let (sub, sub_dom) = crate::domain::restrict(
            &oracle,
            &domain,
            &Point::new(vec![5, 3]),
            &Point::new(vec![15, 18]),
        )
        .unwrap();
        assert!(is_submodular_bruteforce(&sub, &sub_dom, 1e-9, 10_000_000)
            .unwrap()
            .holds());
    }

    #[test]
    fn denoise_decoupled_minimizes_at_nearest_grid_point() {
        let params = ExampleParams {
            k: 11,
            z: vec![0.31, -0.77, 0.02],
            lambda: 0.0,
            mu: 0.0,
            ..Default::default()
        };
        let (oracle, domain) = make_example("denoise", &params).unwrap();
        let (p, _, _) = exhaustive_min(&oracle, &domain, AuditBudget::default()).unwrap();
        let grid = uniform_grid(-1.0, 1.0, 11);
        for (i, &zi) in params.z.iter().enumerate() {
            let nearest = grid
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - zi).abs().partial_cmp(&(b.1 - zi).abs()).unwrap())
                .unwrap()
                .0;
            assert_eq!(p[i], nearest);
        }
    }

    #[test]
    fn coupling_grid_is_submodular() {
        let params = ExampleParams {
            n: 2,
            k: 5,
            ..Default::default()
        };
        let (oracle, domain) = make_example("coupling", &params).unwrap();
        assert!(is_submodular_bruteforce(&oracle, &domain, 1e-9, 100_000)
            .unwrap()
            .holds());
    }

    #[test]
    fn meanfield_grid_is_submodular() {
        let params = ExampleParams {
            n: 3,
            k: 6,
            weight: 0.8,
            coefficients: vec![0.2, -0.4, 0.1],
            ..Default::default()
        };
        let (oracle, domain) = make_example("meanfield", &params).unwrap();
        assert!(is_submodular_bruteforce(&oracle, &domain, 1e-9, 100_000)
            .unwrap()
            .holds());
    }

    #[test]
    fn unknown_example_name() {
        assert!(matches!(
            make_example("nope", &ExampleParams::default()),
            Err(Error::UnknownExample(_))
        ));
    }

    #[test]
    fn lovasz_values() {
        let card = SetFunction::cardinality(2);
        assert!((lovasz_value(&card, &[0.25, 0.75]) - 1.0).abs() < 1e-15);
        let cov = SetFunction::coverage(2);
        assert!((lovasz_value(&cov, &[0.25, 0.75]) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn lovasz_oracle_is_submodular() {
        let cov = SetFunction::coverage(2);
        let (oracle, domain) = lovasz_extension_oracle(&cov, 6).unwrap();
        assert!(is_submodular_bruteforce(&oracle, &domain, 1e-9, 10_000)
            .unwrap()
            .holds());
    }

    #[test]
    fn multilinear_values_and_vertices() {
        let cov = SetFunction::coverage(2);
        assert!((multilinear_value(&cov, &[0.5, 0.5]) - 0.75).abs() < 1e-15);
        // Agrees with g at every 0/1 vertex.
        for mask in 0..4u64 {
            let bits = [mask & 1 == 1, mask >> 1 & 1 == 1];
            let probs: Vec<f64> = bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
            assert!((multilinear_value(&cov, &probs) - cov.eval(&bits)).abs() < 1e-15);
        }
    }

    #[test]
    fn multilinear_oracle_is_submodular() {
        let cov = SetFunction::coverage(2);
        let (oracle, domain) = multilinear_extension_oracle(&cov, 6).unwrap();
        assert!(is_submodular_bruteforce(&oracle, &domain, 1e-9, 10_000)
            .unwrap()
            .holds());
    }

    #[test]
    fn random_instances_are_submodular() {
        for seed in 0..10 {
            let (oracle, domain) = random_submodular(&[3, 4, 2], seed);
            assert!(is_submodular_bruteforce(&oracle, &domain, 1e-9, 100_000)
                .unwrap()
                .holds());
        }
    }
}
