use submod_core::examples::{make_example, ExampleParams};
use submod_core::solvers::{minimize_frankwolfe, SolverConfig, FwVariant};

fn main() {
    let (oracle, domain) = make_example("figure1", &ExampleParams { k: 51, ..Default::default() }).unwrap();
    for variant in [FwVariant::Classic, FwVariant::LineSearch, FwVariant::Pairwise] {
        let res = minimize_frankwolfe(&oracle, &domain, &SolverConfig {
            max_iter: 5000, tolerance: 1e-6, fw_variant: variant, ..Default::default()
        }).unwrap();
        let l = res.log.last().unwrap();
        println!("sfm {variant:?}: status {:?} iters {} gap {:.3e}", res.status, res.log.len(), l.gap);
    }
}
