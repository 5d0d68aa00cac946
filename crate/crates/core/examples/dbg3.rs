use submod_core::examples::{make_example, ExampleParams};
use submod_core::solvers::{prox_quadratic, SeparableQuadratic, SolverConfig, FwVariant};

fn main() {
    let (oracle, domain) = make_example("figure1", &ExampleParams { k: 51, ..Default::default() }).unwrap();
    let sep = SeparableQuadratic::unit(&domain);
    for variant in [FwVariant::Classic, FwVariant::LineSearch, FwVariant::Pairwise] {
        let res = prox_quadratic(&oracle, &domain, &sep, &SolverConfig {
            max_iter: 5000, tolerance: 1e-6, fw_variant: variant, ..Default::default()
        }).unwrap();
        let l = res.log.last().unwrap();
        println!("{variant:?}: status {:?} iters {} gap {:.3e}", res.status, res.log.len(), l.gap);
        for rec in res.log.records().iter().filter(|r| r.iter % 250 == 0).take(8) {
            print!("  it{}: {:.1e}", rec.iter, rec.gap);
        }
        println!();
    }
}
