use opaque_core::lp_bound::*;
use num_traits::ToPrimitive;

fn main() {
    let t0 = std::time::Instant::now();
    let lp = build_interior_lp(&LpParameters::paper(), 64).unwrap();
    println!("build: {:?}", t0.elapsed());
    let t1 = std::time::Instant::now();
    let sol = solve_exact(&lp).unwrap();
    println!("solve: {:?} with {} pivots", t1.elapsed(), sol.pivots);
    println!("optimum = {:.10}", sol.optimum.to_f64().unwrap());
    println!("optimum - 2 = {:.3e}", sol.optimum.to_f64().unwrap() - 2.0);
    let reg = primal_regression(&sol.primal);
    println!("max primal deviation from published table: {:.3e}", reg.max_deviation);
    println!("objective vs published: {:.3e}", reg.objective_vs_published);
    for (name, dev) in reg.deviations.iter().filter(|(_, d)| *d > 1e-4) {
        println!("  deviates: {name} by {dev:.6}");
    }
    let bound = check_dual_certificate(&lp, &sol.dual).unwrap();
    println!("certified bound = {:.10}", bound.to_f64().unwrap());
}
