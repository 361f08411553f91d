use num_traits::ToPrimitive;
use opaque_core::lp_bound::*;

fn main() {
    for bits in [32u32, 128] {
        let t = std::time::Instant::now();
        let lp = build_interior_lp(&LpParameters::paper(), bits).unwrap();
        let sol = solve_exact(&lp).unwrap();
        println!(
            "bits {bits}: optimum = {:.12} ({} pivots, {:?})",
            sol.optimum.to_f64().unwrap(),
            sol.pivots,
            t.elapsed()
        );
    }
    // tiny phi: the class refinement collapses, optimum should approach 2
    let tiny = LpParameters::new(rat(1793, 10_000), rat(1, 10_000_000)).unwrap();
    let lp = build_interior_lp(&tiny, 64).unwrap();
    let sol = solve_exact(&lp).unwrap();
    println!("phi -> 0: optimum = {:.12}", sol.optimum.to_f64().unwrap());

    // relaxation keeping only the two aggregate constraints
    let full = build_interior_lp(&LpParameters::paper(), 64).unwrap();
    let mut relaxed = full.clone();
    relaxed.constraints.retain(|c| c.name == "xy" || c.name == "zz");
    let rsol = solve_exact(&relaxed).unwrap();
    println!("relaxed optimum = {:.12}", rsol.optimum.to_f64().unwrap());
}
