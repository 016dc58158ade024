//! Exact message-set sizes for finite block lengths and their approach to
//! the capacity.

use cascade_timing::capacity::{solve_capacity, DEFAULT_TOL};
use cascade_timing::codec::counting_rate;
use cascade_timing::combinatorics::{message_set_sizes, optimal_budgets, optimal_counting_rate};
use cascade_timing::model::CascadeSpec;

fn main() -> cascade_timing::Result<()> {
    let limit = solve_capacity(2, 2, DEFAULT_TOL)?.value;
    println!("single relay, q = 2, capacity {limit:.4}");
    for n in [4, 16, 64, 256, 1024, 4096] {
        let n1 = (0.2815 * n as f64).round() as usize;
        let best = optimal_budgets(n, 2, 2)?;
        println!(
            "  n = {n:>4}: n1 = {n1:>4} gives {:.4}, best n1 = {:>4} gives {:.4}",
            counting_rate(n, n1, 2)?,
            best.at(1),
            optimal_counting_rate(n, 2, 2)?
        );
    }

    let spec = CascadeSpec::new(3, 2, vec![0, 2])?;
    let bv = optimal_budgets(12, 3, 2)?;
    let sizes = message_set_sizes(&spec, &bv)?;
    println!(
        "two relays, relay source at node 2, n = 12, budgets {:?}: sizes {:?}",
        bv.budgets(),
        sizes.0
    );
    Ok(())
}
