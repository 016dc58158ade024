//! Convergence of the finite cascade towards the closed-form limit.

use cascade_timing::capacity::{capacity_infinite, duty_cycle_infinite, solve_capacity, DEFAULT_TOL};

fn main() -> cascade_timing::Result<()> {
    for q in [1, 2] {
        let limit = capacity_infinite(q);
        println!("q = {q}: limit {limit:.6}, duty cycle {:.3}%", duty_cycle_infinite(q));
        for m in [2, 5, 11, 41, 101, 401] {
            let c = solve_capacity(m, q, DEFAULT_TOL)?;
            let p = c.profile.values();
            println!(
                "  m = {m:>3}: C = {:.6}, gap {:.2e}, last relay listens {:.4}",
                c.value,
                c.value - limit,
                p[p.len() - 2]
            );
        }
    }
    Ok(())
}
