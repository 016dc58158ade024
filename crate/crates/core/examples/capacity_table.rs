//! Capacity of cascades with 1 to 100 relays, next to the time-sharing rate
//! and the infinite-cascade limit.
//!
//! ```text
//! cargo run --example capacity_table
//! ```

use cascade_timing::capacity::{capacity_infinite, solve_capacity, time_sharing_rate, DEFAULT_TOL};
use cascade_timing::cli::TABLE_M;

fn main() -> cascade_timing::Result<()> {
    println!("{:>5} {:>8} {:>8}", "m", "q = 1", "q = 2");
    for m in TABLE_M {
        let c1 = solve_capacity(m, 1, DEFAULT_TOL)?.value;
        let c2 = solve_capacity(m, 2, DEFAULT_TOL)?.value;
        println!("{m:>5} {c1:>8.4} {c2:>8.4}");
    }
    println!(
        "{:>5} {:>8.4} {:>8.4}",
        "inf",
        capacity_infinite(1),
        capacity_infinite(2)
    );
    println!(
        "{:>5} {:>8.4} {:>8.4}",
        "TS",
        time_sharing_rate(1),
        time_sharing_rate(2)
    );
    Ok(())
}
