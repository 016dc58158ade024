//! The one-relay cascade: the capacity is the fixed point where the first
//! hop `p log2(q+1)` meets the relay output entropy.

use cascade_timing::capacity::{capacity_single_relay, h_first_hop};

fn main() -> cascade_timing::Result<()> {
    for q in [1, 2, 3, 7] {
        let c = capacity_single_relay(q, false)?;
        let p = c.profile.p(1);
        println!(
            "q = {q}: C = {:.4} at p = {p:.4} (first hop {:.4}, residual {:.1e})",
            c.value,
            h_first_hop(p, q),
            c.residual
        );
    }
    // a relay that cannot detect silence loses the N,N input pair
    let blind = capacity_single_relay(2, true)?;
    println!("q = 2 without silence detection: {:.4}", blind.value);
    Ok(())
}
