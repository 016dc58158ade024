//! Network coding against timing on the wireless butterfly.

use cascade_timing::apps::cmd_butterfly;

fn main() -> cascade_timing::Result<()> {
    let r = cmd_butterfly()?;
    println!(
        "network coding: {:.4} bit/use, {}/{} bit pairs at both sinks",
        r.nc_rate, r.nc_pairs_decoded, r.nc_pairs_total
    );
    println!("timing:         {:.4} bit/use", r.timing_rate);
    println!(
        "  finite code n = {}, n1 = {}: {:.4} bit/use, {} sequences checked",
        r.timing_code.0, r.timing_code.1, r.timing_code_rate, r.timing_sequences_checked
    );
    println!("note: {}", r.note);
    Ok(())
}
