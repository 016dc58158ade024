//! A two-relay code where the second relay adds its own message in the
//! values of the symbols it forwards. Prints the colored codebooks, then
//! checks every message sequence over four blocks.

use cascade_timing::codec::{build_table2_code, render_codebooks, verify_exhaustive};

fn main() -> cascade_timing::Result<()> {
    let code = build_table2_code()?;
    print!("{}", render_codebooks(&code)?);
    println!("rates {:?}", code.rates());
    let checked = verify_exhaustive(&code, 4, 1 << 20)?;
    println!("{checked} message sequences decoded without error");
    Ok(())
}
