//! The single-relay binary code with block length 4: the relay sends one
//! symbol per block and the source fills the three slots the relay listens to.

use cascade_timing::codec::{build_single_relay_code, render_codebooks, run_pipeline, Messages};

fn main() -> cascade_timing::Result<()> {
    let code = build_single_relay_code(4, 1, 2)?;
    print!("{}", render_codebooks(&code)?);

    let messages = Messages {
        w0: vec![1, 2, 4, 7],
        own: vec![],
    };
    let run = run_pipeline(&code, &messages, 4)?;
    println!();
    for e in &run.transcript {
        let role = match e.node {
            0 => "source",
            1 => "relay",
            _ => "sink",
        };
        println!("block {} {role:<6} {}  decoded {:?}", e.block, e.word, e.decoded);
    }
    Ok(())
}
