//! Rate region of the one-relay ternary cascade where the relay also sends
//! its own messages. Writes the boundary curves as CSV to stdout.

use cascade_timing::region::{
    two_source_achievable_threshold, two_source_contains, two_source_region_curves, RateVector, RegionKind,
};

fn main() -> cascade_timing::Result<()> {
    let t = two_source_achievable_threshold()?;
    eprintln!(
        "threshold p1 = {:.4}: (R0, R1) = ({:.4}, {:.4})",
        t.p1, t.r0_min, t.r1_max
    );

    for (r0, r1) in [(0.5, 0.5), (0.5, 0.8), (0.6, 0.9), (1.1, 0.1)] {
        let rv = RateVector::new(vec![r0, r1])?;
        eprintln!(
            "({r0}, {r1}): cut-set {}, timing {}",
            two_source_contains(&rv, RegionKind::CutSet)?,
            two_source_contains(&rv, RegionKind::TimingRegion)?
        );
    }

    println!("region_tag,R0,R1");
    for p in two_source_region_curves(0.02)? {
        println!("{},{:.4},{:.4}", p.tag, p.r0, p.r1);
    }
    Ok(())
}
