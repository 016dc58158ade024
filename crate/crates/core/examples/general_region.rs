//! Sampled rate region of a two-relay cascade over a ternary alphabet, with sources at nodes 0 and 2.

use cascade_timing::model::CascadeSpec;
use cascade_timing::region::{general_region_sample, ProfileGrid};

fn main() -> cascade_timing::Result<()> {
    let spec = CascadeSpec::new(3, 2, vec![0, 2])?;
    let grid = ProfileGrid {
        resolution: 40,
        ..ProfileGrid::default()
    };
    let mut frontier = general_region_sample(&spec, &grid)?;
    frontier.sort_by(|a, b| a.rates()[0].total_cmp(&b.rates()[0]));
    println!("{} Pareto points", frontier.len());
    for rv in frontier.iter().step_by((frontier.len() / 10).max(1)) {
        let r = rv.rates();
        println!("  R0 = {:.4}, R1 = {:.4}, sum {:.4}", r[0], r[1], rv.sum());
    }
    Ok(())
}
