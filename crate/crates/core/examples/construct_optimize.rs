//! The (8,4) walkthrough: baseline layout, subcode table, one swap, and the
//! pruned trees before and after.
//!
//! cargo run --example construct_optimize -- [threshold]

use ccpolar::tree::total_latency;
use ccpolar::{
    baseline_layout, bec_profile, build_pruned_tree, classify_subcodes, optimize_layout,
    OverheadMode,
};

fn main() -> ccpolar::Result<()> {
    let threshold: f64 = std::env::args()
        .nth(1)
        .map_or(0.5, |s| s.parse().expect("threshold"));

    let profile = bec_profile(0.3, 8)?;
    let baseline = baseline_layout(&profile, 4)?;
    println!("baseline  {baseline}  info {:?}", baseline.info_indices());

    println!("subcode table:");
    for e in classify_subcodes(&baseline) {
        println!(
            "  node {:>2}  [{}, {})  {:?}  special {:?}",
            e.node_id,
            e.start,
            e.start + e.size,
            e.ctype,
            e.special_index
        );
    }

    let (optimized, swaps) = optimize_layout(&baseline, &profile, threshold)?;
    for s in &swaps {
        println!(
            "swap info {} <-> frozen {}  |dz| = {:.4}",
            s.info_index, s.frozen_index, s.delta
        );
    }
    println!("optimized {optimized}  info {:?}", optimized.info_indices());

    for (label, layout) in [("baseline", &baseline), ("optimized", &optimized)] {
        let tree = build_pruned_tree(layout);
        let cycles = total_latency(&tree, OverheadMode::SumOfLeaves).total_cycles;
        println!("\n{label}: {cycles} cycles");
        print!("{}", tree.dump_text());
    }
    Ok(())
}
