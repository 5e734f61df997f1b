//! Decoding latency of the baseline and optimized constructions over a grid
//! of lengths, rates and thresholds, in every overhead mode.
//!
//! cargo run --release --example latency_table

use ccpolar::tree::conventional_latency;
use ccpolar::{
    baseline_layout, bec_profile, build_pruned_tree, compare_latency, k_for_rate, optimize_layout,
    OverheadMode,
};

const GRID: &[(usize, f64, &[f64])] = &[
    (1024, 0.3, &[1e-13, 1e-12, 1e-11]),
    (1024, 0.5, &[1e-4, 5e-4, 1e-3]),
    (1024, 0.7, &[0.1, 0.2, 0.4]),
    (2048, 0.3, &[1e-18, 1e-17, 1e-16]),
    (2048, 0.5, &[1e-6, 1e-5, 1e-4]),
    (2048, 0.7, &[0.1, 0.2, 0.3]),
    (16384, 0.3, &[1e-50, 1e-45, 1e-40]),
    (16384, 0.5, &[1e-13, 1e-12, 1e-11]),
    (16384, 0.7, &[0.1, 0.2, 0.4]),
];

fn main() -> ccpolar::Result<()> {
    let mode: OverheadMode = std::env::args()
        .nth(1)
        .map_or(Ok(OverheadMode::FeedbackCycle), |s| s.parse())?;
    println!("overhead mode: {}", mode.name());
    println!(
        "{:>6} {:>4} {:>6} {:>9} {:>7} {:>9} {:>6}",
        "n", "rate", "k", "T_h", "cycles", "reduction", "swaps"
    );

    for &(n, rate, thresholds) in GRID {
        let profile = bec_profile(0.3, n)?;
        let k = k_for_rate(n, rate)?;
        let baseline = baseline_layout(&profile, k)?;
        let base_tree = build_pruned_tree(&baseline);
        let base = compare_latency(&base_tree, &base_tree, mode);
        println!(
            "{n:>6} {rate:>4} {k:>6} {:>9} {:>7} {:>9} {:>6}",
            "none", base.total_cycles, "", ""
        );
        for &t in thresholds {
            let (layout, swaps) = optimize_layout(&baseline, &profile, t)?;
            let report = compare_latency(&base_tree, &build_pruned_tree(&layout), mode);
            println!(
                "{n:>6} {rate:>4} {k:>6} {t:>9.0e} {:>7} {:>8.1}% {:>6}",
                report.total_cycles,
                report.reduction_percent,
                swaps.len()
            );
        }
        println!(
            "{n:>6} conventional SC: {} cycles",
            conventional_latency(n)?
        );
    }
    Ok(())
}
