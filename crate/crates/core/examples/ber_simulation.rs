//! Monte Carlo BER/FER of the baseline against optimized constructions,
//! next to their latency.
//!
//! cargo run --release --example ber_simulation -- [frames]

use ccpolar::{compare_constructions, OverheadMode, SimConfig};

fn main() -> ccpolar::Result<()> {
    let frames: u64 = std::env::args()
        .nth(1)
        .map_or(20_000, |s| s.parse().expect("frames"));
    let config = SimConfig {
        n: 1024,
        k: 512,
        thresholds: vec![1e-4, 1e-3],
        ebno_db: vec![1.5, 2.0, 2.5],
        max_frames: frames,
        min_frame_errors: 0,
        master_seed: 7,
        ..SimConfig::default()
    };
    let cmp = compare_constructions(&config, 0)?;

    println!(
        "{:>7} {:>6} {:>9} {:>6} {:>11} {:>11} {:>9}",
        "T_h", "cycles", "reduction", "Eb/N0", "BER", "FER", "BER ratio"
    );
    for row in cmp
        .summary()
        .iter()
        .filter(|r| r.mode == OverheadMode::FeedbackCycle)
    {
        println!(
            "{:>7.0e} {:>6} {:>8.1}% {:>6.1} {:>11.4e} {:>11.4e} {:>9.3}",
            row.threshold,
            row.cycles,
            row.reduction_percent,
            row.ebno_db,
            row.ber,
            row.fer,
            row.ber_ratio
        );
    }

    let base = cmp.baseline();
    for p in &base.points {
        let (lo, hi) = p.ber_ci95(config.k);
        println!(
            "baseline {:.1} dB: BER 95% CI [{lo:.4e}, {hi:.4e}] over {} frames",
            p.ebno_db, p.frames
        );
    }
    Ok(())
}
