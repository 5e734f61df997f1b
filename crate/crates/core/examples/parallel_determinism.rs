//! Every frame draws its noise from its own seed, so the result of a point
//! does not depend on how many worker threads run it.
//!
//! cargo run --release --example parallel_determinism

use std::time::Instant;

use ccpolar::{baseline_layout, bec_profile, run_point, SimConfig};

fn main() -> ccpolar::Result<()> {
    let config = SimConfig {
        n: 512,
        k: 256,
        thresholds: vec![],
        ebno_db: vec![2.0],
        max_frames: 50_000,
        min_frame_errors: 500,
        master_seed: 2024,
        ..SimConfig::default()
    };
    let layout = baseline_layout(&bec_profile(config.epsilon_design, config.n)?, config.k)?;

    let mut results = Vec::new();
    for workers in [1, 2, 8, 0] {
        let start = Instant::now();
        let r = run_point(&config, &layout, 0, workers)?;
        println!(
            "workers {:>3}: {} frames, {} frame errors, {} bit errors, {:.2?}",
            if workers == 0 {
                "all".to_string()
            } else {
                workers.to_string()
            },
            r.frames,
            r.frame_errors,
            r.bit_errors,
            start.elapsed()
        );
        results.push(r);
    }
    let same = results.windows(2).all(|w| w[0] == w[1]);
    println!("identical: {same}");
    println!("seed provenance: {}", results[0].seed_provenance);
    assert!(same);
    Ok(())
}
