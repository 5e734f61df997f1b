//! Polar code construction and decoding with a constituent-code-oriented
//! layout optimizer.
//!
//! The pipeline is:
//!
//! 1. [`reliability`]: BEC Bhattacharyya parameters and the baseline
//!    frozen/information layout.
//! 2. [`construction`]: the swap optimizer that trades near-equal channels
//!    between one-info and one-frozen sub-codewords.
//! 3. [`tree`]: the pruned SC decoding tree and its cycle-latency model.
//! 4. [`codec`]: encoder, SC decoder and constituent-code decoder.
//! 5. [`sim`]: BPSK/AWGN Monte Carlo BER/FER with schedule-independent seeding.
//!
//! ```
//! use ccpolar::{baseline_layout, bec_profile, build_pruned_tree, optimize_layout, total_latency, OverheadMode};
//!
//! let profile = bec_profile(0.3, 8).unwrap();
//! let baseline = baseline_layout(&profile, 4).unwrap();
//! let (optimized, swaps) = optimize_layout(&baseline, &profile, 0.5).unwrap();
//! assert_eq!(optimized.to_string(), "FFFFIIII");
//! assert_eq!(swaps.len(), 1);
//! let before = total_latency(&build_pruned_tree(&baseline), OverheadMode::SumOfLeaves);
//! let after = total_latency(&build_pruned_tree(&optimized), OverheadMode::SumOfLeaves);
//! assert_eq!((before.total_cycles, after.total_cycles), (5, 2));
//! ```

pub mod cli;
pub mod codec;
pub mod construction;
pub mod error;
pub mod reliability;
pub mod report;
pub mod sim;
pub mod tree;

pub use codec::{
    encode, fast_decode, polar_transform, sc_decode, Decoded, FastDecoder, Kernel, Llr, ScDecoder,
};
pub use construction::{classify_subcodes, optimize_layout, SubcodeEntry, SubcodeType, SwapRecord};
pub use error::{Error, Result};
pub use reliability::{
    baseline_layout, bec_exhaustive_oracle, bec_profile, k_for_rate, BitKind, BitLayout,
    ReliabilityProfile,
};
pub use sim::{compare_constructions, run_point, Comparison, DecoderKind, SimConfig, SimResult};
pub use tree::{
    build_pruned_tree, build_pruned_tree_with, compare_latency, constituent_latency,
    conventional_latency, total_latency, LatencyReport, NodeClass, OverheadMode, PrunedTree,
    Pruning,
};
