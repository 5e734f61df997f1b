//! Encode one random frame, pass it through BPSK/AWGN and decode it with the
//! bit-by-bit SC decoder and with the pruned-tree decoder.
//!
//! cargo run --release --example encode_decode -- [ebno_db]

use ccpolar::sim::awgn_bpsk_llr;
use ccpolar::{
    baseline_layout, bec_profile, build_pruned_tree, encode, optimize_layout, FastDecoder, Kernel,
    NodeClass, ScDecoder,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> ccpolar::Result<()> {
    let ebno: f64 = std::env::args()
        .nth(1)
        .map_or(3.0, |s| s.parse().expect("ebno_db"));
    let (n, k) = (256, 128);
    let profile = bec_profile(0.3, n)?;
    let (layout, _) = optimize_layout(&baseline_layout(&profile, k)?, &profile, 1e-3)?;
    let tree = build_pruned_tree(&layout);

    let mut counts = std::collections::BTreeMap::<NodeClass, usize>::new();
    for leaf in tree.leaves() {
        *counts.entry(leaf.class).or_default() += 1;
    }
    println!(
        "({n}, {k}) code, {} tree leaves: {counts:?}",
        tree.leaves().count()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let info: Vec<u8> = (0..k).map(|_| rng.random::<u8>() & 1).collect();
    let codeword = encode(&layout, &info)?;
    let llr = awgn_bpsk_llr(&codeword, ebno, k as f64 / n as f64, &mut rng)?;
    let raw_errors = codeword
        .iter()
        .zip(&llr)
        .filter(|&(&c, &l)| (l < 0.0) as u8 != c)
        .count();
    println!("{ebno} dB: {raw_errors} of {n} channel bits flipped by hard decision");

    let sc = ScDecoder::new(Kernel::MinSum).decode(&llr, &layout)?;
    let fast = FastDecoder::new(Kernel::MinSum).decode(&llr, &tree)?;
    let errors = |u: &[u8]| u.iter().zip(&info).filter(|(a, b)| a != b).count();
    println!("SC:   {} info bit errors", errors(&sc.info));
    println!("fast: {} info bit errors", errors(&fast.info));
    println!("decoders agree: {}", sc == fast);
    Ok(())
}
