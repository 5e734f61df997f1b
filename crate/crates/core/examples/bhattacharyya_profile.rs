//! Bhattacharyya parameters of the polarized BEC channels and the
//! resulting baseline frozen/information layout.
//!
//! cargo run --example bhattacharyya_profile -- [n] [epsilon] [k]

use ccpolar::{baseline_layout, bec_exhaustive_oracle, bec_profile};

fn main() -> ccpolar::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(16, |s| s.parse().expect("n"));
    let eps: f64 = args.next().map_or(0.3, |s| s.parse().expect("epsilon"));
    let k: usize = args.next().map_or(n / 2, |s| s.parse().expect("k"));

    let profile = bec_profile(eps, n)?;
    let layout = baseline_layout(&profile, k)?;

    println!("n = {n}, epsilon = {eps}, k = {k}");
    println!("{:>5}  {:>12}  {:>12}  kind", "i", "z", "oracle");
    for (i, z) in profile.z().iter().enumerate() {
        // the rank-based oracle enumerates erasure patterns, so keep it small
        let oracle = if n <= 16 {
            format!("{:12.6}", bec_exhaustive_oracle(eps, n, i)?)
        } else {
            "-".into()
        };
        println!(
            "{i:>5}  {z:12.6}  {oracle:>12}  {}",
            layout.kind(i).as_char()
        );
    }

    let sum: f64 = profile.z().iter().sum();
    println!("sum z = {sum:.9} (n * epsilon = {:.9})", n as f64 * eps);
    println!("layout {layout}");
    Ok(())
}
