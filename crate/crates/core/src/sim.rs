//! BPSK/AWGN channel and a reproducible Monte Carlo BER/FER engine.
//!
//! Every frame draws its randomness from its own generator, seeded from the
//! master seed, the Eb/N0 point index and the frame index. Results are
//! therefore identical for any worker count, and different constructions
//! simulated under the same seed see the same noise realizations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{encode, FastDecoder, Kernel, Llr, ScDecoder};
use crate::construction::optimize_layout;
use crate::error::{Error, Result};
use crate::reliability::{baseline_layout, bec_profile, BitLayout};
use crate::tree::{
    build_pruned_tree, build_pruned_tree_with, compare_latency, LatencyReport, OverheadMode,
    PrunedTree, Pruning,
};

/// Frames handed to the worker pool per round; the stopping rule is applied
/// frame by frame afterwards, so this only affects overshoot work.
const BATCH: u64 = 2048;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderKind {
    /// Full-depth successive cancellation.
    Sc,
    /// Constituent-code decoding with N0/N1/REP/SPC leaves.
    #[default]
    Fast,
    /// Constituent-code decoding with N0/N1 leaves only.
    FastRateZeroOne,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub n: usize,
    pub k: usize,
    pub epsilon_design: f64,
    /// Swap thresholds to evaluate; the unoptimized baseline is always run.
    pub thresholds: Vec<f64>,
    pub ebno_db: Vec<f64>,
    pub max_frames: u64,
    /// Stop a point once this many frame errors are seen; 0 disables.
    pub min_frame_errors: u64,
    pub master_seed: u64,
    pub kernel: Kernel,
    pub decoder: DecoderKind,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n: 1024,
            k: 512,
            epsilon_design: 0.3,
            thresholds: vec![1e-4, 5e-4, 1e-3],
            ebno_db: vec![1.0, 1.5, 2.0, 2.5, 3.0],
            max_frames: 100_000,
            min_frame_errors: 100,
            master_seed: 0,
            kernel: Kernel::MinSum,
            decoder: DecoderKind::Fast,
        }
    }
}

impl SimConfig {
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || !self.n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(self.n));
        }
        if self.k == 0 || self.k > self.n {
            return Err(Error::Config(format!(
                "k must be in 1..={}, got {}",
                self.n, self.k
            )));
        }
        if !(0.0..=1.0).contains(&self.epsilon_design) {
            return Err(Error::BadProbability(self.epsilon_design));
        }
        if self.max_frames == 0 {
            return Err(Error::Config("max_frames must be at least 1".into()));
        }
        if self.ebno_db.is_empty() {
            return Err(Error::Config("ebno_db list is empty".into()));
        }
        if let Some(&t) = self.thresholds.iter().find(|t| t.is_nan() || **t < 0.0) {
            return Err(Error::NegativeThreshold(t));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub ebno_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    /// Sum over frames of the squared per-frame bit-error count, for the
    /// frame-level variance of the BER estimate.
    pub bit_errors_sq: u64,
    pub seed_provenance: String,
}

impl SimResult {
    fn new(ebno_db: f64, k: usize, frames: u64, tally: Tally, provenance: String) -> Self {
        let bits = frames as f64 * k as f64;
        SimResult {
            ebno_db,
            frames,
            bit_errors: tally.bit_errors,
            frame_errors: tally.frame_errors,
            ber: if bits > 0.0 {
                tally.bit_errors as f64 / bits
            } else {
                0.0
            },
            fer: if frames > 0 {
                tally.frame_errors as f64 / frames as f64
            } else {
                0.0
            },
            bit_errors_sq: tally.bit_errors_sq,
            seed_provenance: provenance,
        }
    }

    /// 95% Wilson score interval for the frame error rate.
    pub fn fer_ci95(&self) -> (f64, f64) {
        wilson_interval(self.frame_errors, self.frames, 1.96)
    }

    /// 95% normal interval for the BER, treating frames as independent
    /// clusters of `k` bits (bit errors inside a frame are correlated).
    pub fn ber_ci95(&self, k: usize) -> (f64, f64) {
        let f = self.frames as f64;
        if f < 2.0 {
            return (0.0, 1.0);
        }
        let mean = self.bit_errors as f64 / f;
        let var = (self.bit_errors_sq as f64 / f - mean * mean).max(0.0) * f / (f - 1.0);
        let half = 1.96 * (var / f).sqrt() / k as f64;
        ((self.ber - half).max(0.0), (self.ber + half).min(1.0))
    }
}

pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Copy, Debug, Default)]
struct Tally {
    bit_errors: u64,
    frame_errors: u64,
    bit_errors_sq: u64,
}

impl Tally {
    fn add(&mut self, errs: u32) {
        let e = u64::from(errs);
        self.bit_errors += e;
        self.bit_errors_sq += e * e;
        self.frame_errors += u64::from(errs > 0);
    }
}

/// Noise variance per real dimension for BPSK at the given Eb/N0 and rate.
pub fn noise_variance(ebno_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::BadRate(rate));
    }
    Ok(1.0 / (2.0 * rate * 10f64.powf(ebno_db / 10.0)))
}

/// Channel LLR of a received BPSK sample.
#[inline]
pub fn bpsk_llr(y: f64, sigma2: f64) -> Llr {
    2.0 * y / sigma2
}

/// Maps bits to `1 - 2x`, adds white Gaussian noise and returns LLRs.
pub fn awgn_bpsk_llr<R: Rng + ?Sized>(
    codeword: &[u8],
    ebno_db: f64,
    rate: f64,
    rng: &mut R,
) -> Result<Vec<Llr>> {
    let sigma2 = noise_variance(ebno_db, rate)?;
    let mut out = vec![0.0; codeword.len()];
    awgn_into(codeword, sigma2, rng, &mut out);
    Ok(out)
}

fn awgn_into<R: Rng + ?Sized>(codeword: &[u8], sigma2: f64, rng: &mut R, out: &mut [Llr]) {
    let sigma = sigma2.sqrt();
    for (o, &x) in out.iter_mut().zip(codeword) {
        let s = 1.0 - 2.0 * f64::from(x);
        let noise: f64 = rng.sample(StandardNormal);
        *o = bpsk_llr(s + sigma * noise, sigma2);
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of one frame's generator.
pub fn frame_seed(master_seed: u64, point: usize, frame: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master_seed) ^ point as u64) ^ frame)
}

enum FrameDecoder {
    Sc(ScDecoder),
    Fast(FastDecoder),
}

struct Frame<'a> {
    layout: &'a BitLayout,
    tree: Option<&'a PrunedTree>,
    kernel: Kernel,
    sigma2: f64,
    master_seed: u64,
    point: usize,
}

impl Frame<'_> {
    fn decoder(&self) -> FrameDecoder {
        match self.tree {
            Some(_) => FrameDecoder::Fast(FastDecoder::new(self.kernel)),
            None => FrameDecoder::Sc(ScDecoder::new(self.kernel)),
        }
    }

    /// Bit errors of one frame.
    fn run(&self, frame: u64, decoder: &mut FrameDecoder, llrs: &mut Vec<Llr>) -> u32 {
        let mut rng = ChaCha8Rng::seed_from_u64(frame_seed(self.master_seed, self.point, frame));
        let info: Vec<u8> = (0..self.layout.k())
            .map(|_| rng.random::<u8>() & 1)
            .collect();
        let x = encode(self.layout, &info).expect("info length matches layout");
        llrs.resize(x.len(), 0.0);
        awgn_into(&x, self.sigma2, &mut rng, llrs);
        let decoded = match (decoder, self.tree) {
            (FrameDecoder::Fast(d), Some(tree)) => d.decode(llrs, tree),
            (FrameDecoder::Sc(d), _) => d.decode(llrs, self.layout),
            (FrameDecoder::Fast(_), None) => unreachable!(),
        }
        .expect("llr length matches layout");
        decoded
            .info
            .iter()
            .zip(&info)
            .filter(|(a, b)| a != b)
            .count() as u32
    }
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// Simulates Eb/N0 point `point` of `config` on `layout` with `workers`
/// threads (0 = available parallelism).
///
/// Frames are simulated in index order conceptually: the run ends after
/// `max_frames` frames, or at the frame that brings the error count to
/// `min_frame_errors` when that is non-zero.
pub fn run_point(
    config: &SimConfig,
    layout: &BitLayout,
    point: usize,
    workers: usize,
) -> Result<SimResult> {
    if layout.n() != config.n || layout.k() != config.k {
        return Err(Error::Config(format!(
            "layout is ({}, {}) but config is ({}, {})",
            layout.n(),
            layout.k(),
            config.n,
            config.k
        )));
    }
    let ebno_db = *config
        .ebno_db
        .get(point)
        .ok_or_else(|| Error::Config(format!("Eb/N0 point {point} out of range")))?;
    let sigma2 = noise_variance(ebno_db, config.rate())?;
    let tree = match config.decoder {
        DecoderKind::Sc => None,
        DecoderKind::Fast => Some(build_pruned_tree(layout)),
        DecoderKind::FastRateZeroOne => Some(build_pruned_tree_with(layout, Pruning::RateZeroOne)),
    };
    let job = Frame {
        layout,
        tree: tree.as_ref(),
        kernel: config.kernel,
        sigma2,
        master_seed: config.master_seed,
        point,
    };
    let workers = if workers == 0 {
        rayon::current_num_threads()
    } else {
        workers
    };
    let pool = thread_pool(workers)?;

    let mut tally = Tally::default();
    let mut frames = 0u64;
    'outer: while frames < config.max_frames {
        let end = (frames + BATCH).min(config.max_frames);
        let errors: Vec<u32> = pool.install(|| {
            (frames..end)
                .into_par_iter()
                .map_init(
                    || (job.decoder(), Vec::new()),
                    |(dec, buf), f| job.run(f, dec, buf),
                )
                .collect()
        });
        for e in errors {
            tally.add(e);
            frames += 1;
            if config.min_frame_errors > 0 && tally.frame_errors >= config.min_frame_errors {
                break 'outer;
            }
        }
    }
    let provenance = format!(
        "chacha8 per frame; seed = mix(master_seed={}, point={}, frame), frames 0..{}",
        config.master_seed, point, frames
    );
    Ok(SimResult::new(ebno_db, config.k, frames, tally, provenance))
}

/// Simulates every Eb/N0 point of `config` on `layout`.
pub fn run_curve(config: &SimConfig, layout: &BitLayout, workers: usize) -> Result<Vec<SimResult>> {
    (0..config.ebno_db.len())
        .map(|p| run_point(config, layout, p, workers))
        .collect()
}

/// One construction (baseline or a threshold) in a comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionRun {
    /// 0 for the unoptimized baseline.
    pub threshold: f64,
    pub layout: String,
    pub swaps: usize,
    /// One report per overhead mode, reductions relative to the baseline.
    pub latency: Vec<LatencyReport>,
    pub points: Vec<SimResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub config: SimConfig,
    pub runs: Vec<ConstructionRun>,
}

/// Row of the combined latency/error-rate table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub threshold: f64,
    pub mode: OverheadMode,
    pub cycles: u64,
    pub reduction_percent: f64,
    pub ebno_db: f64,
    pub ber: f64,
    pub fer: f64,
    /// Optimized BER over baseline BER (NaN when the baseline saw no errors).
    pub ber_ratio: f64,
}

impl Comparison {
    pub fn baseline(&self) -> &ConstructionRun {
        &self.runs[0]
    }

    pub fn summary(&self) -> Vec<SummaryRow> {
        let base = self.baseline();
        let mut rows = Vec::new();
        for run in &self.runs {
            for report in &run.latency {
                for (pt, bpt) in run.points.iter().zip(&base.points) {
                    rows.push(SummaryRow {
                        threshold: run.threshold,
                        mode: report.overhead_mode,
                        cycles: report.total_cycles,
                        reduction_percent: report.reduction_percent,
                        ebno_db: pt.ebno_db,
                        ber: pt.ber,
                        fer: pt.fer,
                        ber_ratio: if bpt.ber > 0.0 {
                            pt.ber / bpt.ber
                        } else {
                            f64::NAN
                        },
                    });
                }
            }
        }
        rows
    }
}

/// Builds the baseline and every thresholded construction of `config`,
/// models their latency and simulates their BER/FER curves.
pub fn compare_constructions(config: &SimConfig, workers: usize) -> Result<Comparison> {
    config.validate()?;
    let profile = bec_profile(config.epsilon_design, config.n)?;
    let baseline = baseline_layout(&profile, config.k)?;
    let base_tree = build_pruned_tree(&baseline);

    let mut runs = Vec::with_capacity(config.thresholds.len() + 1);
    for &threshold in std::iter::once(&0.0).chain(&config.thresholds) {
        let (layout, swaps) = optimize_layout(&baseline, &profile, threshold)?;
        let tree = build_pruned_tree(&layout);
        let latency = OverheadMode::ALL
            .iter()
            .map(|&m| compare_latency(&base_tree, &tree, m))
            .collect();
        let points = run_curve(config, &layout, workers)?;
        runs.push(ConstructionRun {
            threshold,
            layout: layout.to_string(),
            swaps: swaps.len(),
            latency,
            points,
        });
    }
    Ok(Comparison {
        config: config.clone(),
        runs,
    })
}
