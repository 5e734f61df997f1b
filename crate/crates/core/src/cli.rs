//! Command-line front end: `construct`, `latency`, `simulate` and `sweep`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::codec::Kernel;
use crate::construction::optimize_layout;
use crate::error::{Error, Result};
use crate::reliability::{baseline_layout, bec_profile, k_for_rate, BitLayout, ReliabilityProfile};
use crate::report::{
    latency_rows, sim_rows, LatencyRow, LayoutDocument, OutputSet, RunManifest, SimRow,
};
use crate::sim::{compare_constructions, DecoderKind, SimConfig};
use crate::tree::{build_pruned_tree, compare_latency, OverheadMode};

#[derive(Debug, Parser)]
#[command(
    name = "ccpolar",
    version,
    about = "Constituent-code-oriented polar code construction and latency analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the baseline layout, run the swap optimizer and write both.
    Construct(ConstructArgs),
    /// Report modeled decoding latency of a layout.
    Latency(LatencyArgs),
    /// Monte Carlo BER/FER of the baseline and optimized constructions.
    Simulate(SimulateArgs),
    /// Latency table over a grid of lengths, rates and thresholds.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct CodeArgs {
    /// Code length (power of two).
    #[arg(long)]
    pub n: usize,
    /// Information bits.
    #[arg(long, conflicts_with = "rate")]
    pub k: Option<usize>,
    /// Code rate, alternative to --k (k = round(rate * n)).
    #[arg(long)]
    pub rate: Option<f64>,
    /// BEC design erasure probability.
    #[arg(long, default_value_t = 0.3)]
    pub epsilon: f64,
    /// Swap threshold on the Bhattacharyya-parameter difference.
    #[arg(long, default_value_t = 0.0)]
    pub threshold: f64,
}

impl CodeArgs {
    fn k(&self) -> Result<usize> {
        match (self.k, self.rate) {
            (Some(k), _) => Ok(k),
            (None, Some(rate)) => k_for_rate(self.n, rate),
            (None, None) => Err(Error::Config("one of --k or --rate is required".into())),
        }
    }

    fn echo(&self) -> Result<Value> {
        Ok(json!({
            "n": self.n,
            "k": self.k()?,
            "epsilon": self.epsilon,
            "threshold": self.threshold,
        }))
    }
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, default_value = "ccpolar-out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct LatencyArgs {
    /// Layout JSON written by `construct`; replaces the code flags.
    #[arg(long, conflicts_with_all = ["n", "k", "rate", "threshold"])]
    pub layout: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long, default_value_t = 0.3)]
    pub epsilon: f64,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// sum-of-leaves, plus-two-per-mixed, feedback-cycle, or both/all.
    #[arg(long, default_value = "sum-of-leaves")]
    pub mode: String,
    #[arg(long, default_value = "ccpolar-out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON or key=value config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, conflicts_with = "rate")]
    pub k: Option<usize>,
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Swap thresholds (repeat or comma-separate).
    #[arg(long, value_delimiter = ',')]
    pub threshold: Vec<f64>,
    /// Eb/N0 points in dB (repeat or comma-separate).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub ebno: Vec<f64>,
    #[arg(long)]
    pub max_frames: Option<u64>,
    #[arg(long)]
    pub min_frame_errors: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// min-sum or exact.
    #[arg(long)]
    pub kernel: Option<String>,
    /// sc, fast or fast-rate-zero-one.
    #[arg(long)]
    pub decoder: Option<String>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, default_value = "ccpolar-out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [1024usize, 2048, 16384])]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.3, 0.5, 0.7])]
    pub rate: Vec<f64>,
    /// Thresholds; defaults to decades 1e-60..1e-1 plus 0.2..0.5.
    #[arg(long, value_delimiter = ',')]
    pub threshold: Vec<f64>,
    #[arg(long, default_value_t = 0.3)]
    pub epsilon: f64,
    #[arg(long, default_value = "all")]
    pub mode: String,
    #[arg(long, default_value = "ccpolar-out")]
    pub out_dir: PathBuf,
}

/// Entry point of the `ccpolar` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Executes a parsed command and returns the files written.
pub fn run(cli: Cli) -> Result<Vec<PathBuf>> {
    match cli.command {
        Command::Construct(a) => cmd_construct(&a),
        Command::Latency(a) => cmd_latency(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Sweep(a) => cmd_sweep(&a),
    }
}

fn parse_modes(s: &str) -> Result<Vec<OverheadMode>> {
    match s {
        "both" | "all" => Ok(OverheadMode::ALL.to_vec()),
        other => Ok(vec![other.parse()?]),
    }
}

pub fn cmd_construct(a: &ConstructArgs) -> Result<Vec<PathBuf>> {
    let c = &a.code;
    let profile = bec_profile(c.epsilon, c.n)?;
    let baseline = baseline_layout(&profile, c.k()?)?;
    let (optimized, swaps) = optimize_layout(&baseline, &profile, c.threshold)?;

    let base_tree = build_pruned_tree(&baseline);
    let opt_tree = build_pruned_tree(&optimized);
    let report = compare_latency(&base_tree, &opt_tree, OverheadMode::SumOfLeaves);
    println!("baseline  {baseline}");
    println!("optimized {optimized}");
    println!("swaps     {}", swaps.len());
    for s in &swaps {
        println!(
            "  i={} f={} delta={:e}",
            s.info_index, s.frozen_index, s.delta
        );
    }
    println!(
        "latency   {} -> {} cycles ({:.1}% reduction, {})",
        report.baseline_cycles, report.total_cycles, report.reduction_percent, report.overhead_mode
    );

    let mut out = OutputSet::create(&a.out_dir, RunManifest::new("construct", c.echo()?))?;
    out.write_json(
        "layout_baseline.json",
        &LayoutDocument::new(&profile, &baseline),
    )?;
    out.write_json(
        "layout_optimized.json",
        &LayoutDocument::new(&profile, &optimized),
    )?;
    out.write_json("swaps.json", &swaps)?;
    out.finish()
}

fn latency_inputs(a: &LatencyArgs) -> Result<(ReliabilityProfile, BitLayout, BitLayout, f64)> {
    if let Some(path) = &a.layout {
        let doc = LayoutDocument::read(path)?;
        let layout = doc.layout()?;
        let profile = bec_profile(doc.epsilon, doc.n)?;
        let baseline = baseline_layout(&profile, doc.k)?;
        return Ok((profile, baseline, layout, f64::NAN));
    }
    let n =
        a.n.ok_or_else(|| Error::Config("--n or --layout is required".into()))?;
    let code = CodeArgs {
        n,
        k: a.k,
        rate: a.rate,
        epsilon: a.epsilon,
        threshold: a.threshold.unwrap_or(0.0),
    };
    let profile = bec_profile(code.epsilon, n)?;
    let baseline = baseline_layout(&profile, code.k()?)?;
    let (layout, _) = optimize_layout(&baseline, &profile, code.threshold)?;
    Ok((profile, baseline, layout, code.threshold))
}

pub fn cmd_latency(a: &LatencyArgs) -> Result<Vec<PathBuf>> {
    let modes = parse_modes(&a.mode)?;
    let (profile, baseline, layout, threshold) = latency_inputs(a)?;
    let base_tree = build_pruned_tree(&baseline);
    let tree = build_pruned_tree(&layout);
    let rate = layout.k() as f64 / layout.n() as f64;

    let mut rows = Vec::new();
    for mode in modes {
        let report = compare_latency(&base_tree, &tree, mode);
        println!(
            "{:<20} {:>8} cycles  (baseline {}, reduction {:.2}%)",
            mode.name(),
            report.total_cycles,
            report.baseline_cycles,
            report.reduction_percent
        );
        for (class, t) in &report.per_class {
            println!(
                "    {:<6} count {:>6}  cycles {:>8}",
                class.name(),
                t.count,
                t.cycles
            );
        }
        rows.push(LatencyRow::new(layout.n(), rate, threshold, &report));
    }

    let echo = json!({
        "n": layout.n(),
        "k": layout.k(),
        "epsilon": profile.epsilon(),
        "threshold": threshold,
        "layout_file": a.layout,
        "mode": a.mode,
    });
    let mut out = OutputSet::create(&a.out_dir, RunManifest::new("latency", echo))?;
    out.write_csv(
        "latency.csv",
        LatencyRow::HEADER,
        rows.iter().map(LatencyRow::csv),
    )?;
    out.finish()
}

/// Reads a simulation config from JSON or `key = value` lines. List values
/// are comma-separated; a `rate` key is converted to `k`.
pub fn load_config(path: &Path) -> Result<SimConfig> {
    let text = fs::read_to_string(path)?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<SimConfig> {
    let mut map: Map<String, Value> = if text.trim_start().starts_with('{') {
        serde_json::from_str(text)?
    } else {
        parse_key_values(text)?
    };
    let rate = map.remove("rate");
    let mut config: SimConfig =
        serde_json::from_value(Value::Object(map)).map_err(|e| Error::Config(e.to_string()))?;
    if let Some(rate) = rate {
        let rate = rate
            .as_f64()
            .ok_or_else(|| Error::Config("rate must be a number".into()))?;
        config.k = k_for_rate(config.n, rate)?;
    }
    Ok(config)
}

fn parse_key_values(text: &str) -> Result<Map<String, Value>> {
    const LISTS: [&str; 2] = ["thresholds", "ebno_db"];
    let mut map = Map::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let key = key.trim();
        let value = value.trim();
        let parsed = if LISTS.contains(&key) {
            Value::Array(
                value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(scalar)
                    .collect(),
            )
        } else {
            scalar(value)
        };
        map.insert(key.to_string(), parsed);
    }
    Ok(map)
}

fn scalar(s: &str) -> Value {
    if let Ok(v) = s.parse::<u64>() {
        json!(v)
    } else if let Ok(v) = s.parse::<f64>() {
        json!(v)
    } else {
        json!(s.trim_matches('"'))
    }
}

fn resolve_sim_config(a: &SimulateArgs) -> Result<SimConfig> {
    let mut c = match &a.config {
        Some(p) => load_config(p)?,
        None => SimConfig::default(),
    };
    if let Some(n) = a.n {
        c.n = n;
    }
    if let Some(k) = a.k {
        c.k = k;
    }
    if let Some(rate) = a.rate {
        c.k = k_for_rate(c.n, rate)?;
    }
    if let Some(e) = a.epsilon {
        c.epsilon_design = e;
    }
    if !a.threshold.is_empty() {
        c.thresholds = a.threshold.clone();
    }
    if !a.ebno.is_empty() {
        c.ebno_db = a.ebno.clone();
    }
    if let Some(m) = a.max_frames {
        c.max_frames = m;
    }
    if let Some(m) = a.min_frame_errors {
        c.min_frame_errors = m;
    }
    if let Some(s) = a.seed {
        c.master_seed = s;
    }
    if let Some(k) = &a.kernel {
        c.kernel = serde_json::from_value::<Kernel>(json!(k))
            .map_err(|_| Error::Config(format!("unknown kernel {k:?}")))?;
    }
    if let Some(d) = &a.decoder {
        c.decoder = serde_json::from_value::<DecoderKind>(json!(d))
            .map_err(|_| Error::Config(format!("unknown decoder {d:?}")))?;
    }
    c.validate()?;
    Ok(c)
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<Vec<PathBuf>> {
    let config = resolve_sim_config(a)?;
    let cmp = compare_constructions(&config, a.workers)?;

    for row in sim_rows(&cmp) {
        let r = row.result;
        println!(
            "T_h={:<8e} Eb/N0={:>5.2} dB  frames={:>8}  BER={:.3e}  FER={:.3e}",
            row.threshold, r.ebno_db, r.frames, r.ber, r.fer
        );
    }

    let mut out = OutputSet::create(
        &a.out_dir,
        RunManifest::new("simulate", serde_json::to_value(&config)?),
    )?;
    out.write_csv(
        "sim.csv",
        SimRow::HEADER,
        sim_rows(&cmp).iter().map(SimRow::csv),
    )?;
    out.write_csv(
        "latency.csv",
        LatencyRow::HEADER,
        latency_rows(&cmp).iter().map(LatencyRow::csv),
    )?;
    out.write_json("sim.json", &cmp)?;
    out.finish()
}

fn default_sweep_thresholds() -> Vec<f64> {
    let mut t: Vec<f64> = (1..=60).rev().map(|e| 10f64.powi(-e)).collect();
    t.extend([0.2, 0.3, 0.4, 0.5]);
    t
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<Vec<PathBuf>> {
    let modes = parse_modes(&a.mode)?;
    let thresholds = if a.threshold.is_empty() {
        default_sweep_thresholds()
    } else {
        a.threshold.clone()
    };
    let mut rows = Vec::new();
    for &n in &a.n {
        let profile = bec_profile(a.epsilon, n)?;
        for &rate in &a.rate {
            let baseline = baseline_layout(&profile, k_for_rate(n, rate)?)?;
            let base_tree = build_pruned_tree(&baseline);
            for &t in std::iter::once(&0.0).chain(&thresholds) {
                let (layout, _) = optimize_layout(&baseline, &profile, t)?;
                let tree = build_pruned_tree(&layout);
                for &mode in &modes {
                    rows.push(LatencyRow::new(
                        n,
                        rate,
                        t,
                        &compare_latency(&base_tree, &tree, mode),
                    ));
                }
            }
        }
    }
    println!("{}", LatencyRow::HEADER);
    for r in &rows {
        println!("{}", r.csv());
    }
    let echo = json!({
        "n": a.n,
        "rate": a.rate,
        "thresholds": thresholds,
        "epsilon": a.epsilon,
        "mode": a.mode,
    });
    let mut out = OutputSet::create(&a.out_dir, RunManifest::new("sweep", echo))?;
    out.write_csv(
        "sweep.csv",
        LatencyRow::HEADER,
        rows.iter().map(LatencyRow::csv),
    )?;
    out.finish()
}
