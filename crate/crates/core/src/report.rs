//! On-disk formats: layout/profile JSON, swap logs, latency and simulation
//! CSV/JSON, and the run manifest that ties a set of outputs together.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::reliability::{BitLayout, ReliabilityProfile};
use crate::sim::{Comparison, SimResult};
use crate::tree::LatencyReport;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Profile and layout in one JSON object:
/// `{"n", "epsilon", "z", "kinds": "FFFI...", "k"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutDocument {
    pub n: usize,
    pub epsilon: f64,
    pub z: Vec<f64>,
    pub kinds: String,
    pub k: usize,
}

impl LayoutDocument {
    pub fn new(profile: &ReliabilityProfile, layout: &BitLayout) -> Self {
        LayoutDocument {
            n: layout.n(),
            epsilon: profile.epsilon(),
            z: profile.z().to_vec(),
            kinds: layout.to_string(),
            k: layout.k(),
        }
    }

    pub fn layout(&self) -> Result<BitLayout> {
        let layout: BitLayout = self.kinds.parse()?;
        if layout.n() != self.n || layout.k() != self.k {
            return Err(Error::BadLayoutString(format!(
                "kinds string describes ({}, {}) but document says ({}, {})",
                layout.n(),
                layout.k(),
                self.n,
                self.k
            )));
        }
        Ok(layout)
    }

    /// Reads a bare document or one wrapped by [`OutputSet::write_json`].
    pub fn read(path: &Path) -> Result<Self> {
        let mut doc: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
        if let Some(data) = doc.get_mut("data") {
            doc = data.take();
        }
        Ok(serde_json::from_value(doc)?)
    }
}

/// One line of a latency table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatencyRow {
    pub n: usize,
    pub rate: f64,
    pub threshold: f64,
    pub mode: String,
    pub cycles: u64,
    pub reduction_percent: f64,
}

impl LatencyRow {
    pub const HEADER: &'static str = "n,rate,T_h,mode,cycles,reduction_percent";

    pub fn new(n: usize, rate: f64, threshold: f64, report: &LatencyReport) -> Self {
        LatencyRow {
            n,
            rate,
            threshold,
            mode: report.overhead_mode.name().to_string(),
            cycles: report.total_cycles,
            reduction_percent: report.reduction_percent,
        }
    }

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{:.2}",
            self.n, self.rate, self.threshold, self.mode, self.cycles, self.reduction_percent
        )
    }
}

/// One line of a BER/FER table.
pub struct SimRow<'a> {
    pub n: usize,
    pub rate: f64,
    pub threshold: f64,
    pub result: &'a SimResult,
}

impl SimRow<'_> {
    pub const HEADER: &'static str = "n,rate,T_h,ebno_db,frames,bit_errors,frame_errors,ber,fer";

    pub fn csv(&self) -> String {
        let r = self.result;
        format!(
            "{},{},{},{},{},{},{},{:e},{:e}",
            self.n,
            self.rate,
            self.threshold,
            r.ebno_db,
            r.frames,
            r.bit_errors,
            r.frame_errors,
            r.ber,
            r.fer
        )
    }
}

pub fn sim_rows(cmp: &Comparison) -> Vec<SimRow<'_>> {
    let n = cmp.config.n;
    let rate = cmp.config.rate();
    cmp.runs
        .iter()
        .flat_map(|run| {
            run.points.iter().map(move |result| SimRow {
                n,
                rate,
                threshold: run.threshold,
                result,
            })
        })
        .collect()
}

pub fn latency_rows(cmp: &Comparison) -> Vec<LatencyRow> {
    let n = cmp.config.n;
    let rate = cmp.config.rate();
    cmp.runs
        .iter()
        .flat_map(|run| {
            run.latency
                .iter()
                .map(move |rep| LatencyRow::new(n, rate, run.threshold, rep))
        })
        .collect()
}

/// Provenance record written next to every set of outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Value,
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: Value) -> Self {
        RunManifest {
            command: command.to_string(),
            config,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            outputs: Vec::new(),
        }
    }
}

/// Collects the files of one invocation under a directory. Every CSV starts
/// with `#` comment lines echoing the config and naming the manifest; every
/// JSON file wraps its payload with the same two fields.
pub struct OutputSet {
    dir: PathBuf,
    manifest: RunManifest,
}

impl OutputSet {
    pub fn create(dir: &Path, manifest: RunManifest) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(OutputSet {
            dir: dir.to_path_buf(),
            manifest,
        })
    }

    pub fn write_csv<I>(&mut self, name: &str, header: &str, lines: I) -> Result<PathBuf>
    where
        I: IntoIterator<Item = String>,
    {
        let mut text = String::new();
        let _ = writeln!(text, "# manifest: {MANIFEST_FILE}");
        let _ = writeln!(text, "# config: {}", self.manifest.config);
        text.push_str(header);
        text.push('\n');
        for line in lines {
            text.push_str(&line);
            text.push('\n');
        }
        self.write(name, text)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, data: &T) -> Result<PathBuf> {
        let doc = serde_json::json!({
            "manifest": MANIFEST_FILE,
            "config": self.manifest.config,
            "data": data,
        });
        self.write(name, serde_json::to_string_pretty(&doc)? + "\n")
    }

    fn write(&mut self, name: &str, text: String) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, text)?;
        self.manifest.outputs.push(name.to_string());
        Ok(path)
    }

    /// Writes the manifest last and returns every path produced.
    pub fn finish(self) -> Result<Vec<PathBuf>> {
        let mut paths: Vec<PathBuf> = self
            .manifest
            .outputs
            .iter()
            .map(|o| self.dir.join(o))
            .collect();
        let path = self.dir.join(MANIFEST_FILE);
        fs::write(&path, serde_json::to_string_pretty(&self.manifest)? + "\n")?;
        paths.push(path);
        Ok(paths)
    }
}

/// Reads the `data` payload of a JSON file written by [`OutputSet`].
pub fn read_json_payload<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let doc: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    let data = doc
        .get("data")
        .cloned()
        .ok_or_else(|| Error::Config(format!("{} has no data field", path.display())))?;
    Ok(serde_json::from_value(data)?)
}
