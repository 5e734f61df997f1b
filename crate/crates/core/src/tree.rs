//! Pruned SC decoding tree and the cycle-latency model.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reliability::{BitKind, BitLayout};

/// Heap index of the tree node covering `[start, start + size)` in a
/// length-`n` code. The root is 0 and the children of `i` are `2i+1`, `2i+2`.
pub fn node_id(n: usize, start: usize, size: usize) -> usize {
    n / size - 1 + start / size
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeClass {
    N0,
    N1,
    #[serde(rename = "REP")]
    Rep,
    #[serde(rename = "SPC")]
    Spc,
    Mixed,
}

impl NodeClass {
    /// Pattern class of a span. Size-2 `FI` matches both REP and SPC and is
    /// taken as REP, the cheaper of the two.
    pub fn of(kinds: &[BitKind]) -> Self {
        let n = kinds.len();
        let info = kinds.iter().filter(|b| b.is_info()).count();
        if info == 0 {
            NodeClass::N0
        } else if info == n {
            NodeClass::N1
        } else if info == 1 && kinds[n - 1].is_info() {
            NodeClass::Rep
        } else if info == n - 1 && !kinds[0].is_info() {
            NodeClass::Spc
        } else {
            NodeClass::Mixed
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NodeClass::N0 => "N0",
            NodeClass::N1 => "N1",
            NodeClass::Rep => "REP",
            NodeClass::Spc => "SPC",
            NodeClass::Mixed => "Mixed",
        }
    }
}

impl fmt::Display for NodeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which constituent codes may terminate the traversal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Pruning {
    /// N0, N1, REP and SPC.
    #[default]
    Full,
    /// N0 and N1 only; REP and SPC patterns are expanded like mixed nodes.
    RateZeroOne,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub stage: u32,
    pub start: usize,
    pub size: usize,
    pub class: NodeClass,
    /// Positions of the left and right child in [`PrunedTree::nodes`].
    pub children: Option<(usize, usize)>,
}

/// SC decoding tree with constituent-code leaves. Nodes are stored in
/// depth-first (decoding) order; the root is `nodes[0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrunedTree {
    nodes: Vec<TreeNode>,
    layout: BitLayout,
}

impl PrunedTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn layout(&self) -> &BitLayout {
        &self.layout
    }

    pub fn n(&self) -> usize {
        self.layout.n()
    }

    /// Constituent-code leaves, left to right.
    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| n.children.is_none())
    }

    pub fn mixed_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.children.is_some()).count()
    }

    /// Indented text rendering, one node per line.
    pub fn dump_text(&self) -> String {
        let mut out = String::new();
        self.dump_node(0, 0, &mut out);
        out
    }

    fn dump_node(&self, idx: usize, depth: usize, out: &mut String) {
        let node = &self.nodes[idx];
        let _ = writeln!(
            out,
            "{:indent$}{} [{}, {}) stage {}",
            "",
            node.class,
            node.start,
            node.start + node.size,
            node.stage,
            indent = depth * 2
        );
        if let Some((l, r)) = node.children {
            self.dump_node(l, depth + 1, out);
            self.dump_node(r, depth + 1, out);
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n(),
            "layout": self.layout.to_string(),
            "nodes": self.nodes,
        })
    }
}

pub fn build_pruned_tree(layout: &BitLayout) -> PrunedTree {
    build_pruned_tree_with(layout, Pruning::Full)
}

/// Greedy top-down pruning: a node matching an allowed constituent pattern
/// becomes a leaf, anything else is split in half.
pub fn build_pruned_tree_with(layout: &BitLayout, pruning: Pruning) -> PrunedTree {
    let mut nodes = Vec::with_capacity(2 * layout.n());
    push_node(layout.kinds(), 0, layout.n(), pruning, &mut nodes);
    PrunedTree {
        nodes,
        layout: layout.clone(),
    }
}

fn push_node(
    kinds: &[BitKind],
    start: usize,
    size: usize,
    pruning: Pruning,
    nodes: &mut Vec<TreeNode>,
) -> usize {
    let mut class = NodeClass::of(&kinds[start..start + size]);
    if pruning == Pruning::RateZeroOne && matches!(class, NodeClass::Rep | NodeClass::Spc) {
        class = NodeClass::Mixed;
    }
    let idx = nodes.len();
    nodes.push(TreeNode {
        stage: size.trailing_zeros(),
        start,
        size,
        class,
        children: None,
    });
    if class == NodeClass::Mixed {
        let half = size / 2;
        let l = push_node(kinds, start, half, pruning, nodes);
        let r = push_node(kinds, start + half, half, pruning, nodes);
        nodes[idx].children = Some((l, r));
    }
    idx
}

/// Decode latency in cycles of a constituent node of `size = 2^m` bits:
/// one cycle for N0 and N1, `m` for REP, `m + 1` for SPC.
pub fn constituent_latency(class: NodeClass, size: usize) -> Result<u64> {
    if size == 0 || !size.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(size));
    }
    let m = u64::from(size.trailing_zeros());
    match class {
        NodeClass::N0 | NodeClass::N1 => Ok(1),
        NodeClass::Rep | NodeClass::Spc if size == 1 => {
            Err(Error::NoClosedForm(format!("{class} of size 1")))
        }
        NodeClass::Rep => Ok(m),
        NodeClass::Spc => Ok(m + 1),
        NodeClass::Mixed => Err(Error::NoClosedForm("Mixed node".into())),
    }
}

/// How cycles outside the constituent decoders are accounted for.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OverheadMode {
    /// Sum of constituent latencies; mixed nodes are free.
    #[default]
    SumOfLeaves,
    /// Sum of constituent latencies plus an f pass and a g pass (2 cycles)
    /// per mixed node.
    PlusTwoPerMixed,
    /// REP and SPC leaves take one cycle beyond their decode latency to feed
    /// their partial sums back, and the total is the zero-based index of the
    /// last cycle (sum minus one), the convention behind `2n - 2`.
    FeedbackCycle,
}

impl OverheadMode {
    pub const ALL: [OverheadMode; 3] = [
        OverheadMode::SumOfLeaves,
        OverheadMode::PlusTwoPerMixed,
        OverheadMode::FeedbackCycle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OverheadMode::SumOfLeaves => "sum-of-leaves",
            OverheadMode::PlusTwoPerMixed => "plus-two-per-mixed",
            OverheadMode::FeedbackCycle => "feedback-cycle",
        }
    }

    fn leaf_cycles(self, class: NodeClass, size: usize) -> u64 {
        let base = constituent_latency(class, size).expect("leaves are constituent nodes");
        match (self, class) {
            (OverheadMode::FeedbackCycle, NodeClass::Rep | NodeClass::Spc) => base + 1,
            _ => base,
        }
    }
}

impl fmt::Display for OverheadMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for OverheadMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OverheadMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown overhead mode {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTally {
    pub count: u64,
    pub cycles: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatencyReport {
    pub total_cycles: u64,
    pub per_class: BTreeMap<NodeClass, ClassTally>,
    pub baseline_cycles: u64,
    pub reduction_percent: f64,
    pub overhead_mode: OverheadMode,
}

impl LatencyReport {
    /// Sets the reference total and recomputes the reduction against it.
    pub fn with_baseline(mut self, baseline_cycles: u64) -> Self {
        self.baseline_cycles = baseline_cycles;
        self.reduction_percent = reduction_percent(baseline_cycles, self.total_cycles);
        self
    }
}

pub fn reduction_percent(baseline: u64, total: u64) -> f64 {
    if baseline == 0 {
        0.0
    } else {
        100.0 * (1.0 - total as f64 / baseline as f64)
    }
}

/// Modeled latency of one frame. The report's baseline is the tree itself;
/// use [`LatencyReport::with_baseline`] or [`compare_latency`] to relate it
/// to an unoptimized layout.
pub fn total_latency(tree: &PrunedTree, mode: OverheadMode) -> LatencyReport {
    let mut per_class: BTreeMap<NodeClass, ClassTally> = BTreeMap::new();
    let mut sum = 0u64;
    for node in tree.nodes() {
        let cycles = match (node.children, mode) {
            (Some(_), OverheadMode::PlusTwoPerMixed) => 2,
            (Some(_), _) => 0,
            (None, _) => mode.leaf_cycles(node.class, node.size),
        };
        let tally = per_class.entry(node.class).or_default();
        tally.count += 1;
        tally.cycles += cycles;
        sum += cycles;
    }
    let total_cycles = match mode {
        OverheadMode::FeedbackCycle => sum.saturating_sub(1),
        _ => sum,
    };
    LatencyReport {
        total_cycles,
        per_class,
        baseline_cycles: total_cycles,
        reduction_percent: 0.0,
        overhead_mode: mode,
    }
}

/// Latency of `optimized` with the reduction measured against `baseline`.
pub fn compare_latency(
    baseline: &PrunedTree,
    optimized: &PrunedTree,
    mode: OverheadMode,
) -> LatencyReport {
    let base = total_latency(baseline, mode).total_cycles;
    total_latency(optimized, mode).with_baseline(base)
}

/// Cycle count of a conventional tree/line SC decoder: `2n - 2`.
pub fn conventional_latency(n: usize) -> Result<u64> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok(2 * n as u64 - 2)
}

/// Cycle count of the SC decoder with 2-bit decoding at the last stage,
/// `3n/4 - 1`, used as the non-constituent comparison point.
pub fn two_bit_last_stage_latency(n: usize) -> Result<u64> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok(3 * n as u64 / 4 - 1)
}
