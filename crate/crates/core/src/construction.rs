//! Constituent-code-oriented swap optimization of a frozen/information layout.
//!
//! A layout is partitioned into maximal sub-codewords of four kinds: all
//! frozen (type I), all information (type II), exactly one information bit
//! (type III) and exactly one frozen bit (type IV). Swapping the lone
//! information bit of a type-III span with the lone frozen bit of a type-IV
//! span turns the pair into one all-frozen and one all-information span,
//! both of which decode in a single cycle. A swap is only made when the two
//! channels have Bhattacharyya parameters closer than a threshold, so the
//! error-rate cost stays small.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reliability::{BitKind, BitLayout, ReliabilityProfile};
use crate::tree::node_id;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubcodeType {
    /// All frozen.
    TypeI,
    /// All information.
    TypeII,
    /// Exactly one information bit.
    TypeIII,
    /// Exactly one frozen bit.
    TypeIV,
    Mixed,
}

impl SubcodeType {
    /// Classifies a span by its information-bit count. Type III wins over
    /// type IV for the size-2 spans that match both.
    pub fn of(kinds: &[BitKind]) -> Self {
        let n = kinds.len();
        let info = kinds.iter().filter(|b| b.is_info()).count();
        if info == 0 {
            SubcodeType::TypeI
        } else if info == n {
            SubcodeType::TypeII
        } else if info == 1 {
            SubcodeType::TypeIII
        } else if info == n - 1 {
            SubcodeType::TypeIV
        } else {
            SubcodeType::Mixed
        }
    }
}

/// One row of the sub-codeword lookup table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubcodeEntry {
    /// Heap index of the span's node in the decoding tree (root = 0).
    pub node_id: usize,
    pub start: usize,
    pub size: usize,
    pub ctype: SubcodeType,
    /// The lone information bit (type III) or lone frozen bit (type IV).
    pub special_index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwapRecord {
    #[serde(rename = "i")]
    pub info_index: usize,
    #[serde(rename = "f")]
    pub frozen_index: usize,
    pub delta: f64,
}

/// Splits the layout into maximal type I-IV spans, left to right.
///
/// Spans that fit none of the four types are halved until they do; size-1
/// spans are always type I or II, so the result partitions `[0, n)`.
pub fn classify_subcodes(layout: &BitLayout) -> Vec<SubcodeEntry> {
    let mut out = Vec::new();
    classify_into(layout, 0, layout.n(), &mut out);
    out
}

fn classify_into(layout: &BitLayout, start: usize, size: usize, out: &mut Vec<SubcodeEntry>) {
    let span = &layout.kinds()[start..start + size];
    let ctype = SubcodeType::of(span);
    let special_index = match ctype {
        SubcodeType::TypeIII => span.iter().position(|b| b.is_info()),
        SubcodeType::TypeIV => span.iter().position(|b| !b.is_info()),
        SubcodeType::Mixed => {
            let half = size / 2;
            classify_into(layout, start, half, out);
            classify_into(layout, start + half, half, out);
            return;
        }
        _ => None,
    };
    out.push(SubcodeEntry {
        node_id: node_id(layout.n(), start, size),
        start,
        size,
        ctype,
        special_index: special_index.map(|p| start + p),
    });
}

/// Runs the swap optimization over `layout` and returns the new layout
/// together with the swaps performed, in order.
///
/// The table is scanned once from left to right. At a type-III entry the
/// closest (in Bhattacharyya parameter) frozen bit among all later type-IV
/// entries is chosen, and symmetrically at a type-IV entry; ties go to the
/// smaller bit index. The pair is swapped when the difference is strictly
/// below `threshold`, after which the table is rebuilt and the scan moves on
/// to the next entry of the rebuilt table.
pub fn optimize_layout(
    layout: &BitLayout,
    profile: &ReliabilityProfile,
    threshold: f64,
) -> Result<(BitLayout, Vec<SwapRecord>)> {
    if profile.n() != layout.n() {
        return Err(Error::LengthMismatch {
            expected: layout.n(),
            actual: profile.n(),
        });
    }
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::NegativeThreshold(threshold));
    }
    let z = profile.z();
    let mut layout = layout.clone();
    let mut table = classify_subcodes(&layout);
    let mut swaps = Vec::new();
    let mut index = 0;

    while index < table.len() {
        let entry = &table[index];
        let partner = match entry.ctype {
            SubcodeType::TypeIII => Some(SubcodeType::TypeIV),
            SubcodeType::TypeIV => Some(SubcodeType::TypeIII),
            _ => None,
        };
        if let (Some(partner), Some(own)) = (partner, entry.special_index) {
            let best = table[index + 1..]
                .iter()
                .filter(|e| e.ctype == partner)
                .filter_map(|e| e.special_index)
                .map(|other| (other, (z[own] - z[other]).abs()))
                .fold(None, |best: Option<(usize, f64)>, cand| match best {
                    Some(b) if b.1 <= cand.1 => Some(b),
                    _ => Some(cand),
                });
            if let Some((other, delta)) = best {
                if delta < threshold {
                    let (info_index, frozen_index) = if entry.ctype == SubcodeType::TypeIII {
                        (own, other)
                    } else {
                        (other, own)
                    };
                    layout.swap(info_index, frozen_index);
                    swaps.push(SwapRecord {
                        info_index,
                        frozen_index,
                        delta,
                    });
                    table = classify_subcodes(&layout);
                }
            }
        }
        index += 1;
    }
    Ok((layout, swaps))
}
