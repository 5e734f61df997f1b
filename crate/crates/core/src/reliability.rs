//! BEC Bhattacharyya parameters of the synthesized bit-channels and the
//! baseline frozen/information split.
//!
//! Bit indices are in natural order: index `i` is row `i` of `F^{⊗m}`, with
//! the most significant index bit selecting the first polarization step.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Role of a single bit position in the polar transform input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BitKind {
    Frozen,
    Info,
}

impl BitKind {
    pub fn is_info(self) -> bool {
        self == BitKind::Info
    }

    pub fn as_char(self) -> char {
        match self {
            BitKind::Frozen => 'F',
            BitKind::Info => 'I',
        }
    }
}

/// Per-channel erasure probabilities for a BEC with erasure rate `epsilon`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityProfile {
    epsilon: f64,
    z: Vec<f64>,
}

impl ReliabilityProfile {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn stages(&self) -> u32 {
        self.z.len().trailing_zeros()
    }
}

/// Frozen/information designation for every bit of a length-`n` code.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitLayout {
    kinds: Vec<BitKind>,
    k: usize,
}

impl BitLayout {
    pub fn new(kinds: Vec<BitKind>) -> Result<Self> {
        check_power_of_two(kinds.len())?;
        let k = kinds.iter().filter(|b| b.is_info()).count();
        Ok(BitLayout { kinds, k })
    }

    pub fn all_frozen(n: usize) -> Result<Self> {
        Self::new(vec![BitKind::Frozen; n])
    }

    pub fn all_info(n: usize) -> Result<Self> {
        Self::new(vec![BitKind::Info; n])
    }

    /// Builds a layout from boolean flags, `true` meaning information bit.
    pub fn from_info_flags(flags: &[bool]) -> Result<Self> {
        Self::new(
            flags
                .iter()
                .map(|&b| if b { BitKind::Info } else { BitKind::Frozen })
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.kinds.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kinds(&self) -> &[BitKind] {
        &self.kinds
    }

    pub fn kind(&self, index: usize) -> BitKind {
        self.kinds[index]
    }

    pub fn is_info(&self, index: usize) -> bool {
        self.kinds[index].is_info()
    }

    pub fn info_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.is_info(i)).collect()
    }

    pub fn frozen_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| !self.is_info(i)).collect()
    }

    /// Exchanges the roles of two bits. Preserves `k` whenever the two
    /// positions hold different kinds.
    pub(crate) fn swap(&mut self, a: usize, b: usize) {
        self.kinds.swap(a, b);
    }
}

impl fmt::Display for BitLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kinds
            .iter()
            .try_for_each(|b| write!(f, "{}", b.as_char()))
    }
}

impl FromStr for BitLayout {
    type Err = Error;

    /// Parses an `F`/`I` string; whitespace and `|` separators are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let kinds = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '|')
            .map(|c| match c {
                'F' | 'f' => Ok(BitKind::Frozen),
                'I' | 'i' => Ok(BitKind::Info),
                other => Err(Error::BadLayoutString(format!(
                    "unexpected character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(kinds)
    }
}

/// Number of information bits for a nominal code rate, rounded to nearest.
pub fn k_for_rate(n: usize, rate: f64) -> Result<usize> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::BadRate(rate));
    }
    Ok((rate * n as f64).round() as usize)
}

pub(crate) fn check_power_of_two(n: usize) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok(())
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadProbability(p));
    }
    Ok(())
}

/// Bhattacharyya parameters of all `n` synthesized channels of a BEC(`epsilon`).
///
/// Each polarization step maps `z` to `2z - z²` (minus branch) and `z²`
/// (plus branch). The sum of the parameters is conserved at `n·epsilon`.
pub fn bec_profile(epsilon: f64, n: usize) -> Result<ReliabilityProfile> {
    check_probability(epsilon)?;
    check_power_of_two(n)?;
    let mut z = Vec::with_capacity(n);
    z.push(epsilon);
    while z.len() < n {
        z = z.iter().flat_map(|&v| [2.0 * v - v * v, v * v]).collect();
    }
    Ok(ReliabilityProfile { epsilon, z })
}

/// Marks the `k` channels with the smallest Bhattacharyya parameter as
/// information bits. Equal parameters favour the larger index.
pub fn baseline_layout(profile: &ReliabilityProfile, k: usize) -> Result<BitLayout> {
    let n = profile.n();
    if k > n {
        return Err(Error::RateTooHigh { k, n });
    }
    let z = profile.z();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| z[a].total_cmp(&z[b]).then(b.cmp(&a)));
    let mut kinds = vec![BitKind::Frozen; n];
    for &i in &order[..k] {
        kinds[i] = BitKind::Info;
    }
    Ok(BitLayout { kinds, k })
}

/// Exact erasure probability of synthesized channel `bit_index` under
/// genie-aided SC decoding, by enumerating all `2^n` erasure patterns.
///
/// Works directly on the generator matrix: `u_i` is lost iff row `i` of the
/// observed columns lies in the span of rows `i+1..n`, i.e. the future bits
/// can mask it. Independent of the recursion in [`bec_profile`].
pub fn bec_exhaustive_oracle(epsilon: f64, n: usize, bit_index: usize) -> Result<f64> {
    check_probability(epsilon)?;
    check_power_of_two(n)?;
    if n > 16 {
        return Err(Error::TooLargeToEnumerate(n));
    }
    if bit_index >= n {
        return Err(Error::IndexOutOfRange {
            index: bit_index,
            n,
        });
    }
    // row r of F^{⊗m} has a one in column c iff c's bits are a subset of r's
    let rows: Vec<u32> = (0..n)
        .map(|r| {
            (0..n)
                .filter(|&c| c & r == c)
                .fold(0u32, |acc, c| acc | (1 << c))
        })
        .collect();

    let mut p_erased = 0.0;
    for erased in 0u32..(1u32 << n) {
        let observed = !erased & ((1u32 << n) - 1);
        let future: Vec<u32> = rows[bit_index + 1..].iter().map(|r| r & observed).collect();
        let with_current: Vec<u32> = std::iter::once(rows[bit_index] & observed)
            .chain(future.iter().copied())
            .collect();
        if gf2_rank(&with_current) == gf2_rank(&future) {
            let e = erased.count_ones() as i32;
            p_erased += epsilon.powi(e) * (1.0 - epsilon).powi(n as i32 - e);
        }
    }
    Ok(p_erased)
}

fn gf2_rank(rows: &[u32]) -> usize {
    let mut basis = [0u32; 32];
    let mut rank = 0;
    for &row in rows {
        let mut v = row;
        while v != 0 {
            let top = 31 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    rank
}
