//! Polar encoder, conventional SC decoder and constituent-code decoder.
//!
//! LLRs are `ln P(bit = 0) / P(bit = 1)`: positive favours 0, and a zero
//! LLR decides 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reliability::BitLayout;
use crate::tree::{NodeClass, PrunedTree};

pub type Llr = f64;

/// Check-node kernel used for the `f` function.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    #[default]
    MinSum,
    Exact,
}

impl Kernel {
    #[inline]
    pub fn f(self, a: Llr, b: Llr) -> Llr {
        match self {
            Kernel::MinSum => f_op(a, b),
            Kernel::Exact => f_exact(a, b),
        }
    }
}

/// Min-sum `f`: `sign(a) sign(b) min(|a|, |b|)`.
#[inline]
pub fn f_op(a: Llr, b: Llr) -> Llr {
    let mag = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -mag
    } else {
        mag
    }
}

/// Exact `f`: `2 atanh(tanh(a/2) tanh(b/2))`.
#[inline]
pub fn f_exact(a: Llr, b: Llr) -> Llr {
    2.0 * ((a / 2.0).tanh() * (b / 2.0).tanh()).atanh()
}

/// `g`: `b + (1 - 2s) a`, where `s` is the left partial-sum bit. Opposing
/// infinities cancel to 0.
#[inline]
pub fn g_op(a: Llr, b: Llr, s: u8) -> Llr {
    let r = if s == 0 { b + a } else { b - a };
    if r.is_nan() {
        0.0
    } else {
        r
    }
}

#[inline]
pub fn hard(llr: Llr) -> u8 {
    u8::from(llr < 0.0)
}

/// In-place `x = u F^{⊗m}` over GF(2). The transform is its own inverse.
pub fn polar_transform(bits: &mut [u8]) {
    let n = bits.len();
    let mut half = 1;
    while half < n {
        for block in bits.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (l, h) in lo.iter_mut().zip(hi.iter()) {
                *l ^= *h;
            }
        }
        half *= 2;
    }
}

/// Places `info_bits` at the information positions (zeros elsewhere) and
/// encodes.
pub fn encode(layout: &BitLayout, info_bits: &[u8]) -> Result<Vec<u8>> {
    if info_bits.len() != layout.k() {
        return Err(Error::LengthMismatch {
            expected: layout.k(),
            actual: info_bits.len(),
        });
    }
    let mut u = vec![0u8; layout.n()];
    for (pos, &bit) in layout.info_indices().into_iter().zip(info_bits) {
        u[pos] = bit & 1;
    }
    polar_transform(&mut u);
    Ok(u)
}

/// Decoder output: information bits in index order and the re-encoded
/// codeword estimate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub info: Vec<u8>,
    pub codeword: Vec<u8>,
}

/// Per-call scratch shared by both decoders.
#[derive(Debug, Default)]
struct Workspace {
    llr: Vec<Llr>,
    beta: Vec<u8>,
    u: Vec<u8>,
}

impl Workspace {
    fn reset(&mut self, n: usize) {
        self.llr.resize(n, 0.0);
        self.beta.resize(n, 0);
        self.u.resize(n, 0);
    }

    fn finish(&self, layout: &BitLayout) -> Decoded {
        Decoded {
            info: layout
                .info_indices()
                .into_iter()
                .map(|i| self.u[i])
                .collect(),
            codeword: self.beta.clone(),
        }
    }
}

/// Computes the left-child LLRs into `out`.
#[inline]
fn f_pass(kernel: Kernel, llr: &[Llr], out: &mut [Llr]) {
    let (a, b) = llr.split_at(out.len());
    for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
        *o = kernel.f(x, y);
    }
}

#[inline]
fn g_pass(llr: &[Llr], beta_left: &[u8], out: &mut [Llr]) {
    let (a, b) = llr.split_at(out.len());
    for (((o, &x), &y), &s) in out.iter_mut().zip(a).zip(b).zip(beta_left) {
        *o = g_op(x, y, s);
    }
}

#[inline]
fn combine(beta: &mut [u8]) {
    let (l, r) = beta.split_at_mut(beta.len() / 2);
    for (x, &y) in l.iter_mut().zip(r.iter()) {
        *x ^= y;
    }
}

/// Successive-cancellation decoder that walks the full tree down to single
/// bits.
#[derive(Debug, Default)]
pub struct ScDecoder {
    kernel: Kernel,
    ws: Workspace,
}

impl ScDecoder {
    pub fn new(kernel: Kernel) -> Self {
        ScDecoder {
            kernel,
            ws: Workspace::default(),
        }
    }

    pub fn decode(&mut self, channel_llrs: &[Llr], layout: &BitLayout) -> Result<Decoded> {
        let n = layout.n();
        if channel_llrs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: channel_llrs.len(),
            });
        }
        self.ws.reset(n);
        let Workspace { llr, beta, u } = &mut self.ws;
        sc_node(self.kernel, layout, 0, channel_llrs, llr, beta, u);
        Ok(self.ws.finish(layout))
    }
}

fn sc_node(
    kernel: Kernel,
    layout: &BitLayout,
    start: usize,
    llr: &[Llr],
    scratch: &mut [Llr],
    beta: &mut [u8],
    u: &mut [u8],
) {
    let n = llr.len();
    if n == 1 {
        let bit = if layout.is_info(start) {
            hard(llr[0])
        } else {
            0
        };
        beta[0] = bit;
        u[0] = bit;
        return;
    }
    let half = n / 2;
    let (child, rest) = scratch.split_at_mut(half);
    let (u_l, u_r) = u.split_at_mut(half);

    f_pass(kernel, llr, child);
    sc_node(kernel, layout, start, child, rest, &mut beta[..half], u_l);

    let (beta_l, beta_r) = beta.split_at_mut(half);
    g_pass(llr, beta_l, child);
    sc_node(kernel, layout, start + half, child, rest, beta_r, u_r);

    combine(beta);
}

/// Constituent-code decoder: stops at the leaves of a [`PrunedTree`] and
/// decodes each leaf in one shot.
#[derive(Debug, Default)]
pub struct FastDecoder {
    kernel: Kernel,
    ws: Workspace,
}

impl FastDecoder {
    pub fn new(kernel: Kernel) -> Self {
        FastDecoder {
            kernel,
            ws: Workspace::default(),
        }
    }

    pub fn decode(&mut self, channel_llrs: &[Llr], tree: &PrunedTree) -> Result<Decoded> {
        let n = tree.n();
        if channel_llrs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: channel_llrs.len(),
            });
        }
        self.ws.reset(n);
        let Workspace { llr, beta, u } = &mut self.ws;
        fast_node(self.kernel, tree, 0, channel_llrs, llr, beta, u);
        Ok(self.ws.finish(tree.layout()))
    }
}

fn fast_node(
    kernel: Kernel,
    tree: &PrunedTree,
    idx: usize,
    llr: &[Llr],
    scratch: &mut [Llr],
    beta: &mut [u8],
    u: &mut [u8],
) {
    let node = &tree.nodes()[idx];
    let Some((left, right)) = node.children else {
        decode_leaf(node.class, llr, beta);
        u.copy_from_slice(beta);
        polar_transform(u);
        return;
    };
    let half = llr.len() / 2;
    let (child, rest) = scratch.split_at_mut(half);
    let (u_l, u_r) = u.split_at_mut(half);

    f_pass(kernel, llr, child);
    fast_node(kernel, tree, left, child, rest, &mut beta[..half], u_l);

    let (beta_l, beta_r) = beta.split_at_mut(half);
    g_pass(llr, beta_l, child);
    fast_node(kernel, tree, right, child, rest, beta_r, u_r);

    combine(beta);
}

/// Codeword-domain estimate of a constituent node from its input LLRs.
pub fn decode_leaf(class: NodeClass, llr: &[Llr], beta: &mut [u8]) {
    match class {
        NodeClass::N0 => beta.fill(0),
        NodeClass::N1 => {
            for (b, &l) in beta.iter_mut().zip(llr) {
                *b = hard(l);
            }
        }
        NodeClass::Rep => beta.fill(hard(llr.iter().sum())),
        NodeClass::Spc => {
            let mut parity = 0;
            let mut weakest = 0;
            for (i, (b, &l)) in beta.iter_mut().zip(llr).enumerate() {
                *b = hard(l);
                parity ^= *b;
                if l.abs() < llr[weakest].abs() {
                    weakest = i;
                }
            }
            // Wagner rule
            beta[weakest] ^= parity;
        }
        NodeClass::Mixed => unreachable!("mixed nodes are never leaves"),
    }
}

/// Conventional SC decoding with the min-sum kernel.
pub fn sc_decode(channel_llrs: &[Llr], layout: &BitLayout) -> Result<Decoded> {
    ScDecoder::new(Kernel::MinSum).decode(channel_llrs, layout)
}

/// Constituent-code decoding with the min-sum kernel.
pub fn fast_decode(channel_llrs: &[Llr], tree: &PrunedTree) -> Result<Decoded> {
    FastDecoder::new(Kernel::MinSum).decode(channel_llrs, tree)
}
