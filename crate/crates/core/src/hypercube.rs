//! Enumeration on the directed binary hypercube.
//!
//! A vertex is an `n`-bit mask; bit `i` set means coordinate `i` has been
//! mutated. Edges point from a mask to every mask with one more bit set, so
//! numeric order is always a topological order.

use std::fmt;

use crate::error::{invalid, Error, Result};

/// Largest dimension for which a full per-vertex array is allocated by default.
pub const DEFAULT_MAX_DIMENSION: u32 = 28;

/// Absolute ceiling imposed by the 64-bit node encoding.
pub const NODE_BITS: u32 = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeId(pub u64);

impl NodeId {
    /// The all-zeroes vertex.
    pub const BOTTOM: NodeId = NodeId(0);

    /// The all-ones vertex of `Q_n`.
    pub fn top(n: u32) -> NodeId {
        NodeId(full_mask(n))
    }

    /// Number of mutated coordinates.
    #[inline]
    pub fn layer(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_valid(self, n: u32) -> bool {
        n <= NODE_BITS && self.0 <= full_mask(n)
    }

    /// Format as an `n`-character bit string, most significant coordinate first.
    pub fn to_bit_string(self, n: u32) -> String {
        (0..n)
            .rev()
            .map(|i| if self.0 >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#b}", self.0)
    }
}

#[inline]
pub fn full_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Number of vertices of `Q_n`.
#[inline]
pub fn vertex_count(n: u32) -> usize {
    1usize << n
}

fn check_dimension(n: u32) -> Result<()> {
    if n < 1 {
        return invalid("dimension must be at least 1");
    }
    if n > NODE_BITS {
        return Err(Error::ResourceLimit(format!(
            "dimension {n} exceeds the {NODE_BITS}-bit node encoding"
        )));
    }
    Ok(())
}

/// Iterator over the masks of popcount `k` below `2^n`, in increasing order.
#[derive(Debug, Clone)]
pub struct LayerIter {
    next: Option<u64>,
    limit: u64,
}

impl Iterator for LayerIter {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            // next bit permutation (Gosper)
            let low = cur & cur.wrapping_neg();
            let ripple = cur + low;
            let succ = (((ripple ^ cur) >> 2) / low) | ripple;
            (succ <= self.limit && succ > cur).then_some(succ)
        };
        Some(NodeId(cur))
    }
}

/// Vertices of layer `k` of `Q_n` in strictly increasing numeric order.
pub fn layer_iter(n: u32, k: u32) -> Result<LayerIter> {
    check_dimension(n)?;
    if k > n {
        return invalid(format!("layer {k} exceeds dimension {n}"));
    }
    Ok(LayerIter {
        next: Some(full_mask(k)),
        limit: full_mask(n),
    })
}

pub fn layer_nodes(n: u32, k: u32) -> Result<Vec<NodeId>> {
    Ok(layer_iter(n, k)?.collect())
}

/// Successors of `v`: every mask obtained by setting one zero bit.
pub fn out_neighbors(n: u32, v: NodeId) -> Result<Vec<NodeId>> {
    check_dimension(n)?;
    if !v.is_valid(n) {
        return invalid(format!("{v} is not a vertex of Q_{n}"));
    }
    let free = !v.0 & full_mask(n);
    Ok(BitIter(free).map(|b| NodeId(v.0 | b)).collect())
}

/// Predecessors of `v`: every mask obtained by clearing one set bit.
pub fn in_neighbors(v: NodeId) -> impl Iterator<Item = NodeId> {
    BitIter(v.0).map(move |b| NodeId(v.0 ^ b))
}

pub fn hamming(u: NodeId, v: NodeId) -> u32 {
    (u.0 ^ v.0).count_ones()
}

/// Iterates over the set bits of a mask, lowest first, as single-bit masks.
#[derive(Debug, Clone, Copy)]
pub struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        if self.0 == 0 {
            return None;
        }
        let low = self.0 & self.0.wrapping_neg();
        self.0 ^= low;
        Some(low)
    }
}

/// Binomial coefficient as `u64` (exact for the dimensions used here).
pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    (0..k).fold(1u64, |acc, i| acc * (n as u64 - i) / (i + 1))
}
