//! Block decomposition of type-B partitions and the derived orbit-level
//! bookkeeping: the two-group exponent `c`, the even-degree count `beta`,
//! degree partitions, two-sided labels, eta sequences, dimension formulas,
//! and ramification parity.

use crate::error::{Error, Result};
use crate::partition::{is_member, is_special, springer_dual, OrbitType, Partition};
use serde::{Deserialize, Serialize};

/// The four block shapes a type-B partition splits into.
///
/// * `B1` — a pair `[a,a]` of equal odd parts.
/// * `B1Star` — a pair `[b,b]` of equal even parts (present exactly when the
///   partition is not special).
/// * `B2` — `[a1, b,b, ..., a2]`: an odd opener, interior even pairs, an odd
///   closer, with `a1 > b_1 >= ... >= b_k > a2`.
/// * `B3` — `[a, b,b, ...]`: an odd opener followed by interior even pairs,
///   occurring exactly once, as the final block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    B1,
    B1Star,
    B2,
    B3,
}

/// One block of the decomposition, with its position in the partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub kind: BlockKind,
    /// Part values of the block, in order (a slice of the partition).
    pub parts: Vec<u64>,
    /// Index in the ambient partition of the block's first part (0-based).
    pub start: usize,
}

impl Block {
    /// Length-preserving dual of the block's local shape:
    /// `[a,a]` is fixed, `[a1, b.., a2]` becomes `[a1-1, b.., a2+1]`, and
    /// `[a, b..]` becomes `[a-1, b..]` with a vanished opener dropped.
    pub fn local_dual(&self) -> Vec<u64> {
        match self.kind {
            BlockKind::B1 | BlockKind::B1Star => self.parts.clone(),
            BlockKind::B2 => {
                let mut d = self.parts.clone();
                let last = d.len() - 1;
                d[0] -= 1;
                d[last] += 1;
                d
            }
            BlockKind::B3 => {
                let mut d = self.parts.clone();
                d[0] -= 1;
                d.retain(|&p| p > 0);
                d
            }
        }
    }
}

/// Splits a type-B partition into B1/B1Star/B2/B3 blocks.
///
/// The scan is greedy left to right; the result is checked to reassemble the
/// input with exactly one B3 block, in final position. A B1Star block occurs
/// if and only if the partition is not special.
pub fn block_decompose(d: &Partition) -> Result<Vec<Block>> {
    if !is_member(d, OrbitType::B) {
        return Err(Error::NotAMember(format!("{d} (type B)")));
    }
    let parts = d.parts();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < parts.len() {
        let v = parts[i];
        if v.is_multiple_of(2) {
            // Members have even parts in pairs.
            debug_assert!(i + 1 < parts.len() && parts[i + 1] == v);
            blocks.push(Block {
                kind: BlockKind::B1Star,
                parts: vec![v, v],
                start: i,
            });
            i += 2;
            continue;
        }
        if i + 1 < parts.len() && parts[i + 1] == v {
            blocks.push(Block {
                kind: BlockKind::B1,
                parts: vec![v, v],
                start: i,
            });
            i += 2;
            continue;
        }
        // Single odd opener: absorb interior even pairs, then either close on
        // an odd part (B2) or run to the end (B3).
        let start = i;
        let mut j = i + 1;
        while j + 1 < parts.len() && parts[j] == parts[j + 1] && parts[j].is_multiple_of(2) {
            j += 2;
        }
        if j == parts.len() {
            blocks.push(Block {
                kind: BlockKind::B3,
                parts: parts[start..].to_vec(),
                start,
            });
            i = parts.len();
        } else {
            debug_assert!(parts[j] % 2 == 1 && parts[j] < v);
            blocks.push(Block {
                kind: BlockKind::B2,
                parts: parts[start..=j].to_vec(),
                start,
            });
            i = j + 1;
        }
    }
    // A member always ends in exactly one B3 block (possibly just [a]).
    let b3_count = blocks.iter().filter(|b| b.kind == BlockKind::B3).count();
    let reassembled: Vec<u64> = blocks.iter().flat_map(|b| b.parts.iter().copied()).collect();
    assert_eq!(reassembled, parts, "block decomposition must cover {d}");
    assert_eq!(b3_count, 1, "exactly one terminal block expected for {d}");
    assert_eq!(blocks.last().map(|b| b.kind), Some(BlockKind::B3));
    Ok(blocks)
}

/// Orbit-level invariants read off the type-B block decomposition. For a
/// type-C input the invariants are computed on its dual partner.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitInvariants {
    /// The partition the invariants were requested for.
    pub partition: Partition,
    pub orbit_type: OrbitType,
    /// Dual partner (type C for a B input and vice versa).
    pub dual: Partition,
    /// The B-side member of the dual pair.
    pub b_side: Partition,
    /// Number of B2 blocks of the B side.
    pub c: usize,
    /// Number of even entries of the B side's dual partition.
    pub beta: usize,
    /// Factor-degree partition on the requested side: the dual entries plus a
    /// trailing 1 for B, the partition itself for C.
    pub degree_partition: Partition,
    /// The canonical quotient has order 2^c.
    pub quotient_order_log2: usize,
    /// Blocks of the B side.
    pub blocks: Vec<Block>,
}

/// Computes the invariants of a special partition.
///
/// Internally cross-checks the quotient order against an independent count
/// of Young-diagram corners with odd length and odd height (one more corner
/// than the exponent).
pub fn orbit_invariants(d: &Partition, t: OrbitType) -> Result<OrbitInvariants> {
    if !is_member(d, t) {
        return Err(Error::NotAMember(format!("{d} (type {t})")));
    }
    if !is_special(d, t) {
        return Err(Error::NotSpecial(format!("{d} (type {t})")));
    }
    let dual = springer_dual(d, t)?;
    let b_side = match t {
        OrbitType::B => d.clone(),
        OrbitType::C => dual.clone(),
    };
    let blocks = block_decompose(&b_side)?;
    debug_assert!(blocks.iter().all(|b| b.kind != BlockKind::B1Star));
    let c = blocks.iter().filter(|b| b.kind == BlockKind::B2).count();
    let dual_entries: Vec<u64> = blocks.iter().flat_map(|b| b.local_dual()).collect();
    debug_assert!(dual_entries.windows(2).all(|w| w[0] >= w[1]));
    let beta = dual_entries.iter().filter(|&&e| e % 2 == 0).count();
    let b3_dual_len = blocks
        .last()
        .map(|b| b.local_dual().len())
        .unwrap_or(0);
    assert_eq!(
        beta % 2,
        b3_dual_len % 2,
        "even-degree count and terminal-block dual length must agree mod 2 for {b_side}"
    );

    // Independent corner count: distinct part values of odd size whose column
    // height is also odd. There is one more such corner than the exponent.
    let corners = b_side
        .distinct_values()
        .into_iter()
        .filter(|&v| v % 2 == 1 && b_side.transpose_at(v) % 2 == 1)
        .count();
    assert_eq!(
        corners,
        c + 1,
        "corner count must exceed the pair-block count by one for {b_side}"
    );

    let degree_partition = match t {
        OrbitType::B => {
            let mut e = dual_entries.clone();
            e.push(1);
            Partition::new(e)
        }
        OrbitType::C => d.clone(),
    };

    Ok(OrbitInvariants {
        partition: d.clone(),
        orbit_type: t,
        dual,
        b_side,
        c,
        beta,
        degree_partition,
        quotient_order_log2: c,
        blocks,
    })
}

/// Two-sided label attached to an orbit: a pair of partitions whose totals
/// add up to the rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlLabel {
    pub alpha: Partition,
    pub beta: Partition,
}

/// Computes the two-sided label from the factor-degree data.
///
/// Type C: each even part `e` contributes `e/2` to the second entry; equal
/// odd parts pair up, each pair contributing one part `e` to the first.
/// Type B: B1-type pairs `[a,a]` contribute a part `a` to the first entry,
/// B1Star-type pairs `[b,b]` one part `b` to the first, and every even local
/// dual entry of a B2/B3 block contributes `e/2` to the second.
pub fn kl_label(d: &Partition, t: OrbitType) -> Result<KlLabel> {
    if !is_member(d, t) {
        return Err(Error::NotAMember(format!("{d} (type {t})")));
    }
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    match t {
        OrbitType::C => {
            for v in d.distinct_values() {
                let m = d.multiplicity(v);
                if v % 2 == 0 {
                    beta.extend(std::iter::repeat_n(v / 2, m));
                } else {
                    debug_assert!(m.is_multiple_of(2));
                    alpha.extend(std::iter::repeat_n(v, m / 2));
                }
            }
        }
        OrbitType::B => {
            for block in block_decompose(d)? {
                match block.kind {
                    BlockKind::B1 | BlockKind::B1Star => alpha.push(block.parts[0]),
                    BlockKind::B2 | BlockKind::B3 => {
                        for e in block.local_dual() {
                            debug_assert!(e % 2 == 0);
                            beta.push(e / 2);
                        }
                    }
                }
            }
        }
    }
    let label = KlLabel {
        alpha: Partition::new(alpha),
        beta: Partition::new(beta),
    };
    let n = match t {
        OrbitType::B => (d.total() - 1) / 2,
        OrbitType::C => d.total() / 2,
    };
    assert_eq!(
        label.alpha.total() + label.beta.total(),
        n,
        "label totals must add up to the rank for {d}"
    );
    Ok(label)
}

/// Rank of the ambient group a member belongs to: `(total-1)/2` for B,
/// `total/2` for C.
pub fn rank_of(d: &Partition, t: OrbitType) -> u64 {
    match t {
        OrbitType::B => (d.total() - 1) / 2,
        OrbitType::C => d.total() / 2,
    }
}

/// The spectral-weight sequence: entry `i` (1-based, `i = 1..=rank`) is the
/// least `j` such that the first `j` parts sum to at least `2i`.
pub fn eta_sequence(d: &Partition, t: OrbitType) -> Result<Vec<u64>> {
    if !is_member(d, t) {
        return Err(Error::NotAMember(format!("{d} (type {t})")));
    }
    let n = rank_of(d, t);
    let parts = d.parts();
    let mut out = Vec::with_capacity(n as usize);
    let mut j = 0usize;
    let mut acc = 0u64;
    for i in 1..=n {
        while acc < 2 * i {
            acc += parts[j];
            j += 1;
        }
        out.push(j as u64);
    }
    Ok(out)
}

/// Orbit dimension of any member (specialness not required).
pub fn orbit_dimension(d: &Partition, t: OrbitType) -> Result<u64> {
    if !is_member(d, t) {
        return Err(Error::NotAMember(format!("{d} (type {t})")));
    }
    let n = rank_of(d, t);
    let dim_g = 2 * n * n + n;
    let sq_sum: u64 = d.transpose().parts().iter().map(|&s| s * s).sum();
    let odd_count = d.parts().iter().filter(|&&p| p % 2 == 1).count() as u64;
    Ok(match t {
        OrbitType::C => dim_g - sq_sum / 2 - odd_count / 2,
        OrbitType::B => dim_g - (sq_sum - odd_count) / 2,
    })
}

/// Dimension bookkeeping for a special orbit on a curve of the given genus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub partition: Partition,
    pub orbit_type: OrbitType,
    pub genus: u64,
    pub rank: u64,
    pub group_dim: u64,
    pub orbit_dim: u64,
    pub eta: Vec<u64>,
    pub eta_sum: u64,
    /// Base dimension: `group_dim * genus - rank^2 - eta_sum`.
    pub base_dim: u64,
    /// Total space dimension: `(2 genus - 2) * group_dim + orbit_dim`.
    pub moduli_dim: u64,
    /// Whether the base is exactly half the total space.
    pub half_check: bool,
    /// Type C only: whether `eta_sum` matches the closed form
    /// `(sum s_j (s_j + 1)) / 4 + (number of odd parts) / 4`
    /// computed from the transpose.
    pub eta_sum_closed_form: Option<bool>,
    /// log2 of the degree of the intermediate spectral cover:
    /// `2n(2g-2) + beta - c - 1`.
    pub deg_l_bc_log2: u64,
    /// log2 of the component-cover degree: `2n(2g-2) + beta - c - 2`.
    pub deg_component_cover_log2: u64,
    /// log2 of the degree of the dual abelian variety over the Prym:
    /// `2n(2g-2) + beta - 2`.
    pub deg_prym_dual_log2: u64,
}

/// Computes the dimension report. Requires a special partition and
/// `genus >= 2`.
pub fn dimension_report(d: &Partition, t: OrbitType, genus: u64) -> Result<DimensionReport> {
    if genus < 2 {
        return Err(Error::InvalidParameter(format!(
            "genus must be at least 2, got {genus}"
        )));
    }
    if !is_special(d, t) {
        return Err(Error::NotSpecial(format!("{d} (type {t})")));
    }
    let n = rank_of(d, t);
    let group_dim = 2 * n * n + n;
    let orbit_dim = orbit_dimension(d, t)?;
    let eta = eta_sequence(d, t)?;
    let eta_sum: u64 = eta.iter().sum();
    let base_dim = group_dim * genus - n * n - eta_sum;
    let moduli_dim = (2 * genus - 2) * group_dim + orbit_dim;
    let half_check = 2 * base_dim == moduli_dim;
    let eta_sum_closed_form = match t {
        OrbitType::C => {
            let tr = d.transpose();
            let s_term: u64 = tr.parts().iter().map(|&s| s * (s + 1)).sum();
            let odd_count = d.parts().iter().filter(|&&p| p % 2 == 1).count() as u64;
            Some(4 * eta_sum == s_term + odd_count)
        }
        OrbitType::B => None,
    };
    let inv = orbit_invariants(d, t)?;
    let cover_base = 2 * n * (2 * genus - 2) + inv.beta as u64;
    assert!(cover_base >= inv.c as u64 + 2, "cover degrees stay nonnegative");
    Ok(DimensionReport {
        partition: d.clone(),
        orbit_type: t,
        genus,
        rank: n,
        group_dim,
        orbit_dim,
        eta,
        eta_sum,
        base_dim,
        moduli_dim,
        half_check,
        eta_sum_closed_form,
        deg_l_bc_log2: cover_base - inv.c as u64 - 1,
        deg_component_cover_log2: cover_base - inv.c as u64 - 2,
        deg_prym_dual_log2: cover_base - 2,
    })
}

/// One ramification entry: a populated part value, the column-count prefix
/// sum at that value, and its parity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationEntry {
    pub value: u64,
    pub coefficient: u64,
    pub even: bool,
}

/// For a type-C member: at every populated part value `i`, the sum of the
/// first `i` transpose entries. The partition is special exactly when all
/// these sums are even.
pub fn ramification_coefficients(d: &Partition) -> Result<Vec<RamificationEntry>> {
    if !is_member(d, OrbitType::C) {
        return Err(Error::NotAMember(format!("{d} (type C)")));
    }
    let tr = d.transpose();
    let mut out = Vec::new();
    for v in d.distinct_values().into_iter().rev() {
        let coefficient: u64 = tr.parts().iter().take(v as usize).sum();
        out.push(RamificationEntry {
            value: v,
            coefficient,
            even: coefficient.is_multiple_of(2),
        });
    }
    Ok(out)
}
