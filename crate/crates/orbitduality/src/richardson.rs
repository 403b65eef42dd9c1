//! Richardson orbits attached to parabolic Levi data: the ord partition,
//! index sets with their power-of-two degrees, the dual Levi map, the seesaw
//! identity, and the two-group quotients acting on fibers.

use crate::error::{Error, Result};
use crate::f2;
use crate::orbit::{block_decompose, orbit_invariants, BlockKind};
use crate::partition::{collapse, is_special, springer_dual, OrbitType, Partition};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Levi datum `(p_1, ..., p_k; q)`: GL factors of the listed sizes and a
/// classical tail of rank contribution `q` (even for type C, odd for
/// type B). The stored `ps` list is kept sorted decreasingly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LeviType {
    pub ps: Vec<u64>,
    pub q: u64,
    pub group_type: OrbitType,
}

impl LeviType {
    pub fn new(ps: Vec<u64>, q: u64, group_type: OrbitType) -> Result<Self> {
        if ps.is_empty() || ps.contains(&0) {
            return Err(Error::InvalidLevi(
                "at least one GL factor of positive size is required".into(),
            ));
        }
        match group_type {
            OrbitType::C if !q.is_multiple_of(2) => {
                return Err(Error::InvalidLevi(format!(
                    "type C tail must be even, got {q}"
                )))
            }
            OrbitType::B if q % 2 != 1 => {
                return Err(Error::InvalidLevi(format!(
                    "type B tail must be odd, got {q}"
                )))
            }
            _ => {}
        }
        let mut ps = ps;
        ps.sort_unstable_by(|a, b| b.cmp(a));
        Ok(LeviType { ps, q, group_type })
    }

    /// Ambient total: `2 sum(ps) + q`, which is `2n` for C and `2n+1` for B.
    pub fn ambient_total(&self) -> u64 {
        2 * self.ps.iter().sum::<u64>() + self.q
    }

    /// Rank of the ambient group.
    pub fn rank(&self) -> u64 {
        match self.group_type {
            OrbitType::C => self.ambient_total() / 2,
            OrbitType::B => (self.ambient_total() - 1) / 2,
        }
    }
}

impl fmt::Display for LeviType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.ps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ";{})_{}", self.q, self.group_type)
    }
}

/// The ord partition, the collapsed Richardson orbit, the index set, and the
/// fiber degree of the polarization attached to a Levi datum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizationData {
    pub levi: LeviType,
    /// Pre-collapse column counts of the doubled multiset.
    pub ord: Vec<u64>,
    /// Richardson orbit: the collapse of `ord` into the family.
    pub orbit: Partition,
    /// Positions `j` (1-based) where `j`, `ord_j` share the family parity and
    /// `ord_j >= ord_{j+1} + 2`, evaluated on the pre-collapse ord.
    pub index_set: Vec<usize>,
    pub degree_log2: usize,
}

/// Computes ord, orbit, index set, and degree for a Levi datum.
pub fn richardson_data(levi: &LeviType) -> Result<PolarizationData> {
    let multiset: Vec<u64> = std::iter::once(levi.q)
        .chain(levi.ps.iter().copied())
        .chain(levi.ps.iter().copied())
        .collect();
    let max = multiset.iter().copied().max().unwrap_or(0);
    let mut ord = Vec::new();
    for i in 1..=max {
        ord.push(multiset.iter().filter(|&&x| x >= i).count() as u64);
    }
    let orbit = collapse(&Partition::new(ord.clone()), levi.group_type)?;
    // Required parity of the position and the column count: even for B,
    // odd for C.
    let parity = match levi.group_type {
        OrbitType::B => 0,
        OrbitType::C => 1,
    };
    let mut index_set = Vec::new();
    for j in 1..=ord.len() {
        let dj = ord[j - 1];
        let next = ord.get(j).copied().unwrap_or(0);
        if (j as u64) % 2 == parity && dj % 2 == parity && dj >= next + 2 {
            index_set.push(j);
        }
    }
    Ok(PolarizationData {
        levi: levi.clone(),
        ord,
        orbit,
        degree_log2: index_set.len(),
        index_set,
    })
}

/// The dual Levi datum: GL factors are kept, the tail moves between the two
/// families (`q+1` from C to B, `q-1` from B to C). An involution.
pub fn dual_levi(levi: &LeviType) -> LeviType {
    match levi.group_type {
        OrbitType::C => LeviType {
            ps: levi.ps.clone(),
            q: levi.q + 1,
            group_type: OrbitType::B,
        },
        OrbitType::B => LeviType {
            ps: levi.ps.clone(),
            q: levi.q - 1,
            group_type: OrbitType::C,
        },
    }
}

/// Outcome of the seesaw comparison for a type-C Levi datum and its dual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeesawReport {
    pub c_side: PolarizationData,
    pub b_side: PolarizationData,
    /// `c` invariant of the B-side Richardson orbit.
    pub c_invariant: usize,
    /// Whether the two Richardson orbits are dual partners.
    pub orbits_dual: bool,
    /// Whether the degrees multiply to 2^c.
    pub degree_product_ok: bool,
    /// Whether the two index sets have complementary sizes |I_B| + |I_C| = c.
    pub index_sizes_ok: bool,
}

impl SeesawReport {
    pub fn pass(&self) -> bool {
        self.orbits_dual && self.degree_product_ok && self.index_sizes_ok
    }
}

/// Runs the seesaw comparison for a type-C Levi datum.
pub fn seesaw_check(levi_c: &LeviType) -> Result<SeesawReport> {
    if levi_c.group_type != OrbitType::C {
        return Err(Error::InvalidLevi(format!(
            "seesaw check expects a type-C datum, got {levi_c}"
        )));
    }
    let c_side = richardson_data(levi_c)?;
    let b_side = richardson_data(&dual_levi(levi_c))?;
    // Richardson orbits of classical parabolic types are special.
    debug_assert!(is_special(&c_side.orbit, OrbitType::C));
    debug_assert!(is_special(&b_side.orbit, OrbitType::B));
    let orbits_dual = springer_dual(&c_side.orbit, OrbitType::C)? == b_side.orbit;
    let inv = orbit_invariants(&b_side.orbit, OrbitType::B)?;
    let degree_product_ok = c_side.degree_log2 + b_side.degree_log2 == inv.c;
    let index_sizes_ok = c_side.index_set.len() + b_side.index_set.len() == inv.c;
    Ok(SeesawReport {
        c_side,
        b_side,
        c_invariant: inv.c,
        orbits_dual,
        degree_product_ok,
        index_sizes_ok,
    })
}

/// The four nested two-groups attached to a polarized orbit, presented by
/// dimension and generator data over the two-element field. Coordinates of
/// the ambient space are indexed by the even-part positions of the type-C
/// partition (1-based positions in sorted order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentGroupData {
    pub levi_c: LeviType,
    pub orbit_c: Partition,
    pub orbit_b: Partition,
    /// 1-based positions of even parts of the type-C partition.
    pub even_positions: Vec<usize>,
    pub dim_a_theta: usize,
    pub dim_a_w: usize,
    pub dim_a_pc: usize,
    pub dim_a_pb: usize,
    /// (#(A_W / A_PB), #(A_theta / A_PC)).
    pub quotient_orders: (u64, u64),
    /// Whether the quotient orders multiply to the canonical order 2^c.
    pub product_ok: bool,
    /// Whether A_PB agrees with the span of the tied pairs from the C-side
    /// index set.
    pub cross_check_ok: bool,
    /// Containments A_PB <= A_W <= A_theta and A_PC <= A_theta.
    pub containments_ok: bool,
}

impl ComponentGroupData {
    pub fn pass(&self) -> bool {
        self.product_ok && self.cross_check_ok && self.containments_ok
    }
}

/// Builds the tie functional for position `j` (1-based): the constraint
/// `b_j = b_{j+1}` where a position outside the even-position list
/// contributes zero. Returns `None` when the constraint is vacuous.
fn tie_functional(even_positions: &[usize], j: usize) -> Option<u128> {
    let coord = |pos: usize| even_positions.iter().position(|&e| e == pos);
    match (coord(j), coord(j + 1)) {
        (Some(a), Some(b)) => Some((1u128 << a) | (1u128 << b)),
        (Some(a), None) => Some(1u128 << a),
        (None, Some(b)) => Some(1u128 << b),
        (None, None) => None,
    }
}

/// Computes the two-group data for a type-C Levi datum whose Richardson
/// orbit is special.
pub fn component_groups(levi_c: &LeviType) -> Result<ComponentGroupData> {
    if levi_c.group_type != OrbitType::C {
        return Err(Error::InvalidLevi(format!(
            "component groups expect a type-C datum, got {levi_c}"
        )));
    }
    let c_data = richardson_data(levi_c)?;
    let orbit_c = c_data.orbit.clone();
    if !is_special(&orbit_c, OrbitType::C) {
        return Err(Error::NotSpecial(format!("{orbit_c} (type C)")));
    }
    let b_data = richardson_data(&dual_levi(levi_c))?;
    let orbit_b = b_data.orbit.clone();

    let even_positions: Vec<usize> = orbit_c
        .parts()
        .iter()
        .enumerate()
        .filter(|(_, &part)| part % 2 == 0)
        .map(|(idx, _)| idx + 1)
        .collect();
    let dim_ambient = even_positions.len();

    // Per B2 block of the dual partition, the sum of the coordinates the
    // block covers. Block boundaries transfer to the C side through the
    // blockwise local duals, whose concatenation is the C-side partition.
    let blocks = block_decompose(&orbit_b)?;
    let local_duals: Vec<Vec<u64>> = blocks.iter().map(|b| b.local_dual()).collect();
    let concat: Vec<u64> = local_duals.iter().flatten().copied().collect();
    assert_eq!(
        concat,
        orbit_c.parts(),
        "blockwise duals must concatenate to the dual partition"
    );
    let mut a_w_gens: Vec<u128> = Vec::new();
    let mut offset = 0usize;
    for (block, dual) in blocks.iter().zip(&local_duals) {
        if block.kind == BlockKind::B2 {
            let mut g = 0u128;
            for (k, &e) in dual.iter().enumerate() {
                let pos = offset + k + 1;
                debug_assert!(e % 2 == 0);
                let coord = even_positions
                    .iter()
                    .position(|&ep| ep == pos)
                    .expect("pair-block dual entries are even parts");
                g |= 1u128 << coord;
            }
            a_w_gens.push(g);
        }
        offset += dual.len();
    }

    let ties_c: Vec<u128> = c_data
        .index_set
        .iter()
        .filter_map(|&j| tie_functional(&even_positions, j))
        .collect();
    let ties_b: Vec<u128> = b_data
        .index_set
        .iter()
        .filter_map(|&j| tie_functional(&even_positions, j))
        .collect();

    let a_theta: Vec<u128> = (0..dim_ambient).map(|i| 1u128 << i).collect();
    let a_w = f2::rref(&a_w_gens);
    let a_pc = f2::kernel(&ties_c, dim_ambient);
    let a_pb = f2::solve_in_span(&a_w, &ties_b);

    // Independent description of the same subspace: tied pairs over the
    // C-side index set.
    let cross: Vec<u128> = c_data
        .index_set
        .iter()
        .filter_map(|&j| tie_functional(&even_positions, j))
        .collect();
    let cross_check_ok = f2::same_span(&a_pb, &cross);

    let containments_ok = a_pb.iter().all(|&v| f2::in_span(&a_w, v))
        && a_w.iter().all(|&v| f2::in_span(&f2::rref(&a_theta), v))
        && a_pc.iter().all(|&v| f2::in_span(&f2::rref(&a_theta), v));

    let inv = orbit_invariants(&orbit_b, OrbitType::B)?;
    let dim_a_w = a_w.len();
    let dim_a_pb = f2::rank(&a_pb);
    let dim_a_pc = f2::rank(&a_pc);
    let quotient_orders = (
        1u64 << (dim_a_w - dim_a_pb),
        1u64 << (dim_ambient - dim_a_pc),
    );
    let product_ok = quotient_orders.0 * quotient_orders.1 == 1u64 << inv.c;

    Ok(ComponentGroupData {
        levi_c: levi_c.clone(),
        orbit_c,
        orbit_b,
        even_positions,
        dim_a_theta: dim_ambient,
        dim_a_w,
        dim_a_pc,
        dim_a_pb,
        quotient_orders,
        product_ok,
        cross_check_ok,
        containments_ok,
    })
}

/// All Levi data with at least one GL factor for the given rank, paired with
/// their polarization data, in decreasing lexicographic order of (ps, q).
pub fn enumerate_polarizations(
    n: u64,
    t: OrbitType,
) -> Result<Vec<(LeviType, PolarizationData)>> {
    if n < 1 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    let total = match t {
        OrbitType::C => 2 * n,
        OrbitType::B => 2 * n + 1,
    };
    let mut out = Vec::new();
    for r in (1..=n).rev() {
        let q = total - 2 * r;
        let mut stack = Vec::new();
        collect_partitions(r, r, &mut stack, &mut |ps: &[u64]| {
            let levi = LeviType::new(ps.to_vec(), q, t).expect("constructed datum is valid");
            let data = richardson_data(&levi).expect("valid datum yields data");
            out.push((levi, data));
        });
    }
    Ok(out)
}

fn collect_partitions(
    remaining: u64,
    max_part: u64,
    prefix: &mut Vec<u64>,
    emit: &mut impl FnMut(&[u64]),
) {
    if remaining == 0 {
        emit(prefix);
        return;
    }
    for p in (1..=remaining.min(max_part)).rev() {
        prefix.push(p);
        collect_partitions(remaining - p, p, prefix, emit);
        prefix.pop();
    }
}
