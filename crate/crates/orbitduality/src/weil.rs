//! GF(2) model of the two-torsion of a double cover: one generator class per
//! fixed point except a designated base, the pairing that is one exactly off
//! the diagonal, the single all-ones relation, annihilator duality, and the
//! component count of fiber-product covers. The end-to-end instance check
//! builds the dual subspaces attached to a Richardson orbit pair and verifies
//! that they annihilate each other.

use crate::error::{Error, Result};
use crate::f2;
use crate::orbit::orbit_invariants;
use crate::partition::{OrbitType, Partition};
use crate::richardson::{dual_levi, richardson_data, LeviType};
use serde::{Deserialize, Serialize};

/// Label of one generator class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointLabel {
    /// Unmarked fixed point.
    Free,
    /// Branch point over the marked point: which block of the type-B side it
    /// belongs to and the 1-based position of its even entry in the type-C
    /// partition.
    Marked { block: usize, position: usize },
}

/// The generator space: `2N` fixed points, one free point designated as the
/// base; the remaining `2N - 1` points give generator classes with pairing
/// `e(P_i, P_j) = 1` iff `i != j`. The all-ones vector spans the radical, and
/// the quotient by it is the `2N - 2`-dimensional nondegenerate pairing
/// space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeilSpace {
    /// Half the number of fixed points.
    pub n_half: usize,
    /// One label per generator (the base point is not a generator).
    pub labels: Vec<PointLabel>,
}

/// A generator list defining a fiber-product cover of degree `2^len`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverSpec {
    pub gens: Vec<u128>,
}

/// Builds the generator space on `2N` fixed points.
pub fn weil_space(n_half: usize, labels: Vec<PointLabel>) -> Result<WeilSpace> {
    if n_half < 1 {
        return Err(Error::InvalidParameter(
            "at least two fixed points required".into(),
        ));
    }
    let dim = 2 * n_half - 1;
    if dim > 127 {
        return Err(Error::InvalidParameter(format!(
            "{dim} generators exceed the bitmask width"
        )));
    }
    if labels.len() != dim {
        return Err(Error::InvalidParameter(format!(
            "expected {dim} labels, got {}",
            labels.len()
        )));
    }
    Ok(WeilSpace { n_half, labels })
}

impl WeilSpace {
    /// Number of generators.
    pub fn dim_ambient(&self) -> usize {
        2 * self.n_half - 1
    }

    /// Dimension of the nondegenerate quotient.
    pub fn dim_ker_beta(&self) -> usize {
        2 * self.n_half - 2
    }

    /// The all-ones vector: the unique nontrivial relation.
    pub fn relation(&self) -> u128 {
        (1u128 << self.dim_ambient()) - 1
    }

    /// The pairing: weight(u) * weight(v) + weight(u & v).
    pub fn pairing(&self, u: u128, v: u128) -> u64 {
        let wu = u.count_ones() as u64;
        let wv = v.count_ones() as u64;
        (wu * wv + (u & v).count_ones() as u64) & 1
    }

    /// The coordinate functional representing pairing against `v`.
    fn functional(&self, v: u128) -> u128 {
        if v.count_ones() % 2 == 1 {
            v ^ self.relation()
        } else {
            v
        }
    }

    /// Annihilator of the span of `gens`, as an ambient subspace. Always
    /// contains the relation vector.
    pub fn annihilator(&self, gens: &[u128]) -> Vec<u128> {
        let functionals: Vec<u128> = gens.iter().map(|&g| self.functional(g)).collect();
        let ann = f2::kernel(&functionals, self.dim_ambient());
        // Membership tests need a reduced basis.
        debug_assert!(f2::in_span(&f2::rref(&ann), self.relation()));
        ann
    }

    /// Dimension of the image of the span in the quotient by the relation.
    pub fn dim_in_ker_beta(&self, gens: &[u128]) -> usize {
        let mut all = gens.to_vec();
        all.push(self.relation());
        f2::rank(&all) - 1
    }

    /// Whether the two generator lists cut out mutually annihilating
    /// subspaces of the quotient. Symmetric in its arguments.
    pub fn dual_check(&self, v1: &[u128], v2: &[u128]) -> bool {
        let mut lhs = v1.to_vec();
        lhs.push(self.relation());
        f2::same_span(&lhs, &self.annihilator(v2))
    }

    /// Number of connected components of the cover: 2^(gens - rank), with the
    /// rank taken in the quotient by the relation.
    pub fn component_count(&self, cover: &CoverSpec) -> u64 {
        let dependent = cover.gens.len() - self.dim_in_ker_beta(&cover.gens);
        1u64 << dependent
    }
}

/// Verdicts of the end-to-end duality check on one Richardson instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeilVerdicts {
    /// The two constructed subspaces annihilate each other.
    pub dual_check: bool,
    /// Component count of the type-B generator multiset (expected 2).
    pub component_count: u64,
    pub dim_v_b: usize,
    pub dim_v_c: usize,
    /// dim V_B + dim V_C equals 2N - 2.
    pub dims_ok: bool,
    /// Whether the component-cover subspace (the type-B generators without
    /// the tie pairs) is dual to the zero subspace; holds exactly when there
    /// is no two-ended block.
    pub naive_dual_check: bool,
}

/// One fully-built duality instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HitchinWeilInstance {
    pub n: u64,
    pub genus: u64,
    pub orbit_c: Partition,
    pub orbit_b: Partition,
    pub levi_c: LeviType,
    pub levi_b: LeviType,
    pub beta: usize,
    pub c: usize,
    pub space: WeilSpace,
    pub v_b: CoverSpec,
    pub v_c: CoverSpec,
    /// log2 of the degree of the dual abelian variety over the base torus:
    /// `2N - 2`.
    pub deg_prym_dual_log2: u64,
    /// log2 of the component-cover degree: `2N - 2 - c`.
    pub deg_component_cover_log2: u64,
    pub verdicts: WeilVerdicts,
}

/// Builds the two-torsion model of a Richardson dual pair and runs the
/// duality verdicts.
///
/// The fixed-point count is `2n(2g-2) + beta`; when that is odd the instance
/// is rejected rather than patched. The marked generators sit after the free
/// ones and carry the block/position labels of the even entries; pair
/// generators with an out-of-range partner degrade to a single class, and
/// fully out-of-range pairs are skipped.
pub fn hitchin_instance(
    n: u64,
    genus: u64,
    d_c: &Partition,
    levi_c: &LeviType,
) -> Result<HitchinWeilInstance> {
    if genus < 2 {
        return Err(Error::InvalidParameter(format!(
            "genus must be at least 2, got {genus}"
        )));
    }
    if levi_c.group_type != OrbitType::C {
        return Err(Error::InvalidParameter(
            "a type-C parabolic datum is required".into(),
        ));
    }
    if d_c.total() != 2 * n {
        return Err(Error::InvalidParameter(format!(
            "{d_c} is not a partition of 2n = {}",
            2 * n
        )));
    }
    let inv = orbit_invariants(d_c, OrbitType::C)?;
    let rich_c = richardson_data(levi_c)?;
    if &rich_c.orbit != d_c {
        return Err(Error::NotRichardson(format!(
            "{levi_c} induces {}, not {d_c}",
            rich_c.orbit
        )));
    }
    let levi_b = dual_levi(levi_c);
    let rich_b = richardson_data(&levi_b)?;
    debug_assert_eq!(rich_b.orbit, inv.dual);

    let beta = inv.beta;
    let c = inv.c;
    let two_n_points = (2 * n * (2 * genus - 2)) as usize + beta;
    if two_n_points % 2 == 1 {
        return Err(Error::ParityGuard {
            count: two_n_points as u64,
        });
    }
    let n_half = two_n_points / 2;

    // Generator layout: free points first (the base is the omitted point),
    // then one marked generator per even entry of the type-C partition,
    // grouped by the type-B block its dual entry came from.
    let free_gens = two_n_points - beta - 1;
    let mut labels = vec![PointLabel::Free; free_gens];
    // position -> generator index, for 1-based positions of even entries.
    let mut marked_at: Vec<Option<usize>> = vec![None; inv.b_side.total() as usize + 2];
    let mut block_marks: Vec<Vec<usize>> = Vec::new();
    let mut position = 0usize;
    for (block_idx, block) in inv.blocks.iter().enumerate() {
        let mut marks = Vec::new();
        for entry in block.local_dual() {
            position += 1;
            if entry % 2 == 0 {
                let gen_index = labels.len();
                labels.push(PointLabel::Marked {
                    block: block_idx,
                    position,
                });
                marked_at[position] = Some(gen_index);
                marks.push(gen_index);
            }
        }
        if !marks.is_empty() {
            block_marks.push(marks);
        }
    }
    debug_assert_eq!(position, d_c.len());
    let space = weil_space(n_half, labels)?;

    // A tie generator for index j: the two-class sum when both positions are
    // marked, a single class when one is, nothing when neither is.
    let tie_gen = |j: usize| -> Option<u128> {
        let a = marked_at.get(j).copied().flatten();
        let b = marked_at.get(j + 1).copied().flatten();
        match (a, b) {
            (Some(a), Some(b)) => Some((1u128 << a) | (1u128 << b)),
            (Some(a), None) => Some(1u128 << a),
            (None, Some(b)) => Some(1u128 << b),
            (None, None) => None,
        }
    };

    let v_c_gens: Vec<u128> = rich_c.index_set.iter().filter_map(|&j| tie_gen(j)).collect();

    let mut v_b_core: Vec<u128> = Vec::new();
    for marks in &block_marks {
        assert!(
            marks.len() % 2 == 0,
            "a parity-admissible instance has evenly many marks per block"
        );
        let last = *marks.last().expect("nonempty mark list");
        for &m in &marks[..marks.len() - 1] {
            v_b_core.push((1u128 << m) | (1u128 << last));
        }
    }
    for y in 0..free_gens {
        v_b_core.push(1u128 << y);
    }
    let mut v_b_gens = v_b_core.clone();
    for &j in &rich_b.index_set {
        if let Some(g) = tie_gen(j) {
            v_b_gens.push(g);
        }
    }

    let dim_v_b = space.dim_in_ker_beta(&v_b_gens);
    let dim_v_c = space.dim_in_ker_beta(&v_c_gens);
    let verdicts = WeilVerdicts {
        dual_check: space.dual_check(&v_b_gens, &v_c_gens),
        component_count: space.component_count(&CoverSpec {
            gens: v_b_gens.clone(),
        }),
        dim_v_b,
        dim_v_c,
        dims_ok: dim_v_b + dim_v_c == space.dim_ker_beta(),
        naive_dual_check: space.dual_check(&v_b_core, &[]),
    };

    Ok(HitchinWeilInstance {
        n,
        genus,
        orbit_c: d_c.clone(),
        orbit_b: inv.dual.clone(),
        levi_c: levi_c.clone(),
        levi_b,
        beta,
        c,
        space,
        v_b: CoverSpec { gens: v_b_gens },
        v_c: CoverSpec { gens: v_c_gens },
        deg_prym_dual_log2: (two_n_points - 2) as u64,
        deg_component_cover_log2: (two_n_points - 2 - c) as u64,
        verdicts,
    })
}
