//! Counting maximal isotropic subspaces compatible with a semisimple
//! endomorphism inside the residue space attached to a special type-B
//! partition.
//!
//! The residue space has one coordinate per even entry of the blockwise dual
//! (grouped by block), plus a distinguished extra line of degree one attached
//! to the final block. It carries a nondegenerate diagonal pairing and a
//! diagonal endomorphism with distinct eigenvalues. The subspaces of interest
//! are cut out by isotropy, maximality, and a flagwise rank profile; both a
//! structural chain construction and a brute-force search count them, and the
//! count must be two to the power (even-entry count minus two-ended-block
//! count).

use crate::error::{Error, Result};
use crate::field::{Field, Fp, Fp2};
use crate::linalg::{self, Vector};
use crate::orbit::{orbit_invariants, BlockKind};
use crate::partition::{OrbitType, Partition};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Coefficient field of a residue model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldKind {
    /// The prime field.
    Prime,
    /// The quadratic extension by a square root of the stored nonresidue.
    Quadratic { nonresidue: u64 },
}

/// One block of the residue space: the block's partition entries and the
/// coordinates it owns.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelBlock {
    pub parts: Vec<u64>,
    /// Global coordinate indices, degrees descending.
    pub coords: Vec<usize>,
    /// Whether this is the final one-ended block (owns the extra line).
    pub is_final: bool,
}

/// Sampled residue-space data for a special type-B partition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidueModel {
    pub partition: Partition,
    pub p: u64,
    pub kind: FieldKind,
    /// Number of even entries among the blockwise duals.
    pub beta: usize,
    /// Number of two-ended blocks.
    pub c: usize,
    /// Ambient dimension: beta + 1.
    pub dim_q: usize,
    /// Degree per coordinate; the final coordinate is the extra line of
    /// degree one.
    pub degrees: Vec<u64>,
    /// Owning block index per coordinate.
    pub block_of: Vec<usize>,
    /// Diagonal pairing coefficients (base field, nonzero).
    pub gammas: Vec<u64>,
    /// Diagonal endomorphism eigenvalues (base field, distinct, nonzero).
    pub phis: Vec<u64>,
    /// Whether the extra line meets the counted subspaces (beta odd).
    pub active_q0: bool,
    pub blocks: Vec<ModelBlock>,
    /// Rejected draws before this one.
    pub resamples: u32,
}

/// Result of one counting pass over a residue model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsotropicSolution {
    /// Total dimension of each counted subspace.
    pub dim_w: usize,
    /// Count per block with coordinates, in block order.
    pub per_block: Vec<u64>,
    /// Product over blocks.
    pub count: u64,
    /// 2^(beta - c).
    pub expected: u64,
}

/// Comparison of the structural and brute-force counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountCheck {
    pub partition: Partition,
    pub p: u64,
    pub kind: FieldKind,
    pub expected: u64,
    pub structural: u64,
    pub brute: u64,
    pub dim_w: usize,
    pub resamples: u32,
}

impl CountCheck {
    pub fn pass(&self) -> bool {
        self.structural == self.expected && self.brute == self.expected
    }
}

const MAX_PRIME_ATTEMPTS: u32 = 4000;
const MAX_QUADRATIC_ATTEMPTS: u32 = 200;
const BRUTE_SCAN_BUDGET: u64 = 400_000_000;

/// Coordinate layout shared by every sampled model of a partition.
struct Layout {
    beta: usize,
    c: usize,
    dim_q: usize,
    degrees: Vec<u64>,
    block_of: Vec<usize>,
    active_q0: bool,
    blocks: Vec<ModelBlock>,
}

fn layout(d: &Partition) -> Result<Layout> {
    let inv = orbit_invariants(d, OrbitType::B)?;
    let mut degrees: Vec<u64> = Vec::new();
    let mut block_of: Vec<usize> = Vec::new();
    let mut blocks: Vec<ModelBlock> = Vec::new();
    for block in &inv.blocks {
        let is_final = block.kind == BlockKind::B3;
        let mut coords = Vec::new();
        let dual = block.local_dual();
        let even_entries = dual.iter().copied().filter(|e| e % 2 == 0);
        if block.kind == BlockKind::B2 || is_final {
            for e in even_entries {
                coords.push(degrees.len());
                block_of.push(blocks.len());
                degrees.push(e);
            }
        }
        if is_final {
            // The extra degree-one line rides with the final block.
            coords.push(degrees.len());
            block_of.push(blocks.len());
            degrees.push(1);
        }
        if !coords.is_empty() {
            blocks.push(ModelBlock {
                parts: block.parts.clone(),
                coords,
                is_final,
            });
        }
    }
    let beta = inv.beta;
    assert_eq!(degrees.len(), beta + 1);
    Ok(Layout {
        beta,
        c: inv.c,
        dim_q: beta + 1,
        degrees,
        block_of,
        active_q0: beta % 2 == 1,
        blocks,
    })
}

/// Builds a residue model over the prime field, escalating to the quadratic
/// extension when no prime-field draw supports the structural construction.
pub fn build_residue_model(d: &Partition, p: u64, seed: u64) -> Result<ResidueModel> {
    match build_residue_model_in(d, p, seed, FieldKind::Prime) {
        Ok(model) => Ok(model),
        Err(Error::RetriesExhausted { attempts, .. }) => {
            let fp = Fp::new(p);
            let kind = FieldKind::Quadratic {
                nonresidue: fp.nonresidue(),
            };
            let mut model = build_residue_model_in(d, p, seed, kind)?;
            model.resamples += attempts;
            Ok(model)
        }
        Err(e) => Err(e),
    }
}

/// Builds a residue model over the requested field, resampling until the
/// structural construction goes through.
pub fn build_residue_model_in(
    d: &Partition,
    p: u64,
    seed: u64,
    kind: FieldKind,
) -> Result<ResidueModel> {
    let lay = layout(d)?;
    let fp = Fp::new(p);
    if let FieldKind::Quadratic { nonresidue } = kind {
        if nonresidue != fp.nonresidue() {
            return Err(Error::InvalidParameter(format!(
                "nonresidue {nonresidue} is not the canonical one for p={p}"
            )));
        }
    }
    let max_attempts = match kind {
        FieldKind::Prime => MAX_PRIME_ATTEMPTS,
        FieldKind::Quadratic { .. } => MAX_QUADRATIC_ATTEMPTS,
    };
    for attempt in 0..max_attempts {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let gammas: Vec<u64> = (0..lay.dim_q).map(|_| rng.gen_range(1..p)).collect();
        let mut phis: Vec<u64> = Vec::with_capacity(lay.dim_q);
        while phis.len() < lay.dim_q {
            let x = rng.gen_range(1..p);
            if !phis.contains(&x) {
                phis.push(x);
            }
        }
        let model = ResidueModel {
            partition: d.clone(),
            p,
            kind,
            beta: lay.beta,
            c: lay.c,
            dim_q: lay.dim_q,
            degrees: lay.degrees.clone(),
            block_of: lay.block_of.clone(),
            gammas,
            phis,
            active_q0: lay.active_q0,
            blocks: lay.blocks.clone(),
            resamples: attempt,
        };
        let viable = match kind {
            FieldKind::Prime => model_viable(&Fp::new(p), &model),
            FieldKind::Quadratic { .. } => model_viable(&Fp2::new(p), &model),
        };
        if viable {
            return Ok(model);
        }
    }
    Err(Error::RetriesExhausted {
        attempts: max_attempts,
        context: format!("building a residue model for {d} over p={p} ({kind:?})"),
    })
}

fn model_viable<F: Field>(f: &F, model: &ResidueModel) -> bool {
    // A draw is kept only if the full structural enumeration succeeds and
    // lands exactly on the predicted count.
    structural_count_in(f, model)
        .map(|s| s.count == s.expected)
        .unwrap_or(false)
}

/// Per-slice structural data: coordinates of one degree value, the canonical
/// quadric-solution vector, its square roots, and the chain length.
struct SliceInfo<F: Field> {
    coords: Vec<usize>,
    d: usize,
    y: Vec<F::Elem>,
    x: Vec<F::Elem>,
}

struct BlockStructure<F: Field> {
    slices: Vec<SliceInfo<F>>,
    /// Link coefficients between consecutive slices.
    rhos: Vec<F::Elem>,
    dim: usize,
}

/// Groups a block's coordinates by degree (descending) and computes the chain
/// length of each slice.
fn block_slices(model: &ResidueModel, block: &ModelBlock) -> Vec<(Vec<usize>, usize)> {
    let mut groups: Vec<(u64, Vec<usize>)> = Vec::new();
    for &c in &block.coords {
        let deg = model.degrees[c];
        match groups.last_mut() {
            Some((d, list)) if *d == deg => list.push(c),
            _ => {
                if let Some((d, _)) = groups.last() {
                    assert!(*d > deg, "coordinates must be grouped by descending degree");
                }
                groups.push((deg, vec![c]));
            }
        }
    }
    let q = groups.len();
    groups
        .into_iter()
        .enumerate()
        .map(|(j, (_, coords))| {
            let m = coords.len();
            let d = if q >= 3 && j > 0 && j < q - 1 {
                assert!(m % 2 == 0, "interior slices pair up");
                m / 2 - 1
            } else {
                m / 2
            };
            (coords, d)
        })
        .collect()
}

/// Inclusive exponent range of the vanishing conditions for slice `j` of `q`.
fn slice_range(q: usize, j: usize, d: usize) -> (usize, usize) {
    if q == 1 {
        (2, 2 * d)
    } else if j == 0 {
        (2, 2 * d + 1)
    } else if j == q - 1 {
        (1, 2 * d)
    } else {
        (1, 2 * d + 1)
    }
}

/// Weighted power sum of a slice-solution vector: sum of gamma_i y_i phi_i^-s.
fn power_sum<F: Field>(f: &F, model: &ResidueModel, slice: &SliceInfo<F>, s: usize) -> F::Elem {
    let mut acc = f.zero();
    for (idx, &c) in slice.coords.iter().enumerate() {
        let phi_inv = f
            .inv(f.embed(model.phis[c]))
            .expect("eigenvalues are nonzero");
        let term = f.mul(
            f.embed(model.gammas[c]),
            f.mul(slice.y[idx], f.pow(phi_inv, s as u64)),
        );
        acc = f.add(acc, term);
    }
    acc
}

/// Solves the structural slice systems of one block: one-dimensional dense
/// quadric kernels with square entries, and square link ratios.
fn analyze_block<F: Field>(
    f: &F,
    model: &ResidueModel,
    block: &ModelBlock,
) -> Result<BlockStructure<F>> {
    let grouped = block_slices(model, block);
    let q = grouped.len();
    let mut slices = Vec::with_capacity(q);
    for (j, (coords, d)) in grouped.iter().enumerate() {
        let m = coords.len();
        let (lo, hi) = slice_range(q, j, *d);
        let mut rows: Vec<Vector<F>> = Vec::new();
        for s in lo..=hi {
            let row: Vector<F> = coords
                .iter()
                .map(|&c| {
                    let phi_inv = f
                        .inv(f.embed(model.phis[c]))
                        .expect("eigenvalues are nonzero");
                    f.mul(f.embed(model.gammas[c]), f.pow(phi_inv, s as u64))
                })
                .collect();
            rows.push(row);
        }
        let null = linalg::kernel(f, &rows, m);
        if null.len() != 1 {
            return Err(Error::GenericityFailure(format!(
                "slice system kernel has dimension {} (expected 1)",
                null.len()
            )));
        }
        let mut y = null.into_iter().next().unwrap();
        if y.iter().any(|&v| f.is_zero(v)) {
            return Err(Error::GenericityFailure(
                "slice kernel vector has a zero coordinate".into(),
            ));
        }
        let x = match sqrt_all(f, &y) {
            Some(x) => x,
            None => {
                // A global rescaling can move every entry into the square
                // class at once; try the canonical nonsquare.
                match rescale_to_squares(f, &mut y) {
                    Some(x) => x,
                    None => {
                        return Err(Error::GenericityFailure(
                            "slice kernel entries are not simultaneously squares".into(),
                        ))
                    }
                }
            }
        };
        slices.push(SliceInfo {
            coords: coords.clone(),
            d: *d,
            y,
            x,
        });
    }
    let mut rhos = Vec::with_capacity(q.saturating_sub(1));
    for j in 0..q.saturating_sub(1) {
        let num = f.neg(power_sum(f, model, &slices[j], 2 * slices[j].d + 2));
        let den = power_sum(f, model, &slices[j + 1], 0);
        if f.is_zero(num) || f.is_zero(den) {
            return Err(Error::GenericityFailure(
                "degenerate link ratio between adjacent slices".into(),
            ));
        }
        let ratio = f.div(num, den).expect("nonzero denominator");
        match f.sqrt(ratio) {
            Some(r) => rhos.push(r),
            None => {
                return Err(Error::GenericityFailure(
                    "link ratio is not a square".into(),
                ))
            }
        }
    }
    let dim = slices.iter().map(|s| s.d).sum::<usize>() + q - 1;
    Ok(BlockStructure { slices, rhos, dim })
}

fn sqrt_all<F: Field>(f: &F, values: &[F::Elem]) -> Option<Vec<F::Elem>> {
    values.iter().map(|&v| f.sqrt(v)).collect()
}

fn rescale_to_squares<F: Field>(f: &F, values: &mut [F::Elem]) -> Option<Vec<F::Elem>> {
    let scale = f.canonical_nonsquare()?;
    for v in values.iter_mut() {
        *v = f.mul(*v, scale);
    }
    sqrt_all(f, values)
}

/// Shared filter context for one block.
struct BlockContext<'a, F: Field> {
    f: &'a F,
    parts: &'a [u64],
    /// Block-local coordinate degrees.
    degrees: Vec<u64>,
    gammas: Vec<F::Elem>,
    phis: Vec<F::Elem>,
    expected_dim: usize,
}

impl<'a, F: Field> BlockContext<'a, F> {
    fn new(
        f: &'a F,
        model: &ResidueModel,
        block: &'a ModelBlock,
        expected_dim: usize,
    ) -> BlockContext<'a, F> {
        BlockContext {
            f,
            parts: &block.parts,
            degrees: block.coords.iter().map(|&c| model.degrees[c]).collect(),
            gammas: block
                .coords
                .iter()
                .map(|&c| f.embed(model.gammas[c]))
                .collect(),
            phis: block
                .coords
                .iter()
                .map(|&c| f.embed(model.phis[c]))
                .collect(),
            expected_dim,
        }
    }

    fn m(&self) -> usize {
        self.degrees.len()
    }

    fn pair(&self, u: &[F::Elem], v: &[F::Elem]) -> F::Elem {
        let f = self.f;
        let mut acc = f.zero();
        for i in 0..u.len() {
            acc = f.add(acc, f.mul(self.gammas[i], f.mul(u[i], v[i])));
        }
        acc
    }

    fn is_isotropic(&self, basis: &[Vector<F>]) -> bool {
        for (i, u) in basis.iter().enumerate() {
            for v in &basis[i..] {
                if !self.f.is_zero(self.pair(u, v)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Vectors of `basis` supported on the coordinates where `keep` is true.
fn meet_coords<F: Field>(f: &F, basis: &[Vector<F>], keep: &[bool]) -> Vec<Vector<F>> {
    if basis.is_empty() {
        return Vec::new();
    }
    let mut rows: Vec<Vector<F>> = Vec::new();
    for (c, &k) in keep.iter().enumerate() {
        if !k {
            rows.push(basis.iter().map(|v| v[c]).collect());
        }
    }
    let combos = linalg::kernel(f, &rows, basis.len());
    let vectors: Vec<Vector<F>> = combos
        .iter()
        .map(|coef| {
            let mut v = vec![f.zero(); keep.len()];
            for (k, b) in coef.iter().zip(basis) {
                if !f.is_zero(*k) {
                    for (vx, bx) in v.iter_mut().zip(b) {
                        *vx = f.add(*vx, f.mul(*k, *bx));
                    }
                }
            }
            v
        })
        .collect();
    linalg::rref(f, &vectors)
}

/// The flagwise rank defect of the subspace at level `l`.
fn rank_defect<F: Field>(ctx: &BlockContext<F>, basis: &[Vector<F>], l: u64) -> i64 {
    let f = ctx.f;
    let m = ctx.m();
    let low: Vec<bool> = ctx.degrees.iter().map(|&d| d < l).collect();
    let eq: Vec<bool> = ctx.degrees.iter().map(|&d| d == l).collect();
    let ge: Vec<bool> = ctx.degrees.iter().map(|&d| d >= l).collect();
    let high: Vec<bool> = ctx.degrees.iter().map(|&d| d > l).collect();

    let dim_low = meet_coords(f, basis, &low).len();

    let proj_ge = linalg::project_coords(f, basis, &ge);
    let proj_eq = linalg::project_coords(f, basis, &eq);
    let x = linalg::intersect(f, &proj_ge, &proj_eq, m);
    let phi_x: Vec<Vector<F>> = x
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .map(|(i, &c)| f.mul(ctx.phis[i], c))
                .collect()
        })
        .collect();
    let mut high_rows: Vec<Vector<F>> = Vec::new();
    for (i, &h) in high.iter().enumerate() {
        if h {
            let mut e = vec![f.zero(); m];
            e[i] = f.one();
            high_rows.push(e);
        }
    }
    let ambient = linalg::span_sum(f, &high_rows, &phi_x);
    let dim_meet = linalg::intersect(f, basis, &ambient, m).len();

    basis.len() as i64 - dim_low as i64 - dim_meet as i64
}

fn rank_defect_target(parts: &[u64], degrees: &[u64], l: u64) -> i64 {
    let rk = |xs: &[u64]| -> i64 { xs.iter().map(|&x| x.saturating_sub(l) as i64).sum() };
    rk(parts) - rk(degrees)
}

/// Applies the mechanical filters: dimension, isotropy, maximality, and the
/// flagwise rank profile.
fn passes_filters<F: Field>(ctx: &BlockContext<F>, basis: &[Vector<F>]) -> bool {
    let f = ctx.f;
    let m = ctx.m();
    if basis.len() != ctx.expected_dim {
        return false;
    }
    if !ctx.is_isotropic(basis) {
        return false;
    }
    // Maximality: the perp-quotient is at most a line, and the induced form
    // on a line must not vanish.
    let functionals: Vec<Vector<F>> = basis
        .iter()
        .map(|u| {
            (0..m)
                .map(|i| f.mul(ctx.gammas[i], u[i]))
                .collect::<Vec<_>>()
        })
        .collect();
    let perp = linalg::kernel(f, &functionals, m);
    let quotient = perp.len() - basis.len();
    if quotient > 1 {
        return false;
    }
    if quotient == 1 {
        let mut witness = None;
        for v in &perp {
            let mut w = v.clone();
            linalg::reduce_against(f, &mut w, basis);
            if w.iter().any(|&x| !f.is_zero(x)) {
                witness = Some(w);
                break;
            }
        }
        let w = witness.expect("quotient is one-dimensional");
        if f.is_zero(ctx.pair(&w, &w)) {
            return false;
        }
    }
    // Flagwise rank profile.
    let top = ctx.parts.first().copied().unwrap_or(0);
    for l in 1..=top {
        if rank_defect(ctx, basis, l) != rank_defect_target(ctx.parts, &ctx.degrees, l) {
            return false;
        }
    }
    true
}

/// Enumerates the structural chain subspaces of one block over all sign
/// choices, in canonical reduced form.
fn enumerate_structural<F: Field>(
    ctx: &BlockContext<F>,
    block: &ModelBlock,
    bs: &BlockStructure<F>,
) -> BTreeSet<Vec<Vector<F>>> {
    let f = ctx.f;
    let m = ctx.m();
    let q = bs.slices.len();
    let total_signs: usize = bs.slices.iter().map(|s| s.coords.len()).sum();
    let mut out = BTreeSet::new();
    // Block-local index of each global coordinate.
    let local_of = |c: usize| block.coords.iter().position(|&x| x == c).unwrap();
    for eps_mask in 0u64..(1 << total_signs) {
        for tau_mask in 0u64..(1 << (q - 1)) {
            // Signed generator per slice, in block-local coordinates.
            let mut ws: Vec<Vector<F>> = Vec::with_capacity(q);
            let mut bit = 0;
            for slice in &bs.slices {
                let mut w = vec![f.zero(); m];
                for (idx, &c) in slice.coords.iter().enumerate() {
                    let mut val = slice.x[idx];
                    if (eps_mask >> bit) & 1 == 1 {
                        val = f.neg(val);
                    }
                    bit += 1;
                    w[local_of(c)] = val;
                }
                ws.push(w);
            }
            let phi_inv_pow = |w: &Vector<F>, k: usize| -> Vector<F> {
                w.iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        let inv = f.inv(ctx.phis[i]).expect("eigenvalues are nonzero");
                        f.mul(v, f.pow(inv, k as u64))
                    })
                    .collect()
            };
            let mut rows: Vec<Vector<F>> = Vec::new();
            for (j, slice) in bs.slices.iter().enumerate() {
                for k in 1..=slice.d {
                    rows.push(phi_inv_pow(&ws[j], k));
                }
                if j + 1 < q {
                    let mut link = phi_inv_pow(&ws[j], slice.d + 1);
                    let mut rho = bs.rhos[j];
                    if (tau_mask >> j) & 1 == 1 {
                        rho = f.neg(rho);
                    }
                    for (lx, wx) in link.iter_mut().zip(&ws[j + 1]) {
                        *lx = f.add(*lx, f.mul(rho, *wx));
                    }
                    rows.push(link);
                }
            }
            let basis = linalg::rref(f, &rows);
            out.insert(basis);
        }
    }
    out
}

fn block_expected_count(block_coord_count: usize) -> u64 {
    1u64 << (block_coord_count - 1)
}

fn structural_count_in<F: Field>(f: &F, model: &ResidueModel) -> Result<IsotropicSolution> {
    let mut per_block = Vec::new();
    let mut count = 1u64;
    let mut dim_w = 0usize;
    for block in &model.blocks {
        let bs = analyze_block(f, model, block)?;
        let ctx = BlockContext::new(f, model, block, bs.dim);
        let subspaces = enumerate_structural(&ctx, block, &bs);
        for basis in &subspaces {
            if !passes_filters(&ctx, basis) {
                return Err(Error::GenericityFailure(
                    "a structural subspace fails the mechanical filters".into(),
                ));
            }
        }
        let n = subspaces.len() as u64;
        if n != block_expected_count(block.coords.len()) {
            return Err(Error::GenericityFailure(format!(
                "structural enumeration found {n} subspaces for a block with {} coordinates",
                block.coords.len()
            )));
        }
        per_block.push(n);
        count *= n;
        dim_w += bs.dim;
    }
    Ok(IsotropicSolution {
        dim_w,
        per_block,
        count,
        expected: 1u64 << (model.beta - model.c),
    })
}

/// Counts via the structural chain construction.
pub fn structural_count(model: &ResidueModel) -> Result<IsotropicSolution> {
    match model.kind {
        FieldKind::Prime => structural_count_in(&Fp::new(model.p), model),
        FieldKind::Quadratic { .. } => structural_count_in(&Fp2::new(model.p), model),
    }
}

/// Recursively enumerates reduced-echelon bases with the given pivot columns,
/// pruning by isotropy as each row is completed.
fn echelon_dfs<F: Field>(
    ctx: &BlockContext<F>,
    pivots: &[usize],
    row: usize,
    basis: &mut Vec<Vector<F>>,
    found: &mut Vec<Vec<Vector<F>>>,
) {
    let f = ctx.f;
    let m = ctx.m();
    if row == pivots.len() {
        found.push(basis.clone());
        return;
    }
    let pivot = pivots[row];
    let free: Vec<usize> = (pivot + 1..m).filter(|j| !pivots.contains(j)).collect();
    // Linear constraints from orthogonality with the completed rows: for each
    // previous row u, sum_j gamma_j u_j v_j = 0. Split into the fixed pivot
    // contribution and the free coordinates.
    let mut constraint_rows: Vec<Vector<F>> = Vec::new();
    let mut constraint_rhs: Vec<F::Elem> = Vec::new();
    for u in basis.iter() {
        let row_vec: Vector<F> = free
            .iter()
            .map(|&j| f.mul(ctx.gammas[j], u[j]))
            .collect();
        constraint_rows.push(row_vec);
        constraint_rhs.push(f.neg(f.mul(ctx.gammas[pivot], u[pivot])));
    }
    // Reduce the linear system over the free coordinates to an affine
    // parameterization: particular solution plus kernel.
    let null = linalg::kernel(f, &constraint_rows, free.len());
    let particular = if constraint_rows.is_empty() {
        Some(vec![f.zero(); free.len()])
    } else {
        linalg::solve(f, &constraint_rows, &constraint_rhs)
    };
    let Some(particular) = particular else {
        return; // inconsistent constraints: no extension of this basis
    };
    let order = f.order();
    let mut counter = vec![0u64; null.len()];
    loop {
        // Assemble the free-coordinate assignment.
        let mut assignment = particular.clone();
        for (k, basis_vec) in null.iter().enumerate() {
            let cfac = f.elem(counter[k]);
            if !f.is_zero(cfac) {
                for (a, b) in assignment.iter_mut().zip(basis_vec) {
                    *a = f.add(*a, f.mul(cfac, *b));
                }
            }
        }
        let mut v = vec![f.zero(); m];
        v[pivot] = f.one();
        for (idx, &j) in free.iter().enumerate() {
            v[j] = assignment[idx];
        }
        if f.is_zero(ctx.pair(&v, &v)) {
            basis.push(v);
            echelon_dfs(ctx, pivots, row + 1, basis, found);
            basis.pop();
        }
        // Odometer over the kernel coefficients.
        let mut k = 0usize;
        loop {
            if k == null.len() {
                return;
            }
            counter[k] += 1;
            if counter[k] < order {
                break;
            }
            counter[k] = 0;
            k += 1;
        }
    }
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, m: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..m {
            if m - i < k - current.len() {
                break;
            }
            current.push(i);
            rec(i + 1, m, k, current, out);
            current.pop();
        }
    }
    rec(0, m, k, &mut current, &mut out);
    out
}

/// Full search over reduced-echelon bases of the expected dimension.
fn brute_block_small<F: Field>(ctx: &BlockContext<F>) -> u64 {
    let m = ctx.m();
    let k = ctx.expected_dim;
    if k == 0 {
        return if passes_filters(ctx, &[]) { 1 } else { 0 };
    }
    let mut count = 0u64;
    for pivots in combinations(m, k) {
        let mut basis = Vec::new();
        let mut found = Vec::new();
        echelon_dfs(ctx, &pivots, 0, &mut basis, &mut found);
        for candidate in found {
            if passes_filters(ctx, &candidate) {
                count += 1;
            }
        }
    }
    count
}

/// Chain-shaped search for larger blocks: scans projective slice generators
/// on the vanishing loci, then all link coefficients, and filters. Licensed
/// as the brute-force reference for blocks past exhaustive reach.
fn brute_block_structured<F: Field>(
    ctx: &BlockContext<F>,
    model: &ResidueModel,
    block: &ModelBlock,
) -> Result<u64> {
    let f = ctx.f;
    let m = ctx.m();
    let grouped = block_slices(model, block);
    let q = grouped.len();
    let order = f.order();
    // Budget check before scanning.
    let mut budget = 0u128;
    for (coords, _) in &grouped {
        let mut level = 1u128;
        for _ in 1..coords.len() {
            level = level.saturating_mul(order as u128);
        }
        budget = budget.saturating_add(level);
    }
    if budget > BRUTE_SCAN_BUDGET as u128 {
        return Err(Error::InvalidParameter(format!(
            "structured scan of {budget} candidates exceeds the brute-force budget"
        )));
    }
    let local_of = |c: usize| block.coords.iter().position(|&x| x == c).unwrap();

    // Per-slice survivors: projective vectors whose weighted power sums
    // vanish on the slice's exponent range.
    let mut survivors: Vec<Vec<Vector<F>>> = Vec::with_capacity(q);
    for (j, (coords, d)) in grouped.iter().enumerate() {
        let mc = coords.len();
        let (lo, hi) = slice_range(q, j, *d);
        let gammas: Vec<F::Elem> = coords.iter().map(|&c| f.embed(model.gammas[c])).collect();
        let phi_inv: Vec<F::Elem> = coords
            .iter()
            .map(|&c| f.inv(f.embed(model.phis[c])).expect("nonzero eigenvalue"))
            .collect();
        let mut slice_survivors: Vec<Vector<F>> = Vec::new();
        // First nonzero coordinate normalized to one.
        for first in 0..mc {
            let tail = mc - first - 1;
            let mut counter = vec![0u64; tail];
            loop {
                let mut w = vec![f.zero(); mc];
                w[first] = f.one();
                for (idx, &digit) in counter.iter().enumerate() {
                    w[first + 1 + idx] = f.elem(digit);
                }
                // Check the vanishing conditions with early exit.
                let wsq: Vec<F::Elem> = w.iter().map(|&v| f.mul(v, v)).collect();
                let mut ok = true;
                for s in lo..=hi {
                    let mut acc = f.zero();
                    for i in 0..mc {
                        acc = f.add(
                            acc,
                            f.mul(gammas[i], f.mul(wsq[i], f.pow(phi_inv[i], s as u64))),
                        );
                    }
                    if !f.is_zero(acc) {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    slice_survivors.push(w);
                }
                // Odometer.
                let mut t = 0usize;
                loop {
                    if t == tail {
                        break;
                    }
                    counter[t] += 1;
                    if counter[t] < order {
                        break;
                    }
                    counter[t] = 0;
                    t += 1;
                }
                if tail == 0 || counter.iter().all(|&x| x == 0) {
                    break;
                }
            }
        }
        survivors.push(slice_survivors);
    }
    if survivors.iter().any(|s| s.is_empty()) {
        // Some vanishing locus has no rational point: no candidates at all.
        return Ok(0);
    }

    // Assemble candidates: pick one survivor per slice and any link
    // coefficients, then filter.
    let mut seen: BTreeSet<Vec<Vector<F>>> = BTreeSet::new();
    let mut pick = vec![0usize; q];
    loop {
        let ws: Vec<&Vector<F>> = pick
            .iter()
            .enumerate()
            .map(|(j, &i)| &survivors[j][i])
            .collect();
        // Link coefficient scan (including zero).
        let links = q - 1;
        let mut link_counter = vec![0u64; links];
        loop {
            let mut rows: Vec<Vector<F>> = Vec::new();
            for (j, (coords, d)) in grouped.iter().enumerate() {
                let embed_local = |w: &Vector<F>, k: usize| -> Vector<F> {
                    let mut v = vec![f.zero(); m];
                    for (idx, &c) in coords.iter().enumerate() {
                        let inv = f.inv(f.embed(model.phis[c])).expect("nonzero eigenvalue");
                        v[local_of(c)] = f.mul(w[idx], f.pow(inv, k as u64));
                    }
                    v
                };
                for k in 1..=*d {
                    rows.push(embed_local(ws[j], k));
                }
                if j + 1 < q {
                    let mut link = embed_local(ws[j], *d + 1);
                    let cfac = f.elem(link_counter[j]);
                    let (next_coords, _) = &grouped[j + 1];
                    for (idx, &c) in next_coords.iter().enumerate() {
                        let lv = &mut link[local_of(c)];
                        *lv = f.add(*lv, f.mul(cfac, ws[j + 1][idx]));
                    }
                    rows.push(link);
                }
            }
            let basis = linalg::rref(f, &rows);
            if basis.len() == ctx.expected_dim && ctx.is_isotropic(&basis) {
                // Full filters only past the cheap screens.
                if passes_filters(ctx, &basis) {
                    seen.insert(basis);
                }
            }
            // Odometer over link coefficients.
            let mut t = 0usize;
            loop {
                if t == links {
                    break;
                }
                link_counter[t] += 1;
                if link_counter[t] < order {
                    break;
                }
                link_counter[t] = 0;
                t += 1;
            }
            if links == 0 || link_counter.iter().all(|&x| x == 0) {
                break;
            }
        }
        // Odometer over survivor picks.
        let mut t = 0usize;
        loop {
            if t == q {
                return Ok(seen.len() as u64);
            }
            pick[t] += 1;
            if pick[t] < survivors[t].len() {
                break;
            }
            pick[t] = 0;
            t += 1;
        }
    }
}

const SMALL_BLOCK_LIMIT: usize = 4;

fn brute_force_count_in<F: Field>(f: &F, model: &ResidueModel) -> Result<IsotropicSolution> {
    let mut per_block = Vec::new();
    let mut count = 1u64;
    let mut dim_w = 0usize;
    for block in &model.blocks {
        let grouped = block_slices(model, block);
        let q = grouped.len();
        let expected_dim = grouped.iter().map(|(_, d)| *d).sum::<usize>() + q - 1;
        let ctx = BlockContext::new(f, model, block, expected_dim);
        let n = if block.coords.len() <= SMALL_BLOCK_LIMIT {
            brute_block_small(&ctx)
        } else {
            brute_block_structured(&ctx, model, block)?
        };
        per_block.push(n);
        count *= n;
        dim_w += expected_dim;
    }
    Ok(IsotropicSolution {
        dim_w,
        per_block,
        count,
        expected: 1u64 << (model.beta - model.c),
    })
}

/// Counts by exhaustive search (chain-shaped scan on blocks past exhaustive
/// reach), applying the same mechanical filters.
pub fn brute_force_count(model: &ResidueModel) -> Result<IsotropicSolution> {
    match model.kind {
        FieldKind::Prime => brute_force_count_in(&Fp::new(model.p), model),
        FieldKind::Quadratic { .. } => brute_force_count_in(&Fp2::new(model.p), model),
    }
}

/// Builds a model and compares the structural count, the brute-force count,
/// and the predicted power of two.
pub fn count_check(d: &Partition, p: u64, seed: u64) -> Result<CountCheck> {
    let model = build_residue_model(d, p, seed)?;
    let structural = structural_count(&model)?;
    let brute = brute_force_count(&model)?;
    assert_eq!(structural.expected, brute.expected);
    Ok(CountCheck {
        partition: d.clone(),
        p,
        kind: model.kind,
        expected: structural.expected,
        structural: structural.count,
        brute: brute.count,
        dim_w: structural.dim_w,
        resamples: model.resamples,
    })
}
