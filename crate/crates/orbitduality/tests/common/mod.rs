//! Shared brute-force oracles for the integration tests.
//!
//! Everything here is implemented independently of the library internals:
//! direct definitions, exhaustive enumeration, and dense linear algebra.
//! The tests compare the library's structured algorithms against these.

#![allow(dead_code)]

use orbitduality::{OrbitType, Partition, SeriesMatrix};

/// All partitions of `total` as weakly decreasing part lists,
/// by direct recursive generation.
pub fn all_partitions(total: u64) -> Vec<Vec<u64>> {
    fn go(remaining: u64, max_part: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        let cap = max_part.min(remaining);
        for next in (1..=cap).rev() {
            prefix.push(next);
            go(remaining - next, next, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, &mut Vec::new(), &mut out);
    out
}

/// Membership by the multiplicity rule, written from scratch: type B needs an
/// odd total and every even part with even multiplicity; type C needs an even
/// total and every odd part with even multiplicity.
pub fn is_member_oracle(parts: &[u64], t: OrbitType) -> bool {
    let total: u64 = parts.iter().sum();
    let want_odd_total = matches!(t, OrbitType::B);
    if (total % 2 == 1) != want_odd_total {
        return false;
    }
    let constrained_parity = match t {
        OrbitType::B => 0,
        OrbitType::C => 1,
    };
    let mut i = 0;
    while i < parts.len() {
        let mut j = i;
        while j < parts.len() && parts[j] == parts[i] {
            j += 1;
        }
        if parts[i] % 2 == constrained_parity && (j - i) % 2 == 1 {
            return false;
        }
        i = j;
    }
    true
}

/// All members of the family with the given total, as raw part lists.
pub fn members_oracle(total: u64, t: OrbitType) -> Vec<Vec<u64>> {
    all_partitions(total)
        .into_iter()
        .filter(|p| is_member_oracle(p, t))
        .collect()
}

/// Transpose by explicit column counting on the Young diagram.
pub fn transpose_oracle(parts: &[u64]) -> Vec<u64> {
    let height = parts.first().copied().unwrap_or(0);
    (1..=height)
        .map(|col| parts.iter().filter(|&&p| p >= col).count() as u64)
        .collect()
}

/// Dominance order: every prefix sum of `a` is at least that of `b`.
/// Assumes equal totals; shorter lists are padded with zeros.
pub fn dominates_oracle(a: &[u64], b: &[u64]) -> bool {
    let len = a.len().max(b.len());
    let mut sa = 0u64;
    let mut sb = 0u64;
    for i in 0..len {
        sa += a.get(i).copied().unwrap_or(0);
        sb += b.get(i).copied().unwrap_or(0);
        if sa < sb {
            return false;
        }
    }
    true
}

/// Collapse by brute force: the dominance-greatest member of the family lying
/// below the input. Checks that the maximum is unique (comparable to every
/// other member below the input).
pub fn collapse_oracle(parts: &[u64], t: OrbitType) -> Vec<u64> {
    let total: u64 = parts.iter().sum();
    let below: Vec<Vec<u64>> = members_oracle(total, t)
        .into_iter()
        .filter(|m| dominates_oracle(parts, m))
        .collect();
    assert!(
        !below.is_empty(),
        "no member below {parts:?} of type {t:?}"
    );
    let best = below
        .iter()
        .find(|cand| below.iter().all(|other| dominates_oracle(cand, other)))
        .unwrap_or_else(|| panic!("no dominance-greatest member below {parts:?}"))
        .clone();
    best
}

/// Young-diagram corner statistic: the number of distinct part values that
/// are odd and whose column height (number of parts of at least that value)
/// is also odd.
pub fn odd_odd_corner_count(parts: &[u64]) -> usize {
    let mut values: Vec<u64> = parts.to_vec();
    values.dedup();
    values
        .iter()
        .filter(|&&v| {
            let height = parts.iter().filter(|&&p| p >= v).count();
            v % 2 == 1 && height % 2 == 1
        })
        .count()
}

/// Block shapes for segmenting a type-B partition, re-stated from scratch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegKind {
    PairOdd,     // [a, a] with a odd
    PairEven,    // [b, b] with b even
    TwoOddEnds,  // [a1, evens in equal pairs, a2] with a1, a2 odd
    OneOddEnd,   // [a, evens in equal pairs] with a odd
}

fn interior_even_pairs(seg: &[u64]) -> bool {
    if !seg.len().is_multiple_of(2) {
        return false;
    }
    seg.chunks(2)
        .all(|ch| ch[0] == ch[1] && ch[0] % 2 == 0)
}

fn classify_segment(seg: &[u64]) -> Vec<SegKind> {
    let mut kinds = Vec::new();
    if seg.len() == 2 && seg[0] == seg[1] {
        if seg[0] % 2 == 1 {
            kinds.push(SegKind::PairOdd);
        } else {
            kinds.push(SegKind::PairEven);
        }
    }
    // Two odd ends require a strict drop: equal odd ends form a pair block.
    // (With a nonempty even interior the drop is automatic.)
    if seg.len() >= 2
        && seg[0] % 2 == 1
        && seg[seg.len() - 1] % 2 == 1
        && seg[0] > seg[seg.len() - 1]
        && interior_even_pairs(&seg[1..seg.len() - 1])
    {
        kinds.push(SegKind::TwoOddEnds);
    }
    if !seg.is_empty() && seg[0] % 2 == 1 && interior_even_pairs(&seg[1..]) {
        kinds.push(SegKind::OneOddEnd);
    }
    kinds
}

/// Every way to cut `parts` into contiguous segments such that each segment
/// matches a block shape and exactly the final segment is a one-odd-end
/// block. Returns the list of valid segmentations (each a list of
/// (kind, segment)).
pub fn segmentations_oracle(parts: &[u64]) -> Vec<Vec<(SegKind, Vec<u64>)>> {
    fn go(
        rest: &[u64],
        current: &mut Vec<(SegKind, Vec<u64>)>,
        out: &mut Vec<Vec<(SegKind, Vec<u64>)>>,
    ) {
        if rest.is_empty() {
            if current
                .last()
                .is_some_and(|(k, _)| *k == SegKind::OneOddEnd)
                && current[..current.len() - 1]
                    .iter()
                    .all(|(k, _)| *k != SegKind::OneOddEnd)
            {
                out.push(current.clone());
            }
            return;
        }
        for cut in 1..=rest.len() {
            let seg = &rest[..cut];
            for kind in classify_segment(seg) {
                current.push((kind, seg.to_vec()));
                go(&rest[cut..], current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(parts, &mut Vec::new(), &mut out);
    out
}

/// Springer dual recomputed through the segment shapes: each two-odd-ends
/// segment [a1, mid..., a2] contributes [a1 - 1, mid..., a2 + 1], each
/// one-odd-end segment [a, mid...] contributes [a - 1, mid...] (dropping a
/// zero), and odd pairs pass through unchanged. The concatenation, resorted,
/// is the type-C dual of a special type-B partition.
pub fn blockwise_dual_oracle(parts: &[u64]) -> Vec<u64> {
    let segs = segmentations_oracle(parts);
    assert_eq!(segs.len(), 1, "expected a unique segmentation of {parts:?}");
    let mut dual: Vec<u64> = Vec::new();
    for (kind, seg) in &segs[0] {
        match kind {
            SegKind::PairOdd => dual.extend_from_slice(seg),
            SegKind::PairEven => panic!("even pair in a special partition {parts:?}"),
            SegKind::TwoOddEnds => {
                let mut piece = seg.clone();
                piece[0] -= 1;
                let last = piece.len() - 1;
                piece[last] += 1;
                dual.extend_from_slice(&piece);
            }
            SegKind::OneOddEnd => {
                let mut piece = seg.clone();
                piece[0] -= 1;
                dual.extend(piece.into_iter().filter(|&x| x > 0));
            }
        }
    }
    dual.sort_unstable_by(|a, b| b.cmp(a));
    dual
}

/// Convenience: library partition from raw parts.
pub fn pt(parts: &[u64]) -> Partition {
    Partition::new(parts.to_vec())
}

// ---------------------------------------------------------------------------
// Dense linear algebra over F_p for the section-search oracle.
// ---------------------------------------------------------------------------

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat inverse; p prime, a nonzero mod p.
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

/// Is the affine system `rows * x = rhs` consistent over F_p? Each row is
/// `coefficients ++ [rhs]`.
pub fn affine_system_consistent(mut rows: Vec<Vec<u64>>, p: u64) -> bool {
    if rows.is_empty() {
        return true;
    }
    let width = rows[0].len();
    let unknowns = width - 1;
    let mut pivot_row = 0;
    for col in 0..unknowns {
        let Some(found) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(pivot_row, found);
        let inv = inv_mod(rows[pivot_row][col], p);
        for x in rows[pivot_row].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_multiple_of(p) {
                let factor = rows[r][col];
                for c in 0..width {
                    let sub = factor * rows[pivot_row][c] % p;
                    rows[r][c] = (rows[r][c] + p * p - sub) % p;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    // Inconsistent iff some row is all zeros except a nonzero last entry.
    !rows.iter().any(|row| {
        row[..unknowns].iter().all(|&x| x % p == 0) && row[unknowns] % p != 0
    })
}

/// Brute-force section search: does `G * D - A * G = B` admit a solution `G`
/// over F_p[t]/(t^N)? Flattens every truncated-series entry of the unknown
/// into its coefficients and solves one dense F_p system covering all
/// t-levels. `A` is square of size f, `D` square of size q, `B` is f-by-q.
pub fn section_search(a: &SeriesMatrix, b: &SeriesMatrix, d: &SeriesMatrix) -> bool {
    let f = a.rows;
    let q = d.rows;
    assert_eq!(a.cols, f);
    assert_eq!(d.cols, q);
    assert_eq!((b.rows, b.cols), (f, q));
    let n = a.at(0, 0).precision();
    let p = a.at(0, 0).p;
    let unknown = |i: usize, k: usize, u: usize| (i * q + k) * n + u;
    let total_unknowns = f * q * n;
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(f * q * n);
    for i in 0..f {
        for j in 0..q {
            for level in 0..n {
                let mut row = vec![0u64; total_unknowns + 1];
                // sum_k (G[i,k] * D[k,j])[level]
                for k in 0..q {
                    let dkj = d.at(k, j);
                    for u in 0..=level {
                        let coeff = dkj.coeffs[level - u] % p;
                        let idx = unknown(i, k, u);
                        row[idx] = (row[idx] + coeff) % p;
                    }
                }
                // minus sum_k (A[i,k] * G[k,j])[level]
                for k in 0..f {
                    let aik = a.at(i, k);
                    for u in 0..=level {
                        let coeff = aik.coeffs[level - u] % p;
                        let idx = unknown(k, j, u);
                        row[idx] = (row[idx] + p - coeff) % p;
                    }
                }
                row[total_unknowns] = b.at(i, j).coeffs[level] % p;
                rows.push(row);
            }
        }
    }
    affine_system_consistent(rows, p)
}

/// Assembles the block-upper-triangular matrix [[A, B], [0, D]].
pub fn assemble_upper(a: &SeriesMatrix, b: &SeriesMatrix, d: &SeriesMatrix) -> SeriesMatrix {
    let f = a.rows;
    let q = d.rows;
    let n = f + q;
    let p = a.at(0, 0).p;
    let precision = a.at(0, 0).precision();
    SeriesMatrix::from_fn(p, precision, n, n, |i, j| {
        if i < f && j < f {
            a.at(i, j).clone()
        } else if i < f {
            b.at(i, j - f).clone()
        } else if j >= f {
            d.at(i - f, j - f).clone()
        } else {
            orbitduality::SeriesScalar::zero(p, precision)
        }
    })
}

/// Inverts a square truncated-series matrix via adjugate over determinant;
/// `None` when the determinant is not a unit.
pub fn invert_series_matrix(m: &SeriesMatrix) -> Option<SeriesMatrix> {
    let data = m.char_data();
    let det_inv = data.det.invert()?;
    Some(data.adjugate.scale(&det_inv))
}
