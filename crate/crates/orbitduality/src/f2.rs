//! Dense linear algebra over the two-element field, with vectors stored as
//! bitmasks (coordinate i = bit i, up to 128 coordinates).

/// Reduced echelon basis of the span of `rows`: one row per pivot, pivots
/// strictly increasing by bit position, each pivot bit cleared from every
/// other row. Canonical per subspace.
pub fn rref(rows: &[u128]) -> Vec<u128> {
    let mut basis: Vec<u128> = Vec::new();
    for &row in rows {
        let mut v = row;
        for &b in &basis {
            let pivot = b & b.wrapping_neg(); // lowest set bit
            if v & pivot != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            // Eliminate the new pivot from existing rows to keep the basis reduced.
            let pivot = v & v.wrapping_neg();
            for b in basis.iter_mut() {
                if *b & pivot != 0 {
                    *b ^= v;
                }
            }
            basis.push(v);
        }
    }
    basis.sort_unstable_by_key(|b| b & b.wrapping_neg());
    basis
}

/// Dimension of the span.
pub fn rank(rows: &[u128]) -> usize {
    rref(rows).len()
}

/// Whether `v` lies in the span of a reduced basis produced by [`rref`].
pub fn in_span(basis: &[u128], v: u128) -> bool {
    let mut v = v;
    for &b in basis {
        let pivot = b & b.wrapping_neg();
        if v & pivot != 0 {
            v ^= b;
        }
    }
    v == 0
}

/// Whether two generator lists span the same subspace.
pub fn same_span(a: &[u128], b: &[u128]) -> bool {
    rref(a) == rref(b)
}

/// Basis of `{x in F2^dim : parity(x & f) = 0 for every functional f}`.
pub fn kernel(functionals: &[u128], dim: usize) -> Vec<u128> {
    let mask: u128 = if dim == 128 { !0 } else { (1u128 << dim) - 1 };
    let mut rows: Vec<u128> = functionals.iter().map(|f| f & mask).collect();
    rows = rref(&rows);
    // Pivot positions of the functional matrix; the remaining coordinates are
    // free, and each yields one kernel basis vector.
    let pivots: Vec<usize> = rows
        .iter()
        .map(|b| (b & b.wrapping_neg()).trailing_zeros() as usize)
        .collect();
    let mut out = Vec::new();
    for free in 0..dim {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = 1u128 << free;
        for (row, &piv) in rows.iter().zip(&pivots) {
            if row & (1u128 << free) != 0 {
                v ^= 1u128 << piv;
            }
        }
        out.push(v);
    }
    debug_assert!(out
        .iter()
        .all(|&v| functionals.iter().all(|&f| ((v & f & mask).count_ones()).is_multiple_of(2))));
    out
}

/// Basis of the subspace of `span(gens)` on which every functional vanishes.
pub fn solve_in_span(gens: &[u128], functionals: &[u128]) -> Vec<u128> {
    let basis = rref(gens);
    let k = basis.len();
    if k == 0 {
        return Vec::new();
    }
    // Express each functional in the span coordinates: coordinate j of the
    // induced functional is its pairing with basis vector j.
    let induced: Vec<u128> = functionals
        .iter()
        .map(|&f| {
            let mut coords = 0u128;
            for (j, &b) in basis.iter().enumerate() {
                if (b & f).count_ones() % 2 == 1 {
                    coords |= 1u128 << j;
                }
            }
            coords
        })
        .collect();
    kernel(&induced, k)
        .into_iter()
        .map(|coords| {
            let mut v = 0u128;
            for (j, &b) in basis.iter().enumerate() {
                if coords & (1u128 << j) != 0 {
                    v ^= b;
                }
            }
            v
        })
        .collect()
}
