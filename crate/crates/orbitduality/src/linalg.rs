//! Dense row-reduction linear algebra over any [`Field`], for the small
//! ambient dimensions used by the residue-model enumeration.

use crate::field::Field;

pub type Vector<F> = Vec<<F as Field>::Elem>;

/// Reduced row-echelon basis of the span of `rows`. Pivot columns strictly
/// increase, pivots are 1, and pivot columns are cleared elsewhere; the
/// result is canonical for the subspace.
pub fn rref<F: Field>(f: &F, rows: &[Vector<F>]) -> Vec<Vector<F>> {
    let mut basis: Vec<Vector<F>> = Vec::new();
    for row in rows {
        let mut v = row.clone();
        reduce_against::<F>(f, &mut v, &basis);
        if let Some(p) = leading_index::<F>(f, &v) {
            let scale = f.inv(v[p]).expect("leading entry is nonzero");
            for x in v.iter_mut() {
                *x = f.mul(*x, scale);
            }
            for b in basis.iter_mut() {
                let c = b[p];
                if !f.is_zero(c) {
                    for (bx, vx) in b.iter_mut().zip(&v) {
                        *bx = f.sub(*bx, f.mul(c, *vx));
                    }
                }
            }
            basis.push(v);
        }
    }
    basis.sort_by_key(|b| leading_index::<F>(f, b).expect("basis rows are nonzero"));
    basis
}

/// First nonzero coordinate, if any.
pub fn leading_index<F: Field>(f: &F, v: &[F::Elem]) -> Option<usize> {
    v.iter().position(|&x| !f.is_zero(x))
}

/// Reduces `v` against an RREF basis in place.
pub fn reduce_against<F: Field>(f: &F, v: &mut Vector<F>, basis: &[Vector<F>]) {
    for b in basis {
        let p = leading_index::<F>(f, b).expect("basis rows are nonzero");
        let c = v[p];
        if !f.is_zero(c) {
            for (vx, bx) in v.iter_mut().zip(b) {
                *vx = f.sub(*vx, f.mul(c, *bx));
            }
        }
    }
}

pub fn rank<F: Field>(f: &F, rows: &[Vector<F>]) -> usize {
    rref(f, rows).len()
}

pub fn in_span<F: Field>(f: &F, basis: &[Vector<F>], v: &[F::Elem]) -> bool {
    let mut v = v.to_vec();
    reduce_against::<F>(f, &mut v, basis);
    leading_index::<F>(f, &v).is_none()
}

pub fn same_span<F: Field>(f: &F, a: &[Vector<F>], b: &[Vector<F>]) -> bool {
    rref(f, a) == rref(f, b)
}

/// Basis of the nullspace `{x : A x = 0}` for the matrix with the given rows.
pub fn kernel<F: Field>(f: &F, rows: &[Vector<F>], dim: usize) -> Vec<Vector<F>> {
    let reduced = rref(f, rows);
    let pivots: Vec<usize> = reduced
        .iter()
        .map(|r| leading_index::<F>(f, r).expect("nonzero"))
        .collect();
    let mut out = Vec::new();
    for free in 0..dim {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![f.zero(); dim];
        v[free] = f.one();
        for (r, &p) in reduced.iter().zip(&pivots) {
            v[p] = f.neg(r[free]);
        }
        out.push(v);
    }
    out
}

/// One solution of `A x = b`, if the system is consistent.
pub fn solve<F: Field>(f: &F, rows: &[Vector<F>], rhs: &[F::Elem]) -> Option<Vector<F>> {
    let dim = rows.first().map(|r| r.len()).unwrap_or(0);
    if rows.is_empty() {
        return if rhs.iter().all(|&x| f.is_zero(x)) {
            Some(Vec::new())
        } else {
            None
        };
    }
    // Row-reduce the augmented matrix.
    let augmented: Vec<Vector<F>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut row = r.clone();
            row.push(b);
            row
        })
        .collect();
    let reduced = rref(f, &augmented);
    let mut x = vec![f.zero(); dim];
    for r in reduced.iter().rev() {
        let p = leading_index::<F>(f, r).expect("nonzero");
        if p == dim {
            return None; // 0 = 1 row
        }
        let mut val = r[dim];
        for j in p + 1..dim {
            val = f.sub(val, f.mul(r[j], x[j]));
        }
        x[p] = val; // pivot coefficient is 1
    }
    Some(x)
}

/// Basis of the intersection of two subspaces of `F^dim`.
pub fn intersect<F: Field>(
    f: &F,
    a: &[Vector<F>],
    b: &[Vector<F>],
    dim: usize,
) -> Vec<Vector<F>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Solve alpha . a - beta . b = 0 columnwise: unknowns (alpha, beta).
    let cols = dim;
    let unknowns = a.len() + b.len();
    let mut rows: Vec<Vector<F>> = Vec::with_capacity(cols);
    for c in 0..cols {
        let mut row = Vec::with_capacity(unknowns);
        for v in a {
            row.push(v[c]);
        }
        for v in b {
            row.push(f.neg(v[c]));
        }
        rows.push(row);
    }
    let null = kernel(f, &rows, unknowns);
    let combos: Vec<Vector<F>> = null
        .iter()
        .map(|coef| {
            let mut v = vec![f.zero(); dim];
            for (i, basis_vec) in a.iter().enumerate() {
                let c = coef[i];
                if !f.is_zero(c) {
                    for (vx, bx) in v.iter_mut().zip(basis_vec) {
                        *vx = f.add(*vx, f.mul(c, *bx));
                    }
                }
            }
            v
        })
        .collect();
    rref(f, &combos)
}

/// Basis of the sum of two subspaces.
pub fn span_sum<F: Field>(f: &F, a: &[Vector<F>], b: &[Vector<F>]) -> Vec<Vector<F>> {
    let mut all: Vec<Vector<F>> = a.to_vec();
    all.extend_from_slice(b);
    rref(f, &all)
}

/// Image of a subspace under the coordinate projection that keeps the listed
/// coordinates and zeroes the rest.
pub fn project_coords<F: Field>(f: &F, basis: &[Vector<F>], keep: &[bool]) -> Vec<Vector<F>> {
    let projected: Vec<Vector<F>> = basis
        .iter()
        .map(|v| {
            v.iter()
                .zip(keep)
                .map(|(&x, &k)| if k { x } else { f.zero() })
                .collect()
        })
        .collect();
    rref(f, &projected)
}
