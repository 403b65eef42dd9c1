//! Generic characteristic data over the truncated series ring: sampling of
//! Eisenstein factor systems with the required sign symmetry, the assumption
//! report (Eisenstein shape, resultant orders, prefix windows, coefficient
//! order bounds), the direct-summand splitting criterion, degeneracy orders,
//! and the standard restriction-pairing models.

use crate::error::{Error, Result};
use crate::orbit::orbit_invariants;
use crate::partition::{OrbitType, Partition};
use crate::series::{SeriesMatrix, SeriesPoly, SeriesScalar};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// How a factor interacts with the sign involution of the variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaClass {
    /// Even degree: fixed by the involution.
    SelfDual,
    /// Odd degree: swapped with the factor at the stored index.
    PairedWith(usize),
}

/// A sampled system of Eisenstein factors with prescribed degrees and sign
/// symmetry, together with the expanded characteristic coefficients.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalCharData {
    pub orbit_type: OrbitType,
    pub partition: Partition,
    pub p: u64,
    pub precision: usize,
    /// Eisenstein factors (the type-B linear zero factor is not listed).
    pub factors: Vec<SeriesPoly>,
    /// Sign-involution class per factor, parallel to `factors`.
    pub sigma: Vec<SigmaClass>,
    /// Whether a plain linear factor with zero constant term multiplies the
    /// product (type B).
    pub has_linear_factor: bool,
    /// Degrees of all factors including the linear one for B.
    pub degree_partition: Partition,
    pub ambient_dim: usize,
    /// Coefficients a_1..a_dim, with a_i multiplying variable^(dim-i) in the
    /// expanded monic product.
    pub char_coeffs: Vec<SeriesScalar>,
    /// Half the order of a_{2 rank}, rounded down.
    pub delta: usize,
    /// Number of rejected draws before this one.
    pub resamples: u32,
}

impl LocalCharData {
    /// Unit parts of the factor constant terms (coefficient of t in the
    /// constant coefficient).
    pub fn unit_constants(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.coeffs[0].coeffs[1]).collect()
    }

    /// The expanded monic product as a polynomial.
    pub fn char_poly(&self) -> SeriesPoly {
        let mut coeffs = Vec::with_capacity(self.ambient_dim + 1);
        for i in (1..=self.ambient_dim).rev() {
            coeffs.push(self.char_coeffs[i - 1].clone());
        }
        coeffs.push(SeriesScalar::one(self.p, self.precision));
        SeriesPoly::new(coeffs)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Random series of order exactly one with prescribed unit part.
fn t_times_unit(rng: &mut ChaCha8Rng, p: u64, precision: usize, unit0: u64) -> SeriesScalar {
    let mut coeffs = vec![0u64; precision];
    coeffs[1] = unit0 % p;
    for c in coeffs.iter_mut().skip(2) {
        *c = rng.gen_range(0..p);
    }
    SeriesScalar::from_coeffs(p, coeffs)
}

const MAX_SAMPLE_ATTEMPTS: u32 = 400;

/// Samples Eisenstein factor data for a special partition.
///
/// Factor degrees follow the degree partition of the orbit: the partition
/// itself for type C; the blockwise dual entries for type B, with an extra
/// linear zero factor. Even-degree factors are fixed by the sign involution
/// (only even powers appear), odd-degree factors come in swapped pairs.
/// Draws that fail the assumption report are rejected and resampled.
pub fn sample_generic_char(
    d: &Partition,
    t: OrbitType,
    p: u64,
    seed: u64,
    precision: Option<usize>,
) -> Result<LocalCharData> {
    let inv = orbit_invariants(d, t)?; // rejects non-special input
    let degree_partition = inv.degree_partition.clone();
    let mut factor_degrees: Vec<u64> = degree_partition.parts().to_vec();
    let has_linear_factor = t == OrbitType::B;
    if has_linear_factor {
        // The final degree-1 entry is the linear zero factor, not an
        // Eisenstein factor.
        let popped = factor_degrees.pop();
        assert_eq!(popped, Some(1));
    }
    let k = factor_degrees.len() + if has_linear_factor { 1 } else { 0 };
    if !is_prime(p) || p.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
    }
    if p <= (4 * k * k) as u64 {
        return Err(Error::InvalidParameter(format!(
            "prime {p} too small for {k} factors (need p > {})",
            4 * k * k
        )));
    }
    let max_part = d.parts().first().copied().unwrap_or(1) as usize;
    let default_precision = (2 * max_part + 2).max(k + 2);
    let precision = precision.unwrap_or(default_precision);
    if precision < 2 * max_part {
        return Err(Error::InvalidParameter(format!(
            "precision {precision} below twice the largest part {max_part}"
        )));
    }
    let ambient_dim = d.total() as usize;

    for attempt in 0..MAX_SAMPLE_ATTEMPTS {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let data = sample_once(
            &mut rng,
            d,
            t,
            p,
            precision,
            &factor_degrees,
            has_linear_factor,
            &degree_partition,
            ambient_dim,
            attempt,
        );
        let report = assumption_check(&data);
        if report.pass() {
            return Ok(data);
        }
    }
    Err(Error::RetriesExhausted {
        attempts: MAX_SAMPLE_ATTEMPTS,
        context: format!("sampling generic characteristic data for {d} (type {t}, p={p})"),
    })
}

#[allow(clippy::too_many_arguments)]
fn sample_once(
    rng: &mut ChaCha8Rng,
    d: &Partition,
    t: OrbitType,
    p: u64,
    precision: usize,
    factor_degrees: &[u64],
    has_linear_factor: bool,
    degree_partition: &Partition,
    ambient_dim: usize,
    resamples: u32,
) -> LocalCharData {
    // Constant unit parts: distinct up to sign across all factors, nonzero.
    // Each sign class {x, p-x} is used at most once.
    let mut class_used = vec![false; ((p - 1) / 2 + 1) as usize];
    let mut draw_unit = |rng: &mut ChaCha8Rng| loop {
        let x = rng.gen_range(1..p);
        let class = x.min(p - x) as usize;
        if !class_used[class] {
            class_used[class] = true;
            return x;
        }
    };

    let mut factors: Vec<SeriesPoly> = Vec::new();
    let mut sigma: Vec<SigmaClass> = Vec::new();
    let mut i = 0usize;
    while i < factor_degrees.len() {
        let e = factor_degrees[i] as usize;
        if e.is_multiple_of(2) {
            // Self-dual: only even powers of the variable appear.
            let phi = draw_unit(rng);
            let mut coeffs = vec![SeriesScalar::zero(p, precision); e + 1];
            coeffs[0] = t_times_unit(rng, p, precision, phi);
            for j in (2..e).step_by(2) {
                let unit = rng.gen_range(1..p);
                coeffs[j] = t_times_unit(rng, p, precision, unit);
            }
            coeffs[e] = SeriesScalar::one(p, precision);
            factors.push(SeriesPoly::new(coeffs));
            sigma.push(SigmaClass::SelfDual);
            i += 1;
        } else {
            // Odd degrees come with even multiplicity; emit a swapped pair.
            assert_eq!(factor_degrees[i + 1] as usize, e, "odd degrees pair up");
            let phi = draw_unit(rng);
            let mut coeffs = vec![SeriesScalar::zero(p, precision); e + 1];
            coeffs[0] = t_times_unit(rng, p, precision, phi);
            for item in coeffs.iter_mut().take(e).skip(1) {
                let unit = rng.gen_range(1..p);
                *item = t_times_unit(rng, p, precision, unit);
            }
            coeffs[e] = SeriesScalar::one(p, precision);
            let f = SeriesPoly::new(coeffs);
            // Partner: negate the variable and the whole polynomial, which
            // is again monic in odd degree.
            let partner_coeffs: Vec<SeriesScalar> = f
                .negate_variable()
                .into_iter()
                .map(|c| c.neg())
                .collect();
            let f_tilde = SeriesPoly::new(partner_coeffs);
            let idx = factors.len();
            factors.push(f);
            factors.push(f_tilde);
            sigma.push(SigmaClass::PairedWith(idx + 1));
            sigma.push(SigmaClass::PairedWith(idx));
            i += 2;
        }
    }

    // Expand the product, including the linear zero factor for B.
    let mut product = SeriesPoly::new(vec![SeriesScalar::one(p, precision)]);
    for f in &factors {
        product = product.mul(f);
    }
    if has_linear_factor {
        product = product.mul(&SeriesPoly::variable(p, precision));
    }
    assert_eq!(product.degree(), ambient_dim);
    let char_coeffs: Vec<SeriesScalar> = (1..=ambient_dim)
        .map(|i| product.coeffs[ambient_dim - i].clone())
        .collect();
    let rank = match t {
        OrbitType::B => (d.total() - 1) / 2,
        OrbitType::C => d.total() / 2,
    } as usize;
    let delta = char_coeffs[2 * rank - 1].t_order() / 2;

    LocalCharData {
        orbit_type: t,
        partition: d.clone(),
        p,
        precision,
        factors,
        sigma,
        has_linear_factor,
        degree_partition: degree_partition.clone(),
        ambient_dim,
        char_coeffs,
        delta,
        resamples,
    }
}

/// Verdicts of the assumption checks on a factor system.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssumptionReport {
    /// Per factor: monic, constant term of order exactly one, all other
    /// coefficients of positive order.
    pub eisenstein_ok: Vec<bool>,
    /// Sign-symmetry bookkeeping matches the declared classes.
    pub sigma_ok: bool,
    /// Ordered pairs (i, j) with e_i >= e_j, i != j: the order of
    /// det f_i(companion(f_j)) must be exactly e_j. The type-B linear factor
    /// participates as an extra degree-1 entry.
    pub resultant_checks: Vec<ResultantCheck>,
    /// Running sums of (partition - degree partition), each in {0, 1}.
    pub prefix_windows: Vec<i64>,
    pub prefix_windows_ok: bool,
    /// Coefficient-order bounds per index.
    pub order_bounds: Vec<OrderBound>,
    pub resample_count: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultantCheck {
    pub i: usize,
    pub j: usize,
    pub e_i: usize,
    pub e_j: usize,
    pub order: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderBound {
    /// Coefficient index i (1-based).
    pub i: usize,
    /// Least j with the first j factor degrees summing to at least i.
    pub eta: usize,
    pub order: usize,
    pub bound_ok: bool,
    /// Exact agreement is expected at even indices on generic draws.
    pub equality_expected: bool,
    pub equality_ok: bool,
}

impl AssumptionReport {
    pub fn pass(&self) -> bool {
        self.eisenstein_ok.iter().all(|&b| b)
            && self.sigma_ok
            && self.resultant_checks.iter().all(|c| c.pass)
            && self.prefix_windows_ok
            && self
                .order_bounds
                .iter()
                .all(|b| b.bound_ok && (!b.equality_expected || b.equality_ok))
    }
}

fn is_eisenstein(f: &SeriesPoly) -> bool {
    let e = f.degree();
    if e == 0 {
        return false;
    }
    if f.coeffs[0].t_order() != 1 {
        return false;
    }
    f.coeffs[..e].iter().all(|c| c.t_order() >= 1)
}

/// Runs the assumption checks; failures are reported, not raised.
pub fn assumption_check(data: &LocalCharData) -> AssumptionReport {
    let p = data.p;
    let precision = data.precision;
    let eisenstein_ok: Vec<bool> = data.factors.iter().map(is_eisenstein).collect();

    let mut sigma_ok = data.sigma.len() == data.factors.len();
    for (idx, class) in data.sigma.iter().enumerate() {
        let f = &data.factors[idx];
        match *class {
            SigmaClass::SelfDual => {
                sigma_ok &= f.degree().is_multiple_of(2) && f.negate_variable() == f.coeffs;
            }
            SigmaClass::PairedWith(j) => {
                sigma_ok &= f.degree() % 2 == 1
                    && data.sigma.get(j) == Some(&SigmaClass::PairedWith(idx));
                if let Some(partner) = data.factors.get(j) {
                    let expected: Vec<SeriesScalar> =
                        f.negate_variable().into_iter().map(|c| c.neg()).collect();
                    sigma_ok &= partner.coeffs == expected;
                }
            }
        }
    }

    // Factor list for resultants: Eisenstein factors plus the linear zero
    // factor for B.
    let mut pair_factors: Vec<SeriesPoly> = data.factors.clone();
    if data.has_linear_factor {
        pair_factors.push(SeriesPoly::variable(p, precision));
    }
    let mut resultant_checks = Vec::new();
    for i in 0..pair_factors.len() {
        for j in 0..pair_factors.len() {
            if i == j {
                continue;
            }
            let (e_i, e_j) = (pair_factors[i].degree(), pair_factors[j].degree());
            if e_i < e_j {
                continue;
            }
            let evaluated = pair_factors[i].eval_matrix(&pair_factors[j].companion());
            let order = evaluated.det().t_order();
            resultant_checks.push(ResultantCheck {
                i,
                j,
                e_i,
                e_j,
                order,
                pass: order == e_j,
            });
        }
    }

    let d_parts = data.partition.parts();
    let e_parts = data.degree_partition.parts();
    let len = d_parts.len().max(e_parts.len());
    let mut prefix_windows = Vec::with_capacity(len);
    let mut acc = 0i64;
    for idx in 0..len {
        acc += d_parts.get(idx).copied().unwrap_or(0) as i64;
        acc -= e_parts.get(idx).copied().unwrap_or(0) as i64;
        prefix_windows.push(acc);
    }
    let prefix_windows_ok = prefix_windows.iter().all(|&w| w == 0 || w == 1);

    let mut order_bounds = Vec::with_capacity(data.ambient_dim);
    for i in 1..=data.ambient_dim {
        let mut acc = 0u64;
        let mut eta = e_parts.len();
        for (j, &e) in e_parts.iter().enumerate() {
            acc += e;
            if acc >= i as u64 {
                eta = j + 1;
                break;
            }
        }
        let order = data.char_coeffs[i - 1].t_order();
        let equality_expected = i % 2 == 0;
        order_bounds.push(OrderBound {
            i,
            eta,
            order,
            bound_ok: order >= eta,
            equality_expected,
            equality_ok: order == eta,
        });
    }

    AssumptionReport {
        eisenstein_ok,
        sigma_ok,
        resultant_checks,
        prefix_windows,
        prefix_windows_ok,
        order_bounds,
        resample_count: data.resamples,
    }
}

/// Decides whether the leading `f_size` coordinates span a direct summand
/// stable under the matrix, for a block-upper-triangular input.
///
/// With the matrix split as [[A, B], [0, D]] and `chi` the characteristic
/// polynomial of A, the test evaluates chi at the whole matrix, obtaining
/// [[0, M], [0, chi(D)]], and reports whether M * adjugate(chi(D)) has all
/// entries of order at least ord det chi(D).
pub fn splitting_criterion(theta: &SeriesMatrix, f_size: usize) -> Result<bool> {
    assert_eq!(theta.rows, theta.cols, "square matrix required");
    let n = theta.rows;
    assert!(f_size <= n);
    for i in f_size..n {
        for j in 0..f_size {
            if !theta.at(i, j).is_zero() {
                return Err(Error::InvalidParameter(
                    "matrix is not block-upper-triangular at the requested cut".into(),
                ));
            }
        }
    }
    if f_size == 0 || f_size == n {
        return Ok(true);
    }
    let a = theta.block(0, f_size, 0, f_size);
    let chi_a = SeriesPoly::new(a.char_data().coeffs);
    let evaluated = chi_a.eval_matrix(theta);
    // Cayley–Hamilton: the leading block vanishes.
    debug_assert!(evaluated.block(0, f_size, 0, f_size).is_zero());
    let m = evaluated.block(0, f_size, f_size, n);
    let q = evaluated.block(f_size, n, f_size, n);
    let q_char = q.char_data();
    let det_order = q_char.det.t_order();
    if det_order >= theta.precision {
        return Err(Error::SingularQuotient);
    }
    let numerator = m.mul(&q_char.adjugate);
    for i in 0..numerator.rows {
        for j in 0..numerator.cols {
            if numerator.at(i, j).t_order() < det_order {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Order of the determinant of a pairing matrix; the torsion length of its
/// cokernel.
pub fn degeneracy_order(gram: &SeriesMatrix, symmetric: bool) -> Result<usize> {
    assert_eq!(gram.rows, gram.cols, "square gram matrix required");
    if symmetric {
        for i in 0..gram.rows {
            for j in 0..i {
                if gram.at(i, j) != gram.at(j, i) {
                    return Err(Error::InvalidParameter(
                        "gram matrix is not symmetric".into(),
                    ));
                }
            }
        }
    }
    let order = gram.det().t_order();
    if order >= gram.precision {
        return Err(Error::FullyDegenerate);
    }
    Ok(order)
}

/// Coefficient of variable^(e-1) in variable^k reduced modulo `f`, for
/// k = 0..=2e-1: the residue functionals of the quotient algebra.
pub fn residue_functionals(f: &SeriesPoly) -> Vec<SeriesScalar> {
    let e = f.degree();
    let p = f.p();
    let precision = f.precision();
    // Track variable^k mod f as a coefficient vector.
    let mut current = vec![SeriesScalar::zero(p, precision); e];
    current[0] = SeriesScalar::one(p, precision);
    let mut out = Vec::with_capacity(2 * e);
    for _ in 0..2 * e {
        out.push(current[e - 1].clone());
        // Multiply by the variable and reduce.
        let top = current[e - 1].clone();
        for idx in (1..e).rev() {
            current[idx] = current[idx - 1].clone();
        }
        current[0] = SeriesScalar::zero(p, precision);
        for (idx, slot) in current.iter_mut().enumerate() {
            *slot = slot.sub(&top.mul(&f.coeffs[idx]));
        }
    }
    out
}

/// Restriction pairing of the quotient algebra of a self-dual even-degree
/// factor: entry (i, j) is (-1)^j times the residue functional at
/// variable^(i+j+1). Symmetric, and multiplication by the variable is
/// skew-adjoint for it; its determinant has order exactly one on generic
/// draws.
pub fn self_dual_gram(f: &SeriesPoly) -> SeriesMatrix {
    let e = f.degree();
    assert!(e.is_multiple_of(2) && e >= 2, "even-degree factor required");
    let fns = residue_functionals(f);
    SeriesMatrix::from_fn(f.p(), f.precision(), e, e, |i, j| {
        let v = fns[i + j + 1].clone();
        if j % 2 == 1 {
            v.neg()
        } else {
            v
        }
    })
}

/// Restriction pairing of a swapped pair of odd-degree factors: the two
/// quotient algebras pair against each other through the sign involution,
/// with no self-pairing. Unimodular (order-zero determinant) on generic
/// draws.
pub fn pair_gram(f: &SeriesPoly, f_tilde: &SeriesPoly) -> SeriesMatrix {
    let e = f.degree();
    assert!(e % 2 == 1, "odd-degree pair required");
    assert_eq!(f_tilde.degree(), e);
    let fns = residue_functionals(f);
    let p = f.p();
    let precision = f.precision();
    let h = SeriesMatrix::from_fn(p, precision, e, e, |i, j| {
        let v = fns[i + j].clone();
        if j % 2 == 1 {
            v.neg()
        } else {
            v
        }
    });
    SeriesMatrix::from_fn(p, precision, 2 * e, 2 * e, |i, j| {
        if i < e && j >= e {
            h.at(i, j - e).clone()
        } else if i >= e && j < e {
            h.at(j, i - e).clone()
        } else {
            SeriesScalar::zero(p, precision)
        }
    })
}
