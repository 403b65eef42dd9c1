mod common;

use common::{assemble_upper, invert_series_matrix, pt, section_search};
use orbitduality::{
    assumption_check, degeneracy_order, pair_gram, residue_functionals, sample_generic_char,
    self_dual_gram, splitting_criterion, Error, LocalCharData, OrbitType, Partition, SeriesMatrix,
    SeriesPoly, SeriesScalar, SigmaClass,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: u64 = 101;

fn scalar(coeffs: &[u64]) -> SeriesScalar {
    SeriesScalar::from_coeffs(P, coeffs.to_vec())
}

fn pad(coeffs: &[u64], precision: usize) -> SeriesScalar {
    let mut c = coeffs.to_vec();
    c.resize(precision, 0);
    SeriesScalar::from_coeffs(P, c)
}

/// Monic polynomial from low-to-high constant coefficients, e.g.
/// `poly(&[[a,t-part], ...])`; last implied coefficient is 1.
fn monic(coeffs: Vec<SeriesScalar>) -> SeriesPoly {
    let precision = coeffs[0].precision();
    let mut cs = coeffs;
    cs.push(SeriesScalar::one(P, precision));
    SeriesPoly::new(cs)
}

/// Hand-built factor system over the prescribed partition, with the expanded
/// characteristic coefficients recomputed from the factors.
fn hand_data(
    partition: &Partition,
    t: OrbitType,
    factors: Vec<SeriesPoly>,
    sigma: Vec<SigmaClass>,
) -> LocalCharData {
    let precision = factors[0].precision();
    let has_linear_factor = t == OrbitType::B;
    let ambient_dim = partition.total() as usize;
    let mut product = SeriesPoly::new(vec![SeriesScalar::one(P, precision)]);
    for f in &factors {
        product = product.mul(f);
    }
    if has_linear_factor {
        product = product.mul(&SeriesPoly::variable(P, precision));
    }
    assert_eq!(product.degree(), ambient_dim);
    let char_coeffs: Vec<SeriesScalar> = (1..=ambient_dim)
        .map(|i| product.coeffs[ambient_dim - i].clone())
        .collect();
    let rank = match t {
        OrbitType::B => (partition.total() - 1) / 2,
        OrbitType::C => partition.total() / 2,
    } as usize;
    let delta = char_coeffs[2 * rank - 1].t_order() / 2;
    let mut degree_partition: Vec<u64> = factors.iter().map(|f| f.degree() as u64).collect();
    if has_linear_factor {
        degree_partition.push(1);
    }
    LocalCharData {
        orbit_type: t,
        partition: partition.clone(),
        p: P,
        precision,
        factors,
        sigma,
        has_linear_factor,
        degree_partition: Partition::new(degree_partition),
        ambient_dim,
        char_coeffs,
        delta,
        resamples: 0,
    }
}

#[test]
fn sampling_produces_the_prescribed_factor_shapes() {
    let data = sample_generic_char(&pt(&[2, 2]), OrbitType::C, P, 7, None).unwrap();
    assert_eq!(data.factors.len(), 2);
    assert!(data.factors.iter().all(|f| f.degree() == 2));
    assert!(!data.has_linear_factor);
    assert_eq!(data.sigma, vec![SigmaClass::SelfDual, SigmaClass::SelfDual]);
    let constants = data.unit_constants();
    assert_ne!(constants[0], constants[1], "leading t-coefficients must differ");
    assert_ne!(constants[0], P - constants[1], "even up to sign");
    assert!(assumption_check(&data).pass());

    let data = sample_generic_char(&pt(&[3, 1, 1]), OrbitType::B, P, 7, None).unwrap();
    assert_eq!(data.degree_partition.parts(), &[2, 2, 1]);
    assert_eq!(data.factors.len(), 2, "the linear zero factor is kept separate");
    assert!(data.factors.iter().all(|f| f.degree() == 2));
    assert!(data.has_linear_factor);
    assert!(assumption_check(&data).pass());

    // Odd-degree factors appear in swapped pairs.
    let data = sample_generic_char(&pt(&[3, 3]), OrbitType::C, P, 7, None).unwrap();
    assert_eq!(data.factors.len(), 2);
    assert_eq!(data.sigma, vec![SigmaClass::PairedWith(1), SigmaClass::PairedWith(0)]);
    let f = &data.factors[0];
    let f_tilde = &data.factors[1];
    let negated: Vec<SeriesScalar> = f.negate_variable().into_iter().map(|c| c.neg()).collect();
    assert_eq!(&SeriesPoly::new(negated), f_tilde);
    assert!(assumption_check(&data).pass());
}

#[test]
fn sampling_is_deterministic_in_the_seed() {
    let a = sample_generic_char(&pt(&[3, 2, 2, 1, 1]), OrbitType::B, P, 11, None).unwrap();
    let b = sample_generic_char(&pt(&[3, 2, 2, 1, 1]), OrbitType::B, P, 11, None).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    let c = sample_generic_char(&pt(&[3, 2, 2, 1, 1]), OrbitType::B, P, 12, None).unwrap();
    assert_ne!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&c).unwrap()
    );
}

#[test]
fn sampling_rejects_bad_parameters() {
    // Too-small prime for the factor count.
    assert!(matches!(
        sample_generic_char(&pt(&[2, 2]), OrbitType::C, 13, 7, None),
        Err(Error::InvalidParameter(_))
    ));
    // Non-prime modulus.
    assert!(matches!(
        sample_generic_char(&pt(&[2, 2]), OrbitType::C, 91, 7, None),
        Err(Error::InvalidParameter(_))
    ));
    // Precision below twice the largest part.
    assert!(matches!(
        sample_generic_char(&pt(&[2, 2]), OrbitType::C, P, 7, Some(3)),
        Err(Error::InvalidParameter(_))
    ));
    // Non-special input.
    assert!(matches!(
        sample_generic_char(&pt(&[2, 1, 1]), OrbitType::C, P, 7, None),
        Err(Error::NotSpecial(_))
    ));
}

/// Smallest prime from a fixed ladder large enough for `k` factors.
fn prime_for_factor_count(k: usize) -> u64 {
    let need = (4 * k * k) as u64;
    [101u64, 211, 401, 1009, 2003]
        .into_iter()
        .find(|&p| p > need)
        .expect("factor count out of range for the prime ladder")
}

#[test]
fn assumption_check_passes_on_sampled_sweeps() {
    for (t, totals) in [
        (OrbitType::B, [3u64, 5, 7, 9]),
        (OrbitType::C, [2u64, 4, 6, 8]),
    ] {
        for total in totals {
            for d in orbitduality::enumerate_partitions(
                t,
                total,
                orbitduality::EnumerateFilter::SpecialOnly,
            )
            .unwrap()
            {
                let k = orbitduality::orbit_invariants(&d, t)
                    .unwrap()
                    .degree_partition
                    .parts()
                    .len();
                let p = prime_for_factor_count(k);
                for seed in [1u64, 2, 3] {
                    let data = sample_generic_char(&d, t, p, seed, None).unwrap();
                    let report = assumption_check(&data);
                    assert!(report.pass(), "assumption report fails on {d} seed {seed}");
                    assert!(report.prefix_windows.iter().all(|&w| w == 0 || w == 1));
                }
            }
        }
    }
}

#[test]
fn eisenstein_detection() {
    let n = 6;
    // x^2 + t: constant term has t-order exactly 1.
    let good = hand_data(
        &pt(&[2]),
        OrbitType::C,
        vec![monic(vec![pad(&[0, 1], n), SeriesScalar::zero(P, n)])],
        vec![SigmaClass::SelfDual],
    );
    let report = assumption_check(&good);
    assert_eq!(report.eisenstein_ok, vec![true]);
    assert!(report.pass());

    // x^2 + t^2: constant term order 2, not Eisenstein.
    let bad = hand_data(
        &pt(&[2]),
        OrbitType::C,
        vec![monic(vec![pad(&[0, 0, 1], n), SeriesScalar::zero(P, n)])],
        vec![SigmaClass::SelfDual],
    );
    let report = assumption_check(&bad);
    assert_eq!(report.eisenstein_ok, vec![false]);
    assert!(!report.pass());

    // x^2 + x + t: a unit interior coefficient also breaks the shape.
    let unit_mid = hand_data(
        &pt(&[2]),
        OrbitType::C,
        vec![monic(vec![pad(&[0, 1], n), SeriesScalar::one(P, n)])],
        vec![SigmaClass::SelfDual],
    );
    let report = assumption_check(&unit_mid);
    assert_eq!(report.eisenstein_ok, vec![false]);
}

#[test]
fn resultant_orders_on_a_hand_pair() {
    // f1 = x^2 + a t, f2 = x^2 + b t with a != b: the resultant order is
    // exactly 2 in both directions.
    let n = 6;
    let a = 5;
    let b = 9;
    let f1 = monic(vec![pad(&[0, a], n), SeriesScalar::zero(P, n)]);
    let f2 = monic(vec![pad(&[0, b], n), SeriesScalar::zero(P, n)]);
    let data = hand_data(
        &pt(&[2, 2]),
        OrbitType::C,
        vec![f1.clone(), f2.clone()],
        vec![SigmaClass::SelfDual, SigmaClass::SelfDual],
    );
    let report = assumption_check(&data);
    assert!(report.pass());
    assert_eq!(report.resultant_checks.len(), 2);
    for check in &report.resultant_checks {
        assert_eq!(check.e_i, 2);
        assert_eq!(check.e_j, 2);
        assert_eq!(check.order, 2);
        assert!(check.pass);
    }

    // Direct confirmation: det(f1 evaluated at the companion of f2) is
    // ((a - b) t)^2 up to sign.
    let evaluated = f1.eval_matrix(&f2.companion());
    let det = evaluated.det();
    assert_eq!(det.t_order(), 2);
    let diff = (a + P - b) % P;
    assert_eq!(det.coeffs[2], diff * diff % P);
}

#[test]
fn resultant_checks_include_the_linear_factor() {
    let data = sample_generic_char(&pt(&[3, 1, 1]), OrbitType::B, P, 3, None).unwrap();
    let report = assumption_check(&data);
    // Ordered pairs with e_i >= e_j over {2, 2, 1}: (2,2) twice and each
    // quadratic against the linear factor.
    assert_eq!(report.resultant_checks.len(), 4);
    assert!(report.resultant_checks.iter().all(|c| c.pass));
    let orders: Vec<usize> = report.resultant_checks.iter().map(|c| c.order).collect();
    assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 2);
    assert_eq!(orders.iter().filter(|&&o| o == 1).count(), 2);
}

#[test]
fn order_bound_equalities_sit_at_even_indices() {
    let data = sample_generic_char(&pt(&[4, 2]), OrbitType::C, P, 5, None).unwrap();
    let report = assumption_check(&data);
    assert!(report.pass());
    for bound in &report.order_bounds {
        assert!(bound.bound_ok);
        if bound.i % 2 == 0 {
            assert!(bound.equality_expected);
            assert!(bound.equality_ok, "no equality at even index {}", bound.i);
            assert_eq!(bound.order, bound.eta);
        }
    }
}

// ---------------------------------------------------------------------------
// Splitting criterion.
// ---------------------------------------------------------------------------

fn quadratic(constant_unit: u64, n: usize) -> SeriesPoly {
    monic(vec![pad(&[0, constant_unit], n), SeriesScalar::zero(P, n)])
}

#[test]
fn splitting_known_answers() {
    let n = 6;
    let f1 = quadratic(5, n);
    let f2 = quadratic(9, n);
    let a = f1.companion();
    let d = f2.companion();

    // Block diagonal splits.
    let zero_b = SeriesMatrix::zero(P, n, 2, 2);
    let theta = assemble_upper(&a, &zero_b, &d);
    assert!(splitting_criterion(&theta, 2).unwrap());

    // Identity corner does not split: the correction would need a pole.
    let id_b = SeriesMatrix::identity(P, n, 2);
    let theta = assemble_upper(&a, &id_b, &d);
    assert!(!splitting_criterion(&theta, 2).unwrap());

    // A corner divisible by t splits again.
    let t_b = SeriesMatrix::from_fn(P, n, 2, 2, |i, j| {
        if i == j {
            pad(&[0, 1], n)
        } else {
            SeriesScalar::zero(P, n)
        }
    });
    let theta = assemble_upper(&a, &t_b, &d);
    assert!(splitting_criterion(&theta, 2).unwrap());

    // All three agree with the brute-force section search.
    assert!(section_search(&a, &zero_b, &d));
    assert!(!section_search(&a, &id_b, &d));
    assert!(section_search(&a, &t_b, &d));
}

#[test]
fn splitting_trivial_cuts_and_shape_validation() {
    let n = 6;
    let f1 = quadratic(5, n);
    let f2 = quadratic(9, n);
    let theta = assemble_upper(&f1.companion(), &SeriesMatrix::zero(P, n, 2, 2), &f2.companion());
    assert!(splitting_criterion(&theta, 0).unwrap());
    assert!(splitting_criterion(&theta, 4).unwrap());

    // A nonzero lower-left block is rejected.
    let full = f1.mul(&f2).companion();
    assert!(matches!(
        splitting_criterion(&full, 2),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn splitting_duplicate_factor_is_singular() {
    let n = 6;
    let f = quadratic(5, n);
    let theta = assemble_upper(&f.companion(), &SeriesMatrix::identity(P, n, 2), &f.companion());
    assert!(matches!(
        splitting_criterion(&theta, 2),
        Err(Error::SingularQuotient)
    ));
}

/// The cyclic module on the product of two Eisenstein factors, written in a
/// basis adapted to the submodule generated by the second factor: block
/// upper-triangular with companion diagonal blocks and a single unit corner
/// entry. Never splits (the module is cyclic, a true direct sum is not).
fn cyclic_witness(f1: &SeriesPoly, f2: &SeriesPoly) -> SeriesMatrix {
    let n = f1.precision();
    let e1 = f1.degree();
    let e2 = f2.degree();
    let mut b = SeriesMatrix::zero(P, n, e1, e2);
    *b.at_mut(0, e2 - 1) = SeriesScalar::one(P, n);
    assemble_upper(&f1.companion(), &b, &f2.companion())
}

#[test]
fn splitting_rejects_the_cyclic_module_witness() {
    let n = 8;
    let f1 = quadratic(5, n);
    let f2 = quadratic(9, n);
    let theta = cyclic_witness(&f1, &f2);
    assert!(!splitting_criterion(&theta, 2).unwrap());
    // The brute-force search agrees.
    let b = theta.block(0, 2, 2, 4);
    assert!(!section_search(&f1.companion(), &b, &f2.companion()));
}

fn random_scalar(rng: &mut ChaCha8Rng, n: usize) -> SeriesScalar {
    SeriesScalar::from_coeffs(P, (0..n).map(|_| rng.gen_range(0..P)).collect())
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, n: usize) -> SeriesMatrix {
    SeriesMatrix::from_fn(P, n, rows, cols, |_, _| random_scalar(rng, n))
}

/// Random unit upper-triangular matrix: invertible, and it preserves the
/// leading-coordinate flag, so conjugating by it keeps the block shape.
fn random_flag_automorphism(rng: &mut ChaCha8Rng, size: usize, n: usize) -> SeriesMatrix {
    SeriesMatrix::from_fn(P, n, size, size, |i, j| {
        if i == j {
            SeriesScalar::one(P, n)
        } else if i < j {
            random_scalar(rng, n)
        } else {
            SeriesScalar::zero(P, n)
        }
    })
}

#[test]
fn splitting_agrees_with_section_search_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let n = 8;
    let mut split_seen = 0;
    let mut nonsplit_seen = 0;
    for _ in 0..120 {
        let a_unit = rng.gen_range(1..P);
        let mut d_unit = rng.gen_range(1..P);
        if d_unit == a_unit {
            d_unit = (d_unit % (P - 1)) + 1;
            if d_unit == a_unit {
                d_unit = (d_unit % (P - 1)) + 1;
            }
        }
        let f1 = quadratic(a_unit, n);
        let f2 = quadratic(d_unit, n);
        let a = f1.companion();
        let d = f2.companion();
        // Random corners weighted toward interesting t-orders.
        let shift = rng.gen_range(0..3usize);
        let b = {
            let raw = random_matrix(&mut rng, 2, 2, n);
            SeriesMatrix::from_fn(P, n, 2, 2, |i, j| raw.at(i, j).shift_up(shift))
        };
        let theta = assemble_upper(&a, &b, &d);
        let by_criterion = splitting_criterion(&theta, 2).unwrap();
        let by_search = section_search(&a, &b, &d);
        assert_eq!(by_criterion, by_search, "criterion and search disagree");
        if by_criterion {
            split_seen += 1;
        } else {
            nonsplit_seen += 1;
        }
    }
    assert!(split_seen > 0, "the sweep never saw a split instance");
    assert!(nonsplit_seen > 0, "the sweep never saw a non-split instance");
}

#[test]
fn splitting_is_invariant_under_flag_preserving_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    let n = 8;
    for round in 0..40 {
        let f1 = quadratic(rng.gen_range(1..P), n);
        let f2 = quadratic(rng.gen_range(1..P), n);
        if f1.coeffs[0] == f2.coeffs[0] {
            continue;
        }
        let theta = if round % 2 == 0 {
            let b = random_matrix(&mut rng, 2, 2, n);
            assemble_upper(&f1.companion(), &b, &f2.companion())
        } else {
            cyclic_witness(&f1, &f2)
        };
        let before = splitting_criterion(&theta, 2).unwrap();
        let u = random_flag_automorphism(&mut rng, 4, n);
        let u_inv = invert_series_matrix(&u).expect("unit triangular is invertible");
        let conjugated = u.mul(&theta).mul(&u_inv);
        let after = splitting_criterion(&conjugated, 2).unwrap();
        assert_eq!(before, after, "conjugation changed the verdict");
    }
}

// ---------------------------------------------------------------------------
// Degeneracy orders and residue pairings.
// ---------------------------------------------------------------------------

#[test]
fn degeneracy_order_known_values() {
    let n = 6;
    assert_eq!(degeneracy_order(&SeriesMatrix::identity(P, n, 3), true).unwrap(), 0);
    let mut diag = SeriesMatrix::identity(P, n, 2);
    *diag.at_mut(1, 1) = pad(&[0, 1], n);
    assert_eq!(degeneracy_order(&diag, true).unwrap(), 1);
    assert!(matches!(
        degeneracy_order(&SeriesMatrix::zero(P, n, 2, 2), true).unwrap_err(),
        Error::FullyDegenerate
    ));
}

#[test]
fn degeneracy_order_is_additive_on_orthogonal_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let n = 8;
    for _ in 0..30 {
        let k1 = rng.gen_range(1..3usize);
        let k2 = rng.gen_range(1..3usize);
        let make = |rng: &mut ChaCha8Rng, size: usize| {
            SeriesMatrix::from_fn(P, n, size, size, |i, j| {
                if i == j {
                    let unit = rng.gen_range(1..P);
                    let order = rng.gen_range(0..3usize);
                    SeriesScalar::constant(P, unit, n).shift_up(order)
                } else {
                    SeriesScalar::zero(P, n)
                }
            })
        };
        let g1 = make(&mut rng, k1);
        let g2 = make(&mut rng, k2);
        let total = SeriesMatrix::from_fn(P, n, k1 + k2, k1 + k2, |i, j| {
            if i < k1 && j < k1 {
                g1.at(i, j).clone()
            } else if i >= k1 && j >= k1 {
                g2.at(i - k1, j - k1).clone()
            } else {
                SeriesScalar::zero(P, n)
            }
        });
        let got = degeneracy_order(&total, true).unwrap();
        let want = degeneracy_order(&g1, true).unwrap() + degeneracy_order(&g2, true).unwrap();
        assert_eq!(got, want);
    }
}

#[test]
fn residue_functionals_shape() {
    let n = 8;
    let f = quadratic(5, n);
    let fns = residue_functionals(&f);
    // One functional per power x^k, k = 0..2e-1.
    assert_eq!(fns.len(), 4);
    // k = 0: x^0 = 1 has no x^(e-1) component; k = 1 hits it exactly.
    assert!(fns[0].is_zero());
    assert_eq!(fns[1], SeriesScalar::one(P, n));
    // x^2 = -5t mod f, no linear component; x^3 = -5t x.
    assert!(fns[2].is_zero());
    assert_eq!(fns[3], pad(&[0, P - 5], n));
}

#[test]
fn self_dual_gram_is_symmetric_with_unit_torsion() {
    for (partition, seeds) in [(vec![4u64], vec![1u64, 2, 3]), (vec![2, 2], vec![1, 2, 3])] {
        for seed in seeds {
            let data = sample_generic_char(&pt(&partition), OrbitType::C, P, seed, None).unwrap();
            for (f, class) in data.factors.iter().zip(&data.sigma) {
                if *class != SigmaClass::SelfDual {
                    continue;
                }
                let gram = self_dual_gram(f);
                assert_eq!(gram.rows, f.degree());
                for i in 0..gram.rows {
                    for j in 0..gram.cols {
                        assert_eq!(gram.at(i, j), gram.at(j, i), "gram not symmetric");
                    }
                }
                assert_eq!(
                    degeneracy_order(&gram, true).unwrap(),
                    1,
                    "restriction pairing of an even factor has torsion length one"
                );
            }
        }
    }
}

#[test]
fn paired_gram_blocks_are_nondegenerate() {
    for seed in [1u64, 2, 3] {
        let data = sample_generic_char(&pt(&[3, 3]), OrbitType::C, P, seed, None).unwrap();
        let f = &data.factors[0];
        let f_tilde = &data.factors[1];
        // Swapped odd pairs pair against each other with no self-pairing:
        // [[0, H], [H^T, 0]], unimodular.
        let gram = pair_gram(f, f_tilde);
        let e = f.degree();
        assert_eq!((gram.rows, gram.cols), (2 * e, 2 * e));
        for i in 0..e {
            for j in 0..e {
                assert!(gram.at(i, j).is_zero(), "self-pairing block must vanish");
                assert!(gram.at(e + i, e + j).is_zero());
            }
        }
        assert_eq!(degeneracy_order(&gram, true).unwrap(), 0);
    }
}

#[test]
fn scalar_precision_guard() {
    let s = scalar(&[0, 0, 0]);
    assert!(matches!(
        orbitduality::series::order_or_precision_loss(&s, "zero scalar"),
        Err(Error::PrecisionLoss(_))
    ));
    let s = scalar(&[0, 3, 0]);
    assert_eq!(
        orbitduality::series::order_or_precision_loss(&s, "t times unit").unwrap(),
        1
    );
}
