//! Verification sweeps behind `verify`: each suite replays one family of
//! library invariants over a bounded enumeration and collects per-instance
//! diagnostics into a deterministic report.

use std::collections::BTreeSet;
use std::time::Instant;

use clap::ValueEnum;
use orbitduality::{
    assumption_check, component_groups, count_check, dimension_report, enumerate_partitions,
    enumerate_polarizations, eta_sequence, hitchin_instance, is_special, orbit_dimension,
    orbit_invariants, sample_generic_char, seesaw_check, splitting_criterion, springer_dual,
    EnumerateFilter, Error, OrbitType, Partition, SeriesMatrix, SeriesPoly, SeriesScalar,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Duality is an involutive, dimension-preserving bijection of specials.
    Duality,
    /// Spectral-weight profiles single out special dual pairs.
    Eta,
    /// Half-dimension and closed-form ramification-sum identities.
    Dims,
    /// Polarization degrees of dual parabolic types multiply to 2^c.
    Seesaw,
    /// Component-group quotient orders multiply to 2^c.
    Groups,
    /// Structural and brute-force fixed-line counts match 2^(beta-c).
    Isotropic,
    /// Two-torsion subspaces of dual pairs annihilate each other.
    Weil,
    /// Sampled characteristic systems pass the formal-local checks.
    Local,
    /// Every suite above in order.
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::Eta => "eta",
            Suite::Dims => "dims",
            Suite::Seesaw => "seesaw",
            Suite::Groups => "groups",
            Suite::Isotropic => "isotropic",
            Suite::Weil => "weil",
            Suite::Local => "local",
            Suite::All => "all",
        }
    }
}

/// One failed instance: what ran, what was expected, what came out.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FailureDiagnostic {
    pub input: String,
    pub expected: String,
    pub got: String,
}

/// Deterministic summary of one sweep; wall time is measured but excluded
/// from serialization so identical runs produce byte-identical reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub max_n: u64,
    pub genus: Vec<u64>,
    pub prime: u64,
    pub seed: u64,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<FailureDiagnostic>,
    pub seeds_used: Vec<u64>,
    pub primes_used: Vec<u64>,
    #[serde(skip)]
    pub wall_seconds: f64,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Default)]
struct Sweep {
    instances: usize,
    failed_instances: usize,
    failures: Vec<FailureDiagnostic>,
    seeds_used: BTreeSet<u64>,
    primes_used: BTreeSet<u64>,
}

impl Sweep {
    /// Records one instance whose checks are all folded into `ok`.
    fn instance(
        &mut self,
        ok: bool,
        input: impl FnOnce() -> String,
        expected: impl FnOnce() -> String,
        got: impl FnOnce() -> String,
    ) {
        self.instances += 1;
        if !ok {
            self.failed_instances += 1;
            self.failures.push(FailureDiagnostic {
                input: input(),
                expected: expected(),
                got: got(),
            });
        }
    }
}

fn specials(t: OrbitType, total: u64) -> Vec<Partition> {
    enumerate_partitions(t, total, EnumerateFilter::SpecialOnly).expect("enumeration")
}

fn members(t: OrbitType, total: u64) -> Vec<Partition> {
    enumerate_partitions(t, total, EnumerateFilter::All).expect("enumeration")
}

/// Runs the named sweep (or all of them) and assembles the report.
pub fn run_verify(
    suite: Suite,
    max_n: u64,
    genus: &[u64],
    prime: u64,
    seed: u64,
) -> VerificationReport {
    let started = Instant::now();
    let mut sweep = Sweep::default();
    let singles: Vec<Suite> = match suite {
        Suite::All => vec![
            Suite::Duality,
            Suite::Eta,
            Suite::Dims,
            Suite::Seesaw,
            Suite::Groups,
            Suite::Isotropic,
            Suite::Weil,
            Suite::Local,
        ],
        single => vec![single],
    };
    let label_parts = suite == Suite::All;
    for part in singles {
        let before = sweep.failures.len();
        match part {
            Suite::Duality => sweep_duality(&mut sweep, max_n),
            Suite::Eta => sweep_eta(&mut sweep, max_n),
            Suite::Dims => sweep_dims(&mut sweep, max_n, genus),
            Suite::Seesaw => sweep_seesaw(&mut sweep, max_n),
            Suite::Groups => sweep_groups(&mut sweep, max_n),
            Suite::Isotropic => sweep_isotropic(&mut sweep, max_n, prime, seed),
            Suite::Weil => sweep_weil(&mut sweep, max_n, genus),
            Suite::Local => sweep_local(&mut sweep, max_n, prime, seed),
            Suite::All => unreachable!("the combined suite expands to singles"),
        }
        if label_parts {
            for failure in &mut sweep.failures[before..] {
                failure.input = format!("{}: {}", part.name(), failure.input);
            }
        }
    }
    VerificationReport {
        suite: suite.name().to_string(),
        max_n,
        genus: genus.to_vec(),
        prime,
        seed,
        instances: sweep.instances,
        passed: sweep.instances - sweep.failed_instances,
        failed: sweep.failed_instances,
        failures: sweep.failures,
        seeds_used: sweep.seeds_used.into_iter().collect(),
        primes_used: sweep.primes_used.into_iter().collect(),
        wall_seconds: started.elapsed().as_secs_f64(),
    }
}

/// Bijection, involution, and orbit-dimension preservation of the duality
/// map on the special sets of every rank through `max_n`.
fn sweep_duality(sweep: &mut Sweep, max_n: u64) {
    for n in 1..=max_n {
        let specials_b = specials(OrbitType::B, 2 * n + 1);
        let specials_c = specials(OrbitType::C, 2 * n);
        sweep.instance(
            specials_b.len() == specials_c.len(),
            || format!("rank {n} special sets"),
            || "equal cardinalities".to_string(),
            || format!("{} vs {}", specials_b.len(), specials_c.len()),
        );
        let set_b: BTreeSet<&Partition> = specials_b.iter().collect();
        let set_c: BTreeSet<&Partition> = specials_c.iter().collect();
        let mut image = BTreeSet::new();
        for (t, set_there, pool) in [
            (OrbitType::C, &set_b, &specials_c),
            (OrbitType::B, &set_c, &specials_b),
        ] {
            for d in pool.iter() {
                let there = springer_dual(d, t);
                let ok = match &there {
                    Ok(dual) => {
                        let back = springer_dual(dual, t.flip());
                        set_there.contains(dual)
                            && back.as_ref() == Ok(d)
                            && orbit_dimension(d, t) == orbit_dimension(dual, t.flip())
                    }
                    Err(_) => false,
                };
                sweep.instance(
                    ok,
                    || format!("{t} {d}"),
                    || "special dual, inverse roundtrip, equal orbit dimensions".to_string(),
                    || match &there {
                        Ok(dual) => format!("dual {dual}"),
                        Err(e) => format!("error: {e}"),
                    },
                );
                if t == OrbitType::C {
                    if let Ok(dual) = there {
                        image.insert(dual);
                    }
                }
            }
        }
        sweep.instance(
            image.len() == specials_c.len(),
            || format!("rank {n} duality image"),
            || format!("{} distinct duals", specials_c.len()),
            || format!("{} distinct duals", image.len()),
        );
    }
}

/// Spectral-weight equivalence over every cross-type member pair: equal
/// profiles force a special C side and bound its orbit dimension; profiles
/// plus orbit dimensions match exactly for special dual pairs.
fn sweep_eta(sweep: &mut Sweep, max_n: u64) {
    for n in 1..=max_n {
        let all_b = members(OrbitType::B, 2 * n + 1);
        let all_c = members(OrbitType::C, 2 * n);
        let data_b: Vec<(Vec<u64>, u64, bool)> = all_b
            .iter()
            .map(|d| {
                (
                    eta_sequence(d, OrbitType::B).expect("member"),
                    orbit_dimension(d, OrbitType::B).expect("member"),
                    is_special(d, OrbitType::B),
                )
            })
            .collect();
        let data_c: Vec<(Vec<u64>, u64, bool)> = all_c
            .iter()
            .map(|d| {
                (
                    eta_sequence(d, OrbitType::C).expect("member"),
                    orbit_dimension(d, OrbitType::C).expect("member"),
                    is_special(d, OrbitType::C),
                )
            })
            .collect();
        for (d_b, (e_b, dim_b, special_b)) in all_b.iter().zip(&data_b) {
            for (d_c, (e_c, dim_c, special_c)) in all_c.iter().zip(&data_c) {
                let matched = e_b == e_c;
                let dual_pair = *special_b
                    && *special_c
                    && springer_dual(d_c, OrbitType::C).expect("special member") == *d_b;
                let ok = (matched && dim_b == dim_c) == dual_pair
                    && (!matched || (*special_c && dim_b <= dim_c))
                    && (!(*special_b && *special_c) || matched == dual_pair);
                sweep.instance(
                    ok,
                    || format!("({d_b}, {d_c})"),
                    || "profiles + dimensions match exactly for special dual pairs".to_string(),
                    || {
                        format!(
                            "profiles {}, dims {dim_b}/{dim_c}, dual {dual_pair}",
                            if matched { "match" } else { "differ" }
                        )
                    },
                );
            }
        }
    }
}

/// Half-dimension identity and the C-side closed form for the weight sum,
/// for every special orbit through `max_n` at each requested genus.
fn sweep_dims(sweep: &mut Sweep, max_n: u64, genus: &[u64]) {
    for n in 1..=max_n {
        for (t, total) in [(OrbitType::B, 2 * n + 1), (OrbitType::C, 2 * n)] {
            for d in specials(t, total) {
                for &g in genus {
                    let report = dimension_report(&d, t, g);
                    let ok = report
                        .as_ref()
                        .map(|r| r.half_check && r.eta_sum_closed_form.unwrap_or(true))
                        .unwrap_or(false);
                    sweep.instance(
                        ok,
                        || format!("{t} {d} genus {g}"),
                        || "half-dimension and weight-sum identities".to_string(),
                        || match &report {
                            Ok(r) => format!(
                                "half {}, closed form {:?}",
                                r.half_check, r.eta_sum_closed_form
                            ),
                            Err(e) => format!("error: {e}"),
                        },
                    );
                }
            }
        }
    }
}

/// Seesaw degree product over every parabolic type through `max_n`.
fn sweep_seesaw(sweep: &mut Sweep, max_n: u64) {
    for n in 1..=max_n {
        for (levi, _) in enumerate_polarizations(n, OrbitType::C).expect("enumeration") {
            let report = seesaw_check(&levi);
            let ok = report.as_ref().map(|r| r.pass()).unwrap_or(false);
            sweep.instance(
                ok,
                || format!("rank {n} levi {levi}"),
                || "degree product 2^c with dual index sets".to_string(),
                || match &report {
                    Ok(r) => format!(
                        "2^{} * 2^{} against c = {}",
                        r.c_side.degree_log2, r.b_side.degree_log2, r.c_invariant
                    ),
                    Err(e) => format!("error: {e}"),
                },
            );
        }
    }
}

/// Component-group quotient product over every induced orbit through `max_n`.
fn sweep_groups(sweep: &mut Sweep, max_n: u64) {
    for n in 1..=max_n {
        for (levi, _) in enumerate_polarizations(n, OrbitType::C).expect("enumeration") {
            let data = component_groups(&levi);
            let ok = data.as_ref().map(|d| d.pass()).unwrap_or(false);
            sweep.instance(
                ok,
                || format!("rank {n} levi {levi}"),
                || "quotient orders multiply to 2^c".to_string(),
                || match &data {
                    Ok(d) => format!("orders {:?}", d.quotient_orders),
                    Err(e) => format!("error: {e}"),
                },
            );
        }
    }
}

/// Structural vs brute-force fixed-line counts over every special B
/// partition of bounded residue dimension, three seeds each.
fn sweep_isotropic(sweep: &mut Sweep, max_n: u64, prime: u64, seed: u64) {
    let mut suite: BTreeSet<Partition> = BTreeSet::new();
    for total in (1..=2 * max_n + 1).step_by(2) {
        for d in specials(OrbitType::B, total) {
            let inv = orbit_invariants(&d, OrbitType::B).expect("special member");
            let ambient_dim = inv.beta + 1;
            if ambient_dim <= 6 {
                suite.insert(d);
            }
        }
    }
    sweep.primes_used.insert(prime);
    for d in &suite {
        for s in seed..seed + 3 {
            sweep.seeds_used.insert(s);
            let check = count_check(d, prime, s);
            let ok = check.as_ref().map(|c| c.pass()).unwrap_or(false);
            sweep.instance(
                ok,
                || format!("{d} p={prime} seed={s}"),
                || {
                    check
                        .as_ref()
                        .map(|c| format!("count {}", c.expected))
                        .unwrap_or_else(|_| "a built residue model".to_string())
                },
                || match &check {
                    Ok(c) => format!("structural {} brute {}", c.structural, c.brute),
                    Err(e) => format!("error: {e}"),
                },
            );
        }
    }
}

/// Two-torsion duality verdicts for every induced dual pair through `max_n`
/// at each genus; parity-guarded instances must be consistently odd.
fn sweep_weil(sweep: &mut Sweep, max_n: u64, genus: &[u64]) {
    for n in 1..=max_n {
        for &g in genus {
            for (levi, data) in enumerate_polarizations(n, OrbitType::C).expect("enumeration") {
                let d_c = data.orbit.clone();
                match hitchin_instance(n, g, &d_c, &levi) {
                    Ok(inst) => {
                        let v = &inst.verdicts;
                        let ok = v.dual_check
                            && v.component_count == 2
                            && v.dims_ok
                            && v.naive_dual_check == (inst.c == 0);
                        sweep.instance(
                            ok,
                            || format!("n={n} genus={g} levi {levi}"),
                            || "dual subspaces, two components, naive iff c = 0".to_string(),
                            || {
                                format!(
                                    "dual {} components {} dims_ok {} naive {} c {}",
                                    v.dual_check,
                                    v.component_count,
                                    v.dims_ok,
                                    v.naive_dual_check,
                                    inst.c
                                )
                            },
                        );
                    }
                    Err(Error::ParityGuard { count }) => {
                        let beta = orbit_invariants(&d_c, OrbitType::C)
                            .expect("induced orbit")
                            .beta as u64;
                        let expected = 2 * n * (2 * g - 2) + beta;
                        sweep.instance(
                            count == expected && count % 2 == 1,
                            || format!("n={n} genus={g} levi {levi}"),
                            || format!("odd fixed-point count {expected}"),
                            || format!("guarded with count {count}"),
                        );
                    }
                    Err(e) => sweep.instance(
                        false,
                        || format!("n={n} genus={g} levi {levi}"),
                        || "a built instance or a parity guard".to_string(),
                        || format!("error: {e}"),
                    ),
                }
            }
        }
    }
}

/// Fixed ladder of primes used when the requested prime is too small for a
/// k-factor characteristic sample (the library requires p > 4k^2).
const PRIME_LADDER: [u64; 5] = [101, 211, 401, 1009, 2003];

fn ladder_prime(k: usize) -> u64 {
    let bound = 4 * (k as u64) * (k as u64);
    PRIME_LADDER
        .into_iter()
        .find(|&p| p > bound)
        .expect("factor count beyond the prime ladder")
}

fn quadratic(p: u64, constant_unit: u64, precision: usize) -> SeriesPoly {
    let mut ct = vec![0, constant_unit];
    ct.resize(precision, 0);
    SeriesPoly::new(vec![
        SeriesScalar::from_coeffs(p, ct),
        SeriesScalar::from_coeffs(p, vec![0; precision]),
        SeriesScalar::one(p, precision),
    ])
}

/// `[[a, b], [0, d]]` as one matrix.
fn upper_block(a: &SeriesMatrix, b: &SeriesMatrix, d: &SeriesMatrix) -> SeriesMatrix {
    let (p, precision) = (a.p, a.precision);
    let top = a.rows;
    let size = top + d.rows;
    SeriesMatrix::from_fn(p, precision, size, size, |i, j| {
        if i < top && j < top {
            a.at(i, j).clone()
        } else if i < top {
            b.at(i, j - top).clone()
        } else if j >= top {
            d.at(i - top, j - top).clone()
        } else {
            SeriesScalar::from_coeffs(p, vec![0; precision])
        }
    })
}

fn invert_unit_matrix(m: &SeriesMatrix) -> Option<SeriesMatrix> {
    let data = m.char_data();
    let det_inv = data.det.invert()?;
    Some(data.adjugate.scale(&det_inv))
}

/// Sampled characteristic systems pass the assumption checks, and the
/// splitting criterion honors its known answers and conjugation invariance.
fn sweep_local(sweep: &mut Sweep, max_n: u64, prime: u64, seed: u64) {
    let mut pool: Vec<(OrbitType, Partition)> = Vec::new();
    for total in (3..=2 * max_n + 1).step_by(2) {
        for d in specials(OrbitType::B, total) {
            pool.push((OrbitType::B, d));
        }
    }
    for total in (2..=2 * max_n).step_by(2) {
        for d in specials(OrbitType::C, total) {
            pool.push((OrbitType::C, d));
        }
    }
    for i in 0..100usize {
        let (t, d) = &pool[i % pool.len()];
        let s = seed.wrapping_add(1000 + i as u64);
        sweep.seeds_used.insert(s);
        let k = orbit_invariants(d, *t)
            .expect("special member")
            .degree_partition
            .parts()
            .len();
        // Try the requested prime first; fall back to the ladder when the
        // library rejects it as too small for this factor count.
        let sampled = sample_generic_char(d, *t, prime, s, None).or_else(|e| match e {
            Error::InvalidParameter(_) => {
                let p = ladder_prime(k);
                sweep.primes_used.insert(p);
                sample_generic_char(d, *t, p, s, None)
            }
            other => Err(other),
        });
        sweep.primes_used.insert(prime);
        let ok = sampled
            .as_ref()
            .map(|data| assumption_check(data).pass())
            .unwrap_or(false);
        sweep.instance(
            ok,
            || format!("{t} {d} seed={s}"),
            || "all formal-local checks".to_string(),
            || match &sampled {
                Ok(_) => "a failed check".to_string(),
                Err(e) => format!("error: {e}"),
            },
        );
    }

    let sp = if prime >= 3 { prime } else { 101 };
    let precision = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sweep.seeds_used.insert(seed);
    for round in 0..100usize {
        let a_unit = rng.gen_range(1..sp);
        let mut d_unit = rng.gen_range(1..sp);
        if d_unit == a_unit {
            d_unit = d_unit % (sp - 1) + 1;
            if d_unit == a_unit {
                d_unit = d_unit % (sp - 1) + 1;
            }
        }
        let a = quadratic(sp, a_unit, precision).companion();
        let d = quadratic(sp, d_unit, precision).companion();
        let zero = SeriesMatrix::from_fn(sp, precision, 2, 2, |_, _| {
            SeriesScalar::from_coeffs(sp, vec![0; precision])
        });
        let corner = SeriesMatrix::from_fn(sp, precision, 2, 2, |i, j| {
            let mut coeffs = vec![0; precision];
            if i == 0 && j == 1 {
                coeffs[0] = 1;
            }
            SeriesScalar::from_coeffs(sp, coeffs)
        });
        let random_corner = SeriesMatrix::from_fn(sp, precision, 2, 2, |_, _| {
            let coeffs: Vec<u64> = (0..precision).map(|_| rng.gen_range(0..sp)).collect();
            SeriesScalar::from_coeffs(sp, coeffs)
        });

        let split = splitting_criterion(&upper_block(&a, &zero, &d), 2);
        let cyclic = splitting_criterion(&upper_block(&a, &corner, &d), 2);
        let theta = upper_block(&a, &random_corner, &d);
        let before = splitting_criterion(&theta, 2);
        let u = SeriesMatrix::from_fn(sp, precision, 4, 4, |i, j| {
            let mut coeffs = vec![0; precision];
            if i == j {
                coeffs[0] = 1;
            } else if i < j {
                for c in coeffs.iter_mut() {
                    *c = rng.gen_range(0..sp);
                }
            }
            SeriesScalar::from_coeffs(sp, coeffs)
        });
        let after = invert_unit_matrix(&u)
            .map(|u_inv| splitting_criterion(&u.mul(&theta).mul(&u_inv), 2));
        let ok = matches!(split, Ok(true))
            && matches!(cyclic, Ok(false))
            && matches!(
                (&before, &after),
                (Ok(b), Some(Ok(a))) if a == b
            );
        sweep.instance(
            ok,
            || format!("splitting round {round} units ({a_unit}, {d_unit}) p={sp}"),
            || "block split, cyclic non-split, conjugation-invariant verdict".to_string(),
            || {
                format!(
                    "split {split:?}, cyclic {cyclic:?}, before {before:?}, after {after:?}"
                )
            },
        );
    }
}
