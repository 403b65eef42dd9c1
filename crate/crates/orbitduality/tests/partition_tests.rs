mod common;

use common::{
    collapse_oracle, dominates_oracle, is_member_oracle, members_oracle, pt, transpose_oracle,
};
use orbitduality::{
    collapse, enumerate_partitions, is_member, is_special, springer_dual,EnumerateFilter, Error,
    OrbitType, Partition,
};
use proptest::prelude::*;

#[test]
fn canonical_form_sorts_and_strips_zeros() {
    assert_eq!(Partition::new(vec![1, 3, 0, 2, 0]).parts(), &[3, 2, 1]);
    assert_eq!(Partition::new(vec![]).parts(), &[] as &[u64]);
    assert_eq!(Partition::empty().total(), 0);
    assert_eq!(pt(&[4, 4, 1]).total(), 9);
    assert_eq!(pt(&[4, 4, 1]).multiplicity(4), 2);
    assert_eq!(pt(&[4, 4, 1]).distinct_values(), vec![4, 1]);
}

#[test]
fn transpose_known_values() {
    assert_eq!(
        pt(&[7, 6, 6, 4, 4, 2, 2, 1, 1]).transpose().parts(),
        &[9, 7, 5, 5, 3, 3, 1]
    );
    assert_eq!(pt(&[4]).transpose().parts(), &[1, 1, 1, 1]);
    assert_eq!(pt(&[2, 2]).transpose().parts(), &[2, 2]);
}

#[test]
fn transpose_column_heights() {
    assert_eq!(pt(&[5, 3, 3, 1]).transpose_at(1), 4);
    assert_eq!(pt(&[5, 3, 3, 1]).transpose_at(3), 3);
    assert_eq!(pt(&[5, 3, 3, 1]).transpose_at(4), 1);
    assert_eq!(pt(&[5, 3, 3, 1]).transpose_at(6), 0);
}

#[test]
fn membership_known_values() {
    assert!(!is_member(&pt(&[3, 1]), OrbitType::C));
    assert!(is_member(&pt(&[2, 2]), OrbitType::C));
    assert!(is_member(&pt(&[3, 2, 2, 1, 1]), OrbitType::B));
    // Wrong total parity is never a member.
    assert!(!is_member(&pt(&[3, 1]), OrbitType::B));
    assert!(!is_member(&pt(&[2, 2]), OrbitType::B));
}

#[test]
fn membership_matches_oracle_exhaustively() {
    for total in 1..=14u64 {
        for parts in common::all_partitions(total) {
            let p = pt(&parts);
            for t in [OrbitType::B, OrbitType::C] {
                assert_eq!(
                    is_member(&p, t),
                    is_member_oracle(&parts, t),
                    "membership mismatch on {parts:?} type {t:?}"
                );
            }
        }
    }
}

#[test]
fn collapse_known_values() {
    assert_eq!(collapse(&pt(&[3, 2]), OrbitType::B).unwrap().parts(), &[3, 1, 1]);
    assert_eq!(collapse(&pt(&[3, 1]), OrbitType::C).unwrap().parts(), &[2, 2]);
    assert_eq!(collapse(&pt(&[5]), OrbitType::B).unwrap().parts(), &[5]);
}

#[test]
fn collapse_rejects_parity_mismatch() {
    match collapse(&pt(&[3, 1]), OrbitType::B) {
        Err(Error::ParityMismatch { total, orbit_type }) => {
            assert_eq!(total, 4);
            assert_eq!(orbit_type, 'B');
        }
        other => panic!("expected parity mismatch, got {other:?}"),
    }
}

#[test]
fn collapse_matches_brute_force_maximum() {
    for total in 1..=12u64 {
        let t = if total % 2 == 1 { OrbitType::B } else { OrbitType::C };
        for parts in common::all_partitions(total) {
            let got = collapse(&pt(&parts), t).unwrap();
            let want = collapse_oracle(&parts, t);
            assert_eq!(got.parts(), &want[..], "collapse mismatch on {parts:?} {t:?}");
        }
    }
}

#[test]
fn collapse_is_idempotent_and_below_input() {
    for total in 1..=12u64 {
        let t = if total % 2 == 1 { OrbitType::B } else { OrbitType::C };
        for parts in common::all_partitions(total) {
            let p = pt(&parts);
            let once = collapse(&p, t).unwrap();
            assert!(is_member(&once, t));
            assert!(p.dominates(&once));
            let twice = collapse(&once, t).unwrap();
            assert_eq!(once, twice);
            if is_member(&p, t) {
                assert_eq!(once, p, "members must be collapse-fixed");
            }
        }
    }
}

#[test]
fn specialness_known_values() {
    assert!(!is_special(&pt(&[2, 1, 1]), OrbitType::C));
    assert!(is_special(&pt(&[2, 2]), OrbitType::C));
    assert!(is_special(&pt(&[1, 1, 1, 1]), OrbitType::C));
    // Non-members are never special.
    assert!(!is_special(&pt(&[3, 1]), OrbitType::C));
}

#[test]
fn specialness_is_transpose_membership() {
    for total in 1..=14u64 {
        let t = if total % 2 == 1 { OrbitType::B } else { OrbitType::C };
        for parts in members_oracle(total, t) {
            let p = pt(&parts);
            let expected = is_member_oracle(&transpose_oracle(&parts), t);
            assert_eq!(is_special(&p, t), expected, "specialness mismatch on {parts:?}");
        }
    }
}

#[test]
fn springer_dual_known_values() {
    assert_eq!(
        springer_dual(&pt(&[2, 2]), OrbitType::C).unwrap().parts(),
        &[3, 1, 1]
    );
    assert_eq!(
        springer_dual(&pt(&[7, 6, 6, 4, 4, 2, 2, 1, 1]), OrbitType::B)
            .unwrap()
            .parts(),
        &[6, 6, 6, 4, 4, 2, 2, 2]
    );
    assert_eq!(
        springer_dual(&pt(&[1, 1, 1, 1]), OrbitType::C).unwrap().parts(),
        &[1, 1, 1, 1, 1]
    );
}

#[test]
fn springer_dual_rejects_non_special() {
    assert!(matches!(
        springer_dual(&pt(&[2, 1, 1]), OrbitType::C),
        Err(Error::NotSpecial(_))
    ));
    assert!(matches!(
        springer_dual(&pt(&[3, 1]), OrbitType::C),
        Err(Error::NotAMember(_)) | Err(Error::NotSpecial(_))
    ));
}

#[test]
fn springer_dual_is_a_bijection_with_inverse() {
    for n in 1..=6u64 {
        let specials_c = enumerate_partitions(OrbitType::C, 2 * n, EnumerateFilter::SpecialOnly)
            .unwrap();
        let specials_b =
            enumerate_partitions(OrbitType::B, 2 * n + 1, EnumerateFilter::SpecialOnly).unwrap();
        let mut seen = Vec::new();
        for d_c in &specials_c {
            let d_b = springer_dual(d_c, OrbitType::C).unwrap();
            assert!(is_special(&d_b, OrbitType::B));
            assert!(!seen.contains(&d_b), "duplicate image {d_b:?}");
            let back = springer_dual(&d_b, OrbitType::B).unwrap();
            assert_eq!(&back, d_c, "round trip failed at {d_c:?}");
            seen.push(d_b);
        }
        assert_eq!(seen.len(), specials_b.len(), "image misses some type-B specials at n={n}");
    }
}

#[test]
fn springer_dual_matches_blockwise_construction() {
    for total in [3u64, 5, 7, 9, 11, 13] {
        for parts in members_oracle(total, OrbitType::B) {
            let p = pt(&parts);
            if !is_special(&p, OrbitType::B) {
                continue;
            }
            let via_blocks = common::blockwise_dual_oracle(&parts);
            let direct = springer_dual(&p, OrbitType::B).unwrap();
            assert_eq!(direct.parts(), &via_blocks[..], "blockwise dual mismatch on {parts:?}");
        }
    }
}

#[test]
fn enumerate_known_values() {
    let c4 = enumerate_partitions(OrbitType::C, 4, EnumerateFilter::SpecialOnly).unwrap();
    assert_eq!(
        c4,
        vec![pt(&[4]), pt(&[2, 2]), pt(&[1, 1, 1, 1])]
    );
    let b5 = enumerate_partitions(OrbitType::B, 5, EnumerateFilter::All).unwrap();
    assert_eq!(
        b5,
        vec![pt(&[5]), pt(&[3, 1, 1]), pt(&[2, 2, 1]), pt(&[1, 1, 1, 1, 1])]
    );
    let c2 = enumerate_partitions(OrbitType::C, 2, EnumerateFilter::All).unwrap();
    assert_eq!(c2, vec![pt(&[2]), pt(&[1, 1])]);
}

#[test]
fn enumerate_matches_oracle_and_is_sorted() {
    for total in 1..=14u64 {
        let t = if total % 2 == 1 { OrbitType::B } else { OrbitType::C };
        let got = enumerate_partitions(t, total, EnumerateFilter::All).unwrap();
        let want = members_oracle(total, t);
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert_eq!(g.parts(), &w[..]);
        }
        // Decreasing lexicographic order.
        for pair in got.windows(2) {
            assert!(pair[0].parts() > pair[1].parts());
        }
        let special = enumerate_partitions(t, total, EnumerateFilter::SpecialOnly).unwrap();
        let filtered: Vec<&Partition> =
            got.iter().filter(|p| is_special(p, t)).collect();
        assert_eq!(special.len(), filtered.len());
        for (s, f) in special.iter().zip(filtered) {
            assert_eq!(s, f);
        }
    }
}

#[test]
fn enumerate_rejects_wrong_parity() {
    assert!(matches!(
        enumerate_partitions(OrbitType::B, 4, EnumerateFilter::All),
        Err(Error::ParityMismatch { .. })
    ));
    assert!(matches!(
        enumerate_partitions(OrbitType::C, 5, EnumerateFilter::All),
        Err(Error::ParityMismatch { .. })
    ));
}

#[test]
fn partition_json_round_trip() {
    let p = pt(&[7, 6, 6, 4, 4, 2, 2, 1, 1]);
    let json = serde_json::to_string(&p).unwrap();
    assert_eq!(json, "[7,6,6,4,4,2,2,1,1]");
    let back: Partition = serde_json::from_str(&json).unwrap();
    assert_eq!(back, p);
    assert_eq!(serde_json::to_string(&OrbitType::B).unwrap(), "\"B\"");
    assert_eq!(serde_json::to_string(&OrbitType::C).unwrap(), "\"C\"");
}

proptest! {
    #[test]
    fn transpose_is_an_involution(raw in prop::collection::vec(1u64..=9, 0..9)) {
        let p = Partition::new(raw);
        let flipped = p.transpose();
        prop_assert_eq!(flipped.transpose(), p.clone());
        let columns = transpose_oracle(p.parts());
        prop_assert_eq!(flipped.parts(), &columns[..]);
        prop_assert_eq!(flipped.total(), p.total());
    }

    #[test]
    fn dominance_matches_oracle(
        raw_a in prop::collection::vec(1u64..=6, 1..7),
        raw_b in prop::collection::vec(1u64..=6, 1..7),
    ) {
        let a = Partition::new(raw_a);
        let b = Partition::new(raw_b);
        if a.total() == b.total() {
            prop_assert_eq!(a.dominates(&b), dominates_oracle(a.parts(), b.parts()));
        }
        prop_assert!(a.dominates(&a));
    }

    #[test]
    fn transpose_reverses_dominance(
        raw_a in prop::collection::vec(1u64..=6, 1..7),
        raw_b in prop::collection::vec(1u64..=6, 1..7),
    ) {
        let a = Partition::new(raw_a);
        let b = Partition::new(raw_b);
        if a.total() == b.total() && a.dominates(&b) {
            prop_assert!(b.transpose().dominates(&a.transpose()));
        }
    }
}
