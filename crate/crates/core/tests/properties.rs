mod common;

use common::*;
use proptest::prelude::*;
use qtcat::nu::{nu, tail_initiator, tail_start_dinv};
use qtcat::partition::PartitionsOf;
use qtcat::staircase::{unrolled, Staircase};
use qtcat::Partition;

#[test]
fn nu_exhaustive_up_to_18() {
    nu_invariants(18).unwrap();
}

#[test]
fn dyck_round_trips_up_to_9() {
    dyck_round_trips(9).unwrap();
}

#[test]
fn nu_segments_are_staircases_up_to_14() {
    nu_stair(14).unwrap();
}

#[test]
fn staircase_closed_form_matches_unrolling() {
    staircase_closed_form(1, 10_000).unwrap();
}

#[test]
fn compare2_random_pairs() {
    compare2(2, 10_000).unwrap();
}

#[test]
fn dec_min_random_cascades() {
    dec_min(3, 10_000).unwrap();
}

#[test]
fn lg_random_families() {
    lg_opposite(4, 1_000).unwrap();
}

#[test]
fn mind_is_conjugation_invariant_up_to_15() {
    for n in 0..=15 {
        for g in PartitionsOf::new(n) {
            let c = g.conjugate();
            assert_eq!(c.mind(), g.mind(), "{}", g.compact());
            assert_eq!(c.conjugate(), g);
            assert_eq!(c.size(), g.size());
        }
    }
}

#[test]
fn deficit_nonnegative_up_to_18() {
    for n in 0..=18 {
        for g in PartitionsOf::new(n) {
            assert!(g.dinv() <= g.size(), "{}", g.compact());
        }
    }
}

fn partition_strategy(max_len: usize, max_part: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1..=max_part, 0..=max_len).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn random_partitions_have_nonnegative_deficit(g in partition_strategy(8, 30)) {
        prop_assert!(g.dinv() <= g.size());
        prop_assert_eq!(g.conjugate().mind(), g.mind());
    }

    #[test]
    fn text_forms_round_trip(g in partition_strategy(10, 25)) {
        prop_assert_eq!(g.to_string().parse::<Partition>().unwrap(), g.clone());
        prop_assert_eq!(g.compact().parse::<Partition>().unwrap(), g);
    }

    #[test]
    fn staircase_value_matches_unrolled(a in 0i64..100, m in 0i64..12, h in 0i64..30, off in 0i64..200) {
        let s = Staircase::new(a, m, h).unwrap();
        prop_assert_eq!(s.value(a + off).unwrap(), unrolled(a, m, h, a + off)[off as usize]);
    }

    #[test]
    fn threshold_set_is_the_level_set(a in 0i64..50, m in 0i64..8, h in 0i64..15, n in 0i64..25) {
        let s = Staircase::new(a, m, h).unwrap();
        let below: Vec<i64> = (a..a + 400).filter(|&i| s.value(i).unwrap() <= n).collect();
        match s.threshold_set(n) {
            None => prop_assert!(below.is_empty()),
            Some((lo, hi)) => prop_assert_eq!(below, (lo..=hi).collect::<Vec<_>>()),
        }
    }

    #[test]
    fn tails_climb_a_staircase(k in 0usize..10, pick in 0usize..100) {
        let all: Vec<Partition> = PartitionsOf::new(k).collect();
        let mu = &all[pick % all.len()];
        let start = tail_start_dinv(mu);
        let mut cur = tail_initiator(mu);
        prop_assert_eq!(cur.dinv(), start);
        let s = Staircase::new(start as i64, 0, cur.mind() as i64).unwrap();
        for i in start..start + 40 {
            prop_assert_eq!(s.value(i as i64).unwrap(), cur.mind() as i64);
            cur = nu(&cur).unwrap();
        }
    }
}
