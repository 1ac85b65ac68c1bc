use qtcat::chaindata::bundled_file;
use qtcat::chains::{default_cutoff, verify_family};
use qtcat::search::{find_family, find_family_with_hint, SearchError, SearchOutcome};

#[test]
fn every_found_family_verifies() {
    for k in 0..=5 {
        let out = find_family(k, default_cutoff(k), 10_000_000).unwrap();
        let family = out.family().unwrap_or_else(|| panic!("k={k}: {out:?}"));
        assert!(
            verify_family(family, default_cutoff(k), 12)
                .unwrap()
                .passed(),
            "k={k}"
        );
    }
}

#[test]
fn bundled_families_replay_without_backtracking() {
    for k in [4, 7] {
        let hint = bundled_file(k).unwrap().to_family().unwrap();
        let out = find_family_with_hint(k, default_cutoff(k), 10_000_000, Some(&hint)).unwrap();
        assert_eq!(out.family(), Some(&hint), "k={k}");
        assert_eq!(out.backtracks(), 0, "k={k}");
    }
}

#[test]
fn a_hint_of_the_wrong_deficit_is_harmless() {
    let hint = bundled_file(4).unwrap().to_family().unwrap();
    let plain = find_family(3, 20, 1_000_000).unwrap();
    let hinted = find_family_with_hint(3, 20, 1_000_000, Some(&hint)).unwrap();
    assert_eq!(plain.family(), hinted.family());
}

#[test]
fn search_is_deterministic() {
    let a = find_family(5, default_cutoff(5), 10_000_000).unwrap();
    let b = find_family(5, default_cutoff(5), 10_000_000).unwrap();
    assert_eq!(a.family(), b.family());
    assert_eq!((a.nodes(), a.backtracks()), (b.nodes(), b.backtracks()));
}

#[test]
fn budget_and_cutoff_limits() {
    assert!(matches!(
        find_family(4, 10, 3).unwrap(),
        SearchOutcome::BudgetExhausted { nodes: 4, .. }
    ));
    assert_eq!(
        find_family(4, 9, 10).unwrap_err(),
        SearchError::CutoffTooSmall {
            cutoff: 9,
            needed: 10
        }
    );
}
