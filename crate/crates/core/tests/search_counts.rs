//! Exact candidate counts of the exhaustive searches, pinned so a change in
//! enumeration is noticed.

use ome_core::impossibility::{graphic_host_search, laminar_host_search, rank3_extension_search, rank3_fixture};

#[test]
fn graphic_counts_at_six_vertices() {
    let r = graphic_host_search(6).unwrap();
    assert_eq!(r.placements, 15 * 14 * 13);
    assert_eq!(r.independent_placements, 2610);
    assert_eq!(r.left_extendable, 360);
    assert_eq!(r.right_extendable, 1080);
    assert_eq!(r.shared_endpoint_violations, 0);
    assert_eq!(r.simultaneous, 0);
}

#[test]
fn left_extensions_are_exactly_the_stars() {
    // a star needs a centre and three ordered leaves
    for v in 4..=7 {
        let r = graphic_host_search(v).unwrap();
        assert_eq!(r.left_extendable, v * (v - 1) * (v - 2) * (v - 3));
    }
}

#[test]
fn laminar_counts() {
    let r = laminar_host_search(6, 6).unwrap();
    assert_eq!(r.families, 163_402);
    assert_eq!(r.hosts, 12_313_792);
    assert_eq!(r.prefix_valid, 291_668);
    assert_eq!(r.extendable, [19_620; 3]);
    assert_eq!(r.simultaneous, 0);

    let r = laminar_host_search(5, 6).unwrap();
    assert_eq!((r.families, r.hosts), (12_034, 355_102));
    assert_eq!(r.extendable, [192; 3]);
    assert_eq!(r.simultaneous, 0);
}

#[test]
fn rank3_counts_for_seed_zero() {
    let r = rank3_extension_search(&rank3_fixture(), 7, 3, 100, 0).unwrap();
    assert_eq!(r.pairs_examined, 100 * 343 * 343);
    assert_eq!(r.degenerate_skipped, 4811);
    assert_eq!((r.valid1_total, r.valid2_total), (180, 420));
    assert_eq!(r.near_misses, 1080);
    assert_eq!(r.satisfying, 0);
    assert_eq!(r.argument_failures, 0);
}
