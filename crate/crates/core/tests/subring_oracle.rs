//! Cross-check the intermediate subring search against exhaustive subset
//! enumeration on rings small enough to afford 2^n subsets.

use std::collections::BTreeSet;
use std::sync::Arc;

use qlab_core::construct::{cyclic, prime_field, product, triangular_ring};
use qlab_core::ring::{
    enumerate_intermediate_subrings, is_subring_set, subring_generated, FiniteRing, Subring,
};

/// Every subset of the carrier sandwiched between `lower` and the whole ring
/// that passes the direct subring axioms.
fn exhaustive_subrings(ring: &Arc<FiniteRing>, lower: &Subring) -> BTreeSet<Vec<u64>> {
    let n = ring.order() as usize;
    assert!(n <= 16, "exhaustive subset scan is 2^n");
    let mut found = BTreeSet::new();
    for mask in 0u32..(1u32 << n) {
        let subset: Vec<u64> = (0..n as u64).filter(|&e| mask >> e & 1 == 1).collect();
        if lower.elements.iter().any(|&e| subset.binary_search(&e).is_err()) {
            continue;
        }
        if is_subring_set(ring, &subset).is_ok() {
            found.insert(subset);
        }
    }
    found
}

fn check(ring: Arc<FiniteRing>) {
    let lower = subring_generated(&ring, &[]);
    let upper = Subring::whole(&ring);
    let fast = enumerate_intermediate_subrings(&lower, &upper, 100_000).unwrap();
    let fast_sets: BTreeSet<Vec<u64>> = fast.iter().map(|s| s.elements.clone()).collect();
    assert_eq!(fast_sets.len(), fast.len(), "search reported a duplicate subring");
    let slow_sets = exhaustive_subrings(&ring, &lower);
    assert_eq!(fast_sets, slow_sets, "subring families differ on {}", ring.name());
}

#[test]
fn search_agrees_with_subset_scan_on_cyclic_rings() {
    check(cyclic(4).unwrap());
    check(cyclic(6).unwrap());
    check(cyclic(8).unwrap());
    check(cyclic(12).unwrap());
}

#[test]
fn search_agrees_with_subset_scan_on_products() {
    let f2 = prime_field(2).unwrap();
    let f3 = prime_field(3).unwrap();
    check(product(&f2, &f2).unwrap());
    check(product(&f2, &f3).unwrap());
    check(product(&cyclic(4).unwrap(), &f2).unwrap());
}

#[test]
fn search_agrees_with_subset_scan_on_a_noncommutative_ring() {
    let f2 = prime_field(2).unwrap();
    check(triangular_ring(&f2, 2).unwrap());
}

#[test]
fn search_respects_a_proper_lower_bound() {
    // Fix the diagonal subring of T2(F2) as the floor; the exhaustive scan
    // must then see exactly the subsets above it.
    let f2 = prime_field(2).unwrap();
    let ring = triangular_ring(&f2, 2).unwrap();
    let diag: Vec<u64> = ring
        .elements()
        .filter(|&e| {
            let d = ring.decode(e);
            d[1] == 0
        })
        .collect();
    assert!(is_subring_set(&ring, &diag).is_ok());
    let lower = subring_generated(&ring, &diag);
    assert_eq!(lower.order(), 4);
    let upper = Subring::whole(&ring);
    let fast: BTreeSet<Vec<u64>> = enumerate_intermediate_subrings(&lower, &upper, 100_000)
        .unwrap()
        .into_iter()
        .map(|s| s.elements)
        .collect();
    let slow = exhaustive_subrings(&ring, &lower);
    assert_eq!(fast, slow);
}
