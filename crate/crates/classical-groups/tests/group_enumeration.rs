//! Exact orders and finite enumeration of the bundled groups.

use classical_groups::{GroupDescriptor, Mat, Ring, RingKind};
use num_bigint::BigUint;

#[test]
fn finite_orders_match_enumeration() {
    let sp2 = GroupDescriptor::symplectic(1).unwrap();
    for p in [3u64, 5] {
        let ring = Ring::new(RingKind::Mixed, p, 1).unwrap();
        let els = sp2.enumerate_finite_group(&ring, 200_000).unwrap();
        assert_eq!(BigUint::from(els.len()), sp2.finite_order(p));
        assert_eq!(els.len() as u64, p * p * p - p);
    }
    let so3 = GroupDescriptor::odd_orthogonal(1).unwrap();
    let ring = Ring::new(RingKind::Mixed, 3, 1).unwrap();
    let els = so3.enumerate_finite_group(&ring, 200_000).unwrap();
    assert_eq!(els.len(), 24);
}

#[test]
fn so3_order_by_direct_scan() {
    // Independent of the BFS and of the GL(2) model: scan all 3x3 matrices
    // over F_3 for tgJg = J, det g = 1.
    let so3 = GroupDescriptor::odd_orthogonal(1).unwrap();
    let ring = Ring::new(RingKind::Mixed, 3, 1).unwrap();
    let mut count = 0u64;
    for idx in 0..3u64.pow(9) {
        let mut digits = idx;
        let mut m = Mat::zero(&ring, 3);
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = ring.from_u64(digits % 3);
                digits /= 3;
            }
        }
        if so3.contains(&m, &ring) {
            count += 1;
        }
    }
    assert_eq!(count, 24);
}

#[test]
fn sp4_order() {
    let sp4 = GroupDescriptor::symplectic(2).unwrap();
    assert_eq!(sp4.finite_order(3), BigUint::from(51840u64));
    let ring = Ring::new(RingKind::Mixed, 3, 1).unwrap();
    let els = sp4.enumerate_finite_group(&ring, 60_000).unwrap();
    assert_eq!(els.len(), 51840);
}

#[test]
fn truncated_orders_match_enumeration() {
    let sp2 = GroupDescriptor::symplectic(1).unwrap();
    for kind in [RingKind::Mixed, RingKind::Equal] {
        let ring = Ring::new(kind, 3, 2).unwrap();
        let els = sp2.enumerate_finite_group(&ring, 10_000).unwrap();
        assert_eq!(els.len(), 648, "{kind:?}");
        assert_eq!(BigUint::from(els.len()), sp2.truncated_order(3, 2));
    }
    let so3 = GroupDescriptor::odd_orthogonal(1).unwrap();
    let ring = Ring::new(RingKind::Mixed, 3, 2).unwrap();
    let els = so3.enumerate_finite_group(&ring, 10_000).unwrap();
    assert_eq!(BigUint::from(els.len()), so3.truncated_order(3, 2));
}

#[test]
fn enumeration_budget_is_enforced() {
    let sp2 = GroupDescriptor::symplectic(1).unwrap();
    let ring = Ring::new(RingKind::Mixed, 5, 1).unwrap();
    assert!(sp2.enumerate_finite_group(&ring, 50).is_err());
}

#[test]
fn membership_rejects_non_group_elements() {
    let sp2 = GroupDescriptor::symplectic(1).unwrap();
    let ring = Ring::new(RingKind::Mixed, 5, 2).unwrap();
    // det = 2, not in SL2.
    let m = Mat::from_rows(&ring, &[vec![2, 0], vec![0, 1]]);
    assert!(!sp2.contains(&m, &ring));
}
