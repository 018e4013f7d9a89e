//! Classifier ground truth: brute-force conjugacy orbits.
//!
//! Every unipotent element of the small groups is classified, so the label
//! must be constant on each orbit, distinct across orbits, and the label
//! set must match the enumeration exactly.

use std::collections::BTreeMap;

use classical_groups::{GroupDescriptor, Mat, Ring, RingKind};
use unipotent_classes::{
    classify, enumerate_class_labels, unipotent_conjugacy_orbits, UnipotentClassLabel,
};

/// Classify every element of every orbit; assert constancy and return the
/// census as label -> orbit size.
fn census(
    desc: &GroupDescriptor,
    ring: &Ring,
    budget: usize,
) -> BTreeMap<UnipotentClassLabel, usize> {
    let orbits = unipotent_conjugacy_orbits(desc, ring, budget).unwrap();
    let mut out = BTreeMap::new();
    for orbit in &orbits {
        let label = classify(desc, &orbit[0], ring).unwrap();
        for u in orbit {
            assert_eq!(classify(desc, u, ring).unwrap(), label, "label constant on orbit");
        }
        let clash = out.insert(label.clone(), orbit.len());
        assert!(clash.is_none(), "distinct orbits got the same label {label}");
    }
    let enumerated = enumerate_class_labels(desc, ring.prime());
    let found: Vec<UnipotentClassLabel> = out.keys().cloned().collect();
    assert_eq!(found, enumerated, "label enumeration must match the orbit census");
    out
}

fn label(parts: &[u32], eps: &[(u32, bool)]) -> UnipotentClassLabel {
    UnipotentClassLabel::new(parts.to_vec(), eps.to_vec())
}

#[test]
fn sl2_census_small_primes() {
    let desc = GroupDescriptor::symplectic(1).unwrap();
    for q in [3u64, 5, 7] {
        let ring = Ring::new(RingKind::Mixed, q, 1).unwrap();
        let sizes = census(&desc, &ring, 1000);
        let half = ((q * q - 1) / 2) as usize;
        assert_eq!(sizes[&label(&[1, 1], &[])], 1);
        assert_eq!(sizes[&label(&[2], &[(2, false)])], half);
        assert_eq!(sizes[&label(&[2], &[(2, true)])], half);
    }
}

#[test]
fn sl2_standard_unipotent_labels() {
    let desc = GroupDescriptor::symplectic(1).unwrap();
    for (q, sq) in [(3u64, true), (5, false), (7, false)] {
        let ring = Ring::new(RingKind::Mixed, q, 1).unwrap();
        let u = Mat::from_rows(&ring, &[vec![1, 1], vec![0, 1]]);
        assert_eq!(classify(&desc, &u, &ring).unwrap(), label(&[2], &[(2, sq)]));
    }
}

#[test]
fn so3_census_small_primes() {
    let desc = GroupDescriptor::odd_orthogonal(1).unwrap();
    for (q, minus_one_square) in [(3u64, false), (5, true), (7, false)] {
        let ring = Ring::new(RingKind::Mixed, q, 1).unwrap();
        let sizes = census(&desc, &ring, 1000);
        assert_eq!(sizes.len(), 2);
        assert_eq!(sizes[&label(&[1, 1, 1], &[(1, minus_one_square)])], 1);
        assert_eq!(sizes[&label(&[3], &[(3, true)])], (q * q - 1) as usize);
    }
}

#[test]
fn equal_characteristic_census_agrees() {
    let sp = GroupDescriptor::symplectic(1).unwrap();
    let so = GroupDescriptor::odd_orthogonal(1).unwrap();
    for desc in [sp, so] {
        let mixed = Ring::new(RingKind::Mixed, 3, 1).unwrap();
        let equal = Ring::new(RingKind::Equal, 3, 1).unwrap();
        assert_eq!(census(&desc, &mixed, 1000), census(&desc, &equal, 1000));
    }
}

#[test]
fn sp4_f3_census() {
    let desc = GroupDescriptor::symplectic(2).unwrap();
    let ring = Ring::new(RingKind::Mixed, 3, 1).unwrap();
    let sizes = census(&desc, &ring, 60000);
    let expected: BTreeMap<UnipotentClassLabel, usize> = [
        (label(&[1, 1, 1, 1], &[]), 1),
        (label(&[2, 1, 1], &[(2, false)]), 40),
        (label(&[2, 1, 1], &[(2, true)]), 40),
        (label(&[2, 2], &[(2, false)]), 480),
        (label(&[2, 2], &[(2, true)]), 240),
        (label(&[4], &[(4, false)]), 2880),
        (label(&[4], &[(4, true)]), 2880),
    ]
    .into_iter()
    .collect();
    assert_eq!(sizes, expected);
    assert_eq!(sizes.values().sum::<usize>(), 6561);
}
