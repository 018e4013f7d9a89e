//! Label enumeration and classifier determinism.

use classical_groups::{GroupDescriptor, Mat, Ring, RingKind};
use unipotent_classes::{
    classify_detailed, enumerate_class_labels, jordan_matrix, UnipotentClassLabel,
};

fn label(parts: &[u32], eps: &[(u32, bool)]) -> UnipotentClassLabel {
    UnipotentClassLabel::new(parts.to_vec(), eps.to_vec())
}

#[test]
fn sp2_labels_are_prime_independent() {
    let desc = GroupDescriptor::symplectic(1).unwrap();
    let expected = vec![
        label(&[1, 1], &[]),
        label(&[2], &[(2, false)]),
        label(&[2], &[(2, true)]),
    ];
    for q in [3, 5, 7] {
        assert_eq!(enumerate_class_labels(&desc, q), expected);
    }
}

#[test]
fn sp4_labels() {
    let desc = GroupDescriptor::symplectic(2).unwrap();
    let expected = vec![
        label(&[1, 1, 1, 1], &[]),
        label(&[2, 1, 1], &[(2, false)]),
        label(&[2, 1, 1], &[(2, true)]),
        label(&[2, 2], &[(2, false)]),
        label(&[2, 2], &[(2, true)]),
        label(&[4], &[(4, false)]),
        label(&[4], &[(4, true)]),
    ];
    for q in [3, 5, 7] {
        assert_eq!(enumerate_class_labels(&desc, q), expected);
    }
}

#[test]
fn so3_labels_track_the_class_of_minus_one() {
    let desc = GroupDescriptor::odd_orthogonal(1).unwrap();
    for (q, minus_one_square) in [(3u64, false), (5, true), (7, false)] {
        let expected = vec![
            label(&[1, 1, 1], &[(1, minus_one_square)]),
            label(&[3], &[(3, true)]),
        ];
        assert_eq!(enumerate_class_labels(&desc, q), expected);
    }
}

#[test]
fn label_display_and_queries() {
    let l = label(&[2, 1, 1], &[(2, true)]);
    assert_eq!(l.to_string(), "(2,1,1)[2:sq]");
    assert_eq!(l.multiplicity(1), 2);
    assert_eq!(l.multiplicity(2), 1);
    assert_eq!(l.largest_part(), 2);
    assert!(!l.is_identity() && !l.is_regular());
    assert_eq!(label(&[1, 1], &[]).to_string(), "(1,1)");
}

#[test]
fn gram_certificates_are_deterministic_and_frozen() {
    // [[1,1],[0,1]] has the one-by-one Gram [-1/2] in the part-2 slot.
    for (q, gram) in [(3u64, 1u64), (5, 2), (7, 3)] {
        let ring = Ring::new(RingKind::Mixed, q, 1).unwrap();
        let desc = GroupDescriptor::symplectic(1).unwrap();
        let u = Mat::from_rows(&ring, &[vec![1, 1], vec![0, 1]]);
        let first = classify_detailed(&desc, &u, &ring).unwrap();
        let second = classify_detailed(&desc, &u, &ring).unwrap();
        assert_eq!(first, second);
        assert_eq!(first.grams, vec![(2, vec![vec![gram]])]);
    }
}

#[test]
fn jordan_matrices_have_partition_kernel_profile() {
    let ring = Ring::new(RingKind::Mixed, 5, 1).unwrap();
    for parts in [vec![4u32], vec![2, 2], vec![2, 1, 1], vec![3, 1]] {
        let j = jordan_matrix(&parts, &ring);
        let n: u32 = parts.iter().sum();
        let mut pow = Mat::identity(&ring, n as usize);
        for step in 1..=n {
            pow = pow.mul(&j, &ring);
            let expected_nullity: u32 = parts.iter().map(|&p| p.min(step)).sum();
            let grid = unipotent_classes::residue_grid(&pow, &ring);
            let nullity = classical_groups::fqlin::kernel_basis(&grid, 5).len() as u32;
            assert_eq!(nullity, expected_nullity, "X^{step} of {parts:?}");
        }
    }
}
