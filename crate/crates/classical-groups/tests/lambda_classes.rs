//! Lambda-coset counts: exact powers of q with prime-independent exponents.

use classical_groups::{
    coset_key, lambda_class_representatives, lambda_length, GroupDescriptor, Mat,
    MultiIndex, Ring, RingKind,
};

const BUDGET: usize = 100_000;

#[test]
fn sp2_lengths() {
    let sp2 = GroupDescriptor::symplectic(1).unwrap();
    let expected = [(vec![1, -1], 2u32), (vec![-1, 1], 1), (vec![2, -2], 4), (vec![-2, 2], 3)];
    for (entries, l) in expected {
        let lam = MultiIndex::new(&sp2, entries.clone()).unwrap();
        for p in [3u64, 5] {
            let (count, exp) =
                lambda_length(&sp2, &lam, RingKind::Mixed, p, 7, BUDGET).unwrap();
            assert_eq!(exp, l, "p={p} lambda={entries:?}");
            assert_eq!(count, num_bigint::BigUint::from(p).pow(l));
        }
    }
}

#[test]
fn sp2_length_spot_check_p7() {
    let sp2 = GroupDescriptor::symplectic(1).unwrap();
    let lam = MultiIndex::new(&sp2, vec![1, -1]).unwrap();
    let set = lambda_class_representatives(&sp2, &lam, RingKind::Mixed, 7, BUDGET).unwrap();
    assert_eq!(set.count(), 49);
}

#[test]
fn so3_lengths() {
    let so3 = GroupDescriptor::odd_orthogonal(1).unwrap();
    let expected = [(vec![1, 0, -1], 1u32), (vec![-1, 0, 1], 0)];
    for (entries, l) in expected {
        let lam = MultiIndex::new(&so3, entries.clone()).unwrap();
        for p in [3u64, 5] {
            let (_, exp) = lambda_length(&so3, &lam, RingKind::Mixed, p, 7, BUDGET).unwrap();
            assert_eq!(exp, l, "p={p} lambda={entries:?}");
        }
    }
}

#[test]
fn equal_characteristic_lengths_agree() {
    let sp2 = GroupDescriptor::symplectic(1).unwrap();
    for (entries, l) in [(vec![1, -1], 2u32), (vec![-1, 1], 1)] {
        let lam = MultiIndex::new(&sp2, entries).unwrap();
        let (_, exp) = lambda_length(&sp2, &lam, RingKind::Equal, 3, 5, BUDGET).unwrap();
        assert_eq!(exp, l);
    }
}

/// Full recount against the BFS: enumerate the whole Iwahori subgroup mod
/// p^N by BFS over its generators, key every element, and compare the
/// number of distinct keys and the fiber sizes with the class count.
#[test]
fn iwahori_recount_at_p3() {
    let sp2 = GroupDescriptor::symplectic(1).unwrap();
    let ring = Ring::new(RingKind::Mixed, 3, 3).unwrap();
    let gens = sp2.iwahori_generators(&ring);
    let start = Mat::identity(&ring, 2);
    let mut seen = std::collections::HashSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = x.mul(g, &ring);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    assert_eq!(seen.len(), 4374);

    for (entries, classes, fiber) in
        [(vec![1, -1], 9usize, 486usize), (vec![-1, 1], 3, 1458)]
    {
        let lam = MultiIndex::new(&sp2, entries).unwrap();
        let mut fibers: std::collections::HashMap<_, usize> = Default::default();
        for y in &seen {
            let key = coset_key(y, &lam, &ring).unwrap();
            *fibers.entry(key).or_default() += 1;
        }
        assert_eq!(fibers.len(), classes);
        assert!(fibers.values().all(|&c| c == fiber), "equal fiber sizes");
    }
}

/// Representatives are pairwise inequivalent and stay in the subgroup.
#[test]
fn representatives_are_canonical() {
    let sp2 = GroupDescriptor::symplectic(1).unwrap();
    let lam = MultiIndex::new(&sp2, vec![1, -1]).unwrap();
    let set = lambda_class_representatives(&sp2, &lam, RingKind::Mixed, 3, BUDGET).unwrap();
    let ring = Ring::new(RingKind::Mixed, 3, set.depth).unwrap();
    assert_eq!(set.count(), 9);
    let mut keys = set.keys.clone();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), 9, "keys pairwise distinct");
    for y in &set.reps {
        assert!(sp2.contains(y, &ring));
        assert!(ring.val(y[(1, 0)]) >= 1, "lower entry divisible by pi");
    }
    // Keys are invariant under right multiplication by elements of
    // H = I cap a K a^{-1}: for lambda = (1,-1) these include y(pi c),
    // h(u) and x(pi^2 c).
    let mut h_gens = Vec::new();
    let mut y_low = Mat::identity(&ring, 2);
    y_low[(1, 0)] = ring.shift(ring.from_u64(2), 1);
    h_gens.push(y_low);
    let mut x_high = Mat::identity(&ring, 2);
    x_high[(0, 1)] = ring.shift(ring.one(), 2);
    h_gens.push(x_high);
    let mut torus = Mat::identity(&ring, 2);
    torus[(0, 0)] = ring.from_u64(2);
    torus[(1, 1)] = ring.inv(ring.from_u64(2)).unwrap();
    h_gens.push(torus);
    for y in &set.reps {
        let base = coset_key(y, &lam, &ring).unwrap();
        for h in &h_gens {
            let moved = coset_key(&y.mul(h, &ring), &lam, &ring).unwrap();
            assert_eq!(base, moved, "key invariant under the stabilizer");
        }
    }
}

#[test]
fn deterministic_representatives() {
    let sp2 = GroupDescriptor::symplectic(1).unwrap();
    let lam = MultiIndex::new(&sp2, vec![2, -2]).unwrap();
    let a = lambda_class_representatives(&sp2, &lam, RingKind::Mixed, 3, BUDGET).unwrap();
    let b = lambda_class_representatives(&sp2, &lam, RingKind::Mixed, 3, BUDGET).unwrap();
    assert_eq!(a.reps, b.reps);
    assert_eq!(a.count(), 81);
}
