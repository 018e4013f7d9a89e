//! Brute-force conjugacy orbits inside a finite matrix group.
//!
//! Used to cross-check the classifier against ground truth: the orbits are
//! computed purely by conjugation closure under a generating set, with no
//! reference to labels.

use std::collections::{BTreeSet, VecDeque};

use classical_groups::{is_unipotent, GroupDescriptor, GroupError, Mat, Ring};

/// Conjugation orbits of a conjugation-closed set of elements under the
/// group generated by `generators`. Orbits are seeded from the smallest
/// remaining element and returned sorted, so the output is deterministic.
pub fn conjugacy_orbits(elements: &[Mat], generators: &[Mat], ring: &Ring) -> Vec<Vec<Mat>> {
    let all: BTreeSet<Mat> = elements.iter().cloned().collect();
    let pairs: Vec<(Mat, Mat)> = generators
        .iter()
        .map(|g| (g.clone(), g.inv(ring).expect("generators must be invertible")))
        .collect();
    let mut remaining = all.clone();
    let mut orbits = Vec::new();
    while let Some(seed) = remaining.iter().next().cloned() {
        let mut orbit: BTreeSet<Mat> = BTreeSet::new();
        let mut queue = VecDeque::new();
        orbit.insert(seed.clone());
        queue.push_back(seed);
        while let Some(x) = queue.pop_front() {
            for (g, ginv) in &pairs {
                let y = g.mul(&x, ring).mul(ginv, ring);
                assert!(all.contains(&y), "element set must be conjugation-closed");
                if orbit.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        for x in &orbit {
            remaining.remove(x);
        }
        orbits.push(orbit.into_iter().collect());
    }
    orbits
}

/// Enumerate the finite group, keep its unipotent elements, and split them
/// into conjugacy orbits.
pub fn unipotent_conjugacy_orbits(
    desc: &GroupDescriptor,
    ring: &Ring,
    budget: usize,
) -> Result<Vec<Vec<Mat>>, GroupError> {
    let elements = desc.enumerate_finite_group(ring, budget)?;
    let unipotents: Vec<Mat> =
        elements.into_iter().filter(|g| is_unipotent(g, ring)).collect();
    let generators = desc.group_generators(ring);
    Ok(conjugacy_orbits(&unipotents, &generators, ring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use classical_groups::RingKind;

    #[test]
    fn sl2_f3_unipotent_orbits() {
        let ring = Ring::new(RingKind::Mixed, 3, 1).unwrap();
        let desc = GroupDescriptor::symplectic(1).unwrap();
        let orbits = unipotent_conjugacy_orbits(&desc, &ring, 100).unwrap();
        let mut sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 4, 4]);
    }
}
