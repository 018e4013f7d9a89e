//! Dense square matrices over a truncated local ring.
//!
//! Matrix size never exceeds 5 here, so everything is naive O(n^3) with
//! row-major `Vec` storage. Inversion assumes the matrix is invertible over
//! the residue field, which is the only case the group machinery needs.

use crate::ring::{Ring, Rv};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    n: usize,
    e: Vec<Rv>,
}

impl Mat {
    pub fn zero(ring: &Ring, n: usize) -> Self {
        Mat { n, e: vec![ring.zero(); n * n] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Mat::zero(ring, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut m = Mat::zero(ring, n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "square matrix expected");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = ring.from_i64(x);
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Rv] {
        &self.e
    }

    pub fn mul(&self, other: &Mat, ring: &Ring) -> Mat {
        let n = self.n;
        let mut out = Mat::zero(ring, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ring.zero();
                for t in 0..n {
                    acc = ring.add(acc, ring.mul(self[(i, t)], other[(t, j)]));
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn add(&self, other: &Mat, ring: &Ring) -> Mat {
        let mut out = self.clone();
        for (a, b) in out.e.iter_mut().zip(&other.e) {
            *a = ring.add(*a, *b);
        }
        out
    }

    pub fn sub(&self, other: &Mat, ring: &Ring) -> Mat {
        let mut out = self.clone();
        for (a, b) in out.e.iter_mut().zip(&other.e) {
            *a = ring.sub(*a, *b);
        }
        out
    }

    pub fn scale(&self, c: Rv, ring: &Ring) -> Mat {
        let mut out = self.clone();
        for a in out.e.iter_mut() {
            *a = ring.mul(c, *a);
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)];
            }
        }
        out
    }

    /// Gaussian inverse; `None` when the matrix is not invertible over the
    /// residue field (pivots must be units).
    pub fn inv(&self, ring: &Ring) -> Option<Mat> {
        let n = self.n;
        let mut m: Vec<Vec<Rv>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rv> = (0..n).map(|j| self[(i, j)]).collect();
                for j in 0..n {
                    row.push(if i == j { ring.one() } else { ring.zero() });
                }
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| ring.is_unit(m[r][col]))?;
            m.swap(col, piv);
            let inv = ring.inv(m[col][col]).expect("pivot is a unit");
            for x in m[col].iter_mut() {
                *x = ring.mul(*x, inv);
            }
            for r in 0..n {
                if r != col && !ring.is_zero(m[r][col]) {
                    let f = m[r][col];
                    for j in 0..2 * n {
                        let delta = ring.mul(f, m[col][j]);
                        m[r][j] = ring.sub(m[r][j], delta);
                    }
                }
            }
        }
        let mut out = Mat::zero(ring, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = m[i][j + n];
            }
        }
        Some(out)
    }

    /// Determinant by fraction-free expansion over the minors (n <= 5).
    pub fn det(&self, ring: &Ring) -> Rv {
        fn rec(m: &Mat, ring: &Ring, rows: &[usize], cols: &[usize]) -> Rv {
            if rows.len() == 1 {
                return m[(rows[0], cols[0])];
            }
            let mut acc = ring.zero();
            for (idx, &c) in cols.iter().enumerate() {
                let sub_rows = &rows[1..];
                let sub_cols: Vec<usize> =
                    cols.iter().copied().filter(|&x| x != c).collect();
                let minor = rec(m, ring, sub_rows, &sub_cols);
                let term = ring.mul(m[(rows[0], c)], minor);
                acc = if idx % 2 == 0 { ring.add(acc, term) } else { ring.sub(acc, term) };
            }
            acc
        }
        let idx: Vec<usize> = (0..self.n).collect();
        rec(self, ring, &idx, &idx)
    }

    /// Adjugate matrix: adj(A) * A = det(A) * I.
    pub fn adjugate(&self, ring: &Ring) -> Mat {
        let n = self.n;
        let mut out = Mat::zero(ring, n);
        let idx: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = idx.iter().copied().filter(|&x| x != j).collect();
                let cols: Vec<usize> = idx.iter().copied().filter(|&x| x != i).collect();
                let minor = if rows.is_empty() {
                    ring.one()
                } else {
                    let sub = self.select(&rows, &cols, ring);
                    sub.det(ring)
                };
                out[(i, j)] = if (i + j) % 2 == 0 { minor } else { ring.neg(minor) };
            }
        }
        out
    }

    fn select(&self, rows: &[usize], cols: &[usize], ring: &Ring) -> Mat {
        let n = rows.len();
        let mut out = Mat::zero(ring, n);
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out[(i, j)] = self[(r, c)];
            }
        }
        out
    }

    /// Entry-wise reduction to a shallower truncation of the same ring.
    pub fn project(&self, from: &Ring, to: &Ring) -> Mat {
        let mut out = self.clone();
        for a in out.e.iter_mut() {
            *a = from.project(*a, to);
        }
        out
    }

    /// Is this the identity?
    pub fn is_identity(&self, ring: &Ring) -> bool {
        *self == Mat::identity(ring, self.n)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rv;
    fn index(&self, (i, j): (usize, usize)) -> &Rv {
        &self.e[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rv {
        &mut self.e[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingKind;

    #[test]
    fn inverse_roundtrip() {
        let ring = Ring::new(RingKind::Mixed, 3, 3).unwrap();
        let m = Mat::from_rows(&ring, &[vec![1, 1], vec![3, 4]]);
        let mi = m.inv(&ring).unwrap();
        assert!(m.mul(&mi, &ring).is_identity(&ring));
    }

    #[test]
    fn equal_char_inverse() {
        let ring = Ring::new(RingKind::Equal, 5, 2).unwrap();
        let t = ring.uniformizer();
        let mut m = Mat::identity(&ring, 2);
        m[(0, 1)] = t;
        m[(1, 0)] = ring.from_u64(2);
        let mi = m.inv(&ring).unwrap();
        assert!(m.mul(&mi, &ring).is_identity(&ring));
    }

    #[test]
    fn adjugate_identity() {
        let ring = Ring::new(RingKind::Mixed, 7, 2).unwrap();
        let m = Mat::from_rows(&ring, &[vec![1, 2, 0], vec![0, 1, 5], vec![3, 0, 1]]);
        let adj = m.adjugate(&ring);
        let d = m.det(&ring);
        let prod = adj.mul(&m, &ring);
        assert_eq!(prod, Mat::identity(&ring, 3).scale(d, &ring));
    }

    #[test]
    fn det_matches_diagonal_product() {
        let ring = Ring::new(RingKind::Mixed, 5, 2).unwrap();
        let m = Mat::from_rows(&ring, &[vec![2, 0], vec![0, 3]]);
        assert_eq!(m.det(&ring), ring.from_u64(6));
    }
}
