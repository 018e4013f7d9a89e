//! Split symplectic and odd special orthogonal groups over truncated rings.
//!
//! A [`GroupDescriptor`] fixes the group scheme (Sp(2n) or SO(2n+1), split,
//! with an antidiagonal invariant form) and provides the invariant form J,
//! the Lie algebra, generators, membership tests, exact orders, and finite
//! enumeration over O/pi^k. The odd orthogonal group is realized through the
//! adjoint action of GL(2) on its Lie algebra, which lands in SO(3) for the
//! antidiagonal form; this gives integral generators at every depth.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{HashMap, HashSet, VecDeque};
use thiserror::Error;

use crate::mat::Mat;
use crate::poly::{Poly, PolyMat};
use crate::ring::{Ring, RingKind, Rv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    Symplectic,
    OddOrthogonal,
}

/// A split classical group of rank n: Sp(2n) or SO(2n+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupDescriptor {
    kind: GroupKind,
    rank: usize,
}

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("rank {0} not supported (expected 1 or 2)")]
    BadRank(usize),
    #[error("enumeration budget of {budget} elements exceeded")]
    BudgetExceeded { budget: usize },
    #[error("element is not invertible over the residue field")]
    NotInvertible,
}

impl GroupDescriptor {
    pub fn symplectic(rank: usize) -> Result<Self, GroupError> {
        if rank == 0 || rank > 2 {
            return Err(GroupError::BadRank(rank));
        }
        Ok(GroupDescriptor { kind: GroupKind::Symplectic, rank })
    }

    pub fn odd_orthogonal(rank: usize) -> Result<Self, GroupError> {
        if rank != 1 {
            return Err(GroupError::BadRank(rank));
        }
        Ok(GroupDescriptor { kind: GroupKind::OddOrthogonal, rank })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Size of the defining matrices: 2n or 2n+1.
    pub fn mat_size(&self) -> usize {
        match self.kind {
            GroupKind::Symplectic => 2 * self.rank,
            GroupKind::OddOrthogonal => 2 * self.rank + 1,
        }
    }

    /// Dimension of the group variety, n(2n+1) in both families.
    pub fn dim(&self) -> usize {
        self.rank * (2 * self.rank + 1)
    }

    /// Short name like "Sp(2)" or "SO(3)".
    pub fn name(&self) -> String {
        match self.kind {
            GroupKind::Symplectic => format!("Sp({})", 2 * self.rank),
            GroupKind::OddOrthogonal => format!("SO({})", 2 * self.rank + 1),
        }
    }

    /// The invariant form: antisymmetric antidiagonal for Sp,
    /// symmetric antidiagonal of 1s for SO.
    pub fn j_rows(&self) -> Vec<Vec<i64>> {
        let r = self.mat_size();
        let mut j = vec![vec![0i64; r]; r];
        match self.kind {
            GroupKind::Symplectic => {
                let n = self.rank;
                for i in 1..=r {
                    j[i - 1][r - i] = if i <= n { 1 } else { -1 };
                }
            }
            GroupKind::OddOrthogonal => {
                for i in 0..r {
                    j[i][r - 1 - i] = 1;
                }
            }
        }
        j
    }

    pub fn j_matrix(&self, ring: &Ring) -> Mat {
        Mat::from_rows(ring, &self.j_rows())
    }

    /// Group membership over the given ring: tg J g = J and det g = 1.
    pub fn contains(&self, g: &Mat, ring: &Ring) -> bool {
        let j = self.j_matrix(ring);
        let lhs = g.transpose().mul(&j, ring).mul(g, ring);
        lhs == j && g.det(ring) == ring.one()
    }

    /// |G(F_q)| = q^(n^2) * prod_{i=1..n} (q^{2i} - 1).
    pub fn finite_order(&self, q: u64) -> BigUint {
        let n = self.rank as u32;
        let q = BigUint::from(q);
        let mut order = q.pow(n * n);
        for i in 1..=n {
            order *= q.pow(2 * i) - BigUint::one();
        }
        order
    }

    /// |G(O/pi^k)| = |G(F_p)| * p^(dim * (k-1)); smooth fibers of size p^dim.
    pub fn truncated_order(&self, p: u64, k: u32) -> BigUint {
        self.finite_order(p) * BigUint::from(p).pow(self.dim() as u32 * (k - 1))
    }

    /// Integer basis of the Lie algebra {X : tX J + J X = 0}, computed by
    /// exact kernel extraction with a fixed pivot order.
    pub fn lie_basis(&self) -> Vec<Vec<Vec<i64>>> {
        let r = self.mat_size();
        let j = self.j_rows();
        // Constraint matrix: rows indexed by (i,j), columns by entries (t,s)
        // of X; equation sum_t X_ti J_tj + J_it X_tj = 0.
        let mut rows = Vec::new();
        for i in 0..r {
            for jj in 0..r {
                let mut row = vec![BigRational::zero(); r * r];
                for t in 0..r {
                    row[t * r + i] += BigRational::from_integer(j[t][jj].into());
                    row[t * r + jj] += BigRational::from_integer(j[i][t].into());
                }
                rows.push(row);
            }
        }
        let kernel = rational_kernel(&rows, r * r);
        assert_eq!(kernel.len(), self.dim(), "Lie algebra dimension mismatch");
        kernel
            .into_iter()
            .map(|v| {
                let ints = clear_denominators(&v);
                (0..r).map(|i| (0..r).map(|jj| ints[i * r + jj]).collect()).collect()
            })
            .collect()
    }

    /// Generators of the full group G(O/pi^k): root elements with
    /// coefficients spanning the digit filtration, plus torus elements.
    pub fn group_generators(&self, ring: &Ring) -> Vec<Mat> {
        match self.kind {
            GroupKind::Symplectic => {
                let mut gens = Vec::new();
                for x in self.symplectic_root_matrices() {
                    for c in digit_coefficients(ring, 0) {
                        let m = root_element(ring, &x, c);
                        gens.push(m);
                    }
                }
                gens
            }
            GroupKind::OddOrthogonal => {
                let mut raw = Vec::new();
                for c in digit_coefficients(ring, 0) {
                    raw.push(gl2_elementary(ring, c, true));
                    raw.push(gl2_elementary(ring, c, false));
                }
                for u in ring.unit_generators() {
                    raw.push(gl2_diag(ring, u));
                }
                raw.iter().map(|g| so3_from_gl2(g, ring)).collect()
            }
        }
    }

    /// Generators of the standard Iwahori subgroup (elements upper
    /// triangular over the residue field), closed under inverses.
    pub fn iwahori_generators(&self, ring: &Ring) -> Vec<Mat> {
        let mut gens = match self.kind {
            GroupKind::Symplectic => {
                let mut out = Vec::new();
                for x in self.symplectic_root_matrices() {
                    let lower = is_lower_root(&x);
                    for c in digit_coefficients(ring, if lower { 1 } else { 0 }) {
                        out.push(root_element(ring, &x, c));
                    }
                }
                for u in ring.unit_generators() {
                    out.extend(self.symplectic_torus(ring, u));
                }
                out
            }
            GroupKind::OddOrthogonal => {
                let mut raw = Vec::new();
                for c in digit_coefficients(ring, 0) {
                    raw.push(gl2_elementary(ring, c, true));
                }
                for c in digit_coefficients(ring, 1) {
                    raw.push(gl2_elementary(ring, c, false));
                }
                for u in ring.unit_generators() {
                    raw.push(gl2_diag(ring, u));
                }
                raw.iter().map(|g| so3_from_gl2(g, ring)).collect()
            }
        };
        let inverses: Vec<Mat> = gens
            .iter()
            .map(|g| g.inv(ring).expect("generators are invertible"))
            .collect();
        gens.extend(inverses);
        gens
    }

    /// Nilpotent root-direction matrices X with I + cX in the group.
    fn symplectic_root_matrices(&self) -> Vec<Vec<Vec<i64>>> {
        let r = self.mat_size();
        let jr = self.j_rows();
        let e = |i: usize, jj: usize| -> Vec<Vec<i64>> {
            let mut m = vec![vec![0i64; r]; r];
            m[i][jj] = 1;
            m
        };
        let add = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>, s: i64| -> Vec<Vec<i64>> {
            a.iter()
                .zip(b)
                .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + s * y).collect())
                .collect()
        };
        let in_lie = |x: &Vec<Vec<i64>>| -> bool {
            for i in 0..r {
                for jj in 0..r {
                    let mut acc = 0i64;
                    for t in 0..r {
                        acc += x[t][i] * jr[t][jj] + jr[i][t] * x[t][jj];
                    }
                    if acc != 0 {
                        return false;
                    }
                }
            }
            true
        };
        let mut cands = Vec::new();
        match self.rank {
            1 => {
                cands.push(e(0, 1));
                cands.push(e(1, 0));
            }
            2 => {
                for sign in [1i64, -1] {
                    cands.push(add(&e(0, 1), &e(2, 3), sign));
                    cands.push(add(&e(1, 0), &e(3, 2), sign));
                    cands.push(add(&e(0, 2), &e(1, 3), sign));
                    cands.push(add(&e(2, 0), &e(3, 1), sign));
                }
                cands.push(e(0, 3));
                cands.push(e(3, 0));
                cands.push(e(1, 2));
                cands.push(e(2, 1));
            }
            _ => unreachable!("rank validated at construction"),
        }
        let roots: Vec<_> = cands.into_iter().filter(|x| in_lie(x)).collect();
        assert_eq!(roots.len(), 2 * self.rank * self.rank, "root count");
        roots
    }

    fn symplectic_torus(&self, ring: &Ring, u: Rv) -> Vec<Mat> {
        let r = self.mat_size();
        let uinv = ring.inv(u).expect("torus coordinate must be a unit");
        let mut out = Vec::new();
        for slot in 0..self.rank {
            let mut m = Mat::identity(ring, r);
            m[(slot, slot)] = u;
            m[(r - 1 - slot, r - 1 - slot)] = uinv;
            out.push(m);
        }
        out
    }

    /// BFS enumeration of G(O/pi^k) in discovery order.
    pub fn enumerate_finite_group(
        &self,
        ring: &Ring,
        budget: usize,
    ) -> Result<Vec<Mat>, GroupError> {
        let gens = self.group_generators(ring);
        let start = Mat::identity(ring, self.mat_size());
        let mut seen: HashSet<Mat> = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        order.push(start.clone());
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = x.mul(g, ring);
                if !seen.contains(&y) {
                    if order.len() >= budget {
                        return Err(GroupError::BudgetExceeded { budget });
                    }
                    seen.insert(y.clone());
                    order.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(order)
    }

    /// The adjoint representation: the Lie basis together with the dim x dim
    /// matrix of Ad(g) = g X adj(g), with entries polynomial in the matrix
    /// entries of g (valid on the group, where det g = 1).
    pub fn adjoint_rep(&self) -> AdjointRep {
        let r = self.mat_size();
        let nvars = r * r;
        let basis = self.lie_basis();
        let dim = basis.len();
        let g = PolyMat::from_fn(r, nvars, |i, j| Poly::var(nvars, i * r + j));
        let adj = poly_adjugate(&g);
        // Gram matrix of the basis under the trace form, inverted exactly.
        let mut gram = vec![vec![BigRational::zero(); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let mut tr = 0i64;
                for i in 0..r {
                    for t in 0..r {
                        tr += basis[a][i][t] * basis[b][t][i];
                    }
                }
                gram[a][b] = BigRational::from_integer(tr.into());
            }
        }
        let gram_inv = rational_inverse(&gram).expect("trace form is nondegenerate");
        let mut ad_entries = vec![vec![Poly::zero(nvars); dim]; dim];
        for (i, b_i) in basis.iter().enumerate() {
            let bi = int_poly_mat(b_i, nvars);
            let m = poly_mat_mul(&poly_mat_mul(&g, &bi), &adj);
            // tr(M * B_k), then coordinates through the inverse Gram.
            let mut traces = Vec::with_capacity(dim);
            for b_k in &basis {
                let mut tr = Poly::zero(nvars);
                for a in 0..r {
                    for t in 0..r {
                        if b_k[t][a] != 0 {
                            let c = Poly::from_int(nvars, b_k[t][a]);
                            tr = tr.add(&m.entry(a, t).mul(&c));
                        }
                    }
                }
                traces.push(tr);
            }
            for j in 0..dim {
                let mut acc = Poly::zero(nvars);
                for (k, t) in traces.iter().enumerate() {
                    if !gram_inv[k][j].is_zero() {
                        acc = acc.add(&t.scale(&gram_inv[k][j]));
                    }
                }
                ad_entries[i][j] = acc;
            }
        }
        // Columns are the images of the basis vectors: Ad[j][i] coordinates.
        let ad = PolyMat::from_fn(dim, nvars, |row, col| ad_entries[col][row].clone());
        AdjointRep { basis, ad }
    }
}

/// Adjoint representation data: integer Lie basis and Ad(g) as a polynomial
/// matrix in the entries of g.
#[derive(Debug, Clone)]
pub struct AdjointRep {
    pub basis: Vec<Vec<Vec<i64>>>,
    pub ad: PolyMat,
}

impl AdjointRep {
    /// Evaluate Ad at a concrete group element.
    pub fn eval(&self, g: &Mat, ring: &Ring) -> Mat {
        self.ad.eval(ring, g.entries())
    }
}

/// I + c X for a nilpotent integer root direction X.
fn root_element(ring: &Ring, x: &[Vec<i64>], c: Rv) -> Mat {
    let r = x.len();
    let mut m = Mat::identity(ring, r);
    for i in 0..r {
        for j in 0..r {
            if x[i][j] != 0 {
                let v = ring.mul(c, ring.from_i64(x[i][j]));
                m[(i, j)] = ring.add(m[(i, j)], v);
            }
        }
    }
    m
}

fn is_lower_root(x: &[Vec<i64>]) -> bool {
    for (i, row) in x.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v != 0 {
                return i > j;
            }
        }
    }
    false
}

/// pi^shift times each power of the uniformizer that generates the digit
/// filtration additively: pi^shift, pi^(shift+1), ... (one generator in the
/// mixed ring, where pi^shift already generates additively).
fn digit_coefficients(ring: &Ring, shift: u32) -> Vec<Rv> {
    match ring.kind() {
        RingKind::Mixed => vec![ring.shift(ring.one(), shift)],
        RingKind::Equal => (shift..ring.depth())
            .map(|j| ring.shift(ring.one(), j))
            .collect(),
    }
}

fn gl2_elementary(ring: &Ring, c: Rv, upper: bool) -> Mat {
    let mut m = Mat::identity(ring, 2);
    if upper {
        m[(0, 1)] = c;
    } else {
        m[(1, 0)] = c;
    }
    m
}

fn gl2_diag(ring: &Ring, u: Rv) -> Mat {
    let mut m = Mat::identity(ring, 2);
    m[(0, 0)] = u;
    m
}

/// Adjoint action of g in GL(2) on its Lie algebra in the basis
/// (E, H, F) = (2e, h, f); lands in SO(3) for the antidiagonal form.
pub fn so3_from_gl2(g: &Mat, ring: &Ring) -> Mat {
    let det = g.det(ring);
    let dinv = ring.inv(det).expect("GL(2) element must have unit determinant");
    let ginv = g.adjugate(ring).scale(dinv, ring);
    let e = Mat::from_rows(ring, &[vec![0, 2], vec![0, 0]]);
    let h = Mat::from_rows(ring, &[vec![1, 0], vec![0, -1]]);
    let f = Mat::from_rows(ring, &[vec![0, 0], vec![1, 0]]);
    let half = ring.inv(ring.from_u64(2)).expect("2 is a unit, p odd");
    let mut out = Mat::zero(ring, 3);
    for (col, basis) in [&e, &h, &f].into_iter().enumerate() {
        let y = g.mul(basis, ring).mul(&ginv, ring);
        // Y = [[h, 2e], [f, -h]] in this basis.
        out[(0, col)] = ring.mul(y[(0, 1)], half);
        out[(1, col)] = y[(0, 0)];
        out[(2, col)] = y[(1, 0)];
    }
    out
}

/// Cayley transform (1 - u)(1 + u)^{-1}; defined when 1 + u is invertible.
pub fn cayley(u: &Mat, ring: &Ring) -> Result<Mat, GroupError> {
    let n = u.size();
    let one = Mat::identity(ring, n);
    let num = one.sub(u, ring);
    let den = one.add(u, ring);
    let den_inv = den.inv(ring).ok_or(GroupError::NotInvertible)?;
    Ok(num.mul(&den_inv, ring))
}

/// Is g unipotent over the residue field: (g - 1)^size = 0?
pub fn is_unipotent(g: &Mat, ring: &Ring) -> bool {
    let n = g.size();
    let nil = g.sub(&Mat::identity(ring, n), ring);
    let mut acc = Mat::identity(ring, n);
    for _ in 0..n {
        acc = acc.mul(&nil, ring);
    }
    acc == Mat::zero(ring, n)
}

fn int_poly_mat(m: &[Vec<i64>], nvars: usize) -> PolyMat {
    let n = m.len();
    PolyMat::from_fn(n, nvars, |i, j| Poly::from_int(nvars, m[i][j]))
}

fn poly_mat_mul(a: &PolyMat, b: &PolyMat) -> PolyMat {
    let n = a.n;
    let nvars = a.e[0].nvars;
    PolyMat::from_fn(n, nvars, |i, j| {
        let mut acc = Poly::zero(nvars);
        for t in 0..n {
            acc = acc.add(&a.entry(i, t).mul(b.entry(t, j)));
        }
        acc
    })
}

/// Polynomial adjugate via cofactor minors.
pub fn poly_adjugate(m: &PolyMat) -> PolyMat {
    let n = m.n;
    let nvars = m.e[0].nvars;
    let idx: Vec<usize> = (0..n).collect();
    PolyMat::from_fn(n, nvars, |i, j| {
        let rows: Vec<usize> = idx.iter().copied().filter(|&x| x != j).collect();
        let cols: Vec<usize> = idx.iter().copied().filter(|&x| x != i).collect();
        let minor = poly_det_sub(m, &rows, &cols);
        if (i + j) % 2 == 0 {
            minor
        } else {
            minor.neg()
        }
    })
}

pub fn poly_det(m: &PolyMat) -> Poly {
    let idx: Vec<usize> = (0..m.n).collect();
    poly_det_sub(m, &idx, &idx)
}

fn poly_det_sub(m: &PolyMat, rows: &[usize], cols: &[usize]) -> Poly {
    let nvars = m.e[0].nvars;
    if rows.is_empty() {
        return Poly::from_int(nvars, 1);
    }
    if rows.len() == 1 {
        return m.entry(rows[0], cols[0]).clone();
    }
    let mut acc = Poly::zero(nvars);
    for (idx, &c) in cols.iter().enumerate() {
        let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = poly_det_sub(m, &rows[1..], &sub_cols);
        let term = m.entry(rows[0], c).mul(&minor);
        acc = if idx % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn rational_kernel(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let nrows = m.len();
    let mut pivots: HashMap<usize, usize> = HashMap::new();
    let mut row = 0;
    for col in 0..ncols {
        let piv = (row..nrows).find(|&r| !m[r][col].is_zero());
        let Some(piv) = piv else { continue };
        m.swap(row, piv);
        let inv = m[row][col].clone();
        for x in m[row].iter_mut() {
            *x /= &inv;
        }
        for r in 0..nrows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let delta = &f * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.insert(col, row);
        row += 1;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains_key(c)) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (&pc, &pr) in &pivots {
            v[pc] = -m[pr][free].clone();
        }
        basis.push(v);
    }
    basis
}

fn clear_denominators(v: &[BigRational]) -> Vec<i64> {
    use num_bigint::BigInt;
    let mut lcm = BigInt::one();
    for x in v {
        let d = x.denom();
        let g = num_integer::Integer::gcd(&lcm, d);
        lcm = lcm / g * d;
    }
    v.iter()
        .map(|x| {
            let scaled = x * BigRational::from_integer(lcm.clone());
            let i: BigInt = scaled.to_integer();
            i64::try_from(i).expect("basis entries are small")
        })
        .collect()
}

fn rational_inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { BigRational::one() } else { BigRational::zero() });
            }
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..2 * n {
                    let delta = &f * &a[col][j];
                    a[r][j] -= delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lie_dimensions() {
        assert_eq!(GroupDescriptor::symplectic(1).unwrap().lie_basis().len(), 3);
        assert_eq!(GroupDescriptor::symplectic(2).unwrap().lie_basis().len(), 10);
        assert_eq!(GroupDescriptor::odd_orthogonal(1).unwrap().lie_basis().len(), 3);
    }

    #[test]
    fn so3_model_lands_in_group() {
        let desc = GroupDescriptor::odd_orthogonal(1).unwrap();
        let ring = Ring::new(RingKind::Mixed, 5, 2).unwrap();
        for g in desc.group_generators(&ring) {
            assert!(desc.contains(&g, &ring));
        }
        for g in desc.iwahori_generators(&ring) {
            assert!(desc.contains(&g, &ring));
        }
    }

    #[test]
    fn cayley_example() {
        let ring = Ring::new(RingKind::Mixed, 7, 1).unwrap();
        let u = Mat::from_rows(&ring, &[vec![1, 1], vec![0, 1]]);
        let x = cayley(&u, &ring).unwrap();
        assert_eq!(x, Mat::from_rows(&ring, &[vec![0, 3], vec![0, 0]]));
    }

    #[test]
    fn symplectic_generators_in_group() {
        for rank in [1usize, 2] {
            let desc = GroupDescriptor::symplectic(rank).unwrap();
            let ring = Ring::new(RingKind::Mixed, 3, 2).unwrap();
            for g in desc.group_generators(&ring) {
                assert!(desc.contains(&g, &ring), "rank {rank}");
            }
        }
    }

    #[test]
    fn iwahori_generators_reduce_upper_triangular() {
        let desc = GroupDescriptor::symplectic(1).unwrap();
        for kind in [RingKind::Mixed, RingKind::Equal] {
            let ring = Ring::new(kind, 3, 3).unwrap();
            for g in desc.iwahori_generators(&ring) {
                for i in 0..2 {
                    for j in 0..i {
                        assert!(ring.val(g[(i, j)]) >= 1);
                    }
                }
            }
        }
    }
}
