//! Linear algebra over a prime field, with the modulus as a runtime value.
//!
//! Vectors and matrices are plain `Vec<u64>` structures reduced mod a prime
//! m. Shared by the unipotent classifier (m = q) and the character-table
//! machinery (m = a large auxiliary prime), so everything is written against
//! an explicit modulus rather than a ring context.

pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "not invertible mod {m}");
    old_s.rem_euclid(m as i128) as u64
}

pub fn mat_vec(a: &[Vec<u64>], v: &[u64], m: u64) -> Vec<u64> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).fold(0u128, |acc, (&x, &y)| acc + x as u128 * y as u128)
                as u128 % m as u128
        })
        .map(|x| x as u64)
        .collect()
}

pub fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], m: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let cols = b[0].len();
    (0..n)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let mut acc = 0u128;
                    for t in 0..b.len() {
                        acc += a[i][t] as u128 * b[t][j] as u128;
                    }
                    (acc % m as u128) as u64
                })
                .collect()
        })
        .collect()
}

/// Right kernel basis, free columns in ascending order (deterministic).
pub fn kernel_basis(a: &[Vec<u64>], m: u64) -> Vec<Vec<u64>> {
    let rows = a.len();
    let cols = if rows == 0 { return Vec::new() } else { a[0].len() };
    let mut mtx: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| x % m).collect()).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let piv = (row..rows).find(|&r| mtx[r][col] != 0);
        let Some(piv) = piv else { continue };
        mtx.swap(row, piv);
        let inv = inv_mod(mtx[row][col], m);
        for x in mtx[row].iter_mut() {
            *x = (*x as u128 * inv as u128 % m as u128) as u64;
        }
        for r in 0..rows {
            if r != row && mtx[r][col] != 0 {
                let f = mtx[r][col];
                for j in 0..cols {
                    let sub = (f as u128 * mtx[row][j] as u128) % m as u128;
                    mtx[r][j] = ((mtx[r][j] as u128 + m as u128 * m as u128 - sub)
                        % m as u128) as u64;
                }
            }
        }
        pivots.push((col, row));
        row += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(c, _)| c).collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for &(pc, pr) in &pivots {
            v[pc] = (m - mtx[pr][free] % m) % m;
        }
        basis.push(v);
    }
    basis
}

pub fn rank(a: &[Vec<u64>], m: u64) -> usize {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    cols - kernel_basis(a, m).len()
}

/// Row-reduce vectors into an echelon basis; returns (basis, pivot columns).
pub fn span_reduce(vectors: &[Vec<u64>], m: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for v in vectors {
        let mut v: Vec<u64> = v.iter().map(|&x| x % m).collect();
        for (b, &pc) in basis.iter().zip(&pivots) {
            if v[pc] != 0 {
                let f = v[pc];
                for (x, y) in v.iter_mut().zip(b) {
                    *x = ((*x as u128 + m as u128 * m as u128
                        - f as u128 * *y as u128 % m as u128)
                        % m as u128) as u64;
                }
            }
        }
        let Some(nz) = v.iter().position(|&x| x != 0) else { continue };
        let inv = inv_mod(v[nz], m);
        for x in v.iter_mut() {
            *x = (*x as u128 * inv as u128 % m as u128) as u64;
        }
        basis.push(v);
        pivots.push(nz);
    }
    (basis, pivots)
}

/// Remainder of v after elimination against an echelon basis.
pub fn reduce(v: &[u64], basis: &[Vec<u64>], pivots: &[usize], m: u64) -> Vec<u64> {
    let mut v: Vec<u64> = v.iter().map(|&x| x % m).collect();
    for (b, &pc) in basis.iter().zip(pivots) {
        if v[pc] != 0 {
            let f = v[pc];
            for (x, y) in v.iter_mut().zip(b) {
                *x = ((*x as u128 + m as u128 * m as u128 - f as u128 * *y as u128 % m as u128)
                    % m as u128) as u64;
            }
        }
    }
    v
}

pub fn in_span(v: &[u64], basis: &[Vec<u64>], pivots: &[usize], m: u64) -> bool {
    reduce(v, basis, pivots, m).iter().all(|&x| x == 0)
}

pub fn det(a: &[Vec<u64>], m: u64) -> u64 {
    let n = a.len();
    let mut mtx: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| x % m).collect()).collect();
    let mut det: u64 = 1;
    let mut neg = false;
    for col in 0..n {
        let piv = (col..n).find(|&r| mtx[r][col] != 0);
        let Some(piv) = piv else { return 0 };
        if piv != col {
            mtx.swap(col, piv);
            neg = !neg;
        }
        det = (det as u128 * mtx[col][col] as u128 % m as u128) as u64;
        let inv = inv_mod(mtx[col][col], m);
        for r in col + 1..n {
            if mtx[r][col] != 0 {
                let f = (mtx[r][col] as u128 * inv as u128 % m as u128) as u64;
                for j in 0..n {
                    let sub = f as u128 * mtx[col][j] as u128 % m as u128;
                    mtx[r][j] = ((mtx[r][j] as u128 + m as u128 * m as u128 - sub)
                        % m as u128) as u64;
                }
            }
        }
    }
    if neg {
        (m - det) % m
    } else {
        det
    }
}

/// One solution of A x = b (assumed consistent), zeros on free columns.
pub fn solve(a: &[Vec<u64>], b: &[u64], m: u64) -> Vec<u64> {
    let rows = a.len();
    let cols = a[0].len();
    let mut mtx: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(r, &bb)| {
            let mut row: Vec<u64> = r.iter().map(|&x| x % m).collect();
            row.push(bb % m);
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let piv = (row..rows).find(|&r| mtx[r][col] != 0);
        let Some(piv) = piv else { continue };
        mtx.swap(row, piv);
        let inv = inv_mod(mtx[row][col], m);
        for x in mtx[row].iter_mut() {
            *x = (*x as u128 * inv as u128 % m as u128) as u64;
        }
        for r in 0..rows {
            if r != row && mtx[r][col] != 0 {
                let f = mtx[r][col];
                for j in 0..=cols {
                    let sub = f as u128 * mtx[row][j] as u128 % m as u128;
                    mtx[r][j] = ((mtx[r][j] as u128 + m as u128 * m as u128 - sub)
                        % m as u128) as u64;
                }
            }
        }
        pivots.push((col, row));
        row += 1;
    }
    let mut x = vec![0u64; cols];
    for (pc, pr) in pivots {
        x[pc] = mtx[pr][cols];
    }
    x
}
