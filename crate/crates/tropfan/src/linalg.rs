//! Small dense integer linear algebra over `BigInt`.
//!
//! Matrices are row lists. Nothing here is clever: the matrices that show up
//! in fan computations have a handful of rows and columns, and exactness is
//! what matters.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntVector = Vec<BigInt>;

/// Build an integer vector from machine integers.
pub fn ivec(xs: &[i64]) -> IntVector {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn zero_vec(n: usize) -> IntVector {
    vec![BigInt::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> IntVector {
    let mut v = zero_vec(n);
    v[i] = BigInt::one();
    v
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(k: &BigInt, v: &[BigInt]) -> IntVector {
    v.iter().map(|x| k * x).collect()
}

pub fn neg(v: &[BigInt]) -> IntVector {
    v.iter().map(|x| -x).collect()
}

/// `a*x + b*y` entrywise.
pub fn combine(a: &BigInt, x: &[BigInt], b: &BigInt, y: &[BigInt]) -> IntVector {
    x.iter().zip(y).map(|(p, q)| a * p + b * q).collect()
}

pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divide out the gcd of the entries. The zero vector is returned unchanged.
pub fn primitive(v: &[BigInt]) -> IntVector {
    let g = content(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Primitive, with the first nonzero entry made positive.
pub fn primitive_normalized(v: &[BigInt]) -> IntVector {
    let mut p = primitive(v);
    if let Some(first) = p.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            p = neg(&p);
        }
    }
    p
}

pub fn transpose(m: &[IntVector], ncols: usize) -> Vec<IntVector> {
    (0..ncols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_vec(m: &[IntVector], v: &[BigInt]) -> IntVector {
    m.iter().map(|r| dot(r, v)).collect()
}

/// Row vector times matrix: `sum_i v[i] * m[i]`.
pub fn vec_mat(v: &[BigInt], m: &[IntVector], ncols: usize) -> IntVector {
    let mut out = zero_vec(ncols);
    for (c, row) in v.iter().zip(m) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o += c * x;
        }
    }
    out
}

/// Rank over the rationals, by fraction-free elimination.
pub fn rank(rows: &[IntVector]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<IntVector> = rows.to_vec();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let a = m[r][c].clone();
            let b = m[i][c].clone();
            let new = combine(&a, &m[i], &(-b), &m[r]);
            m[i] = primitive(&new);
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Determinant of a square matrix (Bareiss).
pub fn det(m: &[IntVector]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<IntVector> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Row-style Hermite normal form with the unimodular transform.
///
/// Returns `(h, u)` with `u * rows = h`. The nonzero rows of `h` come first,
/// are in echelon form with positive pivots, and every entry above a pivot is
/// reduced into `[0, pivot)`. The rows of `u` that produce the zero rows of
/// `h` form a basis of the integer left kernel.
pub fn hnf_with_transform(rows: &[IntVector], ncols: usize) -> (Vec<IntVector>, Vec<IntVector>) {
    let m = rows.len();
    let mut h: Vec<IntVector> = rows.to_vec();
    let mut u: Vec<IntVector> = (0..m).map(|i| unit_vec(m, i)).collect();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == m {
            break;
        }
        // Euclid on column c among rows r..m, accumulating into row r.
        loop {
            let nz: Vec<usize> = (r..m).filter(|&i| !h[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            // move the smallest entry up
            let best = *nz.iter().min_by(|&&a, &&b| h[a][c].abs().cmp(&h[b][c].abs())).unwrap();
            h.swap(r, best);
            u.swap(r, best);
            let mut done = true;
            for i in r + 1..m {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                let hr = h[r].clone();
                let ur = u[r].clone();
                for (x, y) in h[i].iter_mut().zip(&hr) {
                    *x -= &q * y;
                }
                for (x, y) in u[i].iter_mut().zip(&ur) {
                    *x -= &q * y;
                }
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            h[r] = neg(&h[r]);
            u[r] = neg(&u[r]);
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if q.is_zero() {
                continue;
            }
            let hr = h[r].clone();
            let ur = u[r].clone();
            for (x, y) in h[i].iter_mut().zip(&hr) {
                *x -= &q * y;
            }
            for (x, y) in u[i].iter_mut().zip(&ur) {
                *x -= &q * y;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (h, u)
}

/// Integer basis of `{x : rows * x = 0}`, as rows. The result is saturated.
pub fn right_kernel(rows: &[IntVector], ncols: usize) -> Vec<IntVector> {
    if rows.is_empty() {
        return (0..ncols).map(|i| unit_vec(ncols, i)).collect();
    }
    let t = transpose(rows, ncols);
    let (h, u) = hnf_with_transform(&t, rows.len());
    h.iter()
        .zip(u)
        .filter(|(hr, _)| is_zero_vec(hr))
        .map(|(_, ur)| ur)
        .collect()
}

/// Solve `a * x = b` over the rationals for a square nonsingular `a`.
pub fn solve_rational(a: &[IntVector], b: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r: Vec<BigRational> = row.iter().map(|x| BigRational::from(x.clone())).collect();
            r.push(BigRational::from(bi.clone()));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let piv = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &piv;
        }
        let pr = m[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pr) {
                *x -= &f * y;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Clear denominators of a rational vector; returns the primitive integer
/// vector pointing the same way (the zero vector stays zero).
pub fn clear_denominators(v: &[BigRational]) -> IntVector {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: IntVector = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    primitive(&ints)
}

/// Is `{y in Q^d : a_i·y >= b_i for all i}` nonempty. Fourier-Motzkin
/// elimination; fine for the handful of rows and variables used here.
pub fn inequalities_feasible(a: &[IntVector], b: &[BigInt], d: usize) -> bool {
    let mut rows: Vec<(IntVector, BigInt)> = a.iter().cloned().zip(b.iter().cloned()).collect();
    for j in 0..d {
        let (mut pos, mut negs, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.0[j].is_positive() {
                pos.push(r);
            } else if r.0[j].is_negative() {
                negs.push(r);
            } else {
                rest.push(r);
            }
        }
        for (pa, pb) in &pos {
            for (na, nb) in &negs {
                let (u, v) = (-&na[j], pa[j].clone());
                let row = combine(&u, pa, &v, na);
                let rhs = &u * pb + &v * nb;
                let g = content(&row).gcd(&rhs);
                if g.is_zero() {
                    rest.push((row, rhs));
                } else {
                    rest.push((row.iter().map(|x| x / &g).collect(), rhs / &g));
                }
            }
        }
        rest.sort();
        rest.dedup();
        rows = rest;
    }
    rows.iter().all(|(_, rhs)| !rhs.is_positive())
}

/// Adjugate of a square integer matrix, so that `adj * m = det(m) * I`.
#[allow(clippy::needless_range_loop)]
pub fn adjugate(m: &[IntVector]) -> Vec<IntVector> {
    let n = m.len();
    if n == 1 {
        return vec![vec![BigInt::one()]];
    }
    let mut adj = vec![zero_vec(n); n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<IntVector> = m
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let d = det(&minor);
            adj[j][i] = if (i + j) % 2 == 0 { d } else { -d };
        }
    }
    adj
}
