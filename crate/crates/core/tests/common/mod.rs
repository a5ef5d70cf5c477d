//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type CMatrix = DMatrix<Complex64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Double-double accumulation (Knuth two-sum); about 106 bits of precision.
pub fn dd_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let (mut hi, mut lo) = (0.0f64, 0.0f64);
    for t in terms {
        let s = hi + t;
        let bp = s - hi;
        let err = (hi - (s - bp)) + (t - bp);
        hi = s;
        lo += err;
    }
    hi + lo
}

pub fn random_complex<R: Rng>(r: &mut R, scale: f64) -> Complex64 {
    c(r.random_range(-scale..scale), r.random_range(-scale..scale))
}

pub fn random_matrix<R: Rng>(r: &mut R, n: usize, m: usize, scale: f64) -> CMatrix {
    CMatrix::from_fn(n, m, |_, _| random_complex(r, scale))
}

/// Gaussian elimination with partial pivoting on `a x = b`.
pub fn gauss_solve(a: &CMatrix, b: &[Complex64]) -> Vec<Complex64> {
    let n = a.nrows();
    let mut m: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)]).chain(std::iter::once(b[i])).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())).unwrap();
        m.swap(col, piv);
        let pivot_row = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            let f = row[col] / pivot_row[col];
            for (t, &v) in row.iter_mut().zip(&pivot_row).skip(col) {
                *t -= f * v;
            }
        }
    }
    let mut x = vec![c(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut s = m[i][n];
        for j in i + 1..n {
            s -= m[i][j] * x[j];
        }
        x[i] = s / m[i][i];
    }
    x
}

/// Determinant from the same elimination (product of pivots, sign of swaps).
pub fn lu_det(a: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut m: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| a[(i, j)]).collect()).collect();
    let mut det = c(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())).unwrap();
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        let p = m[col][col];
        if p.norm() == 0.0 {
            return c(0.0, 0.0);
        }
        det *= p;
        let pivot_row = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            let f = row[col] / p;
            for (t, &v) in row.iter_mut().zip(&pivot_row).skip(col) {
                *t -= f * v;
            }
        }
    }
    det
}

/// Singular values as square roots of the eigenvalues of the Hermitian `A^H A`,
/// sorted descending.
pub fn singular_values_hermitian(a: &CMatrix) -> Vec<f64> {
    let h = a.adjoint() * a;
    let eig = h.symmetric_eigen();
    let mut s: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

pub fn spectral_norm(a: &CMatrix) -> f64 {
    singular_values_hermitian(a).first().copied().unwrap_or(0.0)
}

/// Columns of a random `d x n` matrix orthonormalized by QR.
pub fn random_orthonormal<R: Rng>(r: &mut R, d: usize, n: usize) -> CMatrix {
    let a = random_matrix(r, d, n, 1.0);
    a.qr().q()
}

pub fn columns(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.ncols()).map(|j| m.column(j).iter().copied().collect()).collect()
}

pub fn rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}
