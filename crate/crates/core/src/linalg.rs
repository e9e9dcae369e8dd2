//! Small dense linear algebra over `f64` and exact rationals.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_traits::{Num, Signed, Zero};

use crate::math;
use crate::rational::{self, Rational};
use crate::{Error, Result};

pub type Matrix<T> = Vec<Vec<T>>;

/// Field operations plus the two places where floats and rationals differ:
/// when a value counts as zero and when a sum counts as one.
pub trait Scalar: Num + Clone + PartialOrd + Debug {
    fn to_f64(&self) -> f64;
    fn magnitude(&self) -> f64 {
        math::abs(self.to_f64())
    }
    /// Zero for pivoting purposes.
    fn is_negligible(&self) -> bool;
    /// Equal to one up to the representation's rounding.
    fn is_one_within_rounding(&self) -> bool;
}

impl Scalar for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_negligible(&self) -> bool {
        math::abs(*self) < 1e-14
    }
    fn is_one_within_rounding(&self) -> bool {
        math::abs(*self - 1.0) <= 1e-12
    }
}

impl Scalar for Rational {
    fn to_f64(&self) -> f64 {
        rational::to_f64(self)
    }
    fn magnitude(&self) -> f64 {
        rational::to_f64(&self.abs())
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
    fn is_one_within_rounding(&self) -> bool {
        *self == Rational::from_integer(1.into())
    }
}

pub fn identity<T: Scalar>(k: usize) -> Matrix<T> {
    (0..k).map(|i| (0..k).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

pub fn mat_mul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    let inner = b.len();
    if a.iter().any(|row| row.len() != inner) {
        return Err(Error::Dimension { expected: inner, found: a.first().map_or(0, Vec::len) });
    }
    let cols = b.first().map_or(0, Vec::len);
    Ok(a
        .iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).fold(T::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone()))
                .collect()
        })
        .collect())
}

/// Row vector times matrix.
pub fn vec_mat<T: Scalar>(v: &[T], m: &Matrix<T>) -> Result<Vec<T>> {
    if v.len() != m.len() {
        return Err(Error::Dimension { expected: m.len(), found: v.len() });
    }
    let cols = m.first().map_or(0, Vec::len);
    Ok((0..cols).map(|j| v.iter().zip(m).fold(T::zero(), |acc, (x, row)| acc + x.clone() * row[j].clone())).collect())
}

pub fn transpose<T: Clone>(m: &Matrix<T>) -> Matrix<T> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting on magnitude.
pub fn solve<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    let k = a.len();
    if b.len() != k || a.iter().any(|row| row.len() != k) {
        return Err(Error::Dimension { expected: k, found: b.len() });
    }
    let mut m: Matrix<T> = a.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain([bi.clone()]).collect()).collect();
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| m[i][col].magnitude().total_cmp(&m[j][col].magnitude()))
            .expect("non-empty range");
        if m[pivot][col].is_negligible() {
            return Err(Error::Singular);
        }
        m.swap(col, pivot);
        let head = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone() / head[col].clone();
            for (x, h) in row.iter_mut().zip(&head).skip(col) {
                *x = x.clone() - factor.clone() * h.clone();
            }
        }
    }
    let mut x = vec![T::zero(); k];
    for i in (0..k).rev() {
        let tail = (i + 1..k).fold(T::zero(), |acc, j| acc + m[i][j].clone() * x[j].clone());
        x[i] = (m[i][k].clone() - tail) / m[i][i].clone();
    }
    Ok(x)
}

/// Cholesky factor `L` with `a = L Lᵀ` for a symmetric positive definite `a`.
pub fn cholesky(a: &Matrix<f64>) -> Result<Matrix<f64>> {
    let k = a.len();
    let mut l = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..=i {
            let s: f64 = (0..j).map(|p| l[i][p] * l[j][p]).sum();
            if i == j {
                let d = a[i][i] - s;
                if !(d > 0.0) || d <= 1e-13 * math::abs(a[i][i]) {
                    return Err(Error::Singular);
                }
                l[i][i] = math::sqrt(d);
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    Ok(l)
}

/// Solves `L Lᵀ x = b` given the Cholesky factor.
pub fn cholesky_solve(l: &Matrix<f64>, b: &[f64]) -> Vec<f64> {
    let k = l.len();
    let mut y = vec![0.0; k];
    for i in 0..k {
        y[i] = (b[i] - (0..i).map(|p| l[i][p] * y[p]).sum::<f64>()) / l[i][i];
    }
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        x[i] = (y[i] - (i + 1..k).map(|p| l[p][i] * x[p]).sum::<f64>()) / l[i][i];
    }
    x
}

/// Inverse of a symmetric positive definite matrix from its Cholesky factor.
pub fn cholesky_inverse(l: &Matrix<f64>) -> Matrix<f64> {
    let k = l.len();
    let cols: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            let e: Vec<f64> = (0..k).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
            cholesky_solve(l, &e)
        })
        .collect();
    transpose(&cols)
}

/// Rank of a column set by Gram-Schmidt with a relative tolerance.
pub fn column_rank(columns: &[Vec<f64>], tol: f64) -> usize {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for c in columns {
        let norm0 = math::sqrt(c.iter().map(|x| x * x).sum());
        let mut v = c.clone();
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let norm = math::sqrt(v.iter().map(|x| x * x).sum());
        if norm0 > 0.0 && norm > tol * norm0 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    basis.len()
}
