//! Finite homogeneous Markov chains and the urn interchange models.
//!
//! Chains are generic over [`Scalar`]: `f64` rows must sum to one within
//! 1e-12, rational rows exactly.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::linalg::{self, Matrix, Scalar};
use crate::math;
use crate::rational::{self, from_u64, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix<T> {
    labels: Vec<String>,
    rows: Matrix<T>,
}

impl<T: Scalar> TransitionMatrix<T> {
    /// States labelled `0..k`.
    pub fn new(rows: Matrix<T>) -> Result<Self> {
        let labels = (0..rows.len()).map(|i| format!("{i}")).collect();
        Self::with_labels(labels, rows)
    }

    pub fn with_labels(labels: Vec<String>, rows: Matrix<T>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::domain("a chain needs at least one state"));
        }
        if labels.len() != k {
            return Err(Error::Dimension { expected: k, found: labels.len() });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Dimension { expected: k, found: row.len() });
            }
            if row.iter().any(|p| *p < T::zero() || *p > T::one()) {
                return Err(Error::domain(format!("row {i} has an entry outside [0, 1]")));
            }
            let total = row.iter().fold(T::zero(), |acc, p| acc + p.clone());
            if !total.is_one_within_rounding() {
                return Err(Error::domain(format!("row {i} sums to {}", total.to_f64())));
            }
        }
        Ok(Self { labels, rows })
    }

    pub fn states(&self) -> usize {
        self.rows.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> &Matrix<T> {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    pub fn to_f64(&self) -> TransitionMatrix<f64> {
        TransitionMatrix {
            labels: self.labels.clone(),
            rows: self.rows.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect(),
        }
    }

    fn product(&self, other: &Self) -> Self {
        let rows = linalg::mat_mul(&self.rows, &other.rows).expect("square matrices of equal size");
        Self { labels: self.labels.clone(), rows }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateDistribution<T> {
    probs: Vec<T>,
}

impl<T: Scalar> StateDistribution<T> {
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::domain("empty distribution"));
        }
        if probs.iter().any(|p| *p < T::zero()) {
            return Err(Error::domain("negative probability"));
        }
        let total = probs.iter().fold(T::zero(), |acc, p| acc + p.clone());
        if !total.is_one_within_rounding() {
            return Err(Error::domain(format!("probabilities sum to {}", total.to_f64())));
        }
        Ok(Self { probs })
    }

    pub fn point_mass(states: usize, at: usize) -> Result<Self> {
        if at >= states {
            return Err(Error::Dimension { expected: states, found: at + 1 });
        }
        Self::new((0..states).map(|i| if i == at { T::one() } else { T::zero() }).collect())
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `Σ i · π(i)` with states read as the integers `0..k`.
    pub fn mean_index(&self) -> T {
        let mut idx = T::zero();
        let mut total = T::zero();
        for p in &self.probs {
            total = total + idx.clone() * p.clone();
            idx = idx + T::one();
        }
        total
    }
}

/// One step: `d · P`.
pub fn step<T: Scalar>(d: &StateDistribution<T>, p: &TransitionMatrix<T>) -> Result<StateDistribution<T>> {
    let probs = linalg::vec_mat(&d.probs, &p.rows)?;
    Ok(StateDistribution { probs })
}

/// `d · P^r`, one step at a time.
pub fn evolve<T: Scalar>(d: &StateDistribution<T>, p: &TransitionMatrix<T>, r: u64) -> Result<StateDistribution<T>> {
    let mut cur = d.clone();
    for _ in 0..r {
        cur = step(&cur, p)?;
    }
    Ok(cur)
}

/// `P^n` by repeated squaring.
pub fn n_step<T: Scalar>(p: &TransitionMatrix<T>, mut n: u64) -> TransitionMatrix<T> {
    let mut acc = TransitionMatrix { labels: p.labels.clone(), rows: linalg::identity(p.states()) };
    let mut sq = p.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.product(&sq);
        }
        n >>= 1;
        if n > 0 {
            sq = sq.product(&sq);
        }
    }
    acc
}

/// Smallest `s ≤ max_power` with every entry of `P^s` positive, or `None`.
///
/// Only the zero pattern matters, so the powers are taken over booleans. A
/// primitive `k`-state matrix is positive by power `(k−1)² + 1`, which bounds
/// the search whatever `max_power` is.
pub fn is_ergodic<T: Scalar>(p: &TransitionMatrix<T>, max_power: u64) -> Option<u64> {
    let k = p.states();
    let pattern: Vec<Vec<bool>> = p.rows.iter().map(|r| r.iter().map(|x| !x.is_zero()).collect()).collect();
    let limit = max_power.min(((k - 1) * (k - 1) + 1) as u64);
    let mut cur = pattern.clone();
    for s in 1..=limit {
        if cur.iter().all(|r| r.iter().all(|&b| b)) {
            return Some(s);
        }
        cur = (0..k).map(|i| (0..k).map(|j| (0..k).any(|m| cur[i][m] && pattern[m][j])).collect()).collect();
    }
    None
}

/// Stationary law from `π(P − I) = 0` with one equation replaced by `Σπ = 1`.
pub fn stationary<T: Scalar>(p: &TransitionMatrix<T>) -> Result<StateDistribution<T>> {
    let k = p.states();
    if is_ergodic(p, (k * k) as u64).is_none() {
        return Err(Error::NotErgodic);
    }
    let mut a: Matrix<T> = linalg::transpose(&p.rows);
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = row[i].clone() - T::one();
    }
    a[k - 1] = vec![T::one(); k];
    let mut b = vec![T::zero(); k];
    b[k - 1] = T::one();
    let mut probs = linalg::solve(&a, &b)?;
    for x in &mut probs {
        // elimination can leave −1e-17 where the exact answer is 0
        if *x < T::zero() && x.is_negligible() {
            *x = T::zero();
        }
    }
    Ok(StateDistribution { probs })
}

/// Row 0 of `P^(2^squarings)`; a cross-check on [`stationary`]. Rounding
/// error roughly doubles per squaring, so a handful of squarings is best.
pub fn stationary_by_powers(p: &TransitionMatrix<f64>, squarings: u32) -> Vec<f64> {
    let mut m = p.clone();
    for _ in 0..squarings {
        m = m.product(&m);
    }
    m.rows[0].clone()
}

/// Two urns of `n` balls, `n` white and `n` black in all; state `w` is the
/// number of white balls in the first urn. Each step draws one ball from each
/// urn and swaps them.
pub fn bernoulli_laplace_chain(n: u64) -> Result<TransitionMatrix<Rational>> {
    if n == 0 {
        return Err(Error::domain("need at least one ball per urn"));
    }
    let n2 = from_u64(n * n);
    let k = n as usize + 1;
    let mut rows = vec![vec![Rational::zero(); k]; k];
    for w in 0..=n {
        let i = w as usize;
        let b = n - w;
        if w > 0 {
            rows[i][i - 1] = from_u64(w * w) / &n2;
        }
        if w < n {
            rows[i][i + 1] = from_u64(b * b) / &n2;
        }
        rows[i][i] = from_u64(2 * w * b) / &n2;
    }
    let labels = (0..=n).map(|w| format!("w={w}")).collect();
    TransitionMatrix::with_labels(labels, rows)
}

/// `C(n,w)² / C(2n,n)`, the stationary law of the interchange chain.
pub fn bernoulli_laplace_stationary(n: u64) -> Vec<Rational> {
    let total = rational::from_biguint(rational::binomial(2 * n, n));
    (0..=n)
        .map(|w| {
            let c = rational::from_biguint(rational::binomial(n, w));
            &c * &c / &total
        })
        .collect()
}

/// Expected white balls in the first urn after `r` interchanges, starting all white:
/// `n/2 + (n/2)(1 − 2/n)^r`.
pub fn expected_white(n: u64, r: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("need at least one ball per urn"));
    }
    let half = 0.5 * n as f64;
    let ratio = 1.0 - 2.0 / n as f64;
    let r = i32::try_from(r).map_or(f64::INFINITY, f64::from);
    let decay = if r.is_finite() { math::powi(ratio, r as i32) } else if math::abs(ratio) < 1.0 { 0.0 } else { ratio };
    Ok(half + half * decay)
}

/// The same closed form as an exact rational.
pub fn expected_white_exact(n: u64, r: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::domain("need at least one ball per urn"));
    }
    let half = from_u64(n) / from_u64(2);
    let ratio = Rational::one() - from_u64(2) / from_u64(n);
    Ok(&half + &half * rational::pow(&ratio, r))
}

/// Expected colour counts `E[urn][colour]` for three urns of `n` balls, urn
/// `i` starting with `n` balls of colour `i`. One cycle moves a uniformly
/// drawn ball from urn 1 to urn 2, then from urn 2 to urn 3, then from urn 3
/// back to urn 1. Expectations evolve linearly, since a uniform draw from an
/// urn of `m` balls carries colour `c` with probability `E[count_c]/m`.
pub fn three_urn_expected(n: u64, r: u64) -> Result<[[f64; 3]; 3]> {
    if n == 0 {
        return Err(Error::domain("need at least one ball per urn"));
    }
    let nf = n as f64;
    let mut e = [[0.0; 3]; 3];
    for (i, row) in e.iter_mut().enumerate() {
        row[i] = nf;
    }
    for _ in 0..r {
        let m1 = e[0].map(|c| c / nf);
        for c in 0..3 {
            e[0][c] -= m1[c];
            e[1][c] += m1[c];
        }
        let m2 = e[1].map(|c| c / (nf + 1.0));
        for c in 0..3 {
            e[1][c] -= m2[c];
            e[2][c] += m2[c];
        }
        let m3 = e[2].map(|c| c / (nf + 1.0));
        for c in 0..3 {
            e[2][c] -= m3[c];
            e[0][c] += m3[c];
        }
    }
    Ok(e)
}
