//! Fitting redundant observation equations and interval estimates of a mean.
//!
//! Observation equations are written `a_i x + b_i y + … + w_i = 0` and the
//! residuals are `v_i = a_i x̂ + b_i ŷ + … + w_i`. This is the opposite sign of
//! the observed-minus-computed convention common today: an observation `l_i`
//! of the unknown itself enters with `a_i = 1, w_i = −l_i`.

use alloc::vec;
use alloc::vec::Vec;

use crate::distributions::{normal_cdf, normal_quantile, Sample};
use crate::linalg::{self, Matrix};
use crate::math;
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Condition estimate of the normal equations above which a fit is flagged.
pub const ILL_CONDITIONED: f64 = 1e8;
/// Relative tolerance of the column-rank check.
pub const RANK_TOL: f64 = 1e-10;
pub const PNORM_MAX_ITERATIONS: usize = 200;
pub const PNORM_TOL: f64 = 1e-10;

/// `n` observation equations in `k < n` unknowns.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    coefficients: Matrix<f64>,
    free_terms: Vec<f64>,
}

impl LinearSystem {
    /// `coefficients` holds one row `(a_i, b_i, …)` per observation.
    pub fn new(coefficients: Matrix<f64>, free_terms: Vec<f64>) -> Result<Self> {
        let n = coefficients.len();
        if free_terms.len() != n {
            return Err(Error::Dimension { expected: n, found: free_terms.len() });
        }
        let k = coefficients.first().map_or(0, Vec::len);
        if k == 0 {
            return Err(Error::domain("need at least one unknown"));
        }
        if let Some(row) = coefficients.iter().find(|r| r.len() != k) {
            return Err(Error::Dimension { expected: k, found: row.len() });
        }
        if n <= k {
            return Err(Error::InsufficientData { needed: k + 1, got: n });
        }
        if coefficients.iter().flatten().chain(&free_terms).any(|x| !x.is_finite()) {
            return Err(Error::domain("coefficients must be finite"));
        }
        if linalg::column_rank(&linalg::transpose(&coefficients), RANK_TOL) < k {
            return Err(Error::Singular);
        }
        Ok(Self { coefficients, free_terms })
    }

    /// The system `x − l_i = 0` for observations `l_i` of a single unknown.
    pub fn direct_observations(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|_| vec![1.0]).collect(), values.iter().map(|l| -l).collect())
    }

    pub fn observations(&self) -> usize {
        self.coefficients.len()
    }

    pub fn unknowns(&self) -> usize {
        self.coefficients[0].len()
    }

    pub fn coefficients(&self) -> &Matrix<f64> {
        &self.coefficients
    }

    pub fn free_terms(&self) -> &[f64] {
        &self.free_terms
    }

    /// Coefficient column `j`: the `a`, `b`, … of the bracket notation.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.coefficients.iter().map(|r| r[j]).collect()
    }

    /// `v_i = a_i·x + w_i`.
    pub fn residuals(&self, estimates: &[f64]) -> Vec<f64> {
        self.coefficients
            .iter()
            .zip(&self.free_terms)
            .map(|(row, w)| row.iter().zip(estimates).map(|(a, x)| a * x).sum::<f64>() + w)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub estimates: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Variance of unit weight `[vv]/(n−k)`.
    pub m2: f64,
    /// Value of the minimized criterion.
    pub objective: f64,
    pub iterations: usize,
    /// Criterion after each accepted iteration; empty for direct solves.
    pub trace: Vec<f64>,
    /// 1-norm condition estimate of the (weighted) normal equations; `NaN` for the simplex.
    pub condition: f64,
}

impl FitResult {
    fn new(sys: &LinearSystem, estimates: Vec<f64>, objective: f64) -> Self {
        let residuals = sys.residuals(&estimates);
        let vv = gauss_bracket(&residuals, &residuals).expect("equal lengths");
        let m2 = vv / (sys.observations() - sys.unknowns()) as f64;
        Self { estimates, residuals, m2, objective, iterations: 0, trace: Vec::new(), condition: f64::NAN }
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, v| m.max(math::abs(*v)))
    }

    pub fn ill_conditioned(&self) -> bool {
        self.condition > ILL_CONDITIONED
    }
}

/// Gauss's bracket `[uv] = Σ u_i v_i`.
pub fn gauss_bracket(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::Dimension { expected: u.len(), found: v.len() });
    }
    Ok(u.iter().zip(v).map(|(a, b)| a * b).sum())
}

/// Solves the weighted normal equations `[p a a] x + … + [p a w] = 0`.
fn weighted_normal_solve(sys: &LinearSystem, weights: Option<&[f64]>) -> Result<(Vec<f64>, f64)> {
    let k = sys.unknowns();
    let cols: Vec<Vec<f64>> = (0..k).map(|j| sys.column(j)).collect();
    let weighted = |c: &[f64]| -> Vec<f64> {
        match weights {
            None => c.to_vec(),
            Some(p) => c.iter().zip(p).map(|(x, w)| x * w).collect(),
        }
    };
    let pcols: Vec<Vec<f64>> = cols.iter().map(|c| weighted(c)).collect();
    let normal: Matrix<f64> =
        (0..k).map(|i| (0..k).map(|j| gauss_bracket(&pcols[i], &cols[j]).expect("equal lengths")).collect()).collect();
    let rhs: Vec<f64> = pcols.iter().map(|c| -gauss_bracket(c, sys.free_terms()).expect("equal lengths")).collect();
    let l = linalg::cholesky(&normal)?;
    let x = linalg::cholesky_solve(&l, &rhs);
    let inv = linalg::cholesky_inverse(&l);
    let norm1 = |m: &Matrix<f64>| (0..k).map(|j| m.iter().map(|r| math::abs(r[j])).sum::<f64>()).fold(0.0, f64::max);
    Ok((x, norm1(&normal) * norm1(&inv)))
}

/// Minimizes `[vv]` through the normal equations.
pub fn least_squares(sys: &LinearSystem) -> Result<FitResult> {
    let (x, condition) = weighted_normal_solve(sys, None)?;
    let mut fit = FitResult::new(sys, x, 0.0);
    fit.objective = gauss_bracket(&fit.residuals, &fit.residuals)?;
    fit.condition = condition;
    Ok(fit)
}

/// Minimizes `max |v_i|` as the linear program
/// `min t  subject to  −t ≤ a_i·x + w_i ≤ t`, with `x = x⁺ − x⁻`.
pub fn minimax_fit(sys: &LinearSystem) -> Result<FitResult> {
    let n = sys.observations();
    let k = sys.unknowns();
    // columns: x⁺ (k), x⁻ (k), t
    let cols = 2 * k + 1;
    let mut rows = Vec::with_capacity(2 * n);
    let mut rhs = Vec::with_capacity(2 * n);
    for (a, w) in sys.coefficients().iter().zip(sys.free_terms()) {
        // a·x⁺ − a·x⁻ − t ≤ −w
        let mut up: Vec<f64> = a.iter().copied().chain(a.iter().map(|x| -x)).collect();
        up.push(-1.0);
        rows.push(up);
        rhs.push(-w);
        // −a·x⁺ + a·x⁻ − t ≤ w
        let mut down: Vec<f64> = a.iter().map(|x| -x).chain(a.iter().copied()).collect();
        down.push(-1.0);
        rows.push(down);
        rhs.push(*w);
    }
    let mut cost = vec![0.0; cols];
    cost[2 * k] = 1.0;
    let solution = simplex::minimize_le(&rows, &rhs, &cost)?;
    let x: Vec<f64> = (0..k).map(|j| solution[j] - solution[k + j]).collect();
    let mut fit = FitResult::new(sys, x, 0.0);
    fit.objective = fit.max_abs_residual();
    Ok(fit)
}

/// Minimizes `Σ v_i^(2k)` by iteratively reweighted least squares.
///
/// Each iteration solves the normal equations with weights `|v_i|^(2k−2)`;
/// the difference from the current estimate is a Newton direction scaled by
/// `2k−1`. The criterion is convex along that direction and the step is its
/// minimizer there, so the criterion falls at every accepted iteration.
/// Residuals are scaled by their initial maximum before raising to high
/// powers.
pub fn pnorm_fit(sys: &LinearSystem, k_exponent: u32) -> Result<FitResult> {
    if k_exponent == 0 {
        return Err(Error::domain("the exponent k must be at least 1"));
    }
    let power = 2 * k_exponent as i32;
    let start = least_squares(sys)?;
    let scale = start.max_abs_residual();
    if scale == 0.0 || k_exponent == 1 {
        let mut fit = start;
        fit.objective = fit.residuals.iter().map(|v| math::powi(*v, power)).sum();
        return Ok(fit);
    }
    let criterion = |x: &[f64]| -> f64 { sys.residuals(x).iter().map(|v| math::powi(v / scale, power)).sum() };
    let mut x = start.estimates.clone();
    let mut f = criterion(&x);
    let mut trace = vec![f];
    let mut condition;
    for iteration in 1..=PNORM_MAX_ITERATIONS {
        let v = sys.residuals(&x);
        let weights: Vec<f64> = v.iter().map(|r| math::powi(math::abs(r / scale), power - 2).max(1e-12)).collect();
        let (target, cond) = weighted_normal_solve(sys, Some(&weights))?;
        condition = cond;
        let direction: Vec<f64> = target.iter().zip(&x).map(|(t, c)| t - c).collect();
        let Some((next, fnext)) = line_minimum(sys, &x, &direction, scale, power, f) else {
            // no decrease along the Newton direction: the estimate is stationary to rounding
            return Ok(finish_pnorm(sys, x, power, iteration, trace, condition));
        };
        let moved = next.iter().zip(&x).map(|(a, b)| math::abs(a - b)).fold(0.0, f64::max);
        let size = x.iter().fold(0.0f64, |m, c| m.max(math::abs(*c)));
        x = next;
        f = fnext;
        trace.push(f);
        if moved <= PNORM_TOL * (1.0 + size) {
            return Ok(finish_pnorm(sys, x, power, iteration, trace, condition));
        }
    }
    Err(Error::Convergence { iterations: PNORM_MAX_ITERATIONS })
}

/// Minimizes `Σ (v/scale)^power` along `x + λd`, `λ ∈ [0, 1]`, by bisection on
/// the derivative. `None` when no point of the segment improves on `f0`.
fn line_minimum(sys: &LinearSystem, x: &[f64], d: &[f64], scale: f64, power: i32, f0: f64) -> Option<(Vec<f64>, f64)> {
    let v0: Vec<f64> = sys.residuals(x).iter().map(|v| v / scale).collect();
    let dv: Vec<f64> = sys.coefficients().iter().map(|row| row.iter().zip(d).map(|(a, di)| a * di).sum::<f64>() / scale).collect();
    let slope = |lambda: f64| -> f64 { v0.iter().zip(&dv).map(|(v, e)| math::powi(v + lambda * e, power - 1) * e).sum() };
    let lambda = if slope(1.0) <= 0.0 {
        1.0
    } else {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if slope(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let trial: Vec<f64> = x.iter().zip(d).map(|(c, di)| c + lambda * di).collect();
    let f: f64 = v0.iter().zip(&dv).map(|(v, e)| math::powi(v + lambda * e, power)).sum();
    (f <= f0 && lambda > 0.0).then_some((trial, f))
}

fn finish_pnorm(sys: &LinearSystem, x: Vec<f64>, power: i32, iterations: usize, trace: Vec<f64>, condition: f64) -> FitResult {
    let mut fit = FitResult::new(sys, x, 0.0);
    fit.objective = fit.residuals.iter().map(|v| math::powi(*v, power)).sum();
    fit.iterations = iterations;
    fit.trace = trace;
    fit.condition = condition;
    fit
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanError {
    pub mean: f64,
    /// `Σ(x_i − x̄)² / (n(n−1))`.
    pub variance_of_mean: f64,
    /// Square root of the variance of the mean.
    pub mean_square_error: f64,
}

pub fn mean_with_error(s: &Sample) -> Result<MeanError> {
    let n = s.len();
    let variance_of_mean = s.variance()? / n as f64;
    Ok(MeanError { mean: s.mean(), variance_of_mean, mean_square_error: math::sqrt(variance_of_mean) })
}

/// Two-sided normal interval `x̄ ± z·m` for the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub low: f64,
    pub high: f64,
    pub z: f64,
    pub mean_square_error: f64,
    /// Normal probability of the band `x̄ ± m`, i.e. `Φ(1) − Φ(−1)`.
    pub one_m_probability: f64,
}

pub fn confidence_interval(s: &Sample, coverage: f64) -> Result<ConfidenceInterval> {
    if !(coverage > 0.0 && coverage < 1.0) {
        return Err(Error::domain("coverage must lie strictly between 0 and 1"));
    }
    let me = mean_with_error(s)?;
    let z = normal_quantile(0.5 * (1.0 + coverage));
    Ok(ConfidenceInterval {
        low: me.mean - z * me.mean_square_error,
        high: me.mean + z * me.mean_square_error,
        z,
        mean_square_error: me.mean_square_error,
        one_m_probability: normal_cdf(1.0) - normal_cdf(-1.0),
    })
}

/// `P(x_min ≤ A ≤ x_max) = 1 − 1/2^(n−1)` for `n` observations with median `A`.
pub fn bervi_coverage(n: u64) -> Result<Rational> {
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n as usize });
    }
    Ok(rational::int(1) - rational::pow(&rational::ratio(1, 2), n - 1))
}

mod simplex {
    //! Dense two-phase tableau simplex with Bland's rule.

    use alloc::vec;
    use alloc::vec::Vec;

    use crate::math;
    use crate::{Error, Result};

    const EPS: f64 = 1e-11;
    const MAX_PIVOTS: usize = 100_000;

    struct Tableau {
        /// Constraint rows, right-hand side last.
        rows: Vec<Vec<f64>>,
        basis: Vec<usize>,
    }

    impl Tableau {
        fn rhs(&self, i: usize) -> f64 {
            *self.rows[i].last().expect("non-empty row")
        }

        fn pivot(&mut self, r: usize, c: usize) {
            let p = self.rows[r][c];
            self.rows[r].iter_mut().for_each(|x| *x /= p);
            let pivot_row = self.rows[r].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i == r {
                    continue;
                }
                let f = row[c];
                if f != 0.0 {
                    row.iter_mut().zip(&pivot_row).for_each(|(x, y)| *x -= f * y);
                    row[c] = 0.0;
                }
            }
            self.basis[r] = c;
        }

        /// Minimizes `cost` over columns `< allowed`.
        fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<()> {
            for _ in 0..MAX_PIVOTS {
                let entering = (0..allowed).find(|&j| {
                    if self.basis.contains(&j) {
                        return false;
                    }
                    let reduced = cost[j] - self.basis.iter().enumerate().map(|(i, &b)| cost[b] * self.rows[i][j]).sum::<f64>();
                    reduced < -EPS
                });
                let Some(c) = entering else { return Ok(()) };
                let mut leave: Option<(usize, f64)> = None;
                for i in 0..self.rows.len() {
                    let a = self.rows[i][c];
                    if a > EPS {
                        let ratio = self.rhs(i) / a;
                        let better = match leave {
                            None => true,
                            Some((li, lr)) => ratio < lr - EPS || (math::abs(ratio - lr) <= EPS && self.basis[i] < self.basis[li]),
                        };
                        if better {
                            leave = Some((i, ratio));
                        }
                    }
                }
                let Some((r, _)) = leave else {
                    return Err(Error::Internal("linear program is unbounded".into()));
                };
                self.pivot(r, c);
            }
            Err(Error::Internal("simplex pivot limit reached".into()))
        }
    }

    /// Minimizes `cost·x` subject to `rows·x ≤ rhs`, `x ≥ 0`.
    pub(super) fn minimize_le(rows: &[Vec<f64>], rhs: &[f64], cost: &[f64]) -> Result<Vec<f64>> {
        let m = rows.len();
        let nv = cost.len();
        // columns: variables, slacks (m), artificials (m), rhs
        let width = nv + 2 * m + 1;
        let mut t = Tableau { rows: Vec::with_capacity(m), basis: Vec::with_capacity(m) };
        for (i, (row, &b)) in rows.iter().zip(rhs).enumerate() {
            let sign = if b < 0.0 { -1.0 } else { 1.0 };
            let mut r = vec![0.0; width];
            for (j, a) in row.iter().enumerate() {
                r[j] = sign * a;
            }
            r[nv + i] = sign;
            r[nv + m + i] = 1.0;
            r[width - 1] = sign * b;
            t.rows.push(r);
            t.basis.push(nv + m + i);
        }
        let mut phase1 = vec![0.0; nv + 2 * m];
        phase1[nv + m..].iter_mut().for_each(|c| *c = 1.0);
        t.optimize(&phase1, nv + 2 * m)?;
        let infeasibility: f64 = (0..m).filter(|&i| t.basis[i] >= nv + m).map(|i| t.rhs(i)).sum();
        let scale = 1.0 + rhs.iter().fold(0.0f64, |s, b| s.max(math::abs(*b)));
        if infeasibility > 1e-9 * scale {
            return Err(Error::Internal("linear program is infeasible".into()));
        }
        // drive zero-level artificials out of the basis; drop rows where that is impossible
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= nv + m {
                match (0..nv + m).find(|&j| math::abs(t.rows[i][j]) > EPS) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        let mut phase2 = vec![0.0; nv + 2 * m];
        phase2[..nv].copy_from_slice(cost);
        t.optimize(&phase2, nv + m)?;
        let mut x = vec![0.0; nv];
        for (i, &b) in t.basis.iter().enumerate() {
            if b < nv {
                x[b] = t.rhs(i);
            }
        }
        Ok(x)
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn textbook_program() {
            // min −x − y s.t. x + 2y ≤ 4, 3x + y ≤ 6 → (1.6, 1.2)
            let x = minimize_le(&[vec![1.0, 2.0], vec![3.0, 1.0]], &[4.0, 6.0], &[-1.0, -1.0]).unwrap();
            assert!((x[0] - 1.6).abs() < 1e-12 && (x[1] - 1.2).abs() < 1e-12);
        }

        #[test]
        fn needs_phase_one() {
            // min x s.t. −x ≤ −2 (x ≥ 2)
            let x = minimize_le(&[vec![-1.0]], &[-2.0], &[1.0]).unwrap();
            assert!((x[0] - 2.0).abs() < 1e-12);
            assert!(minimize_le(&[vec![1.0], vec![-1.0]], &[1.0, -2.0], &[1.0]).is_err());
            assert!(minimize_le(&[vec![-1.0]], &[0.0], &[-1.0]).is_err());
        }
    }
}
