//! Laws of large numbers, the De Moivre-Laplace local and integral
//! approximations with their measured error, and the posterior of an unknown
//! proportion under a uniform prior together with its normal limit.
//!
//! Binomial probabilities are exact rationals up to
//! [`EXACT_BINOMIAL_LIMIT`] trials and log-space floats beyond. Discrete sums
//! run over closed intervals with no continuity correction.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::distributions::{binomial_mass_f64, binomial_mass_log_space, normal_cdf, EXACT_BINOMIAL_LIMIT};
use crate::math::{self, FRAC_1_SQRT_2PI};
use crate::rational::{self, BinomialNumerators, Rational};
use crate::{Error, Result};

/// Largest number of non-identical trials `poisson_lln_gap` will convolve.
pub const MAX_POISSON_TRIALS: usize = 10_000;

/// `n` Bernoulli trials with success probability strictly between 0 and 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BinomialApprox {
    trials: u64,
    p: Rational,
}

impl BinomialApprox {
    pub fn new(trials: u64, p: Rational) -> Result<Self> {
        if trials == 0 {
            return Err(Error::domain("need at least one trial"));
        }
        if !p.is_positive() || p >= Rational::one() {
            return Err(Error::domain("p must lie strictly between 0 and 1"));
        }
        Ok(Self { trials, p })
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn np(&self) -> f64 {
        self.trials as f64 * rational::to_f64(&self.p)
    }

    pub fn npq(&self) -> f64 {
        let npq = rational::from_u64(self.trials) * &self.p * (Rational::one() - &self.p);
        rational::to_f64(&npq)
    }

    /// `√(npq)`, the standardizing scale.
    pub fn scale(&self) -> f64 {
        math::sqrt(self.npq())
    }

    /// `P(lo ≤ μ ≤ hi)`, exact below the threshold.
    fn range_probability(&self, lo: u64, hi: u64) -> f64 {
        if lo > hi {
            return 0.0;
        }
        if self.trials <= EXACT_BINOMIAL_LIMIT {
            let law = BinomialNumerators::new(self.trials, &self.p).expect("validated");
            rational::to_f64(&law.range_probability(lo, hi))
        } else {
            let p = rational::to_f64(&self.p);
            (lo..=hi.min(self.trials)).map(|k| binomial_mass_log_space(self.trials, p, k)).sum::<f64>().min(1.0)
        }
    }
}

fn probability_open(value: &Rational, what: &str) -> Result<()> {
    if !value.is_positive() || *value >= Rational::one() {
        return Err(Error::domain(alloc::format!("{what} must lie strictly between 0 and 1")));
    }
    Ok(())
}

/// Integers `k ∈ [0, n]` with `|k − n·p| < n·eps` (strict) or `≤` (closed).
fn frequency_band(n: u64, p: &Rational, eps: &Rational, strict: bool) -> Option<(u64, u64)> {
    let nr = rational::from_u64(n);
    let lo_edge = &nr * (p - eps);
    let hi_edge = &nr * (p + eps);
    let lo = if strict { lo_edge.floor() + Rational::one() } else { lo_edge.ceil() };
    let hi = if strict { hi_edge.ceil() - Rational::one() } else { hi_edge.floor() };
    let lo = if lo.is_negative() { Rational::zero() } else { lo };
    let hi = if hi > nr { nr } else { hi };
    if lo > hi {
        return None;
    }
    let to_u64 = |r: &Rational| r.to_integer().try_into().ok();
    Some((to_u64(&lo)?, to_u64(&hi)?))
}

/// Trial counts for `P(|μ/n − p| > ε) ≤ δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleSize {
    /// `⌈pq / (ε² δ)⌉` from the Bienaymé-Chebyshev inequality.
    pub chebyshev_n: u64,
    /// Smallest `n` meeting the requirement under the exact binomial law.
    pub exact_n: u64,
}

pub fn bernoulli_sample_size(p: &Rational, eps: &Rational, delta: &Rational) -> Result<SampleSize> {
    probability_open(p, "p")?;
    probability_open(delta, "delta")?;
    if !eps.is_positive() {
        return Err(Error::domain("eps must be positive"));
    }
    let q = Rational::one() - p;
    let bound = p * &q / (eps * eps * delta);
    let chebyshev_n: u64 = bound.ceil().to_integer().try_into().map_err(|_| Error::Size("sample size overflows u64".into()))?;
    let chebyshev_n = chebyshev_n.max(1);
    let delta_f = rational::to_f64(delta);
    for n in 1..=chebyshev_n {
        let inside = match frequency_band(n, p, eps, false) {
            None => Rational::zero(),
            Some((lo, hi)) if n <= EXACT_BINOMIAL_LIMIT => {
                BinomialNumerators::new(n, p)?.range_probability(lo, hi)
            }
            Some((lo, hi)) => {
                let approx = BinomialApprox::new(n, p.clone())?.range_probability(lo, hi);
                if 1.0 - approx <= delta_f {
                    return Ok(SampleSize { chebyshev_n, exact_n: n });
                }
                continue;
            }
        };
        if Rational::one() - inside <= *delta {
            return Ok(SampleSize { chebyshev_n, exact_n: n });
        }
    }
    // the Chebyshev count always qualifies
    Ok(SampleSize { chebyshev_n, exact_n: chebyshev_n })
}

/// Exact `P(|μ/n − p| < ε)` for `n` Bernoulli trials.
pub fn lln_gap_exact(p: &Rational, n: u64, eps: &Rational) -> Result<Rational> {
    if n == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    if n > EXACT_BINOMIAL_LIMIT {
        return Err(Error::Size(alloc::format!("exact sums stop at {EXACT_BINOMIAL_LIMIT} trials")));
    }
    if !rational::is_probability(p) {
        return Err(Error::domain("p must lie in [0, 1]"));
    }
    if !eps.is_positive() {
        return Err(Error::domain("eps must be positive"));
    }
    Ok(match frequency_band(n, p, eps, true) {
        None => Rational::zero(),
        Some((lo, hi)) => BinomialNumerators::new(n, p)?.range_probability(lo, hi),
    })
}

/// `P(|μ/n − p| < ε)`; exact up to the threshold, log space above.
pub fn lln_gap(p: &Rational, n: u64, eps: &Rational) -> Result<f64> {
    if n <= EXACT_BINOMIAL_LIMIT {
        return lln_gap_exact(p, n, eps).map(|r| rational::to_f64(&r));
    }
    probability_open(p, "p")?;
    if !eps.is_positive() {
        return Err(Error::domain("eps must be positive"));
    }
    let approx = BinomialApprox::new(n, p.clone())?;
    Ok(match frequency_band(n, p, eps, true) {
        None => 0.0,
        Some((lo, hi)) => approx.range_probability(lo, hi),
    })
}

/// Law of the number of successes in independent trials with individual
/// success probabilities `ps`, by convolving one Bernoulli law at a time.
pub fn poisson_binomial_law(ps: &[f64]) -> Result<Vec<f64>> {
    if ps.len() > MAX_POISSON_TRIALS {
        return Err(Error::Size(alloc::format!("{} trials exceed the limit of {MAX_POISSON_TRIALS}", ps.len())));
    }
    if ps.iter().any(|p| !(*p >= 0.0 && *p <= 1.0)) {
        return Err(Error::domain("trial probabilities must lie in [0, 1]"));
    }
    let mut law = vec![1.0];
    for &p in ps {
        let mut next = vec![0.0; law.len() + 1];
        for (k, mass) in law.iter().enumerate() {
            next[k] += mass * (1.0 - p);
            next[k + 1] += mass * p;
        }
        law = next;
    }
    Ok(law)
}

/// `P(|μ/n − p̄| < ε)` for independent, non-identical trials; `p̄` is the mean of `ps`.
pub fn poisson_lln_gap(ps: &[f64], eps: f64) -> Result<f64> {
    if ps.is_empty() {
        return Err(Error::domain("need at least one trial"));
    }
    if ps.iter().any(|p| !(*p > 0.0 && *p < 1.0)) {
        return Err(Error::domain("trial probabilities must lie strictly between 0 and 1"));
    }
    if !(eps > 0.0) {
        return Err(Error::domain("eps must be positive"));
    }
    let law = poisson_binomial_law(ps)?;
    let n = ps.len() as f64;
    let expected = ps.iter().sum::<f64>();
    let band = n * eps;
    Ok(law
        .iter()
        .enumerate()
        .filter(|(k, _)| math::abs(*k as f64 - expected) < band)
        .map(|(_, m)| m)
        .sum())
}

/// A normal approximation next to the binomial value it approximates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approximation {
    pub approx: f64,
    pub exact: f64,
    pub abs_err: f64,
}

impl Approximation {
    fn new(approx: f64, exact: f64) -> Self {
        Self { approx, exact, abs_err: math::abs(approx - exact) }
    }

    pub fn rel_err(&self) -> f64 {
        self.abs_err / math::abs(self.exact)
    }
}

/// Local theorem: `P(μ = mu) ≈ exp(−(μ−np)²/(2npq)) / √(2π npq)`.
pub fn dml_local(trials: u64, p: &Rational, mu: u64) -> Result<Approximation> {
    let law = BinomialApprox::new(trials, p.clone())?;
    if mu > trials {
        return Err(Error::domain("mu exceeds the number of trials"));
    }
    let npq = law.npq();
    let dev = mu as f64 - law.np();
    let approx = FRAC_1_SQRT_2PI / math::sqrt(npq) * math::exp(-dev * dev / (2.0 * npq));
    Ok(Approximation::new(approx, binomial_mass_f64(trials, p, mu)))
}

/// Integral theorem: `P(a ≤ (μ−np)/√npq ≤ b) ≈ Φ(b) − Φ(a)`.
pub fn dml_integral(trials: u64, p: &Rational, a: f64, b: f64) -> Result<Approximation> {
    let law = BinomialApprox::new(trials, p.clone())?;
    if !(a < b) {
        return Err(Error::domain("need a < b"));
    }
    let (np, s) = (law.np(), law.scale());
    let inside = |k: f64| {
        let z = (k - np) / s;
        z >= a && z <= b
    };
    let n = trials as f64;
    let mut lo = if a == f64::NEG_INFINITY { 0.0 } else { math::ceil(np + a * s).clamp(0.0, n) };
    while lo > 0.0 && inside(lo - 1.0) {
        lo -= 1.0;
    }
    while lo <= n && !inside(lo) && lo < np {
        lo += 1.0;
    }
    let mut hi = if b == f64::INFINITY { n } else { math::floor(np + b * s).clamp(0.0, n) };
    while hi < n && inside(hi + 1.0) {
        hi += 1.0;
    }
    while hi >= 0.0 && !inside(hi) && hi > np {
        hi -= 1.0;
    }
    let exact = if lo > hi || !inside(lo) { 0.0 } else { law.range_probability(lo as u64, hi as u64) };
    Ok(Approximation::new(normal_cdf(b) - normal_cdf(a), exact))
}

/// Nikolaus Bernoulli's estimate `1 − exp(−s²/2)` of `P(|μ−np|/√npq ≤ s)`.
pub fn nb_bound(s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::domain("s must be positive"));
    }
    Ok(1.0 - math::exp(-0.5 * s * s))
}

/// Posterior of an unknown proportion `r` under a uniform prior, after
/// `successes` hits and `misses` misses, queried on `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaPosterior {
    successes: u64,
    misses: u64,
    lower: Rational,
    upper: Rational,
}

impl BetaPosterior {
    pub fn new(successes: u64, misses: u64, lower: Rational, upper: Rational) -> Result<Self> {
        if lower.is_negative() || upper > Rational::one() || lower >= upper {
            return Err(Error::domain("need 0 ≤ lower < upper ≤ 1"));
        }
        Ok(Self { successes, misses, lower, upper })
    }

    pub fn successes(&self) -> u64 {
        self.successes
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }
}

/// `P(r ≤ x)` for the posterior: `∫_0^x u^p (1−u)^q du ÷ ∫_0^1 u^p (1−u)^q du`,
/// evaluated through the identity with the upper tail of a binomial law on
/// `p + q + 1` trials with success probability `x`.
fn beta_posterior_cdf(successes: u64, misses: u64, x: &Rational) -> Rational {
    if !x.is_positive() {
        return Rational::zero();
    }
    if *x >= Rational::one() {
        return Rational::one();
    }
    let trials = successes + misses + 1;
    BinomialNumerators::new(trials, x).expect("x in (0, 1)").range_probability(successes + 1, trials)
}

/// Exact posterior mass of `[lower, upper]`.
pub fn bayes_posterior_mass(bp: &BetaPosterior) -> Rational {
    beta_posterior_cdf(bp.successes, bp.misses, &bp.upper) - beta_posterior_cdf(bp.successes, bp.misses, &bp.lower)
}

/// Variance `(p+1)(q+1)/((n+2)²(n+3))` of the posterior, `n = p + q`.
pub fn beta_posterior_variance(successes: u64, misses: u64) -> Rational {
    let n = successes + misses;
    let num = rational::from_u64(successes + 1) * rational::from_u64(misses + 1);
    let den = rational::from_u64(n + 2) * rational::from_u64(n + 2) * rational::from_u64(n + 3);
    num / den
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimerdingCheck {
    pub posterior_prob: f64,
    pub normal_prob: f64,
    pub abs_err: f64,
}

/// Posterior probability that `(r − p/n)/√(pq/n³)` lies in `[a, b]`, next to
/// the normal limit `Φ(b) − Φ(a)`.
pub fn timerding_limit_check(successes: u64, misses: u64, a: f64, b: f64) -> Result<TimerdingCheck> {
    if successes < 10 || misses < 10 {
        return Err(Error::domain("the limit regime needs at least 10 successes and 10 misses"));
    }
    if !(a < b) {
        return Err(Error::domain("need a < b"));
    }
    let (p, q) = (successes as f64, misses as f64);
    let n = p + q;
    let center = p / n;
    let scale = math::sqrt(p * q / (n * n * n));
    let endpoint = |z: f64| -> Result<Rational> {
        let x = (center + z * scale).clamp(0.0, 1.0);
        rational::from_f64(x)
    };
    let lower = endpoint(a)?;
    let upper = endpoint(b)?;
    let mass = beta_posterior_cdf(successes, misses, &upper) - beta_posterior_cdf(successes, misses, &lower);
    let posterior_prob = rational::to_f64(&mass);
    let normal_prob = normal_cdf(b) - normal_cdf(a);
    Ok(TimerdingCheck { posterior_prob, normal_prob, abs_err: math::abs(posterior_prob - normal_prob) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn sample_size_for_a_fair_coin() {
        let s = bernoulli_sample_size(&ratio(1, 2), &ratio(1, 10), &ratio(1, 10)).unwrap();
        assert_eq!(s.chebyshev_n, 250);
        assert!(s.exact_n <= s.chebyshev_n);
        // oracle: direct tail sums over all k for each n
        let oracle = (1u64..)
            .find(|&n| {
                let tail: Rational = (0..=n)
                    .filter(|&k| (rational::from_u64(k) / rational::from_u64(n) - ratio(1, 2)).abs() > ratio(1, 10))
                    .map(|k| rational::from_biguint(rational::binomial(n, k)) / rational::pow(&int(2), n))
                    .fold(Rational::zero(), |a, b| a + b);
                tail <= ratio(1, 10)
            })
            .unwrap();
        assert_eq!(s.exact_n, oracle);
        let wide = bernoulli_sample_size(&ratio(1, 2), &ratio(1, 2), &ratio(1, 10)).unwrap();
        assert_eq!(wide.exact_n, 1);
    }

    #[test]
    fn lln_gap_values() {
        assert_eq!(lln_gap_exact(&ratio(1, 2), 1, &ratio(3, 5)).unwrap(), int(1));
        let oracle = (41..=59u64)
            .map(|k| rational::from_biguint(rational::binomial(100, k)))
            .fold(Rational::zero(), |a, b| a + b)
            / rational::pow(&int(2), 100);
        assert_eq!(lln_gap_exact(&ratio(1, 2), 100, &ratio(1, 10)).unwrap(), oracle);
        let g = |n| lln_gap(&ratio(1, 3), n, &ratio(1, 20)).unwrap();
        assert!(g(4000) > g(400) && g(400) > g(40));
    }

    #[test]
    fn poisson_theorem_reduces_to_bernoulli() {
        let ps = vec![0.25; 40];
        let dp = poisson_lln_gap(&ps, 0.1).unwrap();
        let exact = lln_gap(&ratio(1, 4), 40, &ratio(1, 10)).unwrap();
        assert!((dp - exact).abs() < 1e-12);
    }

    #[test]
    fn poisson_theorem_two_trials() {
        // outcomes: μ=0 w.p. .16, μ=1 w.p. .68, μ=2 w.p. .16; p̄ = 1/2, band |μ/2 − 1/2| < 0.6 holds for all
        let v = poisson_lln_gap(&[0.2, 0.8], 0.6).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        // band |μ/2 − 1/2| < 0.3 only holds for μ = 1
        let v = poisson_lln_gap(&[0.2, 0.8], 0.3).unwrap();
        assert!((v - (0.2 * 0.2 + 0.8 * 0.8)).abs() < 1e-15);
    }

    #[test]
    fn poisson_theorem_grows_with_trials() {
        let alt = |n: usize| (0..n).map(|i| if i % 2 == 0 { 0.4 } else { 0.6 }).collect::<Vec<_>>();
        let g100 = poisson_lln_gap(&alt(100), 0.1).unwrap();
        let g400 = poisson_lln_gap(&alt(400), 0.1).unwrap();
        assert!(g100 > 0.0 && g100 < 1.0);
        assert!(g400 > g100);
        assert!(poisson_lln_gap(&vec![0.5; MAX_POISSON_TRIALS + 1], 0.1).is_err());
        assert!(poisson_lln_gap(&[0.0, 0.5], 0.1).is_err());
    }

    #[test]
    fn local_theorem_for_sixes() {
        let r = dml_local(100, &ratio(1, 6), 7).unwrap();
        let law = BinomialApprox::new(100, ratio(1, 6)).unwrap();
        assert!((law.npq() - 13.888_888_888_888_89).abs() < 1e-12);
        assert!((law.scale() - 3.726_779_962_499_649).abs() < 1e-12);
        let exact = rational::to_f64(
            &(rational::from_biguint(rational::binomial(100, 7)) * rational::pow(&ratio(1, 6), 7) * rational::pow(&ratio(5, 6), 93)),
        );
        assert_eq!(r.exact, exact);
        let dev: f64 = 7.0 - 100.0 / 6.0;
        let approx = (-dev * dev / (2.0 * 13.888_888_888_888_89)).exp() / (2.0 * core::f64::consts::PI * 13.888_888_888_888_89).sqrt();
        assert!((r.approx - approx).abs() < 1e-15);
        assert!((r.approx - 3.70e-3).abs() < 5e-5);
    }

    #[test]
    fn local_theorem_at_the_mean() {
        let r = dml_local(100, &ratio(1, 2), 50).unwrap();
        assert!((r.approx - 1.0 / (50.0 * core::f64::consts::PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn integral_theorem() {
        let r = dml_integral(10_000, &ratio(1, 2), -1.0, 1.0).unwrap();
        assert!((r.approx - 0.682_689_492_137_086).abs() < 1e-10);
        assert!(r.abs_err < 0.01);
        let full = dml_integral(50, &ratio(1, 3), f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert_eq!(full.approx, 1.0);
        assert!((full.exact - 1.0).abs() < 1e-15);
        let skew100 = dml_integral(100, &ratio(1, 20), -1.0, 1.0).unwrap();
        let skew10k = dml_integral(10_000, &ratio(1, 20), -1.0, 1.0).unwrap();
        assert!(skew100.abs_err > skew10k.abs_err);
        assert!(dml_integral(100, &ratio(1, 2), 1.0, -1.0).is_err());
    }

    #[test]
    fn integral_band_matches_direct_enumeration() {
        for (n, p, a, b) in [(37u64, ratio(2, 7), -0.8, 1.3), (100, ratio(1, 2), -1.0, 1.0), (64, ratio(1, 20), -2.0, 0.5)] {
            let law = BinomialApprox::new(n, p.clone()).unwrap();
            let (np, s) = (law.np(), law.scale());
            let oracle: f64 = (0..=n)
                .filter(|&k| {
                    let z = (k as f64 - np) / s;
                    z >= a && z <= b
                })
                .map(|k| binomial_mass_f64(n, &p, k))
                .sum();
            let r = dml_integral(n, &p, a, b).unwrap();
            assert!((r.exact - oracle).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn nikolaus_bernoulli() {
        assert!((nb_bound(1.0).unwrap() - 0.393_469_340_287_366_6).abs() < 1e-15);
        assert!(nb_bound(40.0).unwrap() > 1.0 - 1e-15);
        assert!(nb_bound(0.0).is_err());
        let dml = dml_integral(10_000, &ratio(1, 2), -1.0, 1.0).unwrap();
        assert!(nb_bound(1.0).unwrap() < dml.exact);
    }

    #[test]
    fn posterior_masses() {
        let m = |p, q, b, c| bayes_posterior_mass(&BetaPosterior::new(p, q, b, c).unwrap());
        assert_eq!(m(0, 0, ratio(3, 10), ratio(7, 10)), ratio(2, 5));
        assert_eq!(m(1, 0, int(0), ratio(1, 2)), ratio(1, 4));
        assert_eq!(m(2, 1, int(0), int(1)), int(1));
        assert!(BetaPosterior::new(1, 1, ratio(1, 2), ratio(1, 2)).is_err());
        assert!(BetaPosterior::new(1, 1, int(0), ratio(3, 2)).is_err());
    }

    #[test]
    fn posterior_variance_is_positive() {
        assert_eq!(beta_posterior_variance(0, 0), ratio(1, 12));
        assert!(beta_posterior_variance(50, 50).is_positive());
    }

    #[test]
    fn timerding_edges() {
        let full = timerding_limit_check(30, 20, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert_eq!(full.normal_prob, 1.0);
        assert!((full.posterior_prob - 1.0).abs() < 1e-15);
        assert!(timerding_limit_check(5, 20, -1.0, 1.0).is_err());
    }
}
