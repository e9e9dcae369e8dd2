//! Distribution families, their moments and quantiles, and sample statistics.
//!
//! `cdf` is right-continuous, `P(ξ ≤ x)`; for the continuous families this is
//! the same as `P(ξ < x)`.
//!
//! The uniform law on `[−a, a]` has density `1/(2a)` so that it integrates to
//! one, and the binomial mass is the usual `C(n,k) p^k q^(n−k)`.

use alloc::vec::Vec;

use num_traits::{One, ToPrimitive, Zero};

use crate::math::{self, FRAC_1_SQRT_2PI, PI};
use crate::quadrature;
use crate::rational::{self, BinomialNumerators, Rational};
use crate::{Error, Result};

/// Above this many trials binomial masses are computed in log space rather
/// than as exact rationals.
pub const EXACT_BINOMIAL_LIMIT: u64 = 10_000;

/// Absolute tolerance of the quadrature behind the normal integral.
pub const NORMAL_QUADRATURE_TOL: f64 = 1e-12;

/// Tolerance on the unit area of an empirical grid density.
pub const GRID_AREA_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Constant density on `[−half_width, half_width]`.
    Uniform { half_width: f64 },
    /// Even triangle on `[−half_width, half_width]` with peak `1/half_width`.
    Triangular { half_width: f64 },
    Binomial { trials: u64, p: Rational },
    Poisson { rate: f64 },
    /// `draws` taken without replacement from `population` items, `marked` of them marked.
    Hypergeometric { population: u64, marked: u64, draws: u64 },
    Normal { mean: f64, sigma: f64 },
    /// Density `2/(π(1+x²))` on `[0, ∞)`.
    HalfCauchy,
    /// Piecewise-linear density through `(points[i], densities[i])`, zero outside.
    EmpiricalGrid { points: Vec<f64>, densities: Vec<f64> },
}

/// A validated distribution. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    family: Family,
}

/// Mean, variance, third and fourth central moments. Moments that do not
/// exist are `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub third_central: f64,
    pub fourth_central: f64,
}

impl Moments {
    pub fn is_finite(&self) -> bool {
        self.mean.is_finite() && self.variance.is_finite()
    }

    pub fn std_dev(&self) -> f64 {
        math::sqrt(self.variance)
    }

    pub fn skewness(&self) -> f64 {
        self.third_central / math::powf(self.variance, 1.5)
    }

    pub fn excess(&self) -> f64 {
        self.fourth_central / (self.variance * self.variance) - 3.0
    }

    fn infinite() -> Self {
        Moments { mean: f64::INFINITY, variance: f64::INFINITY, third_central: f64::INFINITY, fourth_central: f64::INFINITY }
    }

    fn from_raw(m1: f64, m2: f64, m3: f64, m4: f64) -> Self {
        let var = m2 - m1 * m1;
        let third = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
        let fourth = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
        Moments { mean: m1, variance: var, third_central: third, fourth_central: fourth }
    }
}

fn positive_finite(value: f64, what: &str) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::parameter(alloc::format!("{what} must be positive and finite, got {value}")))
    }
}

impl Distribution {
    pub fn uniform(half_width: f64) -> Result<Self> {
        positive_finite(half_width, "half-width")?;
        Ok(Self { family: Family::Uniform { half_width } })
    }

    pub fn triangular(half_width: f64) -> Result<Self> {
        positive_finite(half_width, "half-width")?;
        Ok(Self { family: Family::Triangular { half_width } })
    }

    pub fn binomial(trials: u64, p: Rational) -> Result<Self> {
        if !rational::is_probability(&p) {
            return Err(Error::parameter("binomial p must lie in [0, 1]"));
        }
        Ok(Self { family: Family::Binomial { trials, p } })
    }

    pub fn poisson(rate: f64) -> Result<Self> {
        positive_finite(rate, "Poisson rate")?;
        Ok(Self { family: Family::Poisson { rate } })
    }

    pub fn hypergeometric(population: u64, marked: u64, draws: u64) -> Result<Self> {
        if marked > population || draws > population {
            return Err(Error::parameter("hypergeometric needs M ≤ N and n ≤ N"));
        }
        Ok(Self { family: Family::Hypergeometric { population, marked, draws } })
    }

    pub fn normal(mean: f64, sigma: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::parameter("normal location must be finite"));
        }
        positive_finite(sigma, "normal sigma")?;
        Ok(Self { family: Family::Normal { mean, sigma } })
    }

    pub fn standard_normal() -> Self {
        Self { family: Family::Normal { mean: 0.0, sigma: 1.0 } }
    }

    pub fn half_cauchy() -> Self {
        Self { family: Family::HalfCauchy }
    }

    pub fn empirical_grid(points: Vec<f64>, densities: Vec<f64>) -> Result<Self> {
        if points.len() < 2 || points.len() != densities.len() {
            return Err(Error::parameter("empirical grid needs at least two (point, density) pairs"));
        }
        if points.windows(2).any(|w| !(w[1] > w[0])) || points.iter().any(|x| !x.is_finite()) {
            return Err(Error::parameter("empirical grid abscissae must be finite and strictly ascending"));
        }
        if densities.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(Error::parameter("empirical grid densities must be non-negative"));
        }
        let area = quadrature::trapezoid(&points, &densities);
        if math::abs(area - 1.0) > GRID_AREA_TOL {
            return Err(Error::parameter(alloc::format!("empirical grid integrates to {area}, not 1")));
        }
        Ok(Self { family: Family::EmpiricalGrid { points, densities } })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.family, Family::Binomial { .. } | Family::Poisson { .. } | Family::Hypergeometric { .. })
    }

    /// Smallest and largest possible values.
    pub fn support(&self) -> (f64, f64) {
        match &self.family {
            Family::Uniform { half_width: a } | Family::Triangular { half_width: a } => (-a, *a),
            Family::Binomial { trials, .. } => (0.0, *trials as f64),
            Family::Poisson { .. } => (0.0, f64::INFINITY),
            Family::Hypergeometric { population, marked, draws } => {
                let lo = draws.saturating_sub(population - marked);
                (lo as f64, (*marked).min(*draws) as f64)
            }
            Family::Normal { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Family::HalfCauchy => (0.0, f64::INFINITY),
            Family::EmpiricalGrid { points, .. } => (points[0], points[points.len() - 1]),
        }
    }

    /// Exact probability mass at `k` for the binomial and hypergeometric laws.
    pub fn exact_mass(&self, k: u64) -> Result<Rational> {
        match &self.family {
            Family::Binomial { trials, p } => {
                if k > *trials {
                    return Ok(Rational::zero());
                }
                Ok(BinomialNumerators::new(*trials, p)?.range_probability(k, k))
            }
            Family::Hypergeometric { population, marked, draws } => Ok(hypergeometric_mass(*population, *marked, *draws, k)),
            _ => Err(Error::parameter("exact masses exist only for the binomial and hypergeometric laws")),
        }
    }

    /// Probability mass (discrete families, `x` a non-negative integer) or density.
    pub fn mass_or_density(&self, x: f64) -> Result<f64> {
        if self.is_discrete() {
            let k = integer_point(x)?;
            return Ok(match &self.family {
                Family::Binomial { trials, p } => binomial_mass_f64(*trials, p, k),
                Family::Poisson { rate } => poisson_mass(*rate, k),
                _ => rational::to_f64(&self.exact_mass(k)?),
            });
        }
        if x.is_nan() {
            return Err(Error::domain("density at NaN"));
        }
        Ok(match &self.family {
            Family::Uniform { half_width: a } => {
                if math::abs(x) <= *a {
                    0.5 / a
                } else {
                    0.0
                }
            }
            Family::Triangular { half_width: a } => {
                let d = a - math::abs(x);
                if d > 0.0 {
                    d / (a * a)
                } else {
                    0.0
                }
            }
            Family::Normal { mean, sigma } => normal_density(x, *mean, *sigma),
            Family::HalfCauchy => {
                if x >= 0.0 {
                    2.0 / (PI * (1.0 + x * x))
                } else {
                    0.0
                }
            }
            Family::EmpiricalGrid { points, densities } => interpolate(points, densities, x),
            _ => unreachable!("discrete families handled above"),
        })
    }

    /// `P(ξ ≤ x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        match &self.family {
            Family::Uniform { half_width: a } => ((x + a) / (2.0 * a)).clamp(0.0, 1.0),
            Family::Triangular { half_width: a } => {
                if x <= -a {
                    0.0
                } else if x < 0.0 {
                    (x + a) * (x + a) / (2.0 * a * a)
                } else if x < *a {
                    1.0 - (a - x) * (a - x) / (2.0 * a * a)
                } else {
                    1.0
                }
            }
            Family::Binomial { trials, p } => {
                if x < 0.0 {
                    0.0
                } else if x >= *trials as f64 {
                    1.0
                } else {
                    binomial_cdf_f64(*trials, p, math::floor(x) as u64)
                }
            }
            Family::Poisson { rate } => {
                if x < 0.0 {
                    0.0
                } else if x.is_infinite() {
                    1.0
                } else {
                    poisson_cdf(*rate, math::floor(x) as u64)
                }
            }
            Family::Hypergeometric { .. } => {
                let (lo, hi) = self.support();
                if x < lo {
                    0.0
                } else if x >= hi {
                    1.0
                } else {
                    let top = math::floor(x) as u64;
                    let acc = (lo as u64..=top).fold(Rational::zero(), |acc, k| acc + self.exact_mass(k).unwrap_or_default());
                    rational::to_f64(&acc)
                }
            }
            Family::Normal { mean, sigma } => normal_cdf((x - mean) / sigma),
            Family::HalfCauchy => {
                if x <= 0.0 {
                    0.0
                } else if x.is_infinite() {
                    1.0
                } else {
                    2.0 / PI * math::atan(x)
                }
            }
            Family::EmpiricalGrid { points, densities } => grid_cdf(points, densities, x),
        }
    }

    pub fn moments(&self) -> Moments {
        match &self.family {
            Family::Uniform { half_width: a } => {
                let a2 = a * a;
                Moments { mean: 0.0, variance: a2 / 3.0, third_central: 0.0, fourth_central: a2 * a2 / 5.0 }
            }
            Family::Triangular { half_width: a } => {
                let a2 = a * a;
                Moments { mean: 0.0, variance: a2 / 6.0, third_central: 0.0, fourth_central: a2 * a2 / 15.0 }
            }
            Family::Binomial { trials, p } => {
                let n = rational::from_u64(*trials);
                let q = Rational::one() - p;
                let npq = &n * p * &q;
                let mean = &n * p;
                let third = &npq * (&q - p);
                let fourth = &npq * (Rational::one() + rational::int(3) * p * &q * (&n - rational::int(2)));
                Moments {
                    mean: rational::to_f64(&mean),
                    variance: rational::to_f64(&npq),
                    third_central: rational::to_f64(&third),
                    fourth_central: rational::to_f64(&fourth),
                }
            }
            Family::Poisson { rate: a } => Moments { mean: *a, variance: *a, third_central: *a, fourth_central: a + 3.0 * a * a },
            Family::Hypergeometric { .. } => {
                let (lo, hi) = self.support();
                let masses: Vec<(Rational, Rational)> = (lo as u64..=hi as u64)
                    .map(|k| (rational::from_u64(k), self.exact_mass(k).unwrap_or_default()))
                    .collect();
                let mean = masses.iter().fold(Rational::zero(), |acc, (k, m)| acc + k * m);
                let central = |order: u64| {
                    masses.iter().fold(Rational::zero(), |acc, (k, m)| acc + rational::pow(&(k - &mean), order) * m)
                };
                Moments {
                    mean: rational::to_f64(&mean),
                    variance: rational::to_f64(&central(2)),
                    third_central: rational::to_f64(&central(3)),
                    fourth_central: rational::to_f64(&central(4)),
                }
            }
            Family::Normal { mean, sigma } => {
                let s2 = sigma * sigma;
                Moments { mean: *mean, variance: s2, third_central: 0.0, fourth_central: 3.0 * s2 * s2 }
            }
            Family::HalfCauchy => Moments::infinite(),
            Family::EmpiricalGrid { points, densities } => {
                let raw = |order: i32| -> f64 {
                    points
                        .windows(2)
                        .zip(densities.windows(2))
                        .map(|(x, d)| {
                            let slope = (d[1] - d[0]) / (x[1] - x[0]);
                            let f = |t: f64| math::powi(t, order) * (d[0] + slope * (t - x[0]));
                            quadrature::gauss_legendre3(&f, x[0], x[1])
                        })
                        .sum()
                };
                Moments::from_raw(raw(1), raw(2), raw(3), raw(4))
            }
        }
    }

    /// Smallest `x` with `cdf(x) ≥ p`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(alloc::format!("quantile level {p} outside (0, 1)")));
        }
        Ok(match &self.family {
            Family::Uniform { half_width: a } => -a + 2.0 * a * p,
            Family::Triangular { half_width: a } => {
                if p <= 0.5 {
                    -a + a * math::sqrt(2.0 * p)
                } else {
                    a - a * math::sqrt(2.0 * (1.0 - p))
                }
            }
            Family::HalfCauchy => math::tan(0.5 * PI * p),
            Family::Normal { mean, sigma } => mean + sigma * normal_quantile(p),
            Family::Binomial { trials, p: prob } => binomial_quantile(*trials, prob, p)? as f64,
            Family::Poisson { rate } => {
                let mut k = 0u64;
                let mut acc = 0.0;
                loop {
                    acc += poisson_mass(*rate, k);
                    if acc >= p || k > 10_000_000 {
                        break k as f64;
                    }
                    k += 1;
                }
            }
            Family::Hypergeometric { .. } => {
                let (lo, hi) = self.support();
                let target = rational::from_f64(p)?;
                let mut acc = Rational::zero();
                let mut found = hi;
                for k in lo as u64..=hi as u64 {
                    acc += self.exact_mass(k)?;
                    if acc >= target {
                        found = k as f64;
                        break;
                    }
                }
                found
            }
            Family::EmpiricalGrid { .. } => {
                let (lo, hi) = self.support();
                bisect(|x| self.cdf(x) >= p, lo, hi)
            }
        })
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5).expect("1/2 is a valid level")
    }
}

/// Probable error of a distribution: half the distance between its quartiles.
pub fn probable_error(d: &Distribution) -> f64 {
    let q1 = d.quantile(0.25).expect("valid level");
    let q3 = d.quantile(0.75).expect("valid level");
    0.5 * (q3 - q1)
}

fn integer_point(x: f64) -> Result<u64> {
    if x.is_finite() && x >= 0.0 && math::floor(x) == x && x <= u64::MAX as f64 {
        Ok(x as u64)
    } else {
        Err(Error::domain(alloc::format!("{x} is not a non-negative integer")))
    }
}

/// Smallest point in `[lo, hi]` where a monotone predicate turns true.
fn bisect(pred: impl Fn(f64) -> bool, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

pub(crate) fn normal_density(x: f64, mean: f64, sigma: f64) -> f64 {
    let z = (x - mean) / sigma;
    FRAC_1_SQRT_2PI * math::exp(-0.5 * z * z) / sigma
}

/// One-sided normal integral `(1/√2π) ∫_0^z exp(−t²/2) dt`, the tabulated form.
/// Odd in `z`; tends to `±1/2`.
pub fn normal_table_value(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    let magnitude = math::abs(z);
    let value = if magnitude >= 40.0 {
        0.5
    } else {
        let phi = |t: f64| FRAC_1_SQRT_2PI * math::exp(-0.5 * t * t);
        // panels of unit width keep the error budget spread evenly
        let panels = (math::ceil(magnitude) as usize).max(1);
        quadrature::integrate(&phi, 0.0, magnitude, panels, NORMAL_QUADRATURE_TOL)
    };
    if z < 0.0 {
        -value
    } else {
        value
    }
}

/// Standard normal `Φ(z) = 1/2 + F₀(z)`.
pub fn normal_cdf(z: f64) -> f64 {
    if z == f64::INFINITY {
        return 1.0;
    }
    if z == f64::NEG_INFINITY {
        return 0.0;
    }
    0.5 + normal_table_value(z)
}

/// Inverse of [`normal_cdf`] by bisection, then two Newton polishing steps.
pub fn normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    if p == 0.5 {
        return 0.0;
    }
    let mut z = bisect(|z| normal_cdf(z) >= p, -40.0, 40.0);
    for _ in 0..2 {
        let step = (normal_cdf(z) - p) / (FRAC_1_SQRT_2PI * math::exp(-0.5 * z * z));
        if step.is_finite() {
            z -= step;
        }
    }
    z
}

pub(crate) fn hypergeometric_mass(population: u64, marked: u64, draws: u64, k: u64) -> Rational {
    if k > marked || k > draws || draws - k > population - marked {
        return Rational::zero();
    }
    let fav = rational::binomial(marked, k) * rational::binomial(population - marked, draws - k);
    rational::from_biguint(fav) / rational::from_biguint(rational::binomial(population, draws))
}

/// `ln n! − ln(√(2πn) (n/e)^n)`.
fn stirling_error(n: f64) -> f64 {
    if n <= 15.0 {
        return math::ln_gamma(n + 1.0) - (n + 0.5) * math::ln(n) + n - 0.5 * math::ln(2.0 * PI);
    }
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x/m) + m − x`, summed as a series when `x ≈ m`.
fn deviance(x: f64, m: f64) -> f64 {
    if math::abs(x - m) < 0.1 * (x + m) {
        let v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let next = s + ej / (2 * j + 1) as f64;
            if next == s {
                return next;
            }
            s = next;
        }
        s
    } else {
        x * math::ln(x / m) + m - x
    }
}

/// Binomial mass for trial counts past [`EXACT_BINOMIAL_LIMIT`], by the
/// saddle-point expansion around `k = np`; relative error near machine precision.
pub fn binomial_mass_log_space(n: u64, p: f64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let (nf, kf) = (n as f64, k as f64);
    let q = 1.0 - p;
    if k == 0 {
        return math::exp(nf * math::ln_1p(-p));
    }
    if k == n {
        return math::exp(nf * math::ln(p));
    }
    let lc = stirling_error(nf) - stirling_error(kf) - stirling_error(nf - kf) - deviance(kf, nf * p) - deviance(nf - kf, nf * q);
    let lf = math::ln(2.0 * PI) + math::ln(kf) + math::ln_1p(-kf / nf);
    math::exp(lc - 0.5 * lf)
}

/// Binomial mass as a float: exact rational up to [`EXACT_BINOMIAL_LIMIT`]
/// trials, log space above.
pub fn binomial_mass_f64(n: u64, p: &Rational, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= EXACT_BINOMIAL_LIMIT {
        let law = BinomialNumerators::new(n, p).expect("validated probability");
        rational::to_f64(&law.range_probability(k, k))
    } else {
        binomial_mass_log_space(n, rational::to_f64(p), k)
    }
}

fn binomial_cdf_f64(n: u64, p: &Rational, k: u64) -> f64 {
    if n <= EXACT_BINOMIAL_LIMIT {
        let law = BinomialNumerators::new(n, p).expect("validated probability");
        rational::to_f64(&law.range_probability(0, k))
    } else {
        let pf = rational::to_f64(p);
        (0..=k).map(|j| binomial_mass_log_space(n, pf, j)).sum::<f64>().min(1.0)
    }
}

fn binomial_quantile(n: u64, p: &Rational, level: f64) -> Result<u64> {
    if n <= EXACT_BINOMIAL_LIMIT {
        let law = BinomialNumerators::new(n, p)?;
        // compare numerators against level·den^n exactly
        let den = rational::from_biguint(law.denominator());
        let target = rational::from_f64(level)? * den;
        let mut acc = Rational::zero();
        for k in 0..=n {
            acc += rational::from_biguint(law.term(k));
            if acc >= target {
                return Ok(k);
            }
        }
        Ok(n)
    } else {
        let pf = rational::to_f64(p);
        let mut acc = 0.0;
        for k in 0..=n {
            acc += binomial_mass_log_space(n, pf, k);
            if acc >= level {
                return Ok(k);
            }
        }
        Ok(n)
    }
}

/// `a^k e^{−a} / k!`.
pub fn poisson_mass(rate: f64, k: u64) -> f64 {
    if k == 0 {
        return math::exp(-rate);
    }
    let kf = k as f64;
    math::exp(-stirling_error(kf) - deviance(kf, rate)) / math::sqrt(2.0 * PI * kf)
}

fn poisson_cdf(rate: f64, k: u64) -> f64 {
    // upward recurrence on terms; fine while e^{−a} is representable
    if rate < 700.0 {
        let mut term = math::exp(-rate);
        let mut acc = term;
        for j in 1..=k {
            term *= rate / j as f64;
            acc += term;
        }
        acc.min(1.0)
    } else {
        (0..=k).map(|j| poisson_mass(rate, j)).sum::<f64>().min(1.0)
    }
}

fn interpolate(points: &[f64], densities: &[f64], x: f64) -> f64 {
    if x < points[0] || x > points[points.len() - 1] {
        return 0.0;
    }
    let idx = points.partition_point(|&p| p <= x);
    if idx == 0 {
        return densities[0];
    }
    if idx >= points.len() {
        return densities[points.len() - 1];
    }
    let (x0, x1) = (points[idx - 1], points[idx]);
    let (d0, d1) = (densities[idx - 1], densities[idx]);
    d0 + (d1 - d0) * (x - x0) / (x1 - x0)
}

fn grid_cdf(points: &[f64], densities: &[f64], x: f64) -> f64 {
    if x <= points[0] {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 1..points.len() {
        let (x0, x1) = (points[i - 1], points[i]);
        let (d0, d1) = (densities[i - 1], densities[i]);
        if x >= x1 {
            acc += 0.5 * (x1 - x0) * (d0 + d1);
        } else {
            let dx = x - x0;
            let slope = (d1 - d0) / (x1 - x0);
            acc += d0 * dx + 0.5 * slope * dx * dx;
            return acc.clamp(0.0, 1.0);
        }
    }
    acc.clamp(0.0, 1.0)
}

/// Moments by numerical quadrature of `x·φ` and `(x−m)^k·φ` over the support.
/// Only defined for continuous families; the half-Cauchy law reports infinite
/// moments as in [`Distribution::moments`].
pub fn quadrature_moments(d: &Distribution, tol: f64) -> Result<Moments> {
    let density = |x: f64| d.mass_or_density(x).unwrap_or(0.0);
    let integrate_weighted = |g: &dyn Fn(f64) -> f64| -> f64 {
        let f = |x: f64| g(x) * density(x);
        match d.family() {
            Family::Normal { mean, sigma } => quadrature::integrate_real_line(&f, *mean, *sigma, tol),
            Family::Uniform { half_width: a } => quadrature::integrate(&f, -a, *a, 8, tol),
            Family::Triangular { half_width: a } => {
                quadrature::integrate(&f, -a, 0.0, 8, 0.5 * tol) + quadrature::integrate(&f, 0.0, *a, 8, 0.5 * tol)
            }
            Family::EmpiricalGrid { points, .. } => points
                .windows(2)
                .map(|w| quadrature::adaptive_simpson(&f, w[0], w[1], tol / points.len() as f64))
                .sum(),
            _ => f64::NAN,
        }
    };
    match d.family() {
        Family::HalfCauchy => Ok(Moments::infinite()),
        _ if d.is_discrete() => Err(Error::parameter("quadrature moments need a continuous family")),
        _ => {
            let mean = integrate_weighted(&|x| x);
            let central = |k: i32| integrate_weighted(&|x| math::powi(x - mean, k));
            Ok(Moments { mean, variance: central(2), third_central: central(3), fourth_central: central(4) })
        }
    }
}

/// Guaranteed lower bound `max(0, 1 − σ²/β²)` on `P(|ξ − Eξ| < β)`.
pub fn chebyshev_bound(sigma: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::domain("beta must be positive"));
    }
    if !(sigma >= 0.0) {
        return Err(Error::domain("sigma must be non-negative"));
    }
    Ok((1.0 - sigma * sigma / (beta * beta)).max(0.0))
}

/// `(1/n) Σ n_x x^s` for grouped observations `(value, count)`.
pub fn grouped_moment(frequencies: &[(f64, u64)], order: i32) -> Result<f64> {
    let total: u64 = frequencies.iter().map(|(_, c)| c).sum();
    if total == 0 || frequencies.iter().any(|(_, c)| *c == 0) {
        return Err(Error::domain("grouped counts must be positive"));
    }
    let sum: f64 = frequencies.iter().map(|(x, c)| *c as f64 * math::powi(*x, order)).sum();
    Ok(sum / total as f64)
}

/// Most frequent value of grouped observations; ties go to the first listed.
pub fn grouped_mode(frequencies: &[(f64, u64)]) -> Result<f64> {
    let mut best: Option<(f64, u64)> = None;
    for &(x, c) in frequencies {
        if best.map_or(true, |(_, bc)| c > bc) {
            best = Some((x, c));
        }
    }
    best.map(|(x, _)| x).ok_or_else(|| Error::domain("no grouped observations"))
}

/// Observations with optional positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    weights: Option<Vec<f64>>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("observations must be finite"));
        }
        Ok(Self { values, weights: None })
    }

    pub fn weighted(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let mut s = Self::new(values)?;
        if weights.len() != s.values.len() {
            return Err(Error::Dimension { expected: s.values.len(), found: weights.len() });
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::domain("weights must be positive"));
        }
        s.weights = Some(weights);
        Ok(s)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// `Σ p_i x_i / Σ p_i`; the plain mean when unweighted.
    pub fn weighted_mean(&self) -> f64 {
        match &self.weights {
            None => self.mean(),
            Some(w) => {
                let total: f64 = w.iter().sum();
                self.values.iter().zip(w).map(|(x, p)| x * p).sum::<f64>() / total
            }
        }
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn median(&self) -> f64 {
        let v = self.sorted();
        let n = v.len();
        if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        }
    }

    /// Lower nearest-rank quantile: the order statistic `x_(⌈pn⌉)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(alloc::format!("quantile level {p} outside (0, 1)")));
        }
        let v = self.sorted();
        let rank = math::ceil(p * v.len() as f64) as usize;
        Ok(v[rank.clamp(1, v.len()) - 1])
    }

    /// Sum of squared deviations from the mean, divided by `n − 1`.
    pub fn variance(&self) -> Result<f64> {
        let n = self.values.len();
        if n < 2 {
            return Err(Error::InsufficientData { needed: 2, got: n });
        }
        Ok(self.central_sum(2) / (n - 1) as f64)
    }

    fn central_sum(&self, order: i32) -> f64 {
        let m = self.mean();
        self.values.iter().map(|x| math::powi(x - m, order)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub mean: f64,
    pub weighted_mean: f64,
    pub median: f64,
    pub midrange: f64,
    pub range: f64,
    /// Mean absolute deviation from the mean.
    pub mean_abs: f64,
    /// Denominator `n − 1`.
    pub variance: f64,
    pub std: f64,
    /// `m₃ / s³` with `m₃ = Σ(x−x̄)³/(n−1)`; `None` for a constant sample.
    pub skewness: Option<f64>,
    /// `m₄ / s⁴ − 3` with `m₄ = Σ(x−x̄)⁴/(n−1)`; `None` for a constant sample.
    pub excess: Option<f64>,
    /// Half the distance between the empirical quartiles.
    pub probable_error: f64,
}

pub fn sample_stats(s: &Sample) -> Result<SampleStats> {
    let n = s.len();
    let variance = s.variance()?;
    let sorted = s.sorted();
    let (lo, hi) = (sorted[0], sorted[n - 1]);
    let mean = s.mean();
    let std = math::sqrt(variance);
    let denom = (n - 1) as f64;
    let (skewness, excess) = if std > 0.0 {
        let m3 = s.central_sum(3) / denom;
        let m4 = s.central_sum(4) / denom;
        (Some(m3 / (std * std * std)), Some(m4 / (variance * variance) - 3.0))
    } else {
        (None, None)
    };
    Ok(SampleStats {
        mean,
        weighted_mean: s.weighted_mean(),
        median: s.median(),
        midrange: 0.5 * (lo + hi),
        range: hi - lo,
        mean_abs: s.values.iter().map(|x| math::abs(x - mean)).sum::<f64>() / n as f64,
        variance,
        std,
        skewness,
        excess,
        probable_error: 0.5 * (s.quantile(0.75)? - s.quantile(0.25)?),
    })
}

/// Maximum of the binomial mass over `k`, exact. Useful as the pmf jump bound.
pub fn max_mass(d: &Distribution) -> f64 {
    match d.family() {
        Family::Binomial { trials, p } => (0..=*trials).map(|k| binomial_mass_f64(*trials, p, k)).fold(0.0, f64::max),
        Family::Poisson { rate } => {
            let mode = math::floor(*rate) as u64;
            poisson_mass(*rate, mode)
        }
        Family::Hypergeometric { .. } => {
            let (lo, hi) = d.support();
            (lo as u64..=hi as u64)
                .map(|k| d.exact_mass(k).map(|m| m.to_f64().unwrap_or(0.0)).unwrap_or(0.0))
                .fold(0.0, f64::max)
        }
        _ => 0.0,
    }
}
