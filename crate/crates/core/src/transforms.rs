//! Densities of functions of random variables, composition of densities on
//! grids, the correlation coefficient, the bivariate normal law and the
//! encounter problem.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use crate::distributions::{normal_density, Distribution};
use crate::math::{self, PI};
use crate::quadrature;
use crate::rational::Rational;
use crate::{Error, Result};

/// Mass tolerance of [`GridDensity::new`].
pub const GRID_MASS_TOL: f64 = 1e-6;
/// Mass tolerance of a composition on a grid.
pub const CONVOLUTION_MASS_TOL: f64 = 1e-4;
/// Infinite supports are cut this many standard deviations from the mean.
pub const TRUNCATION_SIGMAS: f64 = 8.0;
/// Relative round-trip tolerance `ψ(f(x)) = x` of a map piece.
pub const ROUND_TRIP_TOL: f64 = 1e-9;

/// A density on the real line.
pub trait Density {
    fn density(&self, x: f64) -> f64;
    fn support(&self) -> (f64, f64);
    fn is_continuous(&self) -> bool {
        true
    }
}

impl Density for Distribution {
    fn density(&self, x: f64) -> f64 {
        self.mass_or_density(x).unwrap_or(0.0)
    }

    fn support(&self) -> (f64, f64) {
        Distribution::support(self)
    }

    fn is_continuous(&self) -> bool {
        !self.is_discrete()
    }
}

/// `1/(π(1+x²))` on the whole line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StandardCauchy;

impl Density for StandardCauchy {
    fn density(&self, x: f64) -> f64 {
        1.0 / (PI * (1.0 + x * x))
    }

    fn support(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// One strictly monotone branch `y = f(x)` on `[lo, hi]` with inverse `ψ` and `ψ′`.
pub struct MapPiece {
    lo: f64,
    hi: f64,
    forward: RealFn,
    inverse: RealFn,
    inverse_derivative: RealFn,
}

impl core::fmt::Debug for MapPiece {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("MapPiece").field("lo", &self.lo).field("hi", &self.hi).finish_non_exhaustive()
    }
}

/// Points spread over `[lo, hi]`, which may be infinite at either end.
fn probe_points(lo: f64, hi: f64) -> Vec<f64> {
    (1..32)
        .map(|i| {
            let t = i as f64 / 32.0;
            match (lo.is_finite(), hi.is_finite()) {
                (true, true) => lo + t * (hi - lo),
                (true, false) => lo + t / (1.0 - t) * 4.0,
                (false, true) => hi - (1.0 - t) / t * 4.0,
                (false, false) => math::tan(PI * (t - 0.5)) * 4.0,
            }
        })
        .collect()
}

impl MapPiece {
    pub fn new(
        lo: f64,
        hi: f64,
        forward: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inverse: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inverse_derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::Map(format!("empty interval [{lo}, {hi}]")));
        }
        let piece = Self { lo, hi, forward: Box::new(forward), inverse: Box::new(inverse), inverse_derivative: Box::new(inverse_derivative) };
        for x in probe_points(lo, hi) {
            let back = (piece.inverse)((piece.forward)(x));
            if !(math::abs(back - x) <= ROUND_TRIP_TOL * math::abs(x).max(1.0)) {
                return Err(Error::Map(format!("inverse does not undo the map at x = {x} (got {back})")));
            }
        }
        Ok(piece)
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn forward(&self, x: f64) -> f64 {
        (self.forward)(x)
    }

    pub fn inverse(&self, y: f64) -> f64 {
        (self.inverse)(y)
    }

    pub fn inverse_derivative(&self, y: f64) -> f64 {
        (self.inverse_derivative)(y)
    }

    /// `ψ(y)` when `y` is an image point of this piece.
    fn preimage(&self, y: f64) -> Option<f64> {
        let x = self.inverse(y);
        if !x.is_finite() || x < self.lo || x > self.hi {
            return None;
        }
        let fx = self.forward(x);
        (math::abs(fx - y) <= 1e-9 * math::abs(y).max(1.0)).then_some(x)
    }
}

/// A piecewise strictly monotone map; pieces are ordered and do not overlap.
#[derive(Debug)]
pub struct MonotoneMap {
    pieces: Vec<MapPiece>,
}

impl MonotoneMap {
    pub fn new(pieces: Vec<MapPiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Map("a map needs at least one piece".into()));
        }
        if pieces.windows(2).any(|w| w[1].lo < w[0].hi) {
            return Err(Error::Map("pieces must be ordered and may only share endpoints".into()));
        }
        Ok(Self { pieces })
    }

    pub fn pieces(&self) -> &[MapPiece] {
        &self.pieces
    }

    pub fn identity() -> Self {
        Self::affine(0.0, 1.0).expect("slope 1")
    }

    /// `y = a + b x`.
    pub fn affine(a: f64, b: f64) -> Result<Self> {
        if b == 0.0 || !b.is_finite() || !a.is_finite() {
            return Err(Error::Map("affine slope must be finite and nonzero".into()));
        }
        let piece = MapPiece::new(f64::NEG_INFINITY, f64::INFINITY, move |x| a + b * x, move |y| (y - a) / b, move |_| 1.0 / b)?;
        Self::new(vec![piece])
    }

    /// `y = 1 − x³`.
    pub fn one_minus_cube() -> Self {
        let piece = MapPiece::new(
            f64::NEG_INFINITY,
            f64::INFINITY,
            |x| 1.0 - x * x * x,
            |y| math::cbrt(1.0 - y),
            |y| {
                let c = math::cbrt(1.0 - y);
                -1.0 / (3.0 * c * c)
            },
        )
        .expect("valid branch");
        Self::new(vec![piece]).expect("one piece")
    }

    /// `y = x²`, split at zero into its two monotone branches.
    pub fn square() -> Self {
        let left = MapPiece::new(f64::NEG_INFINITY, 0.0, |x| x * x, |y| -math::sqrt(y), |y| -0.5 / math::sqrt(y)).expect("valid branch");
        let right = MapPiece::new(0.0, f64::INFINITY, |x| x * x, math::sqrt, |y| 0.5 / math::sqrt(y)).expect("valid branch");
        Self::new(vec![left, right]).expect("ordered pieces")
    }

    /// `y = exp(x)`.
    pub fn exp() -> Self {
        let piece = MapPiece::new(f64::NEG_INFINITY, f64::INFINITY, math::exp, math::ln, |y| 1.0 / y).expect("valid branch");
        Self::new(vec![piece]).expect("one piece")
    }

    fn covers(&self, lo: f64, hi: f64) -> bool {
        let first = self.pieces[0].lo;
        let last = self.pieces[self.pieces.len() - 1].hi;
        let contiguous = self.pieces.windows(2).all(|w| w[0].hi == w[1].lo);
        contiguous && first <= lo && last >= hi
    }
}

/// Density values at given abscissae, not yet checked for unit mass.
#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseDensity {
    pub abscissae: Vec<f64>,
    pub ordinates: Vec<f64>,
}

impl PointwiseDensity {
    /// Trapezoid mass over the abscissae.
    pub fn mass(&self) -> f64 {
        quadrature::trapezoid(&self.abscissae, &self.ordinates)
    }

    pub fn into_grid_density(self) -> Result<GridDensity> {
        GridDensity::new(self.abscissae, self.ordinates)
    }
}

/// `φ₂(y) = Σ φ₁(ψ(y)) |ψ′(y)|` over the pieces whose image contains `y`.
///
/// The result is not normalized: the mass it carries is whatever the grid
/// captures, which for heavy-tailed images may be well below one.
pub fn push_density(source: &impl Density, map: &MonotoneMap, grid: &[f64]) -> Result<PointwiseDensity> {
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Grid("abscissae must be strictly ascending".into()));
    }
    if !source.is_continuous() {
        return Err(Error::domain("push_density needs a continuous source law"));
    }
    let (lo, hi) = source.support();
    if !map.covers(lo, hi) {
        return Err(Error::Map(format!("pieces do not cover the support [{lo}, {hi}]")));
    }
    let mut ordinates = vec![0.0; grid.len()];
    for piece in map.pieces() {
        let mut sign = 0.0;
        for (y, out) in grid.iter().zip(ordinates.iter_mut()) {
            let Some(x) = piece.preimage(*y) else { continue };
            let d = piece.inverse_derivative(*y);
            if d != 0.0 && d.is_finite() {
                if sign != 0.0 && d.signum() != sign {
                    return Err(Error::Map(format!("ψ′ changes sign inside the piece on [{}, {}]", piece.lo, piece.hi)));
                }
                sign = d.signum();
            }
            *out += source.density(x) * math::abs(d);
        }
    }
    Ok(PointwiseDensity { abscissae: grid.to_vec(), ordinates })
}

/// A density tabulated on ascending abscissae with unit trapezoid mass.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    abscissae: Vec<f64>,
    ordinates: Vec<f64>,
}

impl GridDensity {
    pub fn new(abscissae: Vec<f64>, ordinates: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(abscissae, ordinates, GRID_MASS_TOL)
    }

    /// As [`GridDensity::new`] with a chosen mass tolerance.
    pub fn with_tolerance(abscissae: Vec<f64>, ordinates: Vec<f64>, tol: f64) -> Result<Self> {
        if abscissae.len() != ordinates.len() {
            return Err(Error::Dimension { expected: abscissae.len(), found: ordinates.len() });
        }
        if abscissae.len() < 2 {
            return Err(Error::Grid("need at least two points".into()));
        }
        if abscissae.windows(2).any(|w| !(w[0] < w[1])) || abscissae.iter().any(|x| !x.is_finite()) {
            return Err(Error::Grid("abscissae must be finite and strictly ascending".into()));
        }
        if ordinates.iter().any(|y| !(y.is_finite() && *y >= 0.0)) {
            return Err(Error::Grid("ordinates must be finite and non-negative".into()));
        }
        let mass = quadrature::trapezoid(&abscissae, &ordinates);
        if math::abs(mass - 1.0) > tol {
            return Err(Error::Grid(format!("trapezoid mass {mass} is not 1 within {tol}")));
        }
        Ok(Self { abscissae, ordinates })
    }

    /// Tabulates a continuous law on `2m + 1` equally spaced points centred
    /// on its support, cut at the mean ± 8σ where the support is wider.
    pub fn from_distribution(d: &Distribution, half_points: usize) -> Result<Self> {
        if d.is_discrete() {
            return Err(Error::Grid("only continuous laws can be tabulated".into()));
        }
        if half_points == 0 {
            return Err(Error::Grid("need at least one point on each side".into()));
        }
        let (lo, hi) = Distribution::support(d);
        let m = d.moments();
        let (lo, hi) = if m.is_finite() {
            let reach = TRUNCATION_SIGMAS * m.std_dev();
            (lo.max(m.mean - reach), hi.min(m.mean + reach))
        } else {
            return Err(Error::Grid("cannot truncate a law without finite variance".into()));
        };
        let (centre, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        let mf = half_points as f64;
        let xs: Vec<f64> = (0..=2 * half_points).map(|i| centre + half * ((i as f64 - mf) / mf)).collect();
        let ys = xs.iter().map(|&x| d.density(x)).collect();
        Self::new(xs, ys)
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn mass(&self) -> f64 {
        quadrature::trapezoid(&self.abscissae, &self.ordinates)
    }

    pub fn mean(&self) -> f64 {
        let xf: Vec<f64> = self.abscissae.iter().zip(&self.ordinates).map(|(x, y)| x * y).collect();
        quadrature::trapezoid(&self.abscissae, &xf) / self.mass()
    }

    /// Linear interpolation, zero outside the grid.
    pub fn value_at(&self, x: f64) -> f64 {
        let xs = &self.abscissae;
        if x < xs[0] || x > xs[xs.len() - 1] {
            return 0.0;
        }
        let i = xs.partition_point(|&p| p <= x).min(xs.len() - 1).max(1);
        let (x0, x1) = (xs[i - 1], xs[i]);
        let (y0, y1) = (self.ordinates[i - 1], self.ordinates[i]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Common step of an equally spaced grid.
    pub fn uniform_step(&self) -> Option<f64> {
        let xs = &self.abscissae;
        let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        xs.windows(2).all(|w| math::abs((w[1] - w[0]) - h) <= 1e-9 * h).then_some(h)
    }
}

/// Density of the sum of independent variables: `f(ω) = ∫ φ₁(x) φ₂(ω − x) dx`.
///
/// Output node `i` sits at `x₀ + y₀ + i·h`. Its value is the trapezoid rule
/// over the nodes where both factors are tabulated, so a product of two
/// piecewise-constant factors integrates exactly.
pub fn convolve(f: &GridDensity, g: &GridDensity) -> Result<GridDensity> {
    let hf = f.uniform_step().ok_or_else(|| Error::Grid("first grid is not equally spaced".into()))?;
    let hg = g.uniform_step().ok_or_else(|| Error::Grid("second grid is not equally spaced".into()))?;
    if math::abs(hf - hg) > 1e-9 * hf {
        return Err(Error::Grid(format!("steps differ: {hf} vs {hg}")));
    }
    let h = 0.5 * (hf + hg);
    let (nf, ng) = (f.ordinates.len(), g.ordinates.len());
    let (x0, y0) = (f.abscissae[0], g.abscissae[0]);
    let len = nf + ng - 1;
    let mut xs = Vec::with_capacity(len);
    let mut ys = Vec::with_capacity(len);
    for i in 0..len {
        let jlo = i.saturating_sub(ng - 1);
        let jhi = i.min(nf - 1);
        let term = |j: usize| f.ordinates[j] * g.ordinates[i - j];
        let value = if jlo == jhi {
            0.0
        } else {
            let inner: f64 = (jlo..=jhi).map(term).sum();
            h * (inner - 0.5 * (term(jlo) + term(jhi)))
        };
        xs.push(x0 + y0 + i as f64 * h);
        ys.push(value);
    }
    GridDensity::with_tolerance(xs, ys, CONVOLUTION_MASS_TOL)
}

/// Pearson's coefficient `Σ(x−x̄)(y−ȳ) / √(Σ(x−x̄)² Σ(y−ȳ)²)`.
pub fn correlation(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: pairs.len() });
    }
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in pairs {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok((sxy / math::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateNormal {
    pub mean_x: f64,
    pub mean_y: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub r: f64,
}

impl BivariateNormal {
    pub fn new(mean_x: f64, mean_y: f64, sigma_x: f64, sigma_y: f64, r: f64) -> Result<Self> {
        if !(sigma_x > 0.0 && sigma_y > 0.0) {
            return Err(Error::domain("standard deviations must be positive"));
        }
        if !(math::abs(r) < 1.0) {
            return Err(Error::DegenerateLaw(r));
        }
        Ok(Self { mean_x, mean_y, sigma_x, sigma_y, r })
    }

    pub fn pdf(&self, x: f64, y: f64) -> f64 {
        let u = (x - self.mean_x) / self.sigma_x;
        let v = (y - self.mean_y) / self.sigma_y;
        let one_r2 = 1.0 - self.r * self.r;
        let q = (u * u - 2.0 * self.r * u * v + v * v) / one_r2;
        math::exp(-0.5 * q) / (2.0 * PI * self.sigma_x * self.sigma_y * math::sqrt(one_r2))
    }

    pub fn marginal_x(&self, x: f64) -> f64 {
        normal_density(x, self.mean_x, self.sigma_x)
    }

    pub fn marginal_y(&self, y: f64) -> f64 {
        normal_density(y, self.mean_y, self.sigma_y)
    }
}

pub fn bivariate_normal_pdf(params: &BivariateNormal, x: f64, y: f64) -> f64 {
    params.pdf(x, y)
}

/// Two arrivals uniform over a window of `window` units meet when the first
/// waits `wait` units: `1 − ((T − w)/T)²`.
pub fn encounter_probability(window: &Rational, wait: &Rational) -> Result<Rational> {
    if !wait.is_positive() || wait > window {
        return Err(Error::domain("need 0 < wait ≤ window"));
    }
    let miss = (window - wait) / window;
    Ok(Rational::one() - &miss * &miss)
}
