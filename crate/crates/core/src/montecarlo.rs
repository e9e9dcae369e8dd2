//! Seeded simulations: Buffon's needle, the Petersburg game, Bertrand's
//! chords, the quincunx, the encounter problem and frequency runs.
//!
//! A simulation of `n` replications is cut into chunks of [`CHUNK`]
//! replications. Chunk `i` draws from `rng.substream(i)` and the partial
//! results are combined in chunk order, so the outcome depends only on the
//! seed and the parameters, never on how many threads ran the chunks.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use crate::distributions::binomial_mass_f64;
use crate::math::{self, PI};
use crate::rational::ratio;
use crate::rng::RngStream;
use crate::{Error, Result};

/// Replications per chunk.
pub const CHUNK: u64 = 1 << 16;

/// Toss cap for the Petersburg game; payoffs stay below 2^64.
pub const PETERSBURG_CAP: u32 = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub name: String,
    pub seed: u64,
    pub replications: u64,
    pub estimate: f64,
    pub standard_error: f64,
    pub analytic_target: Option<f64>,
    pub z_score: Option<f64>,
}

impl SimReport {
    pub fn new(name: &str, seed: u64, replications: u64, estimate: f64, standard_error: f64, target: Option<f64>) -> Self {
        let z_score = target.map(|t| {
            if standard_error > 0.0 {
                (estimate - t) / standard_error
            } else if estimate == t {
                0.0
            } else {
                f64::INFINITY.copysign(estimate - t)
            }
        });
        Self { name: name.into(), seed, replications, estimate, standard_error, analytic_target: target, z_score }
    }

    /// Binomial frequency report: the estimate is `hits / n`.
    pub fn frequency(name: &str, seed: u64, hits: u64, n: u64, target: Option<f64>) -> Self {
        let f = hits as f64 / n as f64;
        Self::new(name, seed, n, f, math::sqrt(f * (1.0 - f) / n as f64), target)
    }

    /// `|z| < bound`, or false when there is no target.
    pub fn within(&self, bound: f64) -> bool {
        self.z_score.is_some_and(|z| math::abs(z) < bound)
    }
}

/// A replicated experiment split into independently seeded chunks.
pub trait Simulation: Sync {
    type Partial: Send;
    type Output;

    fn run_chunk(&self, rng: &mut RngStream, count: u64) -> Self::Partial;

    /// Combines partials given in chunk order.
    fn combine(&self, seed: u64, replications: u64, parts: Vec<Self::Partial>) -> Self::Output;
}

/// `(chunk index, replications in it)` for `n` replications.
pub fn chunk_plan(n: u64) -> impl Iterator<Item = (u64, u64)> {
    let chunks = n.div_ceil(CHUNK);
    (0..chunks).map(move |i| (i, if i + 1 == chunks { n - i * CHUNK } else { CHUNK }))
}

/// Runs every chunk on the current thread.
pub fn run<S: Simulation>(sim: &S, n: u64, rng: &RngStream) -> S::Output {
    let parts = chunk_plan(n).map(|(i, count)| sim.run_chunk(&mut rng.substream(i), count)).collect();
    sim.combine(rng.master_seed(), n, parts)
}

fn require_replications(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("need at least one replication"));
    }
    Ok(())
}

/// Needle of length `2r` thrown on lines `a` apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuffonNeedle {
    half_length: f64,
    spacing: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuffonReport {
    pub report: SimReport,
    /// `4r / (a · frequency)`; infinite when nothing was hit.
    pub pi_hat: f64,
}

impl BuffonNeedle {
    pub fn new(half_length: f64, spacing: f64) -> Result<Self> {
        if !(half_length > 0.0) || !spacing.is_finite() {
            return Err(Error::domain("needle half-length must be positive and spacing finite"));
        }
        if spacing <= 2.0 * half_length {
            return Err(Error::Geometry { length: 2.0 * half_length, spacing });
        }
        Ok(Self { half_length, spacing })
    }

    /// `4r / (πa)`.
    pub fn target(&self) -> f64 {
        4.0 * self.half_length / (PI * self.spacing)
    }
}

impl Simulation for BuffonNeedle {
    type Partial = u64;
    type Output = BuffonReport;

    fn run_chunk(&self, rng: &mut RngStream, count: u64) -> u64 {
        let mut hits = 0;
        for _ in 0..count {
            let centre = 0.5 * self.spacing * rng.next_f64();
            let angle = 0.5 * PI * rng.next_f64();
            if centre <= self.half_length * math::sin(angle) {
                hits += 1;
            }
        }
        hits
    }

    fn combine(&self, seed: u64, n: u64, parts: Vec<u64>) -> BuffonReport {
        let hits: u64 = parts.iter().sum();
        let report = SimReport::frequency("buffon-needle", seed, hits, n, Some(self.target()));
        let pi_hat = 4.0 * self.half_length / (self.spacing * report.estimate);
        BuffonReport { report, pi_hat }
    }
}

pub fn buffon_needle(half_length: f64, spacing: f64, n: u64, rng: &RngStream) -> Result<BuffonReport> {
    require_replications(n)?;
    Ok(run(&BuffonNeedle::new(half_length, spacing)?, n, rng))
}

/// The Petersburg game: the payoff is `2^(k−1)` when heads first shows at toss `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Petersburg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PetersburgPartial {
    pub total: u128,
    pub total_sq: u128,
    pub max_tosses: u32,
    pub capped: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PetersburgReport {
    pub report: SimReport,
    pub max_tosses: u32,
    /// Games that reached the toss cap.
    pub capped: u64,
}

/// Toss index of the first head, capped at [`PETERSBURG_CAP`].
pub fn petersburg_tosses(rng: &mut RngStream) -> u32 {
    let w = rng.next_u64();
    if w == 0 {
        PETERSBURG_CAP
    } else {
        w.trailing_zeros() + 1
    }
}

impl Simulation for Petersburg {
    type Partial = PetersburgPartial;
    type Output = PetersburgReport;

    fn run_chunk(&self, rng: &mut RngStream, count: u64) -> PetersburgPartial {
        let mut p = PetersburgPartial::default();
        for _ in 0..count {
            let k = petersburg_tosses(rng);
            let gain = 1u128 << (k - 1);
            p.total += gain;
            p.total_sq = p.total_sq.saturating_add(gain * gain);
            p.max_tosses = p.max_tosses.max(k);
            p.capped += u64::from(k == PETERSBURG_CAP);
        }
        p
    }

    fn combine(&self, seed: u64, n: u64, parts: Vec<PetersburgPartial>) -> PetersburgReport {
        let mut all = PetersburgPartial::default();
        for p in parts {
            all.total += p.total;
            all.total_sq = all.total_sq.saturating_add(p.total_sq);
            all.max_tosses = all.max_tosses.max(p.max_tosses);
            all.capped += p.capped;
        }
        let nf = n as f64;
        let mean = all.total as f64 / nf;
        let var = if n > 1 { (all.total_sq as f64 - nf * mean * mean).max(0.0) / (nf - 1.0) } else { 0.0 };
        PetersburgReport {
            report: SimReport::new("petersburg", seed, n, mean, math::sqrt(var / nf), None),
            max_tosses: all.max_tosses,
            capped: all.capped,
        }
    }
}

pub fn petersburg(games: u64, rng: &RngStream) -> Result<PetersburgReport> {
    require_replications(games)?;
    Ok(run(&Petersburg, games, rng))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchMeans {
    pub games: u64,
    pub means: Vec<f64>,
    pub median: f64,
}

/// Mean gain of `batches` independent batches of `games` games each. The
/// game has no finite expectation, so the median of the batch means is the
/// summary that settles.
pub fn petersburg_batches(games: u64, batches: u64, rng: &RngStream) -> Result<BatchMeans> {
    require_replications(games)?;
    require_replications(batches)?;
    let means: Vec<f64> = (0..batches).map(|b| run(&Petersburg, games, &rng.substream(b)).report.estimate).collect();
    let mut sorted = means.clone();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let median = if m % 2 == 1 { sorted[m / 2] } else { 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]) };
    Ok(BatchMeans { games, means, median })
}

/// `log2(1/p0)`: the toss beyond which continuing has probability below `p0`.
pub fn neglect_threshold(p0: f64) -> Result<f64> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::domain("p0 must lie strictly between 0 and 1"));
    }
    Ok(-math::log2(p0))
}

/// How a "random chord" of the unit circle is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChordModel {
    /// Two independent uniform points on the circle.
    Endpoints,
    /// Midpoint uniform along a random radius.
    RadialMidpoint,
    /// Midpoint uniform over the disc.
    AreaMidpoint,
}

impl ChordModel {
    pub const ALL: [ChordModel; 3] = [ChordModel::Endpoints, ChordModel::RadialMidpoint, ChordModel::AreaMidpoint];

    pub fn tag(self) -> &'static str {
        match self {
            ChordModel::Endpoints => "endpoints",
            ChordModel::RadialMidpoint => "radial_midpoint",
            ChordModel::AreaMidpoint => "area_midpoint",
        }
    }

    /// Probability that the chord is shorter than the inscribed triangle's side.
    pub fn target(self) -> crate::Rational {
        match self {
            ChordModel::Endpoints => ratio(2, 3),
            ChordModel::RadialMidpoint => ratio(1, 2),
            ChordModel::AreaMidpoint => ratio(3, 4),
        }
    }
}

impl FromStr for ChordModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChordModel::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::parameter(alloc::format!("unknown chord model `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BertrandChord(pub ChordModel);

impl Simulation for BertrandChord {
    type Partial = u64;
    type Output = SimReport;

    fn run_chunk(&self, rng: &mut RngStream, count: u64) -> u64 {
        let side = math::sqrt(3.0);
        let mut short = 0;
        for _ in 0..count {
            let hit = match self.0 {
                ChordModel::Endpoints => {
                    let gap = 2.0 * PI * (rng.next_f64() - rng.next_f64());
                    2.0 * math::abs(math::sin(0.5 * gap)) < side
                }
                // chord length 2√(1−d²) < √3 exactly when the midpoint lies beyond d = 1/2
                ChordModel::RadialMidpoint => rng.next_f64() > 0.5,
                ChordModel::AreaMidpoint => loop {
                    let x = 2.0 * rng.next_f64() - 1.0;
                    let y = 2.0 * rng.next_f64() - 1.0;
                    let d2 = x * x + y * y;
                    if d2 <= 1.0 {
                        break d2 > 0.25;
                    }
                },
            };
            short += u64::from(hit);
        }
        short
    }

    fn combine(&self, seed: u64, n: u64, parts: Vec<u64>) -> SimReport {
        let target = crate::rational::to_f64(&self.0.target());
        let name = alloc::format!("bertrand-{}", self.0.tag());
        SimReport::frequency(&name, seed, parts.iter().sum(), n, Some(target))
    }
}

pub fn bertrand_chord(model: ChordModel, n: u64, rng: &RngStream) -> Result<SimReport> {
    require_replications(n)?;
    Ok(run(&BertrandChord(model), n, rng))
}

/// Galton's board: each shot takes `rows` fair left/right steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quincunx {
    rows: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuincunxReport {
    pub rows: u32,
    pub shots: u64,
    /// Shots landing in bin `k` (number of right steps).
    pub histogram: Vec<u64>,
    pub tv_distance: f64,
}

impl Quincunx {
    pub fn new(rows: u32) -> Result<Self> {
        if rows == 0 {
            return Err(Error::domain("need at least one row"));
        }
        Ok(Self { rows })
    }
}

impl Simulation for Quincunx {
    type Partial = Vec<u64>;
    type Output = QuincunxReport;

    fn run_chunk(&self, rng: &mut RngStream, count: u64) -> Vec<u64> {
        let mut hist = vec![0u64; self.rows as usize + 1];
        for _ in 0..count {
            let mut left = self.rows;
            let mut rights = 0;
            while left > 0 {
                let take = left.min(64);
                let w = rng.next_u64();
                let w = if take == 64 { w } else { w & ((1u64 << take) - 1) };
                rights += w.count_ones();
                left -= take;
            }
            hist[rights as usize] += 1;
        }
        hist
    }

    fn combine(&self, _seed: u64, shots: u64, parts: Vec<Vec<u64>>) -> QuincunxReport {
        let mut histogram = vec![0u64; self.rows as usize + 1];
        for part in parts {
            for (h, c) in histogram.iter_mut().zip(part) {
                *h += c;
            }
        }
        let half = ratio(1, 2);
        let tv_distance = 0.5
            * histogram
                .iter()
                .enumerate()
                .map(|(k, &c)| math::abs(c as f64 / shots as f64 - binomial_mass_f64(u64::from(self.rows), &half, k as u64)))
                .sum::<f64>();
        QuincunxReport { rows: self.rows, shots, histogram, tv_distance }
    }
}

pub fn quincunx(rows: u32, shots: u64, rng: &RngStream) -> Result<QuincunxReport> {
    require_replications(shots)?;
    Ok(run(&Quincunx::new(rows)?, shots, rng))
}

/// Two people arrive uniformly within a window of `window` time units; the
/// first waits `wait` units for the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Encounter {
    window: f64,
    wait: f64,
}

impl Encounter {
    pub fn new(window: f64, wait: f64) -> Result<Self> {
        if !(wait > 0.0 && wait <= window && window.is_finite()) {
            return Err(Error::domain("need 0 < wait ≤ window"));
        }
        Ok(Self { window, wait })
    }

    pub fn target(&self) -> f64 {
        let r = (self.window - self.wait) / self.window;
        1.0 - r * r
    }
}

impl Simulation for Encounter {
    type Partial = u64;
    type Output = SimReport;

    fn run_chunk(&self, rng: &mut RngStream, count: u64) -> u64 {
        (0..count)
            .filter(|_| {
                let x = self.window * rng.next_f64();
                let y = self.window * rng.next_f64();
                math::abs(x - y) <= self.wait
            })
            .count() as u64
    }

    fn combine(&self, seed: u64, n: u64, parts: Vec<u64>) -> SimReport {
        SimReport::frequency("encounter", seed, parts.iter().sum(), n, Some(self.target()))
    }
}

pub fn encounter(window: f64, wait: f64, n: u64, rng: &RngStream) -> Result<SimReport> {
    require_replications(n)?;
    Ok(run(&Encounter::new(window, wait)?, n, rng))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyRun {
    pub p: f64,
    pub trials: u64,
    pub points: Vec<(u64, f64)>,
    /// `|final frequency − p|`.
    pub final_gap: f64,
    /// `3√(p(1−p)/n)`.
    pub three_sigma: f64,
}

/// Relative frequency of successes after each checkpoint in one sequential run.
pub fn frequency_run(p: f64, trials: u64, checkpoints: &[u64], rng: &RngStream) -> Result<FrequencyRun> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("p must lie in [0, 1]"));
    }
    require_replications(trials)?;
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) || checkpoints.iter().any(|&c| c == 0 || c > trials) {
        return Err(Error::domain("checkpoints must be ascending within 1..=trials"));
    }
    let mut rng = rng.clone();
    let mut hits = 0u64;
    let mut points = Vec::with_capacity(checkpoints.len() + 1);
    let mut next = checkpoints.iter().peekable();
    for i in 1..=trials {
        hits += u64::from(rng.bernoulli(p));
        if next.peek() == Some(&&i) {
            next.next();
            points.push((i, hits as f64 / i as f64));
        }
    }
    let last = hits as f64 / trials as f64;
    if points.last().map(|pt| pt.0) != Some(trials) {
        points.push((trials, last));
    }
    Ok(FrequencyRun {
        p,
        trials,
        points,
        final_gap: math::abs(last - p),
        three_sigma: 3.0 * math::sqrt(p * (1.0 - p) / trials as f64),
    })
}
