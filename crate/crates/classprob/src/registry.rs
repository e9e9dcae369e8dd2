//! The compiled-in reproduction suite.

use classprob_core::distributions::{
    chebyshev_bound, grouped_moment, normal_cdf, normal_quantile, normal_table_value, quadrature_moments, sample_stats,
    Distribution, Sample, NORMAL_QUADRATURE_TOL,
};
use classprob_core::estimation::{
    bervi_coverage, confidence_interval, gauss_bracket, least_squares, mean_with_error, minimax_fit, pnorm_fit, LinearSystem,
};
use classprob_core::exact::{
    bayes_posteriors, classical_probability, conditioned_transfer, de_mere, dice_sum_count, huygens_draw, joint_probability,
    points_division, poisson_urn, ruin_chances, total_probability, union_probability, CauseSystem, FiniteEventSpace,
};
use classprob_core::limit::{
    bayes_posterior_mass, bernoulli_sample_size, dml_integral, dml_local, lln_gap_exact, nb_bound, timerding_limit_check,
    BetaPosterior,
};
use classprob_core::markov::{
    bernoulli_laplace_chain, bernoulli_laplace_stationary, evolve, expected_white, n_step, stationary, three_urn_expected,
    StateDistribution, TransitionMatrix,
};
use classprob_core::montecarlo::{
    frequency_run, neglect_threshold, petersburg_batches, quincunx, BertrandChord, BuffonNeedle, ChordModel, Encounter,
    SimReport, Simulation,
};
use classprob_core::rational::{self, from_biguint, int, ratio, Rational};
use classprob_core::rng::RngStream;
use classprob_core::transforms::{
    convolve, correlation, encounter_probability, push_density, GridDensity, MonotoneMap, StandardCauchy,
};

use crate::parallel;
use crate::report::Kind;
use crate::scenario::{Check, Computed, Expected, Scenario};

pub const COMBINATORICS: &str = "combinatorics";
pub const DISTRIBUTIONS: &str = "distributions";
pub const LIMITS: &str = "limit theorems";
pub const TRANSFORMS: &str = "transforms";
pub const SIMULATION: &str = "simulation";
pub const CHAINS: &str = "urn chains";
pub const FITTING: &str = "observation fitting";

fn ok<T>(r: classprob_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn exact(id: &str, section: &str, expected: Vec<Rational>, f: impl Fn() -> classprob_core::Result<Vec<Rational>> + Send + Sync + 'static) -> Scenario {
    Scenario::new(id, section, Kind::Exact, Expected::Exact(expected), move |_| ok(f()).map(Computed::Exact))
}

fn numeric(id: &str, section: &str, checks: Vec<Check>, f: impl Fn() -> classprob_core::Result<Vec<f64>> + Send + Sync + 'static) -> Scenario {
    Scenario::new(id, section, Kind::Numeric, Expected::Checks(checks), move |_| ok(f()).map(Computed::Reals))
}

fn near(value: f64, tol: f64) -> Check {
    Check::Near { value, tol }
}

/// Fraction of samples of `n` standard normal values whose range covers the median 0.
struct MedianCoverage {
    n: u64,
    target: f64,
}

impl Simulation for MedianCoverage {
    type Partial = u64;
    type Output = SimReport;

    fn run_chunk(&self, rng: &mut RngStream, count: u64) -> u64 {
        (0..count)
            .filter(|_| {
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for _ in 0..self.n {
                    let x = rng.normal();
                    lo = lo.min(x);
                    hi = hi.max(x);
                }
                lo <= 0.0 && 0.0 <= hi
            })
            .count() as u64
    }

    fn combine(&self, seed: u64, n: u64, parts: Vec<u64>) -> SimReport {
        SimReport::frequency("median-coverage", seed, parts.iter().sum(), n, Some(self.target))
    }
}

fn two_dice_space() -> classprob_core::Result<FiniteEventSpace> {
    let mut space = FiniteEventSpace::new(36)?;
    space.add_event_where("first six", |w| w / 6 == 5)?;
    space.add_event_where("second six", |w| w % 6 == 5)?;
    Ok(space)
}

fn three_urns() -> classprob_core::Result<CauseSystem> {
    CauseSystem::uniform(vec![ratio(1, 3), ratio(2, 3), ratio(3, 8)])
}

fn combinatorics() -> Vec<Scenario> {
    vec![
        exact("galileo-dice", COMBINATORICS, vec![ratio(25, 216), ratio(27, 216)], || {
            let nine = from_biguint(dice_sum_count(3, 6, 9)?);
            let ten = from_biguint(dice_sum_count(3, 6, 10)?);
            Ok(vec![nine / int(216), ten / int(216)])
        })
        .with_note("25 and 27 of 216 outcomes for sums 9 and 10"),
        exact("leibniz-dice", COMBINATORICS, vec![int(1), int(2)], || {
            Ok(vec![from_biguint(dice_sum_count(2, 6, 12)?), from_biguint(dice_sum_count(2, 6, 11)?)])
        }),
        exact("classical-definition", COMBINATORICS, vec![ratio(25, 216), int(0), int(1)], || {
            Ok(vec![classical_probability(25, 216)?, classical_probability(0, 6)?, classical_probability(6, 6)?])
        }),
        exact("two-roll-six", COMBINATORICS, vec![ratio(11, 36)], || {
            Ok(vec![union_probability(&two_dice_space()?, &["first six", "second six"])?])
        }),
        exact("multiplication-batch", COMBINATORICS, vec![ratio(18, 25)], || Ok(vec![joint_probability(&ratio(96, 100), &ratio(3, 4))?])),
        exact("total-probability", COMBINATORICS, vec![ratio(11, 24), ratio(99, 100)], || {
            let high = CauseSystem::uniform(vec![ratio(99, 100); 3])?;
            Ok(vec![total_probability(&three_urns()?), total_probability(&high)])
        }),
        exact("bayes-three-urns", COMBINATORICS, vec![ratio(8, 33), ratio(16, 33), ratio(9, 33)], || bayes_posteriors(&three_urns()?))
            .with_note("ratio 8:16:9"),
        exact("points-division", COMBINATORICS, vec![ratio(3, 4), ratio(11, 16), ratio(1, 2)], || {
            Ok(vec![points_division(1, 2, &ratio(1, 2))?, points_division(2, 3, &ratio(1, 2))?, points_division(4, 4, &ratio(1, 2))?])
        }),
        exact("ruin-ratio", COMBINATORICS, vec![rational::pow(&int(5), 12) / rational::pow(&int(9), 12)], || {
            let (pa, pb) = conditioned_transfer(15, 27)?;
            let (win_a, win_b) = ruin_chances(12, 12, &pa, &pb)?;
            Ok(vec![win_a / win_b])
        })
        .with_note("5^12 : 9^12 with transfers conditioned to 15:27"),
        exact("huygens-draw", COMBINATORICS, vec![ratio(35, 99)], || Ok(vec![huygens_draw(12, 4, 7, 3)?])),
        Scenario::new(
            "de-mere",
            COMBINATORICS,
            Kind::Exact,
            Expected::Text(vec!["0.518".into(), "0.491".into(), "0.026".into()]),
            |_| {
                let (p1, p2) = de_mere();
                let diff = &p1 - &p2;
                Ok(Computed::Text(vec![rational::to_decimal(&p1, 3), rational::to_decimal(&p2, 3), rational::to_decimal(&diff, 3)]))
            },
        )
        .with_note("1 − (35/36)^24 = 0.491404; a printed 0.492 comes from rounding 35/36 to 0.9722 first"),
        exact("poisson-urn", COMBINATORICS, vec![ratio(1, 2); 100], || (1..=100).map(poisson_urn).collect()),
    ]
}

fn distributions() -> Vec<Scenario> {
    vec![
        exact("binomial-pmf", DISTRIBUTIONS, vec![ratio(25, 216)], || Distribution::binomial(4, ratio(1, 6))?.exact_mass(2).map(|m| vec![m])),
        numeric("normal-table-z3", DISTRIBUTIONS, vec![near(0.49865, 5e-5)], || Ok(vec![normal_table_value(3.0)])),
        numeric("normal-quantile-075", DISTRIBUTIONS, vec![near(0.67449, 5e-5)], || Ok(vec![normal_quantile(0.75)])),
        numeric(
            "normal-moments-quadrature",
            DISTRIBUTIONS,
            vec![Check::Below(1e-8), Check::Below(1e-8), Check::Below(1e-6)],
            || {
                let (a, sigma) = (1.5, 0.7);
                let m = quadrature_moments(&Distribution::normal(a, sigma)?, NORMAL_QUADRATURE_TOL)?;
                let s2 = sigma * sigma;
                Ok(vec![(m.mean - a).abs(), (m.variance - s2).abs(), (m.fourth_central - 3.0 * s2 * s2).abs()])
            },
        ),
        numeric("poisson-tail", DISTRIBUTIONS, vec![near(1.0 - 13.0 * (-3.0f64).exp(), 1e-12)], || {
            Ok(vec![1.0 - Distribution::poisson(3.0)?.cdf(3.0)])
        }),
        numeric("chebyshev-normal", DISTRIBUTIONS, vec![near(0.75, 0.0), near(0.954500, 1e-6)], || {
            Ok(vec![chebyshev_bound(1.0, 2.0)?, normal_cdf(2.0) - normal_cdf(-2.0)])
        }),
        exact("grouped-moments", DISTRIBUTIONS, vec![ratio(18, 70), ratio(24, 70)], || {
            let counts = [(0.0, 55), (1.0, 12), (2.0, 3)];
            // both moments are multiples of 1/70, so rounding to it is exact
            let to_70ths = |x: f64| ratio((x * 70.0).round() as i64, 70);
            Ok(vec![to_70ths(grouped_moment(&counts, 1)?), to_70ths(grouped_moment(&counts, 2)?)])
        }),
        numeric("sample-stats-matchbox", DISTRIBUTIONS, vec![near(50.0, 0.0), near(40.0, 0.0), near(800.0, 1e-9)], || {
            let s = sample_stats(&Sample::new(vec![30.0, 70.0])?)?;
            Ok(vec![s.mean, s.range, s.variance])
        }),
        numeric("half-cauchy-variance", DISTRIBUTIONS, vec![Check::Above(f64::MAX)], || Ok(vec![Distribution::half_cauchy().moments().variance])),
    ]
}

fn limits() -> Vec<Scenario> {
    vec![
        numeric("sample-size", LIMITS, vec![near(250.0, 0.0), Check::Below(250.5)], || {
            let s = bernoulli_sample_size(&ratio(1, 2), &ratio(1, 10), &ratio(1, 10))?;
            Ok(vec![s.chebyshev_n as f64, s.exact_n as f64])
        }),
        exact("lln-gap-exact", LIMITS, vec![{
            let total: Rational = (41..=59).map(|k| from_biguint(rational::binomial(100, k))).sum();
            total / from_biguint(rational::biguint_pow(&2u32.into(), 100))
        }], || Ok(vec![lln_gap_exact(&ratio(1, 2), 100, &ratio(1, 10))?])),
        numeric("dml-integral", LIMITS, vec![near(0.682689, 1e-4), Check::Below(0.01)], || {
            let a = dml_integral(10_000, &ratio(1, 2), -1.0, 1.0)?;
            Ok(vec![a.approx, a.abs_err])
        }),
        numeric("dml-integral-skew", LIMITS, vec![Check::Above(0.0)], || {
            let skew = dml_integral(100, &ratio(1, 20), -1.0, 1.0)?;
            let even = dml_integral(100, &ratio(1, 2), -1.0, 1.0)?;
            Ok(vec![skew.abs_err - even.abs_err])
        })
        .with_note("error at p = 0.05 exceeds error at p = 1/2 for n = 100"),
        numeric(
            "dml-local-erratum",
            LIMITS,
            vec![near(3.727, 5e-4), near(3.70e-3, 5e-5), near(2.474_06e-3, 5e-8)],
            || {
                let law = classprob_core::limit::BinomialApprox::new(100, ratio(1, 6))?;
                let a = dml_local(100, &ratio(1, 6), 7)?;
                Ok(vec![law.scale(), a.approx, a.exact])
            },
        )
        .with_note("√npq = √13.889 ≈ 3.727; the value 13.9 is npq itself, not its root. Seven sixes sit 2.6σ out, where the local formula overstates the mass by half"),
        numeric("nb-bound", LIMITS, vec![near(0.393469, 1e-6), Check::Above(0.0)], || {
            let nb = nb_bound(1.0)?;
            let dml = dml_integral(10_000, &ratio(1, 2), -1.0, 1.0)?;
            Ok(vec![nb, dml.approx - nb])
        }),
        exact("posterior-mass", LIMITS, vec![ratio(2, 5), ratio(1, 4), int(1)], || {
            Ok(vec![
                bayes_posterior_mass(&BetaPosterior::new(0, 0, ratio(3, 10), ratio(7, 10))?),
                bayes_posterior_mass(&BetaPosterior::new(1, 0, int(0), ratio(1, 2))?),
                bayes_posterior_mass(&BetaPosterior::new(2, 1, int(0), int(1))?),
            ])
        }),
        numeric("timerding-limit", LIMITS, vec![Check::Below(0.02), Check::Below(0.0)], || {
            let small = timerding_limit_check(50, 50, -1.0, 1.0)?;
            let large = timerding_limit_check(400, 400, -1.0, 1.0)?;
            Ok(vec![small.abs_err, large.abs_err - small.abs_err])
        }),
    ]
}

fn transforms() -> Vec<Scenario> {
    vec![
        numeric("cauchy-cube", TRANSFORMS, vec![Check::Below(1e-12)], || {
            let grid: Vec<f64> = (0..=400).map(|i| -20.0 + 0.1 * f64::from(i)).filter(|y| (y - 1.0).abs() > 1e-9).collect();
            let out = push_density(&StandardCauchy, &MonotoneMap::one_minus_cube(), &grid)?;
            let worst = out
                .abscissae
                .iter()
                .zip(&out.ordinates)
                .map(|(y, v)| {
                    let t = (1.0 - y).abs().powf(2.0 / 3.0);
                    let printed = 1.0 / (std::f64::consts::PI * (1.0 + t)) / (3.0 * t);
                    ((v - printed) / printed).abs()
                })
                .fold(0.0, f64::max);
            Ok(vec![worst])
        }),
        numeric("uniform-convolution", TRANSFORMS, vec![Check::Below(1e-4)], || {
            let a = 1.0;
            let u = GridDensity::from_distribution(&Distribution::uniform(a)?, 500)?;
            let tri = convolve(&u, &u)?;
            let worst = tri
                .abscissae()
                .iter()
                .zip(tri.ordinates())
                .map(|(x, v)| (v - ((2.0 * a - x.abs()) / (4.0 * a * a)).max(0.0)).abs())
                .fold(0.0, f64::max);
            Ok(vec![worst])
        }),
        numeric("normal-convolution", TRANSFORMS, vec![Check::Below(1e-4)], || {
            let g = GridDensity::from_distribution(&Distribution::standard_normal(), 800)?;
            let sum = convolve(&g, &g)?;
            let target = Distribution::normal(0.0, std::f64::consts::SQRT_2)?;
            let worst = sum
                .abscissae()
                .iter()
                .zip(sum.ordinates())
                .map(|(x, v)| (v - target.mass_or_density(*x).unwrap_or(0.0)).abs())
                .fold(0.0, f64::max);
            Ok(vec![worst])
        }),
        numeric("square-uncorrelated", TRANSFORMS, vec![near(0.0, 1e-15)], || {
            let pairs: Vec<(f64, f64)> = [-2.0, -1.0, 1.0, 2.0].iter().map(|&x: &f64| (x, x * x)).collect();
            Ok(vec![correlation(&pairs)?])
        }),
        exact("encounter-exact", TRANSFORMS, vec![ratio(5, 9)], || Ok(vec![encounter_probability(&int(60), &int(20))?])),
    ]
}

fn simulations() -> Vec<Scenario> {
    let mut out = vec![
        Scenario::new("buffon-needle", SIMULATION, Kind::Statistical, Expected::Z { bound: 4.0, extras: vec![Check::Below(0.02)] }, |ctx| {
            let needle = ok(BuffonNeedle::new(0.25, 1.0))?;
            let r = parallel::run(&needle, ctx.reps_or(1_000_000).max(1), &ctx.stream("buffon-needle"), ctx.lanes);
            Ok(Computed::Sim(r.report, vec![(r.pi_hat - std::f64::consts::PI).abs()]))
        })
        .with_note("target 1/π; second value is |π̂ − π|"),
        Scenario::new("encounter-mc", SIMULATION, Kind::Statistical, Expected::Z { bound: 3.0, extras: vec![] }, |ctx| {
            let e = ok(Encounter::new(60.0, 20.0))?;
            Ok(Computed::Sim(parallel::run(&e, ctx.reps_or(1_000_000).max(1), &ctx.stream("encounter-mc"), ctx.lanes), vec![]))
        })
        .with_note("target 5/9"),
        Scenario::new("petersburg-batches", SIMULATION, Kind::Statistical, Expected::Checks(vec![Check::Within { lo: 4.0, hi: 8.0 }]), |ctx| {
            let b = ok(petersburg_batches(2048, 1000, &ctx.stream("petersburg-batches")))?;
            Ok(Computed::Reals(vec![b.median]))
        })
        .with_note("median of 1000 batch means of 2048 games; 4.9 was observed once by hand"),
        Scenario::new("quincunx", SIMULATION, Kind::Statistical, Expected::Checks(vec![Check::Below(0.02)]), |ctx| {
            let q = ok(quincunx(20, ctx.reps_or(100_000).max(1), &ctx.stream("quincunx")))?;
            Ok(Computed::Reals(vec![q.tv_distance]))
        })
        .with_note("total variation distance to binomial(20, 1/2)"),
        Scenario::new("frequency-run", SIMULATION, Kind::Statistical, Expected::Checks(vec![Check::Below(1.0)]), |ctx| {
            let n = ctx.reps_or(100_000).max(1);
            let run = ok(frequency_run(0.5, n, &[], &ctx.stream("frequency-run")))?;
            Ok(Computed::Reals(vec![run.final_gap / run.three_sigma]))
        })
        .with_note("final |p̂ − p| in units of 3√(pq/n)"),
        Scenario::new("median-coverage-mc", SIMULATION, Kind::Statistical, Expected::Z { bound: 3.0, extras: vec![] }, |ctx| {
            let target = rational::to_f64(&ok(bervi_coverage(5))?);
            let sim = MedianCoverage { n: 5, target };
            Ok(Computed::Sim(parallel::run(&sim, ctx.reps_or(100_000).max(1), &ctx.stream("median-coverage-mc"), ctx.lanes), vec![]))
        })
        .with_note("range of 5 observations covers the median with probability 15/16"),
        numeric("neglect-threshold", SIMULATION, vec![Check::Within { lo: 13.28, hi: 13.30 }, near(1.0, 0.0), near(10.0, 0.0)], || {
            Ok(vec![neglect_threshold(1e-4)?, neglect_threshold(0.5)?, neglect_threshold(1.0 / 1024.0)?])
        }),
    ];
    for model in ChordModel::ALL {
        let id = format!("bertrand-{}", model.tag().replace('_', "-"));
        let tag = id.clone();
        out.push(
            Scenario::new(&id, SIMULATION, Kind::Statistical, Expected::Z { bound: 4.0, extras: vec![] }, move |ctx| {
                Ok(Computed::Sim(parallel::run(&BertrandChord(model), ctx.reps_or(1_000_000).max(1), &ctx.stream(&tag), ctx.lanes), vec![]))
            })
            .with_note(&format!("target {}", rational::to_fraction(&model.target()))),
        );
    }
    out
}

fn chains() -> Vec<Scenario> {
    vec![
        exact("two-state-chain", CHAINS, vec![ratio(86, 100), ratio(14, 100), ratio(70, 100), ratio(30, 100), ratio(5, 6), ratio(1, 6)], || {
            let p = TransitionMatrix::new(vec![vec![ratio(9, 10), ratio(1, 10)], vec![ratio(1, 2), ratio(1, 2)]])?;
            let mut out: Vec<Rational> = n_step(&p, 2).rows().iter().flatten().cloned().collect();
            out.extend(stationary(&p)?.probabilities().iter().cloned());
            Ok(out)
        }),
        exact("urn-chain-row", CHAINS, vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)], || Ok(bernoulli_laplace_chain(2)?.rows()[1].clone())),
        Scenario::new("urn-stationary", CHAINS, Kind::Exact, Expected::Exact(vec![int(1); 11]), |_| {
            (2..=12u64)
                .map(|n| {
                    let pi = ok(stationary(&ok(bernoulli_laplace_chain(n))?))?;
                    Ok(if pi.probabilities() == bernoulli_laplace_stationary(n).as_slice() { int(1) } else { int(0) })
                })
                .collect::<Result<Vec<_>, String>>()
                .map(Computed::Exact)
        })
        .with_note("1 where the solved law equals C(n,w)²/C(2n,n), n = 2..12"),
        numeric("urn-expected-white", CHAINS, vec![Check::Below(1e-10)], || {
            let mut worst: f64 = 0.0;
            for n in 1..=20u64 {
                let chain = bernoulli_laplace_chain(n)?.to_f64();
                let mut d = StateDistribution::point_mass(n as usize + 1, n as usize)?;
                for r in 0..=100u64 {
                    if r > 0 {
                        d = evolve(&d, &chain, 1)?;
                    }
                    let mean: f64 = d.probabilities().iter().enumerate().map(|(w, p)| w as f64 * p).sum();
                    worst = worst.max((mean - expected_white(n, r)?).abs());
                }
            }
            Ok(vec![worst])
        })
        .with_note("closed form against chain evolution, n ≤ 20, r ≤ 100"),
        numeric("three-urn-limit", CHAINS, vec![Check::Below(1e-6)], || {
            let e = three_urn_expected(10, 200)?;
            Ok(vec![e.iter().flatten().map(|x| (x - 10.0 / 3.0).abs()).fold(0.0, f64::max)])
        }),
    ]
}

fn fitting() -> Vec<Scenario> {
    vec![
        numeric("least-squares-mean", FITTING, vec![near(2.0, 1e-12), near(2.5, 1e-12), Check::Below(1e-9)], || {
            let plain = least_squares(&LinearSystem::direct_observations(&[1.0, 2.0, 3.0])?)?;
            // weights 1, 1, 4 through a_i = √p_i, w_i = −√p_i·l_i; weighted mean (1 + 2 + 4·3)/6
            let weighted = least_squares(&LinearSystem::new(vec![vec![1.0], vec![1.0], vec![2.0]], vec![-1.0, -2.0, -6.0])?)?;
            let sys = LinearSystem::new(
                vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0], vec![1.0, 3.0], vec![1.0, 4.0]],
                vec![-0.1, -1.3, -1.8, -3.4, -3.9],
            )?;
            let fit = least_squares(&sys)?;
            let orth = (0..2).map(|j| gauss_bracket(&sys.column(j), &fit.residuals).map(f64::abs)).collect::<classprob_core::Result<Vec<_>>>()?;
            Ok(vec![plain.estimates[0], weighted.estimates[0], orth.into_iter().fold(0.0, f64::max)])
        }),
        numeric("minimax-midrange", FITTING, vec![near(2.5, 1e-9), near(1.5, 1e-9), near(0.0, 0.05)], || {
            let sys = LinearSystem::direct_observations(&[1.0, 2.0, 4.0])?;
            let mm = minimax_fit(&sys)?;
            let p16 = pnorm_fit(&sys, 16)?;
            Ok(vec![mm.estimates[0], mm.objective, p16.estimates[0] - mm.estimates[0]])
        })
        .with_note("third value is the 2k-norm estimate at k = 16 minus the minimax estimate"),
        numeric("mean-error", FITTING, vec![near(50.0, 0.0), near(400.0, 1e-9), near(1.959964, 1e-6)], || {
            let s = Sample::new(vec![30.0, 70.0])?;
            let me = mean_with_error(&s)?;
            let ci = confidence_interval(&s, 0.95)?;
            Ok(vec![me.mean, me.variance_of_mean, ci.z])
        }),
        exact("median-coverage", FITTING, vec![ratio(1, 2), ratio(15, 16), ratio(1023, 1024)], || {
            Ok(vec![bervi_coverage(2)?, bervi_coverage(5)?, bervi_coverage(11)?])
        }),
    ]
}

/// Every compiled-in scenario, sorted by id.
pub fn builtin() -> Vec<Scenario> {
    let mut all: Vec<Scenario> =
        [combinatorics(), distributions(), limits(), transforms(), simulations(), chains(), fitting()].into_iter().flatten().collect();
    all.sort_by(|a, b| a.id.cmp(&b.id));
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Ctx;
    use std::collections::BTreeSet;

    #[test]
    fn ids_are_unique_and_sorted() {
        let all = builtin();
        let ids: Vec<&str> = all.iter().map(|s| s.id.as_str()).collect();
        let set: BTreeSet<&str> = ids.iter().copied().collect();
        assert_eq!(set.len(), ids.len());
        assert!(ids.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn exact_and_numeric_scenarios_pass() {
        let ctx = Ctx::new(0x5EED);
        for s in builtin().iter().filter(|s| s.kind != Kind::Statistical) {
            let r = s.run(&ctx, false);
            assert!(r.pass, "{r:?}");
        }
    }
}
