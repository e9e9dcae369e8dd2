//! Acceptance run: one PASS/FAIL line per criterion, grouped, with group
//! runtimes. Exits non-zero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use classprob::parallel;
use classprob::scenario::Ctx;
use classprob_core::distributions::{chebyshev_bound, normal_quantile, normal_table_value, quadrature_moments, Distribution, Sample};
use classprob_core::estimation::{bervi_coverage, gauss_bracket, least_squares, minimax_fit, pnorm_fit, LinearSystem};
use classprob_core::exact::{
    bayes_posteriors, conditioned_transfer, de_mere, dice_sum_count, points_division, poisson_urn, ruin_chances, total_probability,
    union_probability, CauseSystem, FiniteEventSpace,
};
use classprob_core::limit::{dml_integral, dml_local, timerding_limit_check, BinomialApprox};
use classprob_core::linalg::mat_mul;
use classprob_core::markov::{
    bernoulli_laplace_chain, bernoulli_laplace_stationary, expected_white, n_step, stationary, step, StateDistribution, TransitionMatrix,
};
use classprob_core::montecarlo::{frequency_run, neglect_threshold, petersburg_batches, quincunx, BertrandChord, BuffonNeedle, ChordModel, Encounter};
use classprob_core::rational::{self, from_biguint, int, ratio, Rational};
use classprob_core::rng::RngStream;
use classprob_core::transforms::{convolve, correlation, GridDensity};

const SEED: u64 = 0x5EED;

struct Group {
    name: &'static str,
    budget: Duration,
    lines: Vec<(bool, String, String)>,
}

impl Group {
    fn new(name: &'static str, budget: Duration) -> Self {
        Self { name, budget, lines: vec![] }
    }

    fn check(&mut self, id: &str, pass: bool, detail: impl Into<String>) {
        self.lines.push((pass, id.to_string(), detail.into()));
    }

    fn finish(mut self, elapsed: Duration) -> Vec<(bool, String, String)> {
        let limit = self.budget.as_secs_f64();
        self.lines.push((
            elapsed <= self.budget,
            "runtime".into(),
            format!("{:.3} s against a {limit} s budget", elapsed.as_secs_f64()),
        ));
        let name = self.name;
        self.lines.into_iter().map(|(p, id, d)| (p, format!("{name}/{id}"), d)).collect()
    }
}

fn timed(f: impl FnOnce() -> Group) -> Vec<(bool, String, String)> {
    let start = Instant::now();
    let g = f();
    g.finish(start.elapsed())
}

fn r(x: &Rational) -> String {
    rational::to_fraction(x)
}

fn exact_group() -> Group {
    let mut g = Group::new("exact", Duration::from_secs(1));

    let nine = dice_sum_count(3, 6, 9).unwrap();
    let ten = dice_sum_count(3, 6, 10).unwrap();
    g.check("galileo-dice", nine == 25u32.into() && ten == 27u32.into(), format!("sum 9: {nine} of 216, sum 10: {ten} of 216"));

    let mut space = FiniteEventSpace::new(36).unwrap();
    space.add_event_where("a", |w| w / 6 == 5).unwrap();
    space.add_event_where("b", |w| w % 6 == 5).unwrap();
    let union = union_probability(&space, &["a", "b"]).unwrap();
    g.check("two-roll-six", union == ratio(11, 36), r(&union));

    let urns = CauseSystem::uniform(vec![ratio(1, 3), ratio(2, 3), ratio(3, 8)]).unwrap();
    let total = total_probability(&urns);
    let post = bayes_posteriors(&urns).unwrap();
    let scaled: Vec<Rational> = post.iter().map(|p| p * ratio(33, 1)).collect();
    g.check(
        "total-probability-and-bayes",
        total == ratio(11, 24) && scaled == vec![int(8), int(16), int(9)],
        format!("total {} ≈ {}, posteriors ×33 = {}", r(&total), rational::to_decimal(&total, 3), scaled.iter().map(r).collect::<Vec<_>>().join(":")),
    );

    let points = points_division(1, 2, &ratio(1, 2)).unwrap();
    let (pa, pb) = conditioned_transfer(15, 27).unwrap();
    let (wa, wb) = ruin_chances(12, 12, &pa, &pb).unwrap();
    let ruin = &wa / &wb;
    let want = rational::pow(&int(5), 12) / rational::pow(&int(9), 12);
    g.check("points-and-ruin", points == ratio(3, 4) && ruin == want, format!("points {}, ruin ratio {}", r(&points), r(&ruin)));

    let (p1, p2) = de_mere();
    let shown = [rational::to_decimal(&p1, 3), rational::to_decimal(&p2, 3), rational::to_decimal(&(&p1 - &p2), 3)];
    g.check(
        "de-mere-rendering",
        shown == ["0.518", "0.492", "0.026"],
        format!("rendered {} / {} / {}, wanted 0.518 / 0.492 / 0.026; 1 − (35/36)^24 = {}", shown[0], shown[1], shown[2], rational::to_decimal(&p2, 6)),
    );

    let pmf = Distribution::binomial(4, ratio(1, 6)).unwrap().exact_mass(2).unwrap();
    let halves = (1..=100).all(|n| poisson_urn(n).unwrap() == ratio(1, 2));
    g.check("binomial-pmf-and-poisson-urn", pmf == ratio(25, 216) && halves, format!("pmf {}, poisson urn 1/2 for n = 1..100: {halves}", r(&pmf)));

    let bervi = (2..=60u64).all(|n| bervi_coverage(n).unwrap() == int(1) - rational::pow(&ratio(1, 2), n - 1));
    let t = neglect_threshold(1e-4).unwrap();
    g.check("bervi-and-neglect", bervi && (13.28..=13.30).contains(&t), format!("coverage identity for n = 2..60: {bervi}; threshold {t:.4}"));
    g
}

fn numeric_group() -> Group {
    let mut g = Group::new("numeric", Duration::from_secs(30));

    let z3 = normal_table_value(3.0);
    g.check("normal-table-z3", (z3 - 0.49865).abs() <= 5e-5, format!("{z3:.6}"));

    let q = normal_quantile(0.75);
    g.check("normal-quantile-075", (q - 0.67449).abs() <= 5e-5, format!("{q:.6}"));

    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for (a, s) in [(0.0, 1.0), (1.5, 0.7), (-3.0, 2.5), (10.0, 0.1)] {
        let m = quadrature_moments(&Distribution::normal(a, s).unwrap(), 1e-12).unwrap();
        worst.0 = worst.0.max((m.mean - a).abs());
        worst.1 = worst.1.max((m.variance - s * s).abs());
        worst.2 = worst.2.max((m.fourth_central - 3.0 * s.powi(4)).abs());
    }
    g.check(
        "normal-quadrature-moments",
        worst.0 < 1e-8 && worst.1 < 1e-8 && worst.2 <= 1e-6,
        format!("max errors: mean {:.1e}, variance {:.1e}, fourth {:.1e}", worst.0, worst.1, worst.2),
    );

    let big = dml_integral(10_000, &ratio(1, 2), -1.0, 1.0).unwrap();
    let even = dml_integral(100, &ratio(1, 2), -1.0, 1.0).unwrap();
    let skew = dml_integral(100, &ratio(1, 20), -1.0, 1.0).unwrap();
    g.check(
        "dml-integral",
        big.abs_err < 0.01 && (big.approx - 0.6827).abs() <= 1e-4 && skew.abs_err > even.abs_err,
        format!("n = 10⁴: approx {:.6}, error {:.2e}; n = 100 error at p = 0.05 {:.4} against {:.4} at p = 1/2", big.approx, big.abs_err, skew.abs_err, even.abs_err),
    );

    let local = dml_local(100, &ratio(1, 6), 7).unwrap();
    g.check(
        "dml-local-relative-error",
        local.rel_err() <= 0.15,
        format!("approx {:.5e}, exact {:.5e}, relative error {:.1}%", local.approx, local.exact, 100.0 * local.rel_err()),
    );
    let scale = BinomialApprox::new(100, ratio(1, 6)).unwrap().scale();
    g.check("dml-local-scale", (scale - 3.727).abs() < 5e-4, format!("√npq = {scale:.4} (npq = {:.3}, printed root 13.9)", scale * scale));

    let t50 = timerding_limit_check(50, 50, -1.0, 1.0).unwrap();
    let t400 = timerding_limit_check(400, 400, -1.0, 1.0).unwrap();
    g.check(
        "timerding-limit",
        t50.abs_err < 0.02 && t400.abs_err < t50.abs_err,
        format!("error {:.5} at (50, 50), {:.5} at (400, 400)", t50.abs_err, t400.abs_err),
    );

    let mut urn_ok = true;
    for n in 1..=12u64 {
        let chain = bernoulli_laplace_chain(n).unwrap();
        let formula: Vec<Rational> =
            (0..=n).map(|w| from_biguint(rational::binomial(n, w).pow(2)) / from_biguint(rational::binomial(2 * n, n))).collect();
        let law = StateDistribution::new(formula.clone()).unwrap();
        urn_ok &= bernoulli_laplace_stationary(n) == formula;
        urn_ok &= step(&law, &chain).unwrap().probabilities() == formula.as_slice();
        if n >= 2 {
            urn_ok &= stationary(&chain).unwrap().probabilities() == formula.as_slice();
        }
    }
    let mut white_err = 0.0f64;
    for n in 1..=20u64 {
        let chain = bernoulli_laplace_chain(n).unwrap().to_f64();
        let mut law = StateDistribution::<f64>::point_mass(chain.states(), n as usize).unwrap();
        for rr in 0..=100u64 {
            white_err = white_err.max((law.mean_index() - expected_white(n, rr).unwrap()).abs());
            law = step(&law, &chain).unwrap();
        }
    }
    g.check(
        "urn-stationary-and-expected-white",
        urn_ok && white_err < 1e-10,
        format!("C(n,w)²/C(2n,n) invariant and solved exactly for n ≤ 12: {urn_ok}; expected-white error {white_err:.1e}"),
    );

    let u = GridDensity::from_distribution(&Distribution::uniform(1.0).unwrap(), 500).unwrap();
    let tri = convolve(&u, &u).unwrap();
    let target = Distribution::triangular(2.0).unwrap();
    let conv_err = tri
        .abscissae()
        .iter()
        .zip(tri.ordinates())
        .map(|(x, v)| (v - target.mass_or_density(*x).unwrap()).abs())
        .fold(0.0, f64::max);
    g.check("uniform-convolution", conv_err < 1e-4, format!("max pointwise error {conv_err:.1e}"));

    let obs = [3.1, 2.7, 3.4, 2.9, 3.0];
    let ls = least_squares(&LinearSystem::direct_observations(&obs).unwrap()).unwrap();
    let mean = obs.iter().sum::<f64>() / obs.len() as f64;
    let weights = [1.0, 4.0, 2.0, 0.5, 3.0];
    let wls = least_squares(
        &LinearSystem::new(weights.iter().map(|p: &f64| vec![p.sqrt()]).collect(), weights.iter().zip(&obs).map(|(p, l)| -p.sqrt() * l).collect())
            .unwrap(),
    )
    .unwrap();
    let wmean = weights.iter().zip(&obs).map(|(p, l)| p * l).sum::<f64>() / weights.iter().sum::<f64>();
    let sys = LinearSystem::new(
        vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0], vec![1.0, 3.0], vec![1.0, 4.0]],
        vec![-0.1, -1.3, -1.8, -3.4, -3.9],
    )
    .unwrap();
    let fit = least_squares(&sys).unwrap();
    let orth = (0..2).map(|j| gauss_bracket(&sys.column(j), &fit.residuals).unwrap().abs()).fold(0.0, f64::max);
    let three = LinearSystem::direct_observations(&[1.0, 2.0, 4.0]).unwrap();
    let gap = (pnorm_fit(&three, 16).unwrap().estimates[0] - minimax_fit(&three).unwrap().estimates[0]).abs();
    g.check(
        "least-squares-and-pnorm",
        (ls.estimates[0] - mean).abs() < 1e-12 && (wls.estimates[0] - wmean).abs() < 1e-12 && orth < 1e-9 && gap <= 0.05,
        format!(
            "mean error {:.1e}, weighted mean error {:.1e}, orthogonality {orth:.1e}, k = 16 against minimax {gap:.4}",
            (ls.estimates[0] - mean).abs(),
            (wls.estimates[0] - wmean).abs()
        ),
    );
    g
}

fn statistical_group() -> Group {
    let mut g = Group::new("statistical", Duration::from_secs(60));
    let ctx = Ctx { lanes: parallel::default_lanes(), ..Ctx::new(SEED) };

    let buffon = parallel::run(&BuffonNeedle::new(0.25, 1.0).unwrap(), 1_000_000, &ctx.stream("buffon-needle"), ctx.lanes);
    let z = buffon.report.z_score.unwrap();
    g.check(
        "buffon-needle",
        z.abs() < 4.0 && (buffon.pi_hat - std::f64::consts::PI).abs() < 0.02,
        format!("frequency {:.6} (z {z:.3}), π̂ {:.5}", buffon.report.estimate, buffon.pi_hat),
    );

    let mut zs = vec![];
    for model in ChordModel::ALL {
        let tag = format!("bertrand-{}", model.tag().replace('_', "-"));
        let rep = parallel::run(&BertrandChord(model), 1_000_000, &ctx.stream(&tag), ctx.lanes);
        zs.push((model.tag(), rep.estimate, rep.z_score.unwrap()));
    }
    g.check(
        "bertrand-models",
        zs.iter().all(|(_, _, z)| z.abs() < 4.0),
        zs.iter().map(|(t, e, z)| format!("{t} {e:.5} (z {z:.2})")).collect::<Vec<_>>().join(", "),
    );

    let pb = petersburg_batches(2048, 1000, &ctx.stream("petersburg-batches")).unwrap();
    g.check("petersburg-median", (4.0..=8.0).contains(&pb.median), format!("median batch mean {:.4}", pb.median));

    let qx = quincunx(20, 100_000, &ctx.stream("quincunx")).unwrap();
    g.check("quincunx", qx.tv_distance < 0.02, format!("total variation {:.5}", qx.tv_distance));

    let enc = parallel::run(&Encounter::new(60.0, 20.0).unwrap(), 1_000_000, &ctx.stream("encounter-mc"), ctx.lanes);
    let ez = enc.z_score.unwrap();
    g.check("encounter", ez.abs() < 4.0, format!("frequency {:.6} against 5/9 (z {ez:.3})", enc.estimate));

    let fr = frequency_run(0.5, 100_000, &[], &ctx.stream("frequency-run")).unwrap();
    g.check("frequency-run", fr.final_gap < fr.three_sigma, format!("gap {:.5} against 3σ {:.5}", fr.final_gap, fr.three_sigma));
    g
}

fn random_subset(rng: &mut RngStream, size: usize) -> Vec<usize> {
    (0..size).filter(|_| rng.bernoulli(0.5)).collect()
}

fn random_stochastic(rng: &mut RngStream, k: usize) -> TransitionMatrix<Rational> {
    let rows = (0..k)
        .map(|_| {
            let w: Vec<i64> = (0..k).map(|_| rng.below(6) as i64).collect();
            let total: i64 = w.iter().sum::<i64>().max(1);
            let mut row: Vec<Rational> = w.iter().map(|&x| ratio(x, total)).collect();
            if w.iter().all(|&x| x == 0) {
                row[0] = int(1);
            }
            row
        })
        .collect();
    TransitionMatrix::new(rows).unwrap()
}

fn property_group() -> Group {
    let mut g = Group::new("properties", Duration::from_secs(60));
    let mut rng = RngStream::new(SEED, 4);

    let mut ie = (0, 0);
    for _ in 0..3000 {
        let size = 1 + rng.below(12) as usize;
        let events = 1 + rng.below(4) as usize;
        let mut space = FiniteEventSpace::new(size).unwrap();
        let mut covered = vec![false; size];
        let names: Vec<String> = (0..events).map(|i| format!("e{i}")).collect();
        for name in &names {
            let s = random_subset(&mut rng, size);
            for &w in &s {
                covered[w] = true;
            }
            space.add_event(name, s).unwrap();
        }
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let direct = ratio(covered.iter().filter(|c| **c).count() as i64, size as i64);
        ie.0 += 1;
        ie.1 += usize::from(union_probability(&space, &refs).unwrap() == direct);
    }
    g.check("inclusion-exclusion", ie.0 == ie.1, format!("{} of {} random spaces agree with direct counting", ie.1, ie.0));

    let mut post = (0, 0);
    for _ in 0..2000 {
        let k = 1 + rng.below(6) as usize;
        let w: Vec<i64> = (0..k).map(|_| 1 + rng.below(9) as i64).collect();
        let total: i64 = w.iter().sum();
        let priors: Vec<Rational> = w.iter().map(|&x| ratio(x, total)).collect();
        let likelihoods: Vec<Rational> = (0..k).map(|_| ratio(1 + rng.below(20) as i64, 20)).collect();
        let sys = CauseSystem::new(priors, likelihoods).unwrap();
        post.0 += 1;
        post.1 += usize::from(rational::sum(&bayes_posteriors(&sys).unwrap()) == int(1));
    }
    g.check("posterior-normalization", post.0 == post.1, format!("{} of {} posteriors sum to exactly 1", post.1, post.0));

    let mut ck = (0, 0);
    for _ in 0..300 {
        let k = 2 + rng.below(3) as usize;
        let p = random_stochastic(&mut rng, k);
        let (m, n) = (rng.below(6), rng.below(6));
        let lhs = n_step(&p, m + n);
        let rhs = mat_mul(n_step(&p, m).rows(), n_step(&p, n).rows()).unwrap();
        ck.0 += 1;
        ck.1 += usize::from(lhs.rows() == &rhs);
    }
    g.check("chapman-kolmogorov", ck.0 == ck.1, format!("{} of {} exact identities P^(m+n) = P^m P^n", ck.1, ck.0));

    let families = [
        ("normal", Distribution::normal(1.0, 2.0).unwrap()),
        ("uniform", Distribution::uniform(3.0).unwrap()),
        ("binomial", Distribution::binomial(30, ratio(1, 3)).unwrap()),
    ];
    let mut cheb = (0, 0);
    for (name, d) in &families {
        let m = d.moments();
        let sigma = m.variance.sqrt();
        for i in 1..=60 {
            let beta = 0.1 * f64::from(i) * sigma;
            let inside = if *name == "binomial" {
                (0..=30u64)
                    .filter(|&k| (k as f64 - m.mean).abs() < beta)
                    .map(|k| rational::to_f64(&d.exact_mass(k).unwrap()))
                    .sum::<f64>()
            } else {
                d.cdf(m.mean + beta) - d.cdf(m.mean - beta)
            };
            cheb.0 += 1;
            cheb.1 += usize::from(inside + 1e-12 >= chebyshev_bound(sigma, beta).unwrap());
        }
    }
    g.check("chebyshev-validity", cheb.0 == cheb.1, format!("{} of {} (family, β) pairs respect the bound", cheb.1, cheb.0));

    let mut affine = (0, 0);
    for _ in 0..500 {
        let n = 2 + rng.below(30) as usize;
        let xs: Vec<f64> = (0..n).map(|_| 20.0 * rng.next_f64() - 10.0).collect();
        let (a, b) = (10.0 * rng.next_f64() - 5.0, 100.0 * rng.next_f64() - 50.0);
        let v = Sample::new(xs.clone()).unwrap().variance().unwrap();
        let w = Sample::new(xs.iter().map(|x| a * x + b).collect()).unwrap().variance().unwrap();
        affine.0 += 1;
        affine.1 += usize::from((w - a * a * v).abs() <= 1e-9 * (1.0 + a * a * v));
    }
    g.check("affine-variance", affine.0 == affine.1, format!("{} of {} samples satisfy Var(aξ + b) = a²Var ξ", affine.1, affine.0));

    let mut corr = (0, 0);
    for _ in 0..500 {
        let n = 3 + rng.below(30) as usize;
        let pairs: Vec<(f64, f64)> = (0..n).map(|_| (rng.normal(), rng.normal() + rng.next_f64())).collect();
        if let Ok(c) = correlation(&pairs) {
            corr.0 += 1;
            corr.1 += usize::from(c.abs() <= 1.0 + 1e-12);
        }
    }
    let mut square = 0.0f64;
    for k in 1..=20 {
        let pairs: Vec<(f64, f64)> = (-k..=k).map(|i| f64::from(i) / f64::from(k)).map(|x| (x, x * x)).collect();
        square = square.max(correlation(&pairs).unwrap().abs());
    }
    g.check(
        "correlation-bounds",
        corr.0 > 0 && corr.0 == corr.1 && square < 1e-12,
        format!("{} of {} random |r| ≤ 1; largest |r(ξ, ξ²)| on symmetric grids {square:.1e}", corr.1, corr.0),
    );
    g
}

fn main() -> ExitCode {
    let mut lines = vec![];
    lines.extend(timed(exact_group));
    lines.extend(timed(numeric_group));
    lines.extend(timed(statistical_group));
    lines.extend(timed(property_group));
    let width = lines.iter().map(|(_, id, _)| id.len()).max().unwrap_or(0);
    for (pass, id, detail) in &lines {
        println!("{}  {id:<width$}  {detail}", if *pass { "PASS" } else { "FAIL" });
    }
    let failed = lines.iter().filter(|(p, _, _)| !p).count();
    println!("{} of {} criteria pass", lines.len() - failed, lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
