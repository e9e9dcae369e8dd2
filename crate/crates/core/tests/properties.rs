use classprob_core::distributions::{chebyshev_bound, sample_stats, Distribution, Sample};
use classprob_core::estimation::{least_squares, minimax_fit, pnorm_fit, LinearSystem};
use classprob_core::exact::{
    bayes_posteriors, dice_sum_count, points_division, ruin_chances, union_probability, CauseSystem, FiniteEventSpace,
};
use classprob_core::limit::{bayes_posterior_mass, BetaPosterior};
use classprob_core::linalg;
use classprob_core::markov::{n_step, stationary, step, TransitionMatrix};
use classprob_core::rational::{self, int, ratio};
use classprob_core::transforms::{convolve, correlation, GridDensity};
use classprob_core::Rational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn positive_ratio() -> impl Strategy<Value = Rational> {
    (1i64..20, 1i64..20).prop_map(|(a, b)| ratio(a.min(b), a.max(b) + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn inclusion_exclusion_matches_direct_counting(
        size in 1usize..=12,
        masks in prop::collection::vec(any::<u16>(), 1..=4),
    ) {
        let mut space = FiniteEventSpace::new(size).unwrap();
        let names: Vec<String> = (0..masks.len()).map(|i| format!("e{i}")).collect();
        for (name, mask) in names.iter().zip(&masks) {
            space.add_event_where(name, |w| mask >> w & 1 == 1).unwrap();
        }
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let direct = (0..size).filter(|&w| masks.iter().any(|m| m >> w & 1 == 1)).count();
        prop_assert_eq!(union_probability(&space, &refs).unwrap(), ratio(direct as i64, size as i64));
    }

    #[test]
    fn posteriors_sum_to_exactly_one(
        raw in prop::collection::vec((1i64..50, 0i64..50), 1..6),
    ) {
        let total: i64 = raw.iter().map(|(w, _)| w).sum();
        let priors: Vec<Rational> = raw.iter().map(|(w, _)| ratio(*w, total)).collect();
        let likelihoods: Vec<Rational> = raw.iter().map(|(_, l)| ratio(*l, 50)).collect();
        prop_assume!(likelihoods.iter().any(|l| !l.is_zero()));
        let system = CauseSystem::new(priors, likelihoods).unwrap();
        let post = bayes_posteriors(&system).unwrap();
        prop_assert_eq!(rational::sum(&post), int(1));
    }

    #[test]
    fn points_division_complements(a in 1u32..8, b in 1u32..8, p in positive_ratio()) {
        let q = Rational::one() - &p;
        prop_assert_eq!(points_division(a, b, &p).unwrap() + points_division(b, a, &q).unwrap(), int(1));
    }

    #[test]
    fn ruin_matches_the_absorbing_chain(ca in 1u32..=5, cb in 1u32..=5, p in positive_ratio()) {
        let q = Rational::one() - &p;
        let total = (ca + cb) as usize;
        // states 0..=total counters held by A; 0 and total absorb
        let rows: Vec<Vec<Rational>> = (0..=total)
            .map(|s| {
                let mut row = vec![Rational::zero(); total + 1];
                if s == 0 || s == total {
                    row[s] = int(1);
                } else {
                    row[s + 1] = p.clone();
                    row[s - 1] = q.clone();
                }
                row
            })
            .collect();
        // absorption probabilities h(s) = P(reach total | s): h(0)=0, h(total)=1, h(s) = p h(s+1) + q h(s−1)
        let inner = total - 1;
        let mut a = vec![vec![Rational::zero(); inner]; inner];
        let mut rhs = vec![Rational::zero(); inner];
        for s in 1..total {
            let i = s - 1;
            a[i][i] = int(1);
            if s + 1 < total { a[i][i + 1] = -rows[s][s + 1].clone(); } else { rhs[i] = rows[s][s + 1].clone(); }
            if s > 1 { a[i][i - 1] = -rows[s][s - 1].clone(); }
        }
        let h = linalg::solve(&a, &rhs).unwrap();
        let (win_a, win_b) = ruin_chances(ca, cb, &p, &q).unwrap();
        prop_assert_eq!(&win_a, &h[ca as usize - 1]);
        prop_assert_eq!(win_a + win_b, int(1));
    }

    #[test]
    fn dice_counts_are_symmetric(dice in 1u32..6, faces in 2u32..8, offset in 0u64..40) {
        let lo = dice as u64;
        let hi = dice as u64 * faces as u64;
        let s = lo + offset % (hi - lo + 1);
        prop_assert_eq!(dice_sum_count(dice, faces, s).unwrap(), dice_sum_count(dice, faces, lo + hi - s).unwrap());
    }

    #[test]
    fn affine_variance_laws(
        xs in prop::collection::vec(-100.0f64..100.0, 3..40),
        a in -10.0f64..10.0,
        b in 0.1f64..5.0,
    ) {
        let s = Sample::new(xs.clone()).unwrap();
        prop_assume!(s.variance().unwrap() > 1e-6);
        let t = Sample::new(xs.iter().map(|x| a + b * x).collect()).unwrap();
        let (ss, st) = (sample_stats(&s).unwrap(), sample_stats(&t).unwrap());
        prop_assert!((st.mean - (a + b * ss.mean)).abs() < 1e-9 * (1.0 + st.mean.abs()));
        prop_assert!((st.variance - b * b * ss.variance).abs() < 1e-9 * st.variance);
        prop_assert!((st.skewness.unwrap() - ss.skewness.unwrap()).abs() < 1e-8);
        prop_assert!((st.excess.unwrap() - ss.excess.unwrap()).abs() < 1e-8);
    }

    #[test]
    fn chapman_kolmogorov(raw in prop::collection::vec(prop::collection::vec(0.01f64..1.0, 4), 4), a in 0u64..12, b in 0u64..12) {
        let rows: Vec<Vec<f64>> = raw.iter().map(|r| { let s: f64 = r.iter().sum(); r.iter().map(|x| x / s).collect() }).collect();
        let p = TransitionMatrix::new(rows).unwrap();
        let lhs = n_step(&p, a + b);
        let rhs = linalg::mat_mul(n_step(&p, a).rows(), n_step(&p, b).rows()).unwrap();
        for (r1, r2) in lhs.rows().iter().zip(&rhs) {
            for (x, y) in r1.iter().zip(r2) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
        let pi = stationary(&p).unwrap();
        let moved = step(&pi, &p).unwrap();
        for (x, y) in pi.probabilities().iter().zip(moved.probabilities()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn rational_chains_keep_exact_rows(raw in prop::collection::vec(prop::collection::vec(1i64..9, 3), 3), n in 0u64..6) {
        let rows: Vec<Vec<Rational>> = raw.iter().map(|r| { let s: i64 = r.iter().sum(); r.iter().map(|x| ratio(*x, s)).collect() }).collect();
        let p = TransitionMatrix::new(rows).unwrap();
        for row in n_step(&p, n).rows() {
            prop_assert_eq!(rational::sum(row), int(1));
        }
        let pi = stationary(&p).unwrap();
        prop_assert_eq!(step(&pi, &p).unwrap(), pi);
    }

    #[test]
    fn correlation_bounds_and_affine_invariance(
        pairs in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 2..60),
        a in -5.0f64..5.0,
        b in 0.1f64..4.0,
    ) {
        let r = match correlation(&pairs) { Ok(r) => r, Err(_) => return Ok(()) };
        prop_assert!((-1.0..=1.0).contains(&r));
        let shifted: Vec<_> = pairs.iter().map(|(x, y)| (a + b * x, *y)).collect();
        prop_assert!((correlation(&shifted).unwrap() - r).abs() < 1e-9);
        let flipped: Vec<_> = pairs.iter().map(|(x, y)| (*x, a - b * y)).collect();
        prop_assert!((correlation(&flipped).unwrap() + r).abs() < 1e-9);
    }

    #[test]
    fn convolution_commutes_and_adds_means(m1 in -2.0f64..2.0, s1 in 0.3f64..1.5, half in 50usize..200) {
        let h = 0.01;
        let normal = Distribution::normal(m1, s1).unwrap();
        let reach = (8.0 * s1 / h).round() as i64;
        let xs: Vec<f64> = (-reach..=reach).map(|i| m1 + i as f64 * h).collect();
        let ys = xs.iter().map(|&x| normal.mass_or_density(x).unwrap()).collect();
        let normal = GridDensity::new(xs, ys).unwrap();
        let w = half as f64 * h;
        let us: Vec<f64> = (-(half as i64)..=half as i64).map(|i| i as f64 * h).collect();
        let uniform = GridDensity::new(us.clone(), vec![0.5 / w; us.len()]).unwrap();
        let fg = convolve(&normal, &uniform).unwrap();
        let gf = convolve(&uniform, &normal).unwrap();
        for (x, y) in fg.ordinates().iter().zip(gf.ordinates()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        prop_assert!((fg.mean() - (normal.mean() + uniform.mean())).abs() < 1e-6);
    }

    #[test]
    fn posterior_partition_masses_sum_to_one(p in 0u64..15, q in 0u64..15, cuts in prop::collection::btree_set(1i64..100, 0..6)) {
        let mut edges = vec![int(0)];
        edges.extend(cuts.iter().map(|c| ratio(*c, 100)));
        edges.push(int(1));
        let total: Rational = edges
            .windows(2)
            .map(|w| bayes_posterior_mass(&BetaPosterior::new(p, q, w[0].clone(), w[1].clone()).unwrap()))
            .fold(Rational::zero(), |a, b| a + b);
        prop_assert_eq!(total, int(1));
    }

    #[test]
    fn least_squares_orthogonality(
        rows in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0, -20.0f64..20.0), 4..15),
    ) {
        let sys = match LinearSystem::new(rows.iter().map(|(a, b, _)| vec![1.0, *a, *b]).collect(), rows.iter().map(|r| r.2).collect()) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        let fit = least_squares(&sys).unwrap();
        for j in 0..sys.unknowns() {
            let col = sys.column(j);
            let scale: f64 = col.iter().zip(&fit.residuals).map(|(a, v)| (a * v).abs()).sum::<f64>().max(1.0);
            prop_assert!(classprob_core::estimation::gauss_bracket(&col, &fit.residuals).unwrap().abs() < 1e-9 * scale);
        }
        let mm = minimax_fit(&sys).unwrap();
        prop_assert!(mm.objective <= fit.max_abs_residual() + 1e-9);
    }

    #[test]
    fn single_unknown_least_squares_is_the_weighted_mean(
        obs in prop::collection::vec((-30.0f64..30.0, 0.1f64..10.0), 2..20),
    ) {
        // a_i = √p_i, w_i = −√p_i l_i
        let sys = LinearSystem::new(
            obs.iter().map(|(_, p)| vec![p.sqrt()]).collect(),
            obs.iter().map(|(l, p)| -p.sqrt() * l).collect(),
        ).unwrap();
        let fit = least_squares(&sys).unwrap();
        let s = Sample::weighted(obs.iter().map(|o| o.0).collect(), obs.iter().map(|o| o.1).collect()).unwrap();
        prop_assert!((fit.estimates[0] - s.weighted_mean()).abs() < 1e-12 * (1.0 + s.weighted_mean().abs()) * 10.0);
    }

    #[test]
    fn unit_weight_variance_ignores_row_order_and_scales_quadratically(
        obs in prop::collection::vec((-5.0f64..5.0, -10.0f64..10.0), 4..12),
        c in 0.2f64..5.0,
        rot in 0usize..12,
    ) {
        let build = |o: &[(f64, f64)], c: f64| LinearSystem::new(o.iter().map(|(a, _)| vec![c, c * a]).collect(), o.iter().map(|(_, w)| c * w).collect());
        let Ok(base) = build(&obs, 1.0) else { return Ok(()) };
        let mut rotated = obs.clone();
        rotated.rotate_left(rot % obs.len());
        let m2 = least_squares(&base).unwrap().m2;
        let m2_rot = least_squares(&build(&rotated, 1.0).unwrap()).unwrap().m2;
        let m2_scaled = least_squares(&build(&obs, c).unwrap()).unwrap().m2;
        prop_assert!((m2 - m2_rot).abs() <= 1e-9 * (1.0 + m2));
        prop_assert!((m2_scaled - c * c * m2).abs() <= 1e-9 * (1.0 + c * c * m2));
    }
}

#[test]
fn chebyshev_bound_holds_for_three_families() {
    let laws = [
        Distribution::uniform(2.0).unwrap(),
        Distribution::normal(1.0, 0.5).unwrap(),
        Distribution::binomial(30, ratio(1, 3)).unwrap(),
    ];
    for d in &laws {
        let m = d.moments();
        let sigma = m.std_dev();
        for beta in [0.5, 1.0, 1.5, 2.0, 3.0] {
            let beta = beta * sigma;
            let outside = if d.is_discrete() {
                // P(|ξ − Eξ| ≥ β) by summing the masses outside the open band
                (0..=30u64)
                    .filter(|&k| (k as f64 - m.mean).abs() >= beta)
                    .map(|k| d.mass_or_density(k as f64).unwrap())
                    .sum::<f64>()
            } else {
                d.cdf(m.mean - beta) + (1.0 - d.cdf(m.mean + beta))
            };
            let bound = chebyshev_bound(sigma, beta).unwrap();
            assert!(1.0 - outside >= bound - 1e-12, "{:?} beta={beta}: {} < {bound}", d.family(), 1.0 - outside);
        }
    }
}

#[test]
fn pnorm_max_residual_shrinks_toward_minimax() {
    let systems = [
        LinearSystem::direct_observations(&[1.0, 2.0, 4.0]).unwrap(),
        LinearSystem::new(
            vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0], vec![1.0, 3.0], vec![1.0, 4.0]],
            vec![-0.1, -1.3, -1.8, -3.4, -3.9],
        )
        .unwrap(),
    ];
    for sys in &systems {
        let target = minimax_fit(sys).unwrap();
        let mut last = f64::INFINITY;
        for k in [1, 2, 4, 8, 16] {
            let fit = pnorm_fit(sys, k).unwrap();
            let worst = fit.max_abs_residual();
            assert!(worst <= last + 1e-12, "k={k}: {worst} > {last}");
            assert!(worst >= target.objective - 1e-12);
            last = worst;
        }
        assert!(last - target.objective < 0.05);
    }
}

#[test]
fn urn_chain_rows_are_exact() {
    for n in 1..=20u64 {
        let p = classprob_core::markov::bernoulli_laplace_chain(n).unwrap();
        for row in p.rows() {
            assert_eq!(rational::sum(row), Rational::one());
        }
    }
}
