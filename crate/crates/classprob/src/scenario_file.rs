//! Extra scenarios read from a TOML file.
//!
//! ```toml
//! [[scenario]]
//! id = "dice-ten"
//! section = "combinatorics"
//! kind = "exact"
//! op = "dice_sum_count"
//! args = ["3", "6", "10"]
//! expected = ["27"]
//!
//! [[scenario]]
//! id = "table-196"
//! kind = "numeric"
//! op = "normal_table"
//! args = ["1.96"]
//! expected = ["0.475"]
//! tolerance = 1e-4
//!
//! [[scenario]]
//! id = "needle-eighth"
//! kind = "statistical"
//! op = "buffon"
//! args = ["0.125", "1"]
//! reps = 200000
//! ```
//!
//! Exact scenarios compare rationals for equality. Numeric scenarios take an
//! absolute `tolerance` or a `relative_tolerance`, applied to every expected
//! value. Statistical scenarios pass when `|z| < z_bound` (default 4).

use std::path::Path;

use classprob_core::distributions::{normal_cdf, normal_quantile, normal_table_value, chebyshev_bound, Distribution};
use classprob_core::estimation::bervi_coverage;
use classprob_core::exact::{
    bayes_posteriors, classical_probability, de_mere, dice_sum_count, huygens_draw, points_division, poisson_urn, ruin_chances,
    total_probability, CauseSystem,
};
use classprob_core::limit::{bayes_posterior_mass, dml_integral, dml_local, lln_gap, lln_gap_exact, nb_bound, timerding_limit_check, BetaPosterior};
use classprob_core::markov::{bernoulli_laplace_stationary, expected_white, expected_white_exact};
use classprob_core::montecarlo::{neglect_threshold, BertrandChord, BuffonNeedle, ChordModel, Encounter, SimReport};
use classprob_core::rational::{self, from_biguint, Rational};
use classprob_core::transforms::encounter_probability;
use serde::Deserialize;

use crate::parallel;
use crate::report::Kind;
use crate::scenario::{Check, Computed, Ctx, Expected, Scenario};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    #[serde(default)]
    scenario: Vec<Entry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    id: String,
    #[serde(default = "default_section")]
    section: String,
    kind: String,
    op: String,
    #[serde(default)]
    args: Vec<String>,
    #[serde(default)]
    expected: Vec<String>,
    tolerance: Option<f64>,
    relative_tolerance: Option<f64>,
    z_bound: Option<f64>,
    reps: Option<u64>,
    note: Option<String>,
}

fn default_section() -> String {
    "user".into()
}

type ExactFn = Box<dyn Fn() -> Result<Vec<Rational>, String> + Send + Sync>;
type RealFn = Box<dyn Fn() -> Result<Vec<f64>, String> + Send + Sync>;
type SimFn = Box<dyn Fn(&Ctx, u64, &str) -> SimReport + Send + Sync>;

enum Bound {
    Exact(ExactFn),
    Reals(RealFn),
    Sim(SimFn),
}

struct Args<'a> {
    op: &'a str,
    items: &'a [String],
}

impl Args<'_> {
    fn expect(&self, n: usize) -> Result<(), String> {
        if self.items.len() != n {
            return Err(format!("`{}` takes {n} argument(s), got {}", self.op, self.items.len()));
        }
        Ok(())
    }

    fn text(&self, i: usize) -> &str {
        self.items[i].trim()
    }

    fn u64(&self, i: usize) -> Result<u64, String> {
        self.text(i).parse().map_err(|_| format!("`{}`: argument {} is not a count", self.op, i + 1))
    }

    fn u32(&self, i: usize) -> Result<u32, String> {
        self.text(i).parse().map_err(|_| format!("`{}`: argument {} is not a count", self.op, i + 1))
    }

    fn f64(&self, i: usize) -> Result<f64, String> {
        self.text(i).parse().map_err(|_| format!("`{}`: argument {} is not a number", self.op, i + 1))
    }

    fn rational(&self, i: usize) -> Result<Rational, String> {
        rational::parse_rational(self.text(i)).map_err(|e| format!("`{}`: {e}", self.op))
    }

    /// A comma-separated list of rationals in one argument.
    fn rationals(&self, i: usize) -> Result<Vec<Rational>, String> {
        self.text(i).split(',').map(|t| rational::parse_rational(t).map_err(|e| format!("`{}`: {e}", self.op))).collect()
    }
}

fn err(e: classprob_core::Error) -> String {
    e.to_string()
}

fn exact_fn(f: impl Fn() -> classprob_core::Result<Vec<Rational>> + Send + Sync + 'static) -> Bound {
    Bound::Exact(Box::new(move || f().map_err(err)))
}

fn real_fn(f: impl Fn() -> classprob_core::Result<Vec<f64>> + Send + Sync + 'static) -> Bound {
    Bound::Reals(Box::new(move || f().map_err(err)))
}

fn bind(op: &str, items: &[String]) -> Result<Bound, String> {
    let a = Args { op, items };
    Ok(match op {
        "classical_probability" => {
            a.expect(2)?;
            let (m, n) = (a.u64(0)?, a.u64(1)?);
            exact_fn(move || Ok(vec![classical_probability(m, n)?]))
        }
        "dice_sum_count" => {
            a.expect(3)?;
            let (d, f, s) = (a.u32(0)?, a.u32(1)?, a.u64(2)?);
            exact_fn(move || Ok(vec![from_biguint(dice_sum_count(d, f, s)?)]))
        }
        "points_division" => {
            a.expect(3)?;
            let (na, nb, p) = (a.u32(0)?, a.u32(1)?, a.rational(2)?);
            exact_fn(move || Ok(vec![points_division(na, nb, &p)?]))
        }
        "ruin_chances" => {
            a.expect(4)?;
            let (ca, cb, pa, pb) = (a.u32(0)?, a.u32(1)?, a.rational(2)?, a.rational(3)?);
            exact_fn(move || {
                let (x, y) = ruin_chances(ca, cb, &pa, &pb)?;
                Ok(vec![x, y])
            })
        }
        "huygens_draw" => {
            a.expect(4)?;
            let (n, m, d, k) = (a.u64(0)?, a.u64(1)?, a.u64(2)?, a.u64(3)?);
            exact_fn(move || Ok(vec![huygens_draw(n, m, d, k)?]))
        }
        "poisson_urn" => {
            a.expect(1)?;
            let n = a.u64(0)?;
            exact_fn(move || Ok(vec![poisson_urn(n)?]))
        }
        "de_mere" => {
            a.expect(0)?;
            exact_fn(|| {
                let (x, y) = de_mere();
                Ok(vec![x, y])
            })
        }
        "total_probability" | "bayes_posteriors" => {
            a.expect(2)?;
            let (priors, likelihoods) = (a.rationals(0)?, a.rationals(1)?);
            let posterior = op == "bayes_posteriors";
            exact_fn(move || {
                let sys = CauseSystem::new(priors.clone(), likelihoods.clone())?;
                if posterior {
                    bayes_posteriors(&sys)
                } else {
                    Ok(vec![total_probability(&sys)])
                }
            })
        }
        "binomial_pmf" => {
            a.expect(3)?;
            let (n, p, k) = (a.u64(0)?, a.rational(1)?, a.u64(2)?);
            exact_fn(move || Ok(vec![Distribution::binomial(n, p.clone())?.exact_mass(k)?]))
        }
        "bervi_coverage" => {
            a.expect(1)?;
            let n = a.u64(0)?;
            exact_fn(move || Ok(vec![bervi_coverage(n)?]))
        }
        "encounter_probability" => {
            a.expect(2)?;
            let (t, w) = (a.rational(0)?, a.rational(1)?);
            exact_fn(move || Ok(vec![encounter_probability(&t, &w)?]))
        }
        "bayes_posterior_mass" => {
            a.expect(4)?;
            let (p, q, lo, hi) = (a.u64(0)?, a.u64(1)?, a.rational(2)?, a.rational(3)?);
            exact_fn(move || Ok(vec![bayes_posterior_mass(&BetaPosterior::new(p, q, lo.clone(), hi.clone())?)]))
        }
        "lln_gap_exact" => {
            a.expect(3)?;
            let (p, n, eps) = (a.rational(0)?, a.u64(1)?, a.rational(2)?);
            exact_fn(move || Ok(vec![lln_gap_exact(&p, n, &eps)?]))
        }
        "expected_white_exact" => {
            a.expect(2)?;
            let (n, r) = (a.u64(0)?, a.u64(1)?);
            exact_fn(move || Ok(vec![expected_white_exact(n, r)?]))
        }
        "urn_stationary" => {
            a.expect(1)?;
            let n = a.u64(0)?;
            if n == 0 {
                return Err("`urn_stationary` needs at least one ball per urn".into());
            }
            exact_fn(move || Ok(bernoulli_laplace_stationary(n)))
        }
        "normal_table" | "normal_cdf" | "normal_quantile" | "nb_bound" | "neglect_threshold" => {
            a.expect(1)?;
            let x = a.f64(0)?;
            match op {
                "normal_table" => real_fn(move || Ok(vec![normal_table_value(x)])),
                "normal_cdf" => real_fn(move || Ok(vec![normal_cdf(x)])),
                "normal_quantile" => real_fn(move || Ok(vec![normal_quantile(x)])),
                "nb_bound" => real_fn(move || Ok(vec![nb_bound(x)?])),
                _ => real_fn(move || Ok(vec![neglect_threshold(x)?])),
            }
        }
        "chebyshev_bound" => {
            a.expect(2)?;
            let (s, b) = (a.f64(0)?, a.f64(1)?);
            real_fn(move || Ok(vec![chebyshev_bound(s, b)?]))
        }
        "dml_local" => {
            a.expect(3)?;
            let (n, p, mu) = (a.u64(0)?, a.rational(1)?, a.u64(2)?);
            real_fn(move || {
                let r = dml_local(n, &p, mu)?;
                Ok(vec![r.approx, r.exact, r.abs_err])
            })
        }
        "dml_integral" => {
            a.expect(4)?;
            let (n, p, lo, hi) = (a.u64(0)?, a.rational(1)?, a.f64(2)?, a.f64(3)?);
            real_fn(move || {
                let r = dml_integral(n, &p, lo, hi)?;
                Ok(vec![r.approx, r.exact, r.abs_err])
            })
        }
        "timerding_limit_check" => {
            a.expect(4)?;
            let (p, q, lo, hi) = (a.u64(0)?, a.u64(1)?, a.f64(2)?, a.f64(3)?);
            real_fn(move || {
                let r = timerding_limit_check(p, q, lo, hi)?;
                Ok(vec![r.posterior_prob, r.normal_prob, r.abs_err])
            })
        }
        "lln_gap" => {
            a.expect(3)?;
            let (p, n, eps) = (a.rational(0)?, a.u64(1)?, a.rational(2)?);
            real_fn(move || Ok(vec![lln_gap(&p, n, &eps)?]))
        }
        "expected_white" => {
            a.expect(2)?;
            let (n, r) = (a.u64(0)?, a.u64(1)?);
            real_fn(move || Ok(vec![expected_white(n, r)?]))
        }
        "buffon" => {
            a.expect(2)?;
            let needle = BuffonNeedle::new(a.f64(0)?, a.f64(1)?).map_err(err)?;
            Bound::Sim(Box::new(move |ctx, n, tag| parallel::run(&needle, n, &ctx.stream(tag), ctx.lanes).report))
        }
        "bertrand" => {
            a.expect(1)?;
            let model: ChordModel = a.text(0).parse().map_err(err)?;
            Bound::Sim(Box::new(move |ctx, n, tag| parallel::run(&BertrandChord(model), n, &ctx.stream(tag), ctx.lanes)))
        }
        "encounter" => {
            a.expect(2)?;
            let e = Encounter::new(a.f64(0)?, a.f64(1)?).map_err(err)?;
            Bound::Sim(Box::new(move |ctx, n, tag| parallel::run(&e, n, &ctx.stream(tag), ctx.lanes)))
        }
        other => return Err(format!("unknown operation `{other}`")),
    })
}

fn build(entry: Entry) -> Result<Scenario, String> {
    let kind: Kind = entry.kind.parse()?;
    let bound = bind(&entry.op, &entry.args).map_err(|e| format!("scenario `{}`: {e}", entry.id))?;
    let id = entry.id.clone();
    let wrong = |want: &str| format!("scenario `{id}`: operation `{}` needs kind {want}", entry.op);
    let scenario = match (kind, bound) {
        (Kind::Exact, Bound::Exact(f)) => {
            let expected = entry
                .expected
                .iter()
                .map(|t| rational::parse_rational(t).map_err(|e| format!("scenario `{id}`: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            Scenario::new(&entry.id, &entry.section, kind, Expected::Exact(expected), move |_| f().map(Computed::Exact))
        }
        (Kind::Numeric, Bound::Reals(f)) => {
            let values = entry
                .expected
                .iter()
                .map(|t| t.trim().parse::<f64>().map_err(|_| format!("scenario `{id}`: `{t}` is not a number")))
                .collect::<Result<Vec<_>, _>>()?;
            let checks = match (entry.tolerance, entry.relative_tolerance) {
                (Some(tol), None) if tol >= 0.0 => values.iter().map(|&value| Check::Near { value, tol }).collect(),
                (None, Some(tol)) if tol >= 0.0 => values.iter().map(|&value| Check::Relative { value, tol }).collect(),
                _ => return Err(format!("scenario `{id}`: give exactly one non-negative tolerance or relative_tolerance")),
            };
            Scenario::new(&entry.id, &entry.section, kind, Expected::Checks(checks), move |_| f().map(Computed::Reals))
        }
        (Kind::Statistical, Bound::Sim(f)) => {
            let bound = entry.z_bound.unwrap_or(4.0);
            if !(bound > 0.0) {
                return Err(format!("scenario `{id}`: z_bound must be positive"));
            }
            let reps = entry.reps.unwrap_or(100_000);
            let tag = entry.id.clone();
            Scenario::new(&entry.id, &entry.section, kind, Expected::Z { bound, extras: vec![] }, move |ctx| {
                Ok(Computed::Sim(f(ctx, ctx.reps_or(reps).max(1), &tag), vec![]))
            })
        }
        (_, Bound::Exact(_)) => return Err(wrong("exact")),
        (_, Bound::Reals(_)) => return Err(wrong("numeric")),
        (_, Bound::Sim(_)) => return Err(wrong("statistical")),
    };
    Ok(match entry.note {
        Some(note) => scenario.with_note(&note),
        None => scenario,
    })
}

pub fn parse(text: &str) -> Result<Vec<Scenario>, String> {
    let file: File = toml::from_str(text).map_err(|e| e.to_string())?;
    file.scenario.into_iter().map(build).collect()
}

pub fn load(path: &Path) -> Result<Vec<Scenario>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}
