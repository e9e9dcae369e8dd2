//! Argument parsing and dispatch for the `classprob` binary.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use classprob_core::distributions::{chebyshev_bound, normal_table_value, probable_error, Distribution, Family, Sample};
use classprob_core::estimation::{confidence_interval, least_squares, mean_with_error, minimax_fit, pnorm_fit, FitResult};
use classprob_core::exact::{
    bayes_posteriors, classical_probability, de_mere, dice_sum_count, huygens_draw, points_division, poisson_urn, ruin_chances,
    total_probability, CauseSystem,
};
use classprob_core::limit::{
    bayes_posterior_mass, bernoulli_sample_size, dml_integral, dml_local, lln_gap, lln_gap_exact, nb_bound, timerding_limit_check,
    Approximation, BetaPosterior,
};
use classprob_core::markov::{
    bernoulli_laplace_chain, bernoulli_laplace_stationary, evolve, expected_white, expected_white_exact, n_step, stationary,
    three_urn_expected, StateDistribution,
};
use classprob_core::montecarlo::{frequency_run, petersburg_batches, quincunx, BertrandChord, BuffonNeedle, ChordModel, Encounter};
use classprob_core::rational::{self, from_biguint, Rational};
use classprob_core::transforms::GridDensity;
use serde::Serialize;

use crate::parallel;
use crate::registry;
use crate::render;
use crate::report::{Kind, SimJson, Suite};
use crate::scenario::{run_all, Ctx, Scenario};
use crate::scenario_file;
use crate::tables;

pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Parser)]
#[command(name = "classprob", version, about = "Classical probability, computed and checked")]
pub struct Cli {
    /// Master seed; decimal or 0x-prefixed hex.
    #[arg(long, global = true, default_value = "0x5EED", value_parser = parse_seed)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Replications for Monte Carlo runs, overriding each run's default.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..1024))]
    pub threads: Option<u64>,
    /// Record wall time in reports (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Extra scenarios in TOML, added to the compiled-in suite.
    #[arg(long, global = true, value_name = "FILE")]
    pub scenarios: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact combinatorial problems.
    Classic {
        #[command(subcommand)]
        op: ClassicOp,
    },
    /// Distribution families, moments and the normal table.
    Dist {
        #[command(subcommand)]
        op: DistOp,
    },
    /// Bernoulli, De Moivre-Laplace and Bayes limit theorems.
    Limit {
        #[command(subcommand)]
        op: LimitOp,
    },
    /// Seeded Monte Carlo experiments.
    Mc {
        #[command(subcommand)]
        op: McOp,
    },
    /// Urn chains and user-supplied transition matrices.
    Markov {
        #[command(subcommand)]
        op: MarkovOp,
    },
    /// Fitting of observation equations.
    Fit {
        #[command(subcommand)]
        op: FitOp,
    },
    /// Runs every registered scenario.
    ReproduceAll {
        /// Run only these scenario ids.
        #[arg(long = "id", value_name = "ID")]
        ids: Vec<String>,
        /// Run only scenarios of this kind.
        #[arg(long, value_parser = parse_kind)]
        kind: Option<Kind>,
    },
    /// Writes CSV.
    Table {
        #[command(subcommand)]
        what: TableOp,
        /// Write to this file instead of standard output.
        #[arg(long, short, global = true, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ClassicOp {
    /// Scenarios of this topic.
    Suite,
    /// `m/n`.
    Classical { favourable: u64, total: u64 },
    /// Ways and chance for `dice` dice with `faces` faces to total `sum`.
    Dice {
        #[arg(long, default_value_t = 3)]
        dice: u32,
        #[arg(long, default_value_t = 6)]
        faces: u32,
        sum: u64,
    },
    /// Fair share of the stake for player A.
    Points {
        needed_a: u32,
        needed_b: u32,
        #[arg(long, default_value = "1/2", value_parser = parse_rat)]
        p: Rational,
    },
    /// Chances that A and B ruin the other.
    Ruin {
        counters_a: u32,
        counters_b: u32,
        #[arg(value_parser = parse_rat)]
        p_a: Rational,
        #[arg(value_parser = parse_rat)]
        p_b: Rational,
    },
    /// Exactly `drawn` marked among `draws` taken from `population`.
    Huygens { population: u64, marked: u64, draws: u64, drawn: u64 },
    /// One six in 4 rolls against a double six in 24.
    DeMere,
    /// Poisson's two-urn problem with `n` balls.
    PoissonUrn { n: u64 },
    /// Total probability and posteriors of the causes.
    Bayes {
        /// Comma-separated priors; uniform when absent.
        #[arg(long, value_parser = parse_rats)]
        priors: Option<RatList>,
        #[arg(value_parser = parse_rats)]
        likelihoods: RatList,
    },
}

#[derive(Debug, Subcommand)]
pub enum DistOp {
    /// Scenarios of this topic and of transforms.
    Suite,
    /// Mean, variance, skewness and excess of a law.
    Moments { law: Law },
    /// `P(ξ ≤ x)`.
    Cdf {
        law: Law,
        #[arg(allow_hyphen_values = true)]
        x: f64,
    },
    Quantile { law: Law, p: f64 },
    /// Probability of a value (exact for binomial and hypergeometric laws) or density.
    Mass {
        law: Law,
        #[arg(allow_hyphen_values = true)]
        x: f64,
    },
    /// Half-width of the central 50% band.
    ProbableError { law: Law },
    /// `Φ(z) − 1/2`.
    NormalTable {
        #[arg(allow_hyphen_values = true)]
        z: f64,
    },
    /// Lower bound `1 − σ²/β²` on `P(|ξ − Eξ| < β)`.
    Chebyshev { sigma: f64, beta: f64 },
}

#[derive(Debug, Subcommand)]
pub enum LimitOp {
    Suite,
    /// Trials needed for `P(|μ/n − p| > ε) ≤ δ`.
    SampleSize {
        #[arg(value_parser = parse_rat)]
        p: Rational,
        #[arg(value_parser = parse_rat)]
        eps: Rational,
        #[arg(value_parser = parse_rat)]
        delta: Rational,
    },
    /// `P(|μ/n − p| < ε)`.
    LlnGap {
        #[arg(value_parser = parse_rat)]
        p: Rational,
        n: u64,
        #[arg(value_parser = parse_rat)]
        eps: Rational,
    },
    /// Local normal approximation to `P(μ = mu)`.
    DmlLocal {
        n: u64,
        #[arg(value_parser = parse_rat)]
        p: Rational,
        mu: u64,
    },
    /// Integral approximation to `P(a ≤ (μ − np)/√npq < b)`.
    DmlIntegral {
        n: u64,
        #[arg(value_parser = parse_rat)]
        p: Rational,
        #[arg(allow_hyphen_values = true)]
        a: f64,
        #[arg(allow_hyphen_values = true)]
        b: f64,
    },
    /// Nikolaus Bernoulli's bound for `s`.
    NbBound { s: f64 },
    /// Posterior mass of `[lo, hi]` after `successes` and `misses` under a uniform prior.
    Posterior {
        successes: u64,
        misses: u64,
        #[arg(value_parser = parse_rat)]
        lo: Rational,
        #[arg(value_parser = parse_rat)]
        hi: Rational,
    },
    /// Normal limit of the standardized posterior.
    Timerding {
        successes: u64,
        misses: u64,
        #[arg(allow_hyphen_values = true)]
        a: f64,
        #[arg(allow_hyphen_values = true)]
        b: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum McOp {
    Suite,
    /// Needle of half-length `r` on lines `a` apart.
    Buffon {
        #[arg(default_value_t = 0.25)]
        half_length: f64,
        #[arg(default_value_t = 1.0)]
        spacing: f64,
    },
    /// Chance that a random chord is shorter than the inscribed triangle's side.
    Bertrand {
        #[arg(value_parser = parse_chord)]
        model: ChordModel,
    },
    /// Two arrivals uniform over `window`; one waits `wait`.
    Encounter {
        #[arg(default_value_t = 60.0)]
        window: f64,
        #[arg(default_value_t = 20.0)]
        wait: f64,
    },
    /// Median of batch mean gains.
    Petersburg {
        #[arg(long, default_value_t = 2048)]
        games: u64,
        #[arg(long, default_value_t = 1000)]
        batches: u64,
    },
    /// Galton board against the binomial law.
    Quincunx {
        #[arg(default_value_t = 20)]
        rows: u32,
    },
    /// Running frequency of a `p`-coin.
    Frequency {
        #[arg(default_value_t = 0.5)]
        p: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum MarkovOp {
    Suite,
    /// Transition matrix of the two-urn interchange with `n` balls per urn.
    Urn { n: u64 },
    /// Law of the white count in urn one after `r` interchanges.
    Evolve {
        n: u64,
        r: u64,
        /// White balls in urn one at the start; defaults to `n`.
        #[arg(long)]
        start: Option<u64>,
    },
    /// Limiting law of the two-urn chain.
    Stationary { n: u64 },
    /// Expected white balls in urn one after `r` interchanges, starting all white.
    ExpectedWhite { n: u64, r: u64 },
    /// Expected composition of three urns after `r` cyclic interchanges.
    ThreeUrn { n: u64, r: u64 },
    /// `r`-step matrix and limiting law of a chain read from CSV.
    Chain {
        csv: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum FitOp {
    Suite,
    /// Least squares on a CSV of coefficient columns then `w`.
    Ls { csv: PathBuf },
    /// Smallest maximal residual.
    Minimax { csv: PathBuf },
    /// Minimizes `Σ|v|^k`.
    Pnorm {
        csv: PathBuf,
        #[arg(long, default_value_t = 4)]
        k: u32,
    },
    /// Mean of direct observations with its error and a normal interval.
    Mean {
        #[arg(value_delimiter = ',', allow_hyphen_values = true, required = true)]
        values: Vec<f64>,
        #[arg(long, default_value_t = 0.95)]
        coverage: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum TableOp {
    /// `Φ(z) − 1/2` on a grid.
    NormalTable(RangeArgs),
    /// A continuous law tabulated on `2m + 1` points.
    GridDensity {
        law: Law,
        #[arg(long, default_value_t = 200)]
        half_points: usize,
    },
    /// Transition matrix of the two-urn chain with `n` balls per urn.
    Matrix { n: u64 },
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
}

#[derive(Debug, Clone)]
pub struct RatList(pub Vec<Rational>);

/// A law written `family:params`, e.g. `normal:0,1`, `binomial:10,1/6`,
/// `uniform:1`, `triangular:2`, `poisson:3`, `hypergeometric:12,4,7`,
/// `half-cauchy`.
#[derive(Debug, Clone)]
pub struct Law(pub Distribution);

impl std::str::FromStr for Law {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let params: Vec<&str> = if params.is_empty() { vec![] } else { params.split(',').map(str::trim).collect() };
        let want = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(format!("`{name}` takes {n} parameter(s)"))
            }
        };
        let f = |i: usize| params[i].parse::<f64>().map_err(|_| format!("`{}` is not a number", params[i]));
        let u = |i: usize| params[i].parse::<u64>().map_err(|_| format!("`{}` is not a count", params[i]));
        let d = match name {
            "normal" => {
                want(2)?;
                Distribution::normal(f(0)?, f(1)?)
            }
            "uniform" => {
                want(1)?;
                Distribution::uniform(f(0)?)
            }
            "triangular" => {
                want(1)?;
                Distribution::triangular(f(0)?)
            }
            "poisson" => {
                want(1)?;
                Distribution::poisson(f(0)?)
            }
            "binomial" => {
                want(2)?;
                Distribution::binomial(u(0)?, parse_rat(params[1])?)
            }
            "hypergeometric" => {
                want(3)?;
                Distribution::hypergeometric(u(0)?, u(1)?, u(2)?)
            }
            "half-cauchy" => {
                want(0)?;
                Ok(Distribution::half_cauchy())
            }
            other => return Err(format!("unknown law `{other}`")),
        };
        d.map(Law).map_err(|e| e.to_string())
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| format!("`{s}` is not a 64-bit seed"))
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse()
}

fn parse_rat(s: &str) -> Result<Rational, String> {
    rational::parse_rational(s).map_err(|e| e.to_string())
}

fn parse_rats(s: &str) -> Result<RatList, String> {
    s.split(',').map(parse_rat).collect::<Result<_, _>>().map(RatList)
}

fn parse_chord(s: &str) -> Result<ChordModel, String> {
    s.parse().map_err(|e: classprob_core::Error| e.to_string())
}

/// What a command produced.
#[derive(Debug)]
pub enum Output {
    /// Named values from a direct computation.
    Values { op: String, rows: Vec<(String, String)> },
    /// One simulation and derived values.
    Sim { sim: SimJson, rows: Vec<(String, String)> },
    Suite(Suite),
    Csv(String),
}

#[derive(Serialize)]
struct NamedValue<'a> {
    name: &'a str,
    value: &'a str,
}

#[derive(Serialize)]
struct ValuesJson<'a> {
    op: &'a str,
    seed: u64,
    values: Vec<NamedValue<'a>>,
}

#[derive(Serialize)]
struct SimOutJson<'a> {
    simulation: &'a SimJson,
    values: Vec<NamedValue<'a>>,
}

fn named(rows: &[(String, String)]) -> Vec<NamedValue<'_>> {
    rows.iter().map(|(name, value)| NamedValue { name, value }).collect()
}

fn table_rows(rows: &[(String, String)]) -> String {
    let w = rows.iter().map(|(n, _)| n.chars().count()).max().unwrap_or(0);
    rows.iter().map(|(n, v)| format!("{n:<w$}  {v}\n")).collect()
}

impl Output {
    pub fn render(&self, format: Format, seed: u64) -> String {
        match (self, format) {
            (Output::Csv(text), _) => text.clone(),
            (Output::Suite(s), Format::Json) => json(s),
            (Output::Suite(s), Format::Table) => s.to_table(),
            (Output::Values { op, rows }, Format::Json) => json(&ValuesJson { op, seed, values: named(rows) }),
            (Output::Values { op, rows }, Format::Table) => format!("{op}\n{}", table_rows(rows)),
            (Output::Sim { sim, rows }, Format::Json) => json(&SimOutJson { simulation: sim, values: named(rows) }),
            (Output::Sim { sim, rows }, Format::Table) => {
                let mut all = vec![
                    ("seed".to_string(), format!("{:#x}", sim.seed)),
                    ("n".to_string(), sim.n.to_string()),
                    ("estimate".to_string(), render::sig6(sim.estimate)),
                    ("se".to_string(), render::sig6(sim.se)),
                ];
                if let Some(t) = sim.target {
                    all.push(("target".into(), render::sig6(t)));
                }
                if let Some(z) = sim.z {
                    all.push(("z".into(), format!("{z:.3}")));
                }
                all.extend(rows.iter().cloned());
                format!("{}\n{}", sim.name, table_rows(&all))
            }
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Output::Suite(s) if !s.all_pass() => 1,
            _ => 0,
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// A failure that maps to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<String> for UsageError {
    fn from(s: String) -> Self {
        UsageError(s)
    }
}

impl From<classprob_core::Error> for UsageError {
    fn from(e: classprob_core::Error) -> Self {
        UsageError(e.to_string())
    }
}

type Res<T> = Result<T, UsageError>;

fn rat_row(name: &str, r: &Rational) -> (String, String) {
    (name.into(), render::rational(r))
}

fn real_row(name: &str, x: f64) -> (String, String) {
    (name.into(), render::sig6(x))
}

fn values(op: &str, rows: Vec<(String, String)>) -> Output {
    Output::Values { op: op.into(), rows }
}

fn approx_rows(a: &Approximation) -> Vec<(String, String)> {
    vec![real_row("approx", a.approx), real_row("exact", a.exact), real_row("abs_err", a.abs_err), real_row("rel_err", a.rel_err())]
}

fn fit_rows(fit: &FitResult) -> Vec<(String, String)> {
    let mut rows: Vec<(String, String)> =
        fit.estimates.iter().enumerate().map(|(i, x)| real_row(&format!("x{}", i + 1), *x)).collect();
    rows.push(real_row("max_residual", fit.max_abs_residual()));
    rows.push(real_row("m2", fit.m2));
    rows.push(real_row("objective", fit.objective));
    rows.push(("iterations".into(), fit.iterations.to_string()));
    if !fit.condition.is_nan() {
        rows.push(real_row("condition", fit.condition));
    }
    rows.push(("residuals".into(), render::reals(&fit.residuals)));
    rows
}

fn law_rows(d: &Distribution) -> Vec<(String, String)> {
    let m = d.moments();
    vec![
        real_row("mean", m.mean),
        real_row("variance", m.variance),
        real_row("skewness", m.skewness()),
        real_row("excess", m.excess()),
        real_row("median", d.median()),
    ]
}

fn distribution_rows(d: &StateDistribution<Rational>) -> Vec<(String, String)> {
    d.probabilities().iter().enumerate().map(|(k, p)| rat_row(&format!("P({k})"), p)).collect()
}

/// Scenarios: the compiled-in suite plus the optional file.
pub fn scenarios(extra: Option<&PathBuf>) -> Res<Vec<Scenario>> {
    let mut all = registry::builtin();
    if let Some(path) = extra {
        let mut ids: BTreeSet<String> = all.iter().map(|s| s.id.clone()).collect();
        for s in scenario_file::load(path)? {
            if !ids.insert(s.id.clone()) {
                return Err(UsageError(format!("duplicate scenario id `{}`", s.id)));
            }
            all.push(s);
        }
    }
    Ok(all)
}

struct Env {
    ctx: Ctx,
    lanes: usize,
    timing: bool,
    extra: Option<PathBuf>,
}

impl Env {
    fn suite(&self, keep: impl Fn(&Scenario) -> bool) -> Res<Output> {
        let all = scenarios(self.extra.as_ref())?;
        let chosen: Vec<Scenario> = all.into_iter().filter(|s| keep(s)).collect();
        let ctx = Ctx { lanes: 1, ..self.ctx };
        Ok(Output::Suite(run_all(&chosen, &ctx, self.lanes, self.timing)))
    }

    fn sections(&self, names: &[&str]) -> Res<Output> {
        self.suite(|s| names.contains(&s.section.as_str()))
    }

    fn reps(&self, default: u64) -> u64 {
        self.ctx.reps_or(default)
    }
}

pub fn run(cli: Cli) -> Res<Output> {
    let lanes = cli.threads.map_or_else(parallel::default_lanes, |t| t as usize);
    let env = Env { ctx: Ctx { seed: cli.seed, reps: cli.reps, lanes }, lanes, timing: cli.timing, extra: cli.scenarios };
    match cli.command {
        Command::Classic { op } => classic(&env, op),
        Command::Dist { op } => dist(&env, op),
        Command::Limit { op } => limit(&env, op),
        Command::Mc { op } => mc(&env, op),
        Command::Markov { op } => markov(&env, op),
        Command::Fit { op } => fit(&env, op),
        Command::ReproduceAll { ids, kind } => {
            let known: BTreeSet<String> = scenarios(env.extra.as_ref())?.into_iter().map(|s| s.id).collect();
            if let Some(missing) = ids.iter().find(|id| !known.contains(*id)) {
                return Err(UsageError(format!("unknown scenario id `{missing}`")));
            }
            env.suite(|s| (ids.is_empty() || ids.contains(&s.id)) && kind.map_or(true, |k| k == s.kind))
        }
        Command::Table { what, out } => {
            let text = table(what)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
                    Ok(Output::Csv(String::new()))
                }
                None => Ok(Output::Csv(text)),
            }
        }
    }
}

fn classic(env: &Env, op: ClassicOp) -> Res<Output> {
    Ok(match op {
        ClassicOp::Suite => return env.sections(&[registry::COMBINATORICS]),
        ClassicOp::Classical { favourable, total } => {
            values("classical", vec![rat_row("probability", &classical_probability(favourable, total)?)])
        }
        ClassicOp::Dice { dice, faces, sum } => {
            let ways = dice_sum_count(dice, faces, sum)?;
            let total = rational::biguint_pow(&(faces as u64).into(), dice as u64);
            let p = from_biguint(ways.clone()) / from_biguint(total.clone());
            values("dice", vec![("ways".into(), format!("{ways} of {total}")), rat_row("probability", &p)])
        }
        ClassicOp::Points { needed_a, needed_b, p } => {
            let a = points_division(needed_a, needed_b, &p)?;
            let b = Rational::from_integer(1.into()) - &a;
            values("points", vec![rat_row("share_a", &a), rat_row("share_b", &b)])
        }
        ClassicOp::Ruin { counters_a, counters_b, p_a, p_b } => {
            let (a, b) = ruin_chances(counters_a, counters_b, &p_a, &p_b)?;
            let mut rows = vec![rat_row("a_wins", &a), rat_row("b_wins", &b)];
            if b != Rational::from_integer(0.into()) {
                rows.push(rat_row("ratio", &(&a / &b)));
            }
            values("ruin", rows)
        }
        ClassicOp::Huygens { population, marked, draws, drawn } => {
            values("huygens", vec![rat_row("probability", &huygens_draw(population, marked, draws, drawn)?)])
        }
        ClassicOp::DeMere => {
            let (four, twenty_four) = de_mere();
            let diff = &four - &twenty_four;
            values("de-mere", vec![rat_row("one_six_in_4", &four), rat_row("double_six_in_24", &twenty_four), rat_row("difference", &diff)])
        }
        ClassicOp::PoissonUrn { n } => values("poisson-urn", vec![rat_row("probability", &poisson_urn(n)?)]),
        ClassicOp::Bayes { priors, likelihoods } => {
            let sys = match priors {
                Some(p) => CauseSystem::new(p.0, likelihoods.0)?,
                None => CauseSystem::uniform(likelihoods.0)?,
            };
            let mut rows = vec![rat_row("total", &total_probability(&sys))];
            for (i, p) in bayes_posteriors(&sys)?.iter().enumerate() {
                rows.push(rat_row(&format!("posterior{}", i + 1), p));
            }
            values("bayes", rows)
        }
    })
}

fn dist(env: &Env, op: DistOp) -> Res<Output> {
    Ok(match op {
        DistOp::Suite => return env.sections(&[registry::DISTRIBUTIONS, registry::TRANSFORMS]),
        DistOp::Moments { law } => values("moments", law_rows(&law.0)),
        DistOp::Cdf { law, x } => values("cdf", vec![real_row("cdf", law.0.cdf(x))]),
        DistOp::Quantile { law, p } => values("quantile", vec![real_row("quantile", law.0.quantile(p)?)]),
        DistOp::Mass { law, x } => {
            let exact = matches!(law.0.family(), Family::Binomial { .. } | Family::Hypergeometric { .. });
            if exact && x >= 0.0 && x.fract() == 0.0 {
                values("mass", vec![rat_row("mass", &law.0.exact_mass(x as u64)?)])
            } else {
                let name = if law.0.is_discrete() { "mass" } else { "density" };
                values("mass", vec![real_row(name, law.0.mass_or_density(x)?)])
            }
        }
        DistOp::ProbableError { law } => values("probable-error", vec![real_row("probable_error", probable_error(&law.0))]),
        DistOp::NormalTable { z } => values("normal-table", vec![real_row("value", normal_table_value(z))]),
        DistOp::Chebyshev { sigma, beta } => values("chebyshev", vec![real_row("lower_bound", chebyshev_bound(sigma, beta)?)]),
    })
}

fn limit(env: &Env, op: LimitOp) -> Res<Output> {
    Ok(match op {
        LimitOp::Suite => return env.sections(&[registry::LIMITS]),
        LimitOp::SampleSize { p, eps, delta } => {
            let s = bernoulli_sample_size(&p, &eps, &delta)?;
            values("sample-size", vec![("chebyshev_n".into(), s.chebyshev_n.to_string()), ("exact_n".into(), s.exact_n.to_string())])
        }
        LimitOp::LlnGap { p, n, eps } => {
            let mut rows = vec![real_row("probability", lln_gap(&p, n, &eps)?)];
            if n <= 2000 {
                rows.push(rat_row("exact", &lln_gap_exact(&p, n, &eps)?));
            }
            values("lln-gap", rows)
        }
        LimitOp::DmlLocal { n, p, mu } => values("dml-local", approx_rows(&dml_local(n, &p, mu)?)),
        LimitOp::DmlIntegral { n, p, a, b } => values("dml-integral", approx_rows(&dml_integral(n, &p, a, b)?)),
        LimitOp::NbBound { s } => values("nb-bound", vec![real_row("bound", nb_bound(s)?)]),
        LimitOp::Posterior { successes, misses, lo, hi } => {
            let mass = bayes_posterior_mass(&BetaPosterior::new(successes, misses, lo, hi)?);
            values("posterior", vec![rat_row("mass", &mass)])
        }
        LimitOp::Timerding { successes, misses, a, b } => {
            let t = timerding_limit_check(successes, misses, a, b)?;
            values(
                "timerding",
                vec![real_row("posterior", t.posterior_prob), real_row("normal", t.normal_prob), real_row("abs_err", t.abs_err)],
            )
        }
    })
}

fn mc(env: &Env, op: McOp) -> Res<Output> {
    let ctx = &env.ctx;
    Ok(match op {
        McOp::Suite => return env.sections(&[registry::SIMULATION]),
        McOp::Buffon { half_length, spacing } => {
            let needle = BuffonNeedle::new(half_length, spacing)?;
            let r = parallel::run(&needle, env.reps(1_000_000), &ctx.stream("mc-buffon"), ctx.lanes);
            Output::Sim { sim: SimJson::from(&r.report), rows: vec![real_row("pi_hat", r.pi_hat)] }
        }
        McOp::Bertrand { model } => {
            let r = parallel::run(&BertrandChord(model), env.reps(1_000_000), &ctx.stream("mc-bertrand"), ctx.lanes);
            Output::Sim { sim: SimJson::from(&r), rows: vec![] }
        }
        McOp::Encounter { window, wait } => {
            let r = parallel::run(&Encounter::new(window, wait)?, env.reps(1_000_000), &ctx.stream("mc-encounter"), ctx.lanes);
            Output::Sim { sim: SimJson::from(&r), rows: vec![] }
        }
        McOp::Petersburg { games, batches } => {
            let b = petersburg_batches(games, batches, &ctx.stream("mc-petersburg"))?;
            let (lo, hi) = b.means.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), m| (lo.min(*m), hi.max(*m)));
            values(
                "petersburg",
                vec![
                    ("games".into(), b.games.to_string()),
                    ("batches".into(), b.means.len().to_string()),
                    real_row("median_mean", b.median),
                    real_row("smallest_mean", lo),
                    real_row("largest_mean", hi),
                ],
            )
        }
        McOp::Quincunx { rows } => {
            let q = quincunx(rows, env.reps(100_000), &ctx.stream("mc-quincunx"))?;
            values(
                "quincunx",
                vec![
                    ("shots".into(), q.shots.to_string()),
                    ("histogram".into(), q.histogram.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")),
                    real_row("tv_distance", q.tv_distance),
                ],
            )
        }
        McOp::Frequency { p } => {
            let n = env.reps(100_000);
            let checkpoints: Vec<u64> = std::iter::successors(Some(10u64), |c| c.checked_mul(10)).take_while(|c| *c < n).chain([n]).collect();
            let f = frequency_run(p, n, &checkpoints, &ctx.stream("mc-frequency"))?;
            let mut rows: Vec<(String, String)> = f.points.iter().map(|(k, freq)| real_row(&format!("after {k}"), *freq)).collect();
            rows.push(real_row("final_gap", f.final_gap));
            rows.push(real_row("three_sigma", f.three_sigma));
            values("frequency", rows)
        }
    })
}

fn markov(env: &Env, op: MarkovOp) -> Res<Output> {
    Ok(match op {
        MarkovOp::Suite => return env.sections(&[registry::CHAINS]),
        MarkovOp::Urn { n } => Output::Csv(tables::rational_matrix(&bernoulli_laplace_chain(n)?)?),
        MarkovOp::Evolve { n, r, start } => {
            let chain = bernoulli_laplace_chain(n)?;
            let start = start.unwrap_or(n);
            if start > n {
                return Err(UsageError(format!("start {start} exceeds {n} balls")));
            }
            let law = evolve(&StateDistribution::point_mass(chain.states(), start as usize)?, &chain, r)?;
            let mut rows = distribution_rows(&law);
            rows.push(rat_row("expected_white", &law.mean_index()));
            values("evolve", rows)
        }
        MarkovOp::Stationary { n } => {
            let law = StateDistribution::new(bernoulli_laplace_stationary(n))?;
            values("stationary", distribution_rows(&law))
        }
        MarkovOp::ExpectedWhite { n, r } => {
            values("expected-white", vec![rat_row("exact", &expected_white_exact(n, r)?), real_row("closed_form", expected_white(n, r)?)])
        }
        MarkovOp::ThreeUrn { n, r } => {
            let m = three_urn_expected(n, r)?;
            let colours = ["white", "black", "red"];
            let rows = m
                .iter()
                .enumerate()
                .map(|(u, row)| (format!("urn{}", u + 1), colours.iter().zip(row).map(|(c, x)| format!("{c} {}", render::sig6(*x))).collect::<Vec<_>>().join(", ")))
                .collect();
            values("three-urn", rows)
        }
        MarkovOp::Chain { csv, steps } => {
            let file = std::fs::File::open(&csv).map_err(|e| UsageError(format!("{}: {e}", csv.display())))?;
            let chain = tables::read_rational_matrix(file)?;
            let mut text = tables::rational_matrix(&n_step(&chain, steps))?;
            match stationary(&chain) {
                Ok(law) => {
                    text.push_str("stationary");
                    for p in law.probabilities() {
                        text.push(',');
                        text.push_str(&rational::to_fraction(p));
                    }
                    text.push('\n');
                }
                Err(e) => {
                    let _ = writeln!(std::io::stderr(), "no limiting law: {e}");
                }
            }
            Output::Csv(text)
        }
    })
}

fn read_system(path: &PathBuf) -> Res<classprob_core::estimation::LinearSystem> {
    let file = std::fs::File::open(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    Ok(tables::read_linear_system(file)?)
}

fn fit(env: &Env, op: FitOp) -> Res<Output> {
    Ok(match op {
        FitOp::Suite => return env.sections(&[registry::FITTING]),
        FitOp::Ls { csv } => values("least-squares", fit_rows(&least_squares(&read_system(&csv)?)?)),
        FitOp::Minimax { csv } => values("minimax", fit_rows(&minimax_fit(&read_system(&csv)?)?)),
        FitOp::Pnorm { csv, k } => values("pnorm", fit_rows(&pnorm_fit(&read_system(&csv)?, k)?)),
        FitOp::Mean { values: xs, coverage } => {
            let s = Sample::new(xs)?;
            let m = mean_with_error(&s)?;
            let ci = confidence_interval(&s, coverage)?;
            values(
                "mean",
                vec![
                    real_row("mean", m.mean),
                    real_row("mean_square_error", m.mean_square_error),
                    real_row("low", ci.low),
                    real_row("high", ci.high),
                    real_row("z", ci.z),
                ],
            )
        }
    })
}

fn table(what: TableOp) -> Res<String> {
    Ok(match what {
        TableOp::NormalTable(r) => tables::normal_table(r.from, r.to, r.step)?,
        TableOp::GridDensity { law, half_points } => tables::grid_density(&GridDensity::from_distribution(&law.0, half_points)?)?,
        TableOp::Matrix { n } => tables::rational_matrix(&bernoulli_laplace_chain(n)?)?,
    })
}

/// Parses, runs and prints; returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (format, seed) = (cli.format, cli.seed);
    match run(cli) {
        Ok(output) => {
            let _ = out.write_all(output.render(format, seed).as_bytes());
            output.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (u8, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = main_with(std::iter::once("classprob").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn seeds_in_hex_or_decimal() {
        assert_eq!(parse_seed("0x5EED"), Ok(0x5EED));
        assert_eq!(parse_seed("24301"), Ok(24301));
        assert!(parse_seed("seed").is_err());
    }

    #[test]
    fn laws_parse() {
        assert!(matches!("binomial:10,1/6".parse::<Law>().unwrap().0.family(), Family::Binomial { trials: 10, .. }));
        assert!("normal:0,-1".parse::<Law>().is_err());
        assert!("normal:0".parse::<Law>().unwrap_err().contains("2 parameter"));
        assert!("gamma:1".parse::<Law>().unwrap_err().contains("unknown law"));
        assert!("half-cauchy".parse::<Law>().is_ok());
    }

    #[test]
    fn direct_computations() {
        let (code, out, _) = call(&["classic", "dice", "10"]);
        assert_eq!(code, 0);
        assert!(out.contains("27 of 216"), "{out}");
        let (_, out, _) = call(&["classic", "bayes", "1/3,2/3,3/8"]);
        assert!(out.contains("(16/33)"), "{out}");
        let (_, out, _) = call(&["--format", "json", "dist", "mass", "binomial:4,1/6", "2"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["values"][0]["value"], "0.115741 (25/216)");
        let (_, out, _) = call(&["markov", "evolve", "2", "1"]);
        assert!(out.contains("P(1)") && out.contains("expected_white"), "{out}");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["classic", "points", "0", "0"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["--seed", "x", "classic", "de-mere"]).0, 2);
        assert_eq!(call(&["reproduce-all", "--id", "no-such-thing"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }
}
